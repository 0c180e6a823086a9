pub mod arrangement;
pub mod chromatic;
pub mod critical;
pub mod digraph_poly;
pub mod error;
pub mod graph;
pub mod lp;
pub mod moduli;
pub mod orientation;
pub mod polynomial;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/chromatic.md")]
    mod chromatic {}
    #[doc = include_str!("../../../book/src/orientations.md")]
    mod orientations {}
    #[doc = include_str!("../../../book/src/arrangement.md")]
    mod arrangement {}
    #[doc = include_str!("../../../book/src/critical.md")]
    mod critical {}
    #[doc = include_str!("../../../book/src/moduli.md")]
    mod moduli {}
    #[doc = include_str!("../../../book/src/digraphs.md")]
    mod digraphs {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
