//! The surplus condition for Kapranov degrees.
//!
//! A product `prod_k pi_{S_k}^* psi_{i_k}` integrates to something nonzero
//! iff every nonempty family `K` of constraints has `|union S_k| >= |K| + 3`.
//! Checking all `2^n` families is fine for small systems. For larger ones we
//! use an equivalent matching test: the condition holds iff, for every three
//! markings `T`, the sets `S_k - T` have a system of distinct
//! representatives. (If some `K` is short, take `T` inside its union and Hall
//! fails; conversely a short Hall family for some `T` is short by at least
//! three more once `T` is put back.)

use serde::{Deserialize, Serialize};

use super::stratum::MarkingSet;
use crate::error::{Error, Result};

/// One factor `pi_S^* psi_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub set: MarkingSet,
    pub point: u32,
}

impl Constraint {
    pub fn new(set: MarkingSet, point: u32) -> Result<Self> {
        let c = Constraint { set, point };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.set.contains(self.point) {
            return Err(Error::InvalidMarking(format!(
                "{} is not in its set {}",
                self.point, self.set
            )));
        }
        if self.set.len() < 3 {
            return Err(Error::InvalidMarking(format!(
                "constraint set {} has fewer than three markings",
                self.set
            )));
        }
        Ok(())
    }
}

/// Up to this many constraints the families are enumerated directly.
const BRUTE_FORCE_LIMIT: usize = 16;

/// Whether every nonempty family of constraints covers at least three more
/// markings than it has members. False means the Kapranov degree is zero.
pub fn cerberus_check(constraints: &[Constraint]) -> Result<bool> {
    for c in constraints {
        c.validate()?;
    }
    let sets: Vec<u64> = constraints.iter().map(|c| c.set.bits()).collect();
    Ok(if sets.len() <= BRUTE_FORCE_LIMIT {
        by_families(&sets)
    } else {
        by_matchings(&sets)
    })
}

pub(crate) fn by_families(sets: &[u64]) -> bool {
    (1u64..1 << sets.len()).all(|fam| {
        let union = sets
            .iter()
            .enumerate()
            .filter(|(k, _)| fam >> k & 1 == 1)
            .fold(0u64, |a, (_, &s)| a | s);
        union.count_ones() >= fam.count_ones() + 3
    })
}

pub(crate) fn by_matchings(sets: &[u64]) -> bool {
    let universe = sets.iter().fold(0u64, |a, &s| a | s);
    let labels: Vec<u64> = (0..64).map(|l| 1u64 << l).filter(|b| universe & b != 0).collect();
    if sets.is_empty() {
        return true;
    }
    let n = labels.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let avoid = labels[a] | labels[b] | labels[c];
                if !has_transversal(sets, avoid) {
                    return false;
                }
            }
        }
    }
    true
}

/// Distinct representatives for all of `sets`, none of them in `avoid`.
fn has_transversal(sets: &[u64], avoid: u64) -> bool {
    let mut owner: [Option<usize>; 64] = [None; 64];
    fn augment(k: usize, sets: &[u64], avoid: u64, seen: &mut u64, owner: &mut [Option<usize>; 64]) -> bool {
        let mut options = sets[k] & !avoid & !*seen;
        while options != 0 {
            let l = options.trailing_zeros() as usize;
            options &= options - 1;
            *seen |= 1 << l;
            let free = match owner[l] {
                None => true,
                Some(other) => augment(other, sets, avoid, seen, owner),
            };
            if free {
                owner[l] = Some(k);
                return true;
            }
        }
        false
    }
    (0..sets.len()).all(|k| {
        let mut seen = 0u64;
        augment(k, sets, avoid, &mut seen, &mut owner)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(labels: &[u32], point: u32) -> Constraint {
        Constraint::new(MarkingSet::from_labels(labels.iter().copied()).unwrap(), point).unwrap()
    }

    #[test]
    fn examples() {
        let all: Vec<u32> = (0..7).collect();
        let full: Vec<Constraint> = (0..4).map(|i| c(&all, i)).collect();
        assert!(cerberus_check(&full).unwrap());
        assert!(!cerberus_check(&[c(&[0, 1, 2, 3], 0), c(&[0, 1, 2, 3], 1)]).unwrap());
        assert!(cerberus_check(&[]).unwrap());
        assert!(Constraint::new(MarkingSet::from_labels([0, 1]).unwrap(), 0).is_err());
        assert!(Constraint::new(MarkingSet::from_labels([0, 1, 2]).unwrap(), 5).is_err());
    }

    #[test]
    fn matching_test_agrees_with_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = rng.gen_range(4..10u32);
            let k = rng.gen_range(1..=(n - 3) as usize);
            let sets: Vec<u64> = (0..k)
                .map(|_| loop {
                    let s: u64 = rng.gen::<u64>() & ((1 << n) - 1);
                    if s.count_ones() >= 3 {
                        break s;
                    }
                })
                .collect();
            assert_eq!(by_families(&sets), by_matchings(&sets), "{sets:?}");
        }
    }
}
