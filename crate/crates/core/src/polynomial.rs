//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `coefficients()[d]` is the coefficient of `x^d`. The leading coefficient
/// is nonzero unless the polynomial is zero, which has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Coefficient>", try_from = "Vec<Coefficient>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `x - root`.
    pub fn linear(root: i64) -> Self {
        Self::from_i64s(&[-root, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn evaluate_i64(&self, x: i64) -> BigInt {
        self.evaluate(&BigInt::from(x))
    }

    /// `p'(0)`, i.e. the linear coefficient.
    pub fn derivative_at_zero(&self) -> BigInt {
        self.coefficient(1)
    }

    /// Whether the coefficients alternate in sign, as those of a chromatic
    /// polynomial do: `(-1)^(deg - d) c_d >= 0` for every `d`.
    pub fn has_alternating_signs(&self) -> bool {
        let Some(deg) = self.degree() else {
            return true;
        };
        self.coeffs.iter().enumerate().all(|(d, c)| {
            if (deg - d) % 2 == 0 {
                !c.is_negative()
            } else {
                !c.is_positive()
            }
        })
    }

    /// Whether `|c_d|^2 >= |c_{d-1}| |c_{d+1}|` for every interior `d`.
    pub fn has_log_concave_magnitudes(&self) -> bool {
        let a: Vec<BigInt> = self.coeffs.iter().map(|c| c.abs()).collect();
        a.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.try_into().ok()).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|d| self.coefficient(d) + rhs.coefficient(d)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|d| self.coefficient(d) - rhs.coefficient(d)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = d == 0 || !mag.is_one();
            match (show_mag, d) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}x")?,
                (true, _) => write!(f, "{mag}x^{d}")?,
                (false, 1) => write!(f, "x")?,
                (false, _) => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Serialized form of one coefficient: a JSON integer when it fits in `i64`,
/// a decimal string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Coefficient {
    fn from(c: &BigInt) -> Self {
        match i64::try_from(c) {
            Ok(small) => Coefficient::Small(small),
            Err(_) => Coefficient::Big(c.to_string()),
        }
    }
}

impl TryFrom<Coefficient> for BigInt {
    type Error = String;
    fn try_from(c: Coefficient) -> Result<Self, String> {
        match c {
            Coefficient::Small(x) => Ok(BigInt::from(x)),
            Coefficient::Big(s) => s.parse::<BigInt>().map_err(|e| format!("{s:?}: {e}")),
        }
    }
}

impl From<IntPolynomial> for Vec<Coefficient> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(Coefficient::from).collect()
    }
}

impl TryFrom<Vec<Coefficient>> for IntPolynomial {
    type Error = String;
    fn try_from(v: Vec<Coefficient>) -> Result<Self, String> {
        v.into_iter()
            .map(BigInt::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map(IntPolynomial::new)
    }
}

/// `#[serde(with = ...)]` adapter for a single `BigInt`, in the same format
/// as polynomial coefficients.
pub mod bigint_json {
    use super::Coefficient;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Coefficient::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        BigInt::try_from(Coefficient::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Like [`bigint_json`], for an optional value (`null` when absent).
pub mod opt_bigint_json {
    use super::Coefficient;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(Coefficient::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Coefficient>::deserialize(d)?
            .map(BigInt::try_from)
            .transpose()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flagship_evaluation() {
        let p = IntPolynomial::from_i64s(&[0, -2, 5, -4, 1]);
        assert_eq!(p.evaluate_i64(-1), BigInt::from(12));
        assert_eq!(p.to_string(), "x^4 - 4x^3 + 5x^2 - 2x");
        assert!(p.is_monic() && p.has_alternating_signs());
    }

    #[test]
    fn monomial_at_negative_integers() {
        for n in 0..6usize {
            for k in 0..5i64 {
                assert_eq!(
                    IntPolynomial::monomial(n).evaluate_i64(-k),
                    BigInt::from(-k).pow(n as u32)
                );
            }
        }
    }

    #[test]
    fn derivative_at_zero_is_linear_coefficient() {
        let p = IntPolynomial::from_i64s(&[0, 2, -3, 1]);
        assert_eq!(p.derivative_at_zero(), BigInt::from(2));
    }

    #[test]
    fn arithmetic_and_trimming() {
        let a = IntPolynomial::linear(1);
        let b = IntPolynomial::linear(2);
        let prod = &a * &b;
        assert_eq!(prod, IntPolynomial::from_i64s(&[2, -3, 1]));
        assert_eq!(&prod - &prod, IntPolynomial::zero());
        assert_eq!(IntPolynomial::from_i64s(&[1, 0, 0]).degree(), Some(0));
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(-&a, IntPolynomial::from_i64s(&[1, -1]));
        assert_eq!(&a + &b, IntPolynomial::from_i64s(&[-3, 2]));
    }

    #[test]
    fn serde_small_and_big_coefficients() {
        let p = IntPolynomial::from_i64s(&[0, -2, 5, -4, 1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[0,-2,5,-4,1]");
        assert_eq!(serde_json::from_str::<IntPolynomial>(&s).unwrap(), p);

        let big = IntPolynomial::new(vec![BigInt::from(i64::MAX) * 4, BigInt::one()]);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, r#"["36893488147419103228",1]"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&s).unwrap(), big);
    }
}
