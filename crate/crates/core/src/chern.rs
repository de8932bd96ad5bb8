//! K-theory and rational cohomology of `CP^{d-1}` and the Chern character.
//!
//! `K(CP^{d-1}) = Z[ξ]/(ξ^d)` and `H*(CP^{d-1}; Q) = Q[x]/(x^d)`. The Chern
//! character sends `ξ` to `1 - exp(x)`; it is injective and becomes an
//! isomorphism after tensoring with `Q`. Only the inverse on monomials
//! `n·x^p` is implemented, which is `n·log(1-ξ)^p`.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{big_int_serde, lcm_of_denominators, Rational};
use crate::series::{log_one_minus, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("truncation modulus d must be positive")]
    ZeroModulus,
    #[error("monomial degree p={p} outside 1..={max} for d={d}", max = .d - 1)]
    DegreeOutOfRange { p: usize, d: usize },
    #[error("classes live in different rings (d={left} vs d={right})")]
    ModulusMismatch { left: usize, right: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// An element `Σ b_l ξ^l` of `Z[ξ]/(ξ^d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KClassRepr", into = "KClassRepr")]
pub struct KClass {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct KClassRepr(#[serde(with = "big_int_serde::vec")] Vec<BigInt>);

impl TryFrom<KClassRepr> for KClass {
    type Error = ChernError;
    fn try_from(r: KClassRepr) -> Result<Self, ChernError> {
        KClass::new(r.0)
    }
}

impl From<KClass> for KClassRepr {
    fn from(k: KClass) -> Self {
        KClassRepr(k.coeffs)
    }
}

impl KClass {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, ChernError> {
        if coeffs.is_empty() {
            return Err(ChernError::ZeroModulus);
        }
        Ok(KClass { coeffs })
    }

    pub fn from_i64(d: usize, coeffs: &[i64]) -> Result<Self, ChernError> {
        if d == 0 {
            return Err(ChernError::ZeroModulus);
        }
        let mut c: Vec<BigInt> = coeffs.iter().take(d).map(|&v| BigInt::from(v)).collect();
        c.resize(d, BigInt::from(0));
        Ok(KClass { coeffs: c })
    }

    /// `ξ^power` in `Z[ξ]/(ξ^d)`.
    pub fn xi_power(d: usize, power: usize) -> Result<Self, ChernError> {
        let mut k = Self::from_i64(d, &[])?;
        if power < d {
            k.coeffs[power] = BigInt::from(1);
        }
        Ok(k)
    }

    /// The integral class with the same coefficients, if every coefficient
    /// of `s` is an integer.
    pub fn from_integral_series(s: &TruncatedSeries) -> Option<Self> {
        if !s.is_integral() {
            return None;
        }
        Some(KClass {
            coeffs: s.coeffs().iter().map(|c| c.numer().clone()).collect(),
        })
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().cloned().map(Rational::from).collect()).expect("d >= 1")
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChernError> {
        self.check(other)?;
        Ok(KClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ChernError> {
        self.check(other)?;
        let d = self.d();
        let mut out = vec![BigInt::from(0); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs[..d - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(KClass { coeffs: out })
    }

    fn check(&self, other: &Self) -> Result<(), ChernError> {
        if self.d() != other.d() {
            return Err(ChernError::ModulusMismatch {
                left: self.d(),
                right: other.d(),
            });
        }
        Ok(())
    }
}

/// An element `Σ q_l x^l` of `Q[x]/(x^d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HClass {
    series: TruncatedSeries,
}

impl HClass {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, ChernError> {
        Ok(HClass {
            series: TruncatedSeries::new(coeffs)?,
        })
    }

    /// `n·x^p` in `Q[x]/(x^d)`.
    pub fn monomial(n: impl Into<BigInt>, p: usize, d: usize) -> Result<Self, ChernError> {
        if d == 0 {
            return Err(ChernError::ZeroModulus);
        }
        Ok(HClass {
            series: TruncatedSeries::monomial(d, p, Rational::from_integer(n.into()))?,
        })
    }

    pub fn d(&self) -> usize {
        self.series.order()
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.series.coeffs()
    }

    pub fn as_series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChernError> {
        Ok(HClass {
            series: self.series.add(&other.series)?,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ChernError> {
        Ok(HClass {
            series: self.series.mul(&other.series)?,
        })
    }
}

/// `1 - exp(x) mod x^d`, the image of `ξ`.
fn chern_image_of_xi(d: usize) -> TruncatedSeries {
    let x = TruncatedSeries::monomial(d, 1, Rational::one()).expect("d >= 1");
    let e = x.exp().expect("x has zero constant term");
    TruncatedSeries::one(d).expect("d >= 1").sub(&e).expect("same order")
}

/// Substitutes `ξ = 1 - exp(x)` into `e`.
pub fn chern_character(e: &KClass) -> HClass {
    let image = chern_image_of_xi(e.d());
    let series = TruncatedSeries::compose(&e.to_series(), &image).expect("same order, zero constant");
    HClass { series }
}

fn check_monomial_degree(p: usize, d: usize) -> Result<(), ChernError> {
    if d == 0 {
        return Err(ChernError::ZeroModulus);
    }
    if p == 0 || p >= d {
        return Err(ChernError::DegreeOutOfRange { p, d });
    }
    Ok(())
}

/// `n·log(1-ξ)^p mod ξ^d`, the unique rational ξ-series whose Chern
/// character is `n·x^p`.
pub fn chern_character_inverse_monomial(
    n: impl Into<BigInt>,
    p: usize,
    d: usize,
) -> Result<TruncatedSeries, ChernError> {
    check_monomial_degree(p, d)?;
    let log_pow = log_one_minus(d)?.pow(p as u32);
    Ok(log_pow.scale(&Rational::from_integer(n.into())))
}

/// Smallest `n >= 1` with `n·log(1-ξ)^p` integral mod `ξ^d`: the lcm of the
/// denominators of `a_{p,0}, ..., a_{p,d-1-p}`.
pub fn minimal_integral_multiplier(p: usize, d: usize) -> Result<BigUint, ChernError> {
    let s = chern_character_inverse_monomial(1, p, d)?;
    Ok(lcm_of_denominators(s.coeffs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn unit_and_generator() {
        let one = KClass::from_i64(5, &[1]).unwrap();
        assert_eq!(chern_character(&one), HClass::monomial(1, 0, 5).unwrap());
        let xi = KClass::xi_power(3, 1).unwrap();
        assert_eq!(chern_character(&xi).coeffs(), &[r(0, 1), r(-1, 1), r(-1, 2)]);
    }

    #[test]
    fn multiplicative_on_xi_squared() {
        let xi = KClass::xi_power(6, 1).unwrap();
        let lhs = chern_character(&xi.mul(&xi).unwrap());
        let c = chern_character(&xi);
        // independent multiplication of the images via plain convolution
        let mut prod = vec![Rational::zero(); 6];
        for i in 0..6 {
            for j in 0..6 - i {
                prod[i + j] = &prod[i + j] + &(&c.coeffs()[i] * &c.coeffs()[j]);
            }
        }
        assert_eq!(lhs.coeffs(), prod.as_slice());
    }

    #[test]
    fn inverse_monomial_examples() {
        assert!(chern_character_inverse_monomial(0, 2, 6).unwrap().is_zero());
        let s = chern_character_inverse_monomial(1, 1, 4).unwrap();
        assert_eq!(s.coeffs(), &[r(0, 1), r(-1, 1), r(-1, 2), r(-1, 3)]);
        assert_eq!(s, log_one_minus(4).unwrap());
        assert!(matches!(
            chern_character_inverse_monomial(1, 0, 4),
            Err(ChernError::DegreeOutOfRange { .. })
        ));
        assert!(matches!(
            chern_character_inverse_monomial(1, 4, 4),
            Err(ChernError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn inverse_roundtrip_when_integral() {
        for d in 2..=10usize {
            for p in 1..d {
                let n = minimal_integral_multiplier(p, d).unwrap();
                let n = BigInt::from(n);
                let s = chern_character_inverse_monomial(n.clone(), p, d).unwrap();
                let k = KClass::from_integral_series(&s).expect("scaled by minimal multiplier");
                assert_eq!(chern_character(&k), HClass::monomial(n, p, d).unwrap(), "p={p} d={d}");
            }
        }
    }

    /// Tries n = 1, 2, 3, ... until n·log(1-ξ)^p is integral; the series is
    /// built by repeated multiplication of the Mercator coefficients.
    fn brute_multiplier(p: usize, d: usize) -> u64 {
        let log = log_one_minus(d).unwrap();
        let mut s = TruncatedSeries::one(d).unwrap();
        for _ in 0..p {
            s = s.mul(&log).unwrap();
        }
        (1u64..)
            .find(|&n| s.scale(&Rational::from(n as i64)).is_integral())
            .unwrap()
    }

    #[test]
    fn multiplier_examples() {
        for d in 2..=9 {
            assert_eq!(minimal_integral_multiplier(d - 1, d).unwrap(), BigUint::from(1u32));
        }
        assert_eq!(brute_multiplier(1, 4), 6);
        assert_eq!(minimal_integral_multiplier(1, 4).unwrap(), BigUint::from(6u32));
        assert_eq!(brute_multiplier(2, 5), 12);
        assert_eq!(minimal_integral_multiplier(2, 5).unwrap(), BigUint::from(12u32));
    }

    #[test]
    fn multiplier_matches_brute_force() {
        for p in 1..=6 {
            for d in (p + 1)..=12 {
                assert_eq!(
                    minimal_integral_multiplier(p, d).unwrap(),
                    BigUint::from(brute_multiplier(p, d)),
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn serde_forms() {
        let k = KClass::from_i64(3, &[1, -2, 0]).unwrap();
        assert_eq!(serde_json::to_string(&k).unwrap(), "[1,-2,0]");
        let back: KClass = serde_json::from_str("[1,-2,0]").unwrap();
        assert_eq!(back, k);
        let h = chern_character(&KClass::xi_power(3, 1).unwrap());
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"["0","-1","-1/2"]"#);
    }

    fn arb_kclass(d: usize) -> impl Strategy<Value = KClass> {
        prop::collection::vec(-20i64..=20, d).prop_map(move |v| KClass::from_i64(d, &v).unwrap())
    }

    fn arb_kpair() -> impl Strategy<Value = (KClass, KClass)> {
        (1usize..=8).prop_flat_map(|d| (arb_kclass(d), arb_kclass(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn chern_is_ring_homomorphism((a, b) in arb_kpair()) {
            let sum = chern_character(&a.add(&b).unwrap());
            prop_assert_eq!(sum, chern_character(&a).add(&chern_character(&b)).unwrap());
            let prod = chern_character(&a.mul(&b).unwrap());
            prop_assert_eq!(prod, chern_character(&a).mul(&chern_character(&b)).unwrap());
        }
    }
}
