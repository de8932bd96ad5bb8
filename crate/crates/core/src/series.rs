//! Truncated formal power series with exact rational coefficients.
//!
//! A [`TruncatedSeries`] of order `d` is an element of `Q[ξ]/(ξ^d)`. The order
//! is carried explicitly and binary operations refuse to mix orders, since an
//! implicit truncation would silently change which denominators appear.
//!
//! The coefficients `a_{p,l}` of `log(1-ξ)^p = Σ_l a_{p,l} ξ^{p+l}` are
//! produced by [`taylor_coefficients_a`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("series has nonzero constant term {0}")]
    NonzeroConstantTerm(Rational),
    #[error("series order must be at least 1")]
    ZeroOrder,
}

/// An element of `Q[ξ]/(ξ^order)`; index `i` holds the coefficient of `ξ^i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TryFrom<Vec<Rational>> for TruncatedSeries {
    type Error = SeriesError;

    fn try_from(coeffs: Vec<Rational>) -> Result<Self, Self::Error> {
        TruncatedSeries::new(coeffs)
    }
}

impl From<TruncatedSeries> for Vec<Rational> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs
    }
}

impl std::fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} mod ξ^{}", self.coeffs, self.order())
    }
}

impl TruncatedSeries {
    /// The order is the number of coefficients supplied.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::ZeroOrder);
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Builds a series from integer coefficients, padding or truncating to `order`.
    pub fn from_integers(order: usize, coeffs: &[i64]) -> Result<Self, SeriesError> {
        if order == 0 {
            return Err(SeriesError::ZeroOrder);
        }
        let mut c: Vec<Rational> = coeffs.iter().take(order).map(|&v| Rational::from(v)).collect();
        c.resize(order, Rational::zero());
        Ok(TruncatedSeries { coeffs: c })
    }

    pub fn zero(order: usize) -> Result<Self, SeriesError> {
        Self::from_integers(order, &[])
    }

    pub fn one(order: usize) -> Result<Self, SeriesError> {
        Self::from_integers(order, &[1])
    }

    /// `coeff · ξ^power`, which is zero when `power >= order`.
    pub fn monomial(order: usize, power: usize, coeff: Rational) -> Result<Self, SeriesError> {
        let mut s = Self::zero(order)?;
        if power < order {
            s.coeffs[power] = coeff;
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated below `ξ^order`.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.order();
        let mut out = vec![Rational::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..d - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `self^p mod ξ^order`, with `s^0 = 1`.
    ///
    /// A leading factor `ξ^v` is split off first so the binary exponentiation
    /// runs at order `order - v·p`; for `log(1-ξ)^p` this keeps the work
    /// proportional to the number of coefficients that survive truncation.
    pub fn pow(&self, p: u32) -> Self {
        let d = self.order();
        if p == 0 {
            return Self::one(d).expect("order >= 1");
        }
        let v = match self.valuation() {
            Some(v) => v,
            None => return Self::zero(d).expect("order >= 1"),
        };
        let shift = v.saturating_mul(p as usize);
        if shift >= d {
            return Self::zero(d).expect("order >= 1");
        }
        let inner_order = d - shift;
        let mut base = TruncatedSeries {
            coeffs: (0..inner_order).map(|i| self.coeff(v + i)).collect(),
        };
        let mut acc = Self::one(inner_order).expect("order >= 1");
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        let mut coeffs = vec![Rational::zero(); shift];
        coeffs.extend(acc.coeffs);
        TruncatedSeries { coeffs }
    }

    /// `exp(self) = Σ_j self^j / j!`, defined when the constant term vanishes.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.require_zero_constant()?;
        let d = self.order();
        let mut result = Self::one(d)?;
        let mut term = Self::one(d)?;
        for j in 1..d {
            term = term.mul_unchecked(self).scale(&Rational::new(1, j as i64));
            if term.is_zero() {
                break;
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// `outer(inner(ξ)) mod ξ^order` by Horner evaluation in the truncated ring.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        outer.check_order(inner)?;
        inner.require_zero_constant()?;
        let d = outer.order();
        let mut acc = Self::monomial(d, 0, outer.coeffs[d - 1].clone())?;
        for c in outer.coeffs[..d - 1].iter().rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    fn require_zero_constant(&self) -> Result<(), SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(self.coeffs[0].clone()));
        }
        Ok(())
    }

    /// Returns a copy at a different order, truncating or zero-padding.
    pub fn with_order(&self, order: usize) -> Result<Self, SeriesError> {
        if order == 0 {
            return Err(SeriesError::ZeroOrder);
        }
        Ok(TruncatedSeries {
            coeffs: (0..order).map(|i| self.coeff(i)).collect(),
        })
    }
}

pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.add(b)
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.mul(b)
}

pub fn series_pow(s: &TruncatedSeries, p: u32) -> TruncatedSeries {
    s.pow(p)
}

pub fn exp_series(s: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    s.exp()
}

pub fn compose(outer: &TruncatedSeries, inner: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    TruncatedSeries::compose(outer, inner)
}

/// Mercator series `log(1-ξ) = -Σ_{j>=1} ξ^j / j` truncated at `order`.
pub fn log_one_minus(order: usize) -> Result<TruncatedSeries, SeriesError> {
    if order == 0 {
        return Err(SeriesError::ZeroOrder);
    }
    let coeffs = (0..order)
        .map(|j| {
            if j == 0 {
                Rational::zero()
            } else {
                Rational::new(-1, j as i64)
            }
        })
        .collect();
    Ok(TruncatedSeries { coeffs })
}

/// `[a_{p,0}, ..., a_{p,kappa}]` where `log(1-ξ)^p = Σ_l a_{p,l} ξ^{p+l}`.
///
/// Panics if `p == 0`.
pub fn taylor_coefficients_a(p: u32, kappa: usize) -> Vec<Rational> {
    taylor_coefficients_a_at_order(p, kappa, p as usize + kappa + 1)
}

/// Same as [`taylor_coefficients_a`] but with an explicit working order,
/// which must be at least `p + kappa + 1`.
pub fn taylor_coefficients_a_at_order(p: u32, kappa: usize, order: usize) -> Vec<Rational> {
    assert!(p >= 1, "taylor coefficients need p >= 1");
    let p_us = p as usize;
    assert!(
        order > p_us + kappa,
        "working order {order} too small for p={p}, kappa={kappa}"
    );
    let powered = log_one_minus(order).expect("order >= 1").pow(p);
    (0..=kappa).map(|l| powered.coeff(p_us + l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn series(c: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(c.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    /// Full polynomial product, then truncation.
    fn naive_product(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
        let mut full = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                full[i + j] = &full[i + j] + &(x * y);
            }
        }
        full.resize(order.max(full.len()), Rational::zero());
        full.truncate(order);
        full
    }

    #[test]
    fn add_examples() {
        let a = TruncatedSeries::from_integers(2, &[1, 1]).unwrap();
        let z = TruncatedSeries::zero(2).unwrap();
        assert_eq!(series_add(&a, &z).unwrap(), a);
        let h = series(&[(0, 1), (1, 2)]);
        assert_eq!(series_add(&h, &h).unwrap(), series(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = TruncatedSeries::one(3).unwrap();
        let b = TruncatedSeries::one(4).unwrap();
        assert_eq!(
            series_add(&a, &b),
            Err(SeriesError::OrderMismatch { left: 3, right: 4 })
        );
        assert!(series_mul(&a, &b).is_err());
        assert!(compose(&a, &TruncatedSeries::zero(4).unwrap()).is_err());
        assert_eq!(TruncatedSeries::new(vec![]), Err(SeriesError::ZeroOrder));
    }

    #[test]
    fn mul_examples() {
        let a = TruncatedSeries::from_integers(3, &[1, 1]).unwrap();
        let b = TruncatedSeries::from_integers(3, &[1, -1]).unwrap();
        assert_eq!(
            series_mul(&a, &b).unwrap(),
            TruncatedSeries::from_integers(3, &[1, 0, -1]).unwrap()
        );
        let s = series(&[(1, 3), (-2, 5), (7, 1)]);
        assert_eq!(series_mul(&s, &TruncatedSeries::one(3).unwrap()).unwrap(), s);
    }

    #[test]
    fn pow_examples() {
        let s = series(&[(2, 3), (1, 1), (-1, 7), (5, 2)]);
        assert_eq!(series_pow(&s, 0), TruncatedSeries::one(4).unwrap());
        let x = TruncatedSeries::monomial(4, 1, Rational::one()).unwrap();
        assert_eq!(
            series_pow(&x, 2),
            TruncatedSeries::monomial(4, 2, Rational::one()).unwrap()
        );
        let sss = s.mul(&s).unwrap().mul(&s).unwrap();
        assert_eq!(series_pow(&s, 3), sss);
        // valuation shift beyond the order
        assert!(series_pow(&x, 5).is_zero());
    }

    #[test]
    fn log_examples() {
        let l = log_one_minus(4).unwrap();
        assert_eq!(l.coeffs(), &[r(0, 1), r(-1, 1), r(-1, 2), r(-1, 3)]);
        assert_eq!(log_one_minus(1).unwrap().coeffs(), &[Rational::zero()]);
        let e = exp_series(&log_one_minus(8).unwrap()).unwrap();
        assert_eq!(e, TruncatedSeries::from_integers(8, &[1, -1]).unwrap());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            exp_series(&TruncatedSeries::zero(5).unwrap()).unwrap(),
            TruncatedSeries::one(5).unwrap()
        );
        let x = TruncatedSeries::monomial(4, 1, Rational::one()).unwrap();
        assert_eq!(exp_series(&x).unwrap(), series(&[(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert!(matches!(
            exp_series(&TruncatedSeries::one(3).unwrap()),
            Err(SeriesError::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn exp_functional_equation() {
        let a = series(&[(0, 1), (1, 2), (-3, 1), (2, 7), (1, 1), (0, 1)]);
        let b = series(&[(0, 1), (-1, 3), (0, 1), (5, 4), (-1, 1), (2, 1)]);
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_examples() {
        let s = series(&[(3, 1), (1, 2), (-2, 3), (4, 1)]);
        let x = TruncatedSeries::monomial(4, 1, Rational::one()).unwrap();
        assert_eq!(compose(&s, &x).unwrap(), s);
        assert_eq!(
            compose(&s, &TruncatedSeries::zero(4).unwrap()).unwrap(),
            TruncatedSeries::monomial(4, 0, r(3, 1)).unwrap()
        );
        // Naive substitution: (ξ + ξ²)² = ξ² + 2ξ³ + ξ⁴, truncated below ξ⁴.
        let sq = TruncatedSeries::monomial(4, 2, Rational::one()).unwrap();
        let inner = TruncatedSeries::from_integers(4, &[0, 1, 1]).unwrap();
        let naive = naive_product(&[r(0, 1), r(1, 1), r(1, 1)], &[r(0, 1), r(1, 1), r(1, 1)], 4);
        let got = compose(&sq, &inner).unwrap();
        assert_eq!(got.coeffs(), naive.as_slice());
        assert_eq!(got, TruncatedSeries::from_integers(4, &[0, 0, 1, 2]).unwrap());
        assert!(compose(&s, &TruncatedSeries::one(4).unwrap()).is_err());
    }

    /// Brute-force oracle: multiply the Mercator coefficients `p` times by
    /// plain convolution, with no valuation shortcut.
    fn brute_a(p: u32, kappa: usize) -> Vec<Rational> {
        let order = p as usize + kappa + 1;
        let log: Vec<Rational> = (0..order)
            .map(|j| if j == 0 { Rational::zero() } else { r(-1, j as i64) })
            .collect();
        let mut acc = vec![Rational::zero(); order];
        acc[0] = Rational::one();
        for _ in 0..p {
            acc = naive_product(&acc, &log, order);
        }
        acc[p as usize..].to_vec()
    }

    #[test]
    fn taylor_coefficient_examples() {
        assert_eq!(brute_a(1, 2), vec![r(-1, 1), r(-1, 2), r(-1, 3)]);
        assert_eq!(taylor_coefficients_a(1, 2), brute_a(1, 2));
        assert_eq!(brute_a(2, 2), vec![r(1, 1), r(1, 1), r(11, 12)]);
        assert_eq!(taylor_coefficients_a(2, 2), brute_a(2, 2));
        for p in 1..=6u32 {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            assert_eq!(taylor_coefficients_a(p, 0), vec![Rational::from(sign)]);
        }
        for p in 1..=7u32 {
            assert_eq!(taylor_coefficients_a(p, 5), brute_a(p, 5), "p={p}");
        }
    }

    #[test]
    fn a_one_l_is_harmonic() {
        let a = taylor_coefficients_a(1, 30);
        for (l, v) in a.iter().enumerate() {
            assert_eq!(v, &r(-1, l as i64 + 1));
        }
    }

    #[test]
    fn working_order_independence() {
        for p in 1..=5u32 {
            for kappa in 0..=4 {
                let base = taylor_coefficients_a(p, kappa);
                for extra in [0, 1, 5, 13] {
                    let order = p as usize + kappa + 1 + extra;
                    assert_eq!(taylor_coefficients_a_at_order(p, kappa, order), base);
                }
            }
        }
    }

    #[test]
    fn exp_log_identity_up_to_32() {
        for d in 1..=32 {
            let mut expected = vec![0i64; d];
            expected[0] = 1;
            if d > 1 {
                expected[1] = -1;
            }
            let e = log_one_minus(d).unwrap().exp().unwrap();
            assert_eq!(e, TruncatedSeries::from_integers(d, &expected).unwrap(), "d={d}");
        }
    }

    #[test]
    fn serde_form() {
        let s = series(&[(0, 1), (-1, 1), (-1, 2)]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["0","-1","-1/2"]"#);
        let back: TruncatedSeries = serde_json::from_str(r#"["0","-1","-1/2"]"#).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TruncatedSeries>("[]").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-100i64..=100, 1i64..=100).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
        (1usize..=16).prop_flat_map(|d| {
            (
                prop::collection::vec(arb_rational(), d),
                prop::collection::vec(arb_rational(), d),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_matches_naive_product((a, b) in arb_pair()) {
            let d = a.len();
            let got = series_mul(&TruncatedSeries::new(a.clone()).unwrap(), &TruncatedSeries::new(b.clone()).unwrap()).unwrap();
            let expected = naive_product(&a, &b, d);
            prop_assert_eq!(got.coeffs(), expected.as_slice());
            for c in got.coeffs() {
                prop_assert!(c.denom() > &num_bigint::BigInt::from(0));
            }
        }

        #[test]
        fn add_matches_naive_loop((a, b) in arb_pair()) {
            let got = series_add(&TruncatedSeries::new(a.clone()).unwrap(), &TruncatedSeries::new(b.clone()).unwrap()).unwrap();
            let mut naive = Vec::new();
            for i in 0..a.len() {
                naive.push(&a[i] + &b[i]);
            }
            prop_assert_eq!(got.coeffs(), naive.as_slice());
        }

        #[test]
        fn pow_matches_repeated_mul((a, _) in arb_pair(), p in 0u32..6) {
            let s = TruncatedSeries::new(a).unwrap();
            let mut acc = TruncatedSeries::one(s.order()).unwrap();
            for _ in 0..p {
                acc = acc.mul(&s).unwrap();
            }
            prop_assert_eq!(series_pow(&s, p), acc);
        }
    }
}
