//! Divisibility of the integer Seiberg-Witten invariant.
//!
//! Two sources of information about `m(d,k)`, the order of the cokernel of
//! the Hurewicz map `π^{2d-2-k}(CP^{d-1}) → H^{2d-2-k}(CP^{d-1})`:
//!
//! * the closed forms for `k <= 4` ([`hurewicz_kernel_order`],
//!   [`hurewicz_cokernel_order`]);
//! * the lower bound from K-theory: `m(d, 2κ)` is divisible by every
//!   denominator of `a_{p,0}, ..., a_{p,κ}` with `p = d - 1 - κ`
//!   ([`sw_divisibility_lower_bound`]).
//!
//! For `k = 4` the two can differ, e.g. `d = 4` gives 6 against 12.

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{big_uint_serde, lcm_of_denominators, Rational};
use crate::series::taylor_coefficients_a;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisibilityError {
    #[error("k={0} is odd; m(d,k) is only defined for even k")]
    OddK(u32),
    #[error("no positive p = d - 1 - k/2 for d={d}, k={k}")]
    NoPositiveP { d: u32, k: u32 },
    #[error("d={0} must be at least 2")]
    DTooSmall(u32),
    #[error("no closed form for the Hurewicz kernel at k={0} (only 0..=4)")]
    KernelUnstated(u32),
    #[error("no closed form for the Hurewicz cokernel at k={0} (only 0, 2, 4)")]
    CokernelUnstated(u32),
    #[error("the k=4 cokernel formula requires d > 2")]
    CokernelExcluded,
    #[error("b_plus={0} must be odd and at least 3")]
    InvalidBPlus(i64),
    #[error("expected dimension k={0} is negative")]
    NegativeK(i64),
    #[error("empty range {d_min}..={d_max}")]
    EmptyRange { d_min: u32, d_max: u32 },
}

/// The K-theoretic lower bound for `m(d,k)` alongside the exact value where known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub d: u32,
    pub k: u32,
    pub p: u32,
    pub kappa: u32,
    pub a_coeffs: Vec<Rational>,
    #[serde(with = "big_uint_serde::vec")]
    pub denominators: Vec<BigUint>,
    #[serde(with = "big_uint_serde")]
    pub lower_bound: BigUint,
    pub lemma_cokernel_order: Option<u64>,
    pub sharp: Option<bool>,
}

impl DivisibilityReport {
    /// True when the lower bound divides the exact cokernel order (vacuous if unknown).
    pub fn bound_divides_lemma(&self) -> bool {
        match self.lemma_cokernel_order {
            Some(m) => (BigUint::from(m) % &self.lower_bound) == BigUint::from(0u32),
            None => true,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Order of the kernel of `h^{2d-2-k}` for `0 <= k <= 4`.
///
/// For odd `d` at `k = 3` the formula is `gcd(24, d-3)/2`; at `d = 3` this
/// uses `gcd(24, 0) = 24` and yields 12.
pub fn hurewicz_kernel_order(d: u32, k: u32) -> Result<u64, DivisibilityError> {
    if d < 2 {
        return Err(DivisibilityError::DTooSmall(d));
    }
    let d64 = d as u64;
    Ok(match k {
        0 | 4 => 1,
        1 | 2 => gcd(2, d64),
        3 => {
            if d64.is_multiple_of(2) {
                gcd(24, d64)
            } else {
                gcd(24, d64 - 3) / 2
            }
        }
        _ => return Err(DivisibilityError::KernelUnstated(k)),
    })
}

/// Order of the cokernel of `h^{2d-2-k}` for `k ∈ {0, 2, 4}`.
pub fn hurewicz_cokernel_order(d: u32, k: u32) -> Result<u64, DivisibilityError> {
    if d < 2 {
        return Err(DivisibilityError::DTooSmall(d));
    }
    let d64 = d as u64;
    match k {
        0 => Ok(1),
        2 => Ok(gcd(2, d64 - 1)),
        4 => {
            if d <= 2 {
                return Err(DivisibilityError::CokernelExcluded);
            }
            let l = hurewicz_kernel_order(d, 3)?;
            let product = if d64.is_multiple_of(2) { 48 } else { 12 };
            debug_assert_eq!(product % l, 0);
            Ok(product / l)
        }
        _ => Err(DivisibilityError::CokernelUnstated(k)),
    }
}

/// `k = 2d - 2p - 2` for `b_plus = 2p + 1`.
pub fn k_from_bplus(d: u32, b_plus: i64) -> Result<u32, DivisibilityError> {
    if b_plus < 3 || b_plus % 2 == 0 {
        return Err(DivisibilityError::InvalidBPlus(b_plus));
    }
    let p = (b_plus - 1) / 2;
    let k = 2 * d as i64 - 2 * p - 2;
    if k < 0 {
        return Err(DivisibilityError::NegativeK(k));
    }
    Ok(k as u32)
}

/// Lower bound for `m(d,k)` from the denominators of `a_{p,0..=κ}`.
pub fn sw_divisibility_lower_bound(d: u32, k: u32) -> Result<DivisibilityReport, DivisibilityError> {
    if k % 2 == 1 {
        return Err(DivisibilityError::OddK(k));
    }
    let kappa = k / 2;
    if d < 2 || d - 1 <= kappa {
        return Err(DivisibilityError::NoPositiveP { d, k });
    }
    let p = d - 1 - kappa;
    let a_coeffs = taylor_coefficients_a(p, kappa as usize);
    let denominators: Vec<BigUint> = a_coeffs.iter().map(Rational::denom_unsigned).collect();
    let lower_bound = lcm_of_denominators(&a_coeffs);
    let lemma_cokernel_order = match k {
        0 | 2 | 4 => hurewicz_cokernel_order(d, k).ok(),
        _ => None,
    };
    let sharp = lemma_cokernel_order.map(|m| BigUint::from(m) == lower_bound);
    Ok(DivisibilityReport {
        d,
        k,
        p,
        kappa,
        a_coeffs,
        denominators,
        lower_bound,
        lemma_cokernel_order,
        sharp,
    })
}

/// Reports for every `d` in range and `k ∈ {2, 4}` with `p >= 1`, ordered by `(d, k)`.
pub fn sharpness_scan(d_min: u32, d_max: u32) -> Result<Vec<DivisibilityReport>, DivisibilityError> {
    if d_min < 2 {
        return Err(DivisibilityError::DTooSmall(d_min));
    }
    if d_min > d_max {
        return Err(DivisibilityError::EmptyRange { d_min, d_max });
    }
    let cases: Vec<(u32, u32)> = (d_min..=d_max)
        .flat_map(|d| [2u32, 4].into_iter().map(move |k| (d, k)))
        .filter(|&(d, k)| d > 1 + k / 2)
        .collect();
    // par_iter().collect() keeps input order
    cases
        .par_iter()
        .map(|&(d, k)| sw_divisibility_lower_bound(d, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn lower_bound_examples() {
        let rep = sw_divisibility_lower_bound(5, 2).unwrap();
        assert_eq!((rep.p, rep.kappa), (3, 1));
        // a_{p,1} = (-1)^p p/2
        assert_eq!(rep.a_coeffs, vec![r(-1, 1), r(-3, 2)]);
        assert_eq!(rep.lower_bound, BigUint::from(2u32));

        let rep = sw_divisibility_lower_bound(4, 0).unwrap();
        assert_eq!(rep.lower_bound, BigUint::from(1u32));
        assert_eq!(rep.sharp, Some(true));

        let rep = sw_divisibility_lower_bound(4, 4).unwrap();
        assert_eq!(rep.p, 1);
        assert_eq!(rep.a_coeffs, vec![r(-1, 1), r(-1, 2), r(-1, 3)]);
        assert_eq!(rep.lower_bound, BigUint::from(6u32));
        assert_eq!(rep.lemma_cokernel_order, Some(12));
        assert_eq!(rep.sharp, Some(false));
    }

    #[test]
    fn lower_bound_errors() {
        assert_eq!(sw_divisibility_lower_bound(5, 3), Err(DivisibilityError::OddK(3)));
        assert_eq!(
            sw_divisibility_lower_bound(3, 4),
            Err(DivisibilityError::NoPositiveP { d: 3, k: 4 })
        );
        assert!(sw_divisibility_lower_bound(1, 0).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(hurewicz_kernel_order(2, 1).unwrap(), 2);
        assert_eq!(hurewicz_kernel_order(4, 3).unwrap(), 4);
        assert_eq!(hurewicz_kernel_order(3, 3).unwrap(), 12);
        assert_eq!(hurewicz_kernel_order(7, 0).unwrap(), 1);
        assert_eq!(hurewicz_kernel_order(7, 4).unwrap(), 1);
        assert_eq!(hurewicz_kernel_order(5, 3).unwrap(), 1);
        assert_eq!(hurewicz_kernel_order(27, 3).unwrap(), 12);
        assert_eq!(hurewicz_kernel_order(4, 5), Err(DivisibilityError::KernelUnstated(5)));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(hurewicz_cokernel_order(5, 2).unwrap(), 2);
        assert_eq!(hurewicz_cokernel_order(5, 4).unwrap(), 12);
        assert_eq!(hurewicz_cokernel_order(4, 4).unwrap(), 12);
        assert_eq!(hurewicz_cokernel_order(6, 0).unwrap(), 1);
        assert_eq!(hurewicz_cokernel_order(2, 4), Err(DivisibilityError::CokernelExcluded));
        assert_eq!(
            hurewicz_cokernel_order(5, 3),
            Err(DivisibilityError::CokernelUnstated(3))
        );
    }

    #[test]
    fn all_orders_divide_48() {
        for d in 2..=300 {
            for k in 0..=4 {
                assert_eq!(48 % hurewicz_kernel_order(d, k).unwrap(), 0);
                if let Ok(m) = hurewicz_cokernel_order(d, k) {
                    assert_eq!(48 % m, 0, "d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn k_from_bplus_examples() {
        assert_eq!(k_from_bplus(2, 3).unwrap(), 0);
        assert_eq!(k_from_bplus(5, 3).unwrap(), 6);
        assert_eq!(k_from_bplus(4, 7).unwrap(), 0);
        assert_eq!(k_from_bplus(4, 4), Err(DivisibilityError::InvalidBPlus(4)));
        assert_eq!(k_from_bplus(4, 1), Err(DivisibilityError::InvalidBPlus(1)));
        assert_eq!(k_from_bplus(2, 7), Err(DivisibilityError::NegativeK(-4)));
    }

    #[test]
    fn scan_examples() {
        let s = sharpness_scan(3, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].d, s[0].k), (3, 2));
        assert_eq!(s[0].lower_bound, BigUint::from(2u32));
        assert_eq!(s[0].sharp, Some(true));

        let s = sharpness_scan(4, 4).unwrap();
        let k4 = s.iter().find(|r| r.k == 4).unwrap();
        assert_eq!(k4.sharp, Some(false));

        let s = sharpness_scan(5, 5).unwrap();
        let k4 = s.iter().find(|r| r.k == 4).unwrap();
        assert_eq!(k4.a_coeffs[2], r(11, 12));
        assert_eq!(k4.lower_bound, BigUint::from(12u32));
        assert_eq!(k4.sharp, Some(true));

        assert_eq!(
            sharpness_scan(6, 5),
            Err(DivisibilityError::EmptyRange { d_min: 6, d_max: 5 })
        );
    }

    #[test]
    fn scan_is_ordered_and_consistent() {
        let s = sharpness_scan(2, 40).unwrap();
        let keys: Vec<(u32, u32)> = s.iter().map(|r| (r.d, r.k)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(s.iter().all(DivisibilityReport::bound_divides_lemma));
        assert!(s.iter().any(|r| r.sharp == Some(false)));
    }

    #[test]
    fn bound_matches_minimal_multiplier() {
        use crate::chern::minimal_integral_multiplier;
        for d in 2..=30u32 {
            for k in (0..=2 * (d - 2)).step_by(2) {
                let rep = sw_divisibility_lower_bound(d, k).unwrap();
                let trunc = (rep.p + rep.kappa + 1) as usize;
                assert_eq!(
                    rep.lower_bound,
                    minimal_integral_multiplier(rep.p as usize, trunc).unwrap(),
                    "d={d} k={k}"
                );
            }
        }
    }

    #[test]
    fn report_json_field_names() {
        let rep = sw_divisibility_lower_bound(4, 4).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in [
            "d",
            "k",
            "p",
            "kappa",
            "a_coeffs",
            "denominators",
            "lower_bound",
            "lemma_cokernel_order",
            "sharp",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(v["lower_bound"], 6);
        assert_eq!(v["a_coeffs"][1], "-1/2");
        let back: DivisibilityReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
