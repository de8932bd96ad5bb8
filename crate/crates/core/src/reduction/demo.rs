//! A proper map on `R^N` under which the unit ball has preimages far out.
//!
//! `f(x) = x + σ Σ_{n=1}^{N} (n-1) φ(x - n e_n) e_n` with the bump
//! `φ(y) = (1 - 4|y|²)²` for `|y| < 1/2` (so `φ(0) = 1`) and `φ = 0` outside.
//! With `σ = +1` one gets `f(n e_n) = (2n-1) e_n`, which never lies in the
//! unit ball for `n >= 2`; with `σ = -1`, `f(n e_n) = e_n`. Both variants are
//! evaluated, and a local search near each `n e_n` looks for points `x`
//! with `|f(x)| <= 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpSign {
    /// `+ (n-1) φ(x - n e_n) e_n`, as written.
    Literal,
    /// `- (n-1) φ(x - n e_n) e_n`.
    Corrected,
}

/// `φ(y) = (1 - 4|y|²)²` on `|y| < 1/2`, zero elsewhere.
pub fn bump(y_norm_sq: &Rational) -> Rational {
    if *y_norm_sq >= Rational::new(1, 4) {
        return Rational::zero();
    }
    let t = Rational::one() - &(y_norm_sq * &Rational::from(4));
    &t * &t
}

/// The counterexample map on `R^dim`.
pub fn counterexample_map(x: &[Rational], sign: BumpSign) -> Vec<Rational> {
    let mut out = x.to_vec();
    let s = match sign {
        BumpSign::Literal => Rational::one(),
        BumpSign::Corrected => Rational::from(-1),
    };
    for n in 1..=x.len() {
        let centre = Rational::from(n as i64);
        let y2: Rational = x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let d = if i + 1 == n { xi - &centre } else { xi.clone() };
                &d * &d
            })
            .sum();
        let phi = bump(&y2);
        if !phi.is_zero() {
            out[n - 1] += &(&s * &(&Rational::from(n as i64 - 1) * &phi));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub n: usize,
    /// Coefficient of `e_n` in `f(n e_n)`.
    pub literal_at_centre: Rational,
    pub corrected_at_centre: Rational,
    /// Largest `|x|` found near `n e_n` with `|f(x)| <= 1`.
    pub literal_preimage_norm: Option<f64>,
    pub corrected_preimage_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub dim: usize,
    pub rows: Vec<DemoRow>,
    /// Preimage norms found for every `n` and strictly increasing.
    pub literal_unbounded: bool,
    pub corrected_unbounded: bool,
    pub identity_outside_support: bool,
}

const SEARCH_DENOM: i64 = 64;

/// Rational offsets `y` with `|y| < 1/2`: the `e_n` axis plus random points.
fn search_offsets(dim: usize, axis: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for k in -(SEARCH_DENOM / 2 - 1)..SEARCH_DENOM / 2 {
        let mut y = vec![Rational::zero(); dim];
        y[axis] = Rational::new(k, SEARCH_DENOM);
        out.push(y);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quarter = SEARCH_DENOM * SEARCH_DENOM / 4;
    while out.len() < 200 {
        let k: Vec<i64> = (0..dim)
            .map(|_| rng.random_range(-SEARCH_DENOM / 2..=SEARCH_DENOM / 2))
            .collect();
        if k.iter().map(|v| v * v).sum::<i64>() < quarter {
            out.push(k.iter().map(|&v| Rational::new(v, SEARCH_DENOM)).collect());
        }
    }
    out
}

fn norm_sq(x: &[Rational]) -> Rational {
    x.iter().map(|v| v * v).sum()
}

fn search(dim: usize, n: usize, sign: BumpSign) -> Option<f64> {
    let offsets = search_offsets(dim, n - 1, n as u64);
    offsets
        .iter()
        .filter_map(|y| {
            let mut x = y.clone();
            x[n - 1] += &Rational::from(n as i64);
            let fx = counterexample_map(&x, sign);
            (norm_sq(&fx) <= Rational::one()).then(|| norm_sq(&x).to_f64().sqrt())
        })
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
}

fn unbounded(norms: &[Option<f64>]) -> bool {
    norms.iter().all(Option::is_some) && norms.windows(2).all(|w| w[0] < w[1])
}

/// Evaluates both variants on `R^dim`, `3 <= dim <= 12`.
pub fn proper_not_bounded_demo(dim: usize) -> Result<DemoReport, ReductionError> {
    if !(3..=12).contains(&dim) {
        return Err(ReductionError::DemoDimension(dim));
    }
    let rows: Vec<DemoRow> = (1..=dim)
        .map(|n| {
            let mut centre = vec![Rational::zero(); dim];
            centre[n - 1] = Rational::from(n as i64);
            DemoRow {
                n,
                literal_at_centre: counterexample_map(&centre, BumpSign::Literal)[n - 1].clone(),
                corrected_at_centre: counterexample_map(&centre, BumpSign::Corrected)[n - 1].clone(),
                literal_preimage_norm: search(dim, n, BumpSign::Literal),
                corrected_preimage_norm: search(dim, n, BumpSign::Corrected),
            }
        })
        .collect();
    let identity_outside_support = (1..=dim).all(|n| {
        // just outside the support along e_n, and off-axis at the same height
        let mut a = vec![Rational::zero(); dim];
        a[n - 1] = Rational::from(n as i64) + Rational::new(1, 2);
        let mut b = a.clone();
        b[n - 1] = Rational::from(n as i64);
        b[n % dim] = Rational::new(1, 2);
        [a, b].iter().all(|x| {
            [BumpSign::Literal, BumpSign::Corrected]
                .iter()
                .all(|&s| counterexample_map(x, s) == *x)
        })
    });
    let lit: Vec<Option<f64>> = rows.iter().map(|r| r.literal_preimage_norm).collect();
    let cor: Vec<Option<f64>> = rows.iter().map(|r| r.corrected_preimage_norm).collect();
    Ok(DemoReport {
        dim,
        literal_unbounded: unbounded(&lit),
        corrected_unbounded: unbounded(&cor),
        identity_outside_support,
        rows,
    })
}
