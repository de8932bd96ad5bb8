//! Exact Fincke–Pohst enumeration on a positive definite integer form.
//!
//! The form `Q = -G` is written as `Q(z) = Σ_i d_i (z_i + Σ_{j>i} μ_ij z_j)²`
//! with rational `d_i` and `μ_ij` read off a fraction-free (Bareiss)
//! elimination. Coordinates are fixed from the last one down, and at each
//! level the admissible integer range is bracketed with an integer square
//! root and then filtered exactly, so no floating point is involved.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{bareiss_upper, GramMatrix, LatticeError, LatticeVector, Validity};
use crate::rational::Rational;

/// `Q = -G` in the diagonal-times-unit-triangular form used by the search.
#[derive(Debug, Clone)]
pub struct LdlForm {
    q: Vec<Vec<BigInt>>,
    diag: Vec<Rational>,
    mu: Vec<Vec<Rational>>,
}

impl LdlForm {
    pub fn new(g: &GramMatrix) -> Result<Self, LatticeError> {
        let q = g.negated();
        let upper =
            bareiss_upper(&q).map_err(|minor| LatticeError::Invalid(Validity::NotNegativeDefinite { minor }))?;
        let n = q.len();
        let mut diag = Vec::with_capacity(n);
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut prev = BigInt::one();
        for k in 0..n {
            let minor = upper[k][k].clone();
            diag.push(Rational::new(minor.clone(), prev.clone()));
            for j in (k + 1)..n {
                mu[k][j] = Rational::new(upper[k][j].clone(), minor.clone());
            }
            prev = minor;
        }
        Ok(LdlForm { q, diag, mu })
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    /// The pivots `d_i`.
    pub fn diagonal(&self) -> &[Rational] {
        &self.diag
    }

    /// `Q(z)` evaluated through the triangular form.
    pub fn evaluate(&self, z: &[Rational]) -> Rational {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let mut inner = z[i].clone();
                for j in (i + 1)..n {
                    inner += &(&self.mu[i][j] * &z[j]);
                }
                &self.diag[i] * &(&inner * &inner)
            })
            .sum()
    }

    fn norm(&self, c: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ci) in c.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                acc += ci * &self.q[i][j] * cj;
            }
        }
        acc
    }
}

struct Search<'a> {
    form: &'a LdlForm,
    shift: Vec<Rational>,
    scale: BigInt,
    offset: &'a [BigInt],
    bound: BigInt,
}

impl Search<'_> {
    /// Integers `y` with `d (y - center)² <= budget`.
    fn level_range(&self, level: usize, center: &Rational, budget: &Rational) -> Vec<BigInt> {
        if budget.is_negative() {
            return Vec::new();
        }
        let q = budget / &self.form.diag[level];
        let radius: BigInt = q.floor().sqrt();
        let lo: BigInt = center.floor() - &radius - 1;
        let hi: BigInt = center.ceil() + &radius + 1;
        let mut out = Vec::new();
        let mut y = lo;
        while y <= hi {
            let diff = Rational::from(y.clone()) - center;
            if &self.form.diag[level] * &(&diff * &diff) <= *budget {
                out.push(y.clone());
            }
            y += 1;
        }
        out
    }

    fn center(&self, level: usize, z: &[Rational]) -> Rational {
        let n = self.form.rank();
        let mut s = self.shift[level].clone();
        for j in (level + 1)..n {
            s += &(&self.form.mu[level][j] * &z[j]);
        }
        -s
    }

    fn descend(
        &self,
        level: usize,
        budget: Rational,
        y: &mut Vec<BigInt>,
        z: &mut Vec<Rational>,
        out: &mut Vec<(BigInt, LatticeVector)>,
    ) {
        let center = self.center(level, z);
        for yi in self.level_range(level, &center, &budget) {
            let zi = Rational::from(yi.clone()) + &self.shift[level];
            let diff = Rational::from(yi.clone()) - &center;
            let rest = &budget - &(&self.form.diag[level] * &(&diff * &diff));
            y[level] = yi;
            z[level] = zi;
            if level == 0 {
                self.emit(y, out);
            } else {
                self.descend(level - 1, rest, y, z, out);
            }
        }
    }

    fn emit(&self, y: &[BigInt], out: &mut Vec<(BigInt, LatticeVector)>) {
        let c: Vec<BigInt> = y
            .iter()
            .zip(self.offset)
            .map(|(yi, ti)| &self.scale * yi + ti)
            .collect();
        let norm = self.form.norm(&c);
        if norm <= self.bound {
            out.push((norm, LatticeVector::new(c).canonical_sign()));
        }
    }

    fn run(&self) -> Vec<(BigInt, LatticeVector)> {
        let n = self.form.rank();
        let s2 = Rational::from(&self.scale * &self.scale);
        let budget = Rational::from(self.bound.clone()) / &s2;
        let top = n - 1;
        let z0 = vec![Rational::zero(); n];
        let center = self.center(top, &z0);
        let tops = self.level_range(top, &center, &budget);
        let mut found: Vec<(BigInt, LatticeVector)> = tops
            .into_par_iter()
            .flat_map_iter(|yt| {
                let mut y = vec![BigInt::zero(); n];
                let mut z = z0.clone();
                let mut out = Vec::new();
                let diff = Rational::from(yt.clone()) - &center;
                let rest = &budget - &(&self.form.diag[top] * &(&diff * &diff));
                z[top] = Rational::from(yt.clone()) + &self.shift[top];
                y[top] = yt;
                if top == 0 {
                    self.emit(&y, &mut out);
                } else {
                    self.descend(top - 1, rest, &mut y, &mut z, &mut out);
                }
                out
            })
            .collect();
        // canonical order, one representative per ±c
        let set: BTreeSet<(BigInt, LatticeVector)> = found.drain(..).collect();
        set.into_iter().collect()
    }
}

/// All `c = scale·y + offset` (`y` integral) with `Q(c) <= bound`, up to sign,
/// sorted by `(Q(c), c)`.
pub(crate) fn enumerate_with_form(
    form: &LdlForm,
    offset: &LatticeVector,
    scale: i64,
    bound: &BigInt,
) -> Vec<(BigInt, LatticeVector)> {
    if bound < &BigInt::zero() {
        return Vec::new();
    }
    let scale = BigInt::from(scale);
    let shift = offset
        .coords
        .iter()
        .map(|t| Rational::new(t.clone(), scale.clone()))
        .collect();
    Search {
        form,
        shift,
        scale,
        offset: &offset.coords,
        bound: bound.clone(),
    }
    .run()
}

/// Vectors `c ∈ c0 + 2L` with `-c² <= bound`, one per `±c`, sorted by `-c²`.
pub fn enumerate_coset_by_norm(
    g: &GramMatrix,
    c0: &LatticeVector,
    bound: &BigInt,
) -> Result<Vec<LatticeVector>, LatticeError> {
    g.check_dim(c0)?;
    g.require_valid()?;
    let form = LdlForm::new(g)?;
    Ok(enumerate_with_form(&form, c0, 2, bound)
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

/// Lattice vectors with `-v² <= bound`, one per `±v`, sorted by `-v²`.
pub fn enumerate_lattice_by_norm(g: &GramMatrix, bound: &BigInt) -> Result<Vec<LatticeVector>, LatticeError> {
    g.require_valid()?;
    let form = LdlForm::new(g)?;
    let zero = LatticeVector::zero(g.rank());
    Ok(enumerate_with_form(&form, &zero, 1, bound)
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{find_characteristic, is_characteristic};

    /// Brute force over the box `|c_i| <= radius`.
    fn box_oracle(g: &GramMatrix, c0: &LatticeVector, bound: i64, radius: i64) -> BTreeSet<LatticeVector> {
        let n = g.rank();
        let mut out = BTreeSet::new();
        let mut c = vec![-radius; n];
        loop {
            let v = LatticeVector::from_i64(&c);
            let in_coset = v.coords.iter().zip(&c0.coords).all(|(a, b)| ((a - b) % 2i32).is_zero());
            if in_coset && -g.square(&v).unwrap() <= BigInt::from(bound) {
                out.insert(v.canonical_sign());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                c[i] += 1;
                if c[i] > radius {
                    c[i] = -radius;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn ldl_reproduces_form() {
        let g = GramMatrix::negative_e8();
        let form = LdlForm::new(&g).unwrap();
        let v = LatticeVector::from_i64(&[1, -2, 0, 3, 1, 0, -1, 2]);
        let z: Vec<Rational> = v.coords.iter().cloned().map(Rational::from).collect();
        assert_eq!(form.evaluate(&z), Rational::from(-g.square(&v).unwrap()));
    }

    #[test]
    fn coset_examples() {
        let g = GramMatrix::negative_identity(2);
        let c0 = LatticeVector::from_i64(&[1, 1]);
        let got = enumerate_coset_by_norm(&g, &c0, &BigInt::from(2)).unwrap();
        let expected: BTreeSet<_> = box_oracle(&g, &c0, 2, 3);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(
            got,
            vec![LatticeVector::from_i64(&[1, -1]), LatticeVector::from_i64(&[1, 1])]
        );

        let e8 = GramMatrix::negative_e8();
        let got = enumerate_coset_by_norm(&e8, &LatticeVector::zero(8), &BigInt::zero()).unwrap();
        assert_eq!(got, vec![LatticeVector::zero(8)]);

        let got = enumerate_coset_by_norm(&g, &c0, &BigInt::from(1)).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn e8_roots() {
        let e8 = GramMatrix::negative_e8();
        let v = enumerate_lattice_by_norm(&e8, &BigInt::from(2)).unwrap();
        // zero plus 240 roots up to sign
        assert_eq!(v.len(), 1 + 120);
    }

    #[test]
    fn matches_box_oracle_small_ranks() {
        let grams = [
            GramMatrix::negative_identity(1),
            GramMatrix::negative_identity(2),
            GramMatrix::negative_identity(3),
            GramMatrix::from_i64(&[vec![-2, 1], vec![1, -1]]).unwrap(),
            GramMatrix::from_i64(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -1]]).unwrap(),
        ];
        for g in &grams {
            let c0 = find_characteristic(g).unwrap();
            for bound in 0..=12 {
                let got: BTreeSet<_> = enumerate_coset_by_norm(g, &c0, &BigInt::from(bound))
                    .unwrap()
                    .into_iter()
                    .collect();
                assert_eq!(got, box_oracle(g, &c0, bound, 8), "g={g:?} bound={bound}");
                for v in &got {
                    assert!(is_characteristic(g, v).unwrap());
                    let n = g.rank() as i64;
                    let neg_sq = -g.square(v).unwrap();
                    assert!(((neg_sq - n) % 8i32).is_zero());
                }
            }
        }
    }
}
