//! Negative definite unimodular lattices and their characteristic vectors.
//!
//! A characteristic vector `c` satisfies `⟨c, x⟩ ≡ ⟨x, x⟩ mod 2` for every
//! lattice vector `x`. The characteristic vectors form a single coset
//! `c₀ + 2L`; [`min_characteristic_norm`] searches that coset for the smallest
//! `-c²` using exact enumeration on the positive definite form `-G`.

mod enumerate;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::big_int_serde;

pub use enumerate::{enumerate_coset_by_norm, enumerate_lattice_by_norm, LdlForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is empty")]
    Empty,
    #[error("Gram matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("vector has {got} coordinates, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Gram matrix rejected: {0}")]
    Invalid(Validity),
    #[error("rank {0} exceeds the enumeration budget of 8")]
    RankOverBudget(usize),
    #[error("Gram matrix is singular mod 2")]
    SingularModTwo,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    NotSymmetric {
        row: usize,
        col: usize,
    },
    NotUnimodular {
        #[serde(with = "big_int_serde")]
        determinant: BigInt,
    },
    /// Leading principal minor `index` (1-based size) of `-G` is not positive.
    NotNegativeDefinite {
        minor: usize,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Valid => write!(f, "valid"),
            Validity::NotSymmetric { row, col } => write!(f, "not symmetric at ({row}, {col})"),
            Validity::NotUnimodular { determinant } => {
                write!(f, "not unimodular (determinant {determinant})")
            }
            Validity::NotNegativeDefinite { minor } => {
                write!(f, "not negative definite (leading minor {minor} of -G)")
            }
        }
    }
}

/// Symmetric integer matrix of an intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GramRepr", into = "GramRepr")]
pub struct GramMatrix {
    entries: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct GramRepr(#[serde(with = "big_int_serde::matrix")] Vec<Vec<BigInt>>);

impl TryFrom<GramRepr> for GramMatrix {
    type Error = LatticeError;
    fn try_from(r: GramRepr) -> Result<Self, LatticeError> {
        GramMatrix::new(r.0)
    }
}

impl From<GramMatrix> for GramRepr {
    fn from(g: GramMatrix) -> Self {
        GramRepr(g.entries)
    }
}

impl GramMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n = entries.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::NotSquare { row, len: r.len(), n });
            }
        }
        Ok(GramMatrix { entries })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// `-I_n`.
    pub fn negative_identity(n: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { -1 } else { 0 }).collect())
            .collect();
        Self::from_i64(&rows).expect("square")
    }

    /// Negative of the E8 Cartan matrix (Bourbaki labelling).
    pub fn negative_e8() -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(a, b) in &edges {
            rows[a][b] = 1;
            rows[b][a] = 1;
        }
        Self::from_i64(&rows).expect("square")
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    /// `Uᵀ G U` for a square integer matrix `U` given by rows.
    pub fn conjugate(&self, u: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        let n = self.rank();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        let mut gu = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                gu[i][j] = (0..n).map(|k| &self.entries[i][k] * &u[k][j]).sum();
            }
        }
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| &u[k][i] * &gu[k][j]).sum();
            }
        }
        Self::new(out)
    }

    /// `⟨a, b⟩ = aᵀ G b`.
    pub fn pairing(&self, a: &LatticeVector, b: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.pairing_unchecked(&a.coords, &b.coords))
    }

    fn pairing_unchecked(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * &self.entries[i][j] * bj;
                }
            }
        }
        acc
    }

    /// `c² = cᵀ G c`, nonpositive for a negative definite form.
    pub fn square(&self, c: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.pairing(c, c)
    }

    fn check_dim(&self, c: &LatticeVector) -> Result<(), LatticeError> {
        if c.coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: c.coords.len(),
            });
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<(), LatticeError> {
        match validate(self) {
            Validity::Valid => Ok(()),
            v => Err(LatticeError::Invalid(v)),
        }
    }

    fn negated(&self) -> Vec<Vec<BigInt>> {
        self.entries.iter().map(|r| r.iter().map(|v| -v).collect()).collect()
    }
}

/// Integer coordinates in the basis of the ambient Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector {
    #[serde(with = "big_int_serde::vec")]
    pub coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector {
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Representative of `{c, -c}` whose first nonzero coordinate is positive.
    pub fn canonical_sign(mut self) -> Self {
        if let Some(first) = self.coords.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                for v in &mut self.coords {
                    *v = -&*v;
                }
            }
        }
        self
    }
}

/// Fraction-free (Bareiss) elimination without pivoting.
///
/// Returns the integer upper triangular matrix whose diagonal holds the
/// leading principal minors, or the 1-based index of the first minor that is
/// not positive.
pub(crate) fn bareiss_upper(a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, usize> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut prev = BigInt::one();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return Err(k + 1);
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        for row in m.iter_mut().skip(k + 1) {
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(m)
}

/// Exact determinant by Bareiss elimination with row pivoting.
pub(crate) fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Checks symmetry, `|det| = 1` and negative definiteness, in that order.
pub fn validate(g: &GramMatrix) -> Validity {
    let n = g.rank();
    for i in 0..n {
        for j in (i + 1)..n {
            if g.entries[i][j] != g.entries[j][i] {
                return Validity::NotSymmetric { row: i, col: j };
            }
        }
    }
    let det = determinant(&g.entries);
    if det.abs() != BigInt::one() {
        return Validity::NotUnimodular { determinant: det };
    }
    match bareiss_upper(&g.negated()) {
        Ok(_) => Validity::Valid,
        Err(minor) => Validity::NotNegativeDefinite { minor },
    }
}

/// `(Gc)_i ≡ G_ii mod 2` for every `i`.
pub fn is_characteristic(g: &GramMatrix, c: &LatticeVector) -> Result<bool, LatticeError> {
    g.check_dim(c)?;
    let two = BigInt::from(2);
    Ok((0..g.rank()).all(|i| {
        let gc_i: BigInt = g.entries[i].iter().zip(&c.coords).map(|(a, b)| a * b).sum();
        (gc_i - &g.entries[i][i]).mod_floor(&two).is_zero()
    }))
}

/// Solves `Gc ≡ diag(G) mod 2` over GF(2); entries of the result are 0 or 1.
pub fn find_characteristic(g: &GramMatrix) -> Result<LatticeVector, LatticeError> {
    let n = g.rank();
    let two = BigInt::from(2);
    let bit = |v: &BigInt| !v.mod_floor(&two).is_zero();
    // augmented rows [G mod 2 | diag mod 2]
    let mut rows: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut r: Vec<bool> = g.entries[i].iter().map(bit).collect();
            r.push(bit(&g.entries[i][i]));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r][col]).ok_or(LatticeError::SingularModTwo)?;
        rows.swap(col, pivot);
        for r in 0..n {
            if r != col && rows[r][col] {
                let (src, dst) = if r < col {
                    let (a, b) = rows.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d ^= *s;
                }
            }
        }
    }
    let coords = rows.iter().map(|r| BigInt::from(u8::from(r[n]))).collect();
    Ok(LatticeVector { coords })
}

/// Minimum of `-c²` over characteristic `c`, with a vector attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCharacteristic {
    #[serde(with = "big_int_serde")]
    pub norm: BigInt,
    pub vector: LatticeVector,
}

/// The search radius starts at the rank and doubles until the coset yields a
/// vector; every vector found caps the minimum, so the first nonempty radius
/// already contains it.
pub fn min_characteristic(g: &GramMatrix) -> Result<MinimalCharacteristic, LatticeError> {
    g.require_valid()?;
    let c0 = find_characteristic(g)?;
    let form = LdlForm::new(g)?;
    let mut bound = BigInt::from(g.rank().max(1));
    loop {
        let found = enumerate::enumerate_with_form(&form, &c0, 2, &bound);
        if let Some((norm, vector)) = found.into_iter().next() {
            return Ok(MinimalCharacteristic { norm, vector });
        }
        bound *= 2;
    }
}

pub fn min_characteristic_norm(g: &GramMatrix) -> Result<BigInt, LatticeError> {
    Ok(min_characteristic(g)?.norm)
}

/// Whether every characteristic vector satisfies `-c² >= rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    #[serde(with = "big_int_serde")]
    pub min_characteristic_norm: BigInt,
    /// A characteristic vector with `-c² < rank`, present exactly when inadmissible.
    pub witness: Option<LatticeVector>,
}

pub fn donaldson_admissible(g: &GramMatrix) -> Result<AdmissibilityVerdict, LatticeError> {
    let min = min_characteristic(g)?;
    let admissible = min.norm >= BigInt::from(g.rank());
    Ok(AdmissibilityVerdict {
        admissible,
        min_characteristic_norm: min.norm,
        witness: (!admissible).then_some(min.vector),
    })
}

/// Searches for `rank` pairwise orthogonal vectors of square `-1`.
///
/// Such a set is a basis exhibiting `G ≅ -I_n`. Absence of a witness is not
/// a proof that the form is not diagonal beyond what the search covers.
pub fn diagonal_witness(g: &GramMatrix) -> Result<Option<Vec<LatticeVector>>, LatticeError> {
    let n = g.rank();
    if n > 8 {
        return Err(LatticeError::RankOverBudget(n));
    }
    g.require_valid()?;
    let units: Vec<LatticeVector> = enumerate_lattice_by_norm(g, &BigInt::one())?
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    if extend_orthogonal(g, &units, 0, &mut chosen, n) {
        Ok(Some(chosen.into_iter().map(|i| units[i].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn extend_orthogonal(
    g: &GramMatrix,
    units: &[LatticeVector],
    start: usize,
    chosen: &mut Vec<usize>,
    target: usize,
) -> bool {
    if chosen.len() == target {
        return true;
    }
    for i in start..units.len() {
        let ok = chosen
            .iter()
            .all(|&j| g.pairing_unchecked(&units[i].coords, &units[j].coords).is_zero());
        if ok {
            chosen.push(i);
            if extend_orthogonal(g, units, i + 1, chosen, target) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(rows: &[Vec<i64>]) -> GramMatrix {
        GramMatrix::from_i64(rows).unwrap()
    }

    fn identity(n: usize) -> GramMatrix {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        gram(&rows)
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&GramMatrix::negative_identity(3)), Validity::Valid);
        assert_eq!(validate(&identity(3)), Validity::NotNegativeDefinite { minor: 1 });
        assert_eq!(
            validate(&gram(&[vec![-1, 0], vec![0, -2]])),
            Validity::NotUnimodular {
                determinant: BigInt::from(2)
            }
        );
        assert_eq!(
            validate(&gram(&[vec![-1, 1], vec![0, -1]])),
            Validity::NotSymmetric { row: 0, col: 1 }
        );
        assert_eq!(validate(&GramMatrix::negative_e8()), Validity::Valid);
        // hyperbolic plane: unimodular, indefinite
        assert_eq!(
            validate(&gram(&[vec![0, 1], vec![1, 0]])),
            Validity::NotNegativeDefinite { minor: 1 }
        );
    }

    #[test]
    fn determinant_small() {
        let m = gram(&[vec![0, 2, 1], vec![3, 1, 0], vec![1, 1, 1]]);
        // 0(1-0) - 2(3-0) + 1(3-1) = -4
        assert_eq!(determinant(m.entries()), BigInt::from(-4));
        assert_eq!(determinant(GramMatrix::negative_e8().entries()), BigInt::one());
    }

    #[test]
    fn characteristic_examples() {
        let g = GramMatrix::negative_identity(4);
        assert!(is_characteristic(&g, &LatticeVector::from_i64(&[1, 1, 1, 1])).unwrap());
        assert!(is_characteristic(&g, &LatticeVector::from_i64(&[3, -1, 1, 5])).unwrap());
        let e8 = GramMatrix::negative_e8();
        assert!(is_characteristic(&e8, &LatticeVector::zero(8)).unwrap());
        let g2 = GramMatrix::negative_identity(2);
        assert!(!is_characteristic(&g2, &LatticeVector::from_i64(&[1, 0])).unwrap());
        assert_eq!(
            is_characteristic(&g2, &LatticeVector::from_i64(&[1, 0, 0])),
            Err(LatticeError::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn find_characteristic_examples() {
        let c = find_characteristic(&GramMatrix::negative_identity(5)).unwrap();
        assert_eq!(c, LatticeVector::from_i64(&[1, 1, 1, 1, 1]));
        let c = find_characteristic(&GramMatrix::negative_e8()).unwrap();
        assert!(c.is_zero());
        let g = gram(&[vec![-2, 1], vec![1, -1]]);
        assert_eq!(validate(&g), Validity::Valid);
        let c = find_characteristic(&g).unwrap();
        assert!(is_characteristic(&g, &c).unwrap());
    }

    #[test]
    fn min_norm_examples() {
        for n in 1..=8 {
            let g = GramMatrix::negative_identity(n);
            assert_eq!(min_characteristic_norm(&g).unwrap(), BigInt::from(n));
        }
        assert_eq!(
            min_characteristic_norm(&GramMatrix::negative_e8()).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn admissibility_examples() {
        let v = donaldson_admissible(&GramMatrix::negative_identity(8)).unwrap();
        assert!(v.admissible);
        assert_eq!(v.witness, None);
        let v = donaldson_admissible(&GramMatrix::negative_identity(2)).unwrap();
        assert!(v.admissible);
        assert_eq!(v.min_characteristic_norm, BigInt::from(2));
        let v = donaldson_admissible(&GramMatrix::negative_e8()).unwrap();
        assert!(!v.admissible);
        assert_eq!(v.witness, Some(LatticeVector::zero(8)));
        assert!(matches!(
            donaldson_admissible(&identity(2)),
            Err(LatticeError::Invalid(_))
        ));
    }

    #[test]
    fn diagonal_witness_examples() {
        let w = diagonal_witness(&GramMatrix::negative_identity(3)).unwrap().unwrap();
        let mut w: Vec<_> = w.into_iter().map(LatticeVector::canonical_sign).collect();
        w.sort();
        let mut expected = vec![
            LatticeVector::from_i64(&[1, 0, 0]),
            LatticeVector::from_i64(&[0, 1, 0]),
            LatticeVector::from_i64(&[0, 0, 1]),
        ];
        expected.sort();
        assert_eq!(w, expected);
        assert_eq!(diagonal_witness(&GramMatrix::negative_e8()).unwrap(), None);
        assert_eq!(
            diagonal_witness(&GramMatrix::negative_identity(9)),
            Err(LatticeError::RankOverBudget(9))
        );
    }

    #[test]
    fn diagonal_witness_after_basis_change() {
        let u: Vec<Vec<BigInt>> = [[1i64, 2, 0], [0, 1, -1], [1, 3, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(determinant(&u).abs(), BigInt::one());
        let g = GramMatrix::negative_identity(3).conjugate(&u).unwrap();
        assert_eq!(validate(&g), Validity::Valid);
        assert_ne!(g, GramMatrix::negative_identity(3));
        let w = diagonal_witness(&g).unwrap().expect("conjugate of -I_3 is diagonal");
        assert_eq!(w.len(), 3);
        for (i, a) in w.iter().enumerate() {
            assert_eq!(g.square(a).unwrap(), BigInt::from(-1));
            for b in &w[i + 1..] {
                assert!(g.pairing(a, b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn gram_json() {
        let g: GramMatrix = serde_json::from_str("[[-1,0],[0,-1]]").unwrap();
        assert_eq!(g, GramMatrix::negative_identity(2));
        assert!(serde_json::from_str::<GramMatrix>("[[-1,0],[0]]").is_err());
        assert_eq!(serde_json::to_string(&g).unwrap(), "[[-1,0],[0,-1]]");
    }
}
