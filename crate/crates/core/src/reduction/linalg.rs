//! Small exact linear algebra over `Q`, plus the f64 helpers the degree
//! computation needs.

use crate::rational::Rational;

pub type RVec = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `A x` for `A` given by rows.
pub fn mat_vec(a: &[RVec], x: &[Rational]) -> RVec {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose(a: &[RVec], cols: usize) -> Vec<RVec> {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form with pivots searched among the first `cols`
/// columns (row operations act on whole rows); returns the pivot columns.
fn rref(m: &mut [RVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..m[row].len() {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` where `A` has `cols` columns.
pub fn nullspace(a: &[RVec], cols: usize) -> Vec<RVec> {
    let mut m: Vec<RVec> = a.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

pub fn rank(vectors: &[RVec], dim: usize) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m, dim).len()
}

pub fn determinant(rows: &[RVec]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    det
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(a: &[RVec]) -> Option<Vec<RVec>> {
    let n = a.len();
    let mut m: Vec<RVec> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Incrementally collects a linearly independent subset of the vectors offered.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    dim: usize,
    echelon: Vec<(usize, RVec)>,
    basis: Vec<RVec>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            echelon: Vec::new(),
            basis: Vec::new(),
        }
    }

    fn reduce(&self, v: &[Rational]) -> RVec {
        let mut w = v.to_vec();
        for (pivot, row) in &self.echelon {
            if !w[*pivot].is_zero() {
                let factor = w[*pivot].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= &(&factor * ri);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Adds `v` if it is not already in the span; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let w = self.reduce(v);
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pivot].recip();
        let row: RVec = w.iter().map(|x| x * &inv).collect();
        for (_, other) in self.echelon.iter_mut() {
            if !other[pivot].is_zero() {
                let factor = other[pivot].clone();
                for (oi, ri) in other.iter_mut().zip(&row) {
                    *oi -= &(&factor * ri);
                }
            }
        }
        self.echelon.push((pivot, row));
        self.basis.push(v.to_vec());
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    pub fn into_basis(self) -> Vec<RVec> {
        self.basis
    }
}

pub fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Rational::to_f64).collect()
}

pub fn norm_f64(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gram–Schmidt in f64. The change of basis is triangular with positive
/// diagonal, so the orientation of the input basis is kept.
pub fn orthonormalize(basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for v in basis {
        let mut w = v.clone();
        // two passes for numerical stability
        for _ in 0..2 {
            for q in &out {
                let proj: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let n = norm_f64(&w);
        out.push(w.into_iter().map(|x| x / n).collect());
    }
    out
}
