//! Piecewise-polynomial maps `R^m → R^n` with rational coefficients.
//!
//! Pieces are tried in order; a piece applies when it has no bound or when
//! `|x|² < below_norm_sq`. A point matched by no piece maps to zero.
//! Continuity across piece boundaries is the caller's responsibility.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Rational,
    pub exponents: Vec<u32>,
}

/// Sparse multivariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl From<Vec<Term>> for Polynomial {
    fn from(terms: Vec<Term>) -> Self {
        let mut p = Polynomial::zero();
        for t in terms {
            p.add_term(t.exponents, t.coeff);
        }
        p
    }
}

impl From<Polynomial> for Vec<Term> {
    fn from(p: Polynomial) -> Self {
        p.terms
            .into_iter()
            .map(|(exponents, coeff)| Term { coeff, exponents })
            .collect()
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    /// `|x|²`.
    pub fn norm_sq(nvars: usize) -> Self {
        (0..nvars).fold(Self::zero(), |acc, i| {
            let v = Self::var(nvars, i);
            acc.add(&v.mul(&v))
        })
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *entry += &coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest number of variables referenced by any term.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let len = ea.len().max(eb.len());
                let e: Vec<u32> = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (xi, &k) in x.iter().zip(e) {
                    if k > 0 {
                        v *= &xi.pow(k as i32);
                    }
                }
                v
            })
            .sum()
    }

    fn compile(&self) -> Vec<(Vec<i32>, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), c.to_f64()))
            .collect()
    }
}

fn eval_compiled(terms: &[(Vec<i32>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(e, c)| {
            e.iter()
                .zip(x)
                .fold(*c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powi(k) })
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub below_norm_sq: Option<Rational>,
    pub components: Vec<Polynomial>,
}

/// `(radius² bound, components as (exponents, coefficient) lists)`.
type CompiledPiece = (Option<f64>, Vec<Vec<(Vec<i32>, f64)>>);

/// A piecewise-polynomial map together with an f64 copy for fast evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseRepr", into = "PiecewiseRepr")]
pub struct PiecewisePolynomial {
    input_dim: usize,
    output_dim: usize,
    pieces: Vec<Piece>,
    compiled: Vec<CompiledPiece>,
}

#[derive(Serialize, Deserialize)]
struct PiecewiseRepr {
    input_dim: usize,
    output_dim: usize,
    pieces: Vec<Piece>,
}

impl TryFrom<PiecewiseRepr> for PiecewisePolynomial {
    type Error = ReductionError;
    fn try_from(r: PiecewiseRepr) -> Result<Self, ReductionError> {
        PiecewisePolynomial::new(r.input_dim, r.output_dim, r.pieces)
    }
}

impl From<PiecewisePolynomial> for PiecewiseRepr {
    fn from(p: PiecewisePolynomial) -> Self {
        PiecewiseRepr {
            input_dim: p.input_dim,
            output_dim: p.output_dim,
            pieces: p.pieces,
        }
    }
}

impl PartialEq for PiecewisePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.input_dim == other.input_dim && self.output_dim == other.output_dim && self.pieces == other.pieces
    }
}

impl PiecewisePolynomial {
    pub fn new(input_dim: usize, output_dim: usize, pieces: Vec<Piece>) -> Result<Self, ReductionError> {
        for (i, piece) in pieces.iter().enumerate() {
            if piece.components.len() != output_dim {
                return Err(ReductionError::InvalidProblem(format!(
                    "piece {i} has {} components, expected {output_dim}",
                    piece.components.len()
                )));
            }
            if piece.components.iter().any(|c| c.arity() > input_dim) {
                return Err(ReductionError::InvalidProblem(format!(
                    "piece {i} references more than {input_dim} variables"
                )));
            }
            if let Some(b) = &piece.below_norm_sq {
                if !b.is_positive() {
                    return Err(ReductionError::InvalidProblem(format!(
                        "piece {i} has a nonpositive bound"
                    )));
                }
            }
        }
        let compiled = pieces
            .iter()
            .map(|p| {
                (
                    p.below_norm_sq.as_ref().map(Rational::to_f64),
                    p.components.iter().map(Polynomial::compile).collect(),
                )
            })
            .collect();
        Ok(PiecewisePolynomial {
            input_dim,
            output_dim,
            pieces,
            compiled,
        })
    }

    /// A single unbounded polynomial piece.
    pub fn polynomial(input_dim: usize, components: Vec<Polynomial>) -> Result<Self, ReductionError> {
        let output_dim = components.len();
        Self::new(
            input_dim,
            output_dim,
            vec![Piece {
                below_norm_sq: None,
                components,
            }],
        )
    }

    pub fn zero(input_dim: usize, output_dim: usize) -> Self {
        Self::new(input_dim, output_dim, Vec::new()).expect("no pieces")
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        let n2: Rational = x.iter().map(|v| v * v).sum();
        for piece in &self.pieces {
            let applies = match &piece.below_norm_sq {
                None => true,
                Some(b) => &n2 < b,
            };
            if applies {
                return piece.components.iter().map(|c| c.eval(x)).collect();
            }
        }
        vec![Rational::zero(); self.output_dim]
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        let n2: f64 = x.iter().map(|v| v * v).sum();
        for (bound, comps) in &self.compiled {
            if bound.is_none_or(|b| n2 < b) {
                return comps.iter().map(|c| eval_compiled(c, x)).collect();
            }
        }
        vec![0.0; self.output_dim]
    }
}

/// Named maps that compile to piecewise polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", content = "params", rename_all = "snake_case")]
pub enum Builtin {
    Zero,
    Constant {
        value: Vec<Rational>,
    },
    /// `z ↦ Σ_j a_j z^j` on `R² ≅ C`; each coefficient is `[re, im]`.
    ComplexPolynomial {
        coefficients: Vec<[Rational; 2]>,
    },
}

impl Builtin {
    pub fn compile(&self, input_dim: usize, output_dim: usize) -> Result<PiecewisePolynomial, ReductionError> {
        match self {
            Builtin::Zero => Ok(PiecewisePolynomial::zero(input_dim, output_dim)),
            Builtin::Constant { value } => {
                if value.len() != output_dim {
                    return Err(ReductionError::InvalidProblem(format!(
                        "constant has {} entries, target dimension is {output_dim}",
                        value.len()
                    )));
                }
                let comps = value
                    .iter()
                    .map(|v| Polynomial::constant(input_dim, v.clone()))
                    .collect();
                PiecewisePolynomial::polynomial(input_dim, comps)
            }
            Builtin::ComplexPolynomial { coefficients } => {
                if input_dim != 2 || output_dim != 2 {
                    return Err(ReductionError::InvalidProblem(
                        "complex_polynomial needs domain and target of dimension 2".into(),
                    ));
                }
                let (re, im) = complex_polynomial_parts(coefficients);
                PiecewisePolynomial::polynomial(2, vec![re, im])
            }
        }
    }
}

/// Real and imaginary parts of `Σ_j a_j (x + iy)^j`.
pub fn complex_polynomial_parts(coefficients: &[[Rational; 2]]) -> (Polynomial, Polynomial) {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let mut pow_re = Polynomial::constant(2, Rational::one());
    let mut pow_im = Polynomial::zero();
    let mut re = Polynomial::zero();
    let mut im = Polynomial::zero();
    for [a, b] in coefficients {
        // (a + ib)(P + iQ) = (aP - bQ) + i(aQ + bP)
        re = re.add(&pow_re.scale(a)).add(&pow_im.scale(&-b));
        im = im.add(&pow_im.scale(a)).add(&pow_re.scale(b));
        let next_re = pow_re.mul(&x).add(&pow_im.mul(&y).scale(&Rational::from(-1)));
        let next_im = pow_re.mul(&y).add(&pow_im.mul(&x));
        pow_re = next_re;
        pow_im = next_im;
    }
    (re, im)
}

/// How the compact part is given in a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CompactPartSpec {
    Builtin(Builtin),
    Piecewise { piecewise: PiecewisePolynomial },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn polynomial_arithmetic() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.add(&y).mul(&x.add(&y.scale(&r(-1))));
        // x² - y²
        assert_eq!(p.eval(&[r(3), r(2)]), r(5));
        assert_eq!(Polynomial::norm_sq(3).eval(&[r(1), r(2), r(2)]), r(9));
        assert!(x.add(&x.scale(&r(-1))).is_zero());
    }

    #[test]
    fn complex_square_minus_one() {
        let (re, im) = complex_polynomial_parts(&[[r(-1), r(0)], [r(0), r(0)], [r(1), r(0)]]);
        // (2 + 3i)² - 1 = 4 + 12i
        assert_eq!(re.eval(&[r(2), r(3)]), r(-6));
        assert_eq!(im.eval(&[r(2), r(3)]), r(12));
        let f = PiecewisePolynomial::polynomial(2, vec![re, im]).unwrap();
        let v = f.eval_f64(&[2.0, 3.0]);
        assert!((v[0] + 6.0).abs() < 1e-12 && (v[1] - 12.0).abs() < 1e-12);
    }

    #[test]
    fn piece_selection() {
        let inside = Piece {
            below_norm_sq: Some(r(1)),
            components: vec![Polynomial::constant(1, r(7))],
        };
        let f = PiecewisePolynomial::new(1, 1, vec![inside]).unwrap();
        assert_eq!(f.eval(&[Rational::new(1, 2)]), vec![r(7)]);
        assert_eq!(f.eval(&[r(1)]), vec![r(0)]);
        assert_eq!(f.eval_f64(&[0.5]), vec![7.0]);
        assert_eq!(f.eval_f64(&[2.0]), vec![0.0]);
    }

    #[test]
    fn shape_errors() {
        let bad = Piece {
            below_norm_sq: None,
            components: vec![Polynomial::var(3, 2)],
        };
        assert!(PiecewisePolynomial::new(2, 1, vec![bad]).is_err());
        assert!(Builtin::Constant { value: vec![r(1)] }.compile(2, 2).is_err());
        assert!(Builtin::ComplexPolynomial { coefficients: vec![] }
            .compile(3, 3)
            .is_err());
    }

    #[test]
    fn spec_json_forms() {
        let s: CompactPartSpec =
            serde_json::from_str(r#"{"builtin":"constant","params":{"value":["1","-1/2"]}}"#).unwrap();
        assert_eq!(
            s,
            CompactPartSpec::Builtin(Builtin::Constant {
                value: vec![r(1), Rational::new(-1, 2)]
            })
        );
        let s: CompactPartSpec = serde_json::from_str(r#"{"builtin":"zero"}"#).unwrap();
        assert_eq!(s, CompactPartSpec::Builtin(Builtin::Zero));
        let s: CompactPartSpec = serde_json::from_str(
            r#"{"piecewise":{"input_dim":1,"output_dim":1,"pieces":[{"below_norm_sq":"1/4","components":[[{"coeff":"3","exponents":[2]}]]}]}}"#,
        )
        .unwrap();
        match s {
            CompactPartSpec::Piecewise { piecewise } => {
                assert_eq!(piecewise.eval(&[Rational::new(1, 3)]), vec![Rational::new(1, 3)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
