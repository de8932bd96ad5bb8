//! Brouwer degree of a map `R^n → R^n` (`n <= 3`) on a ball about the origin.
//!
//! * `n = 1`: `(sign g(r) - sign g(-r)) / 2`.
//! * `n = 2`: winding number of `g` along the circle of radius `r`, with the
//!   circle bisected until the image turns by less than
//!   [`DegreeOptions::max_step_angle`] per step.
//! * `n = 3`: signed solid angle of the image of a subdivided octahedral
//!   triangulation of the sphere, divided by `4π`.
//!
//! The accumulated total is accepted only when it lies within `1/4` of an
//! integer, so the rounding is unambiguous.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegreeError {
    #[error("map vanishes (numerically) on the boundary near {0:?}")]
    ZeroOnBoundary(Vec<f64>),
    #[error("refinement budget exhausted before every boundary step was certified")]
    RefinementBudgetExceeded,
    #[error("boundary sum {0} is not within 1/4 of an integer")]
    Uncertified(f64),
    #[error("degree is only computed in dimensions 1..=3, got {0}")]
    UnsupportedDimension(usize),
    #[error("radius must be positive")]
    NonPositiveRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeOptions {
    /// Maximum bisection depth per initial boundary cell.
    pub max_refine: u32,
    /// A boundary step is accepted once the image turns by less than this.
    pub max_step_angle: f64,
    /// Hard cap on map evaluations.
    pub max_evaluations: usize,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions {
            max_refine: 16,
            max_step_angle: PI / 4.0,
            max_evaluations: 4_000_000,
        }
    }
}

struct Counter<'a, F> {
    g: &'a F,
    evaluations: usize,
    limit: usize,
    tol: f64,
}

impl<F: Fn(&[f64]) -> Vec<f64>> Counter<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<Vec<f64>, DegreeError> {
        self.evaluations += 1;
        if self.evaluations > self.limit {
            return Err(DegreeError::RefinementBudgetExceeded);
        }
        let v = (self.g)(x);
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n.is_nan() || n <= self.tol {
            return Err(DegreeError::ZeroOnBoundary(x.to_vec()));
        }
        Ok(v)
    }
}

/// Degree of `g` on the ball of radius `radius` about the origin.
pub fn brouwer_degree<F>(g: &F, dim: usize, radius: &Rational, opts: &DegreeOptions) -> Result<i64, DegreeError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if !radius.is_positive() {
        return Err(DegreeError::NonPositiveRadius);
    }
    let r = radius.to_f64();
    let mut counter = Counter {
        g,
        evaluations: 0,
        limit: opts.max_evaluations,
        tol: 0.0,
    };
    counter.tol = boundary_scale(&mut counter, dim, r)? * 1e-12;
    match dim {
        1 => degree_1d(&mut counter, r),
        2 => degree_2d(&mut counter, r, opts),
        3 => degree_3d(&mut counter, r, opts),
        _ => Err(DegreeError::UnsupportedDimension(dim)),
    }
}

/// Largest image norm over a coarse boundary sample, for the zero tolerance.
fn boundary_scale<F: Fn(&[f64]) -> Vec<f64>>(c: &mut Counter<F>, dim: usize, r: f64) -> Result<f64, DegreeError> {
    if !(1..=3).contains(&dim) {
        return Err(DegreeError::UnsupportedDimension(dim));
    }
    let mut scale: f64 = 0.0;
    for i in 0..dim {
        for s in [-1.0, 1.0] {
            let mut x = vec![0.0; dim];
            x[i] = s * r;
            let v = (c.g)(&x);
            scale = scale.max(v.iter().map(|a| a * a).sum::<f64>().sqrt());
        }
    }
    Ok(scale.max(f64::MIN_POSITIVE))
}

fn certify(total: f64) -> Result<i64, DegreeError> {
    let rounded = total.round();
    if (total - rounded).abs() < 0.25 {
        Ok(rounded as i64)
    } else {
        Err(DegreeError::Uncertified(total))
    }
}

fn degree_1d<F: Fn(&[f64]) -> Vec<f64>>(c: &mut Counter<F>, r: f64) -> Result<i64, DegreeError> {
    let lo = c.eval(&[-r])?[0];
    let hi = c.eval(&[r])?[0];
    Ok(((hi.signum() - lo.signum()) / 2.0) as i64)
}

fn turn(a: &[f64], b: &[f64]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot)
}

fn degree_2d<F: Fn(&[f64]) -> Vec<f64>>(c: &mut Counter<F>, r: f64, opts: &DegreeOptions) -> Result<i64, DegreeError> {
    const CELLS: usize = 64;
    let point = |t: f64| [r * t.cos(), r * t.sin()];
    let mut total = 0.0;
    let first = c.eval(&point(0.0))?;
    let mut prev_t = 0.0;
    let mut prev_v = first.clone();
    for k in 1..=CELLS {
        let t = 2.0 * PI * k as f64 / CELLS as f64;
        let v = if k == CELLS { first.clone() } else { c.eval(&point(t))? };
        total += arc_turn(c, &point, prev_t, &prev_v, t, &v, 0, opts)?;
        prev_t = t;
        prev_v = v;
    }
    certify(total / (2.0 * PI))
}

#[allow(clippy::too_many_arguments)]
fn arc_turn<F, P>(
    c: &mut Counter<F>,
    point: &P,
    t0: f64,
    v0: &[f64],
    t1: f64,
    v1: &[f64],
    depth: u32,
    opts: &DegreeOptions,
) -> Result<f64, DegreeError>
where
    F: Fn(&[f64]) -> Vec<f64>,
    P: Fn(f64) -> [f64; 2],
{
    let a = turn(v0, v1);
    if a.abs() < opts.max_step_angle {
        return Ok(a);
    }
    if depth >= opts.max_refine {
        return Err(DegreeError::RefinementBudgetExceeded);
    }
    let tm = 0.5 * (t0 + t1);
    let vm = c.eval(&point(tm))?;
    Ok(arc_turn(c, point, t0, v0, tm, &vm, depth + 1, opts)? + arc_turn(c, point, tm, &vm, t1, v1, depth + 1, opts)?)
}

fn unit(v: &[f64]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Signed solid angle of the flat triangle spanned by three unit vectors.
fn solid_angle(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let num = dot3(a, &cross3(b, c));
    let den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    2.0 * num.atan2(den)
}

fn degree_3d<F: Fn(&[f64]) -> Vec<f64>>(c: &mut Counter<F>, r: f64, opts: &DegreeOptions) -> Result<i64, DegreeError> {
    let mut total = 0.0;
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let a = [sx, 0.0, 0.0];
                let b = [0.0, sy, 0.0];
                let cc = [0.0, 0.0, sz];
                // outward orientation
                let (b, cc) = if sx * sy * sz > 0.0 { (b, cc) } else { (cc, b) };
                let va = unit(&c.eval(&scaled(&a, r))?);
                let vb = unit(&c.eval(&scaled(&b, r))?);
                let vc = unit(&c.eval(&scaled(&cc, r))?);
                total += face_angle(c, r, [a, b, cc], [va, vb, vc], 0, opts)?;
            }
        }
    }
    certify(total / (4.0 * PI))
}

fn scaled(p: &[f64; 3], r: f64) -> [f64; 3] {
    [p[0] * r, p[1] * r, p[2] * r]
}

fn midpoint_on_sphere(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    unit(&[a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

fn face_angle<F: Fn(&[f64]) -> Vec<f64>>(
    c: &mut Counter<F>,
    r: f64,
    p: [[f64; 3]; 3],
    v: [[f64; 3]; 3],
    depth: u32,
    opts: &DegreeOptions,
) -> Result<f64, DegreeError> {
    let cos_limit = opts.max_step_angle.cos();
    let fine = dot3(&v[0], &v[1]) > cos_limit && dot3(&v[1], &v[2]) > cos_limit && dot3(&v[2], &v[0]) > cos_limit;
    if fine {
        return Ok(solid_angle(&v[0], &v[1], &v[2]));
    }
    if depth >= opts.max_refine {
        return Err(DegreeError::RefinementBudgetExceeded);
    }
    let m01 = midpoint_on_sphere(&p[0], &p[1]);
    let m12 = midpoint_on_sphere(&p[1], &p[2]);
    let m20 = midpoint_on_sphere(&p[2], &p[0]);
    let w01 = unit(&c.eval(&scaled(&m01, r))?);
    let w12 = unit(&c.eval(&scaled(&m12, r))?);
    let w20 = unit(&c.eval(&scaled(&m20, r))?);
    let d = depth + 1;
    Ok(face_angle(c, r, [p[0], m01, m20], [v[0], w01, w20], d, opts)?
        + face_angle(c, r, [m01, p[1], m12], [w01, v[1], w12], d, opts)?
        + face_angle(c, r, [m20, m12, p[2]], [w20, w12, v[2]], d, opts)?
        + face_angle(c, r, [m01, m12, m20], [w01, w12, w20], d, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg<F: Fn(&[f64]) -> Vec<f64>>(g: F, dim: usize, radius: i64) -> Result<i64, DegreeError> {
        brouwer_degree(&g, dim, &Rational::from(radius), &DegreeOptions::default())
    }

    /// Complex multiplication helpers for building planar maps.
    fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn cpow(z: (f64, f64), k: u32) -> (f64, f64) {
        (0..k).fold((1.0, 0.0), |acc, _| cmul(acc, z))
    }

    #[test]
    fn identity_every_dimension() {
        for dim in 1..=3 {
            assert_eq!(deg(|x| x.to_vec(), dim, 1).unwrap(), 1, "dim={dim}");
        }
    }

    #[test]
    fn powers_of_z() {
        // analytic winding of z^k around a circle enclosing 0 is k
        for k in 1..=5u32 {
            let g = move |x: &[f64]| {
                let w = cpow((x[0], x[1]), k);
                vec![w.0, w.1]
            };
            assert_eq!(deg(g, 2, 2).unwrap(), k as i64);
        }
        // conjugate: -1
        assert_eq!(deg(|x| vec![x[0], -x[1]], 2, 1).unwrap(), -1);
    }

    #[test]
    fn linear_maps_match_determinant_sign() {
        let mats: [[[f64; 3]; 3]; 4] = [
            [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
            [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            [[2.0, 1.0, 0.0], [0.0, 1.0, 3.0], [1.0, 0.0, 1.0]],
            [[1.0, 2.0, 3.0], [0.0, -1.0, 4.0], [5.0, 6.0, 0.0]],
        ];
        for m in &mats {
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            let m = *m;
            let g = move |x: &[f64]| (0..3).map(|i| (0..3).map(|j| m[i][j] * x[j]).sum()).collect();
            assert_eq!(deg(g, 3, 1).unwrap(), det.signum() as i64);
        }
    }

    #[test]
    fn one_dimensional_crossings() {
        assert_eq!(deg(|x| vec![x[0] * x[0] - 1.0], 1, 2).unwrap(), 0);
        assert_eq!(deg(|x| vec![-x[0] * x[0] * x[0]], 1, 2).unwrap(), -1);
        assert_eq!(deg(|x| vec![(x[0] - 0.5) * (x[0] + 0.5) * x[0]], 1, 2).unwrap(), 1);
    }

    #[test]
    fn additive_over_separated_zeros() {
        // (z - 1)(z̄ + 1): local degrees +1 at z = 1 and -1 at z = -1
        let g = |x: &[f64]| {
            let w = cmul((x[0] - 1.0, x[1]), (x[0] + 1.0, -x[1]));
            vec![w.0, w.1]
        };
        let total = deg(g, 2, 3).unwrap();
        let around = |cx: f64| move |x: &[f64]| g(&[x[0] + cx, x[1]]);
        let a = brouwer_degree(&around(1.0), 2, &Rational::new(1, 2), &DegreeOptions::default()).unwrap();
        let b = brouwer_degree(&around(-1.0), 2, &Rational::new(1, 2), &DegreeOptions::default()).unwrap();
        assert_eq!((a, b), (1, -1));
        assert_eq!(total, a + b);

        // (z - 1)²(z + 1): 2 + 1
        let h = |x: &[f64]| {
            let w = cmul(cpow((x[0] - 1.0, x[1]), 2), (x[0] + 1.0, x[1]));
            vec![w.0, w.1]
        };
        assert_eq!(deg(h, 2, 3).unwrap(), 3);
    }

    #[test]
    fn product_map_multiplies_degrees() {
        let g1 = |t: f64| t * t * t - t; // zeros -1, 0, 1: degree 1
        let g2 = |t: f64| 0.25 - t * t; // zeros ±1/2: degree 0
        let g3 = |t: f64| -(t - 0.3); // degree -1
        type Scalar<'a> = &'a dyn Fn(f64) -> f64;
        let cases: [(Scalar, Scalar); 3] = [(&g1, &g3), (&g3, &g3), (&g1, &g2)];
        for (a, b) in cases {
            let da = deg(|x: &[f64]| vec![a(x[0])], 1, 2).unwrap();
            let db = deg(|x: &[f64]| vec![b(x[0])], 1, 2).unwrap();
            // the square [-2,2]² has the same degree as the disk of radius 3 here
            let dp = deg(|x: &[f64]| vec![a(x[0]), b(x[1])], 2, 3).unwrap();
            assert_eq!(dp, da * db);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            deg(|x| vec![x[0] - 1.0], 1, 1),
            Err(DegreeError::ZeroOnBoundary(_))
        ));
        assert!(matches!(
            deg(|x| x.to_vec(), 4, 1),
            Err(DegreeError::UnsupportedDimension(4))
        ));
        assert!(matches!(deg(|x| x.to_vec(), 2, 0), Err(DegreeError::NonPositiveRadius)));
        let opts = DegreeOptions {
            max_refine: 0,
            ..DegreeOptions::default()
        };
        let g = |x: &[f64]| {
            let w = cpow((x[0], x[1]), 40);
            vec![w.0, w.1]
        };
        assert_eq!(
            brouwer_degree(&g, 2, &Rational::from(1), &opts),
            Err(DegreeError::RefinementBudgetExceeded)
        );
    }

    #[test]
    fn sphere_maps() {
        // (x, y, z) ↦ (Re w², Im w², z) with w = x + iy has degree 2
        let g = |x: &[f64]| {
            let w = cpow((x[0], x[1]), 2);
            vec![w.0, w.1, x[2]]
        };
        assert_eq!(deg(g, 3, 1).unwrap(), 2);
    }
}
