//! Finite-dimensional model of a Fredholm map `f = l + c : R^{n'} → R^n`
//! and its reduction to a map between spheres of equal dimension.
//!
//! Given a subspace `V` of the target that together with `im l` spans it,
//! the map is restricted to `U = l⁻¹(V)` and composed with the orthogonal
//! projection onto `V`. At index zero `dim U = dim V`, and the Brouwer degree
//! of the restricted map, corrected by the orientations of the splittings
//! `R^{n'} = U ⊕ U⊥` and `R^n = V ⊕ l(U⊥)`, does not depend on `V`.

pub mod degree;
pub mod demo;
pub mod fixtures;
pub mod linalg;
pub mod poly;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use degree::{brouwer_degree, DegreeError, DegreeOptions};
use linalg::{determinant, dot, mat_vec, norm_f64, nullspace, orthonormalize, rank, to_f64, RVec, SpanBuilder};
use poly::{CompactPartSpec, PiecewisePolynomial};

pub const MAX_DIM: usize = 4;
pub const MAX_REDUCED_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("epsilon must lie in (0, 1/4], got {0}")]
    EpsilonOutOfRange(Rational),
    #[error("epsilon-net needs more than {0} centers")]
    SamplingBudgetExceeded(usize),
    #[error("the linear part has index {0}; only index 0 has an integer degree here")]
    NonzeroIndex(i64),
    #[error("reduced dimension {0} exceeds 3")]
    DimensionTooLarge(usize),
    #[error("subspace is not admissible: {0}")]
    InadmissibleSubspace(String),
    #[error("miss condition fails: worst margin {worst_margin:?}, largest normal component {max_normal_component}")]
    MissConditionViolated {
        worst_margin: Option<f64>,
        max_normal_component: f64,
    },
    #[error("the first subspace is not contained in the second")]
    NotNested,
    #[error("|f(x)| < 1 at {point:?} although |x| >= R")]
    BoundCertificateViolated { point: Vec<Rational> },
    #[error("demo dimension must lie in 3..=12, got {0}")]
    DemoDimension(usize),
    #[error(transparent)]
    Degree(#[from] DegreeError),
}

/// `f = l + c` with a radius beyond which `|f| >= 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ProblemSpec", into = "ProblemSpec")]
pub struct ReductionProblem {
    domain_dim: usize,
    target_dim: usize,
    linear_part: Vec<RVec>,
    compact_spec: CompactPartSpec,
    compact: PiecewisePolynomial,
    bound_radius: Rational,
    linear_f64: Vec<Vec<f64>>,
}

/// The unchecked JSON form of a [`ReductionProblem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub domain_dim: usize,
    pub target_dim: usize,
    pub linear_part: Vec<RVec>,
    pub compact_part: CompactPartSpec,
    pub bound_radius: Rational,
}

impl TryFrom<ProblemSpec> for ReductionProblem {
    type Error = ReductionError;
    fn try_from(f: ProblemSpec) -> Result<Self, ReductionError> {
        ReductionProblem::new(
            f.domain_dim,
            f.target_dim,
            f.linear_part,
            f.compact_part,
            f.bound_radius,
        )
    }
}

impl From<ReductionProblem> for ProblemSpec {
    fn from(p: ReductionProblem) -> Self {
        ProblemSpec {
            domain_dim: p.domain_dim,
            target_dim: p.target_dim,
            linear_part: p.linear_part,
            compact_part: p.compact_spec,
            bound_radius: p.bound_radius,
        }
    }
}

impl PartialEq for ReductionProblem {
    fn eq(&self, other: &Self) -> bool {
        self.domain_dim == other.domain_dim
            && self.target_dim == other.target_dim
            && self.linear_part == other.linear_part
            && self.compact_spec == other.compact_spec
            && self.bound_radius == other.bound_radius
    }
}

const CERTIFICATE_SAMPLES: usize = 256;

impl ReductionProblem {
    /// Validates shapes and checks `|f| >= 1` on a deterministic sample of
    /// the shell `R <= |x| <= 2R`.
    pub fn new(
        domain_dim: usize,
        target_dim: usize,
        linear_part: Vec<RVec>,
        compact_part: CompactPartSpec,
        bound_radius: Rational,
    ) -> Result<Self, ReductionError> {
        let invalid = |m: String| Err(ReductionError::InvalidProblem(m));
        if !(1..=MAX_DIM).contains(&domain_dim) || !(1..=MAX_DIM).contains(&target_dim) {
            return invalid(format!(
                "dimensions must lie in 1..={MAX_DIM}, got {domain_dim} -> {target_dim}"
            ));
        }
        if linear_part.len() != target_dim || linear_part.iter().any(|r| r.len() != domain_dim) {
            return invalid(format!("linear_part must be a {target_dim}x{domain_dim} matrix"));
        }
        if !bound_radius.is_positive() {
            return invalid("bound_radius must be positive".into());
        }
        let compact = match &compact_part {
            CompactPartSpec::Builtin(b) => b.compile(domain_dim, target_dim)?,
            CompactPartSpec::Piecewise { piecewise } => {
                if piecewise.input_dim() != domain_dim || piecewise.output_dim() != target_dim {
                    return invalid(format!(
                        "compact part maps R^{} -> R^{}, expected R^{domain_dim} -> R^{target_dim}",
                        piecewise.input_dim(),
                        piecewise.output_dim()
                    ));
                }
                piecewise.clone()
            }
        };
        let linear_f64 = linear_part.iter().map(|r| to_f64(r)).collect();
        let p = ReductionProblem {
            domain_dim,
            target_dim,
            linear_part,
            compact_spec: compact_part,
            compact,
            bound_radius,
            linear_f64,
        };
        p.check_bound_certificate()?;
        Ok(p)
    }

    /// The same map with another radius, re-checked.
    pub fn with_bound_radius(&self, radius: Rational) -> Result<Self, ReductionError> {
        Self::new(
            self.domain_dim,
            self.target_dim,
            self.linear_part.clone(),
            self.compact_spec.clone(),
            radius,
        )
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn linear_part(&self) -> &[RVec] {
        &self.linear_part
    }

    pub fn compact_part(&self) -> &PiecewisePolynomial {
        &self.compact
    }

    pub fn bound_radius(&self) -> &Rational {
        &self.bound_radius
    }

    /// `dim ker l - dim coker l`.
    pub fn index(&self) -> i64 {
        self.domain_dim as i64 - self.target_dim as i64
    }

    pub fn eval(&self, x: &[Rational]) -> RVec {
        let lx = mat_vec(&self.linear_part, x);
        let cx = self.compact.eval(x);
        lx.iter().zip(&cx).map(|(a, b)| a + b).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        let cx = self.compact.eval_f64(x);
        self.linear_f64
            .iter()
            .zip(cx)
            .map(|(row, c)| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + c)
            .collect()
    }

    /// Basis of `(im l)⊥`.
    pub fn cokernel_basis(&self) -> Vec<RVec> {
        let lt = linalg::transpose(&self.linear_part, self.domain_dim);
        nullspace(&lt, self.target_dim)
    }

    pub fn kernel_basis(&self) -> Vec<RVec> {
        nullspace(&self.linear_part, self.domain_dim)
    }

    fn check_bound_certificate(&self) -> Result<(), ReductionError> {
        let n = self.domain_dim;
        let r = &self.bound_radius;
        let r2 = r * r;
        let four_r2 = &r2 * &Rational::from(4);
        let mut points: Vec<RVec> = Vec::new();
        for i in 0..n {
            for s in [-2i64, -1, 1, 2] {
                let mut x = vec![Rational::zero(); n];
                x[i] = r * &Rational::from(s);
                points.push(x);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let mut attempts = 0;
        while points.len() < CERTIFICATE_SAMPLES + 4 * n && attempts < 64 * CERTIFICATE_SAMPLES {
            attempts += 1;
            let x: RVec = (0..n)
                .map(|_| r * &Rational::new(rng.random_range(-256i64..=256), 128))
                .collect();
            let n2: Rational = x.iter().map(|v| v * v).sum();
            if n2 >= r2 && n2 <= four_r2 {
                points.push(x);
            }
        }
        let bad = points.par_iter().find_first(|x| {
            let fx = self.eval(x);
            let n2: Rational = fx.iter().map(|v| v * v).sum();
            n2 < Rational::one()
        });
        match bad {
            Some(point) => Err(ReductionError::BoundCertificateViolated { point: point.clone() }),
            None => Ok(()),
        }
    }
}

/// How the reduced map is normalised before taking its degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Retraction {
    /// `pr_V(h)`.
    #[default]
    Projection,
    /// `pr_V(h) · |h| / |pr_V(h)|`, a positive rescaling of the projection.
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionOptions {
    pub epsilon: Rational,
    /// Points sampled in `ball(R)` for the ε-net.
    pub samples: usize,
    pub max_centers: usize,
    /// Points sampled in `l⁻¹(V) ∩ ball(R)` for the miss check.
    pub verify_samples: usize,
    pub seed: u64,
    pub retraction: Retraction,
    pub degree: DegreeOptions,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            epsilon: Rational::new(1, 4),
            samples: 1500,
            max_centers: 1500,
            verify_samples: 2000,
            seed: 1,
            retraction: Retraction::Projection,
            degree: DegreeOptions::default(),
        }
    }
}

fn check_epsilon(eps: &Rational) -> Result<(), ReductionError> {
    if !eps.is_positive() || *eps > Rational::new(1, 4) {
        return Err(ReductionError::EpsilonOutOfRange(eps.clone()));
    }
    Ok(())
}

/// Deterministic rational points of `ball(R)` in `R^dim`: the origin, the
/// axis points `±R e_i`, then uniform points of `ball(jR/64)` for a uniform
/// `j ∈ 1..=64`, so that small neighbourhoods of the origin are not starved
/// in higher dimensions.
fn ball_samples(dim: usize, radius: &Rational, count: usize, seed: u64) -> Vec<RVec> {
    let mut out = vec![vec![Rational::zero(); dim]];
    for i in 0..dim {
        for s in [1i64, -1] {
            let mut x = vec![Rational::zero(); dim];
            x[i] = radius * &Rational::from(s);
            out.push(x);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let k: Vec<i64> = (0..dim).map(|_| rng.random_range(-1024i64..=1024)).collect();
        if k.iter().map(|v| v * v).sum::<i64>() <= 1024 * 1024 {
            let shell = radius * &Rational::new(rng.random_range(1i64..=64), 64 * 1024);
            out.push(k.iter().map(|&v| &shell * &Rational::from(v)).collect());
        }
    }
    out
}

/// Exactly orthogonal (unnormalised) basis of the span of `vs`.
fn orthogonal_basis(vs: &[RVec]) -> Vec<RVec> {
    let mut out: Vec<RVec> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let coeff = dot(&w, u) / dot(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= &(&coeff * ui);
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

fn remove_components(v: &[Rational], ortho: &[RVec]) -> RVec {
    let mut w = v.to_vec();
    for u in ortho {
        let coeff = dot(&w, u) / dot(u, u);
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi -= &(&coeff * ui);
        }
    }
    w
}

fn remove_components_f64(v: &[f64], ortho: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for q in ortho {
        let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi -= c * qi;
        }
    }
    w
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Basis of `V = coker(l) + span(ε-net centres of c(ball(R)))`.
///
/// Since `coker(l) ⊆ V`, the sampled values are first projected onto
/// `im l`, and the net is built there by farthest-point selection.
pub fn choose_reduction_subspace(p: &ReductionProblem, opts: &ReductionOptions) -> Result<Vec<RVec>, ReductionError> {
    check_epsilon(&opts.epsilon)?;
    let coker = p.cokernel_basis();
    let ortho = orthogonal_basis(&coker);
    let ortho_f64 = orthonormalize(&ortho.iter().map(|v| to_f64(v)).collect::<Vec<_>>());
    let samples = ball_samples(p.domain_dim, &p.bound_radius, opts.samples, opts.seed);
    let values: Vec<Vec<f64>> = samples
        .par_iter()
        .map(|x| remove_components_f64(&p.compact.eval_f64(&to_f64(x)), &ortho_f64))
        .collect();

    let eps = opts.epsilon.to_f64();
    let eps2 = eps * eps;
    let mut centers = vec![0usize];
    let mut nearest: Vec<f64> = values.iter().map(|v| dist2(v, &values[0])).collect();
    loop {
        let (far, &d2) =
            nearest.iter().enumerate().fold(
                (0, &f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if d2 <= eps2 {
            break;
        }
        if centers.len() >= opts.max_centers {
            return Err(ReductionError::SamplingBudgetExceeded(opts.max_centers));
        }
        centers.push(far);
        let c = values[far].clone();
        nearest
            .par_iter_mut()
            .zip(&values)
            .for_each(|(d, v)| *d = d.min(dist2(v, &c)));
    }

    let mut span = SpanBuilder::new(p.target_dim);
    for v in &coker {
        span.insert(v);
    }
    for &i in &centers {
        if span.is_full() {
            break;
        }
        let c = remove_components(&p.compact.eval(&samples[i]), &ortho);
        span.insert(&c);
    }
    Ok(span.into_basis())
}

/// The splittings attached to a subspace `V` of the target.
struct Splitting {
    v_basis: Vec<RVec>,
    u_basis: Vec<RVec>,
    u_perp: Vec<RVec>,
    q_u: Vec<Vec<f64>>,
    q_v: Vec<Vec<f64>>,
    q_v_perp: Vec<Vec<f64>>,
}

impl Splitting {
    fn new(p: &ReductionProblem, v: &[RVec]) -> Result<Self, ReductionError> {
        if let Some(bad) = v.iter().find(|x| x.len() != p.target_dim) {
            return Err(ReductionError::InadmissibleSubspace(format!(
                "basis vector of length {} in a target of dimension {}",
                bad.len(),
                p.target_dim
            )));
        }
        let mut span = SpanBuilder::new(p.target_dim);
        for x in v {
            span.insert(x);
        }
        let v_basis = span.into_basis();
        let v_perp = nullspace(&v_basis, p.target_dim);
        let constraints: Vec<RVec> = v_perp
            .iter()
            .map(|w| {
                (0..p.domain_dim)
                    .map(|j| (0..p.target_dim).map(|k| &w[k] * &p.linear_part[k][j]).sum())
                    .collect()
            })
            .collect();
        let u_basis = nullspace(&constraints, p.domain_dim);
        let u_perp = nullspace(&u_basis, p.domain_dim);
        let f64s = |b: &[RVec]| orthonormalize(&b.iter().map(|x| to_f64(x)).collect::<Vec<_>>());
        Ok(Splitting {
            q_u: f64s(&u_basis),
            q_v: f64s(&v_basis),
            q_v_perp: f64s(&v_perp),
            v_basis,
            u_basis,
            u_perp,
        })
    }

    fn spans_with_image(&self, p: &ReductionProblem) -> bool {
        let mut vs = self.v_basis.clone();
        vs.extend(linalg::transpose(&p.linear_part, p.domain_dim));
        rank(&vs, p.target_dim) == p.target_dim
    }

    fn embed(&self, y: &[f64], dim: usize) -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for (yi, q) in y.iter().zip(&self.q_u) {
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi += yi * qi;
            }
        }
        x
    }

    /// `sign det [U basis; U⊥ basis] · sign det [V basis; l(U⊥ basis)]`.
    fn orientation(&self, p: &ReductionProblem) -> i64 {
        let mut dom = self.u_basis.clone();
        dom.extend(self.u_perp.iter().cloned());
        let mut tgt = self.v_basis.clone();
        tgt.extend(self.u_perp.iter().map(|u| mat_vec(&p.linear_part, u)));
        (determinant(&dom).signum() * determinant(&tgt).signum()) as i64
    }
}

/// Outcome of the sampled check that `f(l⁻¹(V) ∩ ball(R))` keeps away from
/// the unit sphere of `V⊥`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissVerdict {
    pub ok: bool,
    /// Smallest distance to `S(V⊥)`; absent when `V⊥ = 0`.
    pub worst_margin: Option<f64>,
    /// Largest `|pr_{V⊥} f|` seen; bounded by `1/2` on admissible subspaces
    /// so that `pr_V f` cannot vanish where `|f| >= 1`.
    pub max_normal_component: f64,
    pub samples: usize,
}

pub fn verify_miss_condition(
    p: &ReductionProblem,
    v: &[RVec],
    opts: &ReductionOptions,
) -> Result<MissVerdict, ReductionError> {
    let s = Splitting::new(p, v)?;
    Ok(miss_verdict(p, &s, opts))
}

fn miss_verdict(p: &ReductionProblem, s: &Splitting, opts: &ReductionOptions) -> MissVerdict {
    let k = s.q_u.len();
    let r = p.bound_radius.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; k]];
    if k > 0 {
        while points.len() < opts.verify_samples {
            let y: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let n = norm_f64(&y);
            if n > 1.0 || n == 0.0 {
                continue;
            }
            // every fourth point on the boundary sphere, the rest with a uniform radius scale
            let scale = if points.len().is_multiple_of(4) {
                r / n
            } else {
                r * rng.random_range(0.0..=1.0)
            };
            points.push(y.iter().map(|v| v * scale).collect());
        }
    }
    let stats: Vec<(f64, f64)> = points
        .par_iter()
        .map(|y| {
            let h = p.eval_f64(&s.embed(y, p.domain_dim));
            let normal = norm_f64(
                &s.q_v_perp
                    .iter()
                    .map(|q| q.iter().zip(&h).map(|(a, b)| a * b).sum())
                    .collect::<Vec<f64>>(),
            );
            let along = (h.iter().map(|x| x * x).sum::<f64>() - normal * normal).max(0.0);
            let margin = (along + (normal - 1.0) * (normal - 1.0)).sqrt();
            (margin, normal)
        })
        .collect();
    let max_normal_component = stats.iter().map(|s| s.1).fold(0.0, f64::max) + 0.0;
    let worst_margin = if s.q_v_perp.is_empty() {
        None
    } else {
        Some(stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min))
    };
    MissVerdict {
        ok: max_normal_component <= 0.5 && worst_margin.is_none_or(|m| m >= 0.5),
        worst_margin,
        max_normal_component,
        samples: points.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    #[serde(rename = "subspace_V")]
    pub subspace_v: Vec<RVec>,
    pub reduced_dim: usize,
    pub degree: i64,
    pub epsilon: Rational,
    pub miss: MissVerdict,
}

/// Degree of the reduction of `f` to `l⁻¹(V) → V`.
pub fn reduce_and_degree(
    p: &ReductionProblem,
    v: &[RVec],
    opts: &ReductionOptions,
) -> Result<DegreeReport, ReductionError> {
    if p.index() != 0 {
        return Err(ReductionError::NonzeroIndex(p.index()));
    }
    let s = Splitting::new(p, v)?;
    if !s.spans_with_image(p) {
        return Err(ReductionError::InadmissibleSubspace(
            "V and the image of l do not span the target".into(),
        ));
    }
    let dim = s.v_basis.len();
    debug_assert_eq!(dim, s.u_basis.len());
    if dim > MAX_REDUCED_DIM {
        return Err(ReductionError::DimensionTooLarge(dim));
    }
    let miss = miss_verdict(p, &s, opts);
    if !miss.ok {
        return Err(ReductionError::MissConditionViolated {
            worst_margin: miss.worst_margin,
            max_normal_component: miss.max_normal_component,
        });
    }
    let coordinate_degree = if dim == 0 {
        1
    } else {
        let retraction = opts.retraction;
        let g = |y: &[f64]| -> Vec<f64> {
            let h = p.eval_f64(&s.embed(y, p.domain_dim));
            let pv: Vec<f64> = s
                .q_v
                .iter()
                .map(|q| q.iter().zip(&h).map(|(a, b)| a * b).sum())
                .collect();
            match retraction {
                Retraction::Projection => pv,
                Retraction::Normalized => {
                    let scale = norm_f64(&h) / norm_f64(&pv);
                    pv.iter().map(|x| x * scale).collect()
                }
            }
        };
        brouwer_degree(&g, dim, &p.bound_radius, &opts.degree)?
    };
    Ok(DegreeReport {
        subspace_v: s.v_basis.clone(),
        reduced_dim: dim,
        degree: coordinate_degree * s.orientation(p),
        epsilon: opts.epsilon.clone(),
        miss,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub degree_v: i64,
    pub degree_w: i64,
    pub dim_v: usize,
    pub dim_w: usize,
}

/// Compares the degrees obtained from `V ⊆ W`.
pub fn stability_check(
    p: &ReductionProblem,
    v: &[RVec],
    w: &[RVec],
    opts: &ReductionOptions,
) -> Result<StabilityVerdict, ReductionError> {
    let mut span_w = SpanBuilder::new(p.target_dim);
    for x in w {
        if x.len() != p.target_dim {
            return Err(ReductionError::InadmissibleSubspace(
                "basis vector of wrong length".into(),
            ));
        }
        span_w.insert(x);
    }
    if v.iter().any(|x| x.len() != p.target_dim || !span_w.contains(x)) {
        return Err(ReductionError::NotNested);
    }
    let rv = reduce_and_degree(p, v, opts)?;
    let rw = reduce_and_degree(p, w, opts)?;
    Ok(StabilityVerdict {
        stable: rv.degree == rw.degree,
        degree_v: rv.degree,
        degree_w: rw.degree,
        dim_v: rv.reduced_dim,
        dim_w: rw.reduced_dim,
    })
}

/// `V` enlarged by `extra`.
pub fn extend_subspace(v: &[RVec], extra: &[RVec]) -> Vec<RVec> {
    let dim = v.first().or(extra.first()).map_or(0, Vec::len);
    let mut span = SpanBuilder::new(dim);
    for x in v.iter().chain(extra) {
        span.insert(x);
    }
    span.into_basis()
}
