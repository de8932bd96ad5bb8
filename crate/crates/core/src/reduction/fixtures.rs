//! Reduction problems with known behaviour, and a seeded generator of random
//! index-zero problems whose reduced dimension stays at most 3.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{determinant, inverse, rank, RVec};
use super::poly::{Builtin, CompactPartSpec, Piece, PiecewisePolynomial, Polynomial};
use super::ReductionProblem;
use crate::rational::Rational;

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn int_matrix(m: &[Vec<i64>]) -> Vec<RVec> {
    m.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
}

/// `f = l` for an invertible square `l`, with radius chosen from `‖l⁻¹‖_F`.
pub fn linear_problem(l: Vec<RVec>) -> ReductionProblem {
    let n = l.len();
    let radius = radius_for(&l, 0);
    ReductionProblem::new(n, n, l, CompactPartSpec::Builtin(Builtin::Zero), radius).expect("invertible linear map")
}

/// `f(x) = x + (1/2, 1/2)` on `R²`.
pub fn translation() -> ReductionProblem {
    ReductionProblem::new(
        2,
        2,
        int_matrix(&[vec![1, 0], vec![0, 1]]),
        CompactPartSpec::Builtin(Builtin::Constant {
            value: vec![Rational::new(1, 2), Rational::new(1, 2)],
        }),
        r(2),
    )
    .expect("valid")
}

/// `f(z) = z² - 1` on `C ≅ R²`, with `l = 0`.
pub fn z_squared_minus_one() -> ReductionProblem {
    ReductionProblem::new(
        2,
        2,
        int_matrix(&[vec![0, 0], vec![0, 0]]),
        CompactPartSpec::Builtin(Builtin::ComplexPolynomial {
            coefficients: vec![[r(-1), r(0)], [r(0), r(0)], [r(1), r(0)]],
        }),
        r(2),
    )
    .expect("valid")
}

/// `f(x) = -x` on `R³`.
pub fn negative_identity_r3() -> ReductionProblem {
    linear_problem(int_matrix(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]))
}

/// `φ(x) = (1 - |x|²/ρ²)²`, supported in `|x| < ρ`.
fn bump(nvars: usize, rho_sq: &Rational) -> Polynomial {
    let inner = Polynomial::constant(nvars, Rational::one()).add(&Polynomial::norm_sq(nvars).scale(&-rho_sq.recip()));
    inner.mul(&inner)
}

/// `f(x) = x + φ(x) e₂` on `R²` with `φ` supported in the unit disk, so
/// `f(0) = e₂` sits on the unit sphere of `span(e₁)`.
pub fn bump_example() -> ReductionProblem {
    let phi = bump(2, &r(1));
    let piece = Piece {
        below_norm_sq: Some(r(1)),
        components: vec![Polynomial::zero(), phi],
    };
    let c = PiecewisePolynomial::new(2, 2, vec![piece]).expect("shape");
    ReductionProblem::new(
        2,
        2,
        int_matrix(&[vec![1, 0], vec![0, 1]]),
        CompactPartSpec::Piecewise { piecewise: c },
        r(2),
    )
    .expect("valid")
}

/// Smallest integer `R >= 2ρ` with `R² >= max(2‖A⁻¹‖_F², 2)`, where `A` is
/// the invertible block of `l`. Then `|l x| >= 1` once the kernel component
/// has norm below 1 and `|x| >= R`.
fn radius_for(a: &[RVec], rho: i64) -> Rational {
    let frob: Rational = if a.is_empty() {
        Rational::zero()
    } else {
        inverse(a)
            .expect("invertible block")
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum()
    };
    let need = std::cmp::max(&frob * &r(2), r(2));
    let mut radius = std::cmp::max(2 * rho, 1);
    while r(radius * radius) < need {
        radius += 1;
    }
    r(radius)
}

#[derive(Debug, Clone)]
pub struct RandomProblem {
    pub seed: u64,
    pub problem: ReductionProblem,
    pub corank: usize,
    /// Dimension of the span of the bump's values.
    pub bump_rank: usize,
    /// A target vector outside `coker(l) + S`, for enlarging subspaces.
    pub extra: RVec,
    pub description: String,
}

fn signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = vec![vec![0; n]; n];
    for (i, &p) in perm.iter().enumerate() {
        m[i][p] = if rng.random_bool(0.5) { 1 } else { -1 };
    }
    m
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Row `i` of an integer matrix as a linear polynomial in `nvars` variables.
fn linear_form(row: &[i64], nvars: usize) -> Polynomial {
    row.iter().enumerate().fold(Polynomial::zero(), |acc, (j, &a)| {
        acc.add(&Polynomial::var(nvars, j).scale(&r(a)))
    })
}

fn random_quadratic(rng: &mut ChaCha8Rng, nvars: usize) -> Polynomial {
    let mut q = Polynomial::constant(nvars, r(rng.random_range(-2..=2)));
    for i in 0..nvars {
        q = q.add(&Polynomial::var(nvars, i).scale(&r(rng.random_range(-2..=2))));
    }
    for _ in 0..2 {
        let i = rng.random_range(0..nvars);
        let j = rng.random_range(0..nvars);
        let c = Rational::new(rng.random_range(-2..=2), 2);
        q = q.add(&Polynomial::var(nvars, i).mul(&Polynomial::var(nvars, j)).scale(&c));
    }
    q
}

/// `(a + ib)^k` as a pair of real polynomials.
fn complex_power(a: &Polynomial, b: &Polynomial, k: u32) -> (Polynomial, Polynomial) {
    let nvars = a.arity().max(b.arity());
    let mut re = Polynomial::constant(nvars, Rational::one());
    let mut im = Polynomial::zero();
    for _ in 0..k {
        let next_re = re.mul(a).add(&im.mul(b).scale(&r(-1)));
        let next_im = re.mul(b).add(&im.mul(a));
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// A random problem `f = l + c` on `R^n`, `n ∈ {2, 3, 4}`.
///
/// `l = P·diag(A, 0_r)·Q` with signed permutations `P`, `Q` and an invertible
/// integer block `A`. The compact part is `g(t)` placed in the cokernel,
/// where `t` are the kernel coordinates and `|g(t)| >= |t|` for `|t| >= 1`,
/// plus a bump `φ(x)·Σ q_j(x) s_j` with quadratic `q_j` and integer vectors
/// `s_j` spanning an `s`-dimensional `S`. `r + s <= min(n, 3)`.
pub fn random_problem(seed: u64) -> RandomProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = rng.random_range(2..=4);
    let shapes: Vec<(usize, usize)> = [(0, 1), (0, 2), (1, 1), (2, 0), (1, 0), (2, 1), (1, 2)]
        .into_iter()
        .filter(|&(cr, s)| cr + s <= n.min(3))
        .collect();
    let (corank, bump_rank) = shapes[rng.random_range(0..shapes.len())];
    let m = n - corank;

    let block: Vec<Vec<i64>> = loop {
        let a: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        if m == 0 || !determinant(&int_matrix(&a)).is_zero() {
            break a;
        }
    };
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..m {
        for j in 0..m {
            d[i][j] = block[i][j];
        }
    }
    let p_tgt = signed_permutation(&mut rng, n);
    let p_dom = signed_permutation(&mut rng, n);
    let l = mat_mul(&mat_mul(&p_tgt, &d), &p_dom);

    // kernel coordinates t_i = (Q x)_{m+i}; cokernel directions P e_{m+i}
    let t: Vec<Polynomial> = (0..corank).map(|i| linear_form(&p_dom[m + i], n)).collect();
    let coker_dir = |i: usize| -> Vec<i64> { (0..n).map(|row| p_tgt[row][m + i]).collect() };
    let (g, g_name): (Vec<Polynomial>, String) = match corank {
        0 => (Vec::new(), "none".into()),
        1 => {
            let t0 = &t[0];
            let t3 = t0.mul(t0).mul(t0);
            let choices = [
                (t0.clone(), "t"),
                (t0.scale(&r(-1)), "-t"),
                (t3.clone(), "t^3"),
                (t3.scale(&r(-1)), "-t^3"),
                (t3.add(t0), "t^3+t"),
                (t0.mul(t0).add(&Polynomial::constant(n, Rational::one())), "t^2+1"),
            ];
            let (p, name) = choices[rng.random_range(0..choices.len())].clone();
            (vec![p], name.into())
        }
        _ => {
            let k: u32 = rng.random_range(1..=3);
            let conj = rng.random_bool(0.5);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            let b = if conj { t[1].scale(&r(-1)) } else { t[1].clone() };
            let (re, im) = complex_power(&t[0], &b, k);
            let name = format!(
                "{}{}^{k}",
                if sign < 0 { "-" } else { "" },
                if conj { "zbar" } else { "z" }
            );
            (vec![re.scale(&r(sign)), im.scale(&r(sign))], name)
        }
    };
    let mut outer: Vec<Polynomial> = vec![Polynomial::zero(); n];
    for (i, gi) in g.iter().enumerate() {
        let dir = coker_dir(i);
        for (k, &e) in dir.iter().enumerate() {
            if e != 0 {
                outer[k] = outer[k].add(&gi.scale(&r(e)));
            }
        }
    }

    let coker: Vec<RVec> = (0..corank)
        .map(|i| coker_dir(i).iter().map(|&x| r(x)).collect())
        .collect();
    let s_vectors: Vec<Vec<i64>> = loop {
        let s: Vec<Vec<i64>> = (0..bump_rank)
            .map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect())
            .collect();
        let mut all = coker.clone();
        all.extend(int_matrix(&s));
        if rank(&all, n) == corank + bump_rank {
            break s;
        }
    };
    let extra: RVec = loop {
        let e: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
        let mut all = coker.clone();
        all.extend(int_matrix(&s_vectors));
        all.push(e.iter().map(|&x| r(x)).collect());
        if corank + bump_rank == n || rank(&all, n) == corank + bump_rank + 1 {
            break e.iter().map(|&x| r(x)).collect();
        }
    };

    let rho: i64 = rng.random_range(1..=2);
    let rho_sq = r(rho * rho);
    let phi = bump(n, &rho_sq);
    let mut inner = outer.clone();
    for s in &s_vectors {
        let q = random_quadratic(&mut rng, n).mul(&phi);
        for (k, &e) in s.iter().enumerate() {
            if e != 0 {
                inner[k] = inner[k].add(&q.scale(&r(e)));
            }
        }
    }
    let pieces = vec![
        Piece {
            below_norm_sq: Some(rho_sq),
            components: inner,
        },
        Piece {
            below_norm_sq: None,
            components: outer,
        },
    ];
    let compact = PiecewisePolynomial::new(n, n, pieces).expect("shape");
    let radius = radius_for(&int_matrix(&block), rho);
    let problem = ReductionProblem::new(
        n,
        n,
        int_matrix(&l),
        CompactPartSpec::Piecewise { piecewise: compact },
        radius,
    )
    .expect("constructed to satisfy the bound certificate");
    RandomProblem {
        seed,
        problem,
        corank,
        bump_rank,
        extra,
        description: format!("n={n} corank={corank} bump_rank={bump_rank} g={g_name} rho={rho}"),
    }
}
