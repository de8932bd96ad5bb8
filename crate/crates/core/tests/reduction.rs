use cohomotopy::reduction::fixtures::{negative_identity_r3, random_problem, translation, z_squared_minus_one};
use cohomotopy::reduction::linalg::determinant;
use cohomotopy::reduction::{extend_subspace, Retraction};
use cohomotopy::{
    choose_reduction_subspace, reduce_and_degree, stability_check, verify_miss_condition, ReductionOptions,
};
use cohomotopy::{Rational, ReductionProblem};

fn opts(seed: u64) -> ReductionOptions {
    ReductionOptions {
        seed,
        ..ReductionOptions::default()
    }
}

fn full_space(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| Rational::from((i == j) as i64)).collect())
        .collect()
}

#[test]
fn random_problems_are_stable() {
    for seed in 0..20u64 {
        let rp = random_problem(seed);
        let p = &rp.problem;
        let v1 = choose_reduction_subspace(p, &opts(1)).unwrap();
        let v2 = choose_reduction_subspace(p, &opts(2)).unwrap();
        assert!(
            verify_miss_condition(p, &v1, &opts(1)).unwrap().ok,
            "{}",
            rp.description
        );
        let d1 = reduce_and_degree(p, &v1, &opts(1)).unwrap().degree;
        let d2 = reduce_and_degree(p, &v2, &opts(2)).unwrap().degree;
        assert_eq!(d1, d2, "seed {seed}: {}", rp.description);

        let w = extend_subspace(&v1, std::slice::from_ref(&rp.extra));
        if w.len() <= 3 {
            let s = stability_check(p, &v1, &w, &opts(1)).unwrap();
            assert!(s.stable, "seed {seed}: {} {s:?}", rp.description);
        }
        if p.target_dim() <= 3 {
            let full = reduce_and_degree(p, &full_space(p.target_dim()), &opts(1))
                .unwrap()
                .degree;
            assert_eq!(full, d1, "seed {seed}: {}", rp.description);
        }
        if rp.corank == 0 {
            let sign = determinant(p.linear_part()).signum() as i64;
            assert_eq!(d1, sign, "seed {seed}: {}", rp.description);
        }
    }
}

#[test]
fn normalized_retraction_agrees() {
    for seed in 20..26u64 {
        let p = random_problem(seed).problem;
        let v = choose_reduction_subspace(&p, &opts(1)).unwrap();
        let a = reduce_and_degree(&p, &v, &opts(1)).unwrap().degree;
        let o = ReductionOptions {
            retraction: Retraction::Normalized,
            ..opts(1)
        };
        assert_eq!(reduce_and_degree(&p, &v, &o).unwrap().degree, a);
    }
}

#[test]
fn anchors_with_enlarged_subspaces() {
    let cases: [(ReductionProblem, i64); 3] = [
        (translation(), 1),
        (z_squared_minus_one(), 2),
        (negative_identity_r3(), -1),
    ];
    for (p, expected) in cases {
        let v = choose_reduction_subspace(&p, &opts(7)).unwrap();
        let w = full_space(p.target_dim());
        let s = stability_check(&p, &v, &w, &opts(7)).unwrap();
        assert_eq!((s.degree_v, s.degree_w), (expected, expected));
    }
}

#[test]
fn problem_file_roundtrip() {
    for seed in 0..5u64 {
        let p = random_problem(seed).problem;
        let json = serde_json::to_string(&p).unwrap();
        let back: ReductionProblem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
