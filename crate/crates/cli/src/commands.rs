use std::fs;
use std::path::Path;

use cohomotopy::chamber::{make_path, signed_preimage_count, wall_crossing_jump, ChamberCount};
use cohomotopy::divisibility::{
    hurewicz_cokernel_order, hurewicz_kernel_order, sharpness_scan, sw_divisibility_lower_bound, DivisibilityError,
    DivisibilityReport,
};
use cohomotopy::fourmanifold::{
    dirac_index_d, divisibility_constraint, donaldson_k, expected_moduli_dimension, DonaldsonK, FourManifoldData,
};
use cohomotopy::lattice::{diagonal_witness, donaldson_admissible, validate, GramMatrix, LatticeVector};
use cohomotopy::reduction::degree::DegreeOptions;
use cohomotopy::reduction::demo::{proper_not_bounded_demo, DemoReport};
use cohomotopy::reduction::{
    choose_reduction_subspace, extend_subspace, reduce_and_degree, stability_check, DegreeReport, ProblemSpec,
    ReductionOptions, ReductionProblem,
};
use cohomotopy::Rational;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::report::{key_values, opt, table, CliError, Report};

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn divisibility_err(e: DivisibilityError) -> CliError {
    CliError::domain("divisibility_error", e)
}

fn manifold(path: &Path) -> Result<FourManifoldData, CliError> {
    read_json(path)
}

#[derive(Serialize)]
struct IndexReport {
    c_squared: i64,
    signature: i64,
    d: i64,
}

pub fn index(c_squared: Option<i64>, signature: Option<i64>, path: Option<&Path>) -> Result<Report, CliError> {
    let (c2, sigma) = match path {
        Some(p) => {
            let m = manifold(p)?;
            (m.c_squared, m.signature())
        }
        None => (
            c_squared.expect("required by clap"),
            signature.expect("required by clap"),
        ),
    };
    let d = dirac_index_d(c2, sigma).map_err(|e| CliError::domain("manifold_error", e))?;
    let body = IndexReport {
        c_squared: c2,
        signature: sigma,
        d,
    };
    let t = key_values(&[
        ("c_squared", c2.to_string()),
        ("signature", sigma.to_string()),
        ("d", d.to_string()),
    ]);
    Ok(Report::new("cohomotopy.index/v1", &body, t))
}

#[derive(Serialize)]
struct DimReport {
    d: i64,
    b_plus: i64,
    k: i64,
}

pub fn dim(d: Option<i64>, b_plus: Option<i64>, path: Option<&Path>) -> Result<Report, CliError> {
    let (d, b_plus) = match path {
        Some(p) => {
            let m = manifold(p)?;
            let d = m.dirac_index().map_err(|e| CliError::domain("manifold_error", e))?;
            (d, m.b_plus as i64)
        }
        None => (d.expect("required by clap"), b_plus.expect("required by clap")),
    };
    let k = expected_moduli_dimension(d, b_plus).map_err(|e| CliError::domain("manifold_error", e))?;
    let t = key_values(&[
        ("d", d.to_string()),
        ("b_plus", b_plus.to_string()),
        ("k", k.to_string()),
    ]);
    Ok(Report::new("cohomotopy.dim/v1", &DimReport { d, b_plus, k }, t))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn bound_table(r: &DivisibilityReport) -> String {
    key_values(&[
        ("d", r.d.to_string()),
        ("k", r.k.to_string()),
        ("p", r.p.to_string()),
        ("kappa", r.kappa.to_string()),
        ("a_coeffs", join(&r.a_coeffs)),
        ("denominators", join(&r.denominators)),
        ("lower_bound", r.lower_bound.to_string()),
        ("lemma_cokernel_order", opt(&r.lemma_cokernel_order)),
        ("sharp", opt(&r.sharp)),
    ])
}

pub fn bound(d: Option<u32>, k: Option<u32>, path: Option<&Path>) -> Result<Report, CliError> {
    let report = match path {
        Some(p) => divisibility_constraint(&manifold(p)?).map_err(|e| CliError::domain("manifold_error", e))?,
        None => sw_divisibility_lower_bound(d.expect("required by clap"), k.expect("required by clap"))
            .map_err(divisibility_err)?,
    };
    let t = bound_table(&report);
    Ok(Report::new("cohomotopy.bound/v1", &report, t))
}

#[derive(Serialize)]
struct HurewiczRow {
    k: u32,
    kernel_order: Option<u64>,
    cokernel_order: Option<u64>,
}

#[derive(Serialize)]
struct HurewiczReport {
    d: u32,
    rows: Vec<HurewiczRow>,
    notes: Vec<String>,
}

pub fn hurewicz(d: u32, k: Option<u32>) -> Result<Report, CliError> {
    if d < 2 {
        return Err(divisibility_err(DivisibilityError::DTooSmall(d)));
    }
    if let Some(k) = k {
        if k > 4 {
            return Err(divisibility_err(DivisibilityError::KernelUnstated(k)));
        }
    }
    let ks: Vec<u32> = match k {
        Some(k) => vec![k],
        None => (0..=4).collect(),
    };
    let rows: Vec<HurewiczRow> = ks
        .into_iter()
        .map(|k| HurewiczRow {
            k,
            kernel_order: hurewicz_kernel_order(d, k).ok(),
            cokernel_order: hurewicz_cokernel_order(d, k).ok(),
        })
        .collect();
    let mut notes = Vec::new();
    if rows.iter().any(|r| r.cokernel_order.is_none()) {
        notes.push("cokernel orders are only known in closed form for k = 0, 2, 4 (k = 4 needs d > 2)".to_string());
    }
    if d == 3 && rows.iter().any(|r| r.k == 3) {
        notes.push("k = 3, odd d: gcd(24, d - 3)/2 with gcd(24, 0) = 24".to_string());
    }
    let t = table(
        &["k", "kernel", "cokernel"],
        &rows
            .iter()
            .map(|r| vec![r.k.to_string(), opt(&r.kernel_order), opt(&r.cokernel_order)])
            .collect::<Vec<_>>(),
    );
    let t = notes.iter().fold(t, |acc, n| format!("{acc}\nnote: {n}"));
    Ok(Report::new(
        "cohomotopy.hurewicz/v1",
        &HurewiczReport { d, rows, notes },
        t,
    ))
}

#[derive(Serialize)]
struct ScanReport {
    d_min: u32,
    d_max: u32,
    k: Option<u32>,
    rows: Vec<DivisibilityReport>,
    strict_cases: usize,
}

pub fn sharpscan(d_min: u32, d_max: u32, k: Option<u32>) -> Result<Report, CliError> {
    if let Some(k) = k {
        if k != 2 && k != 4 {
            return Err(CliError::domain(
                "divisibility_error",
                format!("sharpness is only known for k = 2 and k = 4, got k = {k}"),
            ));
        }
    }
    let rows: Vec<DivisibilityReport> = sharpness_scan(d_min, d_max)
        .map_err(divisibility_err)?
        .into_iter()
        .filter(|r| k.is_none_or(|k| r.k == k))
        .collect();
    let strict_cases = rows.iter().filter(|r| r.sharp == Some(false)).count();
    let t = table(
        &["d", "k", "lower_bound", "m", "sharp"],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    r.k.to_string(),
                    r.lower_bound.to_string(),
                    opt(&r.lemma_cokernel_order),
                    opt(&r.sharp),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let body = ScanReport {
        d_min,
        d_max,
        k,
        rows,
        strict_cases,
    };
    Ok(Report::new("cohomotopy.sharpscan/v1", &body, t))
}

#[derive(Serialize)]
struct LatticeReport {
    rank: usize,
    valid: bool,
    min_characteristic_norm: String,
    admissible: bool,
    witness: Option<LatticeVector>,
    diagonal_witness: Option<Vec<LatticeVector>>,
    donaldson_k: DonaldsonK,
}

fn builtin_gram(name: &str) -> Result<GramMatrix, CliError> {
    if name == "e8" {
        return Ok(GramMatrix::negative_e8());
    }
    if let Some(n) = name.strip_prefix("diag:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::parse(format!("bad rank in builtin {name:?}")))?;
        if n == 0 {
            return Err(CliError::parse("diag:N needs N >= 1"));
        }
        return Ok(GramMatrix::negative_identity(n));
    }
    Err(CliError::parse(format!(
        "unknown builtin lattice {name:?}; use e8 or diag:N"
    )))
}

pub fn lattice(gram: Option<&Path>, builtin: Option<&str>) -> Result<Report, CliError> {
    let g = match (gram, builtin) {
        (Some(p), _) => {
            let rows: Vec<Vec<i64>> = read_json(p)?;
            GramMatrix::from_i64(&rows).map_err(|e| CliError::parse(format!("{}: {e}", p.display())))?
        }
        (None, Some(name)) => builtin_gram(name)?,
        (None, None) => unreachable!("required by clap"),
    };
    let validity = validate(&g);
    if !validity.is_valid() {
        return Err(CliError::domain("invalid_gram", validity));
    }
    let lattice_err = |e| CliError::domain("lattice_error", e);
    let verdict = donaldson_admissible(&g).map_err(lattice_err)?;
    let diag = if g.rank() <= 8 {
        diagonal_witness(&g).map_err(lattice_err)?
    } else {
        None
    };
    let norm = i64::try_from(&verdict.min_characteristic_norm)
        .map_err(|_| CliError::domain("lattice_error", "characteristic norm out of range"))?;
    let dk = donaldson_k(-norm, g.rank() as i64).map_err(|e| CliError::domain("manifold_error", e))?;
    let fmt_vec = |v: &LatticeVector| format!("[{}]", join(&v.coords));
    let t = key_values(&[
        ("rank", g.rank().to_string()),
        ("valid", "true".into()),
        ("min_characteristic_norm", verdict.min_characteristic_norm.to_string()),
        ("admissible", verdict.admissible.to_string()),
        ("witness", verdict.witness.as_ref().map_or("-".into(), fmt_vec)),
        ("diagonal_witness", (if diag.is_some() { "found" } else { "-" }).into()),
        ("donaldson_k", dk.k.to_string()),
    ]);
    let body = LatticeReport {
        rank: g.rank(),
        valid: true,
        min_characteristic_norm: verdict.min_characteristic_norm.to_string(),
        admissible: verdict.admissible,
        witness: verdict.witness,
        diagonal_witness: diag,
        donaldson_k: dk,
    };
    Ok(Report::new("cohomotopy.lattice/v1", &body, t))
}

#[derive(Serialize)]
struct DonaldsonReport {
    c_squared: i64,
    b2: i64,
    #[serde(flatten)]
    k: DonaldsonK,
}

pub fn donaldson(c_squared: i64, b2: i64) -> Result<Report, CliError> {
    let k = donaldson_k(c_squared, b2).map_err(|e| CliError::domain("manifold_error", e))?;
    let t = key_values(&[
        ("c_squared", c_squared.to_string()),
        ("b2", b2.to_string()),
        ("k", k.k.to_string()),
        ("admissible", k.admissible.to_string()),
    ]);
    Ok(Report::new(
        "cohomotopy.donaldson/v1",
        &DonaldsonReport { c_squared, b2, k },
        t,
    ))
}

#[derive(Serialize)]
struct Enlargement {
    added: Vec<Rational>,
    dim_w: usize,
    degree_w: i64,
    stable: bool,
}

#[derive(Serialize)]
struct ReduceReport {
    domain_dim: usize,
    target_dim: usize,
    index: i64,
    bound_radius: Rational,
    #[serde(flatten)]
    report: DegreeReport,
    enlargements: Vec<Enlargement>,
}

pub fn reduce(
    path: &Path,
    epsilon: Rational,
    radius: Option<Rational>,
    max_refine: u32,
    seed: u64,
    enlarge: &[Vec<Rational>],
) -> Result<Report, CliError> {
    let spec: ProblemSpec = read_json(path)?;
    let red_err = |e| CliError::domain("reduction_error", e);
    let mut problem = ReductionProblem::try_from(spec).map_err(red_err)?;
    if let Some(r) = radius {
        problem = problem.with_bound_radius(r).map_err(red_err)?;
    }
    let opts = ReductionOptions {
        epsilon,
        seed,
        degree: DegreeOptions {
            max_refine,
            ..DegreeOptions::default()
        },
        ..ReductionOptions::default()
    };
    let v = choose_reduction_subspace(&problem, &opts).map_err(red_err)?;
    let report = reduce_and_degree(&problem, &v, &opts).map_err(red_err)?;
    let mut enlargements = Vec::new();
    for extra in enlarge {
        let w = extend_subspace(&v, std::slice::from_ref(extra));
        let s = stability_check(&problem, &v, &w, &opts).map_err(red_err)?;
        enlargements.push(Enlargement {
            added: extra.clone(),
            dim_w: s.dim_w,
            degree_w: s.degree_w,
            stable: s.stable,
        });
    }
    let mut pairs = vec![
        ("domain_dim", problem.domain_dim().to_string()),
        ("target_dim", problem.target_dim().to_string()),
        ("bound_radius", problem.bound_radius().to_string()),
        ("epsilon", report.epsilon.to_string()),
        ("reduced_dim", report.reduced_dim.to_string()),
        ("degree", report.degree.to_string()),
    ];
    for e in &enlargements {
        pairs.push((
            "enlarged",
            format!("dim {} degree {} stable {}", e.dim_w, e.degree_w, e.stable),
        ));
    }
    let t = key_values(&pairs);
    let body = ReduceReport {
        domain_dim: problem.domain_dim(),
        target_dim: problem.target_dim(),
        index: problem.index(),
        bound_radius: problem.bound_radius().clone(),
        report,
        enlargements,
    };
    Ok(Report::new("cohomotopy.reduce/v1", &body, t))
}

#[derive(Serialize)]
struct ChamberReport {
    n: u32,
    reversed: bool,
    total_angle: Rational,
    counts: Vec<ChamberCount>,
    jump: i64,
}

pub fn chamber(n: u32, angles: &[Rational], reversed: bool) -> Result<Report, CliError> {
    let path = if reversed {
        make_path(n).reversed()
    } else {
        make_path(n)
    };
    let counts = angles
        .iter()
        .map(|a| signed_preimage_count(&path, a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::domain("chamber_error", e))?;
    let t = table(
        &["angle/pi", "chamber", "signed_count"],
        &counts
            .iter()
            .map(|c| {
                let chamber = serde_json::to_value(c.chamber).expect("enum serializes");
                vec![
                    c.point_angle.to_string(),
                    chamber.as_str().unwrap_or_default().to_string(),
                    c.signed_count.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let body = ChamberReport {
        n,
        reversed,
        total_angle: path.total_angle(),
        jump: wall_crossing_jump(&path),
        counts,
    };
    let t = format!("{t}\njump  {}", body.jump);
    Ok(Report::new("cohomotopy.chamber/v1", &body, t))
}

pub fn counterexample(n: usize) -> Result<Report, CliError> {
    let report: DemoReport = proper_not_bounded_demo(n).map_err(|e| CliError::domain("reduction_error", e))?;
    let t = table(
        &[
            "n",
            "literal f(n e_n)",
            "corrected f(n e_n)",
            "literal |x|",
            "corrected |x|",
        ],
        &report
            .rows
            .iter()
            .map(|r| {
                let norm = |v: &Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
                vec![
                    r.n.to_string(),
                    r.literal_at_centre.to_string(),
                    r.corrected_at_centre.to_string(),
                    norm(&r.literal_preimage_norm),
                    norm(&r.corrected_preimage_norm),
                ]
            })
            .collect::<Vec<_>>(),
    );
    Ok(Report::new("cohomotopy.counterexample/v1", &report, t))
}
