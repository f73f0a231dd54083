//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use nondiophantine::cosmology::{classical_scale_factor, friedman_comparison, scale_factor, FriedmanConfig};
use nondiophantine::fields::{
    apparent_beta_artanh, apparent_beta_fechner, apparent_beta_tan, beta_curve, potential_at_origin, BetaKind,
    ChargeConfig,
};
use nondiophantine::selftest::{
    boost_checks, catalog, fechner_closed_form_deviation, field_axioms, fundamental_theorem_cases, power_exp_ode,
};
use nondiophantine::spacetime::{
    effective_metric, lightcone_surface, lightcone_time, null_residual, Axis, Branch, FourVector, GridSpec, Variance,
};
use nondiophantine::{Bijection, Execution, SeriesTable};

const SEED: u64 = 42;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn nondio(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nondio")).args(args).output().expect("binary runs")
}

fn field_axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    for ctx in catalog() {
        let report = field_axioms(&ctx, 10_000, SEED, Execution::Parallel);
        checks += report.checks;
        if let Some(first) = report.failures.first() {
            failures.push(format!("{ctx}: {} failures, first {first}", report.failures.len()));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(5);
    let detail = format!("{} contexts x 10000 triples, {checks} checks, {:.2} s", catalog().len(), elapsed.as_secs_f64());
    match failures.first() {
        None => outcome(fast, detail),
        Some(f) => outcome(false, format!("{detail}; {f}")),
    }
}

fn fechner_closed_forms() -> Outcome {
    match fechner_closed_form_deviation(10.0, -20.0, 1000, SEED) {
        Ok(d) => outcome(d <= 1e-12, format!("max relative deviation {d:.2e} over 1000 samples")),
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn exponential_ode() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for p in [3, 5] {
        match power_exp_ode(p, 50) {
            Ok((r, a0)) => {
                passed &= r < 1e-6 && a0 == 0.0;
                parts.push(format!("x^{p}: {r:.2e}"));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("x^{p}: error {e}"));
            }
        }
    }
    outcome(passed, format!("max residual at 50 points, {}", parts.join(", ")))
}

fn fundamental_theorem() -> Outcome {
    match fundamental_theorem_cases(20, SEED) {
        Ok(r) => outcome(r < 1e-6, format!("20 random cases, max residual {r:.2e}")),
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn boost_invariance() -> Outcome {
    let (mut worst_form, mut worst_rest) = (0.0f64, 0.0f64);
    for ctx in catalog() {
        match boost_checks(&ctx, 1000, SEED) {
            Ok(r) => {
                worst_form = worst_form.max(r.invariance).max(r.hyperbolic);
                worst_rest = worst_rest.max(r.rest_frame);
            }
            Err(e) => return outcome(false, format!("{ctx}: error {e}")),
        }
    }
    outcome(
        worst_form < 1e-9 && worst_rest < 1e-9,
        format!("1000 samples per context, quadratic form {worst_form:.1e}, rest frame {worst_rest:.1e}"),
    )
}

fn light_cones() -> Result<Outcome, String> {
    let e = |e: nondiophantine::Error| e.to_string();
    // Fechner mu=10, nu=-20 surface through the CLI, re-read from CSV.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("fechner_cone.csv");
    let out = nondio(&["--f", "fechner:mu=10,nu=-20", "lightcone", "--apex", "0p,0p,0p", "--out", path.to_str().unwrap()]);
    if !out.status.success() {
        return Ok(outcome(false, format!("lightcone exited {:?}", out.status.code())));
    }
    let table = SeriesTable::read_csv(fs::File::open(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let fechner = Bijection::fechner(10.0, -20.0).map_err(e)?;
    let zero = fechner.zero().value();
    let apex = FourVector::contravariant(&fechner, [zero; 4]).map_err(e)?;
    let (mut worst_null, mut worst_closed, mut cells) = (0.0f64, 0.0f64, 0usize);
    for row in table.rows() {
        let (x1, x2) = (row[0].unwrap(), row[1].unwrap());
        for (x0, sign) in [(row[2], 1.0), (row[3], -1.0)] {
            let Some(x0) = x0 else { continue };
            let event = FourVector::new(&fechner, [x0, x1, x2, zero], Variance::Contravariant).map_err(e)?;
            worst_null = worst_null.max(null_residual(&fechner, &event, &apex).map_err(e)?);
            let radius = (fechner.forward_raw(x1).powi(2) + fechner.forward_raw(x2).powi(2)).sqrt();
            let closed = ((sign * radius + 20.0) / 10.0).exp();
            worst_closed = worst_closed.max((x0 - closed).abs() / closed);
            cells += 1;
        }
    }

    // Tangent apexes: finite values everywhere, the horizon rows left empty.
    let tan = Bijection::tangent(1.0).map_err(e)?;
    let mut tangent_ok = true;
    for raw in [[0.0, -0.4, -0.2, 0.0], [0.01, -0.02, -0.03, 0.0]] {
        let apex = FourVector::contravariant(&tan, raw).map_err(e)?;
        let grid = GridSpec::default_for(&tan, 81);
        let surface = lightcone_surface(&tan, &apex, &grid, Execution::Parallel).map_err(e)?;
        let mut present = 0;
        for row in surface.rows() {
            let (x1, x2) = (row[0].unwrap(), row[1].unwrap());
            let on_horizon = x1.abs() == 0.5 || x2.abs() == 0.5;
            for v in [row[2], row[3]].into_iter().flatten() {
                tangent_ok &= !on_horizon && v.is_finite() && v.abs() < 0.5;
                present += 1;
            }
            tangent_ok &= !on_horizon || (row[2].is_none() && row[3].is_none());
        }
        tangent_ok &= present > surface.len();
    }
    Ok(outcome(
        worst_null < 1e-9 && worst_closed < 1e-9 && tangent_ok && cells > 0,
        format!(
            "fechner cone {cells} cells: null residual {worst_null:.1e}, closed form {worst_closed:.1e}; tangent surfaces finite with empty horizon cells: {tangent_ok}"
        ),
    ))
}

fn effective_metric_check() -> Result<Outcome, String> {
    let e = |e: nondiophantine::Error| e.to_string();
    let tan = Bijection::tangent(1.0).map_err(e)?;
    let origin = FourVector::contravariant(&tan, [0.0; 4]).map_err(e)?;
    let g = effective_metric(&tan, &origin).map_err(e)?.diagonal();
    let pi2 = PI * PI;
    let metric_err = g.iter().zip([pi2, -pi2, -pi2, -pi2]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let mut ratios = Vec::new();
    for raw in [[0.01, -0.02, -0.03, 0.0], [0.1, 0.15, -0.12, 0.05]] {
        let apex = FourVector::contravariant(&tan, raw).map_err(e)?;
        let metric = effective_metric(&tan, &apex).map_err(e)?;
        let residual = |scale: f64| -> Result<f64, String> {
            let direction = [0.6, -0.8, 0.0];
            let mut spatial = [tan.zero(); 3];
            for (k, slot) in spatial.iter_mut().enumerate() {
                *slot = tan.upper(raw[k + 1] + scale * direction[k]).map_err(e)?;
            }
            let x0 = lightcone_time(&tan, &apex, spatial, Branch::Future).map_err(e)?.value();
            let eps = [x0 - raw[0], spatial[0].value() - raw[1], spatial[1].value() - raw[2], spatial[2].value() - raw[3]];
            Ok(metric.contract(eps))
        };
        for scale in [1e-3, 5e-4] {
            ratios.push(residual(scale)? / residual(scale / 2.0)?);
        }
    }
    let ratios_ok = ratios.iter().all(|r| (6.0..=10.0).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok(outcome(
        metric_err < 1e-12 && ratios_ok,
        format!("g at origin off by {metric_err:.1e}; halving ratios {}", shown.join(", ")),
    ))
}

fn beta_curves() -> Result<Outcome, String> {
    let e = |e: nondiophantine::Error| e.to_string();
    let ratio_beta = |rho: f64| (rho * rho - 1.0) / (rho * rho + 1.0);
    let tan = apparent_beta_tan(1.0, 0.25).map_err(e)?;
    let artanh = apparent_beta_artanh(1.0, 0.25).map_err(e)?;
    let fechner = apparent_beta_fechner(1.0).map_err(e)?;
    let oracle_tan = ratio_beta((PI / 4.0).tan() / (PI / 4.0));
    let oracle_artanh = ratio_beta(0.5f64.atanh() / 0.5);
    let oracle_fechner = ratio_beta(2.0f64.ln());
    let values_ok = (tan - 0.23700).abs() <= 1e-4
        && (artanh - 0.09372).abs() <= 1e-4
        && (fechner + 0.35092).abs() <= 1e-4
        && (tan - oracle_tan).abs() < 1e-14
        && (artanh - oracle_artanh).abs() < 1e-14
        && (fechner + oracle_fechner).abs() < 1e-14;

    let mut invariants_ok = true;
    for kind in [BetaKind::Tan { length: 1.0 }, BetaKind::Artanh { length: 1.0 }] {
        let table = beta_curve(kind, &kind.default_axis(10_001), Execution::Parallel).map_err(e)?;
        let beta = table.column("beta").unwrap();
        let n = beta.len();
        for i in 0..n {
            match (beta[i], beta[n - 1 - i]) {
                (Some(b), Some(m)) => invariants_ok &= b.abs() < 1.0 && (b + m).abs() < 1e-12,
                (None, None) => invariants_ok &= i == n / 2,
                _ => invariants_ok = false,
            }
        }
    }
    let kind = BetaKind::Fechner;
    let table = beta_curve(kind, &kind.default_axis(10_001), Execution::Parallel).map_err(e)?;
    for (u, b) in table.column(kind.coordinate_name()).unwrap().into_iter().zip(table.column("beta").unwrap()) {
        match b {
            Some(b) => invariants_ok &= b < 0.0 && b > -1.0,
            None => invariants_ok &= u.unwrap().abs() < 1e-12,
        }
    }

    // β(Y)/Y³ at Y = 1e-2 and 1e-3 must agree to 1%.
    let mut onset = Vec::new();
    for (name, beta) in [
        ("tan", &(|y: f64| apparent_beta_tan(1.0, y)) as &dyn Fn(f64) -> nondiophantine::Result<f64>),
        ("artanh", &|y: f64| apparent_beta_artanh(1.0, y)),
    ] {
        let (b1, b2) = (beta(1e-2).map_err(e)?, beta(1e-3).map_err(e)?);
        onset.push((name, b1 / 1e-6, b2 / 1e-9, b1 / 1e-4, b2 / 1e-6));
    }
    let onset_ok = onset.iter().all(|&(_, c1, c2, _, _)| (c1 / c2 - 1.0).abs() <= 0.01);
    let onset_detail: Vec<String> = onset
        .iter()
        .map(|(name, c1, c2, s1, s2)| format!("{name} beta/Y^3 = {c1:.4} -> {c2:.4} (beta/Y^2 = {s1:.4} -> {s2:.4})"))
        .collect();

    Ok(outcome(
        values_ok && invariants_ok && onset_ok,
        format!(
            "beta_tan {tan:.5}, beta_artanh {artanh:.5}, beta_fechner {fechner:.5}; grid invariants {invariants_ok}; cubic onset {onset_ok}: {}",
            onset_detail.join("; ")
        ),
    ))
}

fn coulomb_limit() -> Result<Outcome, String> {
    let e = |e: nondiophantine::Error| e.to_string();
    let mut worst = 0.0f64;
    for ctx in [Bijection::tangent(1.0).map_err(e)?, Bijection::artanh(1.0).map_err(e)?] {
        for fy in [1e-4, -1e-4] {
            let coupling = ctx.from_lower(1e-10).map_err(e)?;
            let cfg = ChargeConfig::new(&ctx, coupling, ctx.zero(), ctx.from_lower(fy).map_err(e)?).map_err(e)?;
            let q = cfg.coulomb_charge().ok_or("no Coulomb charge")?;
            let expected = q / cfg.source().raw()[1].abs();
            let got = potential_at_origin(&cfg).map_err(e)?.value();
            worst = worst.max((got - expected).abs() / expected);
        }
    }
    Ok(outcome(worst < 1e-3, format!("max relative error {worst:.2e} at |f(Y1)| = 1e-4")))
}

fn friedman() -> Result<Outcome, String> {
    let e = |e: nondiophantine::Error| e.to_string();
    let mut exact = true;
    for ctx in catalog() {
        let t0 = ctx.from_lower(0.8).map_err(e)?;
        exact &= scale_factor(&ctx, t0, t0).map_err(e)?.value().to_bits() == ctx.one().value().to_bits();
    }

    let id = Bijection::identity();
    let t0 = id.upper(1.7).map_err(e)?;
    let mut identity_err = 0.0f64;
    for t in Axis::new(0.0, 12.0, 1001).points() {
        let a = scale_factor(&id, t0, id.upper(t).map_err(e)?).map_err(e)?.value();
        identity_err = identity_err.max((a - classical_scale_factor(t, 1.7).map_err(e)?).abs());
    }

    let tan = Bijection::tangent(20.0).map_err(e)?;
    let reference = tan.one();
    let grid = FriedmanConfig::default_grid(&tan, reference, 200).map_err(e)?;
    let cfg = FriedmanConfig::new(&tan, reference, grid).map_err(e)?;
    let cmp = friedman_comparison(&cfg, Execution::Parallel).map_err(e)?;
    let a: Vec<f64> = cmp.table.column("A").unwrap().into_iter().map(Option::unwrap).collect();
    let t: Vec<f64> = cmp.table.column("T").unwrap().into_iter().map(Option::unwrap).collect();
    let onset_ok = match cmp.acceleration_onset {
        Some(star) => {
            let inside = star >= reference.value() && star < 10.0;
            let convex = (1..a.len() - 1).filter(|&i| t[i] > star).all(|i| a[i + 1] - 2.0 * a[i] + a[i - 1] > 0.0);
            inside && convex
        }
        None => false,
    };
    let star = cmp.acceleration_onset.map_or("none".to_string(), |s| format!("{s}"));
    Ok(outcome(
        exact && identity_err < 1e-12 && onset_ok && cmp.classical_decelerates,
        format!(
            "A(T0) = 1' bitwise: {exact}; identity vs classical {identity_err:.1e}; tan L=20 T* = {star}, classical decelerates: {}",
            cmp.classical_decelerates
        ),
    ))
}

fn cli_determinism() -> Result<Outcome, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["--f", "fechner:mu=10,nu=-20", "lightcone", "--apex", "0p,0p,0p"],
        &["beta", "--kind", "tan", "--L", "1", "--n", "101"],
        &["--f", "tan:L=20", "friedman", "--T0", "one"],
    ];
    let mut identical = true;
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (attempt, extra) in [&[][..], &["--sequential"][..]].iter().enumerate() {
            let path = dir.path().join(format!("run{i}_{attempt}.csv"));
            let mut full: Vec<&str> = extra.to_vec();
            full.extend_from_slice(args);
            full.extend_from_slice(&["--out", path.to_str().unwrap()]);
            for _ in 0..2 {
                let out = nondio(&full);
                if !out.status.success() {
                    return Ok(outcome(false, format!("{full:?} exited {:?}", out.status.code())));
                }
                outputs.push(fs::read(&path).map_err(|e| e.to_string())?);
            }
        }
        identical &= outputs.windows(2).all(|w| w[0] == w[1]);
    }

    let start = Instant::now();
    let selftest = nondio(&["selftest", "--seed", "42"]);
    let elapsed = start.elapsed();
    let repeat = nondio(&["selftest", "--seed", "42"]);
    let selftest_ok = selftest.status.code() == Some(0) && selftest.stdout == repeat.stdout;
    Ok(outcome(
        identical && selftest_ok && elapsed < Duration::from_secs(60),
        format!(
            "byte-identical CSVs across repeats and thread modes: {identical}; selftest exit {:?}, reproducible, {:.1} s",
            selftest.status.code(),
            elapsed.as_secs_f64()
        ),
    ))
}

fn flatten(result: Result<Outcome, String>) -> Outcome {
    result.unwrap_or_else(|e| outcome(false, format!("error: {e}")))
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("field axioms", field_axiom_suite),
        ("fechner closed forms", fechner_closed_forms),
        ("exponential ODE", exponential_ode),
        ("fundamental theorem", fundamental_theorem),
        ("boost invariance", boost_invariance),
        ("light cones", || flatten(light_cones())),
        ("effective metric", || flatten(effective_metric_check())),
        ("beta curves", || flatten(beta_curves())),
        ("coulomb limit", || flatten(coulomb_limit())),
        ("friedman", || flatten(friedman())),
        ("cli determinism", || flatten(cli_determinism())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let mark = if result.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!result.passed);
        println!("criterion {:>2} {mark}  {name}: {}", i + 1, result.detail);
    }
    println!("{}/{} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
