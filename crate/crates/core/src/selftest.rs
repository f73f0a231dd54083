//! Seeded self-checks over the whole library.
//!
//! Random samples are drawn in the lower image and lifted with `f^-1`, one
//! ChaCha stream per chunk of work, so results do not depend on the number of
//! threads.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{Bijection, BijectionKind, CustomBijection, UpperReal};
use crate::calculus::{exp_ode_residual, nd_derivative, nd_derivative_limit, verify_fundamental_theorem, UpperFunction};
use crate::cosmology::{classical_scale_factor, friedman_comparison, scale_factor, FriedmanConfig};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::fields::{apparent_beta_artanh, apparent_beta_fechner, apparent_beta_tan, rapidity_from_ratio};
use crate::spacetime::{boost, four_velocity, lightcone_surface, quadratic_form, BoostParameters, FourVector, GridSpec, Variance};

/// Relative tolerance of lower-image comparisons.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;
/// Absolute floor of lower-image comparisons.
pub const ABSOLUTE_FLOOR: f64 = 1e-12;

const CHUNK: usize = 1000;

/// `|a - b| <= max(1e-9 max(|a|, |b|), 1e-12)`.
pub fn lower_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= (RELATIVE_TOLERANCE * a.abs().max(b.abs())).max(ABSOLUTE_FLOOR)
}

/// The built-in bijections exercised by the self-test.
pub fn catalog() -> Vec<Bijection> {
    vec![
        Bijection::identity(),
        Bijection::power(3).expect("odd"),
        Bijection::power(5).expect("odd"),
        Bijection::fechner(10.0, -20.0).expect("mu > 0"),
        Bijection::fechner(1.0, 0.0).expect("mu > 0"),
        Bijection::tangent(1.0).expect("L > 0"),
        Bijection::artanh(1.0).expect("L > 0"),
    ]
}

/// Radius of the lower-image sampling box for axiom checks. Triple products
/// of samples must stay representable: `artanh` saturates `tanh` quickly.
pub fn axiom_sample_radius(ctx: &Bijection) -> f64 {
    match ctx.kind() {
        BijectionKind::Artanh { .. } => 1.2,
        _ => 5.0,
    }
}

fn chunk_rng(seed: u64, ctx: &Bijection, chunk: usize) -> ChaCha8Rng {
    let salt = ctx.to_string().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt ^ (chunk as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub triples: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: AxiomReport) {
        self.triples += other.triples;
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

/// Field laws on `triples` random triples: commutativity, associativity,
/// distributivity, neutral elements, inverses, `0' (*) X = 0'`, repeated
/// addition `N' (*) X = X (+) ... (+) X` (`N <= 8`) and monotonicity of `(+)`.
pub fn field_axioms(ctx: &Bijection, triples: usize, seed: u64, exec: Execution) -> AxiomReport {
    let chunks = triples.div_ceil(CHUNK);
    let radius = axiom_sample_radius(ctx);
    let reports = map_indexed(exec, chunks, |chunk| {
        let mut rng = chunk_rng(seed, ctx, chunk);
        let count = CHUNK.min(triples - chunk * CHUNK);
        let mut report = AxiomReport::default();
        for i in 0..count {
            let lows: [f64; 3] = [(); 3].map(|_| rng.gen_range(-radius..=radius));
            report.triples += 1;
            let n = 1 + (chunk * CHUNK + i) % 8;
            match check_triple(ctx, lows, n as u32) {
                Ok((checks, failed)) => {
                    report.checks += checks;
                    report.failures.extend(failed.into_iter().map(|law| format!("{law} at f = {lows:?}")));
                }
                Err(e) => report.failures.push(format!("error {e} at f = {lows:?}")),
            }
        }
        report
    });
    reports.into_iter().fold(AxiomReport::default(), |mut acc, r| {
        acc.merge(r);
        acc
    })
}

fn check_triple(ctx: &Bijection, lows: [f64; 3], n: u32) -> Result<(usize, Vec<&'static str>)> {
    let [x, y, z] = lows.map(|v| ctx.from_lower(v));
    let (x, y, z) = (x?, y?, z?);
    let f = |v: UpperReal| ctx.to_lower(v);
    let (zero, one) = (ctx.zero(), ctx.one());
    let mut laws: Vec<(&'static str, f64, f64)> = vec![
        ("add commutes", f(ctx.add(x, y)?)?, f(ctx.add(y, x)?)?),
        ("mul commutes", f(ctx.mul(x, y)?)?, f(ctx.mul(y, x)?)?),
        ("add associates", f(ctx.add(ctx.add(x, y)?, z)?)?, f(ctx.add(x, ctx.add(y, z)?)?)?),
        ("mul associates", f(ctx.mul(ctx.mul(x, y)?, z)?)?, f(ctx.mul(x, ctx.mul(y, z)?)?)?),
        (
            "mul distributes",
            f(ctx.mul(x, ctx.add(y, z)?)?)?,
            f(ctx.add(ctx.mul(x, y)?, ctx.mul(x, z)?)?)?,
        ),
        ("0' is additive identity", f(ctx.add(x, zero)?)?, f(x)?),
        ("1' is multiplicative identity", f(ctx.mul(x, one)?)?, f(x)?),
        ("additive inverse", f(ctx.add(x, ctx.neg(x)?)?)?, 0.0),
        ("0' annihilates", f(ctx.mul(zero, x)?)?, 0.0),
    ];
    // Checked only where the inverse itself is faithfully representable: next to
    // a horizon, storing 1/f(X) as an upper number already costs most digits.
    if f(x)? != 0.0 {
        match ctx.div(one, x) {
            Ok(inverse) if lower_close(f(inverse)?, 1.0 / f(x)?) => {
                laws.push(("multiplicative inverse", f(ctx.mul(x, inverse)?)?, 1.0))
            }
            Ok(_) | Err(Error::OverflowToBoundary { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let mut repeated = x;
    for _ in 1..n {
        repeated = ctx.add(repeated, x)?;
    }
    let count = ctx.from_lower(f64::from(n))?;
    laws.push(("repeated addition", f(ctx.mul(count, x)?)?, f(repeated)?));

    let mut failed: Vec<&'static str> = laws.iter().filter(|(_, a, b)| !lower_close(*a, *b)).map(|l| l.0).collect();
    let monotone = match ctx.compare(x, y)? {
        Ordering::Less => ctx.compare(ctx.add(x, z)?, ctx.add(y, z)?)? != Ordering::Greater,
        Ordering::Greater => ctx.compare(ctx.add(x, z)?, ctx.add(y, z)?)? != Ordering::Less,
        Ordering::Equal => true,
    };
    if !monotone {
        failed.push("add preserves order");
    }
    Ok((laws.len() + 1, failed))
}

/// Worst relative deviation between the generic Fechner operations and the
/// closed forms `X (+) Y = X Y e^{nu/mu}`, `(-)X = e^{-2 nu/mu} / X`.
pub fn fechner_closed_form_deviation(mu: f64, nu: f64, samples: usize, seed: u64) -> Result<f64> {
    let ctx = Bijection::fechner(mu, nu)?;
    let mut rng = chunk_rng(seed, &ctx, usize::MAX);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = ctx.from_lower(rng.gen_range(-10.0..=10.0))?;
        let y = ctx.from_lower(rng.gen_range(-10.0..=10.0))?;
        let sum = ctx.add(x, y)?.value();
        let expected = x.value() * y.value() * (nu / mu).exp();
        worst = worst.max((sum - expected).abs() / expected);
        let neg = ctx.neg(x)?.value();
        let expected = (-2.0 * nu / mu).exp() / x.value();
        worst = worst.max((neg - expected).abs() / expected);
    }
    Ok(worst)
}

/// Worst residual of `DA/DX = A` for `A = f^-1 o exp o f` with `f = x^p`,
/// over `points` evenly spaced `X` in `[-1.5, 1.5]`. Returns also `|A(0') - 1'|`.
pub fn power_exp_ode(p: u32, points: usize) -> Result<(f64, f64)> {
    let ctx = Bijection::power(p)?;
    let pf = f64::from(p);
    let a = UpperFunction::from_upper(&ctx, move |x: f64| (x.powi(p as i32) / pf).exp());
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let x = -1.5 + 3.0 * i as f64 / (points - 1) as f64;
        worst = worst.max(exp_ode_residual(&a, ctx.upper(x)?)?);
    }
    let initial = (a.eval(ctx.zero())?.value() - ctx.one().value()).abs();
    Ok((worst, initial))
}

/// Lower shadows used by the randomized fundamental-theorem cases.
pub fn shadow_family(index: usize, c: f64) -> Box<dyn Fn(f64) -> f64 + Send + Sync> {
    match index % 4 {
        0 => Box::new(move |x: f64| (c * x).exp()),
        1 => Box::new(move |x: f64| (c * x).sin() + x),
        2 => Box::new(move |x: f64| c * x * x * x - x * x + 0.5),
        _ => Box::new(move |x: f64| 1.0 / (1.0 + c * c * x * x)),
    }
}

/// Worst fundamental-theorem residual over `cases` random
/// `(shadow, context, X, Y)` draws.
pub fn fundamental_theorem_cases(cases: usize, seed: u64) -> Result<f64> {
    let contexts = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let ctx = &contexts[rng.gen_range(0..contexts.len())];
        let c = rng.gen_range(0.5..1.5);
        let shadow = shadow_family(i, c);
        let a = UpperFunction::from_shadow(ctx, shadow);
        let x = ctx.from_lower(rng.gen_range(-1.0..1.0))?;
        let y = ctx.from_lower(rng.gen_range(-1.0..1.0))?;
        worst = worst.max(verify_fundamental_theorem(&a, x, y)?.max());
    }
    Ok(worst)
}

/// Lower sampling radii `(vector, rapidity)` for boost checks.
pub fn boost_sample_radii(ctx: &Bijection) -> (f64, f64) {
    match ctx.kind() {
        BijectionKind::Artanh { .. } => (0.5, 0.5),
        _ => (2.0, 1.5),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoostReport {
    /// Worst `|f(Q(LV)) - f(Q(V))| / (1 + sum_a f(V^a)^2)`.
    pub invariance: f64,
    /// Worst deviation of `Cosh^2' (-) Sinh^2'` from `1'`, scaled by `1 + cosh^2`.
    pub hyperbolic: f64,
    /// Worst lower-image deviation of the boosted four-velocity from `(1', 0', 0', 0')`.
    pub rest_frame: f64,
}

pub fn boost_checks(ctx: &Bijection, samples: usize, seed: u64) -> Result<BoostReport> {
    let (rv, rp) = boost_sample_radii(ctx);
    let mut rng = chunk_rng(seed, ctx, usize::MAX - 1);
    let mut report = BoostReport::default();
    for _ in 0..samples {
        let lower: [f64; 4] = [(); 4].map(|_| rng.gen_range(-rv..=rv));
        let phi = rng.gen_range(-rp..=rp);
        let v = FourVector::from_lower(ctx, lower, Variance::Contravariant)?;
        let params = BoostParameters::from_lower(ctx, phi)?;
        let before = ctx.to_lower(quadratic_form(ctx, &v)?)?;
        let after = ctx.to_lower(quadratic_form(ctx, &boost(ctx, &params, &v)?)?)?;
        let scale = 1.0 + lower.iter().map(|x| x * x).sum::<f64>();
        report.invariance = report.invariance.max((after - before).abs() / scale);

        let (c, s) = (params.cosh(ctx)?, params.sinh(ctx)?);
        let identity = ctx.sub(ctx.pow_nat(c, 2)?, ctx.pow_nat(s, 2)?)?;
        let deviation = (ctx.to_lower(identity)? - 1.0).abs() / (1.0 + phi.cosh().powi(2));
        report.hyperbolic = report.hyperbolic.max(deviation);

        let rest = boost(ctx, &params, &four_velocity(ctx, &params)?)?.to_lower(ctx)?;
        let off = (rest[0] - 1.0).abs().max(rest[1].abs()).max(rest[2].abs()).max(rest[3].abs());
        report.rest_frame = report.rest_frame.max(off);
    }
    Ok(report)
}

/// Worst `|beta - tanh(sign ln rho)|` over the three closed forms.
pub fn beta_factorization(points: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=points {
        let y = 0.5 * i as f64 / (points + 1) as f64;
        for sign in [1.0, -1.0] {
            let y1 = sign * y;
            let arg = std::f64::consts::PI * y1;
            let (_, b) = rapidity_from_ratio(arg.tan() / arg, sign)?;
            worst = worst.max((apparent_beta_tan(1.0, y1)? - b).abs());
            let arg = 2.0 * y1;
            let (_, b) = rapidity_from_ratio(arg.atanh() / arg, sign)?;
            worst = worst.max((apparent_beta_artanh(1.0, y1)? - b).abs());
        }
        let u = -1.0 + 7.0 * i as f64 / (points + 1) as f64;
        if u != 0.0 {
            let (_, b) = rapidity_from_ratio(u.ln_1p() / u, u.signum())?;
            worst = worst.max((apparent_beta_fechner(u)? - b).abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelfTestReport {
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn push_result<T>(&mut self, name: &str, result: Result<T>, judge: impl FnOnce(&T) -> (bool, String)) {
        match result {
            Ok(value) => {
                let (passed, detail) = judge(&value);
                self.push(name, passed, detail);
            }
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark}  {:<width$}  {}", c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelfTestOptions {
    pub seed: u64,
    /// Random triples per context for the axiom suite.
    pub triples: usize,
    pub exec: Execution,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        SelfTestOptions { seed: 42, triples: 10_000, exec: Execution::Parallel }
    }
}

pub fn run(options: &SelfTestOptions) -> SelfTestReport {
    let mut report = SelfTestReport::default();
    let seed = options.seed;

    for ctx in catalog() {
        let axioms = field_axioms(&ctx, options.triples, seed, options.exec);
        let detail = match axioms.failures.first() {
            None => format!("{} triples, {} checks", axioms.triples, axioms.checks),
            Some(first) => format!("{} failures, first: {first}", axioms.failures.len()),
        };
        report.push(format!("field axioms [{ctx}]"), axioms.passed(), detail);
    }

    report.push_result("fechner closed forms", fechner_closed_form_deviation(10.0, -20.0, 1000, seed), |&d| {
        (d <= 1e-12, format!("max rel deviation {d:.2e}"))
    });

    let decreasing = CustomBijection::new("decreasing", f64::NEG_INFINITY, f64::INFINITY, |x: f64| -x, |y: f64| -y);
    let rejected = Bijection::custom(decreasing);
    report.push(
        "custom bijection probe rejects decreasing f",
        rejected.is_err(),
        match rejected {
            Err(e) => format!("rejected: {e}"),
            Ok(_) => "accepted".to_string(),
        },
    );

    for p in [3, 5] {
        report.push_result(&format!("exp ODE DA/DX = A for f = x^{p}"), power_exp_ode(p, 50), |&(r, a0)| {
            (r < 1e-6 && a0 == 0.0, format!("max residual {r:.2e}, |A(0') - 1'| = {a0:e}"))
        });
    }

    report.push_result("fundamental theorem (20 random cases)", fundamental_theorem_cases(20, seed), |&r| {
        (r < 1e-6, format!("max residual {r:.2e}"))
    });

    report.push_result("limit quotient approaches conjugate derivative", limit_convergence(), |&(order, last)| {
        ((order - 1.0).abs() < 0.2 && last < 1e-6, format!("observed order {order:.3}, error at f(H)=1e-7: {last:.2e}"))
    });

    for ctx in catalog() {
        report.push_result(&format!("boost invariance [{ctx}]"), boost_checks(&ctx, 1000, seed), |r| {
            (
                r.invariance < 1e-9 && r.hyperbolic < 1e-9 && r.rest_frame < 1e-9,
                format!("quadratic form {:.1e}, Cosh^2-Sinh^2 {:.1e}, rest frame {:.1e}", r.invariance, r.hyperbolic, r.rest_frame),
            )
        });
    }

    report.push_result("light cone null residual (fechner mu=10, nu=-20)", fechner_cone_residual(options.exec), |&(r, cells)| {
        (r < 1e-9, format!("{cells} cells, max residual {r:.2e}"))
    });

    report.push_result("beta factorization through rapidity", beta_factorization(2000), |&d| {
        (d <= 1e-12, format!("max deviation {d:.2e}"))
    });

    report.push_result("friedman identities", friedman_identities(options.exec), |&(one, classical, accel)| {
        (
            one && classical < 1e-12 && accel,
            format!("A(T0) = 1' exact: {one}, identity vs classical {classical:.1e}, tan L=20 accelerates: {accel}"),
        )
    });

    report
}

fn limit_convergence() -> Result<(f64, f64)> {
    let ctx = Bijection::tangent(1.0)?;
    let a = UpperFunction::from_shadow(&ctx, |x| x.sin() + 0.5 * x * x);
    let x = ctx.upper(0.13)?;
    let exact = ctx.to_lower(nd_derivative(&a, x)?)?;
    let mut errors = Vec::new();
    for k in 2..=7 {
        let step = ctx.from_lower(10f64.powi(-k))?;
        errors.push((ctx.to_lower(nd_derivative_limit(&a, x, step)?)? - exact).abs());
    }
    // least-squares slope of log10(error) against log10(step) over 1e-2..1e-5
    let pts: Vec<(f64, f64)> = errors[..4].iter().enumerate().map(|(i, e)| (-(i as f64) - 2.0, e.log10())).collect();
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let cov: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    Ok((cov / var, errors[5]))
}

fn fechner_cone_residual(exec: Execution) -> Result<(f64, usize)> {
    let ctx = Bijection::fechner(10.0, -20.0)?;
    let zero = ctx.zero();
    let apex = FourVector::from_components([zero; 4], Variance::Contravariant)?;
    let table = lightcone_surface(&ctx, &apex, &GridSpec::default_for(&ctx, 41), exec)?;
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for row in table.rows() {
        for t in [row[2], row[3]].into_iter().flatten() {
            let x = FourVector::contravariant(&ctx, [t, row[0].unwrap_or(f64::NAN), row[1].unwrap_or(f64::NAN), zero.value()])?;
            worst = worst.max(crate::spacetime::null_residual(&ctx, &x, &apex)?);
            cells += 1;
        }
    }
    Ok((worst, cells))
}

fn friedman_identities(exec: Execution) -> Result<(bool, f64, bool)> {
    let mut exact = true;
    for ctx in catalog() {
        let reference = ctx.from_lower(0.8)?;
        exact &= scale_factor(&ctx, reference, reference)? == ctx.one();
    }
    let id = Bijection::identity();
    let t0 = id.upper(1.7)?;
    let mut classical: f64 = 0.0;
    for i in 0..=100 {
        let t = 0.05 * i as f64;
        let a = scale_factor(&id, t0, id.upper(t)?)?.value();
        classical = classical.max((a - classical_scale_factor(t, 1.7)?).abs());
    }
    let tan = Bijection::tangent(20.0)?;
    let grid = FriedmanConfig::default_grid(&tan, tan.one(), 200)?;
    let out = friedman_comparison(&FriedmanConfig::new(&tan, tan.one(), grid)?, exec)?;
    let accelerates = out.acceleration_onset.is_some() && out.classical_decelerates;
    Ok((exact, classical, accelerates))
}
