//! Flat, matter-dominated FRW scale factor in a non-Diophantine time.
//!
//! `A(T) = (T (/) T0)^{2' (/) 3'} = f^-1((f(T)/f(T0))^{2/3})`, compared with the
//! classical `a(t) = (t/t0)^{2/3}` read on the raw time axis.

use crate::arithmetic::{Bijection, UpperReal};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::spacetime::Axis;
use crate::table::SeriesTable;

const TWO_THIRDS: f64 = 2.0 / 3.0;

pub const FRIEDMAN_COLUMNS: [&str; 3] = ["T", "A", "a_classical"];

/// `A(T) = f^-1((f(T)/f(T0))^{2/3})`; `A(T0) = 1'` exactly.
pub fn scale_factor(ctx: &Bijection, reference: UpperReal, t: UpperReal) -> Result<UpperReal> {
    let denominator = ctx.to_lower(reference)?;
    if denominator == 0.0 {
        return Err(Error::DivisionByZeroPrime);
    }
    let ratio = ctx.to_lower(t)? / denominator;
    if ratio < 0.0 {
        return Err(Error::NegativeRatio { ratio });
    }
    ctx.from_lower(ratio.powf(TWO_THIRDS))
}

/// `(t/t0)^{2/3}`.
pub fn classical_scale_factor(t: f64, t0: f64) -> Result<f64> {
    if t0 == 0.0 {
        return Err(Error::InvalidParameter("t0 must be non-zero".into()));
    }
    let ratio = t / t0;
    if ratio < 0.0 {
        return Err(Error::NegativeRatio { ratio });
    }
    Ok(ratio.powf(TWO_THIRDS))
}

#[derive(Clone, Debug)]
pub struct FriedmanConfig {
    ctx: Bijection,
    reference: UpperReal,
    classical_reference: f64,
    grid: Axis,
}

impl FriedmanConfig {
    /// `t0` defaults to the value that makes the classical curve pass through
    /// `A(T0) = 1'` at `t = T0`, i.e. `t0 = T0 / (1')^{3/2}`.
    pub fn new(ctx: &Bijection, reference: UpperReal, grid: Axis) -> Result<Self> {
        ctx.check(reference)?;
        if ctx.to_lower(reference)? == 0.0 {
            return Err(Error::DivisionByZeroPrime);
        }
        let (t_ref, one) = (reference.value(), ctx.one().value());
        if !(t_ref > 0.0 && one > 0.0) {
            return Err(Error::InvalidParameter(
                "default t0 needs T0 > 0 and 1' > 0; supply t0 explicitly".into(),
            ));
        }
        let classical_reference = t_ref / one.powf(1.5);
        Ok(FriedmanConfig { ctx: ctx.clone(), reference, classical_reference, grid })
    }

    pub fn with_classical_reference(mut self, t0: f64) -> Result<Self> {
        if t0 == 0.0 || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("t0 must be finite and non-zero, got {t0}")));
        }
        self.classical_reference = t0;
        Ok(self)
    }

    /// Default time grid: `n` cell-centred samples from `0'` to the upper
    /// horizon for bounded domains, otherwise up to `f^-1(8 f(T0))`.
    pub fn default_grid(ctx: &Bijection, reference: UpperReal, n: usize) -> Result<Axis> {
        let start = ctx.zero().value();
        let end = match ctx.half_length() {
            Some(h) => h,
            None => ctx.from_lower(8.0 * ctx.to_lower(reference)?)?.value(),
        };
        let width = (end - start) / n as f64;
        Ok(Axis::new(start + 0.5 * width, end - 0.5 * width, n))
    }

    pub fn context(&self) -> &Bijection {
        &self.ctx
    }

    pub fn reference(&self) -> UpperReal {
        self.reference
    }

    pub fn classical_reference(&self) -> f64 {
        self.classical_reference
    }

    pub fn grid(&self) -> &Axis {
        &self.grid
    }
}

#[derive(Clone, Debug)]
pub struct FriedmanComparison {
    pub table: SeriesTable,
    /// First grid time from which every second difference of `A` is positive.
    pub acceleration_onset: Option<f64>,
    /// Whether every second difference of the classical curve is negative.
    pub classical_decelerates: bool,
}

/// Index of the first interior sample from which all second differences are
/// strictly positive.
pub fn convex_tail_start(values: &[f64]) -> Option<usize> {
    if values.len() < 3 {
        return None;
    }
    let mut start = None;
    for i in (1..values.len() - 1).rev() {
        if values[i + 1] - 2.0 * values[i] + values[i - 1] > 0.0 {
            start = Some(i);
        } else {
            break;
        }
    }
    start
}

fn second_differences(values: &[f64]) -> impl Iterator<Item = f64> + '_ {
    values.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0])
}

pub fn friedman_comparison(cfg: &FriedmanConfig, exec: Execution) -> Result<FriedmanComparison> {
    let ctx = &cfg.ctx;
    let samples = map_indexed(exec, cfg.grid.count, |i| -> Result<(f64, f64, f64)> {
        let t = cfg.grid.point(i);
        let a = scale_factor(ctx, cfg.reference, ctx.upper(t)?)?;
        Ok((t, a.value(), classical_scale_factor(t, cfg.classical_reference)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let upper: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let classical: Vec<f64> = samples.iter().map(|s| s.2).collect();
    let acceleration_onset = convex_tail_start(&upper).map(|i| samples[i].0);
    let classical_decelerates = classical.len() >= 3 && second_differences(&classical).all(|d| d < 0.0);

    let mut table = SeriesTable::new(FRIEDMAN_COLUMNS);
    table.push_comment(format!("ctx={ctx}"));
    table.push_comment(format!("T0={}", cfg.reference.value()));
    table.push_comment(format!("t0={}", cfg.classical_reference));
    if let Some(h) = ctx.half_length() {
        table.push_comment(format!("L={}", 2.0 * h));
    }
    match acceleration_onset {
        Some(t) => table.push_comment(format!("T*={t}")),
        None => table.push_comment("T*=none"),
    }
    for (t, a, c) in samples {
        table.push_row(vec![Some(t), Some(a), Some(c)]).expect("three columns");
    }
    Ok(FriedmanComparison { table, acceleration_onset, classical_decelerates })
}
