//! Minkowski structure over an upper domain.
//!
//! Components live in the upper domain; metric contractions, boosts and
//! causal predicates are evaluated in the lower image `x^a = f(X^a)` and the
//! result is mapped back with `f^-1`.

use crate::arithmetic::{Bijection, UpperReal};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::table::SeriesTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// Diagonal Minkowski metric `g = diag(+1, -1, -1, -1)` and its upper
/// counterpart `G_ab = f^-1(g_ab)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricSignature;

impl MetricSignature {
    pub const DIAGONAL: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

    pub fn lower(a: usize) -> f64 {
        Self::DIAGONAL[a]
    }

    /// `G_aa = f^-1(g_aa)`.
    pub fn upper(ctx: &Bijection, a: usize) -> Result<UpperReal> {
        ctx.from_lower(Self::DIAGONAL[a])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector {
    components: [UpperReal; 4],
    variance: Variance,
}

impl FourVector {
    pub fn new(ctx: &Bijection, raw: [f64; 4], variance: Variance) -> Result<Self> {
        let mut components = [ctx.zero(); 4];
        for (slot, value) in components.iter_mut().zip(raw) {
            *slot = ctx.upper(value)?;
        }
        Ok(FourVector { components, variance })
    }

    pub fn contravariant(ctx: &Bijection, raw: [f64; 4]) -> Result<Self> {
        Self::new(ctx, raw, Variance::Contravariant)
    }

    pub fn from_components(components: [UpperReal; 4], variance: Variance) -> Result<Self> {
        let ctx = components[0].context();
        if components.iter().any(|c| c.context() != ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(FourVector { components, variance })
    }

    /// `X^a = f^-1(x^a)`.
    pub fn from_lower(ctx: &Bijection, lower: [f64; 4], variance: Variance) -> Result<Self> {
        let mut components = [ctx.zero(); 4];
        for (slot, value) in components.iter_mut().zip(lower) {
            *slot = ctx.from_lower(value)?;
        }
        Ok(FourVector { components, variance })
    }

    pub fn to_lower(&self, ctx: &Bijection) -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (slot, c) in out.iter_mut().zip(self.components) {
            *slot = ctx.to_lower(c)?;
        }
        Ok(out)
    }

    pub fn components(&self) -> [UpperReal; 4] {
        self.components
    }

    pub fn component(&self, a: usize) -> UpperReal {
        self.components[a]
    }

    pub fn raw(&self) -> [f64; 4] {
        self.components.map(UpperReal::value)
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    /// Componentwise `X (-) Y`.
    pub fn sub(&self, ctx: &Bijection, other: &FourVector) -> Result<FourVector> {
        if self.variance != other.variance {
            return Err(Error::WrongVariance { expected: variance_name(self.variance) });
        }
        let (x, y) = (self.to_lower(ctx)?, other.to_lower(ctx)?);
        Self::from_lower(ctx, [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]], self.variance)
    }

    fn require(&self, variance: Variance) -> Result<()> {
        if self.variance == variance {
            Ok(())
        } else {
            Err(Error::WrongVariance { expected: variance_name(variance) })
        }
    }
}

fn variance_name(v: Variance) -> &'static str {
    match v {
        Variance::Contravariant => "contravariant",
        Variance::Covariant => "covariant",
    }
}

fn minkowski_square(x: [f64; 4]) -> f64 {
    x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]
}

/// `G_ab X^a X^b = f^-1(g_ab f(X^a) f(X^b))`.
pub fn quadratic_form(ctx: &Bijection, v: &FourVector) -> Result<UpperReal> {
    v.require(Variance::Contravariant)?;
    ctx.from_lower(minkowski_square(v.to_lower(ctx)?))
}

/// `X_a = G_ab X^b`, i.e. `f(X_0) = f(X^0)`, `f(X_i) = -f(X^i)`.
pub fn lower_index(ctx: &Bijection, v: &FourVector) -> Result<FourVector> {
    v.require(Variance::Contravariant)?;
    flip_spatial(ctx, v, Variance::Covariant)
}

/// Inverse of [`lower_index`].
pub fn raise_index(ctx: &Bijection, v: &FourVector) -> Result<FourVector> {
    v.require(Variance::Covariant)?;
    flip_spatial(ctx, v, Variance::Contravariant)
}

fn flip_spatial(ctx: &Bijection, v: &FourVector, variance: Variance) -> Result<FourVector> {
    let x = v.to_lower(ctx)?;
    let mut out = [0.0; 4];
    for a in 0..4 {
        out[a] = MetricSignature::lower(a) * x[a];
    }
    FourVector::from_lower(ctx, out, variance)
}

/// Boost along `x^1` with upper rapidity `phi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostParameters {
    rapidity: UpperReal,
}

impl BoostParameters {
    pub fn new(rapidity: UpperReal) -> Self {
        BoostParameters { rapidity }
    }

    /// Rapidity given through its lower image `f(phi)`.
    pub fn from_lower(ctx: &Bijection, rapidity: f64) -> Result<Self> {
        Ok(Self::new(ctx.from_lower(rapidity)?))
    }

    pub fn rapidity(&self) -> UpperReal {
        self.rapidity
    }

    /// `Cosh phi = f^-1(cosh f(phi))`.
    pub fn cosh(&self, ctx: &Bijection) -> Result<UpperReal> {
        ctx.from_lower(ctx.to_lower(self.rapidity)?.cosh())
    }

    /// `Sinh phi = f^-1(sinh f(phi))`.
    pub fn sinh(&self, ctx: &Bijection) -> Result<UpperReal> {
        ctx.from_lower(ctx.to_lower(self.rapidity)?.sinh())
    }

    /// Lower image of `Lambda^a_b`.
    pub fn lower_matrix(&self, ctx: &Bijection) -> Result<[[f64; 4]; 4]> {
        let phi = ctx.to_lower(self.rapidity)?;
        let (c, s) = (phi.cosh(), phi.sinh());
        Ok([
            [c, -s, 0.0, 0.0],
            [-s, c, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    /// `Lambda^a_b` with upper entries (`Cosh phi`, `(-)Sinh phi`, `0'`, `1'`).
    pub fn matrix(&self, ctx: &Bijection) -> Result<[[UpperReal; 4]; 4]> {
        let lower = self.lower_matrix(ctx)?;
        let mut out = [[ctx.zero(); 4]; 4];
        for (row, lower_row) in out.iter_mut().zip(lower) {
            for (entry, value) in row.iter_mut().zip(lower_row) {
                *entry = ctx.from_lower(value)?;
            }
        }
        Ok(out)
    }
}

/// Applies the boost in the lower image:
/// `f(X'^a) = sum_b f(Lambda^a_b) f(X^b)`. Covariant vectors transform with
/// `Lambda_a^b = g Lambda g`, so index lowering commutes with boosting.
pub fn boost(ctx: &Bijection, params: &BoostParameters, v: &FourVector) -> Result<FourVector> {
    let mut m = params.lower_matrix(ctx)?;
    if v.variance == Variance::Covariant {
        m[0][1] = -m[0][1];
        m[1][0] = -m[1][0];
    }
    let x = v.to_lower(ctx)?;
    let mut out = [0.0; 4];
    for (a, row) in m.iter().enumerate() {
        out[a] = row.iter().zip(x).map(|(l, xb)| l * xb).sum();
    }
    FourVector::from_lower(ctx, out, v.variance)
}

/// Four-velocity `U = (Cosh phi, Sinh phi, 0', 0')`.
pub fn four_velocity(ctx: &Bijection, params: &BoostParameters) -> Result<FourVector> {
    let zero = ctx.zero();
    FourVector::from_components([params.cosh(ctx)?, params.sinh(ctx)?, zero, zero], Variance::Contravariant)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Future,
    Past,
}

/// `X^0` on the light cone of `apex`:
/// `X^0 = f^-1(f(Y^0) +- sqrt(sum_i (f(X^i) - f(Y^i))^2))`.
pub fn lightcone_time(ctx: &Bijection, apex: &FourVector, spatial: [UpperReal; 3], branch: Branch) -> Result<UpperReal> {
    apex.require(Variance::Contravariant)?;
    let y = apex.to_lower(ctx)?;
    let mut squared = 0.0;
    for (i, s) in spatial.into_iter().enumerate() {
        let d = ctx.to_lower(s)? - y[i + 1];
        squared += d * d;
    }
    let radius = squared.sqrt();
    let t = match branch {
        Branch::Future => y[0] + radius,
        Branch::Past => y[0] - radius,
    };
    ctx.from_lower(t)
}

/// `| g_ab (x^a - y^a)(x^b - y^b) | / (1 + sum_a (x^a - y^a)^2)`, the
/// scale-free null residual of `X` against apex `Y`.
pub fn null_residual(ctx: &Bijection, x: &FourVector, apex: &FourVector) -> Result<f64> {
    let (x, y) = (x.to_lower(ctx)?, apex.to_lower(ctx)?);
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]];
    let norm: f64 = d.iter().map(|v| v * v).sum();
    Ok(minkowski_square(d).abs() / (1.0 + norm))
}

/// Local metric `g~_ab(Y) = g_ab f'(Y^a) f'(Y^b)` (no sum) seen by an
/// observer who uses ordinary arithmetic near `Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveMetric {
    base: FourVector,
    diagonal: [f64; 4],
}

impl EffectiveMetric {
    pub fn base(&self) -> &FourVector {
        &self.base
    }

    pub fn diagonal(&self) -> [f64; 4] {
        self.diagonal
    }

    /// `g~_ab eps^a eps^b`.
    pub fn contract(&self, eps: [f64; 4]) -> f64 {
        self.diagonal.iter().zip(eps).map(|(g, e)| g * e * e).sum()
    }
}

pub fn effective_metric(ctx: &Bijection, y: &FourVector) -> Result<EffectiveMetric> {
    y.require(Variance::Contravariant)?;
    let mut diagonal = [0.0; 4];
    for (a, entry) in diagonal.iter_mut().enumerate() {
        let d = ctx.derivative(y.component(a))?;
        if !d.is_finite() || d == 0.0 {
            return Err(Error::SingularMetric { axis: a });
        }
        *entry = MetricSignature::lower(a) * d * d;
    }
    Ok(EffectiveMetric { base: *y, diagonal })
}

/// Evenly spaced raw coordinates, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Axis { start, end, count }
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.count {
            0 | 1 => self.start,
            n if i + 1 == n => self.end,
            n => self.start + (self.end - self.start) * i as f64 / (n - 1) as f64,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Rectangular `(X^1, X^2)` grid for a 1+2 dimensional surface; `X^3` stays at
/// the apex value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x1: Axis,
    pub x2: Axis,
}

impl GridSpec {
    /// Default square grid spanning the closed coordinate range for `ctx`.
    /// Horizon edges produce missing cells.
    pub fn default_for(ctx: &Bijection, count: usize) -> Self {
        let (lo, hi) = match (ctx.half_length(), ctx.domain()) {
            (Some(h), _) => (-h, h),
            (None, (lo, _)) if lo.is_finite() => (lo, lo + 3.0 * (ctx.zero().value() - lo).max(1.0)),
            _ => (-2.0, 2.0),
        };
        GridSpec { x1: Axis::new(lo, hi, count), x2: Axis::new(lo, hi, count) }
    }
}

pub const LIGHTCONE_COLUMNS: [&str; 4] = ["X1", "X2", "X0_future", "X0_past"];

/// Samples both light-cone branches over `grid`. Rows run `X^1`-major. Cells
/// whose spatial point lies outside the domain or whose time falls onto a
/// horizon are left empty.
pub fn lightcone_surface(ctx: &Bijection, apex: &FourVector, grid: &GridSpec, exec: Execution) -> Result<SeriesTable> {
    apex.require(Variance::Contravariant)?;
    for c in apex.components() {
        ctx.check(c)?;
    }
    let x3 = apex.component(3);
    let rows = map_indexed(exec, grid.x1.count, |i| -> Result<Vec<Vec<Option<f64>>>> {
        let x1 = grid.x1.point(i);
        (0..grid.x2.count)
            .map(|j| {
                let x2 = grid.x2.point(j);
                let mut row = vec![Some(x1), Some(x2), None, None];
                if let (Ok(u1), Ok(u2)) = (ctx.upper(x1), ctx.upper(x2)) {
                    for (slot, branch) in [(2, Branch::Future), (3, Branch::Past)] {
                        match lightcone_time(ctx, apex, [u1, u2, x3], branch) {
                            Ok(t) => row[slot] = Some(t.value()),
                            Err(Error::OverflowToBoundary { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(row)
            })
            .collect()
    });
    let mut table = SeriesTable::new(LIGHTCONE_COLUMNS);
    table.push_comment(format!("ctx={ctx}"));
    table.push_comment(format!(
        "apex={},{},{},{}",
        apex.raw()[0],
        apex.raw()[1],
        apex.raw()[2],
        apex.raw()[3]
    ));
    for block in rows {
        for row in block? {
            table.push_row(row).expect("row width matches LIGHTCONE_COLUMNS");
        }
    }
    Ok(table)
}
