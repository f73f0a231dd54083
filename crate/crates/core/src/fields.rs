//! Point-charge potential and the apparent velocity it suggests.
//!
//! Only the configuration the theory evaluates explicitly is covered: observer
//! at the origin `0'`, source event `Y = (Y^0, Y^1, 0', 0')` null and
//! past-pointing (`f(Y^0) = -|f(Y^1)|`), charge moving with the constant
//! four-velocity `U = (Cosh phi, Sinh phi, 0', 0')`.
//!
//! An observer who reads the potential with ordinary arithmetic sees a Coulomb
//! field multiplied by `exp(-sgn(Y^1) f(phi(Y^1)))` and infers a rapidity, hence
//! a velocity `beta = tanh f(phi)`, even for a charge at rest.

use std::f64::consts::PI;

use crate::arithmetic::{Bijection, BijectionKind, UpperReal};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::spacetime::{boost, Axis, BoostParameters, FourVector, Variance};
use crate::table::SeriesTable;

#[derive(Clone, Debug)]
pub struct ChargeConfig {
    ctx: Bijection,
    coupling: UpperReal,
    rapidity: UpperReal,
    source: FourVector,
}

impl ChargeConfig {
    /// Places the source at `Y^1` and fills in `Y^0 = f^-1(-|f(Y^1)|)`.
    pub fn new(ctx: &Bijection, coupling: UpperReal, rapidity: UpperReal, source_x1: UpperReal) -> Result<Self> {
        let y1 = ctx.to_lower(source_x1)?;
        let zero = ctx.zero();
        let y0 = ctx.from_lower(-y1.abs())?;
        let source = FourVector::from_components([y0, source_x1, zero, zero], Variance::Contravariant)?;
        Self::with_source(ctx, coupling, rapidity, source)
    }

    /// Uses an explicit source event, which must be null and past-pointing
    /// with vanishing transverse components.
    pub fn with_source(ctx: &Bijection, coupling: UpperReal, rapidity: UpperReal, source: FourVector) -> Result<Self> {
        ctx.check(coupling)?;
        ctx.check(rapidity)?;
        if source.variance() != Variance::Contravariant {
            return Err(Error::WrongVariance { expected: "contravariant" });
        }
        let y = source.to_lower(ctx)?;
        if y[2] != 0.0 || y[3] != 0.0 {
            return Err(Error::InvalidParameter("source must lie on the x^1 axis (Y^2 = Y^3 = 0')".into()));
        }
        if (y[0] + y[1].abs()).abs() > 1e-12 * y[1].abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "source must be null and past-pointing: f(Y^0) = {}, f(Y^1) = {}",
                y[0], y[1]
            )));
        }
        Ok(ChargeConfig { ctx: ctx.clone(), coupling, rapidity, source })
    }

    pub fn context(&self) -> &Bijection {
        &self.ctx
    }

    pub fn coupling(&self) -> UpperReal {
        self.coupling
    }

    pub fn rapidity(&self) -> UpperReal {
        self.rapidity
    }

    pub fn source(&self) -> &FourVector {
        &self.source
    }

    /// Charge `q` of the near-origin Coulomb limit `A'^0(0') ~ q/|Y|`, derived
    /// from the coupling and the context. For Fechner contexts the limit is
    /// `A'^0 - 0' ~ q/|r|` with `r = Y^1 - 0'`. `None` where no linear limit
    /// exists (odd powers above one, custom bijections).
    pub fn coulomb_charge(&self) -> Option<f64> {
        let fc = self.ctx.to_lower(self.coupling).ok()?;
        match self.ctx.kind() {
            BijectionKind::Identity | BijectionKind::Power { p: 1 } => Some(fc),
            BijectionKind::Tangent { length } => Some(length * length * fc / (PI * PI)),
            BijectionKind::Artanh { length } => Some(length * length * fc / 4.0),
            BijectionKind::Fechner { mu, nu } => {
                let scale = (-nu / mu).exp() / mu;
                Some(fc * scale * scale)
            }
            _ => None,
        }
    }
}

/// `A'^0(0') = C (/) ((-) Lambda Y)^0`: the source event is boosted with the
/// charge's rapidity and the only non-vanishing component is read off at the
/// origin. Equal to `f^-1(f(C) / (|f(Y^1)| exp(sgn f(Y^1) f(phi))))`.
pub fn potential_at_origin(cfg: &ChargeConfig) -> Result<UpperReal> {
    let ctx = &cfg.ctx;
    if ctx.to_lower(cfg.source.component(1))? == 0.0 {
        return Err(Error::SourceAtObserver);
    }
    let boosted = boost(ctx, &BoostParameters::new(cfg.rapidity), &cfg.source)?;
    let denominator = ctx.neg(boosted.component(0))?;
    ctx.div(cfg.coupling, denominator)
}

/// Inferred rapidity and velocity from the Coulomb distortion ratio `rho`:
/// `f(phi) = sign ln rho`, `beta = tanh f(phi)`.
pub fn rapidity_from_ratio(rho: f64, sign: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidParameter(format!("distortion ratio must be positive, got {rho}")));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {sign}")));
    }
    let phi = sign * rho.ln();
    Ok((phi, phi.tanh()))
}

fn check_coordinate(length: f64, y1: f64, name: &str) -> Result<()> {
    if !(length > 0.0) {
        return Err(Error::InvalidParameter(format!("length L must be positive, got {length}")));
    }
    if y1 == 0.0 || !(y1.abs() < length / 2.0) {
        return Err(Error::Domain { value: y1, bijection: format!("{name}:L={length}") });
    }
    Ok(())
}

/// Apparent velocity for `f(X) = tan(pi X / L)`; `rho = tan(pi Y/L) / (pi Y/L)`.
pub fn apparent_beta_tan(length: f64, y1: f64) -> Result<f64> {
    check_coordinate(length, y1, "tan")?;
    let arg = PI * y1 / length;
    rapidity_from_ratio(arg.tan() / arg, y1.signum()).map(|(_, beta)| beta)
}

/// Apparent velocity for `f(X) = artanh(2X / L)`; `rho = artanh(2Y/L) / (2Y/L)`.
pub fn apparent_beta_artanh(length: f64, y1: f64) -> Result<f64> {
    check_coordinate(length, y1, "artanh")?;
    let arg = 2.0 * y1 / length;
    rapidity_from_ratio(arg.atanh() / arg, y1.signum()).map(|(_, beta)| beta)
}

/// Apparent velocity in a Fechner universe as a function of `u = r/0'`, where
/// `Y^1 = 0' + r`; `rho = ln(1 + u) / u`.
pub fn apparent_beta_fechner(u: f64) -> Result<f64> {
    if !(u > -1.0) || u == 0.0 || !u.is_finite() {
        return Err(Error::Domain { value: u, bijection: "fechner (u = r/0')".into() });
    }
    rapidity_from_ratio(u.ln_1p() / u, u.signum()).map(|(_, beta)| beta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaKind {
    Tan { length: f64 },
    Artanh { length: f64 },
    Fechner,
}

impl BetaKind {
    pub fn beta(self, coordinate: f64) -> Result<f64> {
        match self {
            BetaKind::Tan { length } => apparent_beta_tan(length, coordinate),
            BetaKind::Artanh { length } => apparent_beta_artanh(length, coordinate),
            BetaKind::Fechner => apparent_beta_fechner(coordinate),
        }
    }

    pub fn coordinate_name(self) -> &'static str {
        match self {
            BetaKind::Tan { .. } | BetaKind::Artanh { .. } => "Y1",
            BetaKind::Fechner => "r_over_zero",
        }
    }

    /// `n` samples across the valid coordinate range: the open interval
    /// `(-L/2, L/2)` for tan/artanh, `(-1, 6]` for Fechner.
    pub fn default_axis(self, n: usize) -> Axis {
        match self {
            BetaKind::Tan { length } | BetaKind::Artanh { length } => {
                let step = length / (n + 1) as f64;
                Axis::new(-length / 2.0 + step, length / 2.0 - step, n)
            }
            BetaKind::Fechner => Axis::new(-1.0 + 7.0 / n as f64, 6.0, n),
        }
    }
}

impl std::fmt::Display for BetaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BetaKind::Tan { length } => write!(f, "tan:L={length}"),
            BetaKind::Artanh { length } => write!(f, "artanh:L={length}"),
            BetaKind::Fechner => write!(f, "fechner"),
        }
    }
}

/// Samples `beta` over `axis`. The coordinate origin (where the sign of the
/// source position is undefined) and horizons yield empty cells; every other
/// error propagates.
pub fn beta_curve(kind: BetaKind, axis: &Axis, exec: Execution) -> Result<SeriesTable> {
    let samples = map_indexed(exec, axis.count, |i| {
        let x = axis.point(i);
        match kind.beta(x) {
            Ok(beta) => Ok((x, Some(beta))),
            Err(Error::Domain { .. }) if on_singular_point(kind, x) => Ok((x, None)),
            Err(e) => Err(e),
        }
    });
    let mut table = SeriesTable::new([kind.coordinate_name(), "beta"]);
    table.push_comment(format!("kind={kind}"));
    for sample in samples {
        let (x, beta) = sample?;
        table.push_row(vec![Some(x), beta]).expect("two columns");
    }
    Ok(table)
}

fn on_singular_point(kind: BetaKind, x: f64) -> bool {
    match kind {
        BetaKind::Tan { length } | BetaKind::Artanh { length } => x == 0.0 || x.abs() == length / 2.0,
        BetaKind::Fechner => x == 0.0 || x == -1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn closed_form(rho: f64, sign: f64) -> f64 {
        sign * (rho * rho - 1.0) / (rho * rho + 1.0)
    }

    #[test]
    fn beta_values() {
        let rho = 1.0 / (PI / 4.0);
        assert_relative_eq!(apparent_beta_tan(1.0, 0.25).unwrap(), closed_form(rho, 1.0), epsilon = 1e-14);
        assert!((apparent_beta_tan(1.0, 0.25).unwrap() - 0.2370).abs() < 1e-4);

        let rho = 0.5f64.atanh() / 0.5;
        assert_relative_eq!(apparent_beta_artanh(1.0, 0.25).unwrap(), closed_form(rho, 1.0), epsilon = 1e-14);
        assert!((apparent_beta_artanh(1.0, 0.25).unwrap() - 0.0937).abs() < 1e-4);

        let rho = 2f64.ln();
        assert_relative_eq!(apparent_beta_fechner(1.0).unwrap(), closed_form(rho, 1.0), epsilon = 1e-14);
        assert!((apparent_beta_fechner(1.0).unwrap() + 0.3509).abs() < 1e-4);
    }

    #[test]
    fn beta_limits() {
        // onset is quadratic: beta ~ sgn(Y) (pi Y / L)^2 / 3
        assert_relative_eq!(apparent_beta_tan(1.0, 1e-4).unwrap(), (PI * 1e-4).powi(2) / 3.0, max_relative = 1e-6);
        assert_relative_eq!(apparent_beta_artanh(1.0, -1e-4).unwrap(), -4.0 / 3.0 * 1e-8, max_relative = 1e-6);
        assert!(apparent_beta_tan(1.0, 0.5 - 1e-7).unwrap() > 0.999_999);
        assert!(apparent_beta_artanh(2.0, -0.999_999).unwrap() < -0.9);
        assert!(apparent_beta_fechner(1e-6).unwrap().abs() < 1e-6);
        assert!(apparent_beta_fechner(-1.0 + 1e-12).unwrap() < -0.99);
        for beta in [
            apparent_beta_tan(1.0, 0.0),
            apparent_beta_tan(1.0, 0.5),
            apparent_beta_artanh(1.0, -0.5),
            apparent_beta_fechner(0.0),
            apparent_beta_fechner(-1.0),
            apparent_beta_fechner(-2.0),
        ] {
            assert!(matches!(beta, Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn rapidity_examples() {
        assert_eq!(rapidity_from_ratio(1.0, 1.0).unwrap(), (0.0, 0.0));
        let (phi, beta) = rapidity_from_ratio(std::f64::consts::E, 1.0).unwrap();
        assert_relative_eq!(phi, 1.0, epsilon = 1e-15);
        assert_relative_eq!(beta, 0.7616, epsilon = 1e-4);
        let (_, beta) = rapidity_from_ratio(4.0 / PI, 1.0).unwrap();
        assert_relative_eq!(beta, apparent_beta_tan(1.0, 0.25).unwrap(), epsilon = 1e-15);
        assert!(rapidity_from_ratio(0.0, 1.0).is_err());
        assert!(rapidity_from_ratio(1.0, 0.5).is_err());
    }

    #[test]
    fn potential_matches_closed_form() {
        let contexts = [
            Bijection::identity(),
            Bijection::tangent(1.0).unwrap(),
            Bijection::artanh(1.0).unwrap(),
            Bijection::fechner(10.0, -20.0).unwrap(),
            Bijection::power(3).unwrap(),
        ];
        for ctx in contexts {
            for (y1, phi) in [(0.3, 0.0), (-0.2, 0.4), (0.05, -1.1)] {
                let coupling = ctx.from_lower(0.02).unwrap();
                let rapidity = ctx.from_lower(phi).unwrap();
                let x1 = ctx.from_lower(y1).unwrap();
                let cfg = ChargeConfig::new(&ctx, coupling, rapidity, x1).unwrap();
                let got = ctx.to_lower(potential_at_origin(&cfg).unwrap()).unwrap();
                let expected = 0.02 / (y1.abs() * (y1.signum() * phi).exp());
                assert_relative_eq!(got, expected, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn tangent_potential_is_arctan_form() {
        let l = 2.0;
        let ctx = Bijection::tangent(l).unwrap();
        let (fc, phi, y1) = (0.3, 0.2, -0.45);
        let cfg = ChargeConfig::new(
            &ctx,
            ctx.from_lower(fc).unwrap(),
            ctx.from_lower(phi).unwrap(),
            ctx.upper(y1).unwrap(),
        )
        .unwrap();
        let expected = l / PI * (fc / ((PI * y1 / l).tan().abs() * (y1.signum() * phi).exp())).atan();
        assert_relative_eq!(potential_at_origin(&cfg).unwrap().value(), expected, max_relative = 1e-12);
    }

    #[test]
    fn coulomb_limits() {
        let fy = 1e-4;
        let fc = 1e-10;
        for ctx in [
            Bijection::identity(),
            Bijection::tangent(1.0).unwrap(),
            Bijection::artanh(3.0).unwrap(),
            Bijection::fechner(10.0, -20.0).unwrap(),
        ] {
            let cfg = ChargeConfig::new(&ctx, ctx.from_lower(fc).unwrap(), ctx.zero(), ctx.from_lower(fy).unwrap()).unwrap();
            let q = cfg.coulomb_charge().unwrap();
            let a = potential_at_origin(&cfg).unwrap().value();
            let (reading, distance) = match ctx.kind() {
                BijectionKind::Fechner { .. } => {
                    let zero = ctx.zero().value();
                    (a - zero, cfg.source().raw()[1] - zero)
                }
                _ => (a, cfg.source().raw()[1]),
            };
            let rel = (reading - q / distance.abs()).abs() / (q / distance.abs());
            assert!(rel < 1e-3, "{ctx}: relative error {rel}");
        }
        let cubic = Bijection::power(3).unwrap();
        let cfg = ChargeConfig::new(&cubic, cubic.one(), cubic.zero(), cubic.one()).unwrap();
        assert_eq!(cfg.coulomb_charge(), None);
    }

    #[test]
    fn source_validation() {
        let ctx = Bijection::tangent(1.0).unwrap();
        let err = ChargeConfig::new(&ctx, ctx.one(), ctx.zero(), ctx.zero()).map(|cfg| potential_at_origin(&cfg));
        assert_eq!(err.unwrap(), Err(Error::SourceAtObserver));

        let future = FourVector::contravariant(&ctx, [0.1, 0.1, 0.0, 0.0]).unwrap();
        assert!(ChargeConfig::with_source(&ctx, ctx.one(), ctx.zero(), future).is_err());
        let off_axis = FourVector::contravariant(&ctx, [-0.1, 0.1, 0.05, 0.0]).unwrap();
        assert!(ChargeConfig::with_source(&ctx, ctx.one(), ctx.zero(), off_axis).is_err());
        let good = FourVector::contravariant(&ctx, [-0.1, 0.1, 0.0, 0.0]).unwrap();
        assert!(ChargeConfig::with_source(&ctx, ctx.one(), ctx.zero(), good).is_ok());

        let other = Bijection::identity();
        assert_eq!(
            ChargeConfig::new(&ctx, other.one(), ctx.zero(), ctx.one()).unwrap_err(),
            Error::ContextMismatch
        );
    }

    #[test]
    fn curves() {
        let tan = BetaKind::Tan { length: 1.0 };
        let table = beta_curve(tan, &tan.default_axis(101), Execution::Parallel).unwrap();
        assert_eq!(table.len(), 101);
        let betas = table.column("beta").unwrap();
        assert_eq!(betas.iter().filter(|b| b.is_none()).count(), 1);
        assert_eq!(betas[50], None);

        let fechner = BetaKind::Fechner;
        let axis = fechner.default_axis(101);
        assert_eq!(axis.point(100), 6.0);
        let table = beta_curve(fechner, &axis, Execution::Sequential).unwrap();
        assert!(table.column("beta").unwrap().iter().all(|b| b.unwrap() < 0.0));

        let bad = beta_curve(tan, &Axis::new(0.1, 0.7, 4), Execution::Sequential);
        assert!(bad.is_err());
    }
}
