//! Bijection-induced arithmetic.
//!
//! A [`Bijection`] `f` maps an open interval of "upper" reals onto the ordinary
//! ("lower") reals. Every upper operation is the lower operation conjugated by
//! `f`:
//!
//! ```text
//! X (+) Y = f^-1(f(X) + f(Y))      X (*) Y = f^-1(f(X) * f(Y))
//! X (-) Y = f^-1(f(X) - f(Y))      X (/) Y = f^-1(f(X) / f(Y))
//! ```
//!
//! Upper values are tagged with the [`ContextId`] of the bijection that created
//! them; mixing values from two contexts is an error rather than a coercion.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fraction of `L` next to `±L/2` that is treated as the horizon for the
/// bounded bijections.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Number of probe points used to accept a custom bijection.
pub const MONOTONICITY_PROBES: usize = 1024;

const CUSTOM_DERIVATIVE_STEP: f64 = 1e-6;

type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

static NEXT_CUSTOM_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of an arithmetic context.
///
/// Catalog bijections with equal parameters share an id; every accepted custom
/// bijection gets a fresh one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ContextId {
    tag: u8,
    a: u64,
    b: u64,
}

/// A number of an upper domain, tagged with its context.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperReal {
    value: f64,
    ctx: ContextId,
}

impl UpperReal {
    /// The raw upper-domain value.
    pub fn value(self) -> f64 {
        self.value
    }

    pub fn context(self) -> ContextId {
        self.ctx
    }
}

impl fmt::Display for UpperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

/// User-supplied bijection. Must be strictly increasing on `(lower, upper)`.
pub struct CustomBijection {
    name: String,
    lower: f64,
    upper: f64,
    forward: RealMap,
    inverse: RealMap,
    derivative: Option<RealMap>,
}

impl CustomBijection {
    pub fn new<F, G>(name: impl Into<String>, lower: f64, upper: f64, forward: F, inverse: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CustomBijection {
            name: name.into(),
            lower,
            upper,
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            derivative: None,
        }
    }

    /// Supplies an analytic `f'`. Without one, central differences are used.
    pub fn with_derivative<D>(mut self, derivative: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    fn probe_points(&self) -> Vec<f64> {
        let (lo, hi) = match (self.lower.is_finite(), self.upper.is_finite()) {
            (true, true) => (self.lower, self.upper),
            (true, false) => (self.lower, self.lower + 1e2 * self.lower.abs().max(1.0)),
            (false, true) => (self.upper - 1e2 * self.upper.abs().max(1.0), self.upper),
            (false, false) => (-1e2, 1e2),
        };
        (0..MONOTONICITY_PROBES)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / MONOTONICITY_PROBES as f64)
            .collect()
    }

    fn probe(&self) -> Result<()> {
        if !(self.lower < self.upper) {
            return Err(Error::InvalidParameter(format!(
                "custom bijection `{}` has an empty domain",
                self.name
            )));
        }
        let mut previous: Option<f64> = None;
        for x in self.probe_points() {
            let y = (self.forward)(x);
            if !y.is_finite() || previous.is_some_and(|p| y <= p) {
                return Err(Error::NotMonotonic { name: self.name.clone(), at: x });
            }
            let back = (self.inverse)(y);
            if !((back - x).abs() <= 1e-9 * x.abs().max(1.0)) {
                return Err(Error::NotInvertible { name: self.name.clone(), at: x });
            }
            previous = Some(y);
        }
        Ok(())
    }
}

impl fmt::Debug for CustomBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomBijection")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum BijectionKind {
    Identity,
    /// `f(X) = X^p`, odd `p >= 1`.
    Power { p: u32 },
    /// `f(X) = mu ln X + nu` on `(0, inf)`.
    Fechner { mu: f64, nu: f64 },
    /// `f(X) = tan(pi X / L)` on `(-L/2, L/2)`.
    Tangent { length: f64 },
    /// `f(X) = artanh(2X / L)` on `(-L/2, L/2)`.
    Artanh { length: f64 },
    Custom(Arc<CustomBijection>),
}

/// An arithmetic context: the bijection `f` between an upper domain and the
/// lower reals.
#[derive(Clone, Debug)]
pub struct Bijection {
    kind: BijectionKind,
    id: ContextId,
}

impl PartialEq for Bijection {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Bijection {
    pub fn identity() -> Self {
        Self::from_kind(BijectionKind::Identity, 0)
    }

    pub fn power(p: u32) -> Result<Self> {
        if p == 0 || p.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("power bijection needs an odd p >= 1, got {p}")));
        }
        Ok(Self::from_kind(BijectionKind::Power { p }, 0))
    }

    pub fn fechner(mu: f64, nu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("fechner needs mu > 0 and finite nu, got mu={mu}, nu={nu}")));
        }
        Ok(Self::from_kind(BijectionKind::Fechner { mu, nu }, 0))
    }

    pub fn tangent(length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(Self::from_kind(BijectionKind::Tangent { length }, 0))
    }

    pub fn artanh(length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(Self::from_kind(BijectionKind::Artanh { length }, 0))
    }

    /// Accepts a user bijection after it passes the monotonicity and
    /// round-trip probe.
    pub fn custom(custom: CustomBijection) -> Result<Self> {
        custom.probe()?;
        let serial = NEXT_CUSTOM_ID.fetch_add(1, AtomicOrdering::Relaxed);
        let ctx = Self::from_kind(BijectionKind::Custom(Arc::new(custom)), serial);
        // 0' and 1' must exist
        if ctx.from_lower(0.0).is_err() || ctx.from_lower(1.0).is_err() {
            return Err(Error::InvalidParameter(format!("range of `{ctx}` must contain 0 and 1")));
        }
        Ok(ctx)
    }

    fn from_kind(kind: BijectionKind, serial: u64) -> Self {
        let id = match &kind {
            BijectionKind::Identity => ContextId { tag: 0, a: 0, b: 0 },
            BijectionKind::Power { p } => ContextId { tag: 1, a: u64::from(*p), b: 0 },
            BijectionKind::Fechner { mu, nu } => ContextId { tag: 2, a: mu.to_bits(), b: nu.to_bits() },
            BijectionKind::Tangent { length } => ContextId { tag: 3, a: length.to_bits(), b: 0 },
            BijectionKind::Artanh { length } => ContextId { tag: 4, a: length.to_bits(), b: 0 },
            BijectionKind::Custom(_) => ContextId { tag: 5, a: serial, b: 0 },
        };
        Bijection { kind, id }
    }

    pub fn kind(&self) -> &BijectionKind {
        &self.kind
    }

    pub fn id(&self) -> ContextId {
        self.id
    }

    /// Half-width `L/2` for the bounded catalog bijections.
    pub fn half_length(&self) -> Option<f64> {
        match self.kind {
            BijectionKind::Tangent { length } | BijectionKind::Artanh { length } => Some(length / 2.0),
            _ => None,
        }
    }

    /// Open interval of admissible upper values.
    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            BijectionKind::Identity | BijectionKind::Power { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            BijectionKind::Fechner { .. } => (0.0, f64::INFINITY),
            BijectionKind::Tangent { length } | BijectionKind::Artanh { length } => (-length / 2.0, length / 2.0),
            BijectionKind::Custom(c) => (c.lower, c.upper),
        }
    }

    /// Whether a raw value is an admissible upper real. Values within
    /// `BOUNDARY_MARGIN * L` of a bounded horizon are rejected.
    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match &self.kind {
            BijectionKind::Identity | BijectionKind::Power { .. } => true,
            BijectionKind::Fechner { .. } => x > 0.0,
            BijectionKind::Tangent { length } | BijectionKind::Artanh { length } => {
                x.abs() < length / 2.0 - BOUNDARY_MARGIN * length
            }
            BijectionKind::Custom(c) => x > c.lower && x < c.upper,
        }
    }

    /// `f` on raw values, without domain checks.
    pub fn forward_raw(&self, x: f64) -> f64 {
        match &self.kind {
            BijectionKind::Identity => x,
            BijectionKind::Power { p } => match p {
                1 => x,
                3 => x * x * x,
                _ => x.powi(*p as i32),
            },
            BijectionKind::Fechner { mu, nu } => mu * x.ln() + nu,
            BijectionKind::Tangent { length } => (PI * x / length).tan(),
            BijectionKind::Artanh { length } => (2.0 * x / length).atanh(),
            BijectionKind::Custom(c) => (c.forward)(x),
        }
    }

    /// `f^-1` on raw values, without range checks.
    pub fn inverse_raw(&self, y: f64) -> f64 {
        match &self.kind {
            BijectionKind::Identity => y,
            BijectionKind::Power { p } => match p {
                1 => y,
                3 => y.cbrt(),
                _ => y.signum() * y.abs().powf(1.0 / f64::from(*p)),
            },
            BijectionKind::Fechner { mu, nu } => ((y - nu) / mu).exp(),
            BijectionKind::Tangent { length } => length / PI * y.atan(),
            BijectionKind::Artanh { length } => length / 2.0 * y.tanh(),
            BijectionKind::Custom(c) => (c.inverse)(y),
        }
    }

    /// `f'` on raw values. Analytic for the catalog; custom bijections use the
    /// supplied derivative or a central difference.
    pub fn derivative_raw(&self, x: f64) -> f64 {
        match &self.kind {
            BijectionKind::Identity => 1.0,
            BijectionKind::Power { p } => f64::from(*p) * x.powi(*p as i32 - 1),
            BijectionKind::Fechner { mu, .. } => mu / x,
            BijectionKind::Tangent { length } => {
                let c = (PI * x / length).cos();
                PI / length / (c * c)
            }
            BijectionKind::Artanh { length } => {
                let u = 2.0 * x / length;
                2.0 / length / (1.0 - u * u)
            }
            BijectionKind::Custom(c) => match &c.derivative {
                Some(d) => d(x),
                None => {
                    let h = CUSTOM_DERIVATIVE_STEP * x.abs().max(1.0);
                    ((c.forward)(x + h) - (c.forward)(x - h)) / (2.0 * h)
                }
            },
        }
    }

    /// Wraps a raw value as an upper real of this context.
    pub fn upper(&self, x: f64) -> Result<UpperReal> {
        if self.contains(x) {
            Ok(UpperReal { value: x, ctx: self.id })
        } else {
            Err(self.domain_error(x))
        }
    }

    /// `f(X)`.
    pub fn to_lower(&self, x: UpperReal) -> Result<f64> {
        self.check(x)?;
        Ok(self.forward_raw(x.value))
    }

    /// `f^-1(y)`, rejecting lower values whose preimage falls onto a horizon.
    pub fn from_lower(&self, y: f64) -> Result<UpperReal> {
        if y.is_nan() {
            return Err(self.domain_error(y));
        }
        if y.is_infinite() {
            return Err(Error::OverflowToBoundary { lower: y });
        }
        let x = self.inverse_raw(y);
        if self.contains(x) {
            Ok(UpperReal { value: x, ctx: self.id })
        } else {
            Err(Error::OverflowToBoundary { lower: y })
        }
    }

    /// `f'(X)`.
    pub fn derivative(&self, x: UpperReal) -> Result<f64> {
        self.check(x)?;
        Ok(self.derivative_raw(x.value))
    }

    pub fn check(&self, x: UpperReal) -> Result<()> {
        if x.ctx == self.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn domain_error(&self, value: f64) -> Error {
        Error::Domain { value, bijection: self.to_string() }
    }

    /// `0' = f^-1(0)`.
    pub fn zero(&self) -> UpperReal {
        self.from_lower(0.0).expect("0 lies in the range of every accepted bijection")
    }

    /// `1' = f^-1(1)`.
    pub fn one(&self) -> UpperReal {
        self.from_lower(1.0).expect("1 lies in the range of every accepted bijection")
    }

    pub fn add(&self, x: UpperReal, y: UpperReal) -> Result<UpperReal> {
        self.from_lower(self.to_lower(x)? + self.to_lower(y)?)
    }

    pub fn sub(&self, x: UpperReal, y: UpperReal) -> Result<UpperReal> {
        self.from_lower(self.to_lower(x)? - self.to_lower(y)?)
    }

    pub fn mul(&self, x: UpperReal, y: UpperReal) -> Result<UpperReal> {
        self.from_lower(self.to_lower(x)? * self.to_lower(y)?)
    }

    pub fn div(&self, x: UpperReal, y: UpperReal) -> Result<UpperReal> {
        let numerator = self.to_lower(x)?;
        let denominator = self.to_lower(y)?;
        if denominator == 0.0 {
            return Err(Error::DivisionByZeroPrime);
        }
        self.from_lower(numerator / denominator)
    }

    /// `(-)X = 0' (-) X`.
    pub fn neg(&self, x: UpperReal) -> Result<UpperReal> {
        self.from_lower(-self.to_lower(x)?)
    }

    /// `X^{N'}`: `X (*) ... (*) X`, `N` times.
    pub fn pow_nat(&self, x: UpperReal, n: u32) -> Result<UpperReal> {
        if n == 0 {
            return Err(Error::InvalidParameter("pow_nat needs N >= 1".into()));
        }
        let exponent = i32::try_from(n).map_err(|_| Error::InvalidParameter(format!("exponent {n} too large")))?;
        self.from_lower(self.to_lower(x)?.powi(exponent))
    }

    /// Upper order: `X < Y` iff `f(X) < f(Y)`.
    pub fn compare(&self, x: UpperReal, y: UpperReal) -> Result<Ordering> {
        let (a, b) = (self.to_lower(x)?, self.to_lower(y)?);
        a.partial_cmp(&b).ok_or(Error::InvalidParameter("unordered values".into()))
    }

    /// `(x + k x) (-) x`, with `+` and `*` the ordinary operations on raw
    /// values. For a Fechner context the result does not depend on `x`.
    pub fn weber_increment(&self, x: UpperReal, k: f64) -> Result<UpperReal> {
        if !matches!(self.kind, BijectionKind::Fechner { .. }) {
            return Err(Error::InvalidParameter("weber_increment needs a fechner context".into()));
        }
        if !(k >= 0.0) {
            return Err(Error::InvalidParameter(format!("increment ratio must be >= 0, got {k}")));
        }
        self.check(x)?;
        let stimulus = self.upper(x.value + k * x.value)?;
        self.sub(stimulus, x)
    }
}

fn check_length(length: f64) -> Result<()> {
    if length > 0.0 && length.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("length L must be positive, got {length}")))
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BijectionKind::Identity => write!(f, "id"),
            BijectionKind::Power { p } => write!(f, "pow:p={p}"),
            BijectionKind::Fechner { mu, nu } => write!(f, "fechner:mu={mu},nu={nu}"),
            BijectionKind::Tangent { length } => write!(f, "tan:L={length}"),
            BijectionKind::Artanh { length } => write!(f, "artanh:L={length}"),
            BijectionKind::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

impl FromStr for Bijection {
    type Err = Error;

    /// Parses `id`, `pow:p=3`, `fechner:mu=10,nu=-20`, `tan:L=1`, `artanh:L=1`.
    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| Error::ParseBijection { input: input.to_string(), reason };
        let (name, params) = match input.split_once(':') {
            Some((name, params)) => (name, params),
            None => (input, ""),
        };
        let mut pairs: Vec<(&str, f64)> = Vec::new();
        if !params.is_empty() {
            for item in params.split(',') {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| fail(format!("expected key=value, got `{item}`")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("`{value}` is not a number")))?;
                if pairs.iter().any(|(k, _)| *k == key) {
                    return Err(fail(format!("duplicate key `{key}`")));
                }
                pairs.push((key, value));
            }
        }
        let allowed: &[&str] = match name {
            "id" => &[],
            "pow" => &["p"],
            "fechner" => &["mu", "nu"],
            "tan" | "artanh" => &["L"],
            other => return Err(fail(format!("unknown bijection `{other}`"))),
        };
        if let Some((key, _)) = pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(fail(format!("unknown key `{key}` for `{name}`")));
        }
        let get = |key: &str| {
            pairs
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| fail(format!("missing key `{key}`")))
        };
        match name {
            "id" => Ok(Bijection::identity()),
            "pow" => {
                let p = get("p")?;
                if p.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&p) {
                    return Err(fail(format!("p must be a positive integer, got {p}")));
                }
                Bijection::power(p as u32)
            }
            "fechner" => Bijection::fechner(get("mu")?, get("nu")?),
            "tan" => Bijection::tangent(get("L")?),
            _ => Bijection::artanh(get("L")?),
        }
    }
}
