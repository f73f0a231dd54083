//! Derivatives and integrals over an upper domain.
//!
//! An upper function `A` is stored through its lower shadow `a = f o A o f^-1`,
//! so `A = f^-1 o a o f`. Derivative and integral are then
//!
//! ```text
//! DA/DX (X)       = f^-1( a'(f(X)) )
//! int_X^Y A(X')DX' = f^-1( int_{f(X)}^{f(Y)} a(x) dx )
//! ```
//!
//! Neither formula involves `f'`: the conjugated derivative carries a trivial
//! connection.

use std::fmt;
use std::sync::Arc;

use crate::arithmetic::{Bijection, UpperReal};
use crate::error::{Error, Result};

/// Default number of Simpson panels (each panel spans two sub-intervals).
pub const DEFAULT_PANELS: usize = 1024;

/// Relative step of the lower central difference.
pub const DERIVATIVE_STEP: f64 = 1e-6;

type Shadow = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct UpperFunction {
    ctx: Bijection,
    shadow: Shadow,
}

impl fmt::Debug for UpperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UpperFunction").field("ctx", &self.ctx.to_string()).finish_non_exhaustive()
    }
}

impl UpperFunction {
    /// Builds `A = f^-1 o a o f` from its lower shadow `a`.
    pub fn from_shadow<F>(ctx: &Bijection, shadow: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        UpperFunction { ctx: ctx.clone(), shadow: Arc::new(shadow) }
    }

    /// Builds an upper function from its action on raw upper values; the
    /// shadow becomes `f o A o f^-1`.
    pub fn from_upper<F>(ctx: &Bijection, upper: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let inner = ctx.clone();
        Self::from_shadow(ctx, move |y| inner.forward_raw(upper(inner.inverse_raw(y))))
    }

    pub fn context(&self) -> &Bijection {
        &self.ctx
    }

    /// The lower shadow `a(x)`.
    pub fn shadow(&self, x: f64) -> f64 {
        (self.shadow)(x)
    }

    pub fn eval(&self, x: UpperReal) -> Result<UpperReal> {
        let y = self.ctx.to_lower(x)?;
        self.ctx.from_lower(self.shadow(y))
    }

    /// `A (+) B`, pointwise.
    pub fn oplus(&self, other: &UpperFunction) -> Result<UpperFunction> {
        self.combine(other, |a, b| a + b)
    }

    /// `A (*) B`, pointwise.
    pub fn otimes(&self, other: &UpperFunction) -> Result<UpperFunction> {
        self.combine(other, |a, b| a * b)
    }

    fn combine(&self, other: &UpperFunction, op: fn(f64, f64) -> f64) -> Result<UpperFunction> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let (a, b) = (self.shadow.clone(), other.shadow.clone());
        Ok(Self::from_shadow(&self.ctx, move |x| op(a(x), b(x))))
    }

    /// `DA/DX` as an upper function (central difference on the shadow).
    pub fn derivative(&self) -> UpperFunction {
        let a = self.shadow.clone();
        Self::from_shadow(&self.ctx, move |x| central_difference(&*a, x))
    }

    /// `X |-> int_Y^X A(X') DX'` as an upper function.
    pub fn antiderivative(&self, from: UpperReal, panels: usize) -> Result<UpperFunction> {
        let start = self.ctx.to_lower(from)?;
        let a = self.shadow.clone();
        Ok(Self::from_shadow(&self.ctx, move |x| simpson(&*a, start, x, panels).unwrap_or(f64::NAN)))
    }
}

fn central_difference(a: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = DERIVATIVE_STEP * x.abs().max(1.0);
    (a(x + h) - a(x - h)) / (2.0 * h)
}

/// Finite-step quotient `(A(X (+) H) (-) A(X)) (/) H`, computed entirely with
/// upper operations. The caller drives `f(H) -> 0`.
pub fn nd_derivative_limit(function: &UpperFunction, x: UpperReal, step: UpperReal) -> Result<UpperReal> {
    let ctx = function.context();
    let ahead = function.eval(ctx.add(x, step)?)?;
    let here = function.eval(x)?;
    ctx.div(ctx.sub(ahead, here)?, step)
}

/// `f^-1(a'(f(X)))`, with `a'` from a central difference of relative step
/// [`DERIVATIVE_STEP`].
pub fn nd_derivative(function: &UpperFunction, x: UpperReal) -> Result<UpperReal> {
    let ctx = function.context();
    let y = ctx.to_lower(x)?;
    let slope = central_difference(&|s| function.shadow(s), y);
    if !slope.is_finite() {
        return Err(Error::NonFiniteDerivative { at: y });
    }
    ctx.from_lower(slope)
}

/// `f^-1(int_{f(X)}^{f(Y)} a)`, composite Simpson with `panels` panels.
pub fn nd_integral(function: &UpperFunction, x: UpperReal, y: UpperReal, panels: usize) -> Result<UpperReal> {
    let ctx = function.context();
    let lower = simpson(&|s| function.shadow(s), ctx.to_lower(x)?, ctx.to_lower(y)?, panels)?;
    ctx.from_lower(lower)
}

/// Composite Simpson rule on `[start, end]` (oriented) with `panels` panels of
/// two sub-intervals each.
pub fn simpson(integrand: &dyn Fn(f64) -> f64, start: f64, end: f64, panels: usize) -> Result<f64> {
    if panels == 0 {
        return Err(Error::InvalidParameter("Simpson rule needs at least one panel".into()));
    }
    if start == end {
        return Ok(0.0);
    }
    let intervals = 2 * panels;
    let h = (end - start) / intervals as f64;
    let mut sum = 0.0;
    for i in 0..=intervals {
        let x = if i == intervals { end } else { start + h * i as f64 };
        let value = integrand(x);
        if !value.is_finite() {
            return Err(Error::QuadratureFailure { at: x });
        }
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * value;
    }
    Ok(sum * h / 3.0)
}

/// Lower-image residuals of the two fundamental-theorem identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalResiduals {
    /// `| f(D/DX int_Y^X A) - f(A(X)) |`
    pub derivative_of_integral: f64,
    /// `| f(int_Y^X DA/DX') - f(A(X) (-) A(Y)) |`
    pub integral_of_derivative: f64,
}

impl FundamentalResiduals {
    pub fn max(&self) -> f64 {
        self.derivative_of_integral.max(self.integral_of_derivative)
    }
}

pub fn verify_fundamental_theorem(function: &UpperFunction, x: UpperReal, y: UpperReal) -> Result<FundamentalResiduals> {
    let ctx = function.context();

    let integral = function.antiderivative(y, DEFAULT_PANELS)?;
    let lhs = nd_derivative(&integral, x)?;
    let rhs = function.eval(x)?;
    let derivative_of_integral = (ctx.to_lower(lhs)? - ctx.to_lower(rhs)?).abs();

    let lhs = nd_integral(&function.derivative(), y, x, DEFAULT_PANELS)?;
    let rhs = ctx.sub(function.eval(x)?, function.eval(y)?)?;
    let integral_of_derivative = (ctx.to_lower(lhs)? - ctx.to_lower(rhs)?).abs();

    Ok(FundamentalResiduals { derivative_of_integral, integral_of_derivative })
}

/// The conjugated exponential `A = f^-1 o exp o f`, unique solution of
/// `DA/DX = A`, `A(0') = 1'`.
pub fn conjugated_exp(ctx: &Bijection) -> UpperFunction {
    UpperFunction::from_shadow(ctx, f64::exp)
}

/// Lower-image residual `|f(DA/DX) - f(A)|` of `DA/DX = A` at `X`, relative
/// to `max(1, |f(A(X))|)`.
pub fn exp_ode_residual(function: &UpperFunction, x: UpperReal) -> Result<f64> {
    let ctx = function.context();
    let derivative = ctx.to_lower(nd_derivative(function, x)?)?;
    let value = ctx.to_lower(function.eval(x)?)?;
    Ok((derivative - value).abs() / value.abs().max(1.0))
}
