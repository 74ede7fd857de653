//! Problem definition and trajectory state for
//!
//! ```text
//! x''' + c * x^p * x'' = 0,   x(0) = x'(0) = 0,   x'(inf) = beta
//! ```
//!
//! The existence and uniqueness theory covers `p >= 1`. Exponents in `[0, 1)`
//! are accepted but flagged through [`Problem::proven_regime`]; `p = 0` makes
//! the equation linear (`x'' = a * exp(-c t)`) and serves as an exact oracle.

use crate::error::{Error, Result};

/// The triple `(p, c, beta)` with its boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    p: f64,
    c: f64,
    beta: f64,
    proven_regime: bool,
}

impl Problem {
    /// Validates raw parameters.
    ///
    /// Rejects non-finite input, `c <= 0`, `beta < 0` and `p < 0`.
    pub fn new(p: f64, c: f64, beta: f64) -> Result<Self> {
        if !(p.is_finite() && c.is_finite() && beta.is_finite()) {
            return Err(Error::domain(format!(
                "parameters must be finite (p = {p}, c = {c}, beta = {beta})"
            )));
        }
        if c <= 0.0 {
            return Err(Error::domain(format!("c must be positive, got {c}")));
        }
        if beta < 0.0 {
            return Err(Error::domain(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        if p < 0.0 {
            return Err(Error::domain(format!("p must be non-negative, got {p}")));
        }
        Ok(Self {
            p,
            c,
            beta,
            proven_regime: p >= 1.0,
        })
    }

    /// The classical Blasius problem `p = 1, c = 1/2, beta = 1`.
    pub fn blasius() -> Self {
        Self::new(1.0, 0.5, 1.0).expect("classical parameters are valid")
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `true` iff `p >= 1`, where existence, uniqueness and all a-priori
    /// bounds are established.
    pub fn proven_regime(&self) -> bool {
        self.proven_regime
    }

    /// `x^p` with `0^0 = 1`. Integer exponents go through `powi`.
    #[inline]
    pub(crate) fn pow_p(&self, x: f64) -> f64 {
        if let Some(k) = self.integer_exponent() {
            x.powi(k)
        } else {
            x.powf(self.p)
        }
    }

    #[inline]
    fn integer_exponent(&self) -> Option<i32> {
        (self.p.fract() == 0.0 && self.p <= i32::MAX as f64).then_some(self.p as i32)
    }
}

/// One point `(t, x, x', x'')` of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub t: f64,
    pub x: f64,
    pub dx: f64,
    pub d2x: f64,
}

impl State {
    pub const fn new(t: f64, x: f64, dx: f64, d2x: f64) -> Self {
        Self { t, x, dx, d2x }
    }

    /// Initial condition `(0, 0, 0, a)` of the shooting family.
    pub const fn initial(a: f64) -> Self {
        Self::new(0.0, 0.0, 0.0, a)
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.x, self.dx, self.d2x]
    }

    pub(crate) fn from_array(t: f64, y: [f64; 3]) -> Self {
        Self::new(t, y[0], y[1], y[2])
    }
}

/// Right-hand side of the first-order system: `(x', x'', x''')`.
///
/// Fails only when `x < 0` and `p` is not an integer.
pub fn rhs(s: &State, prob: &Problem) -> Result<[f64; 3]> {
    rhs_array(&s.to_array(), prob).ok_or_else(|| {
        Error::domain(format!(
            "x = {} is negative at t = {} and p = {} is not an integer",
            s.x,
            s.t,
            prob.p()
        ))
    })
}

#[inline]
pub(crate) fn rhs_array(y: &[f64; 3], prob: &Problem) -> Option<[f64; 3]> {
    let [x, dx, d2x] = *y;
    if x < 0.0 && prob.integer_exponent().is_none() {
        return None;
    }
    Some([dx, d2x, -prob.c() * prob.pow_p(x) * d2x])
}

/// Samples of one integration of the shooting family, one per accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<State>,
    /// Accepted-step count.
    pub steps: usize,
    pub tolerance: f64,
    /// Initial curvature `x''(0)`.
    pub a: f64,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.samples
            .last()
            .expect("trajectory holds at least the initial state")
    }

    /// Cumulative integral `Q(t_i) = int_0^{t_i} x(s)^p ds` at every sample.
    ///
    /// Each step uses the two-point quintic Hermite rule built from `x^p` and
    /// its first two derivatives, which the stored states give exactly. A
    /// first step leaving `x = 0` with fractional `p` integrates the leading
    /// behaviour `x^p ~ (a t^2 / 2)^p` instead, since the derivatives blow up.
    pub fn cumulative_power_integral(&self, prob: &Problem) -> Vec<f64> {
        let jets: Vec<Option<[f64; 3]>> = self.samples.iter().map(|s| power_jet(prob, s)).collect();
        let mut q = Vec::with_capacity(self.samples.len());
        q.push(0.0);
        for (i, w) in self.samples.windows(2).enumerate() {
            let h = w[1].t - w[0].t;
            let step = match (jets[i], jets[i + 1]) {
                (Some([f0, d0, e0]), Some([f1, d1, e1])) => {
                    h / 2.0 * (f0 + f1) + h * h / 10.0 * (d0 - d1) + h * h * h / 120.0 * (e0 + e1)
                }
                _ => prob.pow_p(w[1].x.max(0.0)) * h / (2.0 * prob.p() + 1.0),
            };
            q.push(q[i] + step);
        }
        q
    }
}

/// `(x^p, (x^p)', (x^p)'')` along a trajectory, or `None` where the
/// derivatives are unbounded (`x <= 0` with fractional `p < 2`).
fn power_jet(prob: &Problem, s: &State) -> Option<[f64; 3]> {
    let p = prob.p();
    let (x, dx, d2x) = (s.x, s.dx, s.d2x);
    if p == 0.0 {
        return Some([1.0, 0.0, 0.0]);
    }
    if p == 1.0 {
        return Some([x, dx, d2x]);
    }
    let pow = |e: f64| match prob.integer_exponent() {
        Some(k) => Some(x.powi(k + (e - p) as i32)),
        None if x > 0.0 => Some(x.powf(e)),
        None if e > 0.0 => Some(0.0),
        None => None,
    };
    let (f, f1, f2) = (pow(p)?, pow(p - 1.0)?, pow(p - 2.0)?);
    Some([f, p * f1 * dx, p * (p - 1.0) * f2 * dx * dx + p * f1 * d2x])
}
