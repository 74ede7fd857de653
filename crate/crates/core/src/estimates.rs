//! A-priori estimates for the shooting family.
//!
//! With `q = 2p + 1`, every solution `x_a` satisfies
//!
//! ```text
//! c2 a^((p+1)/q) <= h(a)  <= c1 a^((p+1)/q)        h(a)  = lim x_a'(t)
//! c4 a^(1/q)     <= mu(a) <= c5 a^(1/q)            mu(a) = lim (h(a) t - x_a(t))
//! x_a(t) >= c2 a^((p+1)/q) t - c3 a^(1/q)
//! ```
//!
//! Inverting the `h` bounds at `h(a) = beta` gives the shooting bracket.

use crate::error::{Error, Result};
use crate::gamma::gamma_positive;
use crate::model::Problem;

/// The closed-form constants `c1..c5` for one `(p, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsSet {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    p: f64,
}

/// A line `slope * t - intercept` bounding a trajectory from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerLine {
    pub slope: f64,
    pub intercept: f64,
}

impl LowerLine {
    /// Where the line crosses zero.
    pub fn crossing(&self) -> f64 {
        self.intercept / self.slope
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.slope * t - self.intercept
    }
}

/// Interval of initial curvatures containing the solution of `h(a) = beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub a_min: f64,
    pub a_max: f64,
}

impl Bracket {
    pub fn new(a_min: f64, a_max: f64) -> Result<Self> {
        if !(a_min > 0.0 && a_min <= a_max && a_max.is_finite()) {
            return Err(Error::domain(format!("invalid bracket [{a_min}, {a_max}]")));
        }
        Ok(Self { a_min, a_max })
    }

    /// Degenerate bracket `[a, a]`, for certifying the horizon of one trajectory.
    pub fn point(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn width(&self) -> f64 {
        self.a_max - self.a_min
    }

    pub fn contains(&self, a: f64) -> bool {
        (self.a_min..=self.a_max).contains(&a)
    }
}

impl BoundsSet {
    /// Evaluates the five constants for `prob`'s `(p, c)`.
    pub fn new(prob: &Problem) -> Self {
        let p = prob.p();
        let c = prob.c();
        let q = 2.0 * p + 1.0;
        let r = p + 1.0;
        let g = gamma_positive;

        let c2 = g(1.0 / q) * (2f64.powf(p) / (c * q.powf(2.0 * p))).powf(1.0 / q);
        let c3 = g(2.0 / q) * q.powf((1.0 - 2.0 * p) / q) * (2f64.powf(p) / c).powf(2.0 / q);
        let c1 = c3 / c2 + g(1.0 / r) / (c.powf(1.0 / r) * (c2 * r).powf(p / r));
        let c4 =
            2f64.powf(2.0 * p / q) * g(2.0 / q) / (q.powf((2.0 * p - 1.0) / q) * c.powf(2.0 / q));
        let c5 = (c3 * c3 / 2.0
            + (c2 / c).powf(2.0 / r) * r.powf((1.0 - p) / r) * g(2.0 / r)
            + c3 * (c2 / (c * r.powf(p))).powf(1.0 / r) * g(1.0 / r))
            / (c2 * c2);

        Self {
            c1,
            c2,
            c3,
            c4,
            c5,
            p,
        }
    }

    /// Exponent `(p + 1) / (2p + 1)` of `a` in the `h` bounds and line slope.
    pub fn slope_exponent(&self) -> f64 {
        (self.p + 1.0) / (2.0 * self.p + 1.0)
    }

    /// Exponent `1 / (2p + 1)` of `a` in the `mu` bounds and line intercept.
    pub fn intercept_exponent(&self) -> f64 {
        1.0 / (2.0 * self.p + 1.0)
    }

    /// `(c2 a^((p+1)/q), c1 a^((p+1)/q))`.
    pub fn h_bounds(&self, a: f64) -> (f64, f64) {
        let s = a.powf(self.slope_exponent());
        (self.c2 * s, self.c1 * s)
    }

    /// `(c4 a^(1/q), c5 a^(1/q))`.
    pub fn mu_bounds(&self, a: f64) -> (f64, f64) {
        let s = a.powf(self.intercept_exponent());
        (self.c4 * s, self.c5 * s)
    }

    /// Lower line `c2 a^((p+1)/q) t - c3 a^(1/q)` under `x_a`.
    pub fn lower_line(&self, a: f64) -> LowerLine {
        LowerLine {
            slope: self.c2 * a.powf(self.slope_exponent()),
            intercept: self.c3 * a.powf(self.intercept_exponent()),
        }
    }

    /// `a_min = (beta / c1)^(q/(p+1))`, `a_max = (beta / c2)^(q/(p+1))`.
    pub fn bracket(&self, prob: &Problem) -> Result<Bracket> {
        let beta = prob.beta();
        if beta <= 0.0 {
            return Err(Error::domain(
                "beta = 0 has the trivial solution; no bracket needed",
            ));
        }
        let e = 1.0 / self.slope_exponent();
        Bracket::new((beta / self.c1).powf(e), (beta / self.c2).powf(e))
    }
}

/// Convenience wrapper: `BoundsSet::new(prob)`.
pub fn constants(prob: &Problem) -> BoundsSet {
    BoundsSet::new(prob)
}
