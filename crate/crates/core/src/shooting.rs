//! Bisection shooting on the initial curvature `a = x''(0)`.
//!
//! The pipeline is: constants, bracket `[a_min, a_max]`, certified horizon
//! `T`, then bisection on `a` until `|x_a'(T) - beta| < eps`. Beyond `T` the
//! solution continues as the line `beta t + (x(T) - beta T)`.

use crate::error::{Error, Result};
use crate::estimates::{BoundsSet, Bracket};
use crate::integrator::{integrate, integrate_endpoint, IntegratorConfig};
use crate::model::{Problem, State, Trajectory};
use crate::truncation::{check_t, find_t, TruncationCert};

const MAX_BISECTIONS: usize = 200;

/// Endpoint values of one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    pub x_t: f64,
    pub dx_t: f64,
    pub d2x_t: f64,
    pub steps: usize,
}

/// Integrates `x_a` on `[0, horizon]` and reports the endpoint.
pub fn shoot(a: f64, horizon: f64, prob: &Problem, cfg: &IntegratorConfig) -> Result<Shot> {
    let (end, steps) = integrate_endpoint(a, prob, horizon, cfg)?;
    Ok(Shot {
        x_t: end.x,
        dx_t: end.dx,
        d2x_t: end.d2x,
        steps,
    })
}

/// Knobs for [`solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub eps: f64,
    /// Use this horizon instead of the smallest certified one. Its
    /// certificate is still evaluated and attached to the solution.
    pub horizon: Option<f64>,
    /// Replace the analytic bracket.
    pub bracket: Option<Bracket>,
}

impl SolveOptions {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            horizon: None,
            bracket: None,
        }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }
}

/// A solved boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub problem: Problem,
    pub bounds: BoundsSet,
    /// Analytic bracket the bisection started from.
    pub bracket: Bracket,
    /// Bisection interval when the loop stopped.
    pub final_bracket: (f64, f64),
    pub a_star: f64,
    pub horizon: f64,
    pub eps: f64,
    /// `x'(T)`, the estimate of `h(a*)`.
    pub h_est: f64,
    /// `x'(T) T - x(T)`, the estimate of `mu(a*)`.
    pub mu_est: f64,
    pub x_t: f64,
    pub d2x_t: f64,
    pub trajectory: Trajectory,
    /// Number of midpoint shots.
    pub iterations: usize,
    /// Accepted integrator steps over every shot, endpoints included.
    pub total_steps: usize,
    pub cert: TruncationCert,
}

impl Solution {
    /// Shots taken: the two bracket endpoints plus each midpoint.
    pub fn shots(&self) -> usize {
        if self.a_star == 0.0 {
            0
        } else {
            self.iterations + 2
        }
    }

    /// Average accepted steps per shot.
    pub fn mean_steps(&self) -> f64 {
        match self.shots() {
            0 => 0.0,
            n => self.total_steps as f64 / n as f64,
        }
    }

    fn trivial(problem: Problem, eps: f64) -> Self {
        Self {
            problem,
            bounds: BoundsSet::new(&problem),
            bracket: Bracket {
                a_min: 0.0,
                a_max: 0.0,
            },
            final_bracket: (0.0, 0.0),
            a_star: 0.0,
            horizon: 0.0,
            eps,
            h_est: 0.0,
            mu_est: 0.0,
            x_t: 0.0,
            d2x_t: 0.0,
            trajectory: Trajectory {
                samples: vec![State::initial(0.0)],
                steps: 0,
                tolerance: eps,
                a: 0.0,
            },
            iterations: 0,
            total_steps: 0,
            cert: TruncationCert::trivial(eps),
        }
    }
}

/// Solves with the certified horizon and analytic bracket.
pub fn solve(prob: &Problem, eps: f64) -> Result<Solution> {
    solve_with(prob, &SolveOptions::new(eps))
}

pub fn solve_with(prob: &Problem, opts: &SolveOptions) -> Result<Solution> {
    let eps = opts.eps;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if prob.beta() == 0.0 {
        return Ok(Solution::trivial(*prob, eps));
    }
    let bounds = BoundsSet::new(prob);
    let bracket = match opts.bracket {
        Some(b) => b,
        None => bounds.bracket(prob)?,
    };
    let cert = match opts.horizon {
        Some(t) => check_t(t, eps, &bracket, &bounds, prob)?,
        None => find_t(eps, &bracket, &bounds, prob)?,
    };
    let horizon = cert.horizon;
    let cfg = IntegratorConfig::new(eps, horizon);
    let beta = prob.beta();

    let lo_shot = shoot(bracket.a_min, horizon, prob, &cfg)?;
    let hi_shot = shoot(bracket.a_max, horizon, prob, &cfg)?;
    // x'(T) sits below h(a) by less than eps on a certified horizon, so the
    // endpoint test carries an eps allowance on each side
    if !(lo_shot.dx_t - eps < beta && beta < hi_shot.dx_t + eps) {
        return Err(Error::BracketFailure {
            a_min: bracket.a_min,
            a_max: bracket.a_max,
            dx_lo: lo_shot.dx_t,
            dx_hi: hi_shot.dx_t,
            beta,
        });
    }
    let mut total_steps = lo_shot.steps + hi_shot.steps;

    let (mut lo, mut hi) = (bracket.a_min, bracket.a_max);
    let mut mid;
    let mut iterations = 0;
    loop {
        mid = 0.5 * (lo + hi);
        let shot = shoot(mid, horizon, prob, &cfg)?;
        iterations += 1;
        total_steps += shot.steps;
        if (shot.dx_t - beta).abs() < eps
            || hi - lo < 4.0 * ulp(mid)
            || iterations >= MAX_BISECTIONS
        {
            break;
        }
        if shot.dx_t < beta {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let trajectory = integrate(mid, prob, horizon, &cfg)?;
    let end = *trajectory.last();
    Ok(Solution {
        problem: *prob,
        bounds,
        bracket,
        final_bracket: (lo, hi),
        a_star: mid,
        horizon,
        eps,
        h_est: end.dx,
        mu_est: end.dx * horizon - end.x,
        x_t: end.x,
        d2x_t: end.d2x,
        trajectory,
        iterations,
        total_steps,
        cert,
    })
}

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

/// The solution beyond the horizon: `beta t + (x(T) - beta T)`.
pub fn extend(sol: &Solution, t: f64) -> Result<f64> {
    if !(t >= sol.horizon) {
        return Err(Error::domain(format!(
            "extension is defined for t >= T = {}, got {t}",
            sol.horizon
        )));
    }
    let beta = sol.problem.beta();
    Ok(beta * t + (sol.x_t - beta * sol.horizon))
}

/// Residual diagnostics of a solved trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `max |x''(t) - a exp(-c Q(t))|` with `Q` the cumulative quadrature of `x^p`.
    pub identity_residual: f64,
    /// Largest violation of `max(0, h t - mu) <= x(t) <= h t`.
    pub sandwich_violation: f64,
    pub d2x_t: f64,
}

pub fn residual_certificate(sol: &Solution) -> ResidualReport {
    let traj = &sol.trajectory;
    let prob = &sol.problem;
    let q = traj.cumulative_power_integral(prob);
    let identity_residual = traj
        .samples
        .iter()
        .zip(&q)
        .map(|(s, qi)| (s.d2x - traj.a * (-prob.c() * qi).exp()).abs())
        .fold(0.0, f64::max);
    let sandwich_violation = traj
        .samples
        .iter()
        .map(|s| {
            let lower = (sol.h_est * s.t - sol.mu_est).max(0.0);
            let upper = sol.h_est * s.t;
            (lower - s.x).max(s.x - upper).max(0.0)
        })
        .fold(0.0, f64::max);
    ResidualReport {
        identity_residual,
        sandwich_violation,
        d2x_t: sol.d2x_t,
    }
}
