//! Numerical checks of the a-priori estimates over a parameter grid.
//!
//! For each `(p, c, a)` the trajectory `x_a` is integrated to a horizon
//! certified for that single `a`, and the measured `h(a) = x'(T)` and
//! `mu(a) = x'(T) T - x(T)` are compared with the analytic bounds. Failures
//! for `p < 1` are reported as warnings: the estimates are only proven for
//! `p >= 1`.

use std::fmt;

use crate::error::Result;
use crate::estimates::{BoundsSet, Bracket};
use crate::integrator::{integrate, IntegratorConfig};
use crate::model::{Problem, Trajectory};
use crate::truncation::{find_t, tail_moment};

/// Slack on the `h` and `mu` bound containment.
pub const BOUND_SLACK: f64 = 1e-8;
/// Relative tolerance of the scaling law.
pub const SCALING_REL_TOL: f64 = 1e-7;
/// Slack on the asymptote sandwich.
pub const SANDWICH_SLACK: f64 = 1e-7;
/// Relative slack of the integral identity for `x''`.
pub const IDENTITY_REL_TOL: f64 = 1e-8;
/// Relative agreement of the tail quadrature with a resolved Simpson sum.
pub const TAIL_ORACLE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub ps: Vec<f64>,
    pub cs: Vec<f64>,
    pub a_values: Vec<f64>,
    pub eps: f64,
    /// Multiplies `c1` before any check runs. Negative control only.
    pub corrupt_c1: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            ps: vec![1.0, 2.0, 3.0, 7.0],
            cs: vec![0.5, 1.0],
            a_values: vec![0.05, 0.2, 1.0, 5.0],
            eps: 1e-12,
            corrupt_c1: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Hard,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub severity: Severity,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.passed, self.severity) {
            (true, _) => "PASS",
            (false, Severity::Hard) => "FAIL",
            (false, Severity::Warning) => "WARN",
        };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn hard_failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| !c.passed && c.severity == Severity::Hard)
            .count()
    }

    pub fn warnings(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| !c.passed && c.severity == Severity::Warning)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.hard_failures() == 0
    }

    fn push(&mut self, prob: &Problem, name: String, passed: bool, detail: String) {
        let severity = if prob.proven_regime() || prob.p() == 0.0 {
            Severity::Hard
        } else {
            Severity::Warning
        };
        self.checks.push(Check {
            name,
            passed,
            severity,
            detail,
        });
    }
}

/// One measured trajectory with its limit estimates.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub a: f64,
    pub horizon: f64,
    pub h: f64,
    pub mu: f64,
    pub trajectory: Trajectory,
}

/// Integrates `x_a` to a horizon certified at tolerance `eps` for `a` alone.
pub fn measure(a: f64, prob: &Problem, bounds: &BoundsSet, eps: f64) -> Result<Measurement> {
    let cert = find_t(eps, &Bracket::point(a)?, bounds, prob)?;
    let horizon = cert.horizon;
    let trajectory = integrate(a, prob, horizon, &IntegratorConfig::new(eps, horizon))?;
    let end = *trajectory.last();
    Ok(Measurement {
        a,
        horizon,
        h: end.dx,
        mu: end.dx * horizon - end.x,
        trajectory,
    })
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for &p in &cfg.ps {
        for &c in &cfg.cs {
            let prob = Problem::new(p, c, 1.0)?;
            let mut bounds = BoundsSet::new(&prob);
            if let Some(f) = cfg.corrupt_c1 {
                bounds.c1 *= f;
            }
            let unit = measure(1.0, &prob, &bounds, cfg.eps)?;
            for &a in &cfg.a_values {
                let m = if a == 1.0 {
                    unit.clone()
                } else {
                    measure(a, &prob, &bounds, cfg.eps)?
                };
                check_measurement(&mut report, &prob, &bounds, &m, &unit, cfg.eps);
            }
        }
    }
    check_tail_oracle(&mut report)?;
    Ok(report)
}

fn check_measurement(
    report: &mut VerifyReport,
    prob: &Problem,
    bounds: &BoundsSet,
    m: &Measurement,
    unit: &Measurement,
    eps: f64,
) {
    let (p, c, a) = (prob.p(), prob.c(), m.a);
    let tag = format!("p={p} c={c} a={a}");
    let slack = 10.0 * eps;

    let worst = sandwich_excess(&m.trajectory, slack);
    report.push(
        prob,
        format!("positivity and growth bounds [{tag}]"),
        worst <= 0.0,
        format!("worst excess {worst:.3e}"),
    );

    let (lo, hi) = bounds.h_bounds(a);
    report.push(
        prob,
        format!("h(a) bounds [{tag}]"),
        lo - BOUND_SLACK <= m.h && m.h <= hi + BOUND_SLACK,
        format!("{lo:.10} <= {:.10} <= {hi:.10}", m.h),
    );
    let (lo, hi) = bounds.mu_bounds(a);
    report.push(
        prob,
        format!("mu(a) bounds [{tag}]"),
        lo - BOUND_SLACK <= m.mu && m.mu <= hi + BOUND_SLACK,
        format!("{lo:.10} <= {:.10} <= {hi:.10}", m.mu),
    );

    let line = bounds.lower_line(a);
    let below = m
        .trajectory
        .samples
        .iter()
        .map(|s| line.eval(s.t) - slack - s.x)
        .fold(f64::NEG_INFINITY, f64::max);
    report.push(
        prob,
        format!("lower line [{tag}]"),
        below <= 0.0,
        format!("max(line - x) = {:.3e}", below + slack),
    );

    let q = m.trajectory.cumulative_power_integral(prob);
    let residual = m
        .trajectory
        .samples
        .iter()
        .zip(&q)
        .map(|(s, qi)| (s.d2x - a * (-c * qi).exp()).abs())
        .fold(0.0, f64::max);
    report.push(
        prob,
        format!("second-derivative identity [{tag}]"),
        residual <= IDENTITY_REL_TOL * a,
        format!("residual {residual:.3e}"),
    );

    let asym = asymptote_excess(&m.trajectory, m.h, m.mu);
    report.push(
        prob,
        format!("asymptote sandwich [{tag}]"),
        asym <= SANDWICH_SLACK,
        format!("worst excess {asym:.3e}"),
    );

    let h_pred = a.powf(bounds.slope_exponent()) * unit.h;
    let mu_pred = a.powf(bounds.intercept_exponent()) * unit.mu;
    let (eh, emu) = (
        (m.h - h_pred).abs() / h_pred,
        (m.mu - mu_pred).abs() / mu_pred,
    );
    report.push(
        prob,
        format!("scaling law [{tag}]"),
        eh <= SCALING_REL_TOL && emu <= SCALING_REL_TOL,
        format!("relative errors h {eh:.2e}, mu {emu:.2e}"),
    );

    if p == 0.0 {
        let (h_exact, mu_exact) = (a / c, a / (c * c));
        let err = (m.h - h_exact).abs().max((m.mu - mu_exact).abs());
        report.push(
            prob,
            format!("linear closed form [{tag}]"),
            err <= BOUND_SLACK * h_exact.max(mu_exact).max(1.0),
            format!(
                "h = {:.12} (exact {h_exact}), mu = {:.12} (exact {mu_exact})",
                m.h, m.mu
            ),
        );
    }
}

/// Largest violation of `0 < x < a t^2/2`, `0 < x' < a t`, `0 < x'' < a`,
/// plus monotonicity, beyond `slack`. Non-positive means satisfied.
pub fn sandwich_excess(traj: &Trajectory, slack: f64) -> f64 {
    let a = traj.a;
    let mut worst = f64::NEG_INFINITY;
    for s in traj.samples.iter().skip(1) {
        let t = s.t;
        let excess = [
            -s.x,
            s.x - 0.5 * a * t * t,
            -s.dx,
            s.dx - a * t,
            -s.d2x,
            s.d2x - a,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(excess - slack);
    }
    for w in traj.samples.windows(2) {
        let excess = (w[0].x - w[1].x)
            .max(w[0].dx - w[1].dx)
            .max(w[1].d2x - w[0].d2x);
        worst = worst.max(excess - slack);
    }
    worst
}

/// Largest violation of `max(0, h t - mu) <= x(t) <= h t`.
pub fn asymptote_excess(traj: &Trajectory, h: f64, mu: f64) -> f64 {
    traj.samples
        .iter()
        .map(|s| {
            let lower = (h * s.t - mu).max(0.0);
            (lower - s.x).max(s.x - h * s.t).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// Composite Simpson on `[from, from + length]` with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, from: f64, length: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = length / n as f64;
    let mut sum = f(from) + f(from + length);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(from + i as f64 * h);
    }
    sum * h / 3.0
}

fn check_tail_oracle(report: &mut VerifyReport) -> Result<()> {
    for (p, horizon) in [(1.0, 14.0), (7.0, 4.0), (0.1, 50.0)] {
        let prob = Problem::new(p, 0.5, 1.0)?;
        let bounds = BoundsSet::new(&prob);
        let line = bounds.lower_line(bounds.bracket(&prob)?.a_min);
        // resolve the decay length 1 / (c (lambda T - m)^p) with ~10^4 panels
        let rate = prob.c() * line.eval(horizon).powf(p);
        let length = (60.0 / rate).min(200.0);
        for n in 0..2u32 {
            let weight = move |s: f64| if n == 0 { 1.0 } else { s - horizon };
            let f = |s: f64| {
                weight(s) * (-prob.c() * crate::truncation::inner_integral(s, &line, &prob)).exp()
            };
            let oracle = simpson(f, horizon, length, 200_000);
            let got = tail_moment(n, horizon, &line, &prob)?;
            let rel = ((got - oracle) / oracle).abs();
            report.checks.push(Check {
                name: format!("tail quadrature vs Simpson [p={p} T={horizon} n={n}]"),
                passed: rel <= TAIL_ORACLE_REL_TOL,
                severity: Severity::Hard,
                detail: format!("{got:.15e} vs {oracle:.15e} (rel {rel:.2e})"),
            });
        }
    }
    Ok(())
}
