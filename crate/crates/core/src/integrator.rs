//! Adaptive Runge-Kutta-Fehlberg 4(5) integration of the shooting family.
//!
//! The third-order equation is integrated as the first-order system
//! `(x, x', x'')`. Local error is the difference between the embedded
//! fourth- and fifth-order solutions, measured in a max-norm scaled by
//! `max(1, |y|, |y_new|)` per component. The step advances with the
//! fifth-order solution.

use crate::error::{Error, Result};
use crate::model::{rhs_array, Problem, State, Trajectory};

/// Nodes of the classical Fehlberg tableau. The system is autonomous, so they
/// only enter the row-sum consistency check.
#[allow(dead_code)]
const C: [f64; 6] = [0.0, 1.0 / 4.0, 3.0 / 8.0, 12.0 / 13.0, 1.0, 1.0 / 2.0];

/// Lower-triangular stage coefficients, row `i` holds `a_{i,j}` for `j < i`.
const A: [[f64; 5]; 6] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 4.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
    [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
    [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
    [
        -8.0 / 27.0,
        2.0,
        -3544.0 / 2565.0,
        1859.0 / 4104.0,
        -11.0 / 40.0,
    ],
];

/// Fifth-order weights.
const B5: [f64; 6] = [
    16.0 / 135.0,
    0.0,
    6656.0 / 12825.0,
    28561.0 / 56430.0,
    -9.0 / 50.0,
    2.0 / 55.0,
];

/// Fourth-order weights.
const B4: [f64; 6] = [
    25.0 / 216.0,
    0.0,
    1408.0 / 2565.0,
    2197.0 / 4104.0,
    -1.0 / 5.0,
    0.0,
];

const MIN_SHRINK: f64 = 0.1;
const MAX_GROWTH: f64 = 5.0;

/// Step-size control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Local error tolerance `eps`.
    pub tolerance: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Safety factor in `(0, 1)` applied to the step-size power law.
    pub safety: f64,
}

impl IntegratorConfig {
    /// Defaults for integrating over `[0, t_end]`: `h_init = 1e-3`,
    /// `h_min = 1e-12`, `h_max = t_end / 10`, `safety = 0.9`.
    pub fn new(tolerance: f64, t_end: f64) -> Self {
        let h_max = (t_end / 10.0).max(1e-3);
        Self {
            tolerance,
            h_init: 1e-3_f64.min(h_max),
            h_min: 1e-12,
            h_max,
            safety: 0.9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.tolerance > 0.0
            && self.tolerance.is_finite()
            && self.h_min > 0.0
            && self.h_min <= self.h_init
            && self.h_init <= self.h_max
            && self.h_max.is_finite()
            && self.safety > 0.0
            && self.safety < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "invalid integrator configuration {self:?}"
            )))
        }
    }
}

/// An accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub state: State,
    pub error_estimate: f64,
    pub h_next: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Accepted(StepResult),
    Rejected { h_retry: f64 },
}

/// One embedded RKF45 trial step of size `h` from `s`.
///
/// Rejected steps return a reduced retry size; a retry size below `h_min`
/// is reported as [`Error::StepUnderflow`].
pub fn rkf45_step(
    s: &State,
    prob: &Problem,
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<StepOutcome> {
    if !(h >= cfg.h_min) {
        return Err(Error::StepUnderflow {
            t: s.t,
            h,
            h_min: cfg.h_min,
        });
    }
    let y = s.to_array();
    let (y5, err_vec) = fehlberg_stages(&y, prob, h).ok_or_else(|| negative_state(s))?;

    let error_estimate = (0..3)
        .map(|i| err_vec[i].abs() / y[i].abs().max(y5[i].abs()).max(1.0))
        .fold(0.0, f64::max);

    if error_estimate <= cfg.tolerance {
        let factor = if error_estimate == 0.0 {
            MAX_GROWTH
        } else {
            (cfg.safety * (cfg.tolerance / error_estimate).powf(0.2)).clamp(MIN_SHRINK, MAX_GROWTH)
        };
        Ok(StepOutcome::Accepted(StepResult {
            state: State::from_array(s.t + h, y5),
            error_estimate,
            h_next: (h * factor).min(cfg.h_max),
        }))
    } else {
        let factor =
            (cfg.safety * (cfg.tolerance / error_estimate).powf(0.25)).clamp(MIN_SHRINK, 1.0);
        let h_retry = h * factor;
        if h_retry < cfg.h_min {
            return Err(Error::StepUnderflow {
                t: s.t,
                h: h_retry,
                h_min: cfg.h_min,
            });
        }
        Ok(StepOutcome::Rejected { h_retry })
    }
}

/// Fifth-order solution and the (fifth minus fourth) difference.
#[inline]
fn fehlberg_stages(y: &[f64; 3], prob: &Problem, h: f64) -> Option<([f64; 3], [f64; 3])> {
    let mut k = [[0.0; 3]; 6];
    for i in 0..6 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(i) {
            let a = A[i][j];
            if a != 0.0 {
                for d in 0..3 {
                    yi[d] += h * a * kj[d];
                }
            }
        }
        k[i] = rhs_array(&yi, prob)?;
    }
    let mut y5 = *y;
    let mut err = [0.0; 3];
    for d in 0..3 {
        let mut s5 = 0.0;
        let mut s4 = 0.0;
        for i in 0..6 {
            s5 += B5[i] * k[i][d];
            s4 += B4[i] * k[i][d];
        }
        y5[d] += h * s5;
        err[d] = h * (s5 - s4);
    }
    Some((y5, err))
}

fn negative_state(s: &State) -> Error {
    Error::domain(format!(
        "stage state left x >= 0 near t = {} with a fractional exponent",
        s.t
    ))
}

/// Integrates `x_a` on `[0, t_end]`, retaining every accepted step.
///
/// The last step is clamped so the final sample sits exactly at `t_end`.
pub fn integrate(a: f64, prob: &Problem, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let mut samples = vec![State::initial(a)];
    let steps = drive(a, prob, t_end, cfg, |s| samples.push(*s))?;
    Ok(Trajectory {
        samples,
        steps,
        tolerance: cfg.tolerance,
        a,
    })
}

/// Like [`integrate`] but keeps only the endpoint.
pub fn integrate_endpoint(
    a: f64,
    prob: &Problem,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<(State, usize)> {
    let mut last = State::initial(a);
    let steps = drive(a, prob, t_end, cfg, |s| last = *s)?;
    Ok((last, steps))
}

/// Integrates `x_a` and reports the state at each of the non-decreasing
/// output times. Steps are shortened to land on every output time.
pub fn integrate_to_grid(
    a: f64,
    prob: &Problem,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<State>> {
    check_launch(a, cfg)?;
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || times.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::domain(
            "output times must be finite, non-negative and sorted",
        ));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut state = State::initial(a);
    let mut h = cfg.h_init;
    for &t in times {
        while state.t < t {
            let (next, proposed) = advance(&state, prob, h, t, cfg)?;
            state = next;
            h = proposed;
        }
        out.push(state);
    }
    Ok(out)
}

fn check_launch(a: f64, cfg: &IntegratorConfig) -> Result<()> {
    cfg.validate()?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!(
            "initial curvature must be positive, got {a}"
        )));
    }
    Ok(())
}

fn drive(
    a: f64,
    prob: &Problem,
    t_end: f64,
    cfg: &IntegratorConfig,
    mut on_step: impl FnMut(&State),
) -> Result<usize> {
    check_launch(a, cfg)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let mut state = State::initial(a);
    let mut h = cfg.h_init;
    let mut prev = state;
    let mut steps = 0;
    while state.t < t_end {
        let (next, proposed) = advance(&state, prob, h, t_end, cfg)?;
        check_positivity(&prev, &next, cfg.tolerance)?;
        prev = next;
        state = next;
        h = proposed;
        steps += 1;
        on_step(&state);
    }
    Ok(steps)
}

/// Takes one accepted step towards `t_stop`, retrying on rejection.
/// Returns the new state and the step size proposed for the next call.
fn advance(
    state: &State,
    prob: &Problem,
    h: f64,
    t_stop: f64,
    cfg: &IntegratorConfig,
) -> Result<(State, f64)> {
    let mut h = h;
    loop {
        let remaining = t_stop - state.t;
        let clamped = h >= remaining;
        let trial = if clamped { remaining } else { h };
        // a clamped final step may be shorter than h_min
        let trial_cfg = if clamped && trial < cfg.h_min {
            IntegratorConfig {
                h_min: trial,
                ..*cfg
            }
        } else {
            *cfg
        };
        match rkf45_step(state, prob, trial, &trial_cfg)? {
            StepOutcome::Accepted(step) => {
                let mut next = step.state;
                if clamped {
                    next.t = t_stop;
                }
                let proposal = if clamped {
                    h.max(step.h_next)
                } else {
                    step.h_next
                };
                return Ok((next, proposal.min(cfg.h_max)));
            }
            StepOutcome::Rejected { h_retry } => h = h_retry,
        }
    }
}

fn check_positivity(prev: &State, next: &State, tol: f64) -> Result<()> {
    let slack = 10.0 * tol;
    let bad = next.x < -slack * prev.x.abs().max(1.0)
        || next.dx < -slack * prev.dx.abs().max(1.0)
        || next.d2x < -slack * prev.d2x.abs().max(1.0);
    if bad {
        return Err(Error::domain(format!(
            "positivity lost at t = {}: x = {}, x' = {}, x'' = {}",
            next.t, next.x, next.dx, next.d2x
        )));
    }
    Ok(())
}

/// Which embedded solution a fixed-step run propagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddedOrder {
    Fourth,
    Fifth,
}

/// Fixed-step run of the same tableau with `n_steps` equal steps and no
/// error control. Used for convergence-order checks.
pub fn integrate_fixed(
    a: f64,
    prob: &Problem,
    t_end: f64,
    n_steps: usize,
    order: EmbeddedOrder,
) -> Result<State> {
    if n_steps == 0 || !(t_end > 0.0) {
        return Err(Error::domain(
            "fixed-step run needs n_steps > 0 and t_end > 0",
        ));
    }
    let h = t_end / n_steps as f64;
    let mut y = [0.0, 0.0, a];
    for i in 0..n_steps {
        let s = State::from_array(i as f64 * h, y);
        let (y5, err) = fehlberg_stages(&y, prob, h).ok_or_else(|| negative_state(&s))?;
        y = match order {
            EmbeddedOrder::Fifth => y5,
            EmbeddedOrder::Fourth => [y5[0] - err[0], y5[1] - err[1], y5[2] - err[2]],
        };
    }
    Ok(State::from_array(t_end, y))
}
