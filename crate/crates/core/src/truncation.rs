//! Certified truncation horizon.
//!
//! On `[T, inf)` the three tails must stay below `eps`:
//!
//! ```text
//! a_max * exp(-c I(T))                            (second derivative)
//! a_max * int_T^inf exp(-c I(s)) ds               (first derivative)
//! a_max * int_T^inf (s - T) exp(-c I(s)) ds       (value)
//! ```
//!
//! where `I(s) = int_0^s max(0, lambda tau - m)^p dtau` and `(lambda, m)` is
//! the lower line of `x_{a_min}`. The outer integrals are evaluated on
//! expanding windows by adaptive quadrature and closed with an analytic
//! remainder bound: `I' = (lambda s - m)^p` is nondecreasing, so beyond `S`
//! the integrand is dominated by `exp(-c I(S) - r (s - S))` with
//! `r = c (lambda S - m)^p`.

use crate::error::{Error, Result};
use crate::estimates::{BoundsSet, Bracket, LowerLine};
use crate::model::Problem;
use crate::quadrature;

/// Relative accuracy of [`tail_moment`].
pub const TAIL_REL_TOL: f64 = 1e-14;

/// Upper search limit of [`find_t`].
pub const MAX_HORIZON: f64 = 1e6;

const MAX_WINDOWS: usize = 100_000;
const MAX_SEGMENTS: usize = 4_000;

/// The three evaluated tail bounds at one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationCert {
    pub horizon: f64,
    pub eps: f64,
    /// `a_max * exp(-c I(T))`
    pub lhs2: f64,
    /// `a_max * int_T^inf exp(-c I(s)) ds`
    pub lhs1: f64,
    /// `a_max * int_T^inf (s - T) exp(-c I(s)) ds`
    pub lhs0: f64,
    pub valid: bool,
}

impl TruncationCert {
    pub fn max_lhs(&self) -> f64 {
        self.lhs2.max(self.lhs1).max(self.lhs0)
    }

    /// Certificate for the trivial solution, where every tail vanishes.
    pub fn trivial(eps: f64) -> Self {
        Self {
            horizon: 0.0,
            eps,
            lhs2: 0.0,
            lhs1: 0.0,
            lhs0: 0.0,
            valid: true,
        }
    }
}

/// `I(s) = int_0^s max(0, lambda tau - m)^p dtau`.
pub fn inner_integral(s: f64, line: &LowerLine, prob: &Problem) -> f64 {
    let u = line.eval(s);
    if u <= 0.0 {
        return 0.0;
    }
    let r = prob.p() + 1.0;
    u.powf(r) / (line.slope * r)
}

/// `int_T^inf (s - T)^n exp(-c I(s)) ds` for `n` in `{0, 1}`.
///
/// Below the crossing `t0 = m / lambda` the integrand is `(s - T)^n`, so a
/// horizon `T < t0` contributes the exact flat piece and the moment shift.
pub fn tail_moment(n: u32, horizon: f64, line: &LowerLine, prob: &Problem) -> Result<f64> {
    if n > 1 {
        return Err(Error::domain(format!(
            "tail moments are defined for n in {{0, 1}}, got {n}"
        )));
    }
    if !(line.slope > 0.0 && line.intercept >= 0.0) {
        return Err(Error::domain(format!("degenerate lower line {line:?}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!(
            "horizon must be finite and non-negative, got {horizon}"
        )));
    }
    let t0 = line.crossing();
    if horizon < t0 {
        let gap = t0 - horizon;
        let m0 = tail_from(0, t0, line, prob)?;
        return Ok(match n {
            0 => gap + m0,
            _ => 0.5 * gap * gap + tail_from(1, t0, line, prob)? + gap * m0,
        });
    }
    tail_from(n, horizon, line, prob)
}

fn tail_from(n: u32, start: f64, line: &LowerLine, prob: &Problem) -> Result<f64> {
    let c = prob.c();
    let p = prob.p();
    let window = (4.0 / (c * line.slope.powf(p))).max(1.0);
    let weight = |s: f64| if n == 0 { 1.0 } else { s - start };
    let integrand = |s: f64| weight(s) * (-c * inner_integral(s, line, prob)).exp();

    let mut total = 0.0;
    let mut lo = start;
    for _ in 0..MAX_WINDOWS {
        let hi = lo + window;
        let piece = quadrature::integrate(integrand, lo, hi, 0.0, TAIL_REL_TOL * 0.1, MAX_SEGMENTS);
        total += piece.value;
        lo = hi;

        let rate = c * line.eval(lo).max(0.0).powf(p);
        if rate > 0.0 {
            let head = (-c * inner_integral(lo, line, prob)).exp();
            let remainder = match n {
                0 => head / rate,
                _ => head * ((lo - start) / rate + 1.0 / (rate * rate)),
            };
            if remainder <= TAIL_REL_TOL * 0.1 * total || head == 0.0 {
                return Ok(total);
            }
        }
    }
    Err(Error::NoDecay { t: lo })
}

/// Evaluates the three tail inequalities at horizon `horizon`.
///
/// The line is built at `a_min` and the prefactor is `a_max`.
pub fn check_t(
    horizon: f64,
    eps: f64,
    bracket: &Bracket,
    bounds: &BoundsSet,
    prob: &Problem,
) -> Result<TruncationCert> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !(horizon > 0.0) {
        return Err(Error::domain(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let line = bounds.lower_line(bracket.a_min);
    let lhs2 = bracket.a_max * (-prob.c() * inner_integral(horizon, &line, prob)).exp();
    let lhs1 = bracket.a_max * tail_moment(0, horizon, &line, prob)?;
    let lhs0 = bracket.a_max * tail_moment(1, horizon, &line, prob)?;
    Ok(TruncationCert {
        horizon,
        eps,
        lhs2,
        lhs1,
        lhs0,
        valid: lhs2 < eps && lhs1 < eps && lhs0 < eps,
    })
}

/// Smallest integer horizon `T >= ceil(t0) + 1` with a valid certificate.
///
/// Doubles until a valid horizon is found, then bisects on the integers.
pub fn find_t(
    eps: f64,
    bracket: &Bracket,
    bounds: &BoundsSet,
    prob: &Problem,
) -> Result<TruncationCert> {
    let t0 = bounds.lower_line(bracket.a_min).crossing();
    let check = |t: f64| check_t(t, eps, bracket, bounds, prob);

    let mut bad = t0.ceil();
    let mut hi = bad + 1.0;
    let mut cert = check(hi)?;
    while !cert.valid {
        bad = hi;
        hi *= 2.0;
        if hi > MAX_HORIZON {
            return Err(Error::HorizonOverflow {
                eps,
                limit: MAX_HORIZON,
            });
        }
        cert = check(hi)?;
    }
    // invariant: check(bad) invalid or below the search start, check(hi) valid
    while hi - bad > 1.0 {
        let mid = ((bad + hi) / 2.0).floor();
        let trial = check(mid)?;
        if trial.valid {
            hi = mid;
            cert = trial;
        } else {
            bad = mid;
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::constants;
    use crate::gamma::gamma_positive;

    fn setup(p: f64, c: f64) -> (Problem, BoundsSet, Bracket) {
        let prob = Problem::new(p, c, 1.0).unwrap();
        let b = constants(&prob);
        let br = b.bracket(&prob).unwrap();
        (prob, b, br)
    }

    #[test]
    fn inner_integral_cases() {
        let prob = Problem::new(1.0, 0.5, 1.0).unwrap();
        let line = LowerLine {
            slope: 2.0,
            intercept: 1.0,
        };
        assert_eq!(inner_integral(0.3, &line, &prob), 0.0);
        assert_eq!(inner_integral(0.5, &line, &prob), 0.0);
        assert!((inner_integral(1.5, &line, &prob) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_integral_is_flat_at_crossing() {
        // I(t0 + d) / d ~ d^p, so the one-sided difference quotient vanishes
        for p in [0.1, 1.0, 2.5, 7.0] {
            let prob = Problem::new(p, 0.5, 1.0).unwrap();
            let line = LowerLine {
                slope: 0.8,
                intercept: 1.2,
            };
            let t0 = line.crossing();
            let quotient = |d: f64| inner_integral(t0 + d, &line, &prob) / d;
            assert!(
                quotient(1e-8) < quotient(1e-4) && quotient(1e-4) < quotient(1e-1),
                "p = {p}"
            );
            assert!(quotient(1e-8) < 1e-8f64.powf(p), "p = {p}");
            assert_eq!(inner_integral(t0 - 1e-9, &line, &prob), 0.0);
        }
    }

    /// `int_0^inf u^j exp(-k u^alpha) du = Gamma((j+1)/alpha) / (alpha k^((j+1)/alpha))`
    fn stretched_exp_moment(j: f64, k: f64, alpha: f64) -> f64 {
        gamma_positive((j + 1.0) / alpha) / (alpha * k.powf((j + 1.0) / alpha))
    }

    #[test]
    fn tail_at_crossing_matches_closed_form() {
        for p in [0.1, 1.0, 2.0, 7.0] {
            for c in [0.5, 1.0] {
                let prob = Problem::new(p, c, 1.0).unwrap();
                let line = constants(&prob).lower_line(0.3);
                let t0 = line.crossing();
                let k = c / (line.slope * (p + 1.0));
                let want0 = stretched_exp_moment(0.0, k, p + 1.0) / line.slope;
                let want1 = stretched_exp_moment(1.0, k, p + 1.0) / (line.slope * line.slope);
                let got0 = tail_moment(0, t0, &line, &prob).unwrap();
                let got1 = tail_moment(1, t0, &line, &prob).unwrap();
                assert!(
                    ((got0 - want0) / want0).abs() < 1e-11,
                    "p={p} c={c}: {got0} vs {want0}"
                );
                assert!(
                    ((got1 - want1) / want1).abs() < 1e-11,
                    "p={p} c={c}: {got1} vs {want1}"
                );
            }
        }
    }

    #[test]
    fn linear_case_tail_is_exponential() {
        // p = 0: I(s) = s - t0 beyond t0, so the tails are e^{-c(T - t0)}/c and e^{-c(T - t0)}/c^2
        let prob = Problem::new(0.0, 1.5, 1.0).unwrap();
        let line = LowerLine {
            slope: 1.0,
            intercept: 1.0,
        };
        for horizon in [1.0f64, 3.0, 10.0] {
            let decay = (-1.5 * (horizon - 1.0)).exp();
            let m0 = tail_moment(0, horizon, &line, &prob).unwrap();
            let m1 = tail_moment(1, horizon, &line, &prob).unwrap();
            assert!((m0 / (decay / 1.5) - 1.0).abs() < 1e-13);
            assert!((m1 / (decay / 2.25) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn horizon_below_crossing_adds_flat_piece() {
        let prob = Problem::new(0.0, 1.0, 1.0).unwrap();
        let line = LowerLine {
            slope: 1.0,
            intercept: 2.0,
        };
        // t0 = 2, T = 0.5: int_0.5^2 ds + int_2^inf e^{-(s-2)} ds = 1.5 + 1
        assert!((tail_moment(0, 0.5, &line, &prob).unwrap() - 2.5).abs() < 1e-13);
        // int (s - 0.5): 1.5^2/2 + (1 + 1.5 * 1)
        assert!((tail_moment(1, 0.5, &line, &prob).unwrap() - (1.125 + 2.5)).abs() < 1e-13);
        assert!(tail_moment(2, 3.0, &line, &prob).is_err());
    }

    #[test]
    fn steep_tails_match_incomplete_gamma() {
        // 50-digit incomplete gamma evaluations at these exact line coefficients
        let cases = [
            (
                1.0,
                14.0,
                0.852_954_957_443_061,
                1.528_157_655_896_497,
                2.978_854_546_998_884e-15,
                5.554_004_079_470_919_8e-16,
            ),
            (
                7.0,
                4.0,
                0.989_934_459_953_000_9,
                1.321_009_905_935_452_5,
                7.942_114_857_018_949_8e-68,
                1.762_634_143_685_883_4e-70,
            ),
            (
                0.1,
                50.0,
                0.573_046_780_137_890_9,
                1.131_679_843_145_123_8,
                8.892_997_268_211_741_7e-14,
                1.269_522_029_394_559_5e-13,
            ),
        ];
        for (p, t, slope, intercept, m0, m1) in cases {
            let prob = Problem::new(p, 0.5, 1.0).unwrap();
            let line = LowerLine { slope, intercept };
            for (n, want) in [(0, m0), (1, m1)] {
                let got = tail_moment(n, t, &line, &prob).unwrap();
                assert!(
                    ((got - want) / want).abs() < 1e-13,
                    "p = {p}, n = {n}: {got:e} vs {want:e}"
                );
            }
        }
    }

    #[test]
    fn paper_horizons_for_proven_cases() {
        let (prob, b, br) = setup(1.0, 0.5);
        assert!(check_t(14.0, 1e-14, &br, &b, &prob).unwrap().valid);
        assert!(!check_t(13.0, 1e-14, &br, &b, &prob).unwrap().valid);
        assert_eq!(find_t(1e-14, &br, &b, &prob).unwrap().horizon, 14.0);

        let (prob, b, br) = setup(7.0, 0.5);
        assert!(check_t(4.0, 1e-14, &br, &b, &prob).unwrap().valid);
        assert_eq!(find_t(1e-14, &br, &b, &prob).unwrap().horizon, 4.0);
    }

    #[test]
    fn left_hand_sides_decrease_in_horizon() {
        for (p, c) in [(1.0, 0.5), (7.0, 0.5), (0.1, 0.5), (3.0, 1.0)] {
            let (prob, b, br) = setup(p, c);
            let t0 = b.lower_line(br.a_min).crossing();
            let mut prev: Option<TruncationCert> = None;
            for k in 1..12 {
                let cert = check_t(t0 + 0.5 * k as f64, 1e-14, &br, &b, &prob).unwrap();
                if cert.lhs0 == 0.0 {
                    break;
                }
                if let Some(pr) = prev {
                    assert!(cert.lhs2 < pr.lhs2 && cert.lhs1 < pr.lhs1 && cert.lhs0 < pr.lhs0);
                }
                prev = Some(cert);
            }
        }
    }

    #[test]
    fn looser_tolerance_needs_no_longer_horizon() {
        let (prob, b, br) = setup(1.0, 0.5);
        let loose = find_t(1e-2, &br, &b, &prob).unwrap().horizon;
        let tight = find_t(1e-14, &br, &b, &prob).unwrap().horizon;
        assert!(loose <= tight);
    }

    #[test]
    fn rejects_bad_arguments() {
        let (prob, b, br) = setup(1.0, 0.5);
        assert!(check_t(14.0, 0.0, &br, &b, &prob).is_err());
        assert!(check_t(0.0, 1e-8, &br, &b, &prob).is_err());
    }
}
