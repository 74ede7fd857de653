//! End-to-end acceptance checks against published reference values.
//!
//! Runs as a plain binary: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::process::ExitCode;

use blasius_core::verify::measure;
use blasius_core::{
    check_t, constants, find_t, inner_integral, shoot, solve_with, tail_moment, BoundsSet,
    IntegratorConfig, Problem, Solution, SolveOptions, BLASIUS_REFERENCE_A,
};

const EPS: f64 = 1e-14;
const LADDER: [f64; 7] = [1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14];

/// The three published experiments: `(label, p, T)` with `c = 1/2`, `beta = 1`.
const CASES: [(&str, f64, f64); 3] = [("blasius", 1.0, 14.0), ("p7", 7.0, 4.0), ("p01", 0.1, 50.0)];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: String) {
        self.passed &= ok;
        self.notes
            .push(format!("{}{note}", if ok { "" } else { "[x] " }));
    }

    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let d = (got - want).abs();
        self.check(
            d <= tol,
            format!("{what} = {got:.17} (|d| = {d:.2e} <= {tol:.0e})"),
        );
    }
}

fn paper_problem(p: f64) -> Problem {
    Problem::new(p, 0.5, 1.0).unwrap()
}

fn solve_at(p: f64, horizon: f64, eps: f64) -> Solution {
    solve_with(
        &paper_problem(p),
        &SolveOptions::new(eps).with_horizon(horizon),
    )
    .unwrap()
}

fn classical_blasius() -> Outcome {
    let mut o = Outcome::new();
    let sol = solve_at(1.0, 14.0, EPS);
    o.near("a*", sol.a_star, 0.332_057_336_215_186, 5e-13);
    o.near("a* vs Boyd", sol.a_star, BLASIUS_REFERENCE_A, 5e-11);
    o.near("x(14)", sol.x_t, 12.279_212_342_480, 1e-8);
    let miss = (1.0 - sol.h_est).abs();
    o.check(miss < 1e-13, format!("|1 - x'(14)| = {miss:.2e} < 1e-13"));
    o
}

fn brackets() -> Outcome {
    let mut o = Outcome::new();
    for (p, lo, hi) in [
        (1.0, 0.269_486_045_9, 0.342_095_321_6),
        (7.0, 0.373_397_838_8, 0.380_548_242_7),
    ] {
        let prob = paper_problem(p);
        let br = constants(&prob).bracket(&prob).unwrap();
        o.near(&format!("p={p} a_min"), br.a_min, lo, 1e-9);
        o.near(&format!("p={p} a_max"), br.a_max, hi, 1e-9);
    }
    o
}

fn truncation_certificates() -> Outcome {
    let mut o = Outcome::new();
    for (label, p, horizon) in CASES {
        let prob = paper_problem(p);
        let bounds = constants(&prob);
        let br = bounds.bracket(&prob).unwrap();
        let cert = check_t(horizon, EPS, &br, &bounds, &prob).unwrap();
        o.check(
            cert.valid,
            format!(
                "{label}: check_T({horizon}) valid = {} (lhs {:.2e}, {:.2e}, {:.2e})",
                cert.valid, cert.lhs2, cert.lhs1, cert.lhs0
            ),
        );
        let found = find_t(EPS, &br, &bounds, &prob).unwrap().horizon;
        o.check(
            found <= horizon,
            format!("{label}: find_T = {found} <= {horizon}"),
        );
    }
    o
}

fn exponent_seven() -> Outcome {
    let mut o = Outcome::new();
    let sol = solve_at(7.0, 4.0, EPS);
    o.near("a*", sol.a_star, 0.379_398_189_108_571, 1e-12);
    o.near("x(4)", sol.x_t, 2.673_055_581_875, 1e-9);
    o.check(
        sol.d2x_t <= 1e-15,
        format!("x''(4) = {:.2e} <= 1e-15", sol.d2x_t),
    );
    o
}

fn exponent_tenth() -> Outcome {
    let mut o = Outcome::new();
    let sol = solve_at(0.1, 50.0, EPS);
    o.near("a*", sol.a_star, 0.443_643_421_683, 1e-9);
    o.near("x(50)", sol.x_t, 48.054_282_358_90, 1e-6);
    o
}

fn tolerance_ladder() -> Outcome {
    let mut o = Outcome::new();
    let published = [6.15e-9, 2.47e-8, 2.16e-7];
    for ((label, p, horizon), paper_delta) in CASES.into_iter().zip(published) {
        let a: Vec<f64> = LADDER
            .iter()
            .map(|&e| solve_at(p, horizon, e).a_star)
            .collect();
        let a_ref = a[LADDER.len() - 1];
        let deltas: Vec<f64> = a.iter().map(|x| (x - a_ref).abs()).collect();
        let monotone = deltas.windows(2).all(|w| w[1] <= w[0]);
        let shown: Vec<String> = deltas.iter().map(|d| format!("{d:.2e}")).collect();
        o.check(
            monotone,
            format!("{label}: deltas nonincreasing [{}]", shown.join(", ")),
        );
        let ratio = deltas[0] / paper_delta;
        o.check(
            (1.0 / 50.0..=50.0).contains(&ratio),
            format!(
                "{label}: delta(1e-8) = {:.3e}, published {paper_delta:.2e}, ratio {ratio:.2}",
                deltas[0]
            ),
        );
    }
    o
}

fn property_suites() -> Outcome {
    let mut o = Outcome::new();
    let eps = 1e-12;
    let mut worst = [0.0f64; 5];
    let mut failures = 0usize;
    for p in [1.0, 2.0, 3.0, 7.0] {
        for c in [0.5, 1.0] {
            let prob = Problem::new(p, c, 1.0).unwrap();
            let bounds = BoundsSet::new(&prob);
            let unit = measure(1.0, &prob, &bounds, eps).unwrap();
            for a in [0.05, 0.2, 1.0, 5.0] {
                let m = measure(a, &prob, &bounds, eps).unwrap();
                let slack = 10.0 * eps;
                let mut sandwich = 0.0f64;
                for s in m.trajectory.samples.iter().skip(1) {
                    let t = s.t;
                    for v in [
                        -s.x,
                        s.x - a * t * t / 2.0,
                        -s.dx,
                        s.dx - a * t,
                        -s.d2x,
                        s.d2x - a,
                    ] {
                        sandwich = sandwich.max(v);
                    }
                }
                let (hl, hh) = bounds.h_bounds(a);
                let (ml, mh) = bounds.mu_bounds(a);
                let containment = [hl - m.h, m.h - hh, ml - m.mu, m.mu - mh]
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max);
                let q = m.trajectory.cumulative_power_integral(&prob);
                let identity = m
                    .trajectory
                    .samples
                    .iter()
                    .zip(&q)
                    .map(|(s, qi)| (s.d2x - a * (-c * qi).exp()).abs())
                    .fold(0.0, f64::max);
                let asymptote = m
                    .trajectory
                    .samples
                    .iter()
                    .map(|s| ((m.h * s.t - m.mu).max(0.0) - s.x).max(s.x - m.h * s.t))
                    .fold(0.0, f64::max);
                let h_pred = a.powf((p + 1.0) / (2.0 * p + 1.0)) * unit.h;
                let mu_pred = a.powf(1.0 / (2.0 * p + 1.0)) * unit.mu;
                let scaling = ((m.h - h_pred) / h_pred)
                    .abs()
                    .max(((m.mu - mu_pred) / mu_pred).abs());

                let row = [sandwich, containment, identity, asymptote, scaling];
                let limits = [slack, 1e-8, 1e-8, 1e-7, 1e-7];
                for k in 0..5 {
                    worst[k] = worst[k].max(row[k]);
                    if row[k] > limits[k] {
                        failures += 1;
                        o.notes.push(format!(
                            "[x] p={p} c={c} a={a}: check {k} at {:.2e}",
                            row[k]
                        ));
                    }
                }
            }
        }
    }
    o.passed &= failures == 0;
    o.notes.push(format!(
        "worst: sandwich {:.1e}, bounds {:.1e}, identity {:.1e}, asymptote {:.1e}, scaling {:.1e}",
        worst[0], worst[1], worst[2], worst[3], worst[4]
    ));
    o
}

fn linear_oracle() -> Outcome {
    let mut o = Outcome::new();
    let prob = Problem::new(0.0, 1.0, 1.0).unwrap();
    let sol = solve_with(&prob, &SolveOptions::new(EPS)).unwrap();
    o.near("a*", sol.a_star, 1.0, 1e-12);
    o.near("mu", sol.mu_est, 1.0, 1e-10);
    o
}

/// Composite Simpson with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn quadrature_oracle() -> Outcome {
    let mut o = Outcome::new();
    for (label, p, horizon) in CASES {
        let prob = paper_problem(p);
        let bounds = constants(&prob);
        let line = bounds.lower_line(bounds.bracket(&prob).unwrap().a_min);
        for n in 0..2u32 {
            let f = |s: f64| {
                let w = if n == 0 { 1.0 } else { s - horizon };
                w * (-prob.c() * inner_integral(s, &line, &prob)).exp()
            };
            let brute = simpson(f, horizon, horizon + 200.0, 1_000_000);
            let got = tail_moment(n, horizon, &line, &prob).unwrap();
            let rel = ((got - brute) / brute).abs();
            o.check(
                rel <= 1e-12,
                format!(
                    "{label} n={n}: {got:.15e} vs Simpson {brute:.15e} (rel {rel:.1e} <= 1e-12)"
                ),
            );
        }
    }
    o
}

fn monotone_map() -> Outcome {
    let mut o = Outcome::new();
    let eps = 1e-12;
    for (label, p, horizon) in CASES {
        let prob = paper_problem(p);
        let br = constants(&prob).bracket(&prob).unwrap();
        let cfg = IntegratorConfig::new(eps, horizon);
        let dx: Vec<f64> = (0..9)
            .map(|k| {
                let a = br.a_min + br.width() * k as f64 / 8.0;
                shoot(a, horizon, &prob, &cfg).unwrap().dx_t
            })
            .collect();
        let gap = dx
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        o.check(
            gap > 100.0 * eps,
            format!("{label}: smallest gap {gap:.3e} > {:.0e}", 100.0 * eps),
        );
    }
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 classical Blasius at T=14", classical_blasius),
        ("2 bracket reproduction", brackets),
        ("3 truncation certificates", truncation_certificates),
        ("4 exponent 7 at T=4", exponent_seven),
        ("5 exponent 0.1 at T=50", exponent_tenth),
        ("6 tolerance ladder", tolerance_ladder),
        ("7 property suites", property_suites),
        ("8 linear oracle", linear_oracle),
        ("9 tail quadrature vs Simpson", quadrature_oracle),
        ("10 monotone shooting map", monotone_map),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let out = run();
        println!(
            "{} criterion {name}",
            if out.passed { "PASS" } else { "FAIL" }
        );
        for note in &out.notes {
            println!("       {note}");
        }
        failed += usize::from(!out.passed);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
