use std::fmt::Write as _;

use blasius_core::Solution;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub p: f64,
    pub c: f64,
    pub beta: f64,
    pub proven_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub horizon: f64,
    pub lhs2: f64,
    pub lhs1: f64,
    pub lhs0: f64,
    pub valid: bool,
}

/// Everything a single `solve` run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub problem: ProblemRecord,
    pub eps: f64,
    pub constants: ConstantsRecord,
    pub a_min: f64,
    pub a_max: f64,
    pub certificate: CertificateRecord,
    pub a_star: f64,
    pub h_est: f64,
    pub mu_est: f64,
    pub x_t: f64,
    pub d2x_t: f64,
    pub iterations: usize,
    pub steps: usize,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn from_solution(sol: &Solution, wall_time_s: f64) -> Self {
        let prob = &sol.problem;
        let b = &sol.bounds;
        Self {
            problem: ProblemRecord {
                p: prob.p(),
                c: prob.c(),
                beta: prob.beta(),
                proven_regime: prob.proven_regime(),
            },
            eps: sol.eps,
            constants: ConstantsRecord {
                c1: b.c1,
                c2: b.c2,
                c3: b.c3,
                c4: b.c4,
                c5: b.c5,
            },
            a_min: sol.bracket.a_min,
            a_max: sol.bracket.a_max,
            certificate: CertificateRecord {
                horizon: sol.cert.horizon,
                lhs2: sol.cert.lhs2,
                lhs1: sol.cert.lhs1,
                lhs0: sol.cert.lhs0,
                valid: sol.cert.valid,
            },
            a_star: sol.a_star,
            h_est: sol.h_est,
            mu_est: sol.mu_est,
            x_t: sol.x_t,
            d2x_t: sol.d2x_t,
            iterations: sol.iterations,
            steps: sol.total_steps,
            wall_time_s,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest fields are finite")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Aligned `key value` lines, floats with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<12} {v}");
        };
        let pr = &self.problem;
        line("p", sig17(pr.p));
        line("c", sig17(pr.c));
        line("beta", sig17(pr.beta));
        line("eps", sig17(self.eps));
        let k = &self.constants;
        for (name, v) in [
            ("c1", k.c1),
            ("c2", k.c2),
            ("c3", k.c3),
            ("c4", k.c4),
            ("c5", k.c5),
        ] {
            line(name, sig17(v));
        }
        line("a_min", sig17(self.a_min));
        line("a_max", sig17(self.a_max));
        let cert = &self.certificate;
        line("T", sig17(cert.horizon));
        line("lhs2", sig17(cert.lhs2));
        line("lhs1", sig17(cert.lhs1));
        line("lhs0", sig17(cert.lhs0));
        line("certified", cert.valid.to_string());
        line("a_star", sig17(self.a_star));
        line("h_est", sig17(self.h_est));
        line("mu_est", sig17(self.mu_est));
        line("x_T", sig17(self.x_t));
        line("d2x_T", sig17(self.d2x_t));
        line("iterations", self.iterations.to_string());
        line("steps", self.steps.to_string());
        line("wall_time_s", format!("{:.6}", self.wall_time_s));
        out
    }
}

/// `v` with 17 significant digits.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}
