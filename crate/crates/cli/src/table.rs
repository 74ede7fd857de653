//! Tolerance ladders in the layout of the published tables.

use std::io;
use std::thread;

use blasius_core::{solve_with, Error, Problem, Solution, SolveOptions};

use crate::manifest::sig17;

pub const LADDER: [f64; 7] = [1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14];
/// The run every other row's `delta_a` is measured against.
pub const REFERENCE_EPS: f64 = 1e-14;
pub const HEADER: [&str; 6] = ["eps", "N", "a", "delta_a", "delta_beta", "x_T"];

/// The three published experiments, with their published horizons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Case {
    Blasius,
    P7,
    P01,
}

impl Case {
    pub fn problem(self) -> Problem {
        let p = match self {
            Case::Blasius => 1.0,
            Case::P7 => 7.0,
            Case::P01 => 0.1,
        };
        Problem::new(p, 0.5, 1.0).expect("named cases are valid")
    }

    pub fn horizon(self) -> f64 {
        match self {
            Case::Blasius => 14.0,
            Case::P7 => 4.0,
            Case::P01 => 50.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub eps: f64,
    /// Mean accepted steps per shot.
    pub steps: f64,
    pub a: f64,
    /// `|a - a_ref|`, absent when the reference run failed.
    pub delta_a: Option<f64>,
    pub delta_beta: f64,
    pub x_t: f64,
}

pub type RowResult = Result<TableRow, String>;

fn run_one(prob: &Problem, horizon: Option<f64>, eps: f64) -> Result<Solution, Error> {
    let opts = SolveOptions {
        horizon,
        ..SolveOptions::new(eps)
    };
    solve_with(prob, &opts)
}

/// Solves every `eps` concurrently; rows come back in input order.
pub fn run_ladder(prob: &Problem, horizon: Option<f64>, ladder: &[f64]) -> Vec<(f64, RowResult)> {
    let need_ref = !ladder.contains(&REFERENCE_EPS);
    let mut all: Vec<f64> = ladder.to_vec();
    if need_ref {
        all.push(REFERENCE_EPS);
    }
    let solved: Vec<Result<Solution, Error>> = thread::scope(|s| {
        let handles: Vec<_> = all
            .iter()
            .map(|&eps| s.spawn(move || run_one(prob, horizon, eps)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let reference = all
        .iter()
        .position(|&e| e == REFERENCE_EPS)
        .and_then(|i| solved[i].as_ref().ok())
        .map(|s| s.a_star);

    ladder
        .iter()
        .zip(&solved)
        .map(|(&eps, r)| {
            let row = match r {
                Ok(sol) => Ok(TableRow {
                    eps,
                    steps: sol.mean_steps(),
                    a: sol.a_star,
                    delta_a: reference.map(|a_ref| (sol.a_star - a_ref).abs()),
                    delta_beta: (prob.beta() - sol.h_est).abs(),
                    x_t: sol.x_t,
                }),
                Err(e) => Err(e.to_string()),
            };
            (eps, row)
        })
        .collect()
}

/// Writes the header and one line per row. Failed rows keep their `eps` and
/// carry the error message in the `N` cell.
pub fn write_csv<W: io::Write>(out: W, rows: &[(f64, RowResult)]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for (eps, row) in rows {
        let record = match row {
            Ok(r) => [
                format!("{eps:e}"),
                format!("{}", r.steps.round() as u64),
                sig17(r.a),
                r.delta_a.map_or_else(|| "NA".to_string(), sig17),
                sig17(r.delta_beta),
                sig17(r.x_t),
            ],
            Err(msg) => [
                format!("{eps:e}"),
                format!("error: {msg}"),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        };
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
