use std::io;

use blasius_core::{extend, integrate_to_grid, Error, IntegratorConfig, Solution, State};

use crate::manifest::sig17;

/// `n` equispaced samples of the solution on `[0, t_max]`. Inside the horizon
/// the trajectory is integrated onto the grid; past it the linear continuation
/// is used, with `x' = beta` and `x'' = 0`.
pub fn sample(sol: &Solution, t_max: f64, n: usize) -> Result<Vec<State>, Error> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!(
            "t-max must be positive, got {t_max}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
    }
    let dt = t_max / (n - 1) as f64;
    let times: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { t_max } else { i as f64 * dt })
        .collect();
    let split = times.partition_point(|&t| t <= sol.horizon);

    let mut out = if sol.a_star == 0.0 {
        times[..split]
            .iter()
            .map(|&t| State::new(t, 0.0, 0.0, 0.0))
            .collect()
    } else {
        let cfg = IntegratorConfig::new(sol.eps, sol.horizon);
        integrate_to_grid(sol.a_star, &sol.problem, &times[..split], &cfg)?
    };
    let beta = sol.problem.beta();
    for &t in &times[split..] {
        out.push(State::new(t, extend(sol, t)?, beta, 0.0));
    }
    Ok(out)
}

pub fn write_csv<W: io::Write>(out: W, rows: &[State]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["t", "x", "dx", "d2x"])?;
    for s in rows {
        w.write_record([sig17(s.t), sig17(s.x), sig17(s.dx), sig17(s.d2x)])?;
    }
    w.flush()?;
    Ok(())
}
