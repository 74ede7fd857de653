use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use blasius_cli::table::{self, Case, LADDER};
use blasius_cli::{exit_code, profile, RunManifest, UNPROVEN_WARNING};
use blasius_core::verify::{self, VerifyConfig};
use blasius_core::{solve_with, Error, Problem, Solution, SolveOptions};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "blasius",
    version,
    about = "Certified shooting solver for x''' + c x^p x'' = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print its run manifest.
    Solve(SolveArgs),
    /// Tolerance ladder as CSV: eps,N,a,delta_a,delta_beta,x_T.
    Table(TableArgs),
    /// Equispaced samples of the solution as CSV: t,x,dx,d2x.
    Profile(ProfileArgs),
    /// Check the a-priori estimates numerically over a parameter grid.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ProblemArgs {
    /// One of the published experiments; fixes p, c, beta and the horizon.
    #[arg(long, value_enum, conflicts_with_all = ["p", "c", "beta"])]
    case: Option<Case>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Override the certified horizon.
    #[arg(long)]
    horizon: Option<f64>,
}

impl ProblemArgs {
    /// The problem plus the horizon to use (`None` means search for one).
    fn resolve(&self) -> Result<(Problem, Option<f64>), Error> {
        if let Some(case) = self.case {
            return Ok((case.problem(), Some(self.horizon.unwrap_or(case.horizon()))));
        }
        let prob = Problem::new(
            self.p.unwrap_or(1.0),
            self.c.unwrap_or(0.5),
            self.beta.unwrap_or(1.0),
        )?;
        Ok((prob, self.horizon))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Print a JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated tolerances.
    #[arg(long = "eps", value_delimiter = ',', default_values_t = LADDER)]
    ladder: Vec<f64>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    #[arg(long, default_value_t = 20.0)]
    t_max: f64,
    #[arg(long, default_value_t = 201)]
    n_samples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 7.0])]
    ps: Vec<f64>,
    #[arg(long = "c", value_delimiter = ',', default_values_t = [0.5, 1.0])]
    cs: Vec<f64>,
    #[arg(long = "a", value_delimiter = ',', default_values_t = [0.05, 0.2, 1.0, 5.0])]
    a_values: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Only print failures and the summary.
    #[arg(long)]
    quiet: bool,
    /// Scale c1 by this factor before checking (negative control).
    #[arg(long, hide = true)]
    corrupt_c1: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Table(args) => cmd_table(&args),
        Command::Profile(args) => cmd_profile(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    ExitCode::from(code)
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    exit_code(err) as u8
}

fn warn_if_unproven(prob: &Problem) {
    if !prob.proven_regime() {
        eprintln!("{UNPROVEN_WARNING}");
    }
}

fn solve_problem(args: &ProblemArgs, eps: f64) -> Result<Solution, Error> {
    let (prob, horizon) = args.resolve()?;
    warn_if_unproven(&prob);
    solve_with(
        &prob,
        &SolveOptions {
            horizon,
            ..SolveOptions::new(eps)
        },
    )
}

fn cmd_solve(args: &SolveArgs) -> u8 {
    let start = Instant::now();
    let sol = match solve_problem(&args.problem, args.eps) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let manifest = RunManifest::from_solution(&sol, start.elapsed().as_secs_f64());
    if !manifest.certificate.valid {
        eprintln!(
            "warning: horizon T = {} does not satisfy the tail inequalities",
            sol.horizon
        );
    }
    let text = if args.json {
        manifest.to_json() + "\n"
    } else {
        manifest.to_text()
    };
    print_or_code(text.as_bytes())
}

fn cmd_table(args: &TableArgs) -> u8 {
    let (prob, horizon) = match args.problem.resolve() {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    warn_if_unproven(&prob);
    let rows = table::run_ladder(&prob, horizon, &args.ladder);
    let mut buf = Vec::new();
    if let Err(e) = table::write_csv(&mut buf, &rows) {
        eprintln!("error: {e}");
        return 1;
    }
    print_or_code(&buf)
}

fn cmd_profile(args: &ProfileArgs) -> u8 {
    let sol = match solve_problem(&args.problem, args.eps) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let rows = match profile::sample(&sol, args.t_max, args.n_samples) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut buf = Vec::new();
    if let Err(e) = profile::write_csv(&mut buf, &rows) {
        eprintln!("error: {e}");
        return 1;
    }
    print_or_code(&buf)
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let cfg = VerifyConfig {
        ps: args.ps.clone(),
        cs: args.cs.clone(),
        a_values: args.a_values.clone(),
        eps: args.eps,
        corrupt_c1: args.corrupt_c1,
    };
    let report = match verify::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mut out = String::new();
    for check in report.checks.iter().filter(|c| !args.quiet || !c.passed) {
        out.push_str(&format!("{check}\n"));
    }
    out.push_str(&format!(
        "{} checks, {} hard failures, {} warnings\n",
        report.checks.len(),
        report.hard_failures(),
        report.warnings()
    ));
    match print_or_code(out.as_bytes()) {
        0 if report.passed() => 0,
        0 => 1,
        code => code,
    }
}

fn print_or_code(bytes: &[u8]) -> u8 {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(bytes).and_then(|_| stdout.flush()) {
        Ok(()) => 0,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
