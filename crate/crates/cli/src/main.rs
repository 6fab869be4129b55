use clap::Parser;
use curvlab_core::report;
use curvlab_core::runner::{self, ConfigFile, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Curvature checks on explicit compact complex manifolds.
#[derive(Parser, Debug)]
#[command(name = "curvlab", version)]
struct Cli {
    /// check-identities | adjoints | gauduchon | theorem-t | classify | yamabe | ahat | lebrun-table
    command: String,
    /// torus-flat | torus-kahler-potential | torus-hermitian-perturbed | hopf-standard | hopf-conformal | inoue-chart
    #[arg(long)]
    manifold: Option<String>,
    /// TOML file whose keys mirror these flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Screening grid resolution.
    #[arg(long)]
    grid: Option<usize>,
    /// Force sequential evaluation for bit-exact reruns.
    #[arg(long)]
    sequential: bool,
    /// text | records
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Complex dimension of the tori.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    amplitude: Option<f64>,
    /// Conformal exponent for hopf-conformal.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    period: Option<f64>,
    /// analytic | fd
    #[arg(long)]
    derivative: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    triples: Option<usize>,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Cap on Gauduchon solver iterations.
    #[arg(long)]
    solver_iterations: Option<usize>,
    #[arg(long)]
    tol_identity: Option<f64>,
    #[arg(long)]
    tol_quadrature: Option<f64>,
    #[arg(long)]
    tol_solver: Option<f64>,
    /// Chern numbers, e.g. "c1^2=0,c2=24".
    #[arg(long)]
    chern: Option<String>,
    /// Pontryagin numbers, e.g. "p1^2=4,p2=7".
    #[arg(long)]
    pontryagin: Option<String>,
    /// Real dimension for ahat.
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long)]
    spin: bool,
    /// Assume a metric of quasi-positive scalar curvature (Lichnerowicz check).
    #[arg(long)]
    qpos: bool,
    /// Kodaira dimension: -inf, 0, 1 or 2.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
}

impl Cli {
    fn overrides(self) -> (ConfigFile, Option<PathBuf>) {
        let flag = |b: bool| if b { Some(true) } else { None };
        let c = ConfigFile {
            command: Some(self.command),
            manifold: self.manifold,
            seed: self.seed,
            grid: self.grid,
            sequential: flag(self.sequential),
            format: self.format,
            out: self.out.map(|p| p.display().to_string()),
            n: self.n,
            amplitude: self.amplitude,
            t: self.t,
            period: self.period,
            derivative: self.derivative,
            points: self.points,
            triples: self.triples,
            starts: self.starts,
            iterations: self.iterations,
            solver_iterations: self.solver_iterations,
            tol_identity: self.tol_identity,
            tol_quadrature: self.tol_quadrature,
            tol_solver: self.tol_solver,
            chern: self.chern,
            pontryagin: self.pontryagin,
            dim: self.dim,
            spin: flag(self.spin),
            qpos: flag(self.qpos),
            kappa: self.kappa,
            ..Default::default()
        };
        (c, self.config)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { runner::EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let (overrides, path) = cli.overrides();
    let cfg = match RunConfig::resolve(overrides, path.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("curvlab: {e}");
            return ExitCode::from(runner::exit_code_for(&e) as u8);
        }
    };
    let (code, rep) = runner::run(&cfg);
    if cfg.out.is_none() {
        print!("{}", report::emit(&rep, cfg.format));
    }
    for v in rep.verdicts.iter().filter(|v| v.starts_with("error")) {
        eprintln!("curvlab: {v}");
    }
    ExitCode::from(code as u8)
}
