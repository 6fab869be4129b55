//! Run configuration and command dispatch behind the `curvlab` binary.

use crate::adjoints;
use crate::catalog::{build_manifold, Manifold, ManifoldId, ManifoldSpec};
use crate::charclass::{self, CharacteristicData};
use crate::conformal::{self, ConformalFactor, GauduchonSetup, KodairaStatement};
use crate::error::{CurvError, Result};
use crate::geometry::{ChartPoint, DerivativeEngine};
use crate::metrics::{hopf_profile, InoueMetric};
use crate::report::{self, Format, Record, Report};
use crate::tensor;
use crate::yamabe::{self, Kappa, YamabeProblem};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckIdentities,
    Adjoints,
    Gauduchon,
    TheoremT,
    Classify,
    Yamabe,
    Ahat,
    LebrunTable,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CheckIdentities,
        Command::Adjoints,
        Command::Gauduchon,
        Command::TheoremT,
        Command::Classify,
        Command::Yamabe,
        Command::Ahat,
        Command::LebrunTable,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::CheckIdentities => "check-identities",
            Command::Adjoints => "adjoints",
            Command::Gauduchon => "gauduchon",
            Command::TheoremT => "theorem-t",
            Command::Classify => "classify",
            Command::Yamabe => "yamabe",
            Command::Ahat => "ahat",
            Command::LebrunTable => "lebrun-table",
        }
    }

    fn needs_manifold(&self) -> bool {
        !matches!(self, Command::Ahat | Command::LebrunTable)
    }
}

impl FromStr for Command {
    type Err = CurvError;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| CurvError::Config(format!("unknown command {s:?}")))
    }
}

/// Flat configuration record. The TOML file and the command line both fill
/// one of these; command-line values win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub command: Option<String>,
    pub manifold: Option<String>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub sequential: Option<bool>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub n: Option<usize>,
    pub amplitude: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub t: Option<f64>,
    pub period: Option<f64>,
    /// `analytic` or `fd`.
    pub derivative: Option<String>,
    pub fd_step: Option<f64>,
    pub points: Option<usize>,
    pub triples: Option<usize>,
    pub starts: Option<usize>,
    pub iterations: Option<usize>,
    /// Cap on Gauduchon inverse-iteration steps.
    pub solver_iterations: Option<usize>,
    pub tol_identity: Option<f64>,
    pub tol_quadrature: Option<f64>,
    pub tol_solver: Option<f64>,
    pub chern: Option<String>,
    pub pontryagin: Option<String>,
    /// Characteristic numbers as a table `monomial = "p/q"`.
    pub numbers: Option<BTreeMap<String, String>>,
    pub dim: Option<u32>,
    pub spin: Option<bool>,
    pub qpos: Option<bool>,
    pub kappa: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        ConfigFile { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CurvError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CurvError::Config(e.to_string()))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: ConfigFile) -> ConfigFile {
        let base = self;
        overlay!(base, top; command, manifold, seed, grid, sequential, format, out, n, amplitude, a, b, t, period,
            derivative, fd_step, points, triples, starts, iterations, solver_iterations, tol_identity, tol_quadrature, tol_solver,
            chern, pontryagin, numbers, dim, spin, qpos, kappa)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub identity: f64,
    pub quadrature: f64,
    /// Solver residual; `None` picks 1e-8 on tori and 1e-6 on Hopf.
    pub solver: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub manifold: Option<ManifoldSpec>,
    pub seed: u64,
    pub sequential: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub fd_step: Option<f64>,
    pub points: usize,
    pub triples: usize,
    pub starts: usize,
    pub iterations: usize,
    pub solver_iterations: Option<usize>,
    pub tol: Tolerances,
    pub characteristic: Option<CharacteristicData>,
    pub qpos: Option<bool>,
    pub kappa: Option<Kappa>,
}

pub const DEFAULT_SEED: u64 = 20240607;

impl RunConfig {
    pub fn from_file(c: ConfigFile) -> Result<Self> {
        let command: Command = c.command.as_deref().ok_or_else(|| CurvError::Config("no command given".into()))?.parse()?;
        let manifold = match &c.manifold {
            Some(id) => {
                let mut spec = ManifoldSpec::parse(id)?;
                let p = &mut spec.params;
                p.n = c.n.unwrap_or(p.n);
                p.amplitude = c.amplitude.unwrap_or(p.amplitude);
                p.a = c.a.unwrap_or(p.a);
                p.b = c.b.unwrap_or(p.b);
                p.t = c.t.unwrap_or(p.t);
                p.period = c.period.unwrap_or(p.period);
                p.grid = c.grid;
                Some(spec)
            }
            None if command.needs_manifold() => return Err(CurvError::Config(format!("{} needs --manifold", command.as_str()))),
            None => None,
        };
        let fd_step = match c.derivative.as_deref() {
            None | Some("analytic") => None,
            Some("fd") => Some(c.fd_step.unwrap_or(1e-4)),
            Some(other) => return Err(CurvError::Config(format!("unknown derivative mode {other:?}"))),
        };
        let characteristic = if command == Command::Ahat {
            let dim = c.dim.ok_or_else(|| CurvError::Config("ahat needs --dim".into()))?;
            let spin = c.spin.unwrap_or(false);
            let list = match (&c.chern, &c.pontryagin, &c.numbers) {
                (Some(s), None, None) | (None, Some(s), None) => s.clone(),
                (None, None, Some(t)) => t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","),
                (None, None, None) => return Err(CurvError::Config("ahat needs --chern, --pontryagin or a numbers table".into())),
                _ => return Err(CurvError::Config("give exactly one of chern, pontryagin, numbers".into())),
            };
            if c.chern.is_some() && list.contains('p') || c.pontryagin.is_some() && list.contains('c') {
                return Err(CurvError::Config("class letter does not match the option".into()));
            }
            Some(CharacteristicData::parse(&list, dim, spin)?)
        } else {
            None
        };
        let kappa = match &c.kappa {
            Some(k) => Some(k.parse::<Kappa>().map_err(CurvError::Config)?),
            None => None,
        };
        let positive = |name: &str, v: Option<f64>, d: f64| -> Result<f64> {
            let x = v.unwrap_or(d);
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(CurvError::Config(format!("{name} must be positive")))
            }
        };
        let identity_default = if fd_step.is_some() { 1e-4 } else { 1e-6 };
        Ok(RunConfig {
            command,
            manifold,
            seed: c.seed.unwrap_or(DEFAULT_SEED),
            sequential: c.sequential.unwrap_or(false),
            format: c.format.as_deref().unwrap_or("text").parse()?,
            out: c.out.map(PathBuf::from),
            fd_step,
            points: c.points.unwrap_or(100),
            triples: c.triples.unwrap_or(20),
            starts: c.starts.unwrap_or(3),
            iterations: c.iterations.unwrap_or(200),
            solver_iterations: c.solver_iterations,
            tol: Tolerances {
                identity: positive("tol-identity", c.tol_identity, identity_default)?,
                quadrature: positive("tol-quadrature", c.tol_quadrature, 1e-3)?,
                solver: c.tol_solver.map(|v| positive("tol-solver", Some(v), 1.0)).transpose()?,
            },
            characteristic,
            qpos: c.qpos,
            kappa,
        })
    }

    /// Reads the file named in `cli` (if any) and lays the command-line values over it.
    pub fn resolve(cli: ConfigFile, config_path: Option<&Path>) -> Result<Self> {
        let base = match config_path {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Self::from_file(base.overlay(cli))
    }
}

pub fn exit_code_for(e: &CurvError) -> i32 {
    match e {
        CurvError::NonConvergence { .. } | CurvError::NoPositiveNullVector(_) => EXIT_NONCONVERGENCE,
        CurvError::Config(_)
        | CurvError::UnknownId(_)
        | CurvError::MissingMonomial(_)
        | CurvError::NotPositiveDefinite(_)
        | CurvError::QuadratureUnsupported(_)
        | CurvError::IoFailure(_) => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Runs one command. The report is written to `config.out` when set.
pub fn run(config: &RunConfig) -> (i32, Report) {
    let start = Instant::now();
    let mut rep = Report::new(config.command.as_str());
    let outcome = dispatch(config, &mut rep);
    rep.elapsed_ms = start.elapsed().as_millis();
    let mut code = match &outcome {
        Ok(()) if rep.passed() => EXIT_PASS,
        Ok(()) => EXIT_CHECK_FAILED,
        Err(e) => {
            rep.verdicts.push(format!("error: {e}"));
            exit_code_for(e)
        }
    };
    if let Some(path) = &config.out {
        if let Err(e) = report::write_report(&rep, config.format, path) {
            rep.verdicts.push(format!("error: {e}"));
            code = EXIT_CONFIG;
        }
    }
    (code, rep)
}

fn dispatch(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    match cfg.command {
        Command::Ahat => return ahat(cfg, rep),
        Command::LebrunTable => return lebrun(cfg, rep),
        _ => {}
    }
    let spec = cfg.manifold.as_ref().ok_or_else(|| CurvError::Config("missing manifold".into()))?;
    let m = build_manifold(spec)?;
    match cfg.command {
        Command::CheckIdentities => check_identities(cfg, &m, rep),
        Command::Adjoints => adjoint_suite(cfg, &m, rep),
        Command::Gauduchon => gauduchon(cfg, &m, rep),
        Command::TheoremT => theorem_t(cfg, &m, rep),
        Command::Classify => classify(cfg, &m, rep),
        Command::Yamabe => yamabe_descent(cfg, &m, rep),
        Command::Ahat | Command::LebrunTable => unreachable!(),
    }
}

fn engine(cfg: &RunConfig) -> DerivativeEngine {
    match cfg.fd_step {
        Some(h) => DerivativeEngine::finite_difference(h),
        None => DerivativeEngine::analytic(),
    }
}

fn check_identities(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let name = m.name();
    let eng = engine(cfg);
    let pts = m.sample_points(cfg.seed, cfg.points);
    let tol = cfg.tol.identity;
    let imag_tol = if cfg.fd_step.is_some() { tol } else { 1e-10 };
    let (mut smax, mut rel, mut two, mut imag) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut tmax, mut amax, mut kdiff, mut sc2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let r = tensor::scalar_identity_residual(&eng, m.metric.as_ref(), p)?;
        smax = smax.max(r.s.abs());
        rel = rel.max(r.relative_residual());
        two = two.max((r.s - r.s_complexified).abs() / (1.0 + r.s.abs()));
        imag = imag.max(r.max_imag);
        tmax = tmax.max(r.torsion_norm_sq);
        amax = amax.max(r.adjoint_term.abs());
        kdiff = kdiff.max((r.s - 2.0 * r.s_c).abs());
        sc2 = sc2.max((r.s_c - 2.0).abs());
    }
    let note = format!("{} points, {} derivatives", pts.len(), if cfg.fd_step.is_some() { "finite-difference" } else { "analytic" });
    rep.push(Record::within("scalar-identity", name, smax, rel, tol).with_note(note));
    rep.push(Record::within("two-oracle", name, smax, two, tol));
    rep.push(Record::within("real-valued", name, imag, imag, imag_tol));
    if m.kahler {
        let ktol = if cfg.fd_step.is_some() { tol } else { 1e-10 };
        rep.push(Record::within("kahler.torsion-norm", name, tmax, tmax, ktol));
        rep.push(Record::within("kahler.adjoint-term", name, amax, amax, if cfg.fd_step.is_some() { tol } else { 1e-8 }));
        rep.push(Record::within("kahler.s-minus-2sc", name, kdiff, kdiff, tol));
    }
    if m.spec.id == ManifoldId::HopfStandard {
        rep.push(Record::within("hopf.chern-scalar", name, 2.0, sc2, tol));
    }
    if m.spec.id == ManifoldId::InoueChart {
        let mut worst = 0.0f64;
        for p in &pts {
            let v = p.coords()[0].im;
            let c = InoueMetric::bundle_curvature_coefficient(p);
            worst = worst.max((c - num_complex::Complex64::new(-1.0 / (2.0 * v * v), 0.0)).norm());
        }
        rep.push(Record::within("inoue.bundle-curvature", name, 0.0, worst, 1e-10));
    }
    Ok(())
}

fn adjoint_suite(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let grid = m.adjoint_grid.as_ref().ok_or_else(|| CurvError::QuadratureUnsupported(m.name().into()))?;
    let tol = if m.spec.id.is_hopf() { cfg.tol.identity.max(1e-5) } else { cfg.tol.identity };
    let r = adjoints::verify_adjoint_identities(m.metric.clone(), m.gauduchon_metric.clone(), grid, cfg.seed, cfg.triples, 16)?;
    for res in &r.residuals {
        let worst = res.pointwise.max(res.weak);
        let mut note = format!("pointwise {:.3e}, weak {:.3e}", res.pointwise, res.weak);
        if res.label == "c3" && m.gauduchon_metric.is_none() {
            note = "skipped: no closed-form Gauduchon metric in this class".into();
        }
        rep.push(Record::within(format!("adjoint.{}", res.label), m.name(), worst, worst, tol).with_note(note));
    }
    Ok(())
}

fn solver_tol(cfg: &RunConfig, m: &Manifold) -> f64 {
    cfg.tol.solver.unwrap_or(if m.spec.id.is_hopf() { 1e-6 } else { 1e-8 })
}

fn solver_setup(cfg: &RunConfig, m: &Manifold) -> Result<GauduchonSetup> {
    let mut s = m.gauduchon.clone().ok_or_else(|| CurvError::QuadratureUnsupported(m.name().into()))?;
    if let Some(k) = cfg.solver_iterations {
        s.max_iter = k;
    }
    Ok(s)
}

fn gauduchon(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let name = m.name();
    let setup = &solver_setup(cfg, m)?;
    let sol = conformal::solve_gauduchon_factor(m.metric.clone(), setup)?;
    let tol = solver_tol(cfg, m);
    rep.push(
        Record::within("gauduchon.residual", name, sol.residual, sol.residual, tol)
            .with_note(format!("{} iterations, already Gauduchon: {}", sol.iterations, sol.already_gauduchon)),
    );
    rep.push(Record::info("gauduchon.positivity", name, sol.positivity, sol.positivity > 0.0));
    rep.push(Record::info("gauduchon.variation", name, sol.factor.variation(), sol.factor.variation().is_finite()));
    match m.planted_factor {
        Some(t) if t != 0.0 => {
            let planted = ConformalFactor::from_field(move |p: &ChartPoint| hopf_profile(p) * t, m.metric.as_ref(), &setup.grid)?;
            let err = sol.factor.values.iter().zip(&planted.values).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            rep.push(Record::within("gauduchon.planted-error", name, t, err, cfg.tol.quadrature));
        }
        _ => {
            if m.gauduchon_metric.is_some() {
                let f = sol.factor.max_abs();
                rep.push(Record::within("gauduchon.already-zero", name, f, f, 1e-6));
            }
        }
    }
    Ok(())
}

fn theorem_t(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let name = m.name();
    let setup = &solver_setup(cfg, m)?;
    let r = conformal::theorem_t_check(m.metric.clone(), setup)?;
    rep.push(Record::within("theorem-t", name, r.lhs, r.residual, cfg.tol.quadrature).with_note(format!("lhs {:.10e}, rhs {:.10e}", r.lhs, r.rhs)));
    let trivial = r.solution.factor.variation() <= 1e-8;
    rep.push(Record::info("theorem-t.gradient-term", name, r.gradient_term, trivial || r.gradient_term > 0.0));
    Ok(())
}

fn classify(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let name = m.name();
    let v = match &m.gauduchon {
        Some(_) => conformal::classify(name, m.metric.clone(), &solver_setup(cfg, m)?, m.kahler, 1e-8)?,
        None => conformal::classify_pointwise(name, m.metric.as_ref(), &m.sample_points(cfg.seed, cfg.points))?,
    };
    let statement = serde_json::to_string(&v.kodaira_statement).unwrap_or_default().trim_matches('"').to_string();
    let pass = v.total_chern_scalar.is_finite() || v.kodaira_statement == KodairaStatement::Indeterminate;
    rep.push(Record::info("classify.total-chern-scalar", name, v.total_chern_scalar, pass).with_note(format!("{statement} (sign {:?})", v.sign)));
    rep.verdicts.push(format!("{name}: {statement}"));
    rep.verdicts.extend(v.notes.iter().map(|n| format!("{name}: {n}")));
    Ok(())
}

fn yamabe_descent(cfg: &RunConfig, m: &Manifold, rep: &mut Report) -> Result<()> {
    let name = m.name();
    let (grid, basis) = m.yamabe.as_ref().ok_or_else(|| CurvError::QuadratureUnsupported(name.into()))?;
    let problem = YamabeProblem::new(m.metric.as_ref(), grid, basis.clone())?;
    for k in 0..cfg.starts {
        let start = if k == 0 { vec![0.0; problem.dim()] } else { yamabe::random_start(problem.dim(), cfg.seed.wrapping_add(k as u64), 0.3) };
        let r = yamabe::minimize_quotient(&problem, start, cfg.iterations, 1e-10);
        let mono = yamabe::trace_is_monotone(&r.trace);
        rep.push(Record::info(format!("yamabe.monotone[{k}]"), name, r.trace.len() as f64, mono));
        let note = format!("initial {:.10e}, converged {}", r.initial, r.converged);
        let rec = if m.spec.id == ManifoldId::TorusFlat {
            Record::within(format!("yamabe.quotient[{k}]"), name, r.estimate, r.estimate.abs(), 1e-6)
        } else {
            Record::info(format!("yamabe.quotient[{k}]"), name, r.estimate, r.estimate.is_finite() && r.estimate <= r.initial)
        };
        rep.push(rec.with_note(note));
    }
    Ok(())
}

fn ahat(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let data = cfg.characteristic.as_ref().ok_or_else(|| CurvError::Config("missing characteristic numbers".into()))?;
    let label = format!("dim-{}", data.real_dim);
    let a = charclass::ahat_genus(data)?;
    let mut note = format!("A-hat = {}", a.value);
    for n in &a.notes {
        note.push_str("; ");
        note.push_str(n);
    }
    rep.push(Record::info("ahat", &label, charclass::to_f64(&a.value), !a.non_integer_spin).with_note(note));
    rep.verdicts.push(format!("A-hat = {}", a.value));
    if let Some(q) = cfg.qpos {
        let v = charclass::lichnerowicz_verdict(data, q)?;
        rep.push(Record::info("lichnerowicz", &label, charclass::to_f64(&a.value), v != charclass::LichnerowiczVerdict::InconsistentInput).with_note(format!("{v:?}")));
        rep.verdicts.push(format!("lichnerowicz: {v:?}"));
    }
    Ok(())
}

fn lebrun(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let table = yamabe::lebrun_table();
    let cols = ["-inf", "0|1", "2"];
    let rows = ["+", "0", "-"];
    for (i, row) in table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            rep.push(Record::info(format!("lebrun[{},{}]", rows[i], cols[j]), "-", if v { 1.0 } else { 0.0 }, v == (i == j)));
        }
    }
    if let Some(k) = cfg.kappa {
        let ok: Vec<&str> = yamabe::SIGNS.iter().zip(rows).filter(|(s, _)| yamabe::lebrun_consistency(**s, k)).map(|(_, r)| r).collect();
        rep.verdicts.push(format!("kappa {k:?}: consistent Yamabe signs {}", ok.join(" ")));
    }
    Ok(())
}

/// Convenience for tests and the demo: build a config from a command and overrides.
pub fn config_for(command: &str, manifold: Option<&str>) -> Result<RunConfig> {
    RunConfig::from_file(ConfigFile { command: Some(command.into()), manifold: manifold.map(String::from), ..Default::default() })
}

/// Makes the manifold metric available by id, e.g. for pointwise evaluations.
pub fn metric_for(id: &str) -> Result<Arc<dyn crate::geometry::MetricField>> {
    Ok(build_manifold(&ManifoldSpec::parse(id)?)?.metric)
}
