//! Run specification: a JSON file whose fields can each be overridden from
//! the command line.

use std::path::{Path, PathBuf};

use clap::Args;
use lsredist::{LevelSet64, Mode, RedistanceConfig64, Scheme, StopRule};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub case: String,
    /// Cells per axis for `run` and `compare`.
    pub n: usize,
    /// Cells per axis for each `convergence` sample.
    pub resolutions: Vec<usize>,
    /// `compare` variants, each `name` or `name@gamma_d`.
    pub variants: Vec<String>,

    pub center: Option<[f64; 2]>,
    pub radius: Option<f64>,
    pub amplitude: Option<f64>,
    pub rays: Option<u32>,
    pub phase: Option<f64>,
    pub major: Option<f64>,
    pub minor: Option<f64>,
    pub side: Option<f64>,
    pub noise_amplitude: f64,
    pub seed: u64,

    /// `fitted` or `unfitted`; defaults to fitted for 1D cases.
    pub mode: Option<String>,
    pub scheme: String,
    /// Defaults per case: 10 for the step and arctan cases, 1e3 for the star, 1e4 otherwise.
    pub gamma_d: Option<f64>,
    pub eps_grad: f64,
    pub stop_rule: String,
    pub stop_eps: f64,
    pub max_iters: usize,
    pub annulus: Option<f64>,
    pub predictor: bool,
    pub solver_tol: f64,
    pub quadrature_degree: usize,

    pub out: PathBuf,
    pub vtk: bool,
    pub history: bool,
    pub interface_vtk: bool,
}

impl Default for RunSpec {
    fn default() -> Self {
        let cfg = RedistanceConfig64::default();
        RunSpec {
            case: "circle".into(),
            n: 80,
            resolutions: vec![60, 80, 120, 160],
            variants: vec!["pc".into(), "elliptic".into()],
            center: None,
            radius: None,
            amplitude: None,
            rays: None,
            phase: None,
            major: None,
            minor: None,
            side: None,
            noise_amplitude: 0.02,
            seed: 0,
            mode: None,
            scheme: "original".into(),
            gamma_d: None,
            eps_grad: cfg.eps_grad,
            stop_rule: "increment".into(),
            stop_eps: cfg.stop_eps,
            max_iters: cfg.max_iters,
            annulus: None,
            predictor: true,
            solver_tol: cfg.solver_tol,
            quadrature_degree: cfg.quadrature_degree,
            out: PathBuf::from("out"),
            vtk: true,
            history: true,
            interface_vtk: true,
        }
    }
}

/// Command-line overrides. Every flag replaces the config field of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run specification
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// circle, step, arctan_noise, star, torus, piecewise_affine_1d or interval_1d
    #[arg(long)]
    pub case: Option<String>,
    /// Cells per axis
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated cells per axis for the convergence sweep
    #[arg(long, value_delimiter = ',')]
    pub resolutions: Option<Vec<usize>>,
    /// Comma-separated variants to compare: pc, elliptic, basting, adams, with optional @gamma_d
    #[arg(long, value_delimiter = ',')]
    pub variants: Option<Vec<String>>,
    #[arg(long)]
    pub mode: Option<String>,
    /// original, basting or adams
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub gamma_d: Option<f64>,
    #[arg(long)]
    pub eps_grad: Option<f64>,
    /// residual or increment
    #[arg(long)]
    pub stop_rule: Option<String>,
    #[arg(long)]
    pub stop_eps: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Narrow-band half-width in mesh sizes
    #[arg(long)]
    pub annulus: Option<f64>,
    /// Start the corrector from the initial level set
    #[arg(long)]
    pub no_predictor: bool,
    #[arg(long)]
    pub solver_tol: Option<f64>,
    #[arg(long)]
    pub quadrature_degree: Option<usize>,
    /// Seed of the arctan noise
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub noise_amplitude: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Loaded spec plus the raw config text, kept to locate fields in messages.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: RunSpec,
    source: Option<(PathBuf, String)>,
}

impl Loaded {
    pub fn load(ov: &Overrides) -> Result<Self, CliError> {
        let source = match &ov.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                Some((path.clone(), text))
            }
            None => None,
        };
        let spec = match &source {
            Some((path, text)) => serde_json::from_str(text).map_err(|e| {
                CliError::Config(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
            })?,
            None => RunSpec::default(),
        };
        let mut loaded = Loaded { spec, source };
        loaded.apply(ov);
        Ok(loaded)
    }

    fn apply(&mut self, ov: &Overrides) {
        let s = &mut self.spec;
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = &ov.$f { s.$f = v.clone(); })* };
        }
        set!(case, n, resolutions, variants, scheme, eps_grad, stop_rule, stop_eps, max_iters);
        set!(solver_tol, quadrature_degree, seed, noise_amplitude, out);
        if ov.mode.is_some() {
            s.mode = ov.mode.clone();
        }
        if ov.gamma_d.is_some() {
            s.gamma_d = ov.gamma_d;
        }
        if ov.annulus.is_some() {
            s.annulus = ov.annulus;
        }
        if ov.no_predictor {
            s.predictor = false;
        }
    }

    /// Config error for `field`, pointing at its line in the config file when it appears there.
    pub fn field_error(&self, field: &str, msg: impl std::fmt::Display) -> CliError {
        let located = self.source.as_ref().and_then(|(path, text)| {
            let key = format!("\"{field}\"");
            text.lines().position(|l| l.contains(&key)).map(|i| format!("{}:{}: ", path.display(), i + 1))
        });
        CliError::Config(format!("{}{field}: {msg}", located.unwrap_or_default()))
    }

    pub fn level_set(&self) -> Result<LevelSet64, CliError> {
        let s = &self.spec;
        let mut ls = match s.case.as_str() {
            "circle" => LevelSet64::circle(),
            "step" => LevelSet64::Step,
            "arctan_noise" => LevelSet64::ArctanNoise { amplitude: s.noise_amplitude, seed: s.seed },
            "star" => LevelSet64::star(),
            "torus" => LevelSet64::torus(),
            "piecewise_affine_1d" => LevelSet64::PiecewiseAffine1d,
            "interval_1d" => LevelSet64::interval_1d(),
            other => return Err(self.field_error("case", format!("unknown case `{other}`"))),
        };
        match &mut ls {
            LevelSet64::Circle { center, radius } => {
                *center = s.center.unwrap_or(*center);
                *radius = s.radius.unwrap_or(*radius);
            }
            LevelSet64::Star { center, radius, amplitude, rays, phase } => {
                *center = s.center.unwrap_or(*center);
                *radius = s.radius.unwrap_or(*radius);
                *amplitude = s.amplitude.unwrap_or(*amplitude);
                *rays = s.rays.unwrap_or(*rays);
                *phase = s.phase.unwrap_or(*phase);
            }
            LevelSet64::Torus { major, minor, side } => {
                *major = s.major.unwrap_or(*major);
                *minor = s.minor.unwrap_or(*minor);
                *side = s.side.unwrap_or(*side);
            }
            _ => {}
        }
        for (name, v) in [("radius", s.radius), ("minor", s.minor), ("major", s.major), ("side", s.side)] {
            if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(self.field_error(name, "must be positive and finite"));
            }
        }
        if s.rays == Some(0) {
            return Err(self.field_error("rays", "must be at least 1"));
        }
        Ok(ls)
    }

    /// Solver configuration for the spec.
    pub fn config(&self, case: &LevelSet64) -> Result<RedistanceConfig64, CliError> {
        let s = &self.spec;
        let mode = match s.mode.as_deref() {
            None if case.dim() == 1 => Mode::Fitted,
            None | Some("unfitted") => Mode::Unfitted,
            Some("fitted") => Mode::Fitted,
            Some(other) => return Err(self.field_error("mode", format!("unknown mode `{other}`"))),
        };
        let scheme = parse_scheme(&s.scheme).ok_or_else(|| self.field_error("scheme", format!("unknown scheme `{}`", s.scheme)))?;
        let stop_rule = match s.stop_rule.as_str() {
            "residual" => StopRule::Residual,
            "increment" => StopRule::Increment,
            other => return Err(self.field_error("stop_rule", format!("unknown stop rule `{other}`"))),
        };
        let cfg = RedistanceConfig64 {
            mode,
            scheme,
            gamma_d: s.gamma_d.unwrap_or(match case {
                LevelSet64::Step | LevelSet64::ArctanNoise { .. } => 10.0,
                LevelSet64::Star { .. } => 1e3,
                _ => 1e4,
            }),
            eps_grad: s.eps_grad,
            stop_rule,
            stop_eps: s.stop_eps,
            max_iters: s.max_iters,
            annulus: s.annulus,
            predictor: s.predictor,
            solver_tol: s.solver_tol,
            quadrature_degree: s.quadrature_degree,
            ..Default::default()
        };
        cfg.validate().map_err(|e| {
            let msg = e.to_string();
            let field = ["gamma_d", "eps_grad", "stop_eps", "solver_tol", "annulus", "max_iters", "quadrature_degree"]
                .into_iter()
                .find(|f| msg.contains(f))
                .unwrap_or("config");
            self.field_error(field, msg)
        })?;
        Ok(cfg)
    }

    pub fn check_n(&self, field: &str, n: usize) -> Result<(), CliError> {
        if n == 0 {
            Err(self.field_error(field, "cell counts must be at least 1"))
        } else {
            Ok(())
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.spec.out
    }
}

pub fn parse_scheme(s: &str) -> Option<Scheme> {
    match s {
        "original" => Some(Scheme::Original),
        "basting" => Some(Scheme::Basting),
        "adams" => Some(Scheme::Adams),
        _ => None,
    }
}

/// One `compare` entry: scheme, predictor switch and optional penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub scheme: Scheme,
    pub predictor: bool,
    pub gamma_d: Option<f64>,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        let (name, gamma) = match s.split_once('@') {
            Some((n, g)) => (n, Some(g.parse::<f64>().ok().filter(|g| *g > 0.0 && g.is_finite())?)),
            None => (s, None),
        };
        let (scheme, predictor) = match name {
            "pc" | "pc-original" => (Scheme::Original, true),
            "elliptic" => (Scheme::Original, false),
            "basting" => (Scheme::Basting, false),
            "adams" => (Scheme::Adams, false),
            _ => return None,
        };
        Some(Variant { label: s.replace('@', "_at_"), scheme, predictor, gamma_d: gamma })
    }
}
