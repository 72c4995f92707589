//! `lsredist`: run the redistancing benchmark cases from a JSON spec.

mod output;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lsredist::redistance::mean_gradient_in;
use lsredist::vtk::{interface_to_vtk, mesh_to_vtk};
use lsredist::{
    build_box_mesh, convergence_order, reconstruct_interface, run, Error, Field64, LevelSet64, Mesh64,
    RedistanceConfig64, RedistanceReport64, Vec3,
};
use rayon::prelude::*;

use output::{full, history_csv, opt, sig6, Summary};
use spec::{Loaded, Overrides, Variant};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numerical(Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::NotConverged(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SolverDiverged { .. }
            | Error::NotPositiveDefinite(_)
            | Error::NonFinite(_)
            | Error::ZeroGradientCutCell(_)
            | Error::DegenerateCell { .. } => CliError::Numerical(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lsredist", version, about = "Finite element redistancing of level-set functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Redistance one case and write its history and fields
    Run(Overrides),
    /// Run a case on several resolutions and report observed orders
    Convergence(Overrides),
    /// Run several variants on the same case and mesh
    Compare(Overrides),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Run(ov) => Loaded::load(ov).and_then(|l| cmd_run(&l)),
        Command::Convergence(ov) => Loaded::load(ov).and_then(|l| cmd_convergence(&l)),
        Command::Compare(ov) => Loaded::load(ov).and_then(|l| cmd_compare(&l)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsredist: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// A case discretized at one resolution.
struct Problem {
    case: LevelSet64,
    mesh: Mesh64,
    phi0: Field64,
}

impl Problem {
    fn new(loaded: &Loaded, n: usize) -> Result<Self, CliError> {
        let case = loaded.level_set()?;
        let (lo, hi) = case.domain();
        let mesh = build_box_mesh(&lo, &hi, &vec![n; case.dim()])?;
        let phi0 = Field64::interpolate(&mesh, |p| case.eval(p));
        Ok(Problem { case, mesh, phi0 })
    }

    fn solve(&self, cfg: &RedistanceConfig64) -> Result<RedistanceReport64, CliError> {
        let exact = |p: &Vec3<f64>| self.case.exact_sdf(p).unwrap_or(f64::NAN);
        let exact_ref: &(dyn Fn(&Vec3<f64>) -> f64 + Sync) = &exact;
        let exact_opt = self.case.has_exact_sdf().then_some(exact_ref);
        Ok(run(&self.mesh, &self.phi0, cfg, exact_opt)?)
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Writes the per-run artifacts selected in the spec into `dir`.
fn write_artifacts(loaded: &Loaded, problem: &Problem, report: &RedistanceReport64, dir: &Path) -> Result<(), CliError> {
    let s = &loaded.spec;
    if s.history {
        write(&dir.join("history.csv"), &history_csv(report))?;
    }
    // Narrow-band fields live on the band submesh.
    let (mesh, phi0) = match &report.band {
        Some(band) => (&band.mesh, Field64::new(band.vertex_map.iter().map(|&v| problem.phi0.values()[v]).collect())),
        None => (&problem.mesh, problem.phi0.clone()),
    };
    if s.vtk {
        let exact = problem.case.has_exact_sdf().then(|| Field64::interpolate(mesh, |p| problem.case.exact_sdf(p).unwrap()));
        let mut fields = vec![("phi0", &phi0), ("phi", &report.field)];
        if let Some(e) = &exact {
            fields.push(("exact_sdf", e));
        }
        write(&dir.join("final.vtk"), &mesh_to_vtk(mesh, &fields))?;
        if let Some(pred) = &report.predictor {
            write(&dir.join("predictor.vtk"), &mesh_to_vtk(mesh, &[("phi0", &phi0), ("predictor", pred)]))?;
        }
    }
    if s.interface_vtk {
        let iface = reconstruct_interface(&problem.mesh, &problem.phi0)?;
        write(&dir.join("interface.vtk"), &interface_to_vtk(&iface))?;
    }
    Ok(())
}

fn cmd_run(loaded: &Loaded) -> Result<(), CliError> {
    loaded.check_n("n", loaded.spec.n)?;
    let problem = Problem::new(loaded, loaded.spec.n)?;
    let cfg = loaded.config(&problem.case)?;
    let report = problem.solve(&cfg)?;
    write_artifacts(loaded, &problem, &report, loaded.out_dir())?;
    let summary = Summary { label: problem.case.tag(), report: &report }.line();
    println!("{summary}");
    if report.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!("no convergence within {} iterations", cfg.max_iters)))
    }
}

/// Worst outcome over sub-runs: numerical failures first, then non-convergence.
fn combine(results: Vec<Result<(), CliError>>) -> Result<(), CliError> {
    let mut worst: Option<CliError> = None;
    for r in results {
        if let Err(e) = r {
            let replace = match &worst {
                None => true,
                Some(w) => matches!((&e, w), (CliError::Config(_) | CliError::Io { .. } | CliError::Numerical(_), CliError::NotConverged(_))),
            };
            if replace {
                worst = Some(e);
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn cmd_convergence(loaded: &Loaded) -> Result<(), CliError> {
    let ns = loaded.spec.resolutions.clone();
    if ns.len() < 2 {
        return Err(loaded.field_error("resolutions", "need at least two resolutions"));
    }
    for (i, &n) in ns.iter().enumerate() {
        loaded.check_n("resolutions", n)?;
        if ns[..i].contains(&n) {
            return Err(loaded.field_error("resolutions", format!("resolution {n} appears twice")));
        }
    }
    let cfg = loaded.config(&loaded.level_set()?)?;
    let runs: Vec<Result<(usize, f64, RedistanceReport64), CliError>> = ns
        .par_iter()
        .map(|&n| {
            let problem = Problem::new(loaded, n)?;
            let report = problem.solve(&cfg)?;
            write_artifacts(loaded, &problem, &report, &loaded.out_dir().join(format!("n{n}")))?;
            Ok((n, problem.mesh.h(), report))
        })
        .collect();
    let mut ok = Vec::new();
    let mut outcomes = Vec::new();
    for r in runs {
        match r {
            Ok(run) => {
                println!("{}", Summary { label: &format!("n = {}", run.0), report: &run.2 }.line());
                if !run.2.converged {
                    outcomes.push(Err(CliError::NotConverged(format!("n = {} did not converge", run.0))));
                }
                ok.push(run);
            }
            Err(e) => outcomes.push(Err(e)),
        }
    }
    let mut table = String::from("n,h,eikonal_error,l2_error,interface_error,iterations\n");
    for (n, h, r) in &ok {
        let last = r.last();
        table += &format!("{n},{},{},{},{},{}\n", full(*h), full(last.eikonal_error), opt(last.l2_error), opt(last.interface_error), r.iterations);
    }
    if ok.len() >= 2 {
        let order = |pick: &dyn Fn(&RedistanceReport64) -> Option<f64>| {
            let samples: Option<Vec<(f64, f64)>> = ok.iter().map(|(_, h, r)| pick(r).map(|e| (*h, e))).collect();
            samples.and_then(|s| convergence_order(&s).ok())
        };
        let eik = order(&|r| Some(r.last().eikonal_error));
        let l2 = order(&|r| r.last().l2_error);
        let gamma = order(&|r| r.last().interface_error);
        table += &format!("order,,{},{},{},\n", opt(eik), opt(l2), opt(gamma));
        let show = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "n/a".into());
        println!("orders: eikonal {} l2 {} interface {}", show(eik), show(l2), show(gamma));
    }
    write(&loaded.out_dir().join("orders.csv"), &table)?;
    combine(outcomes)
}

fn cmd_compare(loaded: &Loaded) -> Result<(), CliError> {
    let names = &loaded.spec.variants;
    if names.len() < 2 {
        return Err(loaded.field_error("variants", "need at least two variants"));
    }
    let variants = names
        .iter()
        .map(|s| Variant::parse(s).ok_or_else(|| loaded.field_error("variants", format!("unknown variant `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    loaded.check_n("n", loaded.spec.n)?;
    let problem = Problem::new(loaded, loaded.spec.n)?;
    let base = loaded.config(&problem.case)?;
    let slopes = matches!(problem.case, LevelSet64::PiecewiseAffine1d);
    let runs: Vec<Result<RedistanceReport64, CliError>> = variants
        .par_iter()
        .map(|v| {
            let cfg = RedistanceConfig64 { scheme: v.scheme, predictor: v.predictor, gamma_d: v.gamma_d.unwrap_or(base.gamma_d), ..base.clone() };
            let report = problem.solve(&cfg)?;
            write_artifacts(loaded, &problem, &report, &loaded.out_dir().join(&v.label))?;
            Ok(report)
        })
        .collect();
    let mut table = String::from("variant,gamma_d,predictor,iterations,converged,eikonal_error,l2_error,interface_error,sign_mismatches");
    if slopes {
        table += ",mean_grad_0_1/3,mean_grad_1/3_2/3,mean_grad_2/3_1";
    }
    table += "\n";
    let mut outcomes = Vec::new();
    for (v, r) in variants.iter().zip(runs) {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                eprintln!("{}: {e}", v.label);
                outcomes.push(Err(e));
                continue;
            }
        };
        println!("{}", Summary { label: &v.label, report: &r }.line());
        if !r.converged {
            outcomes.push(Err(CliError::NotConverged(format!("{} did not converge", v.label))));
        }
        let last = r.last();
        table += &format!(
            "{},{},{},{},{},{},{},{},{}",
            v.label,
            full(v.gamma_d.unwrap_or(base.gamma_d)),
            v.predictor,
            r.iterations,
            r.converged,
            full(last.eikonal_error),
            opt(last.l2_error),
            opt(last.interface_error),
            last.sign_mismatches
        );
        if slopes {
            let third = 1.0 / 3.0;
            for (lo, hi) in [(0.0, third), (third, 2.0 * third), (2.0 * third, 1.0)] {
                let mesh = r.band.as_ref().map_or(&problem.mesh, |b| &b.mesh);
                table += &format!(",{}", full(mean_gradient_in(mesh, &r.field, lo, hi)?));
            }
        }
        table += "\n";
    }
    write(&loaded.out_dir().join("compare.csv"), &table)?;
    combine(outcomes)
}
