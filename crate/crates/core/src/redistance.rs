//! Predictor-corrector redistancing.
//!
//! The predictor solves the linear problem `-lap(phi_p) = sgn(phi0)` with
//! `phi_p = 0` on the interface and `grad(phi_p) . n = sgn(phi0)` on the domain
//! boundary. The corrector then runs Picard iterations on the least-squares
//! Eikonal functional: every step solves a Laplace problem whose load is
//! `d*(|grad phi^n|) grad phi^n`, with the same interface condition. The
//! system operator does not depend on the iterate and is assembled once.
//!
//! The interface condition is imposed strongly on vertices lying on the zero
//! set ([`Mode::Fitted`]) or weakly with Nitsche terms on a reconstructed
//! interface cutting through the mesh ([`Mode::Unfitted`]).

use std::time::{Duration, Instant};

use crate::cutfem::{self, classify_cells, CellTag, CutInterface, NitscheScale};
use crate::error::{Error, Result};
use crate::fem::{
    apply_strong_dirichlet, assemble_corrector_rhs, assemble_sign_source, assemble_stiffness, cell_gradients,
    solve_spd_from, FieldP1, SparseMatrix,
};
use crate::levelset::{default_tol_zero, sign_field, AnalyticLevelSet, SignField};
use crate::mesh::{build_interval_mesh, Mesh};
use crate::metrics::{eikonal_error, interface_error, l2_error};
use crate::scalar::{norm, Real, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Mesh vertices lie on the interface; zero is imposed on them strongly.
    Fitted,
    /// The interface cuts through cells; zero is imposed with Nitsche terms.
    Unfitted,
}

/// Picard coefficient `d*` applied to the previous gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `1 / max(|g|, eps)`: the unmodified least-squares functional.
    Original,
    /// Double-well modification: `3|g| - 2|g|^2` for `|g| <= 1`.
    Basting,
    /// `2 - |g|` for `|g| <= 1`.
    Adams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Eikonal error below the threshold.
    Residual,
    /// Change in Eikonal error between iterations below the threshold.
    Increment,
}

/// Picard diffusion coefficient for gradient norm `g`.
pub fn d_star<T: Real>(scheme: Scheme, g: T, eps_grad: T) -> T {
    match scheme {
        Scheme::Original => T::one() / g.max(eps_grad),
        _ if g > T::one() => T::one() / g,
        Scheme::Basting => T::lit(3.0) * g - T::lit(2.0) * g * g,
        Scheme::Adams => T::lit(2.0) - g,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedistanceConfig<T> {
    pub mode: Mode,
    pub scheme: Scheme,
    /// Nitsche penalty parameter.
    pub gamma_d: T,
    /// Floor on `|grad phi|` in the corrector load.
    pub eps_grad: T,
    pub stop_rule: StopRule,
    pub stop_eps: T,
    pub max_iters: usize,
    /// Narrow-band half-width in units of the mesh size.
    pub annulus: Option<T>,
    pub predictor: bool,
    pub solver_tol: T,
    pub quadrature_degree: usize,
    pub nitsche_scale: NitscheScale<T>,
}

impl<T: Real> Default for RedistanceConfig<T> {
    fn default() -> Self {
        RedistanceConfig {
            mode: Mode::Unfitted,
            scheme: Scheme::Original,
            gamma_d: T::lit(1e4),
            eps_grad: T::lit(1e-10),
            stop_rule: StopRule::Increment,
            stop_eps: T::lit(1e-8),
            max_iters: 500,
            annulus: None,
            predictor: true,
            solver_tol: T::lit(crate::fem::DEFAULT_TOL),
            quadrature_degree: cutfem::DEFAULT_DEGREE,
            nitsche_scale: NitscheScale::CellDiameter,
        }
    }
}

impl<T: Real> RedistanceConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("gamma_d", self.gamma_d)?;
        positive("eps_grad", self.eps_grad)?;
        positive("stop_eps", self.stop_eps)?;
        positive("solver_tol", self.solver_tol)?;
        if let Some(w) = self.annulus {
            positive("annulus", w)?;
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.quadrature_degree == 0 {
            return Err(Error::InvalidConfig("quadrature_degree must be at least 1".into()));
        }
        Ok(())
    }
}

/// Errors of one iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    /// 0 for the starting field, `n` after the n-th corrector step.
    pub iter: usize,
    pub eikonal_error: T,
    pub l2_error: Option<T>,
    pub interface_error: Option<T>,
    /// Vertices away from the interface whose sign differs from the initial level set.
    pub sign_mismatches: usize,
    pub solver_iterations: usize,
}

/// Submesh a narrow-band run was computed on.
#[derive(Debug, Clone)]
pub struct Band<T> {
    pub mesh: Mesh<T>,
    /// Original vertex index of every band vertex.
    pub vertex_map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RedistanceReport<T> {
    /// Errors of the predictor solution, or of the initial field without predictor.
    pub initial: IterationRecord<T>,
    /// One record per corrector iteration.
    pub history: Vec<IterationRecord<T>>,
    pub predictor: Option<FieldP1<T>>,
    pub field: FieldP1<T>,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
    /// Present for narrow-band runs; fields then live on the band mesh.
    pub band: Option<Band<T>>,
}

impl<T: Real> RedistanceReport<T> {
    pub fn last(&self) -> &IterationRecord<T> {
        self.history.last().unwrap_or(&self.initial)
    }
}

/// System operator shared by the predictor and every corrector step:
/// stiffness plus the interface condition.
#[derive(Debug, Clone)]
pub struct PicardOperator<T> {
    pub matrix: SparseMatrix<T>,
    /// Strongly constrained (zero) dofs; empty in unfitted mode.
    pub constrained: Vec<usize>,
    /// Reconstructed initial interface.
    pub interface: CutInterface<T>,
    sign: SignField,
    /// Vertices excluded from sign-preservation checks.
    near_interface: Vec<bool>,
    mode: Mode,
}

impl<T: Real> PicardOperator<T> {
    pub fn assemble(mesh: &Mesh<T>, phi0: &FieldP1<T>, cfg: &RedistanceConfig<T>) -> Result<Self> {
        cfg.validate()?;
        phi0.check(mesh)?;
        if !phi0.is_finite() {
            return Err(Error::NonFinite("initial level set".into()));
        }
        let sign = sign_field(phi0, default_tol_zero(mesh.bounding_diameter()));
        if !sign.has_interface() {
            return Err(Error::NoInterface);
        }
        let interface = cutfem::reconstruct_interface_with_degree(mesh, phi0, cfg.quadrature_degree)?;
        let mut matrix = assemble_stiffness(mesh);
        let mut near_interface = vec![false; mesh.n_vertices()];
        let constrained = match cfg.mode {
            Mode::Fitted => {
                let tol = cutfem::snap_tolerance(phi0);
                let dofs: Vec<usize> = (0..mesh.n_vertices()).filter(|&v| phi0.values()[v].abs() <= tol).collect();
                if dofs.is_empty() {
                    return Err(Error::NoFittedInterface);
                }
                let mut scratch = vec![T::zero(); mesh.n_vertices()];
                apply_strong_dirichlet(&mut matrix, &mut scratch, &dofs, &vec![T::zero(); dofs.len()])?;
                for &d in &dofs {
                    near_interface[d] = true;
                }
                dofs
            }
            Mode::Unfitted => {
                cutfem::assemble_nitsche(mesh, &mut matrix, &interface, cfg.gamma_d, cfg.nitsche_scale)?;
                let tags = classify_cells(mesh, phi0)?;
                for c in tags.cut_cells() {
                    for &v in mesh.cell(c) {
                        near_interface[v] = true;
                    }
                }
                Vec::new()
            }
        };
        Ok(PicardOperator { matrix, constrained, interface, sign, near_interface, mode: cfg.mode })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn sign(&self) -> &SignField {
        &self.sign
    }

    fn solve(&self, mut rhs: Vec<T>, guess: Option<&FieldP1<T>>, tol: T) -> Result<(FieldP1<T>, usize)> {
        for &d in &self.constrained {
            rhs[d] = T::zero();
        }
        let mut x = match guess {
            Some(g) => g.values().to_vec(),
            None => vec![T::zero(); rhs.len()],
        };
        for &d in &self.constrained {
            x[d] = T::zero();
        }
        let stats = solve_spd_from(&self.matrix, &rhs, &mut x, tol, 10 * rhs.len().max(1))?;
        Ok((FieldP1::new(x), stats.iterations))
    }

    /// Number of vertices off the interface whose sign disagrees with `phi0`.
    pub fn sign_mismatches(&self, phi: &FieldP1<T>) -> usize {
        phi.values()
            .iter()
            .enumerate()
            .filter(|&(v, &x)| {
                let s = self.sign.get(v);
                s != 0 && !self.near_interface[v] && x * T::lit(s as f64) <= T::zero()
            })
            .count()
    }
}

/// Solves the predictor problem.
pub fn solve_predictor<T: Real>(mesh: &Mesh<T>, phi0: &FieldP1<T>, cfg: &RedistanceConfig<T>) -> Result<FieldP1<T>> {
    let op = PicardOperator::assemble(mesh, phi0, cfg)?;
    Ok(predictor_with(mesh, &op, cfg)?.0)
}

fn predictor_with<T: Real>(mesh: &Mesh<T>, op: &PicardOperator<T>, cfg: &RedistanceConfig<T>) -> Result<(FieldP1<T>, usize)> {
    let rhs = assemble_sign_source(mesh, &op.sign)?;
    let (phi, its) = op.solve(rhs, None, cfg.solver_tol)?;
    if !phi.is_finite() {
        return Err(Error::NonFinite("predictor".into()));
    }
    Ok((phi, its))
}

/// One Picard update of `phi_n` with the pre-assembled operator.
pub fn corrector_step<T: Real>(
    mesh: &Mesh<T>,
    phi_n: &FieldP1<T>,
    cfg: &RedistanceConfig<T>,
    op: &PicardOperator<T>,
) -> Result<FieldP1<T>> {
    Ok(corrector_with(mesh, phi_n, cfg, op)?.0)
}

fn corrector_with<T: Real>(
    mesh: &Mesh<T>,
    phi_n: &FieldP1<T>,
    cfg: &RedistanceConfig<T>,
    op: &PicardOperator<T>,
) -> Result<(FieldP1<T>, usize)> {
    if !phi_n.is_finite() {
        return Err(Error::NonFinite("previous iterate".into()));
    }
    let rhs = assemble_corrector_rhs(mesh, phi_n, cfg.eps_grad, cfg.scheme)?;
    op.solve(rhs, Some(phi_n), cfg.solver_tol)
}

/// Exact reference solution, evaluated pointwise.
pub type ExactFn<'a, T> = &'a (dyn Fn(&Vec3<T>) -> T + Sync);

fn record<T: Real>(
    mesh: &Mesh<T>,
    op: &PicardOperator<T>,
    phi: &FieldP1<T>,
    exact: Option<ExactFn<'_, T>>,
    iter: usize,
    solver_iterations: usize,
) -> Result<IterationRecord<T>> {
    Ok(IterationRecord {
        iter,
        eikonal_error: eikonal_error(mesh, phi)?,
        l2_error: exact.map(|f| l2_error(mesh, phi, f)).transpose()?,
        interface_error: if op.interface.is_empty() { None } else { Some(interface_error(mesh, phi, &op.interface)?) },
        sign_mismatches: op.sign_mismatches(phi),
        solver_iterations,
    })
}

/// Full redistancing run: optional predictor, then corrector iterations until
/// the stop rule holds or `max_iters` is reached. Dispatches to
/// [`narrow_band_run`] when `cfg.annulus` is set.
pub fn run<T: Real>(
    mesh: &Mesh<T>,
    phi0: &FieldP1<T>,
    cfg: &RedistanceConfig<T>,
    exact: Option<ExactFn<'_, T>>,
) -> Result<RedistanceReport<T>> {
    if let Some(w) = cfg.annulus {
        return narrow_band_run(mesh, phi0, cfg, w, exact);
    }
    run_with_observer(mesh, phi0, cfg, exact, |_, _| {})
}

/// [`run`] on the full mesh, calling `observer` with every iterate (index 0
/// being the starting field).
pub fn run_with_observer<T: Real>(
    mesh: &Mesh<T>,
    phi0: &FieldP1<T>,
    cfg: &RedistanceConfig<T>,
    exact: Option<ExactFn<'_, T>>,
    mut observer: impl FnMut(usize, &FieldP1<T>),
) -> Result<RedistanceReport<T>> {
    let start = Instant::now();
    let op = PicardOperator::assemble(mesh, phi0, cfg)?;

    let (mut phi, its, predictor) = if cfg.predictor {
        let (p, its) = predictor_with(mesh, &op, cfg)?;
        (p.clone(), its, Some(p))
    } else {
        (phi0.clone(), 0, None)
    };
    observer(0, &phi);
    let initial = record(mesh, &op, &phi, exact, 0, its)?;

    let mut history = Vec::new();
    let mut previous = initial.eikonal_error;
    let mut converged = false;
    for n in 1..=cfg.max_iters {
        let (next, its) = corrector_with(mesh, &phi, cfg, &op)?;
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("corrector iteration {n}")));
        }
        phi = next;
        observer(n, &phi);
        let rec = record(mesh, &op, &phi, exact, n, its)?;
        let done = match cfg.stop_rule {
            StopRule::Residual => rec.eikonal_error < cfg.stop_eps,
            StopRule::Increment => (rec.eikonal_error - previous).abs() < cfg.stop_eps,
        };
        previous = rec.eikonal_error;
        history.push(rec);
        if done {
            converged = true;
            break;
        }
    }

    Ok(RedistanceReport {
        initial,
        iterations: history.len(),
        history,
        predictor,
        field: phi,
        converged,
        wall_time: start.elapsed(),
        band: None,
    })
}

/// Cells within `band_width * h` of the interface, measured with the predictor
/// solution, grown by one layer of neighbours and always containing the cut cells.
pub fn select_band<T: Real>(
    mesh: &Mesh<T>,
    phi0: &FieldP1<T>,
    predictor: &FieldP1<T>,
    band_width: T,
) -> Result<Vec<usize>> {
    let tau = band_width * mesh.h();
    let vals = predictor.values();
    let seed: Vec<bool> = mesh.cells().map(|ids| ids.iter().any(|&v| vals[v].abs() <= tau)).collect();
    if !seed.iter().any(|&s| s) {
        return Err(Error::EmptyBand);
    }
    let mut touched = vec![false; mesh.n_vertices()];
    for (c, ids) in mesh.cells().enumerate() {
        if seed[c] {
            ids.iter().for_each(|&v| touched[v] = true);
        }
    }
    let tags = classify_cells(mesh, phi0)?;
    Ok((0..mesh.n_cells())
        .filter(|&c| tags.tag(c) == CellTag::Cut || mesh.cell(c).iter().any(|&v| touched[v]))
        .collect())
}

/// Redistancing restricted to a band around the interface.
///
/// The band is chosen from a full-domain predictor solution; predictor and
/// corrector are then re-solved on the band submesh, whose outer boundary
/// carries the predictor's `sgn` Neumann data. Errors in the report refer to
/// the band only.
pub fn narrow_band_run<T: Real>(
    mesh: &Mesh<T>,
    phi0: &FieldP1<T>,
    cfg: &RedistanceConfig<T>,
    band_width: T,
    exact: Option<ExactFn<'_, T>>,
) -> Result<RedistanceReport<T>> {
    if !(band_width > T::zero()) {
        return Err(Error::InvalidConfig(format!("band width must be positive, got {band_width}")));
    }
    let full = solve_predictor(mesh, phi0, cfg)?;
    let cells = select_band(mesh, phi0, &full, band_width)?;
    let (sub, vertex_map) = mesh.submesh(&cells)?;
    let phi0_sub = FieldP1::new(vertex_map.iter().map(|&v| phi0.values()[v]).collect());
    let mut inner = cfg.clone();
    inner.annulus = None;
    let mut report = run_with_observer(&sub, &phi0_sub, &inner, exact, |_, _| {})?;
    report.band = Some(Band { mesh: sub, vertex_map });
    Ok(report)
}

/// Variants compared on the one-dimensional three-slope initializer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison1d {
    Basting,
    Adams,
    PredictorOriginal,
}

/// Outcome of [`run_1d_comparison`].
#[derive(Debug, Clone)]
pub struct Slopes1d<T> {
    pub mesh: Mesh<T>,
    pub field: FieldP1<T>,
}

impl<T: Real> Slopes1d<T> {
    /// Volume-weighted mean of `|grad phi|` over cells whose midpoint lies in `[lo, hi]`.
    pub fn mean_gradient(&self, lo: T, hi: T) -> Result<T> {
        mean_gradient_in(&self.mesh, &self.field, lo, hi)
    }
}

pub fn mean_gradient_in<T: Real>(mesh: &Mesh<T>, phi: &FieldP1<T>, lo: T, hi: T) -> Result<T> {
    let grads = cell_gradients(mesh, phi)?;
    let (mut num, mut den) = (T::zero(), T::zero());
    for (c, g) in grads.iter().enumerate() {
        let x = mesh.centroid(c)[0];
        if x >= lo && x <= hi {
            let vol = mesh.geometry()[c].volume();
            num += vol * norm(g);
            den += vol;
        }
    }
    Ok(num / den)
}

/// Runs `iterations` fitted corrector steps on the three-slope initializer over
/// `[0, 1]` with `n_cells` cells. `n_cells` must be even so the interface at
/// `x = 0.5` is a mesh node.
pub fn run_1d_comparison<T: Real>(n_cells: usize, variant: Comparison1d, iterations: usize) -> Result<Slopes1d<T>> {
    if n_cells % 2 != 0 {
        return Err(Error::InvalidMesh("the slopes case needs an even cell count".into()));
    }
    let mesh = build_interval_mesh(T::zero(), T::one(), n_cells)?;
    let case = AnalyticLevelSet::<T>::PiecewiseAffine1d;
    let phi0 = FieldP1::interpolate(&mesh, |p| case.eval(p));
    let (scheme, predictor) = match variant {
        Comparison1d::Basting => (Scheme::Basting, false),
        Comparison1d::Adams => (Scheme::Adams, false),
        Comparison1d::PredictorOriginal => (Scheme::Original, true),
    };
    let cfg = RedistanceConfig { mode: Mode::Fitted, scheme, predictor, ..RedistanceConfig::default() };
    let op = PicardOperator::assemble(&mesh, &phi0, &cfg)?;
    let mut field = if predictor { predictor_with(&mesh, &op, &cfg)?.0 } else { phi0 };
    for _ in 0..iterations {
        field = corrector_step(&mesh, &field, &cfg, &op)?;
    }
    Ok(Slopes1d { mesh, field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn d_star_values() {
        let eps = 1e-10;
        assert_eq!(d_star(Scheme::Original, 2.0, eps), 0.5);
        assert_eq!(d_star(Scheme::Basting, 0.5, eps), 1.0);
        assert_eq!(d_star(Scheme::Adams, 0.5, eps), 1.5);
        for s in [Scheme::Original, Scheme::Basting, Scheme::Adams] {
            assert_eq!(d_star(s, 1.0, eps), 1.0);
            assert_eq!(d_star(s, 4.0, eps), 0.25);
        }
        assert_eq!(d_star(Scheme::Original, 0.0, eps), 1e10);
        assert_eq!(d_star(Scheme::Basting, 0.0, eps), 0.0);
        assert_eq!(d_star(Scheme::Adams, 0.0, eps), 2.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = RedistanceConfig::<f64>::default();
        assert!(cfg.validate().is_ok());
        cfg.max_iters = 0;
        assert!(cfg.validate().is_err());
        let cfg = RedistanceConfig { gamma_d: 0.0, ..RedistanceConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
        let cfg = RedistanceConfig { annulus: Some(-1.0), ..RedistanceConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn no_interface_is_rejected() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[4, 4]).unwrap();
        let phi0 = FieldP1::new(vec![1.0; m.n_vertices()]);
        let r = solve_predictor(&m, &phi0, &RedistanceConfig::default());
        assert_eq!(r.unwrap_err(), Error::NoInterface);
    }

    #[test]
    fn fitted_requires_nodes_on_interface() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[4, 4]).unwrap();
        let phi0 = FieldP1::interpolate(&m, |p| p[0] - 0.4);
        let cfg = RedistanceConfig { mode: Mode::Fitted, ..RedistanceConfig::default() };
        assert_eq!(solve_predictor(&m, &phi0, &cfg).unwrap_err(), Error::NoFittedInterface);
    }

    fn max_change(a: &FieldP1<f64>, b: &FieldP1<f64>) -> f64 {
        a.values().iter().zip(b.values()).fold(0.0, |d, (x, y)| d.max((x - y).abs()))
    }

    #[test]
    fn fitted_half_plane_distance_is_a_fixed_point() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[10, 10]).unwrap();
        let phi = FieldP1::interpolate(&m, |p| p[0] - 0.5);
        let cfg = RedistanceConfig { mode: Mode::Fitted, ..RedistanceConfig::default() };
        let op = PicardOperator::assemble(&m, &phi, &cfg).unwrap();
        let next = corrector_step(&m, &phi, &cfg, &op).unwrap();
        assert!(max_change(&next, &phi) < 1e-10);
    }

    #[test]
    fn unfitted_fixed_point_defect_shrinks_with_penalty() {
        // The load carries no interface flux term, so the signed distance is
        // only reproduced up to the penalty.
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[10, 10]).unwrap();
        let phi = FieldP1::interpolate(&m, |p| 0.6 * p[0] + 0.8 * p[1] - 0.73);
        let defect = |gamma_d: f64| {
            let cfg = RedistanceConfig { gamma_d, ..RedistanceConfig::default() };
            let op = PicardOperator::assemble(&m, &phi, &cfg).unwrap();
            max_change(&corrector_step(&m, &phi, &cfg, &op).unwrap(), &phi)
        };
        let (d3, d4) = (defect(1e3), defect(1e4));
        assert!(d4 < 1e-4, "{d4}");
        assert!(d4 < 0.2 * d3, "{d3} {d4}");
    }

    #[test]
    fn band_too_thin_is_empty() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[16, 16]).unwrap();
        let c = AnalyticLevelSet::<f64>::circle();
        let phi0 = FieldP1::interpolate(&m, |p| c.eval(p));
        let r = narrow_band_run(&m, &phi0, &RedistanceConfig::default(), 1e-14, None);
        assert_eq!(r.unwrap_err(), Error::EmptyBand);
    }

    #[test]
    fn one_dimensional_picard_maps_slopes_pointwise() {
        // With a single Dirichlet node the 1D corrector reproduces d*(g) g on every cell.
        let s = run_1d_comparison::<f64>(60, Comparison1d::Adams, 1).unwrap();
        let g = s.mean_gradient(0.0, 1.0 / 3.0).unwrap();
        assert!((g - (2.0 - 0.6) * 0.6).abs() < 1e-10);
        let g = s.mean_gradient(1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert!((g - (2.0 - 0.3) * 0.3).abs() < 1e-10);
    }
}
