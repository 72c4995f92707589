//! Error norms used to assess a redistanced field.

use crate::cutfem::CutInterface;
use crate::error::{Error, Result};
use crate::fem::{cell_gradients, FieldP1};
use crate::mesh::Mesh;
use crate::scalar::{norm, Real, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub l2_error: Option<T>,
    pub eikonal_error: T,
    pub interface_error: T,
    pub h: T,
}

/// Normalized L2 distance `sqrt(int (phi - I_h exact)^2 / |D|)`.
///
/// The exact field is interpolated at the vertices and the P1 difference is
/// integrated exactly.
pub fn l2_error<T: Real>(mesh: &Mesh<T>, phi: &FieldP1<T>, exact: impl Fn(&Vec3<T>) -> T) -> Result<T> {
    phi.check(mesh)?;
    let diff: Vec<T> = phi.values().iter().zip(mesh.vertices()).map(|(v, p)| *v - exact(p)).collect();
    let k = T::from_usize_lossy(mesh.dim() + 1);
    let mut num = T::zero();
    let mut den = T::zero();
    for geo in mesh.geometry() {
        let (mut sum, mut sq) = (T::zero(), T::zero());
        for &v in geo.vertex_ids() {
            sum += diff[v];
            sq += diff[v] * diff[v];
        }
        num += geo.volume() * (sq + sum * sum) / (k * (k + T::one()));
        den += geo.volume();
    }
    Ok((num / den).sqrt())
}

/// Normalized L2 norm of `1 - |grad phi|`.
pub fn eikonal_error<T: Real>(mesh: &Mesh<T>, phi: &FieldP1<T>) -> Result<T> {
    let grads = cell_gradients(mesh, phi)?;
    let mut num = T::zero();
    let mut den = T::zero();
    for (geo, g) in mesh.geometry().iter().zip(&grads) {
        let e = T::one() - norm(g);
        num += geo.volume() * e * e;
        den += geo.volume();
    }
    Ok((num / den).sqrt())
}

/// `sqrt(int_Gamma phi^2 ds)` over the reconstructed initial interface. Not
/// normalized by the interface measure.
pub fn interface_error<T: Real>(mesh: &Mesh<T>, phi: &FieldP1<T>, interface0: &CutInterface<T>) -> Result<T> {
    phi.check(mesh)?;
    if interface0.is_empty() {
        return Err(Error::NoInterface);
    }
    Ok(interface0
        .integrate(|cell, p| {
            let v = phi.eval_in_cell(mesh, cell, p);
            v * v
        })
        .sqrt())
}

/// Observed order `log(e_coarse / e_fine) / log(h_coarse / h_fine)` between the
/// coarsest and finest samples.
pub fn convergence_order<T: Real>(samples: &[(T, T)]) -> Result<T> {
    if samples.len() < 2 {
        return Err(Error::InvalidSamples(format!("{} sample(s)", samples.len())));
    }
    if let Some((h, e)) = samples.iter().find(|(h, e)| !(*h > T::zero()) || !(*e > T::zero())) {
        return Err(Error::InvalidSamples(format!("h = {h}, e = {e}")));
    }
    let coarse = samples.iter().fold(samples[0], |a, b| if b.0 > a.0 { *b } else { a });
    let fine = samples.iter().fold(samples[0], |a, b| if b.0 < a.0 { *b } else { a });
    if coarse.0 == fine.0 {
        return Err(Error::InvalidSamples("all mesh sizes are equal".into()));
    }
    Ok((coarse.1 / fine.1).ln() / (coarse.0 / fine.0).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutfem::reconstruct_interface;
    use crate::mesh::{build_box_mesh, build_interval_mesh};

    #[test]
    fn l2_of_interpolant_and_shift() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[9, 9]).unwrap();
        let exact = |p: &Vec3<f64>| (p[0] * 3.0).sin() + p[1] * p[1];
        let phi = FieldP1::interpolate(&m, exact);
        assert!(l2_error(&m, &phi, exact).unwrap() < 1e-14);
        let shifted = FieldP1::interpolate(&m, |p| exact(p) - 0.3);
        assert!((l2_error(&m, &shifted, exact).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn l2_scales_linearly() {
        let m = build_interval_mesh(0.0f64, 2.0, 13).unwrap();
        let exact = |p: &Vec3<f64>| p[0].powi(2);
        let phi = FieldP1::interpolate(&m, |p| p[0].cos());
        let e1 = l2_error(&m, &phi, exact).unwrap();
        let phi3 = FieldP1::new(phi.values().iter().map(|v| 3.0 * v).collect());
        let e3 = l2_error(&m, &phi3, |p| 3.0 * exact(p)).unwrap();
        assert!((e3 - 3.0 * e1).abs() < 1e-13);
    }

    #[test]
    fn eikonal_of_unit_slope_and_zero() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[5, 5]).unwrap();
        let phi = FieldP1::interpolate(&m, |p| p[0]);
        assert!(eikonal_error(&m, &phi).unwrap() < 1e-14);
        let zero = FieldP1::zeros(m.n_vertices());
        assert!((eikonal_error(&m, &zero).unwrap() - 1.0).abs() < 1e-15);
        let shifted = FieldP1::interpolate(&m, |p| p[0] * p[1] + 4.0);
        let base = FieldP1::interpolate(&m, |p| p[0] * p[1]);
        assert!((eikonal_error(&m, &shifted).unwrap() - eikonal_error(&m, &base).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn interface_error_cases() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[20, 20]).unwrap();
        let phi0 = FieldP1::interpolate(&m, |p| (p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2) - 0.0625);
        let gamma = reconstruct_interface(&m, &phi0).unwrap();
        assert!(interface_error(&m, &phi0, &gamma).unwrap() < 1e-12);
        let c = FieldP1::new(vec![0.2; m.n_vertices()]);
        let len = gamma.total_measure();
        assert!((interface_error(&m, &c, &gamma).unwrap() - 0.2 * len.sqrt()).abs() < 1e-13);
        let none = reconstruct_interface(&m, &c).unwrap();
        assert_eq!(interface_error(&m, &c, &none), Err(Error::NoInterface));
    }

    #[test]
    fn orders() {
        let o = convergence_order(&[(1.0f64 / 60.0, 4e-4), (1.0 / 120.0, 1e-4)]).unwrap();
        assert!((o - 2.0).abs() < 1e-12);
        let o = convergence_order(&[(0.1f64, 1e-2), (0.025, 1e-2 / 16.0), (0.05, 3.0)]).unwrap();
        assert!((o - 2.0).abs() < 1e-12);
        assert!(convergence_order(&[(0.1f64, 1e-3), (0.1, 1e-3)]).is_err());
        assert!(convergence_order(&[(0.1f64, 1e-3)]).is_err());
        assert!(convergence_order(&[(0.1f64, 0.0), (0.05, 1e-3)]).is_err());
    }
}
