//! Continuous P1 finite elements: fields, assembly and linear solves.

mod solve;
mod sparse;

pub use solve::{apply_strong_dirichlet, solve_spd, solve_spd_from, SolveStats, DEFAULT_TOL};
pub use sparse::SparseMatrix;

use crate::error::{Error, Result};
use crate::levelset::SignField;
use crate::mesh::Mesh;
use crate::redistance::{d_star, Scheme};
use crate::scalar::{dot, norm, Real, Vec3};

/// Continuous piecewise-linear field stored by vertex value.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldP1<T> {
    values: Vec<T>,
}

impl<T: Real> FieldP1<T> {
    pub fn new(values: Vec<T>) -> Self {
        FieldP1 { values }
    }

    pub fn zeros(n: usize) -> Self {
        FieldP1 { values: vec![T::zero(); n] }
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(mesh: &Mesh<T>, f: impl Fn(&Vec3<T>) -> T) -> Self {
        FieldP1 { values: mesh.vertices().iter().map(f).collect() }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub(crate) fn check(&self, mesh: &Mesh<T>) -> Result<()> {
        if self.values.len() != mesh.n_vertices() {
            return Err(Error::DimensionMismatch { expected: mesh.n_vertices(), found: self.values.len() });
        }
        Ok(())
    }

    /// Value at `p`, taken as lying in cell `c`.
    pub fn eval_in_cell(&self, mesh: &Mesh<T>, c: usize, p: &Vec3<T>) -> T {
        let geo = &mesh.geometry()[c];
        let ids = geo.vertex_ids();
        let bary = geo.barycentric(mesh.vertex(ids[0]), p);
        ids.iter().zip(bary).map(|(&v, l)| self.values[v] * l).sum()
    }
}

/// P1 stiffness matrix `A_ij = sum_K |K| grad(l_i) . grad(l_j)`.
pub fn assemble_stiffness<T: Real>(mesh: &Mesh<T>) -> SparseMatrix<T> {
    let mut a = SparseMatrix::from_mesh_pattern(mesh);
    for geo in mesh.geometry() {
        let ids = geo.vertex_ids();
        let grads = geo.grad_barycentric();
        for (li, &i) in ids.iter().enumerate() {
            for (lj, &j) in ids.iter().enumerate() {
                a.add_in_pattern(i, j, geo.volume() * dot(&grads[li], &grads[lj]));
            }
        }
    }
    a
}

/// Sign of a simplex whose vertex signs do not mix `-1` and `+1`.
fn uniform_sign(signs: impl Iterator<Item = i8>) -> Option<i8> {
    let mut s = 0;
    for v in signs {
        if v != 0 {
            if s != 0 && s != v {
                return None;
            }
            s = v;
        }
    }
    Some(s)
}

/// Adds `int_S sgn * l_i` over a simplex `S` with `k` vertices and measure `m`.
///
/// On a simplex that does not straddle the interface `sgn` is constant and
/// integrated exactly; on a straddling simplex the P1 interpolant of the vertex
/// signs is used.
fn add_sign_integral<T: Real>(load: &mut [T], ids: &[usize], sgn: &SignField, measure: T) {
    let k = T::from_usize_lossy(ids.len());
    match uniform_sign(ids.iter().map(|&v| sgn.get(v))) {
        Some(s) => {
            let part = T::lit(s as f64) * measure / k;
            for &i in ids {
                load[i] += part;
            }
        }
        None => {
            let total: i32 = ids.iter().map(|&v| sgn.get(v) as i32).sum();
            let c = measure / (k * (k + T::one()));
            for &i in ids {
                load[i] += c * T::lit((total + sgn.get(i) as i32) as f64);
            }
        }
    }
}

/// Predictor load `int_D sgn v dx + int_dD sgn v ds`.
pub fn assemble_sign_source<T: Real>(mesh: &Mesh<T>, sgn: &SignField) -> Result<Vec<T>> {
    if sgn.len() != mesh.n_vertices() {
        return Err(Error::DimensionMismatch { expected: mesh.n_vertices(), found: sgn.len() });
    }
    let mut load = vec![T::zero(); mesh.n_vertices()];
    for geo in mesh.geometry() {
        add_sign_integral(&mut load, geo.vertex_ids(), sgn, geo.volume());
    }
    for facet in mesh.boundary_facets() {
        add_sign_integral(&mut load, facet.vertices(), sgn, facet.measure);
    }
    Ok(load)
}

/// Constant gradient of `phi` on every cell.
pub fn cell_gradients<T: Real>(mesh: &Mesh<T>, phi: &FieldP1<T>) -> Result<Vec<Vec3<T>>> {
    phi.check(mesh)?;
    Ok(mesh
        .geometry()
        .iter()
        .map(|geo| {
            let mut g = [T::zero(); 3];
            for (&v, gl) in geo.vertex_ids().iter().zip(geo.grad_barycentric()) {
                for k in 0..3 {
                    g[k] += phi.values[v] * gl[k];
                }
            }
            g
        })
        .collect())
}

/// Corrector load `b_i = sum_K |K| d*(|g_K|) g_K . grad(l_i)`.
pub fn assemble_corrector_rhs<T: Real>(
    mesh: &Mesh<T>,
    phi: &FieldP1<T>,
    eps_grad: T,
    scheme: Scheme,
) -> Result<Vec<T>> {
    let grads = cell_gradients(mesh, phi)?;
    let mut b = vec![T::zero(); mesh.n_vertices()];
    for (geo, g) in mesh.geometry().iter().zip(&grads) {
        let flux = d_star(scheme, norm(g), eps_grad) * geo.volume();
        for (&i, gl) in geo.vertex_ids().iter().zip(geo.grad_barycentric()) {
            b[i] += flux * dot(g, gl);
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::sign_field;
    use crate::mesh::{build_box_mesh, build_interval_mesh};

    #[test]
    fn stiffness_1d_stencil() {
        let m = build_interval_mesh(0.0f64, 1.0, 4).unwrap();
        let a = assemble_stiffness(&m);
        for i in 1..4 {
            assert!((a.get(i, i - 1) + 4.0).abs() < 1e-12);
            assert!((a.get(i, i) - 8.0).abs() < 1e-12);
            assert!((a.get(i, i + 1) + 4.0).abs() < 1e-12);
        }
        let ones = vec![1.0; 5];
        assert!(a.mul_vec(&ones).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn stiffness_two_triangle_square_by_hand() {
        // Vertices 0:(0,0) 1:(1,0) 2:(0,1) 3:(1,1); triangles (0,1,3) and (0,3,2).
        // Reference gradients: T1: g0=(-1,0) g1=(1,-1) g3=(0,1); T2: g0=(0,-1) g3=(1,0) g2=(-1,1).
        let expected = [
            [1.0, -0.5, -0.5, 0.0],
            [-0.5, 1.0, 0.0, -0.5],
            [-0.5, 0.0, 1.0, -0.5],
            [0.0, -0.5, -0.5, 1.0],
        ];
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[1, 1]).unwrap();
        let a = assemble_stiffness(&m);
        for i in 0..4 {
            for j in 0..4 {
                assert!((a.get(i, j) - expected[i][j]).abs() < 1e-14, "({i},{j})");
            }
        }
        assert!(a.symmetry_defect() < 1e-15);
    }

    #[test]
    fn sign_source_constant() {
        let m = build_interval_mesh(0.0f64, 1.0, 4).unwrap();
        let phi0 = FieldP1::new(vec![1.0; 5]);
        let b = assemble_sign_source(&m, &sign_field(&phi0, 0.0)).unwrap();
        let expected = [1.125, 0.25, 0.25, 0.25, 1.125];
        for (x, e) in b.iter().zip(expected) {
            assert!((x - e).abs() < 1e-15);
        }
        let zero = FieldP1::new(vec![0.0; 5]);
        assert!(assemble_sign_source(&m, &sign_field(&zero, 0.0)).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sign_source_antisymmetric() {
        let m = build_interval_mesh(0.0f64, 1.0, 8).unwrap();
        let phi0 = FieldP1::interpolate(&m, |p| p[0] - 0.5);
        let b = assemble_sign_source(&m, &sign_field(&phi0, 1e-14)).unwrap();
        for i in 0..b.len() {
            assert!((b[i] + b[b.len() - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn corrector_rhs_unit_gradient_matches_stiffness() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[5, 7]).unwrap();
        let a = assemble_stiffness(&m);
        let phi = FieldP1::interpolate(&m, |p| 0.6 * p[0] - 0.8 * p[1] + 0.1);
        let b = assemble_corrector_rhs(&m, &phi, 1e-10, Scheme::Original).unwrap();
        let ap = a.mul_vec(phi.values());
        for (x, y) in b.iter().zip(ap) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn corrector_rhs_zero_field_and_slope_two() {
        let m = build_interval_mesh(0.0f64, 1.0, 10).unwrap();
        let zero = FieldP1::zeros(11);
        let b = assemble_corrector_rhs(&m, &zero, 1e-10, Scheme::Original).unwrap();
        assert!(b.iter().all(|v| *v == 0.0));

        let a = assemble_stiffness(&m);
        let phi = FieldP1::interpolate(&m, |p| 2.0 * p[0]);
        let x = FieldP1::interpolate(&m, |p| p[0]);
        let b = assemble_corrector_rhs(&m, &phi, 1e-10, Scheme::Original).unwrap();
        for (u, v) in b.iter().zip(a.mul_vec(x.values())) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_of_affine_and_constant_fields() {
        let m = build_box_mesh(&[0.0f64; 3], &[1.0; 3], &[3, 2, 2]).unwrap();
        let phi = FieldP1::interpolate(&m, |p| p[0]);
        for g in cell_gradients(&m, &phi).unwrap() {
            assert!((g[0] - 1.0).abs() < 1e-13 && g[1].abs() < 1e-13 && g[2].abs() < 1e-13);
        }
        let c = FieldP1::new(vec![3.5; m.n_vertices()]);
        for g in cell_gradients(&m, &c).unwrap() {
            assert!(norm(&g) < 1e-13);
        }
    }

    #[test]
    fn cone_gradients_near_unit_away_from_apex() {
        let n = 40;
        let h = 1.0 / n as f64;
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[n, n]).unwrap();
        let cone = |p: &Vec3<f64>| ((p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2)).sqrt() - 0.25;
        let phi = FieldP1::interpolate(&m, cone);
        let grads = cell_gradients(&m, &phi).unwrap();
        let mut worst: f64 = 0.0;
        for (c, g) in grads.iter().enumerate() {
            let touches_apex = m.cell(c).iter().any(|&v| {
                let p = m.vertex(v);
                (p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12
            });
            if !touches_apex {
                let r = cone(&m.centroid(c)) + 0.25;
                // Interpolation error of the gradient scales like h / distance-to-apex.
                worst = worst.max((norm(g) - 1.0).abs() * r / h);
            }
        }
        assert!(worst < 1.0, "scaled deviation {worst}");
    }

    #[test]
    fn solve_identity_and_dirichlet_poisson() {
        let id = SparseMatrix::<f64>::identity(4);
        let b = vec![1.0, -2.0, 3.0, 0.5];
        let x = solve_spd(&id, &b, 1e-12).unwrap();
        assert_eq!(x, b);

        let n = 16;
        let m = build_interval_mesh(0.0f64, 1.0, n).unwrap();
        let mut a = assemble_stiffness(&m);
        // f = 2: load = 2 * lumped measure, exact for a constant source.
        let mut b: Vec<f64> = (0..=n).map(|i| if i == 0 || i == n { 1.0 / n as f64 } else { 2.0 / n as f64 }).collect();
        apply_strong_dirichlet(&mut a, &mut b, &[0, n], &[0.0, 0.0]).unwrap();
        let x = solve_spd(&a, &b, 1e-12).unwrap();
        for (i, xi) in x.iter().enumerate() {
            let t = i as f64 / n as f64;
            assert!((xi - t * (1.0 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_neumann_system_reports_failure() {
        let m = build_interval_mesh(0.0f64, 1.0, 8).unwrap();
        let a = assemble_stiffness(&m);
        let b = vec![1.0; 9];
        let r = solve_spd(&a, &b, 1e-12);
        assert!(matches!(r, Err(Error::SolverDiverged { .. }) | Err(Error::NotPositiveDefinite(_))), "{r:?}");
    }

    #[test]
    fn dirichlet_elimination() {
        let m = build_interval_mesh(0.0f64, 1.0, 8).unwrap();
        let mut a = assemble_stiffness(&m);
        let mut b = vec![0.3; 9];
        apply_strong_dirichlet(&mut a, &mut b, &[0, 3], &[0.0, 0.0]).unwrap();
        assert!(a.symmetry_defect() < 1e-15);
        let x = solve_spd(&a, &b, 1e-12).unwrap();
        assert_eq!(x[3], 0.0);

        let mut a = assemble_stiffness(&m);
        let mut b = vec![0.3; 9];
        let vals: Vec<f64> = (0..9).map(|i| i as f64 * 0.1).collect();
        let dofs: Vec<usize> = (0..9).collect();
        apply_strong_dirichlet(&mut a, &mut b, &dofs, &vals).unwrap();
        let x = solve_spd(&a, &b, 1e-12).unwrap();
        assert_eq!(x, vals);

        let mut a = assemble_stiffness(&m);
        let mut b = vec![0.0; 9];
        assert_eq!(
            apply_strong_dirichlet(&mut a, &mut b, &[2, 2], &[0.0, 1.0]),
            Err(Error::ConflictingDirichlet(2))
        );
    }

    #[test]
    fn midpoint_constraint_gives_antisymmetric_predictor() {
        let m = build_interval_mesh(0.0f64, 1.0, 10).unwrap();
        let phi0 = FieldP1::interpolate(&m, |p| p[0] - 0.5);
        let mut a = assemble_stiffness(&m);
        let mut b = assemble_sign_source(&m, &sign_field(&phi0, 1e-14)).unwrap();
        apply_strong_dirichlet(&mut a, &mut b, &[5], &[0.0]).unwrap();
        let x = solve_spd(&a, &b, 1e-12).unwrap();
        for i in 0..x.len() {
            assert!((x[i] + x[10 - i]).abs() < 1e-10);
        }
    }
}
