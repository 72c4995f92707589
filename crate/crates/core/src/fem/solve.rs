//! Jacobi-preconditioned conjugate gradients and symmetric Dirichlet elimination.

use std::collections::BTreeMap;

use super::SparseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default relative residual target.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Outcome of a successful solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

fn dotv<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Solves `A x = b` for symmetric positive definite `A` from a zero start.
pub fn solve_spd<T: Real>(a: &SparseMatrix<T>, b: &[T], tol: T) -> Result<Vec<T>> {
    let mut x = vec![T::zero(); a.n()];
    solve_spd_from(a, b, &mut x, tol, 10 * a.n().max(1))?;
    Ok(x)
}

/// Preconditioned conjugate gradients starting from the contents of `x`.
///
/// Stops once the true relative residual `|b - A x| / |b|` is at most `tol`.
/// The recursively updated residual drives the iteration; on apparent
/// convergence the true residual is recomputed and the method restarted from
/// it if it has drifted. Fails after `max_iter` total iterations.
pub fn solve_spd_from<T: Real>(
    a: &SparseMatrix<T>,
    b: &[T],
    x: &mut [T],
    tol: T,
    max_iter: usize,
) -> Result<SolveStats> {
    let n = a.n();
    if b.len() != n || x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len().min(x.len()) });
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidConfig(format!("solver tolerance must be positive, got {tol}")));
    }
    let bnorm = norm2(b);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(SolveStats { iterations: 0, relative_residual: 0.0 });
    }

    let mut inv_diag = Vec::with_capacity(n);
    for d in a.diagonal() {
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite(d.to_f64_lossy()));
        }
        inv_diag.push(T::one() / d);
    }

    let target = tol * bnorm;
    let mut r = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut q = vec![T::zero(); n];
    let mut iterations = 0;

    loop {
        a.mul_vec_into(x, &mut q);
        for i in 0..n {
            r[i] = b[i] - q[i];
        }
        let rnorm = norm2(&r);
        if rnorm <= target {
            return Ok(SolveStats { iterations, relative_residual: (rnorm / bnorm).to_f64_lossy() });
        }
        if iterations >= max_iter {
            return Err(Error::SolverDiverged { iterations, residual: (rnorm / bnorm).to_f64_lossy() });
        }

        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        p.copy_from_slice(&z);
        let mut rz = dotv(&r, &z);
        // Inner loop on the recursive residual; the outer loop re-checks the true one.
        while iterations < max_iter {
            iterations += 1;
            a.mul_vec_into(&p, &mut q);
            let pq = dotv(&p, &q);
            if !(pq > T::zero()) {
                return Err(Error::NotPositiveDefinite(pq.to_f64_lossy()));
            }
            let alpha = rz / pq;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            if norm2(&r) <= target * T::lit(0.5) {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_new = dotv(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
}

/// Imposes `x[dofs[k]] = values[k]` by symmetric elimination.
///
/// Constrained rows and columns are zeroed with a unit diagonal; the
/// eliminated column contributions move to `b`. Repeated dofs must carry
/// identical values.
pub fn apply_strong_dirichlet<T: Real>(
    a: &mut SparseMatrix<T>,
    b: &mut [T],
    dofs: &[usize],
    values: &[T],
) -> Result<()> {
    let n = a.n();
    if dofs.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: dofs.len(), found: values.len() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let mut fixed: BTreeMap<usize, T> = BTreeMap::new();
    for (&d, &v) in dofs.iter().zip(values) {
        if d >= n {
            return Err(Error::OutOfRange { index: d, len: n });
        }
        if let Some(&prev) = fixed.get(&d) {
            if prev != v {
                return Err(Error::ConflictingDirichlet(d));
            }
        }
        fixed.insert(d, v);
    }
    let mut mask = vec![false; n];
    for &d in fixed.keys() {
        mask[d] = true;
    }

    for (&d, &g) in &fixed {
        if g == T::zero() {
            continue;
        }
        let cols: Vec<usize> = a.row(d).0.to_vec();
        for j in cols {
            if !mask[j] {
                b[j] -= a.get(j, d) * g;
            }
        }
    }
    for i in 0..n {
        let row_fixed = mask[i];
        let (cols, vals) = a.row_mut(i);
        for (&j, v) in cols.iter().zip(vals.iter_mut()) {
            if row_fixed || mask[j] {
                *v = if i == j { T::one() } else { T::zero() };
            }
        }
    }
    for (&d, &g) in &fixed {
        b[d] = g;
    }
    Ok(())
}
