//! Simplicial meshes of intervals, rectangles and boxes.
//!
//! Cells are stored as flat vertex-index lists with stride `dim + 1`. All
//! coordinates are padded to three components so that 1D, 2D and 3D meshes
//! share one representation; the unused components are zero.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::{cross, dot, norm, scale, sub, Real, Vec3};

/// Per-cell data needed for P1 assembly.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry<T> {
    volume: T,
    diameter: T,
    n_vertices: usize,
    vertex_ids: [usize; 4],
    grads: [Vec3<T>; 4],
}

impl<T: Real> CellGeometry<T> {
    fn compute(dim: usize, ids: &[usize], coords: &[Vec3<T>]) -> Self {
        let x0 = coords[ids[0]];
        let e: Vec<Vec3<T>> = ids[1..].iter().map(|&v| sub(&coords[v], &x0)).collect();
        let zero = [T::zero(); 3];
        let mut grads = [zero; 4];
        let det = match dim {
            1 => {
                let det = e[0][0];
                grads[1] = [T::one() / det, T::zero(), T::zero()];
                det
            }
            2 => {
                let det = e[0][0] * e[1][1] - e[1][0] * e[0][1];
                grads[1] = [e[1][1] / det, -e[1][0] / det, T::zero()];
                grads[2] = [-e[0][1] / det, e[0][0] / det, T::zero()];
                det
            }
            3 => {
                let c23 = cross(&e[1], &e[2]);
                let det = dot(&e[0], &c23);
                grads[1] = scale(&c23, T::one() / det);
                grads[2] = scale(&cross(&e[2], &e[0]), T::one() / det);
                grads[3] = scale(&cross(&e[0], &e[1]), T::one() / det);
                det
            }
            _ => unreachable!("dimension validated by caller"),
        };
        let mut g0 = zero;
        for g in &grads[1..=dim] {
            for c in 0..3 {
                g0[c] -= g[c];
            }
        }
        grads[0] = g0;

        let factorial = [1.0, 1.0, 2.0, 6.0][dim];
        let mut diameter = T::zero();
        for a in 0..=dim {
            for b in a + 1..=dim {
                diameter = diameter.max(norm(&sub(&coords[ids[a]], &coords[ids[b]])));
            }
        }
        let mut vertex_ids = [0; 4];
        vertex_ids[..=dim].copy_from_slice(ids);
        CellGeometry {
            volume: det.abs() / T::lit(factorial),
            diameter,
            n_vertices: dim + 1,
            vertex_ids,
            grads,
        }
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    /// Longest edge length.
    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids[..self.n_vertices]
    }

    /// Constant gradients of the barycentric coordinates, one per vertex.
    pub fn grad_barycentric(&self) -> &[Vec3<T>] {
        &self.grads[..self.n_vertices]
    }

    /// Barycentric coordinates of `p` with respect to this cell.
    pub fn barycentric(&self, origin: &Vec3<T>, p: &Vec3<T>) -> [T; 4] {
        let d = sub(p, origin);
        let mut out = [T::zero(); 4];
        let mut rest = T::one();
        for k in 1..self.n_vertices {
            out[k] = dot(&self.grads[k], &d);
            rest -= out[k];
        }
        out[0] = rest;
        out
    }
}

/// A facet on the domain boundary with its outward unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFacet<T> {
    vertices: [usize; 3],
    n_vertices: usize,
    pub normal: Vec3<T>,
    pub measure: T,
    pub cell: usize,
}

impl<T> BoundaryFacet<T> {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices[..self.n_vertices]
    }
}

#[derive(Debug, Clone)]
pub struct Mesh<T> {
    dim: usize,
    vertices: Vec<Vec3<T>>,
    cells: Vec<usize>,
    geometry: Vec<CellGeometry<T>>,
    boundary: Vec<BoundaryFacet<T>>,
    h: T,
}

impl<T: Real> Mesh<T> {
    /// Builds a mesh from raw connectivity. Cells with negative orientation
    /// are flipped; degenerate cells are rejected.
    pub fn from_cells(dim: usize, vertices: Vec<Vec3<T>>, mut cells: Vec<usize>, h: T) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidMesh(format!("dimension {dim} not in 1..=3")));
        }
        let stride = dim + 1;
        if cells.is_empty() || cells.len() % stride != 0 {
            return Err(Error::InvalidMesh(format!(
                "cell list length {} is not a positive multiple of {stride}",
                cells.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&v| v >= vertices.len()) {
            return Err(Error::OutOfRange { index: bad, len: vertices.len() });
        }

        let mut geometry = Vec::with_capacity(cells.len() / stride);
        for (c, ids) in cells.chunks_mut(stride).enumerate() {
            if signed_measure(dim, ids, &vertices) < T::zero() {
                ids.swap(dim - 1, dim);
            }
            let geo = CellGeometry::compute(dim, ids, &vertices);
            let scale = geo.diameter.powi(dim as i32);
            if !(geo.volume > T::lit(1e-14) * scale) {
                return Err(Error::DegenerateCell { cell: c, volume: geo.volume.to_f64_lossy() });
            }
            geometry.push(geo);
        }

        let mut mesh = Mesh { dim, vertices, cells, geometry, boundary: Vec::new(), h };
        mesh.boundary = mesh.find_boundary_facets()?;
        Ok(mesh)
    }

    fn find_boundary_facets(&self) -> Result<Vec<BoundaryFacet<T>>> {
        let dim = self.dim;
        let mut faces: Vec<([usize; 3], usize, usize)> = Vec::with_capacity(self.n_cells() * (dim + 1));
        for c in 0..self.n_cells() {
            let ids = self.cell(c);
            for skip in 0..=dim {
                let mut key = [usize::MAX; 3];
                let mut k = 0;
                for (l, &v) in ids.iter().enumerate() {
                    if l != skip {
                        key[k] = v;
                        k += 1;
                    }
                }
                key[..dim].sort_unstable();
                faces.push((key, c, ids[skip]));
            }
        }
        faces.sort_unstable_by_key(|f| (f.0, f.1));

        let mut out = Vec::new();
        let mut i = 0;
        while i < faces.len() {
            let mut j = i + 1;
            while j < faces.len() && faces[j].0 == faces[i].0 {
                j += 1;
            }
            match j - i {
                1 => {
                    let (key, cell, opposite) = faces[i];
                    out.push(self.boundary_facet(key, cell, opposite));
                }
                2 => {}
                n => {
                    return Err(Error::InvalidMesh(format!(
                        "facet {:?} shared by {n} cells",
                        &faces[i].0[..dim]
                    )))
                }
            }
            i = j;
        }
        Ok(out)
    }

    fn boundary_facet(&self, key: [usize; 3], cell: usize, opposite: usize) -> BoundaryFacet<T> {
        let x = |v: usize| self.vertices[v];
        let a = x(key[0]);
        let (mut normal, measure) = match self.dim {
            1 => ([T::one(), T::zero(), T::zero()], T::one()),
            2 => {
                let t = sub(&x(key[1]), &a);
                let len = norm(&t);
                ([t[1] / len, -t[0] / len, T::zero()], len)
            }
            _ => {
                let n = cross(&sub(&x(key[1]), &a), &sub(&x(key[2]), &a));
                let len = norm(&n);
                (scale(&n, T::one() / len), len / T::lit(2.0))
            }
        };
        if dot(&normal, &sub(&x(opposite), &a)) > T::zero() {
            normal = scale(&normal, -T::one());
        }
        BoundaryFacet { vertices: key, n_vertices: self.dim, normal, measure, cell }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_cells(&self) -> usize {
        self.geometry.len()
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vec3<T> {
        &self.vertices[v]
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        let s = self.dim + 1;
        &self.cells[c * s..(c + 1) * s]
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.cells.chunks(self.dim + 1)
    }

    pub fn geometry(&self) -> &[CellGeometry<T>] {
        &self.geometry
    }

    /// Geometry of one cell.
    pub fn cell_geometry(&self, c: usize) -> Result<&CellGeometry<T>> {
        self.geometry.get(c).ok_or(Error::OutOfRange { index: c, len: self.n_cells() })
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet<T>] {
        &self.boundary
    }

    /// Nominal mesh size: the axis-aligned edge length for structured meshes.
    pub fn h(&self) -> T {
        self.h
    }

    pub fn total_volume(&self) -> T {
        self.geometry.iter().map(|g| g.volume).sum()
    }

    pub fn centroid(&self, c: usize) -> Vec3<T> {
        let ids = self.cell(c);
        let mut p = [T::zero(); 3];
        for &v in ids {
            for k in 0..3 {
                p[k] += self.vertices[v][k];
            }
        }
        scale(&p, T::one() / T::from_usize_lossy(ids.len()))
    }

    /// Diameter of the vertex bounding box.
    pub fn bounding_diameter(&self) -> T {
        let mut lo = [T::infinity(); 3];
        let mut hi = [T::neg_infinity(); 3];
        for p in &self.vertices {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let mut d = [T::zero(); 3];
        for k in 0..self.dim {
            d[k] = hi[k] - lo[k];
        }
        norm(&d)
    }

    /// Extracts the submesh formed by `cells`. Returns the submesh and, for each
    /// of its vertices, the index of the originating vertex. Vertex order is
    /// preserved.
    pub fn submesh(&self, cells: &[usize]) -> Result<(Mesh<T>, Vec<usize>)> {
        if cells.is_empty() {
            return Err(Error::InvalidMesh("empty cell selection".into()));
        }
        let mut used = BTreeSet::new();
        for &c in cells {
            if c >= self.n_cells() {
                return Err(Error::OutOfRange { index: c, len: self.n_cells() });
            }
            used.extend(self.cell(c).iter().copied());
        }
        let old_ids: Vec<usize> = used.into_iter().collect();
        let mut new_id = vec![usize::MAX; self.n_vertices()];
        for (n, &o) in old_ids.iter().enumerate() {
            new_id[o] = n;
        }
        let verts = old_ids.iter().map(|&o| self.vertices[o]).collect();
        let conn = cells.iter().flat_map(|&c| self.cell(c).iter().map(|&v| new_id[v])).collect();
        let sub = Mesh::from_cells(self.dim, verts, conn, self.h)?;
        Ok((sub, old_ids))
    }
}

fn signed_measure<T: Real>(dim: usize, ids: &[usize], coords: &[Vec3<T>]) -> T {
    let x0 = coords[ids[0]];
    let e = |k: usize| sub(&coords[ids[k]], &x0);
    match dim {
        1 => e(1)[0],
        2 => {
            let (a, b) = (e(1), e(2));
            a[0] * b[1] - a[1] * b[0]
        }
        _ => dot(&e(1), &cross(&e(2), &e(3))),
    }
}

/// Uniform mesh of `[a, b]` with `n` cells.
pub fn build_interval_mesh<T: Real>(a: T, b: T, n: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidMesh("interval mesh needs at least one cell".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidMesh(format!("interval [{a}, {b}] is empty")));
    }
    let nf = T::from_usize_lossy(n);
    let vertices = (0..=n)
        .map(|i| [a + (b - a) * (T::from_usize_lossy(i) / nf), T::zero(), T::zero()])
        .collect();
    let cells = (0..n).flat_map(|i| [i, i + 1]).collect();
    Mesh::from_cells(1, vertices, cells, (b - a) / nf)
}

/// Structured simplicial mesh of an axis-aligned box.
///
/// Squares are split along the lower-left to upper-right diagonal; cubes use
/// the six-tetrahedron Kuhn split around the main diagonal. The dimension is
/// the length of `lower`.
pub fn build_box_mesh<T: Real>(lower: &[T], upper: &[T], n_per_axis: &[usize]) -> Result<Mesh<T>> {
    let dim = lower.len();
    if upper.len() != dim || n_per_axis.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: upper.len().min(n_per_axis.len()) });
    }
    if dim == 1 {
        return build_interval_mesh(lower[0], upper[0], n_per_axis[0]);
    }
    if !(2..=3).contains(&dim) {
        return Err(Error::InvalidMesh(format!("box dimension {dim} not in 1..=3")));
    }
    for k in 0..dim {
        if n_per_axis[k] == 0 {
            return Err(Error::InvalidMesh(format!("axis {k} has zero subdivisions")));
        }
        if !(lower[k] < upper[k]) {
            return Err(Error::InvalidMesh(format!("axis {k} has empty extent")));
        }
    }

    let counts: Vec<usize> = (0..3).map(|k| if k < dim { n_per_axis[k] + 1 } else { 1 }).collect();
    let index = |i: usize, j: usize, k: usize| i + counts[0] * (j + counts[1] * k);
    let coord = |axis: usize, i: usize| {
        let n = T::from_usize_lossy(n_per_axis[axis]);
        lower[axis] + (upper[axis] - lower[axis]) * (T::from_usize_lossy(i) / n)
    };

    let mut vertices = Vec::with_capacity(counts.iter().product());
    for k in 0..counts[2] {
        for j in 0..counts[1] {
            for i in 0..counts[0] {
                let z = if dim == 3 { coord(2, k) } else { T::zero() };
                vertices.push([coord(0, i), coord(1, j), z]);
            }
        }
    }

    let mut cells = Vec::new();
    if dim == 2 {
        for j in 0..n_per_axis[1] {
            for i in 0..n_per_axis[0] {
                let v00 = index(i, j, 0);
                let v10 = index(i + 1, j, 0);
                let v01 = index(i, j + 1, 0);
                let v11 = index(i + 1, j + 1, 0);
                cells.extend_from_slice(&[v00, v10, v11, v00, v11, v01]);
            }
        }
    } else {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for k in 0..n_per_axis[2] {
            for j in 0..n_per_axis[1] {
                for i in 0..n_per_axis[0] {
                    for perm in PERMS {
                        let mut pos = [i, j, k];
                        cells.push(index(pos[0], pos[1], pos[2]));
                        for axis in perm {
                            pos[axis] += 1;
                            cells.push(index(pos[0], pos[1], pos[2]));
                        }
                    }
                }
            }
        }
    }

    let h = (0..dim)
        .map(|k| (upper[k] - lower[k]) / T::from_usize_lossy(n_per_axis[k]))
        .fold(T::zero(), T::max);
    Mesh::from_cells(dim, vertices, cells, h)
}
