//! Unfitted interface handling: cell classification against the zero level
//! set, piecewise-linear interface reconstruction, mapped surface quadrature
//! and symmetric Nitsche terms for a homogeneous Dirichlet condition.

use crate::error::{Error, Result};
use crate::fem::{FieldP1, SparseMatrix};
use crate::mesh::Mesh;
use crate::scalar::{cross, dot, lerp, norm, scale, sub, Real, Vec3};

/// Default quadrature degree on interface facets.
pub const DEFAULT_DEGREE: usize = 2;

const SNAP_FACTOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellTag {
    Inside,
    Outside,
    Cut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellClassification {
    tags: Vec<CellTag>,
}

impl CellClassification {
    pub fn tags(&self) -> &[CellTag] {
        &self.tags
    }

    pub fn tag(&self, c: usize) -> CellTag {
        self.tags[c]
    }

    pub fn count(&self, tag: CellTag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }

    pub fn cut_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.tags.iter().enumerate().filter(|(_, &t)| t == CellTag::Cut).map(|(c, _)| c)
    }
}

/// Values below this magnitude are treated as lying on the interface.
pub fn snap_tolerance<T: Real>(phi0: &FieldP1<T>) -> T {
    T::lit(SNAP_FACTOR) * phi0.max_abs()
}

/// Level-set values with near-zero entries moved to `+snap_tolerance`, so
/// that no vertex lies exactly on the interface.
pub fn snap_levels<T: Real>(phi0: &FieldP1<T>) -> Vec<T> {
    let tol = snap_tolerance(phi0);
    phi0.values().iter().map(|&v| if v.abs() < tol { tol } else { v }).collect()
}

fn tag_of<T: Real>(vals: impl Iterator<Item = T>) -> CellTag {
    let (mut neg, mut pos) = (false, false);
    for v in vals {
        neg |= v < T::zero();
        pos |= v > T::zero();
    }
    match (neg, pos) {
        (true, true) => CellTag::Cut,
        (true, false) => CellTag::Inside,
        _ => CellTag::Outside,
    }
}

pub fn classify_cells<T: Real>(mesh: &Mesh<T>, phi0: &FieldP1<T>) -> Result<CellClassification> {
    phi0.check(mesh)?;
    let snapped = snap_levels(phi0);
    Ok(CellClassification { tags: mesh.cells().map(|ids| tag_of(ids.iter().map(|&v| snapped[v]))).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint<T> {
    pub point: Vec3<T>,
    pub weight: T,
}

/// One simplicial piece of the reconstructed interface inside a cut cell:
/// a point (1D), a segment (2D) or a triangle (3D).
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceFacet<T> {
    vertices: [Vec3<T>; 3],
    n_vertices: usize,
    pub measure: T,
    pub quadrature: Vec<QuadraturePoint<T>>,
}

impl<T: Real> InterfaceFacet<T> {
    fn new(points: &[Vec3<T>]) -> Self {
        let mut vertices = [[T::zero(); 3]; 3];
        vertices[..points.len()].copy_from_slice(points);
        let measure = match points.len() {
            1 => T::one(),
            2 => norm(&sub(&points[1], &points[0])),
            _ => norm(&cross(&sub(&points[1], &points[0]), &sub(&points[2], &points[0]))) / T::lit(2.0),
        };
        InterfaceFacet { vertices, n_vertices: points.len(), measure, quadrature: Vec::new() }
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices[..self.n_vertices]
    }

    pub fn centroid(&self) -> Vec3<T> {
        let mut c = [T::zero(); 3];
        for v in self.vertices() {
            for k in 0..3 {
                c[k] += v[k];
            }
        }
        scale(&c, T::one() / T::from_usize_lossy(self.n_vertices))
    }
}

/// Interface reconstruction inside one cut cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CutCell<T> {
    pub cell: usize,
    /// Edge intersection points.
    pub intersections: Vec<Vec3<T>>,
    /// Unit normal pointing from the negative to the positive side.
    pub normal: Vec3<T>,
    pub facets: Vec<InterfaceFacet<T>>,
}

/// Piecewise-linear reconstruction of the zero level set with surface quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct CutInterface<T> {
    dim: usize,
    degree: usize,
    cells: Vec<CutCell<T>>,
}

impl<T: Real> CutInterface<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cut_cells(&self) -> &[CutCell<T>] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn facets(&self) -> impl Iterator<Item = (usize, &InterfaceFacet<T>)> + '_ {
        self.cells.iter().flat_map(|c| c.facets.iter().map(move |f| (c.cell, f)))
    }

    /// Sum of facet measures; in 1D the number of interface points.
    pub fn total_measure(&self) -> T {
        self.facets().map(|(_, f)| f.measure).sum()
    }

    /// `int_Gamma f ds` with the attached quadrature; `f` receives the owning cell.
    pub fn integrate(&self, mut f: impl FnMut(usize, &Vec3<T>) -> T) -> T {
        let mut s = T::zero();
        for (cell, facet) in self.facets() {
            for q in &facet.quadrature {
                s += q.weight * f(cell, &q.point);
            }
        }
        s
    }
}

/// Unit normal `grad(phi0) / |grad(phi0)|` on one cell.
pub fn interface_normal<T: Real>(mesh: &Mesh<T>, cell: usize, phi0: &FieldP1<T>) -> Result<Vec3<T>> {
    phi0.check(mesh)?;
    let geo = mesh.cell_geometry(cell)?;
    let values = phi0.values();
    cell_normal(geo.vertex_ids().iter().map(|&v| values[v]), geo.grad_barycentric()).ok_or(Error::ZeroGradientCutCell(cell))
}

fn cell_normal<T: Real>(values: impl Iterator<Item = T>, grads: &[Vec3<T>]) -> Option<Vec3<T>> {
    let mut g = [T::zero(); 3];
    for (v, gl) in values.zip(grads) {
        for k in 0..3 {
            g[k] += v * gl[k];
        }
    }
    let len = norm(&g);
    (len > T::zero() && len.is_finite()).then(|| scale(&g, T::one() / len))
}

/// Reconstructs the interface of `phi0` with degree-[`DEFAULT_DEGREE`] quadrature.
pub fn reconstruct_interface<T: Real>(mesh: &Mesh<T>, phi0: &FieldP1<T>) -> Result<CutInterface<T>> {
    reconstruct_interface_with_degree(mesh, phi0, DEFAULT_DEGREE)
}

pub fn reconstruct_interface_with_degree<T: Real>(
    mesh: &Mesh<T>,
    phi0: &FieldP1<T>,
    degree: usize,
) -> Result<CutInterface<T>> {
    phi0.check(mesh)?;
    let dim = mesh.dim();
    let snapped = snap_levels(phi0);
    let mut cells = Vec::new();
    for (c, geo) in mesh.geometry().iter().enumerate() {
        let ids = geo.vertex_ids();
        let vals: Vec<T> = ids.iter().map(|&v| snapped[v]).collect();
        if tag_of(vals.iter().copied()) != CellTag::Cut {
            continue;
        }
        let normal = cell_normal(vals.iter().copied(), geo.grad_barycentric()).ok_or(Error::ZeroGradientCutCell(c))?;
        let crossing = |a: usize, b: usize| {
            let t = vals[a] / (vals[a] - vals[b]);
            lerp(mesh.vertex(ids[a]), mesh.vertex(ids[b]), t)
        };

        let (intersections, pieces) = if dim == 3 {
            let neg: Vec<usize> = (0..4).filter(|&l| vals[l] < T::zero()).collect();
            let pos: Vec<usize> = (0..4).filter(|&l| vals[l] > T::zero()).collect();
            match (neg.len(), pos.len()) {
                (1, 3) | (3, 1) => {
                    let (lone, rest) = if neg.len() == 1 { (neg[0], pos) } else { (pos[0], neg) };
                    let pts: Vec<Vec3<T>> = rest.iter().map(|&o| crossing(lone, o)).collect();
                    (pts.clone(), vec![pts])
                }
                _ => {
                    let (a, b, c2, d) = (neg[0], neg[1], pos[0], pos[1]);
                    let quad = [crossing(a, c2), crossing(a, d), crossing(b, d), crossing(b, c2)];
                    let d02 = norm(&sub(&quad[2], &quad[0]));
                    let d13 = norm(&sub(&quad[3], &quad[1]));
                    let tris = if d02 <= d13 {
                        vec![vec![quad[0], quad[1], quad[2]], vec![quad[0], quad[2], quad[3]]]
                    } else {
                        vec![vec![quad[1], quad[2], quad[3]], vec![quad[1], quad[3], quad[0]]]
                    };
                    (quad.to_vec(), tris)
                }
            }
        } else {
            let mut pts = Vec::with_capacity(2);
            for a in 0..=dim {
                for b in a + 1..=dim {
                    if (vals[a] < T::zero()) != (vals[b] < T::zero()) {
                        pts.push(crossing(a, b));
                    }
                }
            }
            (pts.clone(), vec![pts])
        };

        let mut facets = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let mut f = InterfaceFacet::new(&piece);
            f.quadrature = facet_rule(&f, degree)?;
            facets.push(f);
        }
        cells.push(CutCell { cell: c, intersections, normal, facets });
    }
    Ok(CutInterface { dim, degree, cells })
}

/// Returns a copy of `interface` with a degree-`degree` Gauss rule mapped onto each facet.
pub fn cut_quadrature<T: Real>(interface: &CutInterface<T>, degree: usize) -> Result<CutInterface<T>> {
    let mut out = interface.clone();
    out.degree = degree;
    for cell in &mut out.cells {
        for f in &mut cell.facets {
            f.quadrature = facet_rule(f, degree)?;
        }
    }
    if out.cells.is_empty() {
        // Validate the degree even without facets.
        reference_rule(interface.dim.saturating_sub(1) + 1, degree)?;
    }
    Ok(out)
}

fn facet_rule<T: Real>(facet: &InterfaceFacet<T>, degree: usize) -> Result<Vec<QuadraturePoint<T>>> {
    let verts = facet.vertices();
    Ok(reference_rule(verts.len(), degree)?
        .into_iter()
        .map(|(bary, w)| {
            let mut p = [T::zero(); 3];
            for (v, &b) in verts.iter().zip(bary.iter()) {
                for k in 0..3 {
                    p[k] += T::lit(b) * v[k];
                }
            }
            QuadraturePoint { point: p, weight: T::lit(w) * facet.measure }
        })
        .collect())
}

/// Gauss rules on the reference point, segment and triangle in barycentric
/// coordinates, weights normalized to sum to one.
fn reference_rule(n_vertices: usize, degree: usize) -> Result<Vec<([f64; 3], f64)>> {
    let unsupported = Error::UnsupportedQuadrature { degree, dim: n_vertices - 1 };
    if degree == 0 {
        return Err(unsupported);
    }
    let rule = match n_vertices {
        1 => vec![([1.0, 0.0, 0.0], 1.0)],
        2 => {
            let pts: Vec<(f64, f64)> = match degree {
                1 => vec![(0.5, 1.0)],
                2 | 3 => {
                    let d = 0.5 / 3f64.sqrt();
                    vec![(0.5 - d, 0.5), (0.5 + d, 0.5)]
                }
                4 | 5 => {
                    let d = 0.5 * 0.6f64.sqrt();
                    vec![(0.5 - d, 5.0 / 18.0), (0.5, 4.0 / 9.0), (0.5 + d, 5.0 / 18.0)]
                }
                _ => return Err(unsupported),
            };
            pts.into_iter().map(|(t, w)| ([1.0 - t, t, 0.0], w)).collect()
        }
        3 => {
            let orbit = |a: f64, b: f64, w: f64| vec![([a, b, b], w), ([b, a, b], w), ([b, b, a], w)];
            match degree {
                1 => vec![([1.0 / 3.0; 3], 1.0)],
                2 => orbit(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0),
                3 | 4 => {
                    let mut r = orbit(0.108_103_018_168_070, 0.445_948_490_915_965, 0.223_381_589_678_011);
                    r.extend(orbit(0.816_847_572_980_459, 0.091_576_213_509_771, 0.109_951_743_655_322));
                    r
                }
                5 => {
                    let mut r = vec![([1.0 / 3.0; 3], 0.225)];
                    r.extend(orbit(0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506));
                    r.extend(orbit(0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827));
                    r
                }
                _ => return Err(unsupported),
            }
        }
        _ => return Err(unsupported),
    };
    Ok(rule)
}

/// Mesh-size scaling of the Nitsche penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NitscheScale<T> {
    /// Diameter of the cut cell.
    CellDiameter,
    Global(T),
}

/// Adds the symmetric Nitsche terms for `u = 0` on the interface:
/// `-(grad u . n) v - (grad v . n) u + (gamma_d / h) u v` integrated over
/// every interface facet. Homogeneous data leaves the load vector unchanged.
pub fn assemble_nitsche<T: Real>(
    mesh: &Mesh<T>,
    a: &mut SparseMatrix<T>,
    interface: &CutInterface<T>,
    gamma_d: T,
    scale_h: NitscheScale<T>,
) -> Result<()> {
    if !(gamma_d > T::zero()) {
        return Err(Error::InvalidConfig(format!("gamma_D must be positive, got {gamma_d}")));
    }
    if a.n() != mesh.n_vertices() {
        return Err(Error::DimensionMismatch { expected: mesh.n_vertices(), found: a.n() });
    }
    for cut in interface.cut_cells() {
        let geo = mesh.cell_geometry(cut.cell)?;
        let h = match scale_h {
            NitscheScale::CellDiameter => geo.diameter(),
            NitscheScale::Global(h) => h,
        };
        if !(h > T::zero()) {
            return Err(Error::InvalidConfig(format!("Nitsche mesh size must be positive, got {h}")));
        }
        let penalty = gamma_d / h;
        let ids = geo.vertex_ids();
        let dn: Vec<T> = geo.grad_barycentric().iter().map(|g| dot(g, &cut.normal)).collect();
        let origin = *mesh.vertex(ids[0]);
        for facet in &cut.facets {
            for q in &facet.quadrature {
                let lam = geo.barycentric(&origin, &q.point);
                for i in 0..ids.len() {
                    for j in 0..ids.len() {
                        let v = -dn[j] * lam[i] - dn[i] * lam[j] + penalty * lam[i] * lam[j];
                        a.add_in_pattern(ids[i], ids[j], q.weight * v);
                    }
                }
            }
        }
    }
    Ok(())
}
