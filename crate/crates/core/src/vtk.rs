//! Legacy ASCII VTK output.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::cutfem::CutInterface;
use crate::fem::FieldP1;
use crate::mesh::Mesh;
use crate::scalar::Real;

fn points<T: Real>(out: &mut String, pts: &[[T; 3]]) {
    let _ = writeln!(out, "POINTS {} double", pts.len());
    for p in pts {
        let _ = writeln!(out, "{:e} {:e} {:e}", p[0].to_f64_lossy(), p[1].to_f64_lossy(), p[2].to_f64_lossy());
    }
}

/// Unstructured grid with one point-data scalar array per `(name, field)` pair.
pub fn mesh_to_vtk<T: Real>(mesh: &Mesh<T>, fields: &[(&str, &FieldP1<T>)]) -> String {
    let mut out = String::from("# vtk DataFile Version 3.0\nlsredist\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    points(&mut out, mesh.vertices());
    let k = mesh.dim() + 1;
    let _ = writeln!(out, "CELLS {} {}", mesh.n_cells(), mesh.n_cells() * (k + 1));
    for ids in mesh.cells() {
        let _ = write!(out, "{k}");
        for v in ids {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let cell_type = match mesh.dim() {
        1 => 3,
        2 => 5,
        _ => 10,
    };
    let _ = writeln!(out, "CELL_TYPES {}", mesh.n_cells());
    for _ in 0..mesh.n_cells() {
        let _ = writeln!(out, "{cell_type}");
    }
    if !fields.is_empty() {
        let _ = writeln!(out, "POINT_DATA {}", mesh.n_vertices());
        for (name, f) in fields {
            let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for v in f.values() {
                let _ = writeln!(out, "{:e}", v.to_f64_lossy());
            }
        }
    }
    out
}

/// Reconstructed interface as polydata: points in 1D, segments in 2D, triangles in 3D.
pub fn interface_to_vtk<T: Real>(iface: &CutInterface<T>) -> String {
    let mut pts = Vec::new();
    let mut polys = Vec::new();
    for (_, facet) in iface.facets() {
        let start = pts.len();
        pts.extend_from_slice(facet.vertices());
        polys.push((start..pts.len()).collect::<Vec<_>>());
    }
    let mut out = String::from("# vtk DataFile Version 3.0\nlsredist interface\nASCII\nDATASET POLYDATA\n");
    points(&mut out, &pts);
    let section = match iface.dim() {
        1 => "VERTICES",
        2 => "LINES",
        _ => "POLYGONS",
    };
    let size: usize = polys.iter().map(|p| p.len() + 1).sum();
    let _ = writeln!(out, "{section} {} {size}", polys.len());
    for p in &polys {
        let _ = write!(out, "{}", p.len());
        for v in p {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_vtk(path: &std::path::Path, contents: &str) -> io::Result<()> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(contents.as_bytes())?;
    f.flush()
}
