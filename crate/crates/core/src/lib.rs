//! Finite element redistancing of level-set functions.
//!
//! A level-set function `phi0` on a simplicial mesh is turned into an
//! approximate signed distance function with the same zero set. A linear
//! predictor solve is followed by Picard iterations on the Eikonal
//! least-squares functional, with the interface condition imposed either on
//! mesh nodes or weakly on a reconstructed interface cutting through cells.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases fix
//! the scalar to `f64`.
//!
//! ```
//! use lsredist::{build_box_mesh, run, AnalyticLevelSet, Field64, RedistanceConfig64};
//!
//! let mesh = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[16, 16]).unwrap();
//! let case = AnalyticLevelSet::circle();
//! let phi0 = Field64::interpolate(&mesh, |p| case.eval(p));
//! let report = run(&mesh, &phi0, &RedistanceConfig64::default(), None).unwrap();
//! assert!(report.last().eikonal_error < report.initial.eikonal_error);
//! ```

pub mod cutfem;
pub mod error;
pub mod fem;
pub mod levelset;
pub mod mesh;
pub mod metrics;
pub mod redistance;
pub mod scalar;
pub mod vtk;

pub use cutfem::{
    classify_cells, reconstruct_interface, reconstruct_interface_with_degree, CellTag, CutInterface, NitscheScale,
};
pub use error::{Error, Result};
pub use fem::{FieldP1, SparseMatrix};
pub use levelset::{sign_field, AnalyticLevelSet, SignField};
pub use mesh::{build_box_mesh, build_interval_mesh, Mesh};
pub use metrics::{convergence_order, eikonal_error, interface_error, l2_error, ErrorReport};
pub use redistance::{
    corrector_step, d_star, narrow_band_run, run, run_1d_comparison, solve_predictor, Comparison1d, IterationRecord,
    Mode, PicardOperator, RedistanceConfig, RedistanceReport, Scheme, StopRule,
};
pub use scalar::{Real, Vec3};

pub type Mesh64 = Mesh<f64>;
pub type Field64 = FieldP1<f64>;
pub type SparseMatrix64 = SparseMatrix<f64>;
pub type CutInterface64 = CutInterface<f64>;
pub type RedistanceConfig64 = RedistanceConfig<f64>;
pub type RedistanceReport64 = RedistanceReport<f64>;
pub type LevelSet64 = AnalyticLevelSet<f64>;
