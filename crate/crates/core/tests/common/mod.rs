#![allow(dead_code)]

use lsredist::cutfem::cut_quadrature;
use lsredist::fem::assemble_stiffness;
use lsredist::redistance::PicardOperator;
use lsredist::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub type Outcome = std::result::Result<(), String>;
pub type Check = fn(&mut TestRunner) -> Outcome;

/// Every randomized invariant, with a case count sized for a desk machine.
pub const PROPERTIES: &[(&str, u32, Check)] = &[
    ("affine interface reconstruction", 64, affine_reconstruction),
    ("facet quadrature exactness", 96, quadrature_exactness),
    ("Nitsche symmetry", 48, nitsche_symmetry),
    ("unit-gradient fixed point", 48, fixed_point),
    ("sign preservation", 12, sign_preservation),
    ("seeded reproducibility", 8, reproducibility),
];

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn unit_box(dim: usize, n: usize) -> Mesh64 {
    build_box_mesh(&vec![0.0; dim], &vec![1.0; dim], &vec![n; dim]).unwrap()
}

fn direction(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim)
        .prop_filter("non-degenerate direction", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|v| {
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / len).collect()
        })
}

/// Random plane through the interior of the unit box: `(dim, unit normal, point, scale)`.
fn plane() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, f64)> {
    (2usize..=3).prop_flat_map(|dim| (Just(dim), direction(dim), prop::collection::vec(0.2..0.8f64, dim), 0.1..10.0f64))
}

fn affine_field(mesh: &Mesh64, normal: &[f64], point: &[f64], scale: f64) -> Field64 {
    Field64::interpolate(mesh, |p| scale * normal.iter().zip(point).enumerate().map(|(k, (a, c))| a * (p[k] - c)).sum::<f64>())
}

fn signed_distance(normal: &[f64], point: &[f64], p: &Vec3<f64>) -> f64 {
    normal.iter().zip(point).enumerate().map(|(k, (a, c))| a * (p[k] - c)).sum()
}

pub fn affine_reconstruction(runner: &mut TestRunner) -> Outcome {
    runner
        .run(&(plane(), 2usize..8), |((dim, normal, point, scale), n)| {
            let mesh = unit_box(dim, n);
            let phi0 = affine_field(&mesh, &normal, &point, scale);
            let iface = reconstruct_interface(&mesh, &phi0).unwrap();
            prop_assert!(!iface.is_empty());
            for cut in iface.cut_cells() {
                for k in 0..dim {
                    prop_assert!((cut.normal[k] - normal[k]).abs() < 1e-12);
                }
                for p in &cut.intersections {
                    prop_assert!(signed_distance(&normal, &point, p).abs() < 1e-12);
                }
                for f in &cut.facets {
                    for q in &f.quadrature {
                        prop_assert!(signed_distance(&normal, &point, &q.point).abs() < 1e-12);
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Complete homogeneous symmetric polynomial of degree `k` in `xs`.
fn complete_homogeneous(xs: &[f64], k: usize) -> f64 {
    // h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &x in xs {
        for j in 1..=k {
            h[j] += x * h[j - 1];
        }
    }
    h[k]
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `int_S l^k` over a simplex `S` with `m` vertices, given `l` at the vertices.
fn simplex_power_integral(measure: f64, values: &[f64], k: usize) -> f64 {
    let m = values.len();
    measure * factorial(k) * factorial(m - 1) / factorial(k + m - 1) * complete_homogeneous(values, k)
}

pub fn quadrature_exactness(runner: &mut TestRunner) -> Outcome {
    let strategy = (plane(), 2usize..5, (1usize..=5).prop_flat_map(|d| (Just(d), 0..=d)), prop::array::uniform3(-1.0..1.0f64), -1.0..1.0f64);
    runner
        .run(&strategy, |((dim, normal, point, scale), n, (degree, k), w, w0)| {
            let mesh = unit_box(dim, n);
            let phi0 = affine_field(&mesh, &normal, &point, scale);
            let iface = cut_quadrature(&reconstruct_interface(&mesh, &phi0).unwrap(), degree).unwrap();
            let lin = |p: &Vec3<f64>| w[0] * p[0] + w[1] * p[1] + w[2] * p[2] + w0;
            for (_, f) in iface.facets() {
                let vals: Vec<f64> = f.vertices().iter().map(lin).collect();
                let exact = simplex_power_integral(f.measure, &vals, k);
                let quad: f64 = f.quadrature.iter().map(|q| q.weight * lin(&q.point).powi(k as i32)).sum();
                let bound = vals.iter().fold(1.0f64, |a, v| a.max(v.abs().powi(k as i32)));
                prop_assert!((quad - exact).abs() <= 1e-12 * f.measure.max(1e-300) * bound + 1e-300, "degree {} power {}: {} vs {}", degree, k, quad, exact);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn nitsche_symmetry(runner: &mut TestRunner) -> Outcome {
    let strategy = ((2usize..=3), prop::array::uniform3(0.3..0.7f64), 0.1..0.25f64, 3usize..10, 1.0..1e4f64);
    runner
        .run(&strategy, |(dim, c, r, n, gamma)| {
            let mesh = unit_box(dim, n);
            let phi0 = Field64::interpolate(&mesh, |p| (0..dim).map(|k| (p[k] - c[k]).powi(2)).sum::<f64>() - r * r);
            let iface = reconstruct_interface(&mesh, &phi0).unwrap();
            let mut a = assemble_stiffness(&mesh);
            cutfem::assemble_nitsche(&mesh, &mut a, &iface, gamma, NitscheScale::CellDiameter).unwrap();
            prop_assert!(a.symmetry_defect() <= 1e-12 * a.max_abs());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Unit-gradient fields whose zero set lies on mesh nodes: a plane or a
/// symmetric V with its kink on a grid line.
pub fn fixed_point(runner: &mut TestRunner) -> Outcome {
    let strategy = (1usize..=3)
        .prop_flat_map(|dim| (Just(dim), 0..dim, 4usize..(if dim == 3 { 7 } else { 13 })))
        .prop_flat_map(|(dim, axis, n)| (Just(dim), Just(axis), Just(n), 1..n, any::<bool>(), prop::option::of(1usize..3)));
    runner
        .run(&strategy, |(dim, axis, n, k, flip, v_half)| {
            let mesh = unit_box(dim, n);
            let h = 1.0 / n as f64;
            let c = k as f64 * h;
            let s = if flip { -1.0 } else { 1.0 };
            let phi = match v_half {
                Some(m) => Field64::interpolate(&mesh, |p| (p[axis] - c).abs() - m as f64 * h),
                None => Field64::interpolate(&mesh, |p| s * (p[axis] - c)),
            };
            let cfg = RedistanceConfig64 { mode: Mode::Fitted, ..Default::default() };
            let op = match PicardOperator::assemble(&mesh, &phi, &cfg) {
                Ok(op) => op,
                Err(Error::NoInterface) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let next = corrector_step(&mesh, &phi, &cfg, &op).unwrap();
            let change = next.values().iter().zip(phi.values()).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
            prop_assert!(change <= 1e-9, "max change {}", change);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
pub enum SignCase {
    Circle([f64; 2], f64),
    Step,
    Star([f64; 2], f64),
}

fn sign_case() -> impl Strategy<Value = SignCase> {
    prop_oneof![
        (prop::array::uniform2(0.4..0.6f64), 0.2..0.3f64).prop_map(|(c, r)| SignCase::Circle(c, r)),
        Just(SignCase::Step),
        (prop::array::uniform2(0.45..0.55f64), 0.0..6.3f64).prop_map(|(c, phase)| SignCase::Star(c, phase)),
    ]
}

/// Interfaces are resolved by at least about five cells across their radius.
pub fn sign_preservation(runner: &mut TestRunner) -> Outcome {
    runner
        .run(&(sign_case(), 20usize..41), |(case, n)| {
            let (ls, gamma) = match case {
                SignCase::Circle(center, radius) => (AnalyticLevelSet::Circle { center, radius }, 1e4),
                SignCase::Step => (AnalyticLevelSet::Step, 10.0),
                SignCase::Star(center, phase) => {
                    (AnalyticLevelSet::Star { center, radius: 0.25, amplitude: 0.1, rays: 8, phase }, 1e3)
                }
            };
            let mesh = unit_box(2, n);
            let phi0 = Field64::interpolate(&mesh, |p| ls.eval(p));
            let cfg = RedistanceConfig64 { gamma_d: gamma, max_iters: 5, stop_eps: 1e-300, ..Default::default() };
            let report = run(&mesh, &phi0, &cfg, None).unwrap();
            prop_assert_eq!(report.initial.sign_mismatches, 0);
            for rec in &report.history {
                prop_assert_eq!(rec.sign_mismatches, 0, "iteration {}", rec.iter);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn reproducibility(runner: &mut TestRunner) -> Outcome {
    runner
        .run(&(any::<u64>(), 8usize..17), |(seed, n)| {
            let mesh = unit_box(2, n);
            let ls = AnalyticLevelSet::arctan_noise(seed);
            let cfg = RedistanceConfig64 { gamma_d: 10.0, max_iters: 5, ..Default::default() };
            let once = || {
                let phi0 = Field64::interpolate(&mesh, |p| ls.eval(p));
                run(&mesh, &phi0, &cfg, None).unwrap()
            };
            let (a, b) = (once(), once());
            let bits = |f: &Field64| f.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&a.field), bits(&b.field));
            prop_assert_eq!(a.history, b.history);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
