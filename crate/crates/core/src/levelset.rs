//! Analytic initial level sets for the benchmark cases and their exact
//! signed distance functions, plus vertex sign extraction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fem::FieldP1;
use crate::scalar::{Real, Vec3};

/// Initial level-set functions. All are negative inside the region they describe.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticLevelSet<T> {
    /// Three slopes on `[0, 1]`: `0.6x - 0.25`, `0.3x - 0.15`, then constant `0.05`.
    PiecewiseAffine1d,
    /// `x^2 - T^2` on `[-A, A]`, negative on `(-T, T)`.
    Interval1d { half_width: T, interface: T },
    /// Paraboloid `|p - c|^2 - r^2` on the unit square.
    Circle { center: [T; 2], radius: T },
    /// `+1` for `x < 0.5`, `0` at `x = 0.5`, `-1` for `x > 0.5`.
    Step,
    /// `arctan(10 (x - 0.5)) + xi(p)` with Gaussian point noise `xi`.
    ArctanNoise { amplitude: T, seed: u64 },
    /// `(rho - r - a cos(n theta + phase)) / 2` in polar coordinates about `center`.
    Star { center: [T; 2], radius: T, amplitude: T, rays: u32, phase: T },
    /// `(sqrt(x^2 + y^2) - R)^2 + z^2 - r^2` on `[-L/2, L/2]^3`.
    Torus { major: T, minor: T, side: T },
}

impl<T: Real> AnalyticLevelSet<T> {
    pub fn circle() -> Self {
        AnalyticLevelSet::Circle { center: [T::lit(0.5), T::lit(0.5)], radius: T::lit(0.25) }
    }

    pub fn interval_1d() -> Self {
        AnalyticLevelSet::Interval1d { half_width: T::one(), interface: T::lit(0.5) }
    }

    pub fn arctan_noise(seed: u64) -> Self {
        AnalyticLevelSet::ArctanNoise { amplitude: T::lit(0.02), seed }
    }

    pub fn star() -> Self {
        AnalyticLevelSet::Star {
            center: [T::lit(0.5), T::lit(0.5)],
            radius: T::lit(0.25),
            amplitude: T::lit(0.1),
            rays: 8,
            phase: T::lit(2.0),
        }
    }

    pub fn torus() -> Self {
        AnalyticLevelSet::Torus { major: T::lit(0.75), minor: T::lit(0.25), side: T::lit(2.5) }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            AnalyticLevelSet::PiecewiseAffine1d => "piecewise_affine_1d",
            AnalyticLevelSet::Interval1d { .. } => "interval_1d",
            AnalyticLevelSet::Circle { .. } => "circle",
            AnalyticLevelSet::Step => "step",
            AnalyticLevelSet::ArctanNoise { .. } => "arctan_noise",
            AnalyticLevelSet::Star { .. } => "star",
            AnalyticLevelSet::Torus { .. } => "torus",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnalyticLevelSet::PiecewiseAffine1d | AnalyticLevelSet::Interval1d { .. } => 1,
            AnalyticLevelSet::Torus { .. } => 3,
            _ => 2,
        }
    }

    /// Default computational domain as `(lower, upper)` corners.
    pub fn domain(&self) -> (Vec<T>, Vec<T>) {
        match self {
            AnalyticLevelSet::PiecewiseAffine1d => (vec![T::zero()], vec![T::one()]),
            AnalyticLevelSet::Interval1d { half_width, .. } => (vec![-*half_width], vec![*half_width]),
            AnalyticLevelSet::Torus { side, .. } => {
                let s = *side / T::lit(2.0);
                (vec![-s; 3], vec![s; 3])
            }
            _ => (vec![T::zero(); 2], vec![T::one(); 2]),
        }
    }

    pub fn eval(&self, p: &Vec3<T>) -> T {
        let half = T::lit(0.5);
        let (x, y, z) = (p[0], p[1], p[2]);
        match self {
            AnalyticLevelSet::PiecewiseAffine1d => {
                if x <= T::one() / T::lit(3.0) {
                    T::lit(0.6) * x - T::lit(0.25)
                } else if x <= T::lit(2.0) / T::lit(3.0) {
                    T::lit(0.3) * x - T::lit(0.15)
                } else {
                    T::lit(0.05)
                }
            }
            AnalyticLevelSet::Interval1d { interface, .. } => x * x - *interface * *interface,
            AnalyticLevelSet::Circle { center, radius } => {
                (x - center[0]).powi(2) + (y - center[1]).powi(2) - radius.powi(2)
            }
            AnalyticLevelSet::Step => {
                if x > half {
                    -T::one()
                } else if x < half {
                    T::one()
                } else {
                    T::zero()
                }
            }
            AnalyticLevelSet::ArctanNoise { amplitude, seed } => {
                (T::lit(10.0) * (x - half)).atan() + *amplitude * point_noise(p, *seed)
            }
            AnalyticLevelSet::Star { center, radius, amplitude, rays, phase } => {
                let (dx, dy) = (x - center[0], y - center[1]);
                let rho = (dx * dx + dy * dy).sqrt();
                let theta = dy.atan2(dx);
                let n = T::lit(*rays as f64);
                half * (rho - *radius - *amplitude * (n * theta + *phase).cos())
            }
            AnalyticLevelSet::Torus { major, minor, .. } => {
                let q = (x * x + y * y).sqrt() - *major;
                q * q + z * z - *minor * *minor
            }
        }
    }

    /// Exact signed distance to the zero set, where it is known in closed form.
    ///
    /// For `ArctanNoise` this is the distance to the unperturbed interface
    /// `x = 0.5`; the star has no closed form.
    pub fn exact_sdf(&self, p: &Vec3<T>) -> Option<T> {
        let half = T::lit(0.5);
        let (x, y, z) = (p[0], p[1], p[2]);
        match self {
            AnalyticLevelSet::PiecewiseAffine1d => Some(x - half),
            AnalyticLevelSet::Interval1d { interface, .. } => Some(x.abs() - *interface),
            AnalyticLevelSet::Circle { center, radius } => {
                Some(((x - center[0]).powi(2) + (y - center[1]).powi(2)).sqrt() - *radius)
            }
            AnalyticLevelSet::Step => Some(half - x),
            AnalyticLevelSet::ArctanNoise { .. } => Some(x - half),
            AnalyticLevelSet::Star { .. } => None,
            AnalyticLevelSet::Torus { major, minor, .. } => {
                let q = (x * x + y * y).sqrt() - *major;
                Some((q * q + z * z).sqrt() - *minor)
            }
        }
    }

    pub fn has_exact_sdf(&self) -> bool {
        self.exact_sdf(&[T::zero(); 3]).is_some()
    }
}

/// Standard normal sample determined by the point coordinates and `seed`.
fn point_noise<T: Real>(p: &Vec3<T>, seed: u64) -> T {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for c in p {
        h = splitmix64(h ^ c.to_f64_lossy().to_bits());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    let s: f64 = StandardNormal.sample(&mut rng);
    T::lit(s)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-vertex sign of the initial level set, in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignField(Vec<i8>);

impl SignField {
    pub fn new(signs: Vec<i8>) -> Self {
        debug_assert!(signs.iter().all(|s| (-1..=1).contains(s)));
        SignField(signs)
    }

    #[inline]
    pub fn get(&self, v: usize) -> i8 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when both strict signs occur.
    pub fn has_interface(&self) -> bool {
        self.0.contains(&-1) && self.0.contains(&1)
    }
}

/// `sign(phi0)` at each vertex, with `|phi0| <= tol_zero` mapped to zero.
pub fn sign_field<T: Real>(phi0: &FieldP1<T>, tol_zero: T) -> SignField {
    SignField(
        phi0.values()
            .iter()
            .map(|&v| {
                if v > tol_zero {
                    1
                } else if v < -tol_zero {
                    -1
                } else {
                    0
                }
            })
            .collect(),
    )
}

/// Default zero tolerance for [`sign_field`]: `1e-14` times the domain diameter.
pub fn default_tol_zero<T: Real>(domain_diameter: T) -> T {
    T::lit(1e-14) * domain_diameter
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_box_mesh, build_interval_mesh};

    fn p2(x: f64, y: f64) -> Vec3<f64> {
        [x, y, 0.0]
    }

    #[test]
    fn circle_values() {
        let c = AnalyticLevelSet::<f64>::circle();
        assert_eq!(c.eval(&p2(0.5, 0.5)), -0.0625);
        assert_eq!(c.eval(&p2(0.75, 0.5)), 0.0);
        assert_eq!(c.eval(&p2(1.0, 1.0)), 0.4375);
        assert_eq!(c.exact_sdf(&p2(0.5, 0.5)), Some(-0.25));
        assert_eq!(c.exact_sdf(&p2(0.75, 0.5)), Some(0.0));
        assert_eq!(c.exact_sdf(&p2(1.0, 0.5)), Some(0.25));
    }

    #[test]
    fn step_and_slopes() {
        let s = AnalyticLevelSet::<f64>::Step;
        assert_eq!(s.eval(&p2(0.25, 0.3)), 1.0);
        assert_eq!(s.eval(&p2(0.75, 0.9)), -1.0);
        assert_eq!(s.eval(&p2(0.5, 0.1)), 0.0);

        let a = AnalyticLevelSet::<f64>::PiecewiseAffine1d;
        assert!((a.eval(&[1.0 / 3.0, 0.0, 0.0]) + 0.05).abs() < 1e-15);
        assert!((a.eval(&[2.0 / 3.0, 0.0, 0.0]) - 0.05).abs() < 1e-15);
        assert_eq!(a.eval(&[0.8, 0.0, 0.0]), a.eval(&[0.95, 0.0, 0.0]));
        assert_eq!(a.eval(&[0.5, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn torus_values() {
        let t = AnalyticLevelSet::<f64>::torus();
        let (big, small) = (0.75, 0.25);
        assert!(t.eval(&[big + small, 0.0, 0.0]).abs() < 1e-15);
        assert_eq!(t.eval(&[big, 0.0, 0.0]), -small * small);
        assert_eq!(t.exact_sdf(&[big, 0.0, 0.0]), Some(-small));
        assert!(t.exact_sdf(&[0.0, big + small, 0.0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn star_zero_set_and_sign() {
        let s = AnalyticLevelSet::<f64>::star();
        assert!(s.eval(&p2(0.5 + 1e-9, 0.5)) < 0.0);
        assert!(s.eval(&p2(0.99, 0.99)) > 0.0);
        // On the ray theta = 0 the boundary sits at 0.25 + 0.1 cos(2).
        let r = 0.25 + 0.1 * 2f64.cos();
        assert!(s.eval(&p2(0.5 + r, 0.5)).abs() < 1e-15);
        assert!(!s.has_exact_sdf());
    }

    #[test]
    fn arctan_noise_reproducible() {
        let a = AnalyticLevelSet::<f64>::arctan_noise(7);
        let p = p2(0.3, 0.6);
        assert_eq!(a.eval(&p).to_bits(), a.eval(&p).to_bits());
        let b = AnalyticLevelSet::<f64>::arctan_noise(8);
        assert_ne!(a.eval(&p), b.eval(&p));
        let clean = AnalyticLevelSet::ArctanNoise { amplitude: 0.0, seed: 7 };
        assert_eq!(clean.eval(&p), (10.0f64 * (0.3 - 0.5)).atan());
    }

    #[test]
    fn exact_sdfs_have_unit_gradient() {
        let cases = [AnalyticLevelSet::<f64>::circle(), AnalyticLevelSet::torus(), AnalyticLevelSet::Step];
        let d = 1e-6;
        let pts = [[0.13, 0.71, 0.2], [0.9, 0.2, -0.4], [0.33, 0.04, 0.61], [0.61, 0.77, 0.05]];
        for case in &cases {
            for p in pts {
                let mut g2 = 0.0;
                for k in 0..case.dim() {
                    let (mut a, mut b) = (p, p);
                    a[k] += d;
                    b[k] -= d;
                    let gk = (case.exact_sdf(&a).unwrap() - case.exact_sdf(&b).unwrap()) / (2.0 * d);
                    g2 += gk * gk;
                }
                assert!((g2.sqrt() - 1.0).abs() < 1e-6, "{} at {p:?}", case.tag());
            }
        }
    }

    #[test]
    fn sign_fields() {
        let m = build_interval_mesh(0.0f64, 1.0, 4).unwrap();
        let phi = FieldP1::interpolate(&m, |p| p[0] - 0.5);
        assert_eq!(sign_field(&phi, 1e-14).as_slice(), &[-1, -1, 0, 1, 1]);
        let one = FieldP1::new(vec![1.0; 5]);
        assert_eq!(sign_field(&one, 0.0).as_slice(), &[1; 5]);
        assert!(!sign_field(&one, 0.0).has_interface());
    }

    #[test]
    fn circle_sign_field_matches_analytic_sign() {
        let m = build_box_mesh(&[0.0f64, 0.0], &[1.0, 1.0], &[40, 40]).unwrap();
        let c = AnalyticLevelSet::<f64>::circle();
        let phi = FieldP1::interpolate(&m, |p| c.eval(p));
        let tol = default_tol_zero(2f64.sqrt());
        let s = sign_field(&phi, tol);
        for (v, p) in m.vertices().iter().enumerate() {
            let r = ((p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2)).sqrt();
            let expected = if phi.values()[v].abs() <= tol {
                0
            } else if r < 0.25 {
                -1
            } else {
                1
            };
            assert_eq!(s.get(v), expected);
        }
    }
}
