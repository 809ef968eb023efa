//! Contact mapping torus numerics on the shipped Hamiltonian families.

use cantor_tm::reeb::{
    contact_density, estimate_c0, hamiltonian_residual, hamiltonian_vector_field,
    integrate_suspension, min_contact_density, reeb_defects, reeb_field, return_map_report,
    sample_disk, AngularBump, Concatenated, HamiltonianFamily, RadialBump, ReebError,
    SuspensionProblem, ZeroFamily, C0_SAFETY_FACTOR,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `H = x² + y²`, not compactly supported: `X = (y, −x)`.
struct Quadratic;

impl HamiltonianFamily for Quadratic {
    fn value(&self, x: f64, y: f64, _: f64) -> f64 {
        x * x + y * y
    }
    fn gradient(&self, x: f64, y: f64, _: f64) -> [f64; 2] {
        [2.0 * x, 2.0 * y]
    }
    fn boundary_margin(&self) -> f64 {
        0.0
    }
    fn time_margin(&self) -> f64 {
        0.0
    }
    fn describe(&self) -> String {
        "quadratic".into()
    }
}

fn fixtures() -> Vec<Box<dyn HamiltonianFamily>> {
    vec![
        Box::new(ZeroFamily),
        Box::new(RadialBump::default()),
        Box::new(AngularBump::default()),
        Box::new(Concatenated { inner: RadialBump::default() }),
        Box::new(Concatenated { inner: AngularBump { amplitude: 0.3, margin: 0.2, delta: 0.05 } }),
    ]
}

#[test]
fn radial_field_closed_form() {
    // ι_X (2 dx∧dy) = 2x dx + 2y dy gives X = (y, −x): unit angular speed, clockwise
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..100 {
        let [x, y] = sample_disk(&mut rng, 0.99);
        let v = hamiltonian_vector_field(&Quadratic, 0.3, [x, y]).unwrap();
        assert_eq!(v, [y, -x]);
    }
}

#[test]
fn constant_hamiltonian_has_zero_field() {
    assert_eq!(hamiltonian_vector_field(&ZeroFamily, 0.5, [0.2, -0.1]).unwrap(), [0.0, 0.0]);
}

#[test]
fn defining_equation_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for f in fixtures() {
        for _ in 0..1000 {
            let p = sample_disk(&mut rng, 1.0);
            let t = rng.gen_range(0.0..1.0);
            assert!(hamiltonian_residual(f.as_ref(), t, p).unwrap() < 1e-10);
        }
    }
}

#[test]
fn support_conditions_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    for f in fixtures() {
        let (m, d) = (f.boundary_margin(), f.time_margin());
        for _ in 0..500 {
            let p = sample_disk(&mut rng, 1.0);
            let t = rng.gen_range(0.0..1.0);
            let outside_space = (p[0] * p[0] + p[1] * p[1]).sqrt() > 1.0 - m;
            let outside_time = t < d || t > 1.0 - d;
            if outside_space || outside_time {
                assert_eq!(f.value(p[0], p[1], t), 0.0, "{}", f.describe());
                assert_eq!(hamiltonian_vector_field(f.as_ref(), t, p).unwrap(), [0.0, 0.0]);
            }
        }
    }
}

#[test]
fn c0_against_dense_sampling_and_a_priori_bound() {
    for f in fixtures() {
        let c0 = estimate_c0(f.as_ref(), 32).unwrap();
        // oracle: ten times finer sampling of the same density
        let mut worst = 0.0f64;
        let (mut sup_h, mut sup_grad) = (0.0f64, 0.0f64);
        let n = 320;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (-1.0 + 2.0 * i as f64 / (n - 1) as f64, -1.0 + 2.0 * j as f64 / (n - 1) as f64);
                if x * x + y * y >= 1.0 {
                    continue;
                }
                for k in 0..40 {
                    let z = k as f64 / 39.0;
                    worst = worst.max(-contact_density(f.as_ref(), 0.0, x, y, z));
                    sup_h = sup_h.max(f.value(x, y, z).abs());
                    let [gx, gy] = f.gradient(x, y, z);
                    sup_grad = sup_grad.max(gx.hypot(gy));
                }
            }
        }
        assert!(c0 >= worst, "{}: {c0} < {worst}", f.describe());
        assert!(c0 <= C0_SAFETY_FACTOR * (sup_h + sup_grad / 2.0) + 1e-12, "{}", f.describe());
        let c = 2.0 * c0 + 1.0;
        assert!(min_contact_density(f.as_ref(), c, 48) > 0.0);
    }
    assert_eq!(estimate_c0(&ZeroFamily, 16).unwrap(), 0.0);
    assert!(estimate_c0(&ZeroFamily, 8).is_err());
}

#[test]
fn reeb_defects_are_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for f in fixtures() {
        let problem = SuspensionProblem::new(f.as_ref(), 32).unwrap();
        for _ in 0..1000 {
            let [x, y] = sample_disk(&mut rng, 1.0);
            let z = rng.gen_range(0.0..1.0);
            let (a, i) = reeb_defects(&problem, [x, y, z]).unwrap();
            assert!(a < 1e-8 && i < 1e-8);
        }
    }
}

#[test]
fn zero_family_reeb_scales_with_c() {
    let mut p = SuspensionProblem::new(&ZeroFamily, 16).unwrap();
    for c in [1.0, 2.0, 4.0] {
        p.c = c;
        assert_eq!(reeb_field(&p, [0.1, 0.2, 0.3]).unwrap(), [0.0, 0.0, 1.0 / c]);
    }
    p.c = -1.0;
    assert!(matches!(
        reeb_field(&p, [0.1, 0.2, 0.3]),
        Err(ReebError::DegenerateDenominator { .. })
    ));
}

#[test]
fn return_maps_against_references() {
    for f in fixtures() {
        let problem = SuspensionProblem::new(f.as_ref(), 32).unwrap();
        let report = return_map_report(&problem, 30, 65).unwrap();
        if let Some(d) = report.max_deviation {
            assert!(d < 1e-6, "{}: {d}", f.describe());
        }
        assert!(report.min_contact_density > 0.0);
    }
}

#[test]
fn boundary_collar_is_fixed() {
    let f = AngularBump::default();
    let problem = SuspensionProblem::new(&f, 16).unwrap();
    for p in [[0.95, 0.0], [0.0, -0.93], [0.66, 0.66]] {
        assert_eq!(integrate_suspension(&problem, p).unwrap(), p);
    }
}

#[test]
fn deviation_shrinks_with_tolerance() {
    let f = RadialBump::default();
    let mut last = f64::INFINITY;
    for tol in [1e-8, 1e-10, 1e-12] {
        let problem = SuspensionProblem::new(&f, 16).unwrap().with_tolerance(tol);
        let d = return_map_report(&problem, 40, 66).unwrap().max_deviation.unwrap();
        assert!(d < last, "{tol}: {d} !< {last}");
        last = d;
    }
}

#[test]
fn reports_are_reproducible() {
    let f = AngularBump::default();
    let problem = SuspensionProblem::new(&f, 16).unwrap();
    let a = return_map_report(&problem, 10, 67).unwrap();
    let b = return_map_report(&problem, 10, 67).unwrap();
    assert_eq!(a.record(), b.record());
    assert_eq!(a.pretty(), b.pretty());
    assert!(a.record().contains("tolerance=1e-10"));
}
