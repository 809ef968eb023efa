//! Numerics for the contact mapping torus `D × [0, 1]` with
//! `α̃ = (H + C) dz + λ`, `λ = x dy − y dx`.
//!
//! Everything is in Cartesian coordinates so that the disk centre is an
//! ordinary point. With `dλ = 2 dx∧dy` the Hamiltonian field solving
//! `ι_X dλ = dH` is `X = (H_y, −H_x) / 2`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReebError {
    #[error("point ({0}, {1}) is not in the open unit disk")]
    OutOfDisk(f64, f64),
    #[error("trajectory left the disk at z = {z}")]
    LeftDisk { z: f64 },
    #[error("integration failed at z = {z}: {reason}")]
    IntegrationFailure { z: f64, reason: String },
    #[error("H + C + λ(X) = {value} at ({x}, {y}, {z}); C is too small")]
    DegenerateDenominator { x: f64, y: f64, z: f64, value: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// A time-dependent Hamiltonian on the unit disk, `t ∈ [0, 1]`.
///
/// Implementations must vanish for `x² + y² > (1 − boundary_margin)²` and for
/// `t < time_margin` or `t > 1 − time_margin`.
pub trait HamiltonianFamily: Send + Sync {
    fn value(&self, x: f64, y: f64, t: f64) -> f64;
    /// `(∂H/∂x, ∂H/∂y)`.
    fn gradient(&self, x: f64, y: f64, t: f64) -> [f64; 2];
    fn boundary_margin(&self) -> f64;
    fn time_margin(&self) -> f64;
    /// Name and parameters, echoed in reports.
    fn describe(&self) -> String;
    /// Exact time-one map of the Hamiltonian flow, when known in closed form.
    fn time_one(&self, _p: [f64; 2]) -> Option<[f64; 2]> {
        None
    }
}

/// Smooth step `S(s) = f(s) / (f(s) + f(1 − s))`, `f(s) = e^{−1/s}`.
fn smooth_step_derivative(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let f = |u: f64| (-1.0 / u).exp();
    let (a, b) = (f(s), f(1.0 - s));
    let (da, db) = (a / (s * s), b / ((1.0 - s) * (1.0 - s)));
    (da * b + a * db) / ((a + b) * (a + b))
}

/// Time profile supported in `[δ, 1 − δ]` with unit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeProfile {
    pub delta: f64,
}

impl TimeProfile {
    pub fn eta(&self, t: f64) -> f64 {
        let width = 1.0 - 2.0 * self.delta;
        smooth_step_derivative((t - self.delta) / width) / width
    }
}

/// `g(ρ) = A exp(1 − 1/(1 − ρ/R²))` for `ρ = x² + y² < R²`, zero beyond;
/// `R = 1 − margin`. Returns `(g, g′)`.
fn radial_bump(amplitude: f64, margin: f64, rho: f64) -> (f64, f64) {
    let r2 = (1.0 - margin) * (1.0 - margin);
    let u = rho / r2;
    if u >= 1.0 {
        return (0.0, 0.0);
    }
    let g = amplitude * (1.0 - 1.0 / (1.0 - u)).exp();
    let dg = -g / (r2 * (1.0 - u) * (1.0 - u));
    (g, dg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFamily;

impl HamiltonianFamily for ZeroFamily {
    fn value(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn gradient(&self, _: f64, _: f64, _: f64) -> [f64; 2] {
        [0.0, 0.0]
    }
    fn boundary_margin(&self) -> f64 {
        1.0
    }
    fn time_margin(&self) -> f64 {
        0.5
    }
    fn describe(&self) -> String {
        "zero".into()
    }
    fn time_one(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        Some(p)
    }
}

/// `H = η(t) g(x² + y²)`. Its flow rotates each circle `x² + y² = ρ` by the
/// angle `−g′(ρ) ∫η = −g′(ρ)` (counterclockwise positive) over unit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBump {
    pub amplitude: f64,
    pub margin: f64,
    pub delta: f64,
}

impl Default for RadialBump {
    fn default() -> Self {
        RadialBump {
            amplitude: 0.5,
            margin: 0.1,
            delta: 0.1,
        }
    }
}

impl RadialBump {
    /// Angle of the time-one rotation on the circle of squared radius `rho`.
    pub fn rotation_angle(&self, rho: f64) -> f64 {
        -radial_bump(self.amplitude, self.margin, rho).1
    }
}

impl HamiltonianFamily for RadialBump {
    fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        TimeProfile { delta: self.delta }.eta(t)
            * radial_bump(self.amplitude, self.margin, x * x + y * y).0
    }
    fn gradient(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let eta = TimeProfile { delta: self.delta }.eta(t);
        let dg = radial_bump(self.amplitude, self.margin, x * x + y * y).1;
        [eta * dg * 2.0 * x, eta * dg * 2.0 * y]
    }
    fn boundary_margin(&self) -> f64 {
        self.margin
    }
    fn time_margin(&self) -> f64 {
        self.delta
    }
    fn describe(&self) -> String {
        format!(
            "radial-bump amplitude={:e} margin={:e} delta={:e}",
            self.amplitude, self.margin, self.delta
        )
    }
    fn time_one(&self, [x, y]: [f64; 2]) -> Option<[f64; 2]> {
        let (s, c) = self.rotation_angle(x * x + y * y).sin_cos();
        Some([c * x - s * y, s * x + c * y])
    }
}

/// `H = η(t) g(x² + y²) x`: not radially symmetric, no closed-form flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularBump {
    pub amplitude: f64,
    pub margin: f64,
    pub delta: f64,
}

impl Default for AngularBump {
    fn default() -> Self {
        AngularBump {
            amplitude: 0.5,
            margin: 0.1,
            delta: 0.1,
        }
    }
}

impl HamiltonianFamily for AngularBump {
    fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        TimeProfile { delta: self.delta }.eta(t)
            * radial_bump(self.amplitude, self.margin, x * x + y * y).0
            * x
    }
    fn gradient(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let eta = TimeProfile { delta: self.delta }.eta(t);
        let (g, dg) = radial_bump(self.amplitude, self.margin, x * x + y * y);
        [eta * (g + 2.0 * x * x * dg), eta * 2.0 * x * y * dg]
    }
    fn boundary_margin(&self) -> f64 {
        self.margin
    }
    fn time_margin(&self) -> f64 {
        self.delta
    }
    fn describe(&self) -> String {
        format!(
            "angular-bump amplitude={:e} margin={:e} delta={:e}",
            self.amplitude, self.margin, self.delta
        )
    }
}

/// Runs `inner` at double speed on `[0, 1/2]` and then its time reversal on
/// `[1/2, 1]`, so the time-one map is the identity.
pub struct Concatenated<H> {
    pub inner: H,
}

impl<H: HamiltonianFamily> Concatenated<H> {
    fn split(t: f64) -> (f64, f64) {
        if t < 0.5 {
            (2.0, 2.0 * t)
        } else {
            (-2.0, 2.0 - 2.0 * t)
        }
    }
}

impl<H: HamiltonianFamily> HamiltonianFamily for Concatenated<H> {
    fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        let (k, s) = Self::split(t);
        k * self.inner.value(x, y, s)
    }
    fn gradient(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let (k, s) = Self::split(t);
        let [gx, gy] = self.inner.gradient(x, y, s);
        [k * gx, k * gy]
    }
    fn boundary_margin(&self) -> f64 {
        self.inner.boundary_margin()
    }
    fn time_margin(&self) -> f64 {
        self.inner.time_margin() / 2.0
    }
    fn describe(&self) -> String {
        format!("concatenated({})", self.inner.describe())
    }
    fn time_one(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        Some(p)
    }
}

fn check_disk(x: f64, y: f64) -> Result<(), ReebError> {
    if x * x + y * y < 1.0 {
        Ok(())
    } else {
        Err(ReebError::OutOfDisk(x, y))
    }
}

/// `X_t` with `ι_X dλ = dH_t`.
pub fn hamiltonian_vector_field(
    family: &dyn HamiltonianFamily,
    t: f64,
    [x, y]: [f64; 2],
) -> Result<[f64; 2], ReebError> {
    check_disk(x, y)?;
    let [hx, hy] = family.gradient(x, y, t);
    Ok([hy / 2.0, -hx / 2.0])
}

/// Largest coefficient of `ι_X dλ − dH` in the `dx, dy` coframe.
pub fn hamiltonian_residual(
    family: &dyn HamiltonianFamily,
    t: f64,
    p: [f64; 2],
) -> Result<f64, ReebError> {
    let [x1, x2] = hamiltonian_vector_field(family, t, p)?;
    let [hx, hy] = family.gradient(p[0], p[1], t);
    Ok((-2.0 * x2 - hx).abs().max((2.0 * x1 - hy).abs()))
}

/// Density of `α̃ ∧ dα̃` relative to `dλ ∧ dz`: `H + C − (x H_x + y H_y)/2`.
pub fn contact_density(family: &dyn HamiltonianFamily, c: f64, x: f64, y: f64, z: f64) -> f64 {
    let [hx, hy] = family.gradient(x, y, z);
    family.value(x, y, z) + c - (x * hx + y * hy) / 2.0
}

/// Multiplier applied to the grid maximum in [`estimate_c0`], covering the
/// gap between the grid and the true supremum.
pub const C0_SAFETY_FACTOR: f64 = 1.25;

/// Points of a `grid × grid × grid` lattice on `[−1, 1]² × [0, 1]` that lie
/// in the open disk.
fn grid_points(grid: usize) -> impl Iterator<Item = (f64, f64, f64)> {
    let step = move |i: usize, lo: f64, hi: f64| lo + (hi - lo) * i as f64 / (grid - 1) as f64;
    (0..grid).flat_map(move |i| {
        (0..grid).flat_map(move |j| {
            let (x, y) = (step(i, -1.0, 1.0), step(j, -1.0, 1.0));
            (0..grid)
                .filter(move |_| x * x + y * y < 1.0)
                .map(move |k| (x, y, step(k, 0.0, 1.0)))
        })
    })
}

/// Smallest `C` (times [`C0_SAFETY_FACTOR`]) for which the contact density is
/// positive at every grid point; zero when `H` never makes it negative.
pub fn estimate_c0(family: &dyn HamiltonianFamily, grid: usize) -> Result<f64, ReebError> {
    if grid < 16 {
        return Err(ReebError::Invalid(format!("grid must be at least 16, got {grid}")));
    }
    let worst = grid_points(grid)
        .map(|(x, y, z)| -contact_density(family, 0.0, x, y, z))
        .fold(0.0f64, f64::max);
    Ok(if worst > 0.0 { C0_SAFETY_FACTOR * worst } else { 0.0 })
}

/// Minimum contact density over the grid.
pub fn min_contact_density(family: &dyn HamiltonianFamily, c: f64, grid: usize) -> f64 {
    grid_points(grid)
        .map(|(x, y, z)| contact_density(family, c, x, y, z))
        .fold(f64::INFINITY, f64::min)
}

pub struct SuspensionProblem<'a> {
    pub family: &'a dyn HamiltonianFamily,
    pub c: f64,
    pub tolerance: f64,
    pub max_steps: usize,
    /// Points per axis for the contactness grid.
    pub grid: usize,
}

impl<'a> SuspensionProblem<'a> {
    /// Defaults: `C = 2 C₀ + 1` on the given grid, tolerance `1e−10`,
    /// at most `10⁶` steps.
    pub fn new(family: &'a dyn HamiltonianFamily, grid: usize) -> Result<Self, ReebError> {
        let c0 = estimate_c0(family, grid)?;
        Ok(SuspensionProblem {
            family,
            c: 2.0 * c0 + 1.0,
            tolerance: 1e-10,
            max_steps: 1_000_000,
            grid,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Largest step of the integrator, so that no feature of the time profile
/// can fall between the stages of a single step.
pub const MAX_STEP: f64 = 1.0 / 16.0;

/// Follows `∂/∂z + X_z` from `z = 0` to `z = 1`: the first-return map of the
/// suspension on the section `z = 0`.
pub fn integrate_suspension(
    problem: &SuspensionProblem<'_>,
    start: [f64; 2],
) -> Result<[f64; 2], ReebError> {
    check_disk(start[0], start[1])?;
    let tol = problem.tolerance;
    let mut z = 0.0;
    let mut p = start;
    let mut h: f64 = 1e-2;
    let mut k = [[0.0; 2]; 7];
    k[0] = hamiltonian_vector_field(problem.family, z, p)?;
    for _ in 0..problem.max_steps {
        if z >= 1.0 {
            return Ok(p);
        }
        h = h.min(MAX_STEP).min(1.0 - z);
        if h < 1e-14 {
            return Err(ReebError::IntegrationFailure {
                z,
                reason: "step size underflow".into(),
            });
        }
        let mut inside = true;
        for s in 1..7 {
            let mut q = p;
            for (j, kj) in k.iter().enumerate().take(s) {
                q[0] += h * A[s][j] * kj[0];
                q[1] += h * A[s][j] * kj[1];
            }
            match hamiltonian_vector_field(problem.family, z + C[s] * h, q) {
                Ok(v) => k[s] = v,
                Err(_) => {
                    inside = false;
                    break;
                }
            }
        }
        if !inside {
            // a trial stage overshot the disk; retry with a smaller step
            h *= 0.2;
            continue;
        }
        let mut next = p;
        let mut err = 0.0f64;
        for d in 0..2 {
            let hi: f64 = (0..7).map(|s| B5[s] * k[s][d]).sum();
            let lo: f64 = (0..7).map(|s| B4[s] * k[s][d]).sum();
            next[d] = p[d] + h * hi;
            let scale = tol + tol * p[d].abs().max(next[d].abs());
            err = err.max((h * (hi - lo)).abs() / scale);
        }
        if err <= 1.0 {
            if next[0] * next[0] + next[1] * next[1] >= 1.0 {
                return Err(ReebError::LeftDisk { z: z + h });
            }
            z = if 1.0 - z - h < 1e-15 { 1.0 } else { z + h };
            p = next;
            // first-same-as-last
            k[0] = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
        h *= factor.clamp(0.2, 5.0);
    }
    if z >= 1.0 {
        return Ok(p);
    }
    Err(ReebError::IntegrationFailure {
        z,
        reason: format!("exceeded {} steps", problem.max_steps),
    })
}

/// `R = (∂/∂z + X) / (H + C + λ(X))`, as `(R_x, R_y, R_z)`.
pub fn reeb_field(problem: &SuspensionProblem<'_>, [x, y, z]: [f64; 3]) -> Result<[f64; 3], ReebError> {
    let [x1, x2] = hamiltonian_vector_field(problem.family, z, [x, y])?;
    let value = problem.family.value(x, y, z) + problem.c + (x * x2 - y * x1);
    if value <= 0.0 {
        return Err(ReebError::DegenerateDenominator { x, y, z, value });
    }
    Ok([x1 / value, x2 / value, 1.0 / value])
}

/// `|α̃(R) − 1|` and the largest coefficient of `ι_R dα̃` in `dx, dy, dz`.
pub fn reeb_defects(problem: &SuspensionProblem<'_>, p: [f64; 3]) -> Result<(f64, f64), ReebError> {
    let [r1, r2, r3] = reeb_field(problem, p)?;
    let [x, y, z] = p;
    let h = problem.family.value(x, y, z);
    let [hx, hy] = problem.family.gradient(x, y, z);
    let alpha = (h + problem.c) * r3 + x * r2 - y * r1;
    // dα̃ = H_x dx∧dz + H_y dy∧dz + 2 dx∧dy
    let iota = [
        -hx * r3 - 2.0 * r2,
        -hy * r3 + 2.0 * r1,
        hx * r1 + hy * r2,
    ];
    let worst = iota.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(((alpha - 1.0).abs(), worst))
}

/// Uniform sample in the disk of the given radius.
pub fn sample_disk<R: Rng>(rng: &mut R, radius: f64) -> [f64; 2] {
    loop {
        let x = rng.gen_range(-radius..radius);
        let y = rng.gen_range(-radius..radius);
        if x * x + y * y < radius * radius {
            return [x, y];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapReport {
    pub family: String,
    pub seed: u64,
    pub tolerance: f64,
    pub c0: f64,
    pub c: f64,
    pub grid: usize,
    pub starts: Vec<[f64; 2]>,
    pub returns: Vec<[f64; 2]>,
    /// Closed-form time-one points, when the family has one.
    pub references: Option<Vec<[f64; 2]>>,
    pub max_deviation: Option<f64>,
    pub min_contact_density: f64,
    pub max_hamiltonian_residual: f64,
    pub max_alpha_defect: f64,
    pub max_iota_defect: f64,
}

/// Integrates the return map at `samples` seeded points of the disk of
/// radius 0.95 and checks the forms at as many random points of the torus.
pub fn return_map_report(
    problem: &SuspensionProblem<'_>,
    samples: usize,
    seed: u64,
) -> Result<ReturnMapReport, ReebError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<[f64; 2]> = (0..samples).map(|_| sample_disk(&mut rng, 0.95)).collect();
    let returns = starts
        .iter()
        .map(|&p| integrate_suspension(problem, p))
        .collect::<Result<Vec<_>, _>>()?;
    let references: Option<Vec<[f64; 2]>> =
        starts.iter().map(|&p| problem.family.time_one(p)).collect();
    let max_deviation = references.as_ref().map(|refs| {
        refs.iter()
            .zip(&returns)
            .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
            .fold(0.0, f64::max)
    });
    let (mut residual, mut alpha, mut iota) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let [x, y] = sample_disk(&mut rng, 1.0);
        let z = rng.gen_range(0.0..1.0);
        residual = residual.max(hamiltonian_residual(problem.family, z, [x, y])?);
        let (a, i) = reeb_defects(problem, [x, y, z])?;
        alpha = alpha.max(a);
        iota = iota.max(i);
    }
    Ok(ReturnMapReport {
        family: problem.family.describe(),
        seed,
        tolerance: problem.tolerance,
        c0: estimate_c0(problem.family, problem.grid)?,
        c: problem.c,
        grid: problem.grid,
        starts,
        returns,
        references,
        max_deviation,
        min_contact_density: min_contact_density(problem.family, problem.c, problem.grid),
        max_hamiltonian_residual: residual,
        max_alpha_defect: alpha,
        max_iota_defect: iota,
    })
}

impl ReturnMapReport {
    /// One `key=value` line.
    pub fn record(&self) -> String {
        let dev = self
            .max_deviation
            .map_or("NONE".to_string(), |d| format!("{d:e}"));
        format!(
            "suspension family=\"{}\" seed={} tolerance={:e} grid={} c0={:e} c={:e} samples={} \
             max_deviation={} min_contact_density={:e} hamiltonian_residual={:e} \
             alpha_defect={:e} iota_defect={:e}",
            self.family,
            self.seed,
            self.tolerance,
            self.grid,
            self.c0,
            self.c,
            self.starts.len(),
            dev,
            self.min_contact_density,
            self.max_hamiltonian_residual,
            self.max_alpha_defect,
            self.max_iota_defect,
        )
    }

    /// The record followed by one line per sample point.
    pub fn pretty(&self) -> String {
        let mut out = self.record().replace(' ', "\n  ");
        out.push('\n');
        writeln!(out, "start_x,start_y,return_x,return_y,reference_x,reference_y").unwrap();
        for (i, (s, r)) in self.starts.iter().zip(&self.returns).enumerate() {
            let reference = self
                .references
                .as_ref()
                .map_or(",".to_string(), |refs| format!("{:e},{:e}", refs[i][0], refs[i][1]));
            writeln!(out, "{:e},{:e},{:e},{:e},{reference}", s[0], s[1], r[0], r[1]).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_profile_has_unit_mass() {
        let eta = TimeProfile { delta: 0.1 };
        let n = 200_000;
        let mass: f64 = (0..n).map(|i| eta.eta((i as f64 + 0.5) / n as f64)).sum::<f64>() / n as f64;
        assert!((mass - 1.0).abs() < 1e-9, "{mass}");
        assert_eq!(eta.eta(0.05), 0.0);
        assert_eq!(eta.eta(0.95), 0.0);
    }

    #[test]
    fn bump_derivative_matches_difference_quotient() {
        for rho in [0.1, 0.4, 0.7] {
            let h = 1e-6;
            let (_, dg) = radial_bump(0.5, 0.1, rho);
            let fd = (radial_bump(0.5, 0.1, rho + h).0 - radial_bump(0.5, 0.1, rho - h).0) / (2.0 * h);
            assert!((dg - fd).abs() < 1e-6, "{rho}: {dg} vs {fd}");
        }
    }

    #[test]
    fn zero_family_reeb_field() {
        let p = SuspensionProblem::new(&ZeroFamily, 16).unwrap();
        assert_eq!(p.c, 1.0);
        assert_eq!(reeb_field(&p, [0.3, 0.2, 0.5]).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(reeb_defects(&p, [0.3, 0.2, 0.5]).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn radial_return_map_is_rotation() {
        let f = RadialBump::default();
        let p = SuspensionProblem::new(&f, 32).unwrap();
        for start in [[0.0, 0.0], [0.3, 0.1], [-0.5, 0.4], [0.0, 0.88]] {
            let end = integrate_suspension(&p, start).unwrap();
            let reference = f.time_one(start).unwrap();
            let d = (end[0] - reference[0]).hypot(end[1] - reference[1]);
            assert!(d < 1e-7, "{start:?}: {d}");
        }
    }

    #[test]
    fn out_of_disk_rejected() {
        let f = RadialBump::default();
        assert!(matches!(
            hamiltonian_vector_field(&f, 0.5, [1.0, 0.0]),
            Err(ReebError::OutOfDisk(..))
        ));
    }
}
