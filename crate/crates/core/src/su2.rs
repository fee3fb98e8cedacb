//! 2×2 complex matrix algebra for SU(2): Pauli basis, exponentials and
//! lattice gauge transformations.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ensure_same_grid, partial, Field, Grid4, Magnitude, VectorField, AXES};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for accepting a matrix as a group element.
pub const GROUP_TOL: f64 = 1e-10;

/// Row-major 2×2 complex matrix `[[m[0], m[1]], [m[2], m[3]]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2c(pub [Complex64; 4]);

impl Matrix2c {
    pub const ZERO: Self = Self([ZERO; 4]);
    pub const IDENTITY: Self = Self([ONE, ZERO, ZERO, ONE]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self([a, b, c, d])
    }

    pub fn scalar(z: Complex64) -> Self {
        Self([z, ZERO, ZERO, z])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn dagger(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    /// Largest entry modulus.
    pub fn max_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        // eigenvalues of the Hermitian M†M from its trace and determinant
        let g = self.dagger() * *self;
        let t = g.trace().re;
        let d = g.det().re;
        let disc = (0.25 * t * t - d).max(0.0).sqrt();
        (0.5 * t + disc).max(0.0).sqrt()
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let t = self.trace().re;
        let d = self.det().re;
        let disc = (0.25 * t * t - d).max(0.0).sqrt();
        [0.5 * t - disc, 0.5 * t + disc]
    }

    /// ‖U†U − I‖_max and |det U − 1|, the two group-membership defects.
    pub fn group_defect(&self) -> (f64, f64) {
        (
            (self.dagger() * *self - Self::IDENTITY).max_entry(),
            (self.det() - ONE).norm(),
        )
    }

    pub fn is_group_element(&self, tol: f64) -> bool {
        let (u, d) = self.group_defect();
        u <= tol && d <= tol
    }
}

impl Add for Matrix2c {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Self(out)
    }
}

impl Sub for Matrix2c {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o -= r;
        }
        Self(out)
    }
}

impl Neg for Matrix2c {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|z| -z))
    }
}

impl Mul for Matrix2c {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Self([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Mul<f64> for Matrix2c {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|z| z * rhs))
    }
}

impl Mul<Complex64> for Matrix2c {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        Self(self.0.map(|z| z * rhs))
    }
}

impl Magnitude for Matrix2c {
    fn magnitude(&self) -> f64 {
        self.max_entry()
    }
}

pub type MatrixField = Field<Matrix2c>;

/// Matrix-valued gauge potential A_μ, one field per direction.
pub type MatrixGaugeField = VectorField<Matrix2c>;

/// Gauge coupling g > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(g: f64) -> Result<Self> {
        if g.is_finite() && g > 0.0 {
            Ok(Self(g))
        } else {
            Err(Error::invalid(format!("coupling {g} must be finite and positive")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;
    fn try_from(g: f64) -> Result<Self> {
        Self::new(g)
    }
}

impl From<Coupling> for f64 {
    fn from(g: Coupling) -> f64 {
        g.0
    }
}

/// Standard Pauli matrix σ^a for a ∈ {1, 2, 3}.
pub fn pauli(a: usize) -> Result<Matrix2c> {
    match a {
        1 => Ok(Matrix2c::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(Matrix2c::new(ZERO, -I, I, ZERO)),
        3 => Ok(Matrix2c::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(Error::invalid(format!("Pauli index {a} not in 1..=3"))),
    }
}

fn sigma() -> [Matrix2c; 3] {
    [1, 2, 3].map(|a| pauli(a).expect("index in range"))
}

/// Levi-Civita symbol ε_abc on {1, 2, 3}.
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

pub fn commutator(a: &Matrix2c, b: &Matrix2c) -> Matrix2c {
    *a * *b - *b * *a
}

/// Σ_a v_a σ^a.
pub fn pauli_combination(v: [f64; 3]) -> Matrix2c {
    let s = sigma();
    s[0] * v[0] + s[1] * v[1] + s[2] * v[2]
}

/// exp(i ρ^a σ^a / 2) = cos(|ρ|/2) I + i sin(|ρ|/2) ρ̂·σ.
pub fn su2_exp(rho: [f64; 3]) -> Result<Matrix2c> {
    if rho.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite rotation vector"));
    }
    let norm = rho.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(Matrix2c::IDENTITY);
    }
    let half = 0.5 * norm;
    let axis = rho.map(|v| v / norm);
    Ok(Matrix2c::IDENTITY * half.cos() + pauli_combination(axis) * (I * half.sin()))
}

/// Largest group-membership defect over a field.
pub fn field_group_defect(u: &MatrixField) -> f64 {
    u.values()
        .iter()
        .map(|m| {
            let (a, b) = m.group_defect();
            a.max(b)
        })
        .fold(0.0, f64::max)
}

fn check_group_field(u: &MatrixField) -> Result<()> {
    let defect = field_group_defect(u);
    if defect > GROUP_TOL {
        return Err(Error::invalid(format!(
            "transformation field is not SU(2)-valued (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// −(i/g) U ∂_μ U^{-1}, with U^{-1} = U† and the lattice central difference.
pub fn pure_gauge_field(u: &MatrixField, g: Coupling) -> Result<MatrixGaugeField> {
    check_group_field(u)?;
    let inv = u.map(Matrix2c::dagger);
    let factor = -I / g.value();
    let mut out = Vec::with_capacity(AXES);
    for axis in 0..AXES {
        let d_inv = partial(&inv, axis)?;
        out.push(u.zip_map(&d_inv, |m, d| (m * d) * factor)?);
    }
    Ok(out.try_into().expect("four directions"))
}

/// A′_μ = U A_μ U^{-1} − (i/g) U ∂_μ U^{-1}.
pub fn gauge_transform(
    a: &MatrixGaugeField,
    u: &MatrixField,
    g: Coupling,
) -> Result<MatrixGaugeField> {
    for comp in a {
        ensure_same_grid(comp.grid(), u.grid())?;
    }
    let inhomogeneous = pure_gauge_field(u, g)?;
    let mut out = Vec::with_capacity(AXES);
    for (a_mu, pg) in a.iter().zip(inhomogeneous.iter()) {
        let conj = u.zip_map(a_mu, |m, x| m * x * m.dagger())?;
        out.push(conj.zip_map(pg, |c, p| c + p)?);
    }
    Ok(out.try_into().expect("four directions"))
}

/// One trigonometric term ρ^a(x) += amplitude · sin(k·x + phase).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraMode {
    pub generator: usize,
    pub wavevector: [i32; AXES],
    pub amplitude: f64,
    pub phase: f64,
}

/// Smooth lattice-periodic su(2)-valued function ρ(x) built from trigonometric modes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SmoothAlgebraField {
    pub modes: Vec<AlgebraMode>,
}

impl SmoothAlgebraField {
    /// Seeded random recipe with wavevector entries in {−1, 0, 1}.
    pub fn random(seed: u64, count: usize, max_amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..count)
            .map(|_| {
                let mut k = [0i32; AXES];
                while k.iter().all(|&c| c == 0) {
                    k = [(); AXES].map(|_| rng.gen_range(-1..=1));
                }
                AlgebraMode {
                    generator: rng.gen_range(1..=3),
                    wavevector: k,
                    amplitude: rng.gen_range(-max_amplitude..=max_amplitude),
                    phase: rng.gen_range(0.0..TAU),
                }
            })
            .collect();
        Self { modes }
    }

    pub fn rho_at(&self, x: [f64; AXES]) -> [f64; 3] {
        let mut rho = [0.0; 3];
        for m in &self.modes {
            let arg: f64 = m
                .wavevector
                .iter()
                .zip(x.iter())
                .map(|(&k, &xi)| k as f64 * xi)
                .sum::<f64>()
                + m.phase;
            rho[m.generator - 1] += m.amplitude * arg.sin();
        }
        rho
    }

    /// U(x) = exp(i ρ^a(x) σ^a / 2).
    pub fn group_field(&self, grid: Grid4) -> Result<MatrixField> {
        let values = (0..grid.len())
            .map(|i| su2_exp(self.rho_at(grid.position(i))))
            .collect::<Result<Vec<_>>>()?;
        MatrixField::from_vec(grid, values)
    }

    /// Hermitian traceless field ρ^a(x) σ^a / 2.
    pub fn algebra_field(&self, grid: Grid4) -> MatrixField {
        MatrixField::from_fn(grid, |x| pauli_combination(self.rho_at(x)) * 0.5)
    }
}

/// Random smooth matrix gauge potential: one independent algebra field per direction.
pub fn smooth_gauge_potential(grid: Grid4, seed: u64) -> MatrixGaugeField {
    [0u64, 1, 2, 3].map(|mu| {
        SmoothAlgebraField::random(seed.wrapping_mul(31).wrapping_add(mu + 1), 2, 0.5)
            .algebra_field(grid)
    })
}
