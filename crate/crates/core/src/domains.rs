//! The four Cartan matrix domains, their Hartogs-type fiberings (the
//! Cartan–Hartogs, Hua and generalized Cartan–Hartogs families), and exact
//! membership predicates including the generic norms.
//!
//! Point conventions: a type I point is an m×n complex matrix, type II a
//! symmetric p×p matrix (entries equal their transpose exactly), type III a
//! skew-symmetric q×q matrix (entries equal the negated transpose exactly),
//! type IV a row vector in Cⁿ. Flat coordinate vectors fill matrices
//! row-major; type II fills the upper triangle (diagonal included) and
//! mirrors, type III fills the strict upper triangle and antisymmetrizes.
//! For type IV, `Z Zᵗ` always means the bilinear product Σ zₖ² (not the
//! Hermitian Σ |zₖ|²).
//!
//! Membership is decided with exact (tolerance-zero) strict comparisons for
//! the scalar inequalities; positive definiteness uses LDLᴴ pivots with a
//! 1e-12 floor. Near-boundary diagnostics go through the separate
//! `*_boundary_gap` functions.

use num_complex::Complex;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::Real;

/// Pivot floor for Hermitian positive-definiteness decisions.
pub const PD_PIVOT_FLOOR: f64 = 1e-12;
/// Largest tolerated relative imaginary residual of a Gram determinant.
pub const DET_IMAG_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// One of the four classical Cartan matrix domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanSpec {
    /// Rectangular m×n matrices Z with I − Z Z̄ᵗ ≻ 0.
    TypeI { rows: usize, cols: usize },
    /// Symmetric p×p matrices.
    TypeII { degree: usize },
    /// Skew-symmetric q×q matrices, q ≥ 2.
    TypeIII { degree: usize },
    /// Row vectors Z ∈ Cⁿ with 1 + |Z Zᵗ|² − 2 Z Z̄ᵗ > 0 and 1 − |Z Zᵗ|² > 0.
    TypeIV { dim: usize },
}

impl CartanSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CartanSpec::TypeI { rows, cols } => rows >= 1 && cols >= 1,
            CartanSpec::TypeII { degree } => degree >= 1,
            CartanSpec::TypeIII { degree } => degree >= 2,
            CartanSpec::TypeIV { dim } => dim >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "degenerate Cartan spec {self:?}"
            )))
        }
    }

    /// Matrix shape of a point of this domain.
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            CartanSpec::TypeI { rows, cols } => (rows, cols),
            CartanSpec::TypeII { degree } => (degree, degree),
            CartanSpec::TypeIII { degree } => (degree, degree),
            CartanSpec::TypeIV { dim } => (1, dim),
        }
    }

    /// Complex dimension of the domain (number of free coordinates).
    pub fn complex_dim(&self) -> usize {
        match *self {
            CartanSpec::TypeI { rows, cols } => rows * cols,
            CartanSpec::TypeII { degree } => degree * (degree + 1) / 2,
            CartanSpec::TypeIII { degree } => degree * (degree - 1) / 2,
            CartanSpec::TypeIV { dim } => dim,
        }
    }

    pub fn kind_label(&self) -> &'static str {
        match self {
            CartanSpec::TypeI { .. } => "I",
            CartanSpec::TypeII { .. } => "II",
            CartanSpec::TypeIII { .. } => "III",
            CartanSpec::TypeIV { .. } => "IV",
        }
    }
}

/// Cartan–Hartogs domain: fiber vector W ∈ Cᴺ over a Cartan base, with
/// |W|^{2K} < N(Z, Z̄).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CHSpec<T: Real> {
    pub base: CartanSpec,
    pub fiber_dim: usize,
    /// Hartogs exponent K > 0.
    pub exponent: T,
}

impl<T: Real> CHSpec<T> {
    pub fn new(base: CartanSpec, fiber_dim: usize, exponent: T) -> Result<Self> {
        base.validate()?;
        if fiber_dim < 1 {
            return Err(Error::InvalidParameter("fiber_dim must be ≥ 1".into()));
        }
        if !(exponent > T::zero()) || !exponent.is_finite() {
            return Err(Error::InvalidParameter("exponent K must be positive".into()));
        }
        Ok(CHSpec { base, fiber_dim, exponent })
    }
}

/// One fiber block of a Hua domain: (N_j, p_j, K_j).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HuaBlock<T: Real> {
    pub dim: usize,
    pub power: T,
    pub exponent: T,
}

/// Hua domain: Σ_j ‖W_j‖^{2 p_j} / N(Z, Z̄)^{K_j} < 1 over a Cartan base.
#[derive(Clone, Debug, PartialEq)]
pub struct HuaSpec<T: Real> {
    pub base: CartanSpec,
    pub blocks: Vec<HuaBlock<T>>,
}

impl<T: Real> HuaSpec<T> {
    pub fn new(base: CartanSpec, blocks: Vec<HuaBlock<T>>) -> Result<Self> {
        base.validate()?;
        if blocks.is_empty() {
            return Err(Error::InvalidParameter("Hua spec needs ≥ 1 block".into()));
        }
        for b in &blocks {
            if b.dim < 1 || !(b.power > T::zero()) || !(b.exponent > T::zero()) {
                return Err(Error::InvalidParameter(
                    "Hua block needs dim ≥ 1, p > 0, K > 0".into(),
                ));
            }
        }
        Ok(HuaSpec { base, blocks })
    }
}

/// Generalized Cartan–Hartogs domain: w/ρ(z) ∈ fiber Cartan domain with
/// ρ(z) = N_base(z, z̄)^{1/(2K)}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GCHSpec<T: Real> {
    pub base: CartanSpec,
    pub fiber: CartanSpec,
    pub exponent: T,
}

impl<T: Real> GCHSpec<T> {
    pub fn new(base: CartanSpec, fiber: CartanSpec, exponent: T) -> Result<Self> {
        base.validate()?;
        fiber.validate()?;
        if !(exponent > T::zero()) || !exponent.is_finite() {
            return Err(Error::InvalidParameter("exponent K must be positive".into()));
        }
        Ok(GCHSpec { base, fiber, exponent })
    }
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A matrix point of a Cartan domain.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoint<T: Real> {
    mat: CMatrix<T>,
}

impl<T: Real> MatrixPoint<T> {
    /// The origin of the given domain.
    pub fn zero(spec: &CartanSpec) -> Self {
        let (r, c) = spec.shape();
        MatrixPoint { mat: CMatrix::<T>::zeros(r, c) }
    }

    /// Wrap a full matrix, checking the shape and the exact symmetry
    /// invariant of types II/III.
    pub fn new(spec: &CartanSpec, mat: CMatrix<T>) -> Result<Self> {
        let (r, c) = spec.shape();
        if mat.nrows() != r || mat.ncols() != c {
            return Err(Error::ShapeMismatch(format!(
                "expected {r}×{c} point, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        match spec {
            CartanSpec::TypeII { .. } => {
                if mat != mat.transpose() {
                    return Err(Error::ShapeMismatch(
                        "type II point must equal its transpose exactly".into(),
                    ));
                }
            }
            CartanSpec::TypeIII { .. } => {
                if mat != mat.transpose().map(|v| -v) {
                    return Err(Error::ShapeMismatch(
                        "type III point must equal its negated transpose exactly".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(MatrixPoint { mat })
    }

    /// Build a point from flat coordinates (row-major; upper-triangle
    /// conventions for types II/III).
    pub fn from_coords(spec: &CartanSpec, coords: &[Complex<T>]) -> Result<Self> {
        let d = spec.complex_dim();
        if coords.len() != d {
            return Err(Error::ShapeMismatch(format!(
                "expected {d} coordinates for type {} spec, got {}",
                spec.kind_label(),
                coords.len()
            )));
        }
        let (r, c) = spec.shape();
        let mat = match *spec {
            CartanSpec::TypeI { .. } | CartanSpec::TypeIV { .. } => {
                CMatrix::<T>::from_row_iterator(r, c, coords.iter().copied())
            }
            CartanSpec::TypeII { degree } => {
                let mut m = CMatrix::<T>::zeros(degree, degree);
                let mut idx = 0;
                for i in 0..degree {
                    for j in i..degree {
                        m[(i, j)] = coords[idx];
                        m[(j, i)] = coords[idx];
                        idx += 1;
                    }
                }
                m
            }
            CartanSpec::TypeIII { degree } => {
                let mut m = CMatrix::<T>::zeros(degree, degree);
                let mut idx = 0;
                for i in 0..degree {
                    for j in (i + 1)..degree {
                        m[(i, j)] = coords[idx];
                        m[(j, i)] = -coords[idx];
                        idx += 1;
                    }
                }
                m
            }
        };
        Ok(MatrixPoint { mat })
    }

    /// Flatten back to the coordinate convention of [`Self::from_coords`].
    pub fn coords(&self, spec: &CartanSpec) -> Vec<Complex<T>> {
        match *spec {
            CartanSpec::TypeI { .. } | CartanSpec::TypeIV { .. } => {
                let mut out = Vec::with_capacity(spec.complex_dim());
                for i in 0..self.mat.nrows() {
                    for j in 0..self.mat.ncols() {
                        out.push(self.mat[(i, j)]);
                    }
                }
                out
            }
            CartanSpec::TypeII { degree } => {
                let mut out = Vec::with_capacity(spec.complex_dim());
                for i in 0..degree {
                    for j in i..degree {
                        out.push(self.mat[(i, j)]);
                    }
                }
                out
            }
            CartanSpec::TypeIII { degree } => {
                let mut out = Vec::with_capacity(spec.complex_dim());
                for i in 0..degree {
                    for j in (i + 1)..degree {
                        out.push(self.mat[(i, j)]);
                    }
                }
                out
            }
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    /// The point s·Z.
    pub fn scaled(&self, s: T) -> Self {
        MatrixPoint { mat: self.mat.map(|v| v * Complex::new(s, T::zero())) }
    }
}

fn check_shape<T: Real>(spec: &CartanSpec, z: &MatrixPoint<T>) -> Result<()> {
    let (r, c) = spec.shape();
    if z.mat.nrows() != r || z.mat.ncols() != c {
        return Err(Error::ShapeMismatch(format!(
            "expected {r}×{c} point for type {} spec, got {}×{}",
            spec.kind_label(),
            z.mat.nrows(),
            z.mat.ncols()
        )));
    }
    Ok(())
}

/// Bilinear Z Zᵗ = Σ zₖ² and Hermitian Z Z̄ᵗ = Σ |zₖ|² of a type IV point.
fn type_iv_products<T: Real>(z: &CMatrix<T>) -> (Complex<T>, T) {
    let mut bilinear = linalg::czero::<T>();
    let mut hermitian = T::zero();
    for v in z.iter() {
        bilinear += v * v;
        hermitian += v.norm_sqr();
    }
    (bilinear, hermitian)
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Generic norm N(Z, Z̄): det(I − Z Z̄ᵗ) for types I–III, and
/// 1 + |Z Zᵗ|² − 2 Z Z̄ᵗ for type IV.
pub fn generic_norm<T: Real>(spec: &CartanSpec, z: &MatrixPoint<T>) -> Result<T> {
    check_shape(spec, z)?;
    match spec {
        CartanSpec::TypeIV { .. } => {
            let (bilinear, hermitian) = type_iv_products(&z.mat);
            Ok(T::one() + bilinear.norm_sqr() - T::lit(2.0) * hermitian)
        }
        _ => {
            let d = linalg::det(&linalg::gram_defect(&z.mat));
            let residual = d.im.abs() / T::one().max(d.re.abs());
            if residual > T::lit(DET_IMAG_TOL) {
                return Err(Error::NonHermitianDeterminant {
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(d.re)
        }
    }
}

/// Strict membership in a Cartan domain.
pub fn cartan_contains<T: Real>(spec: &CartanSpec, z: &MatrixPoint<T>) -> Result<bool> {
    check_shape(spec, z)?;
    match spec {
        CartanSpec::TypeIV { .. } => {
            let (bilinear, hermitian) = type_iv_products(&z.mat);
            let norm = T::one() + bilinear.norm_sqr() - T::lit(2.0) * hermitian;
            Ok(norm > T::zero() && T::one() - bilinear.norm_sqr() > T::zero())
        }
        _ => Ok(linalg::positive_definite(
            &linalg::gram_defect(&z.mat),
            T::lit(PD_PIVOT_FLOOR),
        )),
    }
}

/// Strict membership in a Cartan–Hartogs domain: Z in the base and
/// |W|^{2K} < N(Z, Z̄).
pub fn ch_contains<T: Real>(
    spec: &CHSpec<T>,
    w: &[Complex<T>],
    z: &MatrixPoint<T>,
) -> Result<bool> {
    if w.len() != spec.fiber_dim {
        return Err(Error::ShapeMismatch(format!(
            "fiber vector has {} entries, spec wants {}",
            w.len(),
            spec.fiber_dim
        )));
    }
    if !cartan_contains(&spec.base, z)? {
        return Ok(false);
    }
    let norm = generic_norm(&spec.base, z)?;
    let wsq: T = w.iter().map(|v| v.norm_sqr()).sum();
    Ok(wsq.powf(spec.exponent) < norm)
}

/// Strict membership in a Hua domain.
pub fn hua_contains<T: Real>(
    spec: &HuaSpec<T>,
    ws: &[Vec<Complex<T>>],
    z: &MatrixPoint<T>,
) -> Result<bool> {
    if ws.len() != spec.blocks.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} fiber blocks supplied, spec wants {}",
            ws.len(),
            spec.blocks.len()
        )));
    }
    for (w, b) in ws.iter().zip(&spec.blocks) {
        if w.len() != b.dim {
            return Err(Error::ShapeMismatch(format!(
                "fiber block has {} entries, spec wants {}",
                w.len(),
                b.dim
            )));
        }
    }
    if !cartan_contains(&spec.base, z)? {
        return Ok(false);
    }
    let norm = generic_norm(&spec.base, z)?;
    let mut sum = T::zero();
    for (w, b) in ws.iter().zip(&spec.blocks) {
        let wsq: T = w.iter().map(|v| v.norm_sqr()).sum();
        sum = sum + wsq.powf(b.power) / norm.powf(b.exponent);
    }
    Ok(sum < T::one())
}

/// Strict membership in a generalized Cartan–Hartogs domain: z in the base
/// and w/ρ(z) in the fiber Cartan domain, with ρ(z) = N(z, z̄)^{1/(2K)}.
/// The flat fiber vector is reshaped by the documented row-major convention.
pub fn gch_contains<T: Real>(
    spec: &GCHSpec<T>,
    w: &[Complex<T>],
    z: &MatrixPoint<T>,
) -> Result<bool> {
    let d = spec.fiber.complex_dim();
    if w.len() != d {
        return Err(Error::ShapeMismatch(format!(
            "fiber vector has {} entries, fiber domain has complex dimension {d}",
            w.len()
        )));
    }
    if !cartan_contains(&spec.base, z)? {
        return Ok(false);
    }
    let norm = generic_norm(&spec.base, z)?;
    let rho = norm.powf((T::lit(2.0) * spec.exponent).recip());
    let inv = Complex::new(rho.recip(), T::zero());
    let scaled: Vec<Complex<T>> = w.iter().map(|v| v * inv).collect();
    let fiber_point = MatrixPoint::from_coords(&spec.fiber, &scaled)?;
    cartan_contains(&spec.fiber, &fiber_point)
}

// ---------------------------------------------------------------------------
// Boundary-gap diagnostics
// ---------------------------------------------------------------------------

/// Signed gap to the boundary of a Cartan domain: the smallest eigenvalue of
/// I − Z Z̄ᵗ for types I–III, min(N_IV, 1 − |Z Zᵗ|²) for type IV. Positive
/// inside, ≤ 0 on or outside the closure.
pub fn cartan_boundary_gap<T>(spec: &CartanSpec, z: &MatrixPoint<T>) -> Result<T>
where
    T: Real + nalgebra::RealField,
{
    check_shape(spec, z)?;
    match spec {
        CartanSpec::TypeIV { .. } => {
            let (bilinear, hermitian) = type_iv_products(&z.mat);
            let norm = T::one() + bilinear.norm_sqr() - T::lit(2.0) * hermitian;
            Ok(Float::min(norm, T::one() - bilinear.norm_sqr()))
        }
        _ => Ok(linalg::min_eigenvalue_hermitian(&linalg::gram_defect(
            &z.mat,
        ))),
    }
}

/// Gap diagnostic for a Cartan–Hartogs domain.
pub fn ch_boundary_gap<T>(spec: &CHSpec<T>, w: &[Complex<T>], z: &MatrixPoint<T>) -> Result<T>
where
    T: Real + nalgebra::RealField,
{
    if w.len() != spec.fiber_dim {
        return Err(Error::ShapeMismatch("fiber dimension mismatch".into()));
    }
    let base_gap = cartan_boundary_gap(&spec.base, z)?;
    if base_gap <= T::zero() {
        return Ok(base_gap);
    }
    let norm = generic_norm(&spec.base, z)?;
    let wsq: T = w.iter().map(|v| v.norm_sqr()).sum();
    Ok(Float::min(base_gap, norm - Float::powf(wsq, spec.exponent)))
}

/// Gap diagnostic for a Hua domain.
pub fn hua_boundary_gap<T>(
    spec: &HuaSpec<T>,
    ws: &[Vec<Complex<T>>],
    z: &MatrixPoint<T>,
) -> Result<T>
where
    T: Real + nalgebra::RealField,
{
    let base_gap = cartan_boundary_gap(&spec.base, z)?;
    if base_gap <= T::zero() {
        return Ok(base_gap);
    }
    let norm = generic_norm(&spec.base, z)?;
    let mut sum = T::zero();
    for (w, b) in ws.iter().zip(&spec.blocks) {
        let wsq: T = w.iter().map(|v| v.norm_sqr()).sum();
        sum = sum + Float::powf(wsq, b.power) / Float::powf(norm, b.exponent);
    }
    Ok(Float::min(base_gap, T::one() - sum))
}

/// Gap diagnostic for a generalized Cartan–Hartogs domain.
pub fn gch_boundary_gap<T>(spec: &GCHSpec<T>, w: &[Complex<T>], z: &MatrixPoint<T>) -> Result<T>
where
    T: Real + nalgebra::RealField,
{
    let base_gap = cartan_boundary_gap(&spec.base, z)?;
    if base_gap <= T::zero() {
        return Ok(base_gap);
    }
    let norm = generic_norm(&spec.base, z)?;
    let rho = Float::powf(norm, Float::recip(T::lit(2.0) * spec.exponent));
    let inv = Complex::new(Float::recip(rho), T::zero());
    let scaled: Vec<Complex<T>> = w.iter().map(|v| v * inv).collect();
    let fiber_point = MatrixPoint::from_coords(&spec.fiber, &scaled)?;
    Ok(Float::min(
        base_gap,
        cartan_boundary_gap(&spec.fiber, &fiber_point)?,
    ))
}

// ---------------------------------------------------------------------------
// Unified spec + point (CLI surface)
// ---------------------------------------------------------------------------

/// Any of the four domain families, as one JSON-serializable spec.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec<T: Real> {
    Cartan(CartanSpec),
    CartanHartogs(CHSpec<T>),
    Hua(HuaSpec<T>),
    Generalized(GCHSpec<T>),
}

/// A point of a [`DomainSpec`] domain: zero or more fiber vectors plus a
/// base matrix point.
#[derive(Clone, Debug)]
pub struct DomainPoint<T: Real> {
    pub fibers: Vec<Vec<Complex<T>>>,
    pub base: MatrixPoint<T>,
}

impl<T: Real> DomainSpec<T> {
    pub fn contains(&self, p: &DomainPoint<T>) -> Result<bool> {
        match self {
            DomainSpec::Cartan(s) => {
                if !p.fibers.is_empty() {
                    return Err(Error::ShapeMismatch(
                        "Cartan domain point takes no fiber vectors".into(),
                    ));
                }
                cartan_contains(s, &p.base)
            }
            DomainSpec::CartanHartogs(s) => {
                let w = single_fiber(&p.fibers)?;
                ch_contains(s, w, &p.base)
            }
            DomainSpec::Hua(s) => hua_contains(s, &p.fibers, &p.base),
            DomainSpec::Generalized(s) => {
                let w = single_fiber(&p.fibers)?;
                gch_contains(s, w, &p.base)
            }
        }
    }

    pub fn boundary_gap(&self, p: &DomainPoint<T>) -> Result<T>
    where
        T: nalgebra::RealField,
    {
        match self {
            DomainSpec::Cartan(s) => cartan_boundary_gap(s, &p.base),
            DomainSpec::CartanHartogs(s) => ch_boundary_gap(s, single_fiber(&p.fibers)?, &p.base),
            DomainSpec::Hua(s) => hua_boundary_gap(s, &p.fibers, &p.base),
            DomainSpec::Generalized(s) => gch_boundary_gap(s, single_fiber(&p.fibers)?, &p.base),
        }
    }

    pub fn base_spec(&self) -> &CartanSpec {
        match self {
            DomainSpec::Cartan(s) => s,
            DomainSpec::CartanHartogs(s) => &s.base,
            DomainSpec::Hua(s) => &s.base,
            DomainSpec::Generalized(s) => &s.base,
        }
    }

    /// Number of fiber vectors a point of this domain carries, with their
    /// expected lengths.
    pub fn fiber_dims(&self) -> Vec<usize> {
        match self {
            DomainSpec::Cartan(_) => vec![],
            DomainSpec::CartanHartogs(s) => vec![s.fiber_dim],
            DomainSpec::Hua(s) => s.blocks.iter().map(|b| b.dim).collect(),
            DomainSpec::Generalized(s) => vec![s.fiber.complex_dim()],
        }
    }
}

fn single_fiber<T: Real>(fibers: &[Vec<Complex<T>>]) -> Result<&Vec<Complex<T>>> {
    if fibers.len() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected exactly one fiber vector, got {}",
            fibers.len()
        )));
    }
    Ok(&fibers[0])
}

// ---------------------------------------------------------------------------
// JSON (de)serialization of specs
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BlockJson<T> {
    #[serde(rename = "N")]
    dim: usize,
    #[serde(rename = "p")]
    power: T,
    #[serde(rename = "K")]
    exponent: T,
}

#[derive(Serialize, Deserialize, Default)]
struct SpecJson<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    fiber_dim: Option<usize>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    exponent: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<BlockJson<T>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<Box<SpecJson<T>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber: Option<Box<SpecJson<T>>>,
}

fn cartan_to_json<T>(s: &CartanSpec) -> SpecJson<T> {
    let mut j = SpecJson::<T> {
        family: None,
        kind: Some(s.kind_label().to_string()),
        m: None,
        n: None,
        p: None,
        q: None,
        fiber_dim: None,
        exponent: None,
        blocks: None,
        base: None,
        fiber: None,
    };
    match *s {
        CartanSpec::TypeI { rows, cols } => {
            j.m = Some(rows);
            j.n = Some(cols);
        }
        CartanSpec::TypeII { degree } => j.p = Some(degree),
        CartanSpec::TypeIII { degree } => j.q = Some(degree),
        CartanSpec::TypeIV { dim } => j.n = Some(dim),
    }
    j
}

fn cartan_from_json<T>(j: &SpecJson<T>) -> std::result::Result<CartanSpec, String> {
    let kind = j.kind.as_deref().ok_or("missing \"kind\"")?;
    let spec = match kind {
        "I" => CartanSpec::TypeI {
            rows: j.m.ok_or("type I needs \"m\"")?,
            cols: j.n.ok_or("type I needs \"n\"")?,
        },
        "II" => CartanSpec::TypeII { degree: j.p.ok_or("type II needs \"p\"")? },
        "III" => CartanSpec::TypeIII { degree: j.q.ok_or("type III needs \"q\"")? },
        "IV" => CartanSpec::TypeIV { dim: j.n.ok_or("type IV needs \"n\"")? },
        other => return Err(format!("unknown Cartan kind {other:?}")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

impl<T: Real + Serialize> Serialize for DomainSpec<T> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self {
            DomainSpec::Cartan(s) => {
                let mut j = cartan_to_json::<T>(s);
                j.family = Some("cartan".into());
                j
            }
            DomainSpec::CartanHartogs(s) => {
                let mut j = cartan_to_json::<T>(&s.base);
                j.family = Some("ch".into());
                j.fiber_dim = Some(s.fiber_dim);
                j.exponent = Some(s.exponent);
                j
            }
            DomainSpec::Hua(s) => {
                let mut j = cartan_to_json::<T>(&s.base);
                j.family = Some("hua".into());
                j.blocks = Some(
                    s.blocks
                        .iter()
                        .map(|b| BlockJson { dim: b.dim, power: b.power, exponent: b.exponent })
                        .collect(),
                );
                j
            }
            DomainSpec::Generalized(s) => SpecJson {
                family: Some("gch".into()),
                kind: None,
                m: None,
                n: None,
                p: None,
                q: None,
                fiber_dim: None,
                exponent: Some(s.exponent),
                blocks: None,
                base: Some(Box::new(cartan_to_json::<T>(&s.base))),
                fiber: Some(Box::new(cartan_to_json::<T>(&s.fiber))),
            },
        };
        j.serialize(ser)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DomainSpec<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let j = SpecJson::<T>::deserialize(de)?;
        let family = j.family.as_deref().ok_or_else(|| DeError::custom("missing \"family\""))?;
        match family {
            "cartan" => Ok(DomainSpec::Cartan(cartan_from_json(&j).map_err(DeError::custom)?)),
            "ch" => {
                let base = cartan_from_json(&j).map_err(DeError::custom)?;
                let fiber_dim =
                    j.fiber_dim.ok_or_else(|| DeError::custom("ch spec needs \"N\""))?;
                let exponent = j.exponent.ok_or_else(|| DeError::custom("ch spec needs \"K\""))?;
                Ok(DomainSpec::CartanHartogs(
                    CHSpec::new(base, fiber_dim, exponent).map_err(DeError::custom)?,
                ))
            }
            "hua" => {
                let base = cartan_from_json(&j).map_err(DeError::custom)?;
                let blocks = j
                    .blocks
                    .ok_or_else(|| DeError::custom("hua spec needs \"blocks\""))?
                    .into_iter()
                    .map(|b| HuaBlock { dim: b.dim, power: b.power, exponent: b.exponent })
                    .collect();
                Ok(DomainSpec::Hua(HuaSpec::new(base, blocks).map_err(DeError::custom)?))
            }
            "gch" => {
                let base = j.base.ok_or_else(|| DeError::custom("gch spec needs \"base\""))?;
                let fiber = j.fiber.ok_or_else(|| DeError::custom("gch spec needs \"fiber\""))?;
                let exponent = j.exponent.ok_or_else(|| DeError::custom("gch spec needs \"K\""))?;
                Ok(DomainSpec::Generalized(
                    GCHSpec::new(
                        cartan_from_json(&base).map_err(DeError::custom)?,
                        cartan_from_json(&fiber).map_err(DeError::custom)?,
                        exponent,
                    )
                    .map_err(DeError::custom)?,
                ))
            }
            other => Err(DeError::custom(format!("unknown family {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_point(v: f64) -> MatrixPoint<f64> {
        MatrixPoint::from_coords(&CartanSpec::TypeI { rows: 1, cols: 1 }, &[c(v, 0.0)]).unwrap()
    }

    #[test]
    fn generic_norm_identity_cases() {
        let spec = CartanSpec::TypeI { rows: 1, cols: 1 };
        assert_eq!(
            generic_norm(&spec, &MatrixPoint::<f64>::zero(&spec)).unwrap(),
            1.0
        );
        assert!((generic_norm(&spec, &scalar_point(0.5)).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn generic_norm_type_iv_real_point() {
        let spec = CartanSpec::TypeIV { dim: 1 };
        let z = MatrixPoint::from_coords(&spec, &[c(0.5, 0.0)]).unwrap();
        // 1 + x^4 - 2x^2 = (1 - x^2)^2 = 0.5625 at x = 0.5
        assert!((generic_norm(&spec, &z).unwrap() - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn cartan_membership_origin_and_boundary() {
        for spec in [
            CartanSpec::TypeI { rows: 2, cols: 3 },
            CartanSpec::TypeII { degree: 2 },
            CartanSpec::TypeIII { degree: 3 },
            CartanSpec::TypeIV { dim: 2 },
        ] {
            assert!(cartan_contains(&spec, &MatrixPoint::<f64>::zero(&spec)).unwrap());
        }
        let spec = CartanSpec::TypeI { rows: 1, cols: 1 };
        assert!(!cartan_contains(&spec, &scalar_point(1.0)).unwrap());
    }

    #[test]
    fn type_iv_two_conditions() {
        let spec = CartanSpec::TypeIV { dim: 2 };
        let z = MatrixPoint::from_coords(&spec, &[c(0.9, 0.0), c(0.0, 0.0)]).unwrap();
        // 1 + 0.6561 - 1.62 = 0.0361 > 0 and 1 - 0.6561 > 0
        assert!(cartan_contains(&spec, &z).unwrap());
        let far = MatrixPoint::from_coords(&spec, &[c(1.1, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(!cartan_contains(&spec, &far).unwrap());
    }

    #[test]
    fn ch_membership_examples() {
        let base = CartanSpec::TypeI { rows: 1, cols: 1 };
        let spec = CHSpec::new(base, 1, 1.0).unwrap();
        assert!(ch_contains(&spec, &[c(0.0, 0.0)], &MatrixPoint::zero(&base)).unwrap());
        assert!(ch_contains(&spec, &[c(0.5, 0.0)], &scalar_point(0.5)).unwrap());
        let spec2 = CHSpec::new(base, 1, 2.0).unwrap();
        // 0.95^4 ≈ 0.8145 ≥ 0.75
        assert!(!ch_contains(&spec2, &[c(0.95, 0.0)], &scalar_point(0.5)).unwrap());
    }

    #[test]
    fn ch_shape_mismatch() {
        let base = CartanSpec::TypeI { rows: 1, cols: 1 };
        let spec = CHSpec::new(base, 2, 1.0).unwrap();
        assert!(matches!(
            ch_contains(&spec, &[c(0.0, 0.0)], &MatrixPoint::zero(&base)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn hua_membership_examples() {
        let base = CartanSpec::TypeI { rows: 1, cols: 1 };
        let spec = HuaSpec::new(
            base,
            vec![
                HuaBlock { dim: 1, power: 1.0, exponent: 1.0 },
                HuaBlock { dim: 1, power: 1.0, exponent: 1.0 },
            ],
        )
        .unwrap();
        let origin = MatrixPoint::zero(&base);
        assert!(hua_contains(&spec, &[vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]], &origin).unwrap());
        // 0.25 + 0.25 < 1
        assert!(hua_contains(&spec, &[vec![c(0.5, 0.0)], vec![c(0.5, 0.0)]], &origin).unwrap());
    }

    #[test]
    fn gch_membership_examples() {
        let b = CartanSpec::TypeI { rows: 1, cols: 1 };
        let spec = GCHSpec::new(b, b, 1.0).unwrap();
        assert!(gch_contains(&spec, &[c(0.0, 0.0)], &MatrixPoint::zero(&b)).unwrap());
        // |0.5/sqrt(0.75)|^2 = 1/3 < 1
        assert!(gch_contains(&spec, &[c(0.5, 0.0)], &scalar_point(0.5)).unwrap());
        // z outside the base: false, not an error
        assert!(!gch_contains(&spec, &[c(0.0, 0.0)], &scalar_point(1.5)).unwrap());
    }

    #[test]
    fn gch_with_type_iv_fiber_at_base_origin_reduces_to_cartan() {
        let base = CartanSpec::TypeI { rows: 1, cols: 1 };
        let fiber = CartanSpec::TypeIV { dim: 2 };
        let spec = GCHSpec::new(base, fiber, 2.0).unwrap();
        let origin = MatrixPoint::zero(&base);
        for coords in [[c(0.9, 0.0), c(0.0, 0.0)], [c(0.8, 0.1), c(0.1, 0.2)]] {
            let direct = cartan_contains(
                &fiber,
                &MatrixPoint::from_coords(&fiber, &coords).unwrap(),
            )
            .unwrap();
            assert_eq!(gch_contains(&spec, &coords, &origin).unwrap(), direct);
        }
    }

    #[test]
    fn reshape_round_trip_type_ii_iii() {
        let spec2 = CartanSpec::TypeII { degree: 3 };
        let coords: Vec<C64> = (0..spec2.complex_dim())
            .map(|k| c(0.1 * k as f64, -0.05 * k as f64))
            .collect();
        let p = MatrixPoint::from_coords(&spec2, &coords).unwrap();
        assert_eq!(p.coords(&spec2), coords);

        let spec3 = CartanSpec::TypeIII { degree: 4 };
        let coords: Vec<C64> = (0..spec3.complex_dim())
            .map(|k| c(0.02 * k as f64 + 0.01, 0.03 * k as f64))
            .collect();
        let p = MatrixPoint::from_coords(&spec3, &coords).unwrap();
        assert_eq!(p.coords(&spec3), coords);
        // skew invariant holds exactly
        MatrixPoint::new(&spec3, p.matrix().clone()).unwrap();
    }

    #[test]
    fn boundary_gap_sign() {
        let spec = CartanSpec::TypeI { rows: 1, cols: 1 };
        assert!(cartan_boundary_gap(&spec, &scalar_point(0.5)).unwrap() > 0.0);
        assert!(cartan_boundary_gap(&spec, &scalar_point(1.5)).unwrap() < 0.0);
    }

    #[test]
    fn spec_json_round_trips() {
        let specs: Vec<DomainSpec<f64>> = vec![
            DomainSpec::Cartan(CartanSpec::TypeIII { degree: 3 }),
            DomainSpec::CartanHartogs(
                CHSpec::new(CartanSpec::TypeI { rows: 1, cols: 2 }, 1, 2.0).unwrap(),
            ),
            DomainSpec::Hua(
                HuaSpec::new(
                    CartanSpec::TypeIV { dim: 2 },
                    vec![HuaBlock { dim: 2, power: 1.5, exponent: 0.5 }],
                )
                .unwrap(),
            ),
            DomainSpec::Generalized(
                GCHSpec::new(
                    CartanSpec::TypeII { degree: 2 },
                    CartanSpec::TypeIV { dim: 3 },
                    1.25,
                )
                .unwrap(),
            ),
        ];
        for spec in specs {
            let text = serde_json::to_string(&spec).unwrap();
            let back: DomainSpec<f64> = serde_json::from_str(&text).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn spec_json_matches_schema() {
        let spec = DomainSpec::CartanHartogs(
            CHSpec::new(CartanSpec::TypeI { rows: 1, cols: 2 }, 1, 2.0).unwrap(),
        );
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["family"], "ch");
        assert_eq!(v["kind"], "I");
        assert_eq!(v["m"], 1);
        assert_eq!(v["n"], 2);
        assert_eq!(v["N"], 1);
        assert_eq!(v["K"], 2.0);
    }
}
