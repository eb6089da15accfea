//! Metric tensors as complex Hessians of log-potentials: the Bergman
//! metric of the fibered ball domains, the Y(Iλ) comparison metric induced
//! by G_λ = Y^λ det(I − Z Z̄ᵗ)^{−(m+n+N/K)}, closed-form ball metrics, the
//! Lu constant, and two-sided equivalence-ratio sampling.
//!
//! Mixed second derivatives ∂²/∂zᵢ∂z̄ⱼ are taken by central finite
//! differences in the 2M real coordinates with one Richardson level:
//! ∂²/∂zᵢ∂z̄ⱼ = ¼[(∂ₓᵢ∂ₓⱼ + ∂ᵧᵢ∂ᵧⱼ) + i(∂ₓᵢ∂ᵧⱼ − ∂ᵧᵢ∂ₓⱼ)]. The assembled
//! matrix is Hermitian-symmetrized; the pre-symmetrization defect and an
//! estimated truncation error are reported alongside.

use num_complex::Complex;
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::domains::{generic_norm, CHSpec, CartanSpec, MatrixPoint};
use crate::error::{Error, Result};
use crate::kernel::KernelYI;
use crate::linalg::{self, CMatrix};
use crate::sample;
use crate::scalar::Real;

/// Relative finite-difference step: h = FD_STEP_FACTOR · (boundary gap).
pub const FD_STEP_FACTOR: f64 = 1e-4;

/// A Hermitian matrix representing a metric tensor at a point. Stored
/// symmetrized; `v ↦ Σ Tⱼₖ vⱼ v̄ₖ` is the squared length form.
#[derive(Clone, Debug)]
pub struct HermitianForm<T: Real> {
    mat: CMatrix<T>,
}

impl<T: Real> HermitianForm<T> {
    /// Symmetrize and wrap.
    pub fn new(mat: CMatrix<T>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "metric tensor must be square");
        HermitianForm { mat: linalg::hermitize(&mat) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    /// Squared length of a tangent vector: Σⱼₖ Tⱼₖ vⱼ v̄ₖ (real for a
    /// Hermitian form).
    pub fn length_sq(&self, v: &[Complex<T>]) -> T {
        assert_eq!(v.len(), self.dim(), "tangent vector dimension mismatch");
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..v.len() {
            for k in 0..v.len() {
                acc += self.mat[(j, k)] * v[j] * v[k].conj();
            }
        }
        acc.re
    }

    /// Largest entrywise difference to another form.
    pub fn max_entry_diff(&self, other: &HermitianForm<T>) -> T {
        let mut worst = T::zero();
        for (a, b) in self.mat.iter().zip(other.mat.iter()) {
            let d = (*a - *b).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Uniform scaling c·T.
    pub fn scaled(&self, c: T) -> Self {
        HermitianForm { mat: self.mat.map(|v| v * Complex::new(c, T::zero())) }
    }

    pub fn min_eigenvalue(&self) -> T
    where
        T: nalgebra::RealField,
    {
        linalg::min_eigenvalue_hermitian(&self.mat)
    }
}

/// A finite-difference Hessian with its diagnostics.
#[derive(Clone, Debug)]
pub struct HessianEstimate<T: Real> {
    pub form: HermitianForm<T>,
    /// Richardson-based truncation-error estimate (max over entries).
    pub trunc_error: T,
    /// Hermitian defect before symmetrization.
    pub hermitian_defect: T,
}

/// Complex Hessian (∂² φ / ∂zᵢ ∂z̄ⱼ) of a real scalar field on Cᴹ by
/// central differences with one Richardson extrapolation level. The point
/// must be interior, with boundary distance > 10·step.
pub fn complex_hessian<T, F>(
    potential: &F,
    point: &[Complex<T>],
    step: T,
) -> Result<HessianEstimate<T>>
where
    T: Real,
    F: Fn(&[Complex<T>]) -> Result<T>,
{
    let m = point.len();
    assert!(m > 0, "empty point");
    assert!(step > T::zero(), "step must be positive");
    // real-coordinate shift: index a < m moves Re z_a, a ≥ m moves Im z_{a−m}
    let eval = |shifts: &[(usize, T)]| -> Result<T> {
        let mut p = point.to_vec();
        for &(a, d) in shifts {
            if a < m {
                p[a].re = p[a].re + d;
            } else {
                p[a - m].im = p[a - m].im + d;
            }
        }
        potential(&p)
    };
    let center = eval(&[])?;
    let second = |a: usize, b: usize, h: T| -> Result<T> {
        if a == b {
            let plus = eval(&[(a, h)])?;
            let minus = eval(&[(a, -h)])?;
            Ok((plus - T::lit(2.0) * center + minus) / (h * h))
        } else {
            let pp = eval(&[(a, h), (b, h)])?;
            let pm = eval(&[(a, h), (b, -h)])?;
            let mp = eval(&[(a, -h), (b, h)])?;
            let mm = eval(&[(a, -h), (b, -h)])?;
            Ok((pp - pm - mp + mm) / (T::lit(4.0) * h * h))
        }
    };
    // one Richardson level: D = (4·D(h/2) − D(h))/3, error ≈ |D(h/2) − D(h)|/3
    let refined = |a: usize, b: usize| -> Result<(T, T)> {
        let coarse = second(a, b, step)?;
        let fine = second(a, b, step * T::lit(0.5))?;
        Ok((
            (T::lit(4.0) * fine - coarse) / T::lit(3.0),
            (fine - coarse).abs() / T::lit(3.0),
        ))
    };

    let mut mat = CMatrix::<T>::zeros(m, m);
    let mut trunc = T::zero();
    for j in 0..m {
        for k in 0..m {
            let (xx, e1) = refined(j, k)?;
            let (yy, e2) = refined(m + j, m + k)?;
            let (xy, e3) = refined(j, m + k)?;
            let (yx, e4) = refined(m + j, k)?;
            let quarter = T::lit(0.25);
            mat[(j, k)] = Complex::new(quarter * (xx + yy), quarter * (xy - yx));
            let e = quarter * (e1 + e2 + e3 + e4);
            if e > trunc {
                trunc = e;
            }
        }
    }
    let defect = linalg::hermitian_defect(&mat);
    Ok(HessianEstimate { form: HermitianForm::new(mat), trunc_error: trunc, hermitian_defect: defect })
}

/// Bergman metric of the fibered ball domain: complex Hessian of
/// log K((W,Z); (W,Z)) at the flat point [w, z₁, …, zₙ].
pub fn bergman_metric<T: Real>(
    kernel: &KernelYI<T>,
    point: &[Complex<T>],
) -> Result<HessianEstimate<T>> {
    if point.len() != kernel.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, domain has {}",
            point.len(),
            kernel.dim()
        )));
    }
    let gap = kernel.boundary_gap(point[0], &point[1..])?;
    if gap <= T::zero() {
        return Err(Error::OutsideDomain("point has no boundary margin".into()));
    }
    let step = T::lit(FD_STEP_FACTOR) * gap;
    let potential = |p: &[Complex<T>]| -> Result<T> {
        Ok(kernel.eval_diag(p[0], &p[1..])?.ln())
    };
    complex_hessian(&potential, point, step)
}

/// The comparison potential G_λ(Z, W) = Y^λ det(I − Z Z̄ᵗ)^{−(m+n+N/K)}
/// with Y = (1−X)^{−1}, X = |W|² det(I − Z Z̄ᵗ)^{−1/K}.
pub fn g_lambda_potential<T: Real>(
    w: &[Complex<T>],
    z: &MatrixPoint<T>,
    lambda: T,
    spec: &CHSpec<T>,
) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    if w.len() != spec.fiber_dim {
        return Err(Error::ShapeMismatch("fiber dimension mismatch".into()));
    }
    let (rows, cols) = match spec.base {
        CartanSpec::TypeI { rows, cols } => (rows, cols),
        _ => {
            return Err(Error::InvalidParameter(
                "G_lambda is defined over type I bases".into(),
            ))
        }
    };
    let det = generic_norm(&spec.base, z)?;
    if det <= T::zero() {
        return Err(Error::OutsideDomain("base point outside its domain".into()));
    }
    let wsq: T = w.iter().map(|v| v.norm_sqr()).sum();
    let x = wsq * det.powf(-spec.exponent.recip());
    if x >= T::one() {
        return Err(Error::OutsideDomain("fiber invariant X ≥ 1".into()));
    }
    let y = (T::one() - x).recip();
    let power = T::of(rows + cols) + T::of(spec.fiber_dim) / spec.exponent;
    Ok(y.powf(lambda) * det.powf(-power))
}

/// Metric induced by log G_λ: complex Hessian over all M = N + mn
/// coordinates, ordered [w₁, …, w_N, z-coords row-major].
pub fn y_lambda_metric<T: Real>(
    point: &[Complex<T>],
    lambda: T,
    spec: &CHSpec<T>,
) -> Result<HessianEstimate<T>> {
    let base_dim = spec.base.complex_dim();
    if point.len() != spec.fiber_dim + base_dim {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, domain has {}",
            point.len(),
            spec.fiber_dim + base_dim
        )));
    }
    let split = spec.fiber_dim;
    let potential = |p: &[Complex<T>]| -> Result<T> {
        let zp = MatrixPoint::from_coords(&spec.base, &p[split..])?;
        Ok(g_lambda_potential(&p[..split], &zp, lambda, spec)?.ln())
    };
    let gap = ch_gap_for_step(spec, point)?;
    let step = T::lit(FD_STEP_FACTOR) * gap;
    complex_hessian(&potential, point, step)
}

/// Coordinate-space margin used only to size FD stencils. For a type I
/// base the ray boundary scale s* satisfies s*·σ_max(Z) = 1, so
/// 1 − 1/s* is the exact operator-norm margin; the fiber margin is the
/// slack of |W| against det^{1/(2K)}.
fn ch_gap_for_step<T: Real>(spec: &CHSpec<T>, point: &[Complex<T>]) -> Result<T> {
    let split = spec.fiber_dim;
    let zp = MatrixPoint::from_coords(&spec.base, &point[split..])?;
    let znorm = point[split..].iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    let base_gap = if znorm < T::lit(1e-9) {
        T::one()
    } else {
        let s = sample::boundary_scale(&spec.base, &zp)?;
        if s <= T::one() {
            return Err(Error::OutsideDomain("base point outside its domain".into()));
        }
        T::one() - s.recip()
    };
    let det = generic_norm(&spec.base, &zp)?;
    if det <= T::zero() {
        return Err(Error::OutsideDomain("base point outside its domain".into()));
    }
    let bound = det.powf((T::lit(2.0) * spec.exponent).recip());
    let wnorm = point[..split].iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    let gap = Float::min(base_gap, bound - wnorm);
    if gap <= T::zero() {
        return Err(Error::OutsideDomain("point has no boundary margin".into()));
    }
    Ok(gap)
}

/// Closed-form Bergman and Carathéodory lengths of a tangent vector v at a
/// point z of the unit ball in Cᴹ. The Bergman metric tensor is
/// (M+1)[(1−|z|²)δⱼₖ + z̄ⱼzₖ]/(1−|z|²)²; the Carathéodory length is the
/// same quadratic form without the (M+1) factor.
pub fn ball_metrics<T: Real>(
    dim: usize,
    z: &[Complex<T>],
    v: &[Complex<T>],
) -> Result<(T, T)> {
    if z.len() != dim || v.len() != dim {
        return Err(Error::ShapeMismatch("ball point/vector dimension mismatch".into()));
    }
    let zsq: T = z.iter().map(|c| c.norm_sqr()).sum();
    if zsq >= T::one() {
        return Err(Error::OutsideDomain("point outside the unit ball".into()));
    }
    let q = T::one() - zsq;
    let mut s = Complex::new(T::zero(), T::zero());
    for (vj, zj) in v.iter().zip(z.iter()) {
        s += vj * zj.conj();
    }
    let vsq: T = v.iter().map(|c| c.norm_sqr()).sum();
    let caratheodory_sq = (q * vsq + s.norm_sqr()) / (q * q);
    let bergman_sq = T::of(dim + 1) * caratheodory_sq;
    Ok((bergman_sq.sqrt(), caratheodory_sq.sqrt()))
}

/// Lu constant of the unit ball in Cᴹ: supremum of Carathéodory-to-Bergman
/// length ratios over seeded samples. Equals (1/(M+1))^{1/2}; the ratio is
/// constant over the ball, so the sup is attained everywhere.
pub fn lu_constant_ball<T: Real>(dim: usize) -> T {
    lu_constant_ball_sampled(dim, 200, sample::DEFAULT_SEED)
}

pub fn lu_constant_ball_sampled<T: Real>(dim: usize, samples: usize, seed: u64) -> T {
    let mut rng = sample::rng(seed);
    let mut sup = T::zero();
    for _ in 0..samples {
        let z = sample::ball_point::<T>(&mut rng, dim, T::lit(0.9));
        let v = sample::unit_sphere::<T>(&mut rng, dim);
        let (b, c) = ball_metrics(dim, &z, &v).expect("sample inside the ball");
        let ratio = c / b;
        if ratio > sup {
            sup = ratio;
        }
    }
    sup
}

/// Two-sided equivalence witness for a pair of metrics on the fibered ball
/// domain: min and max of lengthA/lengthB over seeded samples of interior
/// points and unit directions.
#[derive(Clone, Copy, Debug)]
pub struct RatioReport<T: Real> {
    pub min_ratio: T,
    pub max_ratio: T,
    pub sample_count: usize,
}

pub fn equivalence_ratio<T, A, B>(
    metric_a: &A,
    metric_b: &B,
    spec: &CHSpec<T>,
    samples: usize,
    seed: u64,
) -> Result<RatioReport<T>>
where
    T: Real,
    A: Fn(&[Complex<T>]) -> Result<HermitianForm<T>>,
    B: Fn(&[Complex<T>]) -> Result<HermitianForm<T>>,
{
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut rng: ChaCha8Rng = sample::rng(seed);
    let dim = spec.fiber_dim + spec.base.complex_dim();
    let mut min_ratio = T::infinity();
    let mut max_ratio = T::zero();
    for _ in 0..samples {
        let point = sample::interior_point_ch(spec, &mut rng, T::lit(0.85))?;
        let v = sample::unit_sphere::<T>(&mut rng, dim);
        let fa = metric_a(&point)?;
        let fb = metric_b(&point)?;
        let la = fa.length_sq(&v);
        let lb = fb.length_sq(&v);
        if !(la > T::zero()) || !(lb > T::zero()) {
            return Err(Error::DegenerateMetric);
        }
        let ratio = (la / lb).sqrt();
        if ratio < min_ratio {
            min_ratio = ratio;
        }
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }
    Ok(RatioReport { min_ratio, max_ratio, sample_count: samples })
}
