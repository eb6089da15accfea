//! Bergman representative coordinates from a kernel oracle, Lu's
//! representative-centre test, and the normalized automorphism-candidate
//! map.
//!
//! The representative coordinates based at t₀ are
//! f(z) = [∂/∂W̄ log(K(z, W)/K(W, W))]_{W=t₀} · T⁻¹(t₀, t̄₀) · A + s₀,
//! with T the Bergman metric tensor at t₀, A = I and s₀ = 0 by default.
//! They take t₀ to 0 with identity Jacobian. A point t is a representative
//! centre when the mixed tensor T(z, t̄) = ∂²/∂z∂w̄ log K(z, w̄)|_{w=t} is
//! independent of z.
//!
//! Oracles only need to expose kernel values; derivative defaults run
//! central differences (step 1e-5, one Richardson level) on the kernel
//! itself — never through a complex logarithm, so branch cuts cannot
//! corrupt phases. The disk, ball and half-plane oracles override the
//! defaults with closed forms and serve as the precision reference.

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::kernel::KernelYI;
use crate::linalg::{self, CMatrix};
use crate::metrics::{complex_hessian, HermitianForm};
use crate::scalar::Real;

/// Default step for first-derivative stencils on numeric oracles.
pub const FD_STEP: f64 = 1e-5;
/// Step for the nested mixed-tensor stencils.
pub const FD_STEP_MIXED: f64 = 1e-4;

/// A Bergman kernel K(z, w̄): holomorphic in the first argument,
/// antiholomorphic in the second, Hermitian, positive on the diagonal.
pub trait KernelOracle<T: Real> {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>>;

    /// Margin to the domain boundary at `p`, used to size FD stencils.
    fn boundary_gap(&self, p: &[Complex<T>]) -> Result<T>;

    /// ∂/∂w̄ log K(z, w̄) at w = t. Default: central differences on K
    /// divided by K(z, t).
    fn grad_wbar_log(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let k0 = self.eval(z, t)?;
        if k0.norm() < T::lit(1e-300) {
            return Err(Error::KernelZero);
        }
        let h = self.fd_step(t)?;
        let mut out = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let dre = central(&|p| self.eval(z, p), t, j, h, false)?;
            let dim_part = central(&|p| self.eval(z, p), t, j, h, true)?;
            // ∂/∂w̄ = (∂/∂u + i ∂/∂v)/2
            let d = (dre + dim_part * Complex::i()) * Complex::new(T::lit(0.5), T::zero());
            out.push(d / k0);
        }
        Ok(out)
    }

    /// Bergman metric tensor T(t, t̄) at a diagonal point. Default:
    /// finite-difference complex Hessian of log K(t, t̄).
    fn metric(&self, t: &[Complex<T>]) -> Result<HermitianForm<T>> {
        let gap = self.boundary_gap(t)?;
        if gap <= T::zero() {
            return Err(Error::OutsideDomain("base point has no boundary margin".into()));
        }
        let potential = |p: &[Complex<T>]| -> Result<T> {
            let v = self.eval(p, p)?;
            if v.re <= T::zero() {
                return Err(Error::KernelZero);
            }
            Ok(v.re.ln())
        };
        Ok(complex_hessian(&potential, t, T::lit(1e-4) * gap)?.form)
    }

    /// Mixed tensor T(z, t̄)ⱼₖ = ∂²/∂zⱼ∂w̄ₖ log K(z, w̄) at w = t.
    /// Default: product-rule assembly [∂²K·K − ∂₁K·∂₂̄K]/K² with every
    /// derivative taken on K itself by central differences.
    fn mixed_metric(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<CMatrix<T>> {
        let n = self.dim();
        let k0 = self.eval(z, t)?;
        if k0.norm() < T::lit(1e-300) {
            return Err(Error::KernelZero);
        }
        let h = T::lit(FD_STEP_MIXED);
        let half = Complex::new(T::lit(0.5), T::zero());
        // holomorphic derivatives in z: (∂x − i ∂y)/2 of K(·, t)
        let mut dz = Vec::with_capacity(n);
        for j in 0..n {
            let dx = central(&|p| self.eval(p, t), z, j, h, false)?;
            let dy = central(&|p| self.eval(p, t), z, j, h, true)?;
            dz.push((dx - dy * Complex::i()) * half);
        }
        // antiholomorphic derivatives in w: (∂u + i ∂v)/2 of K(z, ·)
        let mut dwbar = Vec::with_capacity(n);
        for k in 0..n {
            let du = central(&|p| self.eval(z, p), t, k, h, false)?;
            let dv = central(&|p| self.eval(z, p), t, k, h, true)?;
            dwbar.push((du + dv * Complex::i()) * half);
        }
        let quarter = Complex::new(T::lit(0.25), T::zero());
        let mut out = CMatrix::<T>::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                // ∂²/∂zⱼ∂w̄ₖ = ¼[∂x∂u + ∂y∂v + i(∂x∂v − ∂y∂u)]
                let xu = cross(&|a, b| self.eval(a, b), z, t, j, k, h, false, false)?;
                let yv = cross(&|a, b| self.eval(a, b), z, t, j, k, h, true, true)?;
                let xv = cross(&|a, b| self.eval(a, b), z, t, j, k, h, false, true)?;
                let yu = cross(&|a, b| self.eval(a, b), z, t, j, k, h, true, false)?;
                let d2 = (xu + yv + (xv - yu) * Complex::i()) * quarter;
                out[(j, k)] = d2 / k0 - dz[j] * dwbar[k] / (k0 * k0);
            }
        }
        Ok(out)
    }

    fn fd_step(&self, p: &[Complex<T>]) -> Result<T> {
        let gap = self.boundary_gap(p)?;
        Ok(Float::min(T::lit(FD_STEP), T::lit(0.05) * gap))
    }
}

/// Richardson-refined central difference of a complex-valued function
/// along one real coordinate of the j-th complex entry.
fn central<T: Real, F>(
    f: &F,
    base: &[Complex<T>],
    j: usize,
    h: T,
    imaginary: bool,
) -> Result<Complex<T>>
where
    F: Fn(&[Complex<T>]) -> Result<Complex<T>>,
{
    let diff = |hh: T| -> Result<Complex<T>> {
        let mut plus = base.to_vec();
        let mut minus = base.to_vec();
        if imaginary {
            plus[j].im = plus[j].im + hh;
            minus[j].im = minus[j].im - hh;
        } else {
            plus[j].re = plus[j].re + hh;
            minus[j].re = minus[j].re - hh;
        }
        Ok((f(&plus)? - f(&minus)?) / Complex::new(T::lit(2.0) * hh, T::zero()))
    };
    let coarse = diff(h)?;
    let fine = diff(h * T::lit(0.5))?;
    let third = Complex::new(T::lit(3.0).recip(), T::zero());
    Ok((fine * Complex::new(T::lit(4.0), T::zero()) - coarse) * third)
}

/// Four-point cross stencil for a mixed second derivative, one real
/// coordinate in each of the two slots, with one Richardson level.
#[allow(clippy::too_many_arguments)]
fn cross<T: Real, F>(
    f: &F,
    z: &[Complex<T>],
    w: &[Complex<T>],
    j: usize,
    k: usize,
    h: T,
    z_imag: bool,
    w_imag: bool,
) -> Result<Complex<T>>
where
    F: Fn(&[Complex<T>], &[Complex<T>]) -> Result<Complex<T>>,
{
    let stencil = |hh: T| -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (sz, sw, sign) in [
            (hh, hh, T::one()),
            (hh, -hh, -T::one()),
            (-hh, hh, -T::one()),
            (-hh, -hh, T::one()),
        ] {
            let mut zz = z.to_vec();
            let mut ww = w.to_vec();
            if z_imag {
                zz[j].im = zz[j].im + sz;
            } else {
                zz[j].re = zz[j].re + sz;
            }
            if w_imag {
                ww[k].im = ww[k].im + sw;
            } else {
                ww[k].re = ww[k].re + sw;
            }
            acc += f(&zz, &ww)? * Complex::new(sign, T::zero());
        }
        Ok(acc / Complex::new(T::lit(4.0) * hh * hh, T::zero()))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h * T::lit(0.5))?;
    let third = Complex::new(T::lit(3.0).recip(), T::zero());
    Ok((fine * Complex::new(T::lit(4.0), T::zero()) - coarse) * third)
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Unit disk, K(z, w̄) = 1/(π(1 − z w̄)²). Analytic derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiskOracle;

impl<T: Real> KernelOracle<T> for DiskOracle {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
        let q = Complex::new(T::one(), T::zero()) - z[0] * w[0].conj();
        Ok((q * q * Complex::new(T::PI(), T::zero())).finv())
    }

    fn boundary_gap(&self, p: &[Complex<T>]) -> Result<T> {
        Ok(T::one() - p[0].norm())
    }

    fn grad_wbar_log(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let q = Complex::new(T::one(), T::zero()) - z[0] * t[0].conj();
        Ok(vec![z[0] * Complex::new(T::lit(2.0), T::zero()) / q])
    }

    fn metric(&self, t: &[Complex<T>]) -> Result<HermitianForm<T>> {
        let q = T::one() - t[0].norm_sqr();
        if q <= T::zero() {
            return Err(Error::OutsideDomain("point outside the disk".into()));
        }
        let mut m = CMatrix::<T>::zeros(1, 1);
        m[(0, 0)] = Complex::new(T::lit(2.0) / (q * q), T::zero());
        Ok(HermitianForm::new(m))
    }

    fn mixed_metric(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<CMatrix<T>> {
        let q = Complex::new(T::one(), T::zero()) - z[0] * t[0].conj();
        let mut m = CMatrix::<T>::zeros(1, 1);
        m[(0, 0)] = Complex::new(T::lit(2.0), T::zero()) / (q * q);
        Ok(m)
    }
}

/// Unit ball in Cᴹ, K(z, w̄) = M!/πᴹ · (1 − ⟨z, w⟩)^{−(M+1)}. Analytic
/// derivatives.
#[derive(Clone, Copy, Debug)]
pub struct BallOracle {
    pub dim: usize,
}

fn ball_pairing<T: Real>(z: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    let mut s = Complex::new(T::zero(), T::zero());
    for (a, b) in z.iter().zip(w.iter()) {
        s += a * b.conj();
    }
    s
}

impl<T: Real> KernelOracle<T> for BallOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
        let m = self.dim;
        let q = Complex::new(T::one(), T::zero()) - ball_pairing(z, w);
        let factor = crate::scalar::factorial::<T>(m) / T::PI().powi(m as i32);
        Ok(q.powi(-(m as i32 + 1)) * Complex::new(factor, T::zero()))
    }

    fn boundary_gap(&self, p: &[Complex<T>]) -> Result<T> {
        let n: T = p.iter().map(|c| c.norm_sqr()).sum();
        Ok(T::one() - n.sqrt())
    }

    fn grad_wbar_log(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let q = Complex::new(T::one(), T::zero()) - ball_pairing(z, t);
        let c = Complex::new(T::of(self.dim + 1), T::zero());
        Ok(z.iter().map(|zk| zk * c / q).collect())
    }

    fn metric(&self, t: &[Complex<T>]) -> Result<HermitianForm<T>> {
        let q = T::one() - t.iter().map(|c| c.norm_sqr()).sum::<T>();
        if q <= T::zero() {
            return Err(Error::OutsideDomain("point outside the ball".into()));
        }
        let m = self.dim;
        let scale = T::of(m + 1) / (q * q);
        let mut mat = CMatrix::<T>::zeros(m, m);
        for j in 0..m {
            for k in 0..m {
                let delta = if j == k { q } else { T::zero() };
                mat[(j, k)] = (Complex::new(delta, T::zero()) + t[j].conj() * t[k])
                    * Complex::new(scale, T::zero());
            }
        }
        Ok(HermitianForm::new(mat))
    }

    fn mixed_metric(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<CMatrix<T>> {
        let q = Complex::new(T::one(), T::zero()) - ball_pairing(z, t);
        let m = self.dim;
        let scale = Complex::new(T::of(m + 1), T::zero()) / (q * q);
        let mut mat = CMatrix::<T>::zeros(m, m);
        for j in 0..m {
            for k in 0..m {
                let delta = if j == k { q } else { Complex::new(T::zero(), T::zero()) };
                mat[(j, k)] = (delta + z[k] * t[j].conj()) * scale;
            }
        }
        Ok(mat)
    }
}

/// Upper half-plane, K(z, w̄) = −1/(π(z − w̄)²). Analytic derivatives;
/// used as the Möbius-transformed disk in equivariance checks.
#[derive(Clone, Copy, Debug, Default)]
pub struct HalfPlaneOracle;

impl<T: Real> KernelOracle<T> for HalfPlaneOracle {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
        let d = z[0] - w[0].conj();
        Ok(-(d * d * Complex::new(T::PI(), T::zero())).finv())
    }

    fn boundary_gap(&self, p: &[Complex<T>]) -> Result<T> {
        Ok(p[0].im)
    }

    fn grad_wbar_log(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let d = z[0] - t[0].conj();
        Ok(vec![Complex::new(T::lit(2.0), T::zero()) / d])
    }

    fn metric(&self, t: &[Complex<T>]) -> Result<HermitianForm<T>> {
        let y = t[0].im;
        if y <= T::zero() {
            return Err(Error::OutsideDomain("point outside the half-plane".into()));
        }
        let mut m = CMatrix::<T>::zeros(1, 1);
        m[(0, 0)] = Complex::new((T::lit(2.0) * y * y).recip(), T::zero());
        Ok(HermitianForm::new(m))
    }

    fn mixed_metric(&self, z: &[Complex<T>], t: &[Complex<T>]) -> Result<CMatrix<T>> {
        let d = z[0] - t[0].conj();
        let mut m = CMatrix::<T>::zeros(1, 1);
        m[(0, 0)] = -Complex::new(T::lit(2.0), T::zero()) / (d * d);
        Ok(m)
    }
}

/// Kernel oracle for the fibered ball domain, FD derivative defaults.
#[derive(Clone, Debug)]
pub struct YIOracle<T: Real> {
    kernel: KernelYI<T>,
}

impl<T: Real> YIOracle<T> {
    pub fn new(base_dim: usize, exponent: T) -> Self {
        YIOracle { kernel: KernelYI::new(base_dim, exponent) }
    }

    pub fn kernel(&self) -> &KernelYI<T> {
        &self.kernel
    }
}

impl<T: Real> KernelOracle<T> for YIOracle<T> {
    fn dim(&self) -> usize {
        self.kernel.dim()
    }

    fn eval(&self, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
        self.kernel.eval(z[0], &z[1..], w[0], &w[1..])
    }

    fn boundary_gap(&self, p: &[Complex<T>]) -> Result<T> {
        self.kernel.boundary_gap(p[0], &p[1..])
    }
}

// ---------------------------------------------------------------------------
// Representative coordinates
// ---------------------------------------------------------------------------

/// Base data of the representative map: the base point, the metric tensor
/// there, an optional Jacobian factor A and target s₀.
#[derive(Clone, Debug)]
pub struct RepBase<T: Real> {
    pub base_point: Vec<Complex<T>>,
    pub metric: HermitianForm<T>,
    pub jacobian_factor: Option<CMatrix<T>>,
    pub target: Option<Vec<Complex<T>>>,
}

impl<T: Real> RepBase<T> {
    /// Base at t₀ with A = I and s₀ = 0.
    pub fn at<O: KernelOracle<T> + ?Sized>(oracle: &O, t0: &[Complex<T>]) -> Result<Self> {
        if t0.len() != oracle.dim() {
            return Err(Error::ShapeMismatch("base point dimension mismatch".into()));
        }
        Ok(RepBase {
            base_point: t0.to_vec(),
            metric: oracle.metric(t0)?,
            jacobian_factor: None,
            target: None,
        })
    }
}

/// Representative coordinates of z with respect to the base:
/// f(z) = [grad_w̄ log K(z,·)|_{t₀} − grad_w̄ log K(t₀,·)|_{t₀}] · T⁻¹ · A + s₀.
pub fn rep_coordinates<T: Real, O: KernelOracle<T> + ?Sized>(
    oracle: &O,
    base: &RepBase<T>,
    z: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if z.len() != oracle.dim() {
        return Err(Error::ShapeMismatch("point dimension mismatch".into()));
    }
    let g_z = oracle.grad_wbar_log(z, &base.base_point)?;
    let g_t = oracle.grad_wbar_log(&base.base_point, &base.base_point)?;
    let diff: Vec<Complex<T>> = g_z.iter().zip(g_t.iter()).map(|(a, b)| a - b).collect();
    // row-vector × T⁻¹: fᵢ = Σⱼ diffⱼ (T⁻¹)ⱼᵢ  ⇔  conj(T)·f = diff
    let conj_t = base.metric.matrix().map(|c| c.conj());
    let mut f = linalg::solve(&conj_t, &diff)?;
    if let Some(a) = &base.jacobian_factor {
        let mut out = vec![Complex::new(T::zero(), T::zero()); f.len()];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, fj) in f.iter().enumerate() {
                *o += *fj * a[(j, i)];
            }
        }
        f = out;
    }
    if let Some(s0) = &base.target {
        for (fi, si) in f.iter_mut().zip(s0.iter()) {
            *fi += *si;
        }
    }
    Ok(f)
}

/// Holomorphic Jacobian of the representative map at its base point, by
/// central differences; equals the identity for a correct base.
pub fn rep_jacobian_at_base<T: Real, O: KernelOracle<T> + ?Sized>(
    oracle: &O,
    base: &RepBase<T>,
) -> Result<CMatrix<T>> {
    let n = oracle.dim();
    let h = T::lit(FD_STEP);
    let half = Complex::new(T::lit(0.5), T::zero());
    let f = |p: &[Complex<T>]| rep_coordinates(oracle, base, p);
    let mut jac = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let dx = central_vec(&f, &base.base_point, j, h, false)?;
        let dy = central_vec(&f, &base.base_point, j, h, true)?;
        for i in 0..n {
            // ∂fᵢ/∂zⱼ = (∂x − i ∂y)/2
            jac[(i, j)] = (dx[i] - dy[i] * Complex::i()) * half;
        }
    }
    Ok(jac)
}

fn central_vec<T: Real, F>(
    f: &F,
    base: &[Complex<T>],
    j: usize,
    h: T,
    imaginary: bool,
) -> Result<Vec<Complex<T>>>
where
    F: Fn(&[Complex<T>]) -> Result<Vec<Complex<T>>>,
{
    let diff = |hh: T| -> Result<Vec<Complex<T>>> {
        let mut plus = base.to_vec();
        let mut minus = base.to_vec();
        if imaginary {
            plus[j].im = plus[j].im + hh;
            minus[j].im = minus[j].im - hh;
        } else {
            plus[j].re = plus[j].re + hh;
            minus[j].re = minus[j].re - hh;
        }
        let fp = f(&plus)?;
        let fm = f(&minus)?;
        let inv = Complex::new((T::lit(2.0) * hh).recip(), T::zero());
        Ok(fp.iter().zip(fm.iter()).map(|(a, b)| (a - b) * inv).collect())
    };
    let coarse = diff(h)?;
    let fine = diff(h * T::lit(0.5))?;
    let third = Complex::new(T::lit(3.0).recip(), T::zero());
    Ok(coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f4)| (*f4 * Complex::new(T::lit(4.0), T::zero()) - c) * third)
        .collect())
}

/// Worst deviation of T(z, t̄) from T(t, t̄) over the sample points.
pub fn centre_defect<T: Real, O: KernelOracle<T> + ?Sized>(
    oracle: &O,
    t: &[Complex<T>],
    sample_zs: &[Vec<Complex<T>>],
) -> Result<T> {
    let reference = oracle.mixed_metric(t, t)?;
    let mut worst = T::zero();
    for z in sample_zs {
        let m = oracle.mixed_metric(z, t)?;
        for (a, b) in m.iter().zip(reference.iter()) {
            let d = (*a - *b).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}

/// Lu's centre test: T(z, t̄) independent of z up to `tol` on the samples.
pub fn is_representative_centre<T: Real, O: KernelOracle<T> + ?Sized>(
    oracle: &O,
    t: &[Complex<T>],
    sample_zs: &[Vec<Complex<T>>],
    tol: T,
) -> Result<bool> {
    Ok(centre_defect(oracle, t, sample_zs)? < tol)
}

/// The normalized map of a domain that is its own representative domain
/// with centre 0: z ↦ rep coordinates based at t₀ (A = I, s₀ = 0).
/// Guaranteed contracts: f(t₀) = 0 and unit Jacobian at t₀. Whether f is a
/// genuine automorphism is not asserted.
pub struct Corollary2Map<'a, T: Real, O: KernelOracle<T> + ?Sized> {
    oracle: &'a O,
    base: RepBase<T>,
}

impl<'a, T: Real, O: KernelOracle<T> + ?Sized> Corollary2Map<'a, T, O> {
    pub fn apply(&self, z: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        rep_coordinates(self.oracle, &self.base, z)
    }

    pub fn base(&self) -> &RepBase<T> {
        &self.base
    }
}

pub fn corollary2_map<'a, T: Real, O: KernelOracle<T> + ?Sized>(
    oracle: &'a O,
    t0: &[Complex<T>],
) -> Result<Corollary2Map<'a, T, O>> {
    Ok(Corollary2Map { oracle, base: RepBase::at(oracle, t0)? })
}
