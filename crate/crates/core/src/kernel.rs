//! Bergman-kernel coefficients and evaluation for the Cartan–Hartogs
//! family with a one-dimensional fiber over the unit ball: the domain
//! |W|^{2K} + |z₁|² + ⋯ + |zₙ|² < 1 in C^{n+1}.
//!
//! The kernel is K^{−n} π^{−(n+1)} F(Y) det(I − Z ξ̄ᵗ)^{−(1+n+1/K)}, with
//! F(Y) = Σᵢ bᵢ Γ(i+1) Y^{i+1} and Y = (1 − X)^{−1}. The coefficients bᵢ
//! come from a recurrence driven by the auxiliary product polynomial
//! P(x) = (x+1)(x+1+K)(x+1+2K)⋯(x+1+nK), or equivalently from the closed
//! form bᵢ = Σⱼ (−1)ʲ P(−j−1)/(Γ(j+1)Γ(i−j+1)).
//!
//! The recurrence subtracts like-sized terms, so the tables are generated
//! in exact rational arithmetic (every finite binary float is rational)
//! and projected to the working precision at the end. The generic
//! generators remain available over any [`CoeffField`] for cross-checks.
//!
//! Off-diagonal evaluation polarizes the fiber invariant with conjugation
//! on the second argument, X = W ζ̄ · det(I − Z ξ̄ᵗ)^{−1/K}: this is the
//! reading forced by Hermitian symmetry of the kernel and by the diagonal
//! case. Powers of the polarized determinant take the principal branch,
//! and a determinant with nonpositive real part is reported as a distinct
//! branch failure.

use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::domains::{ch_contains, CHSpec, CartanSpec, MatrixPoint};
use crate::error::{Error, Result};
use crate::scalar::{factorial, field_factorial, CoeffField, Real};

/// Auxiliary product polynomial over any coefficient field:
/// P(x) = (x+1)·Π_{k=1..n} (x+1+Kk).
pub fn poly_p_in<F: CoeffField>(x: &F, base_dim: usize, exponent: &F) -> F {
    let one = F::one();
    let mut acc = x.clone() + one.clone();
    for k in 1..=base_dim {
        let kk = F::from_usize(k).expect("factor index");
        acc = acc * (x.clone() + one.clone() + exponent.clone() * kk);
    }
    acc
}

/// P(x) in floating arithmetic.
pub fn poly_p<T: Real>(x: T, base_dim: usize, exponent: T) -> T {
    poly_p_in(&x, base_dim, &exponent)
}

/// The coefficient recurrence, evaluated left to right:
/// bᵢ = [P(−i−1) − Σ_{k<i} bₖ (−1)ᵏ i!/(i−k)!] / [(−1)ⁱ i!], b₀ = 0.
pub fn recurrence_in<F: CoeffField>(base_dim: usize, exponent: &F) -> Vec<F> {
    let n = base_dim;
    let mut b = vec![F::zero(); n + 2];
    for i in 1..=(n + 1) {
        let x = -F::from_usize(i + 1).expect("index");
        let mut s = poly_p_in(&x, n, exponent);
        let fact_i = field_factorial::<F>(i);
        for (k, bk) in b.iter().enumerate().take(i) {
            let ratio = fact_i.clone() / field_factorial::<F>(i - k);
            let term = bk.clone() * ratio;
            s = if k % 2 == 0 { s - term } else { s + term };
        }
        let denom = if i % 2 == 0 { fact_i } else { -fact_i };
        b[i] = s / denom;
    }
    b
}

/// The closed-form coefficients bᵢ = Σ_{j=1..i} (−1)ʲ P(−j−1)/(j!(i−j)!).
pub fn closed_form_in<F: CoeffField>(base_dim: usize, exponent: &F) -> Vec<F> {
    let n = base_dim;
    let mut b = vec![F::zero(); n + 2];
    // P(−j−1) is shared across i; compute once.
    let p_at: Vec<F> = (1..=(n + 1))
        .map(|j| {
            let x = -F::from_usize(j + 1).expect("index");
            poly_p_in(&x, n, exponent)
        })
        .collect();
    for i in 1..=(n + 1) {
        let mut s = F::zero();
        for j in 1..=i {
            let term = p_at[j - 1].clone()
                / (field_factorial::<F>(j) * field_factorial::<F>(i - j));
            s = if j % 2 == 0 { s + term } else { s - term };
        }
        b[i] = s;
    }
    b
}

/// Exact rational image of a floating exponent (every finite float is a
/// dyadic rational).
fn exact_exponent<T: Real>(exponent: T) -> BigRational {
    let v = exponent.to_f64().expect("exponent convertible to f64");
    assert!(v.is_finite() && v > 0.0, "exponent K must be finite and positive");
    Ratio::from_float(v).expect("finite float is rational")
}

fn project<T: Real>(q: &BigRational) -> T {
    T::from_f64(q.to_f64().expect("rational in double range")).expect("projection")
}

/// Generation route of a coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Recurrence,
    ClosedForm,
}

/// Kernel coefficients b₀..b_{n+1} for the dimension-n family, with their
/// exact rational values retained for downstream exact expansions.
#[derive(Clone, Debug)]
pub struct CoefficientTable<T: Real> {
    base_dim: usize,
    exponent: T,
    b: Vec<T>,
    exact: Vec<BigRational>,
}

fn table_with_route<T: Real>(base_dim: usize, exponent: T, route: Route) -> CoefficientTable<T> {
    assert!(base_dim >= 1, "base dimension must be ≥ 1");
    let q = exact_exponent(exponent);
    let exact = match route {
        Route::Recurrence => recurrence_in(base_dim, &q),
        Route::ClosedForm => closed_form_in(base_dim, &q),
    };
    let b = exact.iter().map(project::<T>).collect();
    CoefficientTable { base_dim, exponent, b, exact }
}

/// Coefficient table via the recurrence (exact arithmetic inside).
pub fn coeffs_recurrence<T: Real>(base_dim: usize, exponent: T) -> CoefficientTable<T> {
    table_with_route(base_dim, exponent, Route::Recurrence)
}

/// Coefficient table via the closed form (exact arithmetic inside).
pub fn coeffs_closed_form<T: Real>(base_dim: usize, exponent: T) -> CoefficientTable<T> {
    table_with_route(base_dim, exponent, Route::ClosedForm)
}

impl<T: Real> CoefficientTable<T> {
    /// Default construction route.
    pub fn new(base_dim: usize, exponent: T) -> Self {
        coeffs_recurrence(base_dim, exponent)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    /// Coefficients in ascending index order, b[0] = 0.
    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// Exact rational coefficients backing [`Self::b`].
    pub fn b_exact(&self) -> &[BigRational] {
        &self.exact
    }
}

impl<T: Real + Serialize> Serialize for CoefficientTable<T> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("CoefficientTable", 3)?;
        s.serialize_field("n", &self.base_dim)?;
        s.serialize_field("K", &self.exponent)?;
        s.serialize_field("b", &self.b)?;
        s.end()
    }
}

/// F(Y) = Σᵢ bᵢ Γ(i+1) Y^{i+1} at a complex argument.
pub fn eval_f<T: Real>(y: Complex<T>, table: &CoefficientTable<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (i, bi) in table.b.iter().enumerate() {
        if bi.is_zero() {
            continue;
        }
        let w = *bi * factorial::<T>(i);
        acc += y.powu((i + 1) as u32) * Complex::new(w, T::zero());
    }
    acc
}

/// F(Y) at a real argument.
pub fn eval_f_real<T: Real>(y: T, table: &CoefficientTable<T>) -> T {
    let mut acc = T::zero();
    for (i, bi) in table.b.iter().enumerate() {
        if bi.is_zero() {
            continue;
        }
        acc = acc + *bi * factorial::<T>(i) * y.powi((i + 1) as i32);
    }
    acc
}

/// Diagonal fiber invariant X = |W|² det(I − Z Z̄ᵗ)^{−1/K} and Y = (1−X)^{−1}.
#[derive(Clone, Copy, Debug)]
pub struct FiberInvariant<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> FiberInvariant<T> {
    pub fn diagonal(w: Complex<T>, z: &[Complex<T>], exponent: T) -> Result<Self> {
        let zsq: T = z.iter().map(|v| v.norm_sqr()).sum();
        let det = T::one() - zsq;
        if det <= T::zero() {
            return Err(Error::OutsideDomain("base point outside the unit ball".into()));
        }
        let x = w.norm_sqr() * det.powf(-exponent.recip());
        if !(x >= T::zero()) || x >= T::one() {
            return Err(Error::InvalidFiberInvariant(x.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(FiberInvariant { x, y: (T::one() - x).recip() })
    }
}

/// Polarized fiber invariant t = W ζ̄ · det(I − Z ξ̄ᵗ)^{−1/K} and
/// y = (1 − t)^{−1}.
#[derive(Clone, Copy, Debug)]
pub struct PolarizedInvariant<T: Real> {
    pub t: Complex<T>,
    pub y: Complex<T>,
}

impl<T: Real> PolarizedInvariant<T> {
    pub fn new(
        w: Complex<T>,
        z: &[Complex<T>],
        zeta: Complex<T>,
        xi: &[Complex<T>],
        exponent: T,
    ) -> Result<Self> {
        let det = polarized_det(z, xi)?;
        let t = w * zeta.conj() * det.powf(-exponent.recip());
        let one = Complex::new(T::one(), T::zero());
        Ok(PolarizedInvariant { t, y: (one - t).finv() })
    }
}

/// det(I − Z ξ̄ᵗ) for row vectors (1×1 determinant), with the principal
/// branch guard.
fn polarized_det<T: Real>(z: &[Complex<T>], xi: &[Complex<T>]) -> Result<Complex<T>> {
    if z.len() != xi.len() {
        return Err(Error::ShapeMismatch("base points of different dimension".into()));
    }
    let mut dot = Complex::new(T::zero(), T::zero());
    for (a, b) in z.iter().zip(xi.iter()) {
        dot += a * b.conj();
    }
    let det = Complex::new(T::one(), T::zero()) - dot;
    if det.re <= T::zero() {
        return Err(Error::BranchFailure);
    }
    Ok(det)
}

/// Bergman kernel of the fibered ball domain Y(1, 1, n; K).
#[derive(Clone, Debug)]
pub struct KernelYI<T: Real> {
    table: CoefficientTable<T>,
}

impl<T: Real> KernelYI<T> {
    pub fn new(base_dim: usize, exponent: T) -> Self {
        KernelYI { table: CoefficientTable::new(base_dim, exponent) }
    }

    pub fn from_table(table: CoefficientTable<T>) -> Self {
        KernelYI { table }
    }

    pub fn table(&self) -> &CoefficientTable<T> {
        &self.table
    }

    pub fn base_dim(&self) -> usize {
        self.table.base_dim
    }

    pub fn exponent(&self) -> T {
        self.table.exponent
    }

    /// Complex dimension of the domain (1 + n).
    pub fn dim(&self) -> usize {
        self.table.base_dim + 1
    }

    /// The domain spec this kernel lives on.
    pub fn ch_spec(&self) -> CHSpec<T> {
        CHSpec {
            base: CartanSpec::TypeI { rows: 1, cols: self.table.base_dim },
            fiber_dim: 1,
            exponent: self.table.exponent,
        }
    }

    pub fn contains(&self, w: Complex<T>, z: &[Complex<T>]) -> Result<bool> {
        let spec = self.ch_spec();
        let zp = MatrixPoint::from_coords(&spec.base, z)?;
        ch_contains(&spec, &[w], &zp)
    }

    fn require_member(&self, w: Complex<T>, z: &[Complex<T>]) -> Result<()> {
        if !self.contains(w, z)? {
            return Err(Error::OutsideDomain(
                "kernel argument outside the fibered ball domain".into(),
            ));
        }
        Ok(())
    }

    /// Conservative gap to the boundary in coordinate units, used to size
    /// finite-difference stencils.
    pub fn boundary_gap(&self, w: Complex<T>, z: &[Complex<T>]) -> Result<T> {
        self.require_member(w, z)?;
        let znorm = z.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt();
        let k = self.table.exponent;
        let bound = (T::one() - znorm * znorm).powf((T::lit(2.0) * k).recip());
        Ok((T::one() - znorm).min(bound - w.norm()))
    }

    /// Off-diagonal kernel value K((W,Z); (ζ,ξ)).
    pub fn eval(
        &self,
        w: Complex<T>,
        z: &[Complex<T>],
        zeta: Complex<T>,
        xi: &[Complex<T>],
    ) -> Result<Complex<T>> {
        self.require_member(w, z)?;
        self.require_member(zeta, xi)?;
        let n = self.table.base_dim;
        let k = self.table.exponent;
        let det = polarized_det(z, xi)?;
        let inv = PolarizedInvariant::new(w, z, zeta, xi, k)?;
        let f = eval_f(inv.y, &self.table);
        let pw = -(T::one() + T::of(n) + k.recip());
        let prefactor = k.powi(-(n as i32)) * T::PI().powi(-((n + 1) as i32));
        Ok(f * det.powf(pw) * Complex::new(prefactor, T::zero()))
    }

    /// Diagonal kernel value; real and strictly positive on the domain.
    pub fn eval_diag(&self, w: Complex<T>, z: &[Complex<T>]) -> Result<T> {
        self.require_member(w, z)?;
        let n = self.table.base_dim;
        let k = self.table.exponent;
        let inv = FiberInvariant::diagonal(w, z, k)?;
        let zsq: T = z.iter().map(|v| v.norm_sqr()).sum();
        let det = T::one() - zsq;
        let f = eval_f_real(inv.y, &self.table);
        let pw = -(T::one() + T::of(n) + k.recip());
        let prefactor = k.powi(-(n as i32)) * T::PI().powi(-((n + 1) as i32));
        Ok(prefactor * f * det.powf(pw))
    }
}

/// Diagonal radial profile Σᵢ bᵢ Γ(N+i) (1−X)^{−(N+i)} for fiber
/// dimension N (N = 1 reproduces F(Y) at Y = (1−X)^{−1}).
pub fn bergman_g<T: Real>(x: T, table: &CoefficientTable<T>, fiber_dim: usize) -> Result<T> {
    assert!(fiber_dim >= 1, "fiber dimension must be ≥ 1");
    if !(x >= T::zero()) || x >= T::one() {
        return Err(Error::InvalidFiberInvariant(x.to_f64().unwrap_or(f64::NAN)));
    }
    let base = T::one() - x;
    let mut acc = T::zero();
    for (i, bi) in table.b.iter().enumerate() {
        if bi.is_zero() {
            continue;
        }
        acc = acc + *bi * factorial::<T>(fiber_dim + i - 1) * base.powi(-((fiber_dim + i) as i32));
    }
    Ok(acc)
}
