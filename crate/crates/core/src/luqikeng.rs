//! Zero-freeness decision for the fibered-ball kernels.
//!
//! Zeros of the kernel of Y(1, 1, n; K) reduce to zeros of a real-coefficient
//! polynomial: G(t) = Σᵢ bᵢ Γ(i+1) (1−t)^{n+1−i} in the open unit disk
//! |t| < 1, or equivalently (via t = 1 − 1/y) zeros of
//! q(y) = Σ_{i≥1} bᵢ Γ(i+1) y^{i−1} in the half plane Re y > 1/2.
//!
//! Two independent zero counters must agree before a verdict is issued:
//! companion-matrix eigenvalues filtered to the disk, and an
//! argument-principle winding count along |t| = 1. Disagreement is an error,
//! never silently resolved. Roots within 1e-9 of the unit circle are
//! reported as boundary-indeterminate rather than classified.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{coeffs_recurrence, CoefficientTable};
use crate::scalar::Real;

/// Relative residual bound for accepting companion-matrix roots.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;
/// Half-width of the boundary-indeterminate annulus around |t| = 1.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// Real-coefficient polynomial in one complex variable, ascending degree,
/// canonical form (trailing coefficient nonzero unless the polynomial is
/// the zero polynomial).
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial<T: Real> {
    coeffs: Vec<T>,
}

impl<T: Real> RealPolynomial<T> {
    /// Build from ascending coefficients, stripping exactly-zero leading
    /// terms.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RealPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation at a complex argument.
    pub fn eval(&self, t: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * t + Complex::new(*c, T::zero());
        }
        acc
    }

    pub fn eval_real(&self, t: T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + *c;
        }
        acc
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> T {
        self.coeffs.iter().map(|c| *c * *c).sum::<T>().sqrt()
    }
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn factorial_big(k: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    acc
}

fn project<T: Real>(q: &BigRational) -> T {
    T::from_f64(q.to_f64().expect("rational in range")).expect("projection")
}

/// Disk-side reduction G(t) = Σᵢ bᵢ Γ(i+1) (1−t)^{n+1−i}, expanded into
/// powers of t. The expansion runs over the table's exact rational
/// coefficients, so cancellations (e.g. the K = 1 collapse to a constant)
/// are exact.
pub fn disk_polynomial<T: Real>(table: &CoefficientTable<T>) -> RealPolynomial<T> {
    let n = table.base_dim();
    let mut acc = vec![BigRational::zero(); n + 2];
    for (i, bi) in table.b_exact().iter().enumerate() {
        if bi.numer().is_zero() {
            continue;
        }
        let weight = bi * BigRational::from(factorial_big(i));
        let e = n + 1 - i;
        for j in 0..=e {
            let mut term = &weight * BigRational::from(binomial_big(e, j));
            if j % 2 == 1 {
                term = -term;
            }
            acc[j] += term;
        }
    }
    RealPolynomial::new(acc.iter().map(project::<T>).collect())
}

/// Half-plane-side reduction q(y) = Σ_{i≥1} bᵢ Γ(i+1) y^{i−1}; the forced
/// y² factor of F(y) = y² q(y) is stripped (y = 0 lies outside Re y > 1/2,
/// so stripping preserves zeros on the region of interest).
pub fn halfplane_polynomial<T: Real>(table: &CoefficientTable<T>) -> RealPolynomial<T> {
    let coeffs: Vec<T> = table
        .b_exact()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, bi)| project::<T>(&(bi * BigRational::from(factorial_big(i)))))
        .collect();
    RealPolynomial::new(coeffs)
}

/// All complex roots (with multiplicity) via companion-matrix eigenvalues.
/// Degree-0 and zero polynomials have no roots. Exact zeros at the origin
/// are stripped first and re-attached with their multiplicity (a pure
/// power has a nilpotent companion matrix, which defeats the QR
/// iteration); the variable is rescaled so stripped coefficients are
/// balanced. Each root must pass the scaled residual bound
/// |p(r)| / (‖p‖ · max(1, |r|)^deg) < 1e-8 or the whole set is flagged as
/// an ill-conditioned cluster.
pub fn roots<T>(p: &RealPolynomial<T>) -> Result<Vec<Complex<T>>>
where
    T: Real + nalgebra::RealField,
{
    if p.is_zero() || p.degree() == 0 {
        return Ok(vec![]);
    }
    let at_origin = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut out = vec![Complex::new(T::zero(), T::zero()); at_origin];
    let reduced = &p.coeffs[at_origin..];
    let deg = reduced.len() - 1;
    if deg > 0 {
        let lead = reduced[deg];
        // variable scaling t = s·x balances the companion entries
        let ratio = Float::abs(reduced[0] / lead);
        let mut s = Float::powf(ratio, Float::recip(T::of(deg)));
        if !(s > T::lit(1e-6)) || !(s < T::lit(1e6)) || !s.is_finite() {
            s = T::one();
        }
        let companion = DMatrix::<T>::from_fn(deg, deg, |i, j| {
            if j == deg - 1 {
                -reduced[i] / lead * Float::powi(s, i as i32 - deg as i32)
            } else if i == j + 1 {
                T::one()
            } else {
                T::zero()
            }
        });
        let schur = nalgebra::linalg::Schur::try_new(companion, T::epsilon(), 1_000_000)
            .ok_or(Error::IllConditionedRoots { residual: f64::INFINITY })?;
        for r in schur.complex_eigenvalues().iter() {
            out.push(r * Complex::new(s, T::zero()));
        }
    }
    let norm = p.coeff_norm();
    for r in &out {
        let scale = norm * Float::powi(Float::max(T::one(), r.norm()), p.degree() as i32);
        let residual = p.eval(*r).norm() / scale;
        if residual > T::lit(ROOT_RESIDUAL_TOL) {
            return Err(Error::IllConditionedRoots {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(out)
}

enum WindingOutcome {
    Count(usize),
    NearContour,
}

fn winding_count<T: Real>(p: &RealPolynomial<T>, radius: T) -> WindingOutcome {
    let deg = p.degree();
    let scale = p.coeff_norm() * T::one().max(radius).powi(deg as i32);
    let floor = T::lit(1e-12) * scale;
    let two_pi = T::lit(2.0) * T::PI();
    let mut samples = 256usize;
    let mut prev: Option<i64> = None;
    while samples <= (1 << 20) {
        let mut total = T::zero();
        let step = two_pi / T::of(samples);
        let first = p.eval(Complex::from_polar(radius, T::zero()));
        if first.norm() < floor {
            return WindingOutcome::NearContour;
        }
        let mut last = first;
        for k in 1..=samples {
            let theta = step * T::of(k);
            let v = if k == samples {
                first
            } else {
                p.eval(Complex::from_polar(radius, theta))
            };
            if v.norm() < floor {
                return WindingOutcome::NearContour;
            }
            total = total + (v / last).arg();
            last = v;
        }
        let w = total / two_pi;
        let rounded = w.round();
        if (w - rounded).abs() <= T::lit(0.25) {
            let count = rounded.to_f64().unwrap_or(0.0) as i64;
            if prev == Some(count) && count >= 0 {
                return WindingOutcome::Count(count as usize);
            }
            prev = Some(count);
        } else {
            prev = None;
        }
        samples *= 2;
    }
    WindingOutcome::NearContour
}

/// Exact count of zeros with |t| < radius by the argument principle:
/// accumulated phase of p along the circle, refined until the winding
/// number is within 0.25 of an integer and stable under refinement. A zero
/// too close to the contour triggers up to three radius perturbations.
pub fn count_zeros_in_disk<T: Real>(p: &RealPolynomial<T>, radius: T) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvalidParameter(
            "zero polynomial has no meaningful zero count".into(),
        ));
    }
    if p.degree() == 0 {
        return Ok(0);
    }
    let nudges = [0.0, 2e-9, -2e-9, 4e-9];
    for (attempt, nudge) in nudges.iter().enumerate() {
        let r = radius * (T::one() + T::lit(*nudge));
        match winding_count(p, r) {
            WindingOutcome::Count(c) => return Ok(c),
            WindingOutcome::NearContour if attempt + 1 < nudges.len() => continue,
            WindingOutcome::NearContour => break,
        }
    }
    Err(Error::RootOnContour(3))
}

/// Zero-freeness verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ZeroFree,
    HasZero,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ZeroFree => "zero_free",
            Verdict::HasZero => "has_zero",
        }
    }
}

/// Outcome of a zero-freeness decision for one (n, K).
#[derive(Clone, Debug)]
pub struct ZeroReport<T: Real> {
    pub base_dim: usize,
    pub exponent: T,
    pub verdict: Verdict,
    pub roots_in_disk: Vec<Complex<T>>,
    pub all_roots: Vec<Complex<T>>,
    pub oracle_count: usize,
}

/// Decide zero-freeness of the kernel of Y(1, 1, n; K): companion-matrix
/// roots of G(t) filtered to |t| < 1, cross-validated against the
/// argument-principle count. The two methods must agree.
pub fn is_lu_qikeng<T>(base_dim: usize, exponent: T) -> Result<ZeroReport<T>>
where
    T: Real + nalgebra::RealField,
{
    let table = coeffs_recurrence(base_dim, exponent);
    let g = disk_polynomial(&table);
    let all_roots = roots(&g)?;
    let band = T::lit(BOUNDARY_BAND);
    let mut roots_in_disk = Vec::new();
    for r in &all_roots {
        let d = Float::abs(r.norm() - T::one());
        if d <= band {
            return Err(Error::BoundaryIndeterminate);
        }
        if r.norm() < T::one() {
            roots_in_disk.push(*r);
        }
    }
    let oracle_count = count_zeros_in_disk(&g, T::one())?;
    if oracle_count != roots_in_disk.len() {
        return Err(Error::MethodDisagreement {
            filter: roots_in_disk.len(),
            winding: oracle_count,
        });
    }
    let verdict = if roots_in_disk.is_empty() {
        Verdict::ZeroFree
    } else {
        Verdict::HasZero
    };
    Ok(ZeroReport {
        base_dim,
        exponent,
        verdict,
        roots_in_disk,
        all_roots,
        oracle_count,
    })
}

/// One entry of a parameter sweep; errors stay in the row.
#[derive(Debug)]
pub struct ScanRow<T: Real> {
    pub base_dim: usize,
    pub exponent: T,
    pub outcome: Result<ZeroReport<T>>,
}

/// Sweep a K-grid at fixed n, in input order.
pub fn scan<T>(base_dim: usize, grid: &[T]) -> Vec<ScanRow<T>>
where
    T: Real + nalgebra::RealField,
{
    grid.iter()
        .map(|&k| ScanRow {
            base_dim,
            exponent: k,
            outcome: is_lu_qikeng(base_dim, k),
        })
        .collect()
}

/// Root of G(t) predicted for the n = 1 family when K ≠ 1: (K+1)/(K−1).
pub fn n1_predicted_root<T: Real>(exponent: T) -> T {
    (exponent + T::one()) / (exponent - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval_f_real;
    use crate::C64;

    fn poly(coeffs: &[f64]) -> RealPolynomial<f64> {
        RealPolynomial::new(coeffs.to_vec())
    }

    #[test]
    fn disk_polynomial_examples() {
        // n = 1, K = 3: b = (0, 2, 1) → G(t) = 2(1−t) + 2 = 4 − 2t
        let g = disk_polynomial(&coeffs_recurrence(1, 3.0));
        assert_eq!(g.coeffs(), &[4.0, -2.0]);
        // n = 1, K = 1: constant 2
        let g = disk_polynomial(&coeffs_recurrence(1, 1.0));
        assert_eq!(g.coeffs(), &[2.0]);
        // n = 2, K = 1: constant 6
        let g = disk_polynomial(&coeffs_recurrence(2, 1.0));
        assert_eq!(g.coeffs(), &[6.0]);
    }

    #[test]
    fn halfplane_polynomial_examples() {
        let q = halfplane_polynomial(&coeffs_recurrence(1, 3.0));
        assert_eq!(q.coeffs(), &[2.0, 2.0]);
        let q = halfplane_polynomial(&coeffs_recurrence(1, 1.0));
        assert_eq!(q.coeffs(), &[0.0, 2.0]);
    }

    #[test]
    fn disk_polynomial_factorization_identity() {
        // F(y) = (1−t)^{−(n+2)} G(t) with y = 1/(1−t)
        for (n, k) in [(1usize, 3.0), (2, 2.0), (3, 0.5), (4, 1.25)] {
            let table = coeffs_recurrence(n, k);
            let g = disk_polynomial(&table);
            for t in [-0.7, -0.2, 0.0, 0.3, 0.8] {
                let y = 1.0 / (1.0 - t);
                let lhs = eval_f_real(y, &table);
                let rhs = (1.0 - t).powi(-((n + 2) as i32)) * g.eval_real(t);
                assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0), "n={n} K={k} t={t}");
            }
        }
    }

    #[test]
    fn roots_examples() {
        let r = roots(&poly(&[4.0, -2.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - C64::new(2.0, 0.0)).norm() < 1e-12);

        let mut r = roots(&poly(&[-0.25, 0.0, 1.0])).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - C64::new(-0.5, 0.0)).norm() < 1e-12);
        assert!((r[1] - C64::new(0.5, 0.0)).norm() < 1e-12);

        assert!(roots(&poly(&[2.0])).unwrap().is_empty());
    }

    #[test]
    fn winding_examples() {
        assert_eq!(count_zeros_in_disk(&poly(&[-0.25, 0.0, 1.0]), 1.0).unwrap(), 2);
        assert_eq!(count_zeros_in_disk(&poly(&[4.0, -2.0]), 1.0).unwrap(), 0);
        assert_eq!(count_zeros_in_disk(&poly(&[-2.0, 1.0]), 3.0).unwrap(), 1);
        assert_eq!(count_zeros_in_disk(&poly(&[5.0]), 1.0).unwrap(), 0);
    }

    #[test]
    fn winding_perturbs_past_contour_roots() {
        // Root exactly on |t| = 1: the perturbation schedule must either
        // resolve it consistently or flag it; (t−1)(t−0.5) has one zero
        // strictly inside.
        let p = poly(&[0.5, -1.5, 1.0]);
        match count_zeros_in_disk(&p, 1.0) {
            Ok(c) => assert!(c == 1 || c == 2),
            Err(Error::RootOnContour(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn lu_qikeng_examples() {
        let report = is_lu_qikeng(1, 3.0).unwrap();
        assert_eq!(report.verdict, Verdict::ZeroFree);
        assert!(report.roots_in_disk.is_empty());
        assert_eq!(report.all_roots.len(), 1);
        assert!((report.all_roots[0] - C64::new(2.0, 0.0)).norm() < 1e-10);
        assert_eq!(report.oracle_count, 0);

        let ball = is_lu_qikeng(1, 1.0).unwrap();
        assert_eq!(ball.verdict, Verdict::ZeroFree);
        assert!(ball.all_roots.is_empty());

        // higher-dimensional case: verdict must come with oracle agreement
        let r = is_lu_qikeng(2, 5.0).unwrap();
        assert_eq!(r.oracle_count, r.roots_in_disk.len());
    }

    #[test]
    fn n1_root_formula_on_a_grid() {
        for k in [0.25, 0.5, 2.0, 3.0, 10.0, 50.0] {
            let report = is_lu_qikeng(1, k).unwrap();
            assert_eq!(report.verdict, Verdict::ZeroFree, "K = {k}");
            let predicted = n1_predicted_root(k);
            assert_eq!(report.all_roots.len(), 1);
            assert!(
                (report.all_roots[0].re - predicted).abs() < 1e-8 * predicted.abs(),
                "K = {k}"
            );
        }
    }

    #[test]
    fn scan_rows_in_order() {
        let rows = scan(1, &[0.5, 1.0, 2.0, 3.0]);
        assert_eq!(rows.len(), 4);
        for row in &rows {
            let report = row.outcome.as_ref().unwrap();
            assert_eq!(report.verdict, Verdict::ZeroFree);
        }
        assert!(scan::<f64>(1, &[]).is_empty());
    }

    #[test]
    fn root_correspondence_disk_halfplane() {
        for (n, k) in [(1usize, 3.0), (2, 4.0), (3, 0.5), (5, 2.5)] {
            let table = coeffs_recurrence(n, k);
            let g = disk_polynomial(&table);
            let q = halfplane_polynomial(&table);
            let mut disk: Vec<C64> = roots(&g)
                .unwrap()
                .into_iter()
                .filter(|r| r.norm() < 1.0)
                .collect();
            let mut half: Vec<C64> = roots(&q)
                .unwrap()
                .into_iter()
                .filter(|y| y.re > 0.5)
                .map(|y| C64::new(1.0, 0.0) - y.finv())
                .collect();
            let key = |z: &C64| (z.re, z.im);
            disk.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            half.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            assert_eq!(disk.len(), half.len(), "n={n} K={k}");
            for (a, b) in disk.iter().zip(half.iter()) {
                assert!((a - b).norm() < 1e-8, "n={n} K={k}");
            }
        }
    }

    #[test]
    fn degree_bound() {
        for (n, k) in [(1usize, 3.0), (4, 0.75), (6, 2.0)] {
            let g = disk_polynomial(&coeffs_recurrence(n, k));
            assert!(g.degree() <= n + 1);
        }
    }
}
