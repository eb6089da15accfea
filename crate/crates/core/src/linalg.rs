//! Dense complex-matrix helpers for the small matrices that arise here
//! (Cartan domains of rank ≲ 10): Gram defects, LU determinants, LDLᴴ
//! pivots and linear solves.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dynamically sized complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.map(|c| c.conj()).transpose()
}

/// (m + mᴴ)/2.
pub fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = Complex::new(T::lit(0.5), T::zero());
    (m + adjoint(m)).map(|c| c * half)
}

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect<T: Real>(m: &CMatrix<T>) -> T {
    let adj = adjoint(m);
    let mut worst = T::zero();
    for (a, b) in m.iter().zip(adj.iter()) {
        let d = (*a - *b).norm();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// The Hermitian Gram defect I − Z Z̄ᵗ of a matrix point.
pub fn gram_defect<T: Real>(z: &CMatrix<T>) -> CMatrix<T> {
    let rows = z.nrows();
    CMatrix::<T>::identity(rows, rows) - z * adjoint(z)
}

/// Determinant by partial-pivot LU.
pub fn det<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return cone();
    }
    let mut a = m.clone();
    let mut acc = cone::<T>();
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].norm_sqr();
        for i in (k + 1)..n {
            let mag = a[(i, k)].norm_sqr();
            if mag > best {
                best = mag;
                piv = i;
            }
        }
        if best == T::zero() {
            return czero();
        }
        if piv != k {
            a.swap_rows(piv, k);
            acc = -acc;
        }
        let pivot = a[(k, k)];
        acc *= pivot;
        for i in (k + 1)..n {
            let f = a[(i, k)] / pivot;
            for j in (k + 1)..n {
                let s = f * a[(k, j)];
                a[(i, j)] -= s;
            }
        }
    }
    acc
}

/// Positive definiteness of a Hermitian matrix, decided by the pivots of
/// the LDLᴴ factorization: every pivot must exceed `floor`.
pub fn positive_definite<T: Real>(h: &CMatrix<T>, floor: T) -> bool {
    let n = h.nrows();
    debug_assert_eq!(n, h.ncols());
    let mut l = vec![czero::<T>(); n * n];
    let mut d = vec![T::zero(); n];
    for j in 0..n {
        let mut dj = h[(j, j)].re;
        for k in 0..j {
            dj = dj - l[j * n + k].norm_sqr() * d[k];
        }
        if !(dj > floor) {
            return false; // also rejects NaN pivots
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj() * Complex::new(d[k], T::zero());
            }
            l[i * n + j] = s / Complex::new(dj, T::zero());
        }
    }
    true
}

/// Solve a x = b for a square complex system by partial-pivot LU.
pub fn solve<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "solve: matrix must be square");
    assert_eq!(n, b.len(), "solve: dimension mismatch");
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        let mut best = m[(k, k)].norm_sqr();
        for i in (k + 1)..n {
            let mag = m[(i, k)].norm_sqr();
            if mag > best {
                best = mag;
                piv = i;
            }
        }
        if best == T::zero() {
            return Err(Error::SingularSystem);
        }
        if piv != k {
            m.swap_rows(piv, k);
            x.swap(piv, k);
        }
        let pivot = m[(k, k)];
        for i in (k + 1)..n {
            let f = m[(i, k)] / pivot;
            for j in (k + 1)..n {
                let s = f * m[(k, j)];
                m[(i, j)] -= s;
            }
            let s = f * x[k];
            x[i] -= s;
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Ok(x)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian<T>(h: &CMatrix<T>) -> T
where
    T: Real + nalgebra::RealField,
{
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let mut min = None;
    for v in eig.eigenvalues.iter() {
        match min {
            None => min = Some(*v),
            Some(m) if *v < m => min = Some(*v),
            _ => {}
        }
    }
    min.expect("eigenvalues of an empty matrix")
}
