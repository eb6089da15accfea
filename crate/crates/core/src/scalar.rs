//! Scalar abstraction: the numeric kernels are generic over the real type.
//!
//! Everything double-precision in the CLI goes through `f64`; the generic
//! bound exists so the same formulas can be instantiated at `f32` (smoke
//! coverage) and so the coefficient generator can run over exact rationals
//! via the separate [`CoeffField`] bound.

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};
use std::fmt::Debug;
use std::iter::Sum;
use std::ops::Neg;

/// Floating-point scalar the library is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Send + Sync + 'static
{
    /// Convert an `f64` literal into the scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable in scalar type")
    }

    /// Convert a small nonnegative integer into the scalar type.
    fn of(k: usize) -> Self {
        Self::from_usize(k).expect("integer not representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Send
        + Sync
        + 'static
{
}

/// Exact or floating field for coefficient generation. Satisfied by
/// `BigRational` (exact) and by any [`Real`] scalar.
pub trait CoeffField: Num + Clone + Neg<Output = Self> + FromPrimitive {}

impl<F> CoeffField for F where F: Num + Clone + Neg<Output = Self> + FromPrimitive {}

/// k! as a field element.
pub fn field_factorial<F: CoeffField>(k: usize) -> F {
    let mut acc = F::one();
    for j in 2..=k {
        acc = acc * F::from_usize(j).expect("factorial index out of range");
    }
    acc
}

/// k! in a floating scalar (exact for every k that arises here).
pub fn factorial<T: Real>(k: usize) -> T {
    field_factorial::<T>(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(1), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(factorial::<f32>(6), 720.0);
    }

    #[test]
    fn lit_round_trips() {
        assert_eq!(f64::lit(0.25), 0.25);
        assert_eq!(f32::lit(1.5), 1.5f32);
        assert_eq!(f64::of(7), 7.0);
    }
}
