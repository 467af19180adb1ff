//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], implemented for `f32` and `f64`.
//! Amplitudes and operator entries are `Complex<T>`.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating point type usable by the simulator.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    /// A tolerance of `requested`, floored at a few hundred ulps of one so that
    /// checks written for `f64` stay meaningful in single precision.
    #[inline]
    fn tol(requested: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(256.0);
        let requested = Self::lit(requested);
        if requested > floor {
            requested
        } else {
            floor
        }
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `|z|`, computed without requiring `num_traits::Float`.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

/// `exp(-i·phase)`.
#[inline]
pub fn phase_factor<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), -phase.sin())
}
