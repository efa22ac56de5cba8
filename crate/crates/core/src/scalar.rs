//! Scalar abstractions.
//!
//! [`Real`] is the floating point type the numerical kernels run on (`f32` or
//! `f64`). [`Field`] is the weaker requirement used by the pulse-sequence
//! algebra, which also admits exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{LinalgScalar, ScalarOperand};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Arithmetic needed for exact sequence bookkeeping.
pub trait Field: Clone + Num + std::ops::Neg<Output = Self> + PartialOrd + Debug + Display {
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T> Field for T where T: Clone + Num + std::ops::Neg<Output = Self> + PartialOrd + Debug + Display {}

/// Floating point scalar with a LAPACK symmetric eigensolver.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + LinalgScalar
    + ScalarOperand
    + Field
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Divide-and-conquer eigensolver on a symmetric matrix stored in `a`
    /// (either layout, lower triangle referenced). On success `a` holds the
    /// eigenvectors column-major and `w` the eigenvalues in ascending order.
    fn syevd(n: usize, a: &mut [Self], w: &mut [Self]) -> Result<(), i32>;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits the scalar type")
    }

    fn cis(phase: Self) -> Complex<Self> {
        Complex::new(phase.cos(), phase.sin())
    }
}

macro_rules! impl_real {
    ($t:ty, $syevd:path) => {
        impl Real for $t {
            fn syevd(n: usize, a: &mut [Self], w: &mut [Self]) -> Result<(), i32> {
                assert_eq!(a.len(), n * n);
                assert_eq!(w.len(), n);
                if n == 0 {
                    return Ok(());
                }
                let n32 = n as i32;
                let mut info = 0;
                let mut work = vec![<$t>::default(); 1];
                let mut iwork = vec![0i32; 1];
                unsafe {
                    $syevd(b'V', b'L', n32, a, n32, w, &mut work, -1, &mut iwork, -1, &mut info);
                }
                if info != 0 {
                    return Err(info);
                }
                let lwork = work[0] as usize;
                let liwork = iwork[0] as usize;
                let mut work = vec![<$t>::default(); lwork.max(1)];
                let mut iwork = vec![0i32; liwork.max(1)];
                unsafe {
                    $syevd(
                        b'V',
                        b'L',
                        n32,
                        a,
                        n32,
                        w,
                        &mut work,
                        lwork as i32,
                        &mut iwork,
                        liwork as i32,
                        &mut info,
                    );
                }
                if info != 0 {
                    Err(info)
                } else {
                    Ok(())
                }
            }
        }
    };
}

impl_real!(f32, lapack::ssyevd);
impl_real!(f64, lapack::dsyevd);
