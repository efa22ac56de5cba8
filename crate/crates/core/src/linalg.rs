//! Dense kernels shared by the propagators.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, ArrayView2, ArrayViewMut2, ShapeBuilder};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigen-decomposition of a real symmetric matrix: eigenvalues ascending and
/// eigenvectors as columns.
pub fn symmetric_eigen<T: Real>(matrix: &Array2<T>) -> Result<(Array1<T>, Array2<T>)> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols() });
    }
    // Row-major data of a symmetric matrix reads the same column-major.
    let mut data: Vec<T> = matrix.iter().copied().collect();
    let mut w = vec![T::zero(); n];
    T::syevd(n, &mut data, &mut w).map_err(Error::Eigensolver)?;
    let vectors = Array2::from_shape_vec((n, n).f(), data).expect("shape matches");
    Ok((Array1::from(w), vectors.as_standard_layout().into_owned()))
}

fn real_view<'a, T: Real>(x: &'a ArrayView2<'_, Complex<T>>) -> ArrayView2<'a, T> {
    let (rows, cols) = x.dim();
    let slice = x.as_slice().expect("complex operand must be in standard layout");
    // SAFETY: Complex<T> is repr(C) with two T fields, so a contiguous
    // row-major (rows, cols) complex block is a (rows, 2 cols) real block.
    let reals = unsafe { std::slice::from_raw_parts(slice.as_ptr() as *const T, slice.len() * 2) };
    ArrayView2::from_shape((rows, 2 * cols), reals).expect("shape matches")
}

fn real_view_mut<'a, T: Real>(x: &'a mut ArrayViewMut2<'_, Complex<T>>) -> ArrayViewMut2<'a, T> {
    let (rows, cols) = x.dim();
    let slice = x.as_slice_mut().expect("complex operand must be in standard layout");
    let len = slice.len() * 2;
    // SAFETY: see `real_view`.
    let reals = unsafe { std::slice::from_raw_parts_mut(slice.as_mut_ptr() as *mut T, len) };
    ArrayViewMut2::from_shape((rows, 2 * cols), reals).expect("shape matches")
}

/// `out = beta * out + a * x` for real `a` and complex `x`, as one real GEMM.
pub fn real_complex_gemm<T: Real>(
    a: ArrayView2<'_, T>,
    x: ArrayView2<'_, Complex<T>>,
    beta: T,
    mut out: ArrayViewMut2<'_, Complex<T>>,
) {
    assert_eq!(a.ncols(), x.nrows());
    assert_eq!(out.dim(), (a.nrows(), x.ncols()));
    let x_std;
    let x = if x.is_standard_layout() {
        x
    } else {
        x_std = x.as_standard_layout().into_owned();
        x_std.view()
    };
    let xr = real_view(&x);
    let mut outr = real_view_mut(&mut out);
    general_mat_mul(T::one(), &a, &xr, beta, &mut outr);
}

/// `a * x` for real `a` and complex `x`.
pub fn real_complex_mul<T: Real>(a: ArrayView2<'_, T>, x: ArrayView2<'_, Complex<T>>) -> Array2<Complex<T>> {
    let mut out = Array2::from_elem((a.nrows(), x.ncols()), Complex::new(T::zero(), T::zero()));
    real_complex_gemm(a, x, T::zero(), out.view_mut());
    out
}

/// `x * a` for complex `x` and real `a`, computed as `(aᵀ xᵀ)ᵀ`.
pub fn complex_real_mul<T: Real>(x: ArrayView2<'_, Complex<T>>, a: ArrayView2<'_, T>) -> Array2<Complex<T>> {
    let xt = x.t().as_standard_layout().into_owned();
    let at = a.t();
    real_complex_mul(at, xt.view()).t().as_standard_layout().into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn eigen_of_diagonal_is_sorted() {
        let m = array![[3.0f64, 0.0], [0.0, -1.0]];
        let (e, v) = symmetric_eigen(&m).unwrap();
        assert_eq!(e.to_vec(), vec![-1.0, 3.0]);
        assert!((v[[1, 0]].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn real_complex_product_matches_naive() {
        let a = array![[1.0, 2.0, 0.5], [-1.0, 0.0, 3.0]];
        let x = Array2::from_shape_fn((3, 2), |(i, j)| Complex::new(i as f64 + 0.5, j as f64 - i as f64));
        let y = real_complex_mul(a.view(), x.view());
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex::new(0.0, 0.0);
                for k in 0..3 {
                    s += x[[k, j]] * a[[i, k]];
                }
                assert!((s - y[[i, j]]).norm() < 1e-14);
            }
        }
        let z = complex_real_mul(x.t(), a.t());
        for i in 0..2 {
            for j in 0..2 {
                assert!((z[[j, i]] - y[[i, j]]).norm() < 1e-14);
            }
        }
    }
}
