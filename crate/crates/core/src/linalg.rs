//! Dense Gaussian elimination with partial pivoting, generic over `f64` and
//! double-double scalars.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::dd::Dd;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    /// Magnitude used for pivot selection.
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn magnitude(self) -> f64 {
        self.hi.abs()
    }
}

/// The pivot in column `col` vanished during elimination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot {
    pub col: usize,
}

/// Solves `a x = b` in place. `a` is row-major and square.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>, SingularPivot> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude()))
            .unwrap_or(col);
        let pmag = a[pivot][col].magnitude();
        if pmag == 0.0 || !pmag.is_finite() {
            return Err(SingularPivot { col });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);

        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        let bcol = b[col];
        for (row, bi) in lower.iter_mut().zip(b[col + 1..].iter_mut()) {
            let factor = row[col] / prow[col];
            row[col] = T::zero();
            for k in col + 1..n {
                row[k] = row[k] - factor * prow[k];
            }
            *bi = *bi - factor * bcol;
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for k in i + 1..n {
            acc = acc - a[i][k] * x[k];
        }
        x[i] = acc / a[i][i];
    }
    Ok(x)
}
