//! Smith normal form over the integers.
//!
//! The elimination is written once over [`Scalar`] and instantiated twice: with
//! `BigInt` (never fails) and with `i64` using checked arithmetic, which reports
//! [`AbelianError::Overflow`] instead of wrapping. Pivots are the entry of smallest
//! absolute value in the active block, ties broken in row-major order, so the
//! transforms `u` and `v` are reproducible.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{AbelianError, IntMatrix};

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, nonnegative, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

pub(crate) trait Scalar: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn checked_neg(&self) -> Option<Self>;
    /// `self - q * x`
    fn checked_sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn checked_quot(&self, d: &Self) -> Option<Self>;
    fn divides(&self, x: &Self) -> bool;
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn checked_quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn divides(&self, x: &Self) -> bool {
        Zero::is_zero(&(x % self))
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn checked_sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn checked_quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn divides(&self, x: &Self) -> bool {
        x.checked_rem(*self).is_none_or(|r| r == 0)
    }
}

struct Reduction<T> {
    m: usize,
    n: usize,
    a: Vec<T>,
    u: Vec<T>,
    v: Vec<T>,
}

fn identity<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        out[i * n + i] = T::one();
    }
    out
}

impl<T: Scalar> Reduction<T> {
    fn new(m: usize, n: usize, a: Vec<T>) -> Self {
        Self {
            m,
            n,
            a,
            u: identity(m),
            v: identity(n),
        }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = self.at(i, j);
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(self.at(bi, bj)) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.n {
            self.a.swap(i * self.n + c, j * self.n + c);
        }
        for c in 0..self.m {
            self.u.swap(i * self.m + c, j * self.m + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.m {
            self.a.swap(r * self.n + i, r * self.n + j);
        }
        for r in 0..self.n {
            self.v.swap(r * self.n + i, r * self.n + j);
        }
    }

    /// `row[target] -= q * row[source]`, mirrored into `u`.
    fn row_sub(&mut self, target: usize, source: usize, q: &T) -> Result<(), AbelianError> {
        for c in 0..self.n {
            let x = self.a[source * self.n + c].clone();
            let cell = &mut self.a[target * self.n + c];
            *cell = cell.checked_sub_mul(q, &x).ok_or(AbelianError::Overflow)?;
        }
        for c in 0..self.m {
            let x = self.u[source * self.m + c].clone();
            let cell = &mut self.u[target * self.m + c];
            *cell = cell.checked_sub_mul(q, &x).ok_or(AbelianError::Overflow)?;
        }
        Ok(())
    }

    /// `col[target] -= q * col[source]`, mirrored into `v`.
    fn col_sub(&mut self, target: usize, source: usize, q: &T) -> Result<(), AbelianError> {
        for r in 0..self.m {
            let x = self.a[r * self.n + source].clone();
            let cell = &mut self.a[r * self.n + target];
            *cell = cell.checked_sub_mul(q, &x).ok_or(AbelianError::Overflow)?;
        }
        for r in 0..self.n {
            let x = self.v[r * self.n + source].clone();
            let cell = &mut self.v[r * self.n + target];
            *cell = cell.checked_sub_mul(q, &x).ok_or(AbelianError::Overflow)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), AbelianError> {
        for c in 0..self.n {
            let cell = &mut self.a[i * self.n + c];
            *cell = cell.checked_neg().ok_or(AbelianError::Overflow)?;
        }
        for c in 0..self.m {
            let cell = &mut self.u[i * self.m + c];
            *cell = cell.checked_neg().ok_or(AbelianError::Overflow)?;
        }
        Ok(())
    }

    fn run(mut self) -> Result<Self, AbelianError> {
        let minus_one = T::one().checked_neg().expect("-1 is representable");
        for t in 0..self.m.min(self.n) {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return Ok(self);
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.at(t, t).clone();

                let mut clean = true;
                for i in t + 1..self.m {
                    if self.at(i, t).is_nil() {
                        continue;
                    }
                    let q = self.at(i, t).checked_quot(&pivot).ok_or(AbelianError::Overflow)?;
                    self.row_sub(i, t, &q)?;
                    clean &= self.at(i, t).is_nil();
                }
                if !clean {
                    continue;
                }
                for j in t + 1..self.n {
                    if self.at(t, j).is_nil() {
                        continue;
                    }
                    let q = self.at(t, j).checked_quot(&pivot).ok_or(AbelianError::Overflow)?;
                    self.col_sub(j, t, &q)?;
                    clean &= self.at(t, j).is_nil();
                }
                if !clean {
                    continue;
                }

                let offender = (t + 1..self.m)
                    .find(|&i| (t + 1..self.n).any(|j| !pivot.divides(self.at(i, j))));
                match offender {
                    // row[t] += row[i]; the next column pass leaves a smaller remainder
                    Some(i) => self.row_sub(t, i, &minus_one)?,
                    None => break,
                }
            }
            if self.at(t, t).is_neg() {
                self.negate_row(t)?;
            }
        }
        Ok(self)
    }
}

fn to_matrix<T, F>(rows: usize, cols: usize, data: Vec<T>, f: F) -> IntMatrix
where
    F: Fn(T) -> BigInt,
{
    IntMatrix::new(rows, cols, data.into_iter().map(f).collect()).expect("shape preserved")
}

/// Exact Smith normal form with arbitrary-precision arithmetic.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let r = Reduction::new(m, n, a.entries().to_vec())
        .run()
        .expect("BigInt arithmetic does not overflow");
    SnfResult {
        d: to_matrix(m, n, r.a, |x| x),
        u: to_matrix(m, m, r.u, |x| x),
        v: to_matrix(n, n, r.v, |x| x),
    }
}

/// Word-sized fast path. Produces the same decomposition as [`smith_normal_form`]
/// whenever every intermediate value fits in an `i64`; otherwise returns
/// [`AbelianError::Overflow`], signalling that the arbitrary-precision path is needed.
pub fn smith_normal_form_word(a: &IntMatrix) -> Result<SnfResult, AbelianError> {
    let (m, n) = (a.rows(), a.cols());
    let data = a
        .entries()
        .iter()
        .map(|x| x.to_i64().ok_or(AbelianError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    let r = Reduction::new(m, n, data).run()?;
    Ok(SnfResult {
        d: to_matrix(m, n, r.a, BigInt::from),
        u: to_matrix(m, m, r.u, BigInt::from),
        v: to_matrix(n, n, r.v, BigInt::from),
    })
}
