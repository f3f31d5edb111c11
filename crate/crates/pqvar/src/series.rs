//! Truncated power series with cyclotomic coefficients, plus the implicit-
//! function solver that expands one affine curve coordinate in terms of a
//! local parameter at a point.

use crate::cyclotomic::{Cyclotomic, Rat};
use crate::error::{Error, Result};

/// A power series truncated at a fixed length: coefficient i multiplies t^i,
/// for i in 0..len.  All arithmetic stays truncated at the shorter length.
#[derive(Clone, Debug)]
pub struct Series {
    c: Vec<Cyclotomic>,
}

impl Series {
    pub fn constant(val: Cyclotomic, len: usize) -> Self {
        assert!(len >= 1);
        let mut c = vec![Cyclotomic::zero(1); len];
        c[0] = val;
        Series { c }
    }

    /// The series t (the local parameter itself).
    pub fn variable(len: usize) -> Self {
        assert!(len >= 2);
        let mut c = vec![Cyclotomic::zero(1); len];
        c[1] = Cyclotomic::one(1);
        Series { c }
    }

    pub fn from_coeffs(c: Vec<Cyclotomic>) -> Self {
        assert!(!c.is_empty());
        Series { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeff(&self, i: usize) -> &Cyclotomic {
        &self.c[i]
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.c
    }

    pub fn set_coeff(&mut self, i: usize, v: Cyclotomic) {
        self.c[i] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.c.len().min(other.c.len());
        Series {
            c: (0..len).map(|i| self.c[i].add(&other.c[i])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.c.len().min(other.c.len());
        Series {
            c: (0..len).map(|i| self.c[i].sub(&other.c[i])).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.c.len().min(other.c.len());
        let mut c = vec![Cyclotomic::zero(1); len];
        for i in 0..len {
            if self.c[i].is_structurally_zero() {
                continue;
            }
            for j in 0..len - i {
                if other.c[j].is_structurally_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&self.c[i].mul(&other.c[j]));
            }
        }
        Series { c }
    }

    pub fn scale(&self, q: &Cyclotomic) -> Self {
        Series {
            c: self.c.iter().map(|x| x.mul(q)).collect(),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        Series {
            c: self.c.iter().map(|x| x.scale(q)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::constant(Cyclotomic::one(1), self.c.len());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Index of the first coefficient that is genuinely nonzero, or None if
    /// the series vanishes to the full truncation length.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

/// Solve F(t, y(t)) = 0 for y as a power series, given the constant term b
/// of y and the derivative value fy0 = (∂F/∂y)(0, b) ≠ 0.
///
/// `eval` must map a candidate series y to the series F(t, y).  Coefficients
/// are determined degree by degree: for i ≥ 1, perturbing y by c·t^i changes
/// the t^i coefficient of F by exactly c·fy0, so each step is one division.
pub fn solve_implicit<F>(eval: F, b: Cyclotomic, len: usize, fy0: &Cyclotomic) -> Result<Series>
where
    F: Fn(&Series) -> Series,
{
    if fy0.is_zero() {
        return Err(Error::validation(
            "implicit solve needs a nonzero derivative in the solved coordinate",
        ));
    }
    let mut y = Series::constant(b, len);
    let residual = eval(&y);
    if !residual.coeff(0).is_zero() {
        return Err(Error::validation(
            "constant term does not satisfy the equation",
        ));
    }
    for i in 1..len {
        let r = eval(&y);
        let ci = r.coeff(i).neg().div(fy0)?;
        y.set_coeff(i, ci);
    }
    let r = eval(&y);
    if !r.is_zero() {
        return Err(Error::internal(
            "implicit series solve failed to cancel residual",
        ));
    }
    Ok(y)
}
