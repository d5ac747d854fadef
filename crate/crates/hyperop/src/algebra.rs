//! Exact Cayley-Dickson arithmetic for the quaternions `H` and octonions `O`.
//!
//! Elements are stored as real coordinates on the fixed generator basis
//! `1, i, j, k` (quaternions) and `1, i, j, k, l, il, jl, kl` (octonions).
//! All products reduce to a generator table built once by the doubling law
//! `(a + b l)(c + d l) = (a c - d̃ b) + (d a + b c̃) l`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

pub const MAX_DIM: usize = 8;

/// The two normed division algebras handled by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    #[serde(rename = "H")]
    Quaternion,
    #[serde(rename = "O")]
    Octonion,
}

impl Algebra {
    /// Real dimension, `m + 1`.
    pub const fn dim(self) -> usize {
        match self {
            Algebra::Quaternion => 4,
            Algebra::Octonion => 8,
        }
    }

    /// Number of doubling steps from the reals: 2 for `H`, 3 for `O`.
    pub const fn doubling_rank(self) -> u32 {
        match self {
            Algebra::Quaternion => 2,
            Algebra::Octonion => 3,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Algebra::Quaternion => "H",
            Algebra::Octonion => "O",
        }
    }

    /// Sign exponent of the generator under conjugation: 0 for the unit,
    /// 1 for every imaginary generator.
    pub const fn kappa(self, v: usize) -> u32 {
        if v == 0 {
            0
        } else {
            1
        }
    }

    pub fn generator_label(self, v: usize) -> &'static str {
        const LABELS: [&str; 8] = ["1", "i", "j", "k", "l", "il", "jl", "kl"];
        LABELS[v]
    }

    /// Generator product `i_p i_q` as `(index, sign)`.
    pub fn table(self) -> &'static MulTable {
        match self {
            Algebra::Quaternion => {
                static T: OnceLock<MulTable> = OnceLock::new();
                T.get_or_init(|| MulTable::build(4))
            }
            Algebra::Octonion => {
                static T: OnceLock<MulTable> = OnceLock::new();
                T.get_or_init(|| MulTable::build(8))
            }
        }
    }

    pub const fn both() -> [Algebra; 2] {
        [Algebra::Quaternion, Algebra::Octonion]
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generator multiplication table, `entry[p][q] = (index, sign)` with
/// `i_p i_q = sign * i_index`.
#[derive(Debug)]
pub struct MulTable {
    pub dim: usize,
    entry: [[(usize, f64); MAX_DIM]; MAX_DIM],
}

impl MulTable {
    #[inline]
    pub fn product(&self, p: usize, q: usize) -> (usize, f64) {
        self.entry[p][q]
    }

    /// Builds the table for dimension `dim` (1, 2, 4 or 8) by structural
    /// recursion on the doubling construction.
    fn build(dim: usize) -> MulTable {
        fn product(dim: usize, p: usize, q: usize) -> (usize, f64) {
            if dim == 1 {
                return (0, 1.0);
            }
            let half = dim / 2;
            // conj(e_v) = e_v for v = 0, -e_v otherwise
            let conj_sign = |v: usize| if v == 0 { 1.0 } else { -1.0 };
            match (p < half, q < half) {
                (true, true) => product(half, p, q),
                (true, false) => {
                    // (a, 0)(0, d) = (0, d a)
                    let (idx, s) = product(half, q - half, p);
                    (idx + half, s)
                }
                (false, true) => {
                    // (0, b)(c, 0) = (0, b c̃)
                    let (idx, s) = product(half, p - half, q);
                    (idx + half, s * conj_sign(q))
                }
                (false, false) => {
                    // (0, b)(0, d) = (-d̃ b, 0)
                    let (idx, s) = product(half, q - half, p - half);
                    (idx, -s * conj_sign(q - half))
                }
            }
        }
        let mut entry = [[(0usize, 0.0f64); MAX_DIM]; MAX_DIM];
        for (p, row) in entry.iter_mut().enumerate().take(dim) {
            for (q, cell) in row.iter_mut().enumerate().take(dim) {
                *cell = product(dim, p, q);
            }
        }
        MulTable { dim, entry }
    }
}

/// A scalar in `H` or `O`: real coordinates on the standard generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hypercomplex {
    algebra: Algebra,
    coeffs: [f64; MAX_DIM],
}

impl Hypercomplex {
    pub fn new(algebra: Algebra, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Hypercomplex {
            algebra,
            coeffs: buf,
        })
    }

    pub fn zero(algebra: Algebra) -> Self {
        Hypercomplex {
            algebra,
            coeffs: [0.0; MAX_DIM],
        }
    }

    pub fn one(algebra: Algebra) -> Self {
        Self::from_real(algebra, 1.0)
    }

    pub fn from_real(algebra: Algebra, value: f64) -> Self {
        let mut z = Self::zero(algebra);
        z.coeffs[0] = value;
        z
    }

    pub fn generator(algebra: Algebra, v: usize) -> Self {
        assert!(v < algebra.dim(), "generator index out of range");
        let mut z = Self::zero(algebra);
        z.coeffs[v] = 1.0;
        z
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn coeff(&self, v: usize) -> f64 {
        self.coeffs[v]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.algebra.dim()]
    }

    pub fn coeff_mut(&mut self, v: usize) -> &mut f64 {
        &mut self.coeffs[v]
    }

    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    /// Conjugation: flips the sign of every imaginary coordinate.
    pub fn conj(&self) -> Self {
        let mut z = *self;
        for c in z.coeffs[1..].iter_mut() {
            *c = -*c;
        }
        z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean norm of the imaginary part.
    pub fn im_norm(&self) -> f64 {
        self.coeffs()[1..].iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| *c == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut z = *self;
        for c in z.coeffs.iter_mut() {
            *c *= s;
        }
        z
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let mut z = *self;
        for (c, r) in z.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += r;
        }
        Ok(z)
    }

    /// Generator-table product. Errors on mixed algebra tags.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let table = self.algebra.table();
        let dim = self.algebra.dim();
        let mut out = Hypercomplex::zero(self.algebra);
        for p in 0..dim {
            let a = self.coeffs[p];
            if a == 0.0 {
                continue;
            }
            for q in 0..dim {
                let b = rhs.coeffs[q];
                if b == 0.0 {
                    continue;
                }
                let (idx, sign) = table.product(p, q);
                out.coeffs[idx] += sign * a * b;
            }
        }
        Ok(out)
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if self.algebra != rhs.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.name(),
                rhs.algebra.name(),
            ));
        }
        Ok(())
    }

    /// `z^{-1} = z̃ / |z|^2`.
    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Left-associated power `((z z) z) ...`; alternativity makes the
    /// bracketing immaterial.
    pub fn power(&self, n: u32) -> Self {
        let mut out = Self::one(self.algebra);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    /// Distance `|a - b|`.
    pub fn dist(&self, rhs: &Self) -> f64 {
        (*self - *rhs).norm()
    }

    /// `r (cos t + M sin t)` for a unit imaginary direction `M`.
    pub fn polar_exp(radius: f64, axis: &Hypercomplex, angle: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidParameter("negative radius".into()));
        }
        check_unit_imaginary(axis)?;
        let mut z = axis.scale(radius * angle.sin());
        z.coeffs[0] += radius * angle.cos();
        Ok(z)
    }

    /// Polar form `z = r exp(M t)` with `t` in `[0, pi]`.
    ///
    /// When `z` is real and nonpositive on the imaginary side the direction
    /// `M` cannot be recovered; the first generator is reported and
    /// `axis_defaulted` is set.
    pub fn polar_log(&self) -> Result<PolarForm> {
        let r = self.norm();
        if r == 0.0 {
            return Err(Error::ZeroPolar);
        }
        let im = self.im_norm();
        let angle = im.atan2(self.re());
        if im <= 1e-300 * r.max(1.0) {
            return Ok(PolarForm {
                radius: r,
                axis: Hypercomplex::generator(self.algebra, 1),
                angle,
                axis_defaulted: true,
            });
        }
        let mut axis = *self;
        axis.coeffs[0] = 0.0;
        Ok(PolarForm {
            radius: r,
            axis: axis.scale(1.0 / im),
            angle,
            axis_defaulted: false,
        })
    }

    /// Evaluates the closed-form coordinate identities built from `mul` and
    /// `conj` alone and returns the recovered coordinates.
    ///
    /// With `s = (2^r - 2)^{-1} (-z + sum_n i_n (z i_n*))` the identities are
    /// `z_0 = (z + s)/2` and `z_v = (-z i_v + i_v s)/2`.
    pub fn component_extract(&self) -> Vec<f64> {
        let dim = self.algebra.dim();
        let factor = 1.0 / ((1u32 << self.algebra.doubling_rank()) as f64 - 2.0);
        let mut sum = -*self;
        for n in 1..dim {
            let gen = Hypercomplex::generator(self.algebra, n);
            sum = sum + gen * (*self * gen.conj());
        }
        let inner = sum.scale(factor);
        let mut out = Vec::with_capacity(dim);
        out.push(((*self + inner).scale(0.5)).coeff(0));
        for v in 1..dim {
            let gen = Hypercomplex::generator(self.algebra, v);
            let val = (-(*self * gen) + gen * inner).scale(0.5);
            out.push(val.coeff(0));
        }
        out
    }

    /// Real matrix of `x -> a x` on the generator coordinates.
    pub fn left_mult_matrix(&self) -> DMatrix<f64> {
        let dim = self.algebra.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for v in 0..dim {
            let col = *self * Hypercomplex::generator(self.algebra, v);
            for r in 0..dim {
                m[(r, v)] = col.coeff(r);
            }
        }
        m
    }

    /// Real matrix of `x -> x a` on the generator coordinates.
    pub fn right_mult_matrix(&self) -> DMatrix<f64> {
        let dim = self.algebra.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for v in 0..dim {
            let col = Hypercomplex::generator(self.algebra, v) * *self;
            for r in 0..dim {
                m[(r, v)] = col.coeff(r);
            }
        }
        m
    }
}

/// Polar decomposition `z = radius * exp(axis * angle)`.
#[derive(Debug, Clone, Copy)]
pub struct PolarForm {
    pub radius: f64,
    pub axis: Hypercomplex,
    pub angle: f64,
    pub axis_defaulted: bool,
}

pub fn check_unit_imaginary(m: &Hypercomplex) -> Result<()> {
    if m.re().abs() > 1e-12 || (m.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitImaginary);
    }
    Ok(())
}

/// Checks that a real matrix is an algebra automorphism: orthogonal, fixes
/// the real axis and preserves the generator table.
pub fn is_algebra_automorphism(algebra: Algebra, mat: &DMatrix<f64>, tol: f64) -> bool {
    let dim = algebra.dim();
    if mat.nrows() != dim || mat.ncols() != dim {
        return false;
    }
    let eye = DMatrix::identity(dim, dim);
    if (mat.transpose() * mat - &eye).norm() > tol {
        return false;
    }
    let e0: Vec<f64> = (0..dim).map(|r| mat[(r, 0)]).collect();
    if (e0[0] - 1.0).abs() > tol || e0[1..].iter().any(|c| c.abs() > tol) {
        return false;
    }
    let image = |v: usize| {
        let col: Vec<f64> = (0..dim).map(|r| mat[(r, v)]).collect();
        Hypercomplex::new(algebra, &col).unwrap()
    };
    for p in 0..dim {
        for q in 0..dim {
            let (idx, sign) = algebra.table().product(p, q);
            let lhs = image(p) * image(q);
            let rhs = image(idx).scale(sign);
            if lhs.dist(&rhs) > tol {
                return false;
            }
        }
    }
    true
}

impl Add for Hypercomplex {
    type Output = Hypercomplex;
    fn add(self, rhs: Hypercomplex) -> Hypercomplex {
        self.try_add(&rhs).expect("algebra tag mismatch in +")
    }
}

impl Sub for Hypercomplex {
    type Output = Hypercomplex;
    fn sub(self, rhs: Hypercomplex) -> Hypercomplex {
        self + (-rhs)
    }
}

impl Neg for Hypercomplex {
    type Output = Hypercomplex;
    fn neg(self) -> Hypercomplex {
        self.scale(-1.0)
    }
}

impl Mul for Hypercomplex {
    type Output = Hypercomplex;
    fn mul(self, rhs: Hypercomplex) -> Hypercomplex {
        self.try_mul(&rhs).expect("algebra tag mismatch in *")
    }
}

impl fmt::Display for Hypercomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.coeffs().iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0.0 { "-" } else { "+" })?;
            } else if *c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            if v == 0 {
                write!(f, "{a}")?;
            } else if a == 1.0 {
                write!(f, "{}", self.algebra.generator_label(v))?;
            } else {
                write!(f, "{a}{}", self.algebra.generator_label(v))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
