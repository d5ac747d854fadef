//! Finite-dimensional modules `K^n` with the `K`-valued scalar product, the
//! induced real scalar product, orthogonalization and norm-preserving
//! extension of functionals.
//!
//! The scalar product is `<x; y> = sum_l conj(x_l) y_l`. Its real part is the
//! Euclidean product on the flattened coordinates, and the generator
//! components satisfy `<x; y> = sum_w real_inner(x i_w, y) i_w`, which makes
//! orthogonality against a `K`-subspace equivalent to real orthogonality
//! against its saturated real span.

use crate::algebra::{Algebra, Hypercomplex};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::ops::{Add, Neg, Sub};

/// Relative pivot tolerance for every linear-dependence decision.
pub const RANK_TOL: f64 = 1e-10;

/// A vector in `K^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KVector {
    algebra: Algebra,
    coords: Vec<Hypercomplex>,
}

impl KVector {
    pub fn new(coords: Vec<Hypercomplex>) -> Result<Self> {
        let algebra = coords
            .first()
            .map(|c| c.algebra())
            .ok_or(Error::EmptyInput("KVector::new"))?;
        if coords.iter().any(|c| c.algebra() != algebra) {
            return Err(Error::AlgebraMismatch(algebra.name(), "mixed"));
        }
        Ok(KVector { algebra, coords })
    }

    pub fn zeros(algebra: Algebra, n: usize) -> Self {
        KVector {
            algebra,
            coords: vec![Hypercomplex::zero(algebra); n],
        }
    }

    /// Standard basis vector `e_l`.
    pub fn basis(algebra: Algebra, n: usize, l: usize) -> Self {
        let mut x = Self::zeros(algebra, n);
        x.coords[l] = Hypercomplex::one(algebra);
        x
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, l: usize) -> &Hypercomplex {
        &self.coords[l]
    }

    pub fn coords(&self) -> &[Hypercomplex] {
        &self.coords
    }

    pub fn coord_mut(&mut self, l: usize) -> &mut Hypercomplex {
        &mut self.coords[l]
    }

    /// Real coordinate vector, coordinate-major and generator-minor.
    pub fn to_real(&self) -> DVector<f64> {
        let dim = self.algebra.dim();
        let mut out = DVector::zeros(self.coords.len() * dim);
        for (l, c) in self.coords.iter().enumerate() {
            for v in 0..dim {
                out[l * dim + v] = c.coeff(v);
            }
        }
        out
    }

    pub fn from_real(algebra: Algebra, flat: &DVector<f64>) -> Result<Self> {
        let dim = algebra.dim();
        if flat.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: flat.len(),
            });
        }
        let coords = (0..flat.len() / dim)
            .map(|l| {
                let slice: Vec<f64> = (0..dim).map(|v| flat[l * dim + v]).collect();
                Hypercomplex::new(algebra, &slice)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KVector { algebra, coords })
    }

    pub fn scale_real(&self, s: f64) -> Self {
        KVector {
            algebra: self.algebra,
            coords: self.coords.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Right scalar multiplication `x a`, coordinatewise.
    pub fn scale_right(&self, a: &Hypercomplex) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.try_mul(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(KVector {
            algebra: self.algebra,
            coords,
        })
    }

    /// Left scalar multiplication `a x`, coordinatewise.
    pub fn scale_left(&self, a: &Hypercomplex) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| a.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(KVector {
            algebra: self.algebra,
            coords,
        })
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, rhs: &Self) -> f64 {
        (self.clone() - rhs.clone()).norm()
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.algebra != rhs.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.name(),
                rhs.algebra.name(),
            ));
        }
        if self.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: rhs.len(),
            });
        }
        Ok(())
    }
}

impl Add for KVector {
    type Output = KVector;
    fn add(self, rhs: KVector) -> KVector {
        self.check_compatible(&rhs).expect("incompatible vectors");
        let coords = self
            .coords
            .iter()
            .zip(rhs.coords.iter())
            .map(|(a, b)| *a + *b)
            .collect();
        KVector {
            algebra: self.algebra,
            coords,
        }
    }
}

impl Sub for KVector {
    type Output = KVector;
    fn sub(self, rhs: KVector) -> KVector {
        self + (-rhs)
    }
}

impl Neg for KVector {
    type Output = KVector;
    fn neg(self) -> KVector {
        self.scale_real(-1.0)
    }
}

/// `K`-valued scalar product `sum_l conj(x_l) y_l`.
pub fn inner(x: &KVector, y: &KVector) -> Result<Hypercomplex> {
    x.check_compatible(y)?;
    let mut acc = Hypercomplex::zero(x.algebra());
    for (a, b) in x.coords().iter().zip(y.coords().iter()) {
        acc = acc + a.conj().try_mul(b)?;
    }
    Ok(acc)
}

/// Real scalar product: the Euclidean product of the flattened coordinates,
/// equal to `Re <x; y>`.
pub fn real_inner(x: &KVector, y: &KVector) -> Result<f64> {
    x.check_compatible(y)?;
    let mut acc = 0.0;
    for (a, b) in x.coords().iter().zip(y.coords().iter()) {
        for v in 0..x.algebra().dim() {
            acc += a.coeff(v) * b.coeff(v);
        }
    }
    Ok(acc)
}

/// The right `K`-span of a family, realized as the real span of the vectors
/// multiplied by every generator. Returns a real-orthonormal (column) basis.
pub fn saturated_real_basis(vectors: &[KVector]) -> Result<DMatrix<f64>> {
    let first = vectors.first().ok_or(Error::EmptyInput("saturation"))?;
    let algebra = first.algebra();
    let dim = algebra.dim();
    let big = first.len() * dim;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(vectors.len() * dim);
    for x in vectors {
        for v in 0..dim {
            let gen = Hypercomplex::generator(algebra, v);
            cols.push(x.scale_right(&gen)?.to_real());
        }
    }
    let scale = cols.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    Ok(real_orthonormalize(big, &cols, scale, None)?.0)
}

/// Modified Gram-Schmidt over the reals with a pivot tolerance relative to
/// the caller-supplied scale. Returns the orthonormal columns kept and their
/// input indices; with `fail_on_drop` a dropped input is an error instead.
fn real_orthonormalize(
    rows: usize,
    cols: &[DVector<f64>],
    scale: f64,
    fail_on_drop: Option<&[usize]>,
) -> Result<(DMatrix<f64>, Vec<usize>)> {
    real_orthonormalize_with(rows, cols, scale, RANK_TOL, fail_on_drop)
}

fn real_orthonormalize_with(
    rows: usize,
    cols: &[DVector<f64>],
    scale: f64,
    tol: f64,
    fail_on_drop: Option<&[usize]>,
) -> Result<(DMatrix<f64>, Vec<usize>)> {
    let scale = scale.max(1e-300);
    let mut kept: Vec<DVector<f64>> = Vec::new();
    let mut kept_idx = Vec::new();
    for (index, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        // re-orthogonalize twice for numerical sanity
        for _ in 0..2 {
            for q in &kept {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        let n = v.norm();
        if n <= tol * scale {
            if let Some(map) = fail_on_drop {
                return Err(Error::DependentInput { index: map[index] });
            }
            continue;
        }
        kept.push(v / n);
        kept_idx.push(index);
    }
    let mut m = DMatrix::zeros(rows, kept.len());
    for (c, q) in kept.iter().enumerate() {
        m.set_column(c, q);
    }
    Ok((m, kept_idx))
}

/// Projects `x` orthogonally onto the real span of the given orthonormal
/// columns.
pub fn project_real(basis: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    basis * (basis.transpose() * x)
}

/// Orthonormalizes a family over `K`: the output is `K`-orthonormal and has
/// the same right `K`-span. Dependent inputs are reported by index.
pub fn gram_schmidt_k(vectors: &[KVector]) -> Result<Vec<KVector>> {
    let first = vectors.first().ok_or(Error::EmptyInput("gram_schmidt_k"))?;
    let algebra = first.algebra();
    let dim = algebra.dim();
    let n = first.len();
    let scale = vectors
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut frame: Vec<DVector<f64>> = Vec::new(); // real-orthonormal saturation of accepted vectors
    let mut out = Vec::new();
    for (index, x) in vectors.iter().enumerate() {
        if x.len() != n || x.algebra() != algebra {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut v = x.to_real();
        for _ in 0..2 {
            for q in &frame {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        let norm = v.norm();
        if norm <= RANK_TOL * scale {
            return Err(Error::DependentInput { index });
        }
        let unit = KVector::from_real(algebra, &(&v / norm))?;
        for w in 0..dim {
            let gen = Hypercomplex::generator(algebra, w);
            let col = unit.scale_right(&gen)?.to_real();
            // the translates of a unit vector by the generators are already
            // real-orthonormal; a light re-orthogonalization guards rounding
            let mut col = col;
            for q in &frame {
                let c = q.dot(&col);
                col -= q * c;
            }
            let cn = col.norm();
            frame.push(col / cn);
        }
        out.push(unit);
    }
    Ok(out)
}

/// Basis of the orthogonal complement of `span_K(ys)` inside `K^n`.
pub fn orth_complement(ys: &[KVector]) -> Result<Vec<KVector>> {
    let first = ys.first().ok_or(Error::EmptyInput("orth_complement"))?;
    let algebra = first.algebra();
    let n = first.len();
    let ortho = gram_schmidt_k(ys)?;
    let sat = saturated_real_basis(&ortho)?;
    complement_k_basis(algebra, n, &sat)
}

/// Extracts a `K`-orthonormal basis of the orthogonal complement of the real
/// span given by `sat` (columns, orthonormal, closed under the right
/// generator action).
pub fn complement_k_basis(
    algebra: Algebra,
    n: usize,
    sat: &DMatrix<f64>,
) -> Result<Vec<KVector>> {
    let dim = algebra.dim();
    let big = n * dim;
    // complement basis over the reals; the pivot scale is that of the unit
    // probes, not of their residuals
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for e in 0..big {
        let mut v = DVector::zeros(big);
        v[e] = 1.0;
        let proj = project_real(sat, &v);
        cols.push(v - proj);
    }
    let (comp, _) = real_orthonormalize(big, &cols, 1.0, None)?;
    k_basis_from_real_span(algebra, n, &comp)
}

/// Extracts a `K`-orthonormal basis from a real-orthonormal basis of a
/// subspace that is closed under the right generator action.
///
/// The drop threshold sits well above rounding noise: the span has an exact
/// `K`-line structure, so genuine residuals are of unit order while numeric
/// leftovers stay many orders below.
pub fn k_basis_from_real_span(
    algebra: Algebra,
    n: usize,
    span: &DMatrix<f64>,
) -> Result<Vec<KVector>> {
    const DROP_TOL: f64 = 1e-7;
    let dim = algebra.dim();
    let mut working: Vec<DVector<f64>> = (0..span.ncols())
        .map(|c| DVector::from(span.column(c).clone_owned()))
        .collect();
    let mut out: Vec<KVector> = Vec::new();
    while let Some(first) = working.first() {
        let u = KVector::from_real(algebra, first)?;
        let u = u.scale_real(1.0 / u.norm());
        // remove the K-line of u from the working span
        let mut block: Vec<DVector<f64>> = Vec::with_capacity(dim);
        for v in 0..dim {
            let gen = Hypercomplex::generator(algebra, v);
            let mut col = u.scale_right(&gen)?.to_real();
            for q in &block {
                let c = q.dot(&col);
                col -= q * c;
            }
            block.push(col.normalize());
        }
        let mut next: Vec<DVector<f64>> = Vec::new();
        for w in &working {
            let mut v = w.clone();
            for _ in 0..2 {
                for q in &block {
                    let c = q.dot(&v);
                    v -= q * c;
                }
            }
            if v.norm() > DROP_TOL {
                next.push(v);
            }
        }
        let big = n * dim;
        let (m, _) = real_orthonormalize_with(big, &next, 1.0, DROP_TOL, None)?;
        working = (0..m.ncols())
            .map(|c| DVector::from(m.column(c).clone_owned()))
            .collect();
        out.push(u);
    }
    Ok(out)
}

/// A bounded quasilinear functional represented by a vector:
/// `f(x) = <w; x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct KFunctional {
    representer: KVector,
}

impl KFunctional {
    pub fn from_representer(w: KVector) -> Self {
        KFunctional { representer: w }
    }

    pub fn representer(&self) -> &KVector {
        &self.representer
    }

    pub fn eval(&self, x: &KVector) -> Result<Hypercomplex> {
        inner(&self.representer, x)
    }

    /// Operator norm; equals the representer norm by the Cauchy-Schwarz
    /// inequality with equality at `x = w`.
    pub fn norm(&self) -> f64 {
        self.representer.norm()
    }
}

/// The distance functional of a point `x` from `span_K(ys)`: satisfies
/// `f(x) = 1`, `|f| = 1/d` and `f|_Y = 0` where `d = dist(x, Y)`.
///
/// An empty `ys` slice means `Y = {0}`.
pub fn distance_functional(ys: &[KVector], x: &KVector) -> Result<KFunctional> {
    let resid = if ys.is_empty() {
        x.clone()
    } else {
        let ortho = gram_schmidt_k(ys)?;
        let sat = saturated_real_basis(&ortho)?;
        let flat = x.to_real();
        KVector::from_real(x.algebra(), &(&flat - project_real(&sat, &flat)))?
    };
    let d = resid.norm();
    if d <= RANK_TOL * x.norm().max(1e-300) {
        return Err(Error::DegenerateDistance);
    }
    Ok(KFunctional::from_representer(resid.scale_real(1.0 / (d * d))))
}

/// Extends the functional `y -> <sum_j y_j c_j; y>` given on `span_K(ys)` to
/// the whole space by zero on the complement. The norm is preserved because
/// the representer stays inside the subspace.
pub fn extend_functional(ys: &[KVector], coeffs: &[Hypercomplex]) -> Result<KFunctional> {
    if ys.len() != coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: ys.len(),
            got: coeffs.len(),
        });
    }
    let first = ys.first().ok_or(Error::EmptyInput("extend_functional"))?;
    let mut w = KVector::zeros(first.algebra(), first.len());
    for (y, c) in ys.iter().zip(coeffs.iter()) {
        w = w + y.scale_right(c)?;
    }
    Ok(KFunctional::from_representer(w))
}
