//! Quasilinear operators on `K^n`, represented by real `N x N` matrices on
//! the flattened coordinates, `N = (m+1) n`.
//!
//! The layout is coordinate-major, generator-minor: the real index of the
//! generator component `v` of coordinate `l` is `l (m+1) + v`. Additivity and
//! real homogeneity are automatic; right-linearity, selfadjointness and
//! normality are properties checked numerically.

use crate::algebra::{Algebra, Hypercomplex};
use crate::error::{Error, Result};
use crate::kmodule::KVector;
use nalgebra::{Complex, DMatrix};

/// Property-check tolerance for linearity/adjointness flags.
pub const FLAG_TOL: f64 = 1e-11;

/// An additive, real-homogeneous operator on `K^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasilinearOp {
    algebra: Algebra,
    n: usize,
    rep: DMatrix<f64>,
}

impl QuasilinearOp {
    pub fn from_rep(algebra: Algebra, n: usize, rep: DMatrix<f64>) -> Result<Self> {
        let big = n * algebra.dim();
        if rep.nrows() != big || rep.ncols() != big {
            return Err(Error::DimensionMismatch {
                expected: big,
                got: rep.nrows(),
            });
        }
        Ok(QuasilinearOp { algebra, n, rep })
    }

    pub fn identity(algebra: Algebra, n: usize) -> Self {
        let big = n * algebra.dim();
        QuasilinearOp {
            algebra,
            n,
            rep: DMatrix::identity(big, big),
        }
    }

    pub fn zero(algebra: Algebra, n: usize) -> Self {
        let big = n * algebra.dim();
        QuasilinearOp {
            algebra,
            n,
            rep: DMatrix::zeros(big, big),
        }
    }

    /// Left multiplication by a `K`-matrix: `x -> A x`. Right-linear over `H`;
    /// over `O` this is right-linear exactly when all entries are real.
    pub fn from_k_matrix(algebra: Algebra, entries: &[Vec<Hypercomplex>]) -> Result<Self> {
        let n = entries.len();
        let dim = algebra.dim();
        let big = n * dim;
        let mut rep = DMatrix::zeros(big, big);
        for (l, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (k, a) in row.iter().enumerate() {
                if a.algebra() != algebra {
                    return Err(Error::AlgebraMismatch(algebra.name(), a.algebra().name()));
                }
                let block = a.left_mult_matrix();
                for r in 0..dim {
                    for c in 0..dim {
                        rep[(l * dim + r, k * dim + c)] = block[(r, c)];
                    }
                }
            }
        }
        Ok(QuasilinearOp { algebra, n, rep })
    }

    /// The operator acting by a real coordinate matrix on each generator
    /// component: `T(x)_l = sum_k t_{lk} x_k`. Right-linear for both algebras.
    pub fn from_real_matrix(algebra: Algebra, t: &DMatrix<f64>) -> Self {
        let n = t.nrows();
        let dim = algebra.dim();
        let big = n * dim;
        let mut rep = DMatrix::zeros(big, big);
        for l in 0..n {
            for k in 0..n {
                for v in 0..dim {
                    rep[(l * dim + v, k * dim + v)] = t[(l, k)];
                }
            }
        }
        QuasilinearOp { algebra, n, rep }
    }

    /// Left-diagonal operator `x_l -> b_l x_l`.
    pub fn left_diagonal(b: &[Hypercomplex]) -> Result<Self> {
        let algebra = b
            .first()
            .map(|z| z.algebra())
            .ok_or(Error::EmptyInput("left_diagonal"))?;
        let entries: Vec<Vec<Hypercomplex>> = (0..b.len())
            .map(|l| {
                (0..b.len())
                    .map(|k| {
                        if l == k {
                            b[l]
                        } else {
                            Hypercomplex::zero(algebra)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_k_matrix(algebra, &entries)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn module_dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        self.n * self.algebra.dim()
    }

    pub fn rep(&self) -> &DMatrix<f64> {
        &self.rep
    }

    pub fn apply(&self, x: &KVector) -> Result<KVector> {
        if x.algebra() != self.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.name(),
                x.algebra().name(),
            ));
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        KVector::from_real(self.algebra, &(&self.rep * x.to_real()))
    }

    /// `self` after `inner`: `x -> self(inner(x))`.
    pub fn compose(&self, inner: &QuasilinearOp) -> Result<Self> {
        self.check_same(inner)?;
        Ok(QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &self.rep * &inner.rep,
        })
    }

    pub fn add(&self, rhs: &QuasilinearOp) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &self.rep + &rhs.rep,
        })
    }

    pub fn sub(&self, rhs: &QuasilinearOp) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &self.rep - &rhs.rep,
        })
    }

    pub fn scale_real(&self, s: f64) -> Self {
        QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &self.rep * s,
        }
    }

    fn check_same(&self, rhs: &QuasilinearOp) -> Result<()> {
        if self.algebra != rhs.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.name(),
                rhs.algebra.name(),
            ));
        }
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.n,
            });
        }
        Ok(())
    }

    /// Block-diagonal left multiplication `x -> b x` as an operator.
    pub fn scalar_left(algebra: Algebra, n: usize, b: &Hypercomplex) -> Self {
        Self::block_diagonal(algebra, n, &b.left_mult_matrix())
    }

    /// Block-diagonal right multiplication `x -> x b` as an operator.
    pub fn scalar_right(algebra: Algebra, n: usize, b: &Hypercomplex) -> Self {
        Self::block_diagonal(algebra, n, &b.right_mult_matrix())
    }

    fn block_diagonal(algebra: Algebra, n: usize, block: &DMatrix<f64>) -> Self {
        let dim = algebra.dim();
        let big = n * dim;
        let mut rep = DMatrix::zeros(big, big);
        for l in 0..n {
            for r in 0..dim {
                for c in 0..dim {
                    rep[(l * dim + r, l * dim + c)] = block[(r, c)];
                }
            }
        }
        QuasilinearOp { algebra, n, rep }
    }

    /// `(b T)(x) = b (T(x))`.
    pub fn left_scalar_op(&self, b: &Hypercomplex) -> Self {
        let lm = Self::scalar_left(self.algebra, self.n, b);
        QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &lm.rep * &self.rep,
        }
    }

    /// `(T b)(x) = (T(x)) b`.
    pub fn right_scalar_op(&self, b: &Hypercomplex) -> Self {
        let rm = Self::scalar_right(self.algebra, self.n, b);
        QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: &rm.rep * &self.rep,
        }
    }

    /// The adjoint: the transpose of the real representation. For
    /// right-linear operators this is also the adjoint for the `K`-valued
    /// scalar product.
    pub fn adjoint(&self) -> Self {
        QuasilinearOp {
            algebra: self.algebra,
            n: self.n,
            rep: self.rep.transpose(),
        }
    }

    /// Largest singular value of the representation.
    pub fn operator_norm(&self) -> f64 {
        if self.rep.iter().all(|x| *x == 0.0) {
            return 0.0;
        }
        self.rep.clone().singular_values()[0]
    }

    pub fn frobenius(&self) -> f64 {
        self.rep.norm()
    }

    /// Right-linearity: commutation with right multiplication by every
    /// generator.
    pub fn is_right_linear(&self) -> bool {
        let tol = FLAG_TOL * self.operator_norm().max(1.0);
        for v in 1..self.algebra.dim() {
            let gen = Hypercomplex::generator(self.algebra, v);
            let r = Self::scalar_right(self.algebra, self.n, &gen);
            if (&self.rep * &r.rep - &r.rep * &self.rep).norm() > tol {
                return false;
            }
        }
        true
    }

    pub fn is_selfadjoint(&self) -> bool {
        (&self.rep - self.rep.transpose()).norm() <= FLAG_TOL * self.operator_norm().max(1.0)
    }

    pub fn is_normal(&self) -> bool {
        let norm = self.operator_norm();
        let lhs = &self.rep * self.rep.transpose();
        let rhs = self.rep.transpose() * &self.rep;
        (lhs - rhs).norm() <= FLAG_TOL * (norm * norm).max(1.0)
    }

    /// Components of `T(x) = sum_v T_v(x) i_v`: each `T_v` is the real
    /// `n x N` matrix sending flattened inputs to the generator-`v` component
    /// of each output coordinate, recovered by the closed-form coordinate
    /// identities.
    pub fn component_decompose(&self) -> Vec<DMatrix<f64>> {
        let dim = self.algebra.dim();
        let big = self.real_dim();
        let mut parts = vec![DMatrix::zeros(self.n, big); dim];
        for col in 0..big {
            let mut e = nalgebra::DVector::zeros(big);
            e[col] = 1.0;
            let image = KVector::from_real(self.algebra, &(&self.rep * e)).unwrap();
            for l in 0..self.n {
                let comps = image.coord(l).component_extract();
                for (v, value) in comps.iter().enumerate() {
                    parts[v][(l, col)] = *value;
                }
            }
        }
        parts
    }

    /// Rebuilds the operator from its components: `x -> sum_v T_v(x) i_v`.
    pub fn from_components(algebra: Algebra, parts: &[DMatrix<f64>]) -> Result<Self> {
        let dim = algebra.dim();
        if parts.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: parts.len(),
            });
        }
        let n = parts[0].nrows();
        let big = n * dim;
        let mut rep = DMatrix::zeros(big, big);
        for (v, part) in parts.iter().enumerate() {
            for l in 0..n {
                for c in 0..big {
                    rep[(l * dim + v, c)] += part[(l, c)];
                }
            }
        }
        Self::from_rep(algebra, n, rep)
    }

    /// Restriction components for a right-linear operator: real `n x n`
    /// matrices `t_v` with `T(x0) = sum_v (t_v x0) i_v` on real inputs. A
    /// right-linear operator is determined by them.
    pub fn restriction_components(&self) -> Result<Vec<DMatrix<f64>>> {
        if !self.is_right_linear() {
            return Err(Error::NotRightLinear);
        }
        let dim = self.algebra.dim();
        let mut parts = vec![DMatrix::zeros(self.n, self.n); dim];
        for k in 0..self.n {
            let image = self.apply(&KVector::basis(self.algebra, self.n, k))?;
            for l in 0..self.n {
                for v in 0..dim {
                    parts[v][(l, k)] = image.coord(l).coeff(v);
                }
            }
        }
        Ok(parts)
    }

    /// The `K`-matrix of a right-linear operator over `H` (entries of the
    /// left-multiplication form).
    pub fn k_matrix(&self) -> Result<Vec<Vec<Hypercomplex>>> {
        if !self.is_right_linear() {
            return Err(Error::NotRightLinear);
        }
        let dim = self.algebra.dim();
        let mut out = vec![vec![Hypercomplex::zero(self.algebra); self.n]; self.n];
        for k in 0..self.n {
            let image = self.apply(&KVector::basis(self.algebra, self.n, k))?;
            for l in 0..self.n {
                let mut coeffs = vec![0.0; dim];
                for (v, c) in coeffs.iter_mut().enumerate() {
                    *c = image.coord(l).coeff(v);
                }
                out[l][k] = Hypercomplex::new(self.algebra, &coeffs)?;
            }
        }
        Ok(out)
    }

    /// Complex block form of a right-linear quaternionic operator: the pair
    /// `(T_1, T_2)` of complex matrices with
    /// `T(z_1 + z_2 j) = (T_1 z_1 - T_2 conj(z_2)) + (T_1 z_2 + T_2 conj(z_1)) j`.
    pub fn complex_block_form(&self) -> Result<ComplexBlockForm> {
        if self.algebra != Algebra::Quaternion {
            return Err(Error::UnsupportedAlgebra);
        }
        if !self.is_right_linear() {
            return Err(Error::NotRightLinear);
        }
        let entries = self.k_matrix()?;
        let n = self.n;
        let mut t1 = DMatrix::<Complex<f64>>::zeros(n, n);
        let mut t2 = DMatrix::<Complex<f64>>::zeros(n, n);
        for l in 0..n {
            for k in 0..n {
                let a = entries[l][k];
                t1[(l, k)] = Complex::new(a.coeff(0), a.coeff(1));
                t2[(l, k)] = Complex::new(a.coeff(2), a.coeff(3));
            }
        }
        Ok(ComplexBlockForm { t1, t2 })
    }
}

/// The complex 2x2-block description of a right-linear operator over `H`,
/// determined by two complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBlockForm {
    pub t1: DMatrix<Complex<f64>>,
    pub t2: DMatrix<Complex<f64>>,
}

impl ComplexBlockForm {
    /// Reassembles the quaternionic operator `A = T_1 + T_2 j`.
    pub fn reassemble(&self) -> Result<QuasilinearOp> {
        let n = self.t1.nrows();
        let mut entries = vec![vec![Hypercomplex::zero(Algebra::Quaternion); n]; n];
        for l in 0..n {
            for k in 0..n {
                let a = self.t1[(l, k)];
                let b = self.t2[(l, k)];
                entries[l][k] =
                    Hypercomplex::new(Algebra::Quaternion, &[a.re, a.im, b.re, b.im])?;
            }
        }
        QuasilinearOp::from_k_matrix(Algebra::Quaternion, &entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmodule::{inner, real_inner};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: Algebra = Algebra::Quaternion;

    #[test]
    fn apply_compose_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for a in Algebra::both() {
            let n = 3;
            let id = QuasilinearOp::identity(a, n);
            let x = sample::kvector(a, n, &mut rng);
            assert!(id.apply(&x).unwrap().dist(&x) == 0.0);

            let t = sample::quasilinear(a, n, &mut rng);
            assert_eq!(t.compose(&id).unwrap(), t);
            let u = sample::quasilinear(a, n, &mut rng);
            let lhs = u.compose(&t).unwrap().apply(&x).unwrap();
            let rhs = u.apply(&t.apply(&x).unwrap()).unwrap();
            assert!(lhs.dist(&rhs) < 1e-12);
        }
    }

    #[test]
    fn k_matrix_left_action() {
        // 1x1 entry a = i applied to x = j gives ij = k
        let i = Hypercomplex::generator(H, 1);
        let t = QuasilinearOp::from_k_matrix(H, &[vec![i]]).unwrap();
        let j = KVector::new(vec![Hypercomplex::generator(H, 2)]).unwrap();
        let k = KVector::new(vec![Hypercomplex::generator(H, 3)]).unwrap();
        assert!(t.apply(&j).unwrap().dist(&k) < 1e-15);

        // identity over K
        let one = Hypercomplex::one(H);
        let zero = Hypercomplex::zero(H);
        let id = QuasilinearOp::from_k_matrix(H, &[vec![one, zero], vec![zero, one]]).unwrap();
        assert_eq!(id, QuasilinearOp::identity(H, 2));

        // random A, x: apply equals the coordinate-level product
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for a in Algebra::both() {
            let n = 2;
            let entries: Vec<Vec<Hypercomplex>> = (0..n)
                .map(|_| (0..n).map(|_| sample::hypercomplex(a, &mut rng)).collect())
                .collect();
            let t = QuasilinearOp::from_k_matrix(a, &entries).unwrap();
            let x = sample::kvector(a, n, &mut rng);
            let got = t.apply(&x).unwrap();
            for l in 0..n {
                let mut want = Hypercomplex::zero(a);
                for k in 0..n {
                    want = want + entries[l][k].try_mul(x.coord(k)).unwrap();
                }
                assert!(got.coord(l).dist(&want) < 1e-13);
            }
        }
    }

    #[test]
    fn scalar_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let t = sample::quasilinear(H, 2, &mut rng);
        let one = Hypercomplex::one(H);
        assert!(t.left_scalar_op(&one).rep().relative_eq(t.rep(), 1e-15, 1e-15));
        assert!(t.right_scalar_op(&one).rep().relative_eq(t.rep(), 1e-15, 1e-15));
        // real scalars: both sides coincide with real scaling
        let c = Hypercomplex::from_real(H, -1.75);
        assert!(t
            .left_scalar_op(&c)
            .rep()
            .relative_eq(t.scale_real(-1.75).rep(), 1e-13, 1e-13));
        assert!(t
            .right_scalar_op(&c)
            .rep()
            .relative_eq(t.scale_real(-1.75).rep(), 1e-13, 1e-13));
        // (i I)(j) = ij = k
        let i = Hypercomplex::generator(H, 1);
        let id = QuasilinearOp::identity(H, 1);
        let op = id.left_scalar_op(&i);
        let j = KVector::new(vec![Hypercomplex::generator(H, 2)]).unwrap();
        let k = KVector::new(vec![Hypercomplex::generator(H, 3)]).unwrap();
        assert!(op.apply(&j).unwrap().dist(&k) < 1e-15);
    }

    #[test]
    fn adjoint_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let id = QuasilinearOp::identity(H, 2);
        assert_eq!(id.adjoint(), id);
        for a in Algebra::both() {
            let n = 2;
            let t = sample::quasilinear(a, n, &mut rng);
            assert_eq!(t.adjoint().adjoint(), t);
            // real-adjoint identity for arbitrary quasilinear operators
            let x = sample::kvector(a, n, &mut rng);
            let y = sample::kvector(a, n, &mut rng);
            let lhs = real_inner(&t.apply(&x).unwrap(), &y).unwrap();
            let rhs = real_inner(&x, &t.adjoint().apply(&y).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);

            // K-valued adjoint identity for right-linear operators
            let t = sample::right_linear(a, n, &mut rng);
            let lhs = inner(&t.apply(&x).unwrap(), &y).unwrap();
            let rhs = inner(&x, &t.adjoint().apply(&y).unwrap()).unwrap();
            assert!(lhs.dist(&rhs) < 1e-11);
        }
        // adjoint of a K-matrix operator is the conjugate transpose
        let entries: Vec<Vec<Hypercomplex>> = (0..2)
            .map(|_| (0..2).map(|_| sample::hypercomplex(H, &mut rng)).collect())
            .collect();
        let t = QuasilinearOp::from_k_matrix(H, &entries).unwrap();
        let mut star = vec![vec![Hypercomplex::zero(H); 2]; 2];
        for l in 0..2 {
            for k in 0..2 {
                star[l][k] = entries[k][l].conj();
            }
        }
        let want = QuasilinearOp::from_k_matrix(H, &star).unwrap();
        assert!(t.adjoint().rep().relative_eq(want.rep(), 1e-13, 1e-13));
    }

    #[test]
    fn operator_norm_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        assert!((QuasilinearOp::identity(H, 3).operator_norm() - 1.0).abs() < 1e-13);
        for a in Algebra::both() {
            let b = sample::hypercomplex(a, &mut rng);
            let op = QuasilinearOp::identity(a, 2).left_scalar_op(&b);
            assert!((op.operator_norm() - b.norm()).abs() < 1e-12);
            let t = sample::quasilinear(a, 2, &mut rng);
            let x = sample::kvector(a, 2, &mut rng);
            assert!(
                t.apply(&x).unwrap().norm() <= t.operator_norm() * x.norm() * (1.0 + 1e-12)
            );
        }
    }

    #[test]
    fn linearity_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let id = QuasilinearOp::identity(H, 2);
        assert!(id.is_selfadjoint() && id.is_normal() && id.is_right_linear());

        // K-matrix actions over H are right-linear
        let t = sample::right_linear(H, 2, &mut rng);
        assert!(t.is_right_linear());

        // the conjugation operator is quasilinear but not right-linear
        let conj_block = Hypercomplex::one(H).left_mult_matrix(); // identity block
        let mut rep = DMatrix::zeros(4, 4);
        for v in 0..4 {
            rep[(v, v)] = if v == 0 { 1.0 } else { -1.0 };
        }
        let _ = conj_block;
        let conj_op = QuasilinearOp::from_rep(H, 1, rep).unwrap();
        assert!(!conj_op.is_right_linear());
        // T(x i) = (x i)~ = -i x̃ differs from T(x) i
        let x = sample::hypercomplex(H, &mut rng);
        let i = Hypercomplex::generator(H, 1);
        let lhs = (x * i).conj();
        let rhs = x.conj() * i;
        assert!(lhs.dist(&rhs) > 1e-6 || x.coeff(2).abs() + x.coeff(3).abs() < 1e-6);

        // octonion left multiplication by a non-real scalar is not
        // right-linear: the associator obstructs it
        let o = Algebra::Octonion;
        let a = Hypercomplex::generator(o, 1);
        let t = QuasilinearOp::from_k_matrix(o, &[vec![a]]).unwrap();
        assert!(!t.is_right_linear());
        // while a real matrix action is
        let tr = QuasilinearOp::from_real_matrix(o, &DMatrix::from_row_slice(1, 1, &[2.0]));
        assert!(tr.is_right_linear());
    }

    #[test]
    fn component_reassembly() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for a in Algebra::both() {
            let n = 2;
            let id = QuasilinearOp::identity(a, n);
            let parts = id.component_decompose();
            // T = I: the 0-component is the coordinate-projection pattern,
            // all others vanish
            for (v, p) in parts.iter().enumerate() {
                if v == 0 {
                    for l in 0..n {
                        assert!((p[(l, l * a.dim())] - 1.0).abs() < 1e-13);
                    }
                } else {
                    // the v-th component of I(x) is read off lane v
                    for l in 0..n {
                        assert!((p[(l, l * a.dim() + v)] - 1.0).abs() < 1e-13);
                    }
                }
            }
            let t = sample::quasilinear(a, n, &mut rng);
            let parts = t.component_decompose();
            let back = QuasilinearOp::from_components(a, &parts).unwrap();
            assert!((back.rep() - t.rep()).norm() < 1e-12 * t.frobenius().max(1.0));
        }
    }

    #[test]
    fn complex_block_form_roundtrip_and_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(58);
        let id = QuasilinearOp::identity(H, 2);
        let blocks = id.complex_block_form().unwrap();
        assert!(blocks.t2.iter().all(|c| c.norm() == 0.0));

        let t = sample::right_linear(H, 3, &mut rng);
        let blocks = t.complex_block_form().unwrap();
        let back = blocks.reassemble().unwrap();
        assert!((back.rep() - t.rep()).norm() < 1e-12 * t.frobenius().max(1.0));

        // [b I, T] = (b - conj b) (T_2 part) for complex b; with b = i the
        // commutator keeps only the j,k-blocks doubled
        let i = Hypercomplex::generator(H, 1);
        let bi = QuasilinearOp::scalar_left(H, 3, &i);
        let comm = bi.compose(&t).unwrap().sub(&t.compose(&bi).unwrap()).unwrap();
        let cb = ComplexBlockForm {
            t1: DMatrix::zeros(3, 3),
            t2: blocks.t2.map(|c| c * Complex::new(0.0, 2.0)),
        };
        // (b - conj b) T_2 j with b = i gives 2i T_2 j; as a K-matrix the
        // entry is (2 i)(t2 j) whose complex pair is (0, 2 i t2)
        let want = cb.reassemble().unwrap();
        assert!((comm.rep() - want.rep()).norm() < 1e-11 * t.frobenius().max(1.0));

        let o = QuasilinearOp::identity(Algebra::Octonion, 1);
        assert!(matches!(
            o.complex_block_form(),
            Err(Error::UnsupportedAlgebra)
        ));
    }

    #[test]
    fn octonion_right_linear_only_for_real_matrices() {
        // associativity check at n = 1: left multiplication is right-linear
        // over H, and over O exactly when the scalar is real
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..10 {
            let a = sample::hypercomplex(H, &mut rng);
            let t = QuasilinearOp::from_k_matrix(H, &[vec![a]]).unwrap();
            assert!(t.is_right_linear());
        }
        let o = Algebra::Octonion;
        for _ in 0..10 {
            let mut a = sample::hypercomplex(o, &mut rng);
            let t = QuasilinearOp::from_k_matrix(o, &[vec![a]]).unwrap();
            let imaginary = a.im_norm() > 1e-3;
            assert_eq!(t.is_right_linear(), !imaginary);
            // zero out the imaginary part: always right-linear
            for v in 1..8 {
                *a.coeff_mut(v) = 0.0;
            }
            let t = QuasilinearOp::from_k_matrix(o, &[vec![a]]).unwrap();
            assert!(t.is_right_linear());
        }
    }
}
