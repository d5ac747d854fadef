//! Graded projection operators and the lattice of closed `K`-subspaces.
//!
//! A graded projection is an idempotent selfadjoint right-linear operator
//! carrying the orthonormal basis of its range, so every lattice element can
//! be revalidated against the full invariant set, including the generator
//! compatibility laws of the grading.

use crate::algebra::{Algebra, Hypercomplex};
use crate::error::{Error, Result};
use crate::kmodule::{
    self, inner, k_basis_from_real_span, real_inner, saturated_real_basis, KVector, RANK_TOL,
};
use crate::operator::QuasilinearOp;
use nalgebra::{DMatrix, DVector};

/// Tolerance used by the projection invariant checks.
pub const PROJ_TOL: f64 = 1e-10;

/// An orthogonal projection onto a closed `K`-subspace, together with the
/// subspace basis generating it.
#[derive(Debug, Clone)]
pub struct GradedProjection {
    op: QuasilinearOp,
    basis: Vec<KVector>,
}

impl GradedProjection {
    pub fn op(&self) -> &QuasilinearOp {
        &self.op
    }

    pub fn basis(&self) -> &[KVector] {
        &self.basis
    }

    /// `K`-dimension of the range.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra(&self) -> Algebra {
        self.op.algebra()
    }

    pub fn module_dim(&self) -> usize {
        self.op.module_dim()
    }

    pub fn zero(algebra: Algebra, n: usize) -> Self {
        GradedProjection {
            op: QuasilinearOp::zero(algebra, n),
            basis: Vec::new(),
        }
    }

    pub fn identity(algebra: Algebra, n: usize) -> Self {
        GradedProjection {
            op: QuasilinearOp::identity(algebra, n),
            basis: (0..n).map(|l| KVector::basis(algebra, n, l)).collect(),
        }
    }

    pub fn apply(&self, x: &KVector) -> Result<KVector> {
        self.op.apply(x)
    }

    /// `I - P`, with the complement basis attached.
    pub fn complement(&self) -> Result<GradedProjection> {
        let algebra = self.algebra();
        let n = self.module_dim();
        let basis = if self.basis.is_empty() {
            (0..n).map(|l| KVector::basis(algebra, n, l)).collect()
        } else {
            let sat = saturated_real_basis(&self.basis)?;
            kmodule::complement_k_basis(algebra, n, &sat)?
        };
        let op = QuasilinearOp::identity(algebra, n).sub(&self.op)?;
        Ok(GradedProjection { op, basis })
    }

    /// Whether the projection is anchored at the real part of the module:
    /// its representation is a real projector replicated across the
    /// generator lanes. Subspaces spanned by real frames (after scalar
    /// multiples) are of this form; they carry the generator grading
    /// exactly. A general quaternionic subspace is equivalent to such an
    /// anchored one only up to an isometric automorphism of the scalars.
    pub fn is_real_anchored(&self, tol: f64) -> bool {
        let dim = self.algebra().dim();
        let n = self.module_dim();
        let rep = self.op().rep();
        let mut replicated = DMatrix::zeros(n * dim, n * dim);
        for l in 0..n {
            for k in 0..n {
                let p = rep[(l * dim, k * dim)];
                for v in 0..dim {
                    replicated[(l * dim + v, k * dim + v)] = p;
                }
            }
        }
        (rep - replicated).norm() <= tol * (1.0 + rep.norm())
    }

    /// Full invariant set: idempotent, selfadjoint, right-linear, range
    /// agreement, basis reconstruction, and - on real-anchored subspaces,
    /// where the grading is canonical - the generator grading laws.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let p = self.op.rep();
        let n = self.module_dim();
        let algebra = self.algebra();
        let dim = algebra.dim();
        if (p * p - p).norm() > tol {
            return Err(Error::InvalidParameter("projection is not idempotent".into()));
        }
        if (p - p.transpose()).norm() > tol {
            return Err(Error::NotSelfadjoint);
        }
        if !self.op.is_right_linear() {
            return Err(Error::NotRightLinear);
        }
        // range equals the K-span of the stored basis
        let trace: f64 = p.diagonal().iter().sum();
        if (trace - (dim * self.rank()) as f64).abs() > 1e-6 {
            return Err(Error::InvalidParameter(
                "projection rank does not match basis".into(),
            ));
        }
        for (idx, y) in self.basis.iter().enumerate() {
            if self.apply(y)?.dist(y) > tol * 10.0 {
                return Err(Error::DependentInput { index: idx });
            }
        }
        // norm is 1 when nonzero
        if self.rank() > 0 {
            let norm = self.op.operator_norm();
            if (norm - 1.0).abs() > tol {
                return Err(Error::NormBound {
                    norm,
                    bound: 1.0,
                });
            }
        }
        // reconstruction from the orthonormal basis:
        // P(x) = sum_a y_a <y_a; x>
        for l in 0..n {
            for v in 0..dim {
                let mut flat = DVector::zeros(n * dim);
                flat[l * dim + v] = 1.0;
                let x = KVector::from_real(algebra, &flat)?;
                let mut acc = KVector::zeros(algebra, n);
                for y in &self.basis {
                    acc = acc + y.scale_right(&inner(y, &x)?)?;
                }
                if acc.dist(&self.apply(&x)?) > tol * 10.0 {
                    return Err(Error::InvalidParameter(
                        "basis reconstruction failed".into(),
                    ));
                }
            }
        }
        if self.is_real_anchored(1e-9) {
            self.validate_grading(tol)?;
        }
        Ok(())
    }

    /// Generator grading laws on the real part of the module: composition of
    /// the graded components matches the generator table, and the components
    /// are selfadjoint or skew following the conjugation sign.
    pub fn validate_grading(&self, tol: f64) -> Result<()> {
        let algebra = self.algebra();
        let n = self.module_dim();
        let dim = algebra.dim();
        let table = algebra.table();
        for s in 0..dim {
            let gs = Hypercomplex::generator(algebra, s);
            for q in 0..dim {
                let gq = Hypercomplex::generator(algebra, q);
                let (idx, sign) = table.product(s, q);
                let gsq = Hypercomplex::generator(algebra, idx).scale(sign);
                for l in 0..n {
                    let x = KVector::basis(algebra, n, l);
                    // E_s(E_q(x)) = E((s q) x) for x in the real part
                    let lhs = self.apply(&self.apply(&x.scale_left(&gq)?)?.scale_left(&gs)?)?;
                    let rhs = self.apply(&x.scale_left(&gsq)?)?;
                    if lhs.dist(&rhs) > tol * 10.0 {
                        return Err(Error::InvalidParameter(
                            "grading composition law failed".into(),
                        ));
                    }
                }
            }
            // adjoint sign law: <E_s x, y> = (-1)^kappa(s) <x, E_s y> on the
            // real part
            let sign = if algebra.kappa(s) % 2 == 0 { 1.0 } else { -1.0 };
            for l in 0..n {
                for m in 0..n {
                    let x = KVector::basis(algebra, n, l);
                    let y = KVector::basis(algebra, n, m);
                    let lhs = real_inner(&self.apply(&x.scale_left(&gs)?)?, &y)?;
                    let rhs = real_inner(&x, &self.apply(&y.scale_left(&gs)?)?)?;
                    if (lhs - sign * rhs).abs() > tol * 10.0 {
                        return Err(Error::InvalidParameter(
                            "grading adjoint sign law failed".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Orthogonal projection onto `span_K` of the given vectors.
pub fn projection_onto(basis: &[KVector]) -> Result<GradedProjection> {
    let first = basis.first().ok_or(Error::EmptyInput("projection_onto"))?;
    let algebra = first.algebra();
    let n = first.len();
    let ortho = kmodule::gram_schmidt_k(basis)?;
    let sat = saturated_real_basis(&ortho)?;
    let rep = &sat * sat.transpose();
    Ok(GradedProjection {
        op: QuasilinearOp::from_rep(algebra, n, rep)?,
        basis: ortho,
    })
}

/// Range/kernel analysis of a right-linear operator by a rank-revealing
/// decomposition of the real representation.
#[derive(Debug, Clone)]
pub struct RankRevealing {
    pub projection: GradedProjection,
    /// Set when singular values straddle the rank threshold within a factor
    /// of ten on either side.
    pub ambiguous: bool,
}

/// Range and kernel bases of the real representation by eigensystems of the
/// two Gram squares; the Jacobi solver keeps the bases orthonormal to
/// machine precision even with heavily repeated singular values.
fn rank_split(t: &QuasilinearOp) -> Result<(DMatrix<f64>, DMatrix<f64>, bool)> {
    let rep = t.rep();
    let (range_vals, range_vecs) = crate::linalg::symmetric_eigen(&(rep * rep.transpose()));
    let (null_vals, null_vecs) = crate::linalg::symmetric_eigen(&(rep.transpose() * rep));
    let lmax = range_vals.iter().fold(0.0f64, |a, b| a.max(b.max(0.0)));
    let smax = lmax.sqrt();
    // eigenvalues of the Gram square carry rounding noise of order
    // eps * lmax, so the effective singular-value floor sits at sqrt(eps);
    // the rank cut stays above it
    let thr = (RANK_TOL * smax).max(3e-8 * smax).max(1e-300);
    let keep = |l: f64| l.max(0.0).sqrt() > thr;
    let ambiguous = range_vals
        .iter()
        .any(|l| {
            let s = l.max(0.0).sqrt();
            s > thr * 0.1 && s < thr * 10.0 && smax > 0.0
        });
    let mut range_cols = Vec::new();
    for (i, l) in range_vals.iter().enumerate() {
        if keep(*l) {
            range_cols.push(DVector::from(range_vecs.column(i).clone_owned()));
        }
    }
    let mut null_cols = Vec::new();
    for (i, l) in null_vals.iter().enumerate() {
        if !keep(*l) {
            null_cols.push(DVector::from(null_vecs.column(i).clone_owned()));
        }
    }
    let big = t.real_dim();
    let pack = |cols: &[DVector<f64>]| {
        let mut m = DMatrix::zeros(big, cols.len());
        for (c, col) in cols.iter().enumerate() {
            m.set_column(c, col);
        }
        m
    };
    Ok((pack(&range_cols), pack(&null_cols), ambiguous))
}

/// Graded projection onto the closure of the range of a right-linear
/// operator.
pub fn range_projection(t: &QuasilinearOp) -> Result<RankRevealing> {
    if !t.is_right_linear() {
        return Err(Error::NotRightLinear);
    }
    let (range, _, ambiguous) = rank_split(t)?;
    let projection = projection_from_real_span(t.algebra(), t.module_dim(), &range)?;
    Ok(RankRevealing {
        projection,
        ambiguous,
    })
}

/// Graded projection onto the kernel of a right-linear operator.
pub fn kernel_projection(t: &QuasilinearOp) -> Result<RankRevealing> {
    if !t.is_right_linear() {
        return Err(Error::NotRightLinear);
    }
    let (_, null, ambiguous) = rank_split(t)?;
    let projection = projection_from_real_span(t.algebra(), t.module_dim(), &null)?;
    Ok(RankRevealing {
        projection,
        ambiguous,
    })
}

/// Builds a graded projection from a real orthonormal span that is closed
/// under the right generator action.
pub fn projection_from_real_span(
    algebra: Algebra,
    n: usize,
    span: &DMatrix<f64>,
) -> Result<GradedProjection> {
    if span.ncols() == 0 {
        return Ok(GradedProjection::zero(algebra, n));
    }
    let basis = k_basis_from_real_span(algebra, n, span)?;
    projection_onto(&basis)
}

/// Union of two graded projections: the range projection of their sum.
pub fn join(e: &GradedProjection, f: &GradedProjection) -> Result<GradedProjection> {
    let sum = e.op().add(f.op())?;
    if e.rank() == 0 && f.rank() == 0 {
        return Ok(GradedProjection::zero(e.algebra(), e.module_dim()));
    }
    Ok(range_projection(&sum)?.projection)
}

/// Intersection via the complement duality.
pub fn meet(e: &GradedProjection, f: &GradedProjection) -> Result<GradedProjection> {
    let ec = e.complement()?;
    let fc = f.complement()?;
    join(&ec, &fc)?.complement()
}

/// The four equivalent ordering conditions between two graded projections.
#[derive(Debug, Clone, Copy)]
pub struct OrderingReport {
    /// basis vectors of the first range are fixed by the second projection
    pub subspace_included: bool,
    /// `F E = E = E F` as operators
    pub products_fix: bool,
    /// `|E x| <= |F x|` on a spanning family
    pub norm_dominated: bool,
    /// `F - E` is positive semidefinite as a real form
    pub form_order: bool,
}

impl OrderingReport {
    pub fn all(&self) -> bool {
        self.subspace_included && self.products_fix && self.norm_dominated && self.form_order
    }
    pub fn any(&self) -> bool {
        self.subspace_included || self.products_fix || self.norm_dominated || self.form_order
    }
}

pub fn ordering_check(e: &GradedProjection, f: &GradedProjection) -> Result<OrderingReport> {
    let tol = PROJ_TOL;
    let subspace_included = e
        .basis()
        .iter()
        .map(|y| Ok(f.apply(y)?.dist(y)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .all(|d| d <= tol * 10.0);
    let fe = f.op().compose(e.op())?;
    let ef = e.op().compose(f.op())?;
    let products_fix = (fe.rep() - e.op().rep()).norm() <= tol
        && (ef.rep() - e.op().rep()).norm() <= tol;
    let algebra = e.algebra();
    let n = e.module_dim();
    let dim = algebra.dim();
    let mut norm_dominated = true;
    for l in 0..n {
        for v in 0..dim {
            let mut flat = DVector::zeros(n * dim);
            flat[l * dim + v] = 1.0;
            // mix two real basis directions for a denser spanning family
            let x = KVector::from_real(algebra, &flat)?;
            if e.apply(&x)?.norm() > f.apply(&x)?.norm() + tol * 10.0 {
                norm_dominated = false;
            }
        }
    }
    let diff = f.op().rep() - e.op().rep();
    let min_eig = crate::linalg::min_eigenvalue(&diff);
    let form_order = min_eig >= -tol * 10.0;
    Ok(OrderingReport {
        subspace_included,
        products_fix,
        norm_dominated,
        form_order,
    })
}

/// Sum of a pairwise-orthogonal family; equals the lattice join.
pub fn orthogonal_family_sum(
    algebra: Algebra,
    n: usize,
    family: &[GradedProjection],
) -> Result<GradedProjection> {
    for (i, e) in family.iter().enumerate() {
        for f in family.iter().skip(i + 1) {
            if e.op().compose(f.op())?.operator_norm() > PROJ_TOL {
                return Err(Error::NonOrthogonalFamily);
            }
        }
    }
    let mut op = QuasilinearOp::zero(algebra, n);
    let mut basis = Vec::new();
    for e in family {
        op = op.add(e.op())?;
        basis.extend_from_slice(e.basis());
    }
    Ok(GradedProjection { op, basis })
}

/// Result of following `A^{1/n}` along doubling exponents.
#[derive(Debug, Clone)]
pub struct PowerLimit {
    pub projection: GradedProjection,
    /// final iterate `A^{ 1/n_max }` as an operator
    pub final_iterate: QuasilinearOp,
    /// worst violation of the monotone-increase property along the sequence
    pub monotonicity_defect: f64,
    /// distance from the final iterate to the range projection
    pub distance_to_projection: f64,
    /// smallest nonzero eigenvalue of `A`
    pub lambda_min: f64,
    /// set when `lambda_min` is too small for the requested exponent budget
    pub convergence_warning: bool,
}

/// Follows `A^{1/n}` for `n = 2, 4, ..., n_max` toward the projection onto
/// the closure of the range of `A`. Requires `0 <= A <= I`.
pub fn power_limit_projection(a: &QuasilinearOp, n_max: u32) -> Result<PowerLimit> {
    let decomp = crate::spectral::spectral_decomposition(a)?;
    let eigs: Vec<f64> = decomp.pairs().iter().map(|(l, _)| *l).collect();
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min_eig < -PROJ_TOL || max_eig > 1.0 + PROJ_TOL {
        return Err(Error::InvalidParameter(
            "power limit needs 0 <= A <= I".into(),
        ));
    }
    let lambda_min = eigs
        .iter()
        .cloned()
        .filter(|l| *l > RANK_TOL)
        .fold(f64::INFINITY, f64::min);
    let convergence_warning = lambda_min < 1e-3;
    let root = |n: f64| {
        crate::spectral::spectral_integral_real(&decomp, |t| {
            if t <= 0.0 {
                0.0
            } else {
                t.powf(1.0 / n)
            }
        })
    };
    let mut monotonicity_defect: f64 = 0.0;
    let mut prev = root(1.0)?;
    let mut n = 2u64;
    let mut last = prev.clone();
    while n <= n_max as u64 {
        let cur = root(n as f64)?;
        let diff = cur.rep() - prev.rep();
        let min = crate::linalg::min_eigenvalue(&diff);
        monotonicity_defect = monotonicity_defect.max(-min);
        prev = cur.clone();
        last = cur;
        n *= 2;
    }
    let projection = range_projection(a)?.projection;
    let distance_to_projection = last.sub(projection.op())?.operator_norm();
    Ok(PowerLimit {
        projection,
        final_iterate: last,
        monotonicity_defect,
        distance_to_projection,
        lambda_min,
        convergence_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: Algebra = Algebra::Quaternion;

    fn real_generated_basis<R: rand::Rng>(
        a: Algebra,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Vec<KVector> {
        // real frames times random scalars: subspaces with an exact grading
        // over both algebras
        let mut reals: Vec<DVector<f64>> = Vec::new();
        for _ in 0..k {
            let v = DVector::from_fn(n, |_, _| sample::coefficient(rng));
            reals.push(v);
        }
        reals
            .iter()
            .map(|v| {
                let coords: Vec<Hypercomplex> = (0..n)
                    .map(|l| Hypercomplex::from_real(a, v[l]))
                    .collect();
                KVector::new(coords)
                    .unwrap()
                    .scale_right(&sample::nonzero_hypercomplex(a, rng))
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn projection_basics() {
        let full: Vec<KVector> = (0..2).map(|l| KVector::basis(H, 2, l)).collect();
        let p = projection_onto(&full).unwrap();
        assert!((p.op().rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-12);

        // Y = span{e1}: E(e1 a + e2 b) = e1 a
        let p = projection_onto(&[KVector::basis(H, 2, 0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let a = sample::hypercomplex(H, &mut rng);
        let b = sample::hypercomplex(H, &mut rng);
        let x = KVector::basis(H, 2, 0).scale_right(&a).unwrap()
            + KVector::basis(H, 2, 1).scale_right(&b).unwrap();
        let want = KVector::basis(H, 2, 0).scale_right(&a).unwrap();
        assert!(p.apply(&x).unwrap().dist(&want) < 1e-12);

        // complement sums to the identity
        let q = p.complement().unwrap();
        let sum = p.op().add(q.op()).unwrap();
        assert!((sum.rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-11);
    }

    #[test]
    fn projection_invariants_on_random_subspaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for a in Algebra::both() {
            for _ in 0..5 {
                let basis = real_generated_basis(a, 3, 2, &mut rng);
                let p = projection_onto(&basis).unwrap();
                p.validate(PROJ_TOL).unwrap();
            }
        }
        // quaternionic subspaces that are not real-generated still satisfy
        // the full graded invariant set over H
        for _ in 0..5 {
            let basis = vec![sample::kvector(H, 3, &mut rng), sample::kvector(H, 3, &mut rng)];
            let p = projection_onto(&basis).unwrap();
            p.validate(PROJ_TOL).unwrap();
        }
    }

    #[test]
    fn range_and_kernel_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        // invertible operator: range = I, kernel = 0
        let t = sample::right_linear(H, 2, &mut rng);
        let eye = QuasilinearOp::identity(H, 2);
        let shifted = t.scale_real(0.1).add(&eye).unwrap(); // close to I, invertible
        let r = range_projection(&shifted).unwrap();
        assert!((r.projection.op().rep() - eye.rep()).norm() < 1e-9);
        let k = kernel_projection(&shifted).unwrap();
        assert_eq!(k.projection.rank(), 0);

        // a projection is its own range projection
        let basis = vec![KVector::basis(H, 2, 0)];
        let p = projection_onto(&basis).unwrap();
        let r = range_projection(p.op()).unwrap();
        assert!((r.projection.op().rep() - p.op().rep()).norm() < 1e-10);

        // diag(1, 0): range on e1, kernel on e2
        let one = Hypercomplex::one(H);
        let zero = Hypercomplex::zero(H);
        let t = QuasilinearOp::from_k_matrix(H, &[vec![one, zero], vec![zero, zero]]).unwrap();
        let r = range_projection(&t).unwrap().projection;
        let k = kernel_projection(&t).unwrap().projection;
        assert_eq!(r.rank(), 1);
        assert_eq!(k.rank(), 1);
        assert!(r.apply(&KVector::basis(H, 2, 0)).unwrap().dist(&KVector::basis(H, 2, 0)) < 1e-12);
        assert!(k.apply(&KVector::basis(H, 2, 1)).unwrap().dist(&KVector::basis(H, 2, 1)) < 1e-12);

        // kernel-range identities for right-linear T
        for a in Algebra::both() {
            let t = sample::right_linear(a, 2, &mut rng);
            let n_t = kernel_projection(&t).unwrap().projection;
            let r_tstar = range_projection(&t.adjoint()).unwrap().projection;
            let eye = QuasilinearOp::identity(a, 2);
            assert!(
                (n_t.op().rep() - (eye.rep() - r_tstar.op().rep())).norm() < 1e-8,
                "kernel = I - range of adjoint"
            );
            let tst = t.adjoint().compose(&t).unwrap();
            let r1 = range_projection(&tst).unwrap().projection;
            assert!((r1.op().rep() - r_tstar.op().rep()).norm() < 1e-8);
            let n1 = kernel_projection(&tst).unwrap().projection;
            assert!((n1.op().rep() - n_t.op().rep()).norm() < 1e-8);
        }
    }

    #[test]
    fn lattice_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let p = projection_onto(&real_generated_basis(H, 3, 1, &mut rng)).unwrap();
        // join(E, E) = E; meet(E, complement E) = 0
        let jj = join(&p, &p).unwrap();
        assert!((jj.op().rep() - p.op().rep()).norm() < 1e-9);
        let m = meet(&p, &p.complement().unwrap()).unwrap();
        assert_eq!(m.rank(), 0);

        // span{e1} and span{(e1+e2)/sqrt2}: join is everything, meet is zero
        let e1 = KVector::basis(H, 2, 0);
        let diag = (KVector::basis(H, 2, 0) + KVector::basis(H, 2, 1)).scale_real(0.5f64.sqrt());
        let a = projection_onto(&[e1]).unwrap();
        let b = projection_onto(&[diag]).unwrap();
        let j = join(&a, &b).unwrap();
        assert_eq!(j.rank(), 2);
        let m = meet(&a, &b).unwrap();
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn ordering_four_way_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for a in Algebra::both() {
            let e = projection_onto(&real_generated_basis(a, 3, 1, &mut rng)).unwrap();
            let id = GradedProjection::identity(a, 3);
            let rep = ordering_check(&e, &id).unwrap();
            assert!(rep.all());

            // nested spans agree on all four conditions
            let base = real_generated_basis(a, 3, 2, &mut rng);
            let small = projection_onto(&base[..1]).unwrap();
            let big = projection_onto(&base).unwrap();
            let rep = ordering_check(&small, &big).unwrap();
            assert!(rep.all());

            // incomparable spans fail all four
            let other = projection_onto(&real_generated_basis(a, 3, 1, &mut rng)).unwrap();
            let rep = ordering_check(&big, &other).unwrap();
            assert!(!rep.any(), "{rep:?}");
        }
    }

    #[test]
    fn orthogonal_sums() {
        let coords: Vec<GradedProjection> = (0..3)
            .map(|l| projection_onto(&[KVector::basis(H, 3, l)]).unwrap())
            .collect();
        let total = orthogonal_family_sum(H, 3, &coords).unwrap();
        assert!((total.op().rep() - QuasilinearOp::identity(H, 3).rep()).norm() < 1e-12);
        total.validate(PROJ_TOL).unwrap();

        let two = orthogonal_family_sum(H, 3, &coords[..2]).unwrap();
        assert_eq!(two.rank(), 2);
        let j = join(&coords[0], &coords[1]).unwrap();
        assert!((two.op().rep() - j.op().rep()).norm() < 1e-9);

        let empty = orthogonal_family_sum(H, 3, &[]).unwrap();
        assert_eq!(empty.rank(), 0);

        // non-orthogonal input is rejected
        let diag = (KVector::basis(H, 3, 0) + KVector::basis(H, 3, 1)).scale_real(0.5f64.sqrt());
        let overlapping = projection_onto(&[diag]).unwrap();
        assert!(matches!(
            orthogonal_family_sum(H, 3, &[coords[0].clone(), overlapping]),
            Err(Error::NonOrthogonalFamily)
        ));
    }
}
