//! Seeded random generators for scalars, vectors and operators.
//!
//! Everything flows from a caller-supplied `Rng` so that verification runs
//! are reproducible from a single 64-bit seed.

use crate::algebra::{Algebra, Hypercomplex};
use crate::kmodule::KVector;
use crate::operator::QuasilinearOp;
use nalgebra::DMatrix;
use rand::Rng;

pub fn coefficient<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..1.0)
}

pub fn hypercomplex<R: Rng>(algebra: Algebra, rng: &mut R) -> Hypercomplex {
    let coeffs: Vec<f64> = (0..algebra.dim()).map(|_| coefficient(rng)).collect();
    Hypercomplex::new(algebra, &coeffs).unwrap()
}

pub fn nonzero_hypercomplex<R: Rng>(algebra: Algebra, rng: &mut R) -> Hypercomplex {
    loop {
        let z = hypercomplex(algebra, rng);
        if z.norm() > 1e-3 {
            return z;
        }
    }
}

pub fn unit_hypercomplex<R: Rng>(algebra: Algebra, rng: &mut R) -> Hypercomplex {
    let z = nonzero_hypercomplex(algebra, rng);
    z.scale(1.0 / z.norm())
}

/// Unit imaginary direction.
pub fn unit_imaginary<R: Rng>(algebra: Algebra, rng: &mut R) -> Hypercomplex {
    loop {
        let mut z = hypercomplex(algebra, rng);
        *z.coeff_mut(0) = 0.0;
        if z.norm() > 1e-3 {
            return z.scale(1.0 / z.norm());
        }
    }
}

pub fn kvector<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> KVector {
    KVector::new((0..n).map(|_| hypercomplex(algebra, rng)).collect()).unwrap()
}

pub fn unit_kvector<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> KVector {
    loop {
        let x = kvector(algebra, n, rng);
        if x.norm() > 1e-3 {
            return x.scale_real(1.0 / x.norm());
        }
    }
}

/// Arbitrary quasilinear operator: a dense random real representation.
pub fn quasilinear<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> QuasilinearOp {
    let big = n * algebra.dim();
    let rep = DMatrix::from_fn(big, big, |_, _| coefficient(rng));
    QuasilinearOp::from_rep(algebra, n, rep).unwrap()
}

/// Random right-linear operator: left multiplication by a scalar matrix for
/// `H`, a real coordinate matrix for `O` (the only matrices whose left action
/// commutes with all right scalar multiplications there).
pub fn right_linear<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> QuasilinearOp {
    match algebra {
        Algebra::Quaternion => {
            let entries: Vec<Vec<Hypercomplex>> = (0..n)
                .map(|_| (0..n).map(|_| hypercomplex(algebra, rng)).collect())
                .collect();
            QuasilinearOp::from_k_matrix(algebra, &entries).unwrap()
        }
        Algebra::Octonion => {
            let t = DMatrix::from_fn(n, n, |_, _| coefficient(rng));
            QuasilinearOp::from_real_matrix(algebra, &t)
        }
    }
}

/// Random selfadjoint right-linear operator.
pub fn selfadjoint_right_linear<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> QuasilinearOp {
    let t = right_linear(algebra, n, rng);
    let adj = t.adjoint();
    t.add(&adj).unwrap().scale_real(0.5)
}

/// Selfadjoint right-linear operator with spectrum inside `(lo, hi)`.
pub fn selfadjoint_with_spectrum<R: Rng>(
    algebra: Algebra,
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> QuasilinearOp {
    let t = selfadjoint_right_linear(algebra, n, rng);
    let norm = t.operator_norm().max(1e-12);
    let mid = 0.5 * (lo + hi);
    let half = 0.45 * (hi - lo);
    let scaled = t.scale_real(half / norm);
    let eye = QuasilinearOp::identity(algebra, n).scale_real(mid);
    scaled.add(&eye).unwrap()
}

/// Random positive operator `T* T` scaled into `[0, 1]`-ish range.
pub fn positive_right_linear<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> QuasilinearOp {
    let t = right_linear(algebra, n, rng);
    let prod = t.adjoint().compose(&t).unwrap();
    let norm = prod.operator_norm().max(1e-12);
    prod.scale_real(1.0 / norm)
}

/// Basis vectors of a random `K`-subspace. Over `H` any family spans a
/// module subspace; over `O` only subspaces anchored at real frames are
/// closed under the two-sided scalar action, so the vectors are random real
/// frames times random scalars there.
pub fn subspace_basis<R: Rng>(algebra: Algebra, n: usize, k: usize, rng: &mut R) -> Vec<KVector> {
    match algebra {
        Algebra::Quaternion => (0..k).map(|_| kvector(algebra, n, rng)).collect(),
        Algebra::Octonion => real_anchored_basis(algebra, n, k, rng),
    }
}

/// Random real frames times random scalars: subspaces carrying an exact
/// grading over both algebras.
pub fn real_anchored_basis<R: Rng>(
    algebra: Algebra,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Vec<KVector> {
    (0..k)
        .map(|_| {
            let coords: Vec<Hypercomplex> = (0..n)
                .map(|_| Hypercomplex::from_real(algebra, coefficient(rng)))
                .collect();
            KVector::new(coords)
                .unwrap()
                .scale_right(&nonzero_hypercomplex(algebra, rng))
                .unwrap()
        })
        .collect()
}

/// A `K`-orthonormal family of the pure form `(orthonormal real frame) x
/// (unit scalar)`: the cleanest frames over the octonions, where coefficient
/// expansions reduce to scalar identities.
pub fn orthonormal_anchored_frame<R: Rng>(
    algebra: Algebra,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Vec<KVector> {
    let raw = DMatrix::from_fn(n, k, |_, _| coefficient(rng));
    let qr = raw.qr();
    let q = qr.q();
    (0..k)
        .map(|c| {
            let coords: Vec<_> = (0..n)
                .map(|l| Hypercomplex::from_real(algebra, q[(l, c)]))
                .collect();
            KVector::new(coords)
                .unwrap()
                .scale_right(&unit_hypercomplex(algebra, rng))
                .unwrap()
        })
        .collect()
}

/// An orthonormal family of purely real vectors.
pub fn orthonormal_real_frame<R: Rng>(
    algebra: Algebra,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Vec<KVector> {
    let raw = DMatrix::from_fn(n, k, |_, _| coefficient(rng));
    let q = raw.qr().q();
    (0..k)
        .map(|c| {
            KVector::new(
                (0..n)
                    .map(|l| Hypercomplex::from_real(algebra, q[(l, c)]))
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

/// Selfadjoint operator backed by a real symmetric coordinate matrix: it
/// commutes with every scalar action, so all slice-mixing calculi apply.
pub fn real_backed_selfadjoint<R: Rng>(algebra: Algebra, n: usize, rng: &mut R) -> QuasilinearOp {
    let t = DMatrix::from_fn(n, n, |_, _| coefficient(rng));
    QuasilinearOp::from_real_matrix(algebra, &((&t + t.transpose()) * 0.5))
}

/// Quaternionic hermitian matrix with entries confined to the slice plane of
/// `m`: such operators commute with the scalar action of `m`.
pub fn slice_hermitian<R: Rng>(n: usize, m: &Hypercomplex, rng: &mut R) -> QuasilinearOp {
    let h = Algebra::Quaternion;
    let mut entries = vec![vec![Hypercomplex::zero(h); n]; n];
    for l in 0..n {
        for k in l..n {
            if l == k {
                entries[l][l] = Hypercomplex::from_real(h, coefficient(rng));
            } else {
                let mut z = m.scale(coefficient(rng));
                *z.coeff_mut(0) += coefficient(rng);
                entries[l][k] = z;
                entries[k][l] = z.conj();
            }
        }
    }
    QuasilinearOp::from_k_matrix(h, &entries).unwrap()
}

/// A selfadjoint operator commuting with the scalar action of `m`: real
/// backed over `O`, slice-hermitian over `H`.
pub fn slice_compatible_selfadjoint<R: Rng>(
    algebra: Algebra,
    n: usize,
    m: &Hypercomplex,
    rng: &mut R,
) -> QuasilinearOp {
    match algebra {
        Algebra::Quaternion => slice_hermitian(n, m, rng),
        Algebra::Octonion => real_backed_selfadjoint(algebra, n, rng),
    }
}
