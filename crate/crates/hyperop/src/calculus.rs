//! Functional calculi: polynomial, continuous (spectral), and
//! holomorphic-contour, together with positive roots, polar decomposition,
//! the Cayley transform, one-parameter unitary groups, approximate units,
//! unitary splits and positive combinations.
//!
//! Scalar-valued functions of a selfadjoint operator act by left
//! multiplication against the spectral projections. Real-valued functions are
//! compatible with every selfadjoint right-linear operator; calculi that mix
//! an imaginary direction `M` into the values (Cayley transform, exponential
//! group, unitary split) additionally need the operator to commute with the
//! scalar action of `M` - concretely, an operator backed by a real coordinate
//! matrix, or a quaternionic matrix with entries in the slice plane of `M`.

use crate::algebra::{check_unit_imaginary, Algebra, Hypercomplex};
use crate::error::{Error, Result};
use crate::operator::QuasilinearOp;
use crate::spectral::{
    resolvent, spectral_decomposition, spectral_integral, spectral_integral_real,
    spectrum_selfadjoint, SpectralDecomposition, SpectrumEstimate,
};
use nalgebra::{DMatrix, DVector};

/// One polynomial term `b_1 z^{k_1} b_2 z^{k_2} ...`, associated left to
/// right.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTerm {
    pub factors: Vec<(Hypercomplex, u32)>,
}

/// A polynomial with hypercomplex coefficients interleaved between powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    pub terms: Vec<PolyTerm>,
}

impl PolySpec {
    /// `sum_k c_k z^k` with coefficients acting from the left.
    pub fn from_coeffs(coeffs: &[Hypercomplex]) -> Self {
        PolySpec {
            terms: coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| PolyTerm {
                    factors: vec![(*c, k as u32)],
                })
                .collect(),
        }
    }

    pub fn from_real_coeffs(algebra: Algebra, coeffs: &[f64]) -> Self {
        let cs: Vec<Hypercomplex> = coeffs
            .iter()
            .map(|c| Hypercomplex::from_real(algebra, *c))
            .collect();
        Self::from_coeffs(&cs)
    }

    /// Left-associated evaluation on a scalar.
    pub fn eval_scalar(&self, z: &Hypercomplex) -> Result<Hypercomplex> {
        let algebra = z.algebra();
        let mut acc = Hypercomplex::zero(algebra);
        for term in &self.terms {
            let mut prod = Hypercomplex::one(algebra);
            for (b, k) in &term.factors {
                prod = prod.try_mul(b)?;
                prod = prod.try_mul(&z.power(*k))?;
            }
            acc = acc + prod;
        }
        Ok(acc)
    }

    /// Real-coefficient composition `(g o f)` for single-variable real
    /// polynomials given as coefficient lists.
    pub fn real_coeffs(&self) -> Option<Vec<f64>> {
        let mut out: Vec<f64> = Vec::new();
        for term in &self.terms {
            if term.factors.len() != 1 {
                return None;
            }
            let (c, k) = &term.factors[0];
            if c.im_norm() != 0.0 {
                return None;
            }
            if out.len() <= *k as usize {
                out.resize(*k as usize + 1, 0.0);
            }
            out[*k as usize] += c.re();
        }
        Some(out)
    }
}

/// Polynomial calculus: every term becomes an interleaved composition of
/// scalar left multiplications and operator powers.
pub fn poly_eval(t: &QuasilinearOp, p: &PolySpec) -> Result<QuasilinearOp> {
    let algebra = t.algebra();
    let n = t.module_dim();
    let mut acc = QuasilinearOp::zero(algebra, n);
    for term in &p.terms {
        let mut prod = QuasilinearOp::identity(algebra, n);
        for (b, k) in &term.factors {
            prod = prod.compose(&QuasilinearOp::scalar_left(algebra, n, b))?;
            for _ in 0..*k {
                prod = prod.compose(t)?;
            }
        }
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

/// Continuous calculus of a selfadjoint right-linear operator against a
/// scalar-valued function of the spectrum.
pub fn continuous_calculus<F>(t: &QuasilinearOp, f: F) -> Result<QuasilinearOp>
where
    F: Fn(f64) -> Hypercomplex,
{
    let d = spectral_decomposition(t)?;
    spectral_integral(&d, f)
}

/// Continuous calculus for a real-valued function.
pub fn continuous_calculus_real<F>(t: &QuasilinearOp, f: F) -> Result<QuasilinearOp>
where
    F: Fn(f64) -> f64,
{
    let d = spectral_decomposition(t)?;
    spectral_integral_real(&d, f)
}

/// A circular contour on the slice plane `R + M R`.
#[derive(Debug, Clone)]
pub struct Contour {
    pub center: Hypercomplex,
    pub radius: f64,
    pub axis: Hypercomplex,
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: Hypercomplex, radius: f64, axis: Hypercomplex, nodes: usize) -> Result<Self> {
        check_unit_imaginary(&axis)?;
        if radius <= 0.0 {
            return Err(Error::InvalidParameter("contour radius must be positive".into()));
        }
        if nodes < 16 {
            return Err(Error::InvalidParameter("contour needs at least 16 nodes".into()));
        }
        // the center must lie on the slice plane spanned by 1 and the axis
        let re = center.re();
        let im_len = center.im_norm();
        let mut recomposed = axis.scale(0.0);
        if im_len > 0.0 {
            let along = crate::kmodule::inner(
                &crate::kmodule::KVector::new(vec![axis]).unwrap(),
                &crate::kmodule::KVector::new(vec![center]).unwrap(),
            )?;
            recomposed = axis.scale(along.re());
        }
        let mut check = recomposed;
        *check.coeff_mut(0) += re;
        if check.dist(&center) > 1e-10 * center.norm().max(1.0) {
            return Err(Error::InvalidParameter(
                "contour center must lie in the slice plane".into(),
            ));
        }
        Ok(Contour {
            center,
            radius,
            axis,
            nodes,
        })
    }

    /// Slice-plane coordinates of a real spectrum point relative to the
    /// center.
    fn encloses_real(&self, lambda: f64) -> bool {
        let mut diff = self.center;
        *diff.coeff_mut(0) -= lambda;
        diff.norm() < self.radius * (1.0 - 1e-9)
    }

    pub fn node(&self, q: usize) -> (Hypercomplex, Hypercomplex) {
        let theta = 2.0 * std::f64::consts::PI * q as f64 / self.nodes as f64;
        let mut zeta = self.axis.scale(self.radius * theta.sin());
        *zeta.coeff_mut(0) += self.radius * theta.cos();
        let zeta = zeta + self.center;
        // d zeta / ds = 2 pi r M exp(2 pi s M), divided by the node count
        let mut dz = self.axis.scale(theta.cos());
        *dz.coeff_mut(0) -= theta.sin();
        let dz = dz.scale(2.0 * std::f64::consts::PI * self.radius / self.nodes as f64);
        (zeta, dz)
    }
}

/// Result of a contour integration, with the enclosure-validation flag.
#[derive(Debug, Clone)]
pub struct HolomorphicResult {
    pub op: QuasilinearOp,
    /// set when the spectrum was verified, by an exact method, to be
    /// enclosed by the contour, and the operator commutes with the scalar
    /// action of the slice axis (so the resolvent is slice-holomorphic)
    pub validated_slice: bool,
}

/// Holomorphic contour calculus by trapezoidal quadrature on the circle:
/// `f(T) = (2 pi)^{-1} (sum_q f(z_q) R(z_q; T) dz_q) M^{-1}`, with the
/// trailing `M^{-1}` acting as the algebra product, i.e. composition with
/// its scalar operator.
///
/// The result is flagged as slice-validated when the spectrum is enclosed by
/// an exact method (selfadjoint, or a caller-supplied spectrum) and the
/// operator commutes with the scalar action of the slice axis; elsewhere the
/// integral is still computed but the flag stays off.
pub fn holomorphic_calculus<F>(
    t: &QuasilinearOp,
    f: F,
    contour: &Contour,
    known_spectrum: Option<&SpectrumEstimate>,
) -> Result<HolomorphicResult>
where
    F: Fn(&Hypercomplex) -> Hypercomplex,
{
    let algebra = t.algebra();
    let n = t.module_dim();
    let mut enclosed = false;
    if let Some(sp) = known_spectrum {
        for p in &sp.points {
            let diff = contour.center - *p;
            if diff.norm() >= contour.radius {
                return Err(Error::ContourEnclosure);
            }
        }
        enclosed = true;
    } else if t.is_selfadjoint() {
        let sp = spectrum_selfadjoint(t)?;
        for p in &sp.points {
            if !contour.encloses_real(p.re()) {
                return Err(Error::ContourEnclosure);
            }
        }
        enclosed = true;
    }
    let axis_op = QuasilinearOp::scalar_left(algebra, n, &contour.axis);
    let commutator = axis_op
        .compose(t)?
        .sub(&t.compose(&axis_op)?)?
        .operator_norm();
    let validated_slice = enclosed && commutator <= 1e-10 * t.operator_norm().max(1.0);
    let mut acc = QuasilinearOp::zero(algebra, n);
    for q in 0..contour.nodes {
        let (zeta, dz) = contour.node(q);
        let r = resolvent(t, &zeta).map_err(|_| Error::ContourPlacement { node: q })?;
        let term = QuasilinearOp::scalar_left(algebra, n, &f(&zeta))
            .compose(&r)?
            .compose(&QuasilinearOp::scalar_left(algebra, n, &dz))?;
        acc = acc.add(&term)?;
    }
    let m_inv = contour.axis.inverse()?;
    let op = acc
        .compose(&QuasilinearOp::scalar_left(algebra, n, &m_inv))?
        .scale_real(1.0 / (2.0 * std::f64::consts::PI));
    Ok(HolomorphicResult {
        op,
        validated_slice,
    })
}

/// The unique positive square root of a positive selfadjoint right-linear
/// operator. Negative spectral dust below `1e-6 |A|` is clipped to zero;
/// anything below that threshold is rejected.
pub fn sqrt_positive(a: &QuasilinearOp) -> Result<QuasilinearOp> {
    let d = spectral_decomposition(a)?;
    let min = d
        .eigenvalues()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min < -1e-6 * a.operator_norm().max(1e-6) {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    spectral_integral_real(&d, |t| t.max(0.0).sqrt())
}

/// Positive and negative parts `A = A+ - A-` with `A+ A- = 0`.
pub fn pos_neg_split(a: &QuasilinearOp) -> Result<(QuasilinearOp, QuasilinearOp)> {
    let d = spectral_decomposition(a)?;
    let plus = spectral_integral_real(&d, |t| t.max(0.0))?;
    let minus = spectral_integral_real(&d, |t| (-t).max(0.0))?;
    Ok((plus, minus))
}

/// Polar decomposition `T = P A` of a right-linear operator: `A` is the
/// positive square root of `T* T` and `P` a partial isometry vanishing on the
/// orthogonal complement of the range of `A`.
pub fn polar_decompose(t: &QuasilinearOp) -> Result<(QuasilinearOp, QuasilinearOp)> {
    if !t.is_right_linear() {
        return Err(Error::NotRightLinear);
    }
    let tst = t.adjoint().compose(t)?;
    let d = spectral_decomposition(&tst)?;
    let a = spectral_integral_real(&d, |l| l.max(0.0).sqrt())?;
    let lambda_max = d.eigenvalues().into_iter().fold(0.0f64, f64::max);
    let cut = crate::kmodule::RANK_TOL * lambda_max.max(1e-300);
    let a_pinv = spectral_integral_real(&d, |l| {
        if l > cut {
            1.0 / l.max(0.0).sqrt()
        } else {
            0.0
        }
    })?;
    let p = t.compose(&a_pinv)?;
    Ok((p, a))
}

/// The Cayley transform `U_M(T) = (T - MI)(T + MI)^{-1}` of a selfadjoint
/// operator.
pub fn cayley(t: &QuasilinearOp, m: &Hypercomplex) -> Result<QuasilinearOp> {
    check_unit_imaginary(m)?;
    if !t.is_selfadjoint() {
        return Err(Error::NotSelfadjoint);
    }
    let algebra = t.algebra();
    let n = t.module_dim();
    if t.rep().iter().all(|x| *x == 0.0) {
        // (-M I)(M I)^{-1} = -(M M^{-1}) I = -I exactly
        return Ok(QuasilinearOp::identity(algebra, n).scale_real(-1.0));
    }
    let mi = QuasilinearOp::scalar_left(algebra, n, m);
    let plus = t.add(&mi)?;
    let minus = t.sub(&mi)?;
    let inv = plus
        .rep()
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SpectrumPoint { sigma_min: 0.0 })?;
    let u = minus.rep() * inv;
    QuasilinearOp::from_rep(algebra, n, u)
}

/// One-parameter unitary group `U(t) = exp(t M B)` of a selfadjoint
/// right-linear generator, via the continuous calculus of
/// `cos(t l) + M sin(t l)`.
pub fn exp_group(b: &QuasilinearOp, m: &Hypercomplex, t: f64) -> Result<QuasilinearOp> {
    check_unit_imaginary(m)?;
    let algebra = b.algebra();
    continuous_calculus(b, |l| {
        let mut v = m.scale((t * l).sin());
        *v.coeff_mut(0) += (t * l).cos();
        let _ = algebra;
        v
    })
}

/// Difference-quotient estimate of the group generator:
/// `(U(eps) - I) / eps`.
pub fn generator_estimate<F>(u: F, eps: f64) -> Result<QuasilinearOp>
where
    F: Fn(f64) -> Result<QuasilinearOp>,
{
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let at = u(eps)?;
    let eye = QuasilinearOp::identity(at.algebra(), at.module_dim());
    Ok(at.sub(&eye)?.scale_real(1.0 / eps))
}

/// The factor `A_n = S (I/n + H)^{-1/2}` of the approximate-unit
/// construction, with `H` the positive square root of `S* S`.
pub fn approximate_unit(s: &QuasilinearOp, n: u32) -> Result<QuasilinearOp> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let h = approximate_unit_h(s)?;
    let d = spectral_decomposition(&h)?;
    let inv_root = spectral_integral_real(&d, |t| 1.0 / (1.0 / n as f64 + t.max(0.0)).sqrt())?;
    s.compose(&inv_root)
}

/// `H = (S* S)^{1/2}` used by the approximate unit.
pub fn approximate_unit_h(s: &QuasilinearOp) -> Result<QuasilinearOp> {
    let sts = s.adjoint().compose(s)?;
    sqrt_positive(&sts)
}

/// The function controlling the Cauchy property of the approximate-unit
/// factors: `f_{m,n}(t) = t [ (1/m + t)^{-1/2} - (1/n + t)^{-1/2} ]`.
pub fn approximate_unit_gap(t: f64, m: u32, n: u32) -> f64 {
    t * ((1.0 / m as f64 + t).powf(-0.5) - (1.0 / n as f64 + t).powf(-0.5))
}

/// Realizes a selfadjoint contraction as the real part of a unitary:
/// `U = f(A)` with `f(t) = t + M sqrt(1 - t^2)`, so `A = (U + U*) / 2`.
pub fn unitary_split(a: &QuasilinearOp, m: &Hypercomplex) -> Result<QuasilinearOp> {
    check_unit_imaginary(m)?;
    let norm = a.operator_norm();
    if norm > 1.0 + 1e-10 {
        return Err(Error::NormBound { norm, bound: 1.0 });
    }
    continuous_calculus(a, |l| {
        let t = l.clamp(-1.0, 1.0);
        let mut v = m.scale((1.0 - t * t).max(0.0).sqrt());
        *v.coeff_mut(0) += t;
        v
    })
}

/// Splits a selfadjoint representation into positive and negative parts by a
/// raw symmetric eigendecomposition (no right-linearity demanded; both parts
/// are positive semidefinite real forms).
fn raw_sym_split(op: &QuasilinearOp) -> Result<(QuasilinearOp, QuasilinearOp)> {
    let algebra = op.algebra();
    let n = op.module_dim();
    let sym = (op.rep() + op.rep().transpose()) * 0.5;
    let (vals, vecs) = crate::linalg::symmetric_eigen(&sym);
    let big = op.real_dim();
    let mut plus = DMatrix::zeros(big, big);
    let mut minus = DMatrix::zeros(big, big);
    for (i, l) in vals.iter().enumerate() {
        let v = DVector::from(vecs.column(i).clone_owned());
        let outer = &v * v.transpose();
        if *l >= 0.0 {
            plus += outer * *l;
        } else {
            minus += outer * (-*l);
        }
    }
    Ok((
        QuasilinearOp::from_rep(algebra, n, plus)?,
        QuasilinearOp::from_rep(algebra, n, minus)?,
    ))
}

/// A decomposition of a right-linear operator into scalar multiples of
/// positive operators: `A = sum_p c_p B_p(x)` with the coefficients acting
/// from the left, at most `2 (m+1)` terms.
pub fn positive_combination(
    a: &QuasilinearOp,
) -> Result<Vec<(Hypercomplex, QuasilinearOp)>> {
    if !a.is_right_linear() {
        return Err(Error::NotRightLinear);
    }
    let algebra = a.algebra();
    let mut out: Vec<(Hypercomplex, QuasilinearOp)> = Vec::new();
    let mut push_split =
        |coeff: Hypercomplex, sym: &QuasilinearOp, rightlinear: bool| -> Result<()> {
            if sym.operator_norm() <= 1e-14 {
                return Ok(());
            }
            let (plus, minus) = if rightlinear {
                pos_neg_split(sym)?
            } else {
                raw_sym_split(sym)?
            };
            if plus.operator_norm() > 1e-14 {
                out.push((coeff, plus));
            }
            if minus.operator_norm() > 1e-14 {
                out.push((-coeff, minus));
            }
            Ok(())
        };
    match algebra {
        Algebra::Quaternion => {
            // entrywise decomposition of the K-matrix into hermitian pieces
            // M = sum_v i_v H_v
            let mat = a.k_matrix()?;
            let n = a.module_dim();
            let dim = algebra.dim();
            let mut parts = vec![vec![vec![Hypercomplex::zero(algebra); n]; n]; dim];
            for l in 0..n {
                for k in l..n {
                    let q = mat[l][k];
                    let qt = mat[k][l];
                    // hermitian part: H0_{lk} = (q + conj(qt)) / 2
                    let h0 = (q + qt.conj()).scale(0.5);
                    parts[0][l][k] = h0;
                    parts[0][k][l] = h0.conj();
                    // skew part w = q - h0 determines the imaginary pieces
                    let w = q - h0;
                    if l == k {
                        for v in 1..dim {
                            parts[v][l][l] = Hypercomplex::from_real(algebra, w.coeff(v));
                        }
                    } else {
                        // solve i h1 + j h2 + k h3 = w together with the
                        // hermitian constraint on the transposed entry
                        let h1 = Hypercomplex::new(
                            algebra,
                            &[w.coeff(1), -w.coeff(0), 0.0, 0.0],
                        )?;
                        let h2 = Hypercomplex::from_real(algebra, w.coeff(2));
                        let h3 = Hypercomplex::from_real(algebra, w.coeff(3));
                        parts[1][l][k] = h1;
                        parts[1][k][l] = h1.conj();
                        parts[2][l][k] = h2;
                        parts[2][k][l] = h2;
                        parts[3][l][k] = h3;
                        parts[3][k][l] = h3;
                    }
                }
            }
            for (v, entries) in parts.iter().enumerate() {
                let hv = QuasilinearOp::from_k_matrix(algebra, entries)?;
                let coeff = Hypercomplex::generator(algebra, v);
                push_split(coeff, &hv, true)?;
            }
        }
        Algebra::Octonion => {
            // right-linear over O means a real coordinate matrix
            let t = a.restriction_components()?[0].clone();
            let sym = QuasilinearOp::from_real_matrix(algebra, &((&t + t.transpose()) * 0.5));
            push_split(Hypercomplex::one(algebra), &sym, true)?;
            let skew = QuasilinearOp::from_real_matrix(algebra, &((&t - t.transpose()) * 0.5));
            if skew.operator_norm() > 1e-14 {
                // (i_1 W) is selfadjoint; W = (-i_1)(i_1 W)
                let g = skew.left_scalar_op(&Hypercomplex::generator(algebra, 1));
                push_split(-Hypercomplex::generator(algebra, 1), &g, false)?;
            }
        }
    }
    Ok(out)
}

/// Recombines a positive-combination list back into an operator.
pub fn recombine(
    algebra: Algebra,
    n: usize,
    terms: &[(Hypercomplex, QuasilinearOp)],
) -> Result<QuasilinearOp> {
    let mut acc = QuasilinearOp::zero(algebra, n);
    for (c, b) in terms {
        acc = acc.add(&b.left_scalar_op(c))?;
    }
    Ok(acc)
}

/// A selfadjoint operator and its spectral data bundled for reuse.
pub fn decomposition_of(t: &QuasilinearOp) -> Result<SpectralDecomposition> {
    spectral_decomposition(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: Algebra = Algebra::Quaternion;

    use crate::sample::{real_backed_selfadjoint, slice_hermitian};

    #[test]
    fn poly_eval_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for a in Algebra::both() {
            let t = sample::quasilinear(a, 2, &mut rng);
            // p = z
            let p = PolySpec::from_real_coeffs(a, &[0.0, 1.0]);
            assert!((poly_eval(&t, &p).unwrap().rep() - t.rep()).norm() < 1e-13);
            // p = 1 + z
            let p = PolySpec::from_real_coeffs(a, &[1.0, 1.0]);
            let want = t.add(&QuasilinearOp::identity(a, 2)).unwrap();
            assert!((poly_eval(&t, &p).unwrap().rep() - want.rep()).norm() < 1e-13);
        }
        // p = z^2 on diag(i): the square is diag(-1)
        let i = Hypercomplex::generator(H, 1);
        let t = QuasilinearOp::left_diagonal(&[i]).unwrap();
        let p = PolySpec::from_real_coeffs(H, &[0.0, 0.0, 1.0]);
        let want = QuasilinearOp::identity(H, 1).scale_real(-1.0);
        assert!((poly_eval(&t, &p).unwrap().rep() - want.rep()).norm() < 1e-13);
    }

    #[test]
    fn continuous_calculus_matches_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for a in Algebra::both() {
            let t = sample::selfadjoint_right_linear(a, 3, &mut rng);
            // identity
            let id = continuous_calculus_real(&t, |l| l).unwrap();
            assert!(id.sub(&t).unwrap().operator_norm() < 1e-9 * t.operator_norm().max(1.0));
            // a real polynomial agrees with the direct route
            let coeffs = [0.3, -1.2, 0.5, 0.25];
            let via_spec =
                continuous_calculus_real(&t, |l| coeffs[0] + coeffs[1] * l + coeffs[2] * l * l + coeffs[3] * l * l * l)
                    .unwrap();
            let p = PolySpec::from_real_coeffs(a, &coeffs);
            let via_poly = poly_eval(&t, &p).unwrap();
            assert!(
                via_spec.sub(&via_poly).unwrap().operator_norm()
                    < 1e-9 * via_poly.operator_norm().max(1.0)
            );
            // sup-norm law
            let d = spectral_decomposition(&t).unwrap();
            let f = |l: f64| l.abs() + 0.5;
            let op = spectral_integral_real(&d, f).unwrap();
            let want = d.eigenvalues().into_iter().map(f).fold(0.0f64, f64::max);
            assert!((op.operator_norm() - want).abs() < 1e-9 * want.max(1.0));
        }
    }

    #[test]
    fn spectral_mapping_by_abs() {
        // f(t) = |t| maps spectrum {-1, 2} to {1, 2}
        let minus = Hypercomplex::from_real(H, -1.0);
        let two = Hypercomplex::from_real(H, 2.0);
        let t = QuasilinearOp::left_diagonal(&[minus, two]).unwrap();
        let ft = continuous_calculus_real(&t, |l| l.abs()).unwrap();
        let sp = spectrum_selfadjoint(&ft).unwrap();
        let want = [Hypercomplex::one(H), two];
        assert!(sp.set_distance(&want) < 1e-10);
    }

    #[test]
    fn contour_calculus_matches_exact_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let m = Hypercomplex::generator(H, 1);

        // f = 1 around the spectrum of a slice-compatible operator gives the
        // identity
        let t = {
            let raw = slice_hermitian(2, &m, &mut rng);
            raw.scale_real(0.8 / raw.operator_norm().max(1e-9))
        };
        let contour = Contour::new(Hypercomplex::zero(H), 1.5, m, 96).unwrap();
        let one = holomorphic_calculus(&t, |_| Hypercomplex::one(H), &contour, None).unwrap();
        assert!(one.validated_slice);
        assert!(
            (one.op.rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-8,
            "cauchy integral of the resolvent: {}",
            (one.op.rep() - QuasilinearOp::identity(H, 2).rep()).norm()
        );

        // f = z on T = 2I with a circle centered at 2
        let t2 = QuasilinearOp::identity(H, 2).scale_real(2.0);
        let contour2 = Contour::new(Hypercomplex::from_real(H, 2.0), 1.0, m, 64).unwrap();
        let z = holomorphic_calculus(&t2, |z| *z, &contour2, None).unwrap();
        assert!((z.op.rep() - t2.rep()).norm() < 1e-8);

        // f = z^2 against the polynomial calculus, unit-circle contour
        let contour3 = Contour::new(Hypercomplex::zero(H), 1.0, m, 256).unwrap();
        let sq = holomorphic_calculus(&t, |z| *z * *z, &contour3, None).unwrap();
        let p = PolySpec::from_real_coeffs(H, &[0.0, 0.0, 1.0]);
        let want = poly_eval(&t, &p).unwrap();
        assert!(
            sq.op.sub(&want).unwrap().operator_norm() < 1e-6,
            "residual {}",
            sq.op.sub(&want).unwrap().operator_norm()
        );

        // a general hermitian operator is integrated but not slice-validated
        let rough = sample::selfadjoint_with_spectrum(H, 2, -0.8, 0.8, &mut rng);
        let wide = Contour::new(Hypercomplex::zero(H), 2.0, m, 64).unwrap();
        let flagged = holomorphic_calculus(&rough, |_| Hypercomplex::one(H), &wide, None).unwrap();
        assert!(!flagged.validated_slice);

        // octonion side: real-backed operators work on any slice axis
        let o = Algebra::Octonion;
        let mo = Hypercomplex::generator(o, 4);
        let to = {
            let raw = real_backed_selfadjoint(o, 2, &mut rng);
            raw.scale_real(0.8 / raw.operator_norm().max(1e-9))
        };
        let co = Contour::new(Hypercomplex::zero(o), 1.4, mo, 128).unwrap();
        let sq = holomorphic_calculus(&to, |z| *z * *z, &co, None).unwrap();
        assert!(sq.validated_slice);
        let want = poly_eval(&to, &PolySpec::from_real_coeffs(o, &[0.0, 0.0, 1.0])).unwrap();
        assert!(sq.op.sub(&want).unwrap().operator_norm() < 1e-6);

        // enclosure violations are rejected
        let tight = Contour::new(Hypercomplex::zero(H), 1e-3, m, 64).unwrap();
        assert!(matches!(
            holomorphic_calculus(&t, |z| *z, &tight, None),
            Err(Error::ContourEnclosure) | Err(Error::ContourPlacement { .. })
        ));
    }

    #[test]
    fn square_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        // 4I -> 2I
        let four = QuasilinearOp::identity(H, 2).scale_real(4.0);
        let r = sqrt_positive(&four).unwrap();
        assert!((r.rep() - QuasilinearOp::identity(H, 2).scale_real(2.0).rep()).norm() < 1e-10);

        // diag(1,4) -> diag(1,2)
        let t = QuasilinearOp::left_diagonal(&[
            Hypercomplex::one(H),
            Hypercomplex::from_real(H, 4.0),
        ])
        .unwrap();
        let r = sqrt_positive(&t).unwrap();
        let want = QuasilinearOp::left_diagonal(&[
            Hypercomplex::one(H),
            Hypercomplex::from_real(H, 2.0),
        ])
        .unwrap();
        assert!((r.rep() - want.rep()).norm() < 1e-10);

        for a in Algebra::both() {
            let p = sample::positive_right_linear(a, 3, &mut rng);
            let r = sqrt_positive(&p).unwrap();
            assert!(r.is_selfadjoint());
            let sq = r.compose(&r).unwrap();
            assert!(sq.sub(&p).unwrap().operator_norm() < 1e-9);
            // uniqueness: an independently-built positive root agrees
            let d = spectral_decomposition(&p).unwrap();
            let g = spectral_integral_real(&d, |l| l.max(0.0).powf(0.5)).unwrap();
            assert!(g.sub(&r).unwrap().operator_norm() < 1e-8);
        }

        // clearly negative operators are rejected
        let neg = QuasilinearOp::identity(H, 2).scale_real(-1.0);
        assert!(matches!(
            sqrt_positive(&neg),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn positive_negative_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        let eye = QuasilinearOp::identity(H, 2);
        let (p, m) = pos_neg_split(&eye).unwrap();
        assert!((p.rep() - eye.rep()).norm() < 1e-10);
        assert!(m.operator_norm() < 1e-12);

        let t = QuasilinearOp::left_diagonal(&[
            Hypercomplex::one(H),
            Hypercomplex::from_real(H, -2.0),
        ])
        .unwrap();
        let (p, m) = pos_neg_split(&t).unwrap();
        let want_p =
            QuasilinearOp::left_diagonal(&[Hypercomplex::one(H), Hypercomplex::zero(H)]).unwrap();
        let want_m =
            QuasilinearOp::left_diagonal(&[Hypercomplex::zero(H), Hypercomplex::from_real(H, 2.0)])
                .unwrap();
        assert!((p.rep() - want_p.rep()).norm() < 1e-10);
        assert!((m.rep() - want_m.rep()).norm() < 1e-10);

        for a in Algebra::both() {
            let t = sample::selfadjoint_right_linear(a, 3, &mut rng);
            let (p, m) = pos_neg_split(&t).unwrap();
            assert!(p.sub(&m).unwrap().sub(&t).unwrap().operator_norm() < 1e-9);
            assert!(p.compose(&m).unwrap().operator_norm() < 1e-10);
            assert!(m.compose(&p).unwrap().operator_norm() < 1e-10);
            let norm = t.operator_norm();
            assert!(
                (norm - p.operator_norm().max(m.operator_norm())).abs() < 1e-9 * norm.max(1.0)
            );
        }
    }

    #[test]
    fn polar_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(86);
        // T = 0 -> (0, 0)
        let zero = QuasilinearOp::zero(H, 2);
        let (p, a) = polar_decompose(&zero).unwrap();
        assert!(p.operator_norm() < 1e-12 && a.operator_norm() < 1e-12);

        // T = diag(2i): A = 2I, P = left multiplication by i
        let t = QuasilinearOp::left_diagonal(&[Hypercomplex::generator(H, 1).scale(2.0)]).unwrap();
        let (p, a) = polar_decompose(&t).unwrap();
        assert!((a.rep() - QuasilinearOp::identity(H, 1).scale_real(2.0).rep()).norm() < 1e-10);
        let want_p = QuasilinearOp::left_diagonal(&[Hypercomplex::generator(H, 1)]).unwrap();
        assert!((p.rep() - want_p.rep()).norm() < 1e-10);

        for alg in Algebra::both() {
            let t = sample::right_linear(alg, 3, &mut rng);
            let (p, a) = polar_decompose(&t).unwrap();
            assert!(
                p.compose(&a).unwrap().sub(&t).unwrap().operator_norm()
                    < 1e-9 * t.operator_norm().max(1.0)
            );
            // partial isometry on the range of A
            for _ in 0..10 {
                let x = sample::kvector(alg, 3, &mut rng);
                let y = a.apply(&x).unwrap();
                if y.norm() > 1e-6 {
                    assert!((p.apply(&y).unwrap().norm() - y.norm()).abs() < 1e-9 * y.norm());
                }
            }
        }

        // unitary input: P = T, A = I
        let b = real_backed_selfadjoint(H, 2, &mut rng);
        let m = Hypercomplex::generator(H, 2);
        let u = exp_group(&b, &m, 0.7).unwrap();
        let (p, a) = polar_decompose(&u).unwrap();
        assert!((a.rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-9);
        assert!(p.sub(&u).unwrap().operator_norm() < 1e-9);
    }

    #[test]
    fn cayley_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(87);
        let m = Hypercomplex::generator(H, 1);
        // T = 0 -> -I exactly
        let zero = QuasilinearOp::zero(H, 2);
        let u = cayley(&zero, &m).unwrap();
        assert_eq!(
            u.rep(),
            QuasilinearOp::identity(H, 2).scale_real(-1.0).rep()
        );

        // T = I, M = i: the scalar factor is (1 - i)(1 + i)^{-1} = -i
        let eye = QuasilinearOp::identity(H, 1);
        let u = cayley(&eye, &m).unwrap();
        let want = QuasilinearOp::identity(H, 1).left_scalar_op(&-m);
        assert!((u.rep() - want.rep()).norm() < 1e-12);

        for a in Algebra::both() {
            for _ in 0..5 {
                let t = real_backed_selfadjoint(a, 3, &mut rng);
                let m = sample::unit_imaginary(a, &mut rng);
                let u = cayley(&t, &m).unwrap();
                let uu = u.compose(&u.adjoint()).unwrap();
                assert!(
                    (uu.rep() - QuasilinearOp::identity(a, 3).rep()).norm() < 1e-10,
                    "unitarity defect"
                );
            }
        }
        // slice-compatible quaternionic hermitian operators as well
        for _ in 0..5 {
            let m = sample::unit_imaginary(H, &mut rng);
            let t = slice_hermitian(3, &m, &mut rng);
            let u = cayley(&t, &m).unwrap();
            let uu = u.compose(&u.adjoint()).unwrap();
            assert!((uu.rep() - QuasilinearOp::identity(H, 3).rep()).norm() < 1e-10);
            // Lipschitz-type continuity in T
            let s = slice_hermitian(3, &m, &mut rng);
            let us = cayley(&s, &m).unwrap();
            let lhs = u.sub(&us).unwrap().operator_norm();
            let rhs = 2.0 * t.sub(&s).unwrap().operator_norm();
            assert!(lhs <= rhs * (1.0 + 1e-9));
        }
    }

    #[test]
    fn exponential_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        for a in Algebra::both() {
            let b = real_backed_selfadjoint(a, 3, &mut rng);
            let m = sample::unit_imaginary(a, &mut rng);
            // t = 0 -> I
            let u0 = exp_group(&b, &m, 0.0).unwrap();
            assert!((u0.rep() - QuasilinearOp::identity(a, 3).rep()).norm() < 1e-10);
            // unitarity and the group law
            let t = 0.63;
            let s = -1.7;
            let ut = exp_group(&b, &m, t).unwrap();
            let uu = ut.compose(&ut.adjoint()).unwrap();
            assert!((uu.rep() - QuasilinearOp::identity(a, 3).rep()).norm() < 1e-10);
            let us = exp_group(&b, &m, s).unwrap();
            let uts = exp_group(&b, &m, t + s).unwrap();
            let prod = ut.compose(&us).unwrap();
            assert!(prod.sub(&uts).unwrap().operator_norm() < 1e-9);
        }
        // B = I, t = pi, M = i: U = -I
        let eye = QuasilinearOp::identity(H, 2);
        let m = Hypercomplex::generator(H, 1);
        let u = exp_group(&eye, &m, std::f64::consts::PI).unwrap();
        assert!((u.rep() - eye.scale_real(-1.0).rep()).norm() < 1e-10);
    }

    #[test]
    fn generator_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        // U == I -> 0
        let est = generator_estimate(|_| Ok(QuasilinearOp::identity(H, 2)), 1e-4).unwrap();
        assert!(est.operator_norm() < 1e-12);

        // B = I, M = i: estimate close to i I at first order
        let eye = QuasilinearOp::identity(H, 2);
        let m = Hypercomplex::generator(H, 1);
        let est = generator_estimate(|e| exp_group(&eye, &m, e), 1e-4).unwrap();
        let want = QuasilinearOp::scalar_left(H, 2, &m);
        assert!(est.sub(&want).unwrap().operator_norm() < 2e-4);

        for a in Algebra::both() {
            let b = real_backed_selfadjoint(a, 2, &mut rng);
            let m = sample::unit_imaginary(a, &mut rng);
            let want = QuasilinearOp::scalar_left(a, 2, &m).compose(&b).unwrap();
            let eps = 1e-4;
            let e1 = generator_estimate(|e| exp_group(&b, &m, e), eps)
                .unwrap()
                .sub(&want)
                .unwrap()
                .operator_norm();
            let bound = 2.0 * eps * b.operator_norm().powi(2);
            assert!(e1 <= bound.max(1e-12), "first-order bound {e1} vs {bound}");
            let e2 = generator_estimate(|e| exp_group(&b, &m, e), eps / 2.0)
                .unwrap()
                .sub(&want)
                .unwrap()
                .operator_norm();
            if e2 > 1e-10 {
                let ratio = e1 / e2;
                assert!(
                    (1.8..=2.2).contains(&ratio),
                    "Richardson ratio {ratio} outside [1.8, 2.2]"
                );
            }
        }
    }

    #[test]
    fn approximate_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        // S = I: A_n = (1 + 1/n)^{-1/2} I
        let eye = QuasilinearOp::identity(H, 2);
        let a4 = approximate_unit(&eye, 4).unwrap();
        let want = eye.scale_real((1.0f64 + 0.25).powf(-0.5));
        assert!((a4.rep() - want.rep()).norm() < 1e-10);

        // S = 0 -> 0
        let zero = QuasilinearOp::zero(H, 2);
        assert!(approximate_unit(&zero, 7).unwrap().operator_norm() < 1e-12);

        for alg in Algebra::both() {
            // rank-deficient S: compose with a coordinate projection
            let t = sample::right_linear(alg, 3, &mut rng);
            let p = crate::projections::projection_onto(&[crate::kmodule::KVector::basis(
                alg, 3, 0,
            )])
            .unwrap();
            let s = t.compose(p.op()).unwrap();
            let h = approximate_unit_h(&s).unwrap();
            let d = spectral_decomposition(&h).unwrap();
            let (m, n) = (1u32 << 10, 1u32 << 11);
            let am = approximate_unit(&s, m).unwrap();
            let an = approximate_unit(&s, n).unwrap();
            let gap = am.sub(&an).unwrap().operator_norm();
            let want = d
                .eigenvalues()
                .into_iter()
                .map(|t| approximate_unit_gap(t.max(0.0), m, n).abs())
                .fold(0.0f64, f64::max);
            assert!(
                (gap - want).abs() < 1e-8,
                "cauchy formula: gap {gap} vs sup {want}"
            );
        }
    }

    #[test]
    fn unitary_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let m = Hypercomplex::generator(H, 1);
        // A = I -> U = I
        let eye = QuasilinearOp::identity(H, 2);
        let u = unitary_split(&eye, &m).unwrap();
        assert!((u.rep() - eye.rep()).norm() < 1e-9);
        // A = 0 -> U = M I
        let zero = QuasilinearOp::zero(H, 2);
        let u = unitary_split(&zero, &m).unwrap();
        assert!((u.rep() - QuasilinearOp::scalar_left(H, 2, &m).rep()).norm() < 1e-9);

        for a in Algebra::both() {
            let b = real_backed_selfadjoint(a, 3, &mut rng);
            let b = b.scale_real(0.9 / b.operator_norm().max(1e-9));
            let m = sample::unit_imaginary(a, &mut rng);
            let u = unitary_split(&b, &m).unwrap();
            let uu = u.compose(&u.adjoint()).unwrap();
            assert!((uu.rep() - QuasilinearOp::identity(a, 3).rep()).norm() < 1e-9);
            let real_part = u.add(&u.adjoint()).unwrap().scale_real(0.5);
            assert!(real_part.sub(&b).unwrap().operator_norm() < 1e-9);
        }

        let big = QuasilinearOp::identity(H, 2).scale_real(1.5);
        assert!(matches!(
            unitary_split(&big, &m),
            Err(Error::NormBound { .. })
        ));
    }

    #[test]
    fn positive_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        // positive input: a single positive term
        let p = sample::positive_right_linear(H, 2, &mut rng);
        let terms = positive_combination(&p).unwrap();
        assert_eq!(terms.len(), 1);
        assert!(terms[0].0.dist(&Hypercomplex::one(H)) < 1e-15);
        assert!(
            recombine(H, 2, &terms)
                .unwrap()
                .sub(&p)
                .unwrap()
                .operator_norm()
                < 1e-9
        );

        // left multiplication by i: terms from the i-component split
        let li = QuasilinearOp::identity(H, 2).left_scalar_op(&Hypercomplex::generator(H, 1));
        let terms = positive_combination(&li).unwrap();
        assert!(terms.len() <= 2);
        assert!(
            recombine(H, 2, &terms)
                .unwrap()
                .sub(&li)
                .unwrap()
                .operator_norm()
                < 1e-10
        );

        for a in Algebra::both() {
            for _ in 0..5 {
                let t = sample::right_linear(a, 3, &mut rng);
                let terms = positive_combination(&t).unwrap();
                assert!(terms.len() <= 2 * a.dim());
                let back = recombine(a, 3, &terms).unwrap();
                assert!(
                    back.sub(&t).unwrap().operator_norm() < 1e-9 * t.operator_norm().max(1.0),
                    "recombination"
                );
                for (_, b) in &terms {
                    let min = crate::linalg::min_eigenvalue(b.rep());
                    assert!(min > -1e-9, "positive factor");
                }
            }
        }
    }
}
