//! Spectra, resolvents, Neumann series, the spectral radius, and the
//! finite-dimensional spectral decomposition of selfadjoint right-linear
//! operators.
//!
//! The spectrum of `T` is the set of scalars `z` for which `zI - T` (with `z`
//! acting by left multiplication) has no bounded inverse; at finite dimension
//! this is a singularity of the real representation.

use crate::algebra::{check_unit_imaginary, Algebra, Hypercomplex};
use crate::error::{Error, Result};
use crate::operator::QuasilinearOp;
use crate::projections::{projection_from_real_span, GradedProjection};
use nalgebra::{DMatrix, DVector};

/// Relative singularity threshold: `z` counts as a spectrum point when the
/// smallest singular value of `zI - T` falls below this times the largest.
pub const SINGULAR_TOL: f64 = 1e-12;

/// How a spectrum estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    SelfadjointExact,
    DiagonalExact,
    SliceScan,
}

/// A set of spectrum points with the method and tolerance that produced it.
#[derive(Debug, Clone)]
pub struct SpectrumEstimate {
    pub method: SpectrumMethod,
    pub tolerance: f64,
    pub points: Vec<Hypercomplex>,
    pub slice: Option<Hypercomplex>,
}

impl SpectrumEstimate {
    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Hausdorff-style set distance to another point set.
    pub fn set_distance(&self, other: &[Hypercomplex]) -> f64 {
        let d = |from: &[Hypercomplex], to: &[Hypercomplex]| {
            from.iter()
                .map(|p| {
                    to.iter()
                        .map(|q| p.dist(q))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0f64, f64::max)
        };
        d(&self.points, other).max(d(other, &self.points))
    }
}

/// `zI - T` as an operator.
pub fn shift(t: &QuasilinearOp, z: &Hypercomplex) -> QuasilinearOp {
    QuasilinearOp::scalar_left(t.algebra(), t.module_dim(), z)
        .sub(t)
        .expect("same space")
}

/// The resolvent `R(z; T) = (zI - T)^{-1}`.
pub fn resolvent(t: &QuasilinearOp, z: &Hypercomplex) -> Result<QuasilinearOp> {
    let a = shift(t, z);
    let svals = a.rep().clone().singular_values();
    let smax = svals.iter().fold(0.0f64, |acc, s| acc.max(*s));
    let smin = svals.iter().fold(f64::INFINITY, |acc, s| acc.min(*s));
    if smin <= SINGULAR_TOL * smax.max(1e-300) {
        return Err(Error::SpectrumPoint { sigma_min: smin });
    }
    let inv = a
        .rep()
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SpectrumPoint { sigma_min: smin })?;
    QuasilinearOp::from_rep(t.algebra(), t.module_dim(), inv)
}

/// Partial Neumann series for the resolvent around a base point:
/// `R(z; T) = (sum_k [R(z0; T)(z0 - z)]^k) R(z0; T)`. Returns the partial sum
/// and the geometric tail bound.
pub fn neumann_resolvent(
    t: &QuasilinearOp,
    z0: &Hypercomplex,
    z: &Hypercomplex,
    terms: usize,
) -> Result<(QuasilinearOp, f64)> {
    let r0 = resolvent(t, z0)?;
    let gap = *z0 - *z;
    let factor = r0.operator_norm() * gap.norm();
    if factor >= 1.0 {
        return Err(Error::ContractionViolated { factor });
    }
    let step = r0.compose(&QuasilinearOp::scalar_left(
        t.algebra(),
        t.module_dim(),
        &gap,
    ))?;
    let mut sum = QuasilinearOp::identity(t.algebra(), t.module_dim());
    let mut power = QuasilinearOp::identity(t.algebra(), t.module_dim());
    for _ in 1..terms {
        power = power.compose(&step)?;
        sum = sum.add(&power)?;
    }
    let out = sum.compose(&r0)?;
    let q = step.operator_norm().min(factor);
    let tail = q.powi(terms as i32) * r0.operator_norm() / (1.0 - q);
    Ok((out, tail))
}

/// Merges a sorted list of values into clusters of width `tol`; returns the
/// cluster means and member counts.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((mean, count)) if (v - *mean).abs() <= tol => {
                *mean = (*mean * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Exact real spectrum of a selfadjoint operator: the eigenvalues of the
/// symmetric representation, clustered at `1e-9 |T|`. These are exactly the
/// real points where `zI - T` is singular.
pub fn spectrum_selfadjoint(t: &QuasilinearOp) -> Result<SpectrumEstimate> {
    if !t.is_selfadjoint() {
        return Err(Error::NotSelfadjoint);
    }
    let tol = 1e-9 * t.operator_norm().max(1.0);
    let sym = (t.rep() + t.rep().transpose()) * 0.5;
    let (eigs, _) = crate::linalg::symmetric_eigen(&sym);
    let points = cluster(eigs.as_slice(), tol)
        .into_iter()
        .map(|(v, _)| Hypercomplex::from_real(t.algebra(), v))
        .collect();
    Ok(SpectrumEstimate {
        method: SpectrumMethod::SelfadjointExact,
        tolerance: tol,
        points,
        slice: None,
    })
}

/// Exact spectrum of the left-diagonal operator `x_l -> b_l x_l`: the closure
/// of the diagonal entries.
pub fn spectrum_left_diagonal(b: &[Hypercomplex]) -> Result<SpectrumEstimate> {
    if b.is_empty() {
        return Err(Error::EmptyInput("spectrum_left_diagonal"));
    }
    let mut points: Vec<Hypercomplex> = Vec::new();
    for z in b {
        if !points.iter().any(|p| p.dist(z) <= 1e-12) {
            points.push(*z);
        }
    }
    Ok(SpectrumEstimate {
        method: SpectrumMethod::DiagonalExact,
        tolerance: 1e-12,
        points,
        slice: None,
    })
}

/// Rectangular window on the slice plane `R + M R`.
#[derive(Debug, Clone, Copy)]
pub struct SliceWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

fn sigma_min(t: &QuasilinearOp, z: &Hypercomplex) -> f64 {
    let a = shift(t, z);
    a.rep()
        .clone()
        .singular_values()
        .iter()
        .fold(f64::INFINITY, |acc, s| acc.min(*s))
}

/// Grid scan for spectrum points on the slice plane spanned by 1 and `m_axis`.
///
/// Candidate cells are those where the smallest singular value of `zI - T`
/// falls below the cell radius (the singular value is 1-Lipschitz in `z`, so
/// every true spectrum point on the slice is caught within one cell). Each
/// candidate is then refined by shrinking local grid search.
pub fn spectrum_scan(
    t: &QuasilinearOp,
    m_axis: &Hypercomplex,
    window: &SliceWindow,
    grid: usize,
) -> Result<SpectrumEstimate> {
    check_unit_imaginary(m_axis)?;
    if grid < 2 || window.re_max <= window.re_min || window.im_max <= window.im_min {
        return Err(Error::InvalidParameter("degenerate scan window".into()));
    }
    let hx = (window.re_max - window.re_min) / (grid - 1) as f64;
    let hy = (window.im_max - window.im_min) / (grid - 1) as f64;
    let cell = hx.hypot(hy) * 0.5;
    let at = |re: f64, im: f64| -> Hypercomplex {
        let mut z = m_axis.scale(im);
        *z.coeff_mut(0) += re;
        z
    };
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for gx in 0..grid {
        let re = window.re_min + hx * gx as f64;
        for gy in 0..grid {
            let im = window.im_min + hy * gy as f64;
            if sigma_min(t, &at(re, im)) < cell {
                hits.push((re, im));
            }
        }
    }
    // refine each hit by a shrinking 3x3 search
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for &(re0, im0) in &hits {
        let (mut re, mut im) = (re0, im0);
        let mut step = hx.max(hy);
        for _ in 0..24 {
            let mut best = (sigma_min(t, &at(re, im)), re, im);
            for dx in -1i32..=1 {
                for dy in -1i32..=1 {
                    let (r, i) = (re + dx as f64 * step, im + dy as f64 * step);
                    let s = sigma_min(t, &at(r, i));
                    if s < best.0 {
                        best = (s, r, i);
                    }
                }
            }
            re = best.1;
            im = best.2;
            step *= 0.5;
        }
        refined.push((re, im));
    }
    // deduplicate within one cell
    let mut points: Vec<Hypercomplex> = Vec::new();
    for (re, im) in refined {
        let z = at(re, im);
        if !points.iter().any(|p| p.dist(&z) <= cell) {
            points.push(z);
        }
    }
    Ok(SpectrumEstimate {
        method: SpectrumMethod::SliceScan,
        tolerance: cell,
        points,
        slice: Some(*m_axis),
    })
}

/// Gelfand-formula estimate of the spectral radius by repeated squaring with
/// log-domain normalization.
#[derive(Debug, Clone, Copy)]
pub struct SpectralRadiusEstimate {
    pub value: f64,
    pub converged: bool,
    pub doublings: u32,
}

pub fn spectral_radius(t: &QuasilinearOp, max_doublings: u32) -> SpectralRadiusEstimate {
    let mut cur = t.clone();
    let mut acc = 0.0f64;
    let mut prev: Option<f64> = None;
    for k in 0..=max_doublings {
        let norm = cur.operator_norm();
        if norm == 0.0 {
            return SpectralRadiusEstimate {
                value: 0.0,
                converged: true,
                doublings: k,
            };
        }
        acc += norm.ln() / 2f64.powi(k as i32);
        let estimate = acc.exp();
        if let Some(p) = prev {
            if (estimate - p).abs() < 1e-4 * estimate.max(1e-300) {
                return SpectralRadiusEstimate {
                    value: estimate,
                    converged: true,
                    doublings: k,
                };
            }
        }
        prev = Some(estimate);
        let scaled = cur.scale_real(1.0 / norm);
        cur = scaled.compose(&scaled).expect("same space");
    }
    SpectralRadiusEstimate {
        value: prev.unwrap_or(0.0),
        converged: false,
        doublings: max_doublings,
    }
}

/// Spectral decomposition of a selfadjoint right-linear operator: real
/// eigenvalues paired with graded projections onto the saturated eigenspaces.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    algebra: Algebra,
    n: usize,
    pairs: Vec<(f64, GradedProjection)>,
    /// set when two cluster centers sit within ten clustering widths
    pub cluster_ambiguity: bool,
    source_fingerprint: u64,
}

impl SpectralDecomposition {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn module_dim(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(f64, GradedProjection)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|(l, _)| *l).collect()
    }

    pub fn source_fingerprint(&self) -> u64 {
        self.source_fingerprint
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> Result<QuasilinearOp> {
        let mut acc = QuasilinearOp::zero(self.algebra, self.n);
        for (l, p) in &self.pairs {
            acc = acc.add(&p.op().scale_real(*l))?;
        }
        Ok(acc)
    }

    /// `sum_k P_k - I` defect norm plus the worst pairwise product norm.
    pub fn partition_defect(&self) -> Result<f64> {
        let mut sum = QuasilinearOp::zero(self.algebra, self.n);
        for (_, p) in &self.pairs {
            sum = sum.add(p.op())?;
        }
        let eye = QuasilinearOp::identity(self.algebra, self.n);
        let mut defect = sum.sub(&eye)?.operator_norm();
        for (i, (_, p)) in self.pairs.iter().enumerate() {
            for (_, q) in self.pairs.iter().skip(i + 1) {
                defect = defect.max(p.op().compose(q.op())?.operator_norm());
            }
        }
        Ok(defect)
    }
}

fn fingerprint(m: &DMatrix<f64>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in m.iter() {
        h ^= v.to_bits();
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Computes the spectral decomposition of a selfadjoint right-linear
/// operator: eigen-clusters of the symmetric representation at a tolerance of
/// `1e-9 |T|`, each paired with the graded projection onto its saturated
/// eigenspace.
pub fn spectral_decomposition(t: &QuasilinearOp) -> Result<SpectralDecomposition> {
    if !t.is_selfadjoint() {
        return Err(Error::NotSelfadjoint);
    }
    if !t.is_right_linear() {
        return Err(Error::NotRightLinear);
    }
    let algebra = t.algebra();
    let n = t.module_dim();
    let big = t.real_dim();
    let tol = 1e-9 * t.operator_norm().max(1.0);
    let sym = (t.rep() + t.rep().transpose()) * 0.5;
    let (eigenvalues, eigenvectors) = crate::linalg::symmetric_eigen(&sym);
    let mut order: Vec<usize> = (0..big).collect();
    order.sort_by(|a, b| eigenvalues[*a].partial_cmp(&eigenvalues[*b]).unwrap());
    // group adjacent eigenvalues into clusters
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for idx in order {
        let v = eigenvalues[idx];
        match clusters.last_mut() {
            Some((mean, members)) if (v - *mean).abs() <= tol => {
                let m = members.len() as f64;
                *mean = (*mean * m + v) / (m + 1.0);
                members.push(idx);
            }
            _ => clusters.push((v, vec![idx])),
        }
    }
    let cluster_ambiguity = clusters
        .windows(2)
        .any(|w| (w[1].0 - w[0].0).abs() <= 10.0 * tol);
    let mut pairs = Vec::with_capacity(clusters.len());
    for (value, members) in clusters {
        let mut span = DMatrix::zeros(big, members.len());
        for (c, idx) in members.iter().enumerate() {
            span.set_column(c, &DVector::from(eigenvectors.column(*idx).clone_owned()));
        }
        let projection = projection_from_real_span(algebra, n, &span)?;
        pairs.push((value, projection));
    }
    Ok(SpectralDecomposition {
        algebra,
        n,
        pairs,
        cluster_ambiguity,
        source_fingerprint: fingerprint(t.rep()),
    })
}

/// `sum_k (f(lambda_k) I) P_k`, the operator assembled from a scalar-valued
/// function of the eigenvalues acting by left multiplication.
pub fn spectral_integral<F>(decomp: &SpectralDecomposition, f: F) -> Result<QuasilinearOp>
where
    F: Fn(f64) -> Hypercomplex,
{
    let mut acc = QuasilinearOp::zero(decomp.algebra, decomp.n);
    for (l, p) in &decomp.pairs {
        let value = f(*l);
        if value.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::FunctionUndefined { value: *l });
        }
        acc = acc.add(&p.op().left_scalar_op(&value))?;
    }
    Ok(acc)
}

/// Spectral integral of a real-valued function; the result is selfadjoint.
pub fn spectral_integral_real<F>(decomp: &SpectralDecomposition, f: F) -> Result<QuasilinearOp>
where
    F: Fn(f64) -> f64,
{
    spectral_integral(decomp, |l| Hypercomplex::from_real(decomp.algebra, f(l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: Algebra = Algebra::Quaternion;

    #[test]
    fn resolvent_trivial_cases() {
        let zero = QuasilinearOp::zero(H, 2);
        let one = Hypercomplex::one(H);
        let r = resolvent(&zero, &one).unwrap();
        assert!((r.rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-13);

        let eye = QuasilinearOp::identity(H, 2);
        let two = Hypercomplex::from_real(H, 2.0);
        let r = resolvent(&eye, &two).unwrap();
        assert!((r.rep() - eye.rep()).norm() < 1e-13);

        // z in the spectrum is rejected
        assert!(matches!(
            resolvent(&eye, &one),
            Err(Error::SpectrumPoint { .. })
        ));
    }

    #[test]
    fn resolvent_identity_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for a in Algebra::both() {
            for _ in 0..10 {
                let t = sample::right_linear(a, 3, &mut rng);
                let t = t.scale_real(0.5 / t.operator_norm().max(1e-9));
                let z1 = Hypercomplex::from_real(a, 2.0) + sample::hypercomplex(a, &mut rng).scale(0.2);
                let z2 = Hypercomplex::from_real(a, -2.0) + sample::hypercomplex(a, &mut rng).scale(0.2);
                let r1 = resolvent(&t, &z1).unwrap();
                let r2 = resolvent(&t, &z2).unwrap();
                // R(z2) - R(z1) = R(z1) ((z1 - z2) R(z2))
                let gap = QuasilinearOp::scalar_left(a, 3, &(z1 - z2));
                let rhs = r1.compose(&gap.compose(&r2).unwrap()).unwrap();
                let lhs = r2.sub(&r1).unwrap();
                assert!(lhs.sub(&rhs).unwrap().operator_norm() < 1e-9);
            }
        }
    }

    #[test]
    fn neumann_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        // T = 0, z0 = 1, z = 0.5: geometric series sums to 2 I
        let zero = QuasilinearOp::zero(H, 2);
        let (s, tail) = neumann_resolvent(
            &zero,
            &Hypercomplex::one(H),
            &Hypercomplex::from_real(H, 0.5),
            60,
        )
        .unwrap();
        assert!((s.rep() - QuasilinearOp::identity(H, 2).scale_real(2.0).rep()).norm() < 1e-9);
        assert!(tail < 1e-9);

        // z = z0 reproduces the resolvent after one term
        let t = sample::right_linear(H, 2, &mut rng);
        let t = t.scale_real(0.4 / t.operator_norm().max(1e-9));
        let z0 = Hypercomplex::from_real(H, 2.0);
        let (s, _) = neumann_resolvent(&t, &z0, &z0, 1).unwrap();
        let direct = resolvent(&t, &z0).unwrap();
        assert!(s.sub(&direct).unwrap().operator_norm() < 1e-12);

        // contraction violation is reported
        let far = Hypercomplex::from_real(H, -30.0);
        assert!(matches!(
            neumann_resolvent(&t, &z0, &far, 8),
            Err(Error::ContractionViolated { .. })
        ));

        for a in Algebra::both() {
            let t = sample::right_linear(a, 3, &mut rng);
            let t = t.scale_real(0.5 / t.operator_norm().max(1e-9));
            let z0 = Hypercomplex::from_real(a, 2.0);
            let r0 = resolvent(&t, &z0).unwrap();
            let delta = sample::unit_imaginary(a, &mut rng).scale(0.4 / r0.operator_norm());
            let z = z0 + delta;
            let (s, tail) = neumann_resolvent(&t, &z0, &z, 60).unwrap();
            let direct = resolvent(&t, &z).unwrap();
            assert!(s.sub(&direct).unwrap().operator_norm() < 1e-8_f64.max(tail * 2.0));
        }
    }

    #[test]
    fn selfadjoint_spectrum() {
        let eye = QuasilinearOp::identity(H, 2);
        let sp = spectrum_selfadjoint(&eye).unwrap();
        assert_eq!(sp.points.len(), 1);
        assert!(sp.points[0].dist(&Hypercomplex::one(H)) < 1e-12);

        let one = Hypercomplex::one(H);
        let four = Hypercomplex::from_real(H, 4.0);
        let t = QuasilinearOp::left_diagonal(&[one, four]).unwrap();
        let sp = spectrum_selfadjoint(&t).unwrap();
        assert_eq!(sp.points.len(), 2);
        assert!((sp.points[0].re() - 1.0).abs() < 1e-12);
        assert!((sp.points[1].re() - 4.0).abs() < 1e-12);

        let skew = QuasilinearOp::left_diagonal(&[Hypercomplex::generator(H, 1)]).unwrap();
        assert!(matches!(
            spectrum_selfadjoint(&skew),
            Err(Error::NotSelfadjoint)
        ));

        // resolvent exists off the real axis, with the symmetric-operator
        // resolvent bound |R(a; T) x| <= 2 |x| / |a - conj a| on operators
        // commuting with the scalar action of the axis
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for a in Algebra::both() {
            let i1 = Hypercomplex::generator(a, 1);
            let t = sample::slice_compatible_selfadjoint(a, 3, &i1, &mut rng);
            let r = resolvent(&t, &i1).unwrap();
            for _ in 0..20 {
                let x = sample::kvector(a, 3, &mut rng);
                let bound = 2.0 * x.norm() / 2.0;
                assert!(r.apply(&x).unwrap().norm() <= bound * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn diagonal_spectrum_and_norm() {
        let i = Hypercomplex::generator(H, 1);
        let opj = Hypercomplex::one(H) + Hypercomplex::generator(H, 2);
        let two = Hypercomplex::from_real(H, 2.0);
        let sp = spectrum_left_diagonal(&[i, opj, two]).unwrap();
        assert_eq!(sp.points.len(), 3);
        assert!((sp.max_norm() - 2.0).abs() < 1e-15);
        let op = QuasilinearOp::left_diagonal(&[i, opj, two]).unwrap();
        assert!((op.operator_norm() - 2.0).abs() < 1e-12);

        let sp = spectrum_left_diagonal(&[Hypercomplex::zero(H)]).unwrap();
        assert_eq!(sp.points.len(), 1);
        assert!(sp.max_norm() == 0.0);

        // real diagonal: agrees with the selfadjoint route
        let reals = [Hypercomplex::from_real(H, -1.5), Hypercomplex::from_real(H, 0.25)];
        let op = QuasilinearOp::left_diagonal(&reals).unwrap();
        let sa = spectrum_selfadjoint(&op).unwrap();
        let sp = spectrum_left_diagonal(&reals).unwrap();
        assert!(sp.set_distance(&sa.points) < 1e-10);
    }

    #[test]
    fn scan_finds_slice_points() {
        // T = I: single cluster at z = 1
        let eye = QuasilinearOp::identity(H, 1);
        let m = Hypercomplex::generator(H, 1);
        let window = SliceWindow {
            re_min: -2.0,
            re_max: 2.0,
            im_min: -2.0,
            im_max: 2.0,
        };
        let sp = spectrum_scan(&eye, &m, &window, 41).unwrap();
        assert_eq!(sp.points.len(), 1);
        assert!(sp.points[0].dist(&Hypercomplex::one(H)) < 1e-6);

        // left diagonal (i): the scan on the i-slice finds z = i
        let op = QuasilinearOp::left_diagonal(&[m]).unwrap();
        let sp = spectrum_scan(&op, &m, &window, 41).unwrap();
        let diag = spectrum_left_diagonal(&[m]).unwrap();
        assert!(sp.set_distance(&diag.points) < 1e-6);

        // selfadjoint: only real-axis points, matching the exact method
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let t = sample::selfadjoint_with_spectrum(H, 2, -1.5, 1.5, &mut rng);
        let sp = spectrum_scan(&t, &m, &window, 61).unwrap();
        let sa = spectrum_selfadjoint(&t).unwrap();
        for p in &sp.points {
            assert!(p.im_norm() < 2.0 * sp.tolerance);
            assert!(
                sa.points.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min)
                    < 2.0 * sp.tolerance
            );
        }

        assert!(matches!(
            spectrum_scan(&eye, &m, &window, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn gelfand_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let eye = QuasilinearOp::identity(H, 2);
        let est = spectral_radius(&eye, 12);
        assert!((est.value - 1.0).abs() < 1e-10);

        // nilpotent 2x2 block over H
        let one = Hypercomplex::one(H);
        let zero = Hypercomplex::zero(H);
        let nil = QuasilinearOp::from_k_matrix(H, &[vec![zero, one], vec![zero, zero]]).unwrap();
        let est = spectral_radius(&nil, 12);
        assert!(est.value <= 1e-3);

        // normal operator: radius equals the largest spectrum-point norm
        for a in Algebra::both() {
            let b: Vec<Hypercomplex> = (0..3).map(|_| sample::hypercomplex(a, &mut rng)).collect();
            let op = QuasilinearOp::left_diagonal(&b).unwrap();
            let sp = spectrum_left_diagonal(&b).unwrap();
            let est = spectral_radius(&op, 14);
            assert!(
                (est.value - sp.max_norm()).abs() <= 1e-2 * sp.max_norm().max(1.0),
                "radius {} vs {}",
                est.value,
                sp.max_norm()
            );
        }
    }

    #[test]
    fn decomposition_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let eye = QuasilinearOp::identity(H, 2);
        let d = spectral_decomposition(&eye).unwrap();
        assert_eq!(d.pairs().len(), 1);
        assert!((d.pairs()[0].0 - 1.0).abs() < 1e-12);

        let one = Hypercomplex::one(H);
        let four = Hypercomplex::from_real(H, 4.0);
        let t = QuasilinearOp::left_diagonal(&[one, four]).unwrap();
        let d = spectral_decomposition(&t).unwrap();
        assert_eq!(d.pairs().len(), 2);
        let sum = d.pairs()[0].1.op().add(d.pairs()[1].1.op()).unwrap();
        assert!((sum.rep() - QuasilinearOp::identity(H, 2).rep()).norm() < 1e-10);

        for a in Algebra::both() {
            for _ in 0..5 {
                let t = sample::selfadjoint_right_linear(a, 3, &mut rng);
                let d = spectral_decomposition(&t).unwrap();
                assert!(d.partition_defect().unwrap() < 1e-10);
                let back = d.reconstruct().unwrap();
                assert!(back.sub(&t).unwrap().operator_norm() < 1e-9 * t.operator_norm().max(1.0));
                for (_, p) in d.pairs() {
                    p.validate(1e-9).unwrap();
                }
            }
        }
    }

    #[test]
    fn integral_of_simple_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for a in Algebra::both() {
            let t = sample::selfadjoint_right_linear(a, 2, &mut rng);
            let d = spectral_decomposition(&t).unwrap();
            // identity function reproduces T
            let id = spectral_integral_real(&d, |l| l).unwrap();
            assert!(id.sub(&t).unwrap().operator_norm() < 1e-9 * t.operator_norm().max(1.0));
            // constant one gives I
            let one = spectral_integral_real(&d, |_| 1.0).unwrap();
            assert!(
                (one.rep() - QuasilinearOp::identity(a, 2).rep()).norm() < 1e-9
            );
            // squaring matches composition
            let sq = spectral_integral_real(&d, |l| l * l).unwrap();
            let tt = t.compose(&t).unwrap();
            assert!(sq.sub(&tt).unwrap().operator_norm() < 1e-9 * tt.operator_norm().max(1.0));
        }
    }
}
