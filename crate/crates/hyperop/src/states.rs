//! Quasilinear functionals and states on operator algebras, the functional
//! lattice on finite point sets, the Jordan decomposition, the GNS
//! construction, discrete `K`-valued measures with densities, and the
//! norm-bounded interpolation operators.

use crate::algebra::{check_unit_imaginary, Algebra, Hypercomplex};
use crate::calculus::exp_group;
use crate::error::{Error, Result};
use crate::kmodule::{inner, KVector, RANK_TOL};
use crate::operator::QuasilinearOp;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// A functional on an operator algebra in vector form:
/// `rho(A) = sum_j c_j <y_j; A x_j>`.
#[derive(Debug, Clone)]
pub struct StateFunctional {
    terms: Vec<(f64, KVector, KVector)>,
}

impl StateFunctional {
    /// Vector state `w_x(A) = <x; A x>` of a unit vector.
    pub fn vector_state(x: &KVector) -> Result<Self> {
        if (x.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::NotOrthonormal);
        }
        Ok(StateFunctional {
            terms: vec![(1.0, x.clone(), x.clone())],
        })
    }

    /// Density form `rho(A) = sum_k s_k <d_k; A d_k>`.
    pub fn density(vectors: &[KVector], signs: &[f64]) -> Result<Self> {
        if vectors.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                got: signs.len(),
            });
        }
        Ok(StateFunctional {
            terms: vectors
                .iter()
                .zip(signs.iter())
                .map(|(d, s)| (*s, d.clone(), d.clone()))
                .collect(),
        })
    }

    pub fn from_pairs(terms: Vec<(f64, KVector, KVector)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyInput("StateFunctional::from_pairs"));
        }
        Ok(StateFunctional { terms })
    }

    pub fn terms(&self) -> &[(f64, KVector, KVector)] {
        &self.terms
    }

    pub fn algebra(&self) -> Algebra {
        self.terms[0].1.algebra()
    }

    pub fn module_dim(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn eval(&self, a: &QuasilinearOp) -> Result<Hypercomplex> {
        let mut acc = Hypercomplex::zero(self.algebra());
        for (c, y, x) in &self.terms {
            acc = acc + inner(y, &a.apply(x)?)?.scale(*c);
        }
        Ok(acc)
    }

    /// Difference of functionals, kept in vector form.
    pub fn sub(&self, rhs: &StateFunctional) -> StateFunctional {
        let mut terms = self.terms.clone();
        for (c, y, x) in &rhs.terms {
            terms.push((-c, y.clone(), x.clone()));
        }
        StateFunctional { terms }
    }

    /// Symmetric real density of a hermitian (diagonal) vector form, used by
    /// the Jordan decomposition: `D = sum c_j flat(x_j) flat(x_j)^T`.
    fn density_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.module_dim();
        let big = n * self.algebra().dim();
        let mut d = DMatrix::zeros(big, big);
        for (c, y, x) in &self.terms {
            if y.dist(x) > 1e-12 {
                return Err(Error::InvalidParameter(
                    "Jordan decomposition needs a diagonal (hermitian) density form".into(),
                ));
            }
            let f = x.to_real();
            d += (&f * f.transpose()) * *c;
        }
        Ok(d)
    }

    /// The trace-norm style analytic value `sum_i |lambda_i|` of the density.
    pub fn density_trace_norm(&self) -> Result<f64> {
        let d = self.density_matrix()?;
        let sym = (&d + d.transpose()) * 0.5;
        Ok(crate::linalg::symmetric_eigen(&sym).0.iter().map(|l| l.abs()).sum())
    }
}

/// Jordan decomposition of a hermitian density form: the positive and
/// negative eigen-parts of the density matrix, returned as vector-form
/// functionals with `rho = plus - minus`.
pub fn jordan_decompose(rho: &StateFunctional) -> Result<(StateFunctional, StateFunctional)> {
    let algebra = rho.algebra();
    let d = rho.density_matrix()?;
    let sym = (&d + d.transpose()) * 0.5;
    let (vals, vecs) = crate::linalg::symmetric_eigen(&sym);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, l) in vals.iter().enumerate() {
        if l.abs() <= 1e-14 {
            continue;
        }
        let v = KVector::from_real(algebra, &DVector::from(vecs.column(i).clone_owned()))?;
        if *l > 0.0 {
            plus.push((*l, v.clone(), v));
        } else {
            minus.push((-*l, v.clone(), v));
        }
    }
    let fallback = |terms: Vec<(f64, KVector, KVector)>| -> StateFunctional {
        if terms.is_empty() {
            StateFunctional {
                terms: vec![(0.0, rho.terms[0].1.clone(), rho.terms[0].1.clone())],
            }
        } else {
            StateFunctional { terms }
        }
    };
    Ok((fallback(plus), fallback(minus)))
}

/// Norm estimate of a functional by maximization of `|rho(A)| / |A|` over a
/// seeded sample plus caller-supplied extremal candidates.
pub fn norm_estimate<R: Rng>(
    rho: &StateFunctional,
    candidates: &[QuasilinearOp],
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let algebra = rho.algebra();
    let n = rho.module_dim();
    let mut best: f64 = 0.0;
    let mut consider = |op: &QuasilinearOp| -> Result<()> {
        let norm = op.operator_norm();
        if norm > 1e-12 {
            best = best.max(rho.eval(op)?.norm() / norm);
        }
        Ok(())
    };
    consider(&QuasilinearOp::identity(algebra, n))?;
    for c in candidates {
        consider(c)?;
    }
    for _ in 0..trials {
        let t = crate::sample::quasilinear(algebra, n, rng);
        consider(&t)?;
        let s = t.add(&t.adjoint())?.scale_real(0.5);
        consider(&s)?;
    }
    Ok(best)
}

/// Validation report for the norm/positivity characterization of states.
#[derive(Debug, Clone)]
pub struct StateReport {
    pub rho_identity: Hypercomplex,
    pub norm_estimate: f64,
    /// smallest sampled value of `rho(A* A)`
    pub positivity_min: f64,
    /// largest sampled hermiticity defect `|rho(A*) - conj rho(A)|`
    pub hermitian_defect: f64,
}

pub fn state_validate<R: Rng>(
    rho: &StateFunctional,
    candidates: &[QuasilinearOp],
    trials: usize,
    rng: &mut R,
) -> Result<StateReport> {
    let algebra = rho.algebra();
    let n = rho.module_dim();
    let mut positivity_min = f64::INFINITY;
    let mut hermitian_defect: f64 = 0.0;
    // positivity and hermiticity are module-compatible notions: they are
    // sampled over right-linear operators, where the adjoint satisfies the
    // scalar-valued pairing identity
    for _ in 0..trials.max(1) {
        let a = crate::sample::right_linear(algebra, n, rng);
        let asa = a.adjoint().compose(&a)?;
        let val = rho.eval(&asa)?;
        positivity_min = positivity_min.min(val.re());
        hermitian_defect = hermitian_defect.max(val.im_norm());
        let lhs = rho.eval(&a.adjoint())?;
        let rhs = rho.eval(&a)?.conj();
        hermitian_defect = hermitian_defect.max(lhs.dist(&rhs));
    }
    Ok(StateReport {
        rho_identity: rho.eval(&QuasilinearOp::identity(algebra, n))?,
        norm_estimate: norm_estimate(rho, candidates, trials, rng)?,
        positivity_min,
        hermitian_defect,
    })
}

// ---------------------------------------------------------------------------
// functionals on finite point sets
// ---------------------------------------------------------------------------

/// A hermitian functional on `K`-valued tables over a finite point set,
/// determined by one real weight per point: `p(f) = sum_v w_v f(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunctional {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
}

impl WeightFunctional {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: weights.len(),
            });
        }
        Ok(WeightFunctional { labels, weights })
    }

    /// Point evaluation at `z0`: the canonical multiplicative state.
    pub fn character(labels: Vec<String>, z0: &str) -> Result<Self> {
        let idx = labels
            .iter()
            .position(|l| l == z0)
            .ok_or_else(|| Error::UnknownPoint(z0.to_string()))?;
        let mut weights = vec![0.0; labels.len()];
        weights[idx] = 1.0;
        Ok(WeightFunctional { labels, weights })
    }

    pub fn eval(&self, table: &[Hypercomplex]) -> Result<Hypercomplex> {
        if table.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: table.len(),
            });
        }
        let algebra = table
            .first()
            .map(|t| t.algebra())
            .ok_or(Error::EmptyInput("WeightFunctional::eval"))?;
        let mut acc = Hypercomplex::zero(algebra);
        for (w, f) in self.weights.iter().zip(table.iter()) {
            acc = acc + f.scale(*w);
        }
        Ok(acc)
    }

    /// Dual norm: attained by sign-aligned tables, `sum |w_v|`.
    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    fn check_points(&self, rhs: &WeightFunctional) -> Result<()> {
        if self.labels != rhs.labels {
            return Err(Error::InvalidParameter("mismatched point sets".into()));
        }
        Ok(())
    }
}

/// Lattice join: on a finite set the supremum over splittings is attained
/// pointwise, so the join takes the larger weight at every point.
pub fn lattice_join(p1: &WeightFunctional, p2: &WeightFunctional) -> Result<WeightFunctional> {
    p1.check_points(p2)?;
    Ok(WeightFunctional {
        labels: p1.labels.clone(),
        weights: p1
            .weights
            .iter()
            .zip(p2.weights.iter())
            .map(|(a, b)| a.max(*b))
            .collect(),
    })
}

/// Positive and negative parts `p = p+ - p-` with pointwise weights
/// `max(w, 0)` and `max(-w, 0)`; the norms add exactly.
pub fn pos_part(p: &WeightFunctional) -> (WeightFunctional, WeightFunctional) {
    let plus = WeightFunctional {
        labels: p.labels.clone(),
        weights: p.weights.iter().map(|w| w.max(0.0)).collect(),
    };
    let minus = WeightFunctional {
        labels: p.labels.clone(),
        weights: p.weights.iter().map(|w| (-w).max(0.0)).collect(),
    };
    (plus, minus)
}

/// Tests multiplicativity `p(fg) = p(f) p(g)` on random tables.
pub fn multiplicative_check<R: Rng>(
    p: &WeightFunctional,
    algebra: Algebra,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    for _ in 0..trials {
        let f: Vec<Hypercomplex> = (0..p.weights.len())
            .map(|_| crate::sample::hypercomplex(algebra, rng))
            .collect();
        let g: Vec<Hypercomplex> = (0..p.weights.len())
            .map(|_| crate::sample::hypercomplex(algebra, rng))
            .collect();
        let fg: Vec<Hypercomplex> = f
            .iter()
            .zip(g.iter())
            .map(|(a, b)| a.try_mul(b))
            .collect::<Result<_>>()?;
        let lhs = p.eval(&fg)?;
        let rhs = p.eval(&f)?.try_mul(&p.eval(&g)?)?;
        if lhs.dist(&rhs) > 1e-11 * (1.0 + rhs.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// GNS construction
// ---------------------------------------------------------------------------

/// The cyclic representation generated by a state: quotient of the algebra
/// closure by the null space of the Gram form, with the left-multiplication
/// action expressed on an orthonormal `K`-basis of the quotient.
#[derive(Debug, Clone)]
pub struct GnsResult {
    algebra: Algebra,
    /// module dimension of the representation space (the quotient as `K^d`)
    quotient_dim: usize,
    /// real-orthonormal basis of the algebra closure, acting on the original
    /// space
    closure: Vec<QuasilinearOp>,
    /// representatives whose classes form the orthonormal `K`-basis
    quotient_reps: Vec<QuasilinearOp>,
    /// real Gram matrix of the closure basis under `Re rho(A* B)`
    gram: DMatrix<f64>,
    /// `pi` of each input generator
    pi_generators: Vec<QuasilinearOp>,
    /// coordinates of the cyclic vector (the class of the identity)
    cyclic: KVector,
    state: StateFunctional,
}

/// Numerical quality metrics of a constructed representation.
#[derive(Debug, Clone, Copy, Default)]
pub struct GnsDiagnostics {
    pub reproduction_residual: f64,
    pub multiplicativity_residual: f64,
    pub star_residual: f64,
    pub contraction_excess: f64,
    pub cyclic_span_dim: usize,
}

impl GnsResult {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_dim
    }

    pub fn closure_dim_real(&self) -> usize {
        self.closure.len()
    }

    pub fn closure(&self) -> &[QuasilinearOp] {
        &self.closure
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn cyclic_vector(&self) -> &KVector {
        &self.cyclic
    }

    pub fn pi_generators(&self) -> &[QuasilinearOp] {
        &self.pi_generators
    }

    pub fn quotient_reps(&self) -> &[QuasilinearOp] {
        &self.quotient_reps
    }

    /// The quotient inner product `<[A], [B]> = rho(A* B)`.
    pub fn quotient_inner(&self, a: &QuasilinearOp, b: &QuasilinearOp) -> Result<Hypercomplex> {
        self.state.eval(&a.adjoint().compose(b)?)
    }

    /// Coordinates of the class of `a` on the quotient `K`-basis.
    pub fn quotient_coords(&self, a: &QuasilinearOp) -> Result<KVector> {
        let coords = self
            .quotient_reps
            .iter()
            .map(|b| self.quotient_inner(b, a))
            .collect::<Result<Vec<_>>>()?;
        KVector::new(coords)
    }

    /// The representation `pi(a)` of an algebra element as an operator on
    /// the quotient: the class map `[B] -> [a B]` expressed on the real
    /// basis of quotient coordinates. It is right-linear exactly when `a`
    /// is.
    pub fn represent(&self, a: &QuasilinearOp) -> Result<QuasilinearOp> {
        let d = self.quotient_dim;
        let dim = self.algebra.dim();
        let big = d * dim;
        let mut rep = DMatrix::zeros(big, big);
        for (mu, b) in self.quotient_reps.iter().enumerate() {
            for v in 0..dim {
                let gen = Hypercomplex::generator(self.algebra, v);
                let translated = b.right_scalar_op(&gen);
                let image = a.compose(&translated)?;
                let coords = self.quotient_coords(&image)?;
                rep.set_column(mu * dim + v, &coords.to_real());
            }
        }
        QuasilinearOp::from_rep(self.algebra, d, rep)
    }

    /// Reproduction, multiplicativity, star-preservation, contraction and
    /// cyclicity metrics computed over the closure basis.
    pub fn diagnostics(&self) -> Result<GnsDiagnostics> {
        let mut diag = GnsDiagnostics::default();
        let sample: Vec<&QuasilinearOp> = self.closure.iter().take(12).collect();
        for a in &self.closure {
            let pa = self.represent(a)?;
            let lhs = inner(&self.cyclic, &pa.apply(&self.cyclic)?)?;
            let rho = self.state.eval(a)?;
            diag.reproduction_residual = diag.reproduction_residual.max(lhs.dist(&rho));
            let star = self.represent(&a.adjoint())?;
            diag.star_residual = diag
                .star_residual
                .max(star.sub(&pa.adjoint())?.operator_norm());
            diag.contraction_excess = diag
                .contraction_excess
                .max(pa.operator_norm() - a.operator_norm());
        }
        for a in &sample {
            let pa = self.represent(a)?;
            for b in &sample {
                let pb = self.represent(b)?;
                let pab = self.represent(&a.compose(b)?)?;
                diag.multiplicativity_residual = diag
                    .multiplicativity_residual
                    .max(pab.sub(&pa.compose(&pb)?)?.operator_norm());
            }
        }
        // cyclicity: the orbit of the cyclic vector spans the quotient
        let dim = self.algebra.dim();
        let big = self.quotient_dim * dim;
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for a in &self.closure {
            let v = self.represent(a)?.apply(&self.cyclic)?;
            cols.push(v.to_real());
        }
        let mut m = DMatrix::zeros(big, cols.len());
        for (c, col) in cols.iter().enumerate() {
            m.set_column(c, col);
        }
        diag.cyclic_span_dim = m.svd(false, false).rank(1e-8);
        Ok(diag)
    }
}

/// Default cap on the real dimension of the algebra closure.
pub const GNS_DIM_CAP: usize = 512;

/// Builds the algebra closure of the given seeds (words in the seeds),
/// orthonormalized over the reals.
fn algebra_closure(
    algebra: Algebra,
    n: usize,
    seeds: &[QuasilinearOp],
    cap: usize,
) -> Result<Vec<QuasilinearOp>> {
    let flat = |op: &QuasilinearOp| -> DVector<f64> {
        DVector::from_column_slice(op.rep().as_slice())
    };
    let mut basis: Vec<QuasilinearOp> = Vec::new();
    let mut basis_flat: Vec<DVector<f64>> = Vec::new();
    let push = |op: &QuasilinearOp,
                basis: &mut Vec<QuasilinearOp>,
                basis_flat: &mut Vec<DVector<f64>>|
     -> Result<bool> {
        let mut v = flat(op);
        let scale = v.norm().max(1e-300);
        for _ in 0..2 {
            for q in basis_flat.iter() {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        if v.norm() <= 1e-10 * scale {
            return Ok(false);
        }
        if basis.len() + 1 > cap {
            return Err(Error::ClosureCap {
                dim: basis.len() + 1,
                cap,
            });
        }
        let vn = v.norm();
        let rep = DMatrix::from_column_slice(op.rep().nrows(), op.rep().ncols(), (&v / vn).as_slice());
        basis.push(QuasilinearOp::from_rep(algebra, n, rep)?);
        basis_flat.push(v / vn);
        Ok(true)
    };
    for s in seeds {
        push(s, &mut basis, &mut basis_flat)?;
    }
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for s in seeds {
            for b in &snapshot {
                let prod = s.compose(b)?;
                if push(&prod, &mut basis, &mut basis_flat)? {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(basis)
}

/// The GNS construction: closure, Gram form, quotient by the null space,
/// orthonormal `K`-basis, representation and cyclic vector.
///
/// Over the octonions the generator set is restricted to the identity plus a
/// single selfadjoint element, where the singly-generated calculus is
/// unambiguous.
pub fn gns_build(
    generators: &[QuasilinearOp],
    rho: &StateFunctional,
    cap: usize,
) -> Result<GnsResult> {
    let algebra = rho.algebra();
    let n = rho.module_dim();
    if algebra == Algebra::Octonion {
        let nontrivial: Vec<&QuasilinearOp> = generators
            .iter()
            .filter(|g| {
                let eye = QuasilinearOp::identity(algebra, n);
                g.sub(&eye).map(|d| d.operator_norm() > 1e-12).unwrap_or(true)
            })
            .collect();
        if nontrivial.len() > 1 || nontrivial.iter().any(|g| !g.is_selfadjoint()) {
            return Err(Error::InvalidParameter(
                "octonion construction accepts the identity plus one selfadjoint generator".into(),
            ));
        }
    }
    // full module closure: words in the generators, adjoints and both-sided
    // scalar actions
    let mut seeds: Vec<QuasilinearOp> = vec![QuasilinearOp::identity(algebra, n)];
    for g in generators {
        seeds.push(g.clone());
        seeds.push(g.adjoint());
    }
    let mut rl_seeds = seeds.clone();
    for v in 1..algebra.dim() {
        let gen = Hypercomplex::generator(algebra, v);
        let left = QuasilinearOp::scalar_left(algebra, n, &gen);
        if algebra == Algebra::Quaternion {
            // left scalar actions are right-linear over the quaternions
            rl_seeds.push(left.clone());
        }
        seeds.push(left);
        seeds.push(QuasilinearOp::scalar_right(algebra, n, &gen));
    }
    let closure = algebra_closure(algebra, n, &seeds, cap)?;
    // the right-linear subalgebra carries the quotient basis
    let rl_closure = algebra_closure(algebra, n, &rl_seeds, cap)?;
    let dim_real = closure.len();
    // real Gram of the closure basis
    let mut gram = DMatrix::zeros(dim_real, dim_real);
    for (i, a) in closure.iter().enumerate() {
        for (j, b) in closure.iter().enumerate() {
            gram[(i, j)] = rho.eval(&a.adjoint().compose(b)?)?.re();
        }
    }
    let sym = (&gram + gram.transpose()) * 0.5;
    let (gram_vals, _) = crate::linalg::symmetric_eigen(&sym);
    let lmax = gram_vals.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let min = gram_vals.iter().fold(f64::INFINITY, |m, l| m.min(*l));
    if min < -1e-10 * lmax.max(1.0) {
        return Err(Error::SignedGram { value: min });
    }
    let quo_inner = |a: &QuasilinearOp, b: &QuasilinearOp| -> Result<Hypercomplex> {
        rho.eval(&a.adjoint().compose(b)?)
    };
    // seminorm projection onto the right-linear class span, used to keep
    // every quotient representative right-linear
    let mut rl_gram = DMatrix::zeros(rl_closure.len(), rl_closure.len());
    for (i, a) in rl_closure.iter().enumerate() {
        for (j, b) in rl_closure.iter().enumerate() {
            rl_gram[(i, j)] = quo_inner(a, b)?.re();
        }
    }
    let (rl_vals, rl_vecs) = crate::linalg::symmetric_eigen(&rl_gram);
    let rl_lmax = rl_vals.amax();
    let rl_pinv = {
        let mut acc = DMatrix::zeros(rl_closure.len(), rl_closure.len());
        for (i, l) in rl_vals.iter().enumerate() {
            if *l > 1e-10 * rl_lmax.max(1e-300) {
                let v = DVector::from(rl_vecs.column(i).clone_owned());
                acc += (&v * v.transpose()) / *l;
            }
        }
        acc
    };
    let rl_project = |x: &QuasilinearOp| -> Result<QuasilinearOp> {
        let mut rhs = DVector::zeros(rl_closure.len());
        for (i, e) in rl_closure.iter().enumerate() {
            rhs[i] = quo_inner(e, x)?.re();
        }
        let weights = &rl_pinv * rhs;
        let mut acc = QuasilinearOp::zero(algebra, n);
        for (i, e) in rl_closure.iter().enumerate() {
            acc = acc.add(&e.scale_real(weights[i]))?;
        }
        Ok(acc)
    };
    // quotient: classes of the closure modulo the Gram null space. The
    // orthonormal K-basis is built greedily from the right-linear closure:
    // only right-linear representatives obey the right-coefficient
    // expansion that the coordinate formalism relies on.
    let mut quotient_reps: Vec<QuasilinearOp> = Vec::new();
    for cand in rl_closure.iter() {
        let mut work = cand.clone();
        for _ in 0..2 {
            for b in &quotient_reps {
                let coeff = quo_inner(b, &work)?;
                // the class shift [b coeff] carried by a right-linear
                // representative
                let shift = rl_project(&b.right_scalar_op(&coeff))?;
                work = work.sub(&shift)?;
            }
        }
        let len2 = quo_inner(&work, &work)?.re();
        if len2 > 1e-8 {
            let unit = work.scale_real(1.0 / len2.sqrt());
            quotient_reps.push(unit);
        }
    }
    let quotient_dim = quotient_reps.len();
    if quotient_dim == 0 {
        return Err(Error::EmptyInput("GNS quotient"));
    }
    // completeness: every closure class must expand over the basis
    for cand in &closure {
        let mut work = cand.clone();
        for _ in 0..2 {
            for b in &quotient_reps {
                let coeff = quo_inner(b, &work)?;
                work = work.sub(&b.right_scalar_op(&coeff))?;
            }
        }
        let len2 = quo_inner(&work, &work)?.re();
        if len2 > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "the right-linear classes do not exhaust the quotient (residual {len2:.3e})"
            )));
        }
    }
    let mut result = GnsResult {
        algebra,
        quotient_dim,
        closure,
        quotient_reps,
        gram,
        pi_generators: Vec::new(),
        cyclic: KVector::zeros(algebra, quotient_dim),
        state: rho.clone(),
    };
    result.cyclic = result.quotient_coords(&QuasilinearOp::identity(algebra, n))?;
    result.pi_generators = generators
        .iter()
        .map(|g| result.represent(g))
        .collect::<Result<Vec<_>>>()?;
    Ok(result)
}

/// A unitary equivalence between a constructed representation and a concrete
/// cyclic one.
#[derive(Debug, Clone)]
pub struct GnsEquivalence {
    /// real matrix mapping quotient coordinates to the concrete space
    pub u: DMatrix<f64>,
    pub isometry_defect: f64,
    pub intertwining_residual: f64,
    pub cyclic_match: f64,
}

/// Builds the intertwiner `[B] -> pi'(B) x` and measures how far it is from
/// a unitary equivalence. The concrete representation is supplied as a map
/// from algebra elements (operators on the original space) to operators on
/// the concrete representation space.
pub fn gns_equivalence<F>(
    result: &GnsResult,
    pi_prime: F,
    x: &KVector,
) -> Result<GnsEquivalence>
where
    F: Fn(&QuasilinearOp) -> Result<QuasilinearOp>,
{
    let algebra = result.algebra();
    let dim = algebra.dim();
    // the state must match w_x . pi'
    let mut mismatch: f64 = 0.0;
    for a in result.closure().iter().take(16) {
        let lhs = inner(x, &pi_prime(a)?.apply(x)?)?;
        let rhs = result.state.eval(a)?;
        mismatch = mismatch.max(lhs.dist(&rhs));
    }
    if mismatch > 1e-8 {
        return Err(Error::StateMismatch { residual: mismatch });
    }
    let d = result.quotient_dim();
    let target_big = x.len() * dim;
    let mut u = DMatrix::zeros(target_big, d * dim);
    for (mu, b) in result.quotient_reps().iter().enumerate() {
        for v in 0..dim {
            let gen = Hypercomplex::generator(algebra, v);
            // the class [B i_v] maps to pi'(B i_v) x = (pi'(B) x) i_v
            let op = b.right_scalar_op(&gen);
            let col = pi_prime(&op)?.apply(x)?.to_real();
            u.set_column(mu * dim + v, &col);
        }
    }
    let eye = DMatrix::identity(d * dim, d * dim);
    let isometry_defect = (u.transpose() * &u - eye).norm();
    let mut intertwining_residual: f64 = 0.0;
    for a in result.closure().iter().take(12) {
        let pa = result.represent(a)?;
        let concrete = pi_prime(a)?;
        let diff = concrete.rep() * &u - &u * pa.rep();
        intertwining_residual = intertwining_residual.max(diff.norm());
    }
    let cyclic_match = (&u * result.cyclic_vector().to_real() - x.to_real()).norm();
    Ok(GnsEquivalence {
        u,
        isometry_defect,
        intertwining_residual,
        cyclic_match,
    })
}

// ---------------------------------------------------------------------------
// discrete K-valued measures
// ---------------------------------------------------------------------------

/// A purely atomic `K`-valued measure on a finite point set: one real weight
/// `mu_{v,l}` per point and generator pair `(v, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeasure {
    pub algebra: Algebra,
    pub labels: Vec<String>,
    /// `weights[p][(v, l)]`
    pub weights: Vec<DMatrix<f64>>,
}

impl KMeasure {
    pub fn new(algebra: Algebra, labels: Vec<String>, weights: Vec<DMatrix<f64>>) -> Result<Self> {
        let dim = algebra.dim();
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: weights.len(),
            });
        }
        for w in &weights {
            if w.nrows() != dim || w.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: w.nrows(),
                });
            }
        }
        Ok(KMeasure {
            algebra,
            labels,
            weights,
        })
    }

    pub fn scale(&self, s: f64) -> KMeasure {
        KMeasure {
            algebra: self.algebra,
            labels: self.labels.clone(),
            weights: self.weights.iter().map(|w| w * s).collect(),
        }
    }

    /// Integral of a `K`-valued table: each point contributes
    /// `((f_v i_v) conj(i_v)) i_l mu_{v,l}`, with the components of `f`
    /// recovered by the closed-form extraction identities.
    pub fn integrate(&self, table: &[Hypercomplex]) -> Result<Hypercomplex> {
        if table.len() != self.labels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.labels.len(),
                got: table.len(),
            });
        }
        let dim = self.algebra.dim();
        let mut acc = Hypercomplex::zero(self.algebra);
        for (f, w) in table.iter().zip(self.weights.iter()) {
            let comps = f.component_extract();
            for v in 0..dim {
                let gv = Hypercomplex::generator(self.algebra, v);
                for l in 0..dim {
                    let mu = w[(v, l)];
                    if mu == 0.0 {
                        continue;
                    }
                    let gl = Hypercomplex::generator(self.algebra, l);
                    let term = gv
                        .scale(comps[v])
                        .try_mul(&gv.conj())?
                        .try_mul(&gl)?
                        .scale(mu);
                    acc = acc + term;
                }
            }
        }
        Ok(acc)
    }

    /// Value on the indicator of a single point.
    pub fn atom(&self, p: usize) -> Hypercomplex {
        let dim = self.algebra.dim();
        let mut acc = Hypercomplex::zero(self.algebra);
        for l in 0..dim {
            acc = acc + Hypercomplex::generator(self.algebra, l).scale(self.weights[p][(0, l)]);
        }
        acc
    }

    /// Variation over a subset of points: the finest partition attains the
    /// supremum, so it is the sum of the atom norms.
    pub fn variation(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|p| self.atom(*p).norm()).sum()
    }

    pub fn total_variation(&self) -> f64 {
        (0..self.labels.len()).map(|p| self.atom(p).norm()).sum()
    }
}

/// Solves `lambda(chi_U) = mu(f chi_U)` pointwise for the density `f` and
/// re-verifies the identity on every singleton.
pub fn radon_nikodym(lambda: &KMeasure, mu: &KMeasure) -> Result<Vec<Hypercomplex>> {
    if lambda.labels != mu.labels || lambda.algebra != mu.algebra {
        return Err(Error::InvalidParameter("measures on different spaces".into()));
    }
    let algebra = mu.algebra;
    let dim = algebra.dim();
    let mut density = Vec::with_capacity(mu.labels.len());
    for p in 0..mu.labels.len() {
        let target = lambda.atom(p);
        // absolute continuity: lambda must vanish where mu has no mass
        let mass = mu.weights[p].norm();
        if mass <= 1e-14 {
            if target.norm() > 1e-12 {
                return Err(Error::AbsoluteContinuity { point: p });
            }
            density.push(Hypercomplex::zero(algebra));
            continue;
        }
        // mu(f chi_p)_l = sum_v f_v mu_{v,l}
        let mut m = DMatrix::zeros(dim, dim);
        for l in 0..dim {
            for v in 0..dim {
                m[(l, v)] = mu.weights[p][(v, l)];
            }
        }
        let rhs = DVector::from_iterator(dim, (0..dim).map(|l| target.coeff(l)));
        let svd = m.clone().svd(true, true);
        let sol = svd
            .solve(&rhs, RANK_TOL * mass)
            .map_err(|_| Error::AbsoluteContinuity { point: p })?;
        let f = Hypercomplex::new(algebra, sol.as_slice())?;
        // verify the singleton identity
        let mut check = DVector::zeros(dim);
        for l in 0..dim {
            let mut acc = 0.0;
            for v in 0..dim {
                acc += m[(l, v)] * f.coeff(v);
            }
            check[l] = acc;
        }
        if (&check - &rhs).norm() > 1e-11 * (1.0 + rhs.norm()) {
            return Err(Error::AbsoluteContinuity { point: p });
        }
        density.push(f);
    }
    Ok(density)
}

// ---------------------------------------------------------------------------
// interpolation
// ---------------------------------------------------------------------------

fn check_orthonormal(xs: &[KVector]) -> Result<()> {
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            let g = inner(a, b)?;
            let want = if i == j { 1.0 } else { 0.0 };
            if (g.re() - want).abs() > 1e-10 || g.im_norm() > 1e-10 {
                return Err(Error::NotOrthonormal);
            }
        }
    }
    Ok(())
}

/// The norm-bounded interpolation operator satisfying `T x_j = z_j` and
/// `|T| <= sqrt(n) r <= sqrt(2n) r`.
///
/// The plain form is `T(u) = sum_j <E u; x_j> z_j` with the coefficients
/// acting from the left. With `symmetrize` the right-module expansion
/// `T(u) = sum_j z_j <x_j; E u>` is used instead and the correction
/// `T* (I - E)` is added; when a selfadjoint operator interpolates the data
/// the result is selfadjoint.
pub fn interpolation_operator(
    xs: &[KVector],
    zs: &[KVector],
    symmetrize: bool,
) -> Result<QuasilinearOp> {
    if xs.len() != zs.len() || xs.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: zs.len(),
        });
    }
    check_orthonormal(xs)?;
    let algebra = xs[0].algebra();
    let n = xs[0].len();
    let dim = algebra.dim();
    let e = crate::projections::projection_onto(xs)?;
    let big = n * dim;
    let mut rep = DMatrix::zeros(big, big);
    for col in 0..big {
        let mut flat = DVector::zeros(big);
        flat[col] = 1.0;
        let u = KVector::from_real(algebra, &flat)?;
        let eu = e.apply(&u)?;
        let mut out = KVector::zeros(algebra, n);
        for (x, z) in xs.iter().zip(zs.iter()) {
            if symmetrize {
                out = out + z.scale_right(&inner(x, &eu)?)?;
            } else {
                out = out + z.scale_left(&inner(&eu, x)?)?;
            }
        }
        rep.set_column(col, &out.to_real());
    }
    let t = QuasilinearOp::from_rep(algebra, n, rep)?;
    if !symmetrize {
        return Ok(t);
    }
    let eye = QuasilinearOp::identity(algebra, n);
    let complement = eye.sub(e.op())?;
    t.add(&t.adjoint().compose(&complement)?)
}

/// A complex matrix stored as a pair of real matrices.
#[derive(Debug, Clone)]
struct CMat {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl CMat {
    fn zeros(r: usize, c: usize) -> Self {
        CMat {
            re: DMatrix::zeros(r, c),
            im: DMatrix::zeros(r, c),
        }
    }

    fn mul(&self, rhs: &CMat) -> CMat {
        CMat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn adjoint(&self) -> CMat {
        CMat {
            re: self.re.transpose(),
            im: -self.im.transpose(),
        }
    }

    fn conj(&self) -> CMat {
        CMat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn add(&self, rhs: &CMat) -> CMat {
        CMat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }

    /// Real embedding `[[Re, -Im], [Im, Re]]`.
    fn embed(&self) -> DMatrix<f64> {
        let n = self.re.nrows();
        let c = self.re.ncols();
        let mut out = DMatrix::zeros(2 * n, 2 * c);
        out.view_mut((0, 0), (n, c)).copy_from(&self.re);
        out.view_mut((0, c), (n, c)).copy_from(&(-&self.im));
        out.view_mut((n, 0), (n, c)).copy_from(&self.im);
        out.view_mut((n, c), (n, c)).copy_from(&self.re);
        out
    }

    fn unembed(e: &DMatrix<f64>) -> CMat {
        let n = e.nrows() / 2;
        let c = e.ncols() / 2;
        CMat {
            re: e.view((0, 0), (n, c)).into_owned(),
            im: e.view((n, 0), (n, c)).into_owned(),
        }
    }

    /// Applies a real spectral function to a hermitian matrix.
    fn hermitian_fn<F: Fn(f64) -> f64>(&self, f: F) -> CMat {
        CMat::unembed(&crate::linalg::symmetric_fn(&self.embed(), f))
    }
}

/// Complexification of `K` along the slice axis: an orthonormal basis of
/// pairs `(u_b, M u_b)` so that left multiplication by `M` becomes the
/// complex unit.
fn slice_pairs(algebra: Algebra, m: &Hypercomplex) -> Result<Vec<(Hypercomplex, Hypercomplex)>> {
    let dim = algebra.dim();
    let mut taken: Vec<Hypercomplex> = Vec::new();
    let mut pairs = Vec::new();
    let project_out = |z: &Hypercomplex, taken: &[Hypercomplex]| -> Hypercomplex {
        let mut v = *z;
        for t in taken {
            let c: f64 = (0..v.dim()).map(|w| t.coeff(w) * v.coeff(w)).sum();
            v = v + t.scale(-c);
        }
        v
    };
    for cand in 0..dim {
        let z = Hypercomplex::generator(algebra, cand);
        let v = project_out(&z, &taken);
        if v.norm() < 1e-8 {
            continue;
        }
        let u = v.scale(1.0 / v.norm());
        let mu = m.try_mul(&u)?;
        let mu = project_out(&mu, &taken);
        let mu = mu.scale(1.0 / mu.norm().max(1e-300));
        taken.push(u);
        taken.push(mu);
        pairs.push((u, mu));
        if taken.len() == dim {
            break;
        }
    }
    Ok(pairs)
}

/// `n x p` complex coordinates of a vector along the slice pairs.
fn complexify(
    x: &KVector,
    pairs: &[(Hypercomplex, Hypercomplex)],
) -> CMat {
    let n = x.len();
    let p = pairs.len();
    let mut out = CMat::zeros(n, p);
    for (l, coord) in x.coords().iter().enumerate() {
        for (b, (u, mu)) in pairs.iter().enumerate() {
            let mut re = 0.0;
            let mut im = 0.0;
            for w in 0..coord.dim() {
                re += u.coeff(w) * coord.coeff(w);
                im += mu.coeff(w) * coord.coeff(w);
            }
            out.re[(l, b)] = re;
            out.im[(l, b)] = im;
        }
    }
    out
}

/// Unitary interpolation `U x_j = y_j` realized as `U = exp(M S)` with a
/// selfadjoint right-linear generator `S` backed by a real symmetric
/// coordinate matrix.
///
/// Along the slice of `M` the reachable unitaries are the symmetric unitary
/// complex matrices; the generator is recovered by solving the
/// conjugate-augmented linear system for the symmetric action, taking its
/// unitary polar part, and reading the angles off the joint spectral data of
/// its real and imaginary parts. Data that no such unitary can interpolate
/// is rejected with the final residual check.
pub fn unitary_interpolate(
    xs: &[KVector],
    ys: &[KVector],
    m: &Hypercomplex,
) -> Result<(QuasilinearOp, QuasilinearOp)> {
    check_unit_imaginary(m)?;
    check_orthonormal(xs)?;
    check_orthonormal(ys)?;
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let algebra = xs[0].algebra();
    let n = xs[0].len();
    let pairs = slice_pairs(algebra, m)?;
    let p = pairs.len();
    // assemble the least-squares system for Z with Z X_j = Y_j and
    // Z conj(Y_j) = conj(X_j); the solution set is transpose-invariant, so
    // the minimal-norm solution is symmetric
    let mut lhs_cols: Vec<(DVector<f64>, DVector<f64>)> = Vec::new(); // (re, im) of input columns
    let mut rhs_cols: Vec<(DVector<f64>, DVector<f64>)> = Vec::new();
    for (x, y) in xs.iter().zip(ys.iter()) {
        let cx = complexify(x, &pairs);
        let cy = complexify(y, &pairs);
        for b in 0..p {
            lhs_cols.push((
                DVector::from(cx.re.column(b).clone_owned()),
                DVector::from(cx.im.column(b).clone_owned()),
            ));
            rhs_cols.push((
                DVector::from(cy.re.column(b).clone_owned()),
                DVector::from(cy.im.column(b).clone_owned()),
            ));
            // conjugate pair
            lhs_cols.push((
                DVector::from(cy.re.column(b).clone_owned()),
                DVector::from(-cy.im.column(b).clone_owned()),
            ));
            rhs_cols.push((
                DVector::from(cx.re.column(b).clone_owned()),
                DVector::from(-cx.im.column(b).clone_owned()),
            ));
        }
    }
    // unknowns: Re Z then Im Z, column-major
    let unknowns = 2 * n * n;
    let rows = 2 * n * lhs_cols.len();
    let mut system = DMatrix::zeros(rows, unknowns);
    let mut rhs = DVector::zeros(rows);
    for (eq, ((cre, cim), (dre, dim_))) in lhs_cols.iter().zip(rhs_cols.iter()).enumerate() {
        for r in 0..n {
            let re_row = eq * 2 * n + r;
            let im_row = eq * 2 * n + n + r;
            for k in 0..n {
                // (Re Z)_{rk}: contributes c_re[k] to the real part and
                // c_im[k] to the imaginary part
                system[(re_row, k * n + r)] += cre[k];
                system[(im_row, k * n + r)] += cim[k];
                // (Im Z)_{rk}
                system[(re_row, n * n + k * n + r)] -= cim[k];
                system[(im_row, n * n + k * n + r)] += cre[k];
            }
            rhs[re_row] = dre[r];
            rhs[im_row] = dim_[r];
        }
    }
    let svd = system.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut z = CMat::zeros(n, n);
    for k in 0..n {
        for r in 0..n {
            z.re[(r, k)] = sol[k * n + r];
            z.im[(r, k)] = sol[n * n + k * n + r];
        }
    }
    // clean the symmetry and take the unitary polar part
    let z = CMat {
        re: (&z.re + z.re.transpose()) * 0.5,
        im: (&z.im + z.im.transpose()) * 0.5,
    };
    let gram = z.adjoint().mul(&z);
    let gram_embed = gram.embed();
    let (gram_vals, gram_vecs) = crate::linalg::symmetric_eigen(&gram_embed);
    let lam_max = gram_vals.amax();
    let cut = 1e-10 * lam_max.max(1e-300);
    let inv_root = gram.hermitian_fn(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
    // symmetric unitary completion on the kernel of Z: pair each kernel
    // direction b with its conjugate, W = sum conj(b) conj(b)^T
    let mut kernel: Vec<(DVector<f64>, DVector<f64>)> = Vec::new();
    for (i, l) in gram_vals.iter().enumerate() {
        if *l > cut {
            continue;
        }
        let w = gram_vecs.column(i);
        let mut vre = DVector::from_iterator(n, (0..n).map(|r| w[r]));
        let mut vim = DVector::from_iterator(n, (0..n).map(|r| w[n + r]));
        // project out the complex span of the accepted kernel directions
        for (bre, bim) in &kernel {
            // c = <b, v> complex
            let cre = bre.dot(&vre) + bim.dot(&vim);
            let cim = bre.dot(&vim) - bim.dot(&vre);
            let delta_re = bre * cre - bim * cim;
            let delta_im = bre * cim + bim * cre;
            vre -= delta_re;
            vim -= delta_im;
        }
        let norm = (vre.norm_squared() + vim.norm_squared()).sqrt();
        if norm > 0.5 {
            let mut vre = vre / norm;
            let mut vim = vim / norm;
            // canonical phase: the largest-modulus entry is made real and
            // positive, so the completion reduces to the identity wherever
            // it can
            let mut best = 0usize;
            let mut best_mag = -1.0f64;
            for r in 0..n {
                let mag = vre[r] * vre[r] + vim[r] * vim[r];
                if mag > best_mag {
                    best_mag = mag;
                    best = r;
                }
            }
            let mag = best_mag.sqrt().max(1e-300);
            let (pre, pim) = (vre[best] / mag, vim[best] / mag);
            // multiply by conj(phase)
            let new_re = &vre * pre + &vim * pim;
            let new_im = &vim * pre - &vre * pim;
            vre = new_re;
            vim = new_im;
            kernel.push((vre, vim));
        }
    }
    let mut completion = CMat::zeros(n, n);
    for (bre, bim) in &kernel {
        // conj(b) conj(b)^T
        completion.re += bre * bre.transpose() - bim * bim.transpose();
        completion.im += -(bre * bim.transpose()) - bim * bre.transpose();
    }
    let u_p = z.mul(&inv_root).add(&completion);
    // unitarity of the completed polar part
    let defect = u_p
        .adjoint()
        .mul(&u_p)
        .add(&CMat {
            re: -DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        })
        .norm();
    if defect > 1e-8 {
        return Err(Error::InvalidParameter(
            "interpolation data admits no slice-compatible unitary".into(),
        ));
    }
    // angles from the joint spectral data of the (real, symmetric) parts
    let c_part = (&u_p.re + u_p.re.transpose()) * 0.5;
    let s_part = (&u_p.im + u_p.im.transpose()) * 0.5;
    let gamma = 0.618_033_988_749_894_9_f64;
    let joint = &c_part + &s_part * gamma;
    let (_, joint_vecs) = crate::linalg::symmetric_eigen(&joint);
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        let v = DVector::from(joint_vecs.column(i).clone_owned());
        let c = (v.transpose() * &c_part * &v)[(0, 0)];
        let s = (v.transpose() * &s_part * &v)[(0, 0)];
        let theta = s.atan2(c);
        b += (&v * v.transpose()) * theta;
    }
    let s_op = QuasilinearOp::from_real_matrix(algebra, &((&b + b.transpose()) * 0.5));
    let u = exp_group(&s_op, m, 1.0)?;
    let mut residual: f64 = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        residual = residual.max(u.apply(x)?.dist(y));
    }
    if residual > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "interpolation data is not compatible with the slice of M (residual {residual:.3e})"
        )));
    }
    Ok((u, s_op))
}
