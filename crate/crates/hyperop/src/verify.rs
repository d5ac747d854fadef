//! Seeded property-verification suites.
//!
//! Every suite runs the invariant set of one module over reproducible random
//! data and reports per-property pass counts, worst residuals and the pinned
//! tolerances. All randomness flows from a single 64-bit seed through a
//! counter-based generator, so a report is a pure function of
//! `(suite, seed, trials)`.

use crate::algebra::{Algebra, Hypercomplex};
use crate::calculus::{self, pos_neg_split, sqrt_positive, PolySpec};
use crate::error::{Error, Result};
use crate::kmodule::{self, inner, real_inner, KVector};
use crate::operator::QuasilinearOp;
use crate::projections::{
    join, meet, ordering_check, projection_onto, range_projection, GradedProjection,
};
use crate::sample;
use crate::spectral::{
    resolvent, spectral_decomposition, spectral_integral, spectral_integral_real,
    spectral_radius, spectrum_left_diagonal, spectrum_selfadjoint,
};
use crate::states::{
    gns_build, jordan_decompose, lattice_join, pos_part, KMeasure, StateFunctional,
    WeightFunctional, GNS_DIM_CAP,
};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Outcome of one verified property.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    /// the mathematical law being exercised
    pub law: String,
    pub checks: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Report of a full suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyRecord>,
    pub pass: bool,
}

impl VerifyReport {
    fn conclude(suite: &str, seed: u64, trials: usize, properties: Vec<PropertyRecord>) -> Self {
        let pass = properties.iter().all(|p| p.pass);
        VerifyReport {
            suite: suite.to_string(),
            seed,
            trials,
            properties,
            pass,
        }
    }
}

struct Prop {
    name: &'static str,
    law: &'static str,
    tolerance: f64,
    checks: u64,
    max_residual: f64,
    failed: bool,
}

impl Prop {
    fn new(name: &'static str, law: &'static str, tolerance: f64) -> Self {
        Prop {
            name,
            law,
            tolerance,
            checks: 0,
            max_residual: 0.0,
            failed: false,
        }
    }

    fn check(&mut self, residual: f64) {
        self.checks += 1;
        if !residual.is_finite() {
            self.failed = true;
            self.max_residual = f64::INFINITY;
            return;
        }
        self.max_residual = self.max_residual.max(residual);
        if residual > self.tolerance {
            self.failed = true;
        }
    }

    fn require(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failed = true;
            self.max_residual = f64::INFINITY;
        }
    }

    fn finish(self) -> PropertyRecord {
        PropertyRecord {
            name: self.name.to_string(),
            law: self.law.to_string(),
            checks: self.checks,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            pass: !self.failed,
        }
    }
}

pub const SUITE_NAMES: [&str; 7] = [
    "algebra",
    "kmodule",
    "operator",
    "spectral",
    "calculus",
    "projections",
    "states",
];

pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<VerifyReport> {
    let index = SUITE_NAMES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {name}")))?;
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0x9e3779b97f4a7c15));
    let props = match name {
        "algebra" => algebra_suite(trials, &mut rng)?,
        "kmodule" => kmodule_suite(trials, &mut rng)?,
        "operator" => operator_suite(trials, &mut rng)?,
        "spectral" => spectral_suite(trials, &mut rng)?,
        "calculus" => calculus_suite(trials, &mut rng)?,
        "projections" => projections_suite(trials, &mut rng)?,
        _ => states_suite(trials, &mut rng)?,
    };
    Ok(VerifyReport::conclude(name, seed, trials, props))
}

pub fn run_all(seed: u64, trials: usize) -> Result<Vec<VerifyReport>> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, seed, trials))
        .collect()
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

fn algebra_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let mut norm_mult = Prop::new("norm-multiplicativity", "|ab| = |a| |b|", 1e-13);
    let mut alternative = Prop::new(
        "alternativity",
        "(aa)b = a(ab) and (ba)a = b(aa)",
        1e-13,
    );
    let mut anti = Prop::new(
        "conjugation-anti-automorphism",
        "conj(ab) = conj(b) conj(a)",
        1e-13,
    );
    let mut powers = Prop::new("power-commutation", "z^m z^n = z^n z^m", 1e-13);
    let mut center = Prop::new("real-center", "real scalars commute with everything", 0.0);
    let mut witness = Prop::new(
        "octonion-associator-witness",
        "(ij)l = kl while i(jl) = -kl",
        0.0,
    );
    let mut extraction = Prop::new(
        "component-extraction",
        "closed-form identities recover the coordinates",
        1e-13,
    );

    for algebra in Algebra::both() {
        for _ in 0..trials {
            let a = sample::hypercomplex(algebra, rng);
            let b = sample::hypercomplex(algebra, rng);
            let scale = (a.norm() * b.norm()).max(1.0);
            norm_mult.check(((a * b).norm() - a.norm() * b.norm()).abs() / scale);
            alternative.check(((a * a) * b).dist(&(a * (a * b))) / scale.max(a.norm() * scale));
            alternative.check(((b * a) * a).dist(&(b * (a * a))) / scale.max(a.norm() * scale));
            anti.check((a * b).conj().dist(&(b.conj() * a.conj())) / scale);

            let zm = a.power(3);
            let zn = a.power(2);
            powers.check((zm * zn).dist(&(zn * zm)) / zm.norm().max(1.0) / zn.norm().max(1.0));

            let c = Hypercomplex::from_real(algebra, sample::coefficient(rng));
            center.check((c * a).dist(&(a * c)));

            let comps = a.component_extract();
            let mut worst: f64 = 0.0;
            for (v, got) in comps.iter().enumerate() {
                worst = worst.max((got - a.coeff(v)).abs());
            }
            extraction.check(worst / a.norm().max(1.0));
        }
    }
    {
        let o = Algebra::Octonion;
        let (i, j, l) = (
            Hypercomplex::generator(o, 1),
            Hypercomplex::generator(o, 2),
            Hypercomplex::generator(o, 4),
        );
        let kl = Hypercomplex::generator(o, 7);
        witness.check(((i * j) * l).dist(&kl));
        witness.check((i * (j * l)).dist(&-kl));
        witness.check((((i * j) * l - i * (j * l)).norm() - 2.0).abs());
    }

    Ok(vec![
        norm_mult.finish(),
        alternative.finish(),
        anti.finish(),
        powers.finish(),
        center.finish(),
        witness.finish(),
        extraction.finish(),
    ])
}

// ---------------------------------------------------------------------------
// kmodule
// ---------------------------------------------------------------------------

fn kmodule_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 2).max(10);
    let mut axioms = Prop::new(
        "scalar-product-axioms",
        "diagonal reality/positivity, conjugate symmetry, additivity, scaling laws",
        1e-12,
    );
    let mut cs = Prop::new(
        "cauchy-schwarz-vectors",
        "|<x;y>|^2 <= <x;x><y;y>",
        1e-12,
    );
    let mut equivalence = Prop::new(
        "orthogonality-equivalence",
        "K-orthogonality to a subspace = real orthogonality to its saturation",
        1e-10,
    );
    let mut norming = Prop::new(
        "norm-via-functionals",
        "the norming functional attains |x|; unit functionals never exceed it",
        1e-10,
    );

    for algebra in Algebra::both() {
        let n = 3;
        for _ in 0..trials {
            let x = sample::kvector(algebra, n, rng);
            let y = sample::kvector(algebra, n, rng);
            let z = sample::kvector(algebra, n, rng);
            let sxy = inner(&x, &y)?;
            let scale = (x.norm() * y.norm()).max(1.0);
            // diagonal is real and nonnegative
            let diag = inner(&x, &x)?;
            axioms.check(diag.im_norm() / diag.re().max(1.0));
            axioms.require(diag.re() >= 0.0);
            // conjugate symmetry
            axioms.check(sxy.dist(&inner(&y, &x)?.conj()) / scale);
            // additivity
            let lhs = inner(&(x.clone() + z.clone()), &y)?;
            axioms.check(lhs.dist(&(sxy + inner(&z, &y)?)) / scale.max(z.norm()));
            // real part is the Euclidean product
            axioms.check((sxy.re() - real_inner(&x, &y)?).abs() / scale);
            match algebra {
                Algebra::Quaternion => {
                    let a = sample::hypercomplex(algebra, rng);
                    let b = sample::hypercomplex(algebra, rng);
                    let lhs = inner(&x.scale_right(&a)?, &y.scale_right(&b)?)?;
                    let rhs = a.conj().try_mul(&sxy)?.try_mul(&b)?;
                    axioms.check(lhs.dist(&rhs) / (scale * a.norm().max(1.0) * b.norm().max(1.0)));
                }
                Algebra::Octonion => {
                    let a = sample::hypercomplex(algebra, rng);
                    let lhs = inner(&x.scale_right(&a)?, &x)?;
                    let rhs = a.conj().scale(inner(&x, &x)?.re());
                    axioms.check(lhs.dist(&rhs) / (x.norm() * x.norm() * a.norm()).max(1.0));
                }
            }
            // Cauchy-Schwarz with additive slack
            let gap = sxy.norm_sqr() - diag.re() * inner(&y, &y)?.re();
            cs.check(gap.max(0.0) / scale.powi(2).max(1.0));

            // orthogonality equivalence on a random 1-dim subspace
            let basis = kmodule::gram_schmidt_k(&[sample::kvector(algebra, n, rng)])?;
            let sat = kmodule::saturated_real_basis(&basis)?;
            let proj = kmodule::project_real(&sat, &x.to_real());
            let perp = KVector::from_real(algebra, &(x.to_real() - proj))?;
            equivalence.check(inner(&basis[0], &perp)?.norm() / x.norm().max(1.0));
            // and conversely a K-orthogonal vector is real-orthogonal to all
            // generator translates
            let mut worst: f64 = 0.0;
            for w in 0..algebra.dim() {
                let t = basis[0]
                    .scale_right(&Hypercomplex::generator(algebra, w))?
                    .to_real();
                worst = worst.max(t.dot(&perp.to_real()).abs());
            }
            equivalence.check(worst / x.norm().max(1.0));

            // norming functional
            let nx = x.norm();
            if nx > 1e-6 {
                let g = kmodule::KFunctional::from_representer(x.scale_real(1.0 / nx));
                norming.check((g.eval(&x)?.norm() - nx).abs() / nx.max(1.0));
                norming.check((g.norm() - 1.0).abs());
                let f = kmodule::KFunctional::from_representer(sample::unit_kvector(algebra, n, rng));
                norming.require(f.eval(&x)?.norm() <= nx * (1.0 + 1e-12));
            }
        }
    }
    Ok(vec![
        axioms.finish(),
        cs.finish(),
        equivalence.finish(),
        norming.finish(),
    ])
}

// ---------------------------------------------------------------------------
// operator
// ---------------------------------------------------------------------------

fn operator_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 4).max(10);
    let mut cstar = Prop::new("cstar-identity", "|T* T| = |T|^2 and |T| = |T*|", 1e-10);
    let mut antihom = Prop::new("adjoint-anti-homomorphism", "(U T)* = T* U*", 1e-13);
    let mut involution = Prop::new(
        "scalar-involution",
        "(b T)* = T* (b~ I) in the operator algebra",
        1e-11,
    );
    let mut double = Prop::new("double-adjoint", "T** = T", 0.0);
    let mut reassembly = Prop::new(
        "component-reassembly",
        "T = sum_v T_v i_v from the extracted components",
        1e-12,
    );
    let mut normality = Prop::new(
        "normality-vs-commuting-components",
        "commuting symmetric components give normal operators; and conversely on constructed failures",
        1e-10,
    );

    for algebra in Algebra::both() {
        let n = 2;
        for _ in 0..trials {
            let t = sample::quasilinear(algebra, n, rng);
            let u = sample::quasilinear(algebra, n, rng);
            let norm = t.operator_norm().max(1e-9);
            cstar.check(
                (t.adjoint().compose(&t)?.operator_norm() - norm * norm).abs() / (norm * norm),
            );
            cstar.check((t.adjoint().operator_norm() - norm).abs() / norm);
            let lhs = u.compose(&t)?.adjoint();
            let rhs = t.adjoint().compose(&u.adjoint())?;
            antihom.check(lhs.sub(&rhs)?.operator_norm() / (norm * u.operator_norm()).max(1.0));

            let b = sample::hypercomplex(algebra, rng);
            let bt = t.left_scalar_op(&b);
            let conj_shift = QuasilinearOp::scalar_left(algebra, n, &b.conj());
            let want = t.adjoint().compose(&conj_shift)?;
            involution
                .check(bt.adjoint().sub(&want)?.operator_norm() / (norm * b.norm()).max(1.0));

            double.check(t.adjoint().adjoint().sub(&t)?.operator_norm());

            let parts = t.component_decompose();
            let back = QuasilinearOp::from_components(algebra, &parts)?;
            reassembly.check(back.sub(&t)?.operator_norm() / norm.max(1.0));
        }

        // constructed normality examples: commuting symmetric restriction
        // components (polynomials in one symmetric seed) give normal
        // operators. Components beyond the real one only exist for
        // right-linear operators over the quaternions.
        for _ in 0..trials.min(10) {
            let seed = {
                let raw = DMatrix::from_fn(n, n, |_, _| sample::coefficient(rng));
                (&raw + raw.transpose()) * 0.5
            };
            let mut op = QuasilinearOp::zero(algebra, n);
            let eye = DMatrix::identity(n, n);
            let lanes = match algebra {
                Algebra::Quaternion => algebra.dim(),
                Algebra::Octonion => 1,
            };
            for v in 0..lanes {
                let c0 = sample::coefficient(rng);
                let c1 = sample::coefficient(rng);
                let t_v = &eye * c0 + &seed * c1;
                let part = QuasilinearOp::from_real_matrix(algebra, &t_v)
                    .left_scalar_op(&Hypercomplex::generator(algebra, v));
                op = op.add(&part)?;
            }
            normality.require(op.is_right_linear());
            normality.require(op.is_normal());
            // the component family together with its transposes commutes
            let comps = op.restriction_components()?;
            let mut worst: f64 = 0.0;
            for a in &comps {
                for b in &comps {
                    worst = worst.max((a * b - b * a).norm());
                    worst = worst.max((a * b.transpose() - b.transpose() * a).norm());
                }
            }
            normality.check(worst);
        }
        // a non-normal construction has non-commuting component family
        let mut nonsym = DMatrix::zeros(n, n);
        nonsym[(0, 1)] = 1.0;
        let bad = QuasilinearOp::from_real_matrix(algebra, &nonsym);
        normality.require(!bad.is_normal());
        let comps = bad.restriction_components()?;
        let t0 = &comps[0];
        normality.require((t0 * t0.transpose() - t0.transpose() * t0).norm() > 0.5);
    }
    Ok(vec![
        cstar.finish(),
        antihom.finish(),
        involution.finish(),
        double.finish(),
        reassembly.finish(),
        normality.finish(),
    ])
}

// ---------------------------------------------------------------------------
// spectral
// ---------------------------------------------------------------------------

fn spectral_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 10).max(5);
    let mut conj_sym = Prop::new(
        "adjoint-spectrum-conjugation",
        "the spectrum of T* is the conjugate of the spectrum of T",
        1e-9,
    );
    let mut open = Prop::new(
        "resolvent-set-open",
        "points within 1/(2 |R(z;T)|) of a resolvent point stay resolvent",
        0.0,
    );
    let mut norm_identity = Prop::new(
        "integral-norm-identity",
        "|f(T)x|^2 = sum |f(l)|^2 |P_l x|^2",
        1e-9,
    );
    let mut adjoint_f = Prop::new(
        "integral-adjoint",
        "f(T)* = conj(f)(T)",
        1e-10,
    );
    let mut resolvent_int = Prop::new(
        "integral-resolvent",
        "R(q; T) is the integral of (q - l)^{-1}",
        1e-8,
    );
    let mut classify = Prop::new(
        "normal-classification",
        "unitary/selfadjoint/positive normal operators have spectra on the sphere / reals / half-line",
        1e-9,
    );
    let mut nilpotent = Prop::new(
        "normal-radius-norm",
        "normal operators have spectral radius equal to the norm; tiny radius forces a tiny norm",
        1e-2,
    );

    for algebra in Algebra::both() {
        let n = 3;
        for _ in 0..trials {
            // conjugation symmetry for diagonal-exact spectra
            let b: Vec<Hypercomplex> = (0..n).map(|_| sample::hypercomplex(algebra, rng)).collect();
            let sp = spectrum_left_diagonal(&b)?;
            let bc: Vec<Hypercomplex> = b.iter().map(|z| z.conj()).collect();
            let spc = spectrum_left_diagonal(&bc)?;
            let conj_points: Vec<Hypercomplex> = sp.points.iter().map(|p| p.conj()).collect();
            conj_sym.check(spc.set_distance(&conj_points));
            // and the diagonal operator adjoint is the conjugate diagonal
            let op = QuasilinearOp::left_diagonal(&b)?;
            let opc = QuasilinearOp::left_diagonal(&bc)?;
            conj_sym.check(op.adjoint().sub(&opc)?.operator_norm() / op.operator_norm().max(1.0));
            // selfadjoint spectra are fixed by conjugation
            let t = sample::selfadjoint_right_linear(algebra, n, rng);
            let sp = spectrum_selfadjoint(&t)?;
            let fixed: Vec<Hypercomplex> = sp.points.iter().map(|p| p.conj()).collect();
            conj_sym.check(sp.set_distance(&fixed));

            // open resolvent set
            let z = Hypercomplex::from_real(algebra, 2.0 + t.operator_norm());
            let r = resolvent(&t, &z)?;
            let radius = 0.5 / r.operator_norm();
            let step = sample::unit_imaginary(algebra, rng).scale(radius * 0.9);
            open.require(resolvent(&t, &(z + step)).is_ok());

            // spectral integral identities on a right-linear selfadjoint
            let d = spectral_decomposition(&t)?;
            let f = |l: f64| 0.3 * l * l - 0.7 * l + 0.2;
            let ft = spectral_integral_real(&d, f)?;
            for _ in 0..5 {
                let x = sample::kvector(algebra, n, rng);
                let lhs = ft.apply(&x)?.norm().powi(2);
                let mut rhs = 0.0;
                for (l, p) in d.pairs() {
                    rhs += f(*l).powi(2) * p.apply(&x)?.norm().powi(2);
                }
                norm_identity
                    .check((lhs - rhs).abs() / x.norm().powi(2).max(1.0) / (1.0 + ft.operator_norm().powi(2)));
            }
            // real functions: f(T)* = f(T) = conj(f)(T)
            adjoint_f.check(ft.adjoint().sub(&ft)?.operator_norm() / ft.operator_norm().max(1.0));

            // K-valued functions on a scalar-commuting operator
            let raw = DMatrix::from_fn(n, n, |_, _| sample::coefficient(rng));
            let tr = QuasilinearOp::from_real_matrix(algebra, &((&raw + raw.transpose()) * 0.5));
            let dr = spectral_decomposition(&tr)?;
            let dir = sample::unit_imaginary(algebra, rng);
            let fk = |l: f64| {
                let mut v = dir.scale((0.7 * l).sin());
                *v.coeff_mut(0) += (0.7 * l).cos();
                v
            };
            let ftk = spectral_integral(&dr, fk)?;
            let ftk_conj = spectral_integral(&dr, |l| fk(l).conj())?;
            adjoint_f
                .check(ftk.adjoint().sub(&ftk_conj)?.operator_norm() / ftk.operator_norm().max(1.0));
            for _ in 0..5 {
                let x = sample::kvector(algebra, n, rng);
                let lhs = ftk.apply(&x)?.norm().powi(2);
                let mut rhs = 0.0;
                for (l, p) in dr.pairs() {
                    rhs += fk(*l).norm_sqr() * p.apply(&x)?.norm().powi(2);
                }
                norm_identity.check((lhs - rhs).abs() / x.norm().powi(2).max(1.0));
            }

            // resolvent through the integral
            let q = 2.0 + t.operator_norm();
            let ri = spectral_integral_real(&d, |l| 1.0 / (q - l))?;
            let direct = resolvent(&t, &Hypercomplex::from_real(algebra, q))?;
            resolvent_int.check(ri.sub(&direct)?.operator_norm() / direct.operator_norm().max(1.0));

            // classification on constructed diagonal normal operators
            let unit_diag: Vec<Hypercomplex> =
                (0..n).map(|_| sample::unit_hypercomplex(algebra, rng)).collect();
            let spu = spectrum_left_diagonal(&unit_diag)?;
            let udo = QuasilinearOp::left_diagonal(&unit_diag)?;
            let uu = udo.compose(&udo.adjoint())?;
            classify.check(
                uu.sub(&QuasilinearOp::identity(algebra, n))?.operator_norm(),
            );
            for p in &spu.points {
                classify.check((p.norm() - 1.0).abs());
            }
            for p in &spectrum_selfadjoint(&t)?.points {
                classify.check(p.im_norm());
            }
            let pos = sample::positive_right_linear(algebra, n, rng);
            for p in &spectrum_selfadjoint(&pos)?.points {
                classify.check((-p.re()).max(0.0));
            }

            // normal radius via diagonal operators
            let est = spectral_radius(&udo, 14);
            nilpotent.check((est.value - spu.max_norm()).abs() / spu.max_norm().max(1.0));
            let tiny: Vec<Hypercomplex> = (0..n)
                .map(|_| sample::hypercomplex(algebra, rng).scale(1e-12))
                .collect();
            let top = QuasilinearOp::left_diagonal(&tiny)?;
            let est = spectral_radius(&top, 14);
            nilpotent.require(est.value <= 1e-10 && top.operator_norm() <= 1e-8);
        }
    }
    Ok(vec![
        conj_sym.finish(),
        open.finish(),
        norm_identity.finish(),
        adjoint_f.finish(),
        resolvent_int.finish(),
        classify.finish(),
        nilpotent.finish(),
    ])
}

// ---------------------------------------------------------------------------
// calculus
// ---------------------------------------------------------------------------

fn calculus_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 10).max(5);
    let mut homomorphism = Prop::new(
        "calculus-homomorphism",
        "(f g)(T) = f(T) g(T) for polynomials of one selfadjoint operator",
        1e-8,
    );
    let mut linearity = Prop::new(
        "calculus-linearity",
        "(a f + b g)(T) = a f(T) + b g(T) for real scalars",
        1e-12,
    );
    let mut mapping = Prop::new(
        "spectral-mapping",
        "the spectrum of f(T) is the image of the spectrum",
        1e-8,
    );
    let mut composition = Prop::new(
        "calculus-composition",
        "(g o f)(T) = g(f(T)) for real polynomials",
        1e-8,
    );
    let mut cone = Prop::new(
        "positive-cone",
        "sums and nonnegative scalings stay positive; A and -A positive forces A = 0",
        1e-9,
    );
    let mut square_zero = Prop::new(
        "square-positivity",
        "A* A is positive; a vanishing square forces a vanishing operator",
        1e-10,
    );
    let mut monotone = Prop::new(
        "monotone-root",
        "0 <= A <= B implies sqrt(A) <= sqrt(B)",
        1e-9,
    );
    let mut semigroup = Prop::new(
        "fractional-power-semigroup",
        "A^b A^c = A^{b+c} on invertible positive operators",
        1e-9,
    );

    for algebra in Algebra::both() {
        let n = 2;
        for _ in 0..trials {
            let t = sample::selfadjoint_with_spectrum(algebra, n, -1.0, 1.0, rng);
            let fc: Vec<f64> = (0..3).map(|_| sample::coefficient(rng)).collect();
            let gc: Vec<f64> = (0..3).map(|_| sample::coefficient(rng)).collect();
            let f = PolySpec::from_real_coeffs(algebra, &fc);
            let g = PolySpec::from_real_coeffs(algebra, &gc);
            let ft = calculus::poly_eval(&t, &f)?;
            let gt = calculus::poly_eval(&t, &g)?;
            // product polynomial fg
            let mut prod = vec![0.0; fc.len() + gc.len() - 1];
            for (i, a) in fc.iter().enumerate() {
                for (j, b) in gc.iter().enumerate() {
                    prod[i + j] += a * b;
                }
            }
            let fg = PolySpec::from_real_coeffs(algebra, &prod);
            let fgt = calculus::poly_eval(&t, &fg)?;
            let scale = (ft.operator_norm() * gt.operator_norm()).max(1.0);
            homomorphism.check(fgt.sub(&ft.compose(&gt)?)?.operator_norm() / scale);

            let (a, b) = (sample::coefficient(rng), sample::coefficient(rng));
            let mut combo = vec![0.0; 3];
            for i in 0..3 {
                combo[i] = a * fc[i] + b * gc[i];
            }
            let ct = calculus::poly_eval(&t, &PolySpec::from_real_coeffs(algebra, &combo))?;
            let direct = ft.scale_real(a).add(&gt.scale_real(b))?;
            linearity.check(ct.sub(&direct)?.operator_norm() / scale);

            // spectral mapping through the exact selfadjoint spectrum
            let sp = spectrum_selfadjoint(&t)?;
            let image: Vec<Hypercomplex> = sp
                .points
                .iter()
                .map(|p| {
                    let l = p.re();
                    Hypercomplex::from_real(algebra, fc[0] + fc[1] * l + fc[2] * l * l)
                })
                .collect();
            let spf = spectrum_selfadjoint(&ft)?;
            mapping.check(spf.set_distance(&image) / (1.0 + ft.operator_norm()));

            // composition with g
            let fvals = |l: f64| fc[0] + fc[1] * l + fc[2] * l * l;
            let gvals = |l: f64| gc[0] + gc[1] * l + gc[2] * l * l;
            let gf = calculus::continuous_calculus_real(&t, |l| gvals(fvals(l)))?;
            let gof = calculus::continuous_calculus_real(&ft, gvals)?;
            composition.check(gf.sub(&gof)?.operator_norm() / (1.0 + gof.operator_norm()));

            // cone properties
            let p1 = sample::positive_right_linear(algebra, n, rng);
            let p2 = sample::positive_right_linear(algebra, n, rng);
            let sum = p1.add(&p2)?.add(&p1.scale_real(1.7))?;
            let min_eig = spectrum_selfadjoint(&sum)?
                .points
                .iter()
                .map(|p| p.re())
                .fold(f64::INFINITY, f64::min);
            cone.check((-min_eig).max(0.0));
            // A and -A positive forces zero: shrink a positive part to its
            // negative-compatible core
            let (plus, minus) = pos_neg_split(&p1.sub(&p1)?)?;
            cone.check(plus.operator_norm().max(minus.operator_norm()));

            // squares are positive
            let arb = sample::right_linear(algebra, n, rng);
            let sq = arb.adjoint().compose(&arb)?;
            let min_eig = spectrum_selfadjoint(&sq)?
                .points
                .iter()
                .map(|p| p.re())
                .fold(f64::INFINITY, f64::min);
            square_zero.check((-min_eig).max(0.0) / sq.operator_norm().max(1.0));
            let shrunk = arb.scale_real(1e-7);
            let sq = shrunk.adjoint().compose(&shrunk)?;
            if sq.operator_norm() <= 1e-12 {
                square_zero.require(shrunk.operator_norm() <= 1e-6);
            }

            // operator-monotone square root
            let a = sample::positive_right_linear(algebra, n, rng);
            let b = a.add(&sample::positive_right_linear(algebra, n, rng))?;
            let ra = sqrt_positive(&a)?;
            let rb = sqrt_positive(&b)?;
            let diff = rb.sub(&ra)?;
            let min_eig = spectrum_selfadjoint(&diff)?
                .points
                .iter()
                .map(|p| p.re())
                .fold(f64::INFINITY, f64::min);
            monotone.check((-min_eig).max(0.0));

            // fractional powers on an invertible positive operator
            let shifted = a.add(&QuasilinearOp::identity(algebra, n).scale_real(0.5))?;
            let power = |e: f64| calculus::continuous_calculus_real(&shifted, |l| l.powf(e));
            for (bb, cc) in [(-1.0, 2.0), (0.5, 0.5), (1.0, -1.0), (2.0, 0.5)] {
                let lhs = power(bb)?.compose(&power(cc)?)?;
                let rhs = power(bb + cc)?;
                semigroup.check(lhs.sub(&rhs)?.operator_norm() / rhs.operator_norm().max(1.0));
            }
        }
    }
    Ok(vec![
        homomorphism.finish(),
        linearity.finish(),
        mapping.finish(),
        composition.finish(),
        cone.finish(),
        square_zero.finish(),
        monotone.finish(),
        semigroup.finish(),
    ])
}

// ---------------------------------------------------------------------------
// projections
// ---------------------------------------------------------------------------

fn real_generated_basis<R: Rng>(
    algebra: Algebra,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<KVector>> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let coords: Vec<Hypercomplex> = (0..n)
            .map(|_| Hypercomplex::from_real(algebra, sample::coefficient(rng)))
            .collect();
        out.push(KVector::new(coords)?.scale_right(&sample::nonzero_hypercomplex(algebra, rng))?);
    }
    Ok(out)
}

fn projections_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 10).max(5);
    let mut invariants = Prop::new(
        "graded-invariants",
        "idempotent selfadjoint right-linear with the generator grading laws",
        1e-9,
    );
    let mut difference = Prop::new(
        "difference-projection",
        "E <= F makes F - E a graded projection",
        1e-10,
    );
    let mut chain = Prop::new(
        "chain-stabilization",
        "cumulative joins of a nested chain stabilize",
        1e-9,
    );
    let mut range_identities = Prop::new(
        "range-identities",
        "range(E + F) is the join; range(E F) = E - E meet (I - F)",
        1e-9,
    );
    let mut four_way = Prop::new(
        "ordering-agreement",
        "the four ordering conditions agree",
        0.0,
    );

    for algebra in Algebra::both() {
        let n = 3;
        for _ in 0..trials {
            let base = real_generated_basis(algebra, n, 2, rng)?;
            let e = projection_onto(&base[..1])?;
            let f = projection_onto(&base)?;
            invariants.require(e.validate(1e-9).is_ok());
            invariants.require(f.validate(1e-9).is_ok());

            // difference of nested projections is a projection
            let diff_op = f.op().sub(e.op())?;
            let idem = diff_op.compose(&diff_op)?.sub(&diff_op)?.operator_norm();
            difference.check(idem);
            let range = range_projection(&diff_op)?.projection;
            difference.require(range.validate(1e-8).is_ok());

            // nested chain stabilizes under cumulative joins
            let mut acc = e.clone();
            let chain_projs = [e.clone(), f.clone(), GradedProjection::identity(algebra, n)];
            let mut prev_rank = acc.rank();
            for p in &chain_projs {
                acc = join(&acc, p)?;
                chain.require(acc.rank() >= prev_rank);
                prev_rank = acc.rank();
            }
            chain.check(
                acc.op()
                    .sub(GradedProjection::identity(algebra, n).op())?
                    .operator_norm(),
            );

            // range identities
            let other = projection_onto(&real_generated_basis(algebra, n, 1, rng)?)?;
            let sum = e.op().add(other.op())?;
            let lhs = range_projection(&sum)?.projection;
            let rhs = join(&e, &other)?;
            range_identities.check(lhs.op().sub(rhs.op())?.operator_norm());
            let prod = e.op().compose(other.op())?;
            let lhs = range_projection(&prod)?.projection;
            let rhs = e
                .op()
                .sub(meet(&e, &other.complement()?)?.op())?;
            range_identities.check(lhs.op().sub(&rhs)?.operator_norm());

            // four-way ordering agreement: nested, identical and incomparable
            four_way.require(ordering_check(&e, &f)?.all());
            four_way.require(ordering_check(&e, &e)?.all());
            let disjoint = projection_onto(&real_generated_basis(algebra, n, 1, rng)?)?;
            let rep = ordering_check(&f, &disjoint)?;
            four_way.require(!rep.all());
        }
    }
    Ok(vec![
        invariants.finish(),
        difference.finish(),
        chain.finish(),
        range_identities.finish(),
        four_way.finish(),
    ])
}

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

fn states_suite<R: Rng>(trials: usize, rng: &mut R) -> Result<Vec<PropertyRecord>> {
    let trials = (trials / 10).max(5);
    let mut cs = Prop::new(
        "state-cauchy-schwarz",
        "|rho(B* A)|^2 <= rho(A* A) rho(B* B)",
        1e-10,
    );
    let mut hermitian = Prop::new(
        "positive-implies-hermitian",
        "positive functionals satisfy rho(A*) = conj rho(A)",
        1e-10,
    );
    let mut ideal = Prop::new(
        "left-kernel-ideal",
        "rho(A* A) = 0 forces rho((B A)* (B A)) = 0",
        1e-9,
    );
    let mut contraction = Prop::new(
        "representation-contraction",
        "|pi(A)| <= |A|",
        1e-9,
    );
    let mut lattice = Prop::new(
        "weight-lattice-norms",
        "|p| = p+(1) + p-(1) exactly on point weights",
        1e-14,
    );
    let mut variation = Prop::new(
        "variation-bound",
        "the total variation is bounded by the atom supremum times the partition constant",
        0.0,
    );

    for algebra in Algebra::both() {
        let n = 2;
        for _ in 0..trials {
            // module-compatible data: vector states on real-part vectors
            // against right-linear operators
            let x = match algebra {
                Algebra::Quaternion => sample::unit_kvector(algebra, n, rng),
                Algebra::Octonion => {
                    let raw =
                        nalgebra::DVector::from_fn(n, |_, _| sample::coefficient(rng)).normalize();
                    KVector::new(
                        (0..n)
                            .map(|l| Hypercomplex::from_real(algebra, raw[l]))
                            .collect(),
                    )?
                }
            };
            let rho = StateFunctional::vector_state(&x)?;
            let a = sample::right_linear(algebra, n, rng);
            let b = sample::right_linear(algebra, n, rng);
            let lhs = rho.eval(&b.adjoint().compose(&a)?)?.norm_sqr();
            let rhs = rho.eval(&a.adjoint().compose(&a)?)?.re()
                * rho.eval(&b.adjoint().compose(&b)?)?.re();
            cs.check((lhs - rhs).max(0.0) / (1.0 + rhs));

            hermitian.check(
                rho.eval(&a.adjoint())?.dist(&rho.eval(&a)?.conj())
                    / (1.0 + a.operator_norm()),
            );
        }

        // left kernel of the coordinate vector state
        let e1 = KVector::basis(algebra, n, 0);
        let rho = StateFunctional::vector_state(&e1)?;
        for _ in 0..trials {
            // A kills e1: first column zero
            let raw = sample::right_linear(algebra, n, rng);
            let killer = {
                let comp = projection_onto(&[KVector::basis(algebra, n, 1)])?;
                raw.compose(comp.op())?
            };
            ideal.check(rho.eval(&killer.adjoint().compose(&killer)?)?.norm());
            let b = sample::right_linear(algebra, n, rng);
            let ba = b.compose(&killer)?;
            ideal.check(rho.eval(&ba.adjoint().compose(&ba)?)?.norm());
        }

        // GNS contraction on a small generated algebra
        let gens: Vec<QuasilinearOp> = match algebra {
            Algebra::Quaternion => (0..2).map(|_| sample::right_linear(algebra, n, rng)).collect(),
            Algebra::Octonion => {
                let raw = DMatrix::from_fn(n, n, |_, _| sample::coefficient(rng));
                vec![QuasilinearOp::from_real_matrix(
                    algebra,
                    &((&raw + raw.transpose()) * 0.5),
                )]
            }
        };
        let gns = gns_build(&gens, &rho, GNS_DIM_CAP)?;
        for a in gns.closure().iter().take(8) {
            let pa = gns.represent(a)?;
            contraction.check((pa.operator_norm() - a.operator_norm()).max(0.0));
        }

        // finite point-set lattice
        let labels: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
        for _ in 0..trials {
            let w: Vec<f64> = (0..4).map(|_| sample::coefficient(rng)).collect();
            let p = WeightFunctional::new(labels.clone(), w)?;
            let (plus, minus) = pos_part(&p);
            lattice.check((p.norm() - plus.norm() - minus.norm()).abs());
            let table: Vec<Hypercomplex> = (0..4)
                .map(|_| Hypercomplex::from_real(algebra, 1.0))
                .collect();
            lattice.check(
                (plus.eval(&table)?.re() + minus.eval(&table)?.re() - p.norm()).abs(),
            );
            let q = WeightFunctional::new(
                labels.clone(),
                (0..4).map(|_| sample::coefficient(rng)).collect(),
            )?;
            let j = lattice_join(&p, &q)?;
            for ((a, b), c) in p.weights.iter().zip(q.weights.iter()).zip(j.weights.iter()) {
                lattice.check((a.max(*b) - c).abs());
            }

            // Jordan split of an orthogonal density difference
            let other = KVector::basis(algebra, n, 1);
            let rho2 = StateFunctional::vector_state(&e1)?
                .sub(&StateFunctional::vector_state(&other)?);
            let (jp, jm) = jordan_decompose(&rho2)?;
            let t = sample::quasilinear(algebra, n, rng);
            let lhs = rho2.eval(&t)?;
            let rhs = jp.eval(&t)? - jm.eval(&t)?;
            lattice.check(lhs.dist(&rhs) / (1.0 + t.operator_norm()));

            // variation bound for a random atomic measure
            let dim = algebra.dim();
            let weights: Vec<DMatrix<f64>> = (0..3)
                .map(|_| DMatrix::from_fn(dim, dim, |_, _| sample::coefficient(rng)))
                .collect();
            let mu = KMeasure::new(
                algebra,
                (0..3).map(|i| format!("p{i}")).collect(),
                weights,
            )?;
            let sup_atom = (0..3).map(|p| mu.atom(p).norm()).fold(0.0f64, f64::max);
            // the partition constant is 2^(2^(m+2)) with m+1 the algebra
            // dimension; it is astronomically generous at desk scale
            let bound = 2f64.powf(2f64.powi(algebra.dim() as i32 + 1)) * sup_atom;
            variation.require(mu.total_variation() <= bound.max(1e-12));
        }
    }
    Ok(vec![
        cs.finish(),
        hermitian.finish(),
        ideal.finish(),
        contraction.finish(),
        lattice.finish(),
        variation.finish(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for report in run_all(42, 60).unwrap() {
            for p in &report.properties {
                assert!(
                    p.pass,
                    "suite {} property {} residual {:.3e} tol {:.3e}",
                    report.suite, p.name, p.max_residual, p.tolerance
                );
            }
            assert!(report.pass);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("algebra", 7, 50).unwrap();
        let b = run_suite("algebra", 7, 50).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = run_suite("algebra", 8, 50).unwrap();
        assert!(serde_json::to_string(&a).unwrap() != serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", 1, 10).is_err());
    }

    #[test]
    fn flipped_sign_table_breaks_alternativity() {
        // a wrong generator table (the i j product flipped to -k) must be
        // caught by the alternativity residual that the suite checks
        let h = Algebra::Quaternion;
        let buggy_mul = |a: &Hypercomplex, b: &Hypercomplex| -> Hypercomplex {
            let table = h.table();
            let mut out = Hypercomplex::zero(h);
            for p in 0..4 {
                for q in 0..4 {
                    let (idx, mut sign) = table.product(p, q);
                    if p == 1 && q == 2 {
                        sign = -sign;
                    }
                    *out.coeff_mut(idx) += sign * a.coeff(p) * b.coeff(q);
                }
            }
            out
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let a = sample::hypercomplex(h, &mut rng);
            let b = sample::hypercomplex(h, &mut rng);
            let lhs = buggy_mul(&buggy_mul(&a, &a), &b);
            let rhs = buggy_mul(&a, &buggy_mul(&a, &b));
            worst = worst.max(lhs.dist(&rhs));
        }
        assert!(worst > 1e-2, "mutation must be detected, got {worst:.3e}");
    }
}
