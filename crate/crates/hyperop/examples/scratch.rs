// scratch diagnostics, removed before release
use hyperop::algebra::{Algebra, Hypercomplex};
use hyperop::calculus::{positive_combination, recombine};
use hyperop::kmodule::KVector;
use hyperop::operator::QuasilinearOp;
use hyperop::sample;
use hyperop::states::{gns_build, unitary_interpolate, StateFunctional, GNS_DIM_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let h = Algebra::Quaternion;
    // replicate the failing test sequence exactly
    let mut rng = ChaCha8Rng::seed_from_u64(92);
    let p = sample::positive_right_linear(h, 2, &mut rng);
    let terms = positive_combination(&p).unwrap();
    println!("positive case: {} terms", terms.len());
    let li = QuasilinearOp::identity(h, 2).left_scalar_op(&Hypercomplex::generator(h, 1));
    let terms = positive_combination(&li).unwrap();
    println!("li case: {} terms", terms.len());
    for a in Algebra::both() {
        for it in 0..5 {
            let t = sample::right_linear(a, 3, &mut rng);
            let terms = positive_combination(&t).unwrap();
            let back = recombine(a, 3, &terms).unwrap();
            let residual = back.sub(&t).unwrap().operator_norm();
            println!(
                "{a} iter {it}: residual {:.3e} terms {} norm {:.3}",
                residual,
                terms.len(),
                t.operator_norm()
            );
            if residual > 1e-9 && a == Algebra::Quaternion {
                // dissect: reconstruct the hermitian pieces the same way and
                // check their spectral decompositions
                let mat = t.k_matrix().unwrap();
                let n = 3;
                let dim = 4;
                let mut parts =
                    vec![vec![vec![Hypercomplex::zero(a); n]; n]; dim];
                for l in 0..n {
                    for k in l..n {
                        let q = mat[l][k];
                        let qt = mat[k][l];
                        let h0 = (q + qt.conj()).scale(0.5);
                        parts[0][l][k] = h0;
                        parts[0][k][l] = h0.conj();
                        let w = q - h0;
                        if l == k {
                            for v in 1..dim {
                                parts[v][l][l] = Hypercomplex::from_real(a, w.coeff(v));
                            }
                        } else {
                            let h1 = Hypercomplex::new(
                                a,
                                &[w.coeff(1), -w.coeff(0), 0.0, 0.0],
                            )
                            .unwrap();
                            parts[1][l][k] = h1;
                            parts[1][k][l] = h1.conj();
                            parts[2][l][k] = Hypercomplex::from_real(a, w.coeff(2));
                            parts[2][k][l] = parts[2][l][k];
                            parts[3][l][k] = Hypercomplex::from_real(a, w.coeff(3));
                            parts[3][k][l] = parts[3][l][k];
                        }
                    }
                }
                // direct recombination without splitting
                let mut acc = QuasilinearOp::zero(a, n);
                for (v, entries) in parts.iter().enumerate() {
                    let hv = QuasilinearOp::from_k_matrix(a, entries).unwrap();
                    let gen = Hypercomplex::generator(a, v);
                    acc = acc.add(&hv.left_scalar_op(&gen)).unwrap();
                }
                println!(
                    "  hermitian recombination (no split): {:.3e}",
                    acc.sub(&t).unwrap().operator_norm()
                );
                for (v, entries) in parts.iter().enumerate() {
                    let hv = QuasilinearOp::from_k_matrix(a, entries).unwrap();
                    if hv.operator_norm() < 1e-12 {
                        continue;
                    }
                    let d = hyperop::spectral::spectral_decomposition(&hv).unwrap();
                    let rec = d.reconstruct().unwrap().sub(&hv).unwrap().operator_norm();
                    let ranks: Vec<usize> = d.pairs().iter().map(|(_, p)| p.rank()).collect();
                    println!(
                        "  piece {v}: |H| {:.3} eigen {:?} ranks {:?} partition {:.2e} reconstruct {:.2e}",
                        hv.operator_norm(),
                        d.eigenvalues(),
                        ranks,
                        d.partition_defect().unwrap(),
                        rec,
                    );
                    if rec > 1e-9 {
                        let sym = (hv.rep() + hv.rep().transpose()) * 0.5;
                        let eig = sym.clone().symmetric_eigen();
                        let mut order: Vec<usize> = (0..12).collect();
                        order.sort_by(|x, y| {
                            eig.eigenvalues[*x].partial_cmp(&eig.eigenvalues[*y]).unwrap()
                        });
                        // first cluster: indices of the four smallest
                        let members = &order[0..4];
                        let cols: Vec<nalgebra::DVector<f64>> = members
                            .iter()
                            .map(|i| nalgebra::DVector::from(eig.eigenvectors.column(*i).clone_owned()))
                            .collect();
                        // block = translates of the first column
                        let u = hyperop::kmodule::KVector::from_real(a, &cols[0]).unwrap();
                        let u = u.scale_real(1.0 / u.norm());
                        let mut block: Vec<nalgebra::DVector<f64>> = Vec::new();
                        for v in 0..4 {
                            let gen = Hypercomplex::generator(a, v);
                            let mut col = u.scale_right(&gen).unwrap().to_real();
                            for q in &block {
                                let c = q.dot(&col);
                                col -= q * c;
                            }
                            println!("    translate {v} norm before normalize {:.3e}", col.norm());
                            block.push(col.normalize());
                        }
                        for (ci, w) in cols.iter().enumerate() {
                            let mut v = w.clone();
                            for q in &block {
                                let c = q.dot(&v);
                                v -= q * c;
                            }
                            println!("    col {ci} residual {:.3e}", v.norm());
                        }
                        let lam = eig.eigenvalues[members[0]];
                        for (ci, w) in cols.iter().enumerate() {
                            println!(
                                "    col {ci} eigen-residual {:.3e}",
                                (&sym * w - w * lam).norm()
                            );
                        }
                        let t1 = &block[1];
                        println!(
                            "    translate-1 eigen-residual {:.3e}",
                            (&sym * t1 - t1 * lam).norm()
                        );
                        let r1 = QuasilinearOp::scalar_right(a, n, &Hypercomplex::generator(a, 1));
                        println!(
                            "    [rep, R_1] = {:.3e}",
                            (hv.rep() * r1.rep() - r1.rep() * hv.rep()).norm()
                        );
                    }
                }
            }
        }
    }

    // GNS matrix algebra debug
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let e1 = KVector::basis(h, 2, 0);
    let rho = StateFunctional::vector_state(&e1).unwrap();
    let mut gens = Vec::new();
    for _ in 0..3 {
        gens.push(sample::right_linear(h, 2, &mut rng));
    }
    let gns = gns_build(&gens, &rho, GNS_DIM_CAP).unwrap();
    println!(
        "gns: closure {} quotient {}",
        gns.closure_dim_real(),
        gns.quotient_dim()
    );
    // K-orthonormality of the quotient basis
    for (i, a) in gns.quotient_reps().iter().enumerate() {
        for (j, b) in gns.quotient_reps().iter().enumerate() {
            let g = gns.quotient_inner(a, b).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            if (g.re() - want).abs() > 1e-8 || g.im_norm() > 1e-8 {
                println!("  gram defect at ({i},{j}): {g}");
            }
        }
    }
    // expansion residual of closure elements
    let mut worst = 0.0f64;
    for x in gns.closure().iter() {
        let coords = gns.quotient_coords(x).unwrap();
        // rebuild sum B_nu c_nu and compare class lengths
        let mut back: Option<QuasilinearOp> = None;
        for (nu, b) in gns.quotient_reps().iter().enumerate() {
            let shift = b.right_scalar_op(coords.coord(nu));
            back = Some(match back {
                None => shift,
                Some(acc) => acc.add(&shift).unwrap(),
            });
        }
        let diff = x.sub(&back.unwrap()).unwrap();
        let len2 = gns.quotient_inner(&diff, &diff).unwrap().re();
        worst = worst.max(len2);
    }
    println!("worst class-expansion residual^2: {:.3e}", worst);
    let d = gns.diagnostics().unwrap();
    println!("{d:?}");

    // unitary interpolation identity case
    let m = Hypercomplex::generator(h, 1);
    match unitary_interpolate(&[e1.clone()], &[e1.clone()], &m) {
        Ok((u, s)) => println!(
            "identity interp: |S| = {:.3e}, |U - I| = {:.3e}",
            s.operator_norm(),
            (u.rep() - QuasilinearOp::identity(h, 2).rep()).norm()
        ),
        Err(e) => println!("identity interp error: {e}"),
    }
    let e2 = KVector::basis(h, 2, 1);
    match unitary_interpolate(&[e1.clone(), e2.clone()], &[e2.clone(), e1.clone()], &m) {
        Ok((u, s)) => println!(
            "swap interp: |Ue1 - e2| = {:.3e}, S norm {:.3}",
            u.apply(&e1).unwrap().dist(&e2),
            s.operator_norm()
        ),
        Err(e) => println!("swap interp error: {e}"),
    }
}
