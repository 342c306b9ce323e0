use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use dindex::complex::generate::{generate, random_subcomplex, reference_suite, Family};
use dindex::complex::{barycentric_operator, Complex};
use dindex::forms::{
    boundary_chain, coboundary, connection_basis_limited, connection_derivative, dirac, exterior_derivative, graded_basis,
    hodge_of, Chain,
};
use dindex::index::{
    gauss_bonnet_curvature, multilinear_curvature, poincare_hopf, random_function, theorem_one_report,
    valuation_evaluate, wu_characteristic, wu_intersection, Valuation,
};
use dindex::lax::{asymmetry, power_trace, LaxFlow};
use dindex::lefschetz::{find_automorphisms, heat_lefschetz, induced_map, lefschetz_number};
use dindex::rational::Rational;
use dindex::spectral::{betti, cross_validate_kernels, heat_supertrace, supersymmetry_check, HodgeSpectra};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn suite() -> &'static [(String, Complex)] {
    static SUITE: OnceLock<Vec<(String, Complex)>> = OnceLock::new();
    SUITE.get_or_init(reference_suite)
}

fn small(max_simplices: usize) -> impl Iterator<Item = &'static (String, Complex)> {
    suite().iter().filter(move |(_, c)| c.len() <= max_simplices)
}

#[test]
fn closure_and_spheres() {
    for (name, c) in suite().iter().filter(|(_, c)| c.base().len() <= 10) {
        for x in c.simplices() {
            for s in x.subsets() {
                assert!(c.contains(&s), "{name}: {:?} missing", s.vertices());
            }
        }
        for &v in c.base() {
            let s = c.unit_sphere(v).unwrap();
            assert!(s.is_closed());
            assert!(!s.base().contains(&v), "{name}");
        }
    }
}

#[test]
fn refinement_counts() {
    for (name, c) in suite() {
        let r = c.barycentric_refinement();
        let d = c.dim().unwrap();
        assert_eq!(r.f_vector(), c.f_vector().apply(&barycentric_operator(d)), "{name}");
        assert_eq!(r.euler_characteristic(), c.euler_characteristic(), "{name}");
    }
}

#[test]
fn refinement_preserves_betti_and_wu() {
    for (name, c) in small(40) {
        let r = c.barycentric_refinement();
        assert_eq!(betti(&exterior_derivative(c)).unwrap(), betti(&exterior_derivative(&r)).unwrap(), "{name}");
        assert_eq!(wu_characteristic(c, 2).unwrap(), wu_characteristic(&r, 2).unwrap(), "{name}");
    }
}

#[test]
fn de_rham_structure() {
    for (name, c) in suite() {
        let d = exterior_derivative(c);
        assert!(d.matrix().triplets().all(|(i, j, v)| v.abs() == 1
            && d.basis().degree(i) == d.basis().degree(j) + 1));
        assert!(d.is_nilpotent(), "{name}");
        assert_eq!(d.basis().alternating_dimension(), c.euler_characteristic());
        let dd = dirac(&d).unwrap();
        assert!(dd.matrix().is_symmetric());
        let l = hodge_of(&d).unwrap();
        for (i, j, _) in l.matrix().triplets() {
            assert_eq!(l.basis().degree(i), l.basis().degree(j), "{name}: L mixes degrees");
        }
        let spectra = HodgeSpectra::new(&l).unwrap();
        for b in &spectra.blocks {
            assert!(b.eigenvalues.iter().all(|&x| x >= -1e-9), "{name}");
        }
        assert!(supersymmetry_check(&l).unwrap().elliptic, "{name}");
        cross_validate_kernels(&d, &l).unwrap();
    }
}

#[test]
fn connection_structure() {
    for (name, c) in suite() {
        let Ok(basis) = connection_basis_limited(c, 2, 3000) else { continue };
        let d = coboundary(Arc::new(basis));
        assert!(d.is_nilpotent(), "{name}");
        assert_eq!(d.basis().alternating_dimension(), wu_characteristic(c, 2).unwrap(), "{name}");
        if d.basis().len() <= 600 {
            let l = hodge_of(&d).unwrap();
            assert!(supersymmetry_check(&l).unwrap().elliptic, "{name}");
        }
    }
    let mut checked = 0;
    for (name, c) in suite() {
        let Ok(basis) = connection_basis_limited(c, 3, 20_000) else { continue };
        let d = coboundary(Arc::new(basis));
        assert!(d.is_nilpotent(), "{name}");
        assert_eq!(d.basis().alternating_dimension(), wu_characteristic(c, 3).unwrap(), "{name}");
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} complexes had small order-3 bases");
}

#[test]
fn heat_supertrace_is_constant() {
    for (name, c) in suite() {
        let l = hodge_of(&exterior_derivative(c)).unwrap();
        let chi = c.euler_characteristic() as f64;
        for t in [0.0, 0.1, 0.5, 1.0, 5.0, 10.0] {
            let s = heat_supertrace(&l, t).unwrap();
            assert!((s - chi).abs() < 1e-9, "{name} t={t}: {s} vs {chi}");
        }
    }
}

#[test]
fn index_theorems() {
    for (name, c) in suite() {
        let chi = c.euler_characteristic();
        assert_eq!(gauss_bonnet_curvature(c).total(), Rational::from(chi), "{name}");
        for k in 1..=3 {
            if c.len() > 40 && k == 3 {
                continue;
            }
            let w = wu_characteristic(c, k).unwrap();
            assert_eq!(multilinear_curvature(c, k).unwrap().total(), Rational::from(w), "{name} k={k}");
        }
        for seed in 0..100 {
            let f = random_function(c, seed);
            assert_eq!(poincare_hopf(c, &f).unwrap().total(), chi, "{name} seed {seed}");
        }
    }
    for (name, c) in small(60) {
        for k in 1..=2 {
            let r = theorem_one_report(c, k).unwrap();
            assert!(r.equal, "{name} k={k}: {r:?}");
        }
    }
}

#[test]
fn lefschetz_over_suite() {
    let mut pairs = 0;
    for (name, c) in suite().iter().filter(|(_, c)| c.base().len() <= 8) {
        let d = exterior_derivative(c);
        let l = hodge_of(&d).unwrap();
        let dd = dirac(&d).unwrap();
        for t in find_automorphisms(c, 6) {
            let u = induced_map(&t, d.basis_arc().clone()).unwrap();
            for m in [&d, &dd, &l] {
                assert_eq!(u.matrix().mul(m.matrix()), m.matrix().mul(u.matrix()), "{name}");
            }
            let r = lefschetz_number(&t, c, &d).unwrap();
            assert!(r.equal, "{name}: {} vs {}", r.lefschetz_number, r.fixed.total);
            let local: Rational = r.fixed.vertex_indices.values().copied().sum();
            assert_eq!(local, Rational::from(r.lefschetz_number));
            let h0 = heat_lefschetz(&t, &l, 0.0).unwrap();
            for time in [0.1, 1.0, 10.0] {
                assert!((heat_lefschetz(&t, &l, time).unwrap() - h0).abs() < 1e-9, "{name}");
            }
            pairs += 1;
        }
        let id = find_automorphisms(c, 1).remove(0);
        assert_eq!(lefschetz_number(&id, c, &d).unwrap().lefschetz_number, c.euler_characteristic());
    }
    assert!(pairs > 100);
}

#[test]
fn lax_invariants() {
    for (name, c) in suite() {
        let dd = dirac(&exterior_derivative(c)).unwrap();
        if dd.basis().len() > 20 {
            continue;
        }
        let flow = LaxFlow::for_operator(&dd);
        let d0 = dd.matrix().to_dense();
        let traj = flow.integrate(&d0, 10.0, 0.01, 50).unwrap();
        for s in &traj {
            assert!(asymmetry(&s.dirac) < 1e-10, "{name}");
            assert!(flow.nilpotency_defect(&s.dirac).unwrap() < 1e-8, "{name}");
        }
        for s in &flow.integrate(&d0, 10.0, 0.0025, 100).unwrap() {
            for m in 2..=4 {
                let (a, b) = (power_trace(&s.dirac, m), power_trace(&d0, m));
                assert!((a - b).abs() < 1e-7, "{name} m={m}: {a} vs {b}");
            }
        }
        let diag = flow.diagnostics(&traj[0], traj.last().unwrap()).unwrap();
        assert!(diag.drift < 1e-6, "{name}: drift {}", diag.drift);
    }
}

fn subcomplex_pair(seed: u64) -> (&'static str, Complex, Complex, Complex) {
    let (name, c) = &suite()[seed as usize % suite().len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_subcomplex(c, &mut rng);
    let b = random_subcomplex(c, &mut rng);
    (name, c.clone(), a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_is_a_valuation(seed in any::<u64>()) {
        let (name, c, a, b) = subcomplex_pair(seed);
        let chi = |x: &Complex| x.euler_characteristic();
        prop_assert_eq!(chi(&a.union(&b)) + chi(&a.intersection(&b)), chi(&a) + chi(&b), "{}", name);
        let d = c.dim().unwrap();
        let x = Valuation::euler(d);
        let v = |s: &Complex| valuation_evaluate(&x, &c, Some(s)).unwrap();
        prop_assert_eq!(v(&a), Rational::from(chi(&a)));
    }

    #[test]
    fn wu_is_bilinear(seed in any::<u64>()) {
        let (name, c, a, b) = subcomplex_pair(seed);
        let u = a.union(&b);
        let i = a.intersection(&b);
        // omega(A∪B, A∪B) expanded by bilinearity over A∪B = A + B - A∩B
        let lhs = wu_intersection(&u, &u);
        let rhs = wu_intersection(&a, &a) + wu_intersection(&b, &b) + wu_intersection(&i, &i)
            + 2 * wu_intersection(&a, &b) - 2 * wu_intersection(&a, &i) - 2 * wu_intersection(&b, &i);
        prop_assert_eq!(lhs, rhs, "{}", name);
        prop_assert_eq!(wu_intersection(&u, &u), wu_characteristic(&u, 2).unwrap());
        let w = valuation_evaluate(&Valuation::wu(c.dim().unwrap()), &c, Some(&u)).unwrap();
        prop_assert_eq!(w, Rational::from(lhs));
    }

    #[test]
    fn stokes_adjointness(seed in any::<u64>(), k in 1usize..=2) {
        let (name, c) = &suite()[seed as usize % suite().len()];
        prop_assume!(k == 1 || c.len() <= 40);
        let d = if k == 1 { exterior_derivative(c) } else { connection_derivative(c, k).unwrap() };
        let n = d.basis().len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let f: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
        let a = Chain::from_dense(&(0..n).map(|_| rng.random_range(-3..=3)).collect::<Vec<_>>());
        let df = d.apply(&f);
        let lhs: i64 = a.iter().map(|(i, x)| df[i] * x).sum();
        let da = boundary_chain(&d, &a).unwrap();
        let rhs: i64 = da.iter().map(|(i, x)| f[i] * x).sum();
        prop_assert_eq!(lhs, rhs, "{}", name);
    }

    #[test]
    fn random_complexes_satisfy_the_theorems(n in 1usize..=8, seed in any::<u64>()) {
        let c = generate(Family::Random, n, seed).unwrap();
        prop_assert!(c.is_closed());
        let d = exterior_derivative(&c);
        let b = betti(&d).unwrap();
        prop_assert_eq!(b.alternating_sum(), c.euler_characteristic());
        let l = hodge_of(&d).unwrap();
        prop_assert!((heat_supertrace(&l, 0.7).unwrap() - c.euler_characteristic() as f64).abs() < 1e-9);
        let f: BTreeMap<_, _> = random_function(&c, seed ^ 1);
        prop_assert_eq!(poincare_hopf(&c, &f).unwrap().total(), c.euler_characteristic());
        prop_assert_eq!(graded_basis(&c).len(), c.len());
    }
}

#[test]
fn connection_cohomology_is_not_homotopy_invariant() {
    // a point and an edge are both contractible
    let point = generate(Family::Simplex, 1, 0).unwrap();
    let edge = generate(Family::Simplex, 2, 0).unwrap();
    for c in [&point, &edge] {
        let b = betti(&exterior_derivative(c)).unwrap();
        assert_eq!(b.0[0], 1);
        assert!(b.0[1..].iter().all(|&x| x == 0));
    }
    let b_point = betti(&connection_derivative(&point, 2).unwrap()).unwrap();
    let b_edge = betti(&connection_derivative(&edge, 2).unwrap()).unwrap();
    assert_ne!(b_point, b_edge);
    assert_eq!(b_point.alternating_sum(), 1);
    assert_eq!(b_edge.alternating_sum(), -1);
}
