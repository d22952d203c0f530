mod common;

use common::systems::{floor_degree, random_genop};

use ila::field::q;
use ila::fixtures;
use ila::genop::*;
use ila::poly::Poly;
use ila::{Field, Gf, IndexSet, Space, Q};
use proptest::prelude::*;
use rand::{Rng, RngCore};

fn ints(a: &[&[i64]]) -> Vec<Vec<Q>> {
    a.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect()
}

#[test]
fn classification_examples() {
    let w = IndexSet::of(&["w1", "w2"]);
    let map = Genaut::from_map(&w, &ints(&[&[1, 2], &[3, 4]]));
    assert!(classify(&map).genop);
    let z = Genaut::<Q>::new(Space::zero(w.union(&w.dotted())), w.clone()).unwrap();
    let c = classify(&z);
    assert!(c.genop && c.decoupled);
    // ẇ = A w + B u with u projected out: ×W = A⁻¹ range B misses range B.
    let g = Gds::from_state_space(&w, &IndexSet::of(&["u"]), &IndexSet::empty(), &ints(&[&[1, 0], &[0, 2]]), &ints(&[&[1], &[1]]), &[], &[])
        .unwrap();
    let v = g.genaut_free();
    let c = classify(&v);
    assert!(c.usg && !c.lsg && !c.genop);
    let ca = classify(&adjoint(&v));
    assert!(ca.lsg && !ca.usg);
    assert_eq!(minimal_annihilating_poly(&v), Err(ila::IlaError::NotGenop));
}

#[test]
fn stars_and_powers() {
    let w = IndexSet::of(&["w1", "w2"]);
    let k = Genaut::from_map(&w, &ints(&[&[1, 1], &[0, 1]]));
    let p = Genaut::from_map(&w, &ints(&[&[2, 0], &[1, 3]]));
    // Map composition: w ↦ Kw then ↦ P(Kw).
    let kp = Genaut::from_map(&w, &ints(&[&[2, 2], &[1, 4]]));
    assert_eq!(star(&k, &p).unwrap(), kp);
    assert_eq!(power(&k, 1), k);
    let ident = Genaut::from_map(&w, &ints(&[&[1, 0], &[0, 1]]));
    assert_eq!(power(&k, 0), ident);
    let nil = Genaut::from_map(&w, &ints(&[&[0, 1], &[0, 0]]));
    let sq = star(&nil, &nil).unwrap();
    assert_eq!(sq, zero_of(&nil));
    assert_eq!(sq.space, Space::full(w.clone()).direct_sum(&Space::zero(w.dotted())).unwrap());
    assert_eq!(minimal_annihilating_poly(&nil).unwrap(), Poly::from_ints(&[0, 0, 1]));
}

#[test]
fn rc_scalar_genop() {
    let w = IndexSet::of(&["p"]);
    let v = Genaut::from_map(&w, &[vec![q(-2, 3)]]);
    let p = Poly::new(vec![q(2, 3), q(1, 1)]);
    assert!(is_decoupled_genaut(&poly_eval(&p, &v)));
    assert_eq!(poly_eval(&Poly::monomial(1), &v), v);
    assert_eq!(minimal_annihilating_poly(&v).unwrap(), p);
}

/// Over GF(3) the oracle tries every monic polynomial, lowest degree first,
/// using only `p(V)` and the decoupledness test.
#[test]
fn minimal_polynomial_matches_exhaustive_sweep_over_gf3() {
    let els = Gf::<3>::elements().unwrap();
    let mut rng = fixtures::rng(3);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let (v, _) = random_genop::<Gf<3>>(&mut rng, n);
        let lib = minimal_annihilating_poly(&v).unwrap();
        let mut found = None;
        'deg: for d in 1..=n + 1 {
            for low in common::all_vectors::<Gf<3>>(d) {
                let mut c = low;
                c.push(Gf::one());
                let p = Poly::new(c);
                if annihilates(&p, &v) {
                    found = Some(p);
                    break 'deg;
                }
            }
        }
        assert_eq!(Some(lib), found);
        assert_eq!(els.len(), 3);
    }
}

#[test]
fn spectral_suite_over_q() {
    let mut rng = fixtures::rng(4);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let (v, block) = random_genop::<Q>(&mut rng, n);
        assert!(classify(&v).genop);
        let lib = minimal_annihilating_poly(&v).unwrap();
        assert_eq!(lib, floor_degree(common::krylov_minpoly(&block)));
        assert!(annihilates(&lib, &v));
        assert_eq!(poly_eval(&lib, &v), zero_of(&v));
        assert_eq!(minimal_annihilating_poly(&adjoint(&v)).unwrap(), lib);
    }
}

fn small_poly(rng: &mut dyn RngCore, max_deg: usize) -> Poly<Q> {
    let d = rng.gen_range(0..=max_deg);
    Poly::new((0..=d).map(|_| Q::from_i64(rng.gen_range(-3..=3))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    // p = p1·q + a ⟹ p(V) = (p1(V) * q(V)) +_Ẇ a(V); with a = 0 the sum drops.
    #[test]
    fn factorization_identities(seed in any::<u64>()) {
        let mut rng = fixtures::rng(seed);
        let n = rng.gen_range(1..=4);
        let (v, _) = random_genop::<Q>(&mut rng, n);
        let p1 = small_poly(&mut rng, 2);
        let qq = small_poly(&mut rng, 2);
        let a = small_poly(&mut rng, 1);
        let prod = p1.mul(&qq);
        prop_assert_eq!(poly_eval(&prod, &v), star(&poly_eval(&p1, &v), &poly_eval(&qq, &v)).unwrap());
        let lhs = poly_eval(&prod.add(&a), &v);
        let rhs = add(&star(&poly_eval(&p1, &v), &poly_eval(&qq, &v)).unwrap(), &poly_eval(&a, &v)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let pq = star(&poly_eval(&p1, &v), &poly_eval(&qq, &v)).unwrap();
        let qp = star(&poly_eval(&qq, &v), &poly_eval(&p1, &v)).unwrap();
        prop_assert_eq!(pq, qp);
    }

    #[test]
    fn powers_keep_domain_and_cokernel(seed in any::<u64>()) {
        let mut rng = fixtures::rng(seed);
        let n = rng.gen_range(1..=5);
        let (v, _) = random_genop::<Q>(&mut rng, n);
        for k in 1..=4 {
            let pk = power(&v, k);
            prop_assert_eq!(pk.dom(), v.dom());
            prop_assert_eq!(pk.img_cross(), v.img_cross());
        }
        let z = zero_of(&v);
        prop_assert_eq!(star(&v, &z).unwrap(), z.clone());
        prop_assert_eq!(star(&z, &v).unwrap(), z);
        let p0 = power0(&v);
        prop_assert!(classify(&p0).genop);
        prop_assert_eq!(p0.dom(), v.dom());
    }

    // (p(V))^a = p(V^a) holds for every genaut, genop or not.
    #[test]
    fn adjoint_commutes_with_polynomials(seed in any::<u64>()) {
        let mut rng = fixtures::rng(seed);
        let n = rng.gen_range(1..=3);
        let w = fixtures::labels("w", n);
        let v = Genaut::new(fixtures::any_space::<Q>(&mut rng, &w.union(&w.dotted())), w).unwrap();
        let p = small_poly(&mut rng, 3);
        prop_assert_eq!(adjoint(&poly_eval(&p, &v)), poly_eval(&p, &adjoint(&v)));
        prop_assert_eq!(adjoint(&adjoint(&v)), v.clone());
        let c = classify(&v);
        let ca = classify(&adjoint(&v));
        prop_assert_eq!(c.usg, ca.lsg);
        prop_assert_eq!(c.lsg, ca.usg);
        prop_assert_eq!(c.decoupled, ca.decoupled);
    }

    #[test]
    fn gds_adjoint_is_an_involution(seed in any::<u64>()) {
        let mut rng = fixtures::rng(seed);
        let (w, mu, my) = (fixtures::labels("w", 2), fixtures::labels("u", 1), fixtures::labels("y", 2));
        let m = w.union(&mu).union(&my);
        let space = fixtures::any_space::<Q>(&mut rng, &m.union(&w.dotted()));
        let g = Gds::with_io(space, w, mu, my).unwrap();
        let a = adjoint_gds(&g).unwrap();
        prop_assert_eq!(adjoint_gds(&a).unwrap(), g.clone());
        prop_assert_eq!(a.genaut_free(), adjoint(&g.genaut_zero()));
    }
}
