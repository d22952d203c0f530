#![allow(dead_code)]

pub mod systems;

use ila::control::{feedback_apply, injection_apply};
use ila::emulator::*;
use ila::fixtures;
use ila::genop::{annihilates, minimal_annihilating_poly, Gds};
use ila::invariant::min_conditioned_invariant;
use ila::network::Network;
use ila::poly::Poly;
use ila::{Field, IndexSet, Space, Q};
use rand::RngCore;

/// `{(x, K x)}` on `x ⊎ y` with random `K`.
pub fn random_graph_space(rng: &mut dyn RngCore, x: &IndexSet, y: &IndexSet) -> Space<Q> {
    let idx = x.union(y);
    let k: Vec<Vec<Q>> = fixtures::matrix(rng, y.len(), x.len());
    let rows = (0..x.len())
        .map(|j| {
            let mut r = vec![Q::zero(); idx.len()];
            r[idx.position(&x.labels()[j]).unwrap()] = Q::one();
            for (i, l) in y.iter().enumerate() {
                r[idx.position(l).unwrap()] = k[i][j].clone();
            }
            r
        })
        .collect();
    Space::from_generators(idx, rows)
}

/// Controllable space: least conditioned invariant of the free genaut
/// seeded by its cross space on `Ẇ`.
pub fn reachable(g: &Gds<Q>) -> Space<Q> {
    let v = g.genaut_free();
    min_conditioned_invariant(&v, &v.img_cross()).unwrap().space
}

/// Outcome of checking every transfer on one emulator.
#[derive(Debug, Default)]
pub struct TransferOutcome {
    pub linked: bool,
    pub dimension_ok: bool,
    pub poly_ok: bool,
    pub invariant_ok: bool,
    pub feedback_ok: bool,
    pub injection_ok: bool,
}

impl TransferOutcome {
    pub fn all(&self) -> bool {
        self.linked && self.dimension_ok && self.poly_ok && self.invariant_ok && self.feedback_ok && self.injection_ok
    }
}

/// Build the emulator and check each transfer by computing both sides.
pub fn check_transfers(net: &Network, rng: &mut dyn RngCore) -> TransferOutcome {
    let e = build_rlc_emulator::<Q>(net).expect("emulator builds");
    let mut out = TransferOutcome::default();
    out.linked = elinkage_verify(&e.pair, &e.original.space, &e.emulator.space).map(|r| r.linked).unwrap_or(false);
    let g = net.graph();
    let cs: IndexSet = net.edges_of(&[ila::network::DeviceKind::C]);
    let ls: IndexSet = net.edges_of(&[ila::network::DeviceKind::L]);
    let expected = (g.rank_of(&cs).unwrap() - g.contraction_rank(&cs).unwrap())
        + (g.rank_of(&ls).unwrap() - g.contraction_rank(&ls).unwrap());
    out.dimension_ok = e.dimension == expected && e.emulator.w().len() == expected;

    // Polynomial: s · p_emulator, evaluated on each side independently.
    let vw = e.original.genaut_autonomous().unwrap();
    let vp = e.emulator.genaut_autonomous().unwrap();
    let pe = minimal_annihilating_poly(&vp).unwrap();
    let p = pe.mul(&Poly::monomial(1));
    out.poly_ok = match poly_transfer(&e.pair, &vw, &vp, &p) {
        Ok(t) => t.linked && t.decoupled_w && t.decoupled_p && annihilates(&p, &vw),
        Err(_) => false,
    };

    // Invariant: the reachable space moves across the pair onto the
    // reachable space computed on the emulator.
    let fw = e.original.genaut_free();
    let fp = e.emulator.genaut_free();
    let rw = reachable(&e.original);
    let rp = reachable(&e.emulator);
    out.invariant_ok = match invariant_transfer(&e.pair, &fw, &fp, &rw, Direction::WToP) {
        Ok(t) => t.image == rp,
        Err(_) => false,
    };

    // Feedback u = K w and injection ẇ = L y, each closed on both sides.
    let (mu, my) = {
        let (a, b) = e.original.io().unwrap();
        (a.clone(), b.clone())
    };
    let w = e.original.w().clone();
    let law = random_graph_space(rng, &w, &mu);
    out.feedback_ok = match feedback_transfer(&e.pair, &e.original, &law) {
        Ok(t) => {
            let direct = feedback_apply(&e.emulator, &t.law).unwrap();
            direct == t.closed_p && linkage_apply(&e.pair, &t.closed_w.space).unwrap() == direct.space
        }
        Err(err) => {
            eprintln!("feedback transfer: {err}");
            false
        }
    };
    let wd: IndexSet = w.dotted();
    let inj = random_graph_space(rng, &my, &wd);
    out.injection_ok = match injection_transfer(&e.pair, &e.original, &inj) {
        Ok(t) => {
            let direct = injection_apply(&e.emulator, &t.law).unwrap();
            direct == t.closed_p && linkage_apply(&e.pair, &t.closed_w.space).unwrap() == direct.space
        }
        Err(err) => {
            eprintln!("injection transfer: {err}");
            false
        }
    };
    out
}

/// Every vector of `F^n` for a finite field.
pub fn all_vectors<F: Field>(n: usize) -> Vec<Vec<F>> {
    let els = F::elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                els.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// The members of `v`, listed by brute force.
pub fn members<F: Field>(v: &Space<F>) -> std::collections::HashSet<Vec<F>> {
    all_vectors::<F>(v.index().len()).into_iter().filter(|x| v.contains_coords(x)).collect()
}

/// Every subspace on `idx`, grown one vector at a time from the zero space.
pub fn all_subspaces<F: Field>(idx: &IndexSet) -> Vec<Space<F>> {
    let vecs = all_vectors::<F>(idx.len());
    let mut seen = std::collections::HashSet::new();
    let zero = Space::zero(idx.clone());
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for x in &vecs {
            if v.contains_coords(x) {
                continue;
            }
            let mut rows = v.basis().to_vec();
            rows.push(x.clone());
            let bigger = Space::from_generators(idx.clone(), rows);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Space<F>> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.rank(), s.to_fixture()));
    out
}

/// Set of `x` restricted to `t`, as coordinates in `t`'s order.
pub fn project<F: Field>(idx: &IndexSet, x: &[F], t: &IndexSet) -> Vec<F> {
    t.iter().map(|l| x[idx.position(l).unwrap()].clone()).collect()
}

/// Matched (or skewed, with `sign = -1`) composition straight from the
/// definition: pairs of members agreeing on the shared labels.
pub fn brute_compose<F: Field>(a: &Space<F>, b: &Space<F>, skewed: bool) -> std::collections::HashSet<Vec<F>> {
    let (ia, ib) = (a.index(), b.index());
    let shared = ia.intersection(ib);
    let out = ia.difference(ib).union(&ib.difference(ia));
    let ma = members(a);
    let mb = members(b);
    let mut res = std::collections::HashSet::new();
    for g in &ma {
        let gs = project(ia, g, &shared);
        for h in &mb {
            let mut hs = project(ib, h, &shared);
            if skewed {
                hs = hs.iter().map(|x| x.neg()).collect();
            }
            if gs == hs {
                let v = out
                    .iter()
                    .map(|l| match ia.position(l) {
                        Some(p) if !shared.contains(l) => g[p].clone(),
                        _ => h[ib.position(l).unwrap()].clone(),
                    })
                    .collect();
                res.insert(v);
            }
        }
    }
    res
}

/// Minimal polynomial of a square matrix: the first `M^d` that is a
/// combination of `I, M, …, M^{d-1}`, solved as a null space.
pub fn krylov_minpoly<F: Field>(m: &[Vec<F>]) -> Poly<F> {
    let k = m.len();
    let mul = |a: &[Vec<F>], b: &[Vec<F>]| -> Vec<Vec<F>> {
        (0..k)
            .map(|i| (0..k).map(|j| (0..k).fold(F::zero(), |s, l| s.add(&a[i][l].mul(&b[l][j])))).collect())
            .collect()
    };
    let mut pw: Vec<Vec<F>> = (0..k).map(|i| (0..k).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    let mut seen: Vec<Vec<F>> = Vec::new();
    loop {
        let flat: Vec<F> = pw.iter().flatten().cloned().collect();
        let d = seen.len();
        // Unknowns (c_0 … c_{d-1}, λ) with Σ c_i seen_i = λ · flat.
        let cons: Vec<Vec<F>> = (0..k * k)
            .map(|e| {
                let mut r: Vec<F> = seen.iter().map(|s| s[e].clone()).collect();
                r.push(flat[e].neg());
                r
            })
            .collect();
        let sol = Space::from_constraints(fixtures::labels("c", d + 1), cons);
        if let Some(r) = sol.basis().iter().find(|r| !r[d].is_zero()) {
            let lambda = r[d].clone();
            let mut out: Vec<F> = r[..d].iter().map(|x| x.div(&lambda).neg()).collect();
            out.push(F::one());
            return Poly::new(out);
        }
        seen.push(flat);
        pw = mul(m, &pw);
    }
}
