//! Seeded generators for randomized checks: spaces, state-space systems,
//! graphs and well-posed RLC networks.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::emulator::{build_rlc_emulator, ELinkagePair};
use crate::genop::Gds;
use crate::field::{q, Field, Q};
use crate::graph::DirectedGraph;
use crate::label::{IndexSet, Label};
use crate::network::{parse_netlist, Device, DeviceKind, Network, RC_NETLIST};
use crate::space::Space;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels `prefix1 … prefixn`.
pub fn labels(prefix: &str, n: usize) -> IndexSet {
    IndexSet::new((1..=n).map(|i| Label::new(format!("{prefix}{i}"))).collect())
}

/// A field element; over ℚ, a small integer in `[-3, 3]`.
pub fn element<F: Field>(rng: &mut dyn RngCore) -> F {
    if F::elements().is_some() {
        F::sample(rng)
    } else {
        F::from_i64(rng.gen_range(-3..=3))
    }
}

pub fn matrix<F: Field>(rng: &mut dyn RngCore, rows: usize, cols: usize) -> Vec<Vec<F>> {
    (0..rows).map(|_| (0..cols).map(|_| element(rng)).collect()).collect()
}

/// Span of `k` random vectors on `idx` (rank at most `k`).
pub fn space<F: Field>(rng: &mut dyn RngCore, idx: &IndexSet, k: usize) -> Space<F> {
    Space::from_generators(idx.clone(), matrix(rng, k, idx.len()))
}

/// A random space on `idx` of random rank.
pub fn any_space<F: Field>(rng: &mut dyn RngCore, idx: &IndexSet) -> Space<F> {
    let k = rng.gen_range(0..=idx.len());
    space(rng, idx, k)
}

/// A connected graph on `n` vertices with `m ≥ n − 1` edges named `e1 …`.
pub fn graph(rng: &mut dyn RngCore, n: usize, m: usize) -> DirectedGraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((i, j));
    }
    while edges.len() < m {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    let named = edges
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| if rng.gen_bool(0.5) { (Label::new(format!("e{}", k + 1)), a, b) } else { (Label::new(format!("e{}", k + 1)), b, a) })
        .collect();
    DirectedGraph::new(vertices, named).expect("generated graph is valid")
}

/// A random bipartition of the edge labels.
pub fn edge_split(rng: &mut dyn RngCore, g: &DirectedGraph) -> (IndexSet, IndexSet) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for e in g.edge_labels().iter() {
        if rng.gen_bool(0.5) {
            a.push(e.clone());
        } else {
            b.push(e.clone());
        }
    }
    (IndexSet::new(a), IndexSet::new(b))
}

/// A ladder graph with exactly `m` edges (rungs and two rails).
pub fn ladder(m: usize) -> DirectedGraph {
    let rungs = m / 3 + 1;
    let mut edges = Vec::with_capacity(m);
    let mut k = 0;
    let top = |i: usize| 2 * i;
    let bot = |i: usize| 2 * i + 1;
    'outer: for i in 0..rungs {
        for (a, b) in [(top(i), bot(i)), (top(i), top(i + 1)), (bot(i), bot(i + 1))] {
            if k == m {
                break 'outer;
            }
            k += 1;
            edges.push((Label::new(format!("e{k}")), a, b));
        }
    }
    let nv = 2 * (rungs + 1);
    DirectedGraph::new((0..nv).map(|i| format!("n{i}")).collect(), edges).expect("ladder is valid")
}

/// A well-posed RLC network with at most `max_edges` devices whose
/// emulator builds over ℚ. At least one capacitor or inductor is present.
pub fn rlc_network(rng: &mut dyn RngCore, max_edges: usize) -> Network {
    use DeviceKind::*;
    let weighted = [(R, 6), (C, 3), (L, 3), (E, 1), (J, 1), (YV, 1), (YI, 1)];
    let total: u32 = weighted.iter().map(|w| w.1).sum();
    loop {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(n.max(3)..=max_edges.max(n.max(3)));
        let g = graph(rng, n, m);
        let mut devices = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let mut pick = rng.gen_range(0..total);
            let mut kind = R;
            for (k, w) in weighted {
                if pick < w {
                    kind = k;
                    break;
                }
                pick -= w;
            }
            let value = kind.has_value().then(|| q(rng.gen_range(1..=4), rng.gen_range(1..=2)));
            devices.push(Device {
                kind,
                name: format!("{}{}", kind.tag(), i + 1),
                pos: g.vertices()[e.tail].clone(),
                neg: g.vertices()[e.head].clone(),
                value,
            });
        }
        if !devices.iter().any(|d| matches!(d.kind, C | L)) {
            continue;
        }
        let Ok(net) = Network::new(devices) else { continue };
        if build_rlc_emulator::<Q>(&net).is_ok() {
            return net;
        }
    }
}

/// The three-capacitor RC network used throughout the examples.
pub fn rc_network() -> Network {
    parse_netlist(RC_NETLIST).expect("fixture parses")
}

/// The RC network written out as explicit state equations: the
/// three-capacitor GDS, a two-state and a one-state emulator, and the pairs
/// linking the first to the other two.
#[derive(Clone, Debug)]
pub struct RcExplicit {
    pub original: Gds<Q>,
    pub two_state: Gds<Q>,
    pub one_state: Gds<Q>,
    pub pair_two: ELinkagePair<Q>,
    pub pair_one: ELinkagePair<Q>,
}

fn qm(rows: &[&[(i64, i64)]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect()
}

pub fn rc_explicit() -> RcExplicit {
    let mu = IndexSet::of(&["j5", "v6"]);
    let my = IndexSet::of(&["i6", "v5"]);
    let d = qm(&[&[(0, 1), (-1, 1)], &[(0, 1), (0, 1)]]);
    let w = IndexSet::of(&["vC1", "vC2", "vC3"]);
    let a3 = qm(&[&[(-2, 3), (0, 1), (0, 1)], &[(1, 3), (0, 1), (0, 1)], &[(1, 3), (0, 1), (0, 1)]]);
    let b3 = qm(&[&[(2, 3), (2, 3)], &[(-1, 3), (-1, 3)], &[(-1, 3), (-1, 3)]]);
    let c3 = qm(&[&[(1, 1), (0, 1), (0, 1)], &[(-1, 1), (0, 1), (0, 1)]]);
    let free = Gds::from_state_space(&w, &mu, &my, &a3, &b3, &c3, &d).unwrap();
    let idx = free.space.index().clone();
    let sum: Vec<Q> = idx.iter().map(|l| if w.contains(l) { Q::one() } else { Q::zero() }).collect();
    let original = free.with_space(free.space.intersect(&Space::from_constraints(idx, vec![sum])));

    let p = IndexSet::of(&["vC1'", "vC2'"]);
    let a2 = qm(&[&[(-2, 3), (0, 1)], &[(1, 3), (0, 1)]]);
    let b2 = qm(&[&[(2, 3), (2, 3)], &[(-1, 3), (-1, 3)]]);
    let c2 = qm(&[&[(1, 1), (0, 1)], &[(-1, 1), (0, 1)]]);
    let two_state = Gds::from_state_space(&p, &mu, &my, &a2, &b2, &c2, &d).unwrap();

    let x = IndexSet::of(&["vC"]);
    let one_state = Gds::from_state_space(
        &x,
        &mu,
        &my,
        &qm(&[&[(-2, 3)]]),
        &qm(&[&[(2, 3), (2, 3)]]),
        &qm(&[&[(1, 1)], &[(-1, 1)]]),
        &d,
    )
    .unwrap();

    let l2 = ["vC1", "vC2", "vC3", "vC1'", "vC2'"];
    let l2d = ["dot(vC1)", "dot(vC2)", "dot(vC3)", "dot(vC1')", "dot(vC2')"];
    let pair_two = ELinkagePair::new(
        Space::from_ints(&l2, &[&[2, -1, -1, 2, -1], &[0, 1, -1, 0, 1]]),
        Space::from_ints(&l2d, &[&[2, -1, -1, 2, -1]]),
        w.clone(),
        p,
    )
    .unwrap();
    let l1 = ["vC1", "vC2", "vC3", "vC"];
    let l1d = ["dot(vC1)", "dot(vC2)", "dot(vC3)", "dot(vC)"];
    let pair_one = ELinkagePair::new(
        Space::from_ints(&l1, &[&[2, -1, -1, 2], &[0, 1, -1, 0]]),
        Space::from_ints(&l1d, &[&[2, -1, -1, 2]]),
        w,
        x,
    )
    .unwrap();
    RcExplicit { original, two_state, one_state, pair_two, pair_one }
}
