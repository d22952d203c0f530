//! State-space fixtures and their matrix-side oracles.

use ila::control::{dual_law, feedback_apply, feedback_exists, feedback_recover, injection_apply, injection_exists, injection_recover, LawKind};
use ila::fixtures;
use ila::genop::{adjoint, adjoint_gds, is_genop, Gds, Genaut};
use ila::poly::Poly;
use ila::{Field, IndexSet, Space, Q};
use rand::{Rng, RngCore};

type M = Vec<Vec<Q>>;

pub fn ints(a: &[&[i64]]) -> M {
    a.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect()
}

pub fn mul(a: &M, b: &M) -> M {
    let m = b.first().map_or(0, Vec::len);
    a.iter().map(|r| (0..m).map(|j| r.iter().zip(b).fold(Q::zero(), |s, (x, row)| s.add(&x.mul(&row[j])))).collect()).collect()
}

pub fn mul_vec(a: &M, x: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(x).fold(Q::zero(), |s, (p, q)| s.add(&p.mul(q)))).collect()
}

pub fn plus(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn neg(a: &M) -> M {
    a.iter().map(|r| r.iter().map(Field::neg).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> M {
    vec![vec![Q::zero(); c]; r]
}

/// Rows `(e_i on from, K[:, i] on to)`: the graph of `to = K from`.
pub fn graph_space(from: &IndexSet, to: &IndexSet, k: &M) -> Space<Q> {
    let idx = from.union(to);
    let rows = (0..from.len())
        .map(|i| {
            let mut r = vec![Q::zero(); idx.len()];
            r[idx.position(&from.labels()[i]).unwrap()] = Q::one();
            for (j, l) in to.iter().enumerate() {
                r[idx.position(l).unwrap()] = k[j][i].clone();
            }
            r
        })
        .collect();
    Space::from_generators(idx, rows)
}

/// Read `K` back from a space that is the graph of `to = K from`: cut the
/// space down to `from ∈ span{e_i}` and normalise.
pub fn graph_matrix(v: &Space<Q>, from: &IndexSet, to: &IndexSet) -> M {
    let mut k = zeros(to.len(), from.len());
    for i in 0..from.len() {
        let e: Vec<Q> = (0..from.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect();
        let cut = v.intersect(&Space::from_generators(from.clone(), vec![e]));
        let row = cut
            .basis()
            .iter()
            .find(|r| !super::project(cut.index(), r, from)[i].is_zero())
            .expect("domain is all of `from`")
            .clone();
        let t = super::project(cut.index(), &row, from)[i].clone();
        for (j, x) in super::project(cut.index(), &row, to).iter().enumerate() {
            k[j][i] = x.div(&t);
        }
    }
    k
}

pub struct Sys {
    pub w: IndexSet,
    pub mu: IndexSet,
    pub my: IndexSet,
    pub a: M,
    pub b: M,
    pub c: M,
    pub g: Gds<Q>,
}

pub fn system(a: M, b: M, c: M) -> Sys {
    let (n, nu, ny) = (a.len(), b[0].len(), c.len());
    let (w, mu, my) = (fixtures::labels("w", n), fixtures::labels("u", nu), fixtures::labels("y", ny));
    let g = Gds::from_state_space(&w, &mu, &my, &a, &b, &c, &zeros(ny, nu)).unwrap();
    Sys { w, mu, my, a, b, c, g }
}

pub fn random_system(rng: &mut dyn RngCore, n_max: usize, nu: usize, ny: usize) -> Sys {
    let n = rng.gen_range(1..=n_max);
    system(fixtures::matrix(rng, n, n), fixtures::matrix(rng, n, nu), fixtures::matrix(rng, ny, n))
}

pub fn controllable(s: &Sys) -> bool {
    let n = s.a.len();
    let mut cols = s.b.clone();
    let mut span = Space::from_generators(s.w.clone(), transpose(&s.b));
    for _ in 0..n {
        cols = mul(&s.a, &cols);
        span = span.sum(&Space::from_generators(s.w.clone(), transpose(&cols)));
    }
    span.is_full()
}

pub fn transpose(a: &M) -> M {
    let c = a.first().map_or(0, Vec::len);
    (0..c).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn random_monic(rng: &mut dyn RngCore, deg: usize) -> Poly<Q> {
    let mut c: Vec<Q> = (0..deg).map(|_| Q::from_i64(rng.gen_range(-5..=5))).collect();
    c.push(Q::one());
    Poly::new(c)
}

/// `n ≥ 2`: with a single state and a nonzero input the free genaut is
/// already everything, so there is nothing to place.
pub fn controllable_single_input(rng: &mut dyn RngCore, n_max: usize) -> Sys {
    loop {
        let s = random_system(rng, n_max, 1, 1);
        if s.w.len() >= 2 && controllable(&s) {
            return s;
        }
    }
}

/// A law that fixes `u` as a function of `w`, rather than leaving it free
/// along `V^com`.
pub fn is_state_feedback(s: &Sys, law: &Space<Q>) -> bool {
    law.restrict(&s.w).unwrap().is_full() && law.contract(&s.mu).unwrap().is_zero_space()
}

/// Closed-loop minimal polynomial, computed from the law matrix alone.
pub fn closed_loop_minpoly(s: &Sys, law: &Space<Q>) -> Poly<Q> {
    let f = graph_matrix(law, &s.w, &s.mu);
    super::krylov_minpoly(&plus(&s.a, &mul(&s.b, &f)))
}

pub fn multi_input(rng: &mut dyn RngCore) -> Sys {
    loop {
        let n = rng.gen_range(2..=6);
        let nu = rng.gen_range(2..=3.min(n));
        let s = system(fixtures::matrix(rng, n, n), fixtures::matrix(rng, n, nu), fixtures::matrix(rng, 1, n));
        // A genop V¹ cannot be altered by feedback.
        if controllable(&s) && !is_genop(&s.g.genaut_free()) {
            return s;
        }
    }
}

/// `A = [[A11, A12], [0, A22]]`, `B = [b1; 0]` with `(A11, b1)` controllable.
pub fn partially_controllable(rng: &mut dyn RngCore) -> (Sys, M) {
    loop {
        let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let n = n1 + n2;
        let mut a = fixtures::matrix::<Q>(rng, n, n);
        for row in a.iter_mut().skip(n1) {
            for x in row.iter_mut().take(n1) {
                *x = Q::zero();
            }
        }
        let mut b = fixtures::matrix::<Q>(rng, n, 1);
        for row in b.iter_mut().skip(n1) {
            row[0] = Q::zero();
        }
        let top = system(
            a[..n1].iter().map(|r| r[..n1].to_vec()).collect(),
            b[..n1].to_vec(),
            fixtures::matrix(rng, 1, n1),
        );
        if controllable(&top) {
            let a22 = a[n1..].iter().map(|r| r[n1..].to_vec()).collect();
            return (system(a, b, fixtures::matrix(rng, 1, n)), a22);
        }
    }
}

/// `span{B, AB, A²B, …}` by repeated multiplication until the span stops growing.
pub fn krylov_span(w: &IndexSet, a: &M, b: &M) -> Space<Q> {
    let mut vecs = transpose(b);
    let mut span = Space::from_generators(w.clone(), vecs.clone());
    loop {
        vecs = vecs.iter().map(|v| mul_vec(a, v)).collect();
        let next = span.sum(&Space::from_generators(w.clone(), vecs.clone()));
        if next == span {
            return span;
        }
        span = next;
    }
}

/// `{w : A w ∈ X}`.
pub fn preimage(w: &IndexSet, a: &M, x: &Space<Q>) -> Space<Q> {
    let n = w.len();
    // Stack the constraints `X^⊥ · A w = 0`.
    let cons: Vec<Vec<Q>> = x.perp().basis().iter().map(|c| (0..n).map(|j| (0..n).fold(Q::zero(), |s, i| s.add(&c[i].mul(&a[i][j])))).collect()).collect();
    Space::from_constraints(w.clone(), cons)
}

pub fn kernel(w: &IndexSet, c: &M) -> Space<Q> {
    Space::from_constraints(w.clone(), c.clone())
}

/// Largest `S ⊆ ker C` with `A S ⊆ S + im B`: `S ← ker C ∩ A⁻¹(S + im B)`.
pub fn vstar(w: &IndexSet, a: &M, b: &M, c: &M) -> Space<Q> {
    let im_b = Space::from_generators(w.clone(), transpose(b));
    let mut s = kernel(w, c);
    loop {
        let next = kernel(w, c).intersect(&preimage(w, a, &s.sum(&im_b)));
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Sparse `A`, `B` and `C`, which keeps a healthy share of uncontrollable
/// and unobservable cases.
pub fn sparse_system(rng: &mut dyn RngCore, n_max: usize) -> Sys {
    let n = rng.gen_range(1..=n_max);
    let (nu, ny) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let mut a: M = fixtures::matrix(rng, n, n);
    for r in a.iter_mut() {
        for x in r.iter_mut() {
            if rng.gen_bool(0.5) {
                *x = Q::zero();
            }
        }
    }
    let b: M = (0..n).map(|_| (0..nu).map(|_| if rng.gen_bool(0.6) { Q::zero() } else { fixtures::element(rng) }).collect()).collect();
    let c: M = (0..ny).map(|_| (0..n).map(|_| if rng.gen_bool(0.6) { Q::zero() } else { fixtures::element(rng) }).collect()).collect();
    system(a, b, c)
}

/// The genaut with inputs free and outputs held at zero.
pub fn output_nulling(g: &Gds<Q>) -> Genaut<Q> {
    let (mu, my) = g.io_or_err().unwrap();
    g.genaut_under(&Space::full(mu.clone()).direct_sum(&Space::zero(my.clone())).unwrap()).unwrap()
}

/// A random genop together with the matrix it induces on `(V∘W)/(V×Ẇ)_W`.
///
/// Picks independent `g_1 … g_r` in `F^n`, lets `K = span{g_1 … g_t}`, and
/// maps `g_i ↦ Σ_j M_ji g_j` with `M` block triangular. The space is `{(g_i, A g_i)} + (K ⊕ 0) + (0 ⊕ K)`.
pub fn random_genop<F: Field>(rng: &mut dyn RngCore, n: usize) -> (Genaut<F>, Vec<Vec<F>>) {
    let w = fixtures::labels("w", n);
    let r = rng.gen_range(0..=n);
    let g: Vec<Vec<F>> = loop {
        let m = fixtures::matrix::<F>(rng, r, n);
        if Space::from_generators(w.clone(), m.clone()).rank() == r {
            break m;
        }
    };
    let t = if r == 0 { 0 } else { rng.gen_range(0..=r.min(2)) };
    let mut m = fixtures::matrix::<F>(rng, r, r);
    // A K ⊆ K, so that V×Ẇ is exactly K.
    for row in m.iter_mut().skip(t) {
        for x in row.iter_mut().take(t) {
            *x = F::zero();
        }
    }
    let image = |i: usize| -> Vec<F> {
        (0..n).map(|c| (0..r).fold(F::zero(), |s, j| s.add(&m[j][i].mul(&g[j][c])))).collect()
    };
    let v0 = Genaut::<F>::new(Space::zero(w.union(&w.dotted())), w.clone()).unwrap();
    let idx = v0.space.index().clone();
    let row = |x: &[F], y: &[F]| -> Vec<F> {
        idx.iter()
            .map(|l| {
                let p = w.position(&l.undot()).unwrap();
                if l.dotted { y[p].clone() } else { x[p].clone() }
            })
            .collect()
    };
    let zero = vec![F::zero(); n];
    let mut rows: Vec<Vec<F>> = (0..r).map(|i| row(&g[i], &image(i))).collect();
    for k in g.iter().take(t) {
        rows.push(row(k, &zero));
        rows.push(row(&zero, k));
    }
    let v = Genaut::new(Space::from_generators(idx, rows), w).unwrap();
    let block: Vec<Vec<F>> = (t..r).map(|i| (t..r).map(|j| m[i][j].clone()).collect()).collect();
    (v, block)
}

pub fn floor_degree<F: Field>(p: Poly<F>) -> Poly<F> {
    if p.degree() == Some(0) { Poly::monomial(1) } else { p }
}

/// One random feedback/injection duality round. Returns whether the
/// feedback target was reachable.
pub fn duality_case(rng: &mut dyn RngCore) -> bool {
    let nu = rng.gen_range(1..=2);
    let ny = rng.gen_range(1..=2);
    let s = random_system(rng, 5, nu, ny);
    let adj = adjoint_gds(&s.g).unwrap();
    let target = match rng.gen_range(0..3) {
        0 => feedback_apply(&s.g, &graph_space(&s.w, &s.mu, &fixtures::matrix(rng, nu, s.w.len()))).unwrap(),
        1 => Genaut::from_map(&s.w, &fixtures::matrix(rng, s.w.len(), s.w.len())),
        _ => {
            let n = s.w.len();
            Genaut::new(fixtures::any_space(rng, &s.w.union(&s.w.dotted())), s.w.clone()).unwrap_or_else(|_| {
                Genaut::from_map(&s.w, &zeros(n, n))
            })
        }
    };
    let fwd = feedback_exists(&s.g, &target).unwrap();
    let back = injection_exists(&adj, &adjoint(&target)).unwrap();
    assert_eq!(fwd, back);
    if fwd {
        let law = feedback_recover(&s.g, &target).unwrap();
        let dual = dual_law(&law, &s.w);
        assert_eq!(dual.kind, LawKind::Injection);
        assert_eq!(injection_apply(&adj, &dual.linkage).unwrap(), adjoint(&target));
        let direct = injection_recover(&adj, &adjoint(&target)).unwrap();
        assert_eq!(direct.unique, law.unique);
        if law.unique {
            assert_eq!(direct.linkage, dual.linkage);
        }
        assert_eq!(dual_law(&dual, &s.w).linkage, law.linkage);
    }
    // The injection side of the same source.
    let k = fixtures::matrix(rng, s.w.len(), ny);
    let inj = injection_apply(&s.g, &graph_space(&s.my, &s.w.dotted(), &k)).unwrap();
    assert!(feedback_exists(&adj, &adjoint(&inj)).unwrap());
    let law = injection_recover(&s.g, &inj).unwrap();
    let dual = dual_law(&law, &s.w);
    assert_eq!(feedback_apply(&adj, &dual.linkage).unwrap(), adjoint(&inj));
    fwd
}
