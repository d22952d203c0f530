//! Generalized autonomous systems, generalized operators, adjoints and the
//! polynomial calculus built from `*`, `+_Ẇ` and `λ^Ẇ`.

use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::label::{IndexSet, Label};
use crate::linkage::{fresh_offset, intersection_sum, is_decoupled, scalar_mul};
use crate::poly::Poly;
use crate::space::{express, Space};

/// Rename every dotted label to its undotted twin.
pub fn undot<F: Field>(v: &Space<F>) -> Space<F> {
    v.rename_with(Label::undot).expect("undotting must not collide")
}

/// Rename every label to its dotted twin.
pub fn dot<F: Field>(v: &Space<F>) -> Space<F> {
    v.rename_with(Label::dot).expect("dotting must not collide")
}

/// A space on `W ⊎ Ẇ`; `Ẇ` is `W` with the dot mark set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Genaut<F: Field> {
    pub space: Space<F>,
    w: IndexSet,
}

impl<F: Field> Genaut<F> {
    pub fn new(space: Space<F>, w: IndexSet) -> Result<Self> {
        if w.iter().any(|l| l.dotted) {
            return Err(IlaError::BadPartition("W labels must be undotted".into()));
        }
        if space.index() != &w.union(&w.dotted()) {
            return Err(IlaError::BadPartition(format!("index {:?} is not W ⊎ Ẇ for W = {:?}", space.index(), w)));
        }
        Ok(Genaut { space, w })
    }

    /// Infer `W` as the undotted labels.
    pub fn from_space(space: Space<F>) -> Result<Self> {
        let w: IndexSet = space.index().iter().filter(|l| !l.dotted).cloned().collect();
        Genaut::new(space, w)
    }

    /// `{(w, ẇ) : ẇ = A w}`; `a[i][j]` couples `w_j` into `ẇ_i`, both in
    /// canonical order of `w`.
    pub fn from_map(w: &IndexSet, a: &[Vec<F>]) -> Self {
        let n = w.len();
        let idx = w.union(&w.dotted());
        let rows = (0..n)
            .map(|j| {
                let mut r = vec![F::zero(); idx.len()];
                r[idx.position(&w.labels()[j]).unwrap()] = F::one();
                for i in 0..n {
                    r[idx.position(&w.labels()[i].dot()).unwrap()] = a[i][j].clone();
                }
                r
            })
            .collect();
        Genaut { space: Space::from_generators(idx, rows), w: w.clone() }
    }

    pub fn w(&self) -> &IndexSet {
        &self.w
    }
    pub fn wdot(&self) -> IndexSet {
        self.w.dotted()
    }
    pub fn dim(&self) -> usize {
        self.w.len()
    }
    /// `V∘W`.
    pub fn dom(&self) -> Space<F> {
        self.space.restrict(&self.w).unwrap()
    }
    /// `V×W`.
    pub fn dom_cross(&self) -> Space<F> {
        self.space.contract(&self.w).unwrap()
    }
    /// `V∘Ẇ`.
    pub fn img(&self) -> Space<F> {
        self.space.restrict(&self.wdot()).unwrap()
    }
    /// `V×Ẇ`.
    pub fn img_cross(&self) -> Space<F> {
        self.space.contract(&self.wdot()).unwrap()
    }
    pub(crate) fn with_space(&self, space: Space<F>) -> Self {
        Genaut { space, w: self.w.clone() }
    }
}

/// USG/LSG/genop/decoupled flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenautClass {
    pub usg: bool,
    pub lsg: bool,
    pub genop: bool,
    pub decoupled: bool,
}

pub fn is_usg<F: Field>(v: &Genaut<F>) -> bool {
    v.dom().geq(&undot(&v.img()))
}

pub fn is_lsg<F: Field>(v: &Genaut<F>) -> bool {
    v.dom_cross().geq(&undot(&v.img_cross()))
}

pub fn classify<F: Field>(v: &Genaut<F>) -> GenautClass {
    let (usg, lsg) = (is_usg(v), is_lsg(v));
    GenautClass { usg, lsg, genop: usg && lsg, decoupled: is_decoupled_genaut(v) }
}

pub fn is_genop<F: Field>(v: &Genaut<F>) -> bool {
    is_usg(v) && is_lsg(v)
}

pub fn is_decoupled_genaut<F: Field>(v: &Genaut<F>) -> bool {
    is_decoupled(&v.space, &[v.w.clone(), v.wdot()])
}

/// `V∘W ⊕ V×Ẇ`.
pub fn zero_of<F: Field>(v: &Genaut<F>) -> Genaut<F> {
    v.with_space(v.dom().sum(&v.img_cross()))
}

/// `V * V' = (V)_{WW₁} ↔ (V')_{W₁Ẇ}` with a fresh dummy copy `W₁`.
pub fn star<F: Field>(v1: &Genaut<F>, v2: &Genaut<F>) -> Result<Genaut<F>> {
    if v1.w != v2.w {
        return Err(IlaError::IndexMismatch("star needs a common W".into()));
    }
    let k = fresh_offset(&v1.space.index().union(v2.space.index()));
    let a = v1.space.rename_with(|l| if l.dotted { l.undot().primed(k) } else { l.clone() })?;
    let b = v2.space.rename_with(|l| if l.dotted { l.clone() } else { l.primed(k) })?;
    Ok(v1.with_space(a.link(&b)))
}

/// `I_WẆ +_Ẇ (V∘W ⊕ V×Ẇ)`.
pub fn power0<F: Field>(v: &Genaut<F>) -> Genaut<F> {
    let pairs: Vec<(Label, Label)> = v.w.iter().map(|l| (l.clone(), l.dot())).collect();
    let id = Space::identity_pairs(&pairs);
    let z = zero_of(v).space;
    v.with_space(intersection_sum(&id, &z, &v.wdot()).expect("same index"))
}

/// `V^(k)`: `V^(0)` for `k = 0`, otherwise the `k`-fold star product.
pub fn power<F: Field>(v: &Genaut<F>, k: usize) -> Genaut<F> {
    if k == 0 {
        return power0(v);
    }
    let mut acc = v.clone();
    for _ in 1..k {
        acc = star(&acc, v).expect("same W");
    }
    acc
}

/// `λ^Ẇ V`.
pub fn scale<F: Field>(lambda: &F, v: &Genaut<F>) -> Genaut<F> {
    v.with_space(scalar_mul(lambda, &v.space, &v.wdot()).expect("Ẇ within index"))
}

/// `V¹ +_Ẇ V²`.
pub fn add<F: Field>(v1: &Genaut<F>, v2: &Genaut<F>) -> Result<Genaut<F>> {
    if v1.w != v2.w {
        return Err(IlaError::IndexMismatch("+_Ẇ needs a common W".into()));
    }
    Ok(v1.with_space(intersection_sum(&v1.space, &v2.space, &v1.wdot())?))
}

/// `p(V) = Σ α_i^Ẇ V^(i)`, every term included, combined by `+_Ẇ`.
pub fn poly_eval<F: Field>(p: &Poly<F>, v: &Genaut<F>) -> Genaut<F> {
    let deg = p.degree().unwrap_or(0);
    let mut pw = power0(v);
    let mut acc = scale(&p.coeff(0), &pw);
    for i in 1..=deg {
        pw = if i == 1 { v.clone() } else { star(&pw, v).expect("same W") };
        acc = add(&acc, &scale(&p.coeff(i), &pw)).expect("same W");
    }
    acc
}

/// Whether `p(V)` is decoupled.
pub fn annihilates<F: Field>(p: &Poly<F>, v: &Genaut<F>) -> bool {
    is_decoupled_genaut(&poly_eval(p, v))
}

/// The quotient `(V∘W)/(V×Ẇ)_W` with the map a genop induces on it.
pub(crate) struct Quotient<F: Field> {
    /// Representatives `c_j` (W coordinates) completing a basis of `K` to one of `D`.
    pub reps: Vec<Vec<F>>,
    /// `K = (V×Ẇ)_W`.
    pub k: Space<F>,
    /// `t[i][j]`: coefficient of `c_i` in the image of `c_j`.
    pub t: Vec<Vec<F>>,
}

/// Column positions of the W and Ẇ coordinates, paired in W order.
pub(crate) fn split_cols<F: Field>(v: &Genaut<F>) -> (Vec<usize>, Vec<usize>) {
    let idx = v.space.index();
    let wc = v.w.iter().map(|l| idx.position(l).unwrap()).collect();
    let dc = v.w.iter().map(|l| idx.position(&l.dot()).unwrap()).collect();
    (wc, dc)
}

/// Full row on `W ⊎ Ẇ` holding `x` on W and `y` (given in W order) on Ẇ.
pub(crate) fn pair_row<F: Field>(v: &Genaut<F>, x: &[F], y: &[F]) -> Vec<F> {
    let (wc, dc) = split_cols(v);
    let mut r = vec![F::zero(); v.space.index().len()];
    for (i, (&a, &b)) in wc.iter().zip(&dc).enumerate() {
        r[a] = x[i].clone();
        r[b] = y[i].clone();
    }
    r
}

/// Genaut spanned by `(x, y)` pairs plus an extra space on `W ⊎ Ẇ`.
pub(crate) fn span_pairs<F: Field>(like: &Genaut<F>, pairs: &[(Vec<F>, Vec<F>)], extra: &Space<F>) -> Genaut<F> {
    let rows = pairs.iter().map(|(x, y)| pair_row(like, x, y)).collect();
    like.with_space(Space::from_generators(like.space.index().clone(), rows).sum(extra))
}

/// Some `y` with `(x, y) ∈ V`, in W coordinates (pivot solution).
pub(crate) fn partner<F: Field>(v: &Genaut<F>, x: &[F]) -> Option<Vec<F>> {
    let (wc, dc) = split_cols(v);
    let wparts: Vec<Vec<F>> = v.space.basis().iter().map(|r| wc.iter().map(|&c| r[c].clone()).collect()).collect();
    let a = express(&wparts, x)?;
    let mut y = vec![F::zero(); dc.len()];
    for (coef, r) in a.iter().zip(v.space.basis()) {
        if coef.is_zero() {
            continue;
        }
        for (yi, &c) in y.iter_mut().zip(&dc) {
            *yi = yi.add(&coef.mul(&r[c]));
        }
    }
    Some(y)
}

pub(crate) fn quotient<F: Field>(v: &Genaut<F>) -> Quotient<F> {
    let d = v.dom();
    let k = undot(&v.img_cross());
    let mut span = k.clone();
    let mut reps = Vec::new();
    for r in d.basis() {
        if !span.contains_coords(r) {
            reps.push(r.clone());
            span = span.sum(&Space::from_generators(span.index().clone(), vec![r.clone()]));
        }
    }
    let mut gens = reps.clone();
    gens.extend(k.basis().iter().cloned());
    let m = reps.len();
    let mut t = vec![vec![F::zero(); m]; m];
    for (j, c) in reps.iter().enumerate() {
        let y = partner(v, c).expect("rep lies in V∘W");
        let a = express(&gens, &y).expect("genop maps V∘W into itself");
        for i in 0..m {
            t[i][j] = a[i].clone();
        }
    }
    Quotient { reps, k, t }
}

fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| a[i].iter().zip(b).fold(F::zero(), |acc, (x, row)| acc.add(&x.mul(&row[j]))))
                .collect()
        })
        .collect()
}

/// Minimal polynomial of a square matrix by Krylov search on its powers.
pub fn matrix_minpoly<F: Field>(t: &[Vec<F>]) -> Poly<F> {
    let m = t.len();
    let ident: Vec<Vec<F>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    let flat = |x: &Vec<Vec<F>>| x.iter().flatten().cloned().collect::<Vec<F>>();
    let mut gens: Vec<Vec<F>> = Vec::new();
    let mut pw = ident;
    loop {
        let v = flat(&pw);
        if let Some(a) = express(&gens, &v) {
            let mut c: Vec<F> = a.iter().map(Field::neg).collect();
            c.push(F::one());
            return Poly::new(c);
        }
        gens.push(v);
        pw = mat_mul(t, &pw);
    }
}

/// Minimal annihilating polynomial allowing degree 0 (the constant `1`
/// when the quotient is trivial).
pub fn essential_minpoly<F: Field>(v: &Genaut<F>) -> Result<Poly<F>> {
    if !is_genop(v) {
        return Err(IlaError::NotGenop);
    }
    Ok(matrix_minpoly(&quotient(v).t))
}

/// Monic annihilating polynomial of degree exactly `d`, found from the
/// star powers `V^(0..=d)`, if one exists.
pub fn annihilator_of_degree<F: Field>(v: &Genaut<F>, d: usize) -> Option<Poly<F>> {
    let qt = quotient(v);
    let mut powers = vec![power0(v)];
    for i in 1..=d {
        powers.push(if i == 1 { v.clone() } else { star(&powers[i - 1], v).ok()? });
    }
    // Images of every representative under each power, reduced mod K.
    let images: Vec<Vec<F>> = powers
        .iter()
        .map(|pw| {
            qt.reps
                .iter()
                .flat_map(|c| qt.k.reduce(&partner(pw, c).expect("same domain")))
                .collect()
        })
        .collect();
    let target: Vec<F> = images[d].iter().map(Field::neg).collect();
    let a = express(&images[..d], &target)?;
    let mut c = a;
    c.push(F::one());
    Some(Poly::new(c))
}

/// Unique monic annihilating polynomial of least degree `≥ 1`, certified
/// by direct evaluation and a one-step-lower search.
pub fn minimal_annihilating_poly<F: Field>(v: &Genaut<F>) -> Result<Poly<F>> {
    let mut p = essential_minpoly(v)?;
    if p.degree() == Some(0) {
        p = Poly::monomial(1);
    }
    if !annihilates(&p, v) {
        return Err(IlaError::Certification(format!("{p} does not annihilate")));
    }
    let deg = p.degree().unwrap();
    if deg >= 2 && annihilator_of_degree(v, deg - 1).is_some() {
        return Err(IlaError::Certification(format!("a degree {} annihilator exists", deg - 1)));
    }
    Ok(p)
}

/// `V^a = {(W: g_Ẇ, Ẇ: −g_W) : g ∈ V^⊥}`.
pub fn adjoint<F: Field>(v: &Genaut<F>) -> Genaut<F> {
    let s = v.space.perp().sign_flip(&v.w).unwrap().rename_with(Label::toggle_dot).unwrap();
    v.with_space(s)
}

/// A space on `W ⊎ Ẇ ⊎ M`, optionally with `M = Mu ⊎ My`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gds<F: Field> {
    pub space: Space<F>,
    w: IndexSet,
    m: IndexSet,
    io: Option<(IndexSet, IndexSet)>,
}

impl<F: Field> Gds<F> {
    pub fn new(space: Space<F>, w: IndexSet, m: IndexSet) -> Result<Self> {
        if w.iter().any(|l| l.dotted) {
            return Err(IlaError::BadPartition("W labels must be undotted".into()));
        }
        let dyn_part = w.union(&w.dotted());
        if !dyn_part.is_disjoint(&m) || space.index() != &dyn_part.union(&m) {
            return Err(IlaError::BadPartition("index is not W ⊎ Ẇ ⊎ M".into()));
        }
        Ok(Gds { space, w, m, io: None })
    }

    pub fn with_io(space: Space<F>, w: IndexSet, mu: IndexSet, my: IndexSet) -> Result<Self> {
        if !mu.is_disjoint(&my) {
            return Err(IlaError::BadPartition("Mu and My overlap".into()));
        }
        let mut g = Gds::new(space, w, mu.union(&my))?;
        g.io = Some((mu, my));
        Ok(g)
    }

    /// `ẇ = A w + B u`, `y = C w + D u`. Matrices index states, inputs and
    /// outputs in the canonical order of `w`, `mu`, `my`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_state_space(
        w: &IndexSet,
        mu: &IndexSet,
        my: &IndexSet,
        a: &[Vec<F>],
        b: &[Vec<F>],
        c: &[Vec<F>],
        d: &[Vec<F>],
    ) -> Result<Self> {
        let idx = w.union(&w.dotted()).union(mu).union(my);
        let mut rows = Vec::new();
        let n = w.len();
        let col = |l: &Label| idx.position(l).unwrap();
        let mut push = |src: &Label, j: usize, from_state: bool| {
            let mut r = vec![F::zero(); idx.len()];
            r[col(src)] = F::one();
            for i in 0..n {
                let x = if from_state { &a[i][j] } else { &b[i][j] };
                r[col(&w.labels()[i].dot())] = x.clone();
            }
            for (i, yl) in my.iter().enumerate() {
                let x = if from_state { &c[i][j] } else { &d[i][j] };
                r[col(yl)] = x.clone();
            }
            rows.push(r);
        };
        for (j, l) in w.iter().enumerate() {
            push(l, j, true);
        }
        for (j, l) in mu.iter().enumerate() {
            push(l, j, false);
        }
        Gds::with_io(Space::from_generators(idx, rows), w.clone(), mu.clone(), my.clone())
    }

    pub fn w(&self) -> &IndexSet {
        &self.w
    }
    pub fn wdot(&self) -> IndexSet {
        self.w.dotted()
    }
    pub fn m(&self) -> &IndexSet {
        &self.m
    }
    pub fn io(&self) -> Option<&(IndexSet, IndexSet)> {
        self.io.as_ref()
    }
    pub fn io_or_err(&self) -> Result<(&IndexSet, &IndexSet)> {
        self.io.as_ref().map(|(u, y)| (u, y)).ok_or_else(|| IlaError::BadPartition("GDS has no Mu/My split".into()))
    }
    /// `W ⊎ Ẇ`.
    pub fn dyn_index(&self) -> IndexSet {
        self.w.union(&self.wdot())
    }
    /// The genaut with manifest variables left free: `V∘WẆ`.
    pub fn genaut_free(&self) -> Genaut<F> {
        Genaut { space: self.space.restrict(&self.dyn_index()).unwrap(), w: self.w.clone() }
    }
    /// The genaut with manifest variables forced to zero: `V×WẆ`.
    pub fn genaut_zero(&self) -> Genaut<F> {
        Genaut { space: self.space.contract(&self.dyn_index()).unwrap(), w: self.w.clone() }
    }
    /// `V ↔ V_M`.
    pub fn genaut_under(&self, v_m: &Space<F>) -> Result<Genaut<F>> {
        if v_m.index() != &self.m {
            return Err(IlaError::IndexMismatch("V_M must live on M".into()));
        }
        Genaut::new(self.space.link(v_m), self.w.clone())
    }
    /// The genaut with inputs at zero and outputs free.
    pub fn genaut_autonomous(&self) -> Result<Genaut<F>> {
        if self.m.is_empty() {
            return Ok(self.genaut_free());
        }
        let (mu, my) = self.io_or_err()?;
        let v_m = Space::zero(mu.clone()).direct_sum(&Space::full(my.clone()))?;
        self.genaut_under(&v_m)
    }
    pub fn is_regular(&self) -> bool {
        let wd = self.wdot();
        let dom = self.space.restrict(&self.w).unwrap();
        let img = undot(&self.space.restrict(&wd).unwrap());
        let domx = self.space.contract(&self.w).unwrap();
        let imgx = undot(&self.space.contract(&wd).unwrap());
        dom.geq(&img) && domx.geq(&imgx)
    }
    pub fn with_space(&self, space: Space<F>) -> Self {
        Gds { space, ..self.clone() }
    }
}

/// Adjoint GDS: the Mu and My roles swap, original input labels carry the
/// negated dual values.
pub fn adjoint_gds<F: Field>(v: &Gds<F>) -> Result<Gds<F>> {
    let (mu, my) = v.io_or_err()?;
    let flip = v.w.union(mu);
    let s = v
        .space
        .perp()
        .sign_flip(&flip)?
        .rename_with(|l| if mu.contains(l) || my.contains(l) { l.clone() } else { l.toggle_dot() })?;
    Gds::with_io(s, v.w.clone(), my.clone(), mu.clone())
}
