//! State feedback and output injection in relational form, and pole
//! placement through basic sequences.

use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::genop::{
    adjoint, adjoint_gds, annihilates, dot, essential_minpoly, is_genop, is_usg, partner, span_pairs, undot, Gds,
    Genaut,
};
use crate::invariant::is_conditioned_invariant;
use crate::label::IndexSet;
use crate::poly::Poly;
use crate::space::{express, IndexedVector, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    /// Law on `W ⊎ Mu`, applied by intersection then restriction.
    Feedback,
    /// Law on `Ẇ ⊎ My`, applied by sum then contraction.
    Injection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackLaw<F: Field> {
    pub linkage: Space<F>,
    pub kind: LawKind,
    /// No other law produces the same target.
    pub unique: bool,
}

/// Existence test with its two halves and, on failure of the first, a
/// target vector the source cannot reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability<F: Field> {
    pub exists: bool,
    pub restriction_ok: bool,
    pub contraction_ok: bool,
    pub witness: Option<IndexedVector<F>>,
}

fn witness<F: Field>(small: &Space<F>, big: &Space<F>) -> Option<IndexedVector<F>> {
    small
        .basis()
        .iter()
        .find(|r| !big.contains_coords(r))
        .map(|r| IndexedVector::new(small.index().clone(), r.clone()))
}

fn check_target<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<()> {
    if src.w() != target.w() {
        return Err(IlaError::IndexMismatch("source and target disagree on W".into()));
    }
    Ok(())
}

/// `V∘WẆMu`.
fn src_u<F: Field>(src: &Gds<F>) -> Result<Space<F>> {
    let (mu, _) = src.io_or_err()?;
    src.space.restrict(&src.dyn_index().union(mu))
}

/// `V×WẆMy`.
fn src_y<F: Field>(src: &Gds<F>) -> Result<Space<F>> {
    let (_, my) = src.io_or_err()?;
    src.space.contract(&src.dyn_index().union(my))
}

pub fn feedback_check<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<Reachability<F>> {
    check_target(src, target)?;
    let vu = src_u(src)?;
    let free = src.genaut_free().space;
    let restriction_ok = free.geq(&target.space);
    let contraction_ok = vu.contract(&src.wdot())?.leq(&target.img_cross());
    Ok(Reachability {
        exists: restriction_ok && contraction_ok,
        restriction_ok,
        contraction_ok,
        witness: if restriction_ok { None } else { witness(&target.space, &free) },
    })
}

pub fn feedback_exists<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<bool> {
    Ok(feedback_check(src, target)?.exists)
}

/// `(V∘WẆMu ∩ law)∘WẆ`.
pub fn feedback_apply<F: Field>(src: &Gds<F>, law: &Space<F>) -> Result<Genaut<F>> {
    let (mu, _) = src.io_or_err()?;
    if law.index() != &src.w().union(mu) {
        return Err(IlaError::IndexMismatch("feedback law must live on W ⊎ Mu".into()));
    }
    Genaut::new(src_u(src)?.intersect(law).restrict(&src.dyn_index())?, src.w().clone())
}

/// `(V ∩ target)∘WMu`, certified by re-application.
pub fn feedback_recover<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<FeedbackLaw<F>> {
    let chk = feedback_check(src, target)?;
    if !chk.exists {
        let why = if chk.restriction_ok { "contraction condition fails" } else { "target ⊄ V∘WẆ" };
        return Err(IlaError::NotReachableByFeedback(why.into()));
    }
    let (mu, _) = src.io_or_err()?;
    let vu = src_u(src)?;
    let law = vu.intersect(&target.space).restrict(&src.w().union(mu))?;
    if feedback_apply(src, &law)? != *target {
        return Err(IlaError::Certification("recovered feedback law does not reproduce the target".into()));
    }
    let unique = vu.restrict(&src.w().union(mu))?.is_full() && vu.contract(mu)?.is_zero_space();
    Ok(FeedbackLaw { linkage: law, kind: LawKind::Feedback, unique })
}

pub fn injection_check<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<Reachability<F>> {
    check_target(src, target)?;
    let vy = src_y(src)?;
    let zero = src.genaut_zero().space;
    let contraction_ok = zero.leq(&target.space);
    let restriction_ok = vy.restrict(src.w())?.geq(&target.dom());
    Ok(Reachability {
        exists: restriction_ok && contraction_ok,
        restriction_ok,
        contraction_ok,
        witness: if contraction_ok { None } else { witness(&zero, &target.space) },
    })
}

pub fn injection_exists<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<bool> {
    Ok(injection_check(src, target)?.exists)
}

/// `(V×WẆMy + law)×WẆ`.
pub fn injection_apply<F: Field>(src: &Gds<F>, law: &Space<F>) -> Result<Genaut<F>> {
    let (_, my) = src.io_or_err()?;
    if law.index() != &src.wdot().union(my) {
        return Err(IlaError::IndexMismatch("injection law must live on Ẇ ⊎ My".into()));
    }
    Genaut::new(src_y(src)?.sum(law).contract(&src.dyn_index())?, src.w().clone())
}

/// `(V×WẆMy + target)×ẆMy`, certified by re-application.
pub fn injection_recover<F: Field>(src: &Gds<F>, target: &Genaut<F>) -> Result<FeedbackLaw<F>> {
    let chk = injection_check(src, target)?;
    if !chk.exists {
        let why = if chk.contraction_ok { "restriction condition fails" } else { "V×WẆ ⊄ target" };
        return Err(IlaError::NotReachableByInjection(why.into()));
    }
    let (_, my) = src.io_or_err()?;
    let vy = src_y(src)?;
    let law = vy.sum(&target.space).contract(&src.wdot().union(my))?;
    if injection_apply(src, &law)? != *target {
        return Err(IlaError::Certification("recovered injection law does not reproduce the target".into()));
    }
    let unique = vy.contract(&src.wdot().union(my))?.is_zero_space() && vy.restrict(my)?.is_full();
    Ok(FeedbackLaw { linkage: law, kind: LawKind::Injection, unique })
}

/// Translate a law between a GDS and its adjoint. Feedback laws on
/// `W ⊎ Mu` and injection laws on `Ẇ ⊎ My` correspond through `⊥` and the
/// dot toggle on state labels.
pub fn dual_law<F: Field>(law: &FeedbackLaw<F>, w: &IndexSet) -> FeedbackLaw<F> {
    let kind = match law.kind {
        LawKind::Feedback => LawKind::Injection,
        LawKind::Injection => LawKind::Feedback,
    };
    let state = w.union(&w.dotted());
    let linkage = law
        .linkage
        .perp()
        .rename_with(|l| if state.contains(l) { l.toggle_dot() } else { l.clone() })
        .expect("dot toggle on state labels is injective");
    FeedbackLaw { linkage, kind, unique: law.unique }
}

/// A Krylov-like chain `x⁰ … x^k` in a USG together with the genop it spans.
#[derive(Clone, Debug)]
pub struct BasicSequence<F: Field> {
    /// `x⁰ … x^k` in W coordinates; empty when `k = 0`.
    pub vectors: Vec<Vec<F>>,
    pub k: usize,
    /// `V¹×W ∩ (V¹×Ẇ)_W`.
    pub vcom: Space<F>,
    /// `span{x⁰ … x^{k−1}} + vcom`, the minimal invariant space.
    pub vw: Space<F>,
    /// `span{(x^j, x^{j+1})} + vcom ⊕ (vcom)_Ẇ`.
    pub genop: Genaut<F>,
    /// Monic, degree `k`: `x^k + Σ b_i x^i ∈ vcom`.
    pub poly: Poly<F>,
}

impl<F: Field> BasicSequence<F> {
    pub fn essential_rank(&self) -> usize {
        self.k
    }
    pub fn indexed(&self, w: &IndexSet) -> Vec<IndexedVector<F>> {
        self.vectors.iter().map(|x| IndexedVector::new(w.clone(), x.clone())).collect()
    }
}

fn units<F: Field>(n: usize) -> impl Iterator<Item = Vec<F>> {
    (0..n).map(move |i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
}

fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn with_row<F: Field>(s: &Space<F>, r: &[F]) -> Space<F> {
    s.sum(&Space::from_generators(s.index().clone(), vec![r.to_vec()]))
}

/// `V^com` and `(V¹×Ẇ)_W`.
fn common_parts<F: Field>(v1: &Genaut<F>) -> (Space<F>, Space<F>) {
    let cross_dot = undot(&v1.img_cross());
    (v1.dom_cross().intersect(&cross_dot), cross_dot)
}

/// `vcom ⊕ (vcom)_Ẇ`.
fn vcom_block<F: Field>(vcom: &Space<F>) -> Space<F> {
    vcom.direct_sum(&dot(vcom)).expect("W and Ẇ are disjoint")
}

/// Deterministic basic sequence. Candidates are scanned as unit vectors
/// first, then basis rows; affine picks start from the pivot solution.
pub fn basic_sequence<F: Field>(v1: &Genaut<F>) -> Result<BasicSequence<F>> {
    if !is_usg(v1) {
        return Err(IlaError::NotUsg);
    }
    let n = v1.dim();
    let (vcom, cross_dot) = common_parts(v1);
    let cross_w = v1.dom_cross();
    let seed = units::<F>(n)
        .chain(cross_dot.basis().iter().cloned())
        .find(|x| cross_dot.contains_coords(x) && !cross_w.contains_coords(x))
        .ok_or(IlaError::NothingToPlace)?;
    let mut xs = vec![seed];
    let mut span = with_row(&vcom, &xs[0]);
    let last = loop {
        let cur = xs.last().unwrap();
        let p = partner(v1, cur).ok_or_else(|| IlaError::Certification("sequence left V¹∘W".into()))?;
        let next = std::iter::once(p.clone())
            .chain(units::<F>(n).filter(|u| cross_dot.contains_coords(u)).map(|u| add_vec(&p, &u)))
            .chain(cross_dot.basis().iter().map(|b| add_vec(&p, b)))
            .find(|c| !span.contains_coords(c));
        match next {
            Some(c) => {
                span = with_row(&span, &c);
                xs.push(c);
            }
            None => break p,
        }
    };
    let k = xs.len();
    let mut gens = xs.clone();
    gens.extend(vcom.basis().iter().cloned());
    let a = express(&gens, &last).ok_or_else(|| IlaError::Certification("x^k outside the span".into()))?;
    let mut coeffs: Vec<F> = a[..k].iter().map(Field::neg).collect();
    coeffs.push(F::one());
    xs.push(last);
    let pairs: Vec<(Vec<F>, Vec<F>)> = (0..k).map(|j| (xs[j].clone(), xs[j + 1].clone())).collect();
    let genop = span_pairs(v1, &pairs, &vcom_block(&vcom));
    if !genop.space.leq(&v1.space) {
        return Err(IlaError::Certification("V^start ⊄ V¹".into()));
    }
    Ok(BasicSequence { vectors: xs, k, vcom, vw: span, genop, poly: Poly::new(coeffs) })
}

/// The `k = 0` sequence of a USG without a seed: `V_W = V^com`.
fn empty_sequence<F: Field>(v1: &Genaut<F>) -> BasicSequence<F> {
    let (vcom, _) = common_parts(v1);
    let genop = v1.with_space(vcom_block(&vcom));
    BasicSequence { vectors: vec![], k: 0, vw: vcom.clone(), vcom, genop, poly: Poly::one() }
}

/// Replace the sequence by `y^j = Σ_{i≤j} λ_i x^{j−i}` (with `λ_0 = 1`) so
/// that its genop is annihilated by the monic `c`.
pub fn retarget<F: Field>(seq: &BasicSequence<F>, v1: &Genaut<F>, c: &Poly<F>) -> Result<BasicSequence<F>> {
    let k = seq.k;
    let got = c.degree().unwrap_or(0);
    if got != k || !c.is_monic() {
        return Err(IlaError::DegreeMismatch { expected: k, got });
    }
    if k == 0 {
        return Ok(seq.clone());
    }
    let b = &seq.poly;
    let mut lam = vec![F::one()];
    for i in (0..k).rev() {
        let mut v = b.coeff(i);
        for j in i..k {
            v = v.sub(&c.coeff(j).mul(&lam[j - i]));
        }
        lam.push(v);
    }
    let n = seq.vectors[0].len();
    let ys: Vec<Vec<F>> = (0..=k)
        .map(|j| {
            (0..=j).fold(vec![F::zero(); n], |acc, i| {
                acc.iter().zip(&seq.vectors[j - i]).map(|(a, x)| a.add(&lam[i].mul(x))).collect()
            })
        })
        .collect();
    let pairs: Vec<(Vec<F>, Vec<F>)> = (0..k).map(|j| (ys[j].clone(), ys[j + 1].clone())).collect();
    let genop = span_pairs(v1, &pairs, &vcom_block(&seq.vcom));
    if !genop.space.leq(&v1.space) {
        return Err(IlaError::Certification("V^end ⊄ V¹".into()));
    }
    if !annihilates(c, &genop) {
        return Err(IlaError::Certification(format!("{c} does not annihilate V^end")));
    }
    let mut vw = seq.vcom.clone();
    for y in &ys[..k] {
        vw = with_row(&vw, y);
    }
    Ok(BasicSequence { vectors: ys, k, vcom: seq.vcom.clone(), vw, genop, poly: c.clone() })
}

/// Extend `V^end` to a genop with the full domain `V¹∘W` by adding pairs
/// `(u, v) ∈ V¹` with `u` independent of the current domain.
pub fn grow_to_full<F: Field>(vend: &Genaut<F>, v1: &Genaut<F>) -> Result<Genaut<F>> {
    if !vend.space.leq(&v1.space) {
        return Err(IlaError::NotInvariant("V^end ⊄ V¹".into()));
    }
    if !is_conditioned_invariant(&vend.dom(), v1)? {
        return Err(IlaError::NotInvariant("V^end∘W is not conditioned invariant in V¹".into()));
    }
    let d1 = v1.dom();
    let mut dom = vend.dom();
    let mut pairs = Vec::new();
    let cands: Vec<Vec<F>> =
        units::<F>(v1.dim()).filter(|u| d1.contains_coords(u)).chain(d1.basis().iter().cloned()).collect();
    for u in cands {
        if dom.contains_coords(&u) {
            continue;
        }
        let v = partner(v1, &u).expect("u lies in V¹∘W");
        dom = with_row(&dom, &u);
        pairs.push((u, v));
    }
    let out = span_pairs(vend, &pairs, &vend.space);
    if !is_genop(&out) {
        return Err(IlaError::Certification("grown space is not a genop".into()));
    }
    Ok(out)
}

/// Result of a successful placement.
#[derive(Clone, Debug)]
pub struct Placement<F: Field> {
    pub law: FeedbackLaw<F>,
    /// Closed loop: the source under the law.
    pub achieved: Genaut<F>,
    /// Factor fixed by the source, `p_u`.
    pub fixed: Poly<F>,
    /// Placed factor of degree equal to the essential rank.
    pub placed: Poly<F>,
    pub sequence: BasicSequence<F>,
}

/// The fixed factor `p_u` and basic sequence of a source GDS.
pub fn placement_data<F: Field>(src: &Gds<F>) -> Result<(BasicSequence<F>, Poly<F>)> {
    let v1 = src.genaut_free();
    if !is_usg(&v1) {
        return Err(IlaError::NotUsg);
    }
    let seq = match basic_sequence(&v1) {
        Ok(s) => s,
        Err(IlaError::NothingToPlace) => empty_sequence(&v1),
        Err(e) => return Err(e),
    };
    let quotient = v1.with_space(v1.space.sum(&vcom_block_any(&seq.vw)));
    let pu = essential_minpoly(&quotient)?;
    Ok((seq, pu))
}

fn vcom_block_any<F: Field>(vw: &Space<F>) -> Space<F> {
    vw.direct_sum(&dot(vw)).expect("W and Ẇ are disjoint")
}

/// Find a `W ⊎ Mu` feedback law whose closed loop is annihilated by `target`.
pub fn place_poles<F: Field>(src: &Gds<F>, target: &Poly<F>) -> Result<Placement<F>> {
    if target.is_zero() {
        return Err(IlaError::DegreeMismatch { expected: 1, got: 0 });
    }
    let target = target.monic();
    let v1 = src.genaut_free();
    let (seq, pu) = placement_data(src)?;
    let placed = target.exact_div(&pu).ok_or_else(|| IlaError::UnplaceableFactor { factor: pu.to_string() })?;
    let got = placed.degree().unwrap_or(0);
    if got != seq.k {
        return Err(IlaError::DegreeMismatch { expected: seq.k + pu.degree().unwrap_or(0), got: target.degree().unwrap_or(0) });
    }
    let end = retarget(&seq, &v1, &placed)?;
    let full = grow_to_full(&end.genop, &v1)?;
    let law = feedback_recover(src, &full)?;
    let achieved = feedback_apply(src, &law.linkage)?;
    if !annihilates(&target, &achieved) {
        return Err(IlaError::Certification(format!("{target} does not annihilate the closed loop")));
    }
    Ok(Placement { law, achieved, fixed: pu, placed, sequence: end })
}

/// Dual placement: place on the adjoint, then carry the law back as an
/// output injection.
pub fn place_poles_injection<F: Field>(src: &Gds<F>, target: &Poly<F>) -> Result<Placement<F>> {
    let adj = adjoint_gds(src)?;
    let mut pl = place_poles(&adj, target)?;
    let law = dual_law(&pl.law, src.w());
    let achieved = injection_apply(src, &law.linkage)?;
    if achieved != adjoint(&pl.achieved) {
        return Err(IlaError::Certification("injection law disagrees with the adjoint closed loop".into()));
    }
    pl.law = law;
    pl.achieved = achieved;
    Ok(pl)
}
