//! E-linkage pairs between dynamical systems, the transfer of polynomials,
//! invariant subspaces and control laws across them, and the topological
//! emulator of an RLC network.

use crate::control::{feedback_apply, injection_apply};
use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::genop::{adjoint_gds, dot, is_decoupled_genaut, poly_eval, undot, Gds, Genaut};
use crate::graph::{min_port_count, multiport_decompose, DirectedGraph, MultiportDecomposition};
use crate::invariant::{is_conditioned_invariant, is_controlled_invariant};
use crate::label::{IndexSet, Label};
use crate::network::{current_space, ilabs, vlabs, voltage_space, DeviceKind, Network};
use crate::poly::Poly;
use crate::space::{express, Space};

/// `{V¹ on W ⊎ P, V² on Ẇ ⊎ Ṗ}` with `V¹ ⊇ (V²)` undotted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ELinkagePair<F: Field> {
    pub v1: Space<F>,
    pub v2: Space<F>,
    w: IndexSet,
    p: IndexSet,
}

impl<F: Field> ELinkagePair<F> {
    pub fn new(v1: Space<F>, v2: Space<F>, w: IndexSet, p: IndexSet) -> Result<Self> {
        if w.iter().chain(p.iter()).any(|l| l.dotted) {
            return Err(IlaError::BadPartition("W and P must be undotted".into()));
        }
        if !w.is_disjoint(&p) {
            return Err(IlaError::BadPartition("W and P overlap".into()));
        }
        let wp = w.union(&p);
        if v1.index() != &wp || v2.index() != &wp.dotted() {
            return Err(IlaError::IndexMismatch("pair spaces must live on W ⊎ P and Ẇ ⊎ Ṗ".into()));
        }
        if !v1.geq(&undot(&v2)) {
            return Err(IlaError::NotLinked);
        }
        Ok(ELinkagePair { v1, v2, w, p })
    }

    /// `I_WP` and its dotted copy, where `P = copy(W)`.
    pub fn identity(w: &IndexSet, copy: impl Fn(&Label) -> Label) -> Result<Self> {
        let pairs: Vec<(Label, Label)> = w.iter().map(|l| (l.clone(), copy(l))).collect();
        let p = IndexSet::new(pairs.iter().map(|(_, b)| b.clone()).collect());
        let v1 = Space::identity_pairs(&pairs);
        ELinkagePair::new(v1.clone(), dot(&v1), w.clone(), p)
    }

    pub fn w(&self) -> &IndexSet {
        &self.w
    }
    pub fn p(&self) -> &IndexSet {
        &self.p
    }
    /// `V¹ ⊕ V²`.
    pub fn block(&self) -> Space<F> {
        self.v1.direct_sum(&self.v2).expect("pair blocks are disjoint")
    }
    /// The same pair read from the `P` side.
    pub fn reversed(&self) -> Self {
        ELinkagePair { v1: self.v1.clone(), v2: self.v2.clone(), w: self.p.clone(), p: self.w.clone() }
    }
}

/// One of the eight dot-cross conditions, with whether it is tight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DotCrossCondition {
    pub name: &'static str,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotCross {
    pub conditions: [DotCrossCondition; 8],
}

impl DotCross {
    pub fn all(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }
    pub fn all_tight(&self) -> bool {
        self.conditions.iter().all(|c| c.holds && c.equality)
    }
    pub fn flags(&self) -> [bool; 8] {
        self.conditions.map(|c| c.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkReport {
    /// `(V¹ ⊕ V²) ↔ V_W = V_P`.
    pub forward: bool,
    /// `(V¹ ⊕ V²) ↔ V_P = V_W`.
    pub backward: bool,
    pub linked: bool,
    pub dotcross: DotCross,
}

/// Which side of a pair a space lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    W,
    P,
}

fn side_of<F: Field>(pair: &ELinkagePair<F>, v: &Space<F>) -> Result<(Side, IndexSet)> {
    let wd = pair.w.union(&pair.w.dotted());
    let pd = pair.p.union(&pair.p.dotted());
    let idx = v.index();
    if wd.is_subset(idx) && idx.is_disjoint(&pd) {
        Ok((Side::W, idx.difference(&wd)))
    } else if pd.is_subset(idx) && idx.is_disjoint(&wd) {
        Ok((Side::P, idx.difference(&pd)))
    } else {
        Err(IlaError::IndexMismatch("space holds neither W ⊎ Ẇ nor P ⊎ Ṗ".into()))
    }
}

/// `(V¹ ⊕ V²) ↔ V`, landing on the other side; manifest variables ride along.
pub fn linkage_apply<F: Field>(pair: &ELinkagePair<F>, v: &Space<F>) -> Result<Space<F>> {
    side_of(pair, v)?;
    Ok(pair.block().link(v))
}

/// [`linkage_apply`] on a GDS, keeping its manifest split.
pub fn linkage_apply_gds<F: Field>(pair: &ELinkagePair<F>, v: &Gds<F>) -> Result<Gds<F>> {
    let (side, _) = side_of(pair, &v.space)?;
    let other = if side == Side::W { pair.p.clone() } else { pair.w.clone() };
    let s = linkage_apply(pair, &v.space)?;
    match v.io() {
        Some((mu, my)) => Gds::with_io(s, other, mu.clone(), my.clone()),
        None => Gds::new(s, other, v.m().clone()),
    }
}

/// [`linkage_apply`] on a genaut.
pub fn linkage_apply_genaut<F: Field>(pair: &ELinkagePair<F>, v: &Genaut<F>) -> Result<Genaut<F>> {
    let (side, _) = side_of(pair, &v.space)?;
    let other = if side == Side::W { pair.p.clone() } else { pair.w.clone() };
    Genaut::new(linkage_apply(pair, &v.space)?, other)
}

fn cond<F: Field>(name: &'static str, pair_part: &Space<F>, sys_part: &Space<F>, sup: bool) -> DotCrossCondition {
    let holds = if sup { pair_part.geq(sys_part) } else { pair_part.leq(sys_part) };
    DotCrossCondition { name, holds, equality: pair_part == sys_part }
}

fn dotcross<F: Field>(pair: &ELinkagePair<F>, vw: &Space<F>, vp: &Space<F>) -> Result<DotCross> {
    let (w, p) = (&pair.w, &pair.p);
    let (wd, pd) = (w.dotted(), p.dotted());
    Ok(DotCross {
        conditions: [
            cond("V1∘W ⊇ V∘W", &pair.v1.restrict(w)?, &vw.restrict(w)?, true),
            cond("V1×W ⊆ V×W", &pair.v1.contract(w)?, &vw.contract(w)?, false),
            cond("V2∘Ẇ ⊇ V∘Ẇ", &pair.v2.restrict(&wd)?, &vw.restrict(&wd)?, true),
            cond("V2×Ẇ ⊆ V×Ẇ", &pair.v2.contract(&wd)?, &vw.contract(&wd)?, false),
            cond("V1∘P ⊇ V∘P", &pair.v1.restrict(p)?, &vp.restrict(p)?, true),
            cond("V1×P ⊆ V×P", &pair.v1.contract(p)?, &vp.contract(p)?, false),
            cond("V2∘Ṗ ⊇ V∘Ṗ", &pair.v2.restrict(&pd)?, &vp.restrict(&pd)?, true),
            cond("V2×Ṗ ⊆ V×Ṗ", &pair.v2.contract(&pd)?, &vp.contract(&pd)?, false),
        ],
    })
}

/// Check both composition directions and the dot-cross conditions. When
/// dot-cross holds, one direction must imply the other; a disagreement is
/// reported as a certification failure.
pub fn elinkage_verify<F: Field>(pair: &ELinkagePair<F>, vw: &Space<F>, vp: &Space<F>) -> Result<LinkReport> {
    let (sw, mw) = side_of(pair, vw)?;
    let (sp, mp) = side_of(pair, vp)?;
    if sw != Side::W || sp != Side::P {
        return Err(IlaError::IndexMismatch("first space must be on the W side, second on the P side".into()));
    }
    if mw != mp {
        return Err(IlaError::IndexMismatch("manifest variables differ".into()));
    }
    let forward = &linkage_apply(pair, vw)? == vp;
    let backward = &linkage_apply(pair, vp)? == vw;
    let dotcross = dotcross(pair, vw, vp)?;
    if dotcross.all() && forward != backward {
        return Err(IlaError::Certification("dot-cross holds but only one direction links".into()));
    }
    Ok(LinkReport { forward, backward, linked: forward && backward, dotcross })
}

fn require_linked<F: Field>(pair: &ELinkagePair<F>, vw: &Space<F>, vp: &Space<F>) -> Result<()> {
    if elinkage_verify(pair, vw, vp)?.linked {
        Ok(())
    } else {
        Err(IlaError::NotLinked)
    }
}

/// From pairs on `W,P` and `W,Q` build the pair on `P,Q`.
pub fn linkage_compose<F: Field>(wp: &ELinkagePair<F>, wq: &ELinkagePair<F>) -> Result<ELinkagePair<F>> {
    if wp.w != wq.w {
        return Err(IlaError::IndexMismatch("pairs must share W".into()));
    }
    if !wp.p.is_disjoint(&wq.p) {
        return Err(IlaError::IndexMismatch("P and Q must be disjoint".into()));
    }
    ELinkagePair::new(wp.v1.link(&wq.v1), wp.v2.link(&wq.v2), wp.p.clone(), wq.p.clone())
}

/// The adjoint pair: `Ṽ¹ = (V²)^⊥` undotted with `W` negated and
/// `Ṽ² = (V¹)^⊥` dotted with `Ṗ` negated.
pub fn adjoint_pair<F: Field>(pair: &ELinkagePair<F>) -> Result<ELinkagePair<F>> {
    let v1 = undot(&pair.v2.perp()).sign_flip(&pair.w)?;
    let v2 = dot(&pair.v1.perp()).sign_flip(&pair.p.dotted())?;
    ELinkagePair::new(v1, v2, pair.w.clone(), pair.p.clone())
        .map_err(|_| IlaError::Certification("adjoint pair violates the side condition".into()))
}

#[derive(Clone, Debug)]
pub struct AdjointTriple<F: Field> {
    pub pair: ELinkagePair<F>,
    pub vw: Gds<F>,
    pub vp: Gds<F>,
}

/// The adjoint pair together with both adjoint GDSs, re-verified as linked.
pub fn linkage_adjoint<F: Field>(pair: &ELinkagePair<F>, vw: &Gds<F>, vp: &Gds<F>) -> Result<AdjointTriple<F>> {
    require_linked(pair, &vw.space, &vp.space)?;
    let apair = adjoint_pair(pair)?;
    let aw = adjoint_gds(vw)?;
    let ap = adjoint_gds(vp)?;
    if !elinkage_verify(&apair, &aw.space, &ap.space)?.linked {
        return Err(IlaError::Certification("adjoint pair does not link the adjoint systems".into()));
    }
    Ok(AdjointTriple { pair: apair, vw: aw, vp: ap })
}

#[derive(Clone, Debug)]
pub struct PolyTransfer<F: Field> {
    pub pw: Genaut<F>,
    pub pp: Genaut<F>,
    pub linked: bool,
    pub decoupled_w: bool,
    pub decoupled_p: bool,
}

/// `V∘X = (V∘Ẋ)` undotted and `V×X = (V×Ẋ)` undotted.
fn dot_balanced<F: Field>(v: &Genaut<F>) -> bool {
    v.dom() == undot(&v.img()) && v.dom_cross() == undot(&v.img_cross())
}

/// Evaluate `p` on both linked genauts and check the results stay linked.
pub fn poly_transfer<F: Field>(pair: &ELinkagePair<F>, vw: &Genaut<F>, vp: &Genaut<F>, p: &Poly<F>) -> Result<PolyTransfer<F>> {
    if !p.coeff(0).is_zero() && !(dot_balanced(vw) && dot_balanced(vp)) {
        return Err(IlaError::TransferConditionsFail(
            "constant term needs V∘W = V∘Ẇ and V×W = V×Ẇ on both sides".into(),
        ));
    }
    require_linked(pair, &vw.space, &vp.space)?;
    let pw = poly_eval(p, vw);
    let pp = poly_eval(p, vp);
    let linked = elinkage_verify(pair, &pw.space, &pp.space)?.linked;
    let (decoupled_w, decoupled_p) = (is_decoupled_genaut(&pw), is_decoupled_genaut(&pp));
    if linked && decoupled_w != decoupled_p {
        return Err(IlaError::Certification("decoupledness did not transfer".into()));
    }
    Ok(PolyTransfer { pw, pp, linked, decoupled_w, decoupled_p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// From a subspace on `W` to one on `P`.
    WToP,
    /// From a subspace on `P` to one on `W`.
    PToW,
}

/// Which induced genops were carried across and checked linked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InducedCase {
    Quotient,
    Restricted,
}

#[derive(Clone, Debug)]
pub struct InvariantTransfer<F: Field> {
    pub image: Space<F>,
    pub conditioned: bool,
    pub controlled: bool,
    /// Present for `P → W` transfers.
    pub induced: Option<InducedCase>,
}

fn kinds<F: Field>(sub: &Space<F>, v: &Genaut<F>) -> Result<(bool, bool)> {
    Ok((is_conditioned_invariant(sub, v)?, is_controlled_invariant(sub, v)?))
}

/// Carry an invariant subspace across a pair.
///
/// `W → P`: the images `V¹ ↔ V_W` and `V² ↔ V_W` (undotted) are both
/// computed and must be invariant of every kind `V_W` is.
///
/// `P → W`: `V_P` must be invariant of both kinds. If
/// `(V¹×W)` dotted equals `V²×Ẇ` and `V_P` dotted lies in `V_PṖ∘Ṗ`, the image
/// is `V² ↔ V_P` and the quotient genops are checked linked; otherwise, if
/// `(V¹∘W)` dotted equals `V²∘Ẇ` and `V_P ⊇ V_PṖ×P`, the image is
/// `V¹ ↔ V_P` and the restricted genops are checked linked.
pub fn invariant_transfer<F: Field>(
    pair: &ELinkagePair<F>,
    vw: &Genaut<F>,
    vp: &Genaut<F>,
    sub: &Space<F>,
    direction: Direction,
) -> Result<InvariantTransfer<F>> {
    require_linked(pair, &vw.space, &vp.space)?;
    match direction {
        Direction::WToP => {
            let (c, k) = kinds(sub, vw)?;
            if !c && !k {
                return Err(IlaError::TransferConditionsFail("subspace is not invariant".into()));
            }
            let image = pair.v1.link(sub);
            let alt = undot(&pair.v2).link(sub);
            for s in [&image, &alt] {
                let (c2, k2) = kinds(s, vp)?;
                if (c && !c2) || (k && !k2) {
                    return Err(IlaError::Certification("image lost invariance".into()));
                }
            }
            Ok(InvariantTransfer { image, conditioned: c, controlled: k, induced: None })
        }
        Direction::PToW => {
            let (c, k) = kinds(sub, vp)?;
            if !(c && k) {
                return Err(IlaError::TransferConditionsFail("subspace must be conditioned and controlled invariant".into()));
            }
            let (w, wd) = (&pair.w, pair.w.dotted());
            let case_a = dot(&pair.v1.contract(w)?) == pair.v2.contract(&wd)? && dot(sub).leq(&vp.img());
            let case_b = dot(&pair.v1.restrict(w)?) == pair.v2.restrict(&wd)? && sub.geq(&vp.dom_cross());
            let (image, case) = if case_a {
                let image = undot(&pair.v2).link(sub);
                if image != pair.v1.link(sub) {
                    return Err(IlaError::Certification("the two images differ".into()));
                }
                (image, InducedCase::Quotient)
            } else if case_b {
                let image = pair.v1.link(sub);
                if dot(&image) != pair.v2.link(&dot(sub)) {
                    return Err(IlaError::Certification("dotted image mismatch".into()));
                }
                (image, InducedCase::Restricted)
            } else {
                return Err(IlaError::TransferConditionsFail("neither hypothesis set holds".into()));
            };
            let (c2, k2) = kinds(&image, vw)?;
            if !(c2 && k2) {
                return Err(IlaError::Certification("image is not invariant".into()));
            }
            let bw = image.direct_sum(&dot(&image))?;
            let bp = sub.direct_sum(&dot(sub))?;
            let (gw, gp) = match case {
                InducedCase::Quotient => (vw.space.sum(&bw), vp.space.sum(&bp)),
                InducedCase::Restricted => (vw.space.intersect(&bw), vp.space.intersect(&bp)),
            };
            if !elinkage_verify(pair, &gw, &gp)?.linked {
                return Err(IlaError::Certification("induced genops are not linked".into()));
            }
            Ok(InvariantTransfer { image, conditioned: true, controlled: true, induced: Some(case) })
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawTransfer<F: Field> {
    /// The law on the emulator side.
    pub law: Space<F>,
    pub closed_w: Genaut<F>,
    pub closed_p: Genaut<F>,
}

/// Move a feedback law on `W ⊎ Mu` to `P ⊎ Mu` and certify that closing the
/// loop on either side gives linked genauts.
pub fn feedback_transfer<F: Field>(pair: &ELinkagePair<F>, src: &Gds<F>, law: &Space<F>) -> Result<LawTransfer<F>> {
    let (mu, _) = src.io_or_err()?;
    let w = &pair.w;
    let keep = src.dyn_index().union(mu);
    if !pair.v1.contract(w)?.leq(&src.space.restrict(&keep)?.contract(w)?) {
        return Err(IlaError::TransferConditionsFail("V¹×W is not inside the source's W-cross space".into()));
    }
    let emu = linkage_apply_gds(pair, src)?;
    let law_p = law.link(&pair.v1);
    let closed_w = feedback_apply(src, law)?;
    let closed_p = feedback_apply(&emu, &law_p)?;
    if linkage_apply(pair, &closed_w.space)? != closed_p.space {
        return Err(IlaError::Certification("closed loops are not linked".into()));
    }
    Ok(LawTransfer { law: law_p, closed_w, closed_p })
}

/// The injection analogue on `Ẇ ⊎ My`.
pub fn injection_transfer<F: Field>(pair: &ELinkagePair<F>, src: &Gds<F>, law: &Space<F>) -> Result<LawTransfer<F>> {
    let (_, my) = src.io_or_err()?;
    let wd = pair.w.dotted();
    let keep = src.dyn_index().union(my);
    if !pair.v2.restrict(&wd)?.geq(&src.space.contract(&keep)?.restrict(&wd)?) {
        return Err(IlaError::TransferConditionsFail("V²∘Ẇ does not cover the source's Ẇ-dot space".into()));
    }
    let emu = linkage_apply_gds(pair, src)?;
    let law_p = law.link(&pair.v2);
    let closed_w = injection_apply(src, law)?;
    let closed_p = injection_apply(&emu, &law_p)?;
    if linkage_apply(pair, &closed_w.space)? != closed_p.space {
        return Err(IlaError::Certification("closed loops are not linked".into()));
    }
    Ok(LawTransfer { law: law_p, closed_w, closed_p })
}

/// `out = M · in` when the space is the graph of a linear map from
/// `inputs` to `outputs`; `M[i][j]` couples `inputs[j]` into `outputs[i]`.
pub fn graph_map<F: Field>(v: &Space<F>, inputs: &IndexSet, outputs: &IndexSet) -> Option<Vec<Vec<F>>> {
    if v.index() != &inputs.union(outputs) || !inputs.is_disjoint(outputs) {
        return None;
    }
    if !v.restrict(inputs).ok()?.is_full() || !v.contract(outputs).ok()?.is_zero_space() {
        return None;
    }
    let idx = v.index();
    let in_cols: Vec<usize> = inputs.iter().map(|l| idx.position(l).unwrap()).collect();
    let out_cols: Vec<usize> = outputs.iter().map(|l| idx.position(l).unwrap()).collect();
    let gens: Vec<Vec<F>> = v.basis().iter().map(|r| in_cols.iter().map(|&c| r[c].clone()).collect()).collect();
    let mut m = vec![vec![F::zero(); inputs.len()]; outputs.len()];
    for j in 0..inputs.len() {
        let mut e = vec![F::zero(); inputs.len()];
        e[j] = F::one();
        let coef = express(&gens, &e)?;
        for (i, &oc) in out_cols.iter().enumerate() {
            let mut acc = F::zero();
            for (k, row) in v.basis().iter().enumerate() {
                acc = acc.add(&coef[k].mul(&row[oc]));
            }
            m[i][j] = acc;
        }
    }
    Some(m)
}

/// `ẋ = A x + B u`, `y = C x + D u`; rows and columns follow the canonical
/// order of `states`, `inputs`, `outputs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateForm<F: Field> {
    pub states: IndexSet,
    pub inputs: IndexSet,
    pub outputs: IndexSet,
    pub a: Vec<Vec<F>>,
    pub b: Vec<Vec<F>>,
    pub c: Vec<Vec<F>>,
    pub d: Vec<Vec<F>>,
}

impl<F: Field> StateForm<F> {
    pub fn to_gds(&self) -> Result<Gds<F>> {
        Gds::from_state_space(&self.states, &self.inputs, &self.outputs, &self.a, &self.b, &self.c, &self.d)
    }
}

/// Read a GDS as explicit state equations, if it is one.
pub fn state_form<F: Field>(g: &Gds<F>) -> Result<StateForm<F>> {
    let (mu, my) = g.io_or_err()?;
    let x = g.w().clone();
    let ins = x.union(mu);
    let outs = g.wdot().union(my);
    let m = graph_map(&g.space, &ins, &outs)
        .ok_or_else(|| IlaError::SingularStatic("dynamics are not a map from (state, input) to (derivative, output)".into()))?;
    let row = |l: &Label| outs.position(l).unwrap();
    let col = |l: &Label| ins.position(l).unwrap();
    let block = |rows: &IndexSet, cols: &IndexSet| -> Vec<Vec<F>> {
        rows.iter().map(|r| cols.iter().map(|c| m[row(r)][col(c)].clone()).collect()).collect()
    };
    let xd = x.dotted();
    Ok(StateForm {
        a: block(&xd, &x),
        b: block(&xd, mu),
        c: block(my, &x),
        d: block(my, mu),
        states: x,
        inputs: mu.clone(),
        outputs: my.clone(),
    })
}

/// The emulator as a chain of multiport spaces:
/// `cap ↔ cap_connector ↔ stat ↔ ind_connector ↔ ind`.
#[derive(Clone, Debug)]
pub struct ImplicitEmulator<F: Field> {
    /// On `i_PC ⊎ v̇_PC`.
    pub cap: Space<F>,
    pub cap_connector: Space<F>,
    /// Static multiport on its port variables and the manifest variables.
    pub stat: Space<F>,
    pub ind_connector: Space<F>,
    /// On `v_PL ⊎ i̇_PL`.
    pub ind: Space<F>,
}

impl<F: Field> ImplicitEmulator<F> {
    pub fn evaluate(&self) -> Space<F> {
        self.cap.link(&self.cap_connector).link(&self.stat).link(&self.ind_connector).link(&self.ind)
    }
}

/// The static multiport solved as a map from `(v_P'C, i_P'L, Mu)` to
/// `(i_P'C, v_P'L, My)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticMap<F: Field> {
    pub inputs: IndexSet,
    pub outputs: IndexSet,
    pub h: Vec<Vec<F>>,
}

#[derive(Clone, Debug)]
pub struct RlcEmulator<F: Field> {
    pub original: Gds<F>,
    pub pair: ELinkagePair<F>,
    pub emulator: Gds<F>,
    pub implicit: ImplicitEmulator<F>,
    pub flat: StateForm<F>,
    pub static_map: StaticMap<F>,
    pub cap_split: MultiportDecomposition,
    pub ind_split: MultiportDecomposition,
    /// `|P_C| + |P_L|`.
    pub dimension: usize,
    /// `r(G×E_C) + (|E_L| − r(G∘E_L))`: capacitor cutsets plus inductor
    /// loops, the modes the emulator leaves out.
    pub zero_modes: usize,
    /// `V_PṖ×P = 0` for the autonomous emulator.
    pub no_zero_eigenvalue: bool,
}

/// Dynamic multiport spaces: the port-side link space on `(state, port)`,
/// the derivative link space, and the port relation used by the emulator.
struct Multiport<F: Field> {
    v1: Space<F>,
    v2: Space<F>,
    port_relation: Space<F>,
}

fn capacitor_multiport<F: Field>(net: &Network, g: &DirectedGraph, cs: &IndexSet, ports: &IndexSet) -> Result<Multiport<F>> {
    let kv = voltage_space::<F>(g);
    let x = dot(&kv).direct_sum(&current_space::<F>(g))?;
    let rows = net.device_rows::<F>(x.index(), cs)?;
    let x = x.intersect(&Space::from_constraints(x.index().clone(), rows));
    let vdot = vlabs(cs).union(&vlabs(ports)).dotted();
    Ok(Multiport {
        v1: kv,
        v2: x.restrict(&vdot)?,
        port_relation: x.restrict(&ilabs(ports).union(&vlabs(ports).dotted()))?,
    })
}

fn inductor_multiport<F: Field>(net: &Network, g: &DirectedGraph, ls: &IndexSet, ports: &IndexSet) -> Result<Multiport<F>> {
    let ki = current_space::<F>(g);
    let x = dot(&ki).direct_sum(&voltage_space::<F>(g))?;
    let rows = net.device_rows::<F>(x.index(), ls)?;
    let x = x.intersect(&Space::from_constraints(x.index().clone(), rows));
    let idot = ilabs(ls).union(&ilabs(ports)).dotted();
    Ok(Multiport {
        v1: ki,
        v2: x.restrict(&idot)?,
        port_relation: x.restrict(&vlabs(ports).union(&ilabs(ports).dotted()))?,
    })
}

fn kirchhoff_sum<F: Field>(g: &DirectedGraph) -> Result<Space<F>> {
    voltage_space::<F>(g).direct_sum(&current_space::<F>(g))
}

/// Build the emulator of an RLC network by splitting off the capacitors,
/// then the inductors, and solving the static remainder. The result is
/// checked two ways: composing the multiport chain, and applying the pair to
/// the network GDS.
pub fn build_rlc_emulator<F: Field>(net: &Network) -> Result<RlcEmulator<F>> {
    net.check_well_posed()?;
    let g = net.graph();
    let cs = net.edges_of(&[DeviceKind::C]);
    let ls = net.edges_of(&[DeviceKind::L]);
    let rest = g.edge_labels().difference(&cs);
    let cap_split = multiport_decompose(g, &cs, &rest)?;
    let rest2 = cap_split.g2.edge_labels().difference(&ls);
    let ind_split = multiport_decompose(&cap_split.g2, &ls, &rest2)?;

    let (pc, pc2) = (&cap_split.p1, &cap_split.p2);
    let (pl, pl2) = (&ind_split.p1, &ind_split.p2);
    let cap = capacitor_multiport::<F>(net, &cap_split.g1, &cs, pc)?;
    let ind = inductor_multiport::<F>(net, &ind_split.g1, &ls, pl)?;

    let gs = &ind_split.g2;
    let ks = kirchhoff_sum::<F>(gs)?;
    let rows = net.device_rows::<F>(ks.index(), &gs.edge_labels())?;
    let solved = ks.intersect(&Space::from_constraints(ks.index().clone(), rows));
    let (mu, my) = (net.input_labels(), net.output_labels());
    let st_in = vlabs(pc2).union(&ilabs(pl2)).union(&mu);
    let st_out = ilabs(pc2).union(&vlabs(pl2)).union(&my);
    let stat = solved.restrict(&st_in.union(&st_out))?;
    let h = graph_map(&stat, &st_in, &st_out)
        .ok_or_else(|| IlaError::SingularStatic("static multiport does not determine its port responses".into()))?;
    let static_map = StaticMap { inputs: st_in, outputs: st_out, h };

    let implicit = ImplicitEmulator {
        cap: cap.port_relation,
        cap_connector: kirchhoff_sum::<F>(&cap_split.connector)?,
        stat,
        ind_connector: kirchhoff_sum::<F>(&ind_split.connector)?,
        ind: ind.port_relation,
    };
    let p = vlabs(pc).union(&ilabs(pl));
    let emulator = Gds::with_io(implicit.evaluate(), p.clone(), mu.clone(), my.clone())?;

    let original = net.gds::<F>()?;
    let pair = ELinkagePair::new(
        cap.v1.direct_sum(&ind.v1)?,
        cap.v2.direct_sum(&ind.v2)?,
        net.state_labels(),
        p.clone(),
    )?;
    if linkage_apply(&pair, &original.space)? != emulator.space {
        return Err(IlaError::Certification("pair image differs from the composed emulator".into()));
    }
    let flat = state_form(&emulator)?;

    let dimension = p.len();
    let expected = min_port_count(g, &cs)? + min_port_count(g, &ls)?;
    if dimension != expected {
        return Err(IlaError::Certification(format!("emulator has {dimension} states, rank formula gives {expected}")));
    }
    let zero_modes = g.contraction_rank(&cs)? + (ls.len() - g.rank_of(&ls)?);
    let no_zero_eigenvalue = emulator.genaut_autonomous()?.dom_cross().is_zero_space();
    Ok(RlcEmulator {
        original,
        pair,
        emulator,
        implicit,
        flat,
        static_map,
        cap_split,
        ind_split,
        dimension,
        zero_modes,
        no_zero_eigenvalue,
    })
}
