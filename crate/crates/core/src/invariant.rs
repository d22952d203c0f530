//! Conditioned and controlled invariant subspaces of a genaut.

use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::genop::{dot, is_genop, is_lsg, is_usg, undot, Genaut};
use crate::space::Space;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvKind {
    /// `V ↔ V_W ⊆ (V_W)_Ẇ`.
    Conditioned,
    /// `V ↔ (V_W)_Ẇ ⊇ V_W`.
    Controlled,
    Both,
}

#[derive(Clone, Debug)]
pub struct InvariantReport<F: Field> {
    pub space: Space<F>,
    pub kind: InvKind,
    pub iterations: usize,
    /// Every iterate, first to last.
    pub chain: Vec<Space<F>>,
}

fn check_on_w<F: Field>(vw: &Space<F>, v: &Genaut<F>) -> Result<()> {
    if vw.index() != v.w() {
        return Err(IlaError::IndexMismatch(format!("{:?} is not W = {:?}", vw.index(), v.w())));
    }
    Ok(())
}

pub fn is_conditioned_invariant<F: Field>(vw: &Space<F>, v: &Genaut<F>) -> Result<bool> {
    check_on_w(vw, v)?;
    Ok(v.space.link(vw).leq(&dot(vw)))
}

pub fn is_controlled_invariant<F: Field>(vw: &Space<F>, v: &Genaut<F>) -> Result<bool> {
    check_on_w(vw, v)?;
    Ok(v.space.link(&dot(vw)).geq(vw))
}

pub fn invariance_check<F: Field>(vw: &Space<F>, v: &Genaut<F>, kind: InvKind) -> Result<bool> {
    Ok(match kind {
        InvKind::Conditioned => is_conditioned_invariant(vw, v)?,
        InvKind::Controlled => is_controlled_invariant(vw, v)?,
        InvKind::Both => is_conditioned_invariant(vw, v)? && is_controlled_invariant(vw, v)?,
    })
}

/// Least conditioned invariant containing `seed_W`, by
/// `V^{j+1} = (V ↔ V^j)_W + V^j`.
pub fn min_conditioned_invariant<F: Field>(v: &Genaut<F>, seed: &Space<F>) -> Result<InvariantReport<F>> {
    if seed.index() != &v.wdot() || !seed.leq(&v.img()) {
        return Err(IlaError::BadSeed);
    }
    let mut cur = undot(seed);
    let mut chain = vec![cur.clone()];
    loop {
        let next = undot(&v.space.link(&cur)).sum(&cur);
        if next == cur {
            break;
        }
        cur = next;
        chain.push(cur.clone());
    }
    if !is_conditioned_invariant(&cur, v)? {
        return Err(IlaError::Certification("fixed point is not conditioned invariant".into()));
    }
    let kind = if is_controlled_invariant(&cur, v)? { InvKind::Both } else { InvKind::Conditioned };
    Ok(InvariantReport { space: cur, kind, iterations: chain.len(), chain })
}

/// Greatest controlled invariant inside `cap`, by
/// `V^{j+1} = (V ↔ (V^j)_Ẇ) ∩ V^j`.
pub fn max_controlled_invariant<F: Field>(v: &Genaut<F>, cap: &Space<F>) -> Result<InvariantReport<F>> {
    check_on_w(cap, v)?;
    if !cap.geq(&v.dom_cross()) {
        return Err(IlaError::BadCap);
    }
    let mut cur = cap.clone();
    let mut chain = vec![cur.clone()];
    loop {
        let next = v.space.link(&dot(&cur)).intersect(&cur);
        if next == cur {
            break;
        }
        cur = next;
        chain.push(cur.clone());
    }
    if !is_controlled_invariant(&cur, v)? {
        return Err(IlaError::Certification("fixed point is not controlled invariant".into()));
    }
    let kind = if is_conditioned_invariant(&cur, v)? { InvKind::Both } else { InvKind::Controlled };
    Ok(InvariantReport { space: cur, kind, iterations: chain.len(), chain })
}

/// Genops induced by an invariant subspace.
#[derive(Clone, Debug)]
pub struct Induced<F: Field> {
    /// `V + (V_W ⊕ (V_W)_Ẇ)`, present when `V_W` is conditioned invariant.
    pub quotient: Option<Genaut<F>>,
    /// `V ∩ (V_W ⊕ (V_W)_Ẇ)`, present when `V_W` is controlled invariant.
    pub restricted: Option<Genaut<F>>,
}

pub fn induced_genops<F: Field>(v: &Genaut<F>, vw: &Space<F>) -> Result<Induced<F>> {
    let cond = is_conditioned_invariant(vw, v)?;
    let ctrl = is_controlled_invariant(vw, v)?;
    if !cond && !ctrl {
        return Err(IlaError::NotInvariant("neither conditioned nor controlled".into()));
    }
    let block = vw.direct_sum(&dot(vw))?;
    let quotient = if cond {
        let qg = Genaut::new(v.space.sum(&block), v.w().clone())?;
        if is_usg(v) && !is_genop(&qg) {
            return Err(IlaError::Certification("quotient of a USG is not a genop".into()));
        }
        Some(qg)
    } else {
        None
    };
    let restricted = if ctrl {
        let rg = Genaut::new(v.space.intersect(&block), v.w().clone())?;
        if is_lsg(v) && !is_genop(&rg) {
            return Err(IlaError::Certification("restriction of an LSG is not a genop".into()));
        }
        Some(rg)
    } else {
        None
    };
    Ok(Induced { quotient, restricted })
}
