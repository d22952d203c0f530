//! Two-block linkages: transpose, intersection-sum, scalar multiplication,
//! pseudoidentities and the implicit inversion solver.

use std::collections::BTreeMap;

use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::label::{IndexSet, Label};
use crate::space::Space;

/// A space with a declared partition of its index set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Linkage<F: Field> {
    pub space: Space<F>,
    pub blocks: Vec<IndexSet>,
}

impl<F: Field> Linkage<F> {
    pub fn new(space: Space<F>, blocks: Vec<IndexSet>) -> Result<Self> {
        let mut seen = IndexSet::empty();
        let mut total = 0;
        for b in &blocks {
            if !seen.is_disjoint(b) {
                return Err(IlaError::BadPartition("blocks overlap".into()));
            }
            seen = seen.union(b);
            total += b.len();
        }
        if &seen != space.index() || total != space.index().len() {
            return Err(IlaError::BadPartition("blocks do not cover the index set".into()));
        }
        Ok(Linkage { space, blocks })
    }

    /// Two-block linkage `A ⊎ B` where `B` is given and `A` is the rest.
    pub fn split(space: Space<F>, b: &IndexSet) -> Result<Self> {
        let a = space.index().difference(b);
        Linkage::new(space, vec![a, b.clone()])
    }

    pub fn block_of(&self, l: &Label) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(l))
    }

    fn two(&self) -> Result<(&IndexSet, &IndexSet)> {
        match self.blocks.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(IlaError::BadPartition(format!("expected 2 blocks, found {}", self.blocks.len()))),
        }
    }

    pub fn transpose(&self) -> Result<Self> {
        let (_, b) = self.two()?;
        Ok(Linkage { space: transpose(&self.space, b)?, blocks: self.blocks.clone() })
    }

    pub fn intersection_sum(&self, other: &Self, along: &IndexSet) -> Result<Self> {
        if self.blocks != other.blocks {
            return Err(IlaError::BadPartition("block mismatch".into()));
        }
        self.two()?;
        if !self.blocks.contains(along) {
            return Err(IlaError::BadPartition("`along` is not a block".into()));
        }
        Ok(Linkage { space: intersection_sum(&self.space, &other.space, along)?, blocks: self.blocks.clone() })
    }

    pub fn scalar_mul(&self, lambda: &F, along: &IndexSet) -> Result<Self> {
        self.two()?;
        if !self.blocks.contains(along) {
            return Err(IlaError::BadPartition("`along` is not a block".into()));
        }
        Ok(Linkage { space: scalar_mul(lambda, &self.space, along)?, blocks: self.blocks.clone() })
    }

    pub fn is_decoupled(&self) -> bool {
        is_decoupled(&self.space, &self.blocks)
    }
}

/// `V_AB^T = (V^⊥)_{A(−B)}`.
pub fn transpose<F: Field>(v: &Space<F>, b: &IndexSet) -> Result<Space<F>> {
    v.perp().sign_flip(b)
}

/// True iff `V` is the direct sum of its block restrictions.
pub fn is_decoupled<F: Field>(v: &Space<F>, blocks: &[IndexSet]) -> bool {
    let total: usize = blocks.iter().map(|b| v.restrict(b).expect("block within index").rank()).sum();
    total == v.rank()
}

/// Prime offset that makes `label.primed(k)` fresh against `idx`, and
/// `primed(2k)` fresh against both.
pub(crate) fn fresh_offset(idx: &IndexSet) -> u32 {
    idx.max_primes() + 1
}

/// `{(f_A, f¹_B + f²_B) : (f_A, f¹_B) ∈ V¹, (f_A, f²_B) ∈ V²}`, built by
/// coupling two disjoint copies through an adder space.
pub fn intersection_sum<F: Field>(v1: &Space<F>, v2: &Space<F>, along: &IndexSet) -> Result<Space<F>> {
    if v1.index() != v2.index() {
        return Err(IlaError::BadPartition("operands live on different index sets".into()));
    }
    let idx = v1.index();
    if !along.is_subset(idx) {
        return Err(IlaError::BadPartition("`along` not within index".into()));
    }
    if idx.is_empty() {
        return Ok(v1.clone());
    }
    let a = idx.difference(along);
    let k = fresh_offset(idx);
    let c1 = v1.rename_with(|l| l.primed(k))?;
    let c2 = v2.rename_with(|l| l.primed(2 * k))?;
    let coupler_index = IndexSet::new(
        idx.iter().flat_map(|l| [l.clone(), l.primed(k), l.primed(2 * k)]).collect(),
    );
    let mut rows = Vec::new();
    let unit = |ls: &[Label]| {
        let mut r = vec![F::zero(); coupler_index.len()];
        for l in ls {
            r[coupler_index.position(l).unwrap()] = F::one();
        }
        r
    };
    for l in a.iter() {
        rows.push(unit(&[l.clone(), l.primed(k), l.primed(2 * k)]));
    }
    for l in along.iter() {
        rows.push(unit(&[l.clone(), l.primed(k)]));
        rows.push(unit(&[l.clone(), l.primed(2 * k)]));
    }
    let coupler = Space::from_generators(coupler_index, rows);
    c1.direct_sum(&c2)?.compose(&coupler)
}

/// `λ^B V = {(f_A, λ g_B)} + V×B`.
pub fn scalar_mul<F: Field>(lambda: &F, v: &Space<F>, along: &IndexSet) -> Result<Space<F>> {
    if !along.is_subset(v.index()) {
        return Err(IlaError::BadPartition("`along` not within index".into()));
    }
    let idx = v.index();
    let cols: Vec<bool> = idx.iter().map(|l| along.contains(l)).collect();
    let scaled: Vec<Vec<F>> = v
        .basis()
        .iter()
        .map(|r| r.iter().zip(&cols).map(|(x, &s)| if s { x.mul(lambda) } else { x.clone() }).collect())
        .collect();
    let scaled = Space::from_generators(idx.clone(), scaled);
    Ok(scaled.sum(&v.contract(along)?))
}

/// Outcome of solving `V_SP ↔ V_PQ = V_SQ` for `V_PQ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IitReport<F: Field> {
    pub solvable: bool,
    /// `V_SP∘S ⊇ V_SQ∘S`.
    pub restriction_ok: bool,
    /// `V_SP×S ⊆ V_SQ×S`.
    pub contraction_ok: bool,
    /// `V_SP ↔ V_SQ`, present iff solvable.
    pub solution: Option<Space<F>>,
    /// `V_SP∘P ⊇ sol∘P` and `V_SP×P ⊆ sol×P`: the solution is the one
    /// the construction singles out among those meeting these bounds.
    pub canonical_bounds_ok: bool,
    /// No other `V_PQ` solves the equation: `V_SP∘P = 𝔽_P` and `V_SP×P = 0_P`.
    pub uniqueness_certified: bool,
}

/// Implicit inversion. `S` is the shared part of the two index sets.
pub fn iit_solve<F: Field>(v_sp: &Space<F>, v_sq: &Space<F>) -> Result<IitReport<F>> {
    let s = v_sp.index().intersection(v_sq.index());
    let p = v_sp.index().difference(&s);
    let q = v_sq.index().difference(&s);
    if s.is_empty() {
        return Err(IlaError::BadPartition("no shared block S".into()));
    }
    if p.is_empty() && q.is_empty() {
        return Err(IlaError::BadPartition("P and Q are both empty".into()));
    }
    let restriction_ok = v_sp.restrict(&s)?.geq(&v_sq.restrict(&s)?);
    let contraction_ok = v_sp.contract(&s)?.leq(&v_sq.contract(&s)?);
    let solvable = restriction_ok && contraction_ok;
    let v_sp_p_dot = v_sp.restrict(&p)?;
    let v_sp_p_cross = v_sp.contract(&p)?;
    let uniqueness_certified = solvable && v_sp_p_dot.is_full() && v_sp_p_cross.is_zero_space();
    let mut canonical_bounds_ok = false;
    let solution = if solvable {
        let sol = v_sp.compose(v_sq)?;
        let back = v_sp.compose_with(&sol, crate::space::Mode::Matched, true)?;
        if back != *v_sq {
            return Err(IlaError::Certification("V_SP ↔ solution differs from V_SQ".into()));
        }
        canonical_bounds_ok = v_sp_p_dot.geq(&sol.restrict(&p)?) && v_sp_p_cross.leq(&sol.contract(&p)?);
        Some(sol)
    } else {
        None
    };
    Ok(IitReport { solvable, restriction_ok, contraction_ok, solution, canonical_bounds_ok, uniqueness_certified })
}

/// Copy map `A → A'` with fresh primes relative to `idx`.
pub fn fresh_copy(a: &IndexSet, idx: &IndexSet) -> BTreeMap<Label, Label> {
    let k = fresh_offset(idx);
    a.iter().map(|l| (l.clone(), l.primed(k))).collect()
}

/// The symmetric pseudoidentity `V_AB ↔ (V_AB)_{A'B}` on `A ⊎ A'`.
/// Returns the space and the copy map used.
pub fn pseudoidentity<F: Field>(v_ab: &Space<F>, a: &IndexSet) -> Result<(Space<F>, BTreeMap<Label, Label>)> {
    let copy = fresh_copy(a, v_ab.index());
    let primed = v_ab.rename(&copy)?;
    Ok((v_ab.link(&primed), copy))
}

/// `V_AA' ⊇ I_AA' ∩ (V∘A)` and `V_AA'` invariant under swapping `A ↔ A'`.
pub fn is_symmetric<F: Field>(v: &Space<F>, copy: &BTreeMap<Label, Label>) -> Result<bool> {
    let a: IndexSet = copy.keys().cloned().collect();
    let pairs: Vec<(Label, Label)> = copy.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    let diag = Space::identity_pairs(&pairs).intersect(&v.restrict(&a)?);
    let mut swap = copy.clone();
    swap.extend(copy.iter().map(|(x, y)| (y.clone(), x.clone())));
    Ok(diag.leq(v) && v.rename(&swap)? == *v)
}

/// Pseudoidentity test. Symmetric candidates use the restriction and
/// contraction bounds; others are checked against the definition directly.
pub fn is_pseudoidentity<F: Field>(
    v_aa: &Space<F>,
    v_ab: &Space<F>,
    copy: &BTreeMap<Label, Label>,
) -> Result<bool> {
    let a: IndexSet = copy.keys().cloned().collect();
    if is_symmetric(v_aa, copy)? {
        Ok(v_aa.restrict(&a)?.geq(&v_ab.restrict(&a)?) && v_aa.contract(&a)?.leq(&v_ab.contract(&a)?))
    } else {
        pseudoidentity_by_definition(v_aa, v_ab, copy)
    }
}

/// `V_AA' ↔ V_AB = (V_AB)_{A'B}`.
pub fn pseudoidentity_by_definition<F: Field>(
    v_aa: &Space<F>,
    v_ab: &Space<F>,
    copy: &BTreeMap<Label, Label>,
) -> Result<bool> {
    Ok(v_aa.compose(v_ab)? == v_ab.rename(copy)?)
}

/// Which hypothesis of the distributivity rule to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistributeSide {
    /// `V_BC×B ⊆ V¹_AB×B`, licensing `V_BC↔(V¹ +_A V²) = (V_BC↔V¹) +_A (V_BC↔V²)`.
    Cross,
    /// `V_BC∘B ⊇ V¹_AB∘B`, licensing `V_BC↔(V¹ +_B V²) = (V_BC↔V¹) +_C (V_BC↔V²)`.
    Dot,
}

/// Whether the distributivity hypothesis holds for `V_BC` against `V¹_AB`.
pub fn distribute_check<F: Field>(v_bc: &Space<F>, v1_ab: &Space<F>, side: DistributeSide) -> Result<bool> {
    let b = v_bc.index().intersection(v1_ab.index());
    Ok(match side {
        DistributeSide::Cross => v_bc.contract(&b)?.leq(&v1_ab.contract(&b)?),
        DistributeSide::Dot => v_bc.restrict(&b)?.geq(&v1_ab.restrict(&b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    #[test]
    fn transpose_of_map() {
        // rows [I | K] with K = [[1, 2]] on a -> (b1, b2)
        let v = Space::<Q>::from_ints(&["a", "b1", "b2"], &[&[1, 1, 2]]);
        let b = IndexSet::of(&["b1", "b2"]);
        let t = transpose(&v, &b).unwrap();
        assert_eq!(t, Space::from_ints(&["a", "b1", "b2"], &[&[1, 1, 0], &[2, 0, 1]]));
        assert_eq!(transpose(&t, &b).unwrap(), v);
    }

    #[test]
    fn doubling_by_intersection_sum() {
        let v = Space::<Q>::from_ints(&["a", "b"], &[&[1, 3]]);
        let b = IndexSet::of(&["b"]);
        let two = Space::<Q>::from_ints(&["a", "b"], &[&[1, 6]]);
        assert_eq!(intersection_sum(&v, &v, &b).unwrap(), two);
        assert_eq!(scalar_mul(&Q::from_i64(2), &v, &b).unwrap(), two);
    }

    #[test]
    fn ax_equals_b() {
        // S = {s1, s2}, P = {x}, Q = {y}; A = [1, 1]^T, b = [2, 2]^T.
        let v_sp = Space::<Q>::from_ints(&["s1", "s2", "x"], &[&[1, 0, 1], &[0, 1, 1]]);
        let v_sq = Space::<Q>::from_ints(&["s1", "s2", "y"], &[&[1, 0, 2], &[0, 1, 2]]);
        let r = iit_solve(&v_sp, &v_sq).unwrap();
        assert!(r.solvable && r.uniqueness_certified);
        let v_bad = Space::<Q>::from_ints(&["s1", "s2", "y"], &[&[1, 0, 2], &[0, 1, 1]]);
        let r = iit_solve(&v_sp, &v_bad).unwrap();
        assert!(!r.solvable && r.restriction_ok && !r.contraction_ok);
    }
}
