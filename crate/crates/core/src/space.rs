//! Vector spaces on labeled index sets, held in canonical RREF.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{IlaError, Result};
use crate::field::{parse_scalar, Field};
use crate::label::{lbl, IndexSet, Label};

/// Reduce `rows` (each of length `ncols`) to RREF in place, dropping zero
/// rows. Returns the pivot column of each surviving row.
pub(crate) fn rref<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    match F::rref_native(rows, ncols) {
        Some(p) => p,
        None => generic_rref(rows, ncols),
    }
}

/// Textbook Gauss-Jordan with smallest-entry pivoting.
pub(crate) fn generic_rref<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].size()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let f = other[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in other[c..].iter_mut().zip(pivot_row[c..].iter()) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Null space of an RREF matrix with the given pivots.
pub(crate) fn null_basis<F: Field>(basis: &[Vec<F>], pivots: &[usize], ncols: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); ncols];
            v[free] = F::one();
            for (row, &p) in basis.iter().zip(pivots) {
                v[p] = row[free].neg();
            }
            v
        })
        .collect()
}

/// Coefficients `a` with `Σ a_i gens[i] = x`, if any. `gens` need not be
/// independent; the pivot solution (free coefficients zero) is returned.
pub(crate) fn express<F: Field>(gens: &[Vec<F>], x: &[F]) -> Option<Vec<F>> {
    let n = x.len();
    let m = gens.len();
    // Columns are the generators; solve G^T a = x.
    let mut rows: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut r: Vec<F> = gens.iter().map(|g| g[i].clone()).collect();
            r.push(x[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, m + 1);
    if pivots.last() == Some(&m) {
        return None;
    }
    let mut a = vec![F::zero(); m];
    for (r, &p) in rows.iter().zip(&pivots) {
        a[p] = r[m].clone();
    }
    Some(a)
}

/// A vector with one coordinate per label of its index set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexedVector<F: Field> {
    pub index: IndexSet,
    pub coords: Vec<F>,
}

impl<F: Field> IndexedVector<F> {
    pub fn new(index: IndexSet, coords: Vec<F>) -> Self {
        assert_eq!(index.len(), coords.len(), "coordinate count must match index");
        IndexedVector { index, coords }
    }
    /// Build from explicit `(label, value)` pairs; missing labels are zero.
    pub fn from_pairs(index: &IndexSet, pairs: &[(Label, F)]) -> Result<Self> {
        let mut coords = vec![F::zero(); index.len()];
        for (l, v) in pairs {
            let p = index
                .position(l)
                .ok_or_else(|| IlaError::IndexMismatch(format!("{l} not in index")))?;
            coords[p] = v.clone();
        }
        Ok(IndexedVector { index: index.clone(), coords })
    }
    pub fn get(&self, l: &Label) -> Option<&F> {
        self.index.position(l).map(|p| &self.coords[p])
    }
}

/// Whether generator rows span the space or constrain it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Form {
    Generator,
    Constraint,
}

/// Matched composition agrees on shared labels; skewed agrees up to sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Matched,
    Skewed,
}

/// A subspace of F^X, stored as its unique RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Space<F: Field> {
    index: IndexSet,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Space<F> {
    /// Span of `rows`, whose columns follow `index` order.
    pub fn from_generators(index: IndexSet, mut rows: Vec<Vec<F>>) -> Self {
        let n = index.len();
        assert!(rows.iter().all(|r| r.len() == n), "row length must match index");
        let pivots = rref(&mut rows, n);
        Space { index, basis: rows, pivots }
    }

    /// Solution set of `rows · f = 0`.
    pub fn from_constraints(index: IndexSet, rows: Vec<Vec<F>>) -> Self {
        Space::from_generators(index.clone(), rows).perp()
    }

    /// Checked constructor from indexed vectors.
    pub fn make(index: &IndexSet, rows: &[IndexedVector<F>], form: Form) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| &r.index != index) {
            return Err(IlaError::IndexMismatch(format!("row on {:?}, expected {:?}", bad.index, index)));
        }
        let raw = rows.iter().map(|r| r.coords.clone()).collect();
        Ok(match form {
            Form::Generator => Space::from_generators(index.clone(), raw),
            Form::Constraint => Space::from_constraints(index.clone(), raw),
        })
    }

    /// Generators given against an arbitrary label order, e.g.
    /// `Space::from_ints(&["b", "a"], &[&[1, 2]])` means b=1, a=2.
    pub fn from_ints(labels: &[&str], rows: &[&[i64]]) -> Self {
        Space::from_labeled(labels, rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    /// Generators against an arbitrary label order.
    pub fn from_labeled(labels: &[&str], rows: Vec<Vec<F>>) -> Self {
        let ls: Vec<Label> = labels.iter().map(|s| lbl(s)).collect();
        let index = IndexSet::new(ls.clone());
        assert_eq!(index.len(), ls.len(), "duplicate labels");
        let perm: Vec<usize> = ls.iter().map(|l| index.position(l).unwrap()).collect();
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ls.len());
                let mut out = vec![F::zero(); ls.len()];
                for (v, &p) in r.into_iter().zip(&perm) {
                    out[p] = v;
                }
                out
            })
            .collect();
        Space::from_generators(index, rows)
    }

    pub fn zero(index: IndexSet) -> Self {
        Space { index, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(index: IndexSet) -> Self {
        let n = index.len();
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        Space { index, basis, pivots: (0..n).collect() }
    }

    /// `{(f, f')}` for each pair `(a, a')`: the identity coupling between copies.
    pub fn identity_pairs(pairs: &[(Label, Label)]) -> Self {
        let index = IndexSet::new(pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect());
        assert_eq!(index.len(), 2 * pairs.len(), "copy labels must be distinct");
        let rows = pairs
            .iter()
            .map(|(a, b)| {
                let mut r = vec![F::zero(); index.len()];
                r[index.position(a).unwrap()] = F::one();
                r[index.position(b).unwrap()] = F::one();
                r
            })
            .collect();
        Space::from_generators(index, rows)
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn is_zero_space(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.index.len()
    }

    /// Basis rows as indexed vectors.
    pub fn basis_vectors(&self) -> Vec<IndexedVector<F>> {
        self.basis.iter().map(|r| IndexedVector::new(self.index.clone(), r.clone())).collect()
    }

    /// Residue of `v` after reduction against the basis.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        v
    }

    /// Coordinates of `v` in the basis, if `v` is a member.
    pub fn coords_in_basis(&self, v: &[F]) -> Option<Vec<F>> {
        if self.reduce(v).iter().all(Field::is_zero) {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    }

    pub fn contains_coords(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.index.len());
        self.reduce(v).iter().all(Field::is_zero)
    }

    pub fn member(&self, w: &IndexedVector<F>) -> Result<bool> {
        self.check_same(&w.index)?;
        Ok(self.contains_coords(&w.coords))
    }

    fn check_same(&self, other: &IndexSet) -> Result<()> {
        if &self.index == other {
            Ok(())
        } else {
            Err(IlaError::IndexMismatch(format!("{:?} vs {:?}", self.index, other)))
        }
    }

    /// `self ⊆ other`; both must live on the same index set.
    pub fn subspace_of(&self, other: &Space<F>) -> Result<bool> {
        other.check_same(&self.index)?;
        Ok(self.rank() <= other.rank() && self.basis.iter().all(|r| other.contains_coords(r)))
    }

    /// Infallible `⊆` for callers that already know the index sets agree.
    pub fn leq(&self, other: &Space<F>) -> bool {
        self.subspace_of(other).expect("spaces on the same index")
    }

    /// `⊇`, the mirror of [`Space::leq`].
    pub fn geq(&self, other: &Space<F>) -> bool {
        other.leq(self)
    }

    pub fn equals(&self, other: &Space<F>) -> Result<bool> {
        other.check_same(&self.index)?;
        Ok(self == other)
    }

    /// Orthogonal complement on the same index set.
    pub fn perp(&self) -> Space<F> {
        let n = self.index.len();
        let rows = null_basis(&self.basis, &self.pivots, n);
        Space::from_generators(self.index.clone(), rows)
    }

    /// Copy into a superset index, padding new coordinates with zero.
    pub fn embed(&self, sup: &IndexSet) -> Result<Space<F>> {
        if !self.index.is_subset(sup) {
            return Err(IlaError::IndexMismatch(format!("{:?} not within {:?}", self.index, sup)));
        }
        let map: Vec<usize> = self.index.iter().map(|l| sup.position(l).unwrap()).collect();
        let rows = self
            .basis
            .iter()
            .map(|r| {
                let mut out = vec![F::zero(); sup.len()];
                for (v, &p) in r.iter().zip(&map) {
                    out[p] = v.clone();
                }
                out
            })
            .collect::<Vec<_>>();
        // Column relabeling keeps pivots monotone, so the result is already RREF.
        let pivots = self.pivots.iter().map(|&p| map[p]).collect();
        Ok(Space { index: sup.clone(), basis: rows, pivots })
    }

    /// `V ⊕ 𝔽_{sup∖X}`.
    pub fn extend_full(&self, sup: &IndexSet) -> Result<Space<F>> {
        let extra = sup.difference(&self.index);
        Ok(self.embed(sup)?.sum(&Space::full(extra)))
    }

    /// `V∘T`: drop the coordinates outside `T`.
    pub fn restrict(&self, t: &IndexSet) -> Result<Space<F>> {
        if !t.is_subset(&self.index) {
            return Err(IlaError::IndexMismatch(format!("{:?} not within {:?}", t, self.index)));
        }
        let cols: Vec<usize> = t.iter().map(|l| self.index.position(l).unwrap()).collect();
        let rows = self.basis.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        Ok(Space::from_generators(t.clone(), rows))
    }

    /// `V×T`: the `T` parts of members vanishing off `T`.
    pub fn contract(&self, t: &IndexSet) -> Result<Space<F>> {
        if !t.is_subset(&self.index) {
            return Err(IlaError::IndexMismatch(format!("{:?} not within {:?}", t, self.index)));
        }
        let comp: Vec<usize> =
            (0..self.index.len()).filter(|&i| !t.contains(&self.index.labels()[i])).collect();
        let keep: Vec<usize> = t.iter().map(|l| self.index.position(l).unwrap()).collect();
        let mut rows: Vec<Vec<F>> = self
            .basis
            .iter()
            .map(|r| comp.iter().chain(keep.iter()).map(|&c| r[c].clone()).collect())
            .collect();
        let pivots = rref(&mut rows, comp.len() + keep.len());
        let out = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= comp.len())
            .map(|(r, _)| r[comp.len()..].to_vec())
            .collect();
        Ok(Space::from_generators(t.clone(), out))
    }

    /// Sum on the union of index sets, padding with zero.
    pub fn sum(&self, other: &Space<F>) -> Space<F> {
        let u = self.index.union(&other.index);
        let mut rows = self.embed(&u).unwrap().basis;
        rows.extend(other.embed(&u).unwrap().basis);
        Space::from_generators(u, rows)
    }

    /// Intersection on the union of index sets, padding with 𝔽.
    pub fn intersect(&self, other: &Space<F>) -> Space<F> {
        let u = self.index.union(&other.index);
        let a = self.extend_full(&u).unwrap();
        let b = other.extend_full(&u).unwrap();
        a.perp().sum(&b.perp()).perp()
    }

    /// Direct sum; index sets must be disjoint.
    pub fn direct_sum(&self, other: &Space<F>) -> Result<Space<F>> {
        if !self.index.is_disjoint(&other.index) {
            return Err(IlaError::IndexMismatch("direct sum needs disjoint index sets".into()));
        }
        Ok(self.sum(other))
    }

    /// Matched (`↔`) or skewed (`⇌`) composition. An empty surviving index
    /// set is rejected unless `allow_empty`.
    pub fn compose_with(&self, other: &Space<F>, mode: Mode, allow_empty: bool) -> Result<Space<F>> {
        let shared = self.index.intersection(&other.index);
        let out = self.index.union(&other.index).difference(&shared);
        if out.is_empty() && !allow_empty {
            return Err(IlaError::NullSubexpression);
        }
        let rhs = match mode {
            Mode::Matched => other.sign_flip(&shared)?,
            Mode::Skewed => other.clone(),
        };
        self.sum(&rhs).contract(&out)
    }

    /// `V_X ↔ V_Y`.
    pub fn compose(&self, other: &Space<F>) -> Result<Space<F>> {
        self.compose_with(other, Mode::Matched, false)
    }

    /// `V_X ⇌ V_Y`.
    pub fn compose_skewed(&self, other: &Space<F>) -> Result<Space<F>> {
        self.compose_with(other, Mode::Skewed, false)
    }

    /// Infallible `↔` for callers that know the result index is nonempty.
    pub fn link(&self, other: &Space<F>) -> Space<F> {
        self.compose_with(other, Mode::Matched, true).expect("composition")
    }

    /// For compositions over identical index sets: whether some nonzero
    /// vector of `self` agrees with one of `other` (up to sign when skewed).
    pub fn compose_consistency(&self, other: &Space<F>, mode: Mode) -> bool {
        let rhs = match mode {
            Mode::Matched => other.clone(),
            Mode::Skewed => other.sign_flip(&other.index.clone()).unwrap(),
        };
        self.intersect(&rhs).rank() > 0
    }

    /// Negate the `T` columns.
    pub fn sign_flip(&self, t: &IndexSet) -> Result<Space<F>> {
        if !t.is_subset(&self.index) {
            return Err(IlaError::IndexMismatch(format!("{:?} not within {:?}", t, self.index)));
        }
        if t.is_empty() {
            return Ok(self.clone());
        }
        let neg: Vec<bool> = self.index.iter().map(|l| t.contains(l)).collect();
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().zip(&neg).map(|(x, &n)| if n { x.neg() } else { x.clone() }).collect())
            .collect();
        Ok(Space::from_generators(self.index.clone(), rows))
    }

    /// Rename labels by a map; unmapped labels stay put. The result must be
    /// a bijection onto its image.
    pub fn rename(&self, map: &BTreeMap<Label, Label>) -> Result<Space<F>> {
        for k in map.keys() {
            if !self.index.contains(k) {
                return Err(IlaError::BadRename(format!("{k} not in index")));
            }
        }
        self.rename_with(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
    }

    /// Rename every label through `f`, which must be injective on the index.
    pub fn rename_with(&self, f: impl Fn(&Label) -> Label) -> Result<Space<F>> {
        let new: Vec<Label> = self.index.iter().map(&f).collect();
        let index = IndexSet::new(new.clone());
        if index.len() != new.len() {
            return Err(IlaError::BadRename("two labels map to the same target".into()));
        }
        let perm: Vec<usize> = new.iter().map(|l| index.position(l).unwrap()).collect();
        let rows = self
            .basis
            .iter()
            .map(|r| {
                let mut out = vec![F::zero(); r.len()];
                for (v, &p) in r.iter().zip(&perm) {
                    out[p] = v.clone();
                }
                out
            })
            .collect();
        Ok(Space::from_generators(index, rows))
    }

    /// Fixture text: a header of labels, then one row of `p/q` tokens per
    /// basis vector.
    pub fn to_fixture(&self) -> String {
        let mut s = self.index.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        s.push('\n');
        for r in &self.basis {
            s.push_str(&r.iter().map(|x| x.to_ratio_string()).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the fixture format. Blank lines and `#` comments are skipped.
    /// The header may list labels in any order.
    pub fn parse_fixture(text: &str) -> Result<Space<F>> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let Some((_, header)) = lines.next() else {
            return Ok(Space::zero(IndexSet::empty()));
        };
        let labels = header
            .split_whitespace()
            .map(|t| t.parse::<Label>())
            .collect::<Result<Vec<Label>>>()?;
        let index = IndexSet::new(labels.clone());
        if index.len() != labels.len() {
            return Err(IlaError::Parse { line: 1, column: 1, msg: "duplicate label in header".into() });
        }
        let perm: Vec<usize> = labels.iter().map(|l| index.position(l).unwrap()).collect();
        let mut rows = Vec::new();
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != labels.len() {
                return Err(IlaError::Parse {
                    line: ln,
                    column: 1,
                    msg: format!("expected {} entries, found {}", labels.len(), toks.len()),
                });
            }
            let mut row = vec![F::zero(); labels.len()];
            for (k, t) in toks.iter().enumerate() {
                row[perm[k]] = parse_scalar::<F>(t).ok_or_else(|| IlaError::Parse {
                    line: ln,
                    column: k + 1,
                    msg: format!("bad scalar {t:?}"),
                })?;
            }
            rows.push(row);
        }
        Ok(Space::from_generators(index, rows))
    }
}

impl<F: Field> fmt::Debug for Space<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space(rank {}) {}", self.rank(), self.to_fixture().trim_end())
    }
}

impl<F: Field> fmt::Display for Space<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixture())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn idx(s: &[&str]) -> IndexSet {
        IndexSet::of(s)
    }

    #[test]
    fn fraction_free_rref_matches_generic() {
        let mut rng = crate::fixtures::rng(7);
        for _ in 0..200 {
            let (r, c) = (rand::Rng::gen_range(&mut rng, 1..7), rand::Rng::gen_range(&mut rng, 1..7));
            let mut a: Vec<Vec<Q>> = crate::fixtures::matrix(&mut rng, r, c);
            // Repeat a scaled row now and then so rank deficiency is exercised.
            if r > 1 && rand::Rng::gen_bool(&mut rng, 0.5) {
                a[r - 1] = a[0].iter().map(|x| x.mul(&crate::field::q(-3, 7))).collect();
            }
            let mut b = a.clone();
            let pa = rref(&mut a, c);
            let pb = generic_rref(&mut b, c);
            assert_eq!((pa, a), (pb, b));
        }
    }

    #[test]
    fn duplicate_generators_collapse() {
        let v = Space::<Q>::from_ints(&["a", "b"], &[&[1, 1], &[1, 1]]);
        assert_eq!(v.rank(), 1);
    }

    #[test]
    fn constraint_form() {
        assert!(Space::<Q>::from_constraints(idx(&["a", "b"]), vec![]).is_full());
        let v = Space::<Q>::from_constraints(idx(&["vC1", "vC2", "vC3"]), vec![vec![Q::one(); 3]]);
        assert_eq!(v.rank(), 2);
    }

    #[test]
    fn restrict_contract_basics() {
        let v = Space::<Q>::from_ints(&["x", "y"], &[&[1, 2]]);
        assert!(v.restrict(&idx(&["x"])).unwrap().is_full());
        assert!(v.contract(&idx(&["x"])).unwrap().is_zero_space());
        assert!(v.restrict(&idx(&["z"])).is_err());
    }

    #[test]
    fn perp_of_diagonal() {
        let v = Space::<Q>::from_ints(&["a", "b"], &[&[1, 1]]);
        assert_eq!(v.perp(), Space::from_ints(&["a", "b"], &[&[1, -1]]));
    }

    #[test]
    fn compose_degenerate_cases() {
        let v = Space::<Q>::from_ints(&["x", "y"], &[&[1, 2], &[0, 0]]);
        let fy = Space::full(idx(&["y"]));
        let zy = Space::zero(idx(&["y"]));
        assert_eq!(v.compose(&fy).unwrap(), v.restrict(&idx(&["x"])).unwrap());
        assert_eq!(v.compose(&zy).unwrap(), v.contract(&idx(&["x"])).unwrap());
        assert_eq!(v.compose(&v), Err(IlaError::NullSubexpression));
        assert!(v.compose_with(&v, Mode::Matched, true).unwrap().index().is_empty());
        assert!(v.compose_consistency(&v, Mode::Matched));
    }

    #[test]
    fn fixture_roundtrip() {
        let v = Space::<Q>::from_ints(&["b", "a", "dot(c)"], &[&[2, -1, 3], &[0, 1, 1]]);
        let back = Space::<Q>::parse_fixture(&v.to_fixture()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn rename_must_be_injective() {
        let v = Space::<Q>::full(idx(&["a", "b"]));
        let m: BTreeMap<Label, Label> = [(lbl("a"), lbl("b"))].into();
        assert!(matches!(v.rename(&m), Err(IlaError::BadRename(_))));
    }
}
