//! Directed multigraphs, minors, forests, Kirchhoff spaces and minimal
//! multiport decomposition.

use std::collections::HashMap;
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{IlaError, Result};
use crate::field::Field;
use crate::label::{IndexSet, Label};
use crate::space::Space;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: Label,
    pub tail: usize,
    pub head: usize,
}

/// Edges are kept sorted by label, which is the canonical order used by
/// every forest computation.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    lookup: HashMap<Label, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorMode {
    /// `G∘(E − T)`: drop the edges of `T` and any vertex left isolated.
    Delete,
    /// `G×(E − T)`: drop the edges of `T` and fuse their end points.
    Contract,
}

#[derive(Clone, Debug)]
pub struct KirchhoffSpaces<F: Field> {
    pub voltage: Space<F>,
    pub current: Space<F>,
}

impl DirectedGraph {
    /// Build from named vertices and `(label, tail, head)` triples.
    pub fn new(vertices: Vec<String>, edges: Vec<(Label, usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        let mut es = Vec::with_capacity(edges.len());
        for (label, tail, head) in edges {
            if tail >= n || head >= n {
                return Err(IlaError::UnknownEdge(format!("{label} has an endpoint outside the vertex set")));
            }
            es.push(Edge { label, tail, head });
        }
        Self::from_sorted(vertices, es)
    }

    fn from_sorted(vertices: Vec<String>, mut edges: Vec<Edge>) -> Result<Self> {
        if !edges.windows(2).all(|w| w[0].label < w[1].label) {
            edges.sort_by(|a, b| a.label.cmp(&b.label));
        }
        let mut lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if lookup.insert(e.label.clone(), i).is_some() {
                return Err(IlaError::BadPartition(format!("edge label {} is repeated", e.label)));
            }
        }
        Ok(DirectedGraph { vertices, edges, lookup })
    }

    /// Build from `(label, tail-name, head-name)` triples; vertices are
    /// created in order of first appearance.
    pub fn from_named_edges<S: AsRef<str>>(edges: &[(Label, S, S)]) -> Result<Self> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut id = |s: &str| {
            *ids.entry(s.to_string()).or_insert_with(|| {
                vertices.push(s.to_string());
                vertices.len() - 1
            })
        };
        let es: Vec<(Label, usize, usize)> =
            edges.iter().map(|(l, t, h)| (l.clone(), id(t.as_ref()), id(h.as_ref()))).collect();
        Self::new(vertices, es)
    }

    /// Parse the `label tail head` edge-list format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if toks.len() != 3 {
                return Err(IlaError::Parse { line: ln + 1, column: 1, msg: "expected `label tail head`".into() });
            }
            let label: Label = toks[0]
                .parse()
                .map_err(|_| IlaError::Parse { line: ln + 1, column: 1, msg: format!("bad label {}", toks[0]) })?;
            triples.push((label, toks[1].to_string(), toks[2].to_string()));
        }
        Self::from_named_edges(&triples)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{} {} {}\n", e.label, self.vertices[e.tail], self.vertices[e.head]))
            .collect()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn edge(&self, l: &Label) -> Option<&Edge> {
        self.lookup.get(l).map(|&i| &self.edges[i])
    }
    pub fn edge_labels(&self) -> IndexSet {
        IndexSet::new(self.edges.iter().map(|e| e.label.clone()).collect())
    }

    pub(crate) fn mask(&self, set: &IndexSet) -> Result<Vec<bool>> {
        let mut m = vec![false; self.edges.len()];
        for l in set.iter() {
            let i = self.lookup.get(l).ok_or_else(|| IlaError::UnknownEdge(l.to_string()))?;
            m[*i] = true;
        }
        Ok(m)
    }

    fn labels_of(&self, m: &[bool]) -> IndexSet {
        IndexSet::new(self.edges.iter().zip(m).filter(|(_, &b)| b).map(|(e, _)| e.label.clone()).collect())
    }

    /// Keep edges in `keep`, contract those in `fuse`, drop the rest.
    /// Vertices untouched by kept or fused edges are dropped when
    /// `drop_isolated`.
    fn minor_mask(&self, keep: &[bool], fuse: &[bool], drop_isolated: bool) -> DirectedGraph {
        let n = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(n);
        let mut touched = vec![!drop_isolated; n];
        for (i, e) in self.edges.iter().enumerate() {
            if fuse[i] {
                uf.union(e.tail, e.head);
            }
            if keep[i] || fuse[i] {
                touched[e.tail] = true;
                touched[e.head] = true;
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut names = Vec::new();
        for v in 0..n {
            if !touched[v] {
                continue;
            }
            let r = uf.find(v);
            if new_id[r] == usize::MAX {
                new_id[r] = names.len();
                names.push(self.vertices[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i] && !fuse[*i])
            .map(|(_, e)| Edge { label: e.label.clone(), tail: new_id[uf.find(e.tail)], head: new_id[uf.find(e.head)] })
            .collect();
        DirectedGraph::from_sorted(names, edges).expect("labels stay unique")
    }

    /// `G∘T`.
    pub fn restrict(&self, t: &IndexSet) -> Result<DirectedGraph> {
        let keep = self.mask(t)?;
        Ok(self.minor_mask(&keep, &vec![false; keep.len()], true))
    }

    /// `G×T`.
    pub fn contract_to(&self, t: &IndexSet) -> Result<DirectedGraph> {
        let keep = self.mask(t)?;
        let fuse: Vec<bool> = keep.iter().map(|b| !b).collect();
        Ok(self.minor_mask(&keep, &fuse, false))
    }

    /// `G∘A×B` with `B ⊆ A`.
    pub fn minor(&self, a: &IndexSet, b: &IndexSet) -> Result<DirectedGraph> {
        let ma = self.mask(a)?;
        let mb = self.mask(b)?;
        if mb.iter().zip(&ma).any(|(&y, &x)| y && !x) {
            return Err(IlaError::BadPartition("B is not a subset of A".into()));
        }
        let fuse: Vec<bool> = ma.iter().zip(&mb).map(|(&x, &y)| x && !y).collect();
        Ok(self.minor_mask(&mb, &fuse, true))
    }

    /// Rename edges; every label must stay unique.
    pub fn rename_edges(&self, f: impl Fn(&Label) -> Label) -> Result<DirectedGraph> {
        let edges = self.edges.iter().map(|e| Edge { label: f(&e.label), ..e.clone() }).collect();
        DirectedGraph::from_sorted(self.vertices.clone(), edges)
    }

    /// Greedy forest over the edges flagged in `allowed`, seeded with `seed`.
    fn forest_mask(&self, allowed: &[bool], seed: &[bool]) -> std::result::Result<Vec<bool>, Label> {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        let mut out = vec![false; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if seed[i] {
                if !uf.union(e.tail, e.head) {
                    return Err(e.label.clone());
                }
                out[i] = true;
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if allowed[i] && !seed[i] && uf.union(e.tail, e.head) {
                out[i] = true;
            }
        }
        Ok(out)
    }

    fn rank_mask(&self, m: &[bool]) -> usize {
        self.forest_mask(m, &vec![false; m.len()]).expect("empty seed").iter().filter(|&&b| b).count()
    }

    /// `r(G∘T)`: size of a forest of `T`.
    pub fn rank_of(&self, t: &IndexSet) -> Result<usize> {
        Ok(self.rank_mask(&self.mask(t)?))
    }

    /// `r(G)`.
    pub fn rank(&self) -> usize {
        self.rank_mask(&vec![true; self.edges.len()])
    }

    /// `r(G×T) = r(G) − r(G∘(E − T))`.
    pub fn contraction_rank(&self, t: &IndexSet) -> Result<usize> {
        let m = self.mask(t)?;
        let rest: Vec<bool> = m.iter().map(|b| !b).collect();
        Ok(self.rank() - self.rank_mask(&rest))
    }

    pub fn is_circuit_free(&self, t: &IndexSet) -> Result<bool> {
        let m = self.mask(t)?;
        Ok(self.forest_mask(&m, &m).is_ok())
    }

    /// No subset of `t` is a cutset, i.e. `E − t` spans.
    pub fn is_cutset_free(&self, t: &IndexSet) -> Result<bool> {
        let m = self.mask(t)?;
        let rest: Vec<bool> = m.iter().map(|b| !b).collect();
        Ok(self.rank_mask(&rest) == self.rank())
    }

    pub fn components(&self) -> usize {
        self.vertices.len() - self.rank()
    }

    /// Reduced incidence matrix rows: one per vertex except the smallest
    /// vertex of each component; `+1` at the tail, `−1` at the head.
    pub fn reduced_incidence<F: Field>(&self) -> Vec<Vec<F>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(n);
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        let mut seen = vec![false; n];
        let mut row_of = vec![None; n];
        let mut rows = 0;
        for v in 0..n {
            let r = uf.find(v);
            if seen[r] {
                row_of[v] = Some(rows);
                rows += 1;
            } else {
                seen[r] = true;
            }
        }
        let mut m = vec![vec![F::zero(); self.edges.len()]; rows];
        for (j, e) in self.edges.iter().enumerate() {
            if e.tail == e.head {
                continue;
            }
            if let Some(r) = row_of[e.tail] {
                m[r][j] = m[r][j].add(&F::one());
            }
            if let Some(r) = row_of[e.head] {
                m[r][j] = m[r][j].sub(&F::one());
            }
        }
        m
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectedGraph({} vertices; {})", self.vertices.len(), self.to_edge_list().trim_end().replace('\n', "; "))
    }
}

pub fn graph_minor(g: &DirectedGraph, t: &IndexSet, mode: MinorMode) -> Result<DirectedGraph> {
    let rest = g.edge_labels().difference(t);
    g.mask(t)?;
    match mode {
        MinorMode::Delete => g.restrict(&rest),
        MinorMode::Contract => g.contract_to(&rest),
    }
}

/// Voltage space is the row space of the reduced incidence matrix, current
/// space its null space. Both live on the edge labels.
pub fn kirchhoff_spaces<F: Field>(g: &DirectedGraph) -> KirchhoffSpaces<F> {
    let idx = g.edge_labels();
    let voltage = Space::from_generators(idx.clone(), g.reduced_incidence());
    let current = voltage.perp();
    KirchhoffSpaces { voltage, current }
}

/// Maximal circuit-free edge set containing `seed`, grown in label order.
pub fn forests(g: &DirectedGraph, seed: Option<&IndexSet>) -> Result<IndexSet> {
    let s = match seed {
        Some(s) => g.mask(s)?,
        None => vec![false; g.n_edges()],
    };
    let all = vec![true; g.n_edges()];
    let m = g.forest_mask(&all, &s).map_err(|l| IlaError::NotAForest(format!("seed closes a circuit at {l}")))?;
    Ok(g.labels_of(&m))
}

#[derive(Clone, Debug)]
pub struct MultiportDecomposition {
    /// Multiport on `E1 ⊎ P1`.
    pub g1: DirectedGraph,
    /// Multiport on `E2 ⊎ P2`.
    pub g2: DirectedGraph,
    /// Port connection diagram on `P1 ⊎ P2`.
    pub connector: DirectedGraph,
    pub port_count: usize,
    /// Port labels of `g1`, each a primed copy of an `E2` edge.
    pub p1: IndexSet,
    /// Port labels of `g2`, each a primed copy of an `E1` edge.
    pub p2: IndexSet,
}

/// Minimal port decomposition by forest growth and three minors. Linear in
/// `|E|` up to union-find and the initial label sort.
pub fn multiport_decompose(g: &DirectedGraph, e1: &IndexSet, e2: &IndexSet) -> Result<MultiportDecomposition> {
    let m1 = g.mask(e1)?;
    let m2 = g.mask(e2)?;
    if m1.iter().zip(&m2).any(|(a, b)| a == b) {
        return Err(IlaError::BadPartition("E1 and E2 must partition the edge set".into()));
    }
    let none = vec![false; g.n_edges()];
    let t1 = g.forest_mask(&m1, &none).expect("empty seed");
    let t2 = g.forest_mask(&m2, &none).expect("empty seed");
    // t1 ⊎ t12 is grown from t1 using edges of t2 only, and symmetrically.
    let t1_t12 = g.forest_mask(&t2, &t1).expect("t1 is a forest");
    let t2_t21 = g.forest_mask(&t1, &t2).expect("t2 is a forest");
    let t12: Vec<bool> = (0..g.n_edges()).map(|i| t1_t12[i] && t2[i]).collect();
    let t21: Vec<bool> = (0..g.n_edges()).map(|i| t2_t21[i] && t1[i]).collect();
    let ports1: Vec<bool> = (0..g.n_edges()).map(|i| t2[i] && !t12[i]).collect();
    let ports2: Vec<bool> = (0..g.n_edges()).map(|i| t1[i] && !t21[i]).collect();

    let k = g.edge_labels().max_primes() + 1;
    let p1_src = g.labels_of(&ports1);
    let p2_src = g.labels_of(&ports2);
    let rename = |ports: &IndexSet| {
        let ports = ports.clone();
        move |l: &Label| if ports.contains(l) { l.primed(k) } else { l.clone() }
    };
    let both = p1_src.union(&p2_src);

    // G∘(E1 ⊎ t2) × (E1 ⊎ (t2 − t12)).
    let a1: Vec<bool> = (0..g.n_edges()).map(|i| m1[i] || t2[i]).collect();
    let b1: Vec<bool> = (0..g.n_edges()).map(|i| m1[i] || ports1[i]).collect();
    let g1_raw = minor_masks(g, &a1, &b1);
    // G∘(E2 ⊎ t1) × (E2 ⊎ (t1 − t21)).
    let a2: Vec<bool> = (0..g.n_edges()).map(|i| m2[i] || t1[i]).collect();
    let b2: Vec<bool> = (0..g.n_edges()).map(|i| m2[i] || ports2[i]).collect();
    let g2 = minor_masks(g, &a2, &b2).rename_edges(rename(&p2_src))?;
    // G_E1P1 ∘ (t1 ⊎ P1) × (P1 ⊎ (t1 − t21)).
    let ac = g1_raw.mask(&g1_raw.edge_labels().intersection(&g.labels_of(&t1).union(&p1_src)))?;
    let bc = g1_raw.mask(&g1_raw.edge_labels().intersection(&p1_src.union(&p2_src)))?;
    let fuse: Vec<bool> = ac.iter().zip(&bc).map(|(&x, &y)| x && !y).collect();
    let connector = g1_raw.minor_mask(&bc, &fuse, true).rename_edges(rename(&both))?;
    let g1 = g1_raw.rename_edges(rename(&p1_src))?;

    let p1 = p1_src.map(|l| l.primed(k));
    let p2 = p2_src.map(|l| l.primed(k));
    Ok(MultiportDecomposition { g1, g2, connector, port_count: p1.len(), p1, p2 })
}

fn minor_masks(g: &DirectedGraph, a: &[bool], b: &[bool]) -> DirectedGraph {
    let fuse: Vec<bool> = a.iter().zip(b).map(|(&x, &y)| x && !y).collect();
    g.minor_mask(b, &fuse, true)
}

/// `r(G∘E1) − r(G×E1)`.
pub fn min_port_count(g: &DirectedGraph, e1: &IndexSet) -> Result<usize> {
    Ok(g.rank_of(e1)? - g.contraction_rank(e1)?)
}

impl MultiportDecomposition {
    /// Ports are circuit- and cutset-free in each of the three graphs.
    pub fn ports_are_free(&self) -> Result<bool> {
        let ok = |g: &DirectedGraph, p: &IndexSet| -> Result<bool> { Ok(g.is_circuit_free(p)? && g.is_cutset_free(p)?) };
        Ok(ok(&self.g1, &self.p1)?
            && ok(&self.connector, &self.p1)?
            && ok(&self.connector, &self.p2)?
            && ok(&self.g2, &self.p2)?)
    }

    /// `(V(g1) ⊕ V(g2)) ↔ V(connector)` for voltage and current spaces.
    pub fn recompose<F: Field>(&self) -> Result<KirchhoffSpaces<F>> {
        let k1 = kirchhoff_spaces::<F>(&self.g1);
        let k2 = kirchhoff_spaces::<F>(&self.g2);
        let kc = kirchhoff_spaces::<F>(&self.connector);
        let voltage = k1.voltage.direct_sum(&k2.voltage)?.link(&kc.voltage);
        let current = k1.current.direct_sum(&k2.current)?.link(&kc.current);
        Ok(KirchhoffSpaces { voltage, current })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn g(edges: &[(&str, &str, &str)]) -> DirectedGraph {
        let t: Vec<(Label, &str, &str)> = edges.iter().map(|(l, a, b)| (l.parse().unwrap(), *a, *b)).collect();
        DirectedGraph::from_named_edges(&t).unwrap()
    }

    #[test]
    fn triangle_spaces() {
        let tri = g(&[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "a")]);
        let k = kirchhoff_spaces::<Q>(&tri);
        assert_eq!(k.current, Space::from_ints(&["e1", "e2", "e3"], &[&[1, 1, 1]]));
        assert_eq!(k.voltage.rank(), 2);
    }

    #[test]
    fn contract_tree() {
        let t = g(&[("a", "1", "2"), ("b", "2", "3")]);
        let c = t.contract_to(&IndexSet::empty()).unwrap();
        assert_eq!((c.n_vertices(), c.n_edges()), (1, 0));
    }

    #[test]
    fn two_terminal_link_has_one_port() {
        // A triangle whose vertices 1 and 2 are also joined by a path.
        let gr = g(&[("a1", "1", "2"), ("a2", "2", "3"), ("a3", "3", "1"), ("c1", "1", "4"), ("c2", "4", "2")]);
        let e1 = IndexSet::of(&["a1", "a2", "a3"]);
        let e2 = IndexSet::of(&["c1", "c2"]);
        let d = multiport_decompose(&gr, &e1, &e2).unwrap();
        assert_eq!(d.port_count, 1);
        assert_eq!(d.port_count, min_port_count(&gr, &e1).unwrap());
        assert!(d.ports_are_free().unwrap());
        let r = d.recompose::<Q>().unwrap();
        let k = kirchhoff_spaces::<Q>(&gr);
        assert_eq!(r.voltage, k.voltage);
        assert_eq!(r.current, k.current);
    }
}
