//! RLCEJ networks with sensors: netlist format and the network GDS.

use std::collections::HashSet;
use std::fmt;

use crate::error::{IlaError, Result};
use crate::field::{parse_ratio, Field, Q};
use crate::genop::Gds;
use crate::graph::{kirchhoff_spaces, DirectedGraph};
use crate::label::{IndexSet, Label};
use crate::space::Space;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeviceKind {
    R,
    C,
    L,
    /// Voltage source; its voltage is an input.
    E,
    /// Current source; its current is an input.
    J,
    /// Voltage sensor: zero current, voltage is an output.
    YV,
    /// Current sensor: zero voltage, current is an output.
    YI,
}

impl DeviceKind {
    pub fn tag(self) -> &'static str {
        match self {
            DeviceKind::R => "R",
            DeviceKind::C => "C",
            DeviceKind::L => "L",
            DeviceKind::E => "E",
            DeviceKind::J => "J",
            DeviceKind::YV => "YV",
            DeviceKind::YI => "YI",
        }
    }
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "R" => DeviceKind::R,
            "C" => DeviceKind::C,
            "L" => DeviceKind::L,
            "E" => DeviceKind::E,
            "J" => DeviceKind::J,
            "YV" => DeviceKind::YV,
            "YI" => DeviceKind::YI,
            _ => return None,
        })
    }
    pub fn has_value(self) -> bool {
        matches!(self, DeviceKind::R | DeviceKind::C | DeviceKind::L)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Device {
    pub kind: DeviceKind,
    pub name: String,
    /// Tail of the edge.
    pub pos: String,
    /// Head of the edge.
    pub neg: String,
    /// Positive value for R, C and L.
    pub value: Option<Q>,
}

/// A network: one edge per device, labelled by the device name. Each edge
/// carries a voltage `v_<name>` (tail minus head) and a current `i_<name>`
/// (tail to head).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    devices: Vec<Device>,
    graph: DirectedGraph,
}

/// Voltage label of an edge.
pub fn vlab(e: &Label) -> Label {
    Label::with(format!("v_{}", e.base), e.primes, e.dotted)
}

/// Current label of an edge.
pub fn ilab(e: &Label) -> Label {
    Label::with(format!("i_{}", e.base), e.primes, e.dotted)
}

pub fn vlabs(edges: &IndexSet) -> IndexSet {
    edges.map(vlab)
}

pub fn ilabs(edges: &IndexSet) -> IndexSet {
    edges.map(ilab)
}

/// Voltage space of `g` on `v_` labels.
pub fn voltage_space<F: Field>(g: &DirectedGraph) -> Space<F> {
    kirchhoff_spaces::<F>(g).voltage.rename_with(vlab).expect("prefixing is injective")
}

/// Current space of `g` on `i_` labels.
pub fn current_space<F: Field>(g: &DirectedGraph) -> Space<F> {
    kirchhoff_spaces::<F>(g).current.rename_with(ilab).expect("prefixing is injective")
}

pub(crate) fn to_field<F: Field>(x: &Q) -> Result<F> {
    F::from_ratio(x.numer(), x.denom())
        .ok_or_else(|| IlaError::IllPosedNetwork(format!("value {x} is not representable over {}", F::name())))
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || matches!(c, '\'' | '(' | ')' | ',' | '#'))
}

impl Network {
    pub fn new(devices: Vec<Device>) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &devices {
            if !seen.insert(d.name.clone()) {
                return Err(IlaError::DuplicateDevice(d.name.clone()));
            }
            if !valid_name(&d.name) {
                return Err(IlaError::BadPartition(format!("invalid device name {:?}", d.name)));
            }
            match (&d.value, d.kind.has_value()) {
                (Some(v), true) if crate::field::is_positive(v) => {}
                (None, false) => {}
                _ => return Err(IlaError::BadPartition(format!("bad value for device {}", d.name))),
            }
        }
        let triples: Vec<(Label, &str, &str)> =
            devices.iter().map(|d| (Label::new(d.name.clone()), d.pos.as_str(), d.neg.as_str())).collect();
        let graph = DirectedGraph::from_named_edges(&triples)?;
        Ok(Network { devices, graph })
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }
    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }
    pub fn device(&self, e: &Label) -> Option<&Device> {
        self.devices.iter().find(|d| d.name == e.base && e.primes == 0)
    }

    /// Edges of the given kinds.
    pub fn edges_of(&self, kinds: &[DeviceKind]) -> IndexSet {
        IndexSet::new(self.devices.iter().filter(|d| kinds.contains(&d.kind)).map(|d| Label::new(d.name.clone())).collect())
    }

    /// `W = v_C ⊎ i_L`.
    pub fn state_labels(&self) -> IndexSet {
        vlabs(&self.edges_of(&[DeviceKind::C])).union(&ilabs(&self.edges_of(&[DeviceKind::L])))
    }
    /// `Mu = i_J ⊎ v_E`.
    pub fn input_labels(&self) -> IndexSet {
        ilabs(&self.edges_of(&[DeviceKind::J])).union(&vlabs(&self.edges_of(&[DeviceKind::E])))
    }
    /// `My = i_YI ⊎ v_YV`.
    pub fn output_labels(&self) -> IndexSet {
        ilabs(&self.edges_of(&[DeviceKind::YI])).union(&vlabs(&self.edges_of(&[DeviceKind::YV])))
    }

    /// Voltage sources and current sensors must not close a circuit;
    /// current sources and voltage sensors must not contain a cutset.
    pub fn check_well_posed(&self) -> Result<()> {
        let g = &self.graph;
        let ev = self.edges_of(&[DeviceKind::E, DeviceKind::YI]);
        if !g.is_circuit_free(&ev)? {
            return Err(IlaError::IllPosedNetwork("voltage sources and current sensors form a loop".into()));
        }
        let jc = self.edges_of(&[DeviceKind::J, DeviceKind::YV]);
        if !g.is_cutset_free(&jc)? {
            return Err(IlaError::IllPosedNetwork("current sources and voltage sensors form a cutset".into()));
        }
        Ok(())
    }

    /// Device rows on an index that holds `v_e`, `i_e` for every edge in
    /// `edges` (and `v̇_C`, `i̇_L` for dynamic ones). Port edges are skipped.
    pub(crate) fn device_rows<F: Field>(&self, idx: &IndexSet, edges: &IndexSet) -> Result<Vec<Vec<F>>> {
        let col = |l: &Label| idx.position(l).expect("device variable present");
        let mut rows = Vec::new();
        for e in edges.iter() {
            let Some(d) = self.device(e) else { continue };
            let mut r = vec![F::zero(); idx.len()];
            match d.kind {
                DeviceKind::R => {
                    r[col(&vlab(e))] = F::one();
                    r[col(&ilab(e))] = to_field::<F>(d.value.as_ref().unwrap())?.neg();
                }
                DeviceKind::C => {
                    r[col(&ilab(e))] = F::one();
                    r[col(&vlab(e).dot())] = to_field::<F>(d.value.as_ref().unwrap())?.neg();
                }
                DeviceKind::L => {
                    r[col(&vlab(e))] = F::one();
                    r[col(&ilab(e).dot())] = to_field::<F>(d.value.as_ref().unwrap())?.neg();
                }
                DeviceKind::YV => r[col(&ilab(e))] = F::one(),
                DeviceKind::YI => r[col(&vlab(e))] = F::one(),
                DeviceKind::E | DeviceKind::J => continue,
            }
            rows.push(r);
        }
        Ok(rows)
    }

    /// The network as a GDS on `W ⊎ Ẇ ⊎ Mu ⊎ My`: all Kirchhoff and device
    /// constraints, with the derivatives obeying the topological laws of
    /// their own edges, restricted to the dynamic and manifest variables.
    pub fn gds<F: Field>(&self) -> Result<Gds<F>> {
        let g = &self.graph;
        let cs = self.edges_of(&[DeviceKind::C]);
        let ls = self.edges_of(&[DeviceKind::L]);
        let kv = voltage_space::<F>(g);
        let ki = current_space::<F>(g);
        let vdot = kv.restrict(&vlabs(&cs))?.rename_with(Label::dot)?;
        let idot = ki.restrict(&ilabs(&ls))?.rename_with(Label::dot)?;
        let top = kv.direct_sum(&ki)?.direct_sum(&vdot)?.direct_sum(&idot)?;
        let rows = self.device_rows::<F>(top.index(), &g.edge_labels())?;
        let sol = top.intersect(&Space::from_constraints(top.index().clone(), rows));
        let w = self.state_labels();
        let (mu, my) = (self.input_labels(), self.output_labels());
        let keep = w.union(&w.dotted()).union(&mu).union(&my);
        Gds::with_io(sol.restrict(&keep)?, w, mu, my)
    }
}

fn perr(line: usize, column: usize, msg: impl Into<String>) -> IlaError {
    IlaError::Parse { line, column, msg: msg.into() }
}

/// Parse `<KIND> <name> <node+> <node−> [value]` records, one per line.
pub fn parse_netlist(text: &str) -> Result<Network> {
    let mut devices = Vec::new();
    let mut names = HashSet::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let body = line.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (i, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    toks.push((s, &body[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if toks.is_empty() {
            continue;
        }
        let col = |i: usize| body[..toks[i].0].chars().count() + 1;
        let kind = DeviceKind::parse(toks[0].1).ok_or_else(|| perr(ln, col(0), format!("unknown device kind {}", toks[0].1)))?;
        let want = if kind.has_value() { 5 } else { 4 };
        if toks.len() < want {
            return Err(perr(ln, body.chars().count() + 1, format!("{} record needs {} fields", kind.tag(), want)));
        }
        if toks.len() > want {
            return Err(perr(ln, col(want), "unexpected trailing field"));
        }
        let name = toks[1].1;
        if !valid_name(name) {
            return Err(perr(ln, col(1), format!("invalid device name {name}")));
        }
        if !names.insert(name.to_string()) {
            return Err(IlaError::DuplicateDevice(name.to_string()));
        }
        let value = if kind.has_value() {
            let (n, d) = parse_ratio(toks[4].1).ok_or_else(|| perr(ln, col(4), format!("bad value {}", toks[4].1)))?;
            let v = Q::new(n, d);
            if !crate::field::is_positive(&v) {
                return Err(perr(ln, col(4), "value must be positive"));
            }
            Some(v)
        } else {
            None
        };
        devices.push(Device { kind, name: name.to_string(), pos: toks[2].1.to_string(), neg: toks[3].1.to_string(), value });
    }
    Network::new(devices)
}

impl fmt::Display for Network {
    /// Canonical netlist text; values print as reduced `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.devices {
            write!(f, "{} {} {} {}", d.kind.tag(), d.name, d.pos, d.neg)?;
            if let Some(v) = &d.value {
                write!(f, " {}", v.to_ratio_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The RC network used as the reference fixture: three unit capacitors in
/// a loop, a unit resistor in series with a voltage source and a current
/// sensor across the first capacitor, a current source and a voltage
/// sensor across the same pair of nodes.
pub const RC_NETLIST: &str = "\
# three unit capacitors in a loop
C C1 a b 1
C C2 b c 1
C C3 c a 1
# current source and voltage sensor across C1
J J5 b a
YV V5 b a
# resistor, voltage source and current sensor in series across C1
R G4 a d 1
E E6 d e
YI A6 e b
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn roundtrip_and_errors() {
        let n = parse_netlist(RC_NETLIST).unwrap();
        let again = parse_netlist(&n.to_string()).unwrap();
        assert_eq!(n, again);
        assert!(parse_netlist("").unwrap().devices().is_empty());
        let e = parse_netlist("R R1 a b 0").unwrap_err();
        assert_eq!(e, IlaError::Parse { line: 1, column: 10, msg: "value must be positive".into() });
        assert!(matches!(parse_netlist("R R1 a b 1\nC R1 a b 1"), Err(IlaError::DuplicateDevice(_))));
        assert!(matches!(parse_netlist("Q x a b"), Err(IlaError::Parse { line: 1, column: 1, .. })));
        let d = parse_netlist("R R1 a b 0.25").unwrap();
        assert_eq!(d.devices()[0].value, Some(q(1, 4)));
    }

    #[test]
    fn rc_gds_matches_state_equations() {
        let n = parse_netlist(RC_NETLIST).unwrap();
        let g = n.gds::<Q>().unwrap();
        // v̇1 = -2/3 v1 + 2/3 v6 + 2/3 j5 with v1+v2+v3 = 0.
        let idx = g.space.index().clone();
        let mut x = vec![Q::from_i64(0); idx.len()];
        let set = |x: &mut Vec<Q>, name: &str, val: Q| x[idx.position(&name.parse().unwrap()).unwrap()] = val;
        set(&mut x, "v_C1", q(2, 1));
        set(&mut x, "v_C2", q(-1, 1));
        set(&mut x, "v_C3", q(-1, 1));
        set(&mut x, "dot(v_C1)", q(-4, 3));
        set(&mut x, "dot(v_C2)", q(2, 3));
        set(&mut x, "dot(v_C3)", q(2, 3));
        set(&mut x, "i_A6", q(2, 1));
        set(&mut x, "v_V5", q(-2, 1));
        assert!(g.space.contains_coords(&x));
    }
}
