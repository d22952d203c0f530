//! The `ila` command line: argument parsing, field selection, and reports in
//! text or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use crate::control::{place_poles, place_poles_injection, Placement};
use crate::emulator::{build_rlc_emulator, elinkage_verify, linkage_adjoint, RlcEmulator};
use crate::error::IlaError;
use crate::field::{Field, Gf, Q};
use crate::fixtures;
use crate::genop::{adjoint_gds, minimal_annihilating_poly, Gds, Genaut};
use crate::graph::{kirchhoff_spaces, min_port_count, multiport_decompose, DirectedGraph};
use crate::invariant::{max_controlled_invariant, min_conditioned_invariant};
use crate::label::{IndexSet, Label};
use crate::network::{parse_netlist, DeviceKind, Network};
use crate::poly::Poly;
use crate::report::{labels_json, matrix_json, matrix_text, poly_json, space_json, space_text, SCHEMA};
use crate::space::Space;

/// Primes accepted by `--field gf<p>`.
pub const SUPPORTED_PRIMES: [u32; 7] = [2, 3, 5, 7, 11, 13, 101];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldArg {
    Q,
    Gf(u32),
}

fn parse_field(s: &str) -> Result<FieldArg, String> {
    let t = s.trim().to_ascii_lowercase();
    if t == "q" || t == "rational" {
        return Ok(FieldArg::Q);
    }
    let digits = t.strip_prefix("gf").map(|r| r.trim_start_matches('(').trim_end_matches(')'));
    match digits.and_then(|d| d.parse::<u32>().ok()) {
        Some(p) if SUPPORTED_PRIMES.contains(&p) => Ok(FieldArg::Gf(p)),
        Some(p) => Err(format!("GF({p}) is not supported; choose one of {SUPPORTED_PRIMES:?}")),
        None => Err(format!("unknown field {s:?}; use q or gf<p>")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    /// The network's own GDS on capacitor voltages and inductor currents.
    Original,
    /// The multiport emulator.
    Emulator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Least conditioned invariant containing the input directions.
    Conditioned,
    /// Largest controlled invariant on which the outputs can be held at zero.
    Controlled,
}

#[derive(Parser, Debug)]
#[command(name = "ila", version, about = "Exact implicit linear algebra: multiports, emulators and pole placement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Scalar field: `q` or `gf<p>`.
    #[arg(long, global = true, env = "ILA_FIELD", default_value = "q", value_parser = parse_field)]
    pub field: FieldArg,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Split a network graph into two multiports and a port connector.
    Decompose {
        /// Netlist file, or `-` for stdin.
        netlist: PathBuf,
        /// First block: `c`, `l`, or a comma-separated list of device names.
        #[arg(long, default_value = "c")]
        split: String,
    },
    /// Build the multiport emulator and its state equations.
    Emulate { netlist: PathBuf },
    /// Minimal annihilating polynomial of the system with inputs at zero.
    Annpoly {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Original)]
        space: SpaceArg,
    },
    /// Conditioned or controlled invariant subspace.
    Invariant {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Original)]
        space: SpaceArg,
        #[arg(long, value_enum, default_value_t = KindArg::Conditioned)]
        kind: KindArg,
    },
    /// Place poles by state feedback.
    Feedback {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Original)]
        space: SpaceArg,
        /// Monic target, coefficients lowest degree first, e.g. "2,3,1".
        #[arg(long)]
        target_poly: String,
    },
    /// Place poles by output injection.
    Injection {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Original)]
        space: SpaceArg,
        #[arg(long)]
        target_poly: String,
    },
    /// Adjoint system, with the involution checked.
    Adjoint {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Original)]
        space: SpaceArg,
    },
    /// Check the duality of composition on random triples of spaces.
    VerifyIdt {
        /// Number of random triples.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Largest total index size.
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
    },
    /// Quick end-to-end checks over ℚ and GF(2).
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Emulate { .. } => "emulate",
            Command::Annpoly { .. } => "annpoly",
            Command::Invariant { .. } => "invariant",
            Command::Feedback { .. } => "feedback",
            Command::Injection { .. } => "injection",
            Command::Adjoint { .. } => "adjoint",
            Command::VerifyIdt { .. } => "verify-idt",
            Command::Selftest => "selftest",
        }
    }
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(IlaError),
    Io(String),
    /// A check command ran to completion but something failed.
    Checks,
}

impl From<IlaError> for Failure {
    fn from(e: IlaError) -> Self {
        Failure::Domain(e)
    }
}

struct Output {
    result: Value,
    text: String,
}

type Run = Result<Output, (Failure, Option<Output>)>;

fn fail<T>(e: impl Into<Failure>) -> Result<T, (Failure, Option<Output>)> {
    Err((e.into(), None))
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let (field_name, res) = dispatch(&cli);
    finish(&cli, &field_name, res)
}

fn dispatch(cli: &Cli) -> (String, Run) {
    match cli.field {
        FieldArg::Q => (Q::name(), exec::<Q>(cli)),
        FieldArg::Gf(2) => (Gf::<2>::name(), exec::<Gf<2>>(cli)),
        FieldArg::Gf(3) => (Gf::<3>::name(), exec::<Gf<3>>(cli)),
        FieldArg::Gf(5) => (Gf::<5>::name(), exec::<Gf<5>>(cli)),
        FieldArg::Gf(7) => (Gf::<7>::name(), exec::<Gf<7>>(cli)),
        FieldArg::Gf(11) => (Gf::<11>::name(), exec::<Gf<11>>(cli)),
        FieldArg::Gf(13) => (Gf::<13>::name(), exec::<Gf<13>>(cli)),
        FieldArg::Gf(101) => (Gf::<101>::name(), exec::<Gf<101>>(cli)),
        FieldArg::Gf(p) => unreachable!("GF({p}) passed validation"),
    }
}

fn error_kind(e: &IlaError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn finish(cli: &Cli, field: &str, res: Run) -> Outcome {
    let command = cli.command.name();
    let envelope = |status: &str| json!({ "schema": SCHEMA, "command": command, "field": field, "status": status });
    match res {
        Ok(out) => {
            let stdout = if cli.json {
                let mut v = envelope("ok");
                v["result"] = out.result;
                format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
            } else {
                out.text
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err((failure, partial)) => {
            let (code, kind, message) = match &failure {
                Failure::Usage(m) => (2, "Usage".to_string(), m.clone()),
                Failure::Domain(e) => (1, error_kind(e), e.to_string()),
                Failure::Io(m) => (1, "Io".to_string(), m.clone()),
                Failure::Checks => (1, "ChecksFailed".to_string(), "one or more checks failed".to_string()),
            };
            if cli.json {
                let mut v = envelope("error");
                v["error"] = json!({ "kind": kind, "message": message });
                if let Some(p) = partial {
                    v["result"] = p.result;
                }
                Outcome { code, stdout: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), stderr: String::new() }
            } else {
                let stdout = partial.map(|p| p.text).unwrap_or_default();
                Outcome { code, stdout, stderr: format!("error: {message}\n") }
            }
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Failure::Io(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Network, Failure> {
    Ok(parse_netlist(&read_input(path)?)?)
}

fn target<F: Field>(text: &str) -> Result<Poly<F>, Failure> {
    let p = Poly::<F>::parse_coeffs(text).ok_or_else(|| Failure::Usage(format!("bad --target-poly {text:?}")))?;
    if p.is_zero() || !p.is_monic() {
        return Err(Failure::Usage("--target-poly must be monic (last coefficient 1)".into()));
    }
    Ok(p)
}

fn exec<F: Field>(cli: &Cli) -> Run {
    let wrap = |r: Result<Output, Failure>| r.map_err(|f| (f, None));
    match &cli.command {
        Command::Decompose { netlist, split } => wrap(decompose::<F>(netlist, split)),
        Command::Emulate { netlist } => wrap(emulate::<F>(netlist)),
        Command::Annpoly { netlist, space } => wrap(annpoly::<F>(netlist, *space)),
        Command::Invariant { netlist, space, kind } => wrap(invariant::<F>(netlist, *space, *kind)),
        Command::Feedback { netlist, space, target_poly } => wrap(place::<F>(netlist, *space, target_poly, false)),
        Command::Injection { netlist, space, target_poly } => wrap(place::<F>(netlist, *space, target_poly, true)),
        Command::Adjoint { netlist, space } => wrap(adjoint_cmd::<F>(netlist, *space)),
        Command::VerifyIdt { random, max_dim } => verify_idt::<F>(*random, *max_dim, cli.seed),
        Command::Selftest => selftest(),
    }
}

fn edge_set(net: &Network, split: &str) -> Result<IndexSet, Failure> {
    match split.trim().to_ascii_lowercase().as_str() {
        "c" => return Ok(net.edges_of(&[DeviceKind::C])),
        "l" => return Ok(net.edges_of(&[DeviceKind::L])),
        _ => {}
    }
    let labels: Vec<Label> = split.split(',').map(|t| Label::new(t.trim())).filter(|l| !l.base.is_empty()).collect();
    for l in &labels {
        if net.graph().edge(l).is_none() {
            return Err(Failure::Domain(IlaError::UnknownEdge(l.to_string())));
        }
    }
    Ok(IndexSet::new(labels))
}

fn graph_json(g: &DirectedGraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!([e.label.to_string(), g.vertices()[e.tail], g.vertices()[e.head]]))
        .collect();
    json!({ "vertices": g.vertices(), "edges": edges })
}

fn decompose<F: Field>(path: &PathBuf, split: &str) -> Result<Output, Failure> {
    let net = load(path)?;
    let g = net.graph();
    let e1 = edge_set(&net, split)?;
    let e2 = g.edge_labels().difference(&e1);
    let d = multiport_decompose(g, &e1, &e2)?;
    let formula = min_port_count(g, &e1)?;
    let free = d.ports_are_free()?;
    let rec = d.recompose::<F>()?;
    let direct = kirchhoff_spaces::<F>(g);
    let recomposes = rec.voltage == direct.voltage && rec.current == direct.current;
    let result = json!({
        "port_count": d.port_count,
        "rank_formula": formula,
        "ports_free": free,
        "recomposes": recomposes,
        "ports1": labels_json(&d.p1),
        "ports2": labels_json(&d.p2),
        "multiport1": graph_json(&d.g1),
        "multiport2": graph_json(&d.g2),
        "connector": graph_json(&d.connector),
    });
    let mut text = String::new();
    let _ = writeln!(text, "ports: {} (rank formula {formula})", d.port_count);
    let _ = writeln!(text, "ports free of circuits and cutsets: {free}");
    let _ = writeln!(text, "recomposition matches: {recomposes}");
    for (name, gr) in [("multiport 1", &d.g1), ("multiport 2", &d.g2), ("connector", &d.connector)] {
        let _ = writeln!(text, "{name}:");
        for line in gr.to_edge_list().lines() {
            let _ = writeln!(text, "  {line}");
        }
    }
    Ok(Output { result, text })
}

fn emulator_of<F: Field>(net: &Network) -> Result<RlcEmulator<F>, Failure> {
    Ok(build_rlc_emulator::<F>(net)?)
}

fn emulate<F: Field>(path: &PathBuf) -> Result<Output, Failure> {
    let net = load(path)?;
    let e = emulator_of::<F>(&net)?;
    let report = elinkage_verify(&e.pair, &e.original.space, &e.emulator.space)?;
    let f = &e.flat;
    let dotcross: Vec<Value> = report
        .dotcross
        .conditions
        .iter()
        .map(|c| json!({ "condition": c.name, "holds": c.holds, "equality": c.equality }))
        .collect();
    let result = json!({
        "dimension": e.dimension,
        "zero_modes": e.zero_modes,
        "no_zero_eigenvalue": e.no_zero_eigenvalue,
        "states": labels_json(&f.states),
        "inputs": labels_json(&f.inputs),
        "outputs": labels_json(&f.outputs),
        "a": matrix_json(&f.a),
        "b": matrix_json(&f.b),
        "c": matrix_json(&f.c),
        "d": matrix_json(&f.d),
        "pair": { "v1": space_json(&e.pair.v1), "v2": space_json(&e.pair.v2) },
        "linked": report.linked,
        "dotcross": dotcross,
        "static": {
            "inputs": labels_json(&e.static_map.inputs),
            "outputs": labels_json(&e.static_map.outputs),
            "h": matrix_json(&e.static_map.h),
        },
    });
    let mut text = String::new();
    let _ = writeln!(text, "emulator: {} states, {} zero modes left out", e.dimension, e.zero_modes);
    let _ = writeln!(text, "linked to the network: {}", report.linked);
    let sd = f.states.dotted();
    let _ = write!(text, "A\n{}", matrix_text(&sd, &f.states, &f.a));
    let _ = write!(text, "B\n{}", matrix_text(&sd, &f.inputs, &f.b));
    let _ = write!(text, "C\n{}", matrix_text(&f.outputs, &f.states, &f.c));
    let _ = write!(text, "D\n{}", matrix_text(&f.outputs, &f.inputs, &f.d));
    let _ = write!(text, "V1\n{}V2\n{}", space_text(&e.pair.v1), space_text(&e.pair.v2));
    Ok(Output { result, text })
}

fn system<F: Field>(net: &Network, space: SpaceArg) -> Result<Gds<F>, Failure> {
    Ok(match space {
        SpaceArg::Original => net.gds::<F>()?,
        SpaceArg::Emulator => emulator_of::<F>(net)?.emulator,
    })
}

fn space_name(space: SpaceArg) -> &'static str {
    match space {
        SpaceArg::Original => "original",
        SpaceArg::Emulator => "emulator",
    }
}

fn annpoly<F: Field>(path: &PathBuf, space: SpaceArg) -> Result<Output, Failure> {
    let net = load(path)?;
    let g = system::<F>(&net, space)?;
    let v = g.genaut_autonomous()?;
    let p = minimal_annihilating_poly(&v)?;
    let result = json!({
        "space": space_name(space),
        "states": labels_json(g.w()),
        "poly": poly_json(&p),
        "degree": p.degree(),
    });
    Ok(Output { result, text: format!("{p}\n") })
}

/// The genaut with inputs free and outputs held at zero.
fn output_nulling<F: Field>(g: &Gds<F>) -> Result<Genaut<F>, Failure> {
    let (mu, my) = g.io_or_err()?;
    let v_m = Space::full(mu.clone()).direct_sum(&Space::zero(my.clone()))?;
    Ok(g.genaut_under(&v_m)?)
}

fn invariant<F: Field>(path: &PathBuf, space: SpaceArg, kind: KindArg) -> Result<Output, Failure> {
    let net = load(path)?;
    let g = system::<F>(&net, space)?;
    let (rep, name) = match kind {
        KindArg::Conditioned => {
            let v = g.genaut_free();
            (min_conditioned_invariant(&v, &v.img_cross())?, "conditioned")
        }
        KindArg::Controlled => {
            let v = output_nulling(&g)?;
            (max_controlled_invariant(&v, &v.dom())?, "controlled")
        }
    };
    let result = json!({
        "space": space_name(space),
        "kind": name,
        "iterations": rep.iterations,
        "invariant": space_json(&rep.space),
    });
    let text = format!("{name} invariant after {} iterations:\n{}", rep.iterations, space_text(&rep.space));
    Ok(Output { result, text })
}

fn placement_json<F: Field>(pl: &Placement<F>) -> Result<Value, Failure> {
    let achieved = minimal_annihilating_poly(&pl.achieved)?;
    Ok(json!({
        "law": space_json(&pl.law.linkage),
        "unique": pl.law.unique,
        "fixed": poly_json(&pl.fixed),
        "placed": poly_json(&pl.placed),
        "achieved": poly_json(&achieved),
        "closed_loop": space_json(&pl.achieved.space),
    }))
}

fn place<F: Field>(path: &PathBuf, space: SpaceArg, target_text: &str, injection: bool) -> Result<Output, Failure> {
    let t = target::<F>(target_text)?;
    let net = load(path)?;
    let g = system::<F>(&net, space)?;
    let pl = if injection { place_poles_injection(&g, &t)? } else { place_poles(&g, &t)? };
    let mut result = placement_json(&pl)?;
    result["space"] = json!(space_name(space));
    let achieved = minimal_annihilating_poly(&pl.achieved)?;
    let text = format!(
        "fixed factor: {}\nplaced factor: {}\nclosed loop annihilated by: {achieved}\nlaw:\n{}",
        pl.fixed,
        pl.placed,
        space_text(&pl.law.linkage)
    );
    Ok(Output { result, text })
}

fn adjoint_cmd<F: Field>(path: &PathBuf, space: SpaceArg) -> Result<Output, Failure> {
    let net = load(path)?;
    let (g, pair_linked) = match space {
        SpaceArg::Original => (net.gds::<F>()?, None),
        SpaceArg::Emulator => {
            let e = emulator_of::<F>(&net)?;
            let t = linkage_adjoint(&e.pair, &e.original, &e.emulator)?;
            let linked = elinkage_verify(&t.pair, &t.vw.space, &t.vp.space)?.linked;
            (e.emulator, Some(linked))
        }
    };
    let a = adjoint_gds(&g)?;
    let involution = adjoint_gds(&a)? == g;
    let (mu, my) = a.io_or_err()?;
    let result = json!({
        "space": space_name(space),
        "adjoint": space_json(&a.space),
        "inputs": labels_json(mu),
        "outputs": labels_json(my),
        "involution": involution,
        "pair_adjoint_linked": pair_linked,
    });
    let mut text = format!("adjoint:\n{}involution holds: {involution}\n", space_text(&a.space));
    if let Some(l) = pair_linked {
        let _ = writeln!(text, "adjoint pair links the adjoint systems: {l}");
    }
    Ok(Output { result, text })
}

/// `(V_XY ↔ V_YZ)^⊥ = V_XY^⊥ ⇌ V_YZ^⊥`.
pub fn idt_holds<F: Field>(vxy: &Space<F>, vyz: &Space<F>) -> crate::Result<bool> {
    let lhs = vxy.compose_with(vyz, crate::space::Mode::Matched, true)?.perp();
    let rhs = vxy.perp().compose_with(&vyz.perp(), crate::space::Mode::Skewed, true)?;
    Ok(lhs == rhs)
}

/// A random triple of block sizes with total at most `max_dim`.
pub fn idt_case<F: Field>(rng: &mut dyn rand::RngCore, max_dim: usize) -> (Space<F>, Space<F>) {
    let max_dim = max_dim.max(3);
    let x = rng.gen_range(1..=max_dim - 2);
    let y = rng.gen_range(1..=max_dim - x - 1);
    let z = rng.gen_range(1..=max_dim - x - y);
    let (xs, ys, zs) = (fixtures::labels("x", x), fixtures::labels("y", y), fixtures::labels("z", z));
    (fixtures::any_space(rng, &xs.union(&ys)), fixtures::any_space(rng, &ys.union(&zs)))
}

fn verify_idt<F: Field>(cases: usize, max_dim: usize, seed: u64) -> Run {
    let mut rng = fixtures::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (a, b) = idt_case::<F>(&mut rng, max_dim);
        match idt_holds(&a, &b) {
            Ok(true) => {}
            Ok(false) => failures.push(i),
            Err(e) => return fail(e),
        }
    }
    let passed = cases - failures.len();
    let out = Output {
        result: json!({ "cases": cases, "passed": passed, "failures": failures, "seed": seed, "max_dim": max_dim }),
        text: format!("IDT over {}: {passed}/{cases} pass\n", F::name()),
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        Err((Failure::Checks, Some(out)))
    }
}

fn check(name: &str, r: crate::Result<bool>) -> (String, bool, Option<String>) {
    match r {
        Ok(ok) => (name.to_string(), ok, None),
        Err(e) => (name.to_string(), false, Some(e.to_string())),
    }
}

fn selftest() -> Run {
    use crate::field::q;
    let mut checks = Vec::new();
    let net = fixtures::rc_network();
    checks.push(check(
        "rc emulator state matrices",
        build_rlc_emulator::<Q>(&net).map(|e| {
            e.flat.a == vec![vec![q(-2, 3)]]
                && e.flat.b == vec![vec![q(2, 3), q(2, 3)]]
                && e.flat.c == vec![vec![q(1, 1)], vec![q(-1, 1)]]
                && e.flat.d == vec![vec![q(0, 1), q(-1, 1)], vec![q(0, 1), q(0, 1)]]
        }),
    ));
    checks.push(check(
        "rc annihilating polynomials",
        (|| {
            let e = build_rlc_emulator::<Q>(&net)?;
            let pe = minimal_annihilating_poly(&e.emulator.genaut_autonomous()?)?;
            let po = minimal_annihilating_poly(&e.original.genaut_autonomous()?)?;
            Ok(pe == Poly::new(vec![q(2, 3), q(1, 1)]) && po == pe.mul(&Poly::monomial(1)))
        })(),
    ));
    checks.push(check(
        "rc pair links both systems",
        build_rlc_emulator::<Q>(&net).and_then(|e| Ok(elinkage_verify(&e.pair, &e.original.space, &e.emulator.space)?.linked)),
    ));
    let mut rng = fixtures::rng(1);
    checks.push(check(
        "duality of composition over Q (50 triples)",
        (0..50).try_fold(true, |acc, _| {
            let (a, b) = idt_case::<Q>(&mut rng, 8);
            Ok(acc && idt_holds(&a, &b)?)
        }),
    ));
    checks.push(check(
        "duality of composition over GF(2) (50 triples)",
        (0..50).try_fold(true, |acc, _| {
            let (a, b) = idt_case::<Gf<2>>(&mut rng, 6);
            Ok(acc && idt_holds(&a, &b)?)
        }),
    ));
    checks.push(check(
        "multiport port counts (20 graphs)",
        (0..20).try_fold(true, |acc, _| {
            let g = fixtures::graph(&mut rng, 5, 10);
            let (e1, e2) = fixtures::edge_split(&mut rng, &g);
            let d = multiport_decompose(&g, &e1, &e2)?;
            Ok(acc && d.port_count == min_port_count(&g, &e1)? && d.ports_are_free()?)
        }),
    ));
    checks.push(check(
        "double integrator placement",
        (|| {
            let w = IndexSet::of(&["w1", "w2"]);
            let u = IndexSet::of(&["u"]);
            let y = IndexSet::of(&["y"]);
            let z = Q::zero();
            let o = Q::one();
            let g = Gds::from_state_space(
                &w,
                &u,
                &y,
                &[vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
                &[vec![z.clone()], vec![o.clone()]],
                &[vec![o.clone(), z.clone()]],
                &[vec![z]],
            )?;
            let t = Poly::from_ints(&[2, 3, 1]);
            let pl = place_poles(&g, &t)?;
            Ok(minimal_annihilating_poly(&pl.achieved)? == t)
        })(),
    ));
    let passed = checks.iter().filter(|c| c.1).count();
    let mut text = String::new();
    for (name, ok, err) in &checks {
        let _ = write!(text, "{} {name}", if *ok { "PASS" } else { "FAIL" });
        if let Some(e) = err {
            let _ = write!(text, " ({e})");
        }
        text.push('\n');
    }
    let _ = writeln!(text, "{passed}/{} checks pass", checks.len());
    let result = json!({
        "passed": passed,
        "total": checks.len(),
        "checks": checks.iter().map(|(n, ok, e)| json!({ "name": n, "pass": ok, "error": e })).collect::<Vec<_>>(),
    });
    let out = Output { result, text };
    if passed == checks.len() {
        Ok(out)
    } else {
        Err((Failure::Checks, Some(out)))
    }
}
