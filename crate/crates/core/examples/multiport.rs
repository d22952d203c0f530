//! Minimal port decomposition of a ladder cut in half.

use ila::graph::{kirchhoff_spaces, multiport_decompose};
use ila::{fixtures, IndexSet, Q};

fn main() -> ila::Result<()> {
    let lad = fixtures::ladder(12);
    let half = IndexSet::new(lad.edge_labels().iter().filter(|l| l.base[1..].parse::<usize>().unwrap() <= 6).cloned().collect());
    let rest = lad.edge_labels().difference(&half);
    let d = multiport_decompose(&lad, &half, &rest)?;
    println!("ports: {} ({:?} / {:?})", d.port_count, d.p1.labels(), d.p2.labels());
    println!("ports free: {}", d.ports_are_free()?);
    print!("connector:\n{}", d.connector.to_edge_list());
    let back = d.recompose::<Q>()?;
    println!("recomposes: {}", back.voltage == kirchhoff_spaces::<Q>(&lad).voltage);
    Ok(())
}
