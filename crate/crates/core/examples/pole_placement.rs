//! Place the closed-loop polynomial of a double integrator, then recover
//! the law from the closed loop.

use ila::control::{feedback_recover, place_poles};
use ila::genop::{minimal_annihilating_poly, Gds};
use ila::poly::Poly;
use ila::{Field, IndexSet, Q};

fn main() -> ila::Result<()> {
    let m = |rows: &[&[i64]]| -> Vec<Vec<Q>> { rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect() };
    let w = IndexSet::of(&["x1", "x2"]);
    let g = Gds::from_state_space(&w, &IndexSet::of(&["u"]), &IndexSet::of(&["y"]), &m(&[&[0, 1], &[0, 0]]), &m(&[&[0], &[1]]), &m(&[&[1, 0]]), &m(&[&[0]]))?;
    let target = Poly::<Q>::from_ints(&[2, 3, 1]);
    let pl = place_poles(&g, &target)?;
    println!("target {target}, fixed {}, placed {}", pl.fixed, pl.placed);
    println!("law {}", pl.law.linkage);
    println!("achieved {}", minimal_annihilating_poly(&pl.achieved)?);
    let back = feedback_recover(&g, &pl.achieved)?;
    println!("recovered law {} (unique {})", back.linkage, back.unique);
    Ok(())
}
