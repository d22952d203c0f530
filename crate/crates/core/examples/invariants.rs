//! Reachable, unobservable and output-nulling spaces of a small system.

use ila::genop::Gds;
use ila::invariant::{max_controlled_invariant, min_conditioned_invariant};
use ila::{Field, IndexSet, Space, Q};

fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect()
}

fn main() -> ila::Result<()> {
    let w = IndexSet::of(&["w1", "w2", "w3"]);
    let (mu, my) = (IndexSet::of(&["u"]), IndexSet::of(&["y"]));
    let a = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, -1]]);
    let b = m(&[&[0], &[1], &[0]]);
    let c = m(&[&[0, 1, 0]]);
    let g = Gds::from_state_space(&w, &mu, &my, &a, &b, &c, &m(&[&[0]]))?;

    let free = g.genaut_free();
    let reach = min_conditioned_invariant(&free, &free.img_cross())?;
    println!("reachable: {} after {} steps", reach.space, reach.iterations);

    let zero = g.genaut_zero();
    let unobs = max_controlled_invariant(&zero, &zero.dom())?;
    println!("unobservable: {}", unobs.space);

    let (mu, my) = g.io_or_err()?;
    let nulling = g.genaut_under(&Space::full(mu.clone()).direct_sum(&Space::zero(my.clone()))?)?;
    let vstar = max_controlled_invariant(&nulling, &nulling.dom())?;
    println!("output nulling: {}", vstar.space);
    Ok(())
}
