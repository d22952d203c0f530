//! Build the one-state emulator of the three-capacitor RC network and check
//! that its linkage pair ties it to the original.

use ila::emulator::{build_rlc_emulator, elinkage_verify};
use ila::fixtures;
use ila::genop::minimal_annihilating_poly;
use ila::Q;

fn main() -> ila::Result<()> {
    let net = fixtures::rc_network();
    print!("{net}");
    let e = build_rlc_emulator::<Q>(&net)?;
    println!("states {} (dropped modes {})", e.dimension, e.zero_modes);
    for (name, m) in [("A", &e.flat.a), ("B", &e.flat.b), ("C", &e.flat.c), ("D", &e.flat.d)] {
        let rows: Vec<String> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        println!("{name} = [{}]", rows.join("; "));
    }
    let link = elinkage_verify(&e.pair, &e.original.space, &e.emulator.space)?;
    println!("linked: {}", link.linked);
    println!("emulator minimal polynomial: {}", minimal_annihilating_poly(&e.emulator.genaut_autonomous()?)?);
    Ok(())
}
