//! The duality between matched and skewed composition on random spaces.

use ila::cli::{idt_case, idt_holds};
use ila::space::Mode;
use ila::{fixtures, Q};

fn main() -> ila::Result<()> {
    let mut rng = fixtures::rng(1);
    let (vxy, vyz) = idt_case::<Q>(&mut rng, 6);
    println!("V_XY = {vxy}\nV_YZ = {vyz}");
    let composed = vxy.compose_with(&vyz, Mode::Matched, true)?;
    println!("V_XY <-> V_YZ = {composed}");
    println!("complement = {}", composed.perp());
    let mut held = 0;
    for _ in 0..500 {
        let (a, b) = idt_case::<Q>(&mut rng, 8);
        held += idt_holds(&a, &b)? as usize;
    }
    println!("duality held on {held}/500 random pairs");
    Ok(())
}
