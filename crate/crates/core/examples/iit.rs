//! Solving A x = b as an implicit inversion.

use ila::linkage::iit_solve;
use ila::{Space, Q};

fn main() -> ila::Result<()> {
    // Generators [I | A] with A = [[1, 0], [0, 1], [1, 1]].
    let v_sp = Space::<Q>::from_ints(&["s1", "s2", "s3", "x1", "x2"], &[&[1, 0, 0, 1, 0], &[0, 1, 0, 0, 1], &[0, 0, 1, 1, 1]]);
    for b in [[2, 3, 5], [2, 3, 4]] {
        let v_sq = Space::<Q>::from_ints(&["s1", "s2", "s3", "y"], &[&[1, 0, 0, b[0]], &[0, 1, 0, b[1]], &[0, 0, 1, b[2]]]);
        let r = iit_solve(&v_sp, &v_sq)?;
        println!("b = {b:?}: solvable {}, unique {}", r.solvable, r.uniqueness_certified);
        if let Some(sol) = r.solution {
            println!("  solution {sol}");
        } else {
            println!("  restriction ok {}, contraction ok {}", r.restriction_ok, r.contraction_ok);
        }
    }
    Ok(())
}
