//! Slab couples `F+ = [0,a] x [0,1]^(d-1)`, `F- = [1-a,1] x [0,1]^(d-1)`:
//! the whole cube is optimal and sup f = a.

use cubeseeker::builtin;
use cubeseeker::optimizer::slab_closed_form;
use cubeseeker::optimize_certified;
use cubeseeker::rational::{format, pow10_neg, rat};

fn main() -> cubeseeker::Result<()> {
    for a in [rat(1, 4), rat(1, 3), rat(2, 5)] {
        for d in 1..=3 {
            let cfg = builtin::slab(&a, d)?;
            let v = optimize_certified(&cfg, &pow10_neg(6))?;
            let (exact, cube) = slab_closed_form(&a, d)?;
            println!(
                "a={:<4} d={d}  [{}, {}]  closed form {} at {cube}",
                format(&a),
                format(&v.lo),
                format(&v.hi),
                format(&exact)
            );
        }
    }
    Ok(())
}
