//! The Holzman couple on the 3x3 grid: sup f = √5 - 2.
//!
//! cargo run --release --example holzman_maximum

use cubeseeker::builtin;
use cubeseeker::objective::f_ratio;
use cubeseeker::rational::{decimal_string, pow10_neg};
use cubeseeker::{optimize_certified, QuadSurd};

fn main() -> cubeseeker::Result<()> {
    let cfg = builtin::holzman();
    let v = optimize_certified(&cfg, &pow10_neg(6))?;

    let target = QuadSurd::sqrt5_minus_2();
    println!("lo      {}", decimal_string(&v.lo, 12));
    println!("hi      {}", decimal_string(&v.hi, 12));
    println!("√5 - 2  {}", decimal_string(&target.round_down(12), 12));
    println!("inside  {}", target.cmp_rational(&v.lo).is_ge() && target.cmp_rational(&v.hi).is_le());
    println!("witness {}  f = {}", v.witness, decimal_string(&f_ratio(&cfg, &v.witness)?, 12));
    println!("{} iterations", v.iterations);
    Ok(())
}
