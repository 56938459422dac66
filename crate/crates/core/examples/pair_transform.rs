//! Shrinking tau along a known pair: `(tau, s) -> ((1-θ)tau, s - θ(1-s))`.

use cubeseeker::bounds::{corollary_half, transform_pair, PairPoint};
use cubeseeker::rational::{format, rat};

fn main() -> cubeseeker::Result<()> {
    let p = PairPoint::new(rat(1, 2), rat(1, 4))?;
    let q = transform_pair(&p, &rat(1, 6))?;
    println!("(1/2, 1/4) with θ = 1/6 -> ({}, {})", format(&q.tau), format(&q.s));

    for s in [rat(1, 4), rat(2, 5), rat(1, 2)] {
        let c = corollary_half(&s)?;
        println!("corollary s = {:<4} -> ({}, {})", format(&s), format(&c.tau), format(&c.s));
    }

    // θ must stay below s / (1 - s)
    println!("{}", transform_pair(&p, &rat(1, 3)).unwrap_err());
    Ok(())
}
