//! Every labeling of the 2^d half-cells, optimized.
//!
//! cargo run --release --example halfcell_enumeration -- 3

use std::time::Instant;

use cubeseeker::explorer::enumerate_halfcell;
use cubeseeker::rational::{format, pow10_neg, rat};
use cubeseeker::ConditionMode;

fn main() -> cubeseeker::Result<()> {
    let max_d: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    for d in 1..=max_d {
        for mode in [ConditionMode::Strict, ConditionMode::Weak] {
            let t = Instant::now();
            let s = enumerate_halfcell(d, &rat(1, 2), mode, &pow10_neg(4))?;
            println!(
                "d={d} {mode:<6} total {:>5}  qualifying {:>4} ({} up to swap)  min s* in [{}, {}]  {:.2?}",
                s.total_assignments,
                s.qualifying,
                s.qualifying_unordered,
                format(&s.min_sstar_lo),
                format(&s.min_sstar_hi),
                t.elapsed()
            );
        }
    }
    Ok(())
}
