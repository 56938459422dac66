//! Exhaustive search over cubes whose corners and sides lie on a refined grid.
//! Gives exact values on its own lattice; the certified optimizer covers the rest.

use cubeseeker::builtin;
use cubeseeker::optimizer::{optimize_grid_aligned, scan_size};
use cubeseeker::rational::decimal_string;

fn main() -> cubeseeker::Result<()> {
    let cfg = builtin::holzman();
    for sub in 1..=4u64 {
        let (v, w) = optimize_grid_aligned(&cfg, sub)?;
        let n = scan_size(3 * sub, 2);
        println!("subdivision {sub}: {n:>6} cubes  best {} at {w}", decimal_string(&v, 9));
    }
    Ok(())
}
