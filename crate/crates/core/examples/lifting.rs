//! `(F+, F-) -> (F+ x [0,1], F- x [0,1])` keeps volumes and sup f.

use cubeseeker::explorer::lift_config;
use cubeseeker::rational::{decimal_string, format, pow10_neg};
use cubeseeker::{builtin, optimize_certified};

fn main() -> cubeseeker::Result<()> {
    let mut cfg = builtin::holzman();
    for _ in 0..2 {
        let v = optimize_certified(&cfg, &pow10_neg(5))?;
        println!(
            "d={}  volumes {} {}  s* in [{}, {}]",
            cfg.spec().d(),
            format(cfg.vol_plus()),
            format(cfg.vol_minus()),
            decimal_string(&v.lo, 7),
            decimal_string(&v.hi, 7)
        );
        cfg = lift_config(&cfg)?;
    }
    Ok(())
}
