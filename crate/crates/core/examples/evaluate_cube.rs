//! Build a couple from JSON, then look at volumes, the volume condition,
//! one cube ratio and the tameness witness.

use cubeseeker::objective::{check_condition, f_ratio, gap_volume, is_tame};
use cubeseeker::rational::{format, rat};
use cubeseeker::{ConditionMode, CoupleConfig, Cube};

fn main() -> cubeseeker::Result<()> {
    let cfg = CoupleConfig::from_json_str(
        r#"{"d":2,"m":3,"f_plus":[[0,0],[1,0],[2,0]],"f_minus":[[0,1],[0,2]]}"#,
    )?;
    println!("|F+| = {}  |F-| = {}  |G| = {}", format(cfg.vol_plus()), format(cfg.vol_minus()), format(&gap_volume(&cfg)));

    let tau = rat(1, 2);
    for mode in [ConditionMode::Strict, ConditionMode::Weak] {
        println!("{mode} at tau = 1/2: {}", check_condition(&cfg, &tau, mode));
    }

    let w = Cube::parse("0,0:2/3", false)?;
    println!("f({w}) = {}", format(&f_ratio(&cfg, &w)?));
    println!("tame: {:?}", is_tame(&cfg));

    // overlapping sets are rejected
    let bad = CoupleConfig::from_json_str(r#"{"d":1,"m":2,"f_plus":[[0]],"f_minus":[[0]]}"#);
    println!("overlap: {}", bad.unwrap_err());
    Ok(())
}
