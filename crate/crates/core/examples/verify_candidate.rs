//! Test candidate pairs `(tau, s)` against one couple.

use cubeseeker::explorer::verify_js_candidate;
use cubeseeker::rational::{format, pow10_neg, rat};
use cubeseeker::{builtin, ConditionMode};

fn main() -> cubeseeker::Result<()> {
    let h = builtin::holzman();
    for (s, mode) in [
        (rat(6, 25), ConditionMode::Weak),
        (rat(1, 5), ConditionMode::Weak),
        (rat(6, 25), ConditionMode::Strict),
    ] {
        let v = verify_js_candidate(&rat(1, 2), &s, &h, mode, &pow10_neg(6))?;
        println!("tau=1/2 s={} {mode}: {:?} (condition holds: {})", format(&s), v.verdict, v.condition_holds);
    }
    Ok(())
}
