//! Brackets `phi(tau, d) <= sigma(tau, d) <= tau / (2 tau + 1)`, tightened by
//! a searched couple when one applies.

use cubeseeker::bounds::{phi_lower, sigma_bracket, upper_bound_sigma};
use cubeseeker::explorer::SearchRecord;
use cubeseeker::rational::{decimal_string, format, pow10_neg, rat};
use cubeseeker::{builtin, optimize_certified, ConditionMode, QuadSurd};

fn main() -> cubeseeker::Result<()> {
    for d in 1..=3 {
        let b = sigma_bracket(&rat(1, 2), d, None)?;
        println!("tau=1/2 d={d}: [{}, {}]", decimal_string(&b.lower, 10), format(&b.upper));
    }

    // φ is exact in Q(√2); at x = √2 - 1 both branches meet
    let x = QuadSurd::sqrt2_minus_1();
    println!("phi(√2-1, 1) = {}", phi_lower(&x, 1)?);
    println!("upper(1/1000) = {}", format(&upper_bound_sigma(&pow10_neg(3))?));

    let h = builtin::holzman();
    let v = optimize_certified(&h, &pow10_neg(6))?;
    let rec = SearchRecord::new(rat(1, 2), ConditionMode::Weak, h, v, 0, "example".into())?;
    let b = sigma_bracket(&rat(1, 2), 2, Some(&rec))?;
    println!("{}", serde_json::to_string_pretty(&b)?);

    // a planar record says nothing about the line
    println!("{}", sigma_bracket(&rat(1, 2), 1, Some(&rec)).unwrap_err());
    Ok(())
}
