//! Closed-form bounds on `σ(τ, d)` and the pair transformation.
//!
//! `φ(x, d) <= σ(x, d) <= x / (2x + 1)`, with
//!
//! ```text
//! φ(x, d) = 2^-d (x - x²) / (1 + x)   for 0 < x <= √2 - 1
//!         = 2^-d (3 - 2√2)            for x >= √2 - 1
//! ```
//!
//! `φ` is evaluated in `Q(√2)` so the branch test is exact.

use std::cmp::Ordering;

use num_traits::{One, Signed};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::explorer::SearchRecord;
use crate::objective::{check_condition, ConditionMode};
use crate::rational::{self, Rational};
use crate::surd::QuadSurd;

/// Digits kept when a bound is written as a decimal.
pub const DEFAULT_DIGITS: u32 = 30;

/// A candidate John–Strömberg pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPoint {
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    #[serde(with = "rational::serde_str")]
    pub s: Rational,
}

impl PairPoint {
    /// Requires `τ > 0` and `0 < s <= 1/2`.
    pub fn new(tau: Rational, s: Rational) -> Result<Self> {
        if !tau.is_positive() {
            return Err(domain!("tau must be positive, got {}", rational::format(&tau)));
        }
        if !s.is_positive() || s > rational::rat(1, 2) {
            return Err(domain!("s must lie in (0, 1/2], got {}", rational::format(&s)));
        }
        Ok(PairPoint { tau, s })
    }
}

/// `φ(x, d)` exactly. `x` must be positive and rational or in `Q(√2)`.
pub fn phi_lower(x: &QuadSurd, d: usize) -> Result<QuadSurd> {
    if d == 0 {
        return Err(domain!("dimension must be at least 1"));
    }
    if !matches!(x.radicand(), None | Some(2)) {
        return Err(domain!("phi_lower takes x in Q(sqrt 2), got {x}"));
    }
    if x.signum() != Ordering::Greater {
        return Err(domain!("x must be positive, got {x}"));
    }
    let scale = QuadSurd::from_rational(rational::pow(&rational::rat(1, 2), d));
    let one = QuadSurd::from_rational(Rational::one());
    let value = if *x <= QuadSurd::sqrt2_minus_1() {
        (x.clone() - x.clone() * x.clone()) / (one + x.clone())
    } else {
        QuadSurd::new(rational::int(3), rational::int(-2), 2)
    };
    Ok(scale * value)
}

/// `φ(x, d)` rounded down to a multiple of `10^-digits`.
pub fn phi_lower_decimal(x: &Rational, d: usize, digits: u32) -> Result<Rational> {
    Ok(phi_lower(&QuadSurd::from_rational(x.clone()), d)?.round_down(digits))
}

/// `1 / (2 + 1/x) = x / (2x + 1)`.
pub fn upper_bound_sigma(x: &Rational) -> Result<Rational> {
    if !x.is_positive() {
        return Err(domain!("x must be positive, got {}", rational::format(x)));
    }
    Ok(x / (x * rational::int(2) + Rational::one()))
}

/// `((1-θ)τ, s - θ(1-s))`, valid for `θ ∈ (0, s/(1-s))`.
pub fn transform_pair(p: &PairPoint, theta: &Rational) -> Result<PairPoint> {
    let one = Rational::one();
    let limit = &p.s / (&one - &p.s);
    if !theta.is_positive() || *theta >= limit {
        return Err(domain!(
            "theta must lie in (0, s/(1-s)) = (0, {}), got {}",
            rational::format(&limit),
            rational::format(theta)
        ));
    }
    let tau = (&one - theta) * &p.tau;
    let s = &p.s - theta * (&one - &p.s);
    PairPoint::new(tau, s)
}

/// `((2-3s)/(4-4s), s/2)`: the transform of `(1/2, s)` with `θ = s/(2-2s)`.
pub fn corollary_half(s: &Rational) -> Result<PairPoint> {
    if !s.is_positive() || *s > rational::rat(1, 2) {
        return Err(domain!("s must lie in (0, 1/2], got {}", rational::format(s)));
    }
    let tau = (rational::int(2) - s * rational::int(3)) / (rational::int(4) - s * rational::int(4));
    PairPoint::new(tau, s / rational::int(2))
}

/// An upper bound on `σ` read off a search record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalBound {
    pub value: Rational,
    pub record: String,
}

/// `lower <= σ(τ, d) <= upper`, optionally tightened by a searched couple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaBracket {
    pub tau: Rational,
    pub d: usize,
    /// `φ(τ, d)` exactly.
    pub lower_exact: QuadSurd,
    /// `φ(τ, d)` rounded down to [`DEFAULT_DIGITS`] digits.
    pub lower: Rational,
    pub upper: Rational,
    pub empirical: Option<EmpiricalBound>,
}

impl SigmaBracket {
    /// Best known upper bound.
    pub fn best_upper(&self) -> &Rational {
        match &self.empirical {
            Some(e) => &e.value,
            None => &self.upper,
        }
    }
}

impl Serialize for SigmaBracket {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Emp<'a> {
            value: String,
            record: &'a str,
        }
        let mut st = s.serialize_struct("SigmaBracket", 5)?;
        st.serialize_field("tau", &rational::format(&self.tau))?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("lower", &rational::decimal_string(&self.lower, DEFAULT_DIGITS))?;
        st.serialize_field("upper", &rational::format(&self.upper))?;
        let emp = self.empirical.as_ref().map(|e| Emp {
            value: rational::decimal_string(&rational::ceil_decimal(&e.value, DEFAULT_DIGITS), DEFAULT_DIGITS),
            record: &e.record,
        });
        st.serialize_field("empirical", &emp)?;
        st.end()
    }
}

/// Assemble the bracket for `σ(τ, d)`.
///
/// A record counts as evidence when its couple meets the weak condition at
/// this `τ` (grid couples are tame, so `>=` suffices) and its dimension is at
/// most `d` (`σ` is non-increasing in `d`). Its `certified.hi` then bounds
/// `σ(τ, d)` from above. A record that bounds nothing beyond `upper` is not
/// attached.
pub fn sigma_bracket(tau: &Rational, d: usize, empirical: Option<&SearchRecord>) -> Result<SigmaBracket> {
    let lower_exact = phi_lower(&QuadSurd::from_rational(tau.clone()), d)?;
    let lower = lower_exact.round_down(DEFAULT_DIGITS);
    let upper = upper_bound_sigma(tau)?;
    let empirical = match empirical {
        None => None,
        Some(rec) => {
            let rd = rec.config.spec().d();
            if rd > d {
                return Err(Error::Input(format!(
                    "record {} is in dimension {rd}; it only bounds sigma in dimensions >= {rd}",
                    rec.id
                )));
            }
            if !check_condition(&rec.config, tau, ConditionMode::Weak) {
                return Err(Error::Input(format!(
                    "record {} does not satisfy the volume condition at tau = {}",
                    rec.id,
                    rational::format(tau)
                )));
            }
            let hi = rec.certified.hi.clone();
            if lower_exact.cmp_rational(&hi) == Ordering::Greater {
                return Err(Error::Inconsistent(format!(
                    "record {} has s* <= {} below the proven lower bound {}",
                    rec.id,
                    rational::decimal_string(&hi, 12),
                    rational::decimal_string(&lower, 12)
                )));
            }
            (hi < upper).then(|| EmpiricalBound { value: hi, record: rec.id.clone() })
        }
    };
    debug_assert!(lower <= upper);
    Ok(SigmaBracket { tau: tau.clone(), d, lower_exact, lower, upper, empirical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow10_neg, rat};

    fn q(r: Rational) -> QuadSurd {
        QuadSurd::from_rational(r)
    }

    #[test]
    fn phi_examples() {
        // both branches meet at √2 − 1
        let x = QuadSurd::sqrt2_minus_1();
        let at = phi_lower(&x, 1).unwrap();
        let second = QuadSurd::new(rat(3, 2), int(-1), 2);
        assert_eq!(at, second);
        let first = (x.clone() - x.clone() * x.clone()) / (q(int(1)) + x) * q(rat(1, 2));
        assert_eq!(first, second);
        assert_eq!(phi_lower(&q(rat(1, 5)), 1).unwrap(), q(rat(1, 15)));
        let v = phi_lower(&q(int(1)), 2).unwrap();
        assert_eq!(rational::decimal_string(&v.round_down(8), 8), "0.04289321");
        assert!(phi_lower(&q(int(0)), 1).is_err());
        assert!(phi_lower(&QuadSurd::sqrt5_minus_2(), 1).is_err());
    }

    #[test]
    fn phi_half_is_second_branch() {
        // 1/2 > √2 − 1, so φ(1/2, d) = 2^-d (3 − 2√2)
        let v = phi_lower(&q(rat(1, 2)), 1).unwrap();
        assert_eq!(v, QuadSurd::new(rat(3, 2), int(-1), 2));
        assert_eq!(rational::decimal_string(&v.round_down(8), 8), "0.08578643");
        let v2 = phi_lower(&q(rat(1, 2)), 2).unwrap();
        assert_eq!(rational::decimal_string(&v2.round_down(5), 5), "0.04289");
    }

    #[test]
    fn upper_examples() {
        assert_eq!(upper_bound_sigma(&rat(1, 2)).unwrap(), rat(1, 4));
        let big = upper_bound_sigma(&int(1_000_000)).unwrap();
        assert!(big < rat(1, 2) && rat(1, 2) - big < pow10_neg(6));
        assert_eq!(upper_bound_sigma(&rat(408, 985)).unwrap(), rat(408, 1801));
        assert_eq!(upper_bound_sigma(&pow10_neg(3)).unwrap(), rat(1, 1002));
        assert!(upper_bound_sigma(&int(-1)).is_err());
    }

    #[test]
    fn transform_examples() {
        let p = PairPoint::new(rat(1, 2), rat(1, 4)).unwrap();
        assert_eq!(transform_pair(&p, &rat(1, 6)).unwrap(), PairPoint::new(rat(5, 12), rat(1, 8)).unwrap());
        let p = PairPoint::new(int(1), rat(1, 2)).unwrap();
        assert_eq!(transform_pair(&p, &rat(1, 2)).unwrap(), PairPoint::new(rat(1, 2), rat(1, 4)).unwrap());
        let t = transform_pair(&p, &pow10_neg(9)).unwrap();
        assert!(&p.tau - &t.tau < pow10_neg(8) && &p.s - &t.s < pow10_neg(8));
        assert!(transform_pair(&p, &int(1)).is_err());
        assert!(transform_pair(&p, &int(0)).is_err());
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_half(&rat(1, 4)).unwrap(), PairPoint::new(rat(5, 12), rat(1, 8)).unwrap());
        assert_eq!(corollary_half(&rat(1, 2)).unwrap(), PairPoint::new(rat(1, 4), rat(1, 4)).unwrap());
        assert_eq!(corollary_half(&rat(2, 5)).unwrap(), PairPoint::new(rat(1, 3), rat(1, 5)).unwrap());
        assert!(corollary_half(&rat(3, 5)).is_err());
    }

    #[test]
    fn bracket_without_record() {
        let b = sigma_bracket(&rat(1, 2), 1, None).unwrap();
        assert_eq!(b.upper, rat(1, 4));
        assert!(b.lower <= b.upper);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["tau"], "1/2");
        assert_eq!(json["upper"], "1/4");
        assert!(json["lower"].as_str().unwrap().starts_with("0.0857864376269049511983112757"));
        assert!(json["empirical"].is_null());

        let b = sigma_bracket(&pow10_neg(3), 1, None).unwrap();
        assert_eq!(b.upper, rat(1, 1002));
        let exact = (pow10_neg(3) - pow10_neg(6)) / rat(1001, 1000) / int(2);
        assert_eq!(b.lower_exact.as_rational(), Some(&exact));
        assert_eq!(b.lower, rational::floor_decimal(&exact, DEFAULT_DIGITS));
    }
}
