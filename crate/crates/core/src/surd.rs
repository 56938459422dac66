//! Exact numbers of the form `a + b·√r` with rational `a`, `b` and a fixed
//! square-free radicand `r`.
//!
//! Used wherever an irrational constant has to be compared exactly against a
//! rational: `√2 − 1` as the branch point of the lower bound family, and
//! `√5 − 2` as the Holzman optimum.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    rational: Rational,
    coeff: Rational,
    radicand: u32,
}

impl QuadSurd {
    /// `a + b·√r`. A zero `b` gives a plain rational that mixes with any radicand.
    pub fn new(rational: Rational, coeff: Rational, radicand: u32) -> Self {
        assert!(radicand >= 2, "radicand must be at least 2");
        let s = (radicand as f64).sqrt() as u32;
        assert!(
            s * s != radicand && (s + 1) * (s + 1) != radicand,
            "radicand {radicand} is a perfect square"
        );
        QuadSurd { rational, coeff, radicand }
    }

    pub fn from_rational(r: Rational) -> Self {
        QuadSurd { rational: r, coeff: Rational::zero(), radicand: 0 }
    }

    /// `√2 − 1`
    pub fn sqrt2_minus_1() -> Self {
        QuadSurd::new(rational::int(-1), rational::int(1), 2)
    }

    /// `√5 − 2`
    pub fn sqrt5_minus_2() -> Self {
        QuadSurd::new(rational::int(-2), rational::int(1), 5)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_coeff(&self) -> &Rational {
        &self.coeff
    }

    /// The radicand, or `None` for a plain rational.
    pub fn radicand(&self) -> Option<u32> {
        if self.coeff.is_zero() {
            None
        } else {
            Some(self.radicand)
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeff.is_zero().then_some(&self.rational)
    }

    fn joint_radicand(&self, other: &Self) -> u32 {
        match (self.radicand(), other.radicand()) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "mixing √{a} and √{b}");
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        }
    }

    fn with(&self, rational: Rational, coeff: Rational, radicand: u32) -> Self {
        if coeff.is_zero() {
            QuadSurd::from_rational(rational)
        } else {
            QuadSurd { rational, coeff, radicand }
        }
    }

    pub fn signum(&self) -> Ordering {
        let a = &self.rational;
        let b = &self.coeff;
        if b.is_zero() {
            return a.cmp(&Rational::zero());
        }
        if a.is_zero() {
            return b.cmp(&Rational::zero());
        }
        let sa = a.is_positive();
        let sb = b.is_positive();
        if sa == sb {
            return if sa { Ordering::Greater } else { Ordering::Less };
        }
        // opposite signs: compare a^2 with b^2 r
        let a2 = a * a;
        let b2r = b * b * Rational::from_integer(BigInt::from(self.radicand));
        match a2.cmp(&b2r) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => {
                if sa {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Ordering::Less => {
                if sb {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        (self.clone() - QuadSurd::from_rational(r.clone())).signum()
    }

    pub fn recip(&self) -> Self {
        // (a + b√r)^-1 = (a − b√r) / (a² − r b²)
        let r = Rational::from_integer(BigInt::from(self.radicand));
        let norm = &self.rational * &self.rational - &self.coeff * &self.coeff * r;
        assert!(!norm.is_zero(), "division by zero surd");
        self.with(&self.rational / &norm, -&self.coeff / &norm, self.radicand)
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> BigInt {
        if self.coeff.is_zero() {
            return self.rational.numer().div_floor(self.rational.denom());
        }
        // a + b√r lies within |b|·(isqrt(r)+1) of a
        let r = self.radicand as i64;
        let root_hi = ((r as f64).sqrt() as i64) + 2;
        let spread = (self.coeff.abs() * Rational::from_integer(BigInt::from(root_hi))).ceil();
        let base = self.rational.floor();
        let mut lo = (&base - &spread).to_integer() - BigInt::one();
        let mut hi = (&base + &spread).to_integer() + BigInt::from(2);
        // invariant: lo <= self < hi
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            if self.cmp_rational(&Rational::from_integer(mid.clone())) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Largest multiple of `10^-digits` not exceeding the value.
    pub fn round_down(&self, digits: u32) -> Rational {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.clone() * QuadSurd::from_rational(Rational::from_integer(scale.clone()));
        Rational::new(scaled.floor(), scale)
    }

    /// Smallest multiple of `10^-digits` not below the value.
    pub fn round_up(&self, digits: u32) -> Rational {
        -(-self.clone()).round_down(digits)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.rational)
            + rational::to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }
}

impl From<Rational> for QuadSurd {
    fn from(r: Rational) -> Self {
        QuadSurd::from_rational(r)
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: QuadSurd) -> QuadSurd {
        let r = self.joint_radicand(&o);
        self.with(self.rational.clone() + o.rational, self.coeff.clone() + o.coeff, r)
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: QuadSurd) -> QuadSurd {
        self + (-o)
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { rational: -self.rational, coeff: -self.coeff, radicand: self.radicand }
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: QuadSurd) -> QuadSurd {
        let r = self.joint_radicand(&o);
        let rr = Rational::from_integer(BigInt::from(r));
        let a = &self.rational * &o.rational + &self.coeff * &o.coeff * rr;
        let b = &self.rational * &o.coeff + &self.coeff * &o.rational;
        self.with(a, b, r)
    }
}

impl Div for QuadSurd {
    type Output = QuadSurd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: QuadSurd) -> QuadSurd {
        self * o.recip()
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.radicand() {
            None => write!(f, "{}", rational::format(&self.rational)),
            Some(r) => write!(
                f,
                "{} + {}*sqrt({r})",
                rational::format(&self.rational),
                rational::format(&self.coeff)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn sign_of_golden_constants() {
        let s5 = QuadSurd::sqrt5_minus_2();
        assert_eq!(s5.cmp_rational(&rat(236, 1000)), Ordering::Greater);
        assert_eq!(s5.cmp_rational(&rat(2361, 10000)), Ordering::Less);
        let s2 = QuadSurd::sqrt2_minus_1();
        assert_eq!(s2.cmp_rational(&rat(408, 985)), Ordering::Greater);
        assert_eq!(s2.cmp_rational(&rat(985, 2378)), Ordering::Less);
    }

    #[test]
    fn field_identities() {
        let x = QuadSurd::sqrt2_minus_1();
        // (√2−1)(√2+1) = 1
        let y = x.clone() + QuadSurd::from_rational(rational::int(2));
        assert_eq!((x.clone() * y).as_rational(), Some(&rational::int(1)));
        assert_eq!((x.clone() * x.recip()).as_rational(), Some(&rational::int(1)));
        assert_eq!((x.clone() - x).signum(), Ordering::Equal);
    }

    #[test]
    fn rounding_brackets_value() {
        let v = QuadSurd::sqrt5_minus_2();
        let lo = v.round_down(30);
        let hi = v.round_up(30);
        assert_eq!(v.cmp_rational(&lo), Ordering::Greater);
        assert_eq!(v.cmp_rational(&hi), Ordering::Less);
        assert_eq!(&hi - &lo, crate::rational::pow10_neg(30));
        assert_eq!(crate::rational::decimal_string(&v.round_down(9), 9), "0.236067977");
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(QuadSurd::sqrt2_minus_1().floor(), BigInt::from(0));
        assert_eq!((-QuadSurd::sqrt2_minus_1()).floor(), BigInt::from(-1));
        let big = QuadSurd::new(rational::int(1000), rat(-7, 3), 5);
        assert_eq!(big.floor(), BigInt::from(994)); // 1000 − 5.2175
    }
}
