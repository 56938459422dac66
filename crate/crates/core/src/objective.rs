//! The John-Strömberg objective for a grid couple: the volume condition,
//! the ratio `f(W)` and tameness witnesses.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{CoupleConfig, Cube};
use crate::rational::{self, Rational};

/// Which inequality the couple's volumes must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionMode {
    /// `min(|F+|, |F-|) > τ·|G|`
    Strict,
    /// `min(|F+|, |F-|) >= τ·|G|`
    Weak,
}

impl FromStr for ConditionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(ConditionMode::Strict),
            "weak" => Ok(ConditionMode::Weak),
            other => Err(Error::Input(format!("mode must be strict or weak, got '{other}'"))),
        }
    }
}

impl fmt::Display for ConditionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionMode::Strict => "strict",
            ConditionMode::Weak => "weak",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TameKind {
    /// The gap has measure zero.
    GapNull,
    /// A gap cell whose interior meets neither set.
    OpenCell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameWitness {
    pub kind: TameKind,
    pub cell: Option<Vec<u64>>,
}

/// `1 - |F+| - |F-|`.
pub fn gap_volume(cfg: &CoupleConfig) -> Rational {
    cfg.vol_gap().clone()
}

pub fn check_condition(cfg: &CoupleConfig, tau: &Rational, mode: ConditionMode) -> bool {
    let least = rational::min(cfg.vol_plus(), cfg.vol_minus());
    let rhs = tau * cfg.vol_gap();
    match mode {
        ConditionMode::Strict => *least > rhs,
        ConditionMode::Weak => *least >= rhs,
    }
}

/// Like [`check_condition`] but rejecting non-positive `τ`.
pub fn check_condition_checked(cfg: &CoupleConfig, tau: &Rational, mode: ConditionMode) -> Result<bool> {
    if !tau.is_positive() {
        return Err(domain!("tau must be positive, got {}", rational::format(tau)));
    }
    Ok(check_condition(cfg, tau, mode))
}

/// `f(W) = min(|W ∩ F+|, |W ∩ F-|) / |W|`, exactly.
pub fn f_ratio(cfg: &CoupleConfig, w: &Cube) -> Result<Rational> {
    let plus = cfg.f_plus().overlap_volume(w)?;
    let minus = cfg.f_minus().overlap_volume(w)?;
    Ok(rational::min(&plus, &minus) / w.volume())
}

/// Every valid grid couple is tame; this returns the witness.
pub fn is_tame(cfg: &CoupleConfig) -> TameWitness {
    if cfg.vol_gap().is_zero() {
        return TameWitness { kind: TameKind::GapNull, cell: None };
    }
    let spec = cfg.spec();
    let gap = (0..spec.cell_count())
        .find(|&i| !cfg.f_plus().contains_linear(i) && !cfg.f_minus().contains_linear(i))
        .expect("positive gap volume implies a gap cell");
    TameWitness { kind: TameKind::OpenCell, cell: Some(spec.cell_tuple(gap)) }
}

/// Check a witness against the tameness definition for this couple.
pub fn witness_holds(cfg: &CoupleConfig, w: &TameWitness) -> bool {
    match (w.kind, &w.cell) {
        (TameKind::GapNull, None) => cfg.vol_gap().is_zero(),
        (TameKind::OpenCell, Some(cell)) => {
            // the open cell meets neither set, so the max-intersection stays
            // below the cell measure and the min-intersection is zero
            !cfg.f_plus().contains(cell)
                && !cfg.f_minus().contains(cell)
                && cfg.spec().linear_index(cell).is_ok()
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::rational::{int, rat};

    #[test]
    fn gap_examples() {
        assert_eq!(gap_volume(&builtin::holzman()), rat(4, 9));
        assert_eq!(gap_volume(&builtin::halfhalf(1).unwrap()), int(0));
        assert_eq!(gap_volume(&builtin::slab(&rat(1, 3), 1).unwrap()), rat(1, 3));
    }

    #[test]
    fn condition_examples() {
        let h = builtin::holzman();
        assert!(check_condition(&h, &rat(1, 2), ConditionMode::Weak));
        assert!(!check_condition(&h, &rat(1, 2), ConditionMode::Strict));
        let hh = builtin::halfhalf(1).unwrap();
        assert!(check_condition(&hh, &rat(1, 2), ConditionMode::Strict));
        let slab = builtin::slab(&rat(1, 3), 1).unwrap();
        assert!(check_condition(&slab, &rat(1, 2), ConditionMode::Strict));
        assert!(check_condition_checked(&slab, &int(0), ConditionMode::Strict).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(f_ratio(&builtin::holzman(), &Cube::unit(2)).unwrap(), rat(2, 9));
        assert_eq!(f_ratio(&builtin::halfhalf(1).unwrap(), &Cube::unit(1)).unwrap(), rat(1, 2));
        let slab = builtin::slab(&rat(1, 3), 1).unwrap();
        assert_eq!(f_ratio(&slab, &Cube::unit(1)).unwrap(), rat(1, 3));
        assert!(f_ratio(&slab, &Cube::unit(2)).is_err());
    }

    #[test]
    fn tame_examples() {
        let w = is_tame(&builtin::halfhalf(1).unwrap());
        assert_eq!(w.kind, TameKind::GapNull);
        let h = builtin::holzman();
        let w = is_tame(&h);
        assert_eq!(w.kind, TameKind::OpenCell);
        let gap_cells = [vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]];
        assert!(gap_cells.contains(w.cell.as_ref().unwrap()));
        assert!(witness_holds(&h, &w));
        let slab = builtin::slab(&rat(1, 3), 1).unwrap();
        assert_eq!(is_tame(&slab).cell, Some(vec![1]));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("Weak".parse::<ConditionMode>().unwrap(), ConditionMode::Weak);
        assert!("loose".parse::<ConditionMode>().is_err());
    }
}
