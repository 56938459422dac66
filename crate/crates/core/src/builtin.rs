//! Named configurations shipped with the library.
//!
//! * `holzman`: the 3×3 couple with `F+ = [0,1]×[2/3,1]` and
//!   `F- = [0,1/3]² ∪ [2/3,1]×[0,1/3]`, whose best cube ratio is `√5 − 2`.
//! * `slab:a:d`: two slabs of thickness `a` against opposite faces of the
//!   last axis; no cube does better than `a`.
//! * `halfhalf:d`: `[0,1/2]×[0,1]^{d-1}` against `[1/2,1]×[0,1]^{d-1}`.

use num_traits::{Signed, ToPrimitive};

use crate::error::{domain, Error, Result};
use crate::geometry::{CoupleConfig, GridSpec};
use crate::rational::{self, Rational};

pub fn holzman() -> CoupleConfig {
    let spec = GridSpec::new(2, 3).expect("3x3 grid");
    CoupleConfig::from_cells(spec, [[0, 2], [1, 2], [2, 2]], [[0, 0], [2, 0]])
        .expect("holzman couple is valid")
}

pub fn halfhalf(d: usize) -> Result<CoupleConfig> {
    let spec = GridSpec::new(d, 2)?;
    let labels: Vec<u8> = (0..spec.cell_count())
        .map(|i| if spec.cell_tuple(i)[0] == 0 { 1 } else { 2 })
        .collect();
    CoupleConfig::from_labels(spec, &labels)
}

/// Slab couple for `0 < a < 1/2` on the grid with `m = denominator(a)`.
pub fn slab(a: &Rational, d: usize) -> Result<CoupleConfig> {
    let half = rational::rat(1, 2);
    if !a.is_positive() || *a >= half {
        return Err(domain!(
            "slab thickness must lie in (0, 1/2), got {}",
            rational::format(a)
        ));
    }
    let m = a
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Capacity("slab denominator too large".into()))?;
    let p = a.numer().to_u64().expect("positive numerator below denominator");
    let spec = GridSpec::new(d, m)?;
    let labels: Vec<u8> = (0..spec.cell_count())
        .map(|i| {
            let t = i % m;
            if t < p {
                2
            } else if t >= m - p {
                1
            } else {
                0
            }
        })
        .collect();
    CoupleConfig::from_labels(spec, &labels)
}

/// Resolve `holzman`, `slab:a:d` or `halfhalf:d`; `None` if the name is not
/// one of these forms.
pub fn named(name: &str) -> Option<Result<CoupleConfig>> {
    let mut parts = name.split(':');
    let head = parts.next()?;
    let rest: Vec<&str> = parts.collect();
    let dim = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::Input(format!("bad dimension '{s}' in '{name}'")))
    };
    match (head, rest.as_slice()) {
        ("holzman", []) => Some(Ok(holzman())),
        ("halfhalf", [d]) => Some(dim(d).and_then(halfhalf)),
        ("slab", [a, d]) => Some(
            rational::parse(a, false).and_then(|a| dim(d).and_then(|d| slab(&a, d))),
        ),
        ("holzman" | "halfhalf" | "slab", _) => Some(Err(Error::Input(format!(
            "built-in '{name}' takes the form holzman, halfhalf:d or slab:a:d"
        )))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn holzman_volumes() {
        let h = holzman();
        assert_eq!(h.vol_plus(), &rat(1, 3));
        assert_eq!(h.vol_minus(), &rat(2, 9));
        assert_eq!(h.vol_gap(), &rat(4, 9));
    }

    #[test]
    fn slab_layout() {
        let s = slab(&rat(1, 3), 1).unwrap();
        assert_eq!(s.f_minus().cells().collect::<Vec<_>>(), vec![vec![0]]);
        assert_eq!(s.f_plus().cells().collect::<Vec<_>>(), vec![vec![2]]);
        let s = slab(&rat(2, 5), 2).unwrap();
        assert_eq!(s.vol_plus(), &rat(2, 5));
        assert_eq!(s.vol_minus(), &rat(2, 5));
        assert!(s.f_minus().contains(&[4, 1]) && s.f_plus().contains(&[0, 3]));
        assert!(matches!(slab(&rat(1, 2), 1), Err(Error::Domain(_))));
        assert!(matches!(slab(&rat(0, 1), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn names_resolve() {
        assert_eq!(named("holzman").unwrap().unwrap(), holzman());
        assert_eq!(named("slab:1/4:3").unwrap().unwrap().spec().m(), 4);
        assert_eq!(named("halfhalf:2").unwrap().unwrap().vol_gap(), &rat(0, 1));
        assert!(named("slab:1/4").unwrap().is_err());
        assert!(named("configs/holzman.json").is_none());
    }
}
