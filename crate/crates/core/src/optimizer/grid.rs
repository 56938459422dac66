//! Exhaustive search over grid-aligned cubes using summed-area tables.
//!
//! With `n = m · subdivision` units per axis, every candidate cube has an
//! integer corner and side in units of `1/n`. The plus/minus measure of a
//! candidate is a `2^d`-term inclusion-exclusion over prefix counts, so the
//! whole scan is integer arithmetic.

use num_bigint::BigInt;

use crate::error::{domain, Error, Result};
use crate::geometry::{CoupleConfig, Cube};
use crate::rational::Rational;

/// Default cap on the number of candidate cubes a scan may visit.
pub const DEFAULT_SCAN_BUDGET: u64 = 50_000_000;

/// `d`-dimensional prefix sums over an `n^d` count grid.
struct SummedVolume {
    n: usize,
    d: usize,
    /// `(n+1)^d` entries; entry at `x` counts cells with every coordinate `< x_j`.
    table: Vec<u64>,
}

impl SummedVolume {
    fn build(n: usize, d: usize, mut member: impl FnMut(usize) -> bool) -> Self {
        let side = n + 1;
        let total = side.pow(d as u32);
        let mut table = vec![0u64; total];
        // seed: table[x+1] = indicator(x)
        let mut cell = vec![0usize; d];
        for lin in 0..n.pow(d as u32) {
            let mut rest = lin;
            for c in cell.iter_mut().rev() {
                *c = rest % n;
                rest /= n;
            }
            if member(lin) {
                let mut idx = 0;
                for &c in &cell {
                    idx = idx * side + c + 1;
                }
                table[idx] = 1;
            }
        }
        // running sums one axis at a time
        let mut stride = 1;
        for _ in 0..d {
            for idx in 0..total {
                if (idx / stride) % side != 0 {
                    table[idx] += table[idx - stride];
                }
            }
            stride *= side;
        }
        SummedVolume { n, d, table }
    }

    /// Number of cells in the box `[lo, lo + len)` per axis.
    fn count(&self, lo: &[usize], len: usize) -> u64 {
        let side = self.n + 1;
        let mut acc: i64 = 0;
        for mask in 0u32..(1 << self.d) {
            let mut idx = 0;
            let mut sign = 1i64;
            for (j, &l) in lo.iter().enumerate() {
                let upper = mask >> (self.d - 1 - j) & 1 == 1;
                let x = if upper { l + len } else { sign = -sign; l };
                idx = idx * side + x;
            }
            // sign is (-1)^(number of lower corners taken)
            acc += sign * self.table[idx] as i64;
        }
        debug_assert!(acc >= 0);
        acc as u64
    }
}

/// Number of grid-aligned cubes at resolution `n` in dimension `d`.
pub fn scan_size(n: u64, d: usize) -> u128 {
    (1..=n as u128).map(|k| k.pow(d as u32)).sum()
}

/// Best cube among those whose corner and side are multiples of
/// `1/(m · subdivision)`, with the lexicographically smallest `(corner, side)`
/// among ties.
pub fn optimize_grid_aligned(cfg: &CoupleConfig, subdivision: u64) -> Result<(Rational, Cube)> {
    optimize_grid_aligned_with_budget(cfg, subdivision, DEFAULT_SCAN_BUDGET)
}

pub fn optimize_grid_aligned_with_budget(
    cfg: &CoupleConfig,
    subdivision: u64,
    budget: u64,
) -> Result<(Rational, Cube)> {
    if subdivision == 0 {
        return Err(domain!("subdivision must be >= 1"));
    }
    let spec = cfg.spec();
    let d = spec.d();
    let m = spec.m();
    let n = m
        .checked_mul(subdivision)
        .ok_or_else(|| Error::Budget(format!("subdivision {subdivision} overflows")))?;
    let needed = scan_size(n, d);
    if needed > budget as u128 {
        return Err(Error::Budget(format!(
            "subdivision {subdivision} needs {needed} cube evaluations, budget is {budget}"
        )));
    }
    // refine() enforces the cell cap for the n^d count grid
    let refined = cfg.refine(subdivision)?;
    let labels = refined.labels();
    let nu = n as usize;
    let plus = SummedVolume::build(nu, d, |i| labels[i] == 1);
    let minus = SummedVolume::build(nu, d, |i| labels[i] == 2);

    // best as (min count, side^d, corner, side)
    let mut best: Option<(u64, u128, Vec<usize>, usize)> = None;
    let mut corner = vec![0usize; d];
    'corners: loop {
        let room = corner.iter().map(|&c| nu - c).min().unwrap_or(0);
        for len in 1..=room {
            let a = plus.count(&corner, len).min(minus.count(&corner, len));
            let vol = (len as u128).pow(d as u32);
            let better = match &best {
                None => true,
                Some((ba, bvol, _, _)) => (a as u128) * bvol > (*ba as u128) * vol,
            };
            if better {
                best = Some((a, vol, corner.clone(), len));
            }
        }
        for j in (0..d).rev() {
            corner[j] += 1;
            if corner[j] < nu {
                continue 'corners;
            }
            corner[j] = 0;
        }
        break;
    }
    let (a, vol, corner, len) = best.expect("at least one cube");
    let value = Rational::new(BigInt::from(a), BigInt::from(vol));
    let unit = |x: usize| Rational::new(BigInt::from(x), BigInt::from(n));
    let cube = Cube::new(corner.into_iter().map(unit).collect(), unit(len))?;
    Ok((value, cube))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::objective::f_ratio;
    use crate::rational::rat;

    #[test]
    fn summed_counts_match_direct_counting() {
        let cfg = builtin::holzman().refine(2).unwrap();
        let labels = cfg.labels();
        let sv = SummedVolume::build(6, 2, |i| labels[i] == 1);
        for x in 0..6 {
            for y in 0..6 {
                for len in 1..=(6 - x.max(y)) {
                    let direct = (x..x + len)
                        .flat_map(|i| (y..y + len).map(move |j| i * 6 + j))
                        .filter(|&i| labels[i] == 1)
                        .count() as u64;
                    assert_eq!(sv.count(&[x, y], len), direct);
                }
            }
        }
    }

    #[test]
    fn halfhalf_grid_optimum() {
        let (v, w) = optimize_grid_aligned(&builtin::halfhalf(1).unwrap(), 1).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(w, Cube::unit(1));
    }

    #[test]
    fn holzman_grid_optimum() {
        let h = builtin::holzman();
        let (v, w) = optimize_grid_aligned(&h, 1).unwrap();
        assert_eq!(v, rat(2, 9));
        assert_eq!(w, Cube::unit(2));
        assert_eq!(f_ratio(&h, &w).unwrap(), v);
    }

    #[test]
    fn slab_grid_optimum() {
        let (v, w) = optimize_grid_aligned(&builtin::slab(&rat(1, 3), 1).unwrap(), 1).unwrap();
        assert_eq!(v, rat(1, 3));
        assert_eq!(w, Cube::unit(1));
    }

    #[test]
    fn budget_is_reported() {
        let err = optimize_grid_aligned_with_budget(&builtin::holzman(), 10, 100).unwrap_err();
        assert!(matches!(err, Error::Budget(ref msg) if msg.contains("subdivision 10")));
        assert!(optimize_grid_aligned(&builtin::holzman(), 0).is_err());
    }
}
