//! Certified maximization of `f(W)` over all axis-aligned subcubes.
//!
//! Branch-and-bound over cube parameters `(centre, side)`. Each box gets an
//! exact upper bound from [`bound::RectGrid`] and a lower bound from the
//! exact ratio at a feasible point inside it. Boxes are expanded best-first.
//!
//! Sides below half the narrowest slab never need to be searched: such a cube
//! meets at most two slabs per axis and can be rescaled to side
//! `min_slab_width / 2` without changing any slab fraction (see
//! [`bound::RectGrid::rescale`]).

pub mod bound;
mod grid;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::builtin;
use crate::error::{domain, Result};
use crate::geometry::{CoupleConfig, Cube};
use crate::rational::{self, Rational};

pub use bound::RectGrid;
pub use grid::{optimize_grid_aligned, optimize_grid_aligned_with_budget, scan_size, DEFAULT_SCAN_BUDGET};

/// Default cap on box expansions.
pub const DEFAULT_MAX_ITERATIONS: u64 = 10_000_000;

/// Largest grid-aligned scan used to seed the lower bound.
const SEED_SCAN_LIMIT: u128 = 2_000_000;

/// A targeted split is overridden by the widest parameter once the box's
/// aspect ratio would exceed this, so every box eventually shrinks to a point.
const MAX_ASPECT: i64 = 1 << 20;

/// A rational interval `[lo, hi]` around `sup_W f(W)`, with a cube attaining `lo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedValue {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
    pub witness: Cube,
    pub iterations: u64,
    pub converged: bool,
}

impl CertifiedValue {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, other: &CertifiedValue) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// A set of cubes: centres in `[center_lo, center_hi]` per axis, sides in
/// `[side_lo, side_hi]`. Cubes that leave `[0,1]^d` are trimmed away by
/// [`ParamBox::tighten`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamBox {
    pub center_lo: Vec<Rational>,
    pub center_hi: Vec<Rational>,
    pub side_lo: Rational,
    pub side_hi: Rational,
}

impl ParamBox {
    /// All cubes with side in `[min_side, 1]`.
    pub fn root(d: usize, min_side: &Rational) -> ParamBox {
        let h = min_side / rational::int(2);
        ParamBox {
            center_lo: vec![h.clone(); d],
            center_hi: vec![Rational::one() - &h; d],
            side_lo: min_side.clone(),
            side_hi: Rational::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.center_lo.len()
    }

    /// Range of the lower corner on axis `j`.
    pub fn corner_range(&self, j: usize) -> (Rational, Rational) {
        let two = rational::int(2);
        (&self.center_lo[j] - &self.side_hi / &two, &self.center_hi[j] - &self.side_lo / &two)
    }

    /// Width of parameter `p`; `p == dim()` is the side.
    pub fn width(&self, p: usize) -> Rational {
        if p == self.dim() {
            &self.side_hi - &self.side_lo
        } else {
            &self.center_hi[p] - &self.center_lo[p]
        }
    }

    /// Shrink to the cubes that fit in the unit cube. `false` if none do.
    pub fn tighten(&mut self) -> bool {
        let two = rational::int(2);
        let half_lo = &self.side_lo / &two;
        for j in 0..self.dim() {
            if self.center_lo[j] < half_lo {
                self.center_lo[j] = half_lo.clone();
            }
            let top = Rational::one() - &half_lo;
            if self.center_hi[j] > top {
                self.center_hi[j] = top;
            }
            if self.center_lo[j] > self.center_hi[j] {
                return false;
            }
            let reach = rational::min(&self.center_hi[j], &(Rational::one() - &self.center_lo[j])) * &two;
            if self.side_hi > reach {
                self.side_hi = reach;
            }
        }
        self.side_lo <= self.side_hi
    }

    /// Halve parameter `p`.
    pub fn split(&self, p: usize) -> (ParamBox, ParamBox) {
        let mid = if p == self.dim() {
            (&self.side_lo + &self.side_hi) / rational::int(2)
        } else {
            (&self.center_lo[p] + &self.center_hi[p]) / rational::int(2)
        };
        self.split_at(p, &mid)
    }

    /// Cut parameter `p` at `at`.
    pub fn split_at(&self, p: usize, at: &Rational) -> (ParamBox, ParamBox) {
        let mut a = self.clone();
        let mut b = self.clone();
        if p == self.dim() {
            a.side_hi = at.clone();
            b.side_lo = at.clone();
        } else {
            a.center_hi[p] = at.clone();
            b.center_lo[p] = at.clone();
        }
        (a, b)
    }

    /// A feasible cube near the middle of a tightened box.
    pub fn midpoint(&self) -> (Vec<Rational>, Rational) {
        let two = rational::int(2);
        let side = (&self.side_lo + &self.side_hi) / &two;
        let half = &side / &two;
        let center = (0..self.dim())
            .map(|j| {
                let mid = (&self.center_lo[j] + &self.center_hi[j]) / &two;
                let lo = rational::max(&self.center_lo[j], &half).clone();
                let hi = rational::min(&self.center_hi[j], &(Rational::one() - &half)).clone();
                rational::min(rational::max(&mid, &lo), &hi).clone()
            })
            .collect();
        (center, side)
    }
}

/// When to stop besides reaching the width `eps`.
#[derive(Clone, Debug)]
pub struct OptimizeOptions {
    pub eps: Rational,
    pub max_iterations: u64,
    /// Stop as soon as the enclosure lies entirely on one side of this value.
    pub target: Option<Rational>,
}

impl OptimizeOptions {
    pub fn new(eps: Rational) -> Self {
        OptimizeOptions { eps, max_iterations: DEFAULT_MAX_ITERATIONS, target: None }
    }

    pub fn with_target(mut self, t: Rational) -> Self {
        self.target = Some(t);
        self
    }

    pub fn with_max_iterations(mut self, n: u64) -> Self {
        self.max_iterations = n;
        self
    }
}

/// Enclose `sup_W f(W)` to absolute width `eps`.
pub fn optimize_certified(cfg: &CoupleConfig, eps: &Rational) -> Result<CertifiedValue> {
    optimize_certified_with(cfg, &OptimizeOptions::new(eps.clone()))
}

struct Node {
    ub: Rational,
    seq: u64,
    pbox: ParamBox,
    axes: Vec<bound::AxisFractions>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    // max-heap on ub, older boxes first among equals
    fn cmp(&self, o: &Self) -> Ordering {
        self.ub.cmp(&o.ub).then_with(|| o.seq.cmp(&self.seq))
    }
}

struct Search<'a> {
    grid: &'a RectGrid,
    lo: Rational,
    witness: Cube,
}

impl Search<'_> {
    fn offer(&mut self, center: &[Rational], side: &Rational) {
        let v = self.grid.ratio(center, side);
        match v.cmp(&self.lo) {
            Ordering::Greater => {
                self.lo = v;
                self.witness = self.grid.cube(center, side);
            }
            Ordering::Equal => {
                let w = self.grid.cube(center, side);
                if w.lex_cmp(&self.witness) == Ordering::Less {
                    self.witness = w;
                }
            }
            Ordering::Less => {}
        }
    }

    fn axes(&self, b: &ParamBox) -> Vec<bound::AxisFractions> {
        (0..b.dim()).map(|j| self.axis(b, j)).collect()
    }

    fn axis(&self, b: &ParamBox, j: usize) -> bound::AxisFractions {
        self.grid
            .axis_fractions(j, &b.center_lo[j], &b.center_hi[j], &b.side_lo, &b.side_hi)
    }

    fn ub(&self, axes: &[bound::AxisFractions]) -> Rational {
        let refs: Vec<&bound::AxisFractions> = axes.iter().collect();
        self.grid.upper_bound(&refs)
    }

    /// Children of a box split along `p` at `at`, with their bounds; `None`
    /// for an empty child.
    fn children(&self, pbox: &ParamBox, axes: &[bound::AxisFractions], p: usize, at: &Rational) -> Kids {
        let (a, b) = pbox.split_at(p, at);
        [a, b].map(|mut c| {
            if !c.tighten() {
                return None;
            }
            let axes = if p < c.dim() && c.side_lo == pbox.side_lo && c.side_hi == pbox.side_hi {
                let mut axes = axes.to_vec();
                axes[p] = self.axis(&c, p);
                axes
            } else {
                self.axes(&c)
            };
            let ub = self.ub(&axes);
            Some((c, axes, ub))
        })
    }

    /// Total excess of the children over the incumbent.
    fn excess(&self, kids: &Kids) -> Rational {
        kids.iter()
            .flatten()
            .filter(|k| k.2 > self.lo)
            .fold(Rational::zero(), |acc, k| acc + &k.2 - &self.lo)
    }

    /// Every candidate split: each parameter at its midpoint, and each centre
    /// also at the slab boundary nearest its midpoint.
    fn splits(&self, pbox: &ParamBox, axes: &[bound::AxisFractions]) -> Vec<Split> {
        let d = pbox.dim();
        let mut out = Vec::new();
        for p in 0..=d {
            let width = pbox.width(p);
            if !width.is_positive() {
                continue;
            }
            let (lo, hi) = if p == d {
                (&pbox.side_lo, &pbox.side_hi)
            } else {
                (&pbox.center_lo[p], &pbox.center_hi[p])
            };
            let mid = (lo + hi) / rational::int(2);
            // a centre sitting on a slab boundary is a common maximizer
            let snap = (p < d)
                .then(|| self.grid.nearest_break(p, lo, hi, &mid))
                .flatten()
                .filter(|b| *b != mid);
            for (k, at) in std::iter::once(mid).chain(snap).enumerate() {
                let kids = self.children(pbox, axes, p, &at);
                let score = self.excess(&kids);
                out.push(Split { width: width.clone(), midpoint: k == 0, score, kids });
            }
        }
        out
    }

    /// Excess left after splitting each child once more, as well as possible.
    fn lookahead(&self, split: &Split) -> Rational {
        let mut total = Rational::zero();
        for (pbox, axes, ub) in split.kids.iter().flatten() {
            if *ub <= self.lo {
                continue;
            }
            let next = self.splits(pbox, axes).into_iter().map(|s| s.score).min();
            total += next.unwrap_or_else(|| ub - &self.lo);
        }
        total
    }
}

type Kid = (ParamBox, Vec<bound::AxisFractions>, Rational);
type Kids = [Option<Kid>; 2];

struct Split {
    width: Rational,
    midpoint: bool,
    score: Rational,
    kids: Kids,
}

/// Smallest key, ties to the widest parameter.
fn pick_split<K: Ord>(splits: &[Split], key: impl Fn(&Split) -> K) -> usize {
    (0..splits.len())
        .min_by(|&i, &j| {
            key(&splits[i])
                .cmp(&key(&splits[j]))
                .then_with(|| splits[j].width.cmp(&splits[i].width))
        })
        .expect("at least one split")
}

pub fn optimize_certified_with(cfg: &CoupleConfig, opts: &OptimizeOptions) -> Result<CertifiedValue> {
    if !opts.eps.is_positive() {
        return Err(domain!("eps must be positive, got {}", rational::format(&opts.eps)));
    }
    let grid = RectGrid::compress(cfg);
    let d = grid.dim();
    let (seed_value, seed_cube) = seed(cfg);
    let mut search = Search { grid: &grid, lo: seed_value, witness: seed_cube };

    let min_side = grid.min_slab_width() / rational::int(2);
    let mut root = ParamBox::root(d, &min_side);
    root.tighten();
    let (c, s) = root.midpoint();
    search.offer(&c, &s);
    let axes = search.axes(&root);
    let ub = search.ub(&axes);

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node { ub, seq, pbox: root, axes });
    let mut iterations = 0u64;

    let finish = |search: &Search, hi: Rational, iterations: u64, converged: bool| CertifiedValue {
        hi: rational::max(&hi, &search.lo).clone(),
        lo: search.lo.clone(),
        witness: search.witness.clone(),
        iterations,
        converged,
    };

    loop {
        let Some(top) = heap.peek() else {
            return Ok(finish(&search, search.lo.clone(), iterations, true));
        };
        if &top.ub - &search.lo <= opts.eps {
            return Ok(finish(&search, top.ub.clone(), iterations, true));
        }
        if let Some(t) = &opts.target {
            if &search.lo >= t || &top.ub < t {
                return Ok(finish(&search, top.ub.clone(), iterations, true));
            }
        }
        if iterations >= opts.max_iterations {
            return Ok(finish(&search, top.ub.clone(), iterations, false));
        }
        let node = heap.pop().expect("peeked");
        iterations += 1;

        // keep the split leaving the least room above the incumbent; if no
        // single split helps, look one level deeper; never let a box get
        // too thin
        let mut splits = search.splits(&node.pbox, &node.axes);
        if splits.is_empty() {
            // a single cube: its value is exact
            let (c, s) = node.pbox.midpoint();
            search.offer(&c, &s);
            continue;
        }
        let mut chosen = pick_split(&splits, |s| s.score.clone());
        if splits[chosen].score >= &node.ub - &search.lo {
            chosen = pick_split(&splits, |s| search.lookahead(s));
        }
        let widest = pick_split(&splits, |s| !s.midpoint);
        if &splits[chosen].width * rational::int(MAX_ASPECT) < splits[widest].width {
            chosen = widest;
        }
        let kids = splits.swap_remove(chosen).kids;
        for (pbox, axes, ub) in kids.into_iter().flatten() {
            let (c, s) = pbox.midpoint();
            search.offer(&c, &s);
            if ub > search.lo {
                seq += 1;
                heap.push(Node { ub, seq, pbox, axes });
            }
        }
    }
}

/// Grid-aligned lower bound: subdivision 2 when cheap, else 1, else the full cube.
fn seed(cfg: &CoupleConfig) -> (Rational, Cube) {
    let spec = cfg.spec();
    for sub in [2u64, 1] {
        if scan_size(spec.m() * sub, spec.d()) <= SEED_SCAN_LIMIT {
            if let Ok(found) = optimize_grid_aligned(cfg, sub) {
                return found;
            }
        }
    }
    let unit = Cube::unit(spec.d());
    let v = crate::objective::f_ratio(cfg, &unit).expect("unit cube fits");
    (v, unit)
}

/// The slab couple's optimum: `a`, attained by the full cube.
pub fn slab_closed_form(a: &Rational, d: usize) -> Result<(Rational, Cube)> {
    builtin::slab(a, d)?;
    Ok((a.clone(), Cube::unit(d)))
}

/// Upper bound the optimizer would assign to a box, for inspection and tests.
pub fn box_upper_bound(grid: &RectGrid, b: &ParamBox) -> Rational {
    let axes: Vec<_> = (0..b.dim())
        .map(|j| grid.axis_fractions(j, &b.center_lo[j], &b.center_hi[j], &b.side_lo, &b.side_hi))
        .collect();
    let refs: Vec<_> = axes.iter().collect();
    grid.upper_bound(&refs)
}

/// `min_σ |Hull(B) ∩ F_σ| / side_lo^d`, capped at 1/2.
pub fn hull_upper_bound(grid: &RectGrid, b: &ParamBox) -> Rational {
    grid.hull_bound(&b.center_lo, &b.center_hi, &b.side_lo, &b.side_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::f_ratio;
    use crate::rational::{int, pow10_neg, rat};
    use crate::surd::QuadSurd;

    #[test]
    fn halfhalf_is_one_half() {
        for d in 1..=3 {
            let v = optimize_certified(&builtin::halfhalf(d).unwrap(), &pow10_neg(6)).unwrap();
            assert_eq!(v.lo, rat(1, 2));
            assert_eq!(v.hi, rat(1, 2));
            assert_eq!(v.witness, Cube::unit(d));
        }
    }

    #[test]
    fn slab_third_in_two_dims() {
        let cfg = builtin::slab(&rat(1, 3), 2).unwrap();
        let v = optimize_certified(&cfg, &pow10_neg(4)).unwrap();
        assert!(v.converged);
        assert!(v.contains(&rat(1, 3)), "{v:?}");
        assert_eq!(f_ratio(&cfg, &v.witness).unwrap(), v.lo);
    }

    #[test]
    fn holzman_encloses_root_five() {
        let h = builtin::holzman();
        let v = optimize_certified(&h, &pow10_neg(4)).unwrap();
        let target = QuadSurd::sqrt5_minus_2();
        assert_ne!(target.cmp_rational(&v.lo), Ordering::Less);
        assert_ne!(target.cmp_rational(&v.hi), Ordering::Greater);
        assert!(v.width() <= pow10_neg(4));
        assert!(f_ratio(&h, &v.witness).unwrap() >= v.lo);
    }

    #[test]
    fn target_stops_early() {
        let h = builtin::holzman();
        let opts = OptimizeOptions::new(pow10_neg(9)).with_target(rat(1, 5));
        let v = optimize_certified_with(&h, &opts).unwrap();
        assert!(v.lo >= rat(1, 5));
        let opts = OptimizeOptions::new(pow10_neg(9)).with_target(rat(1, 4));
        let v = optimize_certified_with(&h, &opts).unwrap();
        assert!(v.hi < rat(1, 4));
    }

    #[test]
    fn iteration_cap_flags_unconverged() {
        let opts = OptimizeOptions::new(pow10_neg(12)).with_max_iterations(3);
        let v = optimize_certified_with(&builtin::holzman(), &opts).unwrap();
        assert!(!v.converged);
        assert_eq!(v.iterations, 3);
        assert!(v.lo <= v.hi);
    }

    #[test]
    fn rejects_non_positive_eps() {
        assert!(optimize_certified(&builtin::holzman(), &int(0)).is_err());
    }

    #[test]
    fn slab_closed_form_examples() {
        assert_eq!(slab_closed_form(&rat(1, 3), 1).unwrap(), (rat(1, 3), Cube::unit(1)));
        assert_eq!(slab_closed_form(&rat(1, 4), 3).unwrap(), (rat(1, 4), Cube::unit(3)));
        assert!(slab_closed_form(&rat(1, 2), 2).is_err());
    }

    #[test]
    fn tighten_and_midpoint_stay_feasible() {
        let mut b = ParamBox {
            center_lo: vec![rat(1, 10), rat(4, 5)],
            center_hi: vec![rat(1, 5), int(1)],
            side_lo: rat(1, 10),
            side_hi: int(1),
        };
        assert!(b.tighten());
        assert_eq!(b.center_hi[1], rat(19, 20));
        assert_eq!(b.side_hi, rat(2, 5));
        let (c, s) = b.midpoint();
        let w = Cube::from_center(&c, &(&s / int(2))).unwrap();
        assert_eq!(w.side(), &s);
        let (lo, hi) = b.corner_range(0);
        assert!(lo <= w.corner()[0].clone() && w.corner()[0] <= hi);
    }
}
