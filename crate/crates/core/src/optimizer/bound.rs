//! Exact evaluation and upper bounds of the cube ratio on a rectilinear grid.
//!
//! The optimizer works on a compressed copy of the couple: along each axis,
//! adjacent slabs whose label hyperplanes coincide are merged. The point set
//! is unchanged, only the cell bookkeeping shrinks.
//!
//! For a cube with centre `u` and side `s`, write `p_j(k)` for the fraction of
//! its `j`-th edge lying in slab `k` of axis `j`. Then
//! `|W ∩ F| / |W| = Σ_{cells c ∈ F} Π_j p_j(c_j)`, with `Σ_k p_j(k) <= 1`.
//! Over a parameter box each `p_j(k)` is enclosed exactly (it is a
//! linear-fractional function on the pieces cut out by four lines, so its
//! extremes sit at piece vertices), and the nested sum is bounded by a
//! fractional knapsack per axis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geometry::{CoupleConfig, Cube};
use crate::rational::{self, Rational};

/// A couple on a non-uniform rectilinear grid.
#[derive(Clone, Debug)]
pub struct RectGrid {
    d: usize,
    /// Per axis, slab boundaries `0 = b_0 < b_1 < .. < b_n = 1`.
    breaks: Vec<Vec<Rational>>,
    dims: Vec<usize>,
    /// Row-major labels (axis 0 slowest): 0 gap, 1 plus, 2 minus.
    labels: Vec<u8>,
}

impl RectGrid {
    pub fn compress(cfg: &CoupleConfig) -> RectGrid {
        let spec = cfg.spec();
        let d = spec.d();
        let m = spec.m() as usize;
        let mut dims = vec![m; d];
        let mut labels = cfg.labels();
        let mut keep: Vec<Vec<usize>> = Vec::with_capacity(d);
        for axis in 0..d {
            let (kept, merged) = merge_axis(&labels, &dims, axis);
            labels = merged;
            dims[axis] = kept.len();
            keep.push(kept);
        }
        let mr = BigInt::from(spec.m());
        let breaks = keep
            .into_iter()
            .map(|starts| {
                let mut b: Vec<Rational> = starts
                    .into_iter()
                    .map(|k| Rational::new(BigInt::from(k), mr.clone()))
                    .collect();
                b.push(Rational::one());
                b
            })
            .collect();
        RectGrid { d, breaks, dims, labels }
    }

    /// The interior slab boundary in `(lo, hi)` closest to `target`.
    pub fn nearest_break(&self, axis: usize, lo: &Rational, hi: &Rational, target: &Rational) -> Option<Rational> {
        let b = &self.breaks[axis];
        b[1..b.len() - 1]
            .iter()
            .filter(|x| *x > lo && *x < hi)
            .min_by_key(|x| (*x - target).abs())
            .cloned()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn slabs(&self, axis: usize) -> usize {
        self.dims[axis]
    }

    pub fn cell_count(&self) -> usize {
        self.labels.len()
    }

    /// Narrowest slab over all axes.
    pub fn min_slab_width(&self) -> Rational {
        let mut w = Rational::one();
        for b in &self.breaks {
            for pair in b.windows(2) {
                let len = &pair[1] - &pair[0];
                if len < w {
                    w = len;
                }
            }
        }
        w
    }

    /// Exact `(|W ∩ F+|, |W ∩ F-|) / |W|` for a cube given by centre and side.
    pub fn fractions(&self, center: &[Rational], side: &Rational) -> (Rational, Rational) {
        let half = side / rational::int(2);
        let mut per_axis: Vec<(usize, Vec<Rational>)> = Vec::with_capacity(self.d);
        for j in 0..self.d {
            let lo = &center[j] - &half;
            let hi = &center[j] + &half;
            let b = &self.breaks[j];
            let mut first = None;
            let mut lens = Vec::new();
            for k in 0..self.dims[j] {
                let l = rational::min(&b[k + 1], &hi) - rational::max(&b[k], &lo);
                if l.is_positive() {
                    if first.is_none() {
                        first = Some(k);
                    }
                    lens.push(l / side);
                } else if first.is_some() {
                    break;
                }
            }
            per_axis.push((first.unwrap_or(0), lens));
        }
        let mut plus = Rational::zero();
        let mut minus = Rational::zero();
        if per_axis.iter().any(|(_, l)| l.is_empty()) {
            return (plus, minus);
        }
        let mut idx = vec![0usize; self.d];
        'outer: loop {
            let mut lin = 0;
            for j in 0..self.d {
                lin = lin * self.dims[j] + per_axis[j].0 + idx[j];
            }
            let label = self.labels[lin];
            if label != 0 {
                let mut p = per_axis[0].1[idx[0]].clone();
                for j in 1..self.d {
                    p *= &per_axis[j].1[idx[j]];
                }
                if label == 1 {
                    plus += p;
                } else {
                    minus += p;
                }
            }
            for j in (0..self.d).rev() {
                idx[j] += 1;
                if idx[j] < per_axis[j].1.len() {
                    continue 'outer;
                }
                idx[j] = 0;
            }
            break;
        }
        (plus, minus)
    }

    pub fn ratio(&self, center: &[Rational], side: &Rational) -> Rational {
        let (p, m) = self.fractions(center, side);
        rational::min(&p, &m).clone()
    }

    /// Enclosures of `p_axis(k)` for every slab `k` over the parameter box.
    pub fn axis_fractions(
        &self,
        axis: usize,
        center_lo: &Rational,
        center_hi: &Rational,
        side_lo: &Rational,
        side_hi: &Rational,
    ) -> AxisFractions {
        let b = &self.breaks[axis];
        let two = rational::int(2);
        let hull_lo = center_lo - side_hi / &two;
        let hull_hi = center_hi + side_hi / &two;
        let mut first = None;
        let mut bounds = Vec::new();
        for k in 0..self.dims[axis] {
            let (a, bb) = (&b[k], &b[k + 1]);
            if hull_hi <= *a || hull_lo >= *bb {
                if first.is_some() {
                    break;
                }
                continue;
            }
            if first.is_none() {
                first = Some(k);
            }
            bounds.push(slab_fraction_range(a, bb, center_lo, center_hi, side_lo, side_hi));
        }
        AxisFractions { first: first.unwrap_or(0), bounds }
    }

    /// Upper bound on `min(|W ∩ F+|, |W ∩ F-|) / |W|` over the box, given
    /// per-axis enclosures. Never exceeds `1/2`.
    pub fn upper_bound(&self, axes: &[&AxisFractions]) -> Rational {
        let half = rational::rat(1, 2);
        if axes.iter().any(|a| a.bounds.is_empty()) {
            return Rational::zero();
        }
        if let Some(v) = self.vertex_bound(axes, VERTEX_TUPLE_LIMIT) {
            return v;
        }
        let plus = self.knapsack_bound(axes, 1);
        if plus.is_zero() {
            return plus;
        }
        let minus = self.knapsack_bound(axes, 2);
        rational::min(rational::min(&plus, &minus), &half).clone()
    }

    /// Exact maximum of `min(P, M)` over the relaxation where each axis'
    /// fraction vector ranges over `{lo <= p <= hi, Σ p = 1}`. `P` and `M` are
    /// multilinear in the per-axis vectors, so every attainable `(P, M)` is a
    /// convex combination of values at vertex tuples, and the bound is the
    /// best `min(x, y)` over their hull. `None` when there are too many
    /// vertex tuples.
    pub fn vertex_bound(&self, axes: &[&AxisFractions], limit: usize) -> Option<Rational> {
        let mut verts: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(self.d);
        let mut scale = BigInt::one();
        let mut total = 1usize;
        for a in axes {
            if a.bounds.len() > MAX_VERTEX_SLABS {
                return None;
            }
            let (v, den) = simplex_box_vertices(&a.bounds);
            total = total.saturating_mul(v.len());
            if v.is_empty() || total > limit {
                return None;
            }
            scale *= den;
            verts.push(v);
        }
        let sub: Vec<usize> = axes.iter().map(|a| a.bounds.len()).collect();
        let cells: Vec<(Vec<usize>, u8)> = {
            let count: usize = sub.iter().product();
            let mut out = Vec::new();
            let mut idx = vec![0usize; self.d];
            for _ in 0..count {
                let mut lin = 0;
                for j in 0..self.d {
                    lin = lin * self.dims[j] + axes[j].first + idx[j];
                }
                let label = self.labels[lin];
                if label != 0 {
                    out.push((idx.clone(), label));
                }
                for j in (0..self.d).rev() {
                    idx[j] += 1;
                    if idx[j] < sub[j] {
                        break;
                    }
                    idx[j] = 0;
                }
            }
            out
        };
        let mut points: Vec<(BigInt, BigInt)> = Vec::with_capacity(total);
        let mut pick = vec![0usize; self.d];
        for _ in 0..total {
            let mut plus = BigInt::zero();
            let mut minus = BigInt::zero();
            for (cell, label) in &cells {
                let mut p = verts[0][pick[0]][cell[0]].clone();
                for j in 1..self.d {
                    if p.is_zero() {
                        break;
                    }
                    p *= &verts[j][pick[j]][cell[j]];
                }
                if *label == 1 {
                    plus += p;
                } else {
                    minus += p;
                }
            }
            points.push((plus, minus));
            for j in (0..self.d).rev() {
                pick[j] += 1;
                if pick[j] < verts[j].len() {
                    break;
                }
                pick[j] = 0;
            }
        }
        let (num, den) = hull_max_min(points);
        Some(Rational::new(num, den * scale))
    }

    /// Nested fractional-knapsack bound on `Σ_{c: label(c)=want} Π_j p_j(c_j)`.
    fn knapsack_bound(&self, axes: &[&AxisFractions], want: u8) -> Rational {
        let d = self.d;
        let sub: Vec<usize> = axes.iter().map(|a| a.bounds.len()).collect();
        // innermost axis: weights are 0/1 indicators
        let last = d - 1;
        let outer_count: usize = sub[..last].iter().product();
        let mut values: Vec<Rational> = Vec::with_capacity(outer_count);
        let mut idx = vec![0usize; last];
        for _ in 0..outer_count {
            let mut base = 0;
            for j in 0..last {
                base = base * self.dims[j] + axes[j].first + idx[j];
            }
            base = base * self.dims[last] + axes[last].first;
            let row = &self.labels[base..base + sub[last]];
            values.push(indicator_knapsack(&axes[last].bounds, row, want));
            for j in (0..last).rev() {
                idx[j] += 1;
                if idx[j] < sub[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        // remaining axes, innermost first
        // axis j is now the fastest-varying index, so each run of sub[j] values
        // shares a prefix over axes < j
        for j in (0..last).rev() {
            let n = sub[j];
            values = values
                .chunks(n)
                .map(|w| weighted_knapsack(&axes[j].bounds, w))
                .collect();
        }
        values.pop().unwrap_or_else(Rational::zero)
    }

    /// Bound from the hull of the box: `|Hull(B) ∩ F| / side_lo^d`, per set.
    pub fn hull_bound(
        &self,
        center_lo: &[Rational],
        center_hi: &[Rational],
        side_lo: &Rational,
        side_hi: &Rational,
    ) -> Rational {
        let two = rational::int(2);
        let mut lens: Vec<Vec<Rational>> = Vec::with_capacity(self.d);
        for j in 0..self.d {
            let lo = rational::max(&(&center_lo[j] - side_hi / &two), &Rational::zero()).clone();
            let hi = rational::min(&(&center_hi[j] + side_hi / &two), &Rational::one()).clone();
            let b = &self.breaks[j];
            lens.push(
                (0..self.dims[j])
                    .map(|k| {
                        let l = rational::min(&b[k + 1], &hi) - rational::max(&b[k], &lo);
                        if l.is_positive() {
                            l
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
        }
        let mut plus = Rational::zero();
        let mut minus = Rational::zero();
        for (lin, &label) in self.labels.iter().enumerate() {
            if label == 0 {
                continue;
            }
            let mut rest = lin;
            let mut p = Rational::one();
            for j in (0..self.d).rev() {
                let k = rest % self.dims[j];
                rest /= self.dims[j];
                p *= &lens[j][k];
            }
            if label == 1 {
                plus += p;
            } else {
                minus += p;
            }
        }
        let vol = rational::pow(side_lo, self.d);
        let half = rational::rat(1, 2);
        rational::min(&(rational::min(&plus, &minus) / vol), &half).clone()
    }

    /// Move a cube of side `side` to one of side `target` with the same slab
    /// fractions on every axis. Requires `side <= target <= min_slab_width / 2`.
    pub fn rescale(&self, center: &[Rational], side: &Rational, target: &Rational) -> Vec<Rational> {
        let two = rational::int(2);
        let half = side / &two;
        let ratio = target / side;
        (0..self.d)
            .map(|j| {
                let lo = &center[j] - &half;
                let hi = &center[j] + &half;
                let b = &self.breaks[j];
                // an inner break strictly inside the edge, if any
                let cut = b[1..b.len() - 1].iter().find(|x| **x > lo && **x < hi);
                let new_lo = match cut {
                    Some(x) => x - (x - &lo) * &ratio,
                    None => {
                        let k = b.iter().rposition(|x| *x <= lo).unwrap();
                        let (a, top) = (&b[k], &b[k + 1]);
                        let start = &center[j] - target / &two;
                        rational::min(rational::max(&start, a), &(top - target)).clone()
                    }
                };
                new_lo + target / &two
            })
            .collect()
    }

    /// Recover the original cube for a centre/side pair.
    pub fn cube(&self, center: &[Rational], side: &Rational) -> Cube {
        let half = side / rational::int(2);
        Cube::new(center.iter().map(|c| c - &half).collect(), side.clone())
            .expect("optimizer only reports feasible cubes")
    }
}

/// Per-axis fraction enclosures for the slabs the box can touch.
#[derive(Clone, Debug)]
pub struct AxisFractions {
    first: usize,
    bounds: Vec<(Rational, Rational)>,
}

/// Merge runs of identical slabs along `axis`. Returns the kept slab starts
/// (in original slab units) and the reduced label array.
fn merge_axis(labels: &[u8], dims: &[usize], axis: usize) -> (Vec<usize>, Vec<u8>) {
    let n = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let slice = |k: usize| {
        (0..outer).flat_map(move |o| {
            let base = (o * n + k) * inner;
            labels[base..base + inner].iter().copied()
        })
    };
    let mut kept = vec![0usize];
    for k in 1..n {
        if !slice(k).eq(slice(k - 1)) {
            kept.push(k);
        }
    }
    let mut out = Vec::with_capacity(outer * kept.len() * inner);
    for o in 0..outer {
        for &k in &kept {
            let base = (o * n + k) * inner;
            out.extend_from_slice(&labels[base..base + inner]);
        }
    }
    (kept, out)
}

/// Exact range of `|[u - s/2, u + s/2] ∩ [a, b]| / s` over the box
/// `u ∈ [u0, u1]`, `s ∈ [s0, s1]`, `s0 > 0`.
pub fn slab_fraction_range(
    a: &Rational,
    b: &Rational,
    u0: &Rational,
    u1: &Rational,
    s0: &Rational,
    s1: &Rational,
) -> (Rational, Rational) {
    // everything in integer units of 1/den; the extra 2 keeps s/2 integral
    let den = [a, b, u0, u1, s0, s1]
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
        * BigInt::from(2);
    let int = |r: &Rational| r.numer() * (&den / r.denom());
    let (a, b, u0, u1, s0, s1) = (int(a), int(b), int(u0), int(u1), int(s0), int(s1));
    let two = BigInt::from(2);
    let (h0, h1) = (&s0 / &two, &s1 / &two);
    let frac = |l: BigInt, s: BigInt| Rational::new(l, s);
    // cube edge always covers the slab
    if &u1 - &h0 <= a && &u0 + &h0 >= b {
        let len = &b - &a;
        return (frac(len.clone(), s1), frac(len, s0));
    }
    // cube edge always inside the slab
    if &u0 - &h1 >= a && &u1 + &h1 <= b {
        return (Rational::one(), Rational::one());
    }
    let eval = |u: &BigInt, s: &BigInt| -> BigInt {
        let h = s / &two;
        let l = (&b).min(&(u + &h)) - (&a).max(&(u - &h));
        l.max(BigInt::zero())
    };
    let mut pts: Vec<(BigInt, BigInt)> = vec![
        (u0.clone(), s0.clone()),
        (u0.clone(), s1.clone()),
        (u1.clone(), s0.clone()),
        (u1.clone(), s1.clone()),
    ];
    // breaklines u - s/2 = c and u + s/2 = c for c in {a, b}
    for c in [&a, &b] {
        for sign in [-1i64, 1] {
            // u + sign * s/2 = c
            for (s, h) in [(&s0, &h0), (&s1, &h1)] {
                let u = if sign < 0 { c + h } else { c - h };
                if u >= u0 && u <= u1 {
                    pts.push((u, s.clone()));
                }
            }
            for u in [&u0, &u1] {
                let s = (c - u) * &two * BigInt::from(sign);
                if s >= s0 && s <= s1 {
                    pts.push((u.clone(), s));
                }
            }
        }
    }
    let mut vals: Vec<(BigInt, BigInt)> = pts.iter().map(|(u, s)| (eval(u, s), s.clone())).collect();
    // u - s/2 = a meets u + s/2 = b: the cube is the slab
    let len = &b - &a;
    let mid2 = &a + &b;
    if len >= s0 && len <= s1 && mid2 >= &u0 * &two && mid2 <= &u1 * &two {
        vals.push((len.clone(), len));
    }
    let mut lo: Option<(BigInt, BigInt)> = None;
    let mut hi: Option<(BigInt, BigInt)> = None;
    for (l, s) in vals {
        if lo.as_ref().is_none_or(|(xl, xs)| &l * xs < xl * &s) {
            lo = Some((l.clone(), s.clone()));
        }
        if hi.as_ref().is_none_or(|(xl, xs)| &l * xs > xl * &s) {
            hi = Some((l, s));
        }
    }
    let (lo, hi) = (lo.unwrap(), hi.unwrap());
    (frac(lo.0, lo.1), frac(hi.0, hi.1))
}

/// Largest number of vertex tuples the vertex bound will enumerate.
const VERTEX_TUPLE_LIMIT: usize = 512;

/// Axes touching more slabs than this skip the vertex bound.
const MAX_VERTEX_SLABS: usize = 6;

/// Vertices of `{lo <= p <= hi, Σ p = 1}` as integer numerators over the
/// common denominator returned alongside.
fn simplex_box_vertices(bounds: &[(Rational, Rational)]) -> (Vec<Vec<BigInt>>, BigInt) {
    let den = bounds
        .iter()
        .flat_map(|(lo, hi)| [lo.denom(), hi.denom()])
        .fold(BigInt::one(), |acc, q| acc.lcm(q));
    let scaled: Vec<(BigInt, BigInt)> = bounds
        .iter()
        .map(|(lo, hi)| (lo.numer() * (&den / lo.denom()), hi.numer() * (&den / hi.denom())))
        .collect();
    let n = bounds.len();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for free in 0..n {
        for mask in 0u32..(1 << (n - 1)) {
            let mut p = Vec::with_capacity(n);
            let mut sum = BigInt::zero();
            let mut bit = 0;
            for (k, (lo, hi)) in scaled.iter().enumerate() {
                if k == free {
                    p.push(BigInt::zero());
                    continue;
                }
                let v = if mask >> bit & 1 == 1 { hi } else { lo };
                bit += 1;
                sum += v;
                p.push(v.clone());
            }
            let rest = &den - sum;
            let (lo, hi) = &scaled[free];
            if &rest >= lo && &rest <= hi {
                p[free] = rest;
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    (out, den)
}

/// `max min(x, y)` over the convex hull of `points`, as a fraction.
fn hull_max_min(mut points: Vec<(BigInt, BigInt)>) -> (BigInt, BigInt) {
    // keep the Pareto front; dominated points cannot raise min(x, y)
    points.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1)));
    let mut front: Vec<(BigInt, BigInt)> = Vec::new();
    for p in points {
        if front.last().is_none_or(|q| p.1 > q.1) {
            front.push(p);
        }
    }
    let mut num = front
        .iter()
        .map(|(x, y)| x.min(y).clone())
        .max()
        .unwrap_or_else(BigInt::zero);
    let mut den = BigInt::one();
    for u in front.iter().filter(|p| p.0 > p.1) {
        for v in front.iter().filter(|p| p.0 < p.1) {
            let du = &u.0 - &u.1;
            let dv = &v.1 - &v.0;
            // point on the segment where x = y
            let tn = &u.0 * &dv + &v.0 * &du;
            let td = du + dv;
            if &tn * &den > &num * &td {
                num = tn;
                den = td;
            }
        }
    }
    (num, den)
}

/// `max Σ_{k: row[k]=want} p_k` s.t. `lo_k <= p_k <= hi_k`, `Σ p_k <= 1`.
fn indicator_knapsack(bounds: &[(Rational, Rational)], row: &[u8], want: u8) -> Rational {
    let mut base = Rational::zero();
    let mut slack_in = Rational::zero();
    let mut lo_total = Rational::zero();
    let mut any = false;
    for ((lo, hi), &label) in bounds.iter().zip(row) {
        lo_total += lo;
        if label == want {
            any = true;
            base += lo;
            slack_in += hi - lo;
        }
    }
    if !any {
        return Rational::zero();
    }
    let budget = Rational::one() - lo_total;
    let budget = if budget.is_negative() { Rational::zero() } else { budget };
    base + rational::min(&slack_in, &budget)
}

/// `max Σ w_k p_k` s.t. `lo_k <= p_k <= hi_k`, `Σ p_k <= 1`, for `w >= 0`.
fn weighted_knapsack(bounds: &[(Rational, Rational)], weights: &[Rational]) -> Rational {
    let mut value = Rational::zero();
    let mut lo_total = Rational::zero();
    let mut order: Vec<usize> = Vec::with_capacity(weights.len());
    for (k, ((lo, _), w)) in bounds.iter().zip(weights).enumerate() {
        lo_total += lo;
        if !w.is_zero() {
            value += w * lo;
            order.push(k);
        }
    }
    let mut budget = Rational::one() - lo_total;
    if !budget.is_positive() || order.is_empty() {
        return value;
    }
    order.sort_by(|&x, &y| weights[y].cmp(&weights[x]));
    for k in order {
        let (lo, hi) = &bounds[k];
        let room = hi - lo;
        if room >= budget {
            value += &weights[k] * &budget;
            break;
        }
        value += &weights[k] * &room;
        budget -= room;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::objective::f_ratio;
    use crate::rational::{int, rat};

    #[test]
    fn compression_merges_identical_slabs() {
        let g = RectGrid::compress(&builtin::slab(&rat(1, 3), 3).unwrap());
        assert_eq!(g.dims, vec![1, 1, 3]);
        let g = RectGrid::compress(&builtin::holzman());
        assert_eq!(g.dims, vec![3, 3]);
        let g = RectGrid::compress(&builtin::holzman().refine(2).unwrap());
        assert_eq!(g.dims, vec![3, 3]);
        assert_eq!(g.min_slab_width(), rat(1, 3));
    }

    #[test]
    fn compressed_ratio_matches_grid_ratio() {
        let h = builtin::holzman().refine(2).unwrap();
        let g = RectGrid::compress(&h);
        for (c, s) in [
            (vec![rat(1, 2), rat(1, 2)], int(1)),
            (vec![rat(1, 3), rat(2, 5)], rat(1, 2)),
            (vec![rat(7, 10), rat(1, 4)], rat(3, 10)),
        ] {
            let w = g.cube(&c, &s);
            assert_eq!(g.ratio(&c, &s), f_ratio(&h, &w).unwrap());
        }
    }

    #[test]
    fn fraction_range_examples() {
        // edge [u - s/2, u + s/2] with u in [1/2,1/2], s in [1,1] covers [0,1/3]: 1/3
        let (lo, hi) = slab_fraction_range(&int(0), &rat(1, 3), &rat(1, 2), &rat(1, 2), &int(1), &int(1));
        assert_eq!((lo, hi), (rat(1, 3), rat(1, 3)));
        // tiny box strictly inside a slab
        let (lo, hi) = slab_fraction_range(&int(0), &rat(1, 2), &rat(1, 4), &rat(1, 4), &rat(1, 10), &rat(1, 5));
        assert_eq!((lo, hi), (int(1), int(1)));
    }

    #[test]
    fn knapsacks() {
        let b = vec![(rat(1, 4), rat(1, 2)), (rat(1, 4), rat(1, 2)), (int(0), rat(1, 2))];
        assert_eq!(indicator_knapsack(&b, &[1, 0, 1], 1), rat(3, 4));
        assert_eq!(indicator_knapsack(&b, &[0, 0, 0], 1), int(0));
        let w = vec![int(1), int(2), int(0)];
        // lo gives 1/4 + 1/2; budget 1/2 goes to k=1 (1/4 room) then k=0 (1/4)
        assert_eq!(weighted_knapsack(&b, &w), rat(1, 4) + rat(1, 2) + rat(1, 2) + rat(1, 4));
    }
}
