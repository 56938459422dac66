//! Grid multi-cubes, axis-aligned cubes and exact volume computation.
//!
//! A [`GridSet`] is a union of cells of the uniform `m`-per-axis grid on
//! `[0,1]^d`. Dyadic multi-cubes are the case `m = 2^N`. Cells are addressed
//! by their index tuple `(i_0, .., i_{d-1})`, `0 <= i_j < m`; the linear index
//! puts axis 0 first, so linear order is lexicographic order on tuples.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};

/// Default limit on `m^d`.
pub const DEFAULT_CELL_CAP: u64 = 1 << 28;

/// Environment variable overriding [`DEFAULT_CELL_CAP`].
pub const CELL_CAP_ENV: &str = "CUBESEEKER_CELL_CAP";

/// The process-wide cell cap: `CUBESEEKER_CELL_CAP` if set and valid, else 2^28.
pub fn cell_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(CELL_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_CELL_CAP)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    d: usize,
    m: u64,
}

impl GridSpec {
    pub fn new(d: usize, m: u64) -> Result<Self> {
        Self::with_cap(d, m, cell_cap())
    }

    pub fn with_cap(d: usize, m: u64, cap: u64) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(domain!("grid needs d >= 1 and m >= 1, got d={d}, m={m}"));
        }
        match (m as u128).checked_pow(d as u32) {
            Some(total) if total <= cap as u128 => Ok(GridSpec { d, m }),
            _ => Err(Error::Capacity(format!(
                "grid d={d}, m={m} has more than {cap} cells"
            ))),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `m^d`; fits in a `u64` by construction.
    pub fn cell_count(&self) -> u64 {
        self.m.pow(self.d as u32)
    }

    pub fn cell_volume(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.cell_count()))
    }

    pub fn linear_index(&self, cell: &[u64]) -> Result<u64> {
        if cell.len() != self.d {
            return Err(Error::Invariant(format!(
                "cell {cell:?} has {} coordinates, grid has d={}",
                cell.len(),
                self.d
            )));
        }
        let mut idx = 0u64;
        for &c in cell {
            if c >= self.m {
                return Err(Error::Invariant(format!(
                    "cell {cell:?} outside grid with m={}",
                    self.m
                )));
            }
            idx = idx * self.m + c;
        }
        Ok(idx)
    }

    pub fn cell_tuple(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.d];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.m;
            idx /= self.m;
        }
        out
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} m={}", self.d, self.m)
    }
}

/// Cell storage. Dense bitsets serve small or well-filled grids, a sorted
/// index list serves large sparse ones. Both answer every query identically.
#[derive(Clone, Debug)]
enum CellStore {
    Dense { words: Vec<u64>, len: usize },
    Sparse(Vec<u64>),
}

/// Grids up to this many cells are always stored densely.
const DENSE_ALWAYS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    Auto,
    Dense,
    Sparse,
}

impl CellStore {
    fn build(total: u64, mut sorted: Vec<u64>, storage: Storage) -> Self {
        sorted.sort_unstable();
        sorted.dedup();
        let dense = match storage {
            Storage::Dense => true,
            Storage::Sparse => false,
            Storage::Auto => total <= DENSE_ALWAYS || (sorted.len() as u64) * 16 >= total,
        };
        if dense {
            let mut words = vec![0u64; total.div_ceil(64) as usize];
            for &i in &sorted {
                words[(i / 64) as usize] |= 1 << (i % 64);
            }
            CellStore::Dense { words, len: sorted.len() }
        } else {
            CellStore::Sparse(sorted)
        }
    }

    fn contains(&self, i: u64) -> bool {
        match self {
            CellStore::Dense { words, .. } => words[(i / 64) as usize] >> (i % 64) & 1 == 1,
            CellStore::Sparse(v) => v.binary_search(&i).is_ok(),
        }
    }

    fn len(&self) -> usize {
        match self {
            CellStore::Dense { len, .. } => *len,
            CellStore::Sparse(v) => v.len(),
        }
    }

    fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            CellStore::Dense { words, .. } => Box::new(words.iter().enumerate().flat_map(
                |(w, &bits)| {
                    let mut rest = bits;
                    std::iter::from_fn(move || {
                        if rest == 0 {
                            return None;
                        }
                        let b = rest.trailing_zeros() as u64;
                        rest &= rest - 1;
                        Some(w as u64 * 64 + b)
                    })
                },
            )),
            CellStore::Sparse(v) => Box::new(v.iter().copied()),
        }
    }

    fn is_dense(&self) -> bool {
        matches!(self, CellStore::Dense { .. })
    }
}

/// A union of grid cells.
#[derive(Clone, Debug)]
pub struct GridSet {
    spec: GridSpec,
    store: CellStore,
}

impl PartialEq for GridSet {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.len() == other.len() && self.iter_linear().eq(other.iter_linear())
    }
}

impl Eq for GridSet {}

impl GridSet {
    pub fn new<I, C>(spec: GridSpec, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[u64]>,
    {
        let linear = cells
            .into_iter()
            .map(|c| spec.linear_index(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_linear_unchecked(spec, linear, Storage::Auto))
    }

    pub fn from_linear(spec: GridSpec, linear: Vec<u64>) -> Result<Self> {
        Self::from_linear_with(spec, linear, Storage::Auto)
    }

    /// Like [`GridSet::from_linear`] but forcing a storage layout.
    pub fn from_linear_with(spec: GridSpec, linear: Vec<u64>, storage: Storage) -> Result<Self> {
        let total = spec.cell_count();
        if let Some(bad) = linear.iter().find(|&&i| i >= total) {
            return Err(Error::Invariant(format!(
                "linear cell index {bad} outside grid {spec}"
            )));
        }
        Ok(Self::from_linear_unchecked(spec, linear, storage))
    }

    fn from_linear_unchecked(spec: GridSpec, linear: Vec<u64>, storage: Storage) -> Self {
        GridSet { spec, store: CellStore::build(spec.cell_count(), linear, storage) }
    }

    pub fn empty(spec: GridSpec) -> Self {
        Self::from_linear_unchecked(spec, Vec::new(), Storage::Auto)
    }

    pub fn full(spec: GridSpec) -> Self {
        Self::from_linear_unchecked(spec, (0..spec.cell_count()).collect(), Storage::Auto)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        self.store.is_dense()
    }

    pub fn contains_linear(&self, idx: u64) -> bool {
        idx < self.spec.cell_count() && self.store.contains(idx)
    }

    pub fn contains(&self, cell: &[u64]) -> bool {
        self.spec
            .linear_index(cell)
            .map(|i| self.store.contains(i))
            .unwrap_or(false)
    }

    /// Linear indices in increasing order.
    pub fn iter_linear(&self) -> impl Iterator<Item = u64> + '_ {
        self.store.iter()
    }

    /// Index tuples in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.store.iter().map(|i| self.spec.cell_tuple(i))
    }

    pub fn is_disjoint(&self, other: &GridSet) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter_linear().all(|i| !large.contains_linear(i))
    }

    pub fn union(&self, other: &GridSet) -> Result<GridSet> {
        self.same_spec(other)?;
        let cells = self.iter_linear().chain(other.iter_linear()).collect();
        Ok(Self::from_linear_unchecked(self.spec, cells, Storage::Auto))
    }

    /// Cells in neither `self` nor `other`.
    pub fn complement_of_union(&self, other: &GridSet) -> Result<GridSet> {
        self.same_spec(other)?;
        let cells = (0..self.spec.cell_count())
            .filter(|&i| !self.store.contains(i) && !other.store.contains(i))
            .collect();
        Ok(Self::from_linear_unchecked(self.spec, cells, Storage::Auto))
    }

    fn same_spec(&self, other: &GridSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Invariant(format!(
                "grid mismatch: {} vs {}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    /// Lebesgue measure: `|cells| / m^d`.
    pub fn volume(&self) -> Rational {
        Rational::new(BigInt::from(self.len()), BigInt::from(self.spec.cell_count()))
    }

    /// Exact measure of `w ∩ self`.
    ///
    /// Only the cells in the index range spanned by `w` are visited (or, when
    /// the set is smaller than that range, only the set's own cells).
    pub fn overlap_volume(&self, w: &Cube) -> Result<Rational> {
        if w.dim() != self.spec.d {
            return Err(domain!(
                "cube has dimension {}, grid has d={}",
                w.dim(),
                self.spec.d
            ));
        }
        let m = self.spec.m;
        let mr = Rational::from_integer(BigInt::from(m));
        // per axis: first index touched and overlap lengths (in units of 1/m)
        let mut ranges: Vec<(u64, Vec<Rational>)> = Vec::with_capacity(self.spec.d);
        let mut span: u128 = 1;
        for j in 0..self.spec.d {
            let lo = &w.corner[j] * &mr;
            let hi = (&w.corner[j] + &w.side) * &mr;
            let first = lo.floor().to_integer().to_u64().unwrap_or(0).min(m - 1);
            let last = {
                let c = hi.ceil().to_integer().to_u64().unwrap_or(m);
                c.clamp(first + 1, m)
            };
            let lens: Vec<Rational> = (first..last)
                .map(|k| {
                    let a = Rational::from_integer(BigInt::from(k));
                    let b = &a + Rational::one();
                    let l = rational::min(&b, &hi) - rational::max(&a, &lo);
                    if l.is_positive() {
                        l
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            span *= lens.len() as u128;
            ranges.push((first, lens));
        }
        let weight = |cell: &[u64]| -> Rational {
            let mut p = Rational::one();
            for (j, &c) in cell.iter().enumerate() {
                let (first, lens) = &ranges[j];
                if c < *first || c >= first + lens.len() as u64 {
                    return Rational::zero();
                }
                let l = &lens[(c - first) as usize];
                if l.is_zero() {
                    return Rational::zero();
                }
                p *= l;
            }
            p
        };
        let mut total = Rational::zero();
        if span <= self.len() as u128 {
            let mut cell: Vec<u64> = ranges.iter().map(|(f, _)| *f).collect();
            'outer: loop {
                if self.contains(&cell) {
                    total += weight(&cell);
                }
                for j in (0..self.spec.d).rev() {
                    cell[j] += 1;
                    if cell[j] < ranges[j].0 + ranges[j].1.len() as u64 {
                        continue 'outer;
                    }
                    cell[j] = ranges[j].0;
                }
                break;
            }
        } else {
            for cell in self.cells() {
                total += weight(&cell);
            }
        }
        Ok(total / rational::pow(&mr, self.spec.d))
    }

    /// The product set `self × [0,1]` in dimension `d + 1`, same `m`.
    pub fn lift(&self) -> Result<GridSet> {
        let spec = GridSpec::new(self.spec.d + 1, self.spec.m)?;
        let m = self.spec.m;
        let cells = self
            .iter_linear()
            .flat_map(|i| (0..m).map(move |t| i * m + t))
            .collect();
        Ok(Self::from_linear_unchecked(spec, cells, Storage::Auto))
    }

    /// The same point set on the grid with `m · factor` cells per axis.
    pub fn refine(&self, factor: u64) -> Result<GridSet> {
        if factor == 0 {
            return Err(domain!("refinement factor must be >= 1"));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let m2 = self
            .spec
            .m
            .checked_mul(factor)
            .ok_or_else(|| Error::Capacity("refined m overflows".into()))?;
        let spec = GridSpec::new(self.spec.d, m2)?;
        let d = self.spec.d;
        let sub = factor.pow(d as u32);
        let mut cells = Vec::with_capacity(self.len() * sub as usize);
        for cell in self.cells() {
            for r in 0..sub {
                let mut rest = r;
                let mut idx = 0u64;
                let mut offs = vec![0u64; d];
                for o in offs.iter_mut().rev() {
                    *o = rest % factor;
                    rest /= factor;
                }
                for j in 0..d {
                    idx = idx * m2 + cell[j] * factor + offs[j];
                }
                cells.push(idx);
            }
        }
        Ok(Self::from_linear_unchecked(spec, cells, Storage::Auto))
    }
}

/// A closed axis-aligned cube `corner + [0, side]^d` inside `[0,1]^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CubeRepr", into = "CubeRepr")]
pub struct Cube {
    corner: Vec<Rational>,
    side: Rational,
}

#[derive(Serialize, Deserialize)]
struct CubeRepr {
    #[serde(with = "rational::serde_vec")]
    corner: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    side: Rational,
}

impl TryFrom<CubeRepr> for Cube {
    type Error = Error;
    fn try_from(r: CubeRepr) -> Result<Cube> {
        Cube::new(r.corner, r.side)
    }
}

impl From<Cube> for CubeRepr {
    fn from(c: Cube) -> CubeRepr {
        CubeRepr { corner: c.corner, side: c.side }
    }
}

impl Cube {
    pub fn new(corner: Vec<Rational>, side: Rational) -> Result<Self> {
        if corner.is_empty() {
            return Err(domain!("cube needs at least one coordinate"));
        }
        if !side.is_positive() {
            return Err(domain!("cube side must be positive, got {}", rational::format(&side)));
        }
        for (j, c) in corner.iter().enumerate() {
            if c.is_negative() || c + &side > Rational::one() {
                return Err(domain!(
                    "cube [{} , {}] on axis {j} leaves [0,1]",
                    rational::format(c),
                    rational::format(&(c + &side))
                ));
            }
        }
        Ok(Cube { corner, side })
    }

    pub fn unit(d: usize) -> Self {
        Cube { corner: vec![Rational::zero(); d], side: Rational::one() }
    }

    /// The cube `Q(center, half_side)` of side `2·half_side` centred at `center`.
    pub fn from_center(center: &[Rational], half_side: &Rational) -> Result<Self> {
        let corner = center.iter().map(|c| c - half_side).collect();
        Self::new(corner, half_side * rational::int(2))
    }

    pub fn center(&self) -> Vec<Rational> {
        let h = self.half_side();
        self.corner.iter().map(|c| c + &h).collect()
    }

    pub fn half_side(&self) -> Rational {
        &self.side / rational::int(2)
    }

    pub fn corner(&self) -> &[Rational] {
        &self.corner
    }

    pub fn side(&self) -> &Rational {
        &self.side
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn volume(&self) -> Rational {
        rational::pow(&self.side, self.dim())
    }

    /// `self × [t, t + side]`.
    pub fn lift(&self, t: &Rational) -> Result<Cube> {
        let mut corner = self.corner.clone();
        corner.push(t.clone());
        Cube::new(corner, self.side.clone())
    }

    /// Lexicographic key `(corner, side)` used for deterministic tie-breaks.
    pub fn lex_cmp(&self, other: &Cube) -> std::cmp::Ordering {
        self.corner
            .cmp(&other.corner)
            .then_with(|| self.side.cmp(&other.side))
    }

    /// Parse `c_0,c_1,...:side`, e.g. `0,0:1` or `1/3,0:2/3`.
    pub fn parse(text: &str, allow_decimal: bool) -> Result<Cube> {
        let (corner, side) = text
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("cube '{text}' must look like c0,c1,...:side")))?;
        let corner = corner
            .split(',')
            .map(|c| rational::parse(c, allow_decimal))
            .collect::<Result<Vec<_>>>()?;
        let side = rational::parse(side, allow_decimal)?;
        Cube::new(corner, side)
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corner: Vec<String> = self.corner.iter().map(rational::format).collect();
        write!(f, "{}:{}", corner.join(","), rational::format(&self.side))
    }
}

/// A validated disjoint couple `(F+, F-)` on a shared grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoupleJson", into = "CoupleJson")]
pub struct CoupleConfig {
    spec: GridSpec,
    f_plus: GridSet,
    f_minus: GridSet,
    vol_plus: Rational,
    vol_minus: Rational,
    vol_gap: Rational,
}

impl TryFrom<CoupleJson> for CoupleConfig {
    type Error = Error;
    fn try_from(json: CoupleJson) -> Result<Self> {
        CoupleConfig::from_json(&json)
    }
}

impl From<CoupleConfig> for CoupleJson {
    fn from(cfg: CoupleConfig) -> CoupleJson {
        cfg.to_json()
    }
}

/// On-disk form: `{"d":..,"m":..,"f_plus":[[i,j,..],..],"f_minus":[..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoupleJson {
    pub d: usize,
    pub m: u64,
    pub f_plus: Vec<Vec<u64>>,
    pub f_minus: Vec<Vec<u64>>,
}

impl CoupleConfig {
    pub fn new(f_plus: GridSet, f_minus: GridSet) -> Result<Self> {
        if f_plus.spec() != f_minus.spec() {
            return Err(Error::Invariant(format!(
                "F+ lives on {} but F- on {}",
                f_plus.spec(),
                f_minus.spec()
            )));
        }
        if f_plus.is_empty() || f_minus.is_empty() {
            return Err(Error::Invariant("both F+ and F- must be non-empty".into()));
        }
        if !f_plus.is_disjoint(&f_minus) {
            return Err(Error::Invariant("F+ and F- share a cell".into()));
        }
        let vol_plus = f_plus.volume();
        let vol_minus = f_minus.volume();
        let vol_gap = Rational::one() - &vol_plus - &vol_minus;
        Ok(CoupleConfig { spec: f_plus.spec(), f_plus, f_minus, vol_plus, vol_minus, vol_gap })
    }

    pub fn from_cells<C: AsRef<[u64]>>(
        spec: GridSpec,
        plus: impl IntoIterator<Item = C>,
        minus: impl IntoIterator<Item = C>,
    ) -> Result<Self> {
        Self::new(GridSet::new(spec, plus)?, GridSet::new(spec, minus)?)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn f_plus(&self) -> &GridSet {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &GridSet {
        &self.f_minus
    }

    pub fn vol_plus(&self) -> &Rational {
        &self.vol_plus
    }

    pub fn vol_minus(&self) -> &Rational {
        &self.vol_minus
    }

    pub fn vol_gap(&self) -> &Rational {
        &self.vol_gap
    }

    /// The couple with the roles of F+ and F- exchanged.
    pub fn swapped(&self) -> CoupleConfig {
        CoupleConfig {
            spec: self.spec,
            f_plus: self.f_minus.clone(),
            f_minus: self.f_plus.clone(),
            vol_plus: self.vol_minus.clone(),
            vol_minus: self.vol_plus.clone(),
            vol_gap: self.vol_gap.clone(),
        }
    }

    /// Per-cell labels in linear order: 0 gap, 1 plus, 2 minus.
    pub fn labels(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.spec.cell_count() as usize];
        for i in self.f_plus.iter_linear() {
            out[i as usize] = 1;
        }
        for i in self.f_minus.iter_linear() {
            out[i as usize] = 2;
        }
        out
    }

    pub fn from_labels(spec: GridSpec, labels: &[u8]) -> Result<Self> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match l {
                1 => plus.push(i as u64),
                2 => minus.push(i as u64),
                _ => {}
            }
        }
        Self::new(GridSet::from_linear(spec, plus)?, GridSet::from_linear(spec, minus)?)
    }

    pub fn refine(&self, factor: u64) -> Result<CoupleConfig> {
        Self::new(self.f_plus.refine(factor)?, self.f_minus.refine(factor)?)
    }

    pub fn to_json(&self) -> CoupleJson {
        CoupleJson {
            d: self.spec.d,
            m: self.spec.m,
            f_plus: self.f_plus.cells().collect(),
            f_minus: self.f_minus.cells().collect(),
        }
    }

    pub fn from_json(json: &CoupleJson) -> Result<Self> {
        let spec = GridSpec::new(json.d, json.m)?;
        Self::from_cells(spec, &json.f_plus, &json.f_minus)
    }

    /// Parse the JSON text form. Syntax errors are [`Error::Input`]; a
    /// well-formed document describing an invalid couple is an invariant error.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: CoupleJson = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("malformed config JSON: {e}")))?;
        Self::from_json(&json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("config serializes")
    }
}
