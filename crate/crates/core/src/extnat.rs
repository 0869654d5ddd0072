//! The semiring `N0* = N0 ∪ {∞}` and tuples over it.
//!
//! Addition and multiplication follow the usual conventions for an absorbing
//! infinity, except that `0 · ∞ = ∞ · 0 = 0`. Finite values are `u64`; any
//! overflow is reported as [`Error::Overflow`] by the checked operations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// Largest supported number of coordinates.
pub const MAX_DIM: usize = 24;

/// An element of `N0*`.
///
/// The derived order puts every finite value below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub use ExtNat::{Fin, Inf};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);
    pub const ONE: ExtNat = Fin(1);

    pub fn is_zero(self) -> bool {
        self == Fin(0)
    }

    pub fn is_inf(self) -> bool {
        self == Inf
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(v) => Some(v),
            Inf => None,
        }
    }

    pub fn checked_add(self, other: ExtNat) -> Result<ExtNat> {
        match (self, other) {
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin).ok_or(Error::Overflow),
            _ => Ok(Inf),
        }
    }

    pub fn checked_mul(self, other: ExtNat) -> Result<ExtNat> {
        match (self, other) {
            (Fin(a), Fin(b)) => a.checked_mul(b).map(Fin).ok_or(Error::Overflow),
            (Fin(0), Inf) | (Inf, Fin(0)) => Ok(Fin(0)),
            _ => Ok(Inf),
        }
    }

    /// Whether `self` lies in `m·N0*`, i.e. is `∞` or a finite multiple of `m`.
    pub fn is_multiple_of(self, m: u64) -> bool {
        match self {
            Inf => true,
            Fin(v) => v == 0 || (m != 0 && v % m == 0),
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        Fin(v)
    }
}

/// Panics on overflow; use [`ExtNat::checked_add`] where inputs are untrusted.
impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        self.checked_add(rhs).expect("ExtNat addition overflowed")
    }
}

/// Panics on overflow; use [`ExtNat::checked_mul`] where inputs are untrusted.
impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        self.checked_mul(rhs).expect("ExtNat multiplication overflowed")
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(v) => write!(f, "{v}"),
            Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtNat> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Inf);
        }
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not an extended natural: {s:?}")));
        }
        t.parse::<u64>()
            .map(Fin)
            .map_err(|_| Error::Parse(format!("value out of range: {s:?}")))
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Fin(v) => serializer.serialize_u64(*v),
            Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtNat, E> {
                Ok(Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtNat, E> {
                u64::try_from(v)
                    .map(Fin)
                    .map_err(|_| E::custom(format!("negative value {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtNat, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

/// A subset of the coordinates `{0, …, s-1}`, stored as a bitmask.
///
/// Externally (JSON, display) members are numbered from 1. The order is by
/// cardinality first, then lexicographic on the sorted member lists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_mask(mask: u32) -> IndexSet {
        IndexSet(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// `{0, …, s-1}`.
    pub fn full(s: usize) -> IndexSet {
        assert!(s <= MAX_DIM);
        IndexSet(((1u64 << s) - 1) as u32)
    }

    pub fn singleton(i: usize) -> IndexSet {
        assert!(i < MAX_DIM);
        IndexSet(1 << i)
    }

    /// Builds a set from zero-based indices, all of which must be below `s`.
    pub fn from_indices(s: usize, indices: impl IntoIterator<Item = usize>) -> Result<IndexSet> {
        let mut mask = 0u32;
        for i in indices {
            if i >= s {
                return Err(Error::InvalidInput(format!("index {} out of range 1..={s}", i + 1)));
            }
            mask |= 1 << i;
        }
        Ok(IndexSet(mask))
    }

    /// Builds a set from one-based indices.
    pub fn from_one_based(s: usize, indices: &[usize]) -> Result<IndexSet> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > s) {
            return Err(Error::InvalidInput(format!("index {bad} out of range 1..={s}")));
        }
        IndexSet::from_indices(s, indices.iter().map(|i| i - 1))
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn complement(self, s: usize) -> IndexSet {
        IndexSet::full(s).difference(self)
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_within(self, s: usize) -> bool {
        self.is_subset(IndexSet::full(s))
    }

    /// Zero-based members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    /// All subsets of `{0, …, s-1}` in increasing mask order.
    pub fn all_subsets(s: usize) -> impl Iterator<Item = IndexSet> {
        assert!(s <= MAX_DIM);
        (0..(1u32 << s)).map(IndexSet)
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                // the lowest differing member belongs to self
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

/// A tuple in `(N0*)^s`. The length is fixed at construction.
///
/// Ordered lexicographically, left to right, with finite values below `∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtVec(Vec<ExtNat>);

impl ExtVec {
    pub fn new(entries: Vec<ExtNat>) -> ExtVec {
        ExtVec(entries)
    }

    pub fn zeros(s: usize) -> ExtVec {
        ExtVec(vec![Fin(0); s])
    }

    pub fn from_finite(values: &[u64]) -> ExtVec {
        ExtVec(values.iter().map(|&v| Fin(v)).collect())
    }

    /// The vector with `∞` on `h` and `0` elsewhere.
    pub fn indicator(s: usize, h: IndexSet) -> ExtVec {
        ExtVec((0..s).map(|i| if h.contains(i) { Inf } else { Fin(0) }).collect())
    }

    /// The `i`-th unit vector of `N0^s` (zero-based `i`).
    pub fn unit(s: usize, i: usize) -> ExtVec {
        let mut v = ExtVec::zeros(s);
        v.0[i] = Fin(1);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[ExtNat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<ExtNat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtNat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| !x.is_inf())
    }

    /// Every coordinate finite and strictly positive.
    pub fn is_strictly_positive_finite(&self) -> bool {
        self.0.iter().all(|x| matches!(x, Fin(v) if *v > 0))
    }

    /// The finite coordinates, if there is no `∞`.
    pub fn finite_values(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|x| x.finite()).collect()
    }

    pub fn checked_add(&self, other: &ExtVec) -> Result<ExtVec> {
        check_dim(self.len(), other.len())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Result<Vec<_>>>()
            .map(ExtVec)
    }

    pub fn scale(&self, c: ExtNat) -> Result<ExtVec> {
        self.0.iter().map(|x| c.checked_mul(*x)).collect::<Result<Vec<_>>>().map(ExtVec)
    }

    /// `supp(x) = {i | x_i ≠ 0}`.
    pub fn support(&self) -> IndexSet {
        let mut h = IndexSet::EMPTY;
        for (i, x) in self.0.iter().enumerate() {
            if !x.is_zero() {
                h.insert(i);
            }
        }
        h
    }

    /// `∞-supp(x) = {i | x_i = ∞}`.
    pub fn inf_support(&self) -> IndexSet {
        let mut h = IndexSet::EMPTY;
        for (i, x) in self.0.iter().enumerate() {
            if x.is_inf() {
                h.insert(i);
            }
        }
        h
    }

    /// `(supp(x), ∞-supp(x))`.
    pub fn supports(&self) -> (IndexSet, IndexSet) {
        (self.support(), self.inf_support())
    }

    /// Whether `x + z = y` for some `z ∈ (N0*)^s`.
    pub fn divides(&self, y: &ExtVec) -> Result<bool> {
        check_dim(self.len(), y.len())?;
        Ok(self.0.iter().zip(&y.0).all(|(a, b)| match (a, b) {
            (_, Inf) => true,
            (Fin(a), Fin(b)) => a <= b,
            (Inf, Fin(_)) => false,
        }))
    }

    /// Drops the coordinates in `h`.
    pub fn project(&self, h: IndexSet) -> ExtVec {
        ExtVec(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !h.contains(*i))
                .map(|(_, x)| *x)
                .collect(),
        )
    }

    /// Places `∞` on `h` and the entries of `x` (in order) on the complement.
    pub fn inject(x: &ExtVec, h: IndexSet, s: usize) -> Result<ExtVec> {
        if !h.is_within(s) {
            return Err(Error::InvalidInput(format!("{h} is not a subset of 1..={s}")));
        }
        check_dim(s - h.len(), x.len())?;
        let mut rest = x.0.iter();
        Ok(ExtVec(
            (0..s)
                .map(|i| if h.contains(i) { Inf } else { *rest.next().unwrap() })
                .collect(),
        ))
    }
}

impl std::ops::Index<usize> for ExtVec {
    type Output = ExtNat;

    fn index(&self, i: usize) -> &ExtNat {
        &self.0[i]
    }
}

impl From<Vec<ExtNat>> for ExtVec {
    fn from(v: Vec<ExtNat>) -> Self {
        ExtVec(v)
    }
}

impl fmt::Display for ExtVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Parses the comma-separated text encoding, e.g. `"1,inf,0"`.
impl FromStr for ExtVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtVec> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        t.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(ExtVec)
    }
}

/// `a + b` in `N0*`.
pub fn add(a: ExtNat, b: ExtNat) -> Result<ExtNat> {
    a.checked_add(b)
}

/// `a · b` in `N0*`.
pub fn mul(a: ExtNat, b: ExtNat) -> Result<ExtNat> {
    a.checked_mul(b)
}

/// Componentwise sum.
pub fn vec_add(x: &ExtVec, y: &ExtVec) -> Result<ExtVec> {
    x.checked_add(y)
}

/// Scalar multiple `c · x`.
pub fn scale(c: ExtNat, x: &ExtVec) -> Result<ExtVec> {
    x.scale(c)
}
