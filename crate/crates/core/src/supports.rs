//! Systems of supports: a family `S` of subsets of the coordinates together
//! with a finitely generated monoid `A_H ⊆ N0^{complement of H}` for each
//! `H ∈ S`. The presented monoid is the union of the images `ε_H(A_H)`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtVec, Fin, IndexSet, MAX_DIM};
use crate::hilbert::{find_order_unit, hilbert_basis, in_generated, HilbertBasis};
use crate::system::DioSystem;

/// Default box bound for fullness verification.
pub const DEFAULT_BOUND: u64 = 5;

/// Largest `s` for which a family of supports will be listed subset by subset.
pub const MATERIALIZE_LIMIT: usize = 16;

/// Largest box `(bound+1)^k` walked by [`monoid_is_full`].
pub const FULLNESS_BOX_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug)]
enum Family {
    Explicit(BTreeMap<IndexSet, HilbertBasis>),
    /// `∅` carries `base`; every superset of a member of `minimal` carries the free monoid.
    UpClosure { base: HilbertBasis, minimal: Vec<IndexSet> },
}

#[derive(Clone, Debug)]
pub struct SystemOfSupports {
    s: usize,
    unit: ExtVec,
    family: Family,
}

/// A failed condition of the definition of a system of supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: u8,
    pub detail: String,
}

impl Violation {
    fn new(condition: u8, detail: impl Into<String>) -> Violation {
        Violation { condition, detail: detail.into() }
    }
}

impl SystemOfSupports {
    /// An explicit family. Only shapes are checked here; see [`SystemOfSupports::validate`].
    pub fn new(s: usize, unit: ExtVec, monoids: BTreeMap<IndexSet, HilbertBasis>) -> Result<Self> {
        if s > MAX_DIM {
            return Err(Error::DimensionTooLarge(s));
        }
        check_dim(s, unit.len())?;
        for (h, basis) in &monoids {
            if !h.is_within(s) {
                return Err(Error::InvalidInput(format!("support {h} is not inside 1..={s}")));
            }
            check_dim(s - h.len(), basis.dim())?;
        }
        Ok(SystemOfSupports { s, unit, family: Family::Explicit(monoids) })
    }

    /// `∅ ↦ base`, and the free monoid on every superset of some member of `minimal`.
    pub(crate) fn up_closure(unit: ExtVec, base: HilbertBasis, minimal: Vec<IndexSet>) -> Self {
        let s = base.dim();
        let mut minimal: Vec<IndexSet> = minimal.into_iter().filter(|h| !h.is_empty()).collect();
        minimal.sort();
        minimal.dedup();
        let keep: Vec<IndexSet> = minimal
            .iter()
            .copied()
            .filter(|h| !minimal.iter().any(|k| k != h && k.is_subset(*h)))
            .collect();
        SystemOfSupports { s, unit, family: Family::UpClosure { base, minimal: keep } }
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn unit(&self) -> &ExtVec {
        &self.unit
    }

    pub fn contains_support(&self, h: IndexSet) -> bool {
        match &self.family {
            Family::Explicit(map) => map.contains_key(&h),
            Family::UpClosure { minimal, .. } => {
                h.is_within(self.s) && (h.is_empty() || minimal.iter().any(|k| k.is_subset(h)))
            }
        }
    }

    /// The generators of `A_H`, or `None` when `H ∉ S`.
    pub fn basis(&self, h: IndexSet) -> Option<Cow<'_, HilbertBasis>> {
        match &self.family {
            Family::Explicit(map) => map.get(&h).map(Cow::Borrowed),
            Family::UpClosure { base, .. } => {
                if h.is_empty() {
                    Some(Cow::Borrowed(base))
                } else if self.contains_support(h) {
                    Some(Cow::Owned(HilbertBasis::free(self.s - h.len())))
                } else {
                    None
                }
            }
        }
    }

    /// Every member of `S`, in canonical order.
    pub fn supports(&self) -> Result<Vec<IndexSet>> {
        match &self.family {
            Family::Explicit(map) => Ok(map.keys().copied().collect()),
            Family::UpClosure { .. } => {
                if self.s > MATERIALIZE_LIMIT {
                    return Err(Error::ResourceCap(format!(
                        "listing up to 2^{} supports exceeds the limit of 2^{MATERIALIZE_LIMIT}",
                        self.s
                    )));
                }
                let mut all: Vec<IndexSet> =
                    IndexSet::all_subsets(self.s).filter(|h| self.contains_support(*h)).collect();
                all.sort();
                Ok(all)
            }
        }
    }

    /// The inclusion-minimal members of `S ∖ {∅}`, in canonical order.
    pub fn minimal_nonempty_supports(&self) -> Result<Vec<IndexSet>> {
        match &self.family {
            Family::UpClosure { minimal, .. } => Ok(minimal.clone()),
            Family::Explicit(map) => {
                let nonempty: Vec<IndexSet> = map.keys().copied().filter(|h| !h.is_empty()).collect();
                Ok(nonempty
                    .iter()
                    .copied()
                    .filter(|h| !nonempty.iter().any(|k| k != h && k.is_subset(*h)))
                    .collect())
            }
        }
    }

    /// Lists every `(H, A_H)` explicitly.
    pub fn entries(&self) -> Result<Vec<(IndexSet, HilbertBasis)>> {
        self.supports()?
            .into_iter()
            .map(|h| Ok((h, self.basis(h).expect("listed support").into_owned())))
            .collect()
    }

    /// The four defining conditions, checked on generators.
    pub fn validate(&self) -> Result<Vec<Violation>> {
        let entries = self.entries()?;
        let map: BTreeMap<IndexSet, &HilbertBasis> = entries.iter().map(|(h, b)| (*h, b)).collect();
        let s = self.s;
        let mut out = Vec::new();

        match map.get(&IndexSet::EMPTY) {
            None => out.push(Violation::new(1, "the empty set is not a support")),
            Some(base) => {
                if !self.unit.is_strictly_positive_finite() {
                    out.push(Violation::new(1, format!("unit {} is not strictly positive and finite", self.unit)));
                } else if !base.contains(&self.unit)? {
                    out.push(Violation::new(1, format!("unit {} is not in A_{{}}", self.unit)));
                }
            }
        }

        for (h, basis) in &map {
            if basis.dim() != s - h.len() {
                out.push(Violation::new(2, format!("A_{h} has dimension {} instead of {}", basis.dim(), s - h.len())));
            }
        }

        let full = IndexSet::full(s);
        match map.get(&full) {
            None => out.push(Violation::new(3, format!("the full set {full} is not a support"))),
            Some(b) if !b.is_empty() => out.push(Violation::new(3, format!("A_{full} is not trivial"))),
            _ => {}
        }
        let keys: Vec<IndexSet> = map.keys().copied().collect();
        for (i, &h) in keys.iter().enumerate() {
            for &k in &keys[i + 1..] {
                if !map.contains_key(&h.union(k)) {
                    out.push(Violation::new(3, format!("{} = {h} ∪ {k} is not a support", h.union(k))));
                }
            }
        }
        for (&h, basis) in &map {
            for g in basis.gens() {
                let grown = h.union(embed_zero(g, h, s).support());
                if !map.contains_key(&grown) {
                    out.push(Violation::new(3, format!("{grown} = {h} ∪ supp({g}) is not a support")));
                }
            }
        }

        for (&h, basis_h) in &map {
            for (&k, basis_k) in &map {
                if h == k || !h.is_subset(k) {
                    continue;
                }
                for g in basis_h.gens() {
                    let image = embed_zero(g, h, s).project(k);
                    if !basis_k.contains(&image)? {
                        out.push(Violation::new(4, format!("projection of {g} from A_{h} is not in A_{k}")));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conversion to an explicit family, for comparison and output.
    pub fn to_explicit(&self) -> Result<SystemOfSupports> {
        let map = self.entries()?.into_iter().collect();
        Ok(SystemOfSupports { s: self.s, unit: self.unit.clone(), family: Family::Explicit(map) })
    }
}

impl PartialEq for SystemOfSupports {
    /// Equal families and monoids; the stored order-unit is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s
            && match (self.entries(), other.entries()) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
    }
}

/// Places `x` (indexed by the complement of `h`) into `N0^s` with zeros on `h`.
pub(crate) fn embed_zero(x: &ExtVec, h: IndexSet, s: usize) -> ExtVec {
    let mut rest = x.iter();
    ExtVec::new(
        (0..s)
            .map(|i| if h.contains(i) { Fin(0) } else { *rest.next().expect("complement length") })
            .collect(),
    )
}

/// Whether some solution has `∞`-support exactly `h`, assuming an order-unit.
///
/// Per equation row: either both sides vanish on `h`, or both are nonzero
/// somewhere on `h`. Congruences never obstruct.
pub fn is_infinite_support(sys: &DioSystem, h: IndexSet) -> bool {
    h.is_within(sys.dim())
        && sys.f().iter().zip(sys.g()).all(|(fr, gr)| {
            let meets = |row: &Vec<u64>| h.iter().any(|j| row[j] != 0);
            meets(fr) == meets(gr)
        })
}

/// The set of `∞`-supports of the solution monoid.
pub fn infinite_supports(sys: &DioSystem) -> Result<BTreeSet<IndexSet>> {
    if find_order_unit(sys)?.is_none() {
        return Err(Error::NoOrderUnit);
    }
    candidate_supports(sys)
}

fn candidate_supports(sys: &DioSystem) -> Result<BTreeSet<IndexSet>> {
    if sys.dim() > MATERIALIZE_LIMIT {
        return Err(Error::ResourceCap(format!(
            "enumerating 2^{} candidate supports exceeds the limit of 2^{MATERIALIZE_LIMIT}",
            sys.dim()
        )));
    }
    Ok(IndexSet::all_subsets(sys.dim()).filter(|h| is_infinite_support(sys, *h)).collect())
}

/// The system over the complement of `h` whose finite solutions form `A_H`.
pub fn subsystem_for(sys: &DioSystem, h: IndexSet) -> Result<DioSystem> {
    if !is_infinite_support(sys, h) {
        return Err(Error::NotAnInfiniteSupport(h.to_string()));
    }
    let meets = |row: &Vec<u64>| h.iter().any(|j| row[j] != 0);
    let keep_cols = |row: &Vec<u64>| -> Vec<u64> {
        row.iter().enumerate().filter(|(j, _)| !h.contains(*j)).map(|(_, &v)| v).collect()
    };
    let mut f = Vec::new();
    let mut g = Vec::new();
    for (fr, gr) in sys.f().iter().zip(sys.g()) {
        if !meets(fr) && !meets(gr) {
            f.push(keep_cols(fr));
            g.push(keep_cols(gr));
        }
    }
    let mut d = Vec::new();
    let mut moduli = Vec::new();
    for (dr, &m) in sys.d().iter().zip(sys.moduli()) {
        if !meets(dr) {
            d.push(keep_cols(dr));
            moduli.push(m);
        }
    }
    DioSystem::new(sys.dim() - h.len(), f, g, d, moduli)
}

/// The system of supports presenting the solution monoid of `sys`.
pub fn extract(sys: &DioSystem) -> Result<SystemOfSupports> {
    let base = hilbert_basis(sys)?;
    let unit = base.order_unit().ok_or(Error::NoOrderUnit)?;
    let family = candidate_supports(sys)?;
    let mut cache: HashMap<DioSystem, HilbertBasis> = HashMap::from([(sys.clone(), base)]);
    let mut map = BTreeMap::new();
    for h in family {
        let sub = subsystem_for(sys, h)?;
        let basis = match cache.get(&sub) {
            Some(b) => b.clone(),
            None => {
                let b = hilbert_basis(&sub)?;
                cache.insert(sub, b.clone());
                b
            }
        };
        map.insert(h, basis);
    }
    SystemOfSupports::new(sys.dim(), unit, map)
}

/// Membership in the monoid presented by `sos`.
pub fn member_via_supports(sos: &SystemOfSupports, x: &ExtVec) -> Result<bool> {
    check_dim(sos.dim(), x.len())?;
    let h = x.inf_support();
    match sos.basis(h) {
        None => Ok(false),
        Some(basis) => in_generated(basis.gens(), &x.project(h)),
    }
}

/// A minimal `N0*`-generating set of the presented monoid, in canonical order.
pub fn generators(sos: &SystemOfSupports) -> Result<Vec<ExtVec>> {
    let s = sos.dim();
    let mut cands = Vec::new();
    for (h, basis) in sos.entries()? {
        cands.push(ExtVec::inject(&ExtVec::zeros(s - h.len()), h, s)?);
        for g in basis.gens() {
            cands.push(ExtVec::inject(g, h, s)?);
        }
    }
    Ok(minimize_generators(cands))
}

/// Drops zeros and duplicates, then removes, from the largest down, every
/// vector lying in the `N0*`-span of the rest.
pub fn minimize_generators(mut gens: Vec<ExtVec>) -> Vec<ExtVec> {
    gens.retain(|g| !g.is_zero());
    gens.sort();
    gens.dedup();
    let mut k = gens.len();
    while k > 0 {
        k -= 1;
        let g = gens.remove(k);
        if !in_generated(&gens, &g).unwrap_or(false) {
            gens.insert(k, g);
        }
    }
    gens
}

/// Whether `c - a ∈ ⟨basis⟩` whenever `a ≤ c` both lie in `⟨basis⟩`, checked
/// for all `c` in the box `{0..bound}^k`.
///
/// Testing `a` against generators only suffices: peel one generator at a time.
pub fn monoid_is_full(basis: &HilbertBasis, bound: u64) -> Result<bool> {
    let k = basis.dim();
    if k == 0 || basis.is_free() {
        return Ok(true);
    }
    let side = bound + 1;
    let total = (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(side).filter(|&t| t <= FULLNESS_BOX_LIMIT))
        .ok_or_else(|| {
            Error::ResourceCap(format!("fullness box ({bound}+1)^{k} exceeds {FULLNESS_BOX_LIMIT} points"))
        })? as usize;
    let side_us = side as usize;
    let gens: Vec<(Vec<u64>, usize)> = basis
        .gens()
        .iter()
        .map(|g| g.finite_values().expect("finite basis"))
        .filter(|g| g.iter().all(|&v| v <= bound))
        .map(|g| {
            let offset = g.iter().fold(0usize, |acc, &v| acc * side_us + v as usize);
            (g, offset)
        })
        .collect();

    // Box points in mixed-radix order, so `c - g` always precedes `c`.
    let mut member = vec![false; total];
    member[0] = true;
    let mut c = vec![0u64; k];
    for idx in 1..total {
        for slot in c.iter_mut().rev() {
            *slot += 1;
            if *slot < side {
                break;
            }
            *slot = 0;
        }
        let mut any = false;
        let mut all = true;
        for (g, off) in &gens {
            if g.iter().zip(&c).all(|(a, b)| a <= b) {
                if member[idx - off] {
                    any = true;
                } else {
                    all = false;
                }
            }
        }
        if any && !all {
            return Ok(false);
        }
        member[idx] = any;
    }
    Ok(true)
}

/// Every `A_H` is full, verified on boxes of side `bound`.
pub fn is_full(sos: &SystemOfSupports, bound: u64) -> Result<bool> {
    for (_, basis) in sos.entries()? {
        if !monoid_is_full(&basis, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A_∅` is full and every minimal nonempty support carries the free monoid.
pub fn is_almost_free(sos: &SystemOfSupports, bound: u64) -> Result<bool> {
    let Some(base) = sos.basis(IndexSet::EMPTY) else {
        return Ok(false);
    };
    Ok(monoid_is_full(&base, bound)? && minimal_supports_free(sos)?)
}

/// Every minimal nonempty support carries the free monoid.
pub fn minimal_supports_free(sos: &SystemOfSupports) -> Result<bool> {
    for h in sos.minimal_nonempty_supports()? {
        if !sos.basis(h).expect("listed support").is_free() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The system of supports of the monoid `N0*`-generated by `gens`.
///
/// Its supports are the unions of the supports and `∞`-supports of the
/// generators; `A_H` is generated by the projections of the generators whose
/// `∞`-support lies in `H`. Fails when some `ε_H(0)` is not generated, since
/// then the monoid is not given by a system of supports.
pub fn from_generators(s: usize, gens: &[ExtVec]) -> Result<SystemOfSupports> {
    if s > MATERIALIZE_LIMIT {
        return Err(Error::ResourceCap(format!("dimension {s} exceeds {MATERIALIZE_LIMIT} for support enumeration")));
    }
    for g in gens {
        check_dim(s, g.len())?;
    }
    let mut family: BTreeSet<IndexSet> = BTreeSet::from([IndexSet::EMPTY]);
    for g in gens {
        for piece in [g.support(), g.inf_support()] {
            let grown: Vec<IndexSet> = family.iter().map(|h| h.union(piece)).collect();
            family.extend(grown);
        }
    }
    let mut map = BTreeMap::new();
    for h in family {
        let marker = ExtVec::inject(&ExtVec::zeros(s - h.len()), h, s)?;
        if !in_generated(gens, &marker)? {
            return Err(Error::InvalidInput(format!(
                "{marker} is not generated, so the monoid has no system of supports"
            )));
        }
        let projected = gens
            .iter()
            .filter(|g| g.inf_support().is_subset(h))
            .map(|g| g.project(h))
            .collect();
        map.insert(h, HilbertBasis::from_generators(s - h.len(), projected)?);
    }
    let unit = map[&IndexSet::EMPTY].order_unit().ok_or(Error::NoOrderUnit)?;
    SystemOfSupports::new(s, unit, map)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    #[serde(rename = "H")]
    h: Vec<usize>,
    basis: Vec<ExtVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SosRepr {
    s: usize,
    unit: ExtVec,
    supports: Vec<EntryRepr>,
}

impl Serialize for SystemOfSupports {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries().map_err(serde::ser::Error::custom)?;
        SosRepr {
            s: self.s,
            unit: self.unit.clone(),
            supports: entries
                .into_iter()
                .map(|(h, b)| EntryRepr { h: h.to_one_based(), basis: b.gens().to_vec() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SystemOfSupports {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SosRepr::deserialize(deserializer)?;
        let build = || -> Result<SystemOfSupports> {
            let mut map = BTreeMap::new();
            for e in repr.supports {
                let h = IndexSet::from_one_based(repr.s, &e.h)?;
                let basis = HilbertBasis::from_generators(repr.s - h.len(), e.basis)?;
                if map.insert(h, basis).is_some() {
                    return Err(Error::InvalidInput(format!("support {h} listed twice")));
                }
            }
            SystemOfSupports::new(repr.s, repr.unit, map)
        };
        build().map_err(serde::de::Error::custom)
    }
}
