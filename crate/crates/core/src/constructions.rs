//! Monoids built from a finite part `A ⊆ N0^s`: `A + ∞·A`, the least and
//! greatest almost-free extensions, sums, and binary direct sums.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtVec, Inf, IndexSet};
use crate::hilbert::HilbertBasis;
use crate::supports::{from_generators, minimize_generators, SystemOfSupports};

/// Basis size beyond which [`decompose_direct_sum`] refuses to search.
pub const DECOMPOSE_CAP: usize = 20;

fn order_unit(basis: &HilbertBasis) -> Result<ExtVec> {
    basis.order_unit().ok_or(Error::NoOrderUnit)
}

/// `{a₁ + ∞·a₂ : a₁, a₂ ∈ ⟨basis⟩}`.
pub fn a_plus_inf_a(basis: &HilbertBasis) -> Result<SystemOfSupports> {
    order_unit(basis)?;
    let mut gens = basis.gens().to_vec();
    for g in basis.gens() {
        gens.push(g.scale(Inf)?);
    }
    from_generators(basis.dim(), &gens)
}

/// Supports: `∅` and every superset of a generator support; free monoids off `∅`.
pub fn b_min(basis: &HilbertBasis) -> Result<SystemOfSupports> {
    let unit = order_unit(basis)?;
    let minimal = basis.gens().iter().map(|g| g.support()).collect();
    Ok(SystemOfSupports::up_closure(unit, basis.clone(), minimal))
}

/// Supports: every subset; free monoids off `∅`.
pub fn b_max(basis: &HilbertBasis) -> Result<SystemOfSupports> {
    let unit = order_unit(basis)?;
    let minimal = (0..basis.dim()).map(IndexSet::singleton).collect();
    Ok(SystemOfSupports::up_closure(unit, basis.clone(), minimal))
}

/// Generators of the sum of two finitely generated submonoids of `(N0*)^s`.
pub fn sum(m1: &[ExtVec], m2: &[ExtVec]) -> Result<Vec<ExtVec>> {
    let s = m1.first().or(m2.first()).map(|g| g.len()).unwrap_or(0);
    for g in m1.iter().chain(m2) {
        check_dim(s, g.len())?;
    }
    Ok(minimize_generators(m1.iter().chain(m2).cloned().collect()))
}

/// The system of supports of the sum, failing if the sum has none.
pub fn sum_system(s: usize, m1: &[ExtVec], m2: &[ExtVec]) -> Result<SystemOfSupports> {
    let gens = sum(m1, m2)?;
    for g in &gens {
        check_dim(s, g.len())?;
    }
    from_generators(s, &gens)
}

/// `A ≅ B1 × B2` embedded via `h(b1,b2) = ε1(b1) + ε3(f1(b1)) + ε2(b2) + ε3(f2(b2))`.
///
/// `b1[k]` lives on the coordinates `i1` and `f1[k]` on `i3`; likewise for the
/// second factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumData {
    s: usize,
    i1: IndexSet,
    i2: IndexSet,
    i3: IndexSet,
    b1: Vec<ExtVec>,
    b2: Vec<ExtVec>,
    f1: Vec<ExtVec>,
    f2: Vec<ExtVec>,
}

impl DirectSumData {
    pub fn new(
        i1: IndexSet,
        i2: IndexSet,
        i3: IndexSet,
        b1: Vec<ExtVec>,
        f1: Vec<ExtVec>,
        b2: Vec<ExtVec>,
        f2: Vec<ExtVec>,
    ) -> Result<DirectSumData> {
        let s = i1.len() + i2.len() + i3.len();
        if !i1.is_disjoint(i2) || !i1.is_disjoint(i3) || !i2.is_disjoint(i3) {
            return Err(Error::InvalidInput("I1, I2, I3 must be pairwise disjoint".into()));
        }
        if i1.union(i2).union(i3) != IndexSet::full(s) {
            return Err(Error::InvalidInput(format!("I1, I2, I3 must partition 1..={s}")));
        }
        if i1.is_empty() || i2.is_empty() {
            return Err(Error::InvalidInput("I1 and I2 must be nonempty".into()));
        }
        for (name, b, f, dim) in [("1", &b1, &f1, i1.len()), ("2", &b2, &f2, i2.len())] {
            if b.len() != f.len() {
                return Err(Error::InvalidInput(format!(
                    "B{name} has {} generators but f{name} has {} rows",
                    b.len(),
                    f.len()
                )));
            }
            for (g, img) in b.iter().zip(f) {
                check_dim(dim, g.len())?;
                check_dim(i3.len(), img.len())?;
                if !g.is_finite() || !img.is_finite() || g.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "B{name} generators must be nonzero and finite, f{name} images finite"
                    )));
                }
            }
            if !extends_linearly(b, f) {
                return Err(Error::InvalidInput(format!(
                    "f{name} does not respect the relations among the generators of B{name}"
                )));
            }
        }
        Ok(DirectSumData { s, i1, i2, i3, b1, b2, f1, f2 })
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn partition(&self) -> (IndexSet, IndexSet, IndexSet) {
        (self.i1, self.i2, self.i3)
    }

    pub fn b1(&self) -> &[ExtVec] {
        &self.b1
    }

    pub fn b2(&self) -> &[ExtVec] {
        &self.b2
    }

    pub fn f1(&self) -> &[ExtVec] {
        &self.f1
    }

    pub fn f2(&self) -> &[ExtVec] {
        &self.f2
    }

    /// `supp(f1(B1)) ∪ supp(f2(B2)) = I3`.
    pub fn support_condition(&self) -> bool {
        let hit = self
            .f1
            .iter()
            .chain(&self.f2)
            .fold(IndexSet::EMPTY, |acc, img| acc.union(img.support()));
        hit == IndexSet::full(self.i3.len())
    }

    fn embed(&self, on: IndexSet, part: &ExtVec, img: &ExtVec) -> ExtVec {
        let mut out = ExtVec::zeros(self.s).into_entries();
        for (slot, v) in on.iter().zip(part.iter()) {
            out[slot] = *v;
        }
        for (slot, v) in self.i3.iter().zip(img.iter()) {
            out[slot] = *v;
        }
        ExtVec::new(out)
    }
}

/// Whether `g ↦ f(g)` extends to a homomorphism on the monoid the `g` generate:
/// appending the images must not raise the rational rank.
fn extends_linearly(gens: &[ExtVec], images: &[ExtVec]) -> bool {
    let cols: Vec<Vec<i128>> = gens.iter().map(|g| finite_i128(g)).collect();
    let stacked: Vec<Vec<i128>> = gens
        .iter()
        .zip(images)
        .map(|(g, f)| finite_i128(g).into_iter().chain(finite_i128(f)).collect())
        .collect();
    rank(&cols) == rank(&stacked)
}

fn finite_i128(x: &ExtVec) -> Vec<i128> {
    x.iter().map(|v| v.finite().expect("finite vector") as i128).collect()
}

/// Rank of the matrix whose rows are `rows`, by fraction-free elimination.
fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let width = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let g = gcd(a.unsigned_abs(), b.unsigned_abs()) as i128;
            for j in c..width {
                m[i][j] = m[i][j] * (a / g) - m[r][j] * (b / g);
            }
            let content = m[i].iter().fold(0u128, |acc, &v| gcd(acc, v.unsigned_abs()));
            if content > 1 {
                for v in m[i].iter_mut() {
                    *v /= content as i128;
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The Hilbert basis of `h(B1 × B2)`.
///
/// With `require_order_unit`, fails unless the image has one, which happens
/// exactly when the support condition holds and each `B_i` has one.
pub fn compose_direct_sum(d: &DirectSumData, require_order_unit: bool) -> Result<HilbertBasis> {
    let mut gens = Vec::new();
    for (g, img) in d.b1.iter().zip(&d.f1) {
        gens.push(d.embed(d.i1, g, img));
    }
    for (g, img) in d.b2.iter().zip(&d.f2) {
        gens.push(d.embed(d.i2, g, img));
    }
    let basis = HilbertBasis::from_generators(d.s, gens)?;
    if require_order_unit && basis.order_unit().is_none() {
        return Err(Error::NoOrderUnit);
    }
    Ok(basis)
}

/// Searches splittings of the basis into two groups whose generated monoids
/// sum directly to `⟨basis⟩`.
///
/// Groups are tried in increasing bitmask order with the first generator in
/// the first group, and the first success is returned. A split works when the
/// coordinates private to each group are nonempty and each group's monoid is
/// determined by its private coordinates; the shared coordinates then carry the
/// maps `f_i`.
pub fn decompose_direct_sum(basis: &HilbertBasis) -> Result<Option<DirectSumData>> {
    let n = basis.len();
    if n > DECOMPOSE_CAP {
        return Err(Error::ResourceCap(format!(
            "direct-sum search over {n} generators exceeds the cap of {DECOMPOSE_CAP}"
        )));
    }
    if n < 2 {
        return Ok(None);
    }
    let s = basis.dim();
    let gens = basis.gens();
    let supports: Vec<IndexSet> = gens.iter().map(|g| g.support()).collect();
    let union_of = |mask: u32, want: bool| {
        (0..n)
            .filter(|&k| (mask >> k & 1 == 1) == want)
            .fold(IndexSet::EMPTY, |acc, k| acc.union(supports[k]))
    };
    for mask in (1u32..(1 << n) - 1).filter(|m| m & 1 == 1) {
        let supp1 = union_of(mask, true);
        let supp2 = union_of(mask, false);
        let i1 = supp1.difference(supp2);
        let i2 = supp2.difference(supp1);
        let i3 = supp1.intersection(supp2);
        if i1.is_empty() || i2.is_empty() || i1.union(i2).union(i3) != IndexSet::full(s) {
            continue;
        }
        let restrict = |g: &ExtVec, on: IndexSet| ExtVec::new(on.iter().map(|i| g[i]).collect());
        let mut first: Vec<(ExtVec, ExtVec)> = Vec::new();
        let mut second: Vec<(ExtVec, ExtVec)> = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                first.push((restrict(g, i1), restrict(g, i3)));
            } else {
                second.push((restrict(g, i2), restrict(g, i3)));
            }
        }
        first.sort();
        second.sort();
        let (b1, f1): (Vec<_>, Vec<_>) = first.into_iter().unzip();
        let (b2, f2): (Vec<_>, Vec<_>) = second.into_iter().unzip();
        if !extends_linearly(&b1, &f1) || !extends_linearly(&b2, &f2) {
            continue;
        }
        return DirectSumData::new(i1, i2, i3, b1, f1, b2, f2).map(Some);
    }
    Ok(None)
}

/// Each factor is free and every generator image has support all of `I3`.
pub fn decomposed_almost_free(d: &DirectSumData) -> bool {
    let full3 = IndexSet::full(d.i3.len());
    let free = |b: &[ExtVec], dim: usize| {
        HilbertBasis::from_generators(dim, b.to_vec()).map(|h| h.is_free()).unwrap_or(false)
    };
    free(&d.b1, d.i1.len())
        && free(&d.b2, d.i2.len())
        && d.f1.iter().chain(&d.f2).all(|img| img.support() == full3)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectSumRepr {
    #[serde(rename = "I1")]
    i1: Vec<usize>,
    #[serde(rename = "I2")]
    i2: Vec<usize>,
    #[serde(rename = "I3")]
    i3: Vec<usize>,
    #[serde(rename = "B1")]
    b1: Vec<ExtVec>,
    #[serde(rename = "B2")]
    b2: Vec<ExtVec>,
    f1: Vec<ExtVec>,
    f2: Vec<ExtVec>,
}

impl Serialize for DirectSumData {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DirectSumRepr {
            i1: self.i1.to_one_based(),
            i2: self.i2.to_one_based(),
            i3: self.i3.to_one_based(),
            b1: self.b1.clone(),
            b2: self.b2.clone(),
            f1: self.f1.clone(),
            f2: self.f2.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirectSumData {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = DirectSumRepr::deserialize(deserializer)?;
        let s = r.i1.len() + r.i2.len() + r.i3.len();
        let build = || -> Result<DirectSumData> {
            DirectSumData::new(
                IndexSet::from_one_based(s, &r.i1)?,
                IndexSet::from_one_based(s, &r.i2)?,
                IndexSet::from_one_based(s, &r.i3)?,
                r.b1,
                r.f1,
                r.b2,
                r.f2,
            )
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::{is_almost_free, member_via_supports, DEFAULT_BOUND};
    use crate::system::truncated_domain;

    fn v(s: &str) -> ExtVec {
        s.parse().unwrap()
    }

    fn vs(list: &[&str]) -> Vec<ExtVec> {
        list.iter().map(|s| v(s)).collect()
    }

    fn set(s: usize, idx: &[usize]) -> IndexSet {
        IndexSet::from_one_based(s, idx).unwrap()
    }

    fn basis(s: usize, list: &[&str]) -> HilbertBasis {
        HilbertBasis::from_generators(s, vs(list)).unwrap()
    }

    #[test]
    fn a_plus_inf_a_of_randclosure_basis() {
        let sos = a_plus_inf_a(&basis(3, &["1,0,0", "0,1,1"])).unwrap();
        assert_eq!(
            sos.supports().unwrap(),
            vec![set(3, &[]), set(3, &[1]), set(3, &[2, 3]), set(3, &[1, 2, 3])]
        );
        assert_eq!(sos.basis(set(3, &[1])).unwrap().gens(), vs(&["1,1"]));
        assert!(!is_almost_free(&sos, DEFAULT_BOUND).unwrap());
        assert!(sos.validate().unwrap().is_empty());
    }

    #[test]
    fn a_plus_inf_a_of_free_basis() {
        let sos = a_plus_inf_a(&HilbertBasis::free(2)).unwrap();
        assert_eq!(sos.supports().unwrap().len(), 4);
        assert!(is_almost_free(&sos, DEFAULT_BOUND).unwrap());
    }

    #[test]
    fn a_plus_inf_a_membership_matches_definition() {
        let b = basis(3, &["1,0,0", "0,1,1"]);
        let sos = a_plus_inf_a(&b).unwrap();
        let finite: Vec<ExtVec> = truncated_domain(3, 2).unwrap().filter(|x| x.is_finite() && b.contains(x).unwrap()).collect();
        for x in truncated_domain(3, 2).unwrap() {
            let direct = finite.iter().any(|a1| {
                finite.iter().any(|a2| a1.checked_add(&a2.scale(Inf).unwrap()).unwrap() == x)
            });
            assert_eq!(member_via_supports(&sos, &x).unwrap(), direct, "{x}");
        }
    }

    #[test]
    fn b_min_and_b_max_of_randclosure_basis() {
        let b = basis(3, &["1,0,0", "0,1,1"]);
        let hi = b_max(&b).unwrap();
        let lo = b_min(&b).unwrap();
        assert!(member_via_supports(&hi, &v("0,inf,5")).unwrap());
        assert!(!member_via_supports(&lo, &v("0,inf,0")).unwrap());
        assert!(!lo.contains_support(set(3, &[2])));
        assert!(lo.contains_support(set(3, &[2, 3])));
        for sos in [&lo, &hi] {
            assert!(sos.validate().unwrap().is_empty());
            assert!(is_almost_free(sos, DEFAULT_BOUND).unwrap());
        }
        assert!(b_min(&basis(2, &["1,0"])).is_err());
    }

    #[test]
    fn finite_parts_of_extremes_are_the_basis() {
        let b = basis(3, &["1,0,0", "0,1,1"]);
        for sos in [b_min(&b).unwrap(), b_max(&b).unwrap(), a_plus_inf_a(&b).unwrap()] {
            for x in truncated_domain(3, 3).unwrap().filter(|x| x.is_finite()) {
                assert_eq!(member_via_supports(&sos, &x).unwrap(), b.contains(&x).unwrap());
            }
        }
    }

    #[test]
    fn sums() {
        assert_eq!(sum(&vs(&["1,0"]), &vs(&["0,1"])).unwrap(), vs(&["0,1", "1,0"]));
        let rc = vs(&["1,0,0", "0,1,1", "inf,1,0", "inf,0,1"]);
        let mut sorted = rc.clone();
        sorted.sort();
        assert_eq!(sum(&rc, &rc).unwrap(), sorted);
        let bigger = sum_system(3, &rc, &vs(&["0,inf,0"])).unwrap();
        assert!(bigger.contains_support(set(3, &[2])));
        assert!(bigger.validate().unwrap().is_empty());
        assert!(sum(&vs(&["1"]), &vs(&["1,0"])).is_err());
    }

    fn free_example() -> DirectSumData {
        DirectSumData::new(
            set(3, &[1]),
            set(3, &[2]),
            set(3, &[3]),
            vs(&["1"]),
            vs(&["1"]),
            vs(&["1"]),
            vs(&["1"]),
        )
        .unwrap()
    }

    #[test]
    fn compose_free_example() {
        let b = compose_direct_sum(&free_example(), true).unwrap();
        assert_eq!(b.gens(), vs(&["0,1,1", "1,0,1"]));
        assert!(decomposed_almost_free(&free_example()));
    }

    #[test]
    fn compose_requires_support_condition() {
        let d = DirectSumData::new(
            set(3, &[1]),
            set(3, &[2]),
            set(3, &[3]),
            vs(&["1"]),
            vs(&["0"]),
            vs(&["1"]),
            vs(&["0"]),
        )
        .unwrap();
        assert!(!d.support_condition());
        assert_eq!(compose_direct_sum(&d, true), Err(Error::NoOrderUnit));
        assert!(compose_direct_sum(&d, false).is_ok());
        assert!(!decomposed_almost_free(&d));
    }

    #[test]
    fn compose_without_shared_coordinates() {
        let d = DirectSumData::new(
            set(3, &[1]),
            set(3, &[2, 3]),
            IndexSet::EMPTY,
            vs(&["1"]),
            vec![ExtVec::zeros(0)],
            vs(&["1,1"]),
            vec![ExtVec::zeros(0)],
        )
        .unwrap();
        assert_eq!(compose_direct_sum(&d, true).unwrap().gens(), vs(&["0,1,1", "1,0,0"]));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // 3·(2) = 2·(3) but 3·(1) ≠ 2·(1)
        let bad = DirectSumData::new(
            set(3, &[1]),
            set(3, &[2]),
            set(3, &[3]),
            vs(&["2", "3"]),
            vs(&["1", "1"]),
            vs(&["1"]),
            vs(&["1"]),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn numerical_semigroup_factor_is_not_almost_free() {
        let d = DirectSumData::new(
            set(3, &[1]),
            set(3, &[2]),
            set(3, &[3]),
            vs(&["2", "3"]),
            vs(&["2", "3"]),
            vs(&["1"]),
            vs(&["1"]),
        )
        .unwrap();
        assert!(!decomposed_almost_free(&d));
    }

    #[test]
    fn decompositions() {
        let d = decompose_direct_sum(&basis(3, &["1,0,1", "0,1,1"])).unwrap().unwrap();
        let (i1, i2, i3) = d.partition();
        let mut pair = [i1, i2];
        pair.sort();
        assert_eq!(pair, [set(3, &[1]), set(3, &[2])]);
        assert_eq!(i3, set(3, &[3]));

        let d = decompose_direct_sum(&basis(3, &["1,0,0", "0,1,1"])).unwrap().unwrap();
        assert_eq!(d.partition().2, IndexSet::EMPTY);

        assert_eq!(decompose_direct_sum(&basis(2, &["1,1", "2,0"])).unwrap(), None);
        assert_eq!(decompose_direct_sum(&basis(2, &["1,1"])).unwrap(), None);
    }

    #[test]
    fn indecomposable_congruence_monoid() {
        // x ≡ y mod 2: (2,0), (1,1), (0,2)
        assert_eq!(decompose_direct_sum(&basis(2, &["2,0", "1,1", "0,2"])).unwrap(), None);
    }

    #[test]
    fn rank_computation() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 3]]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[vec![0, 0]]), 0);
    }

    #[test]
    fn direct_sum_json() {
        let text = serde_json::to_string(&free_example()).unwrap();
        assert_eq!(
            text,
            r#"{"I1":[1],"I2":[2],"I3":[3],"B1":[[1]],"B2":[[1]],"f1":[[1]],"f2":[[1]]}"#
        );
        let back: DirectSumData = serde_json::from_str(&text).unwrap();
        assert_eq!(back, free_example());
    }
}
