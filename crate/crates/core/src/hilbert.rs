//! Hilbert bases of finite solution monoids and membership in finitely
//! generated submonoids of `(N0*)^s`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtVec, IndexSet, MAX_DIM};
use crate::system::DioSystem;

/// Frontier states the completion search may visit before giving up.
pub const STATE_CAP: usize = 1_000_000;

/// A finite, minimal, canonically sorted generating set of a submonoid of `N0^s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertBasis {
    s: usize,
    gens: Vec<ExtVec>,
}

impl HilbertBasis {
    /// Minimizes and sorts an arbitrary finite generating set.
    pub fn from_generators(s: usize, gens: Vec<ExtVec>) -> Result<HilbertBasis> {
        if s > MAX_DIM {
            return Err(Error::DimensionTooLarge(s));
        }
        for g in &gens {
            check_dim(s, g.len())?;
            if !g.is_finite() {
                return Err(Error::InvalidInput(format!("generator {g} has an infinite entry")));
            }
        }
        let mut gens: Vec<ExtVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        gens.sort();
        gens.dedup();
        let mut k = gens.len();
        while k > 0 {
            k -= 1;
            let g = gens.remove(k);
            if !in_finite_span(&gens, &g) {
                gens.insert(k, g);
            }
        }
        Ok(HilbertBasis { s, gens })
    }

    /// The unit vectors of `N0^s`.
    pub fn free(s: usize) -> HilbertBasis {
        HilbertBasis { s, gens: (0..s).rev().map(|i| ExtVec::unit(s, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn gens(&self) -> &[ExtVec] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_free(&self) -> bool {
        *self == HilbertBasis::free(self.s)
    }

    /// Union of the supports of the generators.
    pub fn support_union(&self) -> IndexSet {
        self.gens.iter().fold(IndexSet::EMPTY, |acc, g| acc.union(g.support()))
    }

    /// Membership in the `N0*`-span of the generators.
    pub fn contains(&self, x: &ExtVec) -> Result<bool> {
        check_dim(self.s, x.len())?;
        in_generated(&self.gens, x)
    }

    /// The sum of all generators when it is strictly positive.
    pub fn order_unit(&self) -> Option<ExtVec> {
        if self.support_union() != IndexSet::full(self.s) {
            return None;
        }
        let mut sum = ExtVec::zeros(self.s);
        for g in &self.gens {
            sum = sum.checked_add(g).ok()?;
        }
        Some(sum)
    }
}

/// The Hilbert basis of `{x ∈ N0^s : x solves sys}`.
pub fn hilbert_basis(sys: &DioSystem) -> Result<HilbertBasis> {
    let s = sys.dim();
    let lifted = sys.lift_congruences();
    let n = lifted.dim();
    let a: Vec<Vec<i64>> = lifted
        .f()
        .iter()
        .zip(lifted.g())
        .map(|(fr, gr)| {
            fr.iter()
                .zip(gr)
                .map(|(&p, &q)| {
                    let p = i64::try_from(p).map_err(|_| Error::Overflow)?;
                    let q = i64::try_from(q).map_err(|_| Error::Overflow)?;
                    p.checked_sub(q).ok_or(Error::Overflow)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let minimal = completion(&a, n)?;
    let gens = minimal
        .into_iter()
        .map(|x| ExtVec::from_finite(&x[..s]))
        .collect();
    HilbertBasis::from_generators(s, gens)
}

/// Minimal nonzero solutions of `A·x = 0` over `N0^n` by frontier completion:
/// start from the unit vectors and extend a non-solution `x` by `e_j` only when
/// `<A·x, A·e_j> < 0`, dropping anything that dominates a known solution.
fn completion(a: &[Vec<i64>], n: usize) -> Result<Vec<Vec<u64>>> {
    let rows = a.len();
    let column = |j: usize| -> Vec<i64> { a.iter().map(|r| r[j]).collect() };
    let columns: Vec<Vec<i64>> = (0..n).map(column).collect();

    let mut solutions: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<(Vec<u64>, Vec<i64>)> = (0..n)
        .map(|j| {
            let mut x = vec![0; n];
            x[j] = 1;
            (x, columns[j].clone())
        })
        .collect();
    let mut visited = 0usize;

    while !frontier.is_empty() {
        visited += frontier.len();
        if visited > STATE_CAP {
            return Err(Error::ResourceCap(format!(
                "Hilbert basis search exceeded {STATE_CAP} states"
            )));
        }
        let (found, open): (Vec<_>, Vec<_>) =
            frontier.into_iter().partition(|(_, ax)| ax.iter().all(|&v| v == 0));
        solutions.extend(found.into_iter().map(|(x, _)| x));

        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut next = Vec::new();
        for (x, ax) in open {
            for (j, col) in columns.iter().enumerate() {
                let dot: i64 = (0..rows).map(|r| ax[r] * col[r]).sum();
                if dot >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if solutions.iter().any(|m| dominates(&y, m)) || !seen.insert(y.clone()) {
                    continue;
                }
                let ay = (0..rows)
                    .map(|r| ax[r].checked_add(col[r]).ok_or(Error::Overflow))
                    .collect::<Result<Vec<_>>>()?;
                next.push((y, ay));
            }
        }
        frontier = next;
    }
    Ok(solutions)
}

fn dominates(y: &[u64], m: &[u64]) -> bool {
    y.iter().zip(m).all(|(a, b)| a >= b)
}

fn in_finite_span(gens: &[ExtVec], x: &ExtVec) -> bool {
    in_generated(gens, x).unwrap_or(false)
}

/// Whether `x = Σ c_g·g` with coefficients `c_g ∈ N0*`.
///
/// Generators whose support lies inside `∞-supp(x)` are taken with coefficient
/// `∞`; the rest must reproduce the finite part of `x` exactly with finite
/// coefficients while their own `∞` entries, together with the former, cover
/// `∞-supp(x)`.
pub fn in_generated(gens: &[ExtVec], x: &ExtVec) -> Result<bool> {
    for g in gens {
        check_dim(x.len(), g.len())?;
    }
    let h = x.inf_support();
    let target: Vec<u64> = x.project(h).iter().map(|v| v.finite().unwrap_or(0)).collect();

    let mut covered = IndexSet::EMPTY;
    let mut items: Vec<(Vec<u64>, IndexSet)> = Vec::new();
    for g in gens {
        let (supp, inf) = g.supports();
        if !inf.is_subset(h) {
            continue;
        }
        if supp.is_subset(h) {
            covered = covered.union(supp);
        } else {
            let p: Vec<u64> = g.project(h).iter().map(|v| v.finite().unwrap_or(0)).collect();
            items.push((p, inf));
        }
    }

    let k = items.len();
    let mut suffix_supp = vec![0u32; k + 1];
    let mut suffix_inf = vec![IndexSet::EMPTY; k + 1];
    for i in (0..k).rev() {
        let mask = items[i]
            .0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .fold(0u32, |m, (c, _)| m | (1 << c));
        suffix_supp[i] = suffix_supp[i + 1] | mask;
        suffix_inf[i] = suffix_inf[i + 1].union(items[i].1);
    }
    let mut search = SpanSearch {
        items: &items,
        need: h,
        suffix_supp,
        suffix_inf,
        failed: HashSet::new(),
    };
    let mut rem = target;
    Ok(search.run(0, &mut rem, covered))
}

struct SpanSearch<'a> {
    items: &'a [(Vec<u64>, IndexSet)],
    need: IndexSet,
    suffix_supp: Vec<u32>,
    suffix_inf: Vec<IndexSet>,
    failed: HashSet<(usize, Vec<u64>, IndexSet)>,
}

impl SpanSearch<'_> {
    fn run(&mut self, k: usize, rem: &mut Vec<u64>, cov: IndexSet) -> bool {
        let rem_mask = rem
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .fold(0u32, |m, (c, _)| m | (1 << c));
        if rem_mask == 0 && self.need.is_subset(cov) {
            return true;
        }
        if k == self.items.len()
            || rem_mask & !self.suffix_supp[k] != 0
            || !self.need.is_subset(cov.union(self.suffix_inf[k]))
        {
            return false;
        }
        let key = (k, rem.clone(), cov);
        if self.failed.contains(&key) {
            return false;
        }
        let (p, inf) = &self.items[k];
        let max = p
            .iter()
            .zip(rem.iter())
            .filter(|(&pi, _)| pi > 0)
            .map(|(&pi, &ri)| ri / pi)
            .min()
            .unwrap_or(0);
        for c in (0..=max).rev() {
            for (r, &pi) in rem.iter_mut().zip(p) {
                *r -= c * pi;
            }
            let next_cov = if c > 0 { cov.union(*inf) } else { cov };
            let ok = self.run(k + 1, rem, next_cov);
            for (r, &pi) in rem.iter_mut().zip(p) {
                *r += c * pi;
            }
            if ok {
                return true;
            }
        }
        self.failed.insert(key);
        false
    }
}

/// A strictly positive finite solution, if the system has one.
///
/// Exact: such a solution exists iff the supports of the Hilbert basis cover
/// every coordinate, in which case the sum of the basis is one.
pub fn find_order_unit(sys: &DioSystem) -> Result<Option<ExtVec>> {
    Ok(hilbert_basis(sys)?.order_unit())
}

impl Serialize for HilbertBasis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.gens.serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BasisRepr {
    WithDim { s: usize, basis: Vec<ExtVec> },
    Bare(Vec<ExtVec>),
}

impl<'de> Deserialize<'de> for HilbertBasis {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (s, gens) = match BasisRepr::deserialize(deserializer)? {
            BasisRepr::WithDim { s, basis } => (s, basis),
            BasisRepr::Bare(gens) => match gens.first() {
                Some(g) => (g.len(), gens),
                None => return Err(serde::de::Error::custom("empty basis needs an explicit \"s\"")),
            },
        };
        HilbertBasis::from_generators(s, gens).map_err(serde::de::Error::custom)
    }
}
