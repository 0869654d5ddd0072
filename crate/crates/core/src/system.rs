//! Homogeneous systems of linear equations and congruences over `N0*`.
//!
//! A [`DioSystem`] with equations `F·t = G·t` and congruences
//! `D·t ∈ (m_1 N0*, …, m_n N0*)` defines the monoid of its solutions in
//! `(N0*)^s`. Both sides of an equation are evaluated independently in `N0*`
//! and compared; nothing is ever cancelled.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtNat, ExtVec, Fin, Inf, MAX_DIM};

/// Largest truncated domain `(bound+2)^s` that [`DioSystem::enumerate_truncated`] will walk.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DioSystem {
    s: usize,
    f: Vec<Vec<u64>>,
    g: Vec<Vec<u64>>,
    d: Vec<Vec<u64>>,
    moduli: Vec<u64>,
}

/// How [`DioSystem::from_integer_matrix`] shifts an integer matrix into two
/// nonnegative sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// `(E⁺ + 1)·t = (E⁻ + 1)·t` with the all-ones matrix added to both parts.
    AllOnes,
    /// `(E + h)·t = h·t` with one constant `h = 1 + max(0, −min E)`.
    Uniform,
}

impl DioSystem {
    pub fn new(
        s: usize,
        f: Vec<Vec<u64>>,
        g: Vec<Vec<u64>>,
        d: Vec<Vec<u64>>,
        moduli: Vec<u64>,
    ) -> Result<DioSystem> {
        if s > MAX_DIM {
            return Err(Error::DimensionTooLarge(s));
        }
        if f.len() != g.len() {
            return Err(Error::InvalidSystem(format!(
                "F has {} rows but G has {}",
                f.len(),
                g.len()
            )));
        }
        if d.len() != moduli.len() {
            return Err(Error::InvalidSystem(format!(
                "D has {} rows but {} moduli were given",
                d.len(),
                moduli.len()
            )));
        }
        for (name, rows) in [("F", &f), ("G", &g), ("D", &d)] {
            if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != s) {
                return Err(Error::InvalidSystem(format!(
                    "row {} of {name} has {} entries, expected {s}",
                    k + 1,
                    row.len()
                )));
            }
        }
        if let Some(&m) = moduli.iter().find(|&&m| m <= 1) {
            return Err(Error::InvalidSystem(format!("modulus {m} must be greater than 1")));
        }
        Ok(DioSystem { s, f, g, d, moduli })
    }

    /// Equations only.
    pub fn equations(s: usize, f: Vec<Vec<u64>>, g: Vec<Vec<u64>>) -> Result<DioSystem> {
        DioSystem::new(s, f, g, vec![], vec![])
    }

    /// Congruences only.
    pub fn congruences(s: usize, d: Vec<Vec<u64>>, moduli: Vec<u64>) -> Result<DioSystem> {
        DioSystem::new(s, vec![], vec![], d, moduli)
    }

    /// No constraints: the solution set is all of `(N0*)^s`.
    pub fn unconstrained(s: usize) -> Result<DioSystem> {
        DioSystem::new(s, vec![], vec![], vec![], vec![])
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn f(&self) -> &[Vec<u64>] {
        &self.f
    }

    pub fn g(&self) -> &[Vec<u64>] {
        &self.g
    }

    pub fn d(&self) -> &[Vec<u64>] {
        &self.d
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn num_equations(&self) -> usize {
        self.f.len()
    }

    pub fn num_congruences(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty() && self.d.is_empty()
    }

    /// Whether `x` solves every equation and congruence.
    pub fn is_member(&self, x: &ExtVec) -> Result<bool> {
        check_dim(self.s, x.len())?;
        for (fr, gr) in self.f.iter().zip(&self.g) {
            if eval_row(fr, x)? != eval_row(gr, x)? {
                return Ok(false);
            }
        }
        for (dr, &m) in self.d.iter().zip(&self.moduli) {
            if !eval_row(dr, x)?.is_multiple_of(m) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Replaces each congruence `D_i·t ∈ m_i N0*` by the equation
    /// `D_i·t = m_i·y_i` in a fresh variable `y_i` appended after the original ones.
    pub fn lift_congruences(&self) -> DioSystem {
        let n = self.d.len();
        let width = self.s + n;
        let pad = |row: &Vec<u64>| {
            let mut r = row.clone();
            r.resize(width, 0);
            r
        };
        let mut f: Vec<Vec<u64>> = self.f.iter().map(pad).collect();
        let mut g: Vec<Vec<u64>> = self.g.iter().map(pad).collect();
        for (k, (dr, &m)) in self.d.iter().zip(&self.moduli).enumerate() {
            f.push(pad(dr));
            let mut gr = vec![0; width];
            gr[self.s + k] = m;
            g.push(gr);
        }
        DioSystem { s: width, f, g, d: vec![], moduli: vec![] }
    }

    /// Encodes `{x ∈ N0^s : E·x = 0}` as a system with nonnegative coefficients
    /// whose every entry on both sides is strictly positive.
    pub fn from_integer_matrix(e: &[Vec<i64>], mode: ShiftMode) -> Result<DioSystem> {
        let s = e.first().map(|r| r.len()).unwrap_or(0);
        if let Some(row) = e.iter().find(|r| r.len() != s) {
            return Err(Error::InvalidSystem(format!(
                "integer matrix rows have inconsistent lengths ({} vs {s})",
                row.len()
            )));
        }
        if s == 0 {
            return Err(Error::InvalidSystem("integer matrix has no columns".into()));
        }
        let to_u64 = |v: i64| u64::try_from(v).map_err(|_| Error::Overflow);
        let (f, g) = match mode {
            ShiftMode::AllOnes => {
                let mut f = Vec::with_capacity(e.len());
                let mut g = Vec::with_capacity(e.len());
                for row in e {
                    f.push(row.iter().map(|&v| v.max(0) as u64 + 1).collect());
                    g.push(
                        row.iter()
                            .map(|&v| v.checked_neg().ok_or(Error::Overflow).map(|n| n.max(0) as u64 + 1))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                (f, g)
            }
            ShiftMode::Uniform => {
                let min = e.iter().flatten().copied().min().unwrap_or(0);
                let h = 1 + min.checked_neg().ok_or(Error::Overflow)?.max(0);
                let f = e
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| v.checked_add(h).ok_or(Error::Overflow).and_then(to_u64))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let g = vec![vec![to_u64(h)?; s]; e.len()];
                (f, g)
            }
        };
        DioSystem::equations(s, f, g)
    }

    /// Row concatenation; the solution set is the intersection.
    pub fn intersect(&self, other: &DioSystem) -> Result<DioSystem> {
        check_dim(self.s, other.s)?;
        let cat = |a: &[Vec<u64>], b: &[Vec<u64>]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        Ok(DioSystem {
            s: self.s,
            f: cat(&self.f, &other.f),
            g: cat(&self.g, &other.g),
            d: cat(&self.d, &other.d),
            moduli: self.moduli.iter().chain(&other.moduli).copied().collect(),
        })
    }

    /// Every solution with all coordinates in `{0, …, bound, ∞}`, in lexicographic order.
    pub fn enumerate_truncated(&self, bound: u64) -> Result<Vec<ExtVec>> {
        let mut out = Vec::new();
        for x in truncated_domain(self.s, bound)? {
            if self.is_member(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

fn eval_row(row: &[u64], x: &ExtVec) -> Result<ExtNat> {
    let mut acc = Fin(0);
    for (&c, &xi) in row.iter().zip(x.iter()) {
        acc = acc.checked_add(Fin(c).checked_mul(xi)?)?;
    }
    Ok(acc)
}

/// All vectors of `{0, …, bound, ∞}^s` in lexicographic order.
pub fn truncated_domain(s: usize, bound: u64) -> Result<impl Iterator<Item = ExtVec>> {
    let per_coord = bound
        .checked_add(2)
        .ok_or_else(|| Error::ResourceCap("truncation bound too large".into()))?;
    let total = (0..s).try_fold(1u64, |acc, _| acc.checked_mul(per_coord).filter(|&t| t <= ENUMERATION_LIMIT));
    let Some(total) = total else {
        return Err(Error::ResourceCap(format!(
            "truncated domain ({}+2)^{s} exceeds {ENUMERATION_LIMIT} vectors",
            bound
        )));
    };
    let values: Vec<ExtNat> = (0..=bound).map(Fin).chain(std::iter::once(Inf)).collect();
    Ok((0..total).map(move |mut k| {
        let mut entries = vec![Fin(0); s];
        for slot in entries.iter_mut().rev() {
            *slot = values[(k % per_coord) as usize];
            k /= per_coord;
        }
        ExtVec::new(entries)
    }))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationBlock {
    #[serde(rename = "F")]
    f: Vec<Vec<u64>>,
    #[serde(rename = "G")]
    g: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CongruenceBlock {
    #[serde(rename = "D")]
    d: Vec<Vec<u64>>,
    moduli: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemRepr {
    s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equations: Option<EquationBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    congruences: Option<CongruenceBlock>,
}

impl Serialize for DioSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SystemRepr {
            s: self.s,
            equations: (!self.f.is_empty())
                .then(|| EquationBlock { f: self.f.clone(), g: self.g.clone() }),
            congruences: (!self.d.is_empty())
                .then(|| CongruenceBlock { d: self.d.clone(), moduli: self.moduli.clone() }),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DioSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SystemRepr::deserialize(deserializer)?;
        if repr.s == 0 {
            return Err(serde::de::Error::custom("s must be at least 1"));
        }
        let (f, g) = repr.equations.map(|e| (e.f, e.g)).unwrap_or_default();
        let (d, moduli) = repr.congruences.map(|c| (c.d, c.moduli)).unwrap_or_default();
        DioSystem::new(repr.s, f, g, d, moduli).map_err(serde::de::Error::custom)
    }
}
