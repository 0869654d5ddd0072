//! Completion-side rank data and the equal-rank condition: a module over the
//! completion is extended iff its rank is the same at every minimal prime.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtNat, ExtVec, Fin, MAX_DIM};
use crate::hilbert::find_order_unit;
use crate::system::{DioSystem, ShiftMode};

/// Hypotheses the rank data cannot certify; reported alongside results.
pub const ASSUMPTIONS: [&str; 2] = [
    "the completion of the ring is reduced",
    "the module is torsion-free",
];

/// `a[j][i]` is the rank at minimal prime `j` of the `i`-th indecomposable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RankMatrixRepr")]
pub struct RankMatrix {
    s: usize,
    primes: usize,
    a: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RankMatrixRepr {
    s: usize,
    primes: usize,
    a: Vec<Vec<u64>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RankMatrixRepr> for RankMatrix {
    type Error = Error;

    fn try_from(r: RankMatrixRepr) -> Result<RankMatrix> {
        RankMatrix::new(r.s, r.primes, r.a, r.labels)
    }
}

impl RankMatrix {
    pub fn new(s: usize, primes: usize, a: Vec<Vec<u64>>, labels: Option<Vec<String>>) -> Result<RankMatrix> {
        if s == 0 {
            return Err(Error::InvalidInput("need at least one indecomposable".into()));
        }
        if s > MAX_DIM {
            return Err(Error::DimensionTooLarge(s));
        }
        if primes < 2 {
            return Err(Error::InvalidInput(format!("need at least two minimal primes, got {primes}")));
        }
        if a.len() != primes {
            return Err(Error::InvalidInput(format!("{} rank rows for {primes} primes", a.len())));
        }
        for row in &a {
            check_dim(s, row.len())?;
        }
        if let Some(i) = (0..s).find(|&i| a.iter().all(|row| row[i] == 0)) {
            return Err(Error::InvalidInput(format!("column {} is zero at every prime", i + 1)));
        }
        if let Some(l) = &labels {
            check_dim(s, l.len())?;
        }
        Ok(RankMatrix { s, primes, a, labels })
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn primes(&self) -> usize {
        self.primes
    }

    pub fn ranks(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    fn rank_at(&self, j: usize, x: &ExtVec) -> Result<ExtNat> {
        let mut acc = Fin(0);
        for (&c, &xi) in self.a[j].iter().zip(x.iter()) {
            acc = acc.checked_add(Fin(c).checked_mul(xi)?)?;
        }
        Ok(acc)
    }
}

/// Equations `rank_1(x) = rank_k(x)` for `k = 2, …, primes`; rows whose two
/// sides coincide are dropped.
pub fn vstar_system(rm: &RankMatrix) -> DioSystem {
    let first = &rm.a[0];
    let (f, g): (Vec<_>, Vec<_>) = rm.a[1..]
        .iter()
        .filter(|row| *row != first)
        .map(|row| (first.clone(), row.clone()))
        .unzip();
    DioSystem::equations(rm.s, f, g).expect("validated rank matrix")
}

/// Whether the ranks of `x` agree at every minimal prime.
pub fn is_extended(rm: &RankMatrix, x: &ExtVec) -> Result<bool> {
    check_dim(rm.s, x.len())?;
    let r0 = rm.rank_at(0, x)?;
    for j in 1..rm.primes {
        if rm.rank_at(j, x)? != r0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank data realizing `{x : E·x = 0}` as the finite part of a monoid whose
/// infinite part is as large as possible.
///
/// With `M = 1 + max(0, −min E)` and `h_i = M + i`, the ranks are `e_j + h` at
/// the first `ℓ` primes and `h` at the last.
pub fn realize_wiegand(e: &[Vec<i64>]) -> Result<(RankMatrix, DioSystem)> {
    let kernel = DioSystem::from_integer_matrix(e, ShiftMode::Uniform)?;
    if find_order_unit(&kernel)?.is_none() {
        return Err(Error::NoOrderUnit);
    }
    let s = kernel.dim();
    let min = e.iter().flatten().copied().min().unwrap_or(0);
    let m = 1 + min.checked_neg().ok_or(Error::Overflow)?.max(0);
    let h: Vec<i64> = (1..=s as i64).map(|i| m + i).collect();
    let mut a = Vec::with_capacity(e.len() + 1);
    for row in e {
        a.push(
            row.iter()
                .zip(&h)
                .map(|(&x, &hi)| {
                    x.checked_add(hi)
                        .and_then(|v| u64::try_from(v).ok())
                        .ok_or(Error::Overflow)
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    a.push(h.iter().map(|&v| v as u64).collect());
    let rm = RankMatrix::new(s, e.len() + 1, a, None)?;
    let sys = vstar_system(&rm);
    Ok((rm, sys))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtVec {
        s.parse().unwrap()
    }

    fn randclosure_ranks() -> RankMatrix {
        RankMatrix::new(3, 2, vec![vec![1, 1, 0], vec![1, 0, 1]], None).unwrap()
    }

    #[test]
    fn vstar_of_randclosure_shape() {
        let sys = vstar_system(&randclosure_ranks());
        assert_eq!(sys.f(), &[vec![1, 1, 0]]);
        assert_eq!(sys.g(), &[vec![1, 0, 1]]);
    }

    #[test]
    fn vstar_of_localbass_shape() {
        let rm = RankMatrix::new(4, 2, vec![vec![1, 1, 1, 0], vec![1, 1, 0, 1]], None).unwrap();
        let sys = vstar_system(&rm);
        assert_eq!(sys.f(), &[vec![1, 1, 1, 0]]);
        assert_eq!(sys.g(), &[vec![1, 1, 0, 1]]);
    }

    #[test]
    fn duplicated_prime_gives_empty_system() {
        let rm = RankMatrix::new(2, 2, vec![vec![1, 2], vec![1, 2]], None).unwrap();
        assert!(vstar_system(&rm).is_empty());
    }

    #[test]
    fn extendedness() {
        let rm = randclosure_ranks();
        assert!(is_extended(&rm, &v("inf,1,0")).unwrap());
        assert!(!is_extended(&rm, &v("0,1,0")).unwrap());
        assert!(is_extended(&rm, &v("inf,0,0")).unwrap());
        assert!(is_extended(&rm, &v("1,1,1")).unwrap());
        assert!(is_extended(&rm, &v("1,1")).is_err());
    }

    #[test]
    fn extendedness_matches_membership() {
        let rm = RankMatrix::new(3, 3, vec![vec![1, 2, 0], vec![2, 1, 1], vec![0, 1, 3]], None).unwrap();
        let sys = vstar_system(&rm);
        for x in crate::system::truncated_domain(3, 3).unwrap() {
            assert_eq!(is_extended(&rm, &x).unwrap(), sys.is_member(&x).unwrap(), "{x}");
        }
    }

    #[test]
    fn invalid_rank_matrices() {
        assert!(RankMatrix::new(2, 1, vec![vec![1, 1]], None).is_err());
        assert!(RankMatrix::new(2, 2, vec![vec![1, 0], vec![1, 0]], None).is_err());
        assert!(RankMatrix::new(2, 3, vec![vec![1, 1], vec![1, 1]], None).is_err());
        assert!(RankMatrix::new(2, 2, vec![vec![1, 1], vec![1, 1]], Some(vec!["L".into()])).is_err());
    }

    #[test]
    fn wiegand_shift() {
        let (rm, sys) = realize_wiegand(&[vec![1, -1]]).unwrap();
        assert_eq!(rm.ranks(), &[vec![4, 3], vec![3, 4]]);
        assert_eq!(sys.f(), &[vec![4, 3]]);
        assert_eq!(sys.g(), &[vec![3, 4]]);
        let (rm, _) = realize_wiegand(&[vec![0, 0]]).unwrap();
        assert_eq!(rm.ranks(), &[vec![2, 3], vec![2, 3]]);
        assert!(matches!(realize_wiegand(&[vec![1, 1]]), Err(Error::NoOrderUnit)));
    }

    #[test]
    fn json_round_trip() {
        let rm = RankMatrix::new(2, 2, vec![vec![1, 0], vec![0, 1]], Some(vec!["R".into(), "S".into()])).unwrap();
        let text = serde_json::to_string(&rm).unwrap();
        assert_eq!(text, r#"{"s":2,"primes":2,"a":[[1,0],[0,1]],"labels":["R","S"]}"#);
        assert_eq!(serde_json::from_str::<RankMatrix>(&text).unwrap(), rm);
        assert!(serde_json::from_str::<RankMatrix>(r#"{"s":2,"primes":1,"a":[[1,1]]}"#).is_err());
    }
}
