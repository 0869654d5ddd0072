//! Decides whether the solution monoid `B` equals `A + ∞·A`, where `A` is its
//! finite part, and gathers the related structural flags into one report.

use serde::Serialize;

use crate::constructions::a_plus_inf_a;
use crate::error::{check_dim, Error, Result};
use crate::extnat::{ExtVec, IndexSet};
use crate::hilbert::HilbertBasis;
use crate::supports::{extract, member_via_supports, minimal_supports_free, monoid_is_full, SystemOfSupports};
use crate::system::DioSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    /// Whether a strictly positive finite solution exists.
    pub order_unit: bool,
    /// One such solution.
    pub unit: Option<ExtVec>,
    /// Every `A_H` full, verified on boxes up to `verification_bound`.
    pub full: bool,
    pub almost_free: bool,
    pub equals_a_plus_inf_a: bool,
    /// Same as `equals_a_plus_inf_a`: every member splits as finite plus `∞` times finite.
    pub all_fg_sums: bool,
    /// Members of `B` outside `A + ∞·A`; empty exactly when the two agree.
    pub witnesses: Vec<ExtVec>,
    pub verification_bound: u64,
    /// For single-equation systems, whether the closed-form criteria agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_agrees: Option<bool>,
}

/// Compares `B` (given by `sos`) with `A + ∞·A` for `A = A_∅`, returning a
/// member of `B` outside `A + ∞·A` when they differ.
///
/// Candidates are tried in this order: `ε_H(e_j)` for minimal nonempty `H` and
/// unit vectors `e_j ∈ A_H`; then `ε_H(0)` for every `H`; then `ε_H(g)` for the
/// generators `g` of every `A_H`. The last two families generate `B`, so an
/// empty result means equality.
pub fn compare_with_a_plus_inf_a(sos: &SystemOfSupports) -> Result<Option<ExtVec>> {
    let s = sos.dim();
    let base = sos.basis(IndexSet::EMPTY).ok_or(Error::NoOrderUnit)?.into_owned();
    let smaller = a_plus_inf_a(&base)?;
    let outside = |x: &ExtVec| -> Result<bool> { Ok(!member_via_supports(&smaller, x)?) };

    for h in sos.minimal_nonempty_supports()? {
        let a_h = sos.basis(h).expect("listed support");
        let k = s - h.len();
        for j in 0..k {
            let e = ExtVec::unit(k, j);
            if a_h.contains(&e)? {
                let w = ExtVec::inject(&e, h, s)?;
                if outside(&w)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    let entries = sos.entries()?;
    for (h, _) in &entries {
        let w = ExtVec::inject(&ExtVec::zeros(s - h.len()), *h, s)?;
        if outside(&w)? {
            return Ok(Some(w));
        }
    }
    for (h, basis) in &entries {
        for g in basis.gens() {
            let w = ExtVec::inject(g, *h, s)?;
            if outside(&w)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Whether the solution monoid equals `A + ∞·A`, with a witness when it does not.
pub fn equals_a_plus_inf_a(sys: &DioSystem) -> Result<(bool, Option<ExtVec>)> {
    let sos = extract(sys)?;
    let w = compare_with_a_plus_inf_a(&sos)?;
    Ok((w.is_none(), w))
}

/// The two conditions that characterize `B = A + ∞·A` when `B` is almost-free:
/// the supports of `B` are exactly the supports of elements of `A`, and for
/// each minimal nonempty support `H` the projection `p_H(A)` is free.
pub fn support_conditions(sos: &SystemOfSupports) -> Result<(bool, bool)> {
    let s = sos.dim();
    let base = sos.basis(IndexSet::EMPTY).ok_or(Error::NoOrderUnit)?.into_owned();
    let mut from_a = vec![IndexSet::EMPTY];
    for g in base.gens() {
        let grown: Vec<IndexSet> = from_a.iter().map(|h| h.union(g.support())).collect();
        from_a.extend(grown);
        from_a.sort();
        from_a.dedup();
    }
    let same_supports = sos.supports()? == from_a;
    let mut projections_free = true;
    for h in sos.minimal_nonempty_supports()? {
        let projected = base.gens().iter().map(|g| g.project(h)).collect();
        let p = HilbertBasis::from_generators(s - h.len(), projected)?;
        let k = s - h.len();
        if !(0..k).all(|j| p.contains(&ExtVec::unit(k, j)).unwrap_or(false)) {
            projections_free = false;
        }
    }
    Ok((same_supports, projections_free))
}

/// Closed-form answers for one equation `a·t = b·t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleEquationReport {
    /// `a − b` has a positive and a negative entry.
    pub has_positive_solution: bool,
    /// `supp(a) ∪ supp(b)` is everything; `None` without a positive solution.
    pub almost_free: Option<bool>,
    /// Almost-free with `B = A + ∞·A`: `a + b > 0`, disjoint supports, and
    /// `gcd(a_i, b_j) = 1` across them. `None` unless a positive solution
    /// exists and the entries are jointly coprime.
    pub almost_free_and_equals: Option<bool>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn analyze_single_equation(a: &[u64], b: &[u64]) -> Result<SingleEquationReport> {
    check_dim(a.len(), b.len())?;
    if a.len() < 2 {
        return Err(Error::InvalidInput("a single equation needs at least two variables".into()));
    }
    if a == b {
        return Err(Error::InvalidInput("the two sides are identical".into()));
    }
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return Err(Error::InvalidInput("each side must be nonzero".into()));
    }
    let has_positive_solution = a.iter().zip(b).any(|(x, y)| x > y) && a.iter().zip(b).any(|(x, y)| x < y);
    if !has_positive_solution {
        return Ok(SingleEquationReport {
            has_positive_solution,
            almost_free: None,
            almost_free_and_equals: None,
        });
    }
    let covers = a.iter().zip(b).all(|(&x, &y)| x + y > 0);
    let primitive = a.iter().chain(b).fold(0, |g, &x| gcd(g, x)) == 1;
    let equals = primitive.then(|| {
        let disjoint = a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0);
        let coprime = a
            .iter()
            .filter(|&&x| x > 0)
            .all(|&x| b.iter().filter(|&&y| y > 0).all(|&y| gcd(x, y) == 1));
        covers && disjoint && coprime
    });
    Ok(SingleEquationReport {
        has_positive_solution,
        almost_free: Some(covers),
        almost_free_and_equals: equals,
    })
}

/// Whether the closed form agrees with the general computation for `sys`, when
/// `sys` is a single nondegenerate equation.
fn closed_form_check(sys: &DioSystem, report: &ClassReport) -> Option<bool> {
    if sys.num_equations() != 1 || sys.num_congruences() != 0 {
        return None;
    }
    let closed = analyze_single_equation(&sys.f()[0], &sys.g()[0]).ok()?;
    Some(
        closed.has_positive_solution == report.order_unit
            && closed.almost_free.map_or(true, |af| af == report.almost_free)
            && closed
                .almost_free_and_equals
                .map_or(true, |x| x == (report.almost_free && report.equals_a_plus_inf_a)),
    )
}

/// Full classification of the solution monoid of `sys`.
pub fn verdict(sys: &DioSystem, bound: u64) -> Result<ClassReport> {
    let mut report = match extract(sys) {
        Err(Error::NoOrderUnit) => ClassReport {
            order_unit: false,
            unit: None,
            full: false,
            almost_free: false,
            equals_a_plus_inf_a: false,
            all_fg_sums: false,
            witnesses: vec![],
            verification_bound: bound,
            closed_form_agrees: None,
        },
        Err(e) => return Err(e),
        Ok(sos) => {
            let witness = compare_with_a_plus_inf_a(&sos)?;
            let mut base_full = true;
            let mut full = true;
            for (h, basis) in sos.entries()? {
                let ok = monoid_is_full(&basis, bound)?;
                full &= ok;
                if h.is_empty() {
                    base_full = ok;
                }
            }
            ClassReport {
                order_unit: true,
                unit: Some(sos.unit().clone()),
                full,
                almost_free: base_full && minimal_supports_free(&sos)?,
                equals_a_plus_inf_a: witness.is_none(),
                all_fg_sums: witness.is_none(),
                witnesses: witness.into_iter().collect(),
                verification_bound: bound,
                closed_form_agrees: None,
            }
        }
    };
    report.closed_form_agrees = closed_form_check(sys, &report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::DEFAULT_BOUND;

    fn v(s: &str) -> ExtVec {
        s.parse().unwrap()
    }

    fn single(a: &[u64], b: &[u64]) -> DioSystem {
        DioSystem::equations(a.len(), vec![a.to_vec()], vec![b.to_vec()]).unwrap()
    }

    #[test]
    fn randclosure_verdict() {
        let r = verdict(&single(&[1, 1, 0], &[1, 0, 1]), DEFAULT_BOUND).unwrap();
        assert!(r.order_unit);
        assert!(r.full);
        assert!(r.almost_free);
        assert!(!r.equals_a_plus_inf_a);
        assert!(!r.all_fg_sums);
        assert_eq!(r.witnesses, vec![v("inf,1,0")]);
        assert_eq!(r.closed_form_agrees, Some(true));
    }

    #[test]
    fn two_x_three_y_splits() {
        let (eq, w) = equals_a_plus_inf_a(&single(&[2, 0], &[0, 3])).unwrap();
        assert!(eq);
        assert_eq!(w, None);
    }

    #[test]
    fn unconstrained_splits() {
        let r = verdict(&DioSystem::unconstrained(2).unwrap(), DEFAULT_BOUND).unwrap();
        assert!(r.order_unit && r.full && r.almost_free && r.equals_a_plus_inf_a && r.all_fg_sums);
        assert!(r.witnesses.is_empty());
        assert_eq!(r.closed_form_agrees, None);
    }

    #[test]
    fn missing_order_unit_is_reported_in_band() {
        let r = verdict(&single(&[1, 1], &[2, 2]), DEFAULT_BOUND).unwrap();
        assert!(!r.order_unit && !r.full && !r.almost_free && !r.equals_a_plus_inf_a);
        assert_eq!(r.closed_form_agrees, Some(true));
        assert!(matches!(equals_a_plus_inf_a(&single(&[1, 1], &[2, 2])), Err(Error::NoOrderUnit)));
    }

    #[test]
    fn closed_form_examples() {
        let r = analyze_single_equation(&[1, 1, 0], &[1, 0, 1]).unwrap();
        assert_eq!(
            r,
            SingleEquationReport {
                has_positive_solution: true,
                almost_free: Some(true),
                almost_free_and_equals: Some(false)
            }
        );
        let r = analyze_single_equation(&[2, 0], &[0, 3]).unwrap();
        assert_eq!(r.almost_free, Some(true));
        assert_eq!(r.almost_free_and_equals, Some(true));
        let r = analyze_single_equation(&[1, 1], &[2, 2]).unwrap();
        assert!(!r.has_positive_solution);
        let r = analyze_single_equation(&[2, 0], &[0, 4]).unwrap();
        assert_eq!(r.almost_free_and_equals, None);
        assert!(analyze_single_equation(&[1, 2], &[1, 2]).is_err());
        assert!(analyze_single_equation(&[0, 0], &[1, 2]).is_err());
        assert!(analyze_single_equation(&[1], &[2]).is_err());
        assert!(analyze_single_equation(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn not_almost_free_but_equal() {
        // a=(2,0,0), b=(0,3,0): the third coordinate is unconstrained.
        let sys = single(&[2, 0, 0], &[0, 3, 0]);
        let r = verdict(&sys, DEFAULT_BOUND).unwrap();
        assert!(!r.almost_free);
        assert!(r.equals_a_plus_inf_a);
        assert_eq!(r.closed_form_agrees, Some(true));
    }

    #[test]
    fn support_conditions_match_comparison_when_almost_free() {
        let sos = extract(&single(&[1, 1, 0], &[1, 0, 1])).unwrap();
        assert_eq!(support_conditions(&sos).unwrap(), (false, false));
        let sos = extract(&single(&[2, 0], &[0, 3])).unwrap();
        assert_eq!(support_conditions(&sos).unwrap(), (true, true));
    }

    #[test]
    fn report_json_keys() {
        let r = verdict(&single(&[1, 1, 0], &[1, 0, 1]), DEFAULT_BOUND).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"order_unit":true,"unit":[1,1,1],"full":true,"almost_free":true,"equals_a_plus_inf_a":false,"all_fg_sums":false,"witnesses":[["inf",1,0]],"verification_bound":5,"closed_form_agrees":true}"#
        );
    }
}
