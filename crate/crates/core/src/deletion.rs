//! Deletion formulas: how twisted cohomology dimensions change when link
//! components are removed, and a brute-force verifier comparing the
//! predictions against independent computation on the deleted braid.
//!
//! The key quantity is the meridian monodromy lambda_i(t), the product of
//! the surviving coordinates weighted by linking numbers with component i.
//! Deleting components that carry trivial coordinates lowers h1 and h2 by
//! the number of deleted components whose lambda is 1, and leaves them
//! unchanged otherwise.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, LinkingMatrix};
use crate::character::{grid_character, grid_size, weighted_exponent_sum, TorsionCharacter};
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::fox::{twisted_dims, CohomologyDims, Presentation};
use crate::variety::ScanReport;

/// Exponent of the meridian monodromy lambda_i(t) = prod_{j != i}
/// t_j^{l_ij}, as a rational mod 1; the scalar is 1 iff this is 0.
///
/// The component i must carry trivial coordinate (it is about to be
/// deleted); otherwise the standing hypothesis is violated.
pub fn meridian_exponent(
    t: &TorsionCharacter,
    component: usize,
    linking: &LinkingMatrix,
) -> Result<Rational64> {
    let r = linking.size();
    if t.arity() != r {
        return Err(Error::ArityMismatch {
            expected: r,
            got: t.arity(),
        });
    }
    if component == 0 || component > r {
        return Err(Error::InvalidComponent {
            label: component,
            components: r,
        });
    }
    if !t.exponent_of(component)?.is_zero() {
        return Err(Error::HypothesisViolation(format!(
            "component {} carries nontrivial coordinate {}",
            component,
            t.exponent_of(component)?
        )));
    }
    Ok(weighted_exponent_sum(
        &linking.entries()[component - 1],
        t.exponents(),
    ))
}

/// The meridian monodromy as an exact scalar.
pub fn meridian_scalar(
    t: &TorsionCharacter,
    component: usize,
    linking: &LinkingMatrix,
) -> Result<CycScalar> {
    Ok(CycScalar::root_of_unity(meridian_exponent(
        t, component, linking,
    )?))
}

/// Dimensions (h0, h1) of the punctured branch circle with the restricted
/// system of monodromy exponent `lambda`: (1, 1) when the monodromy is
/// trivial, (0, 0) otherwise.
pub fn punctured_circle_dims(lambda: Rational64) -> (usize, usize) {
    if lambda.is_zero() {
        (1, 1)
    } else {
        (0, 0)
    }
}

/// Predicted dim H^1 after deleting one component whose meridian
/// monodromy has the given exponent: h1 drops by one exactly when the
/// monodromy is 1.
///
/// A trivial monodromy with h1 = 0 cannot occur (the deletion sequence
/// forces h1 >= 1 there); reaching it means an input bug or a falsified
/// formula, reported as a contradiction.
pub fn predict_deleted_h1(h1_u: usize, lambda: Rational64) -> Result<usize> {
    if lambda.is_zero() {
        h1_u.checked_sub(1).ok_or_else(|| {
            Error::Contradiction("meridian monodromy 1 coincides with h1 = 0".into())
        })
    } else {
        Ok(h1_u)
    }
}

/// Predicted dimensions after deleting the components of `deleted` (each
/// required to carry trivial coordinate): h1 and h2 both drop by the
/// number of deleted components with trivial meridian monodromy, h0 is
/// unchanged. At the trivial character every monodromy is trivial and the
/// rule reduces to the first Betti number bookkeeping b1 = r - |S|.
pub fn predict_multi_deleted(
    dims_u: CohomologyDims,
    t: &TorsionCharacter,
    deleted: &[usize],
    linking: &LinkingMatrix,
) -> Result<CohomologyDims> {
    let labels = normalize_labels(deleted, linking.size())?;
    let mut drop = 0usize;
    for &i in &labels {
        if meridian_exponent(t, i, linking)?.is_zero() {
            drop += 1;
        }
    }
    let h1 = dims_u.h1.checked_sub(drop);
    let h2 = dims_u.h2.checked_sub(drop);
    match (h1, h2) {
        (Some(h1), Some(h2)) => Ok(CohomologyDims::new(dims_u.h0, h1, h2)),
        _ => Err(Error::Contradiction(format!(
            "deleting {:?} at t = {} would push dims {} negative",
            labels, t, dims_u
        ))),
    }
}

fn normalize_labels(labels: &[usize], components: usize) -> Result<Vec<usize>> {
    let mut set = BTreeSet::new();
    for &label in labels {
        if label == 0 || label > components {
            return Err(Error::InvalidComponent { label, components });
        }
        set.insert(label);
    }
    if set.is_empty() || set.len() >= components {
        return Err(Error::ComponentUnderflow);
    }
    Ok(set.into_iter().collect())
}

/// A braid together with the components to delete, the derived braid of
/// the deleted complement, and the linking matrix.
#[derive(Clone, Debug)]
pub struct DeletionScenario {
    braid: BraidWord,
    deleted: Vec<usize>,
    deleted_braid: BraidWord,
    linking: LinkingMatrix,
}

impl DeletionScenario {
    pub fn new(braid: BraidWord, deleted: Vec<usize>) -> Result<Self> {
        let linking = braid.linking_matrix()?;
        Self::with_linking(braid, deleted, linking)
    }

    /// Builds a scenario with an explicitly supplied linking matrix in
    /// place of the one derived from the braid; predictions then use the
    /// supplied matrix while the independent computation stays untouched.
    pub fn with_linking(
        braid: BraidWord,
        deleted: Vec<usize>,
        linking: LinkingMatrix,
    ) -> Result<Self> {
        let components = braid.components().count();
        if linking.size() != components {
            return Err(Error::ArityMismatch {
                expected: components,
                got: linking.size(),
            });
        }
        let deleted = normalize_labels(&deleted, components)?;
        let deleted_braid = braid.delete_components(&deleted)?;
        Ok(DeletionScenario {
            braid,
            deleted,
            deleted_braid,
            linking,
        })
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn deleted(&self) -> &[usize] {
        &self.deleted
    }

    pub fn deleted_braid(&self) -> &BraidWord {
        &self.deleted_braid
    }

    pub fn linking(&self) -> &LinkingMatrix {
        &self.linking
    }
}

/// Set-level transfer of a jump locus through one deletion: a grid point
/// of the slice {t_c = 1} is predicted to lie in V^1_k of the deleted
/// complement iff it lies in V^1_{k+1}(U), or lies in V^1_k(U) with
/// nontrivial meridian monodromy at the deleted component. Output
/// characters have the deleted coordinate dropped.
pub fn transform_jump_locus(
    report: &ScanReport,
    k: usize,
    linking: &LinkingMatrix,
    deleted: usize,
) -> Result<Vec<TorsionCharacter>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "jump multiplicity k must be at least 1".into(),
        ));
    }
    let r = linking.size();
    if deleted == 0 || deleted > r {
        return Err(Error::InvalidComponent {
            label: deleted,
            components: r,
        });
    }
    if report.records.iter().any(|rec| rec.t.arity() != r) {
        return Err(Error::CoverageMismatch(format!(
            "scan records do not live on a {}-torus",
            r
        )));
    }
    let slice: Vec<_> = report
        .records
        .iter()
        .filter(|rec| rec.t.exponent_of(deleted).is_ok_and(|q| q.is_zero()))
        .collect();
    let expected = grid_size(r - 1, report.order)
        .ok_or_else(|| Error::CoverageMismatch("slice size overflows".into()))?;
    if slice.len() as u64 != expected {
        return Err(Error::CoverageMismatch(format!(
            "scan covers {} slice points, expected {} at order {}",
            slice.len(),
            expected,
            report.order
        )));
    }
    let mut predicted = Vec::new();
    for rec in slice {
        let lambda = meridian_exponent(&rec.t, deleted, linking)?;
        if rec.h1 > k || (rec.h1 >= k && !lambda.is_zero()) {
            predicted.push(rec.t.drop_components(&[deleted])?);
        }
    }
    predicted.sort();
    Ok(predicted)
}

/// Per-character outcome of a deletion verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    /// Slice character on U (trivial on every deleted component).
    pub t: TorsionCharacter,
    pub dims_u: CohomologyDims,
    /// Meridian monodromy exponents of the deleted components.
    pub lambda: Vec<String>,
    /// Formula prediction; absent when the prediction itself raised a
    /// contradiction (recorded in `error`).
    pub predicted: Option<CohomologyDims>,
    /// Independently computed dims of the deleted complement.
    pub computed: CohomologyDims,
    pub matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// For characters trivial on components outside the deleted set: does
    /// the formula for deleting all trivial coordinates agree with direct
    /// computation on that larger deletion?
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enlarged_consistent: Option<bool>,
}

/// Outcome of verifying one deletion scenario on a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub order: u64,
    pub deleted: Vec<usize>,
    pub rows: Vec<VerifyRow>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows
            .iter()
            .filter(|row| !row.matched || row.enlarged_consistent == Some(false))
    }

    /// Tabular rendering with one row per slice character.
    pub fn to_table(&self) -> String {
        let mut out = String::from("t,dims_U(h0 h1 h2),lambda,predicted,computed,matched\n");
        for row in &self.rows {
            let predicted = row
                .predicted
                .map_or_else(|| "-".to_string(), |d| d.to_string());
            out.push_str(&format!(
                "\"{}\",{} {} {},\"{}\",{},{},{}\n",
                row.t,
                row.dims_u.h0,
                row.dims_u.h1,
                row.dims_u.h2,
                row.lambda.join(" "),
                predicted,
                row.computed,
                row.matched
            ));
        }
        out
    }
}

/// Verifies the deletion formula on every slice character of coordinate
/// order dividing N: computes dims on U and on the deleted complement,
/// compares against [`predict_multi_deleted`], and cross-checks the
/// enlarged deletion (all trivial coordinates) where applicable. A
/// contradiction raised by the prediction becomes a failing row, not an
/// error.
pub fn verify_deletion(
    scenario: &DeletionScenario,
    identifier: &str,
    order: u64,
    budget: u64,
) -> Result<VerificationReport> {
    if order == 0 {
        return Err(Error::InvalidArgument("order bound must be >= 1".into()));
    }
    let p_u = scenario.braid.artin_presentation()?;
    let p_v = scenario.deleted_braid.artin_presentation()?;
    let r = scenario.linking.size();
    let s = scenario.deleted.len();
    let free: Vec<usize> = (1..=r).filter(|c| !scenario.deleted.contains(c)).collect();
    let slice_size = grid_size(r - s, order).ok_or(Error::BudgetExceeded {
        required: u64::MAX,
        budget,
    })?;
    let required = slice_size.saturating_mul(2);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let characters: Vec<TorsionCharacter> = (0..slice_size)
        .map(|index| grid_character(index, r - s, order).insert_trivial(&scenario.deleted))
        .collect::<Result<Vec<_>>>()?;

    // Presentations of the enlarged deletions (deleted set plus the free
    // components a character happens to be trivial on), built up front so
    // the parallel rows can share them read-only.
    let mut enlarged: BTreeMap<Vec<usize>, Presentation> = BTreeMap::new();
    for t in &characters {
        let extra: Vec<usize> = free
            .iter()
            .copied()
            .filter(|&c| t.exponent_of(c).is_ok_and(|q| q.is_zero()))
            .collect();
        if extra.is_empty() || extra.len() == free.len() {
            continue;
        }
        let full: Vec<usize> = scenario.deleted.iter().copied().chain(extra).collect();
        if let Entry::Vacant(slot) = enlarged.entry(full) {
            let braid_w = scenario.braid.delete_components(slot.key())?;
            slot.insert(braid_w.artin_presentation()?);
        }
    }

    let rows: Vec<Result<VerifyRow>> = characters
        .into_par_iter()
        .map(|t| verify_row(scenario, &p_u, &p_v, &free, &enlarged, t))
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let pass = rows
        .iter()
        .all(|row| row.matched && row.enlarged_consistent != Some(false));
    Ok(VerificationReport {
        scenario: identifier.to_string(),
        order,
        deleted: scenario.deleted.clone(),
        rows,
        pass,
    })
}

fn verify_row(
    scenario: &DeletionScenario,
    p_u: &Presentation,
    p_v: &Presentation,
    free: &[usize],
    enlarged: &BTreeMap<Vec<usize>, Presentation>,
    t: TorsionCharacter,
) -> Result<VerifyRow> {
    let linking = &scenario.linking;
    let dims_u = twisted_dims(p_u, &t)?;
    let t_v = t.drop_components(&scenario.deleted)?;
    let computed = twisted_dims(p_v, &t_v)?;
    let lambda = scenario
        .deleted
        .iter()
        .map(|&i| Ok(meridian_exponent(&t, i, linking)?.to_string()))
        .collect::<Result<Vec<_>>>()?;
    let (predicted, error) = match predict_multi_deleted(dims_u, &t, &scenario.deleted, linking) {
        Ok(d) => (Some(d), None),
        Err(Error::Contradiction(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let matched = predicted == Some(computed);

    let extra: Vec<usize> = free
        .iter()
        .copied()
        .filter(|&c| t.exponent_of(c).is_ok_and(|q| q.is_zero()))
        .collect();
    let enlarged_consistent = if extra.is_empty() || extra.len() == free.len() {
        None
    } else {
        let full: Vec<usize> = scenario.deleted.iter().copied().chain(extra).collect();
        let p_w = enlarged
            .get(&full)
            .ok_or_else(|| Error::InvalidArgument("missing enlarged presentation".into()))?;
        let dims_w = twisted_dims(p_w, &t.drop_components(&full)?)?;
        let mut expected_drop = 0i64;
        for &i in &full {
            if meridian_exponent(&t, i, linking)?.is_zero() {
                expected_drop += 1;
            }
        }
        Some(
            dims_u.h1 as i64 - dims_w.h1 as i64 == expected_drop
                && dims_u.h2 as i64 - dims_w.h2 as i64 == expected_drop,
        )
    };

    Ok(VerifyRow {
        t,
        dims_u,
        lambda,
        predicted,
        computed,
        matched,
        error,
        enlarged_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{scan, DEFAULT_BUDGET};

    fn ch(exps: &[(i64, i64)]) -> TorsionCharacter {
        TorsionCharacter::new(exps.iter().map(|&(n, d)| Rational64::new(n, d)).collect())
    }

    fn braid(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    fn hopf_linking() -> LinkingMatrix {
        braid(2, &[1, 1]).linking_matrix().unwrap()
    }

    #[test]
    fn monodromy_of_trivial_character_is_trivial() {
        let lk = hopf_linking();
        let t = TorsionCharacter::trivial(2);
        assert!(meridian_exponent(&t, 1, &lk).unwrap().is_zero());
        assert_eq!(punctured_circle_dims(Rational64::zero()), (1, 1));
    }

    #[test]
    fn monodromy_reads_linking_exponents() {
        let lk = hopf_linking();
        let t = ch(&[(0, 1), (1, 3)]);
        assert_eq!(
            meridian_exponent(&t, 1, &lk).unwrap(),
            Rational64::new(1, 3)
        );
        assert_eq!(meridian_scalar(&t, 1, &lk).unwrap(), CycScalar::zeta(3));
        assert_eq!(punctured_circle_dims(Rational64::new(1, 3)), (0, 0));

        let tangent = braid(2, &[1, 1, 1, 1]).linking_matrix().unwrap();
        let t = ch(&[(0, 1), (1, 2)]);
        assert!(meridian_exponent(&t, 1, &tangent).unwrap().is_zero());
    }

    #[test]
    fn monodromy_requires_trivial_coordinate() {
        let lk = hopf_linking();
        let t = ch(&[(1, 3), (1, 3)]);
        assert!(matches!(
            meridian_exponent(&t, 1, &lk),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn single_deletion_prediction() {
        assert_eq!(predict_deleted_h1(1, Rational64::new(1, 3)).unwrap(), 1);
        assert_eq!(predict_deleted_h1(1, Rational64::zero()).unwrap(), 0);
        assert_eq!(predict_deleted_h1(3, Rational64::zero()).unwrap(), 2);
        assert!(matches!(
            predict_deleted_h1(0, Rational64::zero()),
            Err(Error::Contradiction(_))
        ));
    }

    #[test]
    fn multi_deletion_matches_single_deletion_rule() {
        let lk = braid(3, &[1, 2, 1, 2, 1, 2]).linking_matrix().unwrap();
        let dims = CohomologyDims::new(0, 1, 1);
        let t = ch(&[(0, 1), (1, 3), (2, 3)]);
        let predicted = predict_multi_deleted(dims, &t, &[1], &lk).unwrap();
        let lambda = meridian_exponent(&t, 1, &lk).unwrap();
        assert_eq!(predicted.h1, predict_deleted_h1(dims.h1, lambda).unwrap());
        assert_eq!(predicted, CohomologyDims::new(0, 0, 0));
    }

    #[test]
    fn multi_deletion_counts_trivial_monodromies() {
        let lk = braid(3, &[1, 2, 1, 2, 1, 2]).linking_matrix().unwrap();
        // lambda_1 = t2 t3 = zeta_3, lambda_2 = t1 t3 = zeta_3: no drop.
        let t = ch(&[(0, 1), (0, 1), (1, 3)]);
        let dims = CohomologyDims::new(0, 0, 0);
        let predicted = predict_multi_deleted(dims, &t, &[1, 2], &lk).unwrap();
        assert_eq!(predicted, CohomologyDims::new(0, 0, 0));
    }

    #[test]
    fn trivial_character_follows_betti_bookkeeping() {
        let lk = braid(3, &[1, 2, 1, 2, 1, 2]).linking_matrix().unwrap();
        let dims = CohomologyDims::new(1, 3, 2);
        let t = TorsionCharacter::trivial(3);
        assert_eq!(
            predict_multi_deleted(dims, &t, &[1], &lk).unwrap(),
            CohomologyDims::new(1, 2, 1)
        );
        assert_eq!(
            predict_multi_deleted(dims, &t, &[1, 3], &lk).unwrap(),
            CohomologyDims::new(1, 1, 0)
        );
    }

    #[test]
    fn scenario_construction_validates() {
        assert!(DeletionScenario::new(braid(2, &[1, 1]), vec![1]).is_ok());
        assert!(matches!(
            DeletionScenario::new(braid(2, &[1, 1]), vec![1, 2]),
            Err(Error::ComponentUnderflow)
        ));
        assert!(matches!(
            DeletionScenario::new(braid(2, &[1, 1]), vec![5]),
            Err(Error::InvalidComponent { .. })
        ));
    }

    #[test]
    fn hopf_verification_passes() {
        let scenario = DeletionScenario::new(braid(2, &[1, 1]), vec![1]).unwrap();
        let report = verify_deletion(&scenario, "hopf", 6, DEFAULT_BUDGET).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.mismatches().count(), 0);
    }

    #[test]
    fn three_lines_verification_covers_the_drop_case() {
        let scenario = DeletionScenario::new(braid(3, &[1, 2, 1, 2, 1, 2]), vec![1]).unwrap();
        let report = verify_deletion(&scenario, "three-lines", 3, DEFAULT_BUDGET).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 9);
        let drop_row = report
            .rows
            .iter()
            .find(|row| row.t == ch(&[(0, 1), (1, 3), (2, 3)]))
            .unwrap();
        assert_eq!(drop_row.dims_u, CohomologyDims::new(0, 1, 1));
        assert_eq!(drop_row.computed, CohomologyDims::new(0, 0, 0));
        assert_eq!(drop_row.lambda, vec!["0"]);
    }

    #[test]
    fn cusp_line_verification_exercises_cubed_monodromy() {
        let scenario =
            DeletionScenario::new(braid(3, &[2, 1, 2, 2, 1, 2, 2, 1, 2]), vec![2]).unwrap();
        let report = verify_deletion(&scenario, "cusp-line", 6, DEFAULT_BUDGET).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 6);
    }

    #[test]
    fn wrong_linking_matrix_is_caught_by_verification() {
        let b = braid(2, &[1, 1, 1, 1]);
        let wrong = LinkingMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let scenario = DeletionScenario::with_linking(b, vec![1], wrong).unwrap();
        let report =
            verify_deletion(&scenario, "tangent-pair-bad-linking", 4, DEFAULT_BUDGET).unwrap();
        assert!(!report.pass);
        assert!(report.mismatches().count() > 0);
    }

    #[test]
    fn verification_budget_refusal() {
        let scenario = DeletionScenario::new(braid(2, &[1, 1]), vec![1]).unwrap();
        assert!(matches!(
            verify_deletion(&scenario, "hopf", 6, 11),
            Err(Error::BudgetExceeded {
                required: 12,
                budget: 11
            })
        ));
    }

    #[test]
    fn transform_matches_deleted_scan_for_tangent_pair() {
        let b = braid(2, &[1, 1, 1, 1]);
        let scenario = DeletionScenario::new(b.clone(), vec![1]).unwrap();
        let p_u = b.artin_presentation().unwrap();
        let report_u = scan(&p_u, "tangent-pair", 4, &[], DEFAULT_BUDGET).unwrap();
        let predicted = transform_jump_locus(&report_u, 1, scenario.linking(), 1).unwrap();
        let p_v = scenario.deleted_braid().artin_presentation().unwrap();
        let report_v = scan(&p_v, "unknot", 4, &[(1, 1)], DEFAULT_BUDGET).unwrap();
        assert_eq!(predicted, report_v.locus(1, 1).unwrap());
        assert_eq!(predicted, vec![TorsionCharacter::trivial(1)]);
    }

    #[test]
    fn transform_requires_slice_coverage() {
        let b = braid(2, &[1, 1]);
        let p = b.artin_presentation().unwrap();
        let lk = b.linking_matrix().unwrap();
        let mut report = scan(&p, "hopf", 3, &[], DEFAULT_BUDGET).unwrap();
        report.records.retain(|rec| !rec.t.is_trivial());
        assert!(matches!(
            transform_jump_locus(&report, 1, &lk, 1),
            Err(Error::CoverageMismatch(_))
        ));
    }

    #[test]
    fn verification_report_round_trip() {
        let scenario = DeletionScenario::new(braid(2, &[1, 1]), vec![1]).unwrap();
        let report = verify_deletion(&scenario, "hopf", 3, DEFAULT_BUDGET).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(report.to_table().contains("matched"));
    }
}
