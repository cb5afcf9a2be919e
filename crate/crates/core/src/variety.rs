//! Torsion-translated subtori and grid scans of cohomology jump loci.
//!
//! Jump loci of germ complements are finite unions of torsion-translated
//! subtori, so scanning the finite grid of characters with coordinate
//! orders dividing N detects every component that meets the grid. The
//! order bound is a completeness parameter supplied by the caller, not a
//! completeness guarantee.

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::{grid_character, grid_size, weighted_exponent_sum, TorsionCharacter};
use crate::error::{Error, Result};
use crate::fox::{twisted_dims, Presentation};

/// Default cap on the number of grid evaluations in one scan.
pub const DEFAULT_BUDGET: u64 = 20_000;

/// A coset rho * T of a subtorus T = {s : prod s_i^{a_i} = 1 for rows a},
/// translated by a torsion character rho. Equation rows are kept in
/// Hermite normal form so equal inputs compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCoset {
    translate: TorsionCharacter,
    equations: Vec<Vec<i64>>,
}

impl TorsionCoset {
    pub fn new(translate: TorsionCharacter, equations: Vec<Vec<i64>>) -> Result<Self> {
        let r = translate.arity();
        if equations.iter().any(|row| row.len() != r) {
            return Err(Error::MatrixShape(format!(
                "coset equations need {} columns",
                r
            )));
        }
        Ok(TorsionCoset {
            translate,
            equations: hermite_normal_form(equations),
        })
    }

    /// The whole torus in `arity` coordinates.
    pub fn full_torus(arity: usize) -> Self {
        TorsionCoset {
            translate: TorsionCharacter::trivial(arity),
            equations: vec![],
        }
    }

    pub fn translate(&self) -> &TorsionCharacter {
        &self.translate
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    pub fn arity(&self) -> usize {
        self.translate.arity()
    }

    /// Dimension of the coset: arity minus the equation rank.
    pub fn dimension(&self) -> usize {
        self.arity() - self.equations.len()
    }

    /// True iff sum_i a_i (q_i - rho_i) is an integer for every row a.
    pub fn contains(&self, t: &TorsionCharacter) -> Result<bool> {
        if t.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: t.arity(),
            });
        }
        let diffs: Vec<Rational64> = t
            .exponents()
            .iter()
            .zip(self.translate.exponents())
            .map(|(q, rho)| q - rho)
            .collect();
        Ok(self
            .equations
            .iter()
            .all(|row| weighted_exponent_sum(row, &diffs).is_zero()))
    }

    /// All characters of the order-N grid lying in the coset, sorted.
    pub fn enumerate(&self, order: u64, budget: u64) -> Result<Vec<TorsionCharacter>> {
        let size = checked_grid_size(self.arity(), order, budget)?;
        let mut points = Vec::new();
        for index in 0..size {
            let t = grid_character(index, self.arity(), order);
            if self.contains(&t)? {
                points.push(t);
            }
        }
        Ok(points)
    }
}

fn checked_grid_size(arity: usize, order: u64, budget: u64) -> Result<u64> {
    let size = grid_size(arity, order).ok_or(Error::BudgetExceeded {
        required: u64::MAX,
        budget,
    })?;
    if size > budget {
        return Err(Error::BudgetExceeded {
            required: size,
            budget,
        });
    }
    Ok(size)
}

/// Integer row Hermite normal form: zero rows dropped, pivots positive,
/// entries above each pivot reduced into [0, pivot).
fn hermite_normal_form(rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = rows
        .into_iter()
        .filter(|row| row.iter().any(|&v| v != 0))
        .collect();
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            let mut nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .collect();
            if nonzero.is_empty() || nonzero.len() == 1 {
                break;
            }
            nonzero.sort_by_key(|&r| rows[r][col].unsigned_abs());
            let (a, b) = (nonzero[0], nonzero[1]);
            let quotient = rows[b][col] / rows[a][col];
            let smaller = rows[a].clone();
            for (entry, s) in rows[b].iter_mut().zip(&smaller) {
                *entry -= quotient * s;
            }
        }
        let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        if rows[pivot_row][col] < 0 {
            for entry in &mut rows[pivot_row] {
                *entry = -*entry;
            }
        }
        let pivot = rows[pivot_row][col];
        let reducer = rows[pivot_row].clone();
        for above in rows.iter_mut().take(pivot_row) {
            let q = above[col].div_euclid(pivot);
            if q != 0 {
                for (entry, s) in above.iter_mut().zip(&reducer) {
                    *entry -= q * s;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// One evaluated grid character with its cohomology dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub t: TorsionCharacter,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

/// One requested jump locus restricted to the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusEntry {
    pub degree: u8,
    pub multiplicity: usize,
    pub characters: Vec<TorsionCharacter>,
}

/// Full record of a grid scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub presentation: String,
    pub order: u64,
    pub records: Vec<ScanRecord>,
    pub loci: Vec<LocusEntry>,
}

impl ScanReport {
    /// Characters of one requested locus, if it was scanned.
    pub fn locus(&self, degree: u8, multiplicity: usize) -> Option<&[TorsionCharacter]> {
        self.loci
            .iter()
            .find(|l| l.degree == degree && l.multiplicity == multiplicity)
            .map(|l| l.characters.as_slice())
    }

    /// Tabular rendering: header q_1..q_r,h0,h1,h2 and one row per record.
    pub fn to_table(&self) -> String {
        let arity = self.records.first().map_or(0, |rec| rec.t.arity());
        let mut out = String::new();
        for i in 1..=arity {
            out.push_str(&format!("q_{},", i));
        }
        out.push_str("h0,h1,h2\n");
        for rec in &self.records {
            for q in rec.t.exponents() {
                out.push_str(&format!("{},", q));
            }
            out.push_str(&format!("{},{},{}\n", rec.h0, rec.h1, rec.h2));
        }
        out
    }
}

/// Evaluates twisted dimensions on the whole order-N grid and assembles
/// the requested jump loci. Distributes the evaluations across the rayon
/// pool; records come back sorted by exponent tuple.
pub fn scan(
    p: &Presentation,
    identifier: &str,
    order: u64,
    loci: &[(u8, usize)],
    budget: u64,
) -> Result<ScanReport> {
    if order == 0 {
        return Err(Error::InvalidArgument("order bound must be >= 1".into()));
    }
    let arity = p.components();
    let size = checked_grid_size(arity, order, budget)?;
    let evaluated: Vec<Result<ScanRecord>> = (0..size)
        .into_par_iter()
        .map(|index| {
            let t = grid_character(index, arity, order);
            let dims = twisted_dims(p, &t)?;
            Ok(ScanRecord {
                t,
                h0: dims.h0,
                h1: dims.h1,
                h2: dims.h2,
            })
        })
        .collect();
    let records = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    let loci = loci
        .iter()
        .map(|&(degree, multiplicity)| {
            if degree > 2 || multiplicity == 0 {
                return Err(Error::InvalidArgument(format!(
                    "invalid locus request: degree {}, multiplicity {}",
                    degree, multiplicity
                )));
            }
            let characters = records
                .iter()
                .filter(|rec| {
                    let dim = match degree {
                        0 => rec.h0,
                        1 => rec.h1,
                        _ => rec.h2,
                    };
                    dim >= multiplicity
                })
                .map(|rec| rec.t.clone())
                .collect();
            Ok(LocusEntry {
                degree,
                multiplicity,
                characters,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        presentation: identifier.to_string(),
        order,
        records,
        loci,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    fn ch(exps: &[(i64, i64)]) -> TorsionCharacter {
        TorsionCharacter::new(exps.iter().map(|&(n, d)| Rational64::new(n, d)).collect())
    }

    fn half_coset() -> TorsionCoset {
        TorsionCoset::new(ch(&[(1, 2), (0, 1)]), vec![vec![1, 1]]).unwrap()
    }

    #[test]
    fn hermite_form_is_canonical() {
        assert_eq!(
            hermite_normal_form(vec![vec![2, 4], vec![1, 2]]),
            vec![vec![1, 2]]
        );
        assert_eq!(
            hermite_normal_form(vec![vec![0, 1], vec![1, 0]]),
            vec![vec![1, 0], vec![0, 1]]
        );
        assert_eq!(hermite_normal_form(vec![vec![-1, -1]]), vec![vec![1, 1]]);
        assert_eq!(
            hermite_normal_form(vec![vec![0, 0]]),
            Vec::<Vec<i64>>::new()
        );
        assert_eq!(
            hermite_normal_form(vec![vec![2, 2, 2], vec![3, 3, 3]]),
            vec![vec![1, 1, 1]]
        );
    }

    #[test]
    fn equal_cosets_compare_equal_after_reduction() {
        let a = TorsionCoset::new(ch(&[(1, 2), (0, 1)]), vec![vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(a, half_coset());
        assert_eq!(a.dimension(), 1);
    }

    #[test]
    fn membership_examples() {
        let k = half_coset();
        assert!(k.contains(&ch(&[(1, 4), (1, 4)])).unwrap());
        assert!(!k.contains(&ch(&[(1, 4), (1, 2)])).unwrap());
        assert!(TorsionCoset::full_torus(2)
            .contains(&ch(&[(1, 7), (3, 5)]))
            .unwrap());
        assert!(k.contains(&TorsionCharacter::trivial(3)).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let points = half_coset().enumerate(4, 100).unwrap();
        assert_eq!(points.len(), 4);
        assert!(points.iter().all(|t| {
            let s: Rational64 = t.exponents().iter().sum();
            crate::character::mod1(s) == Rational64::new(1, 2)
        }));

        let point =
            TorsionCoset::new(TorsionCharacter::trivial(2), vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            point.enumerate(6, 100).unwrap(),
            vec![TorsionCharacter::trivial(2)]
        );

        assert_eq!(
            TorsionCoset::full_torus(2).enumerate(2, 100).unwrap().len(),
            4
        );
    }

    #[test]
    fn enumeration_respects_budget() {
        let err = TorsionCoset::full_torus(3).enumerate(10, 999).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 1000,
                budget: 999
            }
        ));
    }

    #[test]
    fn hopf_scan_minimal_grid() {
        let p = BraidWord::new(2, vec![1, 1])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let report = scan(&p, "hopf", 1, &[(1, 1)], DEFAULT_BUDGET).unwrap();
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.records[0].h1, 2);
        assert_eq!(report.locus(1, 1).unwrap(), &[TorsionCharacter::trivial(2)]);
    }

    #[test]
    fn hopf_jump_locus_is_only_the_trivial_point() {
        let p = BraidWord::new(2, vec![1, 1])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let report = scan(&p, "hopf", 3, &[(1, 1)], DEFAULT_BUDGET).unwrap();
        assert_eq!(report.records.len(), 9);
        assert_eq!(report.locus(1, 1).unwrap(), &[TorsionCharacter::trivial(2)]);
    }

    #[test]
    fn tangent_pair_locus_is_trivial_plus_coset() {
        let p = BraidWord::new(2, vec![1, 1, 1, 1])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let report = scan(&p, "tangent-pair", 4, &[(1, 1)], DEFAULT_BUDGET).unwrap();
        let locus = report.locus(1, 1).unwrap();
        let mut expected = half_coset().enumerate(4, 100).unwrap();
        expected.push(TorsionCharacter::trivial(2));
        expected.sort();
        let mut got = locus.to_vec();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn scan_budget_refusal_reports_requirement() {
        let p = BraidWord::new(2, vec![1, 1])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let err = scan(&p, "hopf", 2, &[], 3).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 4,
                budget: 3
            }
        ));
    }

    #[test]
    fn scan_report_serialization_round_trip() {
        let p = BraidWord::new(2, vec![1, 1])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let report = scan(&p, "hopf", 2, &[(1, 1), (1, 2)], DEFAULT_BUDGET).unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: ScanReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        let table = report.to_table();
        assert!(table.starts_with("q_1,q_2,h0,h1,h2\n"));
        assert_eq!(table.lines().count(), 5);
    }

    #[test]
    fn nested_loci_are_nested_sets() {
        let p = BraidWord::new(3, vec![1, 2, 1, 2, 1, 2])
            .unwrap()
            .artin_presentation()
            .unwrap();
        let report = scan(
            &p,
            "three-lines",
            3,
            &[(1, 1), (1, 2), (1, 3)],
            DEFAULT_BUDGET,
        )
        .unwrap();
        let v1 = report.locus(1, 1).unwrap();
        let v2 = report.locus(1, 2).unwrap();
        let v3 = report.locus(1, 3).unwrap();
        assert!(v2.iter().all(|t| v1.contains(t)));
        assert!(v3.iter().all(|t| v2.contains(t)));
        assert_eq!(v3, &[TorsionCharacter::trivial(3)]);
    }
}
