//! Strategies shared by the randomized test targets.

#![allow(dead_code)]

use num_rational::Rational64;
use proptest::prelude::*;

use jumploci::{CycScalar, Matrix};

/// Conductors are drawn from divisors of 12 so that unifying any mix of
/// entries stays inside Q(zeta_12); arbitrary mixes (7 and 8 and 9, say)
/// are mathematically fine but blow the working conductor past 500 and
/// make randomized runs crawl.
pub fn conductor() -> impl Strategy<Value = u64> {
    proptest::sample::select(vec![1u64, 2, 3, 4, 6, 12])
}

pub fn monomial_in(n: u64) -> impl Strategy<Value = CycScalar> {
    (-3i64..=3, 0i64..12).prop_map(move |(q, e)| {
        CycScalar::from_integer(q) * CycScalar::root_of_unity(Rational64::new(e, n as i64))
    })
}

pub fn scalar() -> impl Strategy<Value = CycScalar> {
    (conductor(), conductor())
        .prop_flat_map(|(n, m)| (monomial_in(n), monomial_in(m)))
        .prop_map(|(a, b)| a + b)
}

pub fn matrix() -> impl Strategy<Value = Matrix<CycScalar>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(scalar(), rows * cols)
            .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
    })
}
