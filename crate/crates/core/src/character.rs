//! Torsion characters of the character torus (C*)^r.
//!
//! A character assigns to each link component a root of unity, recorded as
//! a rational exponent q in [0,1) with t = e^{2 pi i q}. All arithmetic on
//! exponents is exact rational arithmetic modulo 1.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduces a rational to its representative in [0, 1).
pub fn mod1(q: Rational64) -> Rational64 {
    q - q.floor()
}

/// Checked exponent constructor; the denominator must be nonzero.
pub fn exponent(numer: i64, denom: i64) -> Result<Rational64> {
    if denom == 0 {
        return Err(Error::InvalidExponent(format!("{}/0", numer)));
    }
    Ok(Rational64::new(numer, denom))
}

/// Parses an exponent written as `a/b` or a bare integer.
pub fn parse_exponent(text: &str) -> Result<Rational64> {
    let trimmed = text.trim();
    trimmed
        .parse::<Rational64>()
        .map_err(|e| Error::InvalidExponent(format!("{:?}: {}", trimmed, e)))
}

/// A finite-order character, one exponent per component, normalized mod 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TorsionCharacter {
    exponents: Vec<Rational64>,
}

impl TorsionCharacter {
    pub fn new(exponents: Vec<Rational64>) -> Self {
        TorsionCharacter {
            exponents: exponents.into_iter().map(mod1).collect(),
        }
    }

    /// The trivial character on `arity` components.
    pub fn trivial(arity: usize) -> Self {
        TorsionCharacter {
            exponents: vec![Rational64::zero(); arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Rational64] {
        &self.exponents
    }

    /// Exponent of the given 1-based component.
    pub fn exponent_of(&self, component: usize) -> Result<Rational64> {
        self.exponents
            .get(component - 1)
            .copied()
            .ok_or_else(|| Error::InvalidComponent {
                label: component,
                components: self.arity(),
            })
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|q| q.is_zero())
    }

    /// Multiplicative order: lcm of the exponent denominators.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .fold(1u64, |acc, q| acc.lcm(&(*q.denom() as u64)))
    }

    /// Coordinatewise inverse, exponents negated mod 1.
    pub fn inverse(&self) -> TorsionCharacter {
        TorsionCharacter::new(self.exponents.iter().map(|q| -q).collect())
    }

    /// Orbit under the Galois group of Q(zeta_N)/Q: all characters
    /// (a q_1, ..., a q_r) mod 1 with gcd(a, N) = 1, deduplicated and
    /// sorted.
    pub fn galois_orbit(&self) -> Vec<TorsionCharacter> {
        let n = self.order() as i64;
        let mut orbit: Vec<TorsionCharacter> = (1..=n)
            .filter(|a| a.gcd(&n) == 1)
            .map(|a| {
                TorsionCharacter::new(
                    self.exponents
                        .iter()
                        .map(|q| q * Rational64::from_integer(a))
                        .collect(),
                )
            })
            .collect();
        orbit.sort();
        orbit.dedup();
        orbit
    }

    /// Removes the coordinates of the given 1-based components.
    pub fn drop_components(&self, labels: &[usize]) -> Result<TorsionCharacter> {
        let mut drop = vec![false; self.arity()];
        for &label in labels {
            if label == 0 || label > self.arity() {
                return Err(Error::InvalidComponent {
                    label,
                    components: self.arity(),
                });
            }
            drop[label - 1] = true;
        }
        Ok(TorsionCharacter {
            exponents: self
                .exponents
                .iter()
                .zip(&drop)
                .filter(|(_, d)| !**d)
                .map(|(q, _)| *q)
                .collect(),
        })
    }

    /// Inserts exponent 0 at each of the given 1-based positions of the
    /// *result*; realizes the embedding that sends a character of the
    /// deleted complement to the character of U that is trivial on the
    /// deleted components.
    pub fn insert_trivial(&self, positions: &[usize]) -> Result<TorsionCharacter> {
        let target = self.arity() + positions.len();
        let mut fill = vec![false; target];
        for &p in positions {
            if p == 0 || p > target {
                return Err(Error::InvalidComponent {
                    label: p,
                    components: target,
                });
            }
            if std::mem::replace(&mut fill[p - 1], true) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate insert position {}",
                    p
                )));
            }
        }
        let mut rest = self.exponents.iter().copied();
        let exponents = fill
            .into_iter()
            .map(|f| {
                if f {
                    Some(Rational64::zero())
                } else {
                    rest.next()
                }
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument("insert positions exceed arity".into()))?;
        Ok(TorsionCharacter { exponents })
    }

    /// True if every listed 1-based component carries exponent 0.
    pub fn is_trivial_on(&self, labels: &[usize]) -> Result<bool> {
        for &label in labels {
            if !self.exponent_of(label)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl From<TorsionCharacter> for Vec<String> {
    fn from(t: TorsionCharacter) -> Vec<String> {
        t.exponents.iter().map(|q| q.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for TorsionCharacter {
    type Error = Error;
    fn try_from(items: Vec<String>) -> Result<TorsionCharacter> {
        let exponents = items
            .iter()
            .map(|s| parse_exponent(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorsionCharacter::new(exponents))
    }
}

impl FromStr for TorsionCharacter {
    type Err = Error;
    /// Parses a comma-separated exponent list such as `0,1/3,2/3`.
    fn from_str(s: &str) -> Result<TorsionCharacter> {
        if s.trim().is_empty() {
            return Ok(TorsionCharacter { exponents: vec![] });
        }
        let exponents = s
            .split(',')
            .map(parse_exponent)
            .collect::<Result<Vec<_>>>()?;
        Ok(TorsionCharacter::new(exponents))
    }
}

impl fmt::Display for TorsionCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", q)?;
        }
        write!(f, ")")
    }
}

/// Number of characters on the order-`order` grid in `arity` coordinates,
/// or None on overflow.
pub fn grid_size(arity: usize, order: u64) -> Option<u64> {
    let mut size = 1u64;
    for _ in 0..arity {
        size = size.checked_mul(order)?;
    }
    Some(size)
}

/// The `index`-th character (lexicographic, first coordinate most
/// significant) of the grid {0, 1/N, ..., (N-1)/N}^arity.
pub fn grid_character(index: u64, arity: usize, order: u64) -> TorsionCharacter {
    let mut digits = vec![0u64; arity];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % order;
        rest /= order;
    }
    TorsionCharacter::new(
        digits
            .into_iter()
            .map(|d| Rational64::new(d as i64, order as i64))
            .collect(),
    )
}

/// Signed-exponent product helper: q summed with weight a, reduced mod 1.
pub fn weighted_exponent_sum(weights: &[i64], exponents: &[Rational64]) -> Rational64 {
    let total = weights
        .iter()
        .zip(exponents)
        .fold(Rational64::zero(), |acc, (&a, q)| {
            acc + q * Rational64::from_integer(a)
        });
    mod1(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn ch(exps: &[(i64, i64)]) -> TorsionCharacter {
        TorsionCharacter::new(exps.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn mod1_normalizes_into_unit_interval() {
        assert_eq!(mod1(r(5, 3)), r(2, 3));
        assert_eq!(mod1(r(-1, 3)), r(2, 3));
        assert_eq!(mod1(r(-7, 2)), r(1, 2));
        assert_eq!(mod1(r(3, 1)), r(0, 1));
    }

    #[test]
    fn exponent_rejects_zero_denominator() {
        assert!(exponent(1, 0).is_err());
        assert_eq!(exponent(2, 4).unwrap(), r(1, 2));
    }

    #[test]
    fn parsing_round_trip() {
        let t: TorsionCharacter = "0,1/3,2/3".parse().unwrap();
        assert_eq!(t, ch(&[(0, 1), (1, 3), (2, 3)]));
        assert!("1/0".parse::<TorsionCharacter>().is_err());
        assert!("x".parse::<TorsionCharacter>().is_err());
        let strings: Vec<String> = t.clone().into();
        assert_eq!(strings, vec!["0", "1/3", "2/3"]);
        assert_eq!(TorsionCharacter::try_from(strings).unwrap(), t);
    }

    #[test]
    fn order_is_lcm_of_denominators() {
        assert_eq!(ch(&[(1, 3), (1, 2)]).order(), 6);
        assert_eq!(TorsionCharacter::trivial(3).order(), 1);
    }

    #[test]
    fn inverse_negates_exponents() {
        assert_eq!(ch(&[(1, 3), (0, 1)]).inverse(), ch(&[(2, 3), (0, 1)]));
        assert!(TorsionCharacter::trivial(2).inverse().is_trivial());
    }

    #[test]
    fn galois_orbit_of_trivial_is_singleton() {
        let t = TorsionCharacter::trivial(2);
        assert_eq!(t.galois_orbit(), vec![t]);
    }

    #[test]
    fn galois_orbit_examples() {
        assert_eq!(
            ch(&[(1, 3), (0, 1)]).galois_orbit(),
            vec![ch(&[(1, 3), (0, 1)]), ch(&[(2, 3), (0, 1)])]
        );
        assert_eq!(
            ch(&[(1, 4), (1, 2)]).galois_orbit(),
            vec![ch(&[(1, 4), (1, 2)]), ch(&[(3, 4), (1, 2)])]
        );
    }

    #[test]
    fn insertion_matches_deleted_embedding() {
        assert_eq!(
            ch(&[(1, 3), (1, 2)]).insert_trivial(&[1]).unwrap(),
            ch(&[(0, 1), (1, 3), (1, 2)])
        );
        assert_eq!(
            TorsionCharacter::new(vec![]).insert_trivial(&[1]).unwrap(),
            TorsionCharacter::trivial(1)
        );
        assert_eq!(
            ch(&[(1, 5)]).insert_trivial(&[2]).unwrap(),
            ch(&[(1, 5), (0, 1)])
        );
        assert_eq!(
            ch(&[(1, 5)]).insert_trivial(&[1, 2]).unwrap(),
            ch(&[(0, 1), (0, 1), (1, 5)])
        );
    }

    #[test]
    fn dropping_inverts_insertion() {
        let t = ch(&[(1, 3), (1, 2)]);
        let embedded = t.insert_trivial(&[1]).unwrap();
        assert_eq!(embedded.drop_components(&[1]).unwrap(), t);
        assert!(embedded.is_trivial_on(&[1]).unwrap());
        assert!(!embedded.is_trivial_on(&[2]).unwrap());
    }

    #[test]
    fn grid_enumerates_lexicographically() {
        assert_eq!(grid_size(2, 3), Some(9));
        assert_eq!(grid_character(0, 2, 3), TorsionCharacter::trivial(2));
        assert_eq!(grid_character(1, 2, 3), ch(&[(0, 1), (1, 3)]));
        assert_eq!(grid_character(3, 2, 3), ch(&[(1, 3), (0, 1)]));
        assert_eq!(grid_character(8, 2, 3), ch(&[(2, 3), (2, 3)]));
    }

    #[test]
    fn weighted_sums_reduce_mod_one() {
        assert_eq!(weighted_exponent_sum(&[2], &[r(1, 2)]), r(0, 1));
        assert_eq!(weighted_exponent_sum(&[1, 1], &[r(1, 4), r(1, 4)]), r(1, 2));
        assert_eq!(weighted_exponent_sum(&[3], &[r(1, 3)]), r(0, 1));
    }
}
