//! Fox calculus on meridian-labeled group presentations and the twisted
//! cohomology dimensions it computes.
//!
//! A [`Presentation`] carries one generator per meridian arc and relators
//! as free words. Evaluating the Fox Jacobian and the augmentation column
//! at a torsion character gives the chain complex of the presentation
//! 2-complex with local coefficients; its ranks determine h0, h1, h2.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::character::TorsionCharacter;
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A finite presentation with generators labeled by link components.
///
/// Invariants checked at construction: labels cover exactly 1..r, relator
/// symbols are valid signed generator indices, and every relator has zero
/// abelianized image in Z^r (summing exponents per component label).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationData", into = "PresentationData")]
pub struct Presentation {
    generators: usize,
    meridian_labels: Vec<usize>,
    relators: Vec<Vec<i32>>,
    components: usize,
}

/// Serde carrier for the presentation exchange format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationData {
    pub generators: usize,
    pub labels: Vec<usize>,
    pub relators: Vec<Vec<i32>>,
}

impl From<Presentation> for PresentationData {
    fn from(p: Presentation) -> PresentationData {
        PresentationData {
            generators: p.generators,
            labels: p.meridian_labels,
            relators: p.relators,
        }
    }
}

impl TryFrom<PresentationData> for Presentation {
    type Error = Error;
    fn try_from(data: PresentationData) -> Result<Presentation> {
        Presentation::new(data.generators, data.labels, data.relators)
    }
}

impl Presentation {
    pub fn new(
        generators: usize,
        meridian_labels: Vec<usize>,
        relators: Vec<Vec<i32>>,
    ) -> Result<Self> {
        if generators == 0 {
            return Err(Error::MalformedPresentation(
                "presentation needs at least one generator".into(),
            ));
        }
        if meridian_labels.len() != generators {
            return Err(Error::MalformedPresentation(format!(
                "{} generators but {} meridian labels",
                generators,
                meridian_labels.len()
            )));
        }
        let components = *meridian_labels.iter().max().unwrap();
        let mut hit = vec![false; components];
        for &label in &meridian_labels {
            if label == 0 {
                return Err(Error::MalformedPresentation(
                    "component labels are 1-based".into(),
                ));
            }
            hit[label - 1] = true;
        }
        if !hit.iter().all(|h| *h) {
            return Err(Error::MalformedPresentation(format!(
                "component labels must cover 1..{}",
                components
            )));
        }
        for (index, relator) in relators.iter().enumerate() {
            let mut sums = vec![0i64; components];
            for &symbol in relator {
                let g = symbol.unsigned_abs() as usize;
                if symbol == 0 || g > generators {
                    return Err(Error::MalformedPresentation(format!(
                        "relator {} contains invalid symbol {}",
                        index + 1,
                        symbol
                    )));
                }
                sums[meridian_labels[g - 1] - 1] += symbol.signum() as i64;
            }
            if sums.iter().any(|&s| s != 0) {
                return Err(Error::MalformedPresentation(format!(
                    "relator {} has nonzero abelianized image {:?}",
                    index + 1,
                    sums
                )));
            }
        }
        Ok(Presentation {
            generators,
            meridian_labels,
            relators,
            components,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn meridian_labels(&self) -> &[usize] {
        &self.meridian_labels
    }

    pub fn relators(&self) -> &[Vec<i32>] {
        &self.relators
    }

    /// Root-of-unity value of each generator under the character, all
    /// embedded into the single conductor lcm(orders); index = generator-1.
    /// Returns the values and their inverses.
    fn generator_values(&self, t: &TorsionCharacter) -> Result<(Vec<CycScalar>, Vec<CycScalar>)> {
        if t.arity() != self.components {
            return Err(Error::ArityMismatch {
                expected: self.components,
                got: t.arity(),
            });
        }
        let conductor = t.order();
        let mut values = Vec::with_capacity(self.generators);
        let mut inverses = Vec::with_capacity(self.generators);
        for &label in &self.meridian_labels {
            let q = t.exponent_of(label)?;
            values.push(CycScalar::root_of_unity(q).embed(conductor)?);
            inverses.push(CycScalar::root_of_unity(-q).embed(conductor)?);
        }
        Ok((values, inverses))
    }

    /// All Fox derivatives of one relator at once, evaluated at the
    /// generator values: one pass accumulating the image of the scanned
    /// prefix.
    fn fox_row(
        &self,
        relator: &[i32],
        values: &[CycScalar],
        inverses: &[CycScalar],
    ) -> Vec<CycScalar> {
        let mut row = vec![CycScalar::zero(); self.generators];
        let mut prefix = CycScalar::one();
        for &symbol in relator {
            let g = symbol.unsigned_abs() as usize - 1;
            if symbol > 0 {
                row[g] = &row[g] + &prefix;
                prefix = &prefix * &values[g];
            } else {
                prefix = &prefix * &inverses[g];
                row[g] = &row[g] - &prefix;
            }
        }
        row
    }

    /// Evaluated Fox Jacobian: row per relator, column per generator.
    pub fn fox_jacobian(&self, t: &TorsionCharacter) -> Result<Matrix<CycScalar>> {
        let (values, inverses) = self.generator_values(t)?;
        Matrix::from_rows(
            self.relators
                .iter()
                .map(|rel| self.fox_row(rel, &values, &inverses))
                .collect(),
        )
    }

    /// Augmentation column (t_{c(x_j)} - 1), one entry per generator.
    pub fn augmentation_column(&self, t: &TorsionCharacter) -> Result<Matrix<CycScalar>> {
        let (values, _) = self.generator_values(t)?;
        Matrix::new(
            self.generators,
            1,
            values.into_iter().map(|v| &v - &CycScalar::one()).collect(),
        )
    }
}

/// Image of the Fox derivative d(word)/d(x_j) under x_i -> t_{c(x_i)}, for
/// a 1-based generator index j.
pub fn fox_derivative(
    word: &[i32],
    j: usize,
    t: &TorsionCharacter,
    meridian_labels: &[usize],
) -> Result<CycScalar> {
    if j == 0 || j > meridian_labels.len() {
        return Err(Error::InvalidArgument(format!(
            "no generator {} among {}",
            j,
            meridian_labels.len()
        )));
    }
    let conductor = t.order();
    let mut row = CycScalar::zero();
    let mut prefix = CycScalar::one();
    for &symbol in word {
        let g = symbol.unsigned_abs() as usize;
        if symbol == 0 || g > meridian_labels.len() {
            return Err(Error::MalformedPresentation(format!(
                "invalid symbol {} in word",
                symbol
            )));
        }
        let q = t.exponent_of(meridian_labels[g - 1])?;
        if symbol > 0 {
            if g == j {
                row = &row + &prefix;
            }
            prefix = &prefix * &CycScalar::root_of_unity(q).embed(conductor)?;
        } else {
            prefix = &prefix * &CycScalar::root_of_unity(-q).embed(conductor)?;
            if g == j {
                row = &row - &prefix;
            }
        }
    }
    Ok(row)
}

/// Twisted cohomology dimensions in degrees 0, 1, 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl CohomologyDims {
    pub fn new(h0: usize, h1: usize, h2: usize) -> Self {
        CohomologyDims { h0, h1, h2 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    /// Dimension in the given degree (0, 1, or 2).
    pub fn degree(&self, i: u8) -> Result<usize> {
        match i {
            0 => Ok(self.h0),
            1 => Ok(self.h1),
            2 => Ok(self.h2),
            _ => Err(Error::InvalidArgument(format!(
                "no cohomology degree {}",
                i
            ))),
        }
    }
}

impl std::fmt::Display for CohomologyDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.h0, self.h1, self.h2)
    }
}

/// Cohomology dimensions of the presentation complex with coefficients in
/// the rank one local system of the character `t`.
///
/// The chain complex is evaluated at t^{-1} (the dual system computes the
/// cohomology of L_t with field coefficients); at torsion characters the
/// dims are symmetric under inversion, which the test suite asserts, so
/// the convention is fixed here once and never revisited.
pub fn twisted_dims(p: &Presentation, t: &TorsionCharacter) -> Result<CohomologyDims> {
    let dual = t.inverse();
    let d1 = p.augmentation_column(&dual)?;
    let d2 = p.fox_jacobian(&dual)?;
    let rank1 = d1.rank();
    let rank2 = d2.rank();
    let n = p.generators();
    let m = p.relators().len();
    Ok(CohomologyDims {
        h0: 1 - rank1,
        h1: n - rank1 - rank2,
        h2: m - rank2,
    })
}

/// Membership in the jump locus V^i_k: true iff dim H^i(U, L_t) >= k.
pub fn jump_membership(
    p: &Presentation,
    t: &TorsionCharacter,
    degree: u8,
    k: usize,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "jump multiplicity k must be at least 1".into(),
        ));
    }
    Ok(twisted_dims(p, t)?.degree(degree)? >= k)
}
