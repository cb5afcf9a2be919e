//! Built-in examples: braid words for links of classical plane curve
//! germs together with exact branch parametrizations of the same germs,
//! so linking numbers can be computed along both routes and compared.

use num_rational::{BigRational, Rational64};

use crate::braid::{BraidWord, LinkingMatrix};
use crate::branches::{Branch, Parametrization, PolyXY, Series, Trunc};
use crate::character::TorsionCharacter;
use crate::error::{Error, Result};
use crate::variety::TorsionCoset;

/// Translate exponents as (numerator, denominator) pairs plus integer
/// equation rows, the raw form of a documented locus coset.
type CosetData = (Vec<(i64, i64)>, Vec<Vec<i64>>);

/// One named germ: braid closure of its link, branch data, and the
/// frozen linking matrix both routes must reproduce.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    name: &'static str,
    description: &'static str,
    braid: BraidWord,
    branches: Vec<Branch>,
    linking: Vec<Vec<i64>>,
    v11: Option<Vec<CosetData>>,
}

impl CorpusEntry {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn description(&self) -> &'static str {
        self.description
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The documented linking matrix of the germ.
    pub fn expected_linking(&self) -> LinkingMatrix {
        LinkingMatrix::new(self.linking.clone()).expect("corpus linking matrix is well formed")
    }

    /// Documented description of V^1_1 away from the trivial character, as
    /// a union of torsion translated subtori, where such a description is
    /// recorded for the entry. An empty list documents that no nontrivial
    /// character jumps.
    pub fn documented_v11(&self) -> Option<Vec<TorsionCoset>> {
        self.v11.as_ref().map(|cosets| {
            cosets
                .iter()
                .map(|(translate, equations)| {
                    let exponents = translate
                        .iter()
                        .map(|&(n, d)| Rational64::new(n, d))
                        .collect();
                    TorsionCoset::new(TorsionCharacter::new(exponents), equations.clone())
                        .expect("corpus coset is well formed")
                })
                .collect()
        })
    }
}

/// Names of the built-in examples, in presentation order.
pub fn names() -> Vec<&'static str> {
    vec![
        "hopf",
        "three-lines",
        "four-lines",
        "tangent-pair",
        "cusp",
        "cusp-line",
    ]
}

/// Looks up a built-in example by name.
pub fn entry(name: &str) -> Result<CorpusEntry> {
    match name {
        "hopf" => Ok(hopf()),
        "three-lines" => Ok(three_lines()),
        "four-lines" => Ok(four_lines()),
        "tangent-pair" => Ok(tangent_pair()),
        "cusp" => Ok(cusp()),
        "cusp-line" => Ok(cusp_line()),
        other => Err(Error::UnknownCorpus(other.to_string())),
    }
}

/// Every built-in example.
pub fn all() -> Vec<CorpusEntry> {
    names()
        .into_iter()
        .map(|name| entry(name).expect("listed corpus entry exists"))
        .collect()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn series(terms: &[(i64, u32)]) -> Series {
    Series::new(
        terms.iter().map(|&(c, e)| (rat(c), e)).collect(),
        Trunc::Exact,
    )
}

fn param(x: &[(i64, u32)], y: &[(i64, u32)]) -> Parametrization {
    Parametrization::new(series(x), series(y)).expect("corpus parametrization is valid")
}

fn poly(monomials: &[(i64, u32, u32)]) -> PolyXY {
    PolyXY::new(monomials.iter().map(|&(c, i, j)| (rat(c), i, j)).collect())
        .expect("corpus polynomial is valid")
}

fn branch(p: &[(i64, u32, u32)], x: &[(i64, u32)], y: &[(i64, u32)]) -> Branch {
    Branch::new(Some(poly(p)), Some(param(x, y))).expect("corpus branch is valid")
}

fn braid(strands: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(strands, letters.to_vec()).expect("corpus braid is valid")
}

/// Two transverse lines y = x and y = -x: the Hopf link.
fn hopf() -> CorpusEntry {
    CorpusEntry {
        name: "hopf",
        description: "two transverse lines (Hopf link)",
        braid: braid(2, &[1, 1]),
        branches: vec![
            branch(&[(1, 0, 1), (-1, 1, 0)], &[(1, 1)], &[(1, 1)]),
            branch(&[(1, 0, 1), (1, 1, 0)], &[(1, 1)], &[(-1, 1)]),
        ],
        linking: vec![vec![0, 1], vec![1, 0]],
        v11: Some(vec![]),
    }
}

/// Three pairwise transverse lines y = 0, y = x, y = -x.
fn three_lines() -> CorpusEntry {
    CorpusEntry {
        name: "three-lines",
        description: "three pairwise transverse lines",
        braid: braid(3, &[1, 2, 1, 2, 1, 2]),
        branches: vec![
            branch(&[(1, 0, 1)], &[(1, 1)], &[]),
            branch(&[(1, 0, 1), (-1, 1, 0)], &[(1, 1)], &[(1, 1)]),
            branch(&[(1, 0, 1), (1, 1, 0)], &[(1, 1)], &[(-1, 1)]),
        ],
        linking: vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        v11: Some(vec![(vec![(0, 1), (0, 1), (0, 1)], vec![vec![1, 1, 1]])]),
    }
}

/// Four pairwise transverse lines y = 0, y = x, y = -x, y = 2x.
fn four_lines() -> CorpusEntry {
    CorpusEntry {
        name: "four-lines",
        description: "four pairwise transverse lines",
        braid: braid(4, &[1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3]),
        branches: vec![
            branch(&[(1, 0, 1)], &[(1, 1)], &[]),
            branch(&[(1, 0, 1), (-1, 1, 0)], &[(1, 1)], &[(1, 1)]),
            branch(&[(1, 0, 1), (1, 1, 0)], &[(1, 1)], &[(-1, 1)]),
            branch(&[(1, 0, 1), (-2, 1, 0)], &[(1, 1)], &[(2, 1)]),
        ],
        linking: vec![
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![1, 1, 1, 0],
        ],
        v11: Some(vec![(
            vec![(0, 1), (0, 1), (0, 1), (0, 1)],
            vec![vec![1, 1, 1, 1]],
        )]),
    }
}

/// Two smooth branches y = x^2 and y = -x^2 meeting with contact order
/// two: the (2, 4) torus link.
fn tangent_pair() -> CorpusEntry {
    CorpusEntry {
        name: "tangent-pair",
        description: "two tangent smooth branches (contact order two)",
        braid: braid(2, &[1, 1, 1, 1]),
        branches: vec![
            branch(&[(1, 0, 1), (-1, 2, 0)], &[(1, 1)], &[(1, 2)]),
            branch(&[(1, 0, 1), (1, 2, 0)], &[(1, 1)], &[(-1, 2)]),
        ],
        linking: vec![vec![0, 2], vec![2, 0]],
        v11: Some(vec![(vec![(1, 2), (0, 1)], vec![vec![1, 1]])]),
    }
}

/// The cuspidal cubic y^2 = x^3: a single branch whose link is the
/// trefoil knot.
fn cusp() -> CorpusEntry {
    CorpusEntry {
        name: "cusp",
        description: "cuspidal cubic (trefoil knot)",
        braid: braid(2, &[1, 1, 1]),
        branches: vec![branch(&[(1, 0, 2), (-1, 3, 0)], &[(1, 2)], &[(1, 3)])],
        linking: vec![vec![0]],
        v11: Some(vec![
            (vec![(1, 6)], vec![vec![1]]),
            (vec![(5, 6)], vec![vec![1]]),
        ]),
    }
}

/// The cusp y^2 = x^3 together with its smooth transversal y = 0; the
/// two components link three times.
fn cusp_line() -> CorpusEntry {
    CorpusEntry {
        name: "cusp-line",
        description: "cuspidal cubic plus the line y = 0",
        braid: braid(3, &[2, 1, 2, 2, 1, 2, 2, 1, 2]),
        branches: vec![
            branch(&[(1, 0, 2), (-1, 3, 0)], &[(1, 2)], &[(1, 3)]),
            branch(&[(1, 0, 1)], &[(1, 1)], &[]),
        ],
        linking: vec![vec![0, 3], vec![3, 0]],
        v11: None,
    }
}
