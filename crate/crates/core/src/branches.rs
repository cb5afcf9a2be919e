//! Branches of plane curve germs: truncated parametrizations, defining
//! polynomials, and intersection multiplicities as series valuations.
//!
//! The intersection multiplicity of two distinct branches equals the
//! linking number of their knots in the singularity link, so this module
//! is the independent oracle against which braid crossing counts are
//! checked. Series carry explicit truncation orders and every query whose
//! answer could be hidden by the truncation fails loudly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::LinkingMatrix;
use crate::error::{Error, Result};

/// Truncation marker of a power series: either the series is known
/// exactly (a polynomial), or terms of exponent >= the order are unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trunc {
    Exact,
    Order(u32),
}

impl Trunc {
    fn min(self, other: Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Exact, t) | (t, Trunc::Exact) => t,
            (Trunc::Order(a), Trunc::Order(b)) => Trunc::Order(a.min(b)),
        }
    }

    /// Bound on where the unknown tail of a factor with this truncation
    /// can first contribute to a product whose other factor has valuation
    /// at least `v` (None meaning the other factor is exactly zero).
    fn shifted(self, v: Option<u32>) -> Trunc {
        match (self, v) {
            (Trunc::Exact, _) | (_, None) => Trunc::Exact,
            (Trunc::Order(t), Some(v)) => Trunc::Order(t.saturating_add(v)),
        }
    }

    fn admits(self, exponent: u32) -> bool {
        match self {
            Trunc::Exact => true,
            Trunc::Order(t) => exponent < t,
        }
    }
}

/// One-variable power series with rational coefficients, truncation-aware.
/// Stored terms always lie below the truncation order, so every stored
/// term is reliable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<u32, BigRational>,
    trunc: Trunc,
}

impl Series {
    pub fn new(terms: Vec<(BigRational, u32)>, trunc: Trunc) -> Self {
        let mut map = BTreeMap::new();
        for (coeff, exponent) in terms {
            if coeff.is_zero() || !trunc.admits(exponent) {
                continue;
            }
            let slot = map.entry(exponent).or_insert_with(BigRational::zero);
            *slot += coeff;
            if slot.is_zero() {
                map.remove(&exponent);
            }
        }
        Series { terms: map, trunc }
    }

    pub fn zero() -> Self {
        Series {
            terms: BTreeMap::new(),
            trunc: Trunc::Exact,
        }
    }

    pub fn one() -> Self {
        Series::new(vec![(BigRational::one(), 0)], Trunc::Exact)
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Smallest exponent with a (reliable) nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    /// Lower bound on the true valuation: the first known term, or the
    /// truncation order when nothing is known; None means the series is
    /// exactly zero.
    fn valuation_lower_bound(&self) -> Option<u32> {
        match (self.valuation(), self.trunc) {
            (Some(v), _) => Some(v),
            (None, Trunc::Order(t)) => Some(t),
            (None, Trunc::Exact) => None,
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc == Trunc::Exact
    }

    pub fn add(&self, other: &Series) -> Series {
        let trunc = self.trunc.min(other.trunc);
        let mut terms: Vec<(BigRational, u32)> =
            self.terms.iter().map(|(e, c)| (c.clone(), *e)).collect();
        terms.extend(other.terms.iter().map(|(e, c)| (c.clone(), *e)));
        Series::new(terms, trunc)
    }

    pub fn scale(&self, factor: &BigRational) -> Series {
        Series::new(
            self.terms.iter().map(|(e, c)| (c * factor, *e)).collect(),
            self.trunc,
        )
    }

    pub fn mul(&self, other: &Series) -> Series {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Series::zero();
        }
        let trunc = self
            .trunc
            .shifted(other.valuation_lower_bound())
            .min(other.trunc.shifted(self.valuation_lower_bound()));
        let mut terms = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push((ca * cb, ea + eb));
            }
        }
        Series::new(terms, trunc)
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// A polynomial in two variables with rational coefficients, stored as
/// monomials c * x^i * y^j with nonzero c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyXY {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl PolyXY {
    /// Builds from (coeff, x-exponent, y-exponent) monomials; the result
    /// must be a nonzero germ vanishing at the origin.
    pub fn new(monomials: Vec<(BigRational, u32, u32)>) -> Result<Self> {
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (coeff, i, j) in monomials {
            if coeff.is_zero() {
                continue;
            }
            let slot = terms.entry((i, j)).or_insert_with(BigRational::zero);
            *slot += coeff;
            if slot.is_zero() {
                terms.remove(&(i, j));
            }
        }
        if terms.is_empty() {
            return Err(Error::NonReducedInput(
                "defining polynomial is identically zero".into(),
            ));
        }
        if terms.contains_key(&(0, 0)) {
            return Err(Error::InvalidArgument(
                "germ polynomial must vanish at the origin".into(),
            ));
        }
        Ok(PolyXY { terms })
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&BigRational, u32, u32)> {
        self.terms.iter().map(|(&(i, j), c)| (c, i, j))
    }

    /// Degree in y, for resultant bookkeeping.
    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Substitutes the series (x(s), y(s)) for the variables.
    pub fn compose(&self, x: &Series, y: &Series) -> Series {
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut x_pows = Vec::with_capacity(max_i as usize + 1);
        let mut y_pows = Vec::with_capacity(max_j as usize + 1);
        x_pows.push(Series::one());
        y_pows.push(Series::one());
        for i in 1..=max_i {
            let next = x_pows[i as usize - 1].mul(x);
            x_pows.push(next);
        }
        for j in 1..=max_j {
            let next = y_pows[j as usize - 1].mul(y);
            y_pows.push(next);
        }
        let mut acc = Series::zero();
        for (&(i, j), coeff) in &self.terms {
            let term = x_pows[i as usize].mul(&y_pows[j as usize]).scale(coeff);
            acc = acc.add(&term);
        }
        acc
    }
}

/// A primitive parametrization s -> (x(s), y(s)) of a branch through the
/// origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    x: Series,
    y: Series,
}

impl Parametrization {
    /// Validates that the parametrization vanishes at s = 0 and is
    /// primitive (the gcd of all appearing exponents is 1).
    pub fn new(x: Series, y: Series) -> Result<Self> {
        let exponents: Vec<u32> = x.terms().chain(y.terms()).map(|(e, _)| e).collect();
        if exponents.contains(&0) {
            return Err(Error::InvalidArgument(
                "parametrization must vanish at s = 0".into(),
            ));
        }
        let gcd = exponents.iter().fold(0u32, |acc, &e| acc.gcd(&e));
        if gcd != 1 {
            return Err(Error::InvalidArgument(format!(
                "parametrization is not primitive (exponent gcd {})",
                gcd
            )));
        }
        Ok(Parametrization { x, y })
    }

    pub fn x(&self) -> &Series {
        &self.x
    }

    pub fn y(&self) -> &Series {
        &self.y
    }
}

/// A branch of a germ: defining polynomial, parametrization, or both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    poly: Option<PolyXY>,
    param: Option<Parametrization>,
}

impl Branch {
    pub fn new(poly: Option<PolyXY>, param: Option<Parametrization>) -> Result<Self> {
        if poly.is_none() && param.is_none() {
            return Err(Error::MissingRepresentation(
                "branch needs a polynomial or a parametrization".into(),
            ));
        }
        Ok(Branch { poly, param })
    }

    pub fn from_poly(poly: PolyXY) -> Self {
        Branch {
            poly: Some(poly),
            param: None,
        }
    }

    pub fn from_param(param: Parametrization) -> Self {
        Branch {
            poly: None,
            param: Some(param),
        }
    }

    pub fn poly(&self) -> Option<&PolyXY> {
        self.poly.as_ref()
    }

    pub fn param(&self) -> Option<&Parametrization> {
        self.param.as_ref()
    }
}

/// Intersection multiplicity at the origin: the s-adic valuation of the
/// polynomial of `a` composed on the parametrization of `b`.
///
/// A composition that is exactly zero means `b` lies inside the zero set
/// of `a` (the input was not reduced); a composition with no reliable
/// nonzero term means the truncation hides the answer.
pub fn intersection_multiplicity(a: &PolyXY, b: &Parametrization) -> Result<u64> {
    let composed = a.compose(b.x(), b.y());
    match (composed.valuation(), composed.trunc()) {
        (Some(v), _) => Ok(v as u64),
        (None, Trunc::Exact) => Err(Error::NonReducedInput(
            "branch lies in the zero set of the polynomial".into(),
        )),
        (None, Trunc::Order(t)) => Err(Error::InsufficientTruncation { truncation: t }),
    }
}

/// Intersection multiplicity of two branches, trying `a`'s polynomial on
/// `b`'s parametrization first and the symmetric pairing second.
pub fn branch_intersection(a: &Branch, b: &Branch) -> Result<u64> {
    if let (Some(poly), Some(param)) = (a.poly(), b.param()) {
        return intersection_multiplicity(poly, param);
    }
    if let (Some(poly), Some(param)) = (b.poly(), a.param()) {
        return intersection_multiplicity(poly, param);
    }
    Err(Error::MissingRepresentation(
        "branch pair has no polynomial/parametrization pairing".into(),
    ))
}

/// Linking matrix with l_ij = intersection multiplicity of branches i, j.
pub fn linking_matrix_from_branches(branches: &[Branch]) -> Result<LinkingMatrix> {
    let r = branches.len();
    let mut entries = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let l = branch_intersection(&branches[i], &branches[j])? as i64;
            entries[i][j] = l;
            entries[j][i] = l;
        }
    }
    LinkingMatrix::new(entries)
}

/// x-adic valuation of the y-resultant of two polynomials, the classical
/// cross-check for summed intersection multiplicities.
pub fn resultant_x_valuation(f: &PolyXY, g: &PolyXY) -> Result<u64> {
    let res = resultant_y(f, g);
    let valuation = res.iter().position(|c| !c.is_zero());
    match valuation {
        Some(v) => Ok(v as u64),
        None => Err(Error::NonReducedInput(
            "resultant vanishes identically; the polynomials share a component".into(),
        )),
    }
}

/// Coefficients in x (lowest degree first) of Res_y(f, g), by Laplace
/// expansion of the Sylvester matrix over Q[x].
fn resultant_y(f: &PolyXY, g: &PolyXY) -> Vec<BigRational> {
    let m = f.y_degree() as usize;
    let n = g.y_degree() as usize;
    let fc = y_coefficients(f);
    let gc = y_coefficients(g);
    if m == 0 {
        return xpoly_pow(&fc[0], n);
    }
    if n == 0 {
        return xpoly_pow(&gc[0], m);
    }
    let size = m + n;
    let mut sylvester: Vec<Vec<Vec<BigRational>>> = vec![vec![vec![]; size]; size];
    for row in 0..n {
        for (k, coeff) in fc.iter().enumerate() {
            sylvester[row][row + m - k] = coeff.clone();
        }
    }
    for row in 0..m {
        for (k, coeff) in gc.iter().enumerate() {
            sylvester[n + row][row + n - k] = coeff.clone();
        }
    }
    xpoly_det(sylvester)
}

/// Coefficient of y^j as a polynomial in x, for j = 0..=deg_y.
fn y_coefficients(p: &PolyXY) -> Vec<Vec<BigRational>> {
    let deg = p.y_degree() as usize;
    let mut out = vec![vec![]; deg + 1];
    for (c, i, j) in p.monomials() {
        let slot = &mut out[j as usize];
        if slot.len() <= i as usize {
            slot.resize(i as usize + 1, BigRational::zero());
        }
        slot[i as usize] += c;
    }
    out
}

fn xpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn xpoly_pow(a: &[BigRational], k: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::one()];
    for _ in 0..k {
        acc = xpoly_mul(&acc, a);
    }
    acc
}

fn xpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    out
}

/// Determinant of a small matrix of x-polynomials by cofactor expansion.
fn xpoly_det(m: Vec<Vec<Vec<BigRational>>>) -> Vec<BigRational> {
    let size = m.len();
    if size == 1 {
        return m.into_iter().next().unwrap().into_iter().next().unwrap();
    }
    let mut det: Vec<BigRational> = vec![];
    for pivot in 0..size {
        if m[pivot][0].iter().all(|c| c.is_zero()) {
            continue;
        }
        let minor: Vec<Vec<Vec<BigRational>>> = m
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != pivot)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = xpoly_mul(&m[pivot][0], &xpoly_det(minor));
        det = if pivot % 2 == 0 {
            let mut d = det;
            if d.len() < term.len() {
                d.resize(term.len(), BigRational::zero());
            }
            for (i, t) in term.iter().enumerate() {
                d[i] += t;
            }
            d
        } else {
            xpoly_sub(&det, &term)
        };
    }
    det
}

/// Rational coefficient in the branch input format: a bare integer or a
/// string `a/b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRepr {
    Int(i64),
    Text(String),
}

impl CoeffRepr {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            CoeffRepr::Int(n) => Ok(BigRational::from(BigInt::from(*n))),
            CoeffRepr::Text(s) => s
                .trim()
                .parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("coefficient {:?}: {}", s, e))),
        }
    }
}

/// Serde carrier for a parametrization: term lists [coeff, exponent] and
/// an optional truncation order (omitted means the terms are exact).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamInput {
    pub x: Vec<(CoeffRepr, u32)>,
    pub y: Vec<(CoeffRepr, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
}

/// Serde carrier for a branch: `param` and/or `poly` ([coeff, i, j]
/// monomials).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<ParamInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<(CoeffRepr, u32, u32)>>,
}

impl TryFrom<BranchInput> for Branch {
    type Error = Error;
    fn try_from(input: BranchInput) -> Result<Branch> {
        let poly = input
            .poly
            .map(|monomials| {
                let terms = monomials
                    .iter()
                    .map(|(c, i, j)| Ok((c.to_rational()?, *i, *j)))
                    .collect::<Result<Vec<_>>>()?;
                PolyXY::new(terms)
            })
            .transpose()?;
        let param = input
            .param
            .map(|p| {
                let trunc = p.trunc.map_or(Trunc::Exact, Trunc::Order);
                let x = Series::new(series_terms(&p.x)?, trunc);
                let y = Series::new(series_terms(&p.y)?, trunc);
                Parametrization::new(x, y)
            })
            .transpose()?;
        Branch::new(poly, param)
    }
}

fn series_terms(terms: &[(CoeffRepr, u32)]) -> Result<Vec<(BigRational, u32)>> {
    terms
        .iter()
        .map(|(c, e)| Ok((c.to_rational()?, *e)))
        .collect()
}

fn coeff_repr(c: &BigRational) -> CoeffRepr {
    if c.is_integer() {
        if let Some(n) = c.numer().to_i64() {
            return CoeffRepr::Int(n);
        }
    }
    CoeffRepr::Text(c.to_string())
}

impl From<&Branch> for BranchInput {
    fn from(branch: &Branch) -> BranchInput {
        let param = branch.param().map(|p| {
            let trunc = match p.x().trunc().min(p.y().trunc()) {
                Trunc::Exact => None,
                Trunc::Order(t) => Some(t),
            };
            ParamInput {
                x: p.x().terms().map(|(e, c)| (coeff_repr(c), e)).collect(),
                y: p.y().terms().map(|(e, c)| (coeff_repr(c), e)).collect(),
                trunc,
            }
        });
        let poly = branch.poly().map(|p| {
            p.monomials()
                .map(|(c, i, j)| (coeff_repr(c), i, j))
                .collect()
        });
        BranchInput { param, poly }
    }
}
