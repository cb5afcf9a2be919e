//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`CycScalar`] is a residue representative modulo the N-th cyclotomic
//! polynomial Phi_N, with rational coefficients. The representative is
//! canonical (degree < phi(N)), so equality is decidable: two scalars are
//! equal iff their coefficient vectors agree after embedding both into
//! Q(zeta_L) for L = lcm of the conductors.
//!
//! All values are immutable after construction and every operation is pure,
//! so scalars can be shared freely across scan workers. The only shared
//! state is a cache of cyclotomic polynomials behind a mutex.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Euler's totient, by trial division. Conductors stay small here.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n > 0, "euler_phi(0)");
    let mut n = n;
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1u64;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the N-th cyclotomic polynomial Phi_N, lowest degree first.
///
/// Computed as (x^N - 1) / prod_{d | N, d < N} Phi_d by exact integer
/// division, and cached.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n > 0, "cyclotomic_polynomial(0)");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        let mut d = 1;
        while d < n {
            if n.is_multiple_of(d) {
                num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
            }
            d += 1;
        }
        num
    };
    let arc = Arc::new(poly);
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&arc));
    arc
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// division must be remainder-free (guaranteed for cyclotomic factors).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor not monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (dn..num.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dn] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i - dn + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

fn trim(coeffs: &mut Vec<BigRational>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

/// Remainder of `p` modulo the monic integer polynomial `modulus`,
/// padded with zeros to degree(modulus) - 1 coefficients.
fn reduce_mod(mut p: Vec<BigRational>, modulus: &[BigInt]) -> Vec<BigRational> {
    let deg = modulus.len() - 1;
    trim(&mut p);
    while p.len() > deg {
        let c = p.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = p.len() - deg;
        for (j, mj) in modulus.iter().take(deg).enumerate() {
            let t = &c * BigRational::from(mj.clone());
            p[shift + j] -= t;
        }
    }
    p.resize(deg, BigRational::zero());
    p
}

/// An element of the cyclotomic field Q(zeta_N), stored as the canonical
/// residue representative modulo Phi_N.
#[derive(Clone)]
pub struct CycScalar {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    fn from_coeffs(conductor: u64, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len() as u64, euler_phi(conductor));
        CycScalar { conductor, coeffs }
    }

    /// The rational number `q` as a scalar (conductor 1).
    pub fn from_rational(q: BigRational) -> Self {
        CycScalar {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// The root of unity e^{2 pi i q}, exactly: zeta_d^k where q = k/d in
    /// lowest terms after reduction modulo 1. The result has multiplicative
    /// order d.
    pub fn root_of_unity(q: Rational64) -> Self {
        let q = crate::character::mod1(q);
        let d = *q.denom() as u64;
        let k = *q.numer() as u64;
        let phi = cyclotomic_polynomial(d);
        let deg = phi.len() - 1;
        let mut p = vec![BigRational::zero(); k as usize + 1];
        p[k as usize] = BigRational::one();
        let coeffs = if (k as usize) < deg {
            let mut p = p;
            p.resize(deg, BigRational::zero());
            p
        } else {
            reduce_mod(p, &phi)
        };
        CycScalar {
            conductor: d,
            coeffs,
        }
    }

    /// zeta_n, a primitive n-th root of unity.
    pub fn zeta(n: u64) -> Self {
        assert!(n > 0);
        Self::root_of_unity(Rational64::new(1, n as i64))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Embed into Q(zeta_m); the current conductor must divide `m`.
    pub fn embed(&self, m: u64) -> Result<CycScalar> {
        if m == 0 || !m.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch {
                from: self.conductor,
                to: m,
            });
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let k = (m / self.conductor) as usize;
        let phi = cyclotomic_polynomial(m);
        let mut p = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * k] = c.clone();
        }
        Ok(CycScalar::from_coeffs(m, reduce_mod(p, &phi)))
    }

    fn unify(&self, other: &CycScalar) -> (CycScalar, CycScalar) {
        let l = self.conductor.lcm(&other.conductor);
        (self.embed(l).unwrap(), other.embed(l).unwrap())
    }

    /// Multiplicative inverse; errors on zero.
    pub fn try_inverse(&self) -> Result<CycScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_polynomial(self.conductor);
        let modulus: Vec<BigRational> = phi.iter().map(|c| BigRational::from(c.clone())).collect();
        // Extended Euclid in Q[x]: s*a + t*Phi = g with g a nonzero constant,
        // since Phi_N is irreducible over Q and a != 0 mod Phi_N.
        let (g, s) = ext_gcd(self.coeffs.clone(), modulus);
        debug_assert_eq!(g.len(), 1, "gcd with Phi_N must be constant");
        let ginv = g[0].recip();
        let inv: Vec<BigRational> = s.iter().map(|c| c * &ginv).collect();
        Ok(CycScalar::from_coeffs(
            self.conductor,
            reduce_mod(inv, &phi),
        ))
    }

    /// Integer power, with negative exponents going through the inverse.
    pub fn pow(&self, e: i64) -> Result<CycScalar> {
        let base = if e < 0 {
            self.try_inverse()?
        } else {
            self.clone()
        };
        let mut acc = CycScalar::one();
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// The rational value if the scalar is rational (constant residue).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

/// Extended Euclid on rational polynomials: returns (g, s) with
/// s*a + t*b = g and g the (non-monic) gcd; only the `a`-cofactor is needed.
fn ext_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a;
    let mut r1 = b;
    trim(&mut r0);
    trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = vec![];
    while !r1.is_empty() {
        let (q, rem) = rat_poly_divrem(&r0, &r1);
        r0 = std::mem::replace(&mut r1, rem);
        let next = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
        s0 = std::mem::replace(&mut s1, next);
    }
    (r0, s0)
}

fn rat_poly_divrem(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut rem: Vec<BigRational> = num.to_vec();
    if num.len() <= dn {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); num.len() - dn];
    for i in (dn..num.len()).rev() {
        let c = &rem[i] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - dn] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[i - dn + j] -= t;
        }
    }
    trim(&mut rem);
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
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
    trim(&mut out);
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), BigRational::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    trim(&mut out);
    out
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.unify(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar::from_rational(BigRational::one())
    }
    fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        let (mut a, b) = self.unify(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        let (mut a, b) = self.unify(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(mut self) -> CycScalar {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        let (a, b) = self.unify(rhs);
        let phi = cyclotomic_polynomial(a.conductor);
        let prod = rat_poly_mul(&a.coeffs, &b.coeffs);
        CycScalar::from_coeffs(a.conductor, reduce_mod(prod, &phi))
    }
}

impl Div for CycScalar {
    type Output = CycScalar;
    /// Exact field division. Panics on a zero divisor; use
    /// [`CycScalar::try_inverse`] where the divisor is not known nonzero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: CycScalar) -> CycScalar {
        let inv = rhs.try_inverse().expect("division by zero CycScalar");
        &self * &inv
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({})", self)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if i == 0 {
                    write!(f, "{}", c)?;
                } else if c.is_one() {
                    write!(f, "z{}^{}", self.conductor, i)?;
                } else {
                    write!(f, "({})*z{}^{}", c, self.conductor, i)?;
                }
                first = false;
                continue;
            }
            if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.conductor, i)?;
            } else {
                write!(f, "({})*z{}^{}", a, self.conductor, i)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn phi_values() {
        for (n, expected) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (8, 4), (12, 4)] {
            assert_eq!(euler_phi(n), expected, "phi({n})");
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_3 = x^2 + x + 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1
        let p3: Vec<i64> = cyclotomic_polynomial(3)
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        assert_eq!(p3, vec![1, 1, 1]);
        let p4: Vec<i64> = cyclotomic_polynomial(4)
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        assert_eq!(p4, vec![1, 0, 1]);
        let p6: Vec<i64> = cyclotomic_polynomial(6)
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        assert_eq!(p6, vec![1, -1, 1]);
    }

    #[test]
    fn root_of_unity_identity() {
        assert!(CycScalar::root_of_unity(r(0, 1)).is_one());
    }

    #[test]
    fn root_of_unity_half_is_minus_one() {
        let m = CycScalar::root_of_unity(r(1, 2));
        assert_eq!(m, CycScalar::from_integer(-1));
        assert!((&m * &m).is_one());
        assert!(!m.is_one());
    }

    #[test]
    fn root_of_unity_third_satisfies_minimal_polynomial() {
        let z = CycScalar::root_of_unity(r(1, 3));
        let sum = &(&z * &z) + &z;
        assert_eq!(sum + CycScalar::one(), CycScalar::zero());
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in 1..=12u64 {
            let z = CycScalar::zeta(n);
            assert!(z.pow(n as i64).unwrap().is_one(), "zeta_{n}^{n} != 1");
            for m in 1..n {
                assert!(!z.pow(m as i64).unwrap().is_one(), "zeta_{n}^{m} == 1");
            }
        }
    }

    #[test]
    fn cube_of_zeta3_is_one() {
        let z = CycScalar::zeta(3);
        assert!((&(&z * &z) * &z).is_one());
    }

    #[test]
    fn i_plus_minus_i_is_zero() {
        let z = CycScalar::zeta(4);
        let z3 = z.pow(3).unwrap();
        assert!((&z + &z3).is_zero());
    }

    #[test]
    fn inverse_of_zeta6() {
        let z = CycScalar::zeta(6);
        assert_eq!(z.try_inverse().unwrap(), z.pow(5).unwrap());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            CycScalar::zero().try_inverse(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        // zeta_6^2 = zeta_3 across conductors
        let a = CycScalar::zeta(6).pow(2).unwrap();
        let b = CycScalar::zeta(3);
        assert_eq!(a, b);
        assert!((&a - &b).is_zero());
        // zeta_2 * zeta_3 = zeta_6^5 (exponent 1/2 + 1/3 = 5/6)
        let c = &CycScalar::zeta(2) * &CycScalar::zeta(3);
        assert_eq!(c, CycScalar::root_of_unity(r(5, 6)));
    }

    #[test]
    fn embedding_commutes_with_arithmetic() {
        let a = CycScalar::zeta(4);
        let b = CycScalar::root_of_unity(r(3, 4));
        let sum_then_embed = (&a + &b).embed(12).unwrap();
        let embed_then_sum = &a.embed(12).unwrap() + &b.embed(12).unwrap();
        assert_eq!(sum_then_embed, embed_then_sum);
        let prod_then_embed = (&a * &b).embed(12).unwrap();
        let embed_then_prod = &a.embed(12).unwrap() * &b.embed(12).unwrap();
        assert_eq!(prod_then_embed, embed_then_prod);
    }

    #[test]
    fn embed_rejects_non_multiple() {
        let a = CycScalar::zeta(4);
        assert!(a.embed(6).is_err());
    }
}
