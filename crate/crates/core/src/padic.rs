//! Exact arithmetic on rationals viewed inside `Q_p`.
//!
//! Nothing here truncates: valuations and residue symbols of rationals are
//! computed from exact numerators and denominators.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default trial-division bound used when factoring determinants.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// A p-adic (or π-adic) valuation, with `Infinity` reserved for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let q = Rational::from_str(t).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(q)
}

/// Inverse of [`parse_rational`]: `"n"` when the denominator is 1, else `"n/d"`.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact valuation of a nonzero integer; `None` for zero.
pub fn val_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn val_p(q: &Rational, p: u64) -> Valuation {
    match val_int(q.numer(), p) {
        None => Valuation::Infinity,
        Some(vn) => Valuation::Finite(vn - val_int(q.denom(), p).unwrap_or(0)),
    }
}

/// `p^k` as a rational, for any integer `k`.
pub fn p_pow(p: u64, k: i64) -> Rational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

/// `q · p^(−val_p(q))`; `None` for zero.
pub fn unit_part(q: &Rational, p: u64) -> Option<Rational> {
    let v = val_p(q, p).finite()?;
    Some(q * p_pow(p, -v))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Residue of a p-integral rational modulo `p^k` (`k ≥ 1`), in `[0, p^k)`.
pub fn residue_mod_pk(q: &Rational, p: u64, k: u32) -> Result<BigInt> {
    let m = BigInt::from(p).pow(k);
    let inv = mod_inverse(q.denom(), &m)
        .ok_or_else(|| Error::Precondition(format!("{q} is not {p}-integral")))?;
    Ok((q.numer() * inv).mod_floor(&m))
}

/// Residue modulo `p` of a p-integral rational.
pub fn residue(q: &Rational, p: u64) -> Result<u64> {
    Ok(residue_mod_pk(q, p, 1)?.to_u64().expect("residue below p"))
}

/// Canonical representative of the coset `a + p^m Z_p`.
///
/// The representative is `0` when `val_p(a) ≥ m`; otherwise it is `c / p^s`
/// with `s = max(0, −val_p(a))` and `0 ≤ c < p^(m+s)`. Both `s` and `c` are
/// functions of the coset alone.
pub fn reduce_mod_power(a: &Rational, m: i64, p: u64) -> Rational {
    let v = match val_p(a, p) {
        Valuation::Infinity => return Rational::zero(),
        Valuation::Finite(v) => v,
    };
    if v >= m {
        return Rational::zero();
    }
    let s = (-v).max(0);
    let shifted = a * p_pow(p, s);
    let c = residue_mod_pk(&shifted, p, (m + s) as u32).expect("shifted value is p-integral");
    Rational::from_integer(c) / p_pow(p, s)
}

/// Legendre symbol of an integer residue.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let r = a
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p");
    legendre_u64(r, p)
}

fn legendre_u64(r: u64, p: u64) -> i8 {
    if r % p == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a p-adic unit given as a rational.
fn legendre_unit(u: &Rational, p: u64) -> i8 {
    legendre(u.numer(), p) * legendre(u.denom(), p)
}

/// Whether a p-adic unit is a square in `Z_p^×`, for odd `p`.
pub fn is_square_unit(q: &Rational, p: u64) -> Result<bool> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    match val_p(q, p) {
        Valuation::Finite(0) => Ok(legendre_unit(q, p) == 1),
        v => Err(Error::Precondition(format!(
            "is_square_unit needs a {p}-adic unit, got valuation {v}"
        ))),
    }
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&r| legendre_u64(r, p) == -1)
        .expect("an odd prime has a non-residue")
}

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Residue class of a 2-adic unit modulo 8.
fn unit_mod8(u: &Rational) -> u64 {
    // d^(-1) ≡ d (mod 8) for odd d
    let n = u.numer().mod_floor(&BigInt::from(8)).to_u64().unwrap();
    let d = u.denom().mod_floor(&BigInt::from(8)).to_u64().unwrap();
    (n * d) % 8
}

/// Quadratic Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("a"));
    }
    if b.is_zero() {
        return Err(Error::ZeroArgument("b"));
    }
    let p = match place {
        Place::Real => {
            return Ok(if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            });
        }
        Place::Prime(p) => p,
    };
    check_prime(p)?;
    let alpha = val_p(a, p).finite().unwrap();
    let beta = val_p(b, p).finite().unwrap();
    let u = a * p_pow(p, -alpha);
    let v = b * p_pow(p, -beta);
    let alpha_odd = alpha.rem_euclid(2) == 1;
    let beta_odd = beta.rem_euclid(2) == 1;
    if p == 2 {
        let (u8_, v8) = (unit_mod8(&u), unit_mod8(&v));
        let eps = |x: u64| u64::from(x % 4 == 3);
        let omega = |x: u64| u64::from(x == 3 || x == 5);
        let e = eps(u8_) * eps(v8)
            + u64::from(alpha_odd) * omega(v8)
            + u64::from(beta_odd) * omega(u8_);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if alpha_odd && beta_odd && p % 4 == 3 {
        s = -s;
    }
    if beta_odd {
        s *= legendre_unit(&u, p);
    }
    if alpha_odd {
        s *= legendre_unit(&v, p);
    }
    Ok(s)
}

/// How a rational prime decomposes in an imaginary quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

pub fn is_squarefree(n: i64) -> bool {
    let m = n.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut d: u64 = 2;
    while d.saturating_mul(d) <= m {
        if m % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `delta` is a negative squarefree integer.
pub fn check_imaginary_quadratic(delta: i64) -> Result<()> {
    if delta >= 0 {
        return Err(Error::InvalidField(format!("{delta} is not negative")));
    }
    if !is_squarefree(delta) {
        return Err(Error::InvalidField(format!("{delta} is not squarefree")));
    }
    Ok(())
}

/// Discriminant of `Q(√delta)` for squarefree `delta`.
pub fn field_discriminant(delta: i64) -> i64 {
    if delta.rem_euclid(4) == 1 {
        delta
    } else {
        4 * delta
    }
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i8 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    legendre(&BigInt::from(d), p)
}

pub fn splitting_type(delta: i64, p: u64) -> Result<SplittingType> {
    check_imaginary_quadratic(delta)?;
    check_prime(p)?;
    Ok(match kronecker(field_discriminant(delta), p) {
        0 => SplittingType::Ramified,
        1 => SplittingType::Split,
        _ => SplittingType::Inert,
    })
}

/// Distinct prime divisors of a nonzero integer, by trial division up to `bound`.
///
/// A cofactor left over after the bound is accepted only when it is provably
/// prime (smaller than `(bound + 1)^2`); otherwise the result is an error.
pub fn prime_divisors(n: &BigInt, bound: u64) -> Result<Vec<u64>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument("n"));
    }
    let mut m = n.magnitude().clone();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    loop {
        if BigUint::from(d) * BigUint::from(d) > m {
            break;
        }
        if d > bound {
            return Err(Error::FactorizationLimit {
                remainder: m.to_string(),
                bound,
            });
        }
        if (&m % d).is_zero() {
            out.push(d);
            while (&m % d).is_zero() {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let r = m
            .to_u64()
            .ok_or_else(|| Error::Internal("cofactor overflow".into()))?;
        out.push(r);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn rational_prime_support(q: &Rational, bound: u64) -> Result<Vec<u64>> {
    if q.is_zero() {
        return Err(Error::ZeroArgument("q"));
    }
    let mut ps = prime_divisors(q.numer(), bound)?;
    ps.extend(prime_divisors(q.denom(), bound)?);
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// A rational together with the prime through which it is viewed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRational {
    value: Rational,
    p: u64,
}

impl PAdicRational {
    pub fn new(value: Rational, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(PAdicRational { value, p })
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Valuation {
        val_p(&self.value, self.p)
    }

    pub fn unit_part(&self) -> Option<Rational> {
        unit_part(&self.value, self.p)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    pub fn mul(&self, other: &PAdicRational) -> Result<PAdicRational> {
        if self.p != other.p {
            return Err(Error::InvalidContext(format!(
                "primes differ: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(PAdicRational {
            value: &self.value * &other.value,
            p: self.p,
        })
    }
}
