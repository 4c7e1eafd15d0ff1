//! Arithmetic in the ramified quadratic extension `H = Q_p(π)`, `π² = π₀ = εp`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::RationalRepr;
use crate::matrix::Field;
use crate::padic::{
    check_prime, is_square_unit, rat, reduce_mod_power, residue, smallest_nonresidue, val_p,
    Rational, Valuation,
};

/// The element `a + bπ`. Arithmetic that needs `π₀` goes through a [`RamifiedContext`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OhElement {
    #[serde(with = "crate::json::rational")]
    pub a: Rational,
    #[serde(with = "crate::json::rational", default = "Rational::zero")]
    pub b: Rational,
}

impl OhElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        OhElement { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        OhElement {
            a,
            b: Rational::zero(),
        }
    }

    pub fn from_int(a: i64) -> Self {
        OhElement::from_rational(rat(a))
    }

    pub fn from_strs(a: &str, b: &str) -> Result<Self> {
        Ok(OhElement {
            a: RationalRepr::parse(a)?,
            b: RationalRepr::parse(b)?,
        })
    }

    pub fn zero() -> Self {
        OhElement::default()
    }

    pub fn one() -> Self {
        OhElement::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        OhElement {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        OhElement {
            a: &self.a * q,
            b: &self.b * q,
        }
    }
}

impl fmt::Display for OhElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}π", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} - {}π", self.a, -&self.b),
            _ => write!(f, "{} + {}π", self.a, self.b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Fixes `p`, the unit `ε` with `π₀ = εp`, and the square class of `δ²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedContext {
    p: u64,
    epsilon: Rational,
    delta_sq: Rational,
    pi0: Rational,
}

impl RamifiedContext {
    /// Context with `δ²` set to the smallest positive non-residue mod `p`.
    pub fn new(p: u64, epsilon: Rational) -> Result<Self> {
        check_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        let r = rat(smallest_nonresidue(p) as i64);
        Self::with_delta_sq(p, epsilon, r)
    }

    pub fn with_delta_sq(p: u64, epsilon: Rational, delta_sq: Rational) -> Result<Self> {
        check_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        if val_p(&epsilon, p) != Valuation::Finite(0) {
            return Err(Error::InvalidContext(format!(
                "epsilon = {epsilon} is not a {p}-adic unit"
            )));
        }
        if val_p(&delta_sq, p) != Valuation::Finite(0) || is_square_unit(&delta_sq, p)? {
            return Err(Error::InvalidContext(format!(
                "delta^2 = {delta_sq} must be a non-square {p}-adic unit"
            )));
        }
        let pi0 = &epsilon * rat(p as i64);
        Ok(RamifiedContext {
            p,
            epsilon,
            delta_sq,
            pi0,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn delta_sq(&self) -> &Rational {
        &self.delta_sq
    }

    /// `π₀ = π² = εp`.
    pub fn pi0(&self) -> &Rational {
        &self.pi0
    }

    pub fn pi(&self) -> OhElement {
        OhElement::new(Rational::zero(), Rational::one())
    }

    /// `π^k` for any integer `k`.
    pub fn pi_pow(&self, k: i64) -> OhElement {
        let half = k.div_euclid(2);
        let base = pow_rational(&self.pi0, half);
        if k.rem_euclid(2) == 0 {
            OhElement::from_rational(base)
        } else {
            OhElement::new(Rational::zero(), base)
        }
    }

    pub fn oh_arith(&self, x: &OhElement, y: &OhElement, op: ArithOp) -> OhElement {
        match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
        }
    }

    /// `x̄ / Nm(x)`.
    pub fn oh_inv(&self, x: &OhElement) -> Result<OhElement> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(x.conj().scale(&n.recip()))
    }

    pub fn div(&self, x: &OhElement, y: &OhElement) -> Result<OhElement> {
        Ok(self.mul(x, &self.oh_inv(y)?))
    }

    /// `Nm(a + bπ) = a² − b²π₀`.
    pub fn norm(&self, x: &OhElement) -> Rational {
        &x.a * &x.a - &x.b * &x.b * &self.pi0
    }

    /// `min(2·val_p(a), 2·val_p(b) + 1)`.
    pub fn ord_pi(&self, x: &OhElement) -> Valuation {
        let va = val_p(&x.a, self.p).finite().map(|v| 2 * v);
        let vb = val_p(&x.b, self.p).finite().map(|v| 2 * v + 1);
        match (va, vb) {
            (None, None) => Valuation::Infinity,
            (Some(u), None) | (None, Some(u)) => Valuation::Finite(u),
            (Some(u), Some(w)) => Valuation::Finite(u.min(w)),
        }
    }

    /// π-adic order of a rational (embedded in `H`).
    pub fn ord_pi_rational(&self, q: &Rational) -> Valuation {
        match val_p(q, self.p) {
            Valuation::Finite(v) => Valuation::Finite(2 * v),
            Valuation::Infinity => Valuation::Infinity,
        }
    }

    pub fn is_integral(&self, x: &OhElement) -> bool {
        self.ord_pi(x) >= Valuation::Finite(0)
    }

    /// Whether `q ∈ Nm(H^×)`: write `q = (−π₀)^k·u` and test `u` for squareness.
    pub fn is_norm(&self, q: &Rational) -> Result<bool> {
        if q.is_zero() {
            return Err(Error::ZeroArgument("q"));
        }
        let k = val_p(q, self.p).finite().unwrap();
        let u = q / pow_rational(&-&self.pi0, k);
        is_square_unit(&u, self.p)
    }

    /// Canonical representative of `x + π^k O_H`.
    pub fn reduce_mod_pi_pow(&self, x: &OhElement, k: i64) -> OhElement {
        let m = k.div_euclid(2);
        let a_mod = if k.rem_euclid(2) == 0 { m } else { m + 1 };
        OhElement::new(
            reduce_mod_power(&x.a, a_mod, self.p),
            reduce_mod_power(&x.b, m, self.p),
        )
    }

    /// Image of an integral element in `O_H / π = F_p`.
    pub fn residue(&self, x: &OhElement) -> Result<u64> {
        if !self.is_integral(x) {
            return Err(Error::Precondition(format!("{x} is not integral")));
        }
        residue(&x.a, self.p)
    }

    /// Unit part `q / π₀^(val_p q)` of a nonzero rational.
    pub fn unit_part_wrt_pi0(&self, q: &Rational) -> Option<Rational> {
        let v = val_p(q, self.p).finite()?;
        Some(q / pow_rational(&self.pi0, v))
    }

    /// `u₀ = −ε⁻¹·δ²`, the unit that turns a fundamental matrix into the
    /// Gram matrix of its lattice.
    pub fn cycle_scalar(&self) -> Rational {
        -(&self.delta_sq / &self.epsilon)
    }
}

pub(crate) fn pow_rational(q: &Rational, k: i64) -> Rational {
    let mut acc = Rational::one();
    let base = if k < 0 { q.recip() } else { q.clone() };
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl Field for RamifiedContext {
    type Elem = OhElement;

    fn zero(&self) -> OhElement {
        OhElement::zero()
    }

    fn one(&self) -> OhElement {
        OhElement::one()
    }

    fn add(&self, x: &OhElement, y: &OhElement) -> OhElement {
        OhElement::new(&x.a + &y.a, &x.b + &y.b)
    }

    fn sub(&self, x: &OhElement, y: &OhElement) -> OhElement {
        OhElement::new(&x.a - &y.a, &x.b - &y.b)
    }

    fn mul(&self, x: &OhElement, y: &OhElement) -> OhElement {
        OhElement::new(
            &x.a * &y.a + &x.b * &y.b * &self.pi0,
            &x.a * &y.b + &x.b * &y.a,
        )
    }

    fn neg(&self, x: &OhElement) -> OhElement {
        OhElement::new(-&x.a, -&x.b)
    }

    fn conj(&self, x: &OhElement) -> OhElement {
        x.conj()
    }

    fn inv(&self, x: &OhElement) -> Option<OhElement> {
        self.oh_inv(x).ok()
    }

    fn is_zero(&self, x: &OhElement) -> bool {
        x.is_zero()
    }
}
