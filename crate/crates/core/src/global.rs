//! Hermitian matrices over an imaginary quadratic field `k = Q(√Δ)` and the
//! support and per-prime dimension of the associated special cycle.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cycle::{analyze, CycleStatus};
use crate::error::{Error, Result};
use crate::json::RationalString;
use crate::lattice::HermGram;
use crate::matrix::{self, check_hermitian, Field, Matrix};
use crate::padic::{
    check_imaginary_quadratic, hilbert_symbol, rat, rational_prime_support, splitting_type, val_p,
    Place, Rational, SplittingType, DEFAULT_FACTOR_BOUND,
};
use crate::ramified::{OhElement, RamifiedContext};

/// `x + y√Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadFieldElement {
    #[serde(with = "crate::json::rational")]
    pub x: Rational,
    #[serde(with = "crate::json::rational", default = "Rational::zero")]
    pub y: Rational,
}

impl QuadFieldElement {
    pub fn new(x: Rational, y: Rational) -> Self {
        QuadFieldElement { x, y }
    }

    pub fn from_int(x: i64) -> Self {
        QuadFieldElement::new(rat(x), Rational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}·√Δ", self.x, self.y)
        }
    }
}

/// `k = Q(√Δ)` for a negative squarefree `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadField {
    delta: i64,
}

impl QuadField {
    pub fn new(delta: i64) -> Result<Self> {
        check_imaginary_quadratic(delta)?;
        Ok(QuadField { delta })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn norm(&self, z: &QuadFieldElement) -> Rational {
        &z.x * &z.x - rat(self.delta) * &z.y * &z.y
    }

    /// `z ∈ O_k` iff `2x`, `2y` and `x² − Δy²` are integers.
    pub fn is_integral(&self, z: &QuadFieldElement) -> bool {
        let two = rat(2);
        (&two * &z.x).is_integer() && (&two * &z.y).is_integer() && self.norm(z).is_integer()
    }

    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        splitting_type(self.delta, p)
    }
}

impl Field for QuadField {
    type Elem = QuadFieldElement;

    fn zero(&self) -> QuadFieldElement {
        QuadFieldElement::default()
    }

    fn one(&self) -> QuadFieldElement {
        QuadFieldElement::from_int(1)
    }

    fn add(&self, a: &QuadFieldElement, b: &QuadFieldElement) -> QuadFieldElement {
        QuadFieldElement::new(&a.x + &b.x, &a.y + &b.y)
    }

    fn sub(&self, a: &QuadFieldElement, b: &QuadFieldElement) -> QuadFieldElement {
        QuadFieldElement::new(&a.x - &b.x, &a.y - &b.y)
    }

    fn mul(&self, a: &QuadFieldElement, b: &QuadFieldElement) -> QuadFieldElement {
        let d = rat(self.delta);
        QuadFieldElement::new(&a.x * &b.x + d * &a.y * &b.y, &a.x * &b.y + &a.y * &b.x)
    }

    fn neg(&self, a: &QuadFieldElement) -> QuadFieldElement {
        QuadFieldElement::new(-&a.x, -&a.y)
    }

    fn conj(&self, a: &QuadFieldElement) -> QuadFieldElement {
        QuadFieldElement::new(a.x.clone(), -&a.y)
    }

    fn inv(&self, a: &QuadFieldElement) -> Option<QuadFieldElement> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        Some(QuadFieldElement::new(&a.x / &n, -&a.y / &n))
    }

    fn is_zero(&self, a: &QuadFieldElement) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }
}

/// A Hermitian matrix over `O_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalHermitian {
    field: QuadField,
    m: Matrix<QuadFieldElement>,
}

impl GlobalHermitian {
    /// Checks shape, conjugate symmetry, `O_k` entries and nonsingularity.
    pub fn new(field: QuadField, m: Matrix<QuadFieldElement>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a nonempty square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        check_hermitian(&field, &m)?;
        if let Some((row, col, _)) = m.entries().find(|(_, _, z)| !field.is_integral(z)) {
            return Err(Error::NotInRingOfIntegers { row, col });
        }
        let g = GlobalHermitian { field, m };
        if g.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(g)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn matrix(&self) -> &Matrix<QuadFieldElement> {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.rows()
    }

    /// `det T`, rational because `T` is Hermitian.
    pub fn det(&self) -> Rational {
        leading_minor(&self.field, &self.m, self.m.rows())
    }

    /// Image of `T` under `√Δ ↦ π` in `H = Q_p(π)`, `π² = Δ`.
    pub fn embed(&self, ctx: &RamifiedContext) -> Result<HermGram> {
        if ctx.pi0() != &rat(self.field.delta) {
            return Err(Error::InvalidContext(format!(
                "π₀ = {} does not equal Δ = {}",
                ctx.pi0(),
                self.field.delta
            )));
        }
        HermGram::new(
            ctx.clone(),
            self.m.map(|z| OhElement::new(z.x.clone(), z.y.clone())),
        )
    }
}

fn leading_minor(field: &QuadField, m: &Matrix<QuadFieldElement>, k: usize) -> Rational {
    let idx: Vec<usize> = (0..k).collect();
    let d = matrix::det(field, &m.submatrix(&idx)).expect("square submatrix");
    debug_assert!(d.y.is_zero(), "Hermitian minors are rational");
    d.x
}

/// All leading principal minors are positive.
pub fn is_positive_definite(t: &GlobalHermitian) -> bool {
    (1..=t.rank()).all(|k| leading_minor(&t.field, &t.m, k).is_positive())
}

/// Inert primes at which `det T` has odd valuation.
pub fn diff0(t: &GlobalHermitian, factor_bound: u64) -> Result<Vec<u64>> {
    let det = t.det();
    let mut out = Vec::new();
    for p in rational_prime_support(&det, factor_bound)? {
        let odd = val_p(&det, p)
            .finite()
            .is_some_and(|v| v.rem_euclid(2) == 1);
        if odd && t.field.splitting_type(p)? == SplittingType::Inert {
            out.push(p);
        }
    }
    Ok(out)
}

/// Whether `V_T` contains a self-dual lattice: `(det T, Δ)_p = 1` at every
/// inert `p`. Only inert primes dividing `2·det T·Δ` can fail.
pub fn self_dual_exists(t: &GlobalHermitian, factor_bound: u64) -> Result<bool> {
    let det = t.det();
    let delta = rat(t.field.delta);
    let mut support = rational_prime_support(&(&det * &delta * rat(2)), factor_bound)?;
    support.dedup();
    for p in support {
        if t.field.splitting_type(p)? == SplittingType::Inert
            && hilbert_symbol(&det, &delta, Place::Prime(p))? != 1
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalStatus {
    Empty,
    InertCase,
    RamifiedSupported,
}

/// The local picture at an odd prime dividing `Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub epsilon: RationalString,
    pub delta_sq: RationalString,
    #[serde(flatten)]
    pub cycle: CycleStatus,
    /// The special fiber at `p` is nonempty; only asserted when `V_T`
    /// contains a self-dual lattice.
    pub fiber_nonempty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalReport {
    pub delta: i64,
    pub positive_definite: bool,
    pub det: RationalString,
    pub diff0: Vec<u64>,
    pub status: GlobalStatus,
    pub self_dual_exists: Option<bool>,
    pub ramified_primes_odd: Vec<u64>,
    pub per_prime: BTreeMap<u64, PrimeReport>,
    pub unsupported_primes: Vec<u64>,
}

/// JSON input `{"delta": Δ, "matrix": [[{"x": .., "y": ..}, ..], ..]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalInput {
    pub delta: i64,
    pub matrix: Vec<Vec<QuadFieldElement>>,
}

impl GlobalInput {
    pub fn into_hermitian(self) -> Result<GlobalHermitian> {
        let field = QuadField::new(self.delta)?;
        GlobalHermitian::new(field, crate::json::square_matrix(self.matrix)?)
    }
}

/// Local context at an odd `p | Δ` with `ε = Δ/p`.
pub fn ramified_context(field: QuadField, p: u64) -> Result<RamifiedContext> {
    let delta = field.delta();
    if delta.rem_euclid(p as i64) != 0 {
        return Err(Error::Precondition(format!("{p} does not divide {delta}")));
    }
    RamifiedContext::new(p, Rational::new(delta.into(), (p as i64).into()))
}

impl PrimeReport {
    /// `t(L_p) / 2`.
    pub fn dimension(&self) -> Option<usize> {
        self.cycle.invariants().map(|inv| inv.dimension)
    }
}

/// Support, diff set and per-prime dimensions for `T`.
pub fn global_report(t: &GlobalHermitian, factor_bound: u64) -> Result<GlobalReport> {
    let field = t.field;
    let delta = field.delta();
    let det = t.det();
    let positive_definite = is_positive_definite(t);
    let diff = diff0(t, factor_bound)?;
    let ramified = crate::padic::prime_divisors(&delta.into(), factor_bound)?;
    let unsupported_primes: Vec<u64> = ramified.iter().copied().filter(|&p| p == 2).collect();
    let ramified_primes_odd: Vec<u64> = ramified.iter().copied().filter(|&p| p != 2).collect();

    let status = if !positive_definite || diff.len() > 1 {
        GlobalStatus::Empty
    } else if diff.len() == 1 {
        GlobalStatus::InertCase
    } else {
        GlobalStatus::RamifiedSupported
    };

    let mut per_prime = BTreeMap::new();
    let mut self_dual = None;
    if status == GlobalStatus::RamifiedSupported {
        let sd = self_dual_exists(t, factor_bound)?;
        self_dual = Some(sd);
        for &p in &ramified_primes_odd {
            let ctx = ramified_context(field, p)?;
            let cycle = analyze(&t.embed(&ctx)?)?;
            per_prime.insert(
                p,
                PrimeReport {
                    epsilon: RationalString(ctx.epsilon().clone()),
                    delta_sq: RationalString(ctx.delta_sq().clone()),
                    cycle,
                    fiber_nonempty: sd,
                },
            );
        }
    }
    Ok(GlobalReport {
        delta,
        positive_definite,
        det: RationalString(det),
        diff0: diff,
        status,
        self_dual_exists: self_dual,
        ramified_primes_odd,
        per_prime,
        unsupported_primes,
    })
}

/// [`global_report`] with the default factorization bound.
pub fn global_report_default(t: &GlobalHermitian) -> Result<GlobalReport> {
    global_report(t, DEFAULT_FACTOR_BOUND)
}
