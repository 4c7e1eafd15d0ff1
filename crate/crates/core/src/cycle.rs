//! Dimension and irreducibility of the local special cycle attached to a
//! nonsingular Hermitian matrix `T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{is_split_sum, jordan_split, JordanReport};
use crate::lattice::HermGram;
use crate::ramified::RamifiedContext;

/// Output of [`build_cycle_lattice`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleLattice {
    /// `T` has an entry of negative π-order; the cycle is empty.
    EmptyNonintegral { row: usize, col: usize },
    /// Gram matrix `−ε⁻¹·δ²·T` of the lattice `L`.
    Lattice(HermGram),
}

/// Scales `T` by `u₀ = −ε⁻¹δ²` after checking integrality.
pub fn build_cycle_lattice(t: &HermGram) -> Result<CycleLattice> {
    if t.context().p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if let Some((row, col)) = t.first_nonintegral() {
        return Ok(CycleLattice::EmptyNonintegral { row, col });
    }
    let u0 = t.context().cycle_scalar();
    Ok(CycleLattice::Lattice(t.scaled(&u0)?))
}

/// Invariants of `L` that control the reduced special cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleInvariants {
    /// `rank L_{≥1}`.
    pub m: usize,
    /// Maximal vertex type; the cycle has pure dimension `t / 2`.
    pub t: usize,
    pub dimension: usize,
    pub n_odd: usize,
    pub n_even: usize,
    #[serde(rename = "rank_L1")]
    pub rank_l1: usize,
    #[serde(rename = "L_ge1_split")]
    pub l_ge1_split: bool,
    #[serde(rename = "L_ge2_split")]
    pub l_ge2_split: bool,
    pub irreducible: bool,
    pub zero_dimensional: bool,
    pub single_point: bool,
}

/// Either the empty-cycle marker or the invariants; serialized flat with a
/// `status` tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CycleStatus {
    EmptyNonintegral,
    Nonempty(CycleInvariants),
}

impl CycleStatus {
    pub fn invariants(&self) -> Option<&CycleInvariants> {
        match self {
            CycleStatus::EmptyNonintegral => None,
            CycleStatus::Nonempty(inv) => Some(inv),
        }
    }
}

/// Reads the invariants off a Jordan report of an integral lattice over `Z_p`.
pub fn invariants_from_report(report: &JordanReport, p: u64) -> Result<CycleInvariants> {
    if report.blocks.iter().any(|b| b.scale < 0) {
        return Err(Error::NotIntegral);
    }
    let rank_where = |pred: &dyn Fn(i64) -> bool| -> usize {
        report
            .blocks
            .iter()
            .filter(|b| pred(b.scale))
            .map(|b| b.rank)
            .sum()
    };
    let m = rank_where(&|s| s >= 1);
    let n_odd = rank_where(&|s| s >= 3 && s % 2 == 1);
    let n_even = rank_where(&|s| s >= 2 && s % 2 == 0);
    let rank_l1 = report.rank_at(1);
    let l_ge1_split = is_split_sum(&report.at_least(1), p);
    let l_ge2_split = is_split_sum(&report.at_least(2), p);
    let t = if m % 2 == 1 {
        m - 1
    } else if l_ge1_split {
        m
    } else {
        m - 2
    };
    let even_condition = n_even <= 1 || (n_even == 2 && !l_ge2_split);
    let irreducible = n_odd == 0 && even_condition;
    let zero_dimensional = n_odd == 0 && rank_l1 == 0 && even_condition;
    if zero_dimensional != (t == 0) {
        return Err(Error::Internal(format!(
            "zero-dimensionality criterion disagrees with t = {t}"
        )));
    }
    Ok(CycleInvariants {
        m,
        t,
        dimension: t / 2,
        n_odd,
        n_even,
        rank_l1,
        l_ge1_split,
        l_ge2_split,
        irreducible,
        zero_dimensional,
        single_point: zero_dimensional,
    })
}

/// Invariants of the lattice with integral Gram matrix `g_l`.
pub fn cycle_invariants(g_l: &HermGram) -> Result<CycleInvariants> {
    if !g_l.is_integral() {
        return Err(Error::NotIntegral);
    }
    invariants_from_report(&jordan_split(g_l)?, g_l.context().p())
}

/// `T ↦` status, going through [`build_cycle_lattice`].
pub fn analyze(t: &HermGram) -> Result<CycleStatus> {
    match build_cycle_lattice(t)? {
        CycleLattice::EmptyNonintegral { .. } => Ok(CycleStatus::EmptyNonintegral),
        CycleLattice::Lattice(g) => Ok(CycleStatus::Nonempty(cycle_invariants(&g)?)),
    }
}

/// Context for `T` given `p`, `ε` and optionally a `δ²` representative.
pub fn local_context(
    p: u64,
    epsilon: crate::padic::Rational,
    delta_sq: Option<crate::padic::Rational>,
) -> Result<RamifiedContext> {
    match delta_sq {
        Some(d) => RamifiedContext::with_delta_sq(p, epsilon, d),
        None => RamifiedContext::new(p, epsilon),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::padic::{rat, rat_frac};
    use crate::ramified::OhElement;

    fn ctx(p: u64, eps: i64) -> RamifiedContext {
        RamifiedContext::new(p, rat(eps)).unwrap()
    }

    #[test]
    fn nonintegral_is_empty() {
        let c = ctx(3, 1);
        let inv_pi = c.pi_pow(-1);
        let m = Matrix::from_rows(vec![
            vec![OhElement::one(), inv_pi.clone()],
            vec![inv_pi.conj(), OhElement::one()],
        ])
        .unwrap();
        let t = HermGram::new(c, m).unwrap();
        assert_eq!(
            build_cycle_lattice(&t).unwrap(),
            CycleLattice::EmptyNonintegral { row: 0, col: 1 }
        );
        assert_eq!(analyze(&t).unwrap(), CycleStatus::EmptyNonintegral);
    }

    #[test]
    fn scaling_by_u0() {
        let c = ctx(3, -1);
        let t = HermGram::diagonal(c.clone(), &[rat(1), rat(1)]).unwrap();
        let CycleLattice::Lattice(g) = build_cycle_lattice(&t).unwrap() else {
            panic!("integral");
        };
        // u0 = −(−1)⁻¹·2 = 2
        assert_eq!(g, HermGram::diagonal(c.clone(), &[rat(2), rat(2)]).unwrap());

        let t = HermGram::diagonal(c.clone(), &[c.pi0().clone()]).unwrap();
        let CycleLattice::Lattice(g) = build_cycle_lattice(&t).unwrap() else {
            panic!("integral");
        };
        assert_eq!(*g.entry(0, 0), OhElement::from_rational(c.pi0() * rat(2)));
    }

    #[test]
    fn unimodular_is_a_point() {
        let c = ctx(5, 1);
        let g = HermGram::diagonal(c, &[rat(1), rat(2), rat_frac(1, 3)]).unwrap();
        let inv = cycle_invariants(&g).unwrap();
        assert_eq!((inv.m, inv.t, inv.dimension), (0, 0, 0));
        assert!(inv.irreducible && inv.single_point);
    }

    #[test]
    fn hyperbolic_plane_is_a_curve() {
        let c = ctx(3, 1);
        let inv = cycle_invariants(&HermGram::hyperbolic(c, 1).unwrap()).unwrap();
        assert_eq!(
            (inv.m, inv.t, inv.dimension, inv.n_odd, inv.n_even),
            (2, 2, 1, 0, 0)
        );
        assert!(inv.l_ge1_split && inv.irreducible && !inv.zero_dimensional);
        assert_eq!(inv.rank_l1, 2);
    }

    #[test]
    fn nonsplit_scale_two_pair_is_a_point() {
        // p = 3: −1 is a non-square, so u = 1 gives −u non-square
        let c = ctx(3, 1);
        let p0 = c.pi0().clone();
        let g = HermGram::diagonal(c, &[p0.clone(), p0]).unwrap();
        let inv = cycle_invariants(&g).unwrap();
        assert_eq!((inv.m, inv.t, inv.n_even), (2, 0, 2));
        assert!(!inv.l_ge1_split && !inv.l_ge2_split);
        assert!(inv.irreducible && inv.single_point);
    }

    #[test]
    fn odd_scale_three_is_reducible() {
        let c = ctx(3, 1);
        let g = HermGram::hyperbolic(c.clone(), 1)
            .unwrap()
            .direct_sum(&HermGram::hyperbolic(c, 3).unwrap())
            .unwrap();
        let inv = cycle_invariants(&g).unwrap();
        assert_eq!((inv.m, inv.t, inv.n_odd), (4, 4, 2));
        assert!(!inv.irreducible);
    }

    #[test]
    fn rejects_nonintegral_gram() {
        let c = ctx(3, 1);
        let g = HermGram::diagonal(c, &[rat_frac(1, 3)]).unwrap();
        assert_eq!(cycle_invariants(&g), Err(Error::NotIntegral));
    }

    #[test]
    fn serialization_is_flat() {
        let c = ctx(3, -1);
        let t = HermGram::diagonal(c, &[rat(1)]).unwrap();
        let v = serde_json::to_value(analyze(&t).unwrap()).unwrap();
        assert_eq!(v["status"], "nonempty");
        assert_eq!(v["t"], 0);
        assert_eq!(v["single_point"], true);
        let e = serde_json::to_string(&CycleStatus::EmptyNonintegral).unwrap();
        assert_eq!(e, r#"{"status":"empty-nonintegral"}"#);
    }
}
