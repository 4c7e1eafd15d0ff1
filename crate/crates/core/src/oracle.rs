//! Brute-force enumeration of the vertex lattices `Λ` with
//! `L ⊆ Λ^♯ ⊆ Λ ⊆ L^♯`, and cross-checks of the cycle invariants against them.
//!
//! Every candidate lies between `L` and `L^♯` and satisfies `π(Λ, Λ) ⊆ O_H`.
//! That set is closed under passing to sublattices containing `L`, so it is
//! reached from `L` by repeatedly adjoining one vector `π⁻¹·Σ cᵢλᵢ` with
//! `c ∈ P^{n-1}(F_p)`. Candidates are deduplicated by their canonical basis.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::cycle::{cycle_invariants, CycleInvariants};
use crate::error::{Error, Result};
use crate::jordan::jordan_split;
use crate::lattice::HermLattice;
use crate::matrix::{Field, Matrix};
use crate::padic::{rat, Valuation};
use crate::ramified::{OhElement, RamifiedContext};

/// Limits on the instances the oracle accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_rank: usize,
    /// Largest Jordan scale of `L`.
    pub max_scale: i64,
    /// Number of one-step extensions examined before giving up.
    pub max_candidates: u64,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds {
            max_rank: 3,
            max_scale: 3,
            max_candidates: 10_000_000,
        }
    }
}

/// Order in which the projective coefficient vectors are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub index: usize,
    #[serde(rename = "type")]
    pub vertex_type: usize,
    /// Canonical basis, columns in ambient coordinates.
    pub basis: Matrix<OhElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexSet {
    pub rank: usize,
    pub vertices: Vec<Vertex>,
    /// `(i, j)` whenever `Λ_i ⊊ Λ_j`.
    pub edges: Vec<(usize, usize)>,
    pub max_type: Option<usize>,
    pub max_count: usize,
    pub type_counts: BTreeMap<usize, usize>,
    /// Intermediate lattices between `L` and `L^♯` that passed the pruning.
    pub explored: usize,
    pub candidates_examined: u64,
    #[serde(skip)]
    lattices: Vec<HermLattice>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn lattice(&self, i: usize) -> &HermLattice {
        &self.lattices[i]
    }

    pub fn lattices(&self) -> &[HermLattice] {
        &self.lattices
    }

    pub fn count_of_type(&self, t: usize) -> usize {
        self.type_counts.get(&t).copied().unwrap_or(0)
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Covering pairs of the inclusion order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(i, j)| {
                !(0..self.len()).any(|k| self.contains_edge(i, k) && self.contains_edge(k, j))
            })
            .collect()
    }

    /// Graphviz rendering of the Hasse diagram.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph vertices {\n  rankdir=BT;\n");
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "  v{} [label=\"{}: t={}\"];",
                v.index, v.index, v.vertex_type
            );
        }
        for (i, j) in self.hasse_edges() {
            let _ = writeln!(out, "  v{i} -> v{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// `t(Λ) = ord_π det gram(Λ^♯)`, the length of `Λ/Λ^♯` when `Λ^♯ ⊆ Λ`.
pub fn vertex_type(lat: &HermLattice) -> Result<i64> {
    let dual = lat.dual_basis()?;
    ord_or_singular(lat.context(), &dual.gram().det())
}

/// `dim_{F_p}(Λ/Λ^♯)` for a lattice with `πΛ ⊆ Λ^♯ ⊆ Λ`, computed as
/// `n − rank` of the image of `Λ^♯` in `Λ/πΛ`.
pub fn quotient_dimension(lat: &HermLattice) -> Result<usize> {
    let ctx = lat.context();
    let dual = lat.dual_basis()?;
    let x = lat.coordinates(dual.basis())?;
    let mut rows = Vec::with_capacity(x.rows());
    for i in 0..x.rows() {
        let mut row = Vec::with_capacity(x.cols());
        for j in 0..x.cols() {
            row.push(ctx.residue(x.get(i, j))?);
        }
        rows.push(row);
    }
    Ok(x.rows() - rank_mod_p(rows, ctx.p()))
}

fn ord_or_singular(ctx: &RamifiedContext, q: &crate::padic::Rational) -> Result<i64> {
    match ctx.ord_pi_rational(q) {
        Valuation::Finite(v) => Ok(v),
        Valuation::Infinity => Err(Error::SingularMatrix),
    }
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = crate::padic::pow_mod(rows[rank][col], p - 2, p);
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let f = rows[r][col] * inv % p;
            for c in 0..ncols {
                let sub = f * rows[rank][c] % p;
                rows[r][c] = (rows[r][c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Normalized representatives of `P^{n-1}(F_p)`.
fn projective_points(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = p.pow(free as u32);
        for mut code in 0..total {
            let mut v = vec![0; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = code % p;
                code /= p;
            }
            out.push(v);
        }
    }
    out
}

fn key_of(lat: &HermLattice) -> Vec<OhElement> {
    lat.basis().entries().map(|(_, _, e)| e.clone()).collect()
}

fn check_bounds(l: &HermLattice, bounds: &EnumerationBounds) -> Result<()> {
    let n = l.rank();
    if n > bounds.max_rank {
        return Err(Error::EnumerationLimit {
            what: "rank",
            reached: n as u64,
            limit: bounds.max_rank as u64,
        });
    }
    let report = jordan_split(&l.gram())?;
    let top = report.blocks.iter().map(|b| b.scale).max().unwrap_or(0);
    if top > bounds.max_scale {
        return Err(Error::EnumerationLimit {
            what: "Jordan scale",
            reached: top.max(0) as u64,
            limit: bounds.max_scale.max(0) as u64,
        });
    }
    Ok(())
}

/// All vertex lattices `Λ` with `L ⊆ Λ^♯`, sorted by `(type, canonical basis)`.
pub fn enumerate_vertices(
    l: &HermLattice,
    bounds: &EnumerationBounds,
    order: GeneratorOrder,
) -> Result<VertexSet> {
    if !l.is_integral() {
        return Err(Error::Precondition("L must be integral".into()));
    }
    check_bounds(l, bounds)?;
    let ctx = l.context().clone();
    let ambient = l.ambient().clone();
    let n = l.rank();
    let pi = ctx.pi();
    let l_basis = l.basis().columns();

    let mut lines = projective_points(n, ctx.p());
    if order == GeneratorOrder::Reverse {
        lines.reverse();
    }

    let start = l.canonical();
    let mut seen: HashSet<Vec<OhElement>> = HashSet::new();
    seen.insert(key_of(&start));
    let mut queue = VecDeque::from([start.clone()]);
    let mut explored = vec![start];
    let mut candidates: u64 = 0;

    while let Some(lam) = queue.pop_front() {
        let cols = lam.basis().columns();
        for c in &lines {
            candidates += 1;
            if candidates > bounds.max_candidates {
                return Err(Error::EnumerationLimit {
                    what: "candidate lattices",
                    reached: candidates,
                    limit: bounds.max_candidates,
                });
            }
            let mut w = vec![OhElement::zero(); n];
            for (ci, col) in c.iter().zip(&cols) {
                if *ci == 0 {
                    continue;
                }
                let coeff = OhElement::from_rational(rat(*ci as i64));
                for (wk, x) in w.iter_mut().zip(col) {
                    *wk = ctx.add(wk, &ctx.mul(&coeff, x));
                }
            }
            let w: Vec<OhElement> = w.iter().map(|x| ctx.div(x, &pi)).collect::<Result<_>>()?;
            if !l_basis
                .iter()
                .all(|b| ctx.is_integral(&ambient.pair(&w, b)))
            {
                continue;
            }
            let pi_integral = |x: &[OhElement], y: &[OhElement]| {
                ctx.is_integral(&ctx.mul(&pi, &ambient.pair(x, y)))
            };
            if !pi_integral(&w, &w) || !cols.iter().all(|y| pi_integral(&w, y)) {
                continue;
            }
            let next = lam.with_generators(std::slice::from_ref(&w));
            if seen.insert(key_of(&next)) {
                queue.push_back(next.clone());
                explored.push(next);
            }
        }
    }

    let pi_elem = ctx.pi();
    let mut found: Vec<(usize, Vec<OhElement>, HermLattice)> = Vec::new();
    for lam in &explored {
        let dual = lam.dual_basis()?;
        if !lam.contains(&dual) || !dual.contains(&lam.scaled_by(&pi_elem)) {
            continue;
        }
        if !dual.contains(l) {
            return Err(Error::Internal("vertex does not satisfy L ⊆ Λ^♯".into()));
        }
        let t = vertex_type(lam)?;
        let t = usize::try_from(t).map_err(|_| Error::Internal(format!("negative type {t}")))?;
        found.push((t, key_of(lam), lam.clone()));
    }
    found.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let lattices: Vec<HermLattice> = found.iter().map(|f| f.2.clone()).collect();
    let vertices: Vec<Vertex> = found
        .iter()
        .enumerate()
        .map(|(index, (t, _, lam))| Vertex {
            index,
            vertex_type: *t,
            basis: lam.basis().clone(),
        })
        .collect();

    let mut edges = Vec::new();
    for (i, a) in lattices.iter().enumerate() {
        for (j, b) in lattices.iter().enumerate() {
            if i != j && b.contains(a) && !a.contains(b) {
                edges.push((i, j));
            }
        }
    }

    let mut type_counts = BTreeMap::new();
    for v in &vertices {
        *type_counts.entry(v.vertex_type).or_insert(0) += 1;
    }
    let max_type = type_counts.keys().next_back().copied();
    let max_count = max_type.map_or(0, |t| type_counts[&t]);
    Ok(VertexSet {
        rank: n,
        vertices,
        edges,
        max_type,
        max_count,
        type_counts,
        explored: explored.len(),
        candidates_examined: candidates,
        lattices,
    })
}

/// A lattice that failed one of the checks in [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: &'static str,
    pub index: usize,
    #[serde(rename = "type")]
    pub vertex_type: usize,
    pub basis: Matrix<OhElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub invariants: CycleInvariants,
    pub vertex_count: usize,
    pub max_type: Option<usize>,
    pub max_count: usize,
    /// The largest vertex type equals `t(L)`.
    pub max_type_matches: bool,
    /// Every vertex lies in a vertex of maximal type.
    pub saturated: bool,
    /// A unique vertex of maximal type exactly when the cycle is irreducible.
    pub uniqueness_matches: bool,
    pub types_even: bool,
    pub poset_transitive: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.max_type_matches
            && self.saturated
            && self.uniqueness_matches
            && self.types_even
            && self.poset_transitive
    }
}

/// Compares a vertex census with the invariants of `L`.
pub fn verify_structure_theorems(l: &HermLattice, set: &VertexSet) -> Result<VerificationReport> {
    let invariants = cycle_invariants(&l.gram())?;
    let mut counterexamples = Vec::new();
    let witness = |check: &'static str, i: usize| Counterexample {
        check,
        index: i,
        vertex_type: set.vertices[i].vertex_type,
        basis: set.vertices[i].basis.clone(),
    };

    let max_type_matches = set.max_type == Some(invariants.t);
    let top: Vec<usize> = match set.max_type {
        Some(t) => (0..set.len())
            .filter(|&i| set.vertices[i].vertex_type == t)
            .collect(),
        None => Vec::new(),
    };
    let mut saturated = set.max_type.is_some();
    for i in 0..set.len() {
        if top.contains(&i) {
            continue;
        }
        if !top.iter().any(|&j| set.contains_edge(i, j)) {
            saturated = false;
            counterexamples.push(witness("saturation", i));
        }
    }
    let uniqueness_matches = (set.max_count == 1) == invariants.irreducible;
    let mut types_even = true;
    for v in &set.vertices {
        if v.vertex_type % 2 != 0 {
            types_even = false;
            counterexamples.push(witness("even-type", v.index));
        }
    }
    let mut poset_transitive = true;
    for &(i, j) in &set.edges {
        for &(j2, k) in &set.edges {
            if j2 == j && !set.contains_edge(i, k) {
                poset_transitive = false;
                counterexamples.push(witness("transitivity", i));
            }
        }
    }
    Ok(VerificationReport {
        invariants,
        vertex_count: set.len(),
        max_type: set.max_type,
        max_count: set.max_count,
        max_type_matches,
        saturated,
        uniqueness_matches,
        types_even,
        poset_transitive,
        counterexamples,
    })
}
