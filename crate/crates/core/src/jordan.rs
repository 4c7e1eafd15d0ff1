//! Jordan splitting of Hermitian lattices over `O_H` (p odd).
//!
//! The splitting peels off one modular block at a time: a rank-1 block when a
//! diagonal entry attains the minimal π-order, otherwise a rank-2 block
//! `≅ H(s)` spanned by the off-diagonal pivot. Blocks of equal scale are then
//! merged, so the report only contains the canonical invariants.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::HermGram;
use crate::matrix::{inverse, Field, Matrix};
use crate::padic::{is_square_unit, Rational, Valuation};
use crate::ramified::{OhElement, RamifiedContext};

/// All Jordan components of one scale, merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanBlock {
    /// The block is `π^scale`-modular.
    pub scale: i64,
    pub rank: usize,
    /// `ord_π` of the block determinant, always `scale · rank`.
    pub det_val: i64,
    /// Square class of `det / π₀^(det_val / 2)`.
    pub det_unit_is_square: bool,
    /// Whether the block is an orthogonal sum of hyperbolic planes.
    #[serde(rename = "split")]
    pub is_split_block: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JordanReport {
    pub blocks: Vec<JordanBlock>,
}

impl JordanReport {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank).sum()
    }

    pub fn block(&self, scale: i64) -> Option<&JordanBlock> {
        self.blocks.iter().find(|b| b.scale == scale)
    }

    pub fn rank_at(&self, scale: i64) -> usize {
        self.block(scale).map_or(0, |b| b.rank)
    }

    /// Blocks whose scale satisfies `pred`.
    pub fn filtered(&self, pred: impl Fn(i64) -> bool) -> Vec<JordanBlock> {
        self.blocks
            .iter()
            .filter(|b| pred(b.scale))
            .cloned()
            .collect()
    }

    /// Blocks of scale `≥ t` (the lattice `L_{≥t}`).
    pub fn at_least(&self, t: i64) -> Vec<JordanBlock> {
        self.filtered(|s| s >= t)
    }

    pub fn total_det_val(&self) -> i64 {
        self.blocks.iter().map(|b| b.det_val).sum()
    }

    /// Square class of the full determinant, assembled from the blocks.
    pub fn total_det_unit_is_square(&self) -> bool {
        self.blocks.iter().filter(|b| !b.det_unit_is_square).count() % 2 == 0
    }
}

/// Whether the Hermitian space spanned by `blocks` is split, i.e. has even
/// rank `r` and `(−1)^{r/2}·det ∈ Nm(H^×)`.
///
/// On a single modular block this agrees with being an orthogonal sum of
/// hyperbolic planes. Across several scales it only asks for a maximal
/// isotropic subspace.
pub fn is_split_sum(blocks: &[JordanBlock], p: u64) -> bool {
    let r: usize = blocks.iter().map(|b| b.rank).sum();
    if r % 2 == 1 {
        return false;
    }
    // det = π₀^k·U and (−1)^{r/2}·π₀^k·U = (−π₀)^k·(−1)^{k + r/2}·U
    let k: i64 = blocks.iter().map(|b| b.det_val / 2).sum();
    let unit_square = blocks.iter().filter(|b| !b.det_unit_is_square).count() % 2 == 0;
    let sign_negative = (k + (r / 2) as i64).rem_euclid(2) == 1;
    let minus_one_square = p % 4 == 1;
    if sign_negative && !minus_one_square {
        !unit_square
    } else {
        unit_square
    }
}

/// Splitness of a modular block from its invariants.
pub fn block_is_split(scale: i64, rank: usize, det_unit: &Rational, p: u64) -> Result<bool> {
    if scale.rem_euclid(2) == 1 {
        return Ok(true);
    }
    if rank % 2 == 1 {
        return Ok(false);
    }
    let sign = if (rank / 2) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    is_square_unit(&(sign * det_unit), p)
}

/// One orthogonal component produced by the splitting loop, before merging.
#[derive(Debug, Clone)]
pub(crate) struct RawBlock {
    pub scale: i64,
    pub rank: usize,
    pub det: Rational,
}

fn min_ord(ctx: &RamifiedContext, g: &Matrix<OhElement>) -> Result<i64> {
    g.entries()
        .filter_map(|(_, _, x)| ctx.ord_pi(x).finite())
        .min()
        .ok_or(Error::SingularMatrix)
}

/// Schur complement of `g` with respect to the index set `block`.
fn complement(
    ctx: &RamifiedContext,
    g: &Matrix<OhElement>,
    block: &[usize],
) -> Result<Matrix<OhElement>> {
    let rest: Vec<usize> = (0..g.rows()).filter(|i| !block.contains(i)).collect();
    let m_inv = inverse(ctx, &g.submatrix(block))?;
    // coefficient rows c_k = G[k, B] · M⁻¹
    let coeffs: Vec<Vec<OhElement>> = rest
        .iter()
        .map(|&k| {
            (0..block.len())
                .map(|c| {
                    block.iter().enumerate().fold(ctx.zero(), |acc, (r, &b)| {
                        ctx.add(&acc, &ctx.mul(g.get(k, b), m_inv.get(r, c)))
                    })
                })
                .collect()
        })
        .collect();
    for row in &coeffs {
        if row.iter().any(|c| !ctx.is_integral(c)) {
            return Err(Error::Internal("non-integral splitting coefficient".into()));
        }
    }
    Ok(Matrix::from_fn(rest.len(), rest.len(), |i, j| {
        let mut x = g.get(rest[i], rest[j]).clone();
        for (c, &b) in block.iter().enumerate() {
            x = ctx.sub(&x, &ctx.mul(&coeffs[i][c], g.get(b, rest[j])));
        }
        x
    }))
}

/// Splits `g` into modular components in the order they are found.
pub(crate) fn split_components(
    ctx: &RamifiedContext,
    g: &Matrix<OhElement>,
) -> Result<Vec<RawBlock>> {
    let mut g = g.clone();
    let mut out = Vec::new();
    while g.rows() > 0 {
        let n = g.rows();
        let s = min_ord(ctx, &g)?;
        let attains = |x: &OhElement| ctx.ord_pi(x) == Valuation::Finite(s);
        if let Some(i) = (0..n).find(|&i| attains(g.get(i, i))) {
            out.push(RawBlock {
                scale: s,
                rank: 1,
                det: g.get(i, i).a.clone(),
            });
            g = complement(ctx, &g, &[i])?;
            continue;
        }
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && attains(g.get(i, j)))
            .expect("minimal order is attained somewhere");
        if s.rem_euclid(2) == 0 {
            // e_i <- e_i + e_j: the new diagonal entry picks up Tr(g_ij), of order exactly s
            let mut h = g.clone();
            for k in 0..n {
                let v = ctx.add(g.get(i, k), g.get(j, k));
                h.set(i, k, v);
            }
            for k in 0..n {
                let v = ctx.add(h.get(k, i), h.get(k, j));
                h.set(k, i, v);
            }
            debug_assert!(attains(h.get(i, i)));
            g = h;
            continue;
        }
        let block = [i.min(j), i.max(j)];
        let sub = g.submatrix(&block);
        let d = crate::matrix::det(ctx, &sub)?;
        out.push(RawBlock {
            scale: s,
            rank: 2,
            det: d.a,
        });
        g = complement(ctx, &g, &block)?;
    }
    Ok(out)
}

/// Merges raw components by scale into the canonical report.
pub(crate) fn merge_components(ctx: &RamifiedContext, raw: &[RawBlock]) -> Result<JordanReport> {
    let mut by_scale: BTreeMap<i64, (usize, Rational)> = BTreeMap::new();
    for b in raw {
        let e = by_scale.entry(b.scale).or_insert((0, Rational::one()));
        e.0 += b.rank;
        e.1 *= &b.det;
    }
    let mut blocks = Vec::with_capacity(by_scale.len());
    for (scale, (rank, det)) in by_scale {
        if scale.rem_euclid(2) == 1 && rank % 2 == 1 {
            return Err(Error::Internal(format!(
                "odd-scale block of odd rank {rank} at scale {scale}"
            )));
        }
        let det_val = ctx
            .ord_pi_rational(&det)
            .finite()
            .ok_or(Error::SingularMatrix)?;
        if det_val != scale * rank as i64 {
            return Err(Error::Internal(format!(
                "block at scale {scale} has determinant order {det_val}"
            )));
        }
        let unit = ctx.unit_part_wrt_pi0(&det).expect("nonzero determinant");
        blocks.push(JordanBlock {
            scale,
            rank,
            det_val,
            det_unit_is_square: is_square_unit(&unit, ctx.p())?,
            is_split_block: block_is_split(scale, rank, &unit, ctx.p())?,
        });
    }
    Ok(JordanReport { blocks })
}

pub fn jordan_split(g: &HermGram) -> Result<JordanReport> {
    let ctx = g.context();
    if ctx.p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    let raw = split_components(ctx, g.matrix())?;
    merge_components(ctx, &raw)
}
