//! Hermitian `O_H`-lattices inside a fixed ambient Hermitian space.
//!
//! The form is linear in the first argument and conjugate-linear in the
//! second: `(x, y) = xᵀ·G·ȳ` for coordinate columns `x`, `y`. A lattice is the
//! `O_H`-span of the columns of its basis matrix.

use crate::error::{Error, Result};
use crate::matrix::{self, check_hermitian, congruence, det, inverse, mat_mul, Field, Matrix};
use crate::padic::{Rational, Valuation};
use crate::ramified::{OhElement, RamifiedContext};

/// A nonsingular Hermitian matrix over `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermGram {
    ctx: RamifiedContext,
    m: Matrix<OhElement>,
}

/// Checks conjugate symmetry and nonsingularity.
pub fn validate_gram(ctx: &RamifiedContext, m: &Matrix<OhElement>) -> Result<()> {
    check_hermitian(ctx, m)?;
    if det(ctx, m)?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(())
}

impl HermGram {
    pub fn new(ctx: RamifiedContext, m: Matrix<OhElement>) -> Result<Self> {
        validate_gram(&ctx, &m)?;
        Ok(HermGram { ctx, m })
    }

    pub fn from_rows(ctx: RamifiedContext, rows: Vec<Vec<OhElement>>) -> Result<Self> {
        let m = crate::json::square_matrix(rows)?;
        Self::new(ctx, m)
    }

    pub fn diagonal(ctx: RamifiedContext, diag: &[Rational]) -> Result<Self> {
        let n = diag.len();
        let m = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                OhElement::from_rational(diag[i].clone())
            } else {
                OhElement::zero()
            }
        });
        Self::new(ctx, m)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &HermGram) -> Result<HermGram> {
        if self.ctx != other.ctx {
            return Err(Error::InvalidContext("direct sum across contexts".into()));
        }
        let (a, b) = (self.rank(), other.rank());
        let m = Matrix::from_fn(a + b, a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.m.get(i, j).clone(),
            (false, false) => other.m.get(i - a, j - a).clone(),
            _ => OhElement::zero(),
        });
        Ok(HermGram {
            ctx: self.ctx.clone(),
            m,
        })
    }

    /// The Gram matrix of `H(i)`: `[[0, π^i], [(−π)^i, 0]]`.
    pub fn hyperbolic(ctx: RamifiedContext, i: i64) -> Result<Self> {
        let top = ctx.pi_pow(i);
        let bottom = top.conj();
        let z = OhElement::zero();
        Self::new(
            ctx,
            Matrix::from_rows(vec![vec![z.clone(), top], vec![bottom, z]])?,
        )
    }

    pub fn context(&self) -> &RamifiedContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &Matrix<OhElement> {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &OhElement {
        self.m.get(i, j)
    }

    /// The determinant, a nonzero rational.
    pub fn det(&self) -> Rational {
        let d = det(&self.ctx, &self.m).expect("square");
        debug_assert!(d.is_rational());
        d.a
    }

    /// Minimal π-order of the entries (`sL`).
    pub fn scale(&self) -> i64 {
        self.m
            .entries()
            .filter_map(|(_, _, x)| self.ctx.ord_pi(x).finite())
            .min()
            .expect("nonsingular matrix has a nonzero entry")
    }

    pub fn is_integral(&self) -> bool {
        self.scale() >= 0
    }

    /// First entry with negative π-order, if any.
    pub fn first_nonintegral(&self) -> Option<(usize, usize)> {
        self.m
            .entries()
            .find(|(_, _, x)| !self.ctx.is_integral(x))
            .map(|(i, j, _)| (i, j))
    }

    /// Multiplies the form by a rational.
    pub fn scaled(&self, u: &Rational) -> Result<HermGram> {
        HermGram::new(self.ctx.clone(), self.m.map(|x| x.scale(u)))
    }

    /// Same matrix viewed in a different context with the same `π₀`.
    pub fn with_context(&self, ctx: RamifiedContext) -> Result<HermGram> {
        if ctx.p() != self.ctx.p() || ctx.pi0() != self.ctx.pi0() {
            return Err(Error::InvalidContext("uniformizer changed".into()));
        }
        Ok(HermGram {
            ctx,
            m: self.m.clone(),
        })
    }

    /// `Pᵀ·G·P̄`: the Gram matrix of the columns of `P`.
    pub fn change_basis(&self, p: &Matrix<OhElement>) -> Result<HermGram> {
        HermGram::new(self.ctx.clone(), congruence(&self.ctx, &self.m, p)?)
    }

    pub fn pair(&self, x: &[OhElement], y: &[OhElement]) -> OhElement {
        let f = &self.ctx;
        let mut acc = OhElement::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = self.m.get(i, j);
                if yj.is_zero() || g.is_zero() {
                    continue;
                }
                acc = f.add(&acc, &f.mul(&f.mul(xi, g), &yj.conj()));
            }
        }
        acc
    }
}

/// An `O_H`-lattice given by a basis in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermLattice {
    ambient: HermGram,
    basis: Matrix<OhElement>,
}

impl HermLattice {
    pub fn new(ambient: HermGram, basis: Matrix<OhElement>) -> Result<Self> {
        if basis.rows() != ambient.rank() || !basis.is_square() {
            return Err(Error::Dimension(format!(
                "basis must be {n}x{n}",
                n = ambient.rank()
            )));
        }
        if det(ambient.context(), &basis)?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(HermLattice { ambient, basis })
    }

    /// The lattice spanned by the reference basis of the ambient space.
    pub fn standard(ambient: HermGram) -> Self {
        let basis = matrix::identity(ambient.context(), ambient.rank());
        HermLattice { ambient, basis }
    }

    pub fn ambient(&self) -> &HermGram {
        &self.ambient
    }

    pub fn basis(&self) -> &Matrix<OhElement> {
        &self.basis
    }

    pub fn context(&self) -> &RamifiedContext {
        self.ambient.context()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn gram(&self) -> HermGram {
        self.ambient
            .change_basis(&self.basis)
            .expect("a basis change of a nonsingular form stays nonsingular")
    }

    /// The dual lattice `{x : (x, L) ⊆ O_H}` with basis dual to `basis`:
    /// `(b_i, d_j) = δ_ij`.
    pub fn dual_basis(&self) -> Result<HermLattice> {
        let ctx = self.context();
        let bt_g = mat_mul(ctx, &self.basis.transpose(), self.ambient.matrix())?;
        let d = matrix::conj(ctx, &inverse(ctx, &bt_g)?);
        Ok(HermLattice {
            ambient: self.ambient.clone(),
            basis: d,
        })
    }

    /// Same lattice with its canonical basis.
    pub fn canonical(&self) -> HermLattice {
        HermLattice {
            ambient: self.ambient.clone(),
            basis: hnf(self.context(), &self.basis).expect("basis has full rank"),
        }
    }

    /// Coordinates of the columns of `vectors` with respect to this basis.
    pub fn coordinates(&self, vectors: &Matrix<OhElement>) -> Result<Matrix<OhElement>> {
        matrix::solve(self.context(), &self.basis, vectors)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &HermLattice) -> bool {
        self.contains_vectors(&other.basis)
    }

    pub fn contains_vectors(&self, vectors: &Matrix<OhElement>) -> bool {
        let x = self.coordinates(vectors).expect("basis is invertible");
        let ctx = self.context();
        let ok = x.entries().all(|(_, _, e)| ctx.is_integral(e));
        ok
    }

    /// `self + other`.
    pub fn sum(&self, other: &HermLattice) -> HermLattice {
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        self.with_generators(&cols)
    }

    /// `self + span(extra)`.
    pub fn with_generators(&self, extra: &[Vec<OhElement>]) -> HermLattice {
        let mut cols = self.basis.columns();
        cols.extend(extra.iter().cloned());
        let gens = Matrix::from_columns(&cols).expect("columns of equal length");
        HermLattice {
            ambient: self.ambient.clone(),
            basis: hnf(self.context(), &gens).expect("contains a full-rank lattice"),
        }
    }

    /// `c · L` for `c ∈ H^×`.
    pub fn scaled_by(&self, c: &OhElement) -> HermLattice {
        HermLattice {
            ambient: self.ambient.clone(),
            basis: matrix::scale(self.context(), c, &self.basis),
        }
    }

    /// Whether `(L, L) ⊆ O_H`, equivalently `L ⊆ L^♯`.
    pub fn is_integral(&self) -> bool {
        self.gram().is_integral()
    }

    /// `ord_π` of the index `[self : sub]` for a sublattice `sub`.
    pub fn index_of(&self, sub: &HermLattice) -> Result<i64> {
        let x = self.coordinates(&sub.basis)?;
        let d = det(self.context(), &x)?;
        self.context()
            .ord_pi(&d)
            .finite()
            .ok_or(Error::SingularMatrix)
    }
}

/// Upper-triangular canonical basis of the `O_H`-span of the columns of `gens`.
///
/// Pivots are exact powers of π; each entry above a pivot `π^k` is reduced to
/// the canonical representative of its class modulo `π^k O_H`.
pub fn hnf(ctx: &RamifiedContext, gens: &Matrix<OhElement>) -> Result<Matrix<OhElement>> {
    let n = gens.rows();
    let mut active: Vec<Vec<OhElement>> = gens
        .columns()
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots: Vec<Option<(Vec<OhElement>, i64)>> = vec![None; n];
    for row in (0..n).rev() {
        let best = active
            .iter()
            .enumerate()
            .filter_map(|(idx, c)| ctx.ord_pi(&c[row]).finite().map(|o| (o, idx)))
            .min()
            .ok_or(Error::SingularMatrix)?;
        let (k, idx) = best;
        let mut pivot = active.swap_remove(idx);
        let pivot_inv = ctx.oh_inv(&pivot[row])?;
        for col in active.iter_mut() {
            if col[row].is_zero() {
                continue;
            }
            let q = ctx.mul(&col[row], &pivot_inv);
            debug_assert!(ctx.is_integral(&q));
            for (c, pv) in col.iter_mut().zip(&pivot).take(row + 1) {
                if !pv.is_zero() {
                    *c = ctx.sub(c, &ctx.mul(&q, pv));
                }
            }
        }
        // rescale by a unit so the pivot becomes exactly π^k
        let unit = ctx.mul(&ctx.pi_pow(k), &pivot_inv);
        for x in pivot.iter_mut().take(row + 1) {
            *x = ctx.mul(&unit, x);
        }
        active.retain(|c| c.iter().any(|x| !x.is_zero()));
        pivots[row] = Some((pivot, k));
    }
    if !active.is_empty() {
        return Err(Error::Internal("generators left after elimination".into()));
    }
    let (mut cols, ks): (Vec<Vec<OhElement>>, Vec<i64>) = pivots
        .into_iter()
        .map(|p| p.expect("pivot per row"))
        .unzip();
    for j in 0..n {
        for i in (0..j).rev() {
            let x = cols[j][i].clone();
            let rep = ctx.reduce_mod_pi_pow(&x, ks[i]);
            if rep == x {
                continue;
            }
            let q = ctx.mul(&ctx.sub(&x, &rep), &ctx.pi_pow(-ks[i]));
            let (left, right) = cols.split_at_mut(j);
            for (r, target) in right[0].iter_mut().enumerate().take(i + 1) {
                let src = &left[i][r];
                if !src.is_zero() {
                    *target = ctx.sub(target, &ctx.mul(&q, src));
                }
            }
            debug_assert_eq!(cols[j][i], rep);
        }
    }
    Matrix::from_columns(&cols)
}

/// The `(ord_π det, det unit is a square)` class of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DetClass {
    pub val: i64,
    pub unit_is_square: bool,
}

/// `dL` up to `Nm(O_H^×) = (Z_p^×)²`.
pub fn det_class(g: &HermGram) -> Result<DetClass> {
    let ctx = g.context();
    let d = g.det();
    let val = match ctx.ord_pi_rational(&d) {
        Valuation::Finite(v) => v,
        Valuation::Infinity => return Err(Error::SingularMatrix),
    };
    let unit = ctx.unit_part_wrt_pi0(&d).expect("nonzero");
    Ok(DetClass {
        val,
        unit_is_square: crate::padic::is_square_unit(&unit, ctx.p())?,
    })
}
