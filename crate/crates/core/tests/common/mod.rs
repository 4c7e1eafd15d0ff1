//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ramcycles::matrix::{self, Field, Matrix};
use ramcycles::padic::{rat, smallest_nonresidue, val_p, Rational};
use ramcycles::{HermGram, OhElement, RamifiedContext};

pub fn ctx(p: u64, eps: i64) -> RamifiedContext {
    RamifiedContext::new(p, rat(eps)).unwrap()
}

pub fn pi0_pow(ctx: &RamifiedContext, k: u32) -> Rational {
    (0..k).fold(rat(1), |acc, _| acc * ctx.pi0())
}

/// A named Gram matrix of `L` from the oracle test family.
pub struct FamilyMember {
    pub name: String,
    pub gram: HermGram,
}

/// Rank-2 diagonal Grams `diag(π₀^{a₁}u₁, π₀^{a₂}u₂)` with `a_i ≤ 2` and
/// `u_i ∈ {1, r}`, plus `H(1)`, `H(3)`, `H(1)⊕(1)`, `H(1)⊕(π₀)`, `H(1)⊕(π₀r)`,
/// for `p ∈ {3, 5}` and `ε = ±1`.
pub fn oracle_family() -> Vec<FamilyMember> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        let r = rat(smallest_nonresidue(p) as i64);
        for eps in [1i64, -1] {
            let c = ctx(p, eps);
            let units = [("1", rat(1)), ("r", r.clone())];
            for a1 in 0..=2u32 {
                for a2 in 0..=2u32 {
                    for (n1, u1) in &units {
                        for (n2, u2) in &units {
                            let d = [pi0_pow(&c, a1) * u1, pi0_pow(&c, a2) * u2];
                            out.push(FamilyMember {
                                name: format!("p={p} eps={eps} diag(pi0^{a1}*{n1}, pi0^{a2}*{n2})"),
                                gram: HermGram::diagonal(c.clone(), &d).unwrap(),
                            });
                        }
                    }
                }
            }
            let h1 = HermGram::hyperbolic(c.clone(), 1).unwrap();
            let extra = |name: &str, g: HermGram| FamilyMember {
                name: format!("p={p} eps={eps} {name}"),
                gram: g,
            };
            out.push(extra("H(1)", h1.clone()));
            out.push(extra("H(3)", HermGram::hyperbolic(c.clone(), 3).unwrap()));
            for (name, q) in [
                ("H(1)+(1)", rat(1)),
                ("H(1)+(pi0)", c.pi0().clone()),
                ("H(1)+(pi0*r)", c.pi0() * &r),
            ] {
                let g = h1
                    .direct_sum(&HermGram::diagonal(c.clone(), &[q]).unwrap())
                    .unwrap();
                out.push(extra(name, g));
            }
        }
    }
    out
}

pub fn random_oh(rng: &mut ChaCha8Rng, p: u64) -> OhElement {
    let bound = p as i64;
    OhElement::new(
        rat(rng.gen_range(-bound..=bound)),
        rat(rng.gen_range(-bound..=bound)),
    )
}

/// A random unit of `O_H`.
pub fn random_oh_unit(rng: &mut ChaCha8Rng, p: u64) -> OhElement {
    loop {
        let x = random_oh(rng, p);
        if !x.a.is_zero() && !(x.a.numer() % BigInt::from(p)).is_zero() {
            return x;
        }
    }
}

/// A random rational unit of `Z_p`, possibly with a denominator.
pub fn random_zp_unit(rng: &mut ChaCha8Rng, p: u64) -> Rational {
    let pick = |rng: &mut ChaCha8Rng| loop {
        let n: i64 = rng.gen_range(-60..=60);
        if n != 0 && n.rem_euclid(p as i64) != 0 {
            return n;
        }
    };
    let n = pick(rng);
    let d = pick(rng).abs();
    Rational::new(n.into(), d.into())
}

/// A random element of `GL_n(O_H)` built from elementary operations.
pub fn random_unimodular(
    rng: &mut ChaCha8Rng,
    ctx: &RamifiedContext,
    n: usize,
) -> Matrix<OhElement> {
    let mut m = matrix::identity(ctx, n);
    for _ in 0..(3 * n + 2) {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c = random_oh(rng, ctx.p());
                for k in 0..n {
                    let v = ctx.add(m.get(i, k), &ctx.mul(&c, m.get(j, k)));
                    m.set(i, k, v);
                }
            }
            1 => {
                let j = rng.gen_range(0..n);
                let u = random_oh_unit(rng, ctx.p());
                for k in 0..n {
                    let v = ctx.mul(m.get(k, j), &u);
                    m.set(k, j, v);
                }
            }
            _ if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                for k in 0..n {
                    let (a, b) = (m.get(k, i).clone(), m.get(k, j).clone());
                    m.set(k, i, b);
                    m.set(k, j, a);
                }
            }
            _ => {}
        }
    }
    m
}

/// A random nonsingular matrix with `O_H` entries.
pub fn random_integral_basis(
    rng: &mut ChaCha8Rng,
    ctx: &RamifiedContext,
    n: usize,
) -> Matrix<OhElement> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| random_oh(rng, ctx.p()));
        if !matrix::det(ctx, &m).unwrap().is_zero() {
            return m;
        }
    }
}

/// A random orthogonal sum of rank-1 blocks `(π₀^a u)` and planes `H(i)`,
/// of total rank `1..=3`, with scales in `0..=max_scale`.
pub fn random_block_gram(rng: &mut ChaCha8Rng, ctx: &RamifiedContext, max_scale: i64) -> HermGram {
    let target = rng.gen_range(1..=3usize);
    let mut g: Option<HermGram> = None;
    let mut rank = 0;
    while rank < target {
        let use_plane = target - rank >= 2 && rng.gen_bool(0.4);
        let block = if use_plane {
            HermGram::hyperbolic(ctx.clone(), rng.gen_range(0..=max_scale)).unwrap()
        } else {
            let a = rng.gen_range(0..=(max_scale / 2)) as u32;
            let u = random_zp_unit(rng, ctx.p());
            HermGram::diagonal(ctx.clone(), &[pi0_pow(ctx, a) * u]).unwrap()
        };
        rank += block.rank();
        g = Some(match g {
            None => block,
            Some(prev) => prev.direct_sum(&block).unwrap(),
        });
    }
    g.unwrap()
}

/// Square-class representative `p^α·m` with `α ∈ {0, 1}` and `m` an integer unit.
fn square_class_integer(q: &Rational, p: u64) -> BigInt {
    let v = val_p(q, p).finite().expect("nonzero");
    let pb = BigInt::from(p);
    let strip = |mut n: BigInt| {
        while (&n % &pb).is_zero() {
            n /= &pb;
        }
        n
    };
    let unit = strip(q.numer().clone()) * strip(q.denom().clone());
    if v.rem_euclid(2) == 1 {
        unit * pb
    } else {
        unit
    }
}

/// `(a, b)_p` by searching for a primitive zero of `ax² + by² − z²` modulo a
/// power of `p` large enough for Hensel lifting.
pub fn brute_force_hilbert(a: &Rational, b: &Rational, p: u64) -> i8 {
    let a = square_class_integer(a, p);
    let b = square_class_integer(b, p);
    let k = if p == 2 { 6 } else { 4 };
    let m = p.pow(k);
    let mb = BigInt::from(m);
    let a = a.mod_floor(&mb).to_u64().unwrap();
    let b = b.mod_floor(&mb).to_u64().unwrap();
    let squares: HashSet<u64> = (0..m).map(|z| z * z % m).collect();
    let hit = |x: u64, y: u64| squares.contains(&((a * (x * x % m) + b * (y * y % m)) % m));
    // primitive (x, y, z): either x is a unit (scale to x = 1) or p | x and y is a unit
    let found = (0..m).any(|y| hit(1, y)) || (0..m).step_by(p as usize).any(|x| hit(x, 1));
    if found {
        1
    } else {
        -1
    }
}

/// Number of roots of `X² − Δ` (or `X² − X + (1 − Δ)/4` when `Δ ≡ 1 mod 4`) modulo `p`.
pub fn minimal_polynomial_roots(delta: i64, p: u64) -> usize {
    let pi = p as i64;
    (0..pi)
        .filter(|&x| {
            let v = if delta.rem_euclid(4) == 1 {
                x * x - x + (1 - delta) / 4
            } else {
                x * x - delta
            };
            v.rem_euclid(pi) == 0
        })
        .count()
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
