mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{ctx, random_block_gram, random_integral_basis, random_oh, random_unimodular};
use ramcycles::lattice::det_class;
use ramcycles::matrix::{self, Field};
use ramcycles::padic::{rat, smallest_nonresidue, Valuation};
use ramcycles::{jordan_split, HermGram, HermLattice, OhElement};

fn contexts() -> impl Strategy<Value = (u64, i64)> {
    (
        prop::sample::select(vec![3u64, 5, 7]),
        prop::sample::select(vec![1i64, -1, 2]),
    )
        .prop_filter("ε must be a unit", |(p, e)| {
            (*e).rem_euclid(*p as i64) != 0
        })
}

#[test]
fn norm_and_order_are_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3u64, 5] {
        let c = ctx(p, -1);
        for _ in 0..500 {
            let x = random_oh(&mut rng, p);
            let y = random_oh(&mut rng, p);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let xy = c.mul(&x, &y);
            let ox = c.ord_pi(&x).finite().unwrap();
            let oy = c.ord_pi(&y).finite().unwrap();
            assert_eq!(c.ord_pi(&xy), Valuation::Finite(ox + oy));
            assert_eq!(c.ord_pi(&c.mul(&x, &c.conj(&x))), Valuation::Finite(2 * ox));
            assert_eq!(c.norm(&xy), c.norm(&x) * c.norm(&y));
            assert!(c.is_norm(&c.norm(&x)).unwrap());
        }
    }
}

#[test]
fn norms_have_index_two_in_square_classes() {
    for p in [3u64, 5, 7, 11, 13] {
        let r = rat(smallest_nonresidue(p) as i64);
        let pp = rat(p as i64);
        for eps in [1i64, -1, 2] {
            if eps.rem_euclid(p as i64) == 0 {
                continue;
            }
            let c = ctx(p, eps);
            let reps = [rat(1), r.clone(), pp.clone(), &pp * &r];
            let norms = reps.iter().filter(|q| c.is_norm(q).unwrap()).count();
            assert_eq!(norms, 2, "p = {p}, ε = {eps}");
            assert!(c.is_norm(&-c.pi0()).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_a_canonical_key((p, eps) in contexts(), n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = ctx(p, eps);
        let g = HermGram::diagonal(c.clone(), &vec![rat(1); n]).unwrap();
        let b = random_integral_basis(&mut rng, &c, n);
        let u = random_unimodular(&mut rng, &c, n);
        let l1 = HermLattice::new(g.clone(), b.clone()).unwrap();
        let l2 = HermLattice::new(g, matrix::mat_mul(&c, &b, &u).unwrap()).unwrap();
        prop_assert_eq!(l1.canonical().basis().clone(), l2.canonical().basis().clone());
        prop_assert!(l1.contains(&l2) && l2.contains(&l1));
        prop_assert_eq!(l1.index_of(&l2).unwrap(), 0);
        let canon = l1.canonical();
        prop_assert_eq!(canon.canonical().basis().clone(), canon.basis().clone());
    }

    #[test]
    fn index_of_pi_multiple((p, eps) in contexts(), n in 1usize..=3, k in 0i64..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = ctx(p, eps);
        let g = HermGram::diagonal(c.clone(), &vec![rat(1); n]).unwrap();
        let l = HermLattice::new(g, random_integral_basis(&mut rng, &c, n)).unwrap();
        let sub = l.scaled_by(&c.pi_pow(k));
        prop_assert!(l.contains(&sub));
        prop_assert_eq!(l.index_of(&sub).unwrap(), k * n as i64);
        if k > 0 {
            prop_assert!(!sub.contains(&l));
        }
    }

    #[test]
    fn jordan_and_det_class_are_isometry_invariants((p, eps) in contexts(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = ctx(p, eps);
        let g = random_block_gram(&mut rng, &c, 4);
        let u = random_unimodular(&mut rng, &c, g.rank());
        let h = g.change_basis(&u).unwrap();
        let jg = jordan_split(&g).unwrap();
        let jh = jordan_split(&h).unwrap();
        prop_assert_eq!(&jg, &jh);
        prop_assert_eq!(det_class(&g).unwrap(), det_class(&h).unwrap());
        prop_assert_eq!(jg.rank(), g.rank());
        let dc = det_class(&g).unwrap();
        prop_assert_eq!(jg.total_det_val(), dc.val);
        prop_assert_eq!(jg.total_det_unit_is_square(), dc.unit_is_square);
        for b in &jg.blocks {
            prop_assert_eq!(b.det_val, b.scale * b.rank as i64);
            if b.scale % 2 != 0 {
                prop_assert!(b.rank % 2 == 0 && b.is_split_block);
            }
        }
        let scales: Vec<i64> = jg.blocks.iter().map(|b| b.scale).collect();
        prop_assert!(scales.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dual_lattice_laws((p, eps) in contexts(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = ctx(p, eps);
        let g = random_block_gram(&mut rng, &c, 4);
        let u = random_unimodular(&mut rng, &c, g.rank());
        let l = HermLattice::new(g, u).unwrap();
        let d = l.dual_basis().unwrap();
        // (b_i, d_j) = δ_ij
        for (i, bi) in l.basis().columns().iter().enumerate() {
            for (j, dj) in d.basis().columns().iter().enumerate() {
                let expected = if i == j { OhElement::one() } else { OhElement::zero() };
                prop_assert_eq!(l.ambient().pair(bi, dj), expected);
            }
        }
        prop_assert!(l.is_integral());
        prop_assert!(d.contains(&l));
        let dd = d.dual_basis().unwrap();
        prop_assert_eq!(dd.canonical().basis().clone(), l.canonical().basis().clone());
        let det_ord = c.ord_pi_rational(&l.gram().det()).finite().unwrap();
        prop_assert_eq!(d.index_of(&l).unwrap(), det_ord);
    }

    #[test]
    fn unimodular_scaling_fixes_jordan_shape((p, eps) in contexts(), k in 0i64..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = ctx(p, eps);
        let g = random_block_gram(&mut rng, &c, 3);
        let l = HermLattice::standard(g);
        // π^k L has Gram π₀^k-scaled, so every Jordan scale shifts by 2k
        let shifted = l.scaled_by(&c.pi_pow(k)).gram();
        let before = jordan_split(&l.gram()).unwrap();
        let after = jordan_split(&shifted).unwrap();
        prop_assert_eq!(before.blocks.len(), after.blocks.len());
        for (a, b) in before.blocks.iter().zip(&after.blocks) {
            prop_assert_eq!(a.scale + 2 * k, b.scale);
            prop_assert_eq!(a.rank, b.rank);
        }
    }
}

#[test]
fn hyperbolic_planes_are_split_blocks() {
    for p in [3u64, 5, 7] {
        let c = ctx(p, 1);
        for i in 0..5 {
            let j = jordan_split(&HermGram::hyperbolic(c.clone(), i).unwrap()).unwrap();
            assert_eq!(j.blocks.len(), 1);
            let b = &j.blocks[0];
            assert_eq!((b.scale, b.rank), (i, 2));
            assert!(b.is_split_block);
        }
    }
}

#[test]
fn orthogonal_summands_keep_their_blocks() {
    let c = ctx(5, 2);
    let a = HermGram::diagonal(c.clone(), &[rat(1), rat(2)]).unwrap();
    let b = HermGram::hyperbolic(c.clone(), 1).unwrap();
    let s = a.direct_sum(&b).unwrap();
    let j = jordan_split(&s).unwrap();
    assert_eq!(j.rank_at(0), 2);
    assert_eq!(j.rank_at(1), 2);
    assert_eq!(j.block(0).unwrap(), &jordan_split(&a).unwrap().blocks[0]);
    assert_eq!(j.block(1).unwrap(), &jordan_split(&b).unwrap().blocks[0]);
    assert!(s.det() == a.det() * b.det());
    assert!(!s.det().is_zero());
}
