//! The finite quotients `K/K_N` of the hyperspecial maximal compact subgroup of
//! unramified `U(1,1)`, their subgroups, conjugacy classes and double cosets.

pub mod cache;
mod classes;
mod level;
mod matrix;
mod named;
mod subgroup;
mod table;

pub use classes::{left_transversal, ConjClasses, DoubleCosets};
pub use level::Level;
pub use matrix::Mat2;
pub use named::{ceil_half, Named};
pub use subgroup::SubgroupTable;
pub use table::GroupTable;

use crate::error::{Error, Result};
use crate::ring::{Quad, RingCtx};

/// Default cap on the number of enumerated elements.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

pub const K_LABEL: &str = "K";

/// `|K/K_N| = q(q-1)(q+1)² · q^{4(N-1)}`.
pub fn k_order(ctx: &RingCtx) -> u64 {
    let q = ctx.q();
    q * (q - 1) * (q + 1) * (q + 1) * q.pow(4 * (ctx.level() - 1))
}

/// Generators for the diagonal units `diag(a, conj(a)⁻¹)`: a lift of a primitive
/// residue together with `1 + p` and `1 + p·ω`.
fn torus_generators(ctx: &RingCtx) -> Vec<Mat2> {
    let p = ctx.p() as i64;
    [ctx.residue_primitive(), ctx.elem(1 + p, 0), ctx.elem(1, p)]
        .into_iter()
        .map(|a| ctx.torus(a).expect("generators are units"))
        .collect()
}

/// Generators for the diagonal part of `K_m`, `m >= 1`.
fn torus_filt_generators(ctx: &RingCtx, m: u32) -> Vec<Mat2> {
    let pm = ctx.pow_p(m) as i64;
    [ctx.elem(1 + pm, 0), ctx.elem(1, pm)]
        .into_iter()
        .map(|a| ctx.torus(a).expect("generators are units"))
        .collect()
}

/// Generators of `K`: the torus, both unipotent radicals and the Weyl element.
pub fn k_generators(ctx: &RingCtx) -> Vec<Mat2> {
    let mut gens = torus_generators(ctx);
    gens.extend([ctx.upper_unipotent(1), ctx.lower_unipotent(1), Mat2::WEYL]);
    gens
}

/// Enumerate `K/K_N`, refusing when its order exceeds `budget`.
pub fn enumerate_k(ctx: &RingCtx, budget: u64) -> Result<GroupTable> {
    let predicted = k_order(ctx);
    if predicted > budget {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    GroupTable::generate(ctx, K_LABEL, &k_generators(ctx), budget)
}

/// The diagonal subgroup `T_0/T_N` on its own, without enumerating `K`.
pub fn enumerate_torus(ctx: &RingCtx) -> Result<GroupTable> {
    GroupTable::generate(ctx, "torus0", &torus_generators(ctx), u64::MAX)
}

/// The congruence subgroup `K_m/K_N` (`m >= 1`) on its own, from its Iwahori factorization.
pub fn enumerate_filtration(ctx: &RingCtx, m: u32, budget: u64) -> Result<GroupTable> {
    if m == 0 {
        return enumerate_k(ctx, budget);
    }
    let predicted = ctx.q().pow(4 * ctx.level().saturating_sub(m));
    if predicted > budget {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    let pm = ctx.pow_p(m) as i64;
    let mut gens = torus_filt_generators(ctx, m);
    gens.extend([ctx.upper_unipotent(pm), ctx.lower_unipotent(pm)]);
    GroupTable::generate(ctx, format!("k{m}"), &gens, budget)
}

/// `det g`, as an element of norm one.
pub fn det(ctx: &RingCtx, g: &Mat2) -> Quad {
    ctx.mat_det(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn level(p: u64, eps: u64, n: u32) -> Arc<Level> {
        Level::shared(&RingCtx::new(p, eps, n).unwrap()).unwrap()
    }

    #[test]
    fn orders_match_the_formula() {
        for (p, eps, n, expect) in [(3, 2, 1, 96), (3, 2, 2, 7776), (5, 2, 1, 720)] {
            let l = level(p, eps, n);
            assert_eq!(l.order(), expect);
            assert_eq!(k_order(l.ctx()), expect as u64);
            assert!(l.table().elements().iter().all(|g| l.ctx().is_unitary(g)));
        }
    }

    /// Independent count: every matrix over the residue ring that satisfies the
    /// unitary relations.
    #[test]
    fn brute_force_matches_enumeration_at_level_one() {
        for (p, eps) in [(3u64, 2u64), (5, 2)] {
            let ctx = RingCtx::new(p, eps, 1).unwrap();
            let all: Vec<Quad> = (0..p as u32)
                .flat_map(|re| (0..p as u32).map(move |im| Quad { re, im }))
                .collect();
            let mut count = 0;
            for &a in &all {
                for &b in &all {
                    for &c in &all {
                        for &d in &all {
                            if ctx.is_unitary(&Mat2::new(a, b, c, d)) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(count, level(p, eps, 1).order());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = RingCtx::new(3, 2, 4).unwrap();
        assert!(matches!(
            enumerate_k(&ctx, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded {
                predicted: 51_018_336,
                ..
            })
        ));
    }

    #[test]
    fn named_subgroup_orders() {
        let l1 = level(3, 2, 1);
        assert_eq!(l1.subgroup(Named::Center).unwrap().order(), 4);
        assert_eq!(l1.subgroup(Named::Borel).unwrap().order(), 24);
        assert_eq!(l1.subgroup(Named::Torus0).unwrap().order(), 8);
        let l2 = level(3, 2, 2);
        assert_eq!(l2.subgroup(Named::Filtration(1)).unwrap().order(), 81);
        assert_eq!(l2.subgroup(Named::Torus0).unwrap().order(), 72);
        assert_eq!(l2.subgroup(Named::SplitTorus0).unwrap().order(), 6);
        assert_eq!(l2.subgroup(Named::UnipotentK).unwrap().order(), 9);
    }

    #[test]
    fn congruence_subgroups_are_normal_with_expected_index() {
        let l = level(3, 2, 2);
        let q = 3usize;
        let k1 = l.subgroup(Named::Filtration(1)).unwrap();
        assert!(k1.is_normal_in(l.full()));
        assert_eq!(l.order() / k1.order(), q * (q - 1) * (q + 1) * (q + 1));
        let b = l.subgroup(Named::Borel).unwrap();
        let b1 = b.intersection(&k1, "b1").unwrap();
        assert_eq!(b.order() / b1.order(), q * (q * q - 1));
        assert_eq!(b1.order(), q.pow(3));
    }

    #[test]
    fn standalone_groups() {
        let ctx = RingCtx::new(3, 2, 4).unwrap();
        assert_eq!(enumerate_torus(&ctx).unwrap().order(), 8 * 729);
        let k2 = enumerate_filtration(&ctx, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(k2.order(), 6561);
        assert!(k2.elements().iter().all(|g| ctx.in_congruence(g, 2)));
    }

    #[test]
    fn borel_double_cosets() {
        for (n, expect) in [(1, 2), (2, 3)] {
            let l = level(3, 2, n);
            let b = l.subgroup(Named::Borel).unwrap();
            let dc = DoubleCosets::compute(&b, &b, l.full()).unwrap();
            assert_eq!(dc.count(), expect);
            assert_eq!(dc.sizes.iter().sum::<u64>(), l.order() as u64);
            // The standard representatives hit distinct double cosets.
            let ctx = l.ctx();
            let mut reps = vec![Mat2::IDENTITY, Mat2::WEYL];
            reps.extend((1..n).map(|k| ctx.lower_unipotent(ctx.pow_p(k) as i64)));
            let mut ids: Vec<_> = reps
                .iter()
                .map(|g| dc.coset_of(l.table().index_of(g).unwrap()).unwrap())
                .collect();
            ids.sort();
            ids.dedup();
            assert_eq!(ids.len(), expect);
        }
    }

    #[test]
    fn classes_partition_the_group() {
        let l = level(3, 2, 1);
        let cl = l.classes();
        assert_eq!(cl.sizes().iter().sum::<u64>(), 96);
        assert_eq!(cl.reps()[0], 0);
        assert_eq!(cl.sizes()[0], 1);
        // class sizes divide the group order
        assert!(cl.sizes().iter().all(|s| 96 % s == 0));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = RingCtx::new(3, 2, 1).unwrap();
        let a = Level::cached(&ctx, DEFAULT_BUDGET, dir.path()).unwrap();
        let b = Level::cached(&ctx, DEFAULT_BUDGET, dir.path()).unwrap();
        assert_eq!(a.table().elements(), b.table().elements());
        assert_eq!(a.classes().class_ids(), b.classes().class_ids());
        assert_eq!(a.table().gens(), b.table().gens());
    }

    #[test]
    fn product_rejects_non_subgroups() {
        let l = level(3, 2, 1);
        let b = l.subgroup(Named::Borel).unwrap();
        let w = Arc::new(SubgroupTable::generated_by(
            l.table(),
            "w",
            &[l.table().index_of(&Mat2::WEYL).unwrap()],
        ));
        assert!(matches!(b.product(&w, "bw"), Err(Error::NotSubgroup(_))));
    }
}
