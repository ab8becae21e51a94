use std::sync::Arc;
use unibranch_core::group::ceil_half;
use unibranch_core::liealg::{
    centralizer, coset_centralizer, fixed_points, make_x, nilpotent_orbit_equiv, norm_conjugator_search,
    normalizer_of_char, psi_x, LieElem, NilpotentLabel, OrbitMode,
};
use unibranch_core::{Level, Named, Quad, RingCtx, Shifted};

fn level(n: u32) -> Arc<Level> {
    Level::shared(&RingCtx::new(3, 2, n).unwrap()).unwrap()
}

fn x_tilde(c: &RingCtx, u: i64, v: i64) -> LieElem {
    make_x(
        c,
        Shifted::integral(Quad::ZERO),
        Shifted::integral(c.base(u)),
        Shifted::integral(c.base(v)),
        0,
    )
    .unwrap()
}

#[test]
fn coset_centralizer_is_centralizer_times_congruence_subgroup() {
    let l = level(3);
    let c = l.ctx();
    for (u, v) in [(1, 3), (2, 6), (1, 9), (1, 0)] {
        let x = x_tilde(c, u, v);
        let tx = Arc::new(centralizer(l.table(), &x).unwrap());
        assert!(tx.same_members(&fixed_points(l.full(), &x).unwrap()));
        for s in [1, 2] {
            let brute = coset_centralizer(l.full(), &x, s).unwrap();
            let ks = l.subgroup(Named::Filtration(s as u32)).unwrap();
            let expect = tx.product(&ks, "T(X)K_s").unwrap();
            assert!(brute.same_members(&expect), "u={u} v={v} s={s}");
        }
    }
}

/// `X(z) + X̃(u, v)` with `ν(u) = -d` and small `z`, `v` carries the same data on `J_d`
/// as the nilpotent `X_u`.
#[test]
fn perturbed_elements_share_inducing_data_with_x_u() {
    for d in [1u32, 2] {
        let l = level(d + 1);
        let c = l.ctx();
        let j = l.subgroup(Named::J(d)).unwrap();
        let zuj = l.subgroup(Named::ZUJ(d)).unwrap();
        for unit in [1i64, 2, 4] {
            let xu = NilpotentLabel::new(c, unit, -(d as i32)).unwrap().element(c);
            for (z, v) in [(0, 0), (1, 0), (0, 1), (2, 3), (4, 7)] {
                let x = make_x(
                    c,
                    Shifted::integral(c.base(z)),
                    Shifted::new(c.base(unit), d),
                    Shifted::integral(c.base(v)),
                    d,
                )
                .unwrap();
                for k in j.elements() {
                    assert_eq!(psi_x(c, &x, k).unwrap(), psi_x(c, &xu, k).unwrap());
                }
                let tx = Arc::new(centralizer(l.table(), &x).unwrap());
                assert!(tx.product(&j, "T(X)J").unwrap().same_members(&zuj), "d={d} z={z} v={v}");
            }
        }
    }
}

#[test]
fn normalizer_of_a_perturbed_element_at_depth_two() {
    let l = level(3);
    let c = l.ctx();
    let x = make_x(
        c,
        Shifted::integral(c.base(1)),
        Shifted::new(c.base(2), 2),
        Shifted::integral(c.base(3)),
        2,
    )
    .unwrap();
    let tx = Arc::new(centralizer(l.table(), &x).unwrap());
    let domain = l.subgroup(Named::Filtration(2)).unwrap();
    let nz = normalizer_of_char(l.full(), &domain, |k| psi_x(c, &x, k)).unwrap();
    let expect = tx
        .product(&l.subgroup(Named::Filtration(ceil_half(2))).unwrap(), "T(X)K_1")
        .unwrap();
    assert!(nz.same_members(&expect));
    assert!(nz.order() < l.order());
}

#[test]
fn nilpotent_centralizer_has_the_product_order() {
    let l = level(2);
    let c = l.ctx();
    let x = NilpotentLabel::new(c, 1, -1).unwrap().element(c);
    let tx = centralizer(l.table(), &x).unwrap();
    let z = l.subgroup(Named::Center).unwrap().order();
    let u = l.subgroup(Named::UnipotentK).unwrap().order();
    assert_eq!(tx.order(), z * u);
    assert!(tx.same_members(&fixed_points(l.full(), &x).unwrap()));
    assert!(tx.same_members(&l.subgroup(Named::CenterUnipotent).unwrap()));
}

#[test]
fn g_orbit_rule_agrees_with_norm_search() {
    let c = RingCtx::new(3, 2, 2).unwrap();
    let mut labels = vec![NilpotentLabel::Zero];
    for e in -3..3 {
        for u in [1, 2, 4, 5] {
            labels.push(NilpotentLabel::new(&c, u, e).unwrap());
        }
    }
    for &a in &labels {
        for &b in &labels {
            assert_eq!(
                nilpotent_orbit_equiv(a, b, OrbitMode::G),
                norm_conjugator_search(&c, a, b).is_some(),
                "{a:?} {b:?}"
            );
        }
    }
    // the witness really has the right norm
    let (a, b) = (
        NilpotentLabel::new(&c, 1, 0).unwrap(),
        NilpotentLabel::new(&c, 2, 2).unwrap(),
    );
    let (w, j) = norm_conjugator_search(&c, a, b).unwrap();
    assert_eq!(j, -1);
    assert_eq!(c.base(c.norm(w) as i64), c.base(2));
}
