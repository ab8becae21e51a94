use super::*;
use crate::group::{enumerate_filtration, Level, Named, SubgroupTable, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn ctx(n: u32) -> RingCtx {
    RingCtx::new(3, 2, n).unwrap()
}

fn level(n: u32) -> Arc<Level> {
    Level::shared(&ctx(n)).unwrap()
}

/// `p^s·[[α, β√ε], [γ√ε, -conj α]]`, the general element of `𝔨_s`.
fn lattice_elem(c: &RingCtx, s: u32, coords: [i64; 4]) -> LieElem {
    let alpha = c.elem(coords[0], coords[1]);
    let m = Mat2::new(alpha, c.elem(0, coords[2]), c.elem(0, coords[3]), c.neg(c.conj(alpha)));
    LieElem::integral(c.mat_scale(&m, c.p_power(s)))
}

fn x_tilde(c: &RingCtx, u: Shifted, v: Shifted, d: u32) -> LieElem {
    make_x(c, Shifted::integral(Quad::ZERO), u, v, d).unwrap()
}

#[test]
fn make_x_examples() {
    let c = ctx(2);
    let x = x_tilde(&c, Shifted::new(Quad::ONE, 1), Shifted::integral(Quad::ZERO), 1);
    assert!(is_in_algebra(&c, &x));
    assert!(in_lattice(&c, &x, -1));
    assert!(!in_lattice(&c, &x, 0));
    // ν(z) = -2 < -1
    let bad = make_x(
        &c,
        Shifted::new(Quad::ONE, 2),
        Shifted::new(Quad::ONE, 1),
        Shifted::integral(Quad::ZERO),
        1,
    );
    assert!(matches!(bad, Err(Error::ValuationViolation(_))));
    // ν(v) = ν(u) is rejected
    let bad = make_x(
        &c,
        Shifted::integral(Quad::ZERO),
        Shifted::new(Quad::ONE, 1),
        Shifted::new(Quad::ONE, 1),
        1,
    );
    assert!(matches!(bad, Err(Error::ValuationViolation(_))));
}

#[test]
fn make_x_accepts_the_y_chi_parameters() {
    // r = 1, d = 2: z = x₂, u = ε⁻¹p^{-d}, v = x₁²p^d with ν(x₁) = -r
    let c = ctx(3);
    let (r, d) = (1u32, 2u32);
    let x1 = Shifted::new(c.base(2), r);
    let x2 = Shifted::new(c.base(1), r);
    let u = Shifted::new(c.base(c.inv_base(2).unwrap() as i64), d);
    let x1sq = Shifted::new(c.mul(x1.body, x1.body), 2 * r);
    let v = Shifted::new(c.mul(x1sq.body, c.p_power(d)), 2 * r);
    let y = make_x(&c, x2, u, v, d).unwrap();
    assert!(is_in_algebra(&c, &y));
    assert_eq!(depth(&c, &y), -(d as i64));
}

#[test]
fn nilpotent_elements_lie_in_the_algebra() {
    let c = ctx(3);
    for exp in [-2, -1, 0, 1] {
        let x = NilpotentLabel::new(&c, 2, exp).unwrap().element(&c);
        assert!(is_in_algebra(&c, &x));
        assert_eq!(depth(&c, &x), exp as i64);
    }
    assert!(NilpotentLabel::new(&c, 3, 0).is_err());
}

#[test]
fn trace_pair_of_zero_and_precision() {
    let c = ctx(2);
    let x = lattice_elem(&c, 0, [1, 2, 1, 1]);
    let t = trace_pair(&c, &LieElem::zero(), &x).unwrap();
    assert!(t.body.is_zero());
    let deep = LieElem::new(x.body, 2);
    assert!(matches!(
        trace_pair(&c, &deep, &x),
        Err(Error::PrecisionExceeded { .. })
    ));
}

/// For `X ∈ 𝔨_r`, `Y ↦ ψ(Tr(XY))` is trivial on `𝔨_s` for `s > -r` and not on `𝔨_{-r}`.
#[test]
fn trace_form_identifies_the_dual_lattice() {
    let c = ctx(3);
    let r = -1i64;
    let x = LieElem::new(lattice_elem(&c, 0, [1, 1, 1, 2]).body, 1);
    assert!(in_lattice(&c, &x, r));
    let range = -1..2;
    let mut nontrivial_at_boundary = false;
    for a in range.clone() {
        for b in range.clone() {
            for e in range.clone() {
                for f in range.clone() {
                    for s in [1u32, 2] {
                        let y = lattice_elem(&c, s, [a, b, e, f]);
                        let v = c.psi(trace_pair(&c, &x, &y).unwrap()).unwrap();
                        if s as i64 > -r {
                            assert!(v.is_one());
                        } else if !v.is_one() {
                            nontrivial_at_boundary = true;
                        }
                    }
                }
            }
        }
    }
    assert!(nontrivial_at_boundary);
}

#[test]
fn centralizer_of_nilpotent_is_center_times_unipotent() {
    let l = level(2);
    let c = l.ctx();
    let x = NilpotentLabel::new(c, 1, -1).unwrap().element(c);
    let tx = centralizer(l.table(), &x).unwrap();
    let brute = fixed_points(l.full(), &x).unwrap();
    let zu = l.subgroup(Named::CenterUnipotent).unwrap();
    assert!(tx.same_members(&brute));
    assert!(tx.same_members(&zu));
    let z = l.subgroup(Named::Center).unwrap();
    let u = l.subgroup(Named::UnipotentK).unwrap();
    assert_eq!(tx.order(), z.order() * u.order());
}

#[test]
fn centralizer_of_regular_diagonal_is_the_torus() {
    let l = level(2);
    let c = l.ctx();
    let x = LieElem::new(Mat2::new(Quad::ONE, Quad::ZERO, Quad::ZERO, c.neg(Quad::ONE)), 1);
    assert!(is_in_algebra(c, &x));
    let tx = centralizer(l.table(), &x).unwrap();
    assert!(tx.same_members(&l.subgroup(Named::Torus0).unwrap()));
    assert!(tx.same_members(&fixed_points(l.full(), &x).unwrap()));
}

#[test]
fn centralizer_of_special_element_is_abelian() {
    let l = level(2);
    let c = l.ctx();
    let x = x_tilde(c, Shifted::new(Quad::ONE, 1), Shifted::integral(Quad::ONE), 1);
    let tx = centralizer(l.table(), &x).unwrap();
    assert!(tx.same_members(&fixed_points(l.full(), &x).unwrap()));
    let g = l.table();
    for &a in tx.gens() {
        for &b in tx.gens() {
            assert_eq!(g.mul(a, b), g.mul(b, a));
        }
    }
    assert!(!tx.same_members(&l.subgroup(Named::CenterUnipotent).unwrap()));
}

#[test]
fn psi_x_has_depth_d() {
    // d = 1 at N = 3: nontrivial on K_1, trivial on K_2, a character on K_1
    let c = ctx(3);
    let x = NilpotentLabel::new(&c, 1, -1).unwrap().element(&c);
    let k1 = enumerate_filtration(&c, 1, DEFAULT_BUDGET).unwrap();
    let vals: Vec<Phase> = k1.elements().iter().map(|k| psi_x(&c, &x, k).unwrap()).collect();
    assert!(vals.iter().any(|v| !v.is_one()));
    for (k, v) in k1.elements().iter().zip(&vals) {
        if c.in_congruence(k, 2) {
            assert!(v.is_one());
        }
    }
    for i in (0..k1.order() as u32).step_by(37) {
        for j in (0..k1.order() as u32).step_by(53) {
            assert_eq!(vals[k1.mul(i, j) as usize], vals[i as usize] + vals[j as usize]);
        }
    }
}

#[test]
fn moy_prasad_map_is_a_bijective_homomorphism() {
    for d in [1u32, 2, 3] {
        let c = ctx(d + 1);
        let m = d / 2 + 1;
        let km = enumerate_filtration(&c, m, DEFAULT_BUDGET).unwrap();
        let lattice_size = c.p().pow(4 * (d + 1 - m));
        assert_eq!(km.order() as u64, lattice_size);
        let logs: Vec<LieElem> = km
            .elements()
            .iter()
            .map(|k| LieElem::integral(c.mat_sub(k, &Mat2::IDENTITY)))
            .collect();
        for y in &logs {
            assert!(is_in_algebra(&c, y));
            assert!(in_lattice(&c, y, m as i64));
        }
        let mut bodies: Vec<Mat2> = logs.iter().map(|y| y.body).collect();
        bodies.sort();
        bodies.dedup();
        assert_eq!(bodies.len() as u64, lattice_size);
        for i in (0..km.order() as u32).step_by(7) {
            for j in (0..km.order() as u32).step_by(11) {
                let lhs = logs[km.mul(i, j) as usize].body;
                assert_eq!(lhs, c.mat_add(&logs[i as usize].body, &logs[j as usize].body));
            }
        }
    }
}

#[test]
fn normalizer_examples_at_depth_one() {
    let l = level(2);
    let c = l.ctx();
    let x = NilpotentLabel::new(c, 1, -1).unwrap().element(c);
    let j1 = l.subgroup(Named::J(1)).unwrap();
    assert!(j1.same_members(&l.subgroup(Named::Filtration(1)).unwrap()));
    let nz = normalizer_of_char(l.full(), &j1, |k| psi_x(c, &x, k)).unwrap();
    let tx = Arc::new(centralizer(l.table(), &x).unwrap());
    let expect = tx.product(&j1, "T(X)K1").unwrap();
    assert!(nz.same_members(&expect));
    let trivial = SubgroupTable::from_members(l.table(), "1", vec![0]).unwrap();
    let all = normalizer_of_char(l.full(), &trivial, |_| Ok(Phase::ONE)).unwrap();
    assert!(all.same_members(l.full()));
    let b = l.subgroup(Named::Borel).unwrap();
    assert!(matches!(
        normalizer_of_char(l.full(), &b, |_| Ok(Phase::ONE)),
        Err(Error::DomainNotNormal)
    ));
}

#[test]
fn nilpotent_orbits_by_brute_force() {
    let l = level(2);
    let c = l.ctx();
    let x = |u: i64, e: i32| NilpotentLabel::new(c, u, e).unwrap().element(c);
    assert_eq!(brute_conjugator_search(l.full(), &x(1, 0), &x(1, 0)), Some(0));
    assert!(brute_conjugator_search(l.full(), &x(1, 0), &x(2, 0)).is_some());
    assert!(brute_conjugator_search(l.full(), &x(1, 0), &x(1, 1)).is_none());
}

#[test]
fn orbit_labels() {
    let c = ctx(2);
    let lab = |u: i64, e: i32| NilpotentLabel::new(&c, u, e).unwrap();
    assert!(nilpotent_orbit_equiv(lab(1, -1), lab(2, -1), OrbitMode::K));
    assert!(!nilpotent_orbit_equiv(lab(1, 0), lab(1, 1), OrbitMode::G));
    assert!(nilpotent_orbit_equiv(lab(1, 0), lab(2, 2), OrbitMode::G));
    assert!(!nilpotent_orbit_equiv(lab(1, 0), lab(2, 2), OrbitMode::K));
    assert!(nilpotent_orbit_equiv(
        NilpotentLabel::Zero,
        NilpotentLabel::Zero,
        OrbitMode::K
    ));
    assert!(!nilpotent_orbit_equiv(NilpotentLabel::Zero, lab(1, 0), OrbitMode::G));
}

#[test]
fn hensel_fixed_points() {
    let c = ctx(4);
    let mu = c.base(3);
    assert_eq!(hensel_lift(&c, &Mat2::IDENTITY, mu, 1).unwrap(), Mat2::IDENTITY);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = random_centralizer_elem(&c, mu, &mut rng);
    assert!(c.is_unitary(&t));
    let lifted = hensel_lift(&c, &t, mu, 2).unwrap();
    assert!(c.in_congruence(&c.mat_mul(&c.mat_inv_unitary(&lifted), &t), 2));
    assert!(matches!(
        hensel_lift(&c, &Mat2::WEYL, mu, 1),
        Err(Error::PreconditionViolated(_))
    ));
}

#[test]
fn hensel_random_trials() {
    let c = ctx(4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for mu in [c.base(3), c.base(6), c.base(9)] {
        let shape = Shape::Special { mu };
        for s in [1, 2] {
            for _ in 0..50 {
                let k = random_admissible(&c, mu, s, &mut rng);
                assert!(c.is_unitary(&k));
                let k2 = hensel_lift(&c, &k, mu, s).unwrap();
                assert!(c.is_unitary(&k2));
                assert!(shape.contains(&c, &k2));
                assert!(c.in_congruence(&c.mat_mul(&c.mat_inv_unitary(&k2), &k), s));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_pair_is_symmetric(a in proptest::array::uniform4(0i64..27), b in proptest::array::uniform4(0i64..27), sx in 0u32..2, sy in 0u32..2) {
        let c = ctx(3);
        let x = LieElem::new(lattice_elem(&c, 0, a).body, sx);
        let y = LieElem::new(lattice_elem(&c, 0, b).body, sy);
        prop_assert_eq!(trace_pair(&c, &x, &y).unwrap(), trace_pair(&c, &y, &x).unwrap());
    }

    /// `[𝔨_r, 𝔨_s] ⊆ 𝔨_{r+s}` and the lattice chain is decreasing.
    #[test]
    fn lattices_are_graded(a in proptest::array::uniform4(0i64..81), b in proptest::array::uniform4(0i64..81), r in 0u32..2, s in 0u32..2) {
        let c = ctx(4);
        let x = lattice_elem(&c, r, a);
        let y = lattice_elem(&c, s, b);
        let br = bracket(&c, &x, &y).unwrap();
        prop_assert!(is_in_algebra(&c, &br));
        prop_assert!(in_lattice(&c, &br, (r + s) as i64));
        prop_assert!(in_lattice(&c, &x, r as i64 - 1));
    }

    /// Conjugating by `K` preserves the algebra and every lattice.
    #[test]
    fn conjugation_preserves_lattices(a in proptest::array::uniform4(0i64..27), s in 0u32..3, seed in 0u64..1000) {
        let c = ctx(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = c.mat_mul(&random_centralizer_elem(&c, c.base(3), &mut rng), &Mat2::WEYL);
        let x = lattice_elem(&c, s, a);
        let y = conjugate(&c, &g, &x);
        prop_assert!(is_in_algebra(&c, &y));
        prop_assert_eq!(in_lattice(&c, &y, s as i64), true);
    }
}
