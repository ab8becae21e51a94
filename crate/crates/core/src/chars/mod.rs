//! Finite abelian groups and their characters, in particular characters of the
//! diagonal torus and their depth.

mod abelian;
mod torus;

pub use abelian::{AbelianStructure, CharRecord, MultChar};
pub use torus::{DepthProfile, Torus};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Mat2;
    use crate::ring::RingCtx;
    use crate::Phase;
    use std::sync::Arc;

    fn torus(n: u32) -> Arc<Torus> {
        Torus::shared(&RingCtx::new(3, 2, n).unwrap()).unwrap()
    }

    #[test]
    fn structure_orders() {
        assert_eq!(torus(1).structure().orders(), &[8]);
        assert_eq!(torus(2).structure().orders(), &[8, 3, 3]);
        assert_eq!(torus(2).characters().count(), 72);
        assert_eq!(torus(1).center().orders(), &[4]);
        assert_eq!(torus(3).center().orders(), &[4, 9]);
    }

    #[test]
    fn coordinates_reconstruct_elements() {
        let t = torus(3);
        let s = t.structure();
        let g = t.table();
        let ctx = t.ctx();
        for &m in s.subgroup().members() {
            let c = s.coords_of(m).unwrap();
            let mut x = Mat2::IDENTITY;
            for (&gi, &ci) in s.gens().iter().zip(c) {
                for _ in 0..ci {
                    x = ctx.mat_mul(&x, g.elem(gi));
                }
            }
            assert_eq!(&x, g.elem(m));
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        let t = torus(2);
        let g = t.table();
        for chi in t.characters().step_by(7) {
            for x in (0..g.order() as u32).step_by(5) {
                for y in (0..g.order() as u32).step_by(11) {
                    let xy = g.mul(x, y);
                    assert_eq!(
                        chi.eval_index(xy).unwrap(),
                        chi.eval_index(x).unwrap() + chi.eval_index(y).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn depth_counts() {
        let t = torus(2);
        let profs: Vec<_> = t.characters().map(|c| t.depth_profile(&c)).collect();
        assert_eq!(profs.iter().filter(|p| p.depth == 0).count(), 8);
        assert_eq!(profs.iter().filter(|p| p.depth == 1).count(), 64);
        // minimal depth one: nontrivial on the rational part of T_1
        assert_eq!(profs.iter().filter(|p| p.depth == 1 && p.minimal).count(), 48);
        assert!(profs.iter().all(|p| p.true_depth <= p.depth));
    }

    #[test]
    fn factorization_is_pointwise_exact() {
        let t = torus(2);
        let ctx = t.ctx();
        for chi in t.characters() {
            let (phi, chi_min) = t.minimal_depth_factorization(&chi).unwrap();
            let prof = t.depth_profile(&chi);
            let pm = t.depth_profile(&chi_min);
            assert!(pm.minimal);
            assert_eq!(pm.depth, prof.true_depth);
            for g in t.table().elements() {
                let lhs = chi.eval(g).unwrap();
                let rhs = t.det_value(&phi, g).unwrap() + chi_min.eval(g).unwrap();
                assert_eq!(lhs, rhs, "{g:?}");
            }
            let _ = ctx;
        }
    }

    #[test]
    fn central_reduction_lands_on_one_or_delta() {
        let t = torus(2);
        let rho = t.nonsquare_class();
        for chi in t.characters() {
            let (_, k, chi0) = t.central_reduction(&chi).unwrap();
            let theta0 = t.central_character(&chi0).unwrap();
            if k == 0 {
                assert!(theta0.is_trivial());
            } else {
                assert_eq!(theta0, rho);
            }
        }
    }

    #[test]
    fn phi_det_requires_small_true_depth() {
        let t = torus(2);
        let chi = t.characters().find(|c| t.depth_profile(c).true_depth == 1).unwrap();
        assert!(t.phi_det_solve(&chi, 0).is_err());
        let phi = t.phi_det_solve(&chi, 1).unwrap();
        let _ = phi;
    }

    #[test]
    fn delta_is_a_square_when_q_is_3_mod_4() {
        for (p, eps, square) in [(3, 2, true), (5, 2, false), (7, 3, true)] {
            let t = Torus::shared(&RingCtx::new(p, eps, 1).unwrap()).unwrap();
            let delta = t.delta();
            let is_square = t.center().characters().any(|phi| phi.pow(2) == delta);
            assert_eq!(is_square, square);
            let rho = t.nonsquare_class();
            assert!(!t.center().characters().any(|phi| phi.pow(2) == rho));
            if !square {
                assert_eq!(rho, delta);
            }
        }
    }

    #[test]
    fn delta_takes_sign_values() {
        let t = torus(1);
        let d = t.delta();
        let g = t.center().subgroup().parent();
        let vals: Vec<Phase> = t
            .center()
            .subgroup()
            .members()
            .iter()
            .map(|&m| d.eval(g.elem(m)).unwrap())
            .collect();
        assert!(vals.iter().all(|v| v.den() <= 2));
        assert!(vals.iter().any(|v| v.den() == 2));
    }
}
