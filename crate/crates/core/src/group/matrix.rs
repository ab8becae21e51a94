use crate::ring::{Quad, RingCtx};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A 2×2 matrix `[[a, b], [c, d]]` over `O_E / p^N`.
///
/// The eight coordinates `(a.re, a.im, b.re, …, d.im)` are its canonical encoding;
/// equality and hashing go through them.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Quad,
    pub b: Quad,
    pub c: Quad,
    pub d: Quad,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: Quad::ONE,
        b: Quad::ZERO,
        c: Quad::ZERO,
        d: Quad::ONE,
    };

    /// The long Weyl element `[[0, 1], [1, 0]]`, which is also the hermitian form.
    pub const WEYL: Mat2 = Mat2 {
        a: Quad::ZERO,
        b: Quad::ONE,
        c: Quad::ONE,
        d: Quad::ZERO,
    };

    pub fn new(a: Quad, b: Quad, c: Quad, d: Quad) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn residues(&self) -> [u32; 8] {
        [
            self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im, self.d.re, self.d.im,
        ]
    }

    pub fn from_residues(r: [u32; 8]) -> Self {
        let q = |i: usize| Quad { re: r[i], im: r[i + 1] };
        Mat2::new(q(0), q(2), q(4), q(6))
    }

    pub fn entries(&self) -> [Quad; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [Quad; 4]) -> Self {
        Mat2::new(e[0], e[1], e[2], e[3])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}

impl RingCtx {
    #[inline]
    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            c: self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            d: self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        }
    }

    pub fn mat_add(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(x.a, y.a),
            b: self.add(x.b, y.b),
            c: self.add(x.c, y.c),
            d: self.add(x.d, y.d),
        }
    }

    pub fn mat_sub(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.sub(x.a, y.a),
            b: self.sub(x.b, y.b),
            c: self.sub(x.c, y.c),
            d: self.sub(x.d, y.d),
        }
    }

    pub fn mat_scale(&self, x: &Mat2, s: Quad) -> Mat2 {
        Mat2::from_entries(x.entries().map(|e| self.mul(e, s)))
    }

    /// Inverse of an element of the unitary group: `w · conj(g)^T · w`.
    #[inline]
    pub fn mat_inv_unitary(&self, g: &Mat2) -> Mat2 {
        Mat2 {
            a: self.conj(g.d),
            b: self.conj(g.b),
            c: self.conj(g.c),
            d: self.conj(g.a),
        }
    }

    /// `g·x·g⁻¹` for unitary `g`.
    pub fn mat_conjugate(&self, g: &Mat2, x: &Mat2) -> Mat2 {
        self.mat_mul(&self.mat_mul(g, x), &self.mat_inv_unitary(g))
    }

    /// Inverse of any matrix with unit determinant.
    pub fn mat_inv(&self, g: &Mat2) -> crate::Result<Mat2> {
        let di = self.inv(self.mat_det(g))?;
        Ok(Mat2 {
            a: self.mul(g.d, di),
            b: self.mul(self.neg(g.b), di),
            c: self.mul(self.neg(g.c), di),
            d: self.mul(g.a, di),
        })
    }

    pub fn mat_det(&self, g: &Mat2) -> Quad {
        self.sub(self.mul(g.a, g.d), self.mul(g.b, g.c))
    }

    pub fn mat_trace(&self, g: &Mat2) -> Quad {
        self.add(g.a, g.d)
    }

    /// Whether `conj(g)^T · w · g = w` holds modulo `p^N`.
    pub fn is_unitary(&self, g: &Mat2) -> bool {
        let ac = self.mul(self.conj(g.a), g.c);
        let bd = self.mul(self.conj(g.b), g.d);
        let ad = self.add(self.mul(self.conj(g.a), g.d), self.mul(self.conj(g.c), g.b));
        ac.re == 0 && bd.re == 0 && ad == Quad::ONE
    }

    /// Reduce every entry modulo `p^k`, staying in this ring.
    pub fn mat_truncate(&self, g: &Mat2, k: u32) -> Mat2 {
        Mat2::from_entries(g.entries().map(|e| self.truncate(e, k)))
    }

    /// Move a matrix into the ring `other` with the same `(p, ε)`.
    pub fn mat_transfer(&self, g: &Mat2, other: &RingCtx) -> Mat2 {
        Mat2::from_entries(g.entries().map(|e| self.transfer(e, other)))
    }

    /// `diag(a, conj(a)⁻¹)`.
    pub fn torus(&self, a: Quad) -> crate::Result<Mat2> {
        let d = self.inv(self.conj(a))?;
        Ok(Mat2::new(a, Quad::ZERO, Quad::ZERO, d))
    }

    /// `[[1, b·ω], [0, 1]]` with `b` rational.
    pub fn upper_unipotent(&self, b: i64) -> Mat2 {
        Mat2::new(Quad::ONE, self.elem(0, b), Quad::ZERO, Quad::ONE)
    }

    /// `[[1, 0], [c·ω, 1]]` with `c` rational.
    pub fn lower_unipotent(&self, c: i64) -> Mat2 {
        Mat2::new(Quad::ONE, Quad::ZERO, self.elem(0, c), Quad::ONE)
    }

    pub fn scalar(&self, z: Quad) -> Mat2 {
        Mat2::new(z, Quad::ZERO, Quad::ZERO, z)
    }

    /// Whether `g ≡ I` modulo `p^m` (membership in the `m`-th congruence subgroup).
    pub fn in_congruence(&self, g: &Mat2, m: u32) -> bool {
        let t = |x: Quad| self.val(x) >= m;
        t(self.sub(g.a, Quad::ONE)) && t(g.b) && t(g.c) && t(self.sub(g.d, Quad::ONE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_elements_are_unitary() {
        let c = RingCtx::new(3, 2, 3).unwrap();
        assert!(c.is_unitary(&Mat2::IDENTITY));
        assert!(c.is_unitary(&Mat2::WEYL));
        assert!(c.is_unitary(&c.upper_unipotent(5)));
        assert!(c.is_unitary(&c.lower_unipotent(7)));
        assert!(c.is_unitary(&c.torus(c.elem(1, 1)).unwrap()));
        assert!(!c.is_unitary(&Mat2::new(Quad::ONE, Quad::ONE, Quad::ZERO, Quad::ONE)));
    }

    #[test]
    fn unitary_inverse() {
        let c = RingCtx::new(3, 2, 2).unwrap();
        let g = c.mat_mul(
            &c.upper_unipotent(2),
            &c.mat_mul(&Mat2::WEYL, &c.torus(c.elem(2, 1)).unwrap()),
        );
        assert_eq!(c.mat_mul(&g, &c.mat_inv_unitary(&g)), Mat2::IDENTITY);
        assert_eq!(Mat2::from_residues(g.residues()), g);
    }
}
