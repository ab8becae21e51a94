use super::matrix::Mat2;
use crate::ring::{Quad, RingCtx};
use std::fmt;

/// The subgroups of `K/K_N` the library knows by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Named {
    /// Upper triangular elements.
    Borel,
    /// Borel times `K_n`: lower-left entry in `p^n`.
    BorelFilt(u32),
    /// Diagonal elements `diag(a, conj(a)⁻¹)`.
    Torus0,
    /// Diagonal elements with `a ∈ 1 + p^m`.
    TorusFilt(u32),
    /// Diagonal elements `diag(a, a⁻¹)` with `a` rational.
    SplitTorus0,
    /// Rational diagonal elements with `a ∈ 1 + p^m`.
    SplitTorusFilt(u32),
    /// Scalars of norm one.
    Center,
    /// `[[1, ω·b], [0, 1]]`.
    UnipotentK,
    /// Center times the unipotent radical: `[[a, b], [0, a]]`.
    CenterUnipotent,
    /// The congruence subgroup `K_m`.
    Filtration(u32),
    /// Entries `1 + p^⌈d/2⌉, p^⌈d/2⌉` except the lower-left one in `p^⌈(d+1)/2⌉`.
    J(u32),
    /// Center · unipotent radical · `J(d)`.
    ZUJ(u32),
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Borel => write!(f, "borel"),
            Named::BorelFilt(n) => write!(f, "borel-k{n}"),
            Named::Torus0 => write!(f, "torus0"),
            Named::TorusFilt(m) => write!(f, "torus-{m}"),
            Named::SplitTorus0 => write!(f, "split-torus0"),
            Named::SplitTorusFilt(m) => write!(f, "split-torus-{m}"),
            Named::Center => write!(f, "center"),
            Named::UnipotentK => write!(f, "unipotent"),
            Named::CenterUnipotent => write!(f, "center-unipotent"),
            Named::Filtration(m) => write!(f, "k{m}"),
            Named::J(d) => write!(f, "j{d}"),
            Named::ZUJ(d) => write!(f, "zuj{d}"),
        }
    }
}

pub fn ceil_half(d: u32) -> u32 {
    d.div_ceil(2)
}

impl Named {
    /// Membership test, for every name except the product `ZUJ`.
    pub fn predicate(self, ctx: &RingCtx, g: &Mat2) -> Option<bool> {
        let v = |x: Quad| ctx.val(x);
        let v1 = |x: Quad| ctx.val(ctx.sub(x, Quad::ONE));
        let diag = g.b.is_zero() && g.c.is_zero();
        Some(match self {
            Named::Borel => g.c.is_zero(),
            Named::BorelFilt(n) => v(g.c) >= n,
            Named::Torus0 => diag,
            Named::TorusFilt(m) => diag && v1(g.a) >= m,
            Named::SplitTorus0 => diag && g.a.is_rational(),
            Named::SplitTorusFilt(m) => diag && g.a.is_rational() && v1(g.a) >= m,
            Named::Center => diag && g.a == g.d,
            Named::UnipotentK => g.a == Quad::ONE && g.d == Quad::ONE && g.c.is_zero(),
            Named::CenterUnipotent => g.c.is_zero() && g.a == g.d,
            Named::Filtration(m) => ctx.in_congruence(g, m),
            Named::J(d) => {
                let (m, m2) = (ceil_half(d), ceil_half(d + 1));
                v1(g.a) >= m && v1(g.d) >= m && v(g.b) >= m && v(g.c) >= m2
            }
            Named::ZUJ(_) => return None,
        })
    }
}
