//! Truncated p-adic integers `Z/p^N` and the unramified quadratic extension
//! obtained by adjoining a square root `ω` of a non-square unit `ε`.

use crate::error::{Error, Result};
use crate::phase::Phase;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest residue modulus we accept; keeps every product inside a `u64`.
const MAX_MODULUS: u64 = 1 << 31;

/// Largest truncation level accepted by [`RingCtx::new`].
pub const MAX_LEVEL: u32 = 8;

/// Element `re + im·ω` of `O_E / p^N`, with both coordinates reduced.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quad {
    pub re: u32,
    pub im: u32,
}

impl Quad {
    pub const ZERO: Quad = Quad { re: 0, im: 0 };
    pub const ONE: Quad = Quad { re: 1, im: 0 };
    pub const OMEGA: Quad = Quad { re: 0, im: 1 };

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_rational(self) -> bool {
        self.im == 0
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w", self.re, self.im)
    }
}

/// The value `p^{-shift}·body`, known modulo `p^{N-shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shifted {
    pub body: Quad,
    pub shift: u32,
}

impl Shifted {
    pub fn new(body: Quad, shift: u32) -> Self {
        Shifted { body, shift }
    }

    pub fn integral(body: Quad) -> Self {
        Shifted { body, shift: 0 }
    }
}

/// Parameters `(p, ε, N)` and the arithmetic they determine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingCtx {
    p: u64,
    eps: u64,
    level: u32,
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl RingCtx {
    /// Build the context for `Z/p^N[ω]`, `ω² = ε`, with `1 <= N <= 8`.
    pub fn new(p: u64, eps: u64, level: u32) -> Result<Self> {
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(Error::LevelOutOfRange(level));
        }
        Self::with_any_level(p, eps, level)
    }

    /// Same as [`RingCtx::new`] but only bounded by word size, for working precision.
    pub fn with_any_level(p: u64, eps: u64, level: u32) -> Result<Self> {
        if p.is_multiple_of(2) {
            return Err(Error::EvenResidualChar(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if level == 0 {
            return Err(Error::LevelOutOfRange(level));
        }
        let modulus = p
            .checked_pow(level)
            .filter(|&m| m < MAX_MODULUS)
            .ok_or(Error::LevelOutOfRange(level))?;
        let e = eps % p;
        if e == 0 || (1..p).any(|x| x * x % p == e) {
            return Err(Error::EpsilonIsSquare { p, eps });
        }
        Ok(RingCtx {
            p,
            eps: eps % modulus,
            level,
            modulus,
        })
    }

    /// The same `(p, ε)` at another truncation level.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        Self::with_any_level(self.p, self.eps, level)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Size of the residue field of the base ring.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn eps(&self) -> u64 {
        self.eps
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^k` as an integer; `k` may exceed the level.
    pub fn pow_p(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    pub fn elem(&self, re: i64, im: i64) -> Quad {
        Quad {
            re: self.reduce(re),
            im: self.reduce(im),
        }
    }

    pub fn base(&self, x: i64) -> Quad {
        self.elem(x, 0)
    }

    /// `p^k` as a ring element (zero once `k >= N`).
    pub fn p_power(&self, k: u32) -> Quad {
        if k >= self.level {
            Quad::ZERO
        } else {
            self.base(self.pow_p(k) as i64)
        }
    }

    pub fn add(&self, x: Quad, y: Quad) -> Quad {
        let m = self.modulus;
        Quad {
            re: ((x.re as u64 + y.re as u64) % m) as u32,
            im: ((x.im as u64 + y.im as u64) % m) as u32,
        }
    }

    pub fn neg(&self, x: Quad) -> Quad {
        let m = self.modulus;
        Quad {
            re: ((m - x.re as u64) % m) as u32,
            im: ((m - x.im as u64) % m) as u32,
        }
    }

    pub fn sub(&self, x: Quad, y: Quad) -> Quad {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Quad, y: Quad) -> Quad {
        let m = self.modulus;
        let (a0, a1, b0, b1) = (x.re as u64, x.im as u64, y.re as u64, y.im as u64);
        let re = (a0 * b0 + self.eps * (a1 * b1 % m)) % m;
        let im = (a0 * b1 + a1 * b0) % m;
        Quad {
            re: re as u32,
            im: im as u32,
        }
    }

    /// Multiply by a base-ring residue.
    pub fn scale(&self, x: Quad, s: u32) -> Quad {
        let m = self.modulus;
        Quad {
            re: (x.re as u64 * s as u64 % m) as u32,
            im: (x.im as u64 * s as u64 % m) as u32,
        }
    }

    pub fn conj(&self, x: Quad) -> Quad {
        Quad {
            re: x.re,
            im: ((self.modulus - x.im as u64) % self.modulus) as u32,
        }
    }

    /// `x·conj(x)`, a base-ring residue.
    pub fn norm(&self, x: Quad) -> u32 {
        self.mul(x, self.conj(x)).re
    }

    /// `x + conj(x)`, a base-ring residue.
    pub fn trace(&self, x: Quad) -> u32 {
        ((2 * x.re as u64) % self.modulus) as u32
    }

    /// Valuation of a base residue; `N` stands for "at least N".
    pub fn val_base(&self, x: u32) -> u32 {
        let mut x = x as u64 % self.modulus;
        if x == 0 {
            return self.level;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Valuation of `x`: the smaller coordinate valuation, `N` for zero.
    pub fn val(&self, x: Quad) -> u32 {
        self.val_base(x.re).min(self.val_base(x.im))
    }

    pub fn is_unit(&self, x: Quad) -> bool {
        self.val(x) == 0
    }

    pub fn inv_base(&self, x: u32) -> Result<u32> {
        let m = self.modulus as i64;
        let (mut r0, mut r1) = (m, x as i64 % m);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        if r0 != 1 {
            return Err(Error::NonUnit);
        }
        Ok(self.reduce(s0))
    }

    pub fn inv(&self, x: Quad) -> Result<Quad> {
        let n = self.inv_base(self.norm(x))?;
        Ok(self.scale(self.conj(x), n))
    }

    pub fn pow(&self, x: Quad, mut e: u64) -> Quad {
        let (mut acc, mut b) = (Quad::ONE, x);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Inverse of 2 in the base ring.
    pub fn half(&self) -> u32 {
        self.modulus.div_ceil(2) as u32
    }

    /// Reduce the coordinates modulo `p^k`.
    pub fn truncate(&self, x: Quad, k: u32) -> Quad {
        let m = self.pow_p(k.min(self.level)) as u32;
        Quad {
            re: x.re % m,
            im: x.im % m,
        }
    }

    /// Exact division by `p^k`; the result is only meaningful modulo `p^{N-k}`.
    pub fn div_p_pow(&self, x: Quad, k: u32) -> Result<Quad> {
        if self.val(x) < k {
            return Err(Error::ValuationViolation(format!("{x:?} is not divisible by p^{k}")));
        }
        let d = self.pow_p(k) as u32;
        Ok(Quad {
            re: x.re / d,
            im: x.im / d,
        })
    }

    /// Move `x` from this ring to `other`, which must share `(p, ε)`;
    /// coordinates are taken as their least non-negative representatives.
    pub fn transfer(&self, x: Quad, other: &RingCtx) -> Quad {
        other.elem(x.re as i64, x.im as i64)
    }

    /// Valuation of `p^{-shift}·body`, computed from the body's valuation.
    pub fn shifted_val(&self, x: Shifted) -> i64 {
        self.val(x.body) as i64 - x.shift as i64
    }

    /// Equality of shifted values within their common precision window.
    pub fn shifted_eq(&self, x: Shifted, y: Shifted) -> bool {
        let s = x.shift.max(y.shift);
        let xs = self.mul(x.body, self.p_power(s - x.shift));
        let ys = self.mul(y.body, self.p_power(s - y.shift));
        xs == ys
    }

    /// The additive character of the base field: `t·p^{-e} ↦ exp(2πi·t/p^{e+1})`.
    /// Trivial on `pZ_p`, nontrivial on `Z_p`.
    pub fn psi_prime(&self, t: u32, shift: u32) -> Result<Phase> {
        if shift + 1 > self.level {
            return Err(Error::PrecisionExceeded {
                shift,
                level: self.level,
            });
        }
        let m = self.pow_p(shift + 1);
        Ok(Phase::new((t as u64 % m) as i128, m))
    }

    /// The additive character of the extension: `ψ'` of half the trace.
    pub fn psi(&self, x: Shifted) -> Result<Phase> {
        self.psi_prime(x.body.re, x.shift)
    }

    /// All residues of the base ring modulo `p^k`.
    pub fn residues(&self, k: u32) -> impl Iterator<Item = u32> {
        0..self.pow_p(k.min(self.level)) as u32
    }

    /// An element whose reduction generates the multiplicative group of the residue field.
    pub fn residue_primitive(&self) -> Quad {
        let res = self.at_level(1).expect("level one is always valid");
        let order = self.p * self.p - 1;
        let prime_factors: Vec<u64> = (2..=order)
            .filter(|&l| order.is_multiple_of(l) && is_prime(l))
            .collect();
        for re in 0..self.p as u32 {
            for im in 1..self.p as u32 {
                let x = Quad { re, im };
                if prime_factors.iter().all(|&l| res.pow(x, order / l) != Quad::ONE) {
                    return x;
                }
            }
        }
        unreachable!("the residue field has a primitive element")
    }
}
