use crate::error::{Error, Result};
use crate::group::Mat2;
use crate::ring::{Quad, RingCtx};
use rand::{Rng, RngExt};

/// Solve `A·x = rhs` over `F_p` for a 3×4 system by elimination, pivoting on the
/// first nonzero entry in the fixed variable order; free variables are zero.
fn solve_mod_p(mut rows: [[u64; 5]; 3], p: u64) -> Option<[u64; 4]> {
    let inv = |x: u64| (1..p).find(|&y| x * y % p == 1).expect("nonzero residue");
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        let Some(pr) = (r..3).find(|&i| !rows[i][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, pr);
        let iv = inv(rows[r][col] % p);
        for v in rows[r].iter_mut() {
            *v = *v % p * iv % p;
        }
        for i in 0..3 {
            if i != r && !rows[i][col].is_multiple_of(p) {
                let f = rows[i][col] % p;
                let pivot = rows[r];
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x = (*x % p + p * p - f * y % p) % p;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == 3 {
            break;
        }
    }
    if rows[r..].iter().any(|row| row[4] % p != 0) {
        return None;
    }
    let mut x = [0u64; 4];
    for (row, col) in pivots {
        x[col] = rows[row][4] % p;
    }
    Some(x)
}

/// Given `k ∈ K` with `a ≡ d` and `c ≡ μb` modulo `p^s`, where `μ` is rational of
/// positive valuation, find `k' = [[a', b'], [μb', a']] ∈ K` with `a' ≡ a` and
/// `b' ≡ b` modulo `p^s`, one `p`-adic digit at a time.
pub fn hensel_lift(ctx: &RingCtx, k: &Mat2, mu: Quad, s: u32) -> Result<Mat2> {
    let n = ctx.level();
    if s == 0 || s > n {
        return Err(Error::PreconditionViolated(format!("s = {s} outside 1..={n}")));
    }
    if !mu.is_rational() || ctx.val(mu) == 0 {
        return Err(Error::PreconditionViolated(
            "μ must be rational of positive valuation".into(),
        ));
    }
    if !ctx.is_unitary(k) {
        return Err(Error::NotAMember("K".into()));
    }
    if ctx.truncate(k.a, s) != ctx.truncate(k.d, s) || ctx.truncate(k.c, s) != ctx.truncate(ctx.mul(mu, k.b), s) {
        return Err(Error::PreconditionViolated(format!(
            "k is not congruent to T(X) modulo p^{s}"
        )));
    }
    let p = ctx.p();
    let eps = ctx.eps() % p;
    let (mut a, mut b) = (k.a, k.b);
    for t in s..n {
        let lhs = ctx.add(ctx.mul(ctx.conj(a), a), ctx.mul(mu, ctx.mul(ctx.conj(b), b)));
        let excess = ctx.sub(lhs, Quad::ONE);
        let cross = ctx.mul(ctx.conj(b), a);
        let cross_re = ctx.base(cross.re as i64);
        if ctx.val(excess) < t || ctx.val(cross_re) < t {
            return Err(Error::SystemInconsistent);
        }
        let alpha = ctx.div_p_pow(excess, t)?.re as u64 % p;
        let beta0 = ctx.div_p_pow(cross_re, t)?.re as u64 % p;
        let (a0, a1) = (a.re as u64 % p, a.im as u64 % p);
        let (b0, b1) = (b.re as u64 % p, b.im as u64 % p);
        let neg = |x: u64| (p - x % p) % p;
        let rows = [
            [2 * a0 % p, neg(2 * eps * a1), 0, 0, neg(alpha)],
            [b0, neg(eps * b1), a0, neg(eps * a1), neg(beta0)],
            [neg(b1), b0, a1, neg(a0), 0],
        ];
        let [x0, x1, y0, y1] = solve_mod_p(rows, p).ok_or(Error::SystemInconsistent)?;
        let pt = ctx.p_power(t);
        a = ctx.add(a, ctx.mul(ctx.elem(x0 as i64, x1 as i64), pt));
        b = ctx.add(b, ctx.mul(ctx.elem(y0 as i64, y1 as i64), pt));
    }
    let lifted = Mat2::new(a, b, ctx.mul(mu, b), a);
    if !ctx.is_unitary(&lifted) {
        return Err(Error::SystemInconsistent);
    }
    Ok(lifted)
}

/// `(I + Y)(I - Y)⁻¹`, unitary whenever `Y` lies in the Lie algebra.
pub fn cayley(ctx: &RingCtx, y: &Mat2) -> Result<Mat2> {
    let plus = ctx.mat_add(&Mat2::IDENTITY, y);
    let minus = ctx.mat_sub(&Mat2::IDENTITY, y);
    Ok(ctx.mat_mul(&plus, &ctx.mat_inv(&minus)?))
}

fn random_unit(ctx: &RingCtx, rng: &mut impl Rng) -> Quad {
    let m = ctx.modulus() as i64;
    loop {
        let x = ctx.elem(rng.random_range(0..m), rng.random_range(0..m));
        if ctx.is_unit(x) {
            return x;
        }
    }
}

/// A random element of the centralizer of `X̃(u, v)` with `μ = v/u`: a norm-one
/// scalar times the Cayley transform of `[[z√ε, y√ε], [μy√ε, z√ε]]`.
pub fn random_centralizer_elem(ctx: &RingCtx, mu: Quad, rng: &mut impl Rng) -> Mat2 {
    let m = ctx.modulus() as i64;
    loop {
        let z = ctx.elem(0, rng.random_range(0..m));
        let y = ctx.elem(0, rng.random_range(0..m));
        let body = Mat2::new(z, y, ctx.mul(mu, y), z);
        if let Ok(c) = cayley(ctx, &body) {
            let w = random_unit(ctx, rng);
            let unit = ctx.mul(w, ctx.inv(ctx.conj(w)).expect("unit"));
            return ctx.mat_mul(&ctx.scalar(unit), &c);
        }
    }
}

/// A random element of `K_s`: the Cayley transform of `p^s·[[α, β√ε], [γ√ε, -conj α]]`.
pub fn random_congruence_elem(ctx: &RingCtx, s: u32, rng: &mut impl Rng) -> Mat2 {
    let m = ctx.modulus() as i64;
    let mut r = || rng.random_range(0..m);
    let alpha = ctx.elem(r(), r());
    let body = Mat2::new(alpha, ctx.elem(0, r()), ctx.elem(0, r()), ctx.neg(ctx.conj(alpha)));
    let body = ctx.mat_scale(&body, ctx.p_power(s));
    cayley(ctx, &body).expect("I - Y is invertible for Y in p·M_2")
}

/// A random `k` meeting the lifting hypotheses: centralizer element times `K_s` element.
pub fn random_admissible(ctx: &RingCtx, mu: Quad, s: u32, rng: &mut impl Rng) -> Mat2 {
    let t = random_centralizer_elem(ctx, mu, rng);
    let g = random_congruence_elem(ctx, s, rng);
    ctx.mat_mul(&t, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_handles_a_full_rank_system() {
        // x0 = 1, x1 + y0 = 2, y1 = 0 over F_5
        let rows = [[1, 0, 0, 0, 1], [0, 1, 1, 0, 2], [0, 0, 0, 1, 0]];
        let x = solve_mod_p(rows, 5).unwrap();
        assert_eq!(x, [1, 2, 0, 0]);
        let bad = [[1, 0, 0, 0, 1], [1, 0, 0, 0, 2], [0, 0, 0, 1, 0]];
        assert!(solve_mod_p(bad, 5).is_none());
    }
}
