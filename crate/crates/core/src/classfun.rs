//! Complex class functions on enumerated groups: inner products, induction,
//! restriction, twisting and decomposition.

use crate::error::{Error, Result};
use crate::group::{left_transversal, ConjClasses, Level, Mat2, Named, SubgroupTable};
use crate::phase::Phase;
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Pointwise tolerance for equality of class functions.
pub const EQ_TOL: f64 = 1e-9;
/// Window for accepting a float as an integer.
pub const NEAR_INT_TOL: f64 = 1e-6;
/// Bound on the norm of a decomposition residual.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// A class function, stored as one value per conjugacy class.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    classes: Arc<ConjClasses>,
    values: Vec<Complex64>,
}

/// Where a representation becomes trivial on the congruence filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepDepth {
    /// Least `d` with `K_{d+1}` in the kernel.
    pub depth: u32,
    /// Whether all of `K` acts trivially.
    pub trivial: bool,
}

/// Multiplicities of basis elements and what is left over.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub multiplicities: Vec<i64>,
    pub remainder: ClassFunction,
    /// `sqrt⟨r, r⟩` for the remainder `r`.
    pub remainder_norm: f64,
}

pub fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < NEAR_INT_TOL).then_some(r as i64)
}

impl ClassFunction {
    pub fn new(classes: &Arc<ConjClasses>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != classes.count() {
            return Err(Error::PreconditionViolated(format!(
                "{} values for {} classes",
                values.len(),
                classes.count()
            )));
        }
        Ok(ClassFunction {
            classes: classes.clone(),
            values,
        })
    }

    pub fn zero(classes: &Arc<ConjClasses>) -> Self {
        ClassFunction {
            classes: classes.clone(),
            values: vec![Complex64::new(0.0, 0.0); classes.count()],
        }
    }

    pub fn trivial(classes: &Arc<ConjClasses>) -> Self {
        ClassFunction {
            classes: classes.clone(),
            values: vec![Complex64::new(1.0, 0.0); classes.count()],
        }
    }

    /// Evaluate `f` on each class representative.
    pub fn from_fn(classes: &Arc<ConjClasses>, f: impl Fn(&Mat2) -> Complex64) -> Self {
        let g = classes.subgroup().parent();
        let values = classes.reps().iter().map(|&r| f(g.elem(r))).collect();
        ClassFunction {
            classes: classes.clone(),
            values,
        }
    }

    /// A linear character given by its phases.
    pub fn from_phases(classes: &Arc<ConjClasses>, f: impl Fn(&Mat2) -> Result<Phase>) -> Result<Self> {
        let g = classes.subgroup().parent();
        let values = classes
            .reps()
            .iter()
            .map(|&r| f(g.elem(r)).map(Phase::to_complex))
            .collect::<Result<_>>()?;
        Ok(ClassFunction {
            classes: classes.clone(),
            values,
        })
    }

    pub fn classes(&self) -> &Arc<ConjClasses> {
        &self.classes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at the identity.
    pub fn degree(&self) -> f64 {
        self.values[0].re
    }

    pub fn value_at(&self, g: &Mat2) -> Option<Complex64> {
        self.classes.class_of_elem(g).map(|c| self.values[c])
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if Arc::ptr_eq(&self.classes, &other.classes) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(1/|G|) Σ f(g)·conj(h(g))`.
    pub fn inner(&self, other: &ClassFunction) -> Result<Complex64> {
        self.check_same(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.classes.sizes())
            .map(|((a, b), &n)| a * b.conj() * n as f64)
            .sum();
        Ok(s / self.classes.group_order() as f64)
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).expect("same group").re
    }

    pub fn is_irreducible(&self) -> bool {
        (self.norm_sq() - 1.0).abs() < NEAR_INT_TOL && self.degree() > 0.0
    }

    fn zip_with(&self, other: &ClassFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same(other)?;
        Ok(ClassFunction {
            classes: self.classes.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product; with a linear character this is the twist.
    pub fn twist(&self, lambda: &ClassFunction) -> Result<Self> {
        self.zip_with(lambda, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Self {
        ClassFunction {
            classes: self.classes.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ClassFunction {
            classes: self.classes.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn max_deviation(&self, other: &ClassFunction) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &ClassFunction) -> Result<bool> {
        Ok(self.max_deviation(other)? < EQ_TOL)
    }

    /// Restriction to a subgroup with its own classes.
    pub fn restrict(&self, target: &Arc<ConjClasses>) -> Result<Self> {
        let sub = target.subgroup();
        if !sub.is_subgroup_of(self.classes.subgroup()) {
            return Err(Error::NotSubgroup(sub.label().to_string()));
        }
        let values = target
            .reps()
            .iter()
            .map(|&r| self.values[self.classes.class_of(r).expect("subgroup member")])
            .collect();
        Ok(ClassFunction {
            classes: target.clone(),
            values,
        })
    }

    /// Induce from the group carrying `self` to the group of `target`.
    pub fn induce(&self, target: &Arc<ConjClasses>) -> Result<Self> {
        let cl = &self.classes;
        induce_fn(cl.subgroup(), |i| self.values[cl.class_of(i).expect("member")], target)
    }

    /// Least `d` such that `K_{d+1}` acts trivially, reading the kernel off the character.
    pub fn rep_depth(&self, level: &Level) -> Result<RepDepth> {
        if !Arc::ptr_eq(self.classes.subgroup(), level.full()) {
            return Err(Error::GroupMismatch);
        }
        let one = self.values[0];
        let g = level.table();
        let ctx = level.ctx();
        let fixed_by = |m: u32| {
            self.classes
                .reps()
                .iter()
                .zip(&self.values)
                .filter(|(&r, _)| ctx.in_congruence(g.elem(r), m))
                .all(|(_, v)| (v - one).norm() < NEAR_INT_TOL)
        };
        let trivial = self.values.iter().all(|v| (v - one).norm() < NEAR_INT_TOL);
        let n = level.n();
        let depth = (0..n).find(|&d| fixed_by(d + 1)).unwrap_or(n);
        Ok(RepDepth { depth, trivial })
    }
}

/// `Ind_H^G f` with `f` given on parent indices of `H`:
/// `(Ind f)(g) = Σ_t f°(t⁻¹ g t)` over a left transversal.
pub fn induce_fn(
    sub: &SubgroupTable,
    f: impl Fn(u32) -> Complex64,
    target: &Arc<ConjClasses>,
) -> Result<ClassFunction> {
    let ambient = target.subgroup();
    let transversal = left_transversal(sub, ambient)?;
    let parent = ambient.parent();
    let ctx = parent.ctx();
    let ts: Vec<(Mat2, Mat2)> = transversal
        .iter()
        .map(|&t| (*parent.elem(t), ctx.mat_inv_unitary(parent.elem(t))))
        .collect();
    let values = target
        .reps()
        .iter()
        .map(|&g| {
            let gm = parent.elem(g);
            ts.iter()
                .filter_map(|(t, ti)| {
                    let x = ctx.mat_mul(&ctx.mat_mul(ti, gm), t);
                    let xi = parent.index_of(&x).expect("conjugate stays in the group");
                    sub.contains(xi).then(|| f(xi))
                })
                .sum()
        })
        .collect();
    ClassFunction::new(target, values)
}

/// Multiplicities of each basis element in `f`, which must be orthonormal.
pub fn decompose(f: &ClassFunction, basis: &[ClassFunction]) -> Result<Decomposition> {
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            if (a.inner(b)? - target).norm() > NEAR_INT_TOL {
                return Err(Error::BasisNotOrthonormal);
            }
        }
    }
    let mut remainder = f.clone();
    let mut multiplicities = Vec::with_capacity(basis.len());
    for b in basis {
        let m = f.inner(b)?;
        let k = near_integer(m.re)
            .filter(|_| m.im.abs() < NEAR_INT_TOL)
            .ok_or(Error::DecompositionResidual(m.norm()))?;
        remainder = remainder.sub(&b.scale(k as f64))?;
        multiplicities.push(k);
    }
    let remainder_norm = remainder.norm_sq().max(0.0).sqrt();
    Ok(Decomposition {
        multiplicities,
        remainder,
        remainder_norm,
    })
}

/// All irreducible characters of a small group, extracted from characters induced
/// from cyclic subgroups and their products with characters already found.
pub fn irreducibles(classes: &Arc<ConjClasses>) -> Result<Vec<ClassFunction>> {
    let group = classes.subgroup();
    let parent = group.parent();
    let n = group.order() as f64;
    let mut candidates = Vec::new();
    for &g in classes.reps() {
        let cyc = SubgroupTable::generated_by(parent, "cyclic", &[g]);
        let ord = cyc.order() as u64;
        // g^k for k = 0..ord, in order
        let mut powers = vec![0u32];
        for _ in 1..ord {
            powers.push(parent.mul(*powers.last().unwrap(), g));
        }
        for j in 0..ord {
            let f = |i: u32| {
                let k = powers.iter().position(|&x| x == i).expect("cyclic member") as u64;
                Phase::new((j * k) as i128, ord).to_complex()
            };
            candidates.push(induce_fn(&cyc, f, classes)?);
        }
    }
    let linear = linear_characters(classes)?;
    let total = |found: &[ClassFunction]| found.iter().map(|c| c.degree().powi(2)).sum::<f64>();
    let mut found: Vec<ClassFunction> = Vec::new();
    let mut pool: Vec<ClassFunction> = linear.clone();
    pool.extend(candidates);
    for _ in 0..64 {
        let mut next: Vec<ClassFunction> = Vec::new();
        let mut queue: std::collections::VecDeque<ClassFunction> = pool.into();
        while let Some(c) = queue.pop_front() {
            let mut r = c;
            for x in &found {
                let m = r.inner(x)?.re.round();
                if m != 0.0 {
                    r = r.sub(&x.scale(m))?;
                }
            }
            let ns = r.norm_sq();
            if ns < 0.5 {
                continue;
            }
            if (ns - 1.0).abs() < NEAR_INT_TOL {
                let chi = if r.degree() < 0.0 { r.scale(-1.0) } else { r };
                // twists and the conjugate are irreducible too
                queue.push_front(chi.conj());
                for l in &linear {
                    queue.push_front(chi.twist(l)?);
                }
                found.push(chi);
            } else if !next
                .iter()
                .any(|x| x.approx_eq(&r).unwrap_or(false) || x.approx_eq(&r.scale(-1.0)).unwrap_or(false))
            {
                next.push(r);
            }
        }
        if (total(&found) - n).abs() < 0.5 {
            break;
        }
        // pairwise integral reduction of the remaining virtual characters
        let mut changed = false;
        for i in 0..next.len() {
            for j in 0..next.len() {
                let nj = next[j].norm_sq();
                if i == j || nj < 0.5 {
                    continue;
                }
                let t = (next[i].inner(&next[j])?.re / nj).round();
                if t != 0.0 {
                    let cand = next[i].sub(&next[j].scale(t))?;
                    if cand.norm_sq() < next[i].norm_sq() - 0.5 {
                        next[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            // half sums of orthogonal norm-two vectors, such as (χa+χb ± (χa-χb))/2
            let mut halves = Vec::new();
            for i in 0..next.len() {
                for j in i + 1..next.len() {
                    if (next[i].norm_sq() - 2.0).abs() > 0.5 || (next[j].norm_sq() - 2.0).abs() > 0.5 {
                        continue;
                    }
                    if next[i].inner(&next[j])?.norm() > 0.5 {
                        continue;
                    }
                    for c in [next[i].add(&next[j])?, next[i].sub(&next[j])?] {
                        let c = c.scale(0.5);
                        let c = if c.degree() < 0.0 { c.scale(-1.0) } else { c };
                        if c.degree() > 0.5 && satisfies_class_equation(&c) {
                            halves.push(c);
                        }
                    }
                }
            }
            if !halves.is_empty() {
                next.splice(0..0, halves);
                pool = next;
                continue;
            }
            let extra = found
                .iter()
                .flat_map(|a| found.iter().map(move |b| a.twist(b)))
                .collect::<Result<Vec<_>>>()?;
            next.extend(extra);
        }
        pool = next;
    }
    if (total(&found) - n).abs() > 0.5 {
        return Err(Error::DecompositionResidual(n - total(&found)));
    }
    found.sort_by(|a, b| a.degree().total_cmp(&b.degree()));
    Ok(found)
}

/// `(1/|G|) Σ_g f(g x g⁻¹ y) = f(x) f(y) / f(1)` for all class representatives
/// `x, y`: among class functions with `f(1) > 0` this singles out the irreducible
/// characters.
pub fn satisfies_class_equation(f: &ClassFunction) -> bool {
    let cl = f.classes();
    let sub = cl.subgroup();
    let g = sub.parent();
    let n = sub.order() as f64;
    let deg = f.degree();
    for (xi, &x) in cl.reps().iter().enumerate() {
        for (yi, &y) in cl.reps().iter().enumerate() {
            let s: Complex64 = sub
                .members()
                .iter()
                .map(|&h| f.values[cl.class_of(g.mul(g.mul(g.mul(h, x), g.inv(h)), y)).expect("closed")])
                .sum();
            if (s / n - f.values[xi] * f.values[yi] / deg).norm() > NEAR_INT_TOL {
                return false;
            }
        }
    }
    true
}

/// The commutator subgroup: normal closure of the commutators of the generators.
fn derived_subgroup(group: &SubgroupTable) -> SubgroupTable {
    let g = group.parent();
    let gens = group.gens();
    let mut comm: Vec<u32> = Vec::new();
    for &x in gens {
        for &y in gens {
            let c = g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y));
            if c != 0 && !comm.contains(&c) {
                comm.push(c);
            }
        }
    }
    loop {
        let d = SubgroupTable::generated_by(g, "derived", &comm);
        let mut grew = false;
        for &x in gens {
            for &h in d.gens() {
                let c = g.mul(g.mul(g.inv(x), h), x);
                if !d.contains(c) {
                    comm.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return d;
        }
    }
}

/// Every linear character, read off the abelianization.
pub fn linear_characters(classes: &Arc<ConjClasses>) -> Result<Vec<ClassFunction>> {
    let group = classes.subgroup();
    let g = group.parent();
    let derived = derived_subgroup(group);
    let reps = left_transversal(&derived, group)?;
    let mut coset = vec![u32::MAX; g.order()];
    for (k, &t) in reps.iter().enumerate() {
        for &h in derived.members() {
            coset[g.mul(t, h) as usize] = k as u32;
        }
    }
    let qmul = |a: usize, b: usize| coset[g.mul(reps[a], reps[b]) as usize] as usize;
    let m = reps.len();
    // grow a spanning set of the quotient one generator at a time, branching
    // over the admissible values on each new generator
    let mut span = vec![0usize];
    let mut in_span = vec![false; m];
    in_span[0] = true;
    let mut chars: Vec<Vec<Phase>> = vec![vec![Phase::ONE; m]];
    while span.len() < m {
        let q = (0..m).find(|&x| !in_span[x]).expect("span is proper");
        let mut k = 1;
        let mut qk = q;
        let mut powers = vec![0usize, q];
        while !in_span[qk] {
            qk = qmul(qk, q);
            powers.push(qk);
            k += 1;
        }
        powers.truncate(k);
        let mut new_span = Vec::with_capacity(span.len() * k);
        for &pw in &powers {
            for &s in &span {
                new_span.push((pw, s, qmul(pw, s)));
            }
        }
        let mut next = Vec::with_capacity(chars.len() * k);
        for c in &chars {
            let w = c[qk];
            for j in 0..k as u64 {
                let v = Phase::new(w.num() as i128 + (j * w.den()) as i128, w.den() * k as u64);
                let mut c2 = c.clone();
                for (e, &(_, s, x)) in new_span.iter().enumerate() {
                    c2[x] = v.pow((e / span.len()) as i64) + c[s];
                }
                next.push(c2);
            }
        }
        chars = next;
        span = new_span.iter().map(|&(_, _, x)| x).collect();
        for &x in &span {
            in_span[x] = true;
        }
    }
    chars
        .into_iter()
        .map(|c| ClassFunction::from_phases(classes, |h| Ok(c[coset[g.expect_index(h)? as usize] as usize])))
        .collect()
}

/// The restriction of a `K`-class function to `K_m`, with `K_m`'s own classes.
pub fn restrict_to_filtration(f: &ClassFunction, level: &Level, m: u32) -> Result<ClassFunction> {
    let km = level.subgroup(Named::Filtration(m))?;
    f.restrict(&Arc::new(ConjClasses::compute(&km)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingCtx;
    use proptest::prelude::*;

    fn level(n: u32) -> Arc<Level> {
        Level::shared(&RingCtx::new(3, 2, n).unwrap()).unwrap()
    }

    #[test]
    fn borel_induction_at_level_one_is_one_plus_steinberg() {
        let l = level(1);
        let b = l.subgroup(Named::Borel).unwrap();
        let v = induce_fn(&b, |_| Complex64::new(1.0, 0.0), l.classes()).unwrap();
        assert_eq!(v.degree().round(), 4.0);
        let one = ClassFunction::trivial(l.classes());
        let d = decompose(&v, std::slice::from_ref(&one)).unwrap();
        assert_eq!(d.multiplicities, vec![1]);
        assert!((d.remainder_norm - 1.0).abs() < 1e-9);
        assert!(d.remainder.is_irreducible());
        assert!((d.remainder.degree() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn character_table_of_level_one() {
        let l = level(1);
        let irr = irreducibles(l.classes()).unwrap();
        assert_eq!(irr.len(), l.classes().count());
        let sizes = l.classes().sizes();
        // column orthogonality
        for (a, &size) in sizes.iter().enumerate() {
            for b in 0..sizes.len() {
                let s: Complex64 = irr.iter().map(|x| x.values()[a] * x.values()[b].conj()).sum();
                let expect = if a == b { 96.0 / size as f64 } else { 0.0 };
                assert!((s - expect).norm() < 1e-6, "{a} {b} {s}");
            }
        }
        let mut degrees: Vec<i64> = irr.iter().map(|x| near_integer(x.degree()).unwrap()).collect();
        degrees.dedup();
        assert_eq!(degrees, [1, 2, 3, 4]);
        assert!(irr.iter().all(satisfies_class_equation));
        assert!(!satisfies_class_equation(&irr[1].add(&irr[2]).unwrap()));
    }

    #[test]
    fn linear_characters_come_from_det() {
        for (n, count) in [(1, 4), (2, 12)] {
            let l = level(n);
            let lin = linear_characters(l.classes()).unwrap();
            assert_eq!(lin.len(), count);
            for x in &lin {
                assert!(x.is_irreducible());
                assert!((x.degree() - 1.0).abs() < EQ_TOL);
            }
        }
    }

    #[test]
    fn rep_depth_of_trivial_and_regular() {
        let l = level(2);
        let one = ClassFunction::trivial(l.classes());
        assert_eq!(
            one.rep_depth(&l).unwrap(),
            RepDepth {
                depth: 0,
                trivial: true
            }
        );
        let k1 = l.subgroup(Named::Filtration(1)).unwrap();
        let v = induce_fn(&k1, |_| Complex64::new(1.0, 0.0), l.classes()).unwrap();
        assert_eq!(
            v.rep_depth(&l).unwrap(),
            RepDepth {
                depth: 0,
                trivial: false
            }
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// ⟨Ind f, g⟩_G = ⟨f, Res g⟩_H for random class functions.
        #[test]
        fn frobenius_reciprocity(seed in proptest::collection::vec(-2.0f64..2.0, 64)) {
            let l = level(1);
            let b = l.subgroup(Named::Borel).unwrap();
            let bc = Arc::new(ConjClasses::compute(&b));
            let f = ClassFunction::new(&bc, (0..bc.count()).map(|i| Complex64::new(seed[i], seed[i + 20])).collect()).unwrap();
            let g = ClassFunction::new(l.classes(), (0..l.classes().count()).map(|i| Complex64::new(seed[40 + i % 20], seed[i])).collect()).unwrap();
            let lhs = f.induce(l.classes()).unwrap().inner(&g).unwrap();
            let rhs = f.inner(&g.restrict(&bc).unwrap()).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }

        #[test]
        fn inner_product_is_hermitian(seed in proptest::collection::vec(-2.0f64..2.0, 32)) {
            let l = level(1);
            let k = l.classes().count();
            let f = ClassFunction::new(l.classes(), (0..k).map(|i| Complex64::new(seed[i], seed[i + 16])).collect()).unwrap();
            let g = ClassFunction::new(l.classes(), (0..k).map(|i| Complex64::new(seed[i + 1], -seed[i])).collect()).unwrap();
            prop_assert!((f.inner(&g).unwrap() - g.inner(&f).unwrap().conj()).norm() < 1e-12);
            prop_assert!(f.norm_sq() >= 0.0);
        }
    }
}
