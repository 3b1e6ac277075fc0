//! Sparse trigonometric (Laurent-style) polynomials over `Z^d` with exact or
//! float coefficients, polyphase machinery, jets at the origin and the
//! sum-rule / vanishing-moment / symmetry predicates.

use crate::cyclotomic::root_of_unity_sum_is_zero;
use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::mat::{ivec_add, ivec_sub, rvec_to_ivec, IMat, IVec, RVec};
use crate::scalar::{Backend, Coeff, Quad};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

/// Default tolerance for float-mode predicate verdicts.
pub const PREDICATE_TOL: f64 = 1e-10;

/// `t(xi) = sum_k h_k e^{2 pi i (k, xi)}` with sparse integer exponents.
#[derive(Clone, PartialEq)]
pub struct TrigPoly {
    pub dim: usize,
    pub backend: Backend,
    terms: BTreeMap<IVec, Coeff>,
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigPoly(d={}, {:?}, {{", self.dim, self.backend)?;
        for (k, c) in &self.terms {
            write!(f, " {:?}: {},", k, c)?;
        }
        write!(f, " }})")
    }
}

impl TrigPoly {
    pub fn zero(dim: usize, backend: Backend) -> Self {
        TrigPoly { dim, backend, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Coeff) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize, backend: Backend) -> Self {
        Self::constant(dim, Coeff::one(backend))
    }

    /// `c * e^{2 pi i (k, xi)}`
    pub fn monomial(k: IVec, c: Coeff) -> Self {
        let mut t = TrigPoly { dim: k.len(), backend: c.backend(), terms: BTreeMap::new() };
        t.add_term(k, c);
        t
    }

    pub fn from_terms(dim: usize, backend: Backend, terms: impl IntoIterator<Item = (IVec, Coeff)>) -> Result<Self> {
        let mut t = TrigPoly::zero(dim, backend);
        for (k, c) in terms {
            if k.len() != dim {
                return Err(Error::Parse(format!("exponent {:?} has wrong dimension", k)));
            }
            if c.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            t.add_term(k, c);
        }
        Ok(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IVec, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &[i64]) -> Coeff {
        self.terms.get(k).cloned().unwrap_or_else(|| Coeff::zero(self.backend))
    }

    /// Coefficient support (set of exponents with nonzero coefficients).
    pub fn coefsupp(&self) -> Vec<IVec> {
        self.terms.keys().cloned().collect()
    }

    /// Smallest box `[lo, hi]` containing the support, `None` for zero.
    pub fn support_box(&self) -> Option<(IVec, IVec)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for k in it {
            for j in 0..self.dim {
                lo[j] = lo[j].min(k[j]);
                hi[j] = hi[j].max(k[j]);
            }
        }
        Some((lo, hi))
    }

    fn add_term(&mut self, k: IVec, c: Coeff) {
        debug_assert_eq!(k.len(), self.dim);
        let entry = self.terms.entry(k);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &TrigPoly) -> Result<()> {
        if self.dim != other.dim || self.backend != other.backend {
            return Err(Error::BackendMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            backend: self.backend,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_compat(other)?;
        let mut out = TrigPoly::zero(self.dim, self.backend);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(ivec_add(k1, k2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> TrigPoly {
        if c.backend() != self.backend {
            panic!("coefficient backend mismatch");
        }
        let mut out = TrigPoly::zero(self.dim, self.backend);
        for (k, h) in &self.terms {
            out.add_term(k.clone(), h.mul(c));
        }
        out
    }

    /// Multiply by the monomial `e^{2 pi i (k0, xi)}`.
    pub fn shift(&self, k0: &[i64]) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            backend: self.backend,
            terms: self.terms.iter().map(|(k, c)| (ivec_add(k, k0), c.clone())).collect(),
        }
    }

    /// `conj(t)`: coefficient `conj(h_k)` at exponent `-k`, so that the
    /// evaluation is the complex conjugate at every real `xi`.
    pub fn conjugate(&self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// `xi -> t(A^T xi)`: exponent remap `k -> A k`.
    pub fn compose_linear(&self, a: &IMat) -> TrigPoly {
        assert_eq!(a.d, self.dim);
        let mut out = TrigPoly::zero(self.dim, self.backend);
        for (k, c) in &self.terms {
            out.add_term(a.mul_ivec(k), c.clone());
        }
        out
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        assert_eq!(xi.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let phase: f64 = k.iter().zip(xi).map(|(&ki, &x)| ki as f64 * x).sum();
            acc += c.to_complex() * Complex64::from_polar(1.0, TAU * phase);
        }
        acc
    }

    pub fn to_float(&self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            backend: Backend::Float,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), Coeff::Float(c.to_complex())))
                .collect(),
        }
    }

    pub fn approx_eq(&self, other: &TrigPoly, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            (self.coeff(k).to_complex() - other.coeff(k).to_complex()).norm() < tol
        })
    }

    /// All coefficients rational (no `sqrt(m)` part)?
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| matches!(c, Coeff::Exact(q) if q.is_rational()))
    }

    /// Polyphase components `tau_k`, `k` indexed like the digit set:
    /// `t(xi) = m^{-1/2} sum_k e^{2 pi i (s_k, xi)} tau_k(M^T xi)`.
    pub fn polyphase_decompose(&self, ctx: &DilationContext) -> Vec<TrigPoly> {
        let sqrt_m = match self.backend {
            Backend::Exact => Coeff::Exact(Quad::sqrt_of(ctx.m as u64)),
            Backend::Float => Coeff::Float(Complex64::new((ctx.m as f64).sqrt(), 0.0)),
        };
        let mut taus = vec![TrigPoly::zero(self.dim, self.backend); ctx.m];
        for (k, c) in &self.terms {
            let (idx, beta) = ctx.coset_residue(k);
            taus[idx].add_term(beta, c.mul(&sqrt_m));
        }
        taus
    }

    /// Exact inverse of [`polyphase_decompose`].
    pub fn polyphase_recompose(taus: &[TrigPoly], ctx: &DilationContext) -> Result<TrigPoly> {
        if taus.len() != ctx.m {
            return Err(Error::Parse(format!(
                "expected {} polyphase components, got {}",
                ctx.m,
                taus.len()
            )));
        }
        let dim = ctx.dim;
        let backend = taus[0].backend;
        let inv_sqrt_m = match backend {
            Backend::Exact => {
                Coeff::Exact(Quad::sqrt_of(ctx.m as u64).mul(&Quad::ratio(1, ctx.m as i64)))
            }
            Backend::Float => Coeff::Float(Complex64::new(1.0 / (ctx.m as f64).sqrt(), 0.0)),
        };
        let mut out = TrigPoly::zero(dim, backend);
        for (idx, tau) in taus.iter().enumerate() {
            if tau.backend != backend || tau.dim != dim {
                return Err(Error::BackendMismatch);
            }
            for (beta, c) in &tau.terms {
                let k = ivec_add(&ctx.m_mat.mul_ivec(beta), &ctx.digits[idx]);
                out.add_term(k, c.mul(&inv_sqrt_m));
            }
        }
        Ok(out)
    }

    /// Normalized jet: `J(beta) = sum_k h_k k^beta`, so that
    /// `D^beta t(0) = (2 pi i)^{|beta|} J(beta)`.
    pub fn jet(&self, order: usize) -> Jet {
        assert!(order >= 1);
        let mut values = BTreeMap::new();
        for beta in multi_indices(self.dim, order) {
            let mut acc = Coeff::zero(self.backend);
            for (k, c) in &self.terms {
                acc = acc.add(&c.mul(&power_coeff(k, &beta, self.backend)));
            }
            values.insert(beta, acc);
        }
        Jet { dim: self.dim, order, backend: self.backend, values }
    }

    /// Largest `n <= nmax` such that all jet values of order `< n` vanish.
    pub fn vanishing_moment_order(&self, nmax: usize) -> usize {
        self.vanishing_moment_order_with(nmax, PREDICATE_TOL)
    }

    pub fn vanishing_moment_order_with(&self, nmax: usize, tol: f64) -> usize {
        let jet = self.jet(nmax);
        for n in 0..nmax {
            let bad = jet
                .values
                .iter()
                .any(|(beta, v)| beta.iter().sum::<u32>() as usize == n && !v.is_zero_with(tol));
            if bad {
                return n;
            }
        }
        nmax
    }

    /// Largest `n <= nmax` such that `D^beta t(M^{*-1} xi)|_{xi=s} = 0` for
    /// all nonzero dual digits `s` and all `|beta| < n`. Prefers the exact
    /// cyclotomic path; falls back to float evaluation when the
    /// coefficients are not rational.
    pub fn sum_rule_order(&self, ctx: &DilationContext, nmax: usize) -> usize {
        match self.sum_rule_order_exact(ctx, nmax) {
            Ok(n) => n,
            Err(_) => self.sum_rule_order_float(ctx, nmax, PREDICATE_TOL),
        }
    }

    pub fn sum_rule_order_exact(&self, ctx: &DilationContext, nmax: usize) -> Result<usize> {
        if self.backend != Backend::Exact || !self.is_rational() {
            return Err(Error::ExactPathUnavailable(
                "mask coefficients are not plain rationals".into(),
            ));
        }
        let m = ctx.m;
        for n in 1..=nmax {
            for s in &ctx.dual_digits[1..] {
                for beta in multi_indices_of_weight(self.dim, n - 1) {
                    // bucket j: h_k k^beta contributes to zeta_m^{j(k,s)}
                    let mut buckets = vec![BigRational::zero(); m];
                    for (k, c) in &self.terms {
                        let j = ctx.phase_bucket(k, s);
                        let q = c.as_exact().unwrap();
                        buckets[j] += &q.a * power_rational(k, &beta);
                    }
                    if !root_of_unity_sum_is_zero(&buckets, m) {
                        return Ok(n - 1);
                    }
                }
            }
        }
        Ok(nmax)
    }

    pub fn sum_rule_order_float(&self, ctx: &DilationContext, nmax: usize, tol: f64) -> usize {
        for n in 1..=nmax {
            for s in &ctx.dual_digits[1..] {
                for beta in multi_indices_of_weight(self.dim, n - 1) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, c) in &self.terms {
                        let r = ctx.m_inv.mul_ivec(k);
                        let phase: f64 = r
                            .iter()
                            .zip(s)
                            .map(|(ri, &si)| ri.to_f64().unwrap() * si as f64)
                            .sum();
                        let kb: f64 = k
                            .iter()
                            .zip(&beta)
                            .map(|(&ki, &bi)| (ki as f64).powi(bi as i32))
                            .product();
                        acc += c.to_complex() * kb * Complex64::from_polar(1.0, TAU * phase);
                    }
                    if acc.norm() >= tol {
                        return n - 1;
                    }
                }
            }
        }
        nmax
    }

    /// Plain `H`-symmetry (TrigSym) with respect to the center `c`:
    /// `t(xi) = e^{2 pi i (c - E c, xi)} t(E^* xi)` for every `E`.
    pub fn is_symmetric(&self, group: &[IMat], center: &RVec) -> bool {
        group.iter().all(|e| {
            let c_minus_ec = match center_offset(e, center) {
                Some(v) => v,
                None => return false,
            };
            let rhs = self.compose_linear(e).shift(&c_minus_ec);
            match self.backend {
                Backend::Exact => *self == rhs,
                Backend::Float => self.approx_eq(&rhs, PREDICATE_TOL),
            }
        })
    }

    /// Generalized symmetry property: per matrix `E`, find `(eps_E, r_E)`
    /// with `t(E^* xi) = eps_E e^{2 pi i (r_E, xi)} t(xi)`.
    pub fn generalized_symmetry(&self, group: &[IMat]) -> Option<Vec<(IMat, Coeff, IVec)>> {
        if self.is_zero() {
            return Some(
                group.iter().map(|e| (e.clone(), Coeff::one(self.backend), vec![0; self.dim])).collect(),
            );
        }
        let mut out = Vec::new();
        let (k0, h0) = self.leading_term();
        for e in group {
            let u = self.compose_linear(e);
            let (k0u, h0u) = u.leading_term();
            let r = ivec_sub(&k0u, &k0);
            let eps = h0u.div(&h0);
            // |eps| = 1
            let unimod = (eps.mul(&eps.conj()).to_complex() - Complex64::new(1.0, 0.0)).norm()
                < PREDICATE_TOL;
            if !unimod {
                return None;
            }
            let rhs = self.shift(&r).scale(&eps);
            let ok = match self.backend {
                Backend::Exact => u == rhs,
                Backend::Float => u.approx_eq(&rhs, PREDICATE_TOL),
            };
            if !ok {
                return None;
            }
            out.push((e.clone(), eps, r));
        }
        Some(out)
    }

    fn leading_term(&self) -> (IVec, Coeff) {
        let (k, c) = self.terms.iter().next().expect("zero polynomial has no leading term");
        (k.clone(), c.clone())
    }

    /// Prune float coefficients below `tol` (no-op on the exact backend).
    pub fn pruned(&self, tol: f64) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.is_zero_with(tol))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

/// `c - E c`, integral by center admissibility.
pub fn center_offset(e: &IMat, center: &RVec) -> Option<IVec> {
    let ec = e.mul_rvec(center);
    let diff: RVec = center.iter().zip(&ec).map(|(a, b)| a - b).collect();
    rvec_to_ivec(&diff)
}

fn power_coeff(k: &[i64], beta: &[u32], backend: Backend) -> Coeff {
    match backend {
        Backend::Exact => Coeff::Exact(Quad::from_rational(power_rational(k, beta))),
        Backend::Float => {
            let v: f64 = k
                .iter()
                .zip(beta)
                .map(|(&ki, &bi)| (ki as f64).powi(bi as i32))
                .product();
            Coeff::Float(Complex64::new(v, 0.0))
        }
    }
}

pub(crate) fn power_rational(k: &[i64], beta: &[u32]) -> BigRational {
    let mut acc = BigInt::one();
    for (&ki, &bi) in k.iter().zip(beta) {
        acc *= BigInt::from(ki).pow(bi);
    }
    BigRational::from_integer(acc)
}

/// All multi-indices with `|beta| < order`, graded-lexicographic.
pub fn multi_indices(dim: usize, order: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for w in 0..order {
        out.extend(multi_indices_of_weight(dim, w));
    }
    out
}

/// All multi-indices with `|beta| = weight`, lexicographic.
pub fn multi_indices_of_weight(dim: usize, weight: usize) -> Vec<Vec<u32>> {
    fn rec(dim: usize, weight: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if dim == 1 {
            prefix.push(weight);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for w in 0..=weight {
            prefix.push(w);
            rec(dim - 1, weight - w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, weight as u32, &mut Vec::new(), &mut out);
    out
}

fn binomial(beta: &[u32], alpha: &[u32]) -> BigInt {
    fn choose(n: u32, k: u32) -> BigInt {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    }
    beta.iter().zip(alpha).map(|(&b, &a)| choose(b, a)).product()
}

/// Normalized derivative data of a polynomial at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub dim: usize,
    pub order: usize,
    pub backend: Backend,
    values: BTreeMap<Vec<u32>, Coeff>,
}

impl Jet {
    pub fn delta(dim: usize, order: usize, backend: Backend) -> Jet {
        let mut values = BTreeMap::new();
        for beta in multi_indices(dim, order) {
            let zero = beta.iter().all(|&b| b == 0);
            values.insert(beta, if zero { Coeff::one(backend) } else { Coeff::zero(backend) });
        }
        Jet { dim, order, backend, values }
    }

    pub fn value(&self, beta: &[u32]) -> Coeff {
        self.values.get(beta).cloned().unwrap_or_else(|| Coeff::zero(self.backend))
    }

    pub fn set(&mut self, beta: Vec<u32>, v: Coeff) {
        self.values.insert(beta, v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.values.iter()
    }

    /// Jet of the pointwise product via the Leibniz rule.
    pub fn product(&self, other: &Jet, order: usize) -> Jet {
        assert!(self.order >= order && other.order >= order);
        assert_eq!(self.dim, other.dim);
        let backend = self.backend;
        let mut values = BTreeMap::new();
        for beta in multi_indices(self.dim, order) {
            let mut acc = Coeff::zero(backend);
            for alpha in sub_indices(&beta) {
                let rest: Vec<u32> = beta.iter().zip(&alpha).map(|(b, a)| b - a).collect();
                let w = binomial(&beta, &alpha);
                let wc = match backend {
                    Backend::Exact => Coeff::Exact(Quad::from_rational(BigRational::from_integer(w))),
                    Backend::Float => Coeff::Float(Complex64::new(w.to_f64().unwrap(), 0.0)),
                };
                acc = acc.add(&wc.mul(&self.value(&alpha)).mul(&other.value(&rest)));
            }
            values.insert(beta, acc);
        }
        Jet { dim: self.dim, order, backend, values }
    }

    pub fn is_delta(&self) -> bool {
        self.values.iter().all(|(beta, v)| {
            if beta.iter().all(|&b| b == 0) {
                v.sub(&Coeff::one(self.backend)).is_zero_with(PREDICATE_TOL)
            } else {
                v.is_zero_with(PREDICATE_TOL)
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero_with(PREDICATE_TOL))
    }
}

/// All `alpha <= beta` (the box of `beta`).
pub fn sub_indices(beta: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in beta {
        let mut next = Vec::new();
        for prefix in &out {
            for a in 0..=b {
                let mut p = prefix.clone();
                p.push(a);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DilationContext;
    use crate::mat::IMat;

    fn e(k: Vec<i64>) -> TrigPoly {
        TrigPoly::monomial(k, Coeff::rational(1, 1))
    }

    fn ctx_2i2() -> DilationContext {
        DilationContext::new(
            IMat::from_rows(&[vec![2, 0], vec![0, 2]]),
            Some(vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, -1]]),
        )
        .unwrap()
    }

    #[test]
    fn ring_basics() {
        let t = e(vec![1, 0]).add(&TrigPoly::one(2, Backend::Exact)).unwrap();
        let sq = t.mul(&t).unwrap();
        assert_eq!(sq.coeff(&[1, 0]), Coeff::rational(2, 1));
        assert_eq!(sq.coeff(&[2, 0]), Coeff::rational(1, 1));
        assert_eq!(sq.coeff(&[0, 0]), Coeff::rational(1, 1));
        assert_eq!(sq.num_terms(), 3);
        let prod = e(vec![1, 2]).mul(&e(vec![3, -1])).unwrap();
        assert_eq!(prod, e(vec![4, 1]));
    }

    #[test]
    fn conjugate_involution_and_eval() {
        let t = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![1, 0], Coeff::rational(1, 2)),
                (vec![0, -2], Coeff::rational(-1, 3)),
            ],
        )
        .unwrap();
        assert_eq!(t.conjugate().conjugate(), t);
        let xi = [0.3, 0.7];
        let a = t.conjugate().eval(&xi);
        let b = t.eval(&xi).conj();
        assert!((a - b).norm() < 1e-12);
        assert_eq!(t.conjugate().num_terms(), t.num_terms());
    }

    #[test]
    fn monomial_eval_quarter_turn() {
        let t = e(vec![1, 0]);
        let v = t.eval(&[0.25, 0.0]);
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn compose_linear_composition_law() {
        let t = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![1, 2], Coeff::rational(2, 1)),
                (vec![-1, 3], Coeff::rational(5, 7)),
            ],
        )
        .unwrap();
        let a = IMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let b = IMat::from_rows(&[vec![1, -1], vec![1, 0]]);
        let lhs = t.compose_linear(&a).compose_linear(&b);
        let rhs = t.compose_linear(&b.mul(&a));
        assert_eq!(lhs, rhs);
        assert_eq!(t.compose_linear(&IMat::identity(2)), t);
        let neg = t.compose_linear(&IMat::identity(2).neg());
        assert_eq!(neg.coeff(&[-1, -2]), Coeff::rational(2, 1));
    }

    #[test]
    fn polyphase_round_trip() {
        let ctx = ctx_2i2();
        let t = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![0, 0], Coeff::rational(1, 4)),
                (vec![1, 1], Coeff::rational(9, 64)),
                (vec![-3, 0], Coeff::rational(-1, 64)),
                (vec![2, -1], Coeff::rational(3, 8)),
            ],
        )
        .unwrap();
        let taus = t.polyphase_decompose(&ctx);
        let back = TrigPoly::polyphase_recompose(&taus, &ctx).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn polyphase_of_one() {
        let ctx = ctx_2i2();
        let taus = TrigPoly::one(2, Backend::Exact).polyphase_decompose(&ctx);
        assert_eq!(taus[0], TrigPoly::constant(2, Coeff::Exact(Quad::from_int(2))));
        for tau in &taus[1..] {
            assert!(tau.is_zero());
        }
        // unit vector at digit k recomposes to a pure exponential
        let mut unit = vec![TrigPoly::zero(2, Backend::Exact); 4];
        unit[2] = TrigPoly::constant(2, Coeff::Exact(Quad::sqrt_of(4)));
        let t = TrigPoly::polyphase_recompose(&unit, &ctx).unwrap();
        assert_eq!(t, e(vec![-1, 0]));
    }

    #[test]
    fn jet_basics() {
        let one = TrigPoly::one(2, Backend::Exact);
        assert!(one.jet(3).is_delta());
        let t = e(vec![2, -1]);
        let j = t.jet(3);
        assert_eq!(j.value(&[1, 1]), Coeff::rational(-2, 1));
        assert_eq!(j.value(&[2, 0]), Coeff::rational(4, 1));
    }

    #[test]
    fn jet_product_matches_multiply_then_jet() {
        let t = TrigPoly::from_terms(
            1,
            Backend::Exact,
            [(vec![0], Coeff::rational(1, 1)), (vec![1], Coeff::rational(1, 1))],
        )
        .unwrap();
        let u = TrigPoly::from_terms(
            1,
            Backend::Exact,
            [(vec![0], Coeff::rational(1, 1)), (vec![1], Coeff::rational(-1, 1))],
        )
        .unwrap();
        let jp = t.jet(4).product(&u.jet(4), 4);
        assert_eq!(jp, t.mul(&u).unwrap().jet(4));

        let t2 = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![1, -2], Coeff::rational(2, 3)),
                (vec![0, 1], Coeff::rational(-1, 5)),
                (vec![3, 0], Coeff::rational(1, 7)),
            ],
        )
        .unwrap();
        let u2 = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![-1, 1], Coeff::rational(4, 1)),
                (vec![2, 2], Coeff::rational(-3, 2)),
            ],
        )
        .unwrap();
        let jp2 = t2.jet(5).product(&u2.jet(5), 5);
        assert_eq!(jp2, t2.mul(&u2).unwrap().jet(5));
    }

    #[test]
    fn vanishing_moments() {
        let zero = TrigPoly::zero(1, Backend::Exact);
        assert_eq!(zero.vanishing_moment_order(5), 5);
        let t = TrigPoly::one(1, Backend::Exact).sub(&e(vec![1])).unwrap();
        assert_eq!(t.vanishing_moment_order(5), 1);
        assert_eq!(TrigPoly::one(1, Backend::Exact).vanishing_moment_order(5), 0);
    }

    #[test]
    fn sum_rule_of_constant_is_zero() {
        let ctx = ctx_2i2();
        let one = TrigPoly::one(2, Backend::Exact);
        assert_eq!(one.sum_rule_order(&ctx, 4), 0);
    }

    #[test]
    fn sum_rule_1d_haar() {
        // (1 + e^{2 pi i xi})/2 obeys the sum rule of order 1 (exactly) for M=(2)
        let ctx = DilationContext::new(IMat::from_rows(&[vec![2]]), None).unwrap();
        let t = TrigPoly::from_terms(
            1,
            Backend::Exact,
            [(vec![0], Coeff::rational(1, 2)), (vec![1], Coeff::rational(1, 2))],
        )
        .unwrap();
        assert_eq!(t.sum_rule_order_exact(&ctx, 4).unwrap(), 1);
        assert_eq!(t.sum_rule_order_float(&ctx, 4, 1e-10), 1);
        // ((1 + e^{2 pi i xi})/2)^3: order 3
        let t3 = t.mul(&t).unwrap().mul(&t).unwrap();
        assert_eq!(t3.sum_rule_order_exact(&ctx, 5).unwrap(), 3);
        assert_eq!(t3.sum_rule_order_float(&ctx, 5, 1e-10), 3);
    }

    #[test]
    fn generalized_symmetry_detects_antisymmetry() {
        // t = 1 - e^{2 pi i xi_1}, H = {I, -I}:
        // t(-xi) = -e^{-2 pi i xi_1} t(xi), so eps_{-I} = -1, r_{-I} = (-1,0)
        let t = TrigPoly::one(2, Backend::Exact).sub(&e(vec![1, 0])).unwrap();
        let group = vec![IMat::identity(2), IMat::identity(2).neg()];
        let gs = t.generalized_symmetry(&group).unwrap();
        let (_, eps, r) = &gs[1];
        assert_eq!(*eps, Coeff::rational(-1, 1));
        assert_eq!(*r, vec![-1, 0]);
    }

    #[test]
    fn backend_mismatch_is_an_error() {
        let a = TrigPoly::one(1, Backend::Exact);
        let b = TrigPoly::one(1, Backend::Float);
        assert!(matches!(a.add(&b), Err(Error::BackendMismatch)));
    }
}
