//! Dual mask construction: the biorthogonality jet recursion, a
//! minimal-support solver for prescribed jets with optional symmetry and
//! sum-rule side constraints, and the symmetry-averaged dual mask.

use crate::cyclotomic::{cyclotomic, reduce_mod_cyclotomic};
use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::mat::{ivec_add, IVec};
use crate::scalar::{Backend, Coeff, Quad};
use crate::solve::{LinearSystem, Solved};
use crate::symmetry::{center_shift, SymmetryContext};
use crate::trigpoly::{multi_indices, multi_indices_of_weight, power_rational, Jet, TrigPoly};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Jet of the dual mask forced by biorthogonality: with `lambda` the jet of
/// `m0`, the returned `lambda~` satisfies
/// `sum_{a <= b} (-1)^{|b-a|} C(b,a) lambda_a conj(lambda~_{b-a}) = 0`
/// for all `0 < |b| < n` and `lambda~_0 = 1`.
pub fn lambda_tilde(lambda: &Jet, n: usize) -> Result<Jet> {
    let backend = lambda.backend;
    let one = Coeff::one(backend);
    if !lambda.value(&vec![0; lambda.dim]).sub(&one).is_zero() {
        return Err(Error::PreconditionFailed("mask jet has J(0) != 1".into()));
    }
    // work in the conjugate-of-product space: jc(b) = (-1)^{|b|} conj(lt_b),
    // defined by jet(m0 * conj(m0~)) = delta
    let mut jc: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
    let mut out = Jet::delta(lambda.dim, n, backend);
    for beta in multi_indices(lambda.dim, n) {
        if beta.iter().all(|&b| b == 0) {
            jc.insert(beta, one.clone());
            continue;
        }
        let mut acc = Coeff::zero(backend);
        for alpha in crate::trigpoly::sub_indices(&beta) {
            if alpha.iter().all(|&a| a == 0) {
                continue;
            }
            let rest: Vec<u32> = beta.iter().zip(&alpha).map(|(b, a)| b - a).collect();
            let w = binomial_coeff(&beta, &alpha, backend);
            acc = acc.add(&w.mul(&lambda.value(&alpha)).mul(&jc[&rest]));
        }
        let v = acc.neg();
        let weight: i64 = beta.iter().map(|&b| b as i64).sum();
        let sign = if weight % 2 == 0 { v.clone() } else { v.neg() };
        out.set(beta.clone(), sign.conj());
        jc.insert(beta, v);
    }
    Ok(out)
}

fn binomial_coeff(beta: &[u32], alpha: &[u32], backend: Backend) -> Coeff {
    fn choose(n: u32, k: u32) -> i64 {
        let mut acc = 1i64;
        for i in 0..k {
            acc = acc * (n - i) as i64 / (i + 1) as i64;
        }
        acc
    }
    let w: i64 = beta.iter().zip(alpha).map(|(&b, &a)| choose(b, a)).product();
    match backend {
        Backend::Exact => Coeff::rational(w, 1),
        Backend::Float => Coeff::Float(num_complex::Complex64::new(w as f64, 0.0)),
    }
}

/// Side constraints for [`solve_prescribed_jet`].
pub struct SolveConstraints<'a> {
    /// Coefficient identification `h_{Ek+c-Ec} = h_k` over the group.
    pub symmetry: Option<&'a SymmetryContext>,
    /// Require the solution to obey the sum rule of this order.
    pub sum_rule: Option<(usize, &'a DilationContext)>,
    /// Sup-norm cap on candidate support points.
    pub support_cap: i64,
}

impl<'a> SolveConstraints<'a> {
    pub fn none(support_cap: i64) -> Self {
        SolveConstraints { symmetry: None, sum_rule: None, support_cap }
    }
}

/// Points of the sup-norm shell of radius `r`, lexicographically descending
/// so that nonnegative exponents are tried first.
pub(crate) fn shell(dim: usize, r: i64) -> Vec<IVec> {
    let mut out = Vec::new();
    let mut k = vec![r; dim];
    'outer: loop {
        if k.iter().any(|&x| x.abs() == r) {
            out.push(k.clone());
        }
        for j in (0..dim).rev() {
            k[j] -= 1;
            if k[j] >= -r {
                continue 'outer;
            }
            k[j] = r;
        }
        break;
    }
    out
}

/// Orbit closure of a point under the symmetry identification, sorted.
fn closure_class(k: &IVec, sym: Option<&SymmetryContext>) -> Vec<IVec> {
    let Some(sym) = sym else { return vec![k.clone()] };
    let mut set: Vec<IVec> = sym
        .group
        .iter()
        .map(|e| {
            let shift = center_shift(e, &sym.center).expect("validated center");
            ivec_add(&e.mul_ivec(k), &shift)
        })
        .collect();
    set.sort();
    set.dedup();
    set
}

/// Find a polynomial with the prescribed normalized jet on the smallest
/// support reached by adding symmetry-closed candidate point classes in
/// increasing sup-norm order. Exact backend only.
pub fn solve_prescribed_jet(targets: &Jet, cons: &SolveConstraints) -> Result<TrigPoly> {
    if targets.backend != Backend::Exact {
        return Err(Error::ExactPathUnavailable("jet solver requires exact targets".into()));
    }
    let dim = targets.dim;
    let mut classes: Vec<Vec<IVec>> = Vec::new();
    let mut covered: std::collections::BTreeSet<IVec> = std::collections::BTreeSet::new();
    let mut last_deficit = usize::MAX;

    // precomputed cyclotomic remainder rows for the sum-rule constraint
    let phi_rows: Option<Vec<Vec<BigRational>>> = cons.sum_rule.map(|(_, dil)| {
        let m = dil.m;
        let deg = cyclotomic(m).len() - 1;
        (0..m)
            .map(|j| {
                let mut unit = vec![BigRational::zero(); j + 1];
                unit[j] = BigRational::one();
                let mut red = reduce_mod_cyclotomic(&unit, m);
                red.resize(deg, BigRational::zero());
                red
            })
            .collect()
    });

    for r in 0..=cons.support_cap {
        for k in shell(dim, r) {
            if covered.contains(&k) {
                continue;
            }
            let class = closure_class(&k, cons.symmetry);
            for p in &class {
                covered.insert(p.clone());
            }
            classes.push(class);

            let mut sys = LinearSystem::new(classes.len());
            for (beta, target) in targets.entries() {
                let row: Vec<Quad> = classes
                    .iter()
                    .map(|c| {
                        let s = c
                            .iter()
                            .map(|p| power_rational(p, beta))
                            .fold(BigRational::zero(), |a, b| a + b);
                        Quad::from_rational(s)
                    })
                    .collect();
                let rhs = target
                    .as_exact()
                    .ok_or(Error::ExactPathUnavailable("float jet target".into()))?
                    .clone();
                sys.push_row(row, rhs);
            }
            if let Some((order, dil)) = cons.sum_rule {
                let rows = phi_rows.as_ref().unwrap();
                let deg = rows[0].len();
                for s in &dil.dual_digits[1..] {
                    for beta in (0..order).flat_map(|w| multi_indices_of_weight(dim, w)) {
                        for t in 0..deg {
                            let row: Vec<Quad> = classes
                                .iter()
                                .map(|c| {
                                    let v = c
                                        .iter()
                                        .map(|p| {
                                            let j = dil.phase_bucket(p, s);
                                            &rows[j][t] * power_rational(p, &beta)
                                        })
                                        .fold(BigRational::zero(), |a, b| a + b);
                                    Quad::from_rational(v)
                                })
                                .collect();
                            sys.push_row(row, Quad::from_int(0));
                        }
                    }
                }
            }
            match sys.solve() {
                Solved::Solution(x) => {
                    let mut terms: Vec<(IVec, Coeff)> = Vec::new();
                    for (c, v) in classes.iter().zip(&x) {
                        if v.is_zero() {
                            continue;
                        }
                        for p in c {
                            terms.push((p.clone(), Coeff::Exact(v.clone())));
                        }
                    }
                    return TrigPoly::from_terms(dim, Backend::Exact, terms);
                }
                Solved::Inconsistent { rank_deficit } => last_deficit = rank_deficit,
            }
        }
    }
    Err(Error::Unsolvable { rank_deficit: last_deficit })
}

/// Symmetry average `(1/|H|) sum_E G(E^T xi) e^{2 pi i (c - Ec, xi)}`.
pub fn symmetry_average(g: &TrigPoly, sym: &SymmetryContext) -> Result<TrigPoly> {
    let mut acc = TrigPoly::zero(g.dim, g.backend);
    for e in &sym.group {
        let shift = center_shift(e, &sym.center).expect("validated center");
        acc = acc.add(&g.compose_linear(e).shift(&shift))?;
    }
    let inv = match g.backend {
        Backend::Exact => Coeff::rational(1, sym.group.len() as i64),
        Backend::Float => Coeff::Float(num_complex::Complex64::new(
            1.0 / sym.group.len() as f64,
            0.0,
        )),
    };
    Ok(acc.scale(&inv))
}

/// The biorthogonality jet condition: all derivatives of
/// `1 - m0 * conj(m0~)` up to order `n - 1` vanish at the origin.
pub fn check_20new(m0: &TrigPoly, m0t: &TrigPoly, n: usize) -> bool {
    let j0 = m0.jet(n);
    let jt = m0t.conjugate().jet(n);
    j0.product(&jt, n).is_delta()
}

/// Construct a symmetric dual mask of `m0` matching the biorthogonality
/// jets up to order `n`.
pub fn dual_mask(
    m0: &TrigPoly,
    dil: &DilationContext,
    sym: &SymmetryContext,
    n: usize,
    support_cap: Option<i64>,
) -> Result<TrigPoly> {
    if !m0.is_symmetric(&sym.group, &sym.center) {
        return Err(Error::PreconditionFailed("mask is not symmetric under the group".into()));
    }
    if m0.sum_rule_order(dil, n) < n {
        return Err(Error::PreconditionFailed(format!(
            "mask does not obey the sum rule of order {}",
            n
        )));
    }
    let targets = lambda_tilde(&m0.jet(n), n)?;
    let cap = support_cap.unwrap_or(3 * n as i64);
    let g = solve_prescribed_jet(&targets, &SolveConstraints::none(cap))?;
    let m0t = symmetry_average(&g, sym)?;
    if !m0t.is_symmetric(&sym.group, &sym.center) {
        return Err(Error::PostconditionFailed("averaged dual mask lost symmetry".into()));
    }
    if !check_20new(m0, &m0t, n) {
        return Err(Error::PostconditionFailed(
            "averaged dual mask fails the biorthogonality jet condition".into(),
        ));
    }
    Ok(m0t)
}
