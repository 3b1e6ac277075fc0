//! Lifting transformation: adds vanishing moments to the primal wavelets
//! of a frame-like bank while preserving every symmetry relation. The
//! lifting polynomial of an orbit must be symmetric under the dilation
//! conjugate of the stabilizer about the scaled digit center.

use crate::bank::{FilterBankPair, PolyMatrix, Provenance, WaveletLabel};
use crate::dualmask::shell;
use crate::error::{Error, Result};
use crate::framelike::{check_mutual_symmetry_digits, inv_sqrt_m};
use crate::lattice::DilationContext;
use crate::mat::{IMat, IVec, RVec};
use crate::scalar::{Backend, Coeff};
use crate::symmetry::{OrbitStructure, SymmetryContext};
use crate::trigpoly::{TrigPoly, PREDICATE_TOL};

/// Lifting polynomials per orbit: `polys[p]` holds `L_{p,i}` for every
/// transversal position, or `None` for orbits absent from the bank.
#[derive(Clone, Debug)]
pub struct LiftingFamily {
    pub polys: Vec<Option<Vec<TrigPoly>>>,
    /// Scale factors applied to user-supplied base polynomials, per orbit.
    pub scales: Vec<Option<Coeff>>,
}

/// The conjugated stabilizer `M^-1 H_{p,0} M` as matrices.
fn conj_stabilizer(sym: &SymmetryContext, orbit_stab: &[usize]) -> Vec<IMat> {
    orbit_stab
        .iter()
        .map(|&f| sym.group[sym.conjugates[f]].clone())
        .collect()
}

/// Symmetry center `M^-1 (s_{p,0} - c)` of the lifting polynomial.
fn lifting_center(dil: &DilationContext, sym: &SymmetryContext, rep_digit: usize) -> RVec {
    use crate::mat::{rvec_from_ivec, rvec_sub};
    let s = rvec_from_ivec(&dil.digits[rep_digit]);
    dil.m_inv.mul_rvec(&rvec_sub(&s, &sym.center))
}

/// Target value `-m_(p,i)(0) = -1/sqrt(m)`, shared by all wavelet rows of
/// an unlifted frame-like bank.
pub fn lifting_target(dil: &DilationContext, backend: Backend) -> Coeff {
    inv_sqrt_m(dil.m, backend).neg()
}

fn value_at_zero(t: &TrigPoly) -> Coeff {
    t.terms()
        .fold(Coeff::zero(t.backend), |acc, (_, c)| acc.add(c))
}

fn check_base_invariants(
    l: &TrigPoly,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    p: usize,
) -> bool {
    let orbit = &orbits.orbits[p];
    let group = conj_stabilizer(sym, &orbit.stabilizer);
    let center = lifting_center(dil, sym, orbit.digits[0]);
    l.is_symmetric(&group, &center)
}

/// Orbit average of a seed exponential under the conjugated stabilizer,
/// unscaled. The average satisfies the stabilizer symmetry law by
/// construction; it may vanish at the origin for unlucky seeds.
pub fn orbit_base_average(
    k0: &IVec,
    p: usize,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    backend: Backend,
) -> Result<TrigPoly> {
    let orbit = &orbits.orbits[p];
    let seed = TrigPoly::monomial(k0.clone(), Coeff::one(backend));
    let mut acc = TrigPoly::zero(dil.dim, backend);
    for &f in &orbit.stabilizer {
        let e = &sym.group[sym.conjugates[f]];
        // shift by w - Ew = -r^F_{p,0}
        let r = orbits.r_vector(p, f)?;
        let shifted = seed.compose_linear(e).shift(&crate::mat::ivec_neg(r));
        acc = acc.add(&shifted)?;
    }
    let inv_count = match backend {
        Backend::Exact => Coeff::rational(1, orbit.stabilizer.len() as i64),
        Backend::Float => Coeff::Float(num_complex::Complex64::new(
            1.0 / orbit.stabilizer.len() as f64,
            0.0,
        )),
    };
    Ok(acc.scale(&inv_count))
}

/// Deterministic seed scan: smallest sup-norm seed whose stabilizer
/// average is nonzero at the origin, scaled to the target value.
pub fn auto_base_poly(
    p: usize,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    backend: Backend,
) -> Result<TrigPoly> {
    let target = lifting_target(dil, backend);
    for radius in 0..=3i64 {
        for k0 in shell(dil.dim, radius) {
            let avg = orbit_base_average(&k0, p, dil, sym, orbits, backend)?;
            let v = value_at_zero(&avg);
            if !v.is_zero() {
                let l = avg.scale(&target.div(&v));
                if check_base_invariants(&l, dil, sym, orbits, p) {
                    return Ok(l);
                }
            }
        }
    }
    Err(Error::SymmetryUnattainable(format!(
        "no seed up to sup-norm 3 gives a nonzero stabilizer average for orbit {p}"
    )))
}

/// Validate a user base polynomial for orbit `p` and rescale it so its
/// value at the origin equals the target. Returns the polynomial and the
/// scale applied.
pub fn accept_user_poly(
    l: &TrigPoly,
    p: usize,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<(TrigPoly, Coeff)> {
    let v = value_at_zero(l);
    if v.is_zero_with(PREDICATE_TOL) {
        return Err(Error::UserPolyInvalid(format!(
            "lifting polynomial for orbit {p} vanishes at the origin"
        )));
    }
    if !check_base_invariants(l, dil, sym, orbits, p) {
        return Err(Error::UserPolyInvalid(format!(
            "lifting polynomial for orbit {p} breaks the stabilizer symmetry law"
        )));
    }
    let target = lifting_target(dil, l.backend);
    let scale = target.div(&v);
    Ok((l.scale(&scale), scale))
}

/// Assemble the family from per-orbit base polynomials: derive each
/// `L_{p,i}` by substituting the conjugated transversal element.
pub fn family_from_bases(
    bases: Vec<Option<(TrigPoly, Coeff)>>,
    _dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<LiftingFamily> {
    if bases.len() != orbits.num_orbits() {
        return Err(Error::Config("one base polynomial per orbit expected".into()));
    }
    let mut polys = Vec::with_capacity(bases.len());
    let mut scales = Vec::with_capacity(bases.len());
    for (p, entry) in bases.into_iter().enumerate() {
        let Some((base, scale)) = entry else {
            polys.push(None);
            scales.push(None);
            continue;
        };
        let orbit = &orbits.orbits[p];
        let mut row = Vec::with_capacity(orbit.digits.len());
        for &e_idx in &orbit.transversal {
            let e = &sym.group[sym.conjugates[e_idx]];
            row.push(base.compose_linear(e));
        }
        polys.push(Some(row));
        scales.push(Some(scale));
    }
    Ok(LiftingFamily { polys, scales })
}

/// Convenience constructor: automatic seeds for every orbit the bank uses.
pub fn auto_family(
    bank: &FilterBankPair,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<LiftingFamily> {
    let mut bases = Vec::with_capacity(orbits.num_orbits());
    for p in 0..orbits.num_orbits() {
        let used = bank
            .labels
            .iter()
            .any(|l| matches!(l, WaveletLabel::Orbit { p: q, .. } if *q == p));
        if used {
            let target = lifting_target(dil, bank.backend);
            bases.push(Some((auto_base_poly(p, dil, sym, orbits, bank.backend)?, target)));
        } else {
            bases.push(None);
        }
    }
    family_from_bases(bases, dil, sym, orbits)
}

/// The unit triangular lifting matrices satisfy `L* L~ = I` exactly.
pub(crate) fn lifting_matrices_dual(l_entries: &[TrigPoly], dim: usize, backend: Backend) -> bool {
    let r = l_entries.len() + 1;
    let one = TrigPoly::one(dim, backend);
    let zero = TrigPoly::zero(dim, backend);
    let mut lm = vec![vec![zero.clone(); r]; r];
    let mut lmt = vec![vec![zero; r]; r];
    for i in 0..r {
        lm[i][i] = one.clone();
        lmt[i][i] = one.clone();
    }
    for (i, l) in l_entries.iter().enumerate() {
        lm[i + 1][0] = l.clone();
        lmt[0][i + 1] = l.conjugate().neg();
    }
    let lm = PolyMatrix::from_rows(lm);
    let lmt = PolyMatrix::from_rows(lmt);
    match lm.conj_transpose().mul(&lmt) {
        Ok(prod) => prod.is_identity(PREDICATE_TOL),
        Err(_) => false,
    }
}

/// Apply the lifting transformation to a frame-like bank.
pub fn lift(
    bank: &FilterBankPair,
    fam: &LiftingFamily,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<FilterBankPair> {
    if !matches!(bank.provenance, Provenance::Framelike | Provenance::FramelikeReduced) {
        return Err(Error::PreconditionFailed(
            "lifting expects a frame-like bank".into(),
        ));
    }
    let m0 = &bank.primal[0];
    let mut primal = vec![m0.clone()];
    let mut dual0 = bank.dual[0].clone();
    let mut dual = Vec::with_capacity(bank.dual.len());
    let mut l_used = Vec::new();
    for (v, label) in bank.labels.iter().enumerate().skip(1) {
        let WaveletLabel::Orbit { p, i } = *label else {
            return Err(Error::PreconditionFailed(
                "lifting expects orbit-labeled wavelet rows only".into(),
            ));
        };
        let l = fam.polys[p]
            .as_ref()
            .and_then(|row| row.get(i))
            .ok_or_else(|| {
                Error::Config(format!("lifting family misses orbit {p} position {i}"))
            })?;
        let l_dilated = l.compose_linear(&dil.m_mat);
        primal.push(bank.primal[v].add(&l_dilated.mul(m0)?)?);
        dual0 = dual0.sub(&l_dilated.conjugate().mul(&bank.dual[v])?)?;
        dual.push(bank.dual[v].clone());
        l_used.push(l.clone());
    }
    dual.insert(0, dual0);

    let lifted = FilterBankPair {
        backend: bank.backend,
        primal,
        dual,
        labels: bank.labels.clone(),
        extra_primal_cols: vec![],
        extra_dual_cols: vec![],
        provenance: Provenance::Lifted,
        normalization_note: format!("{}; lifted", bank.normalization_note),
    };
    verify_lift(&lifted, &l_used, dil, sym, orbits)?;
    Ok(lifted)
}

fn verify_lift(
    bank: &FilterBankPair,
    l_used: &[TrigPoly],
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<()> {
    if !lifting_matrices_dual(l_used, dil.dim, bank.backend) {
        return Err(Error::VerificationFailed("lifting matrix duality".into()));
    }
    if !bank.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("polyphase duality after lifting".into()));
    }
    if !bank.dual[0].is_symmetric(&sym.group, &sym.center) {
        return Err(Error::VerificationFailed(
            "lifted dual refinable mask lost the group symmetry".into(),
        ));
    }
    check_mutual_symmetry_digits(bank, dil, sym, orbits)?;
    for (v, label, primal, _) in bank.wavelets() {
        if primal.vanishing_moment_order(1) < 1 {
            return Err(Error::VmDeficit {
                mask: format!("lifted primal wavelet {v} ({label:?})"),
                got: 0,
                want: 1,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{
        ex1_contexts, ex1_lifting_polys, ex1_m0, ex1_published_lifted_dual,
    };
    use crate::framelike::{framelike_extension, reduce_generators};

    fn reduced_ex1() -> (DilationContext, SymmetryContext, OrbitStructure, FilterBankPair) {
        let (dil, sym) = ex1_contexts();
        let orbits = sym.orbit_decomposition(&dil).unwrap();
        let one = TrigPoly::one(2, Backend::Exact);
        let bank = framelike_extension(&ex1_m0(), &one, &dil, &sym, &orbits, 3).unwrap();
        let reduced = reduce_generators(&bank, &dil, &sym, &orbits, 3).unwrap();
        (dil, sym, orbits, reduced)
    }

    fn published_family(
        dil: &DilationContext,
        sym: &SymmetryContext,
        orbits: &OrbitStructure,
    ) -> LiftingFamily {
        let l1 = &ex1_lifting_polys()[0];
        let (base, scale) = accept_user_poly(l1, 1, dil, sym, orbits).unwrap();
        assert_eq!(scale, Coeff::rational(2, 1));
        family_from_bases(vec![None, Some((base, scale))], dil, sym, orbits).unwrap()
    }

    #[test]
    fn published_family_matches_all_three_polynomials() {
        let (dil, sym, orbits, _) = reduced_ex1();
        let fam = published_family(&dil, &sym, &orbits);
        let row = fam.polys[1].as_ref().unwrap();
        let expect: Vec<TrigPoly> = ex1_lifting_polys()
            .iter()
            .map(|l| l.scale(&Coeff::rational(2, 1)))
            .collect();
        assert_eq!(row.len(), 3);
        for (got, want) in row.iter().zip(&expect) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn lifted_dual_refinable_mask_matches_the_published_grid() {
        let (dil, sym, orbits, bank) = reduced_ex1();
        let fam = published_family(&dil, &sym, &orbits);
        let lifted = lift(&bank, &fam, &dil, &sym, &orbits).unwrap();
        assert_eq!(lifted.dual[0], ex1_published_lifted_dual());
        assert_eq!(lifted.primal[0], ex1_m0());
    }

    #[test]
    fn lifted_dual_wavelets_are_unchanged_and_primal_gain_moments() {
        let (dil, sym, orbits, bank) = reduced_ex1();
        let fam = published_family(&dil, &sym, &orbits);
        let lifted = lift(&bank, &fam, &dil, &sym, &orbits).unwrap();
        for v in 1..bank.primal.len() {
            assert_eq!(lifted.dual[v], bank.dual[v]);
            assert!(lifted.primal[v].vanishing_moment_order(2) >= 1);
        }
        // half the published dual wavelet: ours carries the 1/sqrt(m) factor
        let w = &lifted.dual[1];
        let mut coeffs: Vec<(IVec, Coeff)> = w
            .terms()
            .map(|(k, c)| (k.clone(), c.mul(&Coeff::rational(2, 1))))
            .collect();
        coeffs.sort_by_key(|(k, _)| k.clone());
        let expect = vec![
            (vec![0, -2], Coeff::rational(1, 16)),
            (vec![0, 0], Coeff::rational(-9, 16)),
            (vec![0, 1], Coeff::rational(1, 1)),
            (vec![0, 2], Coeff::rational(-9, 16)),
            (vec![0, 4], Coeff::rational(1, 16)),
        ];
        assert_eq!(coeffs, expect);
    }

    #[test]
    fn auto_seed_reproduces_the_published_base_polynomial() {
        let (dil, sym, orbits, _) = reduced_ex1();
        let auto = auto_base_poly(1, &dil, &sym, &orbits, Backend::Exact).unwrap();
        let expect = ex1_lifting_polys()[0].scale(&Coeff::rational(2, 1));
        assert_eq!(auto, expect);
    }

    #[test]
    fn constant_polynomial_is_rejected_for_a_shifted_orbit() {
        let (dil, sym, orbits, _) = reduced_ex1();
        let c = TrigPoly::constant(2, Coeff::rational(-1, 4));
        assert!(matches!(
            accept_user_poly(&c, 1, &dil, &sym, &orbits),
            Err(Error::UserPolyInvalid(_))
        ));
    }

    #[test]
    fn trivial_stabilizer_base_is_a_single_exponential() {
        use crate::examples::ex2_contexts;
        let (dil, sym) = ex2_contexts();
        let orbits = sym.orbit_decomposition(&dil).unwrap();
        // orbit 1 of the determinant-3 setup has trivial stabilizer
        assert_eq!(orbits.orbits[1].stabilizer.len(), 1);
        let avg = orbit_base_average(&vec![1, 1], 1, &dil, &sym, &orbits, Backend::Exact).unwrap();
        assert_eq!(avg, TrigPoly::monomial(vec![1, 1], Coeff::rational(1, 1)));
    }
}
