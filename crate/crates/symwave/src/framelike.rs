//! Almost frame-like wavelet systems: the basic square matrix extension of
//! a biorthogonal-up-to-order-n mask pair, with wavelet rows grouped by
//! digit orbits, and the interpolatory reduction to `m - 1` generators.

use crate::bank::{FilterBankPair, Provenance, WaveletLabel};
use crate::dualmask::check_20new;
use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::mat::rvec_from_ivec;
use crate::scalar::{Backend, Coeff, Quad};
use crate::symmetry::{center_shift, OrbitStructure, SymmetryContext};
use crate::trigpoly::{TrigPoly, PREDICATE_TOL};
use num_complex::Complex64;

pub(crate) fn inv_sqrt_m(m: usize, backend: Backend) -> Coeff {
    match backend {
        Backend::Exact => Coeff::Exact(Quad::sqrt_of(m as u64).inv()),
        Backend::Float => Coeff::Float(Complex64::new(1.0 / (m as f64).sqrt(), 0.0)),
    }
}

fn sqrt_m(m: usize, backend: Backend) -> Coeff {
    match backend {
        Backend::Exact => Coeff::Exact(Quad::sqrt_of(m as u64)),
        Backend::Float => Coeff::Float(Complex64::new((m as f64).sqrt(), 0.0)),
    }
}

/// Substitute the dilated argument: `t(M^T xi)`, exponents mapped `k -> M k`.
fn dilate_arg(t: &TrigPoly, dil: &DilationContext) -> TrigPoly {
    t.compose_linear(&dil.m_mat)
}

fn poly_eq(a: &TrigPoly, b: &TrigPoly) -> bool {
    match a.backend {
        Backend::Exact => a == b,
        Backend::Float => a.approx_eq(b, PREDICATE_TOL),
    }
}

/// Wavelet row order: one row per digit, grouped by orbit blocks.
/// Returns `(p, i, digit index)` triples.
pub fn row_order(orbits: &OrbitStructure) -> Vec<(usize, usize, usize)> {
    let mut rows = Vec::new();
    for (p, orbit) in orbits.orbits.iter().enumerate() {
        for (i, &digit) in orbit.digits.iter().enumerate() {
            rows.push((p, i, digit));
        }
    }
    rows
}

fn build(
    m0: &TrigPoly,
    m0t: &TrigPoly,
    dil: &DilationContext,
    orbits: &OrbitStructure,
    skip_digit: Option<usize>,
    provenance: Provenance,
    note: String,
) -> Result<FilterBankPair> {
    let backend = m0.backend;
    let dim = dil.dim;
    let mu0 = m0.polyphase_decompose(dil);
    let mu0t = m0t.polyphase_decompose(dil);
    let isq = inv_sqrt_m(dil.m, backend);

    let mut primal = vec![m0.clone()];
    let mut dual = vec![m0t.clone()];
    let mut labels = vec![WaveletLabel::Refinable];
    for (p, i, digit) in row_order(orbits) {
        if skip_digit == Some(digit) {
            continue;
        }
        let expo = TrigPoly::monomial(dil.digits[digit].clone(), isq.clone());
        let correction = dilate_arg(&mu0[digit].conjugate(), dil).mul(m0t)?;
        primal.push(expo.clone());
        dual.push(expo.sub(&correction)?);
        labels.push(WaveletLabel::Orbit { p, i });
    }

    let (extra_primal_cols, extra_dual_cols) = if skip_digit.is_some() {
        (vec![], vec![])
    } else {
        // top entries 1 - P P~* and 1, wavelet entries -conj(mu~_0j), -conj(mu_0j)
        let mut ppt = TrigPoly::zero(dim, backend);
        for j in 0..dil.m {
            ppt = ppt.add(&mu0[j].mul(&mu0t[j].conjugate())?)?;
        }
        let one = TrigPoly::one(dim, backend);
        let mut pc = vec![one.sub(&ppt)?];
        let mut dc = vec![one];
        for (_, _, digit) in row_order(orbits) {
            pc.push(mu0t[digit].conjugate().neg());
            dc.push(mu0[digit].conjugate().neg());
        }
        (vec![pc], vec![dc])
    };

    Ok(FilterBankPair {
        backend,
        primal,
        dual,
        labels,
        extra_primal_cols,
        extra_dual_cols,
        provenance,
        normalization_note: note,
    })
}

/// Basic square matrix extension: primal wavelets are scaled digit
/// exponentials, dual wavelets subtract the dilated polyphase correction.
pub fn framelike_extension(
    m0: &TrigPoly,
    m0t: &TrigPoly,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    n: usize,
) -> Result<FilterBankPair> {
    if !m0.is_symmetric(&sym.group, &sym.center) {
        return Err(Error::PreconditionFailed("refinable mask is not H-symmetric".into()));
    }
    if !m0t.is_symmetric(&sym.group, &sym.center) {
        return Err(Error::PreconditionFailed("dual refinable mask is not H-symmetric".into()));
    }
    if !check_20new(m0, m0t, n) {
        return Err(Error::PreconditionFailed(format!(
            "biorthogonality jet condition fails at order {n}"
        )));
    }
    if m0.sum_rule_order(dil, n) < n {
        return Err(Error::PreconditionFailed(format!(
            "refinable mask does not obey the sum rule of order {n}"
        )));
    }
    let bank = build(
        m0,
        m0t,
        dil,
        orbits,
        None,
        Provenance::Framelike,
        "polyphase factor 1/sqrt(m) kept exactly".into(),
    )?;
    verify_framelike(&bank, dil, sym, orbits, n)?;
    Ok(bank)
}

fn verify_framelike(
    bank: &FilterBankPair,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    n: usize,
) -> Result<()> {
    if !bank.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("polyphase duality identity".into()));
    }
    if bank.square_extension_holds(dil, PREDICATE_TOL)? == Some(false) {
        return Err(Error::VerificationFailed("square extension identity".into()));
    }
    check_mutual_symmetry_digits(bank, dil, sym, orbits)?;
    for (v, label, _, dual) in bank.wavelets() {
        let got = dual.vanishing_moment_order(n);
        if got < n {
            return Err(Error::VmDeficit {
                mask: format!("dual wavelet {v} ({label:?})"),
                got,
                want: n,
            });
        }
    }
    Ok(())
}

/// Mutual-symmetry verification with the digit vectors resolved through
/// the dilation context.
pub fn check_mutual_symmetry_digits(
    bank: &FilterBankPair,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<()> {
    let find = |p: usize, i: usize| -> Option<usize> {
        bank.labels
            .iter()
            .position(|l| *l == WaveletLabel::Orbit { p, i })
    };
    for (p, orbit) in orbits.orbits.iter().enumerate() {
        let Some(rep_row) = find(p, 0) else { continue };
        let stab: Vec<_> = orbit.stabilizer.iter().map(|&f| sym.group[f].clone()).collect();
        let center = rvec_from_ivec(&dil.digits[orbit.digits[0]]);
        for (side, masks) in [("primal", &bank.primal), ("dual", &bank.dual)] {
            if !masks[rep_row].is_symmetric(&stab, &center) {
                return Err(Error::VerificationFailed(format!(
                    "{side} wavelet ({p},0) is not stabilizer-symmetric about its digit"
                )));
            }
            for i in 1..orbit.digits.len() {
                let Some(row) = find(p, i) else { continue };
                let e = &sym.group[orbit.transversal[i]];
                let shift = center_shift(e, &sym.center).ok_or_else(|| {
                    Error::InternalInconsistency("non-integer center shift".into())
                })?;
                let expect = masks[rep_row].compose_linear(e).shift(&shift);
                if !poly_eq(&masks[row], &expect) {
                    return Err(Error::VerificationFailed(format!(
                        "{side} wavelet ({p},{i}) is not the transversal image of ({p},0)"
                    )));
                }
            }
        }
    }
    Ok(())
}

///// Interpolatory reduction: when some polyphase component of the refinable
/// mask is constantly `1/sqrt(m)`, replace the dual refinable mask by the
/// matching digit exponential and drop the aligned wavelet row (its dual
/// wavelet is identically zero).
pub fn reduce_generators(
    bank: &FilterBankPair,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    n: usize,
) -> Result<FilterBankPair> {
    let backend = bank.backend;
    let m0 = &bank.primal[0];
    let mu0 = m0.polyphase_decompose(dil);
    let target = TrigPoly::constant(dil.dim, inv_sqrt_m(dil.m, backend));
    let k = mu0
        .iter()
        .position(|t| poly_eq(t, &target))
        .ok_or(Error::NotInterpolatoryAtDigit)?;
    let m0t = TrigPoly::monomial(dil.digits[k].clone(), Coeff::one(backend));

    // sum_l mu_0l conj(mu~_0l) = mu_0k * sqrt(m) = 1 by construction
    let ident = mu0[k].scale(&sqrt_m(dil.m, backend));
    if !poly_eq(&ident, &TrigPoly::one(dil.dim, backend)) {
        return Err(Error::PostconditionFailed("reduced polyphase pairing is not 1".into()));
    }
    if !check_20new(m0, &m0t, n) {
        return Err(Error::PostconditionFailed(
            "reduced dual mask fails the biorthogonality jets".into(),
        ));
    }
    let reduced = build(
        m0,
        &m0t,
        dil,
        orbits,
        Some(k),
        Provenance::FramelikeReduced,
        format!("dual refinable mask replaced by the digit-{k} exponential"),
    )?;
    if !reduced.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("reduced polyphase duality identity".into()));
    }
    check_mutual_symmetry_digits(&reduced, dil, sym, orbits)?;
    Ok(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{ex1_contexts, ex1_m0};
    use crate::mat::IMat;
    use crate::mat::rvec_zero;

    fn ex1_bank() -> (DilationContext, SymmetryContext, OrbitStructure, FilterBankPair) {
        let (dil, sym) = ex1_contexts();
        let orbits = sym.orbit_decomposition(&dil).unwrap();
        let one = TrigPoly::one(2, Backend::Exact);
        let bank = framelike_extension(&ex1_m0(), &one, &dil, &sym, &orbits, 3).unwrap();
        (dil, sym, orbits, bank)
    }

    #[test]
    fn hexagonal_bank_shape_and_identities() {
        let (dil, _, _, bank) = ex1_bank();
        assert_eq!(bank.num_wavelets(), 4);
        assert!(bank.duality_holds(&dil, 0.0).unwrap());
        assert_eq!(bank.square_extension_holds(&dil, 0.0).unwrap(), Some(true));
        // primal wavelets are scaled digit exponentials
        for (v, _, primal, _) in bank.wavelets() {
            assert_eq!(primal.num_terms(), 1, "wavelet {v}");
            let (k, c) = primal.terms().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
            assert!(dil.digits.contains(&k));
            assert_eq!(c, Coeff::rational(1, 2));
        }
    }

    #[test]
    fn hexagonal_first_dual_wavelet_matches_hand_expansion() {
        let (_, _, orbits, bank) = ex1_bank();
        // row labeled (1,0) corresponds to digit (0,1)
        let row = bank
            .labels
            .iter()
            .position(|l| *l == WaveletLabel::Orbit { p: 1, i: 0 })
            .unwrap();
        assert_eq!(orbits.orbits[1].digits[0], 1);
        let w = &bank.dual[row];
        let expect = TrigPoly::from_terms(
            2,
            Backend::Exact,
            [
                (vec![0, 1], Coeff::rational(1, 2)),
                (vec![0, 0], Coeff::rational(-9, 32)),
                (vec![0, 2], Coeff::rational(-9, 32)),
                (vec![0, -2], Coeff::rational(1, 32)),
                (vec![0, 4], Coeff::rational(1, 32)),
            ],
        )
        .unwrap();
        assert_eq!(*w, expect);
        assert!(w.vanishing_moment_order(4) >= 3);
    }

    #[test]
    fn reduction_drops_the_interpolatory_row() {
        let (dil, sym, orbits, bank) = ex1_bank();
        let reduced = reduce_generators(&bank, &dil, &sym, &orbits, 3).unwrap();
        assert_eq!(reduced.num_wavelets(), 3);
        assert!(reduced
            .labels
            .iter()
            .all(|l| *l != WaveletLabel::Orbit { p: 0, i: 0 }));
        assert!(reduced.duality_holds(&dil, 0.0).unwrap());
        // digit 0 is the origin, so the reduced dual refinable mask is 1
        assert_eq!(reduced.dual[0], TrigPoly::one(2, Backend::Exact));
        for (_, _, _, dual) in reduced.wavelets() {
            assert!(dual.vanishing_moment_order(3) >= 3);
        }
    }

    #[test]
    fn non_interpolatory_mask_is_rejected_by_reduction() {
        // Haar-like 1d pair, then break interpolation by reweighting
        let dil = DilationContext::new(IMat::from_rows(&[vec![2]]), None).unwrap();
        let sym = SymmetryContext::validate(vec![IMat::identity(1)], &dil, rvec_zero(1)).unwrap();
        let orbits = sym.orbit_decomposition(&dil).unwrap();
        let m0 = TrigPoly::from_terms(
            1,
            Backend::Exact,
            [
                (vec![0], Coeff::rational(1, 4)),
                (vec![1], Coeff::rational(3, 8)),
                (vec![2], Coeff::rational(1, 4)),
                (vec![3], Coeff::rational(1, 8)),
            ],
        )
        .unwrap();
        let one = TrigPoly::one(1, Backend::Exact);
        let bank = framelike_extension(&m0, &one, &dil, &sym, &orbits, 1).unwrap();
        assert!(matches!(
            reduce_generators(&bank, &dil, &sym, &orbits, 1),
            Err(Error::NotInterpolatoryAtDigit)
        ));
    }

    #[test]
    fn degenerate_1d_duals_expand_directly() {
        let dil = DilationContext::new(IMat::from_rows(&[vec![2]]), None).unwrap();
        let sym = SymmetryContext::validate(vec![IMat::identity(1)], &dil, rvec_zero(1)).unwrap();
        let orbits = sym.orbit_decomposition(&dil).unwrap();
        let half = Coeff::rational(1, 2);
        let m0 = TrigPoly::from_terms(
            1,
            Backend::Exact,
            [(vec![0], half.clone()), (vec![1], half.clone())],
        )
        .unwrap();
        let one = TrigPoly::one(1, Backend::Exact);
        let bank = framelike_extension(&m0, &one, &dil, &sym, &orbits, 1).unwrap();
        // mu_00 = mu_01 = 1/sqrt(2) * sqrt(2)/2 ... both polyphase components
        // are 1/sqrt(2) scaled by sqrt(2): tau = sqrt(2)*1/2
        let isq = inv_sqrt_m(2, Backend::Exact);
        for (v, _, _, dual) in bank.wavelets() {
            // dual_k = (1/sqrt 2) e^{2 pi i s_k xi} - conj(mu_0k)(2 xi)
            let s = &dil.digits[v - 1];
            let expo = TrigPoly::monomial(s.clone(), isq.clone());
            let tau = TrigPoly::constant(1, isq.clone());
            let expect = expo.sub(&tau.conjugate()).unwrap();
            assert_eq!(*dual, expect);
        }
    }
}
