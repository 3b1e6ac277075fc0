//! Symmetrization of mutually symmetric wavelet families over an abelian
//! group: each orbit transversal is decomposed into cyclic factors, the
//! matching Kronecker product of DFT matrices mixes the orbit rows, and
//! the resulting wavelet masks individually satisfy a generalized
//! symmetry law with a root-of-unity factor.

use num_complex::Complex64;

use crate::bank::{FilterBankPair, Provenance, WaveletLabel};
use crate::error::{Error, Result};
use crate::framelike::{framelike_extension, row_order};
use crate::frames::algorithm1;
use crate::lattice::DilationContext;
use crate::lifting::{accept_user_poly, auto_base_poly, lifting_matrices_dual};
use crate::mat::{ivec_add, ivec_neg, rvec_from_ivec, IMat, IVec};
use crate::scalar::{Backend, Coeff};
use crate::symmetry::{center_shift, Orbit, OrbitStructure, SymmetryContext};
use crate::trigpoly::{TrigPoly, PREDICATE_TOL};

/// Tolerance for the unitarity of the mixing matrices themselves.
const W_TOL: f64 = 1e-12;

/// One cyclic factor of a transversal subgroup.
#[derive(Clone, Debug)]
pub struct CyclicFactor {
    pub generator: IMat,
    pub order: usize,
}

/// Per-orbit symmetrization data: a subgroup transversal in mixed-radix
/// order, the DFT Kronecker matrix, and the unnormalized root-of-unity
/// entries that appear in the symmetry law.
#[derive(Clone, Debug)]
pub struct OrbitSymmetrizer {
    pub factors: Vec<CyclicFactor>,
    /// Transversal matrices; position `k` is `prod_j K_j^{k_j}` in the
    /// mixed radix numbering.
    pub transversal: Vec<IMat>,
    /// Group indices of the transversal elements.
    pub transversal_idx: Vec<usize>,
    /// Digit index reached from the representative by position `k`.
    pub digits: Vec<usize>,
    /// Normalized (unitary) mixing matrix `W_p`.
    pub w: Vec<Vec<Complex64>>,
    /// Unnormalized entries `prod_j eps_{N_j}^{k_j l_j}`, all of modulus 1.
    pub u: Vec<Vec<Complex64>>,
    /// Whether the per-orbit assumption `r^F = M^-1 E M r^F` holds; when
    /// false the orbit falls back to the identity mix and its wavelets
    /// stay merely mutually symmetric.
    pub special: bool,
}

impl OrbitSymmetrizer {
    pub fn size(&self) -> usize {
        self.transversal.len()
    }

    fn is_identity_mix(&self) -> bool {
        !self.special || self.size() == 1
    }
}

/// Symmetrizers for every orbit, in orbit order.
#[derive(Clone, Debug)]
pub struct Symmetrizer {
    pub orbits: Vec<OrbitSymmetrizer>,
}

/// Whether the whole group commutes.
pub fn is_abelian(sym: &SymmetryContext) -> bool {
    sym.group
        .iter()
        .enumerate()
        .all(|(i, a)| sym.group[..i].iter().all(|b| a.mul(b) == b.mul(a)))
}

fn element_order(x: &IMat) -> usize {
    let id = IMat::identity(x.d);
    let mut acc = x.clone();
    let mut n = 1;
    while acc != id {
        acc = acc.mul(x);
        n += 1;
        assert!(n <= 10_000, "element order runaway");
    }
    n
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn cyclic_subgroup(x: &IMat) -> Vec<IMat> {
    let id = IMat::identity(x.d);
    let mut out = vec![id];
    let mut acc = x.clone();
    while acc != out[0] {
        out.push(acc.clone());
        acc = acc.mul(x);
    }
    out
}

/// Decompose a closed abelian matrix group into cyclic factors of prime
/// power order, primary component by primary component.
pub fn cyclic_decomposition(set: &[IMat]) -> Result<Vec<CyclicFactor>> {
    let n = set.len();
    if n == 0 {
        return Err(Error::InternalInconsistency("empty transversal".into()));
    }
    let d = set[0].d;
    let id = IMat::identity(d);
    let mut factors: Vec<CyclicFactor> = Vec::new();
    for q in prime_factors(n) {
        let primary: Vec<&IMat> = set
            .iter()
            .filter(|x| {
                let mut o = element_order(x);
                while o % q == 0 {
                    o /= q;
                }
                o == 1 && **x != id
            })
            .collect();
        let target = primary.len() + 1;
        let mut sub: Vec<IMat> = vec![id.clone()];
        while sub.len() < target {
            // largest order first, with a generated-subgroup disjointness
            // check against what is already covered
            let mut best: Option<(usize, IMat)> = None;
            for x in &primary {
                if sub.contains(x) {
                    continue;
                }
                let cyc = cyclic_subgroup(x);
                if cyc.iter().any(|y| *y != id && sub.contains(y)) {
                    continue;
                }
                let o = cyc.len();
                let better = match &best {
                    None => true,
                    Some((bo, bx)) => o > *bo || (o == *bo && **x < *bx),
                };
                if better {
                    best = Some((o, (*x).clone()));
                }
            }
            let Some((o, k)) = best else {
                return Err(Error::InternalInconsistency(format!(
                    "abelian decomposition stalled on the {q}-primary part"
                )));
            };
            let mut next = Vec::new();
            for a in &sub {
                for b in cyclic_subgroup(&k) {
                    next.push(a.mul(&b));
                }
            }
            factors.push(CyclicFactor { generator: k.clone(), order: o });
            sub = next;
        }
    }
    // verify the direct product enumerates the group bijectively
    let total: usize = factors.iter().map(|f| f.order).product();
    if total != n {
        return Err(Error::InternalInconsistency(
            "cyclic factor orders do not multiply to the group order".into(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..n {
        let e = product_at(&factors, &mixed_radix(&factors, k), d);
        if !set.contains(&e) || !seen.insert(e) {
            return Err(Error::InternalInconsistency(
                "mixed radix products do not enumerate the transversal".into(),
            ));
        }
    }
    Ok(factors)
}

/// Mixed-radix digits of `k`, most significant factor first.
pub fn mixed_radix(factors: &[CyclicFactor], k: usize) -> Vec<usize> {
    let mut digits = vec![0; factors.len()];
    let mut rest = k;
    for j in (0..factors.len()).rev() {
        digits[j] = rest % factors[j].order;
        rest /= factors[j].order;
    }
    digits
}

fn product_at(factors: &[CyclicFactor], digits: &[usize], d: usize) -> IMat {
    let mut acc = IMat::identity(d);
    for (f, &k) in factors.iter().zip(digits) {
        for _ in 0..k {
            acc = acc.mul(&f.generator);
        }
    }
    acc
}

/// Componentwise modular addition on mixed-radix indices.
pub fn oplus(factors: &[CyclicFactor], k: usize, l: usize) -> usize {
    let a = mixed_radix(factors, k);
    let b = mixed_radix(factors, l);
    let mut out = 0;
    for (j, f) in factors.iter().enumerate() {
        out = out * f.order + (a[j] + b[j]) % f.order;
    }
    out
}

/// Kronecker product of DFT matrices for the factor orders; returns the
/// normalized unitary matrix and the unnormalized root-of-unity entries.
pub fn build_w(factors: &[CyclicFactor]) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n: usize = factors.iter().map(|f| f.order).product();
    let norm = 1.0 / (n as f64).sqrt();
    let mut w = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut u = w.clone();
    for k in 0..n {
        let kd = mixed_radix(factors, k);
        for l in 0..n {
            let ld = mixed_radix(factors, l);
            let mut phase = 0.0f64;
            for (j, f) in factors.iter().enumerate() {
                phase += (kd[j] * ld[j]) as f64 / f.order as f64;
            }
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
            u[k][l] = z;
            w[k][l] = norm * z;
        }
    }
    (w, u)
}

fn check_w_invariants(factors: &[CyclicFactor], w: &[Vec<Complex64>], u: &[Vec<Complex64>]) -> bool {
    let n = w.len();
    // unitary
    for i in 0..n {
        for j in 0..n {
            let dot: Complex64 = (0..n).map(|k| w[i][k] * w[j][k].conj()).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot - want).norm() > W_TOL {
                return false;
            }
        }
    }
    // symmetric, and the product identity on unnormalized entries
    for k in 0..n {
        for l in 0..n {
            if (w[k][l] - w[l][k]).norm() > W_TOL {
                return false;
            }
            for m in 0..n {
                if (u[k][l] * u[m][l] - u[oplus(factors, k, m)][l]).norm() > W_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// Digit image of the representative coset under a group element, exact.
fn exact_image(e: &IMat, rep_digit: &IVec, sym: &SymmetryContext) -> Option<IVec> {
    let shift = center_shift(e, &sym.center)?;
    Some(ivec_add(&e.mul_ivec(rep_digit), &shift))
}

/// Candidates per orbit position: group elements mapping the
/// representative digit to the target digit verbatim.
fn exact_candidates(
    orbit: &Orbit,
    dil: &DilationContext,
    sym: &SymmetryContext,
) -> Vec<Vec<usize>> {
    let rep = &dil.digits[orbit.digits[0]];
    orbit
        .digits
        .iter()
        .map(|&dj| {
            let target = &dil.digits[dj];
            (0..sym.group.len())
                .filter(|&gi| exact_image(&sym.group[gi], rep, sym).as_ref() == Some(target))
                .collect()
        })
        .collect()
}

/// Depth-first search for one candidate per digit forming a subgroup.
fn subgroup_transversal(
    candidates: &[Vec<usize>],
    sym: &SymmetryContext,
) -> Option<Vec<usize>> {
    fn closed(chosen: &[usize], sym: &SymmetryContext) -> bool {
        chosen.iter().all(|&a| {
            chosen.iter().all(|&b| {
                let prod = sym.group[a].mul(&sym.group[b]);
                chosen.iter().any(|&c| sym.group[c] == prod)
            })
        })
    }
    fn rec(
        pos: usize,
        chosen: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        sym: &SymmetryContext,
    ) -> Option<Vec<usize>> {
        if pos == candidates.len() {
            return closed(chosen, sym).then(|| chosen.clone());
        }
        for &c in &candidates[pos] {
            chosen.push(c);
            if let Some(found) = rec(pos + 1, chosen, candidates, sym) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = vec![sym.identity_idx];
    if !candidates[0].contains(&sym.identity_idx) {
        return None;
    }
    rec(1, &mut chosen, candidates, sym)
}

/// The per-orbit assumption: every `r^F` is fixed by every conjugated
/// transversal element.
pub fn check_special_assumption(
    orbit: &Orbit,
    dil: &DilationContext,
    transversal: &[IMat],
) -> bool {
    orbit.r_vectors.values().all(|r| {
        transversal.iter().all(|e| {
            let er = e.mul_ivec(&dil.m_mat.mul_ivec(r));
            dil.m_inv.mul_ivec(&er) == rvec_from_ivec(r)
        })
    })
}

fn identity_symmetrizer(orbit: &Orbit, sym: &SymmetryContext, special: bool) -> OrbitSymmetrizer {
    let n = orbit.digits.len();
    let mut w = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (k, row) in w.iter_mut().enumerate() {
        row[k] = Complex64::new(1.0, 0.0);
    }
    OrbitSymmetrizer {
        factors: vec![],
        transversal: orbit.transversal.iter().map(|&gi| sym.group[gi].clone()).collect(),
        transversal_idx: orbit.transversal.clone(),
        digits: orbit.digits.clone(),
        w: w.clone(),
        u: w,
        special,
    }
}

/// Build the symmetrizer for every orbit. Orbits without a subgroup
/// transversal or failing the special assumption fall back to the
/// identity mix.
pub fn abelian_structure(
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<Symmetrizer> {
    if !is_abelian(sym) {
        return Err(Error::NotAbelian);
    }
    let mut out = Vec::with_capacity(orbits.num_orbits());
    for orbit in &orbits.orbits {
        if orbit.digits.len() == 1 {
            out.push(identity_symmetrizer(orbit, sym, true));
            continue;
        }
        let candidates = exact_candidates(orbit, dil, sym);
        let Some(chosen) = subgroup_transversal(&candidates, sym) else {
            out.push(identity_symmetrizer(orbit, sym, false));
            continue;
        };
        let mats: Vec<IMat> = chosen.iter().map(|&gi| sym.group[gi].clone()).collect();
        if !check_special_assumption(orbit, dil, &mats) {
            out.push(identity_symmetrizer(orbit, sym, false));
            continue;
        }
        let factors = cyclic_decomposition(&mats)?;
        let rep = &dil.digits[orbit.digits[0]];
        let mut transversal = Vec::with_capacity(mats.len());
        let mut transversal_idx = Vec::with_capacity(mats.len());
        let mut digits = Vec::with_capacity(mats.len());
        for k in 0..mats.len() {
            let e = product_at(&factors, &mixed_radix(&factors, k), dil.dim);
            let image = exact_image(&e, rep, sym).ok_or_else(|| {
                Error::InternalInconsistency("transversal element with fractional shift".into())
            })?;
            let di = dil
                .digits
                .iter()
                .position(|d| *d == image)
                .ok_or_else(|| Error::InternalInconsistency("image is not a digit".into()))?;
            let gi = sym
                .group
                .iter()
                .position(|g| *g == e)
                .ok_or_else(|| Error::InternalInconsistency("product left the group".into()))?;
            transversal.push(e);
            transversal_idx.push(gi);
            digits.push(di);
        }
        let (w, u) = build_w(&factors);
        if !check_w_invariants(&factors, &w, &u) {
            return Err(Error::InternalInconsistency(
                "mixing matrix failed its unitarity or product identities".into(),
            ));
        }
        out.push(OrbitSymmetrizer { factors, transversal, transversal_idx, digits, w, u, special: true });
    }
    Ok(Symmetrizer { orbits: out })
}

/// Right-multiply a row of polynomials by a mixing matrix.
pub fn symmetrize_row(row: &[TrigPoly], w: &[Vec<Complex64>]) -> Result<Vec<TrigPoly>> {
    let n = row.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = TrigPoly::zero(row[0].dim, Backend::Float);
        for (j, t) in row.iter().enumerate() {
            acc = acc.add(&t.to_float().scale(&Coeff::Float(w[j][i])))?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Per-orbit conjugated row mix applied to each listed row vector of the
/// bank (masks and extension column entries alike): new row `k` is
/// `sum_l conj(w[k][l]) old_row(l)` within every orbit block.
fn transform_bank(
    bank: &FilterBankPair,
    symm: &Symmetrizer,
    orbits: &OrbitStructure,
    provenance: Provenance,
) -> Result<FilterBankPair> {
    let bank = bank.to_float();
    let order = row_order(orbits);
    // bank row index per (p, position in orbit.digits)
    let mut slot = std::collections::BTreeMap::new();
    for (v, &(p, i, _)) in order.iter().enumerate() {
        slot.insert((p, i), v + 1);
    }
    let mut primal = bank.primal.clone();
    let mut dual = bank.dual.clone();
    let mut extra_primal = bank.extra_primal_cols.clone();
    let mut extra_dual = bank.extra_dual_cols.clone();
    let mut labels = bank.labels.clone();
    for (p, os) in symm.orbits.iter().enumerate() {
        if os.is_identity_mix() {
            continue;
        }
        let orbit = &orbits.orbits[p];
        // old bank rows of this orbit, addressed by the mixed-radix digits
        let old_rows: Vec<usize> = os
            .digits
            .iter()
            .map(|&dg| {
                let i = orbit.digits.iter().position(|&d| d == dg).ok_or_else(|| {
                    Error::InternalInconsistency("symmetrizer digit missing from orbit".into())
                })?;
                slot.get(&(p, i)).copied().ok_or_else(|| {
                    Error::PreconditionFailed(
                        "symmetrization needs the full set of orbit rows".into(),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let mix = |old: &[TrigPoly]| -> Result<Vec<TrigPoly>> {
            let mut fresh = Vec::with_capacity(os.size());
            for k in 0..os.size() {
                let mut acc = TrigPoly::zero(bank.primal[0].dim, Backend::Float);
                for (l, &v) in old_rows.iter().enumerate() {
                    acc = acc.add(&old[v].scale(&Coeff::Float(os.w[k][l].conj())))?;
                }
                fresh.push(acc);
            }
            Ok(fresh)
        };
        let new_primal = mix(&bank.primal)?;
        let new_dual = mix(&bank.dual)?;
        let new_extra_p: Vec<Vec<TrigPoly>> =
            bank.extra_primal_cols.iter().map(|col| mix(col)).collect::<Result<_>>()?;
        let new_extra_d: Vec<Vec<TrigPoly>> =
            bank.extra_dual_cols.iter().map(|col| mix(col)).collect::<Result<_>>()?;
        for (k, &v) in old_rows.iter().enumerate() {
            primal[v] = new_primal[k].clone();
            dual[v] = new_dual[k].clone();
            for (c, col) in new_extra_p.iter().enumerate() {
                extra_primal[c][v] = col[k].clone();
            }
            for (c, col) in new_extra_d.iter().enumerate() {
                extra_dual[c][v] = col[k].clone();
            }
            labels[v] = WaveletLabel::Orbit { p, i: k };
        }
    }
    Ok(FilterBankPair {
        backend: Backend::Float,
        primal,
        dual,
        labels,
        extra_primal_cols: extra_primal,
        extra_dual_cols: extra_dual,
        provenance,
        normalization_note: format!("{}; orbit rows mixed by DFT factors", bank.normalization_note),
    })
}

/// Locate `(k, f)` with `E^(k) F = K` over the mixed-radix transversal
/// and the orbit stabilizer.
fn factor_in_orbit(
    k_mat: &IMat,
    os: &OrbitSymmetrizer,
    orbit: &Orbit,
    sym: &SymmetryContext,
) -> Result<(usize, usize)> {
    for (k, e) in os.transversal.iter().enumerate() {
        for &f in &orbit.stabilizer {
            if e.mul(&sym.group[f]) == *k_mat {
                return Ok((k, f));
            }
        }
    }
    Err(Error::InternalInconsistency(
        "group element does not factor over the transversal".into(),
    ))
}

/// The generalized symmetry law for an individually symmetrized wavelet
/// row: `t(K^* xi) = u_{k,i} e^{2 pi i (Kc - c + M r^F, xi)} t(xi)` for
/// every `K = E^(k) F` in the group.
fn check_generalized_law(
    t: &TrigPoly,
    p: usize,
    i: usize,
    symm: &Symmetrizer,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<()> {
    let os = &symm.orbits[p];
    let orbit = &orbits.orbits[p];
    for k_mat in &sym.group {
        let (k, f) = factor_in_orbit(k_mat, os, orbit, sym)?;
        let r = orbits.r_vector(p, f)?;
        let c_shift = center_shift(k_mat, &sym.center).ok_or_else(|| {
            Error::InternalInconsistency("fractional center shift inside the group".into())
        })?;
        // phase vector Kc - c + M r^F
        let phase = ivec_add(&ivec_neg(&c_shift), &dil.m_mat.mul_ivec(r));
        let lhs = t.compose_linear(k_mat);
        let rhs = t.scale(&Coeff::Float(os.u[k][i])).shift(&phase);
        if !lhs.approx_eq(&rhs, PREDICATE_TOL) {
            return Err(Error::VerificationFailed(format!(
                "generalized symmetry law fails for orbit {p} position {i}"
            )));
        }
    }
    Ok(())
}

pub fn check_symmetrized_rows(
    bank: &FilterBankPair,
    symm: &Symmetrizer,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
) -> Result<()> {
    for (_, label, primal, dual) in bank.wavelets() {
        match label {
            WaveletLabel::Orbit { p, i } => {
                if symm.orbits[*p].is_identity_mix() {
                    continue;
                }
                check_generalized_law(primal, *p, *i, symm, dil, sym, orbits)?;
                check_generalized_law(dual, *p, *i, symm, dil, sym, orbits)?;
            }
            WaveletLabel::LastRow => {
                if !primal.is_symmetric(&sym.group, &sym.center)
                    || !dual.is_symmetric(&sym.group, &sym.center)
                {
                    return Err(Error::VerificationFailed(
                        "appended mask lost the group symmetry".into(),
                    ));
                }
            }
            WaveletLabel::Refinable => unreachable!("wavelets() skips row 0"),
        }
    }
    Ok(())
}

/// Frame-like extension with individually symmetric wavelets: build the
/// mutually symmetric bank, then mix each orbit block.
pub fn symmetrized_framelike(
    m0: &TrigPoly,
    m0t: &TrigPoly,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    n: usize,
) -> Result<FilterBankPair> {
    let base = framelike_extension(m0, m0t, dil, sym, orbits, n)?;
    let symm = abelian_structure(dil, sym, orbits)?;
    let bank = transform_bank(&base, &symm, orbits, Provenance::SymmetrizedFramelike)?;
    if !bank.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("polyphase duality after symmetrization".into()));
    }
    if bank.square_extension_holds(dil, PREDICATE_TOL)? != Some(true) {
        return Err(Error::VerificationFailed("square extension after symmetrization".into()));
    }
    check_symmetrized_rows(&bank, &symm, dil, sym, orbits)?;
    for (v, label, _, dual) in bank.wavelets() {
        let got = dual.vanishing_moment_order(n);
        if got < n {
            return Err(Error::VmDeficit {
                mask: format!("symmetrized dual wavelet {v} ({label:?})"),
                got,
                want: n,
            });
        }
    }
    Ok(bank)
}

/// Lifting with symmetrized rows: derive the per-orbit family over the
/// mixed-radix transversal, mix it by the conjugate of the DFT matrix,
/// and apply the usual transformation.
pub fn symmetrized_lift(
    bank: &FilterBankPair,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    user_bases: Option<Vec<Option<TrigPoly>>>,
) -> Result<FilterBankPair> {
    if bank.provenance != Provenance::SymmetrizedFramelike {
        return Err(Error::PreconditionFailed(
            "symmetrized lifting expects a symmetrized frame-like bank".into(),
        ));
    }
    let symm = abelian_structure(dil, sym, orbits)?;
    // base polynomial per orbit, then rows over the mixed-radix transversal
    let mut rows: Vec<Vec<TrigPoly>> = Vec::with_capacity(symm.orbits.len());
    for (p, os) in symm.orbits.iter().enumerate() {
        let base = match user_bases.as_ref().and_then(|b| b.get(p).cloned().flatten()) {
            Some(l) => accept_user_poly(&l.to_float(), p, dil, sym, orbits)?.0,
            None => auto_base_poly(p, dil, sym, orbits, Backend::Float)?,
        };
        let row: Vec<TrigPoly> = os
            .transversal_idx
            .iter()
            .map(|&gi| base.compose_linear(&sym.group[sym.conjugates[gi]]))
            .collect();
        // L' = L W_p^*
        let mut mixed = Vec::with_capacity(row.len());
        for i in 0..row.len() {
            let mut acc = TrigPoly::zero(dil.dim, Backend::Float);
            for (k, l) in row.iter().enumerate() {
                acc = acc.add(&l.scale(&Coeff::Float(os.w[k][i].conj())))?;
            }
            mixed.push(acc);
        }
        rows.push(mixed);
    }
    let m0 = &bank.primal[0];
    let mut primal = vec![m0.clone()];
    let mut dual0 = bank.dual[0].clone();
    let mut dual = Vec::with_capacity(bank.dual.len());
    let mut l_used = Vec::new();
    for (v, label) in bank.labels.iter().enumerate().skip(1) {
        let WaveletLabel::Orbit { p, i } = *label else {
            return Err(Error::PreconditionFailed(
                "symmetrized lifting expects orbit-labeled rows only".into(),
            ));
        };
        let l = &rows[p][i];
        let l_dilated = l.compose_linear(&dil.m_mat);
        primal.push(bank.primal[v].add(&l_dilated.mul(m0)?)?);
        dual0 = dual0.sub(&l_dilated.conjugate().mul(&bank.dual[v])?)?;
        dual.push(bank.dual[v].clone());
        l_used.push(l.clone());
    }
    dual.insert(0, dual0);
    let lifted = FilterBankPair {
        backend: Backend::Float,
        primal,
        dual,
        labels: bank.labels.clone(),
        extra_primal_cols: vec![],
        extra_dual_cols: vec![],
        provenance: Provenance::SymmetrizedLifted,
        normalization_note: format!("{}; lifted", bank.normalization_note),
    };
    if !lifting_matrices_dual(&l_used, dil.dim, Backend::Float) {
        return Err(Error::VerificationFailed("lifting matrix duality".into()));
    }
    if !lifted.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("polyphase duality after symmetrized lifting".into()));
    }
    if !lifted.dual[0].is_symmetric(&sym.group, &sym.center) {
        return Err(Error::VerificationFailed(
            "lifted dual refinable mask lost the group symmetry".into(),
        ));
    }
    check_symmetrized_rows(&lifted, &symm, dil, sym, orbits)?;
    for (v, label, primal, _) in lifted.wavelets() {
        if primal.vanishing_moment_order(1) < 1 {
            return Err(Error::VmDeficit {
                mask: format!("symmetrized lifted primal wavelet {v} ({label:?})"),
                got: 0,
                want: 1,
            });
        }
    }
    Ok(lifted)
}

/// Dual frame construction with individually symmetric orbit wavelets:
/// run the base algorithm, then mix each orbit block. The appended row,
/// when present, is already group-symmetric and stays untouched.
pub fn symmetrized_frames(
    m0: &TrigPoly,
    m0t_prime: &TrigPoly,
    dil: &DilationContext,
    sym: &SymmetryContext,
    orbits: &OrbitStructure,
    n: usize,
) -> Result<FilterBankPair> {
    let base = algorithm1(m0, m0t_prime, dil, sym, orbits, n)?;
    let symm = abelian_structure(dil, sym, orbits)?;
    let bank = transform_bank(&base, &symm, orbits, Provenance::SymmetrizedFrames)?;
    if !bank.duality_holds(dil, PREDICATE_TOL)? {
        return Err(Error::VerificationFailed("polyphase duality after symmetrization".into()));
    }
    if bank.square_extension_holds(dil, PREDICATE_TOL)? != Some(true) {
        return Err(Error::VerificationFailed("square extension after symmetrization".into()));
    }
    check_symmetrized_rows(&bank, &symm, dil, sym, orbits)?;
    let n_primal = m0t_prime.sum_rule_order(dil, n).clamp(1, n);
    for (v, label, primal, dual) in bank.wavelets() {
        let got = dual.vanishing_moment_order(n);
        if got < n {
            return Err(Error::VmDeficit {
                mask: format!("symmetrized dual wavelet {v} ({label:?})"),
                got,
                want: n,
            });
        }
        let got_p = primal.vanishing_moment_order(n_primal);
        if got_p < n_primal {
            return Err(Error::VmDeficit {
                mask: format!("symmetrized primal wavelet {v} ({label:?})"),
                got: got_p,
                want: n_primal,
            });
        }
    }
    Ok(bank)
}
