//! Symmetry groups of unimodular integer matrices: validation against a
//! dilation matrix, and the orbit decomposition of digit cosets with the
//! stabilizer, transversal and r-vector bookkeeping used by the
//! construction routines.

use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::mat::{ivec_add, rvec_from_ivec, rvec_sub, rvec_to_ivec, IMat, IVec, RVec};
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Saturation cap for generator closure.
pub const CLOSURE_CAP: usize = 10_000;

/// A validated symmetry group together with its center and the conjugate
/// map `E -> E' = M^-1 E M`.
#[derive(Clone, Debug)]
pub struct SymmetryContext {
    pub dim: usize,
    /// Sorted, closed group.
    pub group: Vec<IMat>,
    pub center: RVec,
    /// `conjugates[i]` = group index of `M^-1 * group[i] * M`.
    pub conjugates: Vec<usize>,
    /// `inverses[i]` = group index of `group[i]^-1`.
    pub inverses: Vec<usize>,
    pub identity_idx: usize,
}

/// One orbit of digit cosets under the group action.
#[derive(Clone, Debug)]
pub struct Orbit {
    /// Digit indices `s_{p,i}`, `i = 0` is the representative.
    pub digits: Vec<usize>,
    /// Group indices of the stabilizer `H_{p,0}` of the representative coset.
    pub stabilizer: Vec<usize>,
    /// Group indices of the transversal `E^(i)`; same length as `digits`.
    pub transversal: Vec<usize>,
    /// `r^F_{p,0}` keyed by the group index of `F` in the stabilizer.
    pub r_vectors: BTreeMap<usize, IVec>,
    /// `factor[k][i] = (j, f)` with `group[k] * E^(i) = E^(j) * group[f]`,
    /// `group[f]` in the stabilizer; indexed by group element `k`.
    pub factor: Vec<Vec<(usize, usize)>>,
}

/// The full orbit decomposition of the digit set.
#[derive(Clone, Debug)]
pub struct OrbitStructure {
    pub orbits: Vec<Orbit>,
    /// `digit_to_pi[digit index] = (p, i)`.
    pub digit_to_pi: Vec<(usize, usize)>,
}

/// Close a generator set under multiplication, capped.
pub fn close_generators(gens: &[IMat], cap: usize) -> Result<Vec<IMat>> {
    if gens.is_empty() {
        return Err(Error::Parse("empty generator set".into()));
    }
    let d = gens[0].d;
    let mut set: std::collections::BTreeSet<IMat> = gens.iter().cloned().collect();
    set.insert(IMat::identity(d));
    loop {
        let snapshot: Vec<IMat> = set.iter().cloned().collect();
        let before = snapshot.len();
        for a in &snapshot {
            for b in &snapshot {
                set.insert(a.mul(b));
                if set.len() > cap {
                    return Err(Error::ClosureCapExceeded(cap));
                }
            }
        }
        if set.len() == before {
            return Ok(set.into_iter().collect());
        }
    }
}

fn conjugate_by_dilation(e: &IMat, dilctx: &DilationContext) -> Option<IMat> {
    // M^-1 * E * M, kept only when integral
    let d = e.d;
    let em = e.mul(&dilctx.m_mat);
    let mut out = Vec::with_capacity(d * d);
    for col in 0..d {
        let c: IVec = (0..d).map(|r| em.at(r, col)).collect();
        let x = dilctx.m_inv.mul_ivec(&c);
        let xi = rvec_to_ivec(&x)?;
        out.push(xi);
    }
    let mut rows = vec![vec![0i64; d]; d];
    for (col, c) in out.iter().enumerate() {
        for r in 0..d {
            rows[r][col] = c[r];
        }
    }
    Some(IMat::from_rows(&rows))
}

/// `c - E c`; `None` when not integral.
pub fn center_shift(e: &IMat, center: &RVec) -> Option<IVec> {
    rvec_to_ivec(&rvec_sub(center, &e.mul_rvec(center)))
}

impl SymmetryContext {
    /// Validate an explicit closed group against the dilation matrix and
    /// the center: closure, unimodularity, appropriateness and center
    /// admissibility.
    pub fn validate(group: Vec<IMat>, dilctx: &DilationContext, center: RVec) -> Result<Self> {
        if group.is_empty() {
            return Err(Error::Parse("empty symmetry group".into()));
        }
        let dim = dilctx.dim;
        let mut group = group;
        group.sort();
        group.dedup();
        let index_of = |m: &IMat, g: &[IMat]| g.binary_search(m).ok();
        for (i, a) in group.iter().enumerate() {
            if !a.is_unimodular() {
                return Err(Error::NotUnimodular(i));
            }
            for (j, b) in group.iter().enumerate() {
                if index_of(&a.mul(b), &group).is_none() {
                    return Err(Error::NotClosed(i, j));
                }
            }
        }
        let identity_idx = index_of(&IMat::identity(dim), &group)
            .ok_or_else(|| Error::Parse("group does not contain the identity".into()))?;
        let mut conjugates = Vec::with_capacity(group.len());
        let mut inverses = vec![usize::MAX; group.len()];
        for (i, e) in group.iter().enumerate() {
            if center_shift(e, &center).is_none() {
                return Err(Error::BadCenter(i));
            }
            let conj = conjugate_by_dilation(e, dilctx)
                .and_then(|c| index_of(&c, &group))
                .ok_or(Error::NotAppropriate(i))?;
            conjugates.push(conj);
            for (j, f) in group.iter().enumerate() {
                if e.mul(f) == IMat::identity(dim) {
                    inverses[i] = j;
                }
            }
        }
        if inverses.iter().any(|&x| x == usize::MAX) {
            return Err(Error::InternalInconsistency("group element without inverse".into()));
        }
        Ok(SymmetryContext { dim, group, center, conjugates, inverses, identity_idx })
    }

    /// Validate from a generator list by saturating first.
    pub fn from_generators(gens: &[IMat], dilctx: &DilationContext, center: RVec) -> Result<Self> {
        let group = close_generators(gens, CLOSURE_CAP)?;
        Self::validate(group, dilctx, center)
    }

    /// Action of a group element on a digit coset: the digit index of
    /// `E*s + c - E*c`.
    pub fn act_on_digit(&self, e_idx: usize, digit_idx: usize, dilctx: &DilationContext) -> usize {
        let e = &self.group[e_idx];
        let s = &dilctx.digits[digit_idx];
        let shift = center_shift(e, &self.center).expect("validated center");
        dilctx.digit_index(&ivec_add(&e.mul_ivec(s), &shift))
    }

    /// Exact image `E*s + c - E*c` (not reduced to a digit).
    fn exact_image(&self, e_idx: usize, digit_idx: usize, dilctx: &DilationContext) -> IVec {
        let e = &self.group[e_idx];
        let s = &dilctx.digits[digit_idx];
        let shift = center_shift(e, &self.center).expect("validated center");
        ivec_add(&e.mul_ivec(s), &shift)
    }

    /// `r^F_{p,0} = M^-1(c - s) - M^-1 F (c - s)` for the orbit
    /// representative digit `s`; `None` when not integral.
    fn r_vector_raw(&self, f_idx: usize, rep_digit: usize, dilctx: &DilationContext) -> Option<IVec> {
        let s = rvec_from_ivec(&dilctx.digits[rep_digit]);
        let c_minus_s = rvec_sub(&self.center, &s);
        let fc_s = self.group[f_idx].mul_rvec(&c_minus_s);
        let diff: RVec = c_minus_s
            .iter()
            .zip(&fc_s)
            .map(|(a, b)| a - b)
            .collect::<Vec<BigRational>>();
        rvec_to_ivec(&dilctx.m_inv.mul_rvec(&diff))
    }

    /// Decompose the digit set into orbits. Orbits are ordered by
    /// ascending size, ties broken by smallest digit index; the
    /// representative is the smallest digit index in the orbit and the
    /// transversal is ordered by the digit index it maps the
    /// representative to.
    pub fn orbit_decomposition(&self, dilctx: &DilationContext) -> Result<OrbitStructure> {
        let m = dilctx.m;
        let mut seen = vec![false; m];
        let mut raw_orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut members: Vec<usize> = Vec::new();
            for e_idx in 0..self.group.len() {
                let img = self.act_on_digit(e_idx, start, dilctx);
                if !members.contains(&img) {
                    members.push(img);
                }
            }
            members.sort_unstable();
            for &i in &members {
                seen[i] = true;
            }
            raw_orbits.push(members);
        }
        raw_orbits.sort_by_key(|o| (o.len(), o[0]));

        let mut orbits = Vec::with_capacity(raw_orbits.len());
        let mut digit_to_pi = vec![(usize::MAX, usize::MAX); m];
        for (p, members) in raw_orbits.iter().enumerate() {
            let rep = members[0];
            let stabilizer: Vec<usize> = (0..self.group.len())
                .filter(|&e| self.act_on_digit(e, rep, dilctx) == rep)
                .collect();
            let mut transversal = vec![self.identity_idx];
            for &target in &members[1..] {
                // exact-image candidates only: (fDigE_i) must hold verbatim
                let mut candidates: Vec<usize> = (0..self.group.len())
                    .filter(|&e| self.exact_image(e, rep, dilctx) == dilctx.digits[target])
                    .collect();
                if candidates.is_empty() {
                    return Err(Error::DigitIncompatible(format!(
                        "no group element maps digit {:?} exactly onto digit {:?}; replace the latter",
                        dilctx.digits[rep], dilctx.digits[target]
                    )));
                }
                candidates.sort_by_key(|&e| {
                    let tr: i64 = (0..self.dim).map(|i| self.group[e].at(i, i)).sum();
                    (-tr, self.group[e].clone())
                });
                transversal.push(candidates[0]);
            }
            if transversal.len() * stabilizer.len() != self.group.len() {
                return Err(Error::InternalInconsistency(format!(
                    "orbit {}: |E_p| * |H_p0| = {} * {} != |H| = {}",
                    p,
                    transversal.len(),
                    stabilizer.len(),
                    self.group.len()
                )));
            }
            let mut r_vectors = BTreeMap::new();
            for &f in &stabilizer {
                let r = self.r_vector_raw(f, rep, dilctx).ok_or_else(|| {
                    Error::InternalInconsistency(format!(
                        "non-integer r vector for orbit {} stabilizer element {}",
                        p, f
                    ))
                })?;
                // F s = M r + s + F c - c
                let lhs = self.group[f].mul_ivec(&dilctx.digits[rep]);
                let neg_shift = center_shift(&self.group[f], &self.center).expect("validated");
                let rhs = {
                    let mr = dilctx.m_mat.mul_ivec(&r);
                    let mut v = ivec_add(&mr, &dilctx.digits[rep]);
                    v = v.iter().zip(&neg_shift).map(|(a, b)| a - b).collect();
                    v
                };
                if lhs != rhs {
                    return Err(Error::InternalInconsistency(format!(
                        "r vector {:?} fails the digit relation for orbit {}",
                        r, p
                    )));
                }
                r_vectors.insert(f, r);
            }
            // K E^(i) = E^(j) F factorization table
            let mut factor = Vec::with_capacity(self.group.len());
            for k in 0..self.group.len() {
                let mut row = Vec::with_capacity(members.len());
                for &ei in &transversal {
                    let ke = self.group[k].mul(&self.group[ei]);
                    let ke_idx = self
                        .group
                        .binary_search(&ke)
                        .map_err(|_| Error::InternalInconsistency("product left the group".into()))?;
                    let img = self.act_on_digit(ke_idx, rep, dilctx);
                    let j = members.iter().position(|&x| x == img).ok_or_else(|| {
                        Error::InternalInconsistency("orbit not closed under action".into())
                    })?;
                    let f_mat = self.group[self.inverses[transversal[j]]].mul(&ke);
                    let f = self
                        .group
                        .binary_search(&f_mat)
                        .map_err(|_| Error::InternalInconsistency("factor left the group".into()))?;
                    if !stabilizer.contains(&f) {
                        return Err(Error::InternalInconsistency(
                            "transversal factorization left the stabilizer".into(),
                        ));
                    }
                    row.push((j, f));
                }
                factor.push(row);
            }
            for (i, &digit) in members.iter().enumerate() {
                digit_to_pi[digit] = (p, i);
            }
            orbits.push(Orbit {
                digits: members.clone(),
                stabilizer,
                transversal,
                r_vectors,
                factor,
            });
        }
        Ok(OrbitStructure { orbits, digit_to_pi })
    }
}

impl OrbitStructure {
    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    /// `r^F_{p,0}` by orbit index and stabilizer group index.
    pub fn r_vector(&self, p: usize, f_group_idx: usize) -> Result<&IVec> {
        self.orbits[p]
            .r_vectors
            .get(&f_group_idx)
            .ok_or(Error::NotInStabilizer(p))
    }
}
