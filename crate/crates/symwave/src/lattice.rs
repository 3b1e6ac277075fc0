//! Integer-lattice arithmetic for a dilation matrix: expansiveness check,
//! digit sets and coset residues.

use crate::error::{Error, Result};
use crate::mat::{ivec_sub, rvec_to_ivec, IMat, IVec, RMat};
use nalgebra::DMatrix;
use num_traits::Signed;

const EIGEN_TOL: f64 = 1e-9;

/// A validated dilation matrix together with digit sets for `M` and `M^T`.
#[derive(Clone, Debug)]
pub struct DilationContext {
    pub dim: usize,
    pub m_mat: IMat,
    /// |det M|
    pub m: usize,
    pub m_inv: RMat,
    pub mt_inv: RMat,
    pub digits: Vec<IVec>,
    pub dual_digits: Vec<IVec>,
}

fn expanding_check(m: &IMat) -> Result<()> {
    let d = m.d;
    let f = DMatrix::from_fn(d, d, |i, j| m.at(i, j) as f64);
    let eigs = f.complex_eigenvalues();
    for ev in eigs.iter() {
        if ev.norm() <= 1.0 + EIGEN_TOL {
            return Err(Error::NotExpanding(ev.norm()));
        }
    }
    Ok(())
}

/// Canonical digits: integer points of the half-open box `M*[0,1)^d`,
/// zero first, then lexicographic.
fn canonical_digits(m: &IMat, m_inv: &RMat, count: usize) -> Vec<IVec> {
    let d = m.d;
    // Bounding box of the image of the unit cube.
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for corner in 0..(1u32 << d) {
        let v: Vec<i64> = (0..d).map(|j| (corner >> j) & 1).map(|b| b as i64).collect();
        let img = m.mul_ivec(&v);
        for j in 0..d {
            lo[j] = lo[j].min(img[j]);
            hi[j] = hi[j].max(img[j]);
        }
    }
    let mut digits = Vec::with_capacity(count);
    let mut k = lo.clone();
    'outer: loop {
        let x = m_inv.mul_ivec(&k);
        let inside = x.iter().all(|c| !c.is_negative() && c < &num_rational::BigRational::from_integer(1.into()));
        if inside {
            digits.push(k.clone());
        }
        for j in (0..d).rev() {
            k[j] += 1;
            if k[j] <= hi[j] {
                continue 'outer;
            }
            k[j] = lo[j];
        }
        break;
    }
    debug_assert_eq!(digits.len(), count);
    digits.sort();
    let zero = vec![0i64; d];
    if let Some(pos) = digits.iter().position(|s| *s == zero) {
        digits.remove(pos);
        digits.insert(0, zero);
    }
    digits
}

fn validate_override(m: &IMat, m_inv: &RMat, count: usize, digits: &[IVec]) -> Result<()> {
    let d = m.d;
    if digits.len() != count {
        return Err(Error::BadOverride(format!(
            "expected {} digits, got {}",
            count,
            digits.len()
        )));
    }
    if digits[0] != vec![0i64; d] {
        return Err(Error::BadOverride("first digit must be the zero vector".into()));
    }
    for i in 0..digits.len() {
        for j in i + 1..digits.len() {
            let diff = ivec_sub(&digits[i], &digits[j]);
            if rvec_to_ivec(&m_inv.mul_ivec(&diff)).is_some() {
                return Err(Error::BadOverride(format!(
                    "digits {:?} and {:?} are congruent modulo the lattice",
                    digits[i], digits[j]
                )));
            }
        }
    }
    Ok(())
}

impl DilationContext {
    /// Validate `M` and attach digit sets (canonical unless overridden).
    pub fn new(m_mat: IMat, digit_override: Option<Vec<IVec>>) -> Result<Self> {
        let det = m_mat.det();
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        expanding_check(&m_mat)?;
        let m = usize::try_from(det.abs()).expect("determinant overflow");
        let m_inv = m_mat.inverse().ok_or(Error::SingularMatrix)?;
        let mt = m_mat.transpose();
        let mt_inv = mt.inverse().ok_or(Error::SingularMatrix)?;
        let digits = match digit_override {
            Some(ds) => {
                validate_override(&m_mat, &m_inv, m, &ds)?;
                ds
            }
            None => canonical_digits(&m_mat, &m_inv, m),
        };
        let dual_digits = canonical_digits(&mt, &mt_inv, m);
        Ok(DilationContext { dim: m_mat.d, m_mat, m, m_inv, mt_inv, digits, dual_digits })
    }

    /// Unique decomposition `k = M*beta + digits[idx]`.
    pub fn coset_residue(&self, k: &[i64]) -> (usize, IVec) {
        for (idx, s) in self.digits.iter().enumerate() {
            let diff = ivec_sub(k, s);
            if let Some(beta) = rvec_to_ivec(&self.m_inv.mul_ivec(&diff)) {
                return (idx, beta);
            }
        }
        unreachable!("digit set does not cover Z^d")
    }

    /// Digit index of the coset of `k`.
    pub fn digit_index(&self, k: &[i64]) -> usize {
        self.coset_residue(k).0
    }

    /// Index `j` such that `e^{2 pi i (M^{-1}k, s)} = zeta_m^j` for a dual
    /// digit `s` (the phase is always a multiple of `1/m`).
    pub fn phase_bucket(&self, k: &[i64], s: &[i64]) -> usize {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{ToPrimitive, Zero};
        let r = self.m_inv.mul_ivec(k);
        let phase: BigRational = r
            .iter()
            .zip(s)
            .map(|(ri, &si)| ri * BigRational::from_integer(BigInt::from(si)))
            .fold(BigRational::zero(), |a, b| a + b);
        let scaled = phase * BigRational::from_integer(BigInt::from(self.m as i64));
        debug_assert!(scaled.is_integer(), "phase is not a multiple of 1/m");
        let j = scaled.to_integer().to_i64().expect("phase overflow");
        j.rem_euclid(self.m as i64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::ivec_add;

    fn two_i2() -> IMat {
        IMat::from_rows(&[vec![2, 0], vec![0, 2]])
    }

    fn quincunx_like() -> IMat {
        IMat::from_rows(&[vec![1, -2], vec![2, -1]])
    }

    #[test]
    fn validates_example_matrices() {
        assert_eq!(DilationContext::new(two_i2(), None).unwrap().m, 4);
        assert_eq!(DilationContext::new(quincunx_like(), None).unwrap().m, 3);
    }

    #[test]
    fn rejects_unit_eigenvalue() {
        let m = IMat::from_rows(&[vec![1, 0], vec![0, 2]]);
        assert!(matches!(DilationContext::new(m, None), Err(Error::NotExpanding(_))));
    }

    #[test]
    fn rejects_singular() {
        let m = IMat::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(matches!(DilationContext::new(m, None), Err(Error::SingularMatrix)));
    }

    #[test]
    fn accepts_custom_digit_overrides() {
        let d1 = vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, -1]];
        assert!(DilationContext::new(two_i2(), Some(d1)).is_ok());
        let d2 = vec![vec![0, 0], vec![-1, 0], vec![1, 0]];
        assert!(DilationContext::new(quincunx_like(), Some(d2)).is_ok());
    }

    #[test]
    fn rejects_bad_overrides() {
        // wrong count
        let r = DilationContext::new(two_i2(), Some(vec![vec![0, 0], vec![0, 1]]));
        assert!(matches!(r, Err(Error::BadOverride(_))));
        // duplicate residue
        let r = DilationContext::new(
            two_i2(),
            Some(vec![vec![0, 0], vec![0, 1], vec![0, 3], vec![-1, -1]]),
        );
        assert!(matches!(r, Err(Error::BadOverride(_))));
        // missing zero digit
        let r = DilationContext::new(
            two_i2(),
            Some(vec![vec![0, 1], vec![0, 0], vec![-1, 0], vec![-1, -1]]),
        );
        assert!(matches!(r, Err(Error::BadOverride(_))));
    }

    #[test]
    fn canonical_digits_1d() {
        let m = IMat::from_rows(&[vec![2]]);
        let ctx = DilationContext::new(m, None).unwrap();
        assert_eq!(ctx.digits, vec![vec![0], vec![1]]);
    }

    #[test]
    fn coset_residue_reconstructs() {
        let ctx = DilationContext::new(two_i2(), Some(vec![
            vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, -1],
        ]))
        .unwrap();
        let (idx, beta) = ctx.coset_residue(&[3, 1]);
        assert_eq!(ctx.digits[idx], vec![-1, -1]);
        assert_eq!(beta, vec![2, 1]);
        for x in -10..=10i64 {
            for y in -10..=10i64 {
                let (idx, beta) = ctx.coset_residue(&[x, y]);
                let back = ivec_add(&ctx.m_mat.mul_ivec(&beta), &ctx.digits[idx]);
                assert_eq!(back, vec![x, y]);
            }
        }
    }

    #[test]
    fn canonical_digit_count_matches_det() {
        // a few fixed matrices with |det| in [2,12]
        for rows in [
            vec![vec![1, -2], vec![2, -1]],   // det 3
            vec![vec![2, 1], vec![0, 2]],     // det 4
            vec![vec![3, 1], vec![-1, 3]],    // det 10
            vec![vec![2, -1], vec![1, 2]],    // det 5
        ] {
            let m = IMat::from_rows(&rows);
            let det = m.det().abs() as usize;
            let ctx = DilationContext::new(m, None).unwrap();
            assert_eq!(ctx.digits.len(), det);
            assert_eq!(ctx.dual_digits.len(), det);
        }
    }
}
