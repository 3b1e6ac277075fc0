//! Filter bank pairs: mask families with orbit-indexed wavelet labels,
//! and polynomial matrices for the polyphase duality identities.

use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::scalar::Backend;
use crate::trigpoly::TrigPoly;

/// Role of a mask within a bank.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum WaveletLabel {
    /// The refinable (low-pass) mask, always index 0.
    Refinable,
    /// Wavelet mask at orbit `p`, transversal position `i`.
    #[serde(rename = "orbit")]
    Orbit { p: usize, i: usize },
    /// The extra mask appended when the correction function differs from 1.
    LastRow,
}

/// Which construction produced a bank; drives the symmetry check suite.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum Provenance {
    Framelike,
    FramelikeReduced,
    Lifted,
    Frames,
    SymmetrizedFramelike,
    SymmetrizedLifted,
    SymmetrizedFrames,
}

/// Primal and dual mask families `{m_v}`, `{m~_v}`, `v = 0..r`.
#[derive(Clone, Debug)]
pub struct FilterBankPair {
    pub backend: Backend,
    pub primal: Vec<TrigPoly>,
    pub dual: Vec<TrigPoly>,
    pub labels: Vec<WaveletLabel>,
    /// Extra columns completing the square extension, primal side; empty
    /// when the construction does not materialize a square matrix.
    pub extra_primal_cols: Vec<Vec<TrigPoly>>,
    /// Dual-side extra columns.
    pub extra_dual_cols: Vec<Vec<TrigPoly>>,
    pub provenance: Provenance,
    /// Human-readable note on the scaling convention in force.
    pub normalization_note: String,
}

impl FilterBankPair {
    /// Number of wavelet masks (bank size minus the refinable mask).
    pub fn num_wavelets(&self) -> usize {
        self.primal.len() - 1
    }

    pub fn wavelets(&self) -> impl Iterator<Item = (usize, &WaveletLabel, &TrigPoly, &TrigPoly)> {
        (1..self.primal.len()).map(move |v| (v, &self.labels[v], &self.primal[v], &self.dual[v]))
    }

    /// Polyphase matrix of one side: rows are masks, columns digits.
    pub fn polyphase(&self, side_primal: bool, dil: &DilationContext) -> PolyMatrix {
        let masks = if side_primal { &self.primal } else { &self.dual };
        let entries = masks
            .iter()
            .flat_map(|m| m.polyphase_decompose(dil))
            .collect();
        PolyMatrix { rows: masks.len(), cols: dil.m, entries }
    }

    /// Exact duality identity `M* M~ = I_m` on the polyphase matrices.
    pub fn duality_holds(&self, dil: &DilationContext, tol: f64) -> Result<bool> {
        let p = self.polyphase(true, dil);
        let pt = self.polyphase(false, dil);
        let prod = p.conj_transpose().mul(&pt)?;
        Ok(prod.is_identity(tol))
    }

    /// Square extension matrices when the extra columns are present:
    /// `N = [polyphase | extras]` and the identity `N N~* = I`.
    pub fn square_extension_holds(&self, dil: &DilationContext, tol: f64) -> Result<Option<bool>> {
        if self.extra_primal_cols.is_empty() || self.extra_dual_cols.is_empty() {
            return Ok(None);
        }
        let mut n = self.polyphase(true, dil);
        for col in &self.extra_primal_cols {
            n = n.append_col(col)?;
        }
        let mut nt = self.polyphase(false, dil);
        for col in &self.extra_dual_cols {
            nt = nt.append_col(col)?;
        }
        let prod = n.mul(&nt.conj_transpose())?;
        Ok(Some(prod.is_identity(tol)))
    }

    /// Copy of the bank with every mask converted to the float backend.
    pub fn to_float(&self) -> FilterBankPair {
        let conv = |v: &Vec<TrigPoly>| v.iter().map(|t| t.to_float()).collect::<Vec<_>>();
        FilterBankPair {
            backend: Backend::Float,
            primal: conv(&self.primal),
            dual: conv(&self.dual),
            labels: self.labels.clone(),
            extra_primal_cols: self.extra_primal_cols.iter().map(conv).collect(),
            extra_dual_cols: self.extra_dual_cols.iter().map(conv).collect(),
            provenance: self.provenance,
            normalization_note: self.normalization_note.clone(),
        }
    }
}

/// Dense matrix of trigonometric polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<TrigPoly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<TrigPoly>>) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn conj_transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.at(i, j).conjugate());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::InternalInconsistency("matrix shape mismatch".into()));
        }
        let dim = self.entries[0].dim;
        let backend = self.entries[0].backend;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TrigPoly::zero(dim, backend);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: other.cols, entries })
    }

    /// Identity test: exact on the exact backend, `tol` elsewhere.
    pub fn is_identity(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let dim = self.entries[0].dim;
        let backend = self.entries[0].backend;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j {
                    TrigPoly::one(dim, backend)
                } else {
                    TrigPoly::zero(dim, backend)
                };
                let ok = match backend {
                    Backend::Exact => *self.at(i, j) == expect,
                    Backend::Float => self.at(i, j).approx_eq(&expect, tol),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Largest coefficient deviation from the identity matrix.
    pub fn identity_residual(&self) -> f64 {
        let dim = self.entries[0].dim;
        let backend = self.entries[0].backend;
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                let expect = if i == j {
                    TrigPoly::one(dim, backend)
                } else {
                    TrigPoly::zero(dim, backend)
                };
                if let Ok(diff) = self.at(i, j).sub(&expect) {
                    for (_, c) in diff.terms() {
                        worst = worst.max(c.to_complex().norm());
                    }
                }
            }
        }
        worst
    }

    pub fn append_col(&self, col: &[TrigPoly]) -> Result<PolyMatrix> {
        if col.len() != self.rows {
            return Err(Error::InternalInconsistency("extra column length mismatch".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
            entries.push(col[i].clone());
        }
        Ok(PolyMatrix { rows: self.rows, cols: self.cols + 1, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Coeff;

    fn c(n: i64, d: i64) -> TrigPoly {
        TrigPoly::constant(1, Coeff::rational(n, d))
    }

    #[test]
    fn matrix_product_and_identity() {
        let a = PolyMatrix::from_rows(vec![
            vec![c(1, 1), c(2, 1)],
            vec![c(0, 1), c(1, 1)],
        ]);
        let b = PolyMatrix::from_rows(vec![
            vec![c(1, 1), c(-2, 1)],
            vec![c(0, 1), c(1, 1)],
        ]);
        assert!(a.mul(&b).unwrap().is_identity(0.0));
        assert!(!a.is_identity(0.0));
    }

    #[test]
    fn conj_transpose_negates_exponents() {
        let t = TrigPoly::monomial(vec![2], Coeff::rational(1, 3));
        let m = PolyMatrix::from_rows(vec![vec![t.clone(), c(1, 1)]]);
        let ct = m.conj_transpose();
        assert_eq!(ct.rows, 2);
        assert_eq!(ct.at(0, 0).coeff(&[-2]), Coeff::rational(1, 3));
    }
}
