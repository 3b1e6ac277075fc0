//! Worked example data: the hexagonal interpolatory setup on `2*I_2` and
//! the point-symmetric setup on the determinant-3 dilation, with their
//! published mask tables. Used by tests and shipped fixture files.
//!
//! Grid helpers read a matrix layout with rows running down decreasing
//! second coordinate and columns running right along the first coordinate.

use crate::lattice::DilationContext;
use crate::mat::{rvec_zero, IMat};
use crate::scalar::{Backend, Coeff};
use crate::symmetry::{close_generators, SymmetryContext, CLOSURE_CAP};
use crate::trigpoly::TrigPoly;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Build a polynomial from a 2d grid: entry `(r, c)` is the coefficient at
/// exponent `(x0 + c, y_top - r)`, values as `(numerator, denominator)`.
pub fn grid_poly(x0: i64, y_top: i64, rows: &[Vec<(i64, i64)>]) -> TrigPoly {
    let mut terms = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        for (c, &(num, den)) in row.iter().enumerate() {
            if num != 0 {
                terms.push((vec![x0 + c as i64, y_top - r as i64], Coeff::rational(num, den)));
            }
        }
    }
    TrigPoly::from_terms(2, Backend::Exact, terms).expect("valid grid")
}

/// Hexagonal symmetry group of order 12.
pub fn hexagonal_group() -> Vec<IMat> {
    let gens = [
        IMat::from_rows(&[vec![1, -1], vec![1, 0]]),
        IMat::from_rows(&[vec![0, 1], vec![1, 0]]),
    ];
    close_generators(&gens, CLOSURE_CAP).expect("finite group")
}

/// Hexagonal setup: `M = 2 I_2`, center 0, the four digits of the example.
pub fn ex1_contexts() -> (DilationContext, SymmetryContext) {
    let dil = DilationContext::new(
        IMat::from_rows(&[vec![2, 0], vec![0, 2]]),
        Some(vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, -1]]),
    )
    .expect("valid dilation");
    let sym = SymmetryContext::validate(hexagonal_group(), &dil, rvec_zero(2)).expect("valid group");
    (dil, sym)
}

/// Interpolatory hexagonally symmetric mask with sum rule order 3,
/// support `[-3,3]^2`.
pub fn ex1_m0() -> TrigPoly {
    grid_poly(
        -3,
        3,
        &[
            vec![(0, 1), (0, 1), (0, 1), (-1, 64), (0, 1), (0, 1), (-1, 64)],
            vec![(0, 1); 7],
            vec![(0, 1), (0, 1), (0, 1), (9, 64), (9, 64), (0, 1), (0, 1)],
            vec![(-1, 64), (0, 1), (9, 64), (1, 4), (9, 64), (0, 1), (-1, 64)],
            vec![(0, 1), (0, 1), (9, 64), (9, 64), (0, 1), (0, 1), (0, 1)],
            vec![(0, 1); 7],
            vec![(-1, 64), (0, 1), (0, 1), (-1, 64), (0, 1), (0, 1), (0, 1)],
        ],
    )
}

/// The published 9x7 wavelet table of the hexagonal example, support
/// `[-3,3] x [-4,4]`.
pub fn ex1_published_wavelet_table() -> TrigPoly {
    grid_poly(
        -3,
        4,
        &[
            vec![(0, 1), (0, 1), (0, 1), (1, 512), (0, 1), (0, 1), (1, 512)],
            vec![(0, 1); 7],
            vec![(0, 1), (0, 1), (0, 1), (-1, 64), (-9, 512), (0, 1), (1, 512)],
            vec![(1, 512), (0, 1), (-9, 512), (-1, 32), (-9, 512), (0, 1), (1, 512)],
            vec![(0, 1), (0, 1), (-9, 512), (55, 256), (-9, 512), (0, 1), (0, 1)],
            vec![(1, 512), (0, 1), (-9, 512), (-1, 32), (-9, 512), (0, 1), (1, 512)],
            vec![(1, 512), (0, 1), (-9, 512), (-1, 64), (0, 1), (0, 1), (0, 1)],
            vec![(0, 1); 7],
            vec![(1, 512), (0, 1), (0, 1), (1, 512), (0, 1), (0, 1), (0, 1)],
        ],
    )
}

/// Lifting polynomials of the hexagonal example.
pub fn ex1_lifting_polys() -> Vec<TrigPoly> {
    let l = |k: Vec<i64>| {
        TrigPoly::from_terms(
            2,
            Backend::Exact,
            [(vec![0, 0], Coeff::rational(-1, 8)), (k, Coeff::rational(-1, 8))],
        )
        .unwrap()
    };
    vec![l(vec![0, 1]), l(vec![-1, 0]), l(vec![-1, -1])]
}

/// The published 9x9 lifted dual refinable mask, support `[-4,4]^2`.
pub fn ex1_published_lifted_dual() -> TrigPoly {
    grid_poly(
        -4,
        4,
        &[
            vec![(0, 1), (0, 1), (0, 1), (0, 1), (1, 128), (0, 1), (0, 1), (0, 1), (1, 128)],
            vec![(0, 1); 9],
            vec![(0, 1), (0, 1), (0, 1), (0, 1), (-1, 16), (0, 1), (-1, 16), (0, 1), (0, 1)],
            vec![(0, 1), (0, 1), (0, 1), (0, 1), (1, 8), (1, 8), (0, 1), (0, 1), (0, 1)],
            vec![
                (1, 128),
                (0, 1),
                (-1, 16),
                (1, 8),
                (37, 64),
                (1, 8),
                (-1, 16),
                (0, 1),
                (1, 128),
            ],
            vec![(0, 1), (0, 1), (0, 1), (1, 8), (1, 8), (0, 1), (0, 1), (0, 1), (0, 1)],
            vec![(0, 1), (0, 1), (-1, 16), (0, 1), (-1, 16), (0, 1), (0, 1), (0, 1), (0, 1)],
            vec![(0, 1); 9],
            vec![(1, 128), (0, 1), (0, 1), (0, 1), (1, 128), (0, 1), (0, 1), (0, 1), (0, 1)],
        ],
    )
}

/// Point symmetry setup: `H = {+-I}`, `M = [[1,-2],[2,-1]]`, center `(1/2, 0)`.
pub fn ex2_contexts() -> (DilationContext, SymmetryContext) {
    let dil = DilationContext::new(
        IMat::from_rows(&[vec![1, -2], vec![2, -1]]),
        Some(vec![vec![0, 0], vec![-1, 0], vec![1, 0]]),
    )
    .expect("valid dilation");
    let center = vec![
        BigRational::new(BigInt::from(1), BigInt::from(2)),
        BigRational::from_integer(BigInt::from(0)),
    ];
    let group = vec![IMat::identity(2), IMat::identity(2).neg()];
    let sym = SymmetryContext::validate(group, &dil, center).expect("valid group");
    (dil, sym)
}

/// Point-symmetric mask with sum rule order 2, support `[-1,2] x [-2,2]`.
pub fn ex2_m0() -> TrigPoly {
    grid_poly(
        -1,
        2,
        &[
            vec![(0, 1), (-1, 12), (0, 1), (1, 18)],
            vec![(0, 1), (0, 1), (1, 6), (1, 9)],
            vec![(1, 12), (1, 6), (1, 6), (1, 12)],
            vec![(1, 9), (1, 6), (0, 1), (0, 1)],
            vec![(1, 18), (0, 1), (-1, 12), (0, 1)],
        ],
    )
}

/// The utility dual mask of the point-symmetric example, sum rule order 1.
pub fn ex2_utility_dual() -> TrigPoly {
    TrigPoly::from_terms(
        2,
        Backend::Exact,
        [
            (vec![0, 0], Coeff::rational(1, 3)),
            (vec![1, 0], Coeff::rational(1, 3)),
            (vec![0, -1], Coeff::rational(1, 6)),
            (vec![1, 1], Coeff::rational(1, 6)),
        ],
    )
    .unwrap()
}

/// The published 9x6 dual mask produced by the direct frame algorithm,
/// support `[-2,3] x [-4,4]`.
pub fn ex2_published_dual() -> TrigPoly {
    grid_poly(
        -2,
        4,
        &[
            vec![(0, 1), (0, 1), (0, 1), (1, 144), (0, 1), (0, 1)],
            vec![(0, 1), (0, 1), (1, 72), (1, 72), (-5, 216), (0, 1)],
            vec![(0, 1), (0, 1), (1, 144), (-5, 108), (-5, 108), (-11, 432)],
            vec![(0, 1), (0, 1), (0, 1), (49, 216), (-11, 216), (-11, 216)],
            vec![(0, 1), (-11, 432), (1, 2), (1, 2), (-11, 432), (0, 1)],
            vec![(-11, 216), (-11, 216), (49, 216), (0, 1), (0, 1), (0, 1)],
            vec![(-11, 432), (-5, 108), (-5, 108), (1, 144), (0, 1), (0, 1)],
            vec![(0, 1), (-5, 216), (1, 72), (1, 72), (0, 1), (0, 1)],
            vec![(0, 1), (0, 1), (1, 144), (0, 1), (0, 1), (0, 1)],
        ],
    )
}
