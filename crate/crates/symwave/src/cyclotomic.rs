//! Cyclotomic polynomials over the rationals and the exact zero test for
//! rational combinations of roots of unity.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense univariate polynomial, index = degree.
fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &lead;
        quot[i - dd] = f.clone();
        for (j, dc) in den.iter().enumerate() {
            let s = &f * dc;
            rem[i - dd + j] -= s;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// `Phi_n(x)` computed by dividing `x^n - 1` by the cyclotomics of the
/// proper divisors.
pub fn cyclotomic(n: usize) -> Vec<BigRational> {
    assert!(n >= 1);
    if n == 1 {
        return vec![-BigRational::one(), BigRational::one()];
    }
    let mut num = vec![BigRational::zero(); n + 1];
    num[0] = -BigRational::one();
    num[n] = BigRational::one();
    let mut acc = num;
    for d in 1..n {
        if n % d == 0 {
            acc = poly_div_exact(&acc, &cyclotomic(d));
        }
    }
    acc
}

/// Remainder of `sum_j v_j x^j` modulo `Phi_n`; the sum `sum_j v_j zeta_n^j`
/// vanishes iff the remainder is identically zero.
pub fn reduce_mod_cyclotomic(buckets: &[BigRational], n: usize) -> Vec<BigRational> {
    let phi = cyclotomic(n);
    let deg = phi.len() - 1;
    let mut rem = buckets.to_vec();
    if rem.len() < deg {
        rem.resize(deg, BigRational::zero());
    }
    for i in (deg..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = rem[i].clone(); // phi is monic
        for (j, c) in phi.iter().enumerate() {
            let s = &f * c;
            rem[i - deg + j] -= s;
        }
    }
    rem.truncate(deg);
    rem
}

/// Exact test of `sum_j v_j e^{2 pi i j / n} == 0` for rational `v_j`.
pub fn root_of_unity_sum_is_zero(buckets: &[BigRational], n: usize) -> bool {
    reduce_mod_cyclotomic(buckets, n).iter().all(|c| c.is_zero())
}
