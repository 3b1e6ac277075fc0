//! Small dense integer and rational matrices used for dilation matrices,
//! symmetry-group elements and exact coordinate changes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IVec = Vec<i64>;
pub type RVec = Vec<BigRational>;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IMat {
    pub d: usize,
    pub e: Vec<i64>,
}

impl IMat {
    pub fn new(d: usize, e: Vec<i64>) -> Self {
        assert_eq!(e.len(), d * d);
        IMat { d, e }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let d = rows.len();
        let mut e = Vec::with_capacity(d * d);
        for r in rows {
            assert_eq!(r.len(), d, "matrix must be square");
            e.extend_from_slice(r);
        }
        IMat { d, e }
    }

    pub fn identity(d: usize) -> Self {
        let mut e = vec![0; d * d];
        for i in 0..d {
            e[i * d + i] = 1;
        }
        IMat { d, e }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.d).map(|i| self.e[i * self.d..(i + 1) * self.d].to_vec()).collect()
    }

    pub fn transpose(&self) -> IMat {
        let d = self.d;
        let mut e = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                e[j * d + i] = self.at(i, j);
            }
        }
        IMat { d, e }
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let mut e = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s: i128 = 0;
                for k in 0..d {
                    s += self.at(i, k) as i128 * other.at(k, j) as i128;
                }
                e[i * d + j] = i64::try_from(s).expect("matrix entry overflow");
            }
        }
        IMat { d, e }
    }

    pub fn neg(&self) -> IMat {
        IMat { d: self.d, e: self.e.iter().map(|x| -x).collect() }
    }

    pub fn mul_ivec(&self, v: &[i64]) -> IVec {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul_rvec(&self, v: &[BigRational]) -> RVec {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| BigRational::from_integer(BigInt::from(self.at(i, j))) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn det(&self) -> i128 {
        let d = self.d;
        let mut m: Vec<BigRational> =
            self.e.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let mut det = BigRational::one();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !m[r * d + col].is_zero());
            let Some(p) = pivot else { return 0 };
            if p != col {
                for j in 0..d {
                    m.swap(p * d + j, col * d + j);
                }
                det = -det;
            }
            let pv = m[col * d + col].clone();
            det *= &pv;
            for r in col + 1..d {
                let f = &m[r * d + col] / &pv;
                for j in col..d {
                    let sub = &f * &m[col * d + j];
                    m[r * d + j] -= sub;
                }
            }
        }
        assert!(det.is_integer());
        let n = det.to_integer();
        let digits = n.to_string();
        digits.parse::<i128>().expect("determinant overflow")
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Exact inverse over the rationals; `None` when singular.
    pub fn inverse(&self) -> Option<RMat> {
        RMat::from_imat(self).inverse()
    }
}

/// Square rational matrix, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct RMat {
    pub d: usize,
    pub e: Vec<BigRational>,
}

impl RMat {
    pub fn from_imat(m: &IMat) -> Self {
        RMat {
            d: m.d,
            e: m.e.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.e[i * self.d + j]
    }

    pub fn inverse(&self) -> Option<RMat> {
        let d = self.d;
        let mut a = self.e.clone();
        let mut inv: Vec<BigRational> = RMat::identity(d).e;
        for col in 0..d {
            let p = (col..d).find(|&r| !a[r * d + col].is_zero())?;
            if p != col {
                for j in 0..d {
                    a.swap(p * d + j, col * d + j);
                    inv.swap(p * d + j, col * d + j);
                }
            }
            let pv = a[col * d + col].clone();
            for j in 0..d {
                a[col * d + j] /= &pv;
                inv[col * d + j] /= &pv;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let f = a[r * d + col].clone();
                for j in 0..d {
                    let s1 = &f * &a[col * d + j];
                    a[r * d + j] -= s1;
                    let s2 = &f * &inv[col * d + j];
                    inv[r * d + j] -= s2;
                }
            }
        }
        Some(RMat { d, e: inv })
    }

    pub fn identity(d: usize) -> RMat {
        let mut e = vec![BigRational::zero(); d * d];
        for i in 0..d {
            e[i * d + i] = BigRational::one();
        }
        RMat { d, e }
    }

    pub fn mul_ivec(&self, v: &[i64]) -> RVec {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| self.at(i, j) * BigRational::from_integer(BigInt::from(v[j])))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn mul_rvec(&self, v: &[BigRational]) -> RVec {
        assert_eq!(v.len(), self.d);
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| self.at(i, j) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }
}

pub fn ivec_add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn ivec_sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn ivec_neg(a: &[i64]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn rvec_zero(d: usize) -> RVec {
    vec![BigRational::zero(); d]
}

pub fn rvec_sub(a: &[BigRational], b: &[BigRational]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn rvec_from_ivec(v: &[i64]) -> RVec {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Integer part extraction: `Some` when every entry is an integer.
pub fn rvec_to_ivec(v: &[BigRational]) -> Option<IVec> {
    v.iter()
        .map(|x| {
            x.is_integer().then(|| {
                let s = x.to_integer().to_string();
                s.parse::<i64>().expect("vector entry overflow")
            })
        })
        .collect()
}
