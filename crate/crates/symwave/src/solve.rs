//! Exact Gaussian elimination over the quadratic coefficient field.

use crate::scalar::Quad;

/// Dense linear system `A x = b` accumulated row by row.
pub struct LinearSystem {
    pub n_vars: usize,
    rows: Vec<(Vec<Quad>, Quad)>,
}

/// Solver outcome: a particular solution (free variables zero) or the
/// number of inconsistent rows left after elimination.
pub enum Solved {
    Solution(Vec<Quad>),
    Inconsistent { rank_deficit: usize },
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem { n_vars, rows: Vec::new() }
    }

    pub fn push_row(&mut self, coeffs: Vec<Quad>, rhs: Quad) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push((coeffs, rhs));
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn solve(&self) -> Solved {
        let n = self.n_vars;
        let mut rows = self.rows.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
                continue;
            };
            rows.swap(row, p);
            let pv = rows[row].0[col].clone();
            for c in col..n {
                rows[row].0[c] = rows[row].0[c].div(&pv);
            }
            rows[row].1 = rows[row].1.div(&pv);
            for r in 0..rows.len() {
                if r == row || rows[r].0[col].is_zero() {
                    continue;
                }
                let f = rows[r].0[col].clone();
                for c in col..n {
                    let s = f.mul(&rows[row].0[c]);
                    rows[r].0[c] = rows[r].0[c].sub(&s);
                }
                let s = f.mul(&rows[row].1);
                rows[r].1 = rows[r].1.sub(&s);
            }
            pivot_col_of_row.push(col);
            row += 1;
            if row == rows.len() {
                break;
            }
        }
        let bad = rows[row..].iter().filter(|(_, rhs)| !rhs.is_zero()).count();
        if bad > 0 {
            return Solved::Inconsistent { rank_deficit: bad };
        }
        let mut x = vec![Quad::from_int(0); n];
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            x[col] = rows[r].1.clone();
        }
        Solved::Solution(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Quad {
        Quad::ratio(n, d)
    }

    #[test]
    fn solves_square_system() {
        // x + 2y = 5, 3x - y = 1 -> x = 1, y = 2
        let mut sys = LinearSystem::new(2);
        sys.push_row(vec![q(1, 1), q(2, 1)], q(5, 1));
        sys.push_row(vec![q(3, 1), q(-1, 1)], q(1, 1));
        match sys.solve() {
            Solved::Solution(x) => assert_eq!(x, vec![q(1, 1), q(2, 1)]),
            Solved::Inconsistent { .. } => panic!("should be solvable"),
        }
    }

    #[test]
    fn underdetermined_sets_free_vars_to_zero() {
        let mut sys = LinearSystem::new(3);
        sys.push_row(vec![q(1, 1), q(1, 1), q(0, 1)], q(2, 1));
        match sys.solve() {
            Solved::Solution(x) => {
                assert_eq!(x[0], q(2, 1));
                assert_eq!(x[1], q(0, 1));
                assert_eq!(x[2], q(0, 1));
            }
            Solved::Inconsistent { .. } => panic!("should be solvable"),
        }
    }

    #[test]
    fn detects_inconsistency() {
        let mut sys = LinearSystem::new(1);
        sys.push_row(vec![q(1, 1)], q(1, 1));
        sys.push_row(vec![q(1, 1)], q(2, 1));
        sys.push_row(vec![q(2, 1)], q(7, 1));
        match sys.solve() {
            Solved::Solution(_) => panic!("should be inconsistent"),
            Solved::Inconsistent { rank_deficit } => assert_eq!(rank_deficit, 2),
        }
    }

    #[test]
    fn quadratic_field_pivots() {
        // sqrt(3) * x = 3 -> x = sqrt(3)
        let mut sys = LinearSystem::new(1);
        sys.push_row(vec![Quad::sqrt_of(3)], q(3, 1));
        match sys.solve() {
            Solved::Solution(x) => assert_eq!(x[0], Quad::sqrt_of(3)),
            Solved::Inconsistent { .. } => panic!("should be solvable"),
        }
    }
}
