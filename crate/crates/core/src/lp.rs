//! Dense two-phase simplex over exact rationals.
//!
//! Small problems only: the tableau is stored densely and every entry is a
//! `BigRational`. Pivoting follows Bland's rule (lowest eligible index for
//! both the entering and the leaving variable), so the method terminates
//! without any anti-cycling perturbation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// `minimize c·x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

struct Tableau {
    /// rows x (cols + 1); the last column is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = other[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B B⁻¹ A_j` for the columns in `allowed`.
    fn reduced_costs(&self, cost: &[BigRational], allowed: usize) -> Vec<BigRational> {
        (0..allowed)
            .map(|j| {
                let mut rc = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    let a = &self.rows[r][j];
                    if !a.is_zero() && !cost[b].is_zero() {
                        rc -= &cost[b] * a;
                    }
                }
                rc
            })
            .collect()
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        let rhs = self.cols;
        self.basis
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (r, &b)| acc + &cost[b] * &self.rows[r][rhs])
    }

    /// Minimizes `cost` using only the first `allowed` columns as entering
    /// candidates. Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        let rhs = self.cols;
        loop {
            let rc = self.reduced_costs(cost, allowed);
            let Some(enter) = rc.iter().position(|v| v.is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves the program exactly.
///
/// # Panics
///
/// Panics if a constraint's coefficient vector does not match the objective
/// length.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    for c in &lp.constraints {
        assert_eq!(c.coeffs.len(), n, "constraint width must match objective");
    }

    // Normalize so every right-hand side is nonnegative.
    let rows: Vec<(Vec<BigRational>, Relation, BigRational)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let first_art = n + n_slack;

    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cols,
    };
    let (mut slack, mut art) = (n, first_art);
    for (coeffs, relation, rhs) in rows {
        let mut row = vec![BigRational::zero(); cols + 1];
        row[..n].clone_from_slice(&coeffs);
        row[cols] = rhs;
        match relation {
            Relation::Le => {
                row[slack] = BigRational::one();
                tableau.basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -BigRational::one();
                row[art] = BigRational::one();
                tableau.basis.push(art);
                slack += 1;
                art += 1;
            }
            Relation::Eq => {
                row[art] = BigRational::one();
                tableau.basis.push(art);
                art += 1;
            }
        }
        tableau.rows.push(row);
    }

    if n_art > 0 {
        let phase_one: Vec<BigRational> = (0..cols)
            .map(|j| {
                if j >= first_art {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        tableau.optimize(&phase_one, cols);
        if tableau.objective_value(&phase_one).is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop rows that
        // turn out to be redundant.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= first_art {
                match (0..first_art).find(|&j| !tableau.rows[r][j].is_zero()) {
                    Some(j) => tableau.pivot(r, j),
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![BigRational::zero(); cols];
    cost[..n].clone_from_slice(&lp.objective);
    if !tableau.optimize(&cost, first_art) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b < n {
            x[b] = tableau.rows[r][cols].clone();
        }
    }
    LpOutcome::Optimal {
        value: tableau.objective_value(&cost),
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[i64], relation: Relation, rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&v| int(v)).collect(),
            relation,
            rhs: int(rhs),
        }
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let lp = LinearProgram {
            objective: vec![int(-3), int(-5)],
            constraints: vec![
                row(&[1, 0], Relation::Le, 4),
                row(&[0, 2], Relation::Le, 12),
                row(&[3, 2], Relation::Le, 18),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, int(-36));
                assert_eq!(x, vec![int(2), int(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn covering_program_with_fractional_optimum() {
        // Fractional coloring of the 5-cycle over its 5 maximal independent sets.
        let sets = [[0, 2], [1, 3], [2, 4], [3, 0], [4, 1]];
        let constraints = (0..5)
            .map(|v| Constraint {
                coeffs: sets
                    .iter()
                    .map(|s| if s.contains(&v) { int(1) } else { int(0) })
                    .collect(),
                relation: Relation::Ge,
                rhs: int(1),
            })
            .collect();
        let lp = LinearProgram {
            objective: vec![int(1); 5],
            constraints,
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(5, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x + y  s.t. x + y = 3, -x <= -1  ->  3
        let lp = LinearProgram {
            objective: vec![int(1), int(1)],
            constraints: vec![row(&[1, 1], Relation::Eq, 3), row(&[-1, 0], Relation::Le, -1)],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, int(3));
                assert!(x[0] >= int(1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            objective: vec![int(1)],
            constraints: vec![row(&[1], Relation::Le, 1), row(&[1], Relation::Ge, 2)],
        };
        assert_eq!(solve(&infeasible), LpOutcome::Infeasible);
        let unbounded = LinearProgram {
            objective: vec![int(-1), int(0)],
            constraints: vec![row(&[1, -1], Relation::Le, 1)],
        };
        assert_eq!(solve(&unbounded), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let lp = LinearProgram {
            objective: vec![int(2), int(1)],
            constraints: vec![row(&[1, 1], Relation::Eq, 2), row(&[2, 2], Relation::Eq, 4)],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(2)),
            other => panic!("{other:?}"),
        }
    }
}
