//! Dense two-phase simplex over exact rationals with Bland's rule. All
//! variables are nonnegative.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
    Feasibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub bound: BigRational,
}

impl Row {
    pub fn new(coeffs: Vec<BigRational>, rel: Relation, bound: BigRational) -> Row {
        Row { coeffs, rel, bound }
    }

    pub fn holds(&self, x: &[BigRational]) -> bool {
        let lhs: BigRational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.rel {
            Relation::Le => lhs <= self.bound,
            Relation::Eq => lhs == self.bound,
            Relation::Ge => lhs >= self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub vars: usize,
    pub rows: Vec<Row>,
    pub objective: Option<Vec<BigRational>>,
    pub sense: Sense,
}

impl LinearProgram {
    pub fn feasibility(vars: usize, rows: Vec<Row>) -> LinearProgram {
        LinearProgram {
            vars,
            rows,
            objective: None,
            sense: Sense::Feasibility,
        }
    }

    pub fn optimize(vars: usize, rows: Vec<Row>, objective: Vec<BigRational>, sense: Sense) -> LinearProgram {
        LinearProgram {
            vars,
            rows,
            objective: Some(objective),
            sense,
        }
    }

    /// Every row holds at `x` and `x ≥ 0`.
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.vars && x.iter().all(|v| !v.is_negative()) && self.rows.iter().all(|r| r.holds(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub witness: Option<Vec<BigRational>>,
    pub optimum: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RowWidth { row: usize, expected: usize, found: usize },
    #[error("objective has {found} coefficients, expected {expected}")]
    ObjectiveWidth { expected: usize, found: usize },
    #[error("an objective is required to optimize")]
    MissingObjective,
    #[error("witness failed re-verification")]
    Verification,
}

struct Tableau {
    /// `m` rows of `cols + 1` entries; the last is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rows)
            .map(|(&b, row)| &cost[b] * &row[self.cols])
            .sum()
    }

    /// Minimizes `cost` over columns `< allowed`. Returns false if unbounded.
    fn minimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = &cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| &cost[b] * &row[j])
                        .sum::<BigRational>();
                reduced.is_negative()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[c];
                let better = match &leaving {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn solution(&self, vars: usize) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); vars];
        for (&b, row) in self.basis.iter().zip(&self.rows) {
            if b < vars {
                x[b] = row[self.cols].clone();
            }
        }
        x
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    for (i, row) in lp.rows.iter().enumerate() {
        if row.coeffs.len() != lp.vars {
            return Err(LpError::RowWidth {
                row: i,
                expected: lp.vars,
                found: row.coeffs.len(),
            });
        }
    }
    let objective = match (&lp.objective, lp.sense) {
        (_, Sense::Feasibility) => None,
        (None, _) => return Err(LpError::MissingObjective),
        (Some(c), _) if c.len() != lp.vars => {
            return Err(LpError::ObjectiveWidth {
                expected: lp.vars,
                found: c.len(),
            })
        }
        (Some(c), _) => Some(c),
    };

    // Columns: originals, one slack or surplus per inequality, then one
    // artificial per row that lacks a slack basis.
    let m = lp.rows.len();
    let normalized: Vec<(Vec<BigRational>, Relation, BigRational)> = lp
        .rows
        .iter()
        .map(|r| {
            if r.bound.is_negative() {
                let flip = match r.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                    Relation::Ge => Relation::Le,
                };
                (r.coeffs.iter().map(|a| -a).collect(), flip, -&r.bound)
            } else {
                (r.coeffs.clone(), r.rel, r.bound.clone())
            }
        })
        .collect();
    let slacks = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = normalized.iter().filter(|r| r.1 != Relation::Le).count();
    let structural = lp.vars + slacks;
    let cols = structural + artificials;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (lp.vars, structural);
    for (coeffs, rel, bound) in normalized {
        let mut row = vec![BigRational::zero(); cols + 1];
        row[..lp.vars].clone_from_slice(&coeffs);
        row[cols] = bound;
        match rel {
            Relation::Le => {
                row[s] = BigRational::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -BigRational::one();
                s += 1;
                row[a] = BigRational::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = BigRational::one();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, cols };

    let phase1: Vec<BigRational> = (0..cols)
        .map(|j| if j >= structural { BigRational::one() } else { BigRational::zero() })
        .collect();
    t.minimize(&phase1, cols);
    if t.value(&phase1).is_positive() {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            witness: None,
            optimum: None,
        });
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= structural {
            match (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let outcome = match objective {
        None => LpOutcome {
            status: LpStatus::Feasible,
            witness: Some(t.solution(lp.vars)),
            optimum: None,
        },
        Some(c) => {
            let flip = lp.sense == Sense::Maximize;
            let cost: Vec<BigRational> = (0..cols)
                .map(|j| match c.get(j) {
                    Some(v) if flip => -v,
                    Some(v) => v.clone(),
                    None => BigRational::zero(),
                })
                .collect();
            if !t.minimize(&cost, structural) {
                return Ok(LpOutcome {
                    status: LpStatus::Unbounded,
                    witness: None,
                    optimum: None,
                });
            }
            let x = t.solution(lp.vars);
            let value: BigRational = c.iter().zip(&x).map(|(a, v)| a * v).sum();
            LpOutcome {
                status: LpStatus::Optimal,
                witness: Some(x),
                optimum: Some(value),
            }
        }
    };
    match &outcome.witness {
        Some(x) if !lp.satisfied_by(x) => Err(LpError::Verification),
        _ => Ok(outcome),
    }
}
