//! Exact linear programming over the rationals.
//!
//! A dense two-phase tableau simplex with Bland's anti-cycling rule. Every
//! entry is an exact rational, so the reported optimum is exact and
//! termination is guaranteed. Problem sizes here are tiny (tens of rows),
//! which makes the dense tableau the right trade.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exact::{rat_int, Rational};

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpOp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct LpConstraint {
    coeffs: Vec<Rational>,
    op: LpOp,
    rhs: Rational,
}

/// A linear program: minimize `objective · x` subject to linear constraints
/// and optional per-variable bounds. Variables are free unless bounded.
#[derive(Debug, Clone)]
pub struct RationalLP {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<LpConstraint>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

/// Error from LP construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("a linear program needs at least one variable")]
    NoVariables,
    #[error("constraint {0} has the wrong number of coefficients")]
    WrongCoefficientCount(usize),
    #[error("variable index {0} out of range")]
    VarOutOfRange(usize),
}

/// Exact optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: Rational,
    pub values: Vec<Rational>,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl RationalLP {
    /// Starts a minimization problem.
    pub fn minimize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            num_vars: n,
            objective,
            constraints: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `coeffs · x (op) rhs`.
    pub fn constraint(&mut self, coeffs: Vec<Rational>, op: LpOp, rhs: Rational) -> &mut Self {
        self.constraints.push(LpConstraint { coeffs, op, rhs });
        self
    }

    /// Bounds a variable; `None` leaves the side unbounded.
    pub fn bound(
        &mut self,
        var: usize,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.num_vars == 0 {
            return Err(LpError::NoVariables);
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::WrongCoefficientCount(i));
            }
        }
        Ok(())
    }
}

/// How an original variable maps onto non-negative standard-form columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = lower + y`, `y >= 0`.
    Shifted { col: usize, lower: Rational },
    /// `x = upper - y`, `y >= 0`.
    Flipped { col: usize, upper: Rational },
    /// `x = y_pos - y_neg`.
    Split { pos: usize, neg: usize },
}

/// Solves the program exactly.
pub fn solve_lp(lp: &RationalLP) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let zero = rat_int(0);

    // Compile variables to non-negative columns.
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut ncols = 0usize;
    for v in 0..lp.num_vars {
        match (&lp.lower[v], &lp.upper[v]) {
            (Some(l), Some(u)) if l > u => return Ok(LpOutcome::Infeasible),
            (Some(l), _) => {
                maps.push(VarMap::Shifted {
                    col: ncols,
                    lower: l.clone(),
                });
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Flipped {
                    col: ncols,
                    upper: u.clone(),
                });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }

    // Rows: the stated constraints plus upper-bound rows for shifted vars.
    struct Row {
        coeffs: Vec<(usize, Rational)>,
        op: LpOp,
        rhs: Rational,
    }
    let mut rows: Vec<Row> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs: Vec<(usize, Rational)> = Vec::new();
        let mut rhs = c.rhs.clone();
        for (v, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[v] {
                VarMap::Shifted { col, lower } => {
                    rhs -= a * lower;
                    coeffs.push((*col, a.clone()));
                }
                VarMap::Flipped { col, upper } => {
                    rhs -= a * upper;
                    coeffs.push((*col, -a.clone()));
                }
                VarMap::Split { pos, neg } => {
                    coeffs.push((*pos, a.clone()));
                    coeffs.push((*neg, -a.clone()));
                }
            }
        }
        rows.push(Row {
            coeffs,
            op: c.op,
            rhs,
        });
    }
    for v in 0..lp.num_vars {
        if let (Some(l), Some(u)) = (&lp.lower[v], &lp.upper[v]) {
            if let VarMap::Shifted { col, .. } = &maps[v] {
                rows.push(Row {
                    coeffs: vec![(*col, rat_int(1))],
                    op: LpOp::Le,
                    rhs: u - l,
                });
            }
        }
    }

    // Standard form: equality rows with slack/surplus, rhs >= 0, one
    // artificial per row as the initial basis.
    let m = rows.len();
    let n_slack: usize = rows
        .iter()
        .filter(|r| !matches!(r.op, LpOp::Eq))
        .count();
    let total = ncols + n_slack + m;
    let mut a = vec![vec![zero.clone(); total]; m];
    let mut b = vec![zero.clone(); m];
    let mut slack_at = ncols;
    for (i, row) in rows.iter().enumerate() {
        for (col, coeff) in &row.coeffs {
            a[i][*col] += coeff.clone();
        }
        match row.op {
            LpOp::Le => {
                a[i][slack_at] = rat_int(1);
                slack_at += 1;
            }
            LpOp::Ge => {
                a[i][slack_at] = rat_int(-1);
                slack_at += 1;
            }
            LpOp::Eq => {}
        }
        b[i] = row.rhs.clone();
        if b[i] < zero {
            for entry in a[i].iter_mut() {
                *entry = -core::mem::take(entry);
            }
            b[i] = -core::mem::take(&mut b[i]);
        }
    }
    let artificial_start = ncols + n_slack;
    for (i, row) in a.iter_mut().enumerate() {
        row[artificial_start + i] = rat_int(1);
    }

    // Objective on standard-form columns (constant part dropped; the final
    // objective is recomputed from the reconstructed solution).
    let mut cost = vec![zero.clone(); total];
    for (v, c) in lp.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match &maps[v] {
            VarMap::Shifted { col, .. } => cost[*col] += c.clone(),
            VarMap::Flipped { col, .. } => cost[*col] -= c.clone(),
            VarMap::Split { pos, neg } => {
                cost[*pos] += c.clone();
                cost[*neg] -= c.clone();
            }
        }
    }

    let mut tab = Tableau::new(a, b, artificial_start, total);

    // Phase 1: drive the artificials to zero.
    let phase1_cost: Vec<Rational> = (0..total)
        .map(|j| {
            if j >= artificial_start {
                rat_int(1)
            } else {
                zero.clone()
            }
        })
        .collect();
    tab.set_costs(&phase1_cost, false);
    match tab.run() {
        RunResult::Optimal => {}
        RunResult::Unbounded => unreachable!("phase 1 objective is bounded below by zero"),
    }
    if tab.objective_value(&phase1_cost) != zero {
        return Ok(LpOutcome::Infeasible);
    }
    tab.evict_basic_artificials();

    // Phase 2: the real objective, artificials barred from entering.
    tab.set_costs(&cost, true);
    match tab.run() {
        RunResult::Optimal => {}
        RunResult::Unbounded => return Ok(LpOutcome::Unbounded),
    }

    // Reconstruct the original variables.
    let y = tab.primal_values();
    let values: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shifted { col, lower } => lower + &y[*col],
            VarMap::Flipped { col, upper } => upper - &y[*col],
            VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect();
    let objective = lp
        .objective
        .iter()
        .zip(&values)
        .fold(rat_int(0), |acc, (c, x)| acc + c * x);
    Ok(LpOutcome::Optimal(LpSolution { objective, values }))
}

enum RunResult {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    total: usize,
    artificial_start: usize,
    /// `m` constraint rows followed by the reduced-cost row; column `total`
    /// is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    bar_artificials: bool,
}

impl Tableau {
    fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, artificial_start: usize, total: usize) -> Self {
        let m = a.len();
        let mut rows = Vec::with_capacity(m + 1);
        for (row, rhs) in a.into_iter().zip(b) {
            let mut r = row;
            r.push(rhs);
            rows.push(r);
        }
        rows.push(vec![rat_int(0); total + 1]);
        let basis = (0..m).map(|i| artificial_start + i).collect();
        Self {
            m,
            total,
            artificial_start,
            rows,
            basis,
            bar_artificials: false,
        }
    }

    /// Installs a cost row and prices out the current basis.
    fn set_costs(&mut self, costs: &[Rational], bar_artificials: bool) {
        self.bar_artificials = bar_artificials;
        self.rows[self.m][..self.total].clone_from_slice(&costs[..self.total]);
        self.rows[self.m][self.total] = rat_int(0);
        for i in 0..self.m {
            let c = costs[self.basis[i]].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..=self.total {
                let delta = &c * &self.rows[i][j];
                self.rows[self.m][j] -= delta;
            }
        }
    }

    fn run(&mut self) -> RunResult {
        let zero = rat_int(0);
        loop {
            // Bland: entering = lowest-index column with negative reduced
            // cost.
            let entering = (0..self.total).find(|&j| {
                !(self.bar_artificials && j >= self.artificial_start)
                    && self.rows[self.m][j] < zero
            });
            let Some(col) = entering else {
                return RunResult::Optimal;
            };
            // Bland: leaving = min ratio, ties by smallest basis column.
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if self.rows[i][col] > zero {
                    let ratio = &self.rows[i][self.total] / &self.rows[i][col];
                    match &leave {
                        None => leave = Some((i, ratio)),
                        Some((best_i, best)) => {
                            if ratio < *best
                                || (ratio == *best && self.basis[i] < self.basis[*best_i])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return RunResult::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        debug_assert!(!pivot.is_zero());
        for j in 0..=self.total {
            self.rows[row][j] /= pivot.clone();
        }
        for i in 0..=self.m {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..=self.total {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// After phase 1: pivot artificials out of the basis where possible.
    /// Rows where no structural column has a nonzero entry are redundant;
    /// their artificial stays basic at zero and is barred from re-entering.
    fn evict_basic_artificials(&mut self) {
        let zero = rat_int(0);
        for i in 0..self.m {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            if let Some(col) = (0..self.artificial_start).find(|&j| self.rows[i][j] != zero) {
                self.pivot(i, col);
            }
        }
    }

    fn objective_value(&self, costs: &[Rational]) -> Rational {
        let mut total = rat_int(0);
        for i in 0..self.m {
            let c = &costs[self.basis[i]];
            if !c.is_zero() {
                total += c * &self.rows[i][self.total];
            }
        }
        total
    }

    fn primal_values(&self) -> Vec<Rational> {
        let mut y = vec![rat_int(0); self.total];
        for i in 0..self.m {
            y[self.basis[i]] = self.rows[i][self.total].clone();
        }
        y
    }
}
