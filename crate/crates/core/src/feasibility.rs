//! Exact strict feasibility of homogeneous systems `A y > 0`.
//!
//! Fourier–Motzkin elimination over the rationals. Every derived row keeps
//! the nonnegative combination of original rows that produced it, so an
//! infeasible system comes with a Gordan certificate `λ ≥ 0, λ ≠ 0,
//! λᵀA = 0`, and a feasible one with an explicit witness `y` recovered by
//! back-substitution. Both can be checked independently of the elimination.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rational::{dot, one, zero, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum StrictFeasibility {
    /// `A y > 0` componentwise.
    Feasible(Vec<Q>),
    /// `λ ≥ 0`, `λ ≠ 0`, `λᵀ A = 0`.
    Infeasible(Vec<Q>),
}

impl StrictFeasibility {
    pub fn witness(&self) -> Option<&[Q]> {
        match self {
            StrictFeasibility::Feasible(y) => Some(y),
            StrictFeasibility::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, StrictFeasibility::Feasible(_))
    }
}

#[derive(Clone, Debug)]
struct Row {
    coef: Vec<Q>,
    combo: Vec<Q>,
}

/// Scale so the first nonzero coefficient has absolute value one; used to
/// drop duplicate inequalities.
fn normalized(coef: &[Q]) -> Vec<Q> {
    match coef.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let s = lead.abs();
            coef.iter().map(|c| c / &s).collect()
        }
        None => coef.to_vec(),
    }
}

fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut seen: BTreeMap<Vec<Q>, Row> = BTreeMap::new();
    for r in rows {
        seen.entry(normalized(&r.coef)).or_insert(r);
    }
    seen.into_values().collect()
}

/// Decide `A y > 0` for `a` with `dim` columns.
pub fn solve_strict(a: &[Vec<Q>], dim: usize) -> StrictFeasibility {
    let m = a.len();
    let mut rows: Vec<Row> = a
        .iter()
        .enumerate()
        .map(|(i, coef)| {
            let mut combo = vec![zero(); m];
            combo[i] = one();
            Row {
                coef: coef.clone(),
                combo,
            }
        })
        .collect();

    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(dim);
    for var in 0..dim {
        if let Some(bad) = rows.iter().find(|r| r.coef.iter().all(Zero::is_zero)) {
            return StrictFeasibility::Infeasible(bad.combo.clone());
        }
        rows = dedup(rows);
        stages.push(rows.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coef[var].is_positive() {
                pos.push(r);
            } else if r.coef[var].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for n in &neg {
                let wp = -n.coef[var].clone();
                let wn = p.coef[var].clone();
                let coef = p.coef.iter().zip(&n.coef).map(|(x, y)| &wp * x + &wn * y).collect();
                let combo = p.combo.iter().zip(&n.combo).map(|(x, y)| &wp * x + &wn * y).collect();
                rest.push(Row { coef, combo });
            }
        }
        rows = rest;
    }
    if let Some(bad) = rows.first() {
        return StrictFeasibility::Infeasible(bad.combo.clone());
    }

    // back-substitute from the last eliminated variable
    let mut y = vec![zero(); dim];
    for var in (0..dim).rev() {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for r in &stages[var] {
            let c = &r.coef[var];
            if c.is_zero() {
                continue;
            }
            // c·y_var + rest > 0, later variables already fixed
            let rest: Q = (var + 1..dim).fold(zero(), |acc, j| acc + &r.coef[j] * &y[j]);
            let bound = -rest / c;
            if c.is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        y[var] = match (lower, upper) {
            (Some(l), Some(u)) => (l + u) / Q::from_integer(2.into()),
            (Some(l), None) => l + Q::one(),
            (None, Some(u)) => u - Q::one(),
            (None, None) => zero(),
        };
    }
    StrictFeasibility::Feasible(y)
}

/// Check a claimed answer without trusting the elimination.
pub fn certify(a: &[Vec<Q>], dim: usize, answer: &StrictFeasibility) -> bool {
    match answer {
        StrictFeasibility::Feasible(y) => y.len() == dim && a.iter().all(|row| dot(row, y).is_positive()),
        StrictFeasibility::Infeasible(lambda) => {
            lambda.len() == a.len()
                && lambda.iter().all(|l| !l.is_negative())
                && lambda.iter().any(|l| !l.is_zero())
                && (0..dim).all(|j| {
                    a.iter()
                        .zip(lambda)
                        .fold(zero(), |acc, (row, l)| acc + l * &row[j])
                        .is_zero()
                })
        }
    }
}
