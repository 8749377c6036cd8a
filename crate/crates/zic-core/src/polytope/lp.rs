//! A dense primal simplex solver for the small linear programs behind
//! redundancy pruning and support queries.
//!
//! Every program here has the same shape: maximize `c . x` subject to
//! `A x <= b` with `x >= 0` and `b >= 0`. The nonnegative right-hand
//! sides make the all-slack basis feasible, so no phase-1 is needed.
//! Bland's rule keeps pivoting cycle-free. Systems are tiny (at most a
//! dozen variables and a few dozen rows), so a textbook tableau is both
//! the simplest and an entirely adequate choice.

use super::system::Inequality;
use crate::{Error, Result};

/// Outcome of maximizing a linear objective over an inequality system.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// A finite optimum, with one attaining point.
    Optimal {
        /// The maximum objective value.
        value: f64,
        /// A feasible point attaining it.
        point: Vec<f64>,
    },
    /// The objective is unbounded above on the feasible set.
    Unbounded,
}

impl LpOutcome {
    /// The optimal value, or `None` when unbounded.
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Optimal { value, .. } => Some(*value),
            Self::Unbounded => None,
        }
    }
}

/// Reduced costs within this of zero count as optimal.
const COST_EPS: f64 = 1e-9;
/// Pivot entries must be at least this large.
const PIVOT_EPS: f64 = 1e-11;
/// Ratio-test ties within this margin are broken by Bland's rule.
const RATIO_EPS: f64 = 1e-12;

/// Maximizes `objective . x` subject to `rows` and `x >= 0`.
///
/// Right-hand sides must be nonnegative (values above `-1e-9` are clamped
/// to zero), which every system built by this crate guarantees, so the
/// origin always serves as the starting basis.
pub fn maximize(objective: &[f64], rows: &[Inequality]) -> Result<LpOutcome> {
    let n = objective.len();
    let m = rows.len();
    if objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::Lp("objective has a non-finite coefficient".into()));
    }
    for row in rows {
        if row.coeffs.len() != n {
            return Err(Error::Lp(format!(
                "row has {} coefficients, expected {n}",
                row.coeffs.len()
            )));
        }
        if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
            return Err(Error::Lp("row has a non-finite entry".into()));
        }
        if row.rhs < -1e-9 {
            return Err(Error::Lp(format!(
                "right-hand side {} is negative; the origin basis needs b >= 0",
                row.rhs
            )));
        }
    }

    // Tableau layout per row: [variable coeffs | slack coeffs | rhs].
    let width = n + m + 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (r, row) in rows.iter().enumerate() {
        let mut t = vec![0.0; width];
        t[..n].copy_from_slice(&row.coeffs);
        t[n + r] = 1.0;
        t[width - 1] = row.rhs.max(0.0);
        tab.push(t);
    }
    let mut zrow = vec![0.0; width];
    for j in 0..n {
        zrow[j] = -objective[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Bland's rule terminates in finitely many pivots; the fuse only
    // guards against numerical stalls.
    let fuse = 1000 * (n + m + 2);
    for _ in 0..fuse {
        let entering = (0..n + m).find(|&j| zrow[j] < -COST_EPS);
        let Some(enter) = entering else {
            let mut point = vec![0.0; n];
            for (r, &b) in basis.iter().enumerate() {
                if b < n {
                    point[b] = tab[r][width - 1];
                }
            }
            return Ok(LpOutcome::Optimal { value: zrow[width - 1], point });
        };

        let mut leave: Option<(usize, f64)> = None;
        for (r, t) in tab.iter().enumerate() {
            let entry = t[enter];
            if entry <= PIVOT_EPS {
                continue;
            }
            let ratio = t[width - 1] / entry;
            match leave {
                None => leave = Some((r, ratio)),
                Some((lr, lratio)) => {
                    if ratio < lratio - RATIO_EPS
                        || (ratio <= lratio + RATIO_EPS && basis[r] < basis[lr])
                    {
                        leave = Some((r, ratio));
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };

        let piv = tab[pivot_row][enter];
        for v in tab[pivot_row].iter_mut() {
            *v /= piv;
        }
        let prow = tab[pivot_row].clone();
        for (r, t) in tab.iter_mut().enumerate() {
            if r == pivot_row {
                continue;
            }
            let factor = t[enter];
            if factor != 0.0 {
                for (v, p) in t.iter_mut().zip(&prow) {
                    *v -= factor * p;
                }
                t[enter] = 0.0;
            }
        }
        let factor = zrow[enter];
        if factor != 0.0 {
            for (v, p) in zrow.iter_mut().zip(&prow) {
                *v -= factor * p;
            }
            zrow[enter] = 0.0;
        }
        basis[pivot_row] = enter;
    }
    Err(Error::Lp("pivot fuse tripped; system is numerically degenerate".into()))
}

// ----------------------------------------------------------------------
// Tests
// ----------------------------------------------------------------------
