//! Named-variable inequality systems, Fourier-Motzkin elimination, and
//! LP-backed redundancy pruning.
//!
//! A [`HalfspaceSystem`] is a finite list of rows `coeffs . x <= rhs`
//! over named variables that are implicitly nonnegative. The implicit
//! `x >= 0` constraints are never stored; elimination accounts for them
//! by also emitting each upper-bound row at the eliminated variable set
//! to zero. All right-hand sides are nonnegative, so the origin is
//! always feasible and the LP in [`HalfspaceSystem::remove_redundant`]
//! can start from the slack basis.

use serde::{Deserialize, Serialize};

use super::lp::{self, LpOutcome};
use super::region::RateRegion2;
use crate::{Error, Result, DEFAULT_TOL};

/// Coefficients with magnitude at most this are treated as exact zeros
/// when classifying rows during elimination.
pub(crate) const COEFF_EPS: f64 = 1e-12;

/// One linear inequality `coeffs . x <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    /// Coefficient per system variable, in declaration order.
    pub coeffs: Vec<f64>,
    /// Right-hand side, nonnegative for systems built by this crate.
    pub rhs: f64,
}

impl Inequality {
    /// Builds a row from its coefficients and right-hand side.
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }

    /// The left-hand side `coeffs . x` at a point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= COEFF_EPS)
    }
}

/// A system of inequalities over named, implicitly nonnegative variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct HalfspaceSystem {
    variables: Vec<String>,
    inequalities: Vec<Inequality>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SystemRepr {
    variables: Vec<String>,
    inequalities: Vec<Inequality>,
}

impl From<HalfspaceSystem> for SystemRepr {
    fn from(sys: HalfspaceSystem) -> Self {
        Self { variables: sys.variables, inequalities: sys.inequalities }
    }
}

impl TryFrom<SystemRepr> for HalfspaceSystem {
    type Error = Error;

    fn try_from(repr: SystemRepr) -> Result<Self> {
        Self::new(repr.variables, repr.inequalities)
    }
}

impl HalfspaceSystem {
    /// Validates and builds a system. Variable names must be nonempty and
    /// unique, every row must have one coefficient per variable, and all
    /// right-hand sides must be nonnegative (tiny float-cancellation
    /// negatives above `-1e-9` are clamped to zero).
    pub fn new(variables: Vec<String>, inequalities: Vec<Inequality>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidParameter("a system needs at least one variable".into()));
        }
        for (k, name) in variables.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidParameter("empty variable name".into()));
            }
            if variables[..k].contains(name) {
                return Err(Error::InvalidParameter(format!("duplicate variable `{name}`")));
            }
        }
        let mut rows = inequalities;
        for row in &mut rows {
            if row.coeffs.len() != variables.len() {
                return Err(Error::InvalidParameter(format!(
                    "row has {} coefficients for {} variables",
                    row.coeffs.len(),
                    variables.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::InvalidParameter("row has a non-finite entry".into()));
            }
            if row.rhs < 0.0 {
                if row.rhs < -1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "negative right-hand side {}; systems here keep the origin feasible",
                        row.rhs
                    )));
                }
                row.rhs = 0.0;
            }
        }
        Ok(Self { variables, inequalities: rows })
    }

    /// The variable names, in declaration order.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// The rows of the system.
    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// Index of a variable by name.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// True when `x` satisfies every row and the implicit nonnegativity
    /// constraints, each within an absolute slack of `tol`.
    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.variables.len()
            && x.iter().all(|&v| v >= -tol)
            && self.inequalities.iter().all(|row| row.eval(x) <= row.rhs + tol)
    }

    /// Eliminates one variable by Fourier-Motzkin and prunes the result.
    ///
    /// Rows are split by the sign of the eliminated coefficient. Each
    /// upper-bound row is kept with the variable set to zero (the
    /// implicit lower bound) and combined with every lower-bound row;
    /// rows not mentioning the variable carry over. The combined system
    /// describes exactly the shadow of the original on the remaining
    /// variables, and is passed through [`Self::remove_redundant`] before
    /// being returned so that chained eliminations stay small.
    pub fn fme_eliminate(&self, var: &str) -> Result<Self> {
        let k = self
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        if self.variables.len() == 1 {
            return Err(Error::InvalidParameter(
                "cannot eliminate the only variable of a system".into(),
            ));
        }

        let reduced_vars: Vec<String> = self
            .variables
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, v)| v.clone())
            .collect();
        let drop_k = |coeffs: &[f64]| -> Vec<f64> {
            coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, c)| *c)
                .collect()
        };

        // Uppers are scaled so the eliminated coefficient is +1, lowers
        // so it is -1; adding one of each cancels the variable exactly.
        let mut uppers: Vec<Inequality> = Vec::new();
        let mut lowers: Vec<Inequality> = Vec::new();
        let mut rows: Vec<Inequality> = Vec::new();
        for row in &self.inequalities {
            let c = row.coeffs[k];
            if c > COEFF_EPS {
                let scaled: Vec<f64> = drop_k(&row.coeffs).iter().map(|v| v / c).collect();
                uppers.push(Inequality::new(scaled, row.rhs / c));
            } else if c < -COEFF_EPS {
                let s = -c;
                let scaled: Vec<f64> = drop_k(&row.coeffs).iter().map(|v| v / s).collect();
                lowers.push(Inequality::new(scaled, row.rhs / s));
            } else {
                rows.push(Inequality::new(drop_k(&row.coeffs), row.rhs));
            }
        }
        rows.extend(uppers.iter().cloned());
        for u in &uppers {
            for l in &lowers {
                let coeffs: Vec<f64> =
                    u.coeffs.iter().zip(&l.coeffs).map(|(a, b)| a + b).collect();
                rows.push(Inequality::new(coeffs, u.rhs + l.rhs));
            }
        }

        Self::new(reduced_vars, rows)?.remove_redundant(DEFAULT_TOL)
    }

    /// Drops every row implied by the others.
    ///
    /// A row is redundant when maximizing its left-hand side subject to
    /// the remaining rows (and `x >= 0`) cannot exceed its right-hand
    /// side by more than `tol`. Rows are tested and removed one at a
    /// time, so the surviving set still describes the same region.
    pub fn remove_redundant(&self, tol: f64) -> Result<Self> {
        let mut keep: Vec<Inequality> = self
            .inequalities
            .iter()
            .filter(|row| !row.is_trivial())
            .cloned()
            .collect();
        let mut i = 0;
        while i < keep.len() {
            let candidate = keep[i].clone();
            let others: Vec<Inequality> = keep
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.clone())
                .collect();
            let redundant = match lp::maximize(&candidate.coeffs, &others)? {
                LpOutcome::Optimal { value, .. } => value <= candidate.rhs + tol,
                LpOutcome::Unbounded => false,
            };
            if redundant {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        Self::new(self.variables.clone(), keep)
    }

    /// Projects the system onto `(R1, R2)` where `R1` is the sum of the
    /// `r1_vars` and `R2` the sum of the `r2_vars`.
    ///
    /// The two groups must be disjoint and together cover every variable
    /// of the system. See [`Self::project_with_trace`] for the variant
    /// that also returns the intermediate systems.
    pub fn project_to_rate_pair(
        &self,
        r1_vars: &[&str],
        r2_vars: &[&str],
    ) -> Result<RateRegion2> {
        self.project_with_trace(r1_vars, r2_vars).map(|(region, _)| region)
    }

    /// Like [`Self::project_to_rate_pair`], also returning the pruned
    /// intermediate system after each single-variable elimination, paired
    /// with the name of the variable that was eliminated.
    ///
    /// The component variables are eliminated in reverse declaration
    /// order, which keeps the intermediate systems small for the decoder
    /// systems in this crate.
    pub fn project_with_trace(
        &self,
        r1_vars: &[&str],
        r2_vars: &[&str],
    ) -> Result<(RateRegion2, Vec<(String, HalfspaceSystem)>)> {
        for &name in r1_vars.iter().chain(r2_vars) {
            if self.var_index(name).is_none() {
                return Err(Error::UnknownVariable(name.to_string()));
            }
            if r1_vars.contains(&name) && r2_vars.contains(&name) {
                return Err(Error::InvalidParameter(format!(
                    "variable `{name}` appears in both rate groups"
                )));
            }
        }
        for name in &self.variables {
            let name = name.as_str();
            if !r1_vars.contains(&name) && !r2_vars.contains(&name) {
                return Err(Error::InvalidParameter(format!(
                    "variable `{name}` is in neither rate group"
                )));
            }
        }
        for taken in ["R1", "R2"] {
            if self.var_index(taken).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "variable name `{taken}` collides with an aggregate rate"
                )));
            }
        }

        // Append R1 and R2 with defining equalities (as inequality
        // pairs), then eliminate the original variables.
        let mut variables = self.variables.clone();
        variables.push("R1".to_string());
        variables.push("R2".to_string());
        let n = self.variables.len();
        let mut rows: Vec<Inequality> = self
            .inequalities
            .iter()
            .map(|row| {
                let mut coeffs = row.coeffs.clone();
                coeffs.extend([0.0, 0.0]);
                Inequality::new(coeffs, row.rhs)
            })
            .collect();
        for (slot, group) in [(n, r1_vars), (n + 1, r2_vars)] {
            if group.is_empty() {
                continue;
            }
            let mut fwd = vec![0.0; n + 2];
            fwd[slot] = 1.0;
            for &name in group {
                fwd[self.var_index(name).expect("validated above")] = -1.0;
            }
            let bwd: Vec<f64> = fwd.iter().map(|c| -c).collect();
            rows.push(Inequality::new(fwd, 0.0));
            rows.push(Inequality::new(bwd, 0.0));
        }

        let mut sys = Self::new(variables, rows)?;
        let mut trace = Vec::with_capacity(n);
        for name in self.variables.iter().rev() {
            sys = sys.fme_eliminate(name)?;
            trace.push((name.clone(), sys.clone()));
        }
        let region = sys.into_rate_region()?;
        Ok((region, trace))
    }

    /// Interprets a two-variable `(R1, R2)` system as a rate region.
    ///
    /// Every surviving row must have nonnegative coefficients; for the
    /// downward-closed decoder systems in this crate that always holds
    /// after pruning, and a violation means the source system did not
    /// describe a downward-closed region.
    fn into_rate_region(self) -> Result<RateRegion2> {
        debug_assert_eq!(self.variables, ["R1", "R2"]);
        let mut rows = Vec::with_capacity(self.inequalities.len());
        for row in &self.inequalities {
            let (i, j) = (row.coeffs[0], row.coeffs[1]);
            if i < -COEFF_EPS || j < -COEFF_EPS {
                return Err(Error::InvalidParameter(format!(
                    "projection is not downward closed: row {i}*R1 + {j}*R2 <= {}",
                    row.rhs
                )));
            }
            rows.push((i.max(0.0), j.max(0.0), row.rhs));
        }
        RateRegion2::from_rows(&rows)
    }
}

// ----------------------------------------------------------------------
// Tests
// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(vars: &[&str], rows: &[(&[f64], f64)]) -> HalfspaceSystem {
        HalfspaceSystem::new(
            vars.iter().map(|v| v.to_string()).collect(),
            rows.iter().map(|(c, r)| Inequality::new(c.to_vec(), *r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn construction_validates_shapes_and_signs() {
        assert!(HalfspaceSystem::new(vec![], vec![]).is_err());
        assert!(HalfspaceSystem::new(
            vec!["x".into(), "x".into()],
            vec![Inequality::new(vec![1.0, 0.0], 1.0)]
        )
        .is_err());
        assert!(HalfspaceSystem::new(
            vec!["x".into()],
            vec![Inequality::new(vec![1.0, 2.0], 1.0)]
        )
        .is_err());
        assert!(HalfspaceSystem::new(
            vec!["x".into()],
            vec![Inequality::new(vec![1.0], -0.5)]
        )
        .is_err());
        // A tiny cancellation negative gets clamped to zero.
        let clamped = HalfspaceSystem::new(
            vec!["x".into()],
            vec![Inequality::new(vec![1.0], -1e-12)],
        )
        .unwrap();
        assert_eq!(clamped.inequalities()[0].rhs, 0.0);
    }

    #[test]
    fn eliminating_a_chained_variable_composes_bounds() {
        // {y <= 2, x - y <= 3} projects to {x <= 5}.
        let s = sys(&["x", "y"], &[(&[0.0, 1.0], 2.0), (&[1.0, -1.0], 3.0)]);
        let out = s.fme_eliminate("y").unwrap();
        assert_eq!(out.variables(), ["x"]);
        assert_eq!(out.inequalities().len(), 1);
        let row = &out.inequalities()[0];
        assert!((row.coeffs[0] - 1.0).abs() < 1e-12);
        assert!((row.rhs - 5.0).abs() < 1e-12);
    }

    #[test]
    fn eliminating_keeps_upper_bounds_at_the_implicit_floor() {
        // {x + y <= 4}: setting y = 0 must keep x <= 4 in the shadow.
        let s = sys(&["x", "y"], &[(&[1.0, 1.0], 4.0)]);
        let out = s.fme_eliminate("y").unwrap();
        assert_eq!(out.inequalities().len(), 1);
        assert!((out.inequalities()[0].rhs - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bounds_without_uppers_vanish() {
        // {x - y <= 1} says y >= x - 1; with y free upward the shadow on
        // x is everything, so no row survives.
        let s = sys(&["x", "y"], &[(&[1.0, -1.0], 1.0)]);
        let out = s.fme_eliminate("y").unwrap();
        assert!(out.inequalities().is_empty());
    }

    #[test]
    fn eliminate_rejects_unknown_variables() {
        let s = sys(&["x", "y"], &[(&[1.0, 0.0], 1.0)]);
        assert!(matches!(s.fme_eliminate("z"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn redundant_looser_bound_is_dropped() {
        let s = sys(&["x"], &[(&[1.0], 1.0), (&[1.0], 2.0)]);
        let out = s.remove_redundant(1e-9).unwrap();
        assert_eq!(out.inequalities().len(), 1);
        assert!((out.inequalities()[0].rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_diagonal_is_dropped_from_a_box() {
        // x <= 1 and y <= 1 imply x + y <= 3.
        let s = sys(
            &["x", "y"],
            &[(&[1.0, 0.0], 1.0), (&[0.0, 1.0], 1.0), (&[1.0, 1.0], 3.0)],
        );
        let out = s.remove_redundant(1e-9).unwrap();
        assert_eq!(out.inequalities().len(), 2);
        assert!(out
            .inequalities()
            .iter()
            .all(|row| row.coeffs.iter().sum::<f64>() == 1.0));
    }

    #[test]
    fn binding_diagonal_survives_pruning() {
        let s = sys(
            &["x", "y"],
            &[(&[1.0, 0.0], 2.0), (&[0.0, 1.0], 2.0), (&[1.0, 1.0], 3.0)],
        );
        let out = s.remove_redundant(1e-9).unwrap();
        assert_eq!(out.inequalities().len(), 3, "the diagonal cuts the box corner");
    }

    #[test]
    fn projection_sums_component_rates() {
        // {u <= 1, v <= 2} with R1 = u + v: R1 <= 3 and R2 unconstrained.
        let s = sys(&["u", "v"], &[(&[1.0, 0.0], 1.0), (&[0.0, 1.0], 2.0)]);
        let region = s.project_to_rate_pair(&["u", "v"], &[]).unwrap();
        assert!(!region.is_bounded());
        assert_eq!(region.max_r2(), None);
        let r1 = region.max_r1().expect("R1 is bounded");
        assert!((r1 - 3.0).abs() < 1e-9);
    }

    #[test]
    fn projection_identity_on_a_single_variable() {
        let s = sys(&["u"], &[(&[1.0], 1.0)]);
        let region = s.project_to_rate_pair(&["u"], &[]).unwrap();
        let r1 = region.max_r1().expect("R1 is bounded");
        assert!((r1 - 1.0).abs() < 1e-12);
        assert_eq!(region.max_r2(), None, "empty group leaves R2 unconstrained");
    }

    #[test]
    fn projection_validates_the_variable_groups() {
        let s = sys(&["u", "v"], &[(&[1.0, 1.0], 1.0)]);
        assert!(s.project_to_rate_pair(&["u"], &["w"]).is_err(), "unknown name");
        assert!(s.project_to_rate_pair(&["u"], &[]).is_err(), "v not covered");
        assert!(s.project_to_rate_pair(&["u", "v"], &["v"]).is_err(), "overlap");
    }

    #[test]
    fn projection_of_a_shared_bound_is_the_triangle() {
        // {u + v <= 1} with R1 = u, R2 = v: the unit simplex.
        let s = sys(&["u", "v"], &[(&[1.0, 1.0], 1.0)]);
        let region = s.project_to_rate_pair(&["u"], &["v"]).unwrap();
        let verts = region.vertices().unwrap();
        assert_eq!(verts.len(), 2);
        assert!((verts[0].0 - 0.0).abs() < 1e-9 && (verts[0].1 - 1.0).abs() < 1e-9);
        assert!((verts[1].0 - 1.0).abs() < 1e-9 && (verts[1].1 - 0.0).abs() < 1e-9);
    }

    #[test]
    fn trace_records_one_system_per_eliminated_variable() {
        let s = sys(
            &["u", "v", "w"],
            &[(&[1.0, 1.0, 0.0], 2.0), (&[0.0, 0.0, 1.0], 1.0)],
        );
        let (_, trace) = s.project_with_trace(&["u", "v"], &["w"]).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace[0].0, "w", "elimination runs in reverse declaration order");
        assert_eq!(trace[2].1.variables(), ["R1", "R2"]);
    }

    #[test]
    fn serde_round_trip_preserves_the_system() {
        let s = sys(&["x", "y"], &[(&[1.0, 0.5], 1.25), (&[0.0, 1.0], 2.0)]);
        let text = serde_json::to_string(&s).unwrap();
        let back: HalfspaceSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(text.contains("\"variables\""));
        assert!(text.contains("\"inequalities\""));
    }
}
