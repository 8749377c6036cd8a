//! Two-dimensional downward-closed rate regions and their geometry.
//!
//! A [`RateRegion2`] is the set `{(r1, r2) >= 0 : i*r1 + j*r2 <= rhs}`
//! over a finite list of rows with nonnegative coefficients. Regions of
//! this shape are convex and downward closed, which is exactly what the
//! achievable schemes and outer bounds produce, and it makes the
//! geometry cheap: the boundary is the lower envelope of the lines
//! `r2 = (rhs - i*r1) / j`, a concave piecewise-linear chain.

use serde::{Deserialize, Serialize};

use super::system::{Inequality, COEFF_EPS};
use crate::{Error, Result};

/// One region row `i*r1 + j*r2 <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    /// Coefficient on `R1`, nonnegative.
    pub i: f64,
    /// Coefficient on `R2`, nonnegative.
    pub j: f64,
    /// Right-hand side in bits, nonnegative.
    pub rhs: f64,
}

/// A downward-closed rate region in the nonnegative quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub struct RateRegion2 {
    rows: Vec<RateRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegionRepr {
    variables: Vec<String>,
    inequalities: Vec<Inequality>,
}

impl From<RateRegion2> for RegionRepr {
    fn from(region: RateRegion2) -> Self {
        Self {
            variables: vec!["R1".to_string(), "R2".to_string()],
            inequalities: region
                .rows
                .iter()
                .map(|row| Inequality::new(vec![row.i, row.j], row.rhs))
                .collect(),
        }
    }
}

impl TryFrom<RegionRepr> for RateRegion2 {
    type Error = Error;

    fn try_from(repr: RegionRepr) -> Result<Self> {
        if repr.variables != ["R1", "R2"] {
            return Err(Error::InvalidParameter(format!(
                "rate regions are over [R1, R2], got {:?}",
                repr.variables
            )));
        }
        let rows: Vec<(f64, f64, f64)> = repr
            .inequalities
            .iter()
            .map(|row| {
                if row.coeffs.len() != 2 {
                    return Err(Error::InvalidParameter(
                        "rate-region rows take exactly two coefficients".into(),
                    ));
                }
                Ok((row.coeffs[0], row.coeffs[1], row.rhs))
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&rows)
    }
}

impl RateRegion2 {
    /// Builds a region from `(i, j, rhs)` rows meaning `i*r1 + j*r2 <= rhs`.
    ///
    /// Coefficients must be nonnegative (tiny float-cancellation negatives
    /// above `-1e-9` are clamped to zero, anything lower is rejected) and
    /// right-hand sides likewise, since a material negative would make the
    /// region empty. Rows with both coefficients zero carry no information
    /// and are dropped.
    pub fn from_rows(rows: &[(f64, f64, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for &(i, j, rhs) in rows {
            if !(i.is_finite() && j.is_finite() && rhs.is_finite()) {
                return Err(Error::InvalidParameter("non-finite region row".into()));
            }
            if i < -1e-9 || j < -1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "negative coefficient in region row ({i}, {j}, {rhs})"
                )));
            }
            let (i, j) = (i.max(0.0), j.max(0.0));
            let rhs = if rhs < 0.0 {
                if rhs < -1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "negative right-hand side {rhs} would empty the region"
                    )));
                }
                0.0
            } else {
                rhs
            };
            if i <= COEFF_EPS && j <= COEFF_EPS {
                continue;
            }
            out.push(RateRow { i, j, rhs });
        }
        Ok(Self { rows: out })
    }

    /// The rows of the region, in construction order.
    pub fn rows(&self) -> &[RateRow] {
        &self.rows
    }

    /// Largest feasible `r1`, or `None` when no row caps it.
    pub fn max_r1(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|row| row.i > COEFF_EPS)
            .map(|row| row.rhs / row.i)
            .min_by(f64::total_cmp)
    }

    /// Largest feasible `r2`, or `None` when no row caps it.
    pub fn max_r2(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|row| row.j > COEFF_EPS)
            .map(|row| row.rhs / row.j)
            .min_by(f64::total_cmp)
    }

    /// True when both rates are capped by some row.
    pub fn is_bounded(&self) -> bool {
        self.max_r1().is_some() && self.max_r2().is_some()
    }

    /// True when `(r1, r2)` satisfies every row and nonnegativity, each
    /// within an absolute slack of `tol` bits.
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && self
                .rows
                .iter()
                .all(|row| row.i * r1 + row.j * r2 <= row.rhs + tol)
    }

    /// The vertices of the northeast boundary, sorted by `r1` ascending.
    ///
    /// The chain starts at `(0, max r2)` and ends at `(max r1, 0)`;
    /// collinear interior points are removed and vertices closer than
    /// `1e-9` are merged. Errors when the region is unbounded.
    pub fn vertices(&self) -> Result<Vec<(f64, f64)>> {
        let r1max = self
            .max_r1()
            .ok_or_else(|| Error::UnboundedRegion("no row caps R1".into()))?;
        let envelope: Vec<&RateRow> =
            self.rows.iter().filter(|row| row.j > COEFF_EPS).collect();
        if envelope.is_empty() {
            return Err(Error::UnboundedRegion("no row caps R2".into()));
        }
        // Upper boundary r2 = f(r1), the lower envelope of the j > 0
        // lines; it is nonnegative on [0, r1max] because every such line
        // with i > 0 still has slack there.
        let f = |x: f64| -> f64 {
            envelope
                .iter()
                .map(|row| (row.rhs - row.i * x) / row.j)
                .fold(f64::INFINITY, f64::min)
                .max(0.0)
        };

        let mut xs = vec![0.0, r1max];
        for (k, a) in envelope.iter().enumerate() {
            for b in &envelope[k + 1..] {
                let (sa, sb) = (a.i / a.j, b.i / b.j);
                if (sa - sb).abs() <= 1e-12 {
                    continue;
                }
                let x = (a.rhs / a.j - b.rhs / b.j) / (sa - sb);
                if x > 1e-12 && x < r1max - 1e-12 {
                    xs.push(x);
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

        let mut chain: Vec<(f64, f64)> = Vec::with_capacity(xs.len() + 1);
        for x in xs {
            let p = (x, f(x));
            // Drop interior points that sit on the segment between their
            // neighbors; the envelope is concave, so a stack pass works.
            while chain.len() >= 2 {
                let a = chain[chain.len() - 2];
                let b = chain[chain.len() - 1];
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                let span = f64::hypot(p.0 - a.0, p.1 - a.1).max(f64::MIN_POSITIVE);
                if cross.abs() <= 1e-9 * span {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        let &(last_x, last_y) = chain.last().expect("chain has at least one point");
        if last_y > 1e-9 {
            chain.push((last_x, 0.0));
        }
        Ok(chain)
    }

    /// The support value `max i*r1 + j*r2` over the region.
    ///
    /// The direction must be nonnegative and nonzero. Errors when the
    /// region is unbounded along the direction.
    pub fn support(&self, i: f64, j: f64) -> Result<f64> {
        if !(i.is_finite() && j.is_finite()) || i < 0.0 || j < 0.0 || (i == 0.0 && j == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "support direction must be nonnegative and nonzero, got ({i}, {j})"
            )));
        }
        let unbounded =
            |axis: &str| Error::UnboundedRegion(format!("support ({i}, {j}): no row caps {axis}"));
        if j == 0.0 {
            return Ok(i * self.max_r1().ok_or_else(|| unbounded("R1"))?);
        }
        if i == 0.0 {
            return Ok(j * self.max_r2().ok_or_else(|| unbounded("R2"))?);
        }
        let verts = self.vertices()?;
        Ok(verts
            .iter()
            .map(|(x, y)| i * x + j * y)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// True when every point of `inner` lies in `self` within `tol`.
    ///
    /// Both regions are convex, so checking the vertices of `inner`
    /// suffices. Errors when `inner` is unbounded.
    pub fn contains_region(&self, inner: &RateRegion2, tol: f64) -> Result<bool> {
        Ok(inner
            .vertices()?
            .iter()
            .all(|&(r1, r2)| self.contains(r1, r2, tol)))
    }

    /// True when the two regions agree within `tol`.
    ///
    /// Identical vertex chains decide immediately (which also makes exact
    /// round-trip comparisons at `tol = 0` well defined); otherwise the
    /// regions are compared by mutual containment.
    pub fn region_equal(&self, other: &RateRegion2, tol: f64) -> Result<bool> {
        let va = self.vertices()?;
        let vb = other.vertices()?;
        if va.len() == vb.len()
            && va
                .iter()
                .zip(&vb)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol)
        {
            return Ok(true);
        }
        Ok(self.contains_region(other, tol)? && other.contains_region(self, tol)?)
    }
}

// ----------------------------------------------------------------------
// Tests
// ----------------------------------------------------------------------
