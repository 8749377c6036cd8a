//! The outer bound on the capacity region and the classical
//! cognitive-relay baselines used for comparisons.
//!
//! The outer bound is a five-row region; the two rows whose right-hand
//! sides include a conferencing capacity are dropped when that link is
//! unbounded, which keeps the remaining rows finite and still valid. The
//! baselines model the channel without conferencing (type I) and with
//! the classical one-directional cooperation strategies (type II).

use serde::{Deserialize, Serialize};

use crate::channel::{cap, ChannelParams, LinkCapacity};
use crate::polytope::RateRegion2;
use crate::{Error, Result, DEFAULT_TOL};

/// Number of grid points used for the type II frontier when callers have
/// no reason to pick their own resolution.
pub const DEFAULT_RHO_GRID: usize = 1001;

/// The outer bound together with which of its rows actually bind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterBound {
    /// All rows of the bound, minus any dropped for an unbounded link.
    pub region: RateRegion2,
    /// Indices into `region.rows()` of rows not implied by the others.
    pub binding: Vec<usize>,
}

/// Builds the outer bound for a parameter tuple.
///
/// Rows, in order (skipping a row when its conferencing capacity is
/// unbounded):
///
/// 1. `R1 <= C(P1)`
/// 2. `R2 <= C(P2) + C21`
/// 3. `R2 <= C(2*a^2*P1 + 2*P2)`
/// 4. `R1 + R2 <= C(max(1 - a^2, 0)*P1 / (1 + a^2*P1))
///    + C(2*a^2*P1 + 2*P2) + C12`
/// 5. `R1 + R2 <= C(P1*P2 + P1*(1 + 2*a^2) + 2*P2)`
pub fn outer_bound(params: &ChannelParams) -> Result<OuterBound> {
    let a2 = params.a * params.a;
    let cross = params.cross_power();
    let boosted = cap(2.0 * cross + 2.0 * params.p2);

    let mut rows: Vec<(f64, f64, f64)> = vec![(1.0, 0.0, cap(params.p1))];
    if let Some(c21) = params.c21.finite() {
        rows.push((0.0, 1.0, cap(params.p2) + c21));
    }
    rows.push((0.0, 1.0, boosted));
    if let Some(c12) = params.c12.finite() {
        let residual = ((1.0 - a2).max(0.0) * params.p1) / (1.0 + cross);
        rows.push((1.0, 1.0, cap(residual) + boosted + c12));
    }
    rows.push((
        1.0,
        1.0,
        cap(params.p1 * params.p2 + params.p1 * (1.0 + 2.0 * a2) + 2.0 * params.p2),
    ));

    let region = RateRegion2::from_rows(&rows)?;
    let binding = binding_rows(&region, DEFAULT_TOL)?;
    Ok(OuterBound { region, binding })
}

/// Rows of `region` that are not implied by the other rows within `tol`.
fn binding_rows(region: &RateRegion2, tol: f64) -> Result<Vec<usize>> {
    let rows = region.rows();
    let mut binding = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let others: Vec<(f64, f64, f64)> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != k)
            .map(|(_, r)| (r.i, r.j, r.rhs))
            .collect();
        let sub = RateRegion2::from_rows(&others)?;
        let implied = match sub.support(row.i, row.j) {
            Ok(value) => value <= row.rhs + tol,
            Err(Error::UnboundedRegion(_)) => false,
            Err(e) => return Err(e),
        };
        if !implied {
            binding.push(k);
        }
    }
    Ok(binding)
}

/// The no-conferencing baseline: each user decodes alone and treats the
/// other as it would in two parallel point-to-point links, giving the box
/// `{R1 <= C(P1), R2 <= C(P2)}`.
pub fn crzc_type1_capacity(params: &ChannelParams) -> Result<RateRegion2> {
    RateRegion2::from_rows(&[(1.0, 0.0, cap(params.p1)), (0.0, 1.0, cap(params.p2))])
}

/// A region given as the union of per-point boxes along a parametric
/// frontier: each point `(x, y)` contributes `{r1 <= x, r2 <= y}`.
///
/// This is the natural shape for a baseline traced by a scalar power
/// split, without any time-sharing between split choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope2 {
    /// Frontier points `(r1, r2)`, sorted by `r1` ascending.
    pub points: Vec<(f64, f64)>,
}

impl Envelope2 {
    /// Largest `r1` over the frontier.
    pub fn max_r1(&self) -> f64 {
        self.points.iter().map(|p| p.0).fold(0.0, f64::max)
    }

    /// Largest `r2` over the frontier.
    pub fn max_r2(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(0.0, f64::max)
    }

    /// The support value `max i*r1 + j*r2` over the union of boxes,
    /// which is attained at one of the frontier points.
    pub fn support(&self, i: f64, j: f64) -> Result<f64> {
        if !(i.is_finite() && j.is_finite()) || i < 0.0 || j < 0.0 || (i == 0.0 && j == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "support direction must be nonnegative and nonzero, got ({i}, {j})"
            )));
        }
        Ok(self
            .points
            .iter()
            .map(|(x, y)| i * x + j * y)
            .fold(0.0, f64::max))
    }

    /// True when `(r1, r2)` lies in some frontier box within `tol`.
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && self
                .points
                .iter()
                .any(|&(x, y)| r1 <= x + tol && r2 <= y + tol)
    }
}

/// The classical cooperation baseline for weak cross gain, traced by the
/// fraction `rho` of transmitter 1's power kept for its own message.
///
/// For each `rho` on a uniform grid of `rho_grid_size >= 2` points over
/// `[0, 1]`, the frontier point is
///
/// ```text
/// r1 = C(rho*P1)
/// r2 = C((sqrt(a^2*(1 - rho)*P1) + sqrt(P2))^2 / (1 + a^2*rho*P1))
/// ```
///
/// where the remaining transmitter-1 power coherently boosts user 2. The
/// trade-off is monotone in `rho`, so the points come out Pareto-sorted.
/// The baseline's rate claim is meaningful for `a <= 1`; for stronger
/// gain use [`crzc_type2_outer_strong`].
pub fn crzc_type2_region(params: &ChannelParams, rho_grid_size: usize) -> Result<Envelope2> {
    if rho_grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "rho grid needs at least 2 points, got {rho_grid_size}"
        )));
    }
    let a2 = params.a * params.a;
    let mut points = Vec::with_capacity(rho_grid_size);
    for k in 0..rho_grid_size {
        let rho = k as f64 / (rho_grid_size - 1) as f64;
        let own = cap(rho * params.p1);
        let boost = (a2 * (1.0 - rho) * params.p1).sqrt() + params.p2.sqrt();
        let other = cap(boost * boost / (1.0 + a2 * rho * params.p1));
        points.push((own, other));
    }
    Ok(Envelope2 { points })
}

/// A conservative stand-in for the strong-gain (`a > 1`) cooperation
/// baseline: the outer bound of this channel with `c12 = 0` and `c21`
/// unbounded, which contains everything that baseline can achieve.
///
/// Errors unless `a > 1`.
pub fn crzc_type2_outer_strong(params: &ChannelParams) -> Result<OuterBound> {
    if !(params.a > 1.0) {
        return Err(Error::RegimeMismatch(format!(
            "the strong-gain baseline needs a > 1, got a = {}",
            params.a
        )));
    }
    let relaxed = ChannelParams::new(
        params.p1,
        params.p2,
        params.a,
        LinkCapacity::Finite(0.0),
        LinkCapacity::Unbounded,
    )?;
    outer_bound(&relaxed)
}

// ----------------------------------------------------------------------
// Tests
// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_rows_match_hand_derived_values() {
        // At (10, 10, 1, 0, 0) the five rows reduce to C(10), C(10),
        // C(40), C(40), C(150).
        let params = ChannelParams::finite(10.0, 10.0, 1.0, 0.0, 0.0).unwrap();
        let outer = outer_bound(&params).unwrap();
        let rows = outer.region.rows();
        assert_eq!(rows.len(), 5);
        let want = [
            (1.0, 0.0, 1.729_715_809_318_648_7),
            (0.0, 1.0, 1.729_715_809_318_648_7),
            (0.0, 1.0, 2.678_776_002_309_042),
            (1.0, 1.0, 2.678_776_002_309_042),
            (1.0, 1.0, 3.619_202_369_662_539_3),
        ];
        for (row, (i, j, rhs)) in rows.iter().zip(want) {
            assert_eq!(row.i, i);
            assert_eq!(row.j, j);
            assert!(
                (row.rhs - rhs).abs() < 1e-12,
                "row rhs {} should be {rhs}",
                row.rhs
            );
        }
    }

    #[test]
    fn binding_rows_exclude_implied_ones() {
        // At (10, 10, 1, 0, 0): the second R2 row is implied by the
        // first, and the last sum row by the tighter sum row before it.
        let params = ChannelParams::finite(10.0, 10.0, 1.0, 0.0, 0.0).unwrap();
        let outer = outer_bound(&params).unwrap();
        assert_eq!(outer.binding, vec![0, 1, 3]);
    }

    #[test]
    fn unbounded_links_drop_their_rows() {
        let params = ChannelParams::new(
            10.0,
            10.0,
            1.0,
            LinkCapacity::Unbounded,
            LinkCapacity::Unbounded,
        )
        .unwrap();
        let outer = outer_bound(&params).unwrap();
        assert_eq!(outer.region.rows().len(), 3);
        assert!(outer.region.is_bounded(), "remaining rows still cap both rates");
    }

    #[test]
    fn residual_interference_term_clamps_at_strong_gain() {
        // For a >= 1 the first summand of the c12 sum row is C(0) = 0.
        let weak = ChannelParams::finite(10.0, 10.0, 0.5, 1.0, 0.0).unwrap();
        let strong = ChannelParams::finite(10.0, 10.0, 2.0, 1.0, 0.0).unwrap();
        let row = |p: &ChannelParams| outer_bound(p).unwrap().region.rows()[3].rhs;
        let boosted = |p: &ChannelParams| cap(2.0 * p.cross_power() + 2.0 * p.p2);
        assert!(row(&weak) > boosted(&weak) + 1.0, "weak gain keeps a positive residual");
        assert!((row(&strong) - (boosted(&strong) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn type1_box_is_the_pair_of_single_user_capacities() {
        let params = ChannelParams::finite(3.0, 15.0, 0.7, 2.0, 2.0).unwrap();
        let region = crzc_type1_capacity(&params).unwrap();
        assert!((region.max_r1().unwrap() - 1.0).abs() < 1e-12);
        assert!((region.max_r2().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn type2_frontier_interpolates_between_full_boost_and_full_rate() {
        let params = ChannelParams::finite(3.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let env = crzc_type2_region(&params, 3).unwrap();
        assert_eq!(env.points.len(), 3);
        // rho = 0: all of P1 boosts user 2.
        assert!((env.points[0].0 - 0.0).abs() < 1e-12);
        assert!((env.points[0].1 - 1.0).abs() < 1e-12);
        // rho = 1/2.
        assert!((env.points[1].0 - cap(1.5)).abs() < 1e-12);
        assert!((env.points[1].1 - cap(0.6)).abs() < 1e-12);
        // rho = 1: user 1 keeps everything.
        assert!((env.points[2].0 - 1.0).abs() < 1e-12);
        assert!((env.points[2].1 - 0.0).abs() < 1e-12);

        assert!((env.max_r1() - 1.0).abs() < 1e-12);
        assert!((env.support(1.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(env.contains(cap(1.5), cap(0.6), 1e-12));
        assert!(!env.contains(0.9, 0.9, 1e-6));
        assert!(crzc_type2_region(&params, 1).is_err());
    }

    #[test]
    fn strong_baseline_requires_strong_gain() {
        let weak = ChannelParams::finite(10.0, 10.0, 1.0, 1.0, 1.0).unwrap();
        assert!(crzc_type2_outer_strong(&weak).is_err());

        let strong = ChannelParams::finite(10.0, 10.0, 2.0, 1.0, 1.0).unwrap();
        let outer = crzc_type2_outer_strong(&strong).unwrap();
        // c21 unbounded drops its R2 row; c12 = 0 keeps the sum row.
        assert_eq!(outer.region.rows().len(), 4);
        let plain = outer_bound(&strong).unwrap();
        assert_eq!(plain.region.rows().len(), 5);
    }
}
