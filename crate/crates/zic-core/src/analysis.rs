//! Gap measurement, grid sweeps over the parameter space, conferencing
//! split optimization, and baseline comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    crzc_type1_capacity, crzc_type2_outer_strong, crzc_type2_region, outer_bound,
};
use crate::channel::{
    classify_regime, classify_unidirectional_relay_case, ChannelParams, Regime, RelayCase,
};
use crate::polytope::RateRegion2;
use crate::schemes::{
    achievable_for, scheme_relay_common, scheme_relay_noncoop, scheme_relay_private_common,
    scheme_zero_forcing, SchemeOutput,
};
use crate::{Error, Result};

/// Absolute tolerance, in bits, used when comparing gaps against claims.
pub const GAP_TOL: f64 = 1e-6;

/// The five facet directions `(i, j)` along which gaps are measured:
/// per-user rates, the sum rate, and the two weighted sums.
pub const FACET_DIRECTIONS: [(f64, f64); 5] =
    [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 2.0)];

/// Support-function gaps between an outer and an inner region, one per
/// direction in [`FACET_DIRECTIONS`], in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacetDeltas {
    pub delta_r1: f64,
    pub delta_r2: f64,
    pub delta_sum: f64,
    pub delta_2r1_r2: f64,
    pub delta_r1_2r2: f64,
}

impl FacetDeltas {
    /// All-zero deltas.
    pub fn zero() -> Self {
        Self {
            delta_r1: 0.0,
            delta_r2: 0.0,
            delta_sum: 0.0,
            delta_2r1_r2: 0.0,
            delta_r1_2r2: 0.0,
        }
    }

    /// The deltas paired with their directions, in [`FACET_DIRECTIONS`]
    /// order.
    pub fn by_direction(&self) -> [((f64, f64), f64); 5] {
        [
            ((1.0, 0.0), self.delta_r1),
            ((0.0, 1.0), self.delta_r2),
            ((1.0, 1.0), self.delta_sum),
            ((2.0, 1.0), self.delta_2r1_r2),
            ((1.0, 2.0), self.delta_r1_2r2),
        ]
    }

    /// The largest delta across the five directions.
    pub fn max(&self) -> f64 {
        self.by_direction()
            .iter()
            .map(|(_, d)| *d)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn max_with(&mut self, other: &FacetDeltas) {
        self.delta_r1 = self.delta_r1.max(other.delta_r1);
        self.delta_r2 = self.delta_r2.max(other.delta_r2);
        self.delta_sum = self.delta_sum.max(other.delta_sum);
        self.delta_2r1_r2 = self.delta_2r1_r2.max(other.delta_2r1_r2);
        self.delta_r1_2r2 = self.delta_r1_2r2.max(other.delta_r1_2r2);
    }
}

/// Result of comparing an inner region against an outer bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    /// Support gaps along the five facet directions.
    pub deltas: FacetDeltas,
    /// Whether every outer boundary point, shifted down by the claimed
    /// per-user gaps and clipped at zero, lies inside the inner region.
    pub boundary_ok: bool,
    /// The claimed per-user gaps `(delta1, delta2)` the report was
    /// checked against.
    pub claimed: (f64, f64),
    /// True when the boundary check holds and every facet gap is within
    /// the claim.
    pub pass: bool,
}

/// Measures the gap between an outer and an inner region and checks it
/// against a claimed per-user gap pair.
///
/// Fails with [`Error::NotContained`] if the inner region is not a subset
/// of the outer one (up to `tol`). The facet check requires
/// `gap(i, j) <= i * delta1 + j * delta2 + tol` in every direction; the
/// boundary check requires that shifting any outer boundary point down by
/// `(delta1, delta2)` (clipped at zero) lands inside the inner region.
/// Both checks are monotone in the claim: enlarging `(delta1, delta2)`
/// never turns a pass into a failure.
pub fn region_gap(
    outer: &RateRegion2,
    inner: &RateRegion2,
    claimed: (f64, f64),
    tol: f64,
) -> Result<GapReport> {
    let (d1, d2) = claimed;
    if !(d1.is_finite() && d2.is_finite() && d1 >= 0.0 && d2 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "claimed gap ({d1}, {d2}) must be finite and nonnegative"
        )));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad tolerance {tol}")));
    }

    let inner_verts = inner.vertices()?;
    let outer_verts = outer.vertices()?;
    for &(x, y) in &inner_verts {
        if !outer.contains(x, y, tol) {
            return Err(Error::NotContained(format!(
                "inner vertex ({x}, {y}) lies outside the outer region"
            )));
        }
    }

    let mut gaps = [0.0; 5];
    for (k, (i, j)) in FACET_DIRECTIONS.iter().enumerate() {
        gaps[k] = outer.support(*i, *j)? - inner.support(*i, *j)?;
    }
    let deltas = FacetDeltas {
        delta_r1: gaps[0],
        delta_r2: gaps[1],
        delta_sum: gaps[2],
        delta_2r1_r2: gaps[3],
        delta_r1_2r2: gaps[4],
    };

    let mut candidates = outer_verts.clone();
    for w in outer_verts.windows(2) {
        let (ax, ay) = w[0];
        let (bx, by) = w[1];
        for (va, vb, shift) in [(ax, bx, d1), (ay, by, d2)] {
            let fa = va - shift;
            let fb = vb - shift;
            if fa * fb < 0.0 {
                let t = fa / (fa - fb);
                candidates.push((ax + t * (bx - ax), ay + t * (by - ay)));
            }
        }
    }
    let boundary_ok = candidates
        .iter()
        .all(|&(x, y)| inner.contains((x - d1).max(0.0), (y - d2).max(0.0), tol));

    let facets_ok = FACET_DIRECTIONS
        .iter()
        .zip(gaps.iter())
        .all(|(&(i, j), &g)| g <= i * d1 + j * d2 + tol);

    Ok(GapReport {
        deltas,
        boundary_ok,
        claimed,
        pass: boundary_ok && facets_ok,
    })
}

/// Geometrically spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "log_space needs at least two points");
    assert!(lo > 0.0 && hi > lo, "log_space needs 0 < lo < hi");
    let ratio = hi / lo;
    let mut out: Vec<f64> = (0..n)
        .map(|k| lo * ratio.powf(k as f64 / (n - 1) as f64))
        .collect();
    out[n - 1] = hi;
    out
}

/// A cartesian grid over the channel parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub a: Vec<f64>,
    pub c12: Vec<f64>,
    pub c21: Vec<f64>,
}

impl SweepGrid {
    /// The reference grid: powers geometrically spaced over
    /// `[0.1, 10^4]` (15 points each), gains over `[0.05, 50]` (15
    /// points), and conferencing capacities in `{0, 0.5, 1, 2, 4}`.
    pub fn default_grid() -> Self {
        let links = vec![0.0, 0.5, 1.0, 2.0, 4.0];
        Self {
            p1: log_space(0.1, 1e4, 15),
            p2: log_space(0.1, 1e4, 15),
            a: log_space(0.05, 50.0, 15),
            c12: links.clone(),
            c21: links,
        }
    }

    /// A coarser grid for fast iteration.
    pub fn quick() -> Self {
        let links = vec![0.0, 1.0, 4.0];
        Self {
            p1: log_space(0.1, 1e4, 5),
            p2: log_space(0.1, 1e4, 5),
            a: log_space(0.05, 50.0, 7),
            c12: links.clone(),
            c21: links,
        }
    }

    /// Number of tuples in the grid.
    pub fn len(&self) -> usize {
        self.p1.len() * self.p2.len() * self.a.len() * self.c12.len() * self.c21.len()
    }

    /// True when any axis is empty.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All parameter tuples in lexicographic order over
    /// `(p1, p2, a, c12, c21)`.
    pub fn tuples(&self) -> Result<Vec<ChannelParams>> {
        let mut out = Vec::with_capacity(self.len());
        for &p1 in &self.p1 {
            for &p2 in &self.p2 {
                for &a in &self.a {
                    for &c12 in &self.c12 {
                        for &c21 in &self.c21 {
                            out.push(ChannelParams::finite(p1, p2, a, c12, c21)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Per-tuple outcome of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct TupleRecord {
    pub p1: f64,
    pub p2: f64,
    pub a: f64,
    pub c12: f64,
    pub c21: f64,
    pub regime: Regime,
    pub deltas: FacetDeltas,
    pub pass: bool,
}

/// Aggregate over all tuples of one regime.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeSummary {
    pub regime: Regime,
    pub claimed: (f64, f64),
    pub tuples: usize,
    pub passes: usize,
    /// Componentwise worst deltas observed in the regime.
    pub worst: FacetDeltas,
}

/// Aggregate over one single-link slice of the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SliceSummary {
    pub label: String,
    pub claimed: (f64, f64),
    pub tuples: usize,
    pub passes: usize,
    pub worst: FacetDeltas,
}

/// Full result of [`verify_claims`].
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    /// One record per tuple, in grid order.
    pub records: Vec<TupleRecord>,
    /// Per-regime aggregates, in regime order A through E.
    pub regimes: Vec<RegimeSummary>,
    /// Aggregates for the single-link schemes evaluated on the `c21 = 0`
    /// and `c12 = 0` slices of the grid.
    pub slices: Vec<SliceSummary>,
    /// Largest sum-rate gap seen anywhere on the grid.
    pub max_sum_gap: f64,
    /// Whether the sum-rate gap stayed within two bits everywhere.
    pub sum_gap_ok: bool,
    /// Human-readable diagnostics for every failure, empty on success.
    pub failures: Vec<String>,
    /// True when every per-tuple check, slice check, and the sum-gap
    /// check passed.
    pub all_pass: bool,
}

const SLICE_COUNT: usize = 8;

const SLICE_LABELS: [&str; SLICE_COUNT] = [
    "forward link only: zero-forcing, gain <= 1",
    "forward link only: zero-forcing, gain > 1",
    "reverse link only: rate splitting, gain <= 1",
    "reverse link only: rate splitting, gain > 1",
    "reverse link only: common relaying, gain <= 1",
    "reverse link only: common relaying, gain > 1",
    "reverse link only: private/common relaying",
    "reverse link only: private/common relaying, p1 <= 1",
];

const SLICE_CLAIMS: [(f64, f64); SLICE_COUNT] = [
    (0.5, 1.0),
    (0.5, 0.5),
    (0.0, 1.5),
    (0.0, 1.0),
    (0.5, 1.5),
    (0.5, 0.5),
    (1.0, 0.5),
    (0.5, 0.5),
];

struct SliceHit {
    bucket: usize,
    deltas: FacetDeltas,
    pass: bool,
    diagnostic: Option<String>,
}

struct TupleEval {
    record: TupleRecord,
    diagnostic: Option<String>,
    slices: Vec<SliceHit>,
}

fn describe_params(p: &ChannelParams) -> String {
    format!(
        "p1={}, p2={}, a={}, c12={}, c21={}",
        p.p1, p.p2, p.a, p.c12, p.c21
    )
}

fn gap_against(
    outer: &RateRegion2,
    scheme: &SchemeOutput,
    what: &str,
    p: &ChannelParams,
) -> Result<(FacetDeltas, bool, Option<String>)> {
    match region_gap(outer, &scheme.region, scheme.claimed_gap, GAP_TOL) {
        Ok(report) => {
            let diagnostic = if report.pass {
                None
            } else {
                Some(format!(
                    "{what} at {}: gaps ({:.6}, {:.6}, {:.6}, {:.6}, {:.6}) exceed claim ({}, {}) or boundary check failed (boundary_ok={})",
                    describe_params(p),
                    report.deltas.delta_r1,
                    report.deltas.delta_r2,
                    report.deltas.delta_sum,
                    report.deltas.delta_2r1_r2,
                    report.deltas.delta_r1_2r2,
                    report.claimed.0,
                    report.claimed.1,
                    report.boundary_ok,
                ))
            };
            Ok((report.deltas, report.pass, diagnostic))
        }
        Err(Error::NotContained(msg)) => Ok((
            FacetDeltas::zero(),
            false,
            Some(format!("{what} at {}: {msg}", describe_params(p))),
        )),
        Err(e) => Err(e),
    }
}

fn evaluate_tuple(p: &ChannelParams) -> Result<TupleEval> {
    let regime = classify_regime(p);
    let outer = outer_bound(p)?;
    let scheme = achievable_for(p)?;
    let (deltas, pass, diagnostic) = gap_against(&outer.region, &scheme, "regime scheme", p)?;

    let record = TupleRecord {
        p1: p.p1,
        p2: p.p2,
        a: p.a,
        c12: p.c12.finite().unwrap_or(f64::INFINITY),
        c21: p.c21.finite().unwrap_or(f64::INFINITY),
        regime,
        deltas,
        pass,
    };

    let mut slices = Vec::new();
    let interference_limited = p.cross_power() >= 1.0;

    if p.c21.finite() == Some(0.0) && interference_limited {
        let zf = scheme_zero_forcing(p)?;
        let bucket = if p.a <= 1.0 { 0 } else { 1 };
        let (deltas, pass, diagnostic) =
            gap_against(&outer.region, &zf, SLICE_LABELS[bucket], p)?;
        slices.push(SliceHit {
            bucket,
            deltas,
            pass,
            diagnostic,
        });
    }

    if p.c12.finite() == Some(0.0) && interference_limited {
        let (relay, bucket) = match classify_unidirectional_relay_case(p) {
            RelayCase::NonCooperative => {
                (scheme_relay_noncoop(p)?, if p.a <= 1.0 { 2 } else { 3 })
            }
            RelayCase::Common => (scheme_relay_common(p)?, if p.a <= 1.0 { 4 } else { 5 }),
            RelayCase::PrivateCommon => {
                (scheme_relay_private_common(p)?, if p.p1 > 1.0 { 6 } else { 7 })
            }
        };
        let (deltas, pass, diagnostic) =
            gap_against(&outer.region, &relay, SLICE_LABELS[bucket], p)?;
        slices.push(SliceHit {
            bucket,
            deltas,
            pass,
            diagnostic,
        });
    }

    Ok(TupleEval {
        record,
        diagnostic,
        slices,
    })
}

/// Sweeps the grid, measuring every tuple's achievable region against the
/// outer bound and checking the per-regime gap claims, the two-bit
/// sum-rate bound, and the single-link claims on the `c12 = 0` and
/// `c21 = 0` slices.
///
/// The grid must cover all five regimes. Records are returned in grid
/// order regardless of parallel execution.
pub fn verify_claims(grid: &SweepGrid) -> Result<SweepSummary> {
    let tuples = grid.tuples()?;
    if tuples.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    let mut seen = [false; 5];
    for p in &tuples {
        let idx = Regime::ALL
            .iter()
            .position(|r| *r == classify_regime(p))
            .unwrap();
        seen[idx] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidParameter(
            "sweep grid does not cover all five regimes".into(),
        ));
    }

    let evals: Vec<TupleEval> = tuples
        .par_iter()
        .map(evaluate_tuple)
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(evals.len());
    let mut failures = Vec::new();
    let mut regime_acc: Vec<(usize, usize, FacetDeltas)> =
        vec![(0, 0, FacetDeltas::zero()); Regime::ALL.len()];
    let mut slice_acc: Vec<(usize, usize, FacetDeltas)> =
        vec![(0, 0, FacetDeltas::zero()); SLICE_COUNT];
    let mut max_sum_gap = f64::NEG_INFINITY;

    for eval in evals {
        let idx = Regime::ALL
            .iter()
            .position(|r| *r == eval.record.regime)
            .unwrap();
        let acc = &mut regime_acc[idx];
        acc.0 += 1;
        acc.1 += usize::from(eval.record.pass);
        acc.2.max_with(&eval.record.deltas);
        max_sum_gap = max_sum_gap.max(eval.record.deltas.delta_sum);
        if let Some(msg) = eval.diagnostic {
            failures.push(msg);
        }
        for hit in eval.slices {
            let acc = &mut slice_acc[hit.bucket];
            acc.0 += 1;
            acc.1 += usize::from(hit.pass);
            acc.2.max_with(&hit.deltas);
            if let Some(msg) = hit.diagnostic {
                failures.push(msg);
            }
        }
        records.push(eval.record);
    }

    let regimes: Vec<RegimeSummary> = Regime::ALL
        .iter()
        .zip(regime_acc)
        .map(|(regime, (tuples, passes, worst))| RegimeSummary {
            regime: *regime,
            claimed: regime.claimed_gap(),
            tuples,
            passes,
            worst,
        })
        .collect();
    let slices: Vec<SliceSummary> = SLICE_LABELS
        .iter()
        .zip(SLICE_CLAIMS)
        .zip(slice_acc)
        .map(|((label, claimed), (tuples, passes, worst))| SliceSummary {
            label: label.to_string(),
            claimed,
            tuples,
            passes,
            worst,
        })
        .collect();

    let sum_gap_ok = max_sum_gap <= 2.0 + GAP_TOL;
    if !sum_gap_ok {
        failures.push(format!(
            "sum-rate gap {max_sum_gap:.6} exceeds two bits somewhere on the grid"
        ));
    }
    let all_pass = failures.is_empty();

    Ok(SweepSummary {
        records,
        regimes,
        slices,
        max_sum_gap,
        sum_gap_ok,
        failures,
        all_pass,
    })
}

/// What to maximize when splitting a conferencing budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitObjective {
    /// Maximize user 2's rate.
    MaxR2,
    /// Maximize the sum rate.
    MaxSum,
    /// Maximize `i * R1 + j * R2`.
    Weighted { i: f64, j: f64 },
}

impl SplitObjective {
    /// The direction `(i, j)` the objective maximizes along.
    pub fn direction(&self) -> Result<(f64, f64)> {
        match *self {
            SplitObjective::MaxR2 => Ok((0.0, 1.0)),
            SplitObjective::MaxSum => Ok((1.0, 1.0)),
            SplitObjective::Weighted { i, j } => {
                if !(i.is_finite() && j.is_finite() && i >= 0.0 && j >= 0.0 && i + j > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "weighted objective needs finite nonnegative weights, not ({i}, {j})"
                    )));
                }
                Ok((i, j))
            }
        }
    }
}

/// The best conferencing split found by [`optimize_split`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitResult {
    pub c12: f64,
    pub c21: f64,
    /// Objective value at the best split.
    pub value: f64,
    /// Achievable region at the best split.
    pub region: RateRegion2,
}

/// Grid-searches the split of a total conferencing budget
/// `c12 + c21 = c_total` that maximizes the objective over the achievable
/// region, trying `grid_size` evenly spaced splits. Ties break toward
/// smaller `c12`.
pub fn optimize_split(
    p1: f64,
    p2: f64,
    a: f64,
    c_total: f64,
    objective: SplitObjective,
    grid_size: usize,
) -> Result<SplitResult> {
    if !(c_total.is_finite() && c_total >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total conferencing capacity must be finite and nonnegative, not {c_total}"
        )));
    }
    let (i, j) = objective.direction()?;
    let n = if c_total == 0.0 { 1 } else { grid_size };
    if c_total > 0.0 && n < 2 {
        return Err(Error::InvalidParameter(
            "splitting a positive budget needs a grid of at least two points".into(),
        ));
    }

    let mut best: Option<SplitResult> = None;
    for k in 0..n {
        let c12 = if n == 1 {
            0.0
        } else {
            c_total * k as f64 / (n - 1) as f64
        };
        let c21 = (c_total - c12).max(0.0);
        let params = ChannelParams::finite(p1, p2, a, c12, c21)?;
        let scheme = achievable_for(&params)?;
        let value = scheme.region.support(i, j)?;
        if best.as_ref().map_or(true, |b| value > b.value + 1e-12) {
            best = Some(SplitResult {
                c12,
                c21,
                value,
                region: scheme.region,
            });
        }
    }
    Ok(best.expect("split search over a nonempty grid"))
}

/// Comparison of the best conferencing split against the two classical
/// cognitive-relay baselines.
#[derive(Debug, Clone, Serialize)]
pub struct CrzcComparison {
    pub c_total: f64,
    /// Best split and value when maximizing user 2's rate.
    pub r2_split: (f64, f64),
    pub r2_value: f64,
    /// User 2's rate in the type I baseline (interference fully known at
    /// both, so each user gets its interference-free capacity).
    pub type1_r2: f64,
    pub r2_beats_type1: bool,
    /// Best split and value when maximizing the sum rate.
    pub sum_split: (f64, f64),
    pub sum_value: f64,
    /// Sum rate of the type II baseline. For gains above one this is an
    /// outer bound on the baseline rather than its exact frontier.
    pub type2_sum: f64,
    pub sum_beats_type2: bool,
    /// True when `type2_sum` is the conservative outer-bound reference.
    pub type2_is_outer: bool,
}

/// Number of correlation grid points used for the type II baseline
/// frontier in [`compare_to_crzc`].
pub const CRZC_RHO_GRID: usize = 10_001;

/// Optimizes the conferencing split for user 2's rate and for the sum
/// rate, then compares both against the cognitive-relay baselines at the
/// same powers and gain.
pub fn compare_to_crzc(
    p1: f64,
    p2: f64,
    a: f64,
    c_total: f64,
    grid_size: usize,
) -> Result<CrzcComparison> {
    let best_r2 = optimize_split(p1, p2, a, c_total, SplitObjective::MaxR2, grid_size)?;
    let best_sum = optimize_split(p1, p2, a, c_total, SplitObjective::MaxSum, grid_size)?;

    let base = ChannelParams::finite(p1, p2, a, 0.0, 0.0)?;
    let type1_r2 = crzc_type1_capacity(&base)?
        .max_r2()
        .ok_or_else(|| Error::UnboundedRegion("type I baseline".into()))?;

    let (type2_sum, type2_is_outer) = if a <= 1.0 {
        (crzc_type2_region(&base, CRZC_RHO_GRID)?.support(1.0, 1.0)?, false)
    } else {
        (
            crzc_type2_outer_strong(&base)?.region.support(1.0, 1.0)?,
            true,
        )
    };

    Ok(CrzcComparison {
        c_total,
        r2_split: (best_r2.c12, best_r2.c21),
        r2_value: best_r2.value,
        type1_r2,
        r2_beats_type1: best_r2.value > type1_r2,
        sum_split: (best_sum.c12, best_sum.c21),
        sum_value: best_sum.value,
        type2_sum,
        sum_beats_type2: best_sum.value > type2_sum,
        type2_is_outer,
    })
}
