//! Achievable rate regions, one constructor per transmission scheme.
//!
//! Every constructor validates that the parameters lie in the part of the
//! parameter space where its scheme is defined, computes the scheme's power
//! allocation, and returns a [`SchemeOutput`] holding the closed-form
//! two-dimensional region together with the allocation and, for the layered
//! schemes, the per-stream decoder system the closed form was derived from.
//! [`achievable_for`] picks the right constructor from the classification
//! in [`crate::channel::classify_regime`].

mod raw;

pub use raw::{
    relay_common_system, relay_private_common_system, zero_forcing_relay_system,
    zero_forcing_system, RawDecoderSystem,
};

use serde::{Deserialize, Serialize};

use crate::channel::{cap, cap_inv, classify_regime, ChannelParams, Regime};
use crate::polytope::RateRegion2;
use crate::{Error, Result};

/// Slack for regime preconditions, so tuples sitting numerically on a
/// regime boundary are accepted by the constructors on both sides.
const PRE_SLACK: f64 = 1e-9;

/// Transmit powers and derived quantities of a scheme instance.
///
/// Fields that a scheme does not use are zero (`d` is one). Names follow
/// the stream structure: `p1p`/`p1z`/`p1c` are user 1's private,
/// zero-forced, and common stream powers; `p2p` is user 2's own stream
/// power; `p2r` (or its private/common split `p2rp`/`p2rc`) is the power
/// user 1 spends relaying user 2's message; `c_prime` is the part of the
/// reverse conference link used to describe the relayed private stream;
/// `d = 1 + a^2 * p1p` is the interference-plus-noise level at receiver 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub p1p: f64,
    pub p1z: f64,
    pub p1c: f64,
    pub p2p: f64,
    pub p2r: f64,
    pub p2rp: f64,
    pub p2rc: f64,
    pub c_prime: f64,
    pub d: f64,
}

impl PowerAllocation {
    /// Allocation with every power zero and a unit noise level.
    pub fn zeros() -> Self {
        Self {
            p1p: 0.0,
            p1z: 0.0,
            p1c: 0.0,
            p2p: 0.0,
            p2r: 0.0,
            p2rp: 0.0,
            p2rc: 0.0,
            c_prime: 0.0,
            d: 1.0,
        }
    }
}

/// Which transmission strategy produced a [`SchemeOutput`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Both users transmit at full power; receiver 2 treats the cross
    /// signal as noise.
    TreatAsNoise,
    /// User 1 splits off a stream that user 2 cancels using the forward
    /// conference description.
    ZeroForcing,
    /// Rate splitting at user 1 with joint decoding at receiver 2, no
    /// conferencing.
    RelayNonCooperative,
    /// User 1 forwards a common piece of user 2's message received over
    /// the reverse conference link.
    RelayCommon,
    /// User 1 forwards both a common and a private piece of user 2's
    /// message, giving up its own private stream.
    RelayPrivateCommon,
    /// Relaying plus zero-forcing where the forward description carries a
    /// compressed version of user 1's private stream.
    CompressedZeroForcingRelay,
    /// Relaying of user 2's message combined with an analog zero-forced
    /// stream at user 1.
    ZeroForcingAndRelay,
}

impl SchemeKind {
    /// Short human-readable name.
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::TreatAsNoise => "treat-as-noise",
            SchemeKind::ZeroForcing => "zero-forcing",
            SchemeKind::RelayNonCooperative => "relay-noncooperative",
            SchemeKind::RelayCommon => "relay-common",
            SchemeKind::RelayPrivateCommon => "relay-private-common",
            SchemeKind::CompressedZeroForcingRelay => "compressed-zero-forcing-relay",
            SchemeKind::ZeroForcingAndRelay => "zero-forcing-and-relay",
        }
    }
}

/// An achievable region together with how it was obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeOutput {
    /// Classification of the parameters the scheme was built for.
    pub regime: Regime,
    /// The strategy that produced the region.
    pub kind: SchemeKind,
    /// Transmit powers used by the strategy.
    pub allocation: PowerAllocation,
    /// Closed-form achievable region over `(R1, R2)`.
    pub region: RateRegion2,
    /// Per-stream decoder system the region was derived from, when the
    /// scheme is layered. Not serialized.
    #[serde(skip)]
    pub raw_decoder_system: Option<RawDecoderSystem>,
    /// Gap `(delta1, delta2)` claimed for this scheme against the outer
    /// bound, in bits.
    pub claimed_gap: (f64, f64),
}

fn checked_power(value: f64, what: &str) -> Result<f64> {
    if value < -1e-9 {
        return Err(Error::InvalidParameter(format!(
            "power {what} would be negative ({value})"
        )));
    }
    Ok(value.max(0.0))
}

fn regime_check(ok: bool, requirement: &str, params: &ChannelParams) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::RegimeMismatch(format!(
            "{requirement} fails at p1={}, p2={}, a={}",
            params.p1, params.p2, params.a
        )))
    }
}

fn zf_allocation(params: &ChannelParams) -> Result<PowerAllocation> {
    let a2 = params.a * params.a;
    let p1p = if params.a <= 1.0 { 1.0 / a2 } else { 0.0 };
    let head = checked_power(params.p1 - p1p, "p1 - p1p")? / 2.0;
    let p1z = head.min(params.p2 / (2.0 * a2));
    Ok(PowerAllocation {
        p1p,
        p1z,
        p1c: head,
        p2p: params.p2 / 2.0,
        d: 1.0 + a2 * p1p,
        ..PowerAllocation::zeros()
    })
}

fn zero_forcing_full_rows(params: &ChannelParams, alloc: &PowerAllocation) -> Result<Vec<(f64, f64, f64)>> {
    let a2 = params.a * params.a;
    let c12 = params.c12_finite()?;
    let d = alloc.d;
    let boosted = cap((a2 * alloc.p1c + alloc.p2p) / d);
    Ok(vec![
        (1.0, 0.0, cap(alloc.p1p + alloc.p1z + alloc.p1c)),
        (1.0, 0.0, cap(alloc.p1p + alloc.p1c) + c12),
        (0.0, 1.0, cap(alloc.p2p / d)),
        (1.0, 1.0, cap(alloc.p1p + alloc.p1z) + boosted),
        (1.0, 1.0, cap(alloc.p1p) + c12 + boosted),
    ])
}

fn zero_forcing_simplified_rows(params: &ChannelParams) -> Result<Vec<(f64, f64, f64)>> {
    let a2 = params.a * params.a;
    let c12 = params.c12_finite()?;
    let excess = params.cross_power() - 1.0;
    Ok(vec![
        (1.0, 0.0, cap(params.p1 / 2.0)),
        (0.0, 1.0, cap(params.p2 / 4.0)),
        (
            1.0,
            1.0,
            cap(1.0 / a2) + cap((excess + params.p2) / 4.0) + c12,
        ),
        (
            1.0,
            1.0,
            cap((excess.min(params.p2) + 2.0) / (2.0 * a2)) + cap(excess.max(params.p2) / 4.0),
        ),
    ])
}

/// Full zero-forcing region before any simplification, evaluated at the
/// scheme's power allocation. This is what projecting
/// [`zero_forcing_system`] yields.
pub fn zero_forcing_full_region(params: &ChannelParams) -> Result<RateRegion2> {
    regime_check(
        params.cross_power() >= 1.0 - PRE_SLACK,
        "zero-forcing needs a^2*p1 >= 1",
        params,
    )?;
    let alloc = zf_allocation(params)?;
    RateRegion2::from_rows(&zero_forcing_full_rows(params, &alloc)?)
}

/// Simplified zero-forcing region with the private power pinned to the
/// noise floor at receiver 2. For cross gains at most one this is a subset
/// of [`zero_forcing_full_region`].
pub fn zero_forcing_simplified_region(params: &ChannelParams) -> Result<RateRegion2> {
    regime_check(
        params.cross_power() >= 1.0 - PRE_SLACK,
        "zero-forcing needs a^2*p1 >= 1",
        params,
    )?;
    RateRegion2::from_rows(&zero_forcing_simplified_rows(params)?)
}

/// Zero-forcing via the forward conference link.
///
/// Requires `a^2*p1 >= 1` and a finite `c12`; `c21` is not used. For cross
/// gains at most one the simplified region is returned and the claimed gap
/// is `(0.5, 1)`; for stronger gains the full region is used with claim
/// `(0.5, 0.5)`.
pub fn scheme_zero_forcing(params: &ChannelParams) -> Result<SchemeOutput> {
    regime_check(
        params.cross_power() >= 1.0 - PRE_SLACK,
        "zero-forcing needs a^2*p1 >= 1",
        params,
    )?;
    let alloc = zf_allocation(params)?;
    let (region, claimed_gap) = if params.a <= 1.0 {
        (
            RateRegion2::from_rows(&zero_forcing_simplified_rows(params)?)?,
            (0.5, 1.0),
        )
    } else {
        (
            RateRegion2::from_rows(&zero_forcing_full_rows(params, &alloc)?)?,
            (0.5, 0.5),
        )
    };
    let raw = zero_forcing_system(params, &alloc)?;
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::ZeroForcing,
        allocation: alloc,
        region,
        raw_decoder_system: Some(raw),
        claimed_gap,
    })
}

fn split_private_power(params: &ChannelParams) -> f64 {
    let a2 = params.a * params.a;
    if params.a <= 1.0 {
        1.0 / a2
    } else {
        0.0
    }
}

/// Rate splitting without conferencing, for cross powers between the noise
/// floor and `p2 + 1`.
///
/// Neither conference link is used. The claimed gap is `(0, 1.5)` for
/// cross gains at most one and `(0, 1)` otherwise.
pub fn scheme_relay_noncoop(params: &ChannelParams) -> Result<SchemeOutput> {
    let cross = params.cross_power();
    regime_check(
        cross >= 1.0 - PRE_SLACK && cross <= params.p2 + 1.0 + PRE_SLACK,
        "rate splitting needs 1 <= a^2*p1 <= p2 + 1",
        params,
    )?;
    let a2 = params.a * params.a;
    let p1p = split_private_power(params);
    let p1c = checked_power(params.p1 - p1p, "p1 - p1p")?;
    let d = 1.0 + a2 * p1p;
    let alloc = PowerAllocation {
        p1p,
        p1c,
        p2p: params.p2,
        d,
        ..PowerAllocation::zeros()
    };
    let region = RateRegion2::from_rows(&[
        (1.0, 0.0, cap(params.p1)),
        (0.0, 1.0, cap(params.p2 / d)),
        (1.0, 1.0, cap(p1p) + cap((a2 * p1c + params.p2) / d)),
    ])?;
    let claimed_gap = if params.a <= 1.0 { (0.0, 1.5) } else { (0.0, 1.0) };
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::RelayNonCooperative,
        allocation: alloc,
        region,
        raw_decoder_system: None,
        claimed_gap,
    })
}

fn relay_common_allocation(params: &ChannelParams) -> Result<PowerAllocation> {
    let a2 = params.a * params.a;
    let p1p = split_private_power(params);
    let head = checked_power(params.p1 - p1p, "p1 - p1p")? / 2.0;
    Ok(PowerAllocation {
        p1p,
        p1c: head,
        p2r: head,
        p2p: params.p2,
        d: 1.0 + a2 * p1p,
        ..PowerAllocation::zeros()
    })
}

fn relay_common_region_rows(
    params: &ChannelParams,
    alloc: &PowerAllocation,
) -> Result<Vec<(f64, f64, f64)>> {
    let a2 = params.a * params.a;
    let c21 = params.c21_finite()?;
    let d = alloc.d;
    let forwarded = alloc.p1c + alloc.p2r;
    Ok(vec![
        (1.0, 0.0, cap(alloc.p1p + alloc.p1c)),
        (0.0, 1.0, cap(alloc.p2p / d) + c21),
        (0.0, 1.0, cap((a2 * forwarded + 2.0 * alloc.p2p) / (2.0 * d))),
        (
            1.0,
            1.0,
            cap(alloc.p1p) + cap((a2 * forwarded + alloc.p2p) / d) - 0.5,
        ),
    ])
}

/// Decode-and-forward relaying of a common stream over the reverse
/// conference link, for strong cross power and cross gain at most
/// `sqrt(p2 + 1)`.
///
/// Requires a finite `c21`; `c12` is not used. The claimed gap is
/// `(0.5, 1.5)` for cross gains at most one and `(0.5, 0.5)` otherwise.
pub fn scheme_relay_common(params: &ChannelParams) -> Result<SchemeOutput> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK && a2 <= params.p2 + 1.0 + PRE_SLACK,
        "common relaying needs a^2*p1 >= p2 + 1 and a^2 <= p2 + 1",
        params,
    )?;
    let alloc = relay_common_allocation(params)?;
    let region = RateRegion2::from_rows(&relay_common_region_rows(params, &alloc)?)?;
    let raw = relay_common_system(params, &alloc)?;
    let claimed_gap = if params.a <= 1.0 { (0.5, 1.5) } else { (0.5, 0.5) };
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::RelayCommon,
        allocation: alloc,
        region,
        raw_decoder_system: Some(raw),
        claimed_gap,
    })
}

/// Relaying with the forwarded message split into common and private
/// pieces, for very strong cross gains `a^2 > p2 + 1`.
///
/// Requires a finite `c21`; `c12` is not used. For `p1 <= 1` user 1 stays
/// silent on its own message and relays only, with claimed gap
/// `(0.5, 0.5)`; otherwise the claimed gap is `(1, 0.5)`.
pub fn scheme_relay_private_common(params: &ChannelParams) -> Result<SchemeOutput> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK && a2 >= params.p2 + 1.0 - PRE_SLACK,
        "private/common relaying needs a^2*p1 >= p2 + 1 and a^2 >= p2 + 1",
        params,
    )?;
    let c21 = params.c21_finite()?;
    let regime = classify_regime(params);

    if params.p1 <= 1.0 {
        let alloc = PowerAllocation {
            p2rp: params.p1,
            p2p: params.p2,
            c_prime: c21,
            ..PowerAllocation::zeros()
        };
        let r2 = (cap(params.p2) + c21).min(cap(params.cross_power() + params.p2));
        let region = RateRegion2::from_rows(&[(1.0, 0.0, 0.0), (0.0, 1.0, r2)])?;
        return Ok(SchemeOutput {
            regime,
            kind: SchemeKind::RelayPrivateCommon,
            allocation: alloc,
            region,
            raw_decoder_system: None,
            claimed_gap: (0.5, 0.5),
        });
    }

    let half = (params.p1 - 1.0) / 2.0;
    let alloc = PowerAllocation {
        p1c: half,
        p2rc: half,
        p2rp: 1.0,
        p2p: params.p2,
        c_prime: cap(a2 / (params.p2 + 1.0)).min(c21),
        ..PowerAllocation::zeros()
    };
    let region = RateRegion2::from_rows(&[
        (1.0, 0.0, cap((params.p1 - 1.0) / 4.0)),
        (0.0, 1.0, cap(params.p2) + c21),
        (1.0, 1.0, cap(params.cross_power() + params.p2) - 0.5),
    ])?;
    let raw = relay_private_common_system(params, &alloc)?;
    Ok(SchemeOutput {
        regime,
        kind: SchemeKind::RelayPrivateCommon,
        allocation: alloc,
        region,
        raw_decoder_system: Some(raw),
        claimed_gap: (1.0, 0.5),
    })
}

/// Scheme for the noise-limited regime: both users send at full power and
/// receiver 2 treats the cross signal as noise. Neither link is used.
pub fn scheme_bd_a(params: &ChannelParams) -> Result<SchemeOutput> {
    let cross = params.cross_power();
    regime_check(
        cross <= 1.0 + PRE_SLACK,
        "treat-as-noise is used only for a^2*p1 <= 1",
        params,
    )?;
    let alloc = PowerAllocation {
        p1p: params.p1,
        p2p: params.p2,
        d: 1.0 + cross,
        ..PowerAllocation::zeros()
    };
    let region = RateRegion2::from_rows(&[
        (1.0, 0.0, cap(params.p1)),
        (0.0, 1.0, cap(params.p2 / (1.0 + cross))),
    ])?;
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::TreatAsNoise,
        allocation: alloc,
        region,
        raw_decoder_system: None,
        claimed_gap: Regime::NoiseLimitedA.claimed_gap(),
    })
}

/// Scheme for the weak-relay regime: zero-forcing with the zero-forced
/// power chosen to exhaust the interference margin, so user 2 keeps
/// `p2 - (a^2*p1 - 1)/2` for its own stream.
pub fn scheme_bd_b(params: &ChannelParams) -> Result<SchemeOutput> {
    let cross = params.cross_power();
    regime_check(
        cross >= 1.0 - PRE_SLACK && cross <= params.p2 + 1.0 + PRE_SLACK,
        "margin-filling zero-forcing needs 1 <= a^2*p1 <= p2 + 1",
        params,
    )?;
    let c12 = params.c12_finite()?;
    let a2 = params.a * params.a;
    let excess = checked_power(cross - 1.0, "a^2*p1 - 1")?;
    let p1p = split_private_power(params);
    let p1z = excess / (2.0 * a2);
    let p1c = checked_power(params.p1 - p1p, "p1 - p1p")? / 2.0;
    let p2p = checked_power(params.p2 - excess / 2.0, "p2 - (a^2*p1 - 1)/2")?;
    let alloc = PowerAllocation {
        p1p,
        p1z,
        p1c,
        p2p,
        d: 1.0 + a2 * p1p,
        ..PowerAllocation::zeros()
    };
    let region = RateRegion2::from_rows(&[
        (1.0, 0.0, cap(params.p1 / 2.0)),
        (0.0, 1.0, cap(p2p)),
        (
            1.0,
            1.0,
            cap(1.0 / a2) + cap((excess + params.p2) / 4.0) + c12,
        ),
        (
            1.0,
            1.0,
            cap((excess.min(params.p2) + 2.0) / (2.0 * a2)) + cap(excess.max(params.p2) / 4.0),
        ),
    ])?;
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::ZeroForcing,
        allocation: alloc,
        region,
        raw_decoder_system: None,
        claimed_gap: Regime::WeakRelayB.claimed_gap(),
    })
}

/// Scheme for the strong-relay, weak-gain regime: common relaying where
/// the forward link carries a compressed version of user 1's private
/// stream, letting user 2 cancel it down to the noise floor.
pub fn scheme_bd_c(params: &ChannelParams) -> Result<SchemeOutput> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK && a2 <= 1.0 + PRE_SLACK,
        "compressed zero-forcing relay needs a^2*p1 >= p2 + 1 and a <= 1",
        params,
    )?;
    let c12 = params.c12_finite()?;
    params.c21_finite()?;
    let scaled_private = (cap_inv(c12) + 1.0).min(params.p2 / 2.0 + 1.0);
    let p1p = scaled_private / a2;
    let head = checked_power(params.p1 - p1p, "p1 - p1p")? / 2.0;
    let p2p = checked_power(params.p2 - (scaled_private - 1.0), "p2 - (a^2*p1p - 1)")?;
    let alloc = PowerAllocation {
        p1p,
        p1c: head,
        p2r: head,
        p2p,
        d: 1.0 + scaled_private,
        ..PowerAllocation::zeros()
    };
    let region = RateRegion2::from_rows(&relay_common_region_rows(params, &alloc)?)?;
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::CompressedZeroForcingRelay,
        allocation: alloc,
        region,
        raw_decoder_system: None,
        claimed_gap: Regime::StrongRelayWeakGainC.claimed_gap(),
    })
}

fn zf_relay_allocation(params: &ChannelParams) -> Result<PowerAllocation> {
    let a2 = params.a * params.a;
    let p1z = params.p2 / (2.0 * a2);
    let head = checked_power(params.p1 - p1z, "p1 - p1z")? / 2.0;
    Ok(PowerAllocation {
        p1z,
        p1c: head,
        p2r: head,
        p2p: params.p2 / 2.0,
        ..PowerAllocation::zeros()
    })
}

/// Scheme for the strong-relay, mid-gain regime: user 1 relays half of its
/// remaining power for user 2 and zero-forces with the other piece, while
/// user 2 splits its power between its own stream and the analog
/// cancellation signal.
pub fn scheme_bd_d(params: &ChannelParams) -> Result<SchemeOutput> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK
            && a2 >= 1.0 - PRE_SLACK
            && a2 <= params.p2 + 1.0 + PRE_SLACK,
        "zero-forcing-and-relay needs a^2*p1 >= p2 + 1 and 1 <= a^2 <= p2 + 1",
        params,
    )?;
    let c12 = params.c12_finite()?;
    let c21 = params.c21_finite()?;
    let alloc = zf_relay_allocation(params)?;
    let cross = params.cross_power();
    let region = RateRegion2::from_rows(&[
        (1.0, 0.0, cap(alloc.p1z + alloc.p1c)),
        (1.0, 0.0, cap(alloc.p1c) + c12),
        (0.0, 1.0, cap(params.p2 / 2.0) + c21),
        (0.0, 1.0, cap((2.0 * cross + params.p2) / 4.0)),
        (1.0, 1.0, cap(cross) + c12 - 0.5),
        (1.0, 1.0, cap(cross) + cap(params.p2 / (2.0 * a2)) - 0.5),
        (1.0, 1.0, cap(params.p1) + cap(params.p2 / 2.0) - 0.5),
    ])?;
    let raw = zero_forcing_relay_system(params, &alloc)?;
    Ok(SchemeOutput {
        regime: classify_regime(params),
        kind: SchemeKind::ZeroForcingAndRelay,
        allocation: alloc,
        region,
        raw_decoder_system: Some(raw),
        claimed_gap: Regime::StrongRelayMidGainD.claimed_gap(),
    })
}

/// Scheme for the strong-relay, strong-gain regime: private/common
/// relaying, with the regime-level gap claim `(1, 0.5)` covering both of
/// its power branches.
pub fn scheme_bd_e(params: &ChannelParams) -> Result<SchemeOutput> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK && a2 >= params.p2 + 1.0 - PRE_SLACK,
        "this regime needs a^2*p1 >= p2 + 1 and a^2 >= p2 + 1",
        params,
    )?;
    let mut out = scheme_relay_private_common(params)?;
    out.claimed_gap = Regime::StrongRelayStrongGainE.claimed_gap();
    Ok(out)
}

/// Builds the scheme designated for `regime` at `params`.
pub fn scheme_for_regime(params: &ChannelParams, regime: Regime) -> Result<SchemeOutput> {
    match regime {
        Regime::NoiseLimitedA => scheme_bd_a(params),
        Regime::WeakRelayB => scheme_bd_b(params),
        Regime::StrongRelayWeakGainC => scheme_bd_c(params),
        Regime::StrongRelayMidGainD => scheme_bd_d(params),
        Regime::StrongRelayStrongGainE => scheme_bd_e(params),
    }
}

/// Classifies `params` and builds the scheme for its regime.
pub fn achievable_for(params: &ChannelParams) -> Result<SchemeOutput> {
    scheme_for_regime(params, classify_regime(params))
}

/// The common-relaying region as produced directly by eliminating the
/// per-stream variables, before redundant rows are dropped. Useful for
/// cross-checking the projection machinery against the closed form.
pub fn relay_common_expanded_region(params: &ChannelParams) -> Result<RateRegion2> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK && a2 <= params.p2 + 1.0 + PRE_SLACK,
        "common relaying needs a^2*p1 >= p2 + 1 and a^2 <= p2 + 1",
        params,
    )?;
    let c21 = params.c21_finite()?;
    let al = relay_common_allocation(params)?;
    let d = al.d;
    let forwarded = al.p1c + al.p2r;
    let hit2 = cap((al.p2p + a2 * al.p1c) / d);
    RateRegion2::from_rows(&[
        (1.0, 0.0, cap(al.p1p + al.p1c)),
        (1.0, 0.0, cap(al.p1p) + cap(a2 * forwarded / d)),
        (0.0, 1.0, cap(al.p2p / d) + c21),
        (0.0, 1.0, cap((a2 * al.p2r + al.p2p) / d)),
        (1.0, 1.0, cap(al.p1p + al.p1c + al.p2r) + cap(al.p2p / d)),
        (1.0, 1.0, hit2 + cap(al.p1p + al.p2r)),
        (1.0, 1.0, cap((al.p2p + a2 * forwarded) / d) + cap(al.p1p)),
        (1.0, 1.0, hit2 + cap(al.p1p) + c21),
        (2.0, 1.0, hit2 + cap(a2 * forwarded / d) + 2.0 * cap(al.p1p)),
        (2.0, 1.0, hit2 + cap(al.p1p) + cap(al.p1p + al.p1c + al.p2r)),
        (
            1.0,
            2.0,
            cap(al.p2p / d) + cap((al.p2p + a2 * forwarded) / d) + cap(al.p1p + al.p2r),
        ),
        (
            1.0,
            2.0,
            2.0 * cap(al.p2p / d) + cap(al.p2r + al.p1c) + cap(al.p1p + al.p2r),
        ),
    ])
}

/// The private/common-relaying region as produced directly by eliminating
/// the per-stream variables, before redundant rows are dropped. Defined
/// for `p1 > 1`.
pub fn relay_private_common_expanded_region(params: &ChannelParams) -> Result<RateRegion2> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK
            && a2 >= params.p2 + 1.0 - PRE_SLACK
            && params.p1 > 1.0,
        "expanded private/common relaying needs a^2*p1 >= p2 + 1, a^2 >= p2 + 1, p1 > 1",
        params,
    )?;
    let c21 = params.c21_finite()?;
    let c_prime = cap(a2 / (params.p2 + 1.0)).min(c21);
    let relayed = cap(a2 * (params.p1 + 1.0) / 2.0 + params.p2);
    RateRegion2::from_rows(&[
        (1.0, 0.0, cap((params.p1 - 1.0) / 4.0)),
        (0.0, 1.0, cap(params.p2) + c21),
        (0.0, 1.0, relayed),
        (1.0, 1.0, cap((params.p1 - 1.0) / 2.0) + c_prime + cap(params.p2)),
        (1.0, 1.0, cap(params.cross_power() + params.p2)),
        (1.0, 1.0, relayed + c21 - c_prime),
        (
            1.0,
            1.0,
            relayed + cap((params.cross_power() - 1.0) / (2.0 * (params.p2 + 1.0))),
        ),
        (2.0, 1.0, relayed + cap((params.p1 - 1.0) / 2.0)),
    ])
}

/// The zero-forcing-and-relay region as produced directly by eliminating
/// the per-stream variables, before redundant rows are dropped.
pub fn zero_forcing_relay_expanded_region(params: &ChannelParams) -> Result<RateRegion2> {
    let a2 = params.a * params.a;
    regime_check(
        params.cross_power() >= params.p2 + 1.0 - PRE_SLACK
            && a2 >= 1.0 - PRE_SLACK
            && a2 <= params.p2 + 1.0 + PRE_SLACK,
        "zero-forcing-and-relay needs a^2*p1 >= p2 + 1 and 1 <= a^2 <= p2 + 1",
        params,
    )?;
    let c12 = params.c12_finite()?;
    let c21 = params.c21_finite()?;
    let al = zf_relay_allocation(params)?;
    let described = c12.min(cap(al.p1z));
    let forwarded = al.p1c + al.p2r;
    let hit2 = cap(al.p2p + a2 * al.p1c);
    let total1 = cap(al.p1z + al.p1c + al.p2r);
    RateRegion2::from_rows(&[
        (1.0, 0.0, cap(al.p1z + al.p1c)),
        (1.0, 0.0, cap(al.p1c) + c12),
        (0.0, 1.0, cap(al.p2p) + c21),
        (0.0, 1.0, cap(al.p2p + a2 * al.p2r)),
        (1.0, 1.0, cap(forwarded) + cap(al.p2p)),
        (1.0, 1.0, total1 + cap(al.p2p)),
        (1.0, 1.0, cap(al.p1z + al.p2r) + hit2),
        (1.0, 1.0, c12 + cap(forwarded) + cap(al.p2p)),
        (1.0, 1.0, described + cap(al.p2p + a2 * forwarded)),
        (1.0, 1.0, described + hit2 + c21),
        (2.0, 1.0, described + hit2 + c12 + cap(forwarded)),
        (2.0, 1.0, described + hit2 + total1),
        (
            1.0,
            2.0,
            cap(al.p1z + al.p2r) + 2.0 * cap(al.p2p) + cap(forwarded),
        ),
        (
            1.0,
            2.0,
            cap(al.p1z + al.p2r) + cap(al.p2p) + cap(al.p2p + a2 * forwarded),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LinkCapacity;
    use crate::Error;

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-9
    }

    fn params(p1: f64, p2: f64, a: f64, c12: f64, c21: f64) -> ChannelParams {
        ChannelParams::finite(p1, p2, a, c12, c21).unwrap()
    }

    #[test]
    fn zero_forcing_allocation_weak_gain() {
        let p = params(100.0, 10.0, 0.3, 1.0, 0.0);
        let out = scheme_zero_forcing(&p).unwrap();
        let a2 = 0.3_f64 * 0.3;
        let al = out.allocation;
        assert!(close(al.p1p, 1.0 / a2));
        assert!(close(al.p1c, (100.0 - 1.0 / a2) / 2.0));
        assert!(close(al.p1z, (100.0 - 1.0 / a2) / 2.0));
        assert!(close(al.p2p, 5.0));
        assert!(close(al.d, 2.0));
        assert_eq!(out.kind, SchemeKind::ZeroForcing);
        assert_eq!(out.claimed_gap, (0.5, 1.0));
    }

    #[test]
    fn zero_forcing_weak_gain_region_rows() {
        let p = params(100.0, 10.0, 0.3, 1.0, 0.0);
        let out = scheme_zero_forcing(&p).unwrap();
        let a2 = 0.3_f64 * 0.3;
        let excess = a2 * 100.0 - 1.0;
        let rows = out.region.rows();
        assert_eq!(rows.len(), 4);
        assert!(close(rows[0].rhs, cap(50.0)));
        assert!(close(rows[1].rhs, cap(2.5)));
        assert!(close(rows[2].rhs, cap(1.0 / a2) + cap((excess + 10.0) / 4.0) + 1.0));
        assert!(close(
            rows[3].rhs,
            cap((excess.min(10.0) + 2.0) / (2.0 * a2)) + cap(excess.max(10.0) / 4.0)
        ));
    }

    #[test]
    fn zero_forcing_strong_gain_uses_full_region() {
        let p = params(100.0, 100.0, 2.0, 1.0, 0.0);
        let out = scheme_zero_forcing(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1p, 0.0));
        assert!(close(al.p1c, 50.0));
        assert!(close(al.p1z, 12.5));
        assert!(close(al.p2p, 50.0));
        assert!(close(al.d, 1.0));
        assert_eq!(out.claimed_gap, (0.5, 0.5));
        assert!(close(out.region.support(1.0, 0.0).unwrap(), cap(62.5)));
        assert!(close(out.region.support(0.0, 1.0).unwrap(), cap(50.0)));
    }

    #[test]
    fn zero_forcing_attaches_decoder_system() {
        let p = params(100.0, 10.0, 0.3, 1.0, 0.0);
        let out = scheme_zero_forcing(&p).unwrap();
        let raw = out.raw_decoder_system.expect("decoder system");
        assert_eq!(raw.system.variables(), ["R1p", "R1z", "R1c", "R2p"]);
        assert_eq!(raw.system.inequalities().len(), 10);
        assert_eq!(raw.r1_components, ["R1p", "R1z", "R1c"]);
        assert_eq!(raw.r2_components, ["R2p"]);
    }

    #[test]
    fn zero_forcing_rejects_weak_interference() {
        let p = params(0.5, 1.0, 1.0, 1.0, 0.0);
        assert!(matches!(
            scheme_zero_forcing(&p),
            Err(Error::RegimeMismatch(_))
        ));
    }

    #[test]
    fn relay_noncoop_frozen_example() {
        let p = params(10.0, 20.0, 1.0, 0.0, 0.0);
        let out = scheme_relay_noncoop(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1p, 1.0));
        assert!(close(al.p1c, 9.0));
        assert!(close(al.d, 2.0));
        let rows = out.region.rows();
        assert!(close(rows[0].rhs, cap(10.0)));
        assert!(close(rows[1].rhs, cap(10.0)));
        assert!(close(rows[2].rhs, cap(1.0) + cap(14.5)));
        assert!(close(
            out.region.support(1.0, 1.0).unwrap(),
            cap(1.0) + cap(14.5)
        ));
        assert_eq!(out.claimed_gap, (0.0, 1.5));
        assert!(out.raw_decoder_system.is_none());
    }

    #[test]
    fn relay_common_frozen_example() {
        let p = params(100.0, 10.0, 1.0, 0.0, 1.0);
        let out = scheme_relay_common(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1p, 1.0));
        assert!(close(al.p1c, 49.5));
        assert!(close(al.p2r, 49.5));
        assert!(close(al.p2p, 10.0));
        assert!(close(al.d, 2.0));
        let rows = out.region.rows();
        assert_eq!(rows.len(), 4);
        assert!(close(rows[0].rhs, cap(50.5)));
        assert!(close(rows[1].rhs, cap(5.0) + 1.0));
        assert!(close(rows[2].rhs, cap(119.0 / 4.0)));
        assert!(close(rows[3].rhs, cap(1.0) + cap(54.5) - 0.5));
        assert_eq!(out.claimed_gap, (0.5, 1.5));
        let raw = out.raw_decoder_system.expect("decoder system");
        assert_eq!(raw.system.inequalities().len(), 13);
    }

    #[test]
    fn relay_private_common_frozen_example() {
        let p = params(100.0, 3.0, 3.0, 0.0, 1.0);
        let out = scheme_relay_private_common(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1c, 49.5));
        assert!(close(al.p2rc, 49.5));
        assert!(close(al.p2rp, 1.0));
        assert!(close(al.c_prime, cap(9.0 / 4.0)));
        let rows = out.region.rows();
        assert!(close(rows[0].rhs, cap(24.75)));
        assert!(close(rows[1].rhs, cap(3.0) + 1.0));
        assert!(close(rows[2].rhs, cap(903.0) - 0.5));
        assert_eq!(out.claimed_gap, (1.0, 0.5));
        assert!(out.raw_decoder_system.is_some());
    }

    #[test]
    fn relay_private_common_small_power_branch() {
        let p = params(0.5, 3.0, 3.0, 0.0, 2.0);
        let out = scheme_relay_private_common(&p).unwrap();
        assert_eq!(out.claimed_gap, (0.5, 0.5));
        assert!(close(out.allocation.p2rp, 0.5));
        assert!(close(out.allocation.c_prime, 2.0));
        assert!(out.raw_decoder_system.is_none());
        let verts = out.region.vertices().unwrap();
        assert_eq!(verts.len(), 2);
        assert!(close(verts[0].0, 0.0));
        assert!(close(verts[0].1, cap(7.5)));
        assert!(close(verts[1].1, 0.0));
    }

    #[test]
    fn treat_as_noise_region() {
        let p = params(0.5, 2.0, 1.0, 0.0, 0.0);
        let out = scheme_bd_a(&p).unwrap();
        let rows = out.region.rows();
        assert!(close(rows[0].rhs, cap(0.5)));
        assert!(close(rows[1].rhs, cap(2.0 / 1.5)));
        assert_eq!(out.kind, SchemeKind::TreatAsNoise);
        assert_eq!(out.claimed_gap, (0.0, 1.0));
        assert!(close(out.allocation.d, 1.5));
    }

    #[test]
    fn weak_relay_scheme_fills_margin() {
        let p = params(10.0, 10.0, 1.0, 0.5, 0.5);
        let out = scheme_bd_b(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1p, 1.0));
        assert!(close(al.p1z, 4.5));
        assert!(close(al.p1c, 4.5));
        assert!(close(al.p2p, 5.5));
        let rows = out.region.rows();
        assert!(close(rows[0].rhs, cap(5.0)));
        assert!(close(rows[1].rhs, cap(5.5)));
        assert!(close(rows[2].rhs, cap(1.0) + cap(19.0 / 4.0) + 0.5));
        assert!(close(rows[3].rhs, cap(5.5) + cap(2.5)));
        assert_eq!(out.claimed_gap, (0.5, 1.5));
    }

    #[test]
    fn compressed_relay_frozen_example() {
        let p = params(100.0, 20.0, 0.5, 0.5, 1.0);
        let out = scheme_bd_c(&p).unwrap();
        let al = out.allocation;
        assert!(close(al.p1p, 8.0));
        assert!(close(al.p1c, 46.0));
        assert!(close(al.p2r, 46.0));
        assert!(close(al.p2p, 19.0));
        assert!(close(al.d, 3.0));
        assert_eq!(out.kind, SchemeKind::CompressedZeroForcingRelay);
        assert_eq!(out.claimed_gap, (0.5, 1.71));
        let rows = out.region.rows();
        assert!(close(rows[0].rhs, cap(54.0)));
        assert!(close(rows[1].rhs, cap(19.0 / 3.0) + 1.0));
        assert!(close(rows[2].rhs, cap((0.25 * 92.0 + 38.0) / 6.0)));
        assert!(close(rows[3].rhs, cap(8.0) + cap((0.25 * 92.0 + 19.0) / 3.0) - 0.5));
    }

    #[test]
    fn zero_forcing_relay_frozen_example() {
        let p = params(100.0, 10.0, 1.2, 1.0, 1.0);
        let out = scheme_bd_d(&p).unwrap();
        let a2 = 1.2_f64 * 1.2;
        let al = out.allocation;
        assert!(close(al.p1z, 10.0 / (2.0 * a2)));
        assert!(close(al.p1c, (100.0 - 10.0 / (2.0 * a2)) / 2.0));
        assert!(close(al.p2r, al.p1c));
        assert!(close(al.p2p, 5.0));
        assert!(close(al.d, 1.0));
        let rows = out.region.rows();
        assert_eq!(rows.len(), 7);
        assert!(close(rows[4].rhs, cap(144.0) + 1.0 - 0.5));
        assert!(close(rows[6].rhs, cap(100.0) + cap(5.0) - 0.5));
        let raw = out.raw_decoder_system.expect("decoder system");
        assert_eq!(raw.system.inequalities().len(), 14);
        let (d1, d2) = out.claimed_gap;
        assert!(close(d1, 1.0));
        assert!(close(d2, cap(13.0 / 3.0)));
    }

    #[test]
    fn strong_gain_scheme_overrides_claim() {
        let p = params(10.0, 1.0, 5.0, 0.0, 0.5);
        let out = scheme_bd_e(&p).unwrap();
        assert_eq!(out.kind, SchemeKind::RelayPrivateCommon);
        assert_eq!(out.claimed_gap, (1.0, 0.5));
        let rows = out.region.rows();
        assert!(close(rows[1].rhs, cap(1.0) + 0.5));
    }

    #[test]
    fn dispatch_matches_classification() {
        let cases = [
            (params(0.5, 2.0, 1.0, 1.0, 1.0), SchemeKind::TreatAsNoise),
            (params(10.0, 10.0, 1.0, 1.0, 1.0), SchemeKind::ZeroForcing),
            (
                params(100.0, 20.0, 0.5, 1.0, 1.0),
                SchemeKind::CompressedZeroForcingRelay,
            ),
            (
                params(100.0, 10.0, 1.2, 1.0, 1.0),
                SchemeKind::ZeroForcingAndRelay,
            ),
            (
                params(10.0, 1.0, 5.0, 1.0, 1.0),
                SchemeKind::RelayPrivateCommon,
            ),
        ];
        for (p, kind) in cases {
            let out = achievable_for(&p).unwrap();
            assert_eq!(out.kind, kind);
            assert_eq!(out.regime, classify_regime(&p));
        }
    }

    #[test]
    fn constructors_reject_wrong_regime_or_links() {
        let e = params(10.0, 1.0, 5.0, 1.0, 1.0);
        assert!(matches!(
            scheme_relay_common(&e),
            Err(Error::RegimeMismatch(_))
        ));
        assert!(matches!(scheme_bd_a(&e), Err(Error::RegimeMismatch(_))));

        let d = ChannelParams::new(
            10.0,
            1.0,
            1.2,
            LinkCapacity::Finite(1.0),
            LinkCapacity::Unbounded,
        )
        .unwrap();
        assert!(matches!(
            scheme_bd_d(&d),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn scheme_output_serde_round_trip() {
        let p = params(100.0, 10.0, 1.0, 0.0, 1.0);
        let out = scheme_relay_common(&p).unwrap();
        let json = serde_json::to_string(&out).unwrap();
        let back: SchemeOutput = serde_json::from_str(&json).unwrap();
        assert_eq!(back.regime, out.regime);
        assert_eq!(back.kind, out.kind);
        assert_eq!(back.claimed_gap, out.claimed_gap);
        assert!(close(back.allocation.p2r, out.allocation.p2r));
        assert!(back.region.region_equal(&out.region, 0.0).unwrap());
        assert!(back.raw_decoder_system.is_none());
    }

    #[test]
    fn expanded_regions_exist_in_regime() {
        let c = params(100.0, 20.0, 0.5, 0.5, 1.0);
        assert!(relay_common_expanded_region(&c).is_ok());
        let d = params(100.0, 10.0, 1.2, 1.0, 1.0);
        assert!(zero_forcing_relay_expanded_region(&d).is_ok());
        let e = params(10.0, 1.0, 5.0, 0.0, 0.5);
        assert!(relay_private_common_expanded_region(&e).is_ok());
        let small = params(0.5, 1.0, 5.0, 0.0, 0.5);
        assert!(relay_private_common_expanded_region(&small).is_err());
    }
}
