//! Per-stream decoder constraint systems for the layered schemes.
//!
//! Each builder writes down the joint-decoding inequalities of a scheme in
//! the original per-stream rate variables, before any elimination. The
//! systems are consumed by [`RawDecoderSystem::project`], which sums each
//! user's streams and eliminates the per-stream variables to obtain the
//! scheme's two-dimensional rate region.

use crate::channel::{cap, ChannelParams};
use crate::polytope::{HalfspaceSystem, Inequality, RateRegion2};
use crate::schemes::PowerAllocation;
use crate::Result;

/// A decoder constraint system in per-stream rate variables, together with
/// the grouping that maps streams to the two users.
#[derive(Debug, Clone)]
pub struct RawDecoderSystem {
    /// Constraints over the per-stream rates, one inequality per decoding
    /// error event.
    pub system: HalfspaceSystem,
    /// Stream variables whose rates sum to user 1's rate.
    pub r1_components: Vec<String>,
    /// Stream variables whose rates sum to user 2's rate.
    pub r2_components: Vec<String>,
}

impl RawDecoderSystem {
    /// Eliminates the per-stream variables and returns the region over
    /// `(R1, R2)`.
    pub fn project(&self) -> Result<RateRegion2> {
        let r1: Vec<&str> = self.r1_components.iter().map(String::as_str).collect();
        let r2: Vec<&str> = self.r2_components.iter().map(String::as_str).collect();
        self.system.project_to_rate_pair(&r1, &r2)
    }

    /// Like [`project`](Self::project), but also returns the intermediate
    /// system after each elimination step.
    pub fn project_with_trace(&self) -> Result<(RateRegion2, Vec<(String, HalfspaceSystem)>)> {
        let r1: Vec<&str> = self.r1_components.iter().map(String::as_str).collect();
        let r2: Vec<&str> = self.r2_components.iter().map(String::as_str).collect();
        self.system.project_with_trace(&r1, &r2)
    }
}

struct SystemBuilder {
    variables: Vec<&'static str>,
    rows: Vec<Inequality>,
}

impl SystemBuilder {
    fn new(variables: &[&'static str]) -> Self {
        Self {
            variables: variables.to_vec(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, streams: &[&str], rhs: f64) {
        let mut coeffs = vec![0.0; self.variables.len()];
        for stream in streams {
            let idx = self
                .variables
                .iter()
                .position(|v| v == stream)
                .unwrap_or_else(|| panic!("unknown stream variable {stream}"));
            coeffs[idx] = 1.0;
        }
        self.rows.push(Inequality::new(coeffs, rhs));
    }

    fn build(self, r1: &[&str], r2: &[&str]) -> Result<RawDecoderSystem> {
        let variables: Vec<String> = self.variables.iter().map(|v| v.to_string()).collect();
        let system = HalfspaceSystem::new(variables, self.rows)?;
        Ok(RawDecoderSystem {
            system,
            r1_components: r1.iter().map(|v| v.to_string()).collect(),
            r2_components: r2.iter().map(|v| v.to_string()).collect(),
        })
    }
}

/// Decoder system for zero-forcing with a private/zero-forced/common split
/// of user 1's message.
///
/// Receiver 1 jointly decodes all three of its streams; receiver 2 cancels
/// the zero-forced stream with the conference description, then decodes the
/// common stream and its own private stream while treating user 1's private
/// stream as noise.
pub fn zero_forcing_system(params: &ChannelParams, alloc: &PowerAllocation) -> Result<RawDecoderSystem> {
    let a2 = params.a * params.a;
    let c12 = params.c12_finite()?;
    let d = alloc.d;

    let mut b = SystemBuilder::new(&["R1p", "R1z", "R1c", "R2p"]);
    b.row(&["R1p"], cap(alloc.p1p));
    b.row(&["R1z"], cap(alloc.p1z));
    b.row(&["R1z"], c12);
    b.row(&["R1c"], cap(alloc.p1c));
    b.row(&["R1p", "R1z"], cap(alloc.p1p + alloc.p1z));
    b.row(&["R1p", "R1c"], cap(alloc.p1p + alloc.p1c));
    b.row(&["R1z", "R1c"], cap(alloc.p1z + alloc.p1c));
    b.row(&["R1p", "R1z", "R1c"], cap(alloc.p1p + alloc.p1z + alloc.p1c));
    b.row(&["R2p"], cap(alloc.p2p / d));
    b.row(&["R2p", "R1c"], cap((a2 * alloc.p1c + alloc.p2p) / d));
    b.build(&["R1p", "R1z", "R1c"], &["R2p"])
}

/// Decoder system for decode-and-forward relaying of a common stream.
///
/// User 1 spends part of its power forwarding a piece of user 2's message
/// received over the conference link. Receiver 1 decodes its own two
/// streams and the relayed stream; receiver 2 decodes the relayed stream,
/// user 1's common stream, and its own stream, treating user 1's private
/// stream as noise.
pub fn relay_common_system(params: &ChannelParams, alloc: &PowerAllocation) -> Result<RawDecoderSystem> {
    let a2 = params.a * params.a;
    let c21 = params.c21_finite()?;
    let d = alloc.d;

    let mut b = SystemBuilder::new(&["R1p", "R1c", "R2p", "R2r"]);
    b.row(&["R1p"], cap(alloc.p1p));
    b.row(&["R1c"], cap(alloc.p1c));
    b.row(&["R1p", "R1c"], cap(alloc.p1p + alloc.p1c));
    b.row(&["R1p", "R2r"], cap(alloc.p1p + alloc.p2r));
    b.row(&["R1c", "R2r"], cap(alloc.p1c + alloc.p2r));
    b.row(&["R1p", "R1c", "R2r"], cap(alloc.p1p + alloc.p1c + alloc.p2r));
    b.row(&["R2p"], cap(alloc.p2p / d));
    b.row(&["R2r"], c21);
    b.row(&["R2r"], cap(a2 * alloc.p2r / d));
    b.row(&["R2p", "R2r"], cap((a2 * alloc.p2r + alloc.p2p) / d));
    b.row(&["R2p", "R1c"], cap((alloc.p2p + a2 * alloc.p1c) / d));
    b.row(&["R2r", "R1c"], cap(a2 * (alloc.p2r + alloc.p1c) / d));
    b.row(&["R2p", "R2r", "R1c"], cap((alloc.p2p + a2 * (alloc.p2r + alloc.p1c)) / d));
    b.build(&["R1p", "R1c"], &["R2p", "R2r"])
}

/// Decoder system for relaying with a private/common split of the relayed
/// message, used when the cross gain is very strong.
///
/// User 1 gives up its private stream entirely and forwards both a common
/// and a private piece of user 2's message; the private piece is described
/// over the conference link at rate `c_prime` and acts as noise at
/// receiver 1.
pub fn relay_private_common_system(
    params: &ChannelParams,
    alloc: &PowerAllocation,
) -> Result<RawDecoderSystem> {
    let a2 = params.a * params.a;
    let c21 = params.c21_finite()?;
    let noise1 = 1.0 + alloc.p2rp;
    let noise2 = 1.0 + params.p2;

    let mut b = SystemBuilder::new(&["R1c", "R2rc", "R2rp", "R2p"]);
    b.row(&["R1c"], cap(alloc.p1c / noise1));
    b.row(&["R1c", "R2rc"], cap((alloc.p1c + alloc.p2rc) / noise1));
    b.row(&["R2rp"], alloc.c_prime);
    b.row(&["R2rc"], c21 - alloc.c_prime);
    b.row(&["R2rc"], cap(a2 * alloc.p2rc / noise2));
    b.row(&["R2rp", "R2rc"], cap(a2 * (alloc.p2rc + alloc.p2rp) / noise2));
    b.row(&["R2rp", "R1c"], cap(a2 * (alloc.p1c + alloc.p2rp) / noise2));
    b.row(&["R2rc", "R1c"], cap(a2 * (alloc.p2rc + alloc.p1c) / noise2));
    b.row(
        &["R2rp", "R2rc", "R1c"],
        cap(a2 * (alloc.p2rc + alloc.p2rp + alloc.p1c) / noise2),
    );
    b.row(&["R2p"], cap(params.p2));
    b.build(&["R1c"], &["R2p", "R2rp", "R2rc"])
}

/// Decoder system combining zero-forcing of one stream with relaying of
/// another, used in the mid-gain strong-relay regime.
///
/// User 1 splits into a zero-forced stream and a common stream and also
/// forwards a piece of user 2's message; receiver 2 cancels the zero-forced
/// stream using the conference description.
pub fn zero_forcing_relay_system(
    params: &ChannelParams,
    alloc: &PowerAllocation,
) -> Result<RawDecoderSystem> {
    let a2 = params.a * params.a;
    let c12 = params.c12_finite()?;
    let c21 = params.c21_finite()?;

    let mut b = SystemBuilder::new(&["R1z", "R1c", "R2p", "R2r"]);
    b.row(&["R1z"], c12);
    b.row(&["R1z"], cap(alloc.p1z));
    b.row(&["R1c"], cap(alloc.p1c));
    b.row(&["R1z", "R1c"], cap(alloc.p1z + alloc.p1c));
    b.row(&["R1z", "R2r"], cap(alloc.p1z + alloc.p2r));
    b.row(&["R1c", "R2r"], cap(alloc.p1c + alloc.p2r));
    b.row(&["R1z", "R1c", "R2r"], cap(alloc.p1z + alloc.p1c + alloc.p2r));
    b.row(&["R2p"], cap(alloc.p2p));
    b.row(&["R2r"], c21);
    b.row(&["R2r"], cap(a2 * alloc.p2r));
    b.row(&["R2p", "R2r"], cap(a2 * alloc.p2r + alloc.p2p));
    b.row(&["R2p", "R1c"], cap(alloc.p2p + a2 * alloc.p1c));
    b.row(&["R2r", "R1c"], cap(a2 * (alloc.p2r + alloc.p1c)));
    b.row(&["R2p", "R2r", "R1c"], cap(alloc.p2p + a2 * (alloc.p2r + alloc.p1c)));
    b.build(&["R1z", "R1c"], &["R2p", "R2r"])
}
