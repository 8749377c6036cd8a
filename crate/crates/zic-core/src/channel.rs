//! Channel parameters, the Gaussian capacity function, and the closed-form
//! classification of parameter tuples.
//!
//! The model is the two-user Gaussian Z-interference channel in standard
//! form: receiver 1 hears transmitter 1 alone, receiver 2 hears its own
//! transmitter plus transmitter 1 scaled by the cross gain `a`, and both
//! receivers see unit-variance Gaussian noise. The encoders may confer
//! before transmission over orthogonal links of capacities `c12`
//! (encoder 1 to encoder 2) and `c21` (encoder 2 to encoder 1), in bits
//! per channel use.
//!
//! Classification is by closed inequalities evaluated in a fixed order, so
//! every tuple lands in exactly one [`Regime`] and ties on a boundary go
//! to the earlier regime.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gaussian capacity function `C(p) = 0.5 * log2(1 + p)` in bits per
/// channel use.
///
/// # Panics
///
/// Panics if `p` is negative, NaN, or infinite. Callers that may produce
/// a tiny negative power from float cancellation should clamp first.
pub fn cap(p: f64) -> f64 {
    assert!(
        p.is_finite() && p >= 0.0,
        "cap requires a finite nonnegative power, got {p}"
    );
    0.5 * (1.0 + p).log2()
}

/// Inverse of [`cap`]: the power needed to carry `bits` per channel use,
/// `2^(2*bits) - 1`.
///
/// # Panics
///
/// Panics if `bits` is negative, NaN, or infinite.
pub fn cap_inv(bits: f64) -> f64 {
    assert!(
        bits.is_finite() && bits >= 0.0,
        "cap_inv requires a finite nonnegative rate, got {bits}"
    );
    (2.0 * bits).exp2() - 1.0
}

/// Capacity of a conferencing link in bits per channel use.
///
/// `Unbounded` models the cognitive extreme where the link carries any
/// rate. Consumers never do arithmetic with infinities: bounds whose
/// right-hand side would include an unbounded term drop that inequality
/// instead, and scheme constructors that need the value reject it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkCapacity {
    /// A finite capacity, nonnegative bits per channel use.
    Finite(f64),
    /// No rate limit on the link.
    Unbounded,
}

impl LinkCapacity {
    /// The finite value, or `None` for `Unbounded`.
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Unbounded => None,
        }
    }

    /// True for `Unbounded`.
    pub fn is_unbounded(self) -> bool {
        matches!(self, Self::Unbounded)
    }

    fn validate(self, name: &str) -> Result<()> {
        if let Self::Finite(v) = self {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl From<f64> for LinkCapacity {
    fn from(v: f64) -> Self {
        Self::Finite(v)
    }
}

impl fmt::Display for LinkCapacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for LinkCapacity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => serializer.serialize_f64(*v),
            Self::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for LinkCapacity {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        struct LinkVisitor;

        impl<'de> Visitor<'de> for LinkVisitor {
            type Value = LinkCapacity;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or the string \"unbounded\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(LinkCapacity::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(LinkCapacity::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(LinkCapacity::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "unbounded" {
                    Ok(LinkCapacity::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(LinkVisitor)
    }
}

/// The five scalars defining a channel instance.
///
/// Powers and the cross gain are linear quantities, not dB. Noise
/// variances are fixed to one by the standard form and are not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Transmit power budget of user 1.
    pub p1: f64,
    /// Transmit power budget of user 2.
    pub p2: f64,
    /// Amplitude gain from transmitter 1 to receiver 2.
    pub a: f64,
    /// Conferencing capacity from encoder 1 to encoder 2.
    pub c12: LinkCapacity,
    /// Conferencing capacity from encoder 2 to encoder 1.
    pub c21: LinkCapacity,
}

impl ChannelParams {
    /// Validates and builds a parameter tuple. Powers and the gain must be
    /// finite and nonnegative; finite link capacities likewise.
    pub fn new(
        p1: f64,
        p2: f64,
        a: f64,
        c12: LinkCapacity,
        c21: LinkCapacity,
    ) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("a", a)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        c12.validate("c12")?;
        c21.validate("c21")?;
        Ok(Self { p1, p2, a, c12, c21 })
    }

    /// Convenience constructor for finite conferencing capacities.
    pub fn finite(p1: f64, p2: f64, a: f64, c12: f64, c21: f64) -> Result<Self> {
        Self::new(p1, p2, a, LinkCapacity::Finite(c12), LinkCapacity::Finite(c21))
    }

    /// Interference power `a^2 * p1` seen at receiver 2.
    pub fn cross_power(&self) -> f64 {
        self.a * self.a * self.p1
    }

    pub(crate) fn c12_finite(&self) -> Result<f64> {
        self.c12.finite().ok_or_else(|| {
            Error::InvalidParameter("this operation needs a finite c12".into())
        })
    }

    pub(crate) fn c21_finite(&self) -> Result<f64> {
        self.c21.finite().ok_or_else(|| {
            Error::InvalidParameter("this operation needs a finite c21".into())
        })
    }
}

/// The five-way partition of the parameter space that selects the
/// achievable scheme and its gap claim.
///
/// The letters order the regimes from interference weaker than noise (A)
/// through ever stronger cross gain (E). Conditions are evaluated as
/// closed inequalities in order, so boundaries belong to the earlier
/// regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// A: `a^2*p1 <= 1`, interference below the noise floor.
    NoiseLimitedA,
    /// B: `a^2*p1 <= p2 + 1`, interference at most the signal-plus-noise
    /// level at receiver 2.
    WeakRelayB,
    /// C: stronger interference with cross gain `a^2 <= 1`.
    StrongRelayWeakGainC,
    /// D: stronger interference with `1 < a^2 <= p2 + 1`.
    StrongRelayMidGainD,
    /// E: `a^2 > p2 + 1`, the very strong gain corner.
    StrongRelayStrongGainE,
}

impl Regime {
    /// All regimes in classification order.
    pub const ALL: [Regime; 5] = [
        Regime::NoiseLimitedA,
        Regime::WeakRelayB,
        Regime::StrongRelayWeakGainC,
        Regime::StrongRelayMidGainD,
        Regime::StrongRelayStrongGainE,
    ];

    /// Single-letter tag, `'A'` through `'E'`.
    pub fn letter(self) -> char {
        match self {
            Regime::NoiseLimitedA => 'A',
            Regime::WeakRelayB => 'B',
            Regime::StrongRelayWeakGainC => 'C',
            Regime::StrongRelayMidGainD => 'D',
            Regime::StrongRelayStrongGainE => 'E',
        }
    }

    /// The per-coordinate gap `(delta_1, delta_2)` claimed for the scheme
    /// this regime dispatches to.
    pub fn claimed_gap(self) -> (f64, f64) {
        match self {
            Regime::NoiseLimitedA => (0.0, 1.0),
            Regime::WeakRelayB => (0.5, 1.5),
            Regime::StrongRelayWeakGainC => (0.5, 1.71),
            Regime::StrongRelayMidGainD => (1.0, cap(13.0 / 3.0)),
            Regime::StrongRelayStrongGainE => (1.0, 0.5),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Classifies a parameter tuple into its [`Regime`].
pub fn classify_regime(params: &ChannelParams) -> Regime {
    let cross = params.cross_power();
    if cross <= 1.0 {
        return Regime::NoiseLimitedA;
    }
    if cross <= params.p2 + 1.0 {
        return Regime::WeakRelayB;
    }
    let a2 = params.a * params.a;
    if a2 <= 1.0 {
        Regime::StrongRelayWeakGainC
    } else if a2 <= params.p2 + 1.0 {
        Regime::StrongRelayMidGainD
    } else {
        Regime::StrongRelayStrongGainE
    }
}

/// Which relaying strategy applies when only the encoder-2-to-encoder-1
/// link is available (`c12 = 0`).
///
/// The split is meaningful in the interference-limited regime
/// `a^2*p1 >= 1`, which is also what the unidirectional scheme
/// constructors require.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelayCase {
    /// `a^2*p1 <= p2 + 1`: plain relaying without rate splitting.
    NonCooperative,
    /// `a^2 <= p2 + 1` (and stronger interference): the relayed stream is
    /// decoded by both receivers as a common message.
    Common,
    /// `a^2 > p2 + 1`: the relayed stream itself is split into private
    /// and common parts.
    PrivateCommon,
}

/// Classifies a tuple into its unidirectional [`RelayCase`], using the
/// same closed-inequality, first-match convention as [`classify_regime`].
pub fn classify_unidirectional_relay_case(params: &ChannelParams) -> RelayCase {
    if params.cross_power() <= params.p2 + 1.0 {
        RelayCase::NonCooperative
    } else if params.a * params.a <= params.p2 + 1.0 {
        RelayCase::Common
    } else {
        RelayCase::PrivateCommon
    }
}

// ----------------------------------------------------------------------
// Tests
// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_hits_exact_anchors() {
        assert_eq!(cap(0.0), 0.0, "zero power carries zero rate");
        assert_eq!(cap(1.0), 0.5, "C(1) is exactly half a bit");
        assert_eq!(cap(3.0), 1.0, "C(3) is exactly one bit");
        assert_eq!(cap(15.0), 2.0, "C(15) is exactly two bits");
    }

    #[test]
    fn cap_inv_round_trips() {
        for bits in [0.0, 0.25, 0.5, 1.0, 3.7, 10.0] {
            assert!(
                (cap(cap_inv(bits)) - bits).abs() < 1e-12,
                "cap(cap_inv({bits})) should return {bits}"
            );
        }
    }

    #[test]
    #[should_panic(expected = "finite nonnegative power")]
    fn cap_rejects_negative_power() {
        cap(-0.5);
    }

    #[test]
    #[should_panic(expected = "finite nonnegative power")]
    fn cap_rejects_nan() {
        cap(f64::NAN);
    }

    #[test]
    fn params_validation_rejects_bad_values() {
        assert!(ChannelParams::finite(-1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::finite(1.0, f64::INFINITY, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::finite(1.0, 1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(ChannelParams::finite(1.0, 1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ChannelParams::finite(1.0, 1.0, 1.0, 0.0, f64::NAN).is_err());
        assert!(ChannelParams::finite(0.0, 0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn classification_covers_all_five_regimes() {
        let cases = [
            (10.0, 10.0, 0.2, Regime::NoiseLimitedA),
            (10.0, 10.0, 1.0, Regime::WeakRelayB),
            (100.0, 10.0, 0.8, Regime::StrongRelayWeakGainC),
            (100.0, 10.0, 2.0, Regime::StrongRelayMidGainD),
            (100.0, 10.0, 5.0, Regime::StrongRelayStrongGainE),
        ];
        for (p1, p2, a, want) in cases {
            let params = ChannelParams::finite(p1, p2, a, 1.0, 1.0).unwrap();
            assert_eq!(
                classify_regime(&params),
                want,
                "({p1}, {p2}, {a}) should classify as {}",
                want.letter()
            );
        }
    }

    #[test]
    fn classification_boundaries_go_to_the_earlier_regime() {
        // a^2*p1 == 1 exactly: regime A wins the tie.
        let on_a = ChannelParams::finite(4.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(classify_regime(&on_a), Regime::NoiseLimitedA);

        // a^2*p1 == p2 + 1 exactly: regime B wins the tie.
        let on_b = ChannelParams::finite(11.0, 10.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_regime(&on_b), Regime::WeakRelayB);

        // a^2 == 1 exactly with strong interference: regime C wins.
        let on_c = ChannelParams::finite(100.0, 10.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_regime(&on_c), Regime::StrongRelayWeakGainC);

        // a^2 == p2 + 1 exactly: regime D wins.
        let on_d = ChannelParams::finite(100.0, 3.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_regime(&on_d), Regime::StrongRelayMidGainD);
    }

    #[test]
    fn relay_case_matches_its_inequalities() {
        let noncoop = ChannelParams::finite(10.0, 10.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            classify_unidirectional_relay_case(&noncoop),
            RelayCase::NonCooperative
        );

        let common = ChannelParams::finite(100.0, 10.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(classify_unidirectional_relay_case(&common), RelayCase::Common);

        let private = ChannelParams::finite(100.0, 10.0, 5.0, 0.0, 1.0).unwrap();
        assert_eq!(
            classify_unidirectional_relay_case(&private),
            RelayCase::PrivateCommon
        );
    }

    #[test]
    fn regime_gap_claims_match_their_derivations() {
        assert_eq!(Regime::NoiseLimitedA.claimed_gap(), (0.0, 1.0));
        assert_eq!(Regime::WeakRelayB.claimed_gap(), (0.5, 1.5));
        assert_eq!(Regime::StrongRelayWeakGainC.claimed_gap(), (0.5, 1.71));
        let (d1, d2) = Regime::StrongRelayMidGainD.claimed_gap();
        assert_eq!(d1, 1.0);
        assert!((d2 - 1.207_518_749_639_422).abs() < 1e-12);
        assert_eq!(Regime::StrongRelayStrongGainE.claimed_gap(), (1.0, 0.5));
    }

    #[test]
    fn link_capacity_serde_round_trips() {
        let finite: LinkCapacity = serde_json::from_str("1.5").unwrap();
        assert_eq!(finite, LinkCapacity::Finite(1.5));
        let unbounded: LinkCapacity = serde_json::from_str("\"unbounded\"").unwrap();
        assert_eq!(unbounded, LinkCapacity::Unbounded);

        assert_eq!(serde_json::to_string(&finite).unwrap(), "1.5");
        assert_eq!(
            serde_json::to_string(&unbounded).unwrap(),
            "\"unbounded\""
        );
        assert!(serde_json::from_str::<LinkCapacity>("\"lots\"").is_err());
    }

    #[test]
    fn channel_params_serde_round_trips() {
        let params = ChannelParams::new(
            10.0,
            2.5,
            0.7,
            LinkCapacity::Finite(1.0),
            LinkCapacity::Unbounded,
        )
        .unwrap();
        let text = serde_json::to_string(&params).unwrap();
        let back: ChannelParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, params);
    }
}
