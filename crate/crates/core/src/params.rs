//! Physical link description and rate units.

use core::f64::consts::LN_2;

use crate::error::{check_finite_nonneg, Error, Result};
use crate::math::pow;

/// Planck constant in J·s (exact SI value).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Transmitter, detector and timing parameters of the link.
///
/// `dcr_bob` and `dcr_eve` count every click that is not caused by the
/// signal: detector dark counts plus background light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Maximum average transmit power `P` [W].
    pub power_watts: f64,
    /// Bob's dark-count rate [counts/s].
    pub dcr_bob: f64,
    /// Eve's dark-count rate [counts/s].
    pub dcr_eve: f64,
    /// Detector time resolution, i.e. the slot width `Δ` [s].
    pub slot_seconds: f64,
    /// Laser pulse width `Δp` [s]; informational, must be shorter than the slot.
    pub pulse_seconds: f64,
    /// Optical center frequency `f0` [Hz].
    pub optical_freq_hz: f64,
}

impl Default for PhysicalParams {
    /// The reference satellite-ground link: 10 mW, 10 kcps at Bob, 1 cps at
    /// Eve, 1 ns slots, 100 ps pulses at 200 THz (1.5 µm).
    fn default() -> Self {
        PhysicalParams {
            power_watts: 10e-3,
            dcr_bob: 10e3,
            dcr_eve: 1.0,
            slot_seconds: 1e-9,
            pulse_seconds: 100e-12,
            optical_freq_hz: 200e12,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_nan() || v <= 0.0 || v.is_infinite() {
                Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and strictly positive",
                })
            } else {
                Ok(())
            }
        };
        positive("power_watts", self.power_watts)?;
        check_finite_nonneg("dcr_bob", self.dcr_bob)?;
        check_finite_nonneg("dcr_eve", self.dcr_eve)?;
        positive("slot_seconds", self.slot_seconds)?;
        positive("pulse_seconds", self.pulse_seconds)?;
        positive("optical_freq_hz", self.optical_freq_hz)?;
        if self.pulse_seconds >= self.slot_seconds {
            return Err(Error::InvalidParameter {
                name: "pulse_seconds",
                reason: "pulse width must be shorter than the slot width",
            });
        }
        Ok(())
    }

    /// Energy of one photon, `h f0` [J].
    pub fn photon_energy(&self) -> f64 {
        PLANCK * self.optical_freq_hz
    }

    /// Photons per on-pulse that exhaust the power budget when every slot
    /// carries a pulse: `P Δ / (h f0)`.
    pub fn max_photons_per_slot(&self) -> f64 {
        self.power_watts * self.slot_seconds / self.photon_energy()
    }

    /// Optical bandwidth of a transform-limited pulse, `B = 1/Δp` [Hz].
    pub fn bandwidth_hz(&self) -> f64 {
        1.0 / self.pulse_seconds
    }

    /// Mean dark counts per slot at Bob, `λy Δ`.
    pub fn dark_mean_bob(&self) -> f64 {
        self.dcr_bob * self.slot_seconds
    }

    /// Mean dark counts per slot at Eve, `λz Δ`.
    pub fn dark_mean_eve(&self) -> f64 {
        self.dcr_eve * self.slot_seconds
    }
}

/// Attenuation of the main link and Eve's share of Bob's received power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// Main-link loss in dB; `ηy = 10^(-α/10)`.
    pub attenuation_db: f64,
    /// `ηzy = ηz / ηy`. Values above one model an eavesdropper who collects
    /// more light than Bob.
    pub relative_transmittance: f64,
}

impl LinkGeometry {
    pub fn new(attenuation_db: f64, relative_transmittance: f64) -> Result<Self> {
        let geom = LinkGeometry {
            attenuation_db,
            relative_transmittance,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if self.attenuation_db.is_nan() || self.attenuation_db < 0.0 || self.attenuation_db.is_infinite() {
            return Err(Error::InvalidParameter {
                name: "attenuation_db",
                reason: "must be finite and non-negative",
            });
        }
        let r = self.relative_transmittance;
        if r.is_nan() || r < 0.0 || r.is_infinite() {
            return Err(Error::InvalidParameter {
                name: "relative_transmittance",
                reason: "must be finite and non-negative",
            });
        }
        if self.eta_eve() > 1.0 {
            return Err(Error::InvalidParameter {
                name: "relative_transmittance",
                reason: "Eve's transmittance ηzy·ηy exceeds one",
            });
        }
        Ok(())
    }

    /// Bob's transmittance `ηy`.
    pub fn eta_bob(&self) -> f64 {
        pow(10.0, -self.attenuation_db / 10.0)
    }

    /// Eve's transmittance `ηz = ηzy ηy`.
    pub fn eta_eve(&self) -> f64 {
        self.relative_transmittance * self.eta_bob()
    }
}

/// An information rate, stored in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct RateValue {
    pub nats_per_use: f64,
}

impl RateValue {
    pub const ZERO: RateValue = RateValue { nats_per_use: 0.0 };

    pub fn from_nats(nats_per_use: f64) -> Self {
        RateValue { nats_per_use }
    }

    pub fn from_bits(bits_per_use: f64) -> Self {
        RateValue {
            nats_per_use: bits_per_use * LN_2,
        }
    }

    /// Rate from bits per second at slot width `slot_seconds`.
    pub fn from_bps(bits_per_second: f64, slot_seconds: f64) -> Self {
        Self::from_bits(bits_per_second * slot_seconds)
    }

    pub fn nats(self) -> f64 {
        self.nats_per_use
    }

    pub fn bits_per_use(self) -> f64 {
        self.nats_per_use / LN_2
    }

    pub fn bits_per_second(self, slot_seconds: f64) -> f64 {
        self.bits_per_use() / slot_seconds
    }
}

impl core::ops::Add for RateValue {
    type Output = RateValue;
    fn add(self, rhs: RateValue) -> RateValue {
        RateValue::from_nats(self.nats_per_use + rhs.nats_per_use)
    }
}

impl core::ops::Sub for RateValue {
    type Output = RateValue;
    fn sub(self, rhs: RateValue) -> RateValue {
        RateValue::from_nats(self.nats_per_use - rhs.nats_per_use)
    }
}

impl core::ops::Mul<f64> for RateValue {
    type Output = RateValue;
    fn mul(self, k: f64) -> RateValue {
        RateValue::from_nats(self.nats_per_use * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = PhysicalParams::default();
        p.validate().unwrap();
        // 10 mW · 1 ns / (h · 200 THz)
        assert!((p.max_photons_per_slot() - 7.545_950_9e7).abs() / 7.545_950_9e7 < 1e-6);
        assert!((p.photon_energy() - 1.325_214_03e-19).abs() < 1e-27);
    }

    #[test]
    fn rejects_pulse_longer_than_slot() {
        let p = PhysicalParams {
            pulse_seconds: 2e-9,
            ..PhysicalParams::default()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "pulse_seconds", .. })
        ));
    }

    #[test]
    fn rejects_nonpositive_and_nan() {
        for bad in [-1.0, f64::NAN, f64::INFINITY] {
            let p = PhysicalParams {
                dcr_eve: bad,
                ..PhysicalParams::default()
            };
            assert!(p.validate().is_err());
        }
        for bad in [0.0, -1.0, f64::NAN] {
            let p = PhysicalParams {
                power_watts: bad,
                ..PhysicalParams::default()
            };
            assert!(p.validate().is_err());
        }
        // A noiseless detector is allowed.
        let quiet = PhysicalParams {
            dcr_bob: 0.0,
            dcr_eve: 0.0,
            ..PhysicalParams::default()
        };
        quiet.validate().unwrap();
    }

    #[test]
    fn geometry_decibels() {
        let g = LinkGeometry::new(70.0, 0.9).unwrap();
        assert!((g.eta_bob() - 1e-7).abs() < 1e-20);
        assert!((g.eta_eve() - 0.9e-7).abs() < 1e-20);
        assert!(LinkGeometry::new(0.0, 2.0).is_err());
        assert!(LinkGeometry::new(10.0, 2.0).is_ok());
        assert!(LinkGeometry::new(-1.0, 0.5).is_err());
    }

    #[test]
    fn rate_views_agree() {
        let r = RateValue::from_bps(44.2e6, 1e-9);
        assert!((r.bits_per_use() - 0.0442).abs() < 1e-15);
        assert!((r.bits_per_second(1e-9) - 44.2e6).abs() < 1e-6);
        assert!((r.nats() - 0.0442 * LN_2).abs() < 1e-15);
    }
}
