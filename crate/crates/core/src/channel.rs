//! Physical scenario of the two-user Gaussian Z-interference channel.
//!
//! Receiver 1 sees `h11*X1 + h21*X2 + Z1`, receiver 2 sees `h22*X2 + Z2`,
//! with unit-variance Gaussian noise and average power limits `p1`, `p2`.
//! Transmitter 2 and receiver 2 share a secret key of rate `rk` bits per
//! channel use.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, check_unit, Error, Result};

/// `0.5 * log2(x)`: the Gaussian capacity kernel in bits per channel use.
#[inline]
pub fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub h11: f64,
    pub h22: f64,
    pub h21: f64,
    pub p1: f64,
    pub p2: f64,
    pub rk: f64,
}

impl ChannelParams {
    pub fn new(h11: f64, h22: f64, h21: f64, p1: f64, p2: f64, rk: f64) -> Result<Self> {
        let ch = Self {
            h11,
            h22,
            h21,
            p1,
            p2,
            rk,
        };
        ch.validate()?;
        Ok(ch)
    }

    /// Symmetric scenario: `h11 = h22 = hd`, `h21 = hc`, `p1 = p2 = p`.
    pub fn symmetric(hd: f64, hc: f64, p: f64, rk: f64) -> Result<Self> {
        Self::new(hd, hd, hc, p, p, rk)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, g) in [("h11", self.h11), ("h22", self.h22), ("h21", self.h21)] {
            if !g.is_finite() {
                return Err(Error::Domain {
                    name,
                    value: g,
                    domain: "finite reals",
                });
            }
        }
        check_nonneg("p1", self.p1)?;
        check_nonneg("p2", self.p2)?;
        check_nonneg("rk", self.rk)
    }

    pub fn with_rk(self, rk: f64) -> Self {
        Self { rk, ..self }
    }

    pub fn snr1(&self) -> f64 {
        self.h11 * self.h11 * self.p1
    }

    pub fn snr2(&self) -> f64 {
        self.h22 * self.h22 * self.p2
    }

    pub fn inr1(&self) -> f64 {
        self.h21 * self.h21 * self.p2
    }
}

/// Returns `(snr1, snr2, inr1)`.
pub fn snr_inr(ch: &ChannelParams) -> (f64, f64, f64) {
    (ch.snr1(), ch.snr2(), ch.inr1())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    WeakModerate,
    High,
}

/// `WeakModerate` iff `inr1 <= snr2`; the boundary belongs to the weak side.
pub fn classify_regime(ch: &ChannelParams) -> Regime {
    if ch.inr1() <= ch.snr2() {
        Regime::WeakModerate
    } else {
        Regime::High
    }
}

/// Power-split, power-control and key-split knobs of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Share of Tx1's power carrying the message (the rest is artificial noise).
    pub lambda1: f64,
    /// Share of Tx2's power carrying the private message (the rest is common).
    pub lambda2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Share of the key rate spent on the common confidential message.
    pub eta: f64,
}

impl SchemeParams {
    pub fn new(lambda1: f64, lambda2: f64, beta1: f64, beta2: f64, eta: f64) -> Result<Self> {
        let sp = Self {
            lambda1,
            lambda2,
            beta1,
            beta2,
            eta,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("lambda1", self.lambda1)?;
        check_unit("lambda2", self.lambda2)?;
        check_unit("beta1", self.beta1)?;
        check_unit("beta2", self.beta2)?;
        check_unit("eta", self.eta)
    }

    /// Derived powers `(P1M, P1A, P2P, P2C)`.
    pub fn powers(&self, ch: &ChannelParams) -> (f64, f64, f64, f64) {
        let q1 = self.beta1 * ch.p1;
        let q2 = self.beta2 * ch.p2;
        (
            self.lambda1 * q1,
            (1.0 - self.lambda1) * q1,
            self.lambda2 * q2,
            (1.0 - self.lambda2) * q2,
        )
    }
}
