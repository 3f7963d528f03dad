//! JSON documents for frame configurations and coefficient sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{make_windows, ChannelCoeffs, CoefficientSet, NsgfSystem, Prototype, DEFAULT_C_STAR};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub b: f64,
    pub a: f64,
}

/// `ramp_width = 0` selects the flat prototype.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrototypeSpec {
    pub ramp_width: f64,
}

impl PrototypeSpec {
    pub fn to_prototype(self) -> Result<Prototype> {
        if self.ramp_width == 0.0 {
            Ok(Prototype::Flat)
        } else {
            Prototype::plateau(self.ramp_width)
        }
    }
}

impl Default for PrototypeSpec {
    fn default() -> Self {
        Self { ramp_width: 0.2 }
    }
}

/// `{signal_length, c_star, channels: [{b, a}], prototype: {ramp_width}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub signal_length: usize,
    #[serde(default = "default_c_star")]
    pub c_star: f64,
    pub channels: Vec<ChannelSpec>,
    #[serde(default)]
    pub prototype: PrototypeSpec,
}

fn default_c_star() -> f64 {
    DEFAULT_C_STAR
}

impl FrameConfig {
    pub fn new(signal_length: usize, channels: &[(f64, f64)], ramp_width: f64) -> Self {
        Self {
            signal_length,
            c_star: DEFAULT_C_STAR,
            channels: channels
                .iter()
                .map(|&(b, a)| ChannelSpec { b, a })
                .collect(),
            prototype: PrototypeSpec { ramp_width },
        }
    }

    /// Same channels on a different grid length.
    pub fn with_length(&self, signal_length: usize) -> Self {
        Self {
            signal_length,
            ..self.clone()
        }
    }

    pub fn build(&self) -> Result<NsgfSystem> {
        let spec: Vec<(f64, f64)> = self.channels.iter().map(|c| (c.b, c.a)).collect();
        make_windows(
            self.signal_length,
            &spec,
            self.c_star,
            &self.prototype.to_prototype()?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientChannelRecord {
    pub b: f64,
    pub a: f64,
    pub n_shifts: usize,
    pub coeffs: Vec<[f64; 2]>,
}

/// `{channels: [{b, a, n_shifts, coeffs: [[re, im], ...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub channels: Vec<CoefficientChannelRecord>,
}

impl From<&CoefficientSet> for CoefficientFile {
    fn from(set: &CoefficientSet) -> Self {
        Self {
            channels: set
                .channels
                .iter()
                .map(|c| CoefficientChannelRecord {
                    b: c.b,
                    a: c.a as f64,
                    n_shifts: c.values.len(),
                    coeffs: c.values.iter().map(|v| [v.re, v.im]).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<CoefficientFile> for CoefficientSet {
    type Error = Error;

    fn try_from(file: CoefficientFile) -> Result<Self> {
        let channels = file
            .channels
            .into_iter()
            .enumerate()
            .map(|(m, rec)| {
                if rec.coeffs.len() != rec.n_shifts {
                    return Err(Error::LengthMismatch {
                        expected: rec.n_shifts,
                        found: rec.coeffs.len(),
                    });
                }
                if !(rec.a >= 1.0 && rec.a.fract() == 0.0) {
                    return Err(Error::invalid(format!(
                        "channel {m}: time step must be a positive integer"
                    )));
                }
                Ok(ChannelCoeffs {
                    t_index: m,
                    b: rec.b,
                    a: rec.a as usize,
                    values: rec
                        .coeffs
                        .iter()
                        .map(|&[re, im]| Complex64::new(re, im))
                        .collect(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(CoefficientSet { channels })
    }
}

impl CoefficientSet {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CoefficientFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CoefficientFile = serde_json::from_str(text)?;
        file.try_into()
    }
}
