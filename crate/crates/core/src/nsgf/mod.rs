//! Painless nonstationary Gabor frames on a length-`L` periodic grid.
//!
//! Channel `m` has a frequency window `ĥ_m` supported on `B_m = L/a_m`
//! consecutive DFT bins starting at offset `b_m` (cycles/sample), and time
//! step `a_m` samples, so the atoms are `h_{m,n}[x] = h_m[x − n a_m]` for
//! `n = 0..N_m` with `N_m = L/a_m`.
//!
//! Conventions: `ĥ_m` is the plain DFT of `h_m` (so `h_m = L⁻¹ IDFT ĥ_m`),
//! and inner products are plain sums. With these, the frame operator is the
//! Fourier multiplier `s[k] = Σ_m a_m⁻¹ |ĥ_m[k]|²` exactly, whenever every
//! support fits in `N_m` bins.

mod config;
mod dense;
mod validate;

pub use config::{
    ChannelSpec, CoefficientChannelRecord, CoefficientFile, FrameConfig, PrototypeSpec,
};
pub use dense::{dense_frame_matrix, DenseFrameMatrix, DENSE_MAX_LEN};
pub use validate::{decay_check, validate_painless, DecayReport, PainlessReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bapu::{smooth_step, PlateauBump};
use crate::covering::{covering_from_nsgf, Covering};
use crate::error::{Error, Result};
use crate::fft;

/// Default enlargement constant `C*` of the frequency cubes.
pub const DEFAULT_C_STAR: f64 = 0.25;

/// Relative floor on the lower frame bound.
const FRAME_FLOOR: f64 = 1e-12;

/// Prototype `φ` on `[0, 1]` generating the windows `ĥ_m = a_m^{1/2} φ(a_m(ξ − b_m))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prototype {
    /// Indicator of `[0, 1)`.
    Flat,
    /// Smooth plateau bump with the given ramp width.
    Plateau(PlateauBump),
}

impl Prototype {
    pub fn plateau(ramp_width: f64) -> Result<Self> {
        Ok(Prototype::Plateau(PlateauBump::new(ramp_width, 1)?))
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Prototype::Flat => {
                if (-1e-9..1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            Prototype::Plateau(bump) => {
                let w = bump.ramp_width();
                smooth_step(t / w) * smooth_step((1.0 - t) / w)
            }
        }
    }

    pub fn ramp_width(&self) -> f64 {
        match self {
            Prototype::Flat => 0.0,
            Prototype::Plateau(b) => b.ramp_width(),
        }
    }
}

/// Which window family to synthesize with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Original,
    Dual,
    Tight,
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(WindowKind::Original),
            "dual" => Ok(WindowKind::Dual),
            "tight" => Ok(WindowKind::Tight),
            other => Err(Error::invalid(format!("unknown window family '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub b: f64,
    pub a: usize,
    pub n_shifts: usize,
    pub support_start: usize,
    pub support_len: usize,
    pub window_hat: Vec<Complex64>,
}

impl Channel {
    /// Wrapped bin indices of the declared support.
    pub fn support(&self, len: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.support_len).map(move |j| (self.support_start + j) % len)
    }

    pub fn in_support(&self, k: usize, len: usize) -> bool {
        (k + len - self.support_start % len) % len < self.support_len
    }
}

#[derive(Clone, Debug)]
pub struct NsgfSystem {
    len: usize,
    channels: Vec<Channel>,
    c_star: f64,
    multiplier: Vec<f64>,
    bounds: (f64, f64),
}

fn integral_step(a: f64, len: usize) -> Result<usize> {
    let rounded = a.round();
    if !(a.is_finite() && rounded >= 1.0 && (a - rounded).abs() <= 1e-9) {
        return Err(Error::TimeStepDoesNotDivide { step: a, len });
    }
    let step = rounded as usize;
    if !len.is_multiple_of(step) {
        return Err(Error::TimeStepDoesNotDivide { step: a, len });
    }
    Ok(step)
}

/// Samples `ĥ_m[k] = a_m^{1/2} φ(a_m(k/L − b_m))` on the `L/a_m` bins
/// starting at `⌈b_m L⌉`, and caches the frame multiplier.
pub fn make_windows(
    len: usize,
    spec: &[(f64, f64)],
    c_star: f64,
    prototype: &Prototype,
) -> Result<NsgfSystem> {
    if len == 0 {
        return Err(Error::invalid("signal length must be positive"));
    }
    if spec.is_empty() {
        return Err(Error::invalid("at least one channel is required"));
    }
    let mut channels = Vec::with_capacity(spec.len());
    for &(b, a) in spec {
        if !(0.0..1.0).contains(&b) {
            return Err(Error::invalid(format!(
                "frequency offset must lie in [0, 1), got {b}"
            )));
        }
        let step = integral_step(a, len)?;
        let n_shifts = len / step;
        let start = (b * len as f64 - 1e-9).ceil() as usize;
        let mut window_hat = vec![Complex64::new(0.0, 0.0); len];
        let amp = (step as f64).sqrt();
        for j in 0..n_shifts {
            let k = start + j;
            let t = step as f64 * (k as f64 / len as f64 - b);
            window_hat[k % len] = Complex64::new(amp * prototype.value(t), 0.0);
        }
        channels.push(Channel {
            b,
            a: step,
            n_shifts,
            support_start: start % len,
            support_len: n_shifts,
            window_hat,
        });
    }
    let sys = NsgfSystem::from_channels(len, channels, c_star)?;
    let (lower, upper) = sys.bounds;
    if !(lower > FRAME_FLOOR * upper) {
        return Err(Error::NotAFrame { lower, upper });
    }
    Ok(sys)
}

impl NsgfSystem {
    /// Assembles a system from explicit channels without requiring the
    /// frame condition.
    pub fn from_channels(len: usize, channels: Vec<Channel>, c_star: f64) -> Result<Self> {
        if !(c_star > 0.0 && c_star.is_finite()) {
            return Err(Error::invalid(format!("C* must be positive, got {c_star}")));
        }
        for ch in &channels {
            if ch.window_hat.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: ch.window_hat.len(),
                });
            }
            if ch.a == 0 || ch.a * ch.n_shifts != len {
                return Err(Error::TimeStepDoesNotDivide {
                    step: ch.a as f64,
                    len,
                });
            }
        }
        let mut multiplier = vec![0.0; len];
        for ch in &channels {
            let inv_a = 1.0 / ch.a as f64;
            for (s, w) in multiplier.iter_mut().zip(&ch.window_hat) {
                *s += inv_a * w.norm_sqr();
            }
        }
        let lower = multiplier.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = multiplier.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            len,
            channels,
            c_star,
            multiplier,
            bounds: (lower, upper),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn c_star(&self) -> f64 {
        self.c_star
    }

    /// `s[k] = Σ_m a_m⁻¹ |ĥ_m[k]|²`.
    pub fn frame_multiplier(&self) -> &[f64] {
        &self.multiplier
    }

    /// `(A, B) = (min_k s[k], max_k s[k])`.
    pub fn frame_bounds(&self) -> (f64, f64) {
        self.bounds
    }

    pub fn total_coefficients(&self) -> usize {
        self.channels.iter().map(|c| c.n_shifts).sum()
    }

    /// `(b_m, a_m)` pairs in channel order.
    pub fn channel_specs(&self) -> Vec<(f64, f64)> {
        self.channels.iter().map(|c| (c.b, c.a as f64)).collect()
    }

    /// The compatible covering on the unit torus; member `m` is channel `m`.
    pub fn covering(&self) -> Result<Covering> {
        let spec: Vec<(Vec<f64>, f64)> = self
            .channels
            .iter()
            .map(|c| (vec![c.b], c.a as f64))
            .collect();
        Ok(covering_from_nsgf(&spec, self.c_star)?.with_periodic(true))
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found,
            });
        }
        Ok(())
    }

    /// Frequency windows of the requested family.
    pub fn windows(&self, kind: WindowKind) -> Result<Vec<Vec<Complex64>>> {
        match kind {
            WindowKind::Original => {
                Ok(self.channels.iter().map(|c| c.window_hat.clone()).collect())
            }
            WindowKind::Dual | WindowKind::Tight => dual_windows(self, kind),
        }
    }

    /// Time-domain atom `w_{m,n}` of the requested family.
    pub fn atom(&self, m: usize, n: usize, kind: WindowKind) -> Result<Vec<Complex64>> {
        let ch = self
            .channels
            .get(m)
            .ok_or_else(|| Error::invalid(format!("no channel {m}")))?;
        if n >= ch.n_shifts {
            return Err(Error::invalid(format!(
                "shift {n} out of range for channel {m}"
            )));
        }
        let window = match kind {
            WindowKind::Original => ch.window_hat.clone(),
            _ => dual_windows(self, kind)?.swap_remove(m),
        };
        let base = fft::inverse(&window);
        let scale = 1.0 / self.len as f64;
        let shift = n * ch.a;
        Ok((0..self.len)
            .map(|x| base[(x + self.len - shift) % self.len] * scale)
            .collect())
    }
}

/// Canonical dual (`ĥ_m / s`) or canonical tight (`ĥ_m / √s`) windows.
pub fn dual_windows(sys: &NsgfSystem, mode: WindowKind) -> Result<Vec<Vec<Complex64>>> {
    let (lower, upper) = sys.frame_bounds();
    if !(lower > 0.0) {
        return Err(Error::NotAFrame { lower, upper });
    }
    let divisor: Vec<f64> = match mode {
        WindowKind::Dual => sys.multiplier.clone(),
        WindowKind::Tight => sys.multiplier.iter().map(|s| s.sqrt()).collect(),
        WindowKind::Original => return sys.windows(WindowKind::Original),
    };
    Ok(sys
        .channels
        .iter()
        .map(|ch| {
            ch.window_hat
                .iter()
                .zip(&divisor)
                .map(|(w, d)| w / d)
                .collect()
        })
        .collect())
}

/// Coefficients of one channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelCoeffs {
    /// Index of the covering member this channel maps to.
    pub t_index: usize,
    pub b: f64,
    pub a: usize,
    pub values: Vec<Complex64>,
}

/// Frame coefficients `c[m][n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub channels: Vec<ChannelCoeffs>,
}

impl CoefficientSet {
    pub fn zeros_for(sys: &NsgfSystem) -> Self {
        Self {
            channels: sys
                .channels
                .iter()
                .enumerate()
                .map(|(m, ch)| ChannelCoeffs {
                    t_index: m,
                    b: ch.b,
                    a: ch.a,
                    values: vec![Complex64::new(0.0, 0.0); ch.n_shifts],
                })
                .collect(),
        }
    }

    pub fn total_len(&self) -> usize {
        self.channels.iter().map(|c| c.values.len()).sum()
    }

    /// `(channel, n, value)` in channel-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.channels
            .iter()
            .enumerate()
            .flat_map(|(m, ch)| ch.values.iter().enumerate().map(move |(n, &v)| (m, n, v)))
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.channels[m].values[n]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        self.channels[m].values[n] = value;
    }

    /// Multiplies every value of channel `m` by `factors[m]`.
    pub fn scale_channels(&self, factors: &[f64]) -> Self {
        let mut out = self.clone();
        for (ch, &f) in out.channels.iter_mut().zip(factors) {
            ch.values.iter_mut().for_each(|v| *v *= f);
        }
        out
    }

    pub fn shape_matches(&self, sys: &NsgfSystem) -> bool {
        self.channels.len() == sys.channels.len()
            && self
                .channels
                .iter()
                .zip(&sys.channels)
                .all(|(c, ch)| c.values.len() == ch.n_shifts)
    }
}

/// `c[m][n] = ⟨f, h_{m,n}⟩ = Σ_x f[x] conj(h_{m,n}[x])`, computed by folding
/// `f̂ · conj(ĥ_m)` onto `N_m` bins and one inverse FFT per channel.
pub fn analyze(sys: &NsgfSystem, signal: &[Complex64]) -> Result<CoefficientSet> {
    sys.check_len(signal.len())?;
    let spec = fft::forward(signal);
    let scale = 1.0 / sys.len as f64;
    let channels = sys
        .channels
        .iter()
        .enumerate()
        .map(|(m, ch)| {
            let mut folded = vec![Complex64::new(0.0, 0.0); ch.n_shifts];
            for k in ch.support(sys.len) {
                folded[k % ch.n_shifts] += spec[k] * ch.window_hat[k].conj();
            }
            fft::inverse_in_place(&mut folded);
            folded.iter_mut().for_each(|v| *v *= scale);
            ChannelCoeffs {
                t_index: m,
                b: ch.b,
                a: ch.a,
                values: folded,
            }
        })
        .collect();
    Ok(CoefficientSet { channels })
}

/// `Σ_{m,n} c[m][n] w_{m,n}` for the chosen window family.
pub fn synthesize(
    sys: &NsgfSystem,
    coeffs: &CoefficientSet,
    windows: WindowKind,
) -> Result<Vec<Complex64>> {
    synthesize_with(sys, coeffs, &sys.windows(windows)?)
}

/// [`synthesize`] with a precomputed window family, one `ĥ` per channel.
pub fn synthesize_with(
    sys: &NsgfSystem,
    coeffs: &CoefficientSet,
    family: &[Vec<Complex64>],
) -> Result<Vec<Complex64>> {
    if !coeffs.shape_matches(sys) || family.len() != sys.channels.len() {
        return Err(Error::invalid("coefficient shape does not match the frame"));
    }
    let mut spec = vec![Complex64::new(0.0, 0.0); sys.len];
    for ((ch, cc), window) in sys.channels.iter().zip(&coeffs.channels).zip(family) {
        let spread = fft::forward(&cc.values);
        for k in ch.support(sys.len) {
            spec[k] += window[k] * spread[k % ch.n_shifts];
        }
    }
    fft::inverse_in_place(&mut spec);
    let scale = 1.0 / sys.len as f64;
    spec.iter_mut().for_each(|v| *v *= scale);
    Ok(spec)
}

/// `S f = F⁻¹(s · F f)`.
pub fn frame_apply(sys: &NsgfSystem, signal: &[Complex64]) -> Result<Vec<Complex64>> {
    sys.check_len(signal.len())?;
    let mut spec = fft::forward(signal);
    spec.iter_mut()
        .zip(&sys.multiplier)
        .for_each(|(v, s)| *v *= s);
    fft::inverse_in_place(&mut spec);
    let scale = 1.0 / sys.len as f64;
    spec.iter_mut().for_each(|v| *v *= scale);
    Ok(spec)
}
