//! Decomposition-space and coefficient-space norms, and empirical checks of
//! their equivalence.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bapu::Bapu;
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::fft;
use crate::nsgf::{analyze, CoefficientSet, NsgfSystem};

/// Exponents of `D(Q, L^p, ℓ^q_{ω^s})` and `d(Q, ℓ^p, ℓ^q_{ω^s})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub p: f64,
    pub q: f64,
    pub s: f64,
}

impl NormParams {
    pub fn new(p: f64, q: f64, s: f64) -> Result<Self> {
        let params = Self { p, q, s };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<()> {
        check_exponent("p", self.p)?;
        check_exponent("q", self.q)?;
        if !self.s.is_finite() {
            return Err(Error::invalid(format!("s must be finite, got {}", self.s)));
        }
        Ok(())
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// `(Σ_T (ω_T^s |a_T|)^q)^{1/q}`.
pub fn seq_norm(values: &[f64], weights: &[f64], q: f64, s: f64) -> Result<f64> {
    check_exponent("q", q)?;
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            found: values.len(),
        });
    }
    let sum: f64 = values
        .iter()
        .zip(weights)
        .map(|(v, w)| (w.powf(s) * v.abs()).powf(q))
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// `(Σ_x |g[x]|^p)^{1/p}` with unit sample spacing.
pub fn lp_grid_norm(g: &[Complex64], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    Ok(lp(g.iter().map(|v| v.norm()), p))
}

fn lp(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == 2.0 {
        values.map(|v| v * v).sum::<f64>().sqrt()
    } else if p == 1.0 {
        values.sum()
    } else {
        values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Per-member `‖ψ_T(D) f‖_p`.
pub fn multiplier_norms(signal: &[Complex64], bapu: &Bapu, p: f64) -> Result<Vec<f64>> {
    check_exponent("p", p)?;
    let len = bapu.grid().len();
    if signal.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: signal.len(),
        });
    }
    let spec = fft::unitary_forward(signal);
    Ok(bapu
        .psi()
        .iter()
        .map(|psi| {
            let piece: Vec<Complex64> = spec.iter().zip(psi).map(|(v, &w)| v * w).collect();
            lp(fft::unitary_inverse(&piece).iter().map(|v| v.norm()), p)
        })
        .collect())
}

/// `‖{‖ψ_T(D) f‖_{L^p}}_T‖_{ℓ^q_{ω^s}}`.
pub fn ds_norm(signal: &[Complex64], bapu: &Bapu, params: NormParams) -> Result<f64> {
    params.check()?;
    let pieces = multiplier_norms(signal, bapu, params.p)?;
    seq_norm(&pieces, bapu.covering().weights(), params.q, params.s)
}

/// Rescales `c_{T,n}` to `⟨f, h^p_{T,n}⟩ = |T|^{1/2−1/p} c_{T,n}`.
pub fn lp_normalized_coeffs(
    coeffs: &CoefficientSet,
    covering: &Covering,
    p: f64,
) -> Result<CoefficientSet> {
    check_exponent("p", p)?;
    let factors = channel_dets(coeffs, covering)?
        .into_iter()
        .map(|det| det.powf(0.5 - 1.0 / p))
        .collect::<Vec<_>>();
    Ok(coeffs.scale_channels(&factors))
}

fn channel_dets(coeffs: &CoefficientSet, covering: &Covering) -> Result<Vec<f64>> {
    coeffs
        .channels
        .iter()
        .map(|ch| {
            covering
                .maps()
                .get(ch.t_index)
                .map(|m| m.det())
                .ok_or_else(|| Error::invalid(format!("no covering member {}", ch.t_index)))
        })
        .collect()
}

/// `d(Q, ℓ^p, ℓ^q_{ω^s})` norm: inner `ℓ^p` over `n`, outer weighted `ℓ^q`
/// over `T`.
pub fn coeff_norm(coeffs: &CoefficientSet, covering: &Covering, params: NormParams) -> Result<f64> {
    params.check()?;
    let mut inner = Vec::with_capacity(coeffs.channels.len());
    let mut weights = Vec::with_capacity(coeffs.channels.len());
    for ch in &coeffs.channels {
        let w = covering
            .weights()
            .get(ch.t_index)
            .ok_or_else(|| Error::invalid(format!("no covering member {}", ch.t_index)))?;
        inner.push(lp(ch.values.iter().map(|v| v.norm()), params.p));
        weights.push(*w);
    }
    seq_norm(&inner, &weights, params.q, params.s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalRatio {
    pub signal_id: usize,
    pub ds_norm: f64,
    pub coeff_norm: f64,
    pub ratio: f64,
}

/// Empirical constants of `‖f‖_D ≍ ‖{⟨f, h^p_{T,n}⟩}‖_d` over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub corpus: String,
    pub params: NormParams,
    pub ratios: Vec<SignalRatio>,
    pub skipped: Vec<usize>,
    #[serde(rename = "C1_hat")]
    pub c1_hat: f64,
    #[serde(rename = "C2_hat")]
    pub c2_hat: f64,
}

impl EquivalenceReport {
    /// `C2_hat / C1_hat`.
    pub fn spread(&self) -> f64 {
        self.c2_hat / self.c1_hat
    }

    /// CSV with columns `signal_id, ds_norm, coeff_norm, ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for row in &self.ratios {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Ratio `coeff_norm(lp_normalized_coeffs(analyze(f))) / ds_norm(f)` per
/// signal. Zero signals are skipped.
pub fn equivalence_report(
    corpus: &[Vec<Complex64>],
    sys: &NsgfSystem,
    covering: &Covering,
    bapu: &Bapu,
    params: NormParams,
    descriptor: &str,
) -> Result<EquivalenceReport> {
    params.check()?;
    let mut ratios = Vec::with_capacity(corpus.len());
    let mut skipped = Vec::new();
    for (id, f) in corpus.iter().enumerate() {
        let ds = ds_norm(f, bapu, params)?;
        if ds == 0.0 {
            log::warn!("signal {id} has zero norm; skipped");
            skipped.push(id);
            continue;
        }
        let c = lp_normalized_coeffs(&analyze(sys, f)?, covering, params.p)?;
        let cn = coeff_norm(&c, covering, params)?;
        ratios.push(SignalRatio {
            signal_id: id,
            ds_norm: ds,
            coeff_norm: cn,
            ratio: cn / ds,
        });
    }
    if ratios.is_empty() {
        return Err(Error::invalid("corpus has no nonzero signal"));
    }
    let c1_hat = ratios.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let c2_hat = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(EquivalenceReport {
        corpus: descriptor.to_string(),
        params,
        ratios,
        skipped,
        c1_hat,
        c2_hat,
    })
}

/// `‖h_T‖_q / (|T|^{1/p−1/q} ‖h_T‖_p)` for one exponent pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NikolskiiRow {
    pub p: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub q: f64,
    pub per_channel: Vec<f64>,
    pub max: f64,
    /// Max over min of `per_channel`.
    pub spread: f64,
}

/// `‖ψ_T(D) f‖_p / (‖F⁻¹ψ_T‖_{p̃} ‖f‖_p)` with `p̃ = min(1, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierRow {
    pub p: f64,
    pub per_member: Vec<f64>,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub nikolskii: Vec<NikolskiiRow>,
    pub multiplier: Vec<MultiplierRow>,
}

/// Grid proxies for the band-limited Nikolskii inequality (on the windows)
/// and the multiplier bound (on `ψ_T` with random band-limited inputs drawn
/// from `seed`).
pub fn appendix_lemma_checks(
    sys: &NsgfSystem,
    covering: &Covering,
    bapu: &Bapu,
    seed: u64,
) -> Result<AppendixReport> {
    let len = sys.len();
    if bapu.grid().len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: bapu.grid().len(),
        });
    }
    let atoms: Vec<Vec<f64>> = sys
        .channels()
        .iter()
        .map(|ch| {
            fft::inverse(&ch.window_hat)
                .iter()
                .map(|v| v.norm() / len as f64)
                .collect()
        })
        .collect();
    let dets: Vec<f64> = (0..sys.channels().len())
        .map(|m| covering.maps()[m].det())
        .collect();
    let norm = |row: &[f64], p: f64| -> f64 {
        if p.is_infinite() {
            row.iter().copied().fold(0.0, f64::max)
        } else {
            lp(row.iter().copied(), p)
        }
    };
    let nikolskii = [(1.0, 2.0), (2.0, 4.0), (1.0, f64::INFINITY)]
        .into_iter()
        .map(|(p, q)| {
            let per_channel: Vec<f64> = atoms
                .iter()
                .zip(&dets)
                .map(|(h, det)| norm(h, q) / (det.powf(1.0 / p - 1.0 / q) * norm(h, p)))
                .collect();
            let max = per_channel.iter().copied().fold(0.0, f64::max);
            let min = per_channel.iter().copied().fold(f64::INFINITY, f64::min);
            NikolskiiRow {
                p,
                q,
                per_channel,
                max,
                spread: max / min,
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernels: Vec<Vec<f64>> = bapu
        .psi()
        .iter()
        .map(|psi| {
            let spec: Vec<Complex64> = psi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft::inverse(&spec)
                .iter()
                .map(|v| v.norm() / len as f64)
                .collect()
        })
        .collect();
    let probes: Vec<Vec<Complex64>> = bapu
        .psi()
        .iter()
        .map(|psi| {
            let spec: Vec<Complex64> = psi
                .iter()
                .map(|&v| {
                    if v == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    }
                })
                .collect();
            fft::unitary_inverse(&spec)
        })
        .collect();
    let multiplier = [0.5, 1.0, 2.0]
        .into_iter()
        .map(|p: f64| {
            let p_tilde = p.min(1.0);
            let per_member: Vec<f64> = bapu
                .psi()
                .iter()
                .zip(&kernels)
                .zip(&probes)
                .map(|((psi, kernel), f)| {
                    let mut spec = fft::unitary_forward(f);
                    spec.iter_mut().zip(psi).for_each(|(v, &w)| *v *= w);
                    let out = fft::unitary_inverse(&spec);
                    let num = lp(out.iter().map(|v| v.norm()), p);
                    let den = norm(kernel, p_tilde) * lp(f.iter().map(|v| v.norm()), p);
                    if den == 0.0 {
                        0.0
                    } else {
                        num / den
                    }
                })
                .collect();
            let max = per_member.iter().copied().fold(0.0, f64::max);
            MultiplierRow { p, per_member, max }
        })
        .collect();
    Ok(AppendixReport {
        nikolskii,
        multiplier,
    })
}
