//! N-term approximation by thresholding L^p-normalized frame coefficients,
//! and decay-rate fitting.

use std::io::Write;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bapu::Bapu;
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::nsgf::{analyze, synthesize_with, CoefficientSet, NsgfSystem, WindowKind};
use crate::spaces::{ds_norm, NormParams};

/// One entry of a decreasing rearrangement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ranked {
    pub magnitude: f64,
    pub channel: usize,
    pub n: usize,
}

/// Coefficients by decreasing magnitude; ties keep `(channel, n)` order.
pub fn rearrange(coeffs: &CoefficientSet) -> Vec<Ranked> {
    let mut out: Vec<Ranked> = coeffs
        .iter()
        .map(|(channel, n, v)| Ranked {
            magnitude: v.norm(),
            channel,
            n,
        })
        .collect();
    // stable sort: equal magnitudes stay in channel-major order
    out.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude));
    out
}

/// Keeps the `n_keep` canonical coefficients with the largest
/// `|T|^{1/2−1/p} |c|` and zeroes the rest.
pub fn threshold(
    coeffs: &CoefficientSet,
    covering: &Covering,
    n_keep: usize,
    p: f64,
) -> Result<CoefficientSet> {
    let normalized = crate::spaces::lp_normalized_coeffs(coeffs, covering, p)?;
    let mut kept = coeffs.clone();
    kept.channels.iter_mut().for_each(|ch| {
        ch.values
            .iter_mut()
            .for_each(|v| *v = Complex64::new(0.0, 0.0))
    });
    for r in rearrange(&normalized).into_iter().take(n_keep) {
        kept.set(r.channel, r.n, coeffs.get(r.channel, r.n));
    }
    Ok(kept)
}

/// Precomputed analysis and dual windows of one signal, for repeated
/// reconstructions from its largest coefficients.
pub struct NTermApproximator<'a> {
    sys: &'a NsgfSystem,
    covering: &'a Covering,
    coeffs: CoefficientSet,
    duals: Vec<Vec<Complex64>>,
}

impl<'a> NTermApproximator<'a> {
    pub fn new(sys: &'a NsgfSystem, covering: &'a Covering, signal: &[Complex64]) -> Result<Self> {
        Ok(Self {
            sys,
            covering,
            coeffs: analyze(sys, signal)?,
            duals: sys.windows(WindowKind::Dual)?,
        })
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// `f_N`: dual synthesis of the `n` largest normalized coefficients.
    /// `n` beyond the coefficient count keeps everything.
    pub fn approx(&self, n: usize, p: f64) -> Result<Vec<Complex64>> {
        let kept = threshold(&self.coeffs, self.covering, n, p)?;
        self.synthesize(&kept)
    }

    /// Dual synthesis of an arbitrary coefficient set.
    pub fn synthesize(&self, coeffs: &CoefficientSet) -> Result<Vec<Complex64>> {
        synthesize_with(self.sys, coeffs, &self.duals)
    }
}

/// `f_N` from the `n` largest `⟨f, h^p_{T,n}⟩`.
pub fn nterm_approx(
    sys: &NsgfSystem,
    covering: &Covering,
    signal: &[Complex64],
    n: usize,
    p: f64,
) -> Result<Vec<Complex64>> {
    NTermApproximator::new(sys, covering, signal)?.approx(n, p)
}

/// Decay of `‖f − f_N‖` in `D(Q, L^p, ℓ^p_{ω^s})` over a list of `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    #[serde(rename = "Ns")]
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
    pub tau: f64,
    pub p: f64,
    pub s: f64,
    pub alpha: f64,
    /// `None` with fewer than two points or when the fit range reaches
    /// exact recovery.
    pub fitted_slope: Option<f64>,
    pub fit_range: Range<usize>,
    /// `‖f‖` in `D(Q, L^τ, ℓ^τ_{ω^s})`.
    pub norm_tau: f64,
}

impl SweepResult {
    /// `max_i errors_i N_i^α / ‖f‖_{τ,τ,s}`.
    pub fn jackson_constant(&self) -> f64 {
        self.ns
            .iter()
            .zip(&self.errors)
            .map(|(&n, e)| e * (n as f64).powf(self.alpha) / self.norm_tau)
            .fold(0.0, f64::max)
    }

    /// CSV with columns `N, error, N_pow_alpha_times_error`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["N", "error", "N_pow_alpha_times_error"])?;
        for (&n, e) in self.ns.iter().zip(&self.errors) {
            wtr.write_record([
                n.to_string(),
                e.to_string(),
                (e * (n as f64).powf(self.alpha)).to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Default fit range: all points but the first and last, when at least four.
pub fn default_fit_range(count: usize) -> Range<usize> {
    if count >= 4 {
        1..count - 1
    } else {
        0..count
    }
}

#[allow(clippy::too_many_arguments)]
pub fn error_sweep(
    sys: &NsgfSystem,
    covering: &Covering,
    bapu: &Bapu,
    signal: &[Complex64],
    ns: &[usize],
    tau: f64,
    p: f64,
    s: f64,
) -> Result<SweepResult> {
    let alpha = 1.0 / tau - 1.0 / p;
    if !(tau > 0.0 && alpha > 0.0) {
        return Err(Error::AlphaNotPositive { tau, p });
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N values must be strictly increasing"));
    }
    let params = NormParams::new(p, p, s)?;
    let norm_tau = ds_norm(signal, bapu, NormParams::new(tau, tau, s)?)?;
    let approx = NTermApproximator::new(sys, covering, signal)?;
    let errors = ns
        .iter()
        .map(|&n| {
            let f_n = approx.approx(n, p)?;
            let residual: Vec<Complex64> = signal.iter().zip(&f_n).map(|(a, b)| a - b).collect();
            ds_norm(&residual, bapu, params)
        })
        .collect::<Result<Vec<f64>>>()?;
    let fit_range = default_fit_range(ns.len());
    let fitted_slope = match fit_decay(ns, &errors, fit_range.clone()) {
        _ if fit_range.len() < 2 => None,
        Ok(v) => Some(v),
        Err(Error::ExactRecovery) => {
            log::info!("exact recovery inside the fit range; no slope");
            None
        }
        Err(e) => return Err(e),
    };
    Ok(SweepResult {
        ns: ns.to_vec(),
        errors,
        tau,
        p,
        s,
        alpha,
        fitted_slope,
        fit_range,
        norm_tau,
    })
}

/// Least-squares slope of `log error` against `log N` over `range`.
pub fn fit_decay(ns: &[usize], errors: &[f64], range: Range<usize>) -> Result<f64> {
    if ns.len() != errors.len() {
        return Err(Error::LengthMismatch {
            expected: ns.len(),
            found: errors.len(),
        });
    }
    if range.end > ns.len() || range.len() < 2 {
        return Err(Error::invalid("fit range needs at least two points"));
    }
    if errors[range.clone()].iter().any(|&e| !(e > 0.0)) {
        return Err(Error::ExactRecovery);
    }
    let xs: Vec<f64> = ns[range.clone()].iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors[range].iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit needs distinct N values"));
    }
    Ok(sxy / sxx)
}
