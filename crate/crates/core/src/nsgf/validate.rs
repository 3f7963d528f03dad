//! Painless-frame diagnostics: covering axioms, step-size distortion,
//! derivative scaling of the windows, and time-domain decay of the atoms.

use serde::{Deserialize, Serialize};

use super::{NsgfSystem, WindowKind};
use crate::covering::{
    neighbor_sets, nsgf_covering_unchecked, validate_structured, Domain, ValidationReport,
    Violation,
};
use crate::error::{Error, Result};
use crate::fft;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PainlessReport {
    /// Structured-covering checks on the compatible torus covering.
    pub covering: ValidationReport,
    /// `sup_m a_m`.
    pub a_max: f64,
    /// Extremes of `a_m' / a_m` over overlapping cubes.
    pub a_ratio_min: f64,
    pub a_ratio_max: f64,
    /// Empirical `C_β` with `|Δ^β ĥ_m| ≤ C_β a_m^{1/2+β}` for `β = 0, 1`
    /// (finite differences scaled by the bin spacing).
    pub c_beta: [f64; 2],
}

impl PainlessReport {
    pub fn is_clean(&self) -> bool {
        self.covering.is_clean()
    }
}

/// Checks the painless conditions on `sys`. A window that is nonzero
/// outside its declared support is a hard error; everything else is
/// reported.
pub fn validate_painless(sys: &NsgfSystem) -> Result<PainlessReport> {
    let len = sys.len();
    let mut extra = Vec::new();
    for (m, ch) in sys.channels().iter().enumerate() {
        if let Some(k) =
            (0..len).find(|&k| !ch.in_support(k, len) && ch.window_hat[k].norm() != 0.0)
        {
            return Err(Error::SupportViolation { channel: m, bin: k });
        }
        if ch.support_len > ch.n_shifts {
            extra.push(Violation {
                axiom: "painless_support".into(),
                detail: format!(
                    "channel {m}: support of {} bins exceeds {} time shifts",
                    ch.support_len, ch.n_shifts
                ),
            });
        }
    }

    let spec: Vec<(Vec<f64>, f64)> = sys
        .channels()
        .iter()
        .map(|c| (vec![c.b], c.a as f64))
        .collect();
    let cov = nsgf_covering_unchecked(&spec, sys.c_star())?.with_periodic(true);
    let mut covering = validate_structured(&cov, &Domain::Torus)?;
    covering.violations.extend(extra);

    let a: Vec<f64> = sys.channels().iter().map(|c| c.a as f64).collect();
    let a_max = a.iter().copied().fold(0.0, f64::max);
    let (mut a_ratio_min, mut a_ratio_max) = (f64::INFINITY, 0.0_f64);
    for (i, set) in neighbor_sets(&cov).iter().enumerate() {
        for &j in set {
            let r = a[j] / a[i];
            a_ratio_min = a_ratio_min.min(r);
            a_ratio_max = a_ratio_max.max(r);
        }
    }

    let mut c_beta = [0.0_f64; 2];
    for ch in sys.channels() {
        let af = ch.a as f64;
        let peak = ch.window_hat.iter().map(|v| v.norm()).fold(0.0, f64::max);
        c_beta[0] = c_beta[0].max(peak / af.sqrt());
        let slope = (0..len)
            .map(|k| (ch.window_hat[(k + 1) % len] - ch.window_hat[k]).norm() * len as f64)
            .fold(0.0, f64::max);
        c_beta[1] = c_beta[1].max(slope / af.powf(1.5));
    }

    Ok(PainlessReport {
        covering,
        a_max,
        a_ratio_min,
        a_ratio_max,
        c_beta,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpRatio {
    pub p: f64,
    /// `‖h_{T,n}‖_p / |T|^{1/2−1/p}` per channel (identical for every `n`).
    pub per_channel: Vec<f64>,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub order: u32,
    /// `max_x |h_{T,0}[x]| (1 + |A_T| d(x))^N / |T|^{1/2}` per channel, with
    /// `d` the periodic distance to the origin.
    pub per_channel: Vec<f64>,
    pub max: f64,
    pub lp: Vec<LpRatio>,
}

/// Time-domain decay constants of the atoms.
pub fn decay_check(sys: &NsgfSystem, order: u32) -> Result<DecayReport> {
    if order == 0 {
        return Err(Error::invalid("decay order must be at least 1"));
    }
    let len = sys.len();
    let enlarge = 1.0 + 2.0 * sys.c_star();
    let mut per_channel = Vec::with_capacity(sys.channels().len());
    let mut norms: Vec<[f64; 3]> = Vec::with_capacity(sys.channels().len());
    let ps = [1.0, 2.0, 4.0];
    for ch in sys.channels() {
        let det = enlarge / ch.a as f64;
        let mut atom = fft::inverse(&ch.window_hat);
        atom.iter_mut().for_each(|v| *v /= len as f64);
        let c = atom
            .iter()
            .enumerate()
            .map(|(x, v)| {
                let dist = x.min(len - x) as f64;
                v.norm() * (1.0 + det * dist).powi(order as i32) / det.sqrt()
            })
            .fold(0.0, f64::max);
        per_channel.push(c);
        let mut row = [0.0; 3];
        for (slot, &p) in row.iter_mut().zip(&ps) {
            let norm = atom
                .iter()
                .map(|v| v.norm().powf(p))
                .sum::<f64>()
                .powf(1.0 / p);
            *slot = norm / det.powf(0.5 - 1.0 / p);
        }
        norms.push(row);
    }
    let max = per_channel.iter().copied().fold(0.0, f64::max);
    let lp = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let per: Vec<f64> = norms.iter().map(|r| r[i]).collect();
            let max = per.iter().copied().fold(0.0, f64::max);
            LpRatio {
                p,
                per_channel: per,
                max,
            }
        })
        .collect();
    // every shift of an atom is a circular shift, so n = 0 is representative
    debug_assert!(sys.channels().is_empty() || sys.atom(0, 0, WindowKind::Original).is_ok());
    Ok(DecayReport {
        order,
        per_channel,
        max,
        lp,
    })
}
