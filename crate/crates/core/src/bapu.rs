//! Smooth partitions of unity subordinate to a covering, sampled on a
//! frequency grid, and their action as Fourier multipliers.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::fft;

/// Denominators below this are treated as genuine covering gaps.
const GAP_THRESHOLD: f64 = 1e-14;

/// `ρ(t) = exp(−1/t)` for `t > 0`, else 0.
fn rho(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = rho(t);
        a / (a + rho(1.0 - t))
    }
}

/// C^∞ bump on the unit cube: 1 on `(w, 1−w)^d`, 0 outside `(0, 1)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlateauBump {
    ramp_width: f64,
    dimension: usize,
}

impl PlateauBump {
    pub fn new(ramp_width: f64, dimension: usize) -> Result<Self> {
        if !(ramp_width > 0.0 && ramp_width < 0.5) {
            return Err(Error::invalid(format!(
                "ramp width must lie in (0, 1/2), got {ramp_width}"
            )));
        }
        if dimension == 0 {
            return Err(Error::invalid("bump dimension must be positive"));
        }
        Ok(Self {
            ramp_width,
            dimension,
        })
    }

    /// Widest ramp whose plateau still contains the covering's inner box,
    /// measured in the base box's normalized coordinates.
    pub fn fitted(cov: &Covering) -> Result<Self> {
        let w = cov
            .base_box()
            .bounds()
            .iter()
            .zip(cov.inner_box().bounds())
            .map(|(&[q0, q1], &[p0, p1])| (p0 - q0).min(q1 - p1) / (q1 - q0))
            .fold(0.5, f64::min);
        Self::new(w, cov.dimension())
    }

    pub fn ramp_width(&self) -> f64 {
        self.ramp_width
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// One-dimensional profile `σ(x/w)·σ((1−x)/w)`.
    pub fn profile(&self, x: f64) -> f64 {
        let w = self.ramp_width;
        smooth_step(x / w) * smooth_step((1.0 - x) / w)
    }

    pub fn value(&self, point: &[f64]) -> f64 {
        point.iter().map(|&x| self.profile(x)).product()
    }
}

pub fn plateau_value(bump: &PlateauBump, point: &[f64]) -> f64 {
    bump.value(point)
}

/// One-dimensional frequency grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FrequencyGrid {
    /// `ξ_k = k/len` on the periodic band `[0, 1)` (DFT bins of a length-`len` signal).
    Torus { len: usize },
    /// `len` equispaced points on the closed band `[lo, hi]`.
    Band { lo: f64, hi: f64, len: usize },
}

impl FrequencyGrid {
    pub fn len(&self) -> usize {
        match *self {
            FrequencyGrid::Torus { len } | FrequencyGrid::Band { len, .. } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        match *self {
            FrequencyGrid::Torus { len } => 1.0 / len as f64,
            FrequencyGrid::Band { lo, hi, len } => (hi - lo) / (len.max(2) - 1) as f64,
        }
    }

    pub fn xi(&self, k: usize) -> f64 {
        match *self {
            FrequencyGrid::Torus { len } => k as f64 / len as f64,
            FrequencyGrid::Band { lo, .. } => lo + k as f64 * self.spacing(),
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, FrequencyGrid::Torus { .. })
    }

    fn check(&self) -> Result<()> {
        match *self {
            FrequencyGrid::Torus { len: 0 } => Err(Error::invalid("grid needs at least one bin")),
            FrequencyGrid::Band { lo, hi, len } if len < 2 || !(lo < hi) => Err(Error::invalid(
                "band grid needs lo < hi and at least two points",
            )),
            _ => Ok(()),
        }
    }
}

/// Sampled partition of unity `{ψ_T}` with `ψ_T = Φ(T⁻¹·) / Σ_T' Φ(T'⁻¹·)`.
#[derive(Clone, Debug)]
pub struct Bapu {
    covering: Covering,
    bump: PlateauBump,
    grid: FrequencyGrid,
    psi: Vec<Vec<f64>>,
}

/// Builds the partition of unity on `grid`. On a torus grid each `Φ(T⁻¹·)`
/// is periodized over integer shifts, so members whose boxes leave `[0, 1)`
/// wrap around.
pub fn build_bapu(cov: &Covering, bump: &PlateauBump, grid: FrequencyGrid) -> Result<Bapu> {
    grid.check()?;
    if cov.is_empty() {
        return Err(Error::EmptyCovering);
    }
    if cov.dimension() != 1 {
        return Err(Error::invalid(
            "sampled partitions of unity are one-dimensional",
        ));
    }
    if bump.dimension() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: bump.dimension(),
        });
    }
    let [q0, q1] = cov.base_box().bounds()[0];
    let raw: Vec<Vec<f64>> = cov
        .maps()
        .iter()
        .enumerate()
        .map(|(t, map)| {
            let [lo, hi] = cov.image(t).bounds()[0];
            let (a, c) = (map.scale()[0], map.offset()[0]);
            (0..grid.len())
                .map(|k| {
                    let xi = grid.xi(k);
                    let eval = |x: f64| bump.profile(((x - c) / a - q0) / (q1 - q0));
                    if grid.is_periodic() {
                        let first = (lo - xi).ceil() as i64;
                        let last = (hi - xi).floor() as i64;
                        (first..=last).map(|j| eval(xi + j as f64)).sum()
                    } else {
                        eval(xi)
                    }
                })
                .collect()
        })
        .collect();

    let mut psi = raw;
    for k in 0..grid.len() {
        let denom: f64 = psi.iter().map(|row| row[k]).sum();
        if denom < GAP_THRESHOLD {
            return Err(Error::CoveringGap { bin: k });
        }
        for row in psi.iter_mut() {
            row[k] /= denom;
        }
    }
    Ok(Bapu {
        covering: cov.clone(),
        bump: *bump,
        grid,
        psi,
    })
}

impl Bapu {
    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn bump(&self) -> &PlateauBump {
        &self.bump
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn psi(&self) -> &[Vec<f64>] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// `max_k |Σ_T ψ_T[k] − 1|`.
    pub fn partition_error(&self) -> f64 {
        (0..self.grid.len())
            .map(|k| (self.psi.iter().map(|r| r[k]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_T ψ_T[k]²` per bin.
    pub fn sum_of_squares(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| self.psi.iter().map(|r| r[k] * r[k]).sum())
            .collect()
    }

    /// Number of nonzero `ψ_T` per bin.
    pub fn overlap_counts(&self) -> Vec<usize> {
        (0..self.grid.len())
            .map(|k| self.psi.iter().filter(|r| r[k] != 0.0).count())
            .collect()
    }

    /// Applies `ψ_T(D)` to a signal whose DFT bins are this grid.
    pub fn apply(&self, t: usize, signal: &[Complex64]) -> Result<Vec<Complex64>> {
        let psi = self
            .psi
            .get(t)
            .ok_or_else(|| Error::invalid(format!("no member {t}")))?;
        multiplier_apply(psi, signal)
    }

    /// `‖F⁻¹ψ_T‖_{ℓ¹}` per member on a torus grid, with the inverse DFT
    /// normalized by `1/L` so it samples the continuous inverse transform.
    pub fn multiplier_l1_norms(&self) -> Result<Vec<f64>> {
        let FrequencyGrid::Torus { len } = self.grid else {
            return Err(Error::invalid("multiplier norms need a torus grid"));
        };
        Ok(self
            .psi
            .iter()
            .map(|row| {
                let spec: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft::inverse(&spec).iter().map(|v| v.norm()).sum::<f64>() / len as f64
            })
            .collect())
    }

    /// Family-wide bounds on the first and second finite differences of
    /// `ψ_T`, scaled by the grid spacing.
    pub fn derivative_bounds(&self) -> (f64, f64) {
        let h = self.grid.spacing();
        let n = self.grid.len();
        let periodic = self.grid.is_periodic();
        let at = |row: &[f64], k: isize| -> Option<f64> {
            if periodic {
                Some(row[k.rem_euclid(n as isize) as usize])
            } else if k >= 0 && (k as usize) < n {
                Some(row[k as usize])
            } else {
                None
            }
        };
        let mut first = 0.0_f64;
        let mut second = 0.0_f64;
        for row in &self.psi {
            for k in 0..n as isize {
                if let (Some(a), Some(b)) = (at(row, k), at(row, k + 1)) {
                    first = first.max((b - a).abs() / h);
                }
                if let (Some(a), Some(b), Some(c)) = (at(row, k - 1), at(row, k), at(row, k + 1)) {
                    second = second.max((a - 2.0 * b + c).abs() / (h * h));
                }
            }
        }
        (first, second)
    }

    /// CSV with columns `bin, xi, T_index, psi_value`, nonzero entries only.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["bin", "xi", "T_index", "psi_value"])?;
        for k in 0..self.grid.len() {
            for (t, row) in self.psi.iter().enumerate() {
                if row[k] != 0.0 {
                    wtr.write_record([
                        k.to_string(),
                        self.grid.xi(k).to_string(),
                        t.to_string(),
                        row[k].to_string(),
                    ])?;
                }
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `F⁻¹(ψ · F f)` with the unitary DFT.
pub fn multiplier_apply(psi: &[f64], signal: &[Complex64]) -> Result<Vec<Complex64>> {
    if psi.len() != signal.len() {
        return Err(Error::LengthMismatch {
            expected: psi.len(),
            found: signal.len(),
        });
    }
    let mut spec = fft::unitary_forward(signal);
    spec.iter_mut().zip(psi).for_each(|(v, &p)| *v *= p);
    Ok(fft::unitary_inverse(&spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{
        besov_covering, covering_from_nsgf, modulation_covering, AffineMap, OpenBox,
    };

    #[test]
    fn plateau_examples() {
        assert_eq!(smooth_step(0.5), 0.5);
        let bump = PlateauBump::new(0.2, 2).unwrap();
        assert_eq!(bump.value(&[0.1, 0.5]), 0.5);
        assert_eq!(bump.value(&[0.3, 0.7]), 1.0);
        assert_eq!(bump.value(&[0.21, 0.79]), 1.0);
        assert_eq!(bump.value(&[-0.1, 0.5]), 0.0);
        assert_eq!(bump.value(&[0.5, 1.0]), 0.0);
        assert_eq!(bump.value(&[0.5, 1.3]), 0.0);
        assert!(PlateauBump::new(0.0, 1).is_err());
        assert!(PlateauBump::new(0.5, 1).is_err());
    }

    #[test]
    fn plateau_is_bounded() {
        let bump = PlateauBump::new(0.3, 1).unwrap();
        for i in -50..150 {
            let v = bump.value(&[i as f64 / 100.0]);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn fitted_bump_matches_nsgf_margin() {
        let cov = covering_from_nsgf(&[(vec![0.0], 2.0)], 0.25).unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        assert!((bump.ramp_width() - 0.25 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn single_member_is_identically_one() {
        let base = OpenBox::cube(1, 0.0, 1.0).unwrap();
        let inner = OpenBox::cube(1, 0.1, 0.9).unwrap();
        let cov = crate::covering::Covering::new(
            1,
            base,
            inner,
            vec![AffineMap::new(vec![10.0], vec![-5.0]).unwrap()],
            vec![vec![0.0]],
        )
        .unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        let bapu = build_bapu(
            &cov,
            &bump,
            FrequencyGrid::Band {
                lo: -2.0,
                hi: 2.0,
                len: 101,
            },
        )
        .unwrap();
        assert!(bapu.psi()[0].iter().all(|&v| v == 1.0));
    }

    #[test]
    fn modulation_partition_of_unity() {
        let cov = modulation_covering(1, 1.5, 6).unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        let bapu = build_bapu(
            &cov,
            &bump,
            FrequencyGrid::Band {
                lo: -4.0,
                hi: 4.0,
                len: 2048,
            },
        )
        .unwrap();
        assert!(bapu.partition_error() <= 1e-12);
        // bin at ξ = 0 lies only in Q_{T_0} = (−0.75, 0.75) and its neighbors'
        // ramps are zero there
        let grid = bapu.grid();
        let k0 = (0..grid.len())
            .min_by(|&a, &b| grid.xi(a).abs().total_cmp(&grid.xi(b).abs()))
            .unwrap();
        let t0 = cov.anchors().iter().position(|a| a[0] == 0.0).unwrap();
        assert!(grid.xi(k0).abs() < 0.01);
        assert_eq!(bapu.psi()[t0][k0], 1.0);
    }

    #[test]
    fn support_and_overlap() {
        let cov = besov_covering(1, 2.5, 4).unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        let grid = FrequencyGrid::Band {
            lo: -40.0,
            hi: 40.0,
            len: 4001,
        };
        let bapu = build_bapu(&cov, &bump, grid).unwrap();
        assert!(bapu.partition_error() <= 1e-12);
        for (t, row) in bapu.psi().iter().enumerate() {
            let img = cov.image(t);
            for (k, &v) in row.iter().enumerate() {
                if !img.contains(&[grid.xi(k)]) {
                    assert_eq!(v, 0.0);
                }
            }
        }
        let n0 = crate::covering::neighbor_sets(&cov)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap();
        assert!(bapu.overlap_counts().iter().all(|&c| c <= n0));
    }

    #[test]
    fn gap_is_reported() {
        let cov = modulation_covering(1, 1.5, 1).unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        let err = build_bapu(
            &cov,
            &bump,
            FrequencyGrid::Band {
                lo: -4.0,
                hi: 4.0,
                len: 64,
            },
        );
        assert!(matches!(err, Err(Error::CoveringGap { bin: 0 })));
    }

    #[test]
    fn multiplier_identity_and_disjoint() {
        let signal: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new((i as f64).sin(), (0.3 * i as f64).cos()))
            .collect();
        let out = multiplier_apply(&[1.0; 32], &signal).unwrap();
        for (a, b) in out.iter().zip(&signal) {
            assert!((a - b).norm() < 1e-12);
        }
        // pure tone at bin 3, multiplier vanishing there
        let tone: Vec<Complex64> = (0..32)
            .map(|x| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 * x as f64 / 32.0))
            .collect();
        let mut psi = vec![1.0; 32];
        psi[3] = 0.0;
        let out = multiplier_apply(&psi, &tone).unwrap();
        assert!(out.iter().all(|v| v.norm() < 1e-12));
        assert!(multiplier_apply(&psi, &tone[..16]).is_err());
    }

    #[test]
    fn half_band_mask_energy() {
        let signal: Vec<Complex64> = (0..64)
            .map(|i| {
                Complex64::new(
                    ((i * 7919) % 13) as f64 - 6.0,
                    ((i * 104729) % 11) as f64 - 5.0,
                )
            })
            .collect();
        let psi: Vec<f64> = (0..64).map(|k| if k < 32 { 1.0 } else { 0.0 }).collect();
        let out = multiplier_apply(&psi, &signal).unwrap();
        let spec = fft::unitary_forward(&signal);
        let masked: f64 = spec[..32].iter().map(|v| v.norm_sqr()).sum();
        let energy: f64 = out.iter().map(|v| v.norm_sqr()).sum();
        assert!((energy - masked).abs() < 1e-10 * masked);
    }

    #[test]
    fn torus_bapu_wraps() {
        // one wide member wrapping around [0,1) plus a narrow one
        let cov = covering_from_nsgf(&[(vec![0.0], 1.0)], 0.25)
            .unwrap()
            .with_periodic(true);
        let bump = PlateauBump::fitted(&cov).unwrap();
        let bapu = build_bapu(&cov, &bump, FrequencyGrid::Torus { len: 64 }).unwrap();
        assert!(bapu.partition_error() <= 1e-12);
    }

    #[test]
    fn csv_export_lists_nonzeros() {
        let cov = modulation_covering(1, 1.5, 3).unwrap();
        let bump = PlateauBump::fitted(&cov).unwrap();
        let bapu = build_bapu(
            &cov,
            &bump,
            FrequencyGrid::Band {
                lo: -1.0,
                hi: 1.0,
                len: 5,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        bapu.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("bin,xi,T_index,psi_value"));
        let expected: usize = bapu.overlap_counts().iter().sum();
        assert_eq!(lines.count(), expected);
    }
}
