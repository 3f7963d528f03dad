//! Seeded test-signal corpora. All randomness comes from `ChaCha8Rng`, so a
//! seed and a kind list fix every sample bit for bit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::nsgf::{synthesize, CoefficientSet, NsgfSystem, WindowKind};

pub const DEFAULT_SPARSITY: usize = 5;
/// `τ = 1` decay with a small margin: `Σ m^{−β}` converges.
pub const DEFAULT_DECAY: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusKind {
    White,
    BandLimited,
    Chirp,
    /// `k` random dual atoms with unit-modulus coefficients.
    SparseInFrame {
        k: usize,
    },
    /// Dual synthesis of coefficients with magnitudes `m^{−β}` at random
    /// positions and phases.
    PrescribedDecay {
        beta: f64,
    },
    /// Cycles through the five kinds above with default parameters.
    Mixed,
}

impl CorpusKind {
    pub fn needs_system(&self) -> bool {
        matches!(
            self,
            Self::SparseInFrame { .. } | Self::PrescribedDecay { .. } | Self::Mixed
        )
    }

    fn label(&self) -> &'static str {
        match self {
            Self::White => "white",
            Self::BandLimited => "band_limited",
            Self::Chirp => "chirp",
            Self::SparseInFrame { .. } => "sparse_in_frame",
            Self::PrescribedDecay { .. } => "prescribed_decay",
            Self::Mixed => "mixed",
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SparseInFrame { k } => write!(f, "sparse_in_frame:{k}"),
            Self::PrescribedDecay { beta } => write!(f, "prescribed_decay:{beta}"),
            other => f.write_str(other.label()),
        }
    }
}

/// `white`, `band_limited`, `chirp`, `sparse_in_frame[:K]`,
/// `prescribed_decay[:β]` or `mixed`.
impl FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad = || Error::UnknownCorpusKind(s.to_string());
        let kind = match (name, arg) {
            ("white", None) => Self::White,
            ("band_limited", None) => Self::BandLimited,
            ("chirp", None) => Self::Chirp,
            ("mixed", None) => Self::Mixed,
            ("sparse_in_frame", a) => Self::SparseInFrame {
                k: a.map_or(Ok(DEFAULT_SPARSITY), |v| v.parse().map_err(|_| bad()))?,
            },
            ("prescribed_decay", a) => Self::PrescribedDecay {
                beta: a.map_or(Ok(DEFAULT_DECAY), |v| v.parse().map_err(|_| bad()))?,
            },
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub seed: u64,
    pub signals: Vec<Vec<Complex64>>,
    pub kinds: Vec<CorpusKind>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn descriptor(&self) -> String {
        let mut labels: Vec<String> = self.kinds.iter().map(|k| k.to_string()).collect();
        labels.dedup();
        format!(
            "seed={} count={} kinds={}",
            self.seed,
            self.len(),
            labels.join(",")
        )
    }
}

pub fn generate_corpus(
    kind: CorpusKind,
    count: usize,
    len: usize,
    seed: u64,
    sys: Option<&NsgfSystem>,
) -> Result<Corpus> {
    if len == 0 {
        return Err(Error::invalid("signal length must be positive"));
    }
    if kind.needs_system() {
        match sys {
            None => return Err(Error::invalid(format!("corpus kind {kind} needs a frame"))),
            Some(s) if s.len() != len => {
                return Err(Error::LengthMismatch {
                    expected: s.len(),
                    found: len,
                })
            }
            _ => {}
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cycle = [
        CorpusKind::White,
        CorpusKind::BandLimited,
        CorpusKind::Chirp,
        CorpusKind::SparseInFrame {
            k: DEFAULT_SPARSITY,
        },
        CorpusKind::PrescribedDecay {
            beta: DEFAULT_DECAY,
        },
    ];
    let mut signals = Vec::with_capacity(count);
    let mut kinds = Vec::with_capacity(count);
    for i in 0..count {
        let k = match kind {
            CorpusKind::Mixed => cycle[i % cycle.len()],
            other => other,
        };
        signals.push(draw(k, len, &mut rng, sys)?);
        kinds.push(k);
    }
    Ok(Corpus {
        seed,
        signals,
        kinds,
    })
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn draw(
    kind: CorpusKind,
    len: usize,
    rng: &mut ChaCha8Rng,
    sys: Option<&NsgfSystem>,
) -> Result<Vec<Complex64>> {
    match kind {
        CorpusKind::White => Ok((0..len).map(|_| gaussian(rng)).collect()),
        CorpusKind::BandLimited => {
            let width = ((rng.random_range(0.05..0.3) * len as f64).round() as usize).max(1);
            let start = rng.random_range(0..len);
            let mut spec = vec![Complex64::new(0.0, 0.0); len];
            for j in 0..width {
                spec[(start + j) % len] = gaussian(rng);
            }
            Ok(fft::unitary_inverse(&spec))
        }
        CorpusKind::Chirp => {
            let f0: f64 = rng.random();
            let sweep: f64 = rng.random_range(-0.5..0.5);
            let phase: f64 = rng.random_range(0.0..2.0 * PI);
            let n = len as f64;
            Ok((0..len)
                .map(|x| {
                    let t = x as f64;
                    Complex64::from_polar(
                        1.0,
                        phase + 2.0 * PI * (f0 * t + 0.5 * sweep * t * t / n),
                    )
                })
                .collect())
        }
        CorpusKind::SparseInFrame { k } => {
            let sys = sys.expect("checked by caller");
            let mut coeffs = CoefficientSet::zeros_for(sys);
            let flat = positions(&coeffs);
            if k > flat.len() {
                return Err(Error::invalid(format!(
                    "sparsity {k} exceeds {} coefficients",
                    flat.len()
                )));
            }
            for i in index::sample(rng, flat.len(), k) {
                let (m, n) = flat[i];
                coeffs.set(
                    m,
                    n,
                    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                );
            }
            synthesize(sys, &coeffs, WindowKind::Dual)
        }
        CorpusKind::PrescribedDecay { beta } => {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::invalid(format!(
                    "decay exponent must be positive, got {beta}"
                )));
            }
            let sys = sys.expect("checked by caller");
            let mut coeffs = CoefficientSet::zeros_for(sys);
            let flat = positions(&coeffs);
            let order = index::sample(rng, flat.len(), flat.len());
            for (rank, i) in order.into_iter().enumerate() {
                let (m, n) = flat[i];
                let mag = ((rank + 1) as f64).powf(-beta);
                coeffs.set(
                    m,
                    n,
                    Complex64::from_polar(mag, rng.random_range(0.0..2.0 * PI)),
                );
            }
            synthesize(sys, &coeffs, WindowKind::Dual)
        }
        CorpusKind::Mixed => unreachable!("expanded by generate_corpus"),
    }
}

fn positions(coeffs: &CoefficientSet) -> Vec<(usize, usize)> {
    coeffs.iter().map(|(m, n, _)| (m, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsgf::{analyze, make_windows, Prototype, DEFAULT_C_STAR};

    fn flat_pair(len: usize) -> NsgfSystem {
        make_windows(
            len,
            &[(0.0, 2.0), (0.5, 2.0)],
            DEFAULT_C_STAR,
            &Prototype::Flat,
        )
        .unwrap()
    }

    #[test]
    fn same_seed_same_corpus() {
        let sys = flat_pair(64);
        let a = generate_corpus(CorpusKind::Mixed, 10, 64, 7, Some(&sys)).unwrap();
        let b = generate_corpus(CorpusKind::Mixed, 10, 64, 7, Some(&sys)).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(CorpusKind::Mixed, 10, 64, 8, Some(&sys)).unwrap();
        assert_ne!(a.signals, c.signals);
        assert_eq!(a.kinds[3], CorpusKind::SparseInFrame { k: 5 });
    }

    #[test]
    fn empty_and_errors() {
        let c = generate_corpus(CorpusKind::White, 0, 32, 1, None).unwrap();
        assert!(c.is_empty());
        assert!(generate_corpus(CorpusKind::Chirp, 3, 0, 1, None).is_err());
        assert!(generate_corpus(CorpusKind::SparseInFrame { k: 2 }, 1, 64, 1, None).is_err());
        let sys = flat_pair(64);
        assert!(generate_corpus(CorpusKind::Mixed, 1, 32, 1, Some(&sys)).is_err());
        assert!(matches!(
            "pink".parse::<CorpusKind>(),
            Err(Error::UnknownCorpusKind(_))
        ));
        assert!("sparse_in_frame:x".parse::<CorpusKind>().is_err());
    }

    #[test]
    fn kind_parsing_round_trips() {
        for s in [
            "white",
            "band_limited",
            "chirp",
            "mixed",
            "sparse_in_frame:20",
            "prescribed_decay:1.5",
        ] {
            assert_eq!(s.parse::<CorpusKind>().unwrap().to_string(), s);
        }
        assert_eq!(
            "sparse_in_frame".parse::<CorpusKind>().unwrap(),
            CorpusKind::SparseInFrame {
                k: DEFAULT_SPARSITY
            }
        );
    }

    #[test]
    fn sparse_signals_have_sparse_coefficients_on_a_basis() {
        let sys = flat_pair(64);
        let c = generate_corpus(CorpusKind::SparseInFrame { k: 4 }, 3, 64, 2, Some(&sys)).unwrap();
        for f in &c.signals {
            let coeffs = analyze(&sys, f).unwrap();
            let nonzero = coeffs.iter().filter(|(_, _, v)| v.norm() > 1e-10).count();
            assert_eq!(nonzero, 4);
        }
    }

    #[test]
    fn band_limited_is_band_limited() {
        let c = generate_corpus(CorpusKind::BandLimited, 4, 128, 3, None).unwrap();
        for f in &c.signals {
            let spec = fft::unitary_forward(f);
            let active = spec.iter().filter(|v| v.norm() > 1e-9).count();
            assert!((1..=39).contains(&active), "{active}");
        }
    }

    #[test]
    fn chirp_has_unit_modulus() {
        let c = generate_corpus(CorpusKind::Chirp, 2, 32, 4, None).unwrap();
        assert!(c
            .signals
            .iter()
            .flatten()
            .all(|v| (v.norm() - 1.0).abs() < 1e-12));
    }
}
