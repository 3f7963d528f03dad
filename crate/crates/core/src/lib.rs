//! Nonstationary Gabor frames with painless windows, structured coverings
//! of frequency space, and the decomposition-space norms they induce.

pub mod approx;
pub mod bapu;
pub mod corpus;
pub mod covering;
mod error;
pub mod fft;
pub mod io;
pub mod nsgf;
mod serde_ext;
pub mod spaces;

pub use approx::{error_sweep, fit_decay, nterm_approx, rearrange, NTermApproximator, SweepResult};
pub use bapu::{build_bapu, Bapu, FrequencyGrid, PlateauBump};
pub use corpus::{generate_corpus, Corpus, CorpusKind};
pub use covering::{
    besov_covering, covering_from_nsgf, modulation_covering, validate_structured, AffineMap,
    Covering, Domain, OpenBox, ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use nsgf::{
    analyze, frame_apply, make_windows, synthesize, validate_painless, CoefficientSet, FrameConfig,
    NsgfSystem, Prototype, WindowKind,
};
pub use num_complex::Complex64;
pub use spaces::{coeff_norm, ds_norm, equivalence_report, EquivalenceReport, NormParams};
