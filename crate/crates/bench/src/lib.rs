//! Benchmark fixtures shared by the criterion targets.

use nsgf_core::{make_windows, NsgfSystem, Prototype, Result};

pub const DYADIC: &[(f64, f64)] = &[
    (0.875, 4.0),
    (0.0625, 8.0),
    (0.125, 4.0),
    (0.25, 2.0),
    (0.625, 4.0),
    (0.8125, 8.0),
];

/// The dyadic test frame at length `len` (a multiple of 8).
pub fn dyadic(len: usize) -> Result<NsgfSystem> {
    make_windows(len, DYADIC, 0.25, &Prototype::plateau(0.2)?)
}
