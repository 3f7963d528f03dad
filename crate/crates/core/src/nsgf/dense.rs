//! Dense time-domain frame matrix for tiny grids.
//!
//! Atoms are built by a direct inverse DFT sum, independently of the FFT
//! fast path, so this is a ground truth for analysis and for the frame
//! operator's spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::NsgfSystem;
use crate::error::{Error, Result};

pub const DENSE_MAX_LEN: usize = 256;

/// Rows are `conj(h_{m,n})`, one per `(m, n)` in channel-major order.
#[derive(Clone, Debug)]
pub struct DenseFrameMatrix {
    index: Vec<(usize, usize)>,
    matrix: DMatrix<Complex64>,
}

pub fn dense_frame_matrix(sys: &NsgfSystem) -> Result<DenseFrameMatrix> {
    let len = sys.len();
    if len > DENSE_MAX_LEN {
        return Err(Error::TooLarge {
            len,
            max: DENSE_MAX_LEN,
        });
    }
    let rows = sys.total_coefficients();
    let mut matrix = DMatrix::<Complex64>::zeros(rows, len);
    let mut index = Vec::with_capacity(rows);
    let mut row = 0;
    for (m, ch) in sys.channels().iter().enumerate() {
        let atom: Vec<Complex64> = (0..len)
            .map(|x| {
                ch.window_hat
                    .iter()
                    .enumerate()
                    .map(|(k, w)| {
                        let phase =
                            2.0 * std::f64::consts::PI * ((k * x) % len) as f64 / len as f64;
                        w * Complex64::from_polar(1.0, phase)
                    })
                    .sum::<Complex64>()
                    / len as f64
            })
            .collect();
        for n in 0..ch.n_shifts {
            for x in 0..len {
                let shifted = atom[(x + len - n * ch.a) % len];
                matrix[(row, x)] = shifted.conj();
            }
            index.push((m, n));
            row += 1;
        }
    }
    Ok(DenseFrameMatrix { index, matrix })
}

impl DenseFrameMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// `(m, n)` of each row.
    pub fn row_index(&self) -> &[(usize, usize)] {
        &self.index
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `M f`, i.e. all inner products `⟨f, h_{m,n}⟩`.
    pub fn apply(&self, signal: &[Complex64]) -> Result<Vec<Complex64>> {
        if signal.len() != self.cols() {
            return Err(Error::LengthMismatch {
                expected: self.cols(),
                found: signal.len(),
            });
        }
        let v = DVector::from_column_slice(signal);
        Ok((&self.matrix * v).iter().copied().collect())
    }

    /// `Mᴴ M`.
    pub fn frame_operator(&self) -> DMatrix<Complex64> {
        self.matrix.adjoint() * &self.matrix
    }

    /// Eigenvalues of the frame operator, ascending.
    pub fn frame_eigenvalues(&self) -> Vec<f64> {
        let mut eig: Vec<f64> = SymmetricEigen::new(self.frame_operator())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// Extreme eigenvalues of the frame operator.
    pub fn frame_bounds(&self) -> (f64, f64) {
        let eig = self.frame_eigenvalues();
        (eig[0], eig[eig.len() - 1])
    }
}
