//! Singular-value rank and kernel of small dense matrices.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Outcome of a thresholded singular-value decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankAnalysis {
    /// Singular values in descending order (`min(m, n)` of them, padded with
    /// zeros up to `n` when `m < n`).
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub rank: usize,
    /// Orthonormal basis of the kernel, one row per vector.
    pub kernel: Vec<Vec<f64>>,
    /// Smallest retained singular value (or the reference scale when nothing
    /// is retained) over the largest discarded one. Infinite when nothing is
    /// discarded or the discarded values are exactly zero.
    pub gap: f64,
}

/// Rank by thresholding: singular values above `tol · reference` count,
/// where `reference = max(σ_max, scale)`. The extra `scale` lets a matrix
/// that vanishes up to roundoff be recognised as rank zero.
///
/// Fails with [`Error::RankUnstable`] when a singular value sits within a
/// factor of 10 of the threshold.
pub fn analyze(rows: &[Vec<f64>], ncols: usize, tol: f64, scale: f64) -> Result<RankAnalysis> {
    if ncols == 0 {
        return Err(Error::InvalidArgument("matrix must have at least one column".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidArgument("ragged matrix rows".into()));
    }
    // Pad with zero rows so the full right-singular basis is available.
    let m = rows.len().max(ncols);
    let mut a = DMatrix::<f64>::zeros(m, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let reference = sigma_max.max(scale);
    let threshold = tol * reference;
    for &s in &sigma {
        if s > threshold / 10.0 && s < threshold * 10.0 {
            return Err(Error::RankUnstable { sigma: s, threshold });
        }
    }
    let rank = sigma.iter().filter(|&&s| s > threshold).count();
    let kernel = order[rank..]
        .iter()
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    let retained = if rank == 0 { reference } else { sigma[rank - 1] };
    let discarded = sigma[rank..].iter().copied().fold(0.0, f64::max);
    let gap = if discarded == 0.0 { f64::INFINITY } else { retained / discarded };
    Ok(RankAnalysis {
        singular_values: sigma,
        threshold,
        rank,
        kernel,
        gap,
    })
}

/// Largest `|A v|` over the given vectors, relative to `max(‖A‖_max, 1)`.
pub fn annihilation_residual(rows: &[Vec<f64>], vectors: &[Vec<f64>]) -> f64 {
    let scale = rows
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let mut worst: f64 = 0.0;
    for v in vectors {
        for r in rows {
            let dot: f64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
            worst = worst.max(dot.abs());
        }
    }
    worst / scale
}
