//! Central-difference stencils on a [`WaveGrid`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridLayout, WaveGrid};

fn interior(grid: &WaveGrid, point: (usize, usize)) -> Result<()> {
    if grid.is_interior(point.0, point.1) {
        Ok(())
    } else {
        Err(Error::Index {
            index: point,
            shape: grid.shape(),
        })
    }
}

/// Second-order estimate of `□ψ = -(1/c²) ∂²_t ψ + ∇²ψ` at lattice point
/// `(it, iq)`. On a radial grid the Laplacian is `∂²_r + (2/r) ∂_r`.
pub fn finite_diff_dalembert(grid: &WaveGrid, point: (usize, usize), c: f64) -> Result<Complex64> {
    interior(grid, point)?;
    let (it, iq) = point;
    let m = grid.meta();
    let centre = grid.get(it, iq);
    let d2t = (grid.get(it + 1, iq) - centre * 2.0 + grid.get(it - 1, iq)) / (m.h_t * m.h_t);
    let d2q = (grid.get(it, iq + 1) - centre * 2.0 + grid.get(it, iq - 1)) / (m.h_q * m.h_q);
    let mut lap = d2q;
    if grid.layout() == GridLayout::Radial {
        let d1q = (grid.get(it, iq + 1) - grid.get(it, iq - 1)) / (2.0 * m.h_q);
        lap += d1q * (2.0 / grid.q(iq));
    }
    Ok(lap - d2t / (c * c))
}

/// Central first differences `(∂_t ψ, ∂_q ψ)` at an interior point.
pub fn central_gradient(grid: &WaveGrid, point: (usize, usize)) -> Result<(Complex64, Complex64)> {
    interior(grid, point)?;
    let (it, iq) = point;
    let m = grid.meta();
    let dt = (grid.get(it + 1, iq) - grid.get(it - 1, iq)) / (2.0 * m.h_t);
    let dq = (grid.get(it, iq + 1) - grid.get(it, iq - 1)) / (2.0 * m.h_q);
    Ok((dt, dq))
}
