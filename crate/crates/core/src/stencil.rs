//! Second-order central differences on periodic spatial grids.
//!
//! These are used only by the verification operations (continuity and
//! Maxwell residuals); synthesis takes its derivatives in k-space.

use alloc::vec;
use alloc::vec::Vec;

use crate::modes::Dimension;
use crate::synthesis::SpatialGrid;
use crate::vector::Vec3;

/// `∂f/∂x_axis` with periodic wrap. Axes the grid does not span give zero.
pub fn partial(f: &[f64], grid: &SpatialGrid, axis: usize) -> Vec<f64> {
    let n = grid.n_per_axis();
    let mut out = vec![0.0; f.len()];
    let stride = match (grid.dimension(), axis) {
        (Dimension::One, 2) => 1,
        (Dimension::One, _) => return out,
        (Dimension::Three, 0) => n * n,
        (Dimension::Three, 1) => n,
        (Dimension::Three, _) => 1,
    };
    let inv = 1.0 / (2.0 * grid.spacing());
    for (i, o) in out.iter_mut().enumerate() {
        let j = (i / stride) % n;
        let base = i - j * stride;
        let up = base + ((j + 1) % n) * stride;
        let down = base + ((j + n - 1) % n) * stride;
        *o = (f[up] - f[down]) * inv;
    }
    out
}

fn component(v: &[Vec3], axis: usize) -> Vec<f64> {
    v.iter().map(|x| x[axis]).collect()
}

/// `∇·v`.
pub fn divergence(v: &[Vec3], grid: &SpatialGrid) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for axis in 0..3 {
        let d = partial(&component(v, axis), grid, axis);
        out.iter_mut().zip(d).for_each(|(o, d)| *o += d);
    }
    out
}

/// `∇×v`.
pub fn curl(v: &[Vec3], grid: &SpatialGrid) -> Vec<Vec3> {
    let comps: [Vec<f64>; 3] = [component(v, 0), component(v, 1), component(v, 2)];
    let d = |c: usize, axis: usize| partial(&comps[c], grid, axis);
    let (dz_dy, dy_dz) = (d(2, 1), d(1, 2));
    let (dx_dz, dz_dx) = (d(0, 2), d(2, 0));
    let (dy_dx, dx_dy) = (d(1, 0), d(0, 1));
    (0..v.len()).map(|i| Vec3::new(dz_dy[i] - dy_dz[i], dx_dz[i] - dz_dx[i], dy_dx[i] - dx_dy[i])).collect()
}

/// Centered time derivative `(f₊ − f₋)/(2Δt)`.
pub fn centered_time(prev: &[f64], next: &[f64], dt: f64) -> Vec<f64> {
    prev.iter().zip(next).map(|(a, b)| (b - a) / (2.0 * dt)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn derivative_of_sine_converges_at_second_order() {
        let err = |n: usize| {
            let g = SpatialGrid::new(Dimension::One, n, 2.0 * PI / n as f64, Vec3::ZERO).unwrap();
            let f: Vec<f64> = (0..n).map(|i| libm::sin(g.point(i).z())).collect();
            let d = partial(&f, &g, 2);
            (0..n).map(|i| (d[i] - libm::cos(g.point(i).z())).abs()).fold(0.0, f64::max)
        };
        let order = libm::log2(err(32) / err(64));
        assert!((order - 2.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let n = 8;
        let g = SpatialGrid::new(Dimension::Three, n, 0.5, Vec3::ZERO).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| (i * 7 % 13) as f64).collect();
        let grad: Vec<Vec3> = {
            let (a, b, c) = (partial(&f, &g, 0), partial(&f, &g, 1), partial(&f, &g, 2));
            (0..f.len()).map(|i| Vec3::new(a[i], b[i], c[i])).collect()
        };
        assert!(curl(&grad, &g).iter().all(|v| v.max_abs() < 1e-12));
    }
}
