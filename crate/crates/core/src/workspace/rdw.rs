use nalgebra::Point2;

use super::grid::{CellClass, GridSpec, IndexKind, ScanResult};

/// Maximal inscribed circle of the light-gray region of a classified scan.
#[derive(Clone, Copy, Debug)]
pub struct RdwResult {
    pub center: Point2<f64>,
    pub radius: f64,
    pub index: IndexKind,
    pub threshold: f64,
    /// Orientation interval of the scan, radians.
    pub phi_range: (f64, f64),
    /// No light-gray cell existed; radius is zero.
    pub empty: bool,
}

/// One-dimensional squared-distance lower envelope (Felzenszwalb and
/// Huttenlocher) with sample spacing `step`: out[i] = min_j ((i-j)*step)^2 + f[j].
///
/// Infinite entries never become parabola apexes, so the intersection
/// arithmetic only ever sees finite values.
fn dt_1d(f: &[f64], step: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert_eq!(out.len(), n);
    let step2 = step * step;
    let Some(first) = f.iter().position(|v| v.is_finite()) else {
        out.fill(f64::INFINITY);
        return;
    };

    // Parabola apex indices and boundary abscissas, in grid units.
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;

    for q in (first + 1)..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] - f[p]) / step2 + (q * q - p * p) as f64) / (2 * (q - p)) as f64;
            if s <= z[k] {
                // Finite s never undercuts z[0] = -inf, so k stays valid.
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }

    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = (q as f64 - p as f64) * step;
        out[q] = d * d + f[p];
    }
}

/// Exact Euclidean distance from each masked (true) cell to the nearest
/// unmasked cell or to the virtual obstacle ring just outside the grid.
/// Distances are in physical units given the cell spacings `dx`, `dy`.
pub fn distance_to_boundary_map(
    mask: &[bool],
    x_res: usize,
    y_res: usize,
    dx: f64,
    dy: f64,
) -> Vec<f64> {
    assert_eq!(mask.len(), x_res * y_res);
    // Pad one obstacle ring so border cells see a boundary one step away.
    let w = x_res + 2;
    let h = y_res + 2;
    let mut g = vec![0.0f64; w * h];
    for iy in 0..y_res {
        for ix in 0..x_res {
            if mask[iy * x_res + ix] {
                g[(iy + 1) * w + (ix + 1)] = f64::INFINITY;
            }
        }
    }

    // Columns first (spacing dy), then rows (spacing dx).
    let mut col_in = vec![0.0f64; h];
    let mut col_out = vec![0.0f64; h];
    for ix in 0..w {
        for iy in 0..h {
            col_in[iy] = g[iy * w + ix];
        }
        dt_1d(&col_in, dy, &mut col_out);
        for iy in 0..h {
            g[iy * w + ix] = col_out[iy];
        }
    }
    let mut row_out = vec![0.0f64; w];
    for iy in 0..h {
        dt_1d(&g[iy * w..(iy + 1) * w], dx, &mut row_out);
        g[iy * w..(iy + 1) * w].copy_from_slice(&row_out);
    }

    let mut dist = vec![0.0f64; x_res * y_res];
    for iy in 0..y_res {
        for ix in 0..x_res {
            dist[iy * x_res + ix] = g[(iy + 1) * w + (ix + 1)].sqrt();
        }
    }
    dist
}

/// Maximal inscribed circle of the light-gray region: the center is the
/// grid node farthest from any non-light-gray cell, the radius is that
/// distance shrunk by half a cell diagonal. An empty region yields radius
/// zero with `empty` set.
pub fn rdw_search(scan: &ScanResult) -> RdwResult {
    let spec = &scan.spec;
    let mask: Vec<bool> = scan
        .classes
        .iter()
        .map(|c| *c == CellClass::LightGray)
        .collect();

    let base = RdwResult {
        center: Point2::new(
            0.5 * (spec.x_range.0 + spec.x_range.1),
            0.5 * (spec.y_range.0 + spec.y_range.1),
        ),
        radius: 0.0,
        index: scan.index,
        threshold: scan.threshold,
        phi_range: spec.phi_range,
        empty: true,
    };
    if !mask.iter().any(|&m| m) {
        return base;
    }

    let dist = distance_to_boundary_map(&mask, spec.x_res, spec.y_res, spec.dx(), spec.dy());
    let mut best = 0usize;
    for (i, &d) in dist.iter().enumerate() {
        if d > dist[best] {
            best = i;
        }
    }
    let (ix, iy) = spec.cell_coords(best);
    let radius = (dist[best] - spec.half_cell_diagonal()).max(0.0);
    RdwResult {
        center: Point2::new(spec.x_at(ix), spec.y_at(iy)),
        radius,
        empty: false,
        ..base
    }
}
