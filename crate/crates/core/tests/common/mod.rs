#![allow(dead_code)]

/// The ε grid shared by the scaling tests: 10^-1 … 10^-2.5 in half decades.
pub const EPS: [f64; 4] = [1e-1, 0.031_622_776_601_683_79, 1e-2, 0.003_162_277_660_168_379];

/// Least-squares slope of log y on log x, written out independently of the library fit.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.log10(), y.log10())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x * x, b + x * y));
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}
