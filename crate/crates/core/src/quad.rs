//! Quadrature: adaptive Gauss–Kronrod and an adaptive RK4 table builder.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Fixed 15-point Kronrod rule; exact for polynomials of degree 22.
pub fn kronrod15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    gk15(&f, a, b).0
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    const MAX_PANELS: usize = 20_000;
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut panels = 0;
    while let Some((lo, hi, t)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        panels += 1;
        if !val.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if err <= t || panels > MAX_PANELS || (hi - lo).abs() < 1e-12 * (b - a).abs() {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * t));
            stack.push((lo, mid, 0.5 * t));
        }
    }
    Ok(total)
}

/// Builds the cumulative table `s(w) = ∫_{w0}^{w} rate` with an adaptive
/// classical RK4 integrator using step doubling. The step never exceeds
/// `(w1 - w0) / min_steps`, so the table has at least `min_steps + 1` nodes.
pub fn rk4_cumulative<F: Fn(f64) -> f64>(
    rate: F,
    w0: f64,
    w1: f64,
    min_steps: usize,
    tol: f64,
) -> Vec<(f64, f64)> {
    let span = w1 - w0;
    let max_step = span / min_steps.max(1) as f64;
    let step = |w: f64, h: f64, fw: f64| {
        let mid = rate(w + 0.5 * h);
        let end = rate(w + h);
        // k2 == k3 because the rate depends only on w.
        (h / 6.0 * (fw + 4.0 * mid + end), end)
    };
    let mut table = Vec::with_capacity(min_steps + 1);
    let mut w = w0;
    let mut s = 0.0;
    let mut fw = rate(w0);
    table.push((w, s));
    let mut h = max_step;
    while w < w1 {
        h = h.min(w1 - w).min(max_step);
        let (full, _) = step(w, h, fw);
        let (half1, fmid) = step(w, 0.5 * h, fw);
        let (half2, fend) = step(w + 0.5 * h, 0.5 * h, fmid);
        let fine = half1 + half2;
        let err = (fine - full).abs() / 15.0;
        let allowed = tol * (h / span).max(1e-3);
        if err <= allowed || h < 1e-9 * span {
            w = if w1 - w <= h { w1 } else { w + h };
            s += fine + (fine - full) / 15.0;
            fw = fend;
            table.push((w, s));
            if err < 0.1 * allowed {
                h *= 2.0;
            }
        } else {
            h *= 0.5;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = kronrod15(|x| x.powi(10), -1.0, 2.0);
        let exact = (2f64.powi(11) + 1.0) / 11.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn rk4_table_matches_antiderivative() {
        let table = rk4_cumulative(|w| w.cos() + 2.0, 0.0, 3.0, 1024, 1e-13);
        assert!(table.len() >= 1025);
        for (w, s) in table {
            assert!((s - (w.sin() + 2.0 * w)).abs() < 1e-12);
        }
    }
}
