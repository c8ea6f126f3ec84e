//! Finite-difference stencils.
//!
//! Weights come from Fornberg's recursion, so central and one-sided stencils
//! of any order share one code path.

/// Finite-difference weights for derivatives of order `0..=max_order` at `z`
/// over the nodes `xs`. Row `k` holds the weights for the `k`-th derivative.
pub fn fornberg_weights(z: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Relative step used for a derivative of the given order.
pub fn default_step(order: usize) -> f64 {
    match order {
        0 => 0.0,
        1 => 1e-3,
        2 => 2e-3,
        _ => 5e-3,
    }
}

/// A one-dimensional stencil: sample points and weights already scaled by
/// the step, so that `Σ wᵢ f(xᵢ)` approximates the derivative.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Stencil {
    pub fn identity(x: f64) -> Self {
        Self {
            points: vec![x],
            weights: vec![1.0],
        }
    }

    /// Fourth-order stencil for the `order`-th derivative at `x` with step
    /// `h`. Central when the stencil fits in `[lo, hi]`, otherwise shifted to
    /// a one-sided window with one extra node.
    pub fn new(order: usize, x: f64, h: f64, lo: f64, hi: f64) -> Self {
        if order == 0 {
            return Self::identity(x);
        }
        let half: i32 = if order <= 2 { 2 } else { 3 };
        let fits = x - half as f64 * h >= lo && x + half as f64 * h <= hi;
        let offsets: Vec<i32> = if fits || hi - lo < (2 * half + 1) as f64 * h {
            (-half..=half).collect()
        } else {
            let len = 2 * half + 2;
            let start = if x - half as f64 * h < lo {
                ((lo - x) / h).ceil() as i32
            } else {
                ((hi - x) / h).floor() as i32 - (len - 1)
            };
            (start..start + len).collect()
        };
        let nodes: Vec<f64> = offsets.iter().map(|&k| k as f64).collect();
        let w = fornberg_weights(0.0, &nodes, order);
        let scale = h.powi(order as i32);
        let mut points = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        for (k, wk) in offsets.iter().zip(&w[order]) {
            if *wk != 0.0 {
                points.push(x + *k as f64 * h);
                weights.push(wk / scale);
            }
        }
        Self { points, weights }
    }

    /// Central stencil with the default relative step and no domain limit.
    pub fn central(order: usize, x: f64) -> Self {
        let h = default_step(order) * x.abs().max(1.0);
        Self::new(order, x, h, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Fourth-order central derivative of a scalar function.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: usize) -> f64 {
    Stencil::central(order, x).apply(f)
}

/// Five-point central first derivative with an explicit step.
pub fn five_point<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}
