//! Quadrature rules: Gauss–Laguerre for ∫₀^∞ e^{-z} f(z) dz, Gauss–Legendre
//! panels, and adaptive double-exponential rules for semi-infinite and finite
//! intervals with endpoint singularities.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{convergence, domain, Result};

/// Nodes and weights of an n-point Gauss rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
/// shifts), returned in ascending order.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, offdiag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&offdiag[..n - 1]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal QL failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    diag.sort_by(|a, b| a.total_cmp(b));
    diag
}

/// Returns (ln|L_n(x)|, ln|L_{n-1}(x)|, L_{n-1}/L_n) via the three-term
/// recurrence with running rescaling.
fn laguerre_eval(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0; // L_0
    let mut cur = 1.0 - x; // L_1
    let mut log_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            log_scale += mag.ln();
            prev /= mag;
            cur /= mag;
        }
    }
    if n == 0 {
        return (0.0, f64::NEG_INFINITY, 0.0);
    }
    (log_scale + cur.abs().ln(), log_scale + prev.abs().ln(), prev / cur)
}

fn build_gauss_laguerre(n: usize) -> GaussRule {
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|i| i as f64).collect();
    let mut nodes = tridiagonal_eigenvalues(diag, &off);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        // Newton polish on L_n: L_n' = n (L_n - L_{n-1}) / x
        for _ in 0..8 {
            let (_, _, ratio) = laguerre_eval(n, *x);
            let step = *x / (n as f64 * (1.0 - ratio));
            *x -= step;
            if step.abs() < 1e-15 * x.abs() {
                break;
            }
        }
        // w = x / ((n+1)^2 L_{n+1}(x)^2) = x / (n^2 L_{n-1}(x)^2) at a root of L_n
        let (_, ln_prev, _) = laguerre_eval(n, *x);
        let ln_w = x.ln() - 2.0 * (n as f64).ln() - 2.0 * ln_prev;
        weights.push(ln_w.exp());
    }
    // the recurrence loses ~n ulps; the weights must sum to ∫ e^{-z} = 1
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    GaussRule { nodes, weights }
}

/// Gauss–Laguerre rule for ∫₀^∞ e^{-z} f(z) dz. Rules are cached per size.
pub fn gauss_laguerre(n: usize) -> Result<Arc<GaussRule>> {
    if n == 0 {
        return Err(domain("gauss_laguerre", "n must be positive"));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_gauss_laguerre(n));
    cache.lock().unwrap().insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    if n == 0 {
        return Err(domain("gauss_legendre", "n must be positive"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(GaussRule { nodes, weights })
}

const DE_MAX_LEVEL: u32 = 10;
const DE_T_RANGE: f64 = 6.0;

/// Trapezoidal sum over t ∈ [lo, hi] with step h at odd multiples only when
/// `odd` is set (refinement) or all multiples otherwise.
fn de_sum(
    map: &dyn Fn(f64) -> Option<(f64, f64)>,
    f: &mut dyn FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    h: f64,
    odd: bool,
) -> f64 {
    let k_lo = (lo / h).ceil() as i64;
    let k_hi = (hi / h).floor() as i64;
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        if odd && k % 2 == 0 {
            continue;
        }
        let t = k as f64 * h;
        if let Some((x, dx)) = map(t) {
            let v = f(x) * dx;
            if v.is_finite() {
                sum += v;
            }
        }
    }
    sum
}

fn de_integrate(
    what: &'static str,
    map: &dyn Fn(f64) -> Option<(f64, f64)>,
    f: &mut dyn FnMut(f64) -> f64,
    rel_tol: f64,
) -> Result<f64> {
    // coarse scan to locate where the transformed integrand is non-negligible
    let h0 = 0.125;
    let mut samples = Vec::new();
    let mut k = -(DE_T_RANGE / h0) as i64;
    while (k as f64) * h0 <= DE_T_RANGE {
        let t = k as f64 * h0;
        let v = map(t).map(|(x, dx)| (f(x) * dx).abs()).unwrap_or(0.0);
        samples.push((t, if v.is_finite() { v } else { 0.0 }));
        k += 1;
    }
    let peak = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let keep = |v: f64| v > 1e-20 * peak;
    let lo = samples.iter().find(|s| keep(s.1)).map(|s| s.0).unwrap() - 0.5;
    let hi = samples.iter().rev().find(|s| keep(s.1)).map(|s| s.0).unwrap() + 0.5;
    let (lo, hi) = (lo.max(-DE_T_RANGE), hi.min(DE_T_RANGE));

    let mut h = h0;
    let mut sum = de_sum(map, f, lo, hi, h, false);
    let mut estimate = sum * h;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        sum += de_sum(map, f, lo, hi, h, true);
        let next = sum * h;
        let err = (next - estimate).abs();
        estimate = next;
        if level >= 2 && err <= rel_tol * estimate.abs() {
            return Ok(estimate);
        }
    }
    Err(convergence(what, format!("no convergence to {rel_tol:e} after {DE_MAX_LEVEL} halvings")))
}

/// ∫₀^∞ f(x) dx by the exp-sinh rule x = exp(π/2 · sinh t). Handles
/// integrable singularities at 0 and integrands concentrated on any scale.
pub fn integrate_semi_infinite(mut f: impl FnMut(f64) -> f64, rel_tol: f64) -> Result<f64> {
    let map = |t: f64| {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let dx = FRAC_PI_2 * t.cosh() * x;
        (x > 0.0 && dx.is_finite()).then_some((x, dx))
    };
    de_integrate("semi-infinite quadrature", &map, &mut f, rel_tol)
}

/// ∫_a^b f(x) dx by the tanh-sinh rule.
pub fn integrate_finite(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(domain("integrate_finite", format!("[{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let half = 0.5 * (b - a);
    let map = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        // distance from the nearer endpoint, 1 - tanh|u| = 2/(e^{2|u|}+1)
        let gap = half * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if u < 0.0 { a + gap } else { b - gap };
        let dx = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        (gap > 0.0 && dx > 0.0).then_some((x, dx))
    };
    de_integrate("finite quadrature", &map, &mut f, rel_tol)
}
