//! Gauss–Legendre rules and an adaptive composite integrator.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed Gauss–Legendre rule mapped onto arbitrary intervals.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(points: usize) -> Self {
        let (nodes, weights) = gauss_legendre(points);
        GaussRule { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// Result of an adaptive integration: value and accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const MAX_DEPTH: usize = 48;

/// Adaptive composite 7-point Gauss rule with interval halving.
///
/// Each panel compares the one-panel estimate with the sum over its two
/// halves; panels are split until the difference is below the absolute
/// budget allotted to them.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> crate::Result<Integral> {
    let rule = GaussRule::new(7);
    let whole = rule.integrate(&f, a, b);
    recurse(&f, &rule, a, b, whole, abs_tol, 0)
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussRule,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> crate::Result<Integral> {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(f, a, mid);
    let right = rule.integrate(f, mid, b);
    let diff = (left + right - whole).abs();
    if diff <= tol || (b - a).abs() < 1e-14 * (1.0 + a.abs().max(b.abs())) {
        return Ok(Integral {
            value: left + right,
            error: diff,
        });
    }
    if depth >= MAX_DEPTH || !diff.is_finite() {
        return Err(crate::Error::Quadrature {
            a,
            b,
            estimate: diff,
        });
    }
    let l = recurse(f, rule, a, mid, left, 0.5 * tol, depth + 1)?;
    let r = recurse(f, rule, mid, b, right, 0.5 * tol, depth + 1)?;
    Ok(Integral {
        value: l.value + r.value,
        error: l.error + r.error,
    })
}

/// Adaptive integration over `[a, b]` split at the given interior breakpoints.
///
/// The tolerance is relative to the magnitude of the integral, with an
/// absolute floor `abs_floor`. The magnitude is taken from a coarse first pass.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_floor: f64,
) -> crate::Result<Integral> {
    let mut cuts: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(a);
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let coarse = GaussRule::new(7);
    let scale: f64 = cuts
        .windows(2)
        .map(|w| coarse.integrate(|x| f(x).abs(), w[0], w[1]))
        .sum();
    let budget = (rel_tol * scale).max(abs_floor);
    let total_len = b - a;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let share = budget * (w[1] - w[0]) / total_len;
        let piece = adaptive(&f, w[0], w[1], share)?;
        value += piece.value;
        error += piece.error;
    }
    Ok(Integral { value, error })
}

/// Bisection root finder for a continuous function with a sign change on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64) -> crate::Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(crate::Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= abs_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_rule_exact_for_polynomials() {
        for n in 1..10 {
            let rule = GaussRule::new(n);
            let degree = 2 * n - 1;
            let got = rule.integrate(|x| x.powi(degree as i32 - 1) + 1.0, 0.0, 1.0);
            let want = 1.0 / degree as f64 + 1.0;
            assert!((got - want).abs() < 1e-14, "n={n} got={got} want={want}");
        }
    }

    #[test]
    fn two_point_nodes() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_kinks_at_breakpoints() {
        let f = |x: f64| x.min(2.0 - x);
        let got = integrate_piecewise(f, 0.0, 2.0, &[1.0], 1e-13, 0.0).unwrap();
        assert!((got.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_sine() {
        let got = adaptive(f64::sin, 0.0, PI, 1e-13).unwrap();
        assert!((got.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn bisect_finds_pi() {
        let root = bisect(f64::sin, 3.0, 3.5, 1e-15).unwrap();
        assert!((root - PI).abs() < 1e-14);
        assert!(bisect(f64::sin, 0.5, 1.0, 1e-12).is_err());
    }
}
