//! Gauss–Legendre rules and the graded composite rule used for integrands with
//! power-law endpoint singularities.

use std::f64::consts::PI;

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (node, weight) pairs mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&z, &w)| (mid + half * z, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite rule on [a, b] that is geometrically graded toward *both* endpoints.
///
/// Each half of the interval is cut into `depth` pieces whose widths shrink by
/// `ratio` toward the endpoint, plus a final piece touching it. A Gauss rule on
/// every piece then converges exponentially for integrands that behave like
/// (x−a)^ν·smooth near the ends.
#[derive(Debug, Clone)]
pub struct GradedRule {
    rule: GaussLegendre,
    depth: usize,
    ratio: f64,
}

impl GradedRule {
    pub fn new(points: usize, depth: usize, ratio: f64) -> Self {
        assert!(ratio > 0.0 && ratio < 1.0);
        Self {
            rule: GaussLegendre::new(points),
            depth,
            ratio,
        }
    }

    pub fn integrate(&self, a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        self.half(a, mid, f) + self.half(b, mid, f)
    }

    // Graded toward `end`; `inner` is the ungraded side.
    fn half(&self, end: f64, inner: f64, f: &impl Fn(f64) -> f64) -> f64 {
        let len = inner - end;
        let mut sum = 0.0;
        let mut outer_frac = 1.0;
        for _ in 0..self.depth {
            let inner_frac = outer_frac * self.ratio;
            let (p, q) = ordered(end + len * inner_frac, end + len * outer_frac);
            sum += self.rule.integrate(p, q, f);
            outer_frac = inner_frac;
        }
        let (p, q) = ordered(end, end + len * outer_frac);
        sum + self.rule.integrate(p, q, f)
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
