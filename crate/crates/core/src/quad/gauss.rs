use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
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

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Nodes and weights on `[a, b]` after the substitution
    /// `y = a + (b - a)(1 - cos(pi u))/2`, which clusters nodes at both ends.
    /// Integrands with square-root behaviour at the endpoints (chord lengths
    /// of a disk, say) become smooth in `u`.
    pub fn mapped_clustered(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        use std::f64::consts::PI;
        self.mapped(0.0, 1.0).map(move |(u, w)| {
            let y = a + (b - a) * 0.5 * (1.0 - (PI * u).cos());
            (y, w * (b - a) * 0.5 * PI * (PI * u).sin())
        })
    }

    pub fn integrate_real_clustered(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped_clustered(a, b).map(|(x, w)| f(x) * w).sum()
    }

    pub fn integrate<E>(
        &self,
        a: f64,
        b: f64,
        mut f: impl FnMut(f64) -> Result<Complex64, E>,
    ) -> Result<Complex64, E> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.mapped(a, b) {
            acc += f(x)? * w;
        }
        Ok(acc)
    }

    pub fn integrate_real(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel endpoints `a = t_0 < ... < t_panels = b`, exact at both ends.
fn panel_edges(a: f64, b: f64, panels: usize) -> impl Iterator<Item = (f64, f64)> {
    let at = move |k: usize| {
        let s = k as f64 / panels as f64;
        (1.0 - s) * a + s * b
    };
    (0..panels).map(move |k| (at(k), at(k + 1)))
}

/// Composite rule: `panels` equal panels on `[a, b]`, `rule` on each.
pub fn composite<E>(
    rule: &GaussRule,
    panels: usize,
    a: f64,
    b: f64,
    mut f: impl FnMut(f64) -> Result<Complex64, E>,
) -> Result<Complex64, E> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (lo, hi) in panel_edges(a, b, panels) {
        acc += rule.integrate(lo, hi, &mut f)?;
    }
    Ok(acc)
}
