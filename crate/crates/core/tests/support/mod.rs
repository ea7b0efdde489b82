//! Independent oracle: the transition semigroup of the joint chain `(R_t, H_t)`
//! computed by uniformization of its generator.
//!
//! Every ball is re-placed in a uniformly chosen urn at the epochs of its own
//! Poisson clock, so it switches side at rate `rate / 2`.

#![allow(dead_code)]

pub struct Generator {
    pub regular: usize,
    pub heavy: usize,
    pub alpha: f64,
}

impl Generator {
    pub fn new(total: usize, heavy: usize, alpha: f64) -> Self {
        Self {
            regular: total - heavy,
            heavy,
            alpha,
        }
    }

    fn index(&self, r: usize, h: usize) -> usize {
        r * (self.heavy + 1) + h
    }

    /// Applies `P = I + Q / Λ` to a row vector.
    fn step(&self, v: &[f64], lambda: f64) -> Vec<f64> {
        let (n, m, a) = (self.regular, self.heavy, self.alpha);
        let mut out = vec![0.0; v.len()];
        for r in 0..=n {
            for h in 0..=m {
                let p = v[self.index(r, h)];
                if p == 0.0 {
                    continue;
                }
                let moves = [
                    (r > 0).then(|| (self.index(r - 1, h), 0.5 * r as f64)),
                    (r < n).then(|| (self.index(r + 1, h), 0.5 * (n - r) as f64)),
                    (h > 0).then(|| (self.index(r, h - 1), 0.5 * a * h as f64)),
                    (h < m).then(|| (self.index(r, h + 1), 0.5 * a * (m - h) as f64)),
                ];
                let mut stay = 1.0;
                for (j, rate) in moves.into_iter().flatten() {
                    out[j] += p * rate / lambda;
                    stay -= rate / lambda;
                }
                out[self.index(r, h)] += p * stay;
            }
        }
        out
    }

    /// Law of `(R_t, H_t)` from `(r0, h0)`, as a grid indexed `[r][h]`.
    pub fn law(&self, r0: usize, h0: usize, t: f64) -> Vec<Vec<f64>> {
        let lambda = 0.5 * (self.regular as f64 + self.alpha * self.heavy as f64);
        let mut v = vec![0.0; (self.regular + 1) * (self.heavy + 1)];
        v[self.index(r0, h0)] = 1.0;
        let mut acc = vec![0.0; v.len()];
        let mean = lambda * t;
        assert!(mean < 700.0, "e^{{-Λt}} underflows");
        let mut weight = (-mean).exp();
        let mut cumulative = 0.0;
        let mut k = 0usize;
        while cumulative < 1.0 - 1e-16 && k < 10_000 {
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += weight * x;
            }
            cumulative += weight;
            k += 1;
            weight *= mean / k as f64;
            v = self.step(&v, lambda);
        }
        (0..=self.regular)
            .map(|r| (0..=self.heavy).map(|h| acc[self.index(r, h)]).collect())
            .collect()
    }

    /// Law of `W_t = R_t + H_t`.
    pub fn observed(&self, r0: usize, h0: usize, t: f64) -> Vec<f64> {
        let grid = self.law(r0, h0, t);
        let mut w = vec![0.0; self.regular + self.heavy + 1];
        for (r, row) in grid.iter().enumerate() {
            for (h, p) in row.iter().enumerate() {
                w[r + h] += p;
            }
        }
        w
    }
}
