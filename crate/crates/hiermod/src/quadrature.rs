//! Gauss-Hermite quadrature rules.
//!
//! An order-n rule integrates `exp(-t^2) * f(t)` over the real line exactly
//! for polynomials f of degree up to 2n-1. The capacity integrals use the
//! product rule over two axes after recentering each Gaussian mixture
//! component, so the weight function is matched exactly and no truncation of
//! the integration domain is needed.

use std::f64::consts::PI;

/// Nodes and weights of an order-n Gauss-Hermite rule (weight `exp(-t^2)`).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Computes the rule by Newton iteration on the orthonormal Hermite
    /// recurrence. Roots are found from the outside in, each seeded from the
    /// previous ones, and mirrored onto the negative axis.
    ///
    /// Panics if `order` is zero.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];

        let half = n.div_ceil(2);
        let nf = n as f64;
        let mut root = 0.0_f64;
        for i in 0..half {
            // Seed for the next root, largest first.
            root = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => root - 1.14 * nf.powf(0.426) / root,
                2 => 1.86 * root - 0.86 * nodes[0],
                3 => 1.91 * root - 0.91 * nodes[1],
                _ => 2.0 * root - nodes[i - 2],
            };

            let mut deriv = 0.0;
            for _ in 0..100 {
                // Evaluate the orthonormal Hermite polynomial of degree n at
                // `root` via the three-term recurrence.
                let mut p_cur = PI.powf(-0.25);
                let mut p_prev = 0.0;
                for j in 1..=n {
                    let jf = j as f64;
                    let p_old = p_prev;
                    p_prev = p_cur;
                    p_cur = root * (2.0 / jf).sqrt() * p_prev - ((jf - 1.0) / jf).sqrt() * p_old;
                }
                deriv = (2.0 * nf).sqrt() * p_prev;
                let step = p_cur / deriv;
                root -= step;
                if step.abs() <= 1e-15 * (1.0 + root.abs()) {
                    break;
                }
            }

            nodes[i] = root;
            nodes[n - 1 - i] = -root;
            let w = 2.0 / (deriv * deriv);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }

        GaussHermite { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in descending order; symmetric about zero.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `exp(-t^2) * f(t)` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}
