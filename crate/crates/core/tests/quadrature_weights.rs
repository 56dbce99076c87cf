//! The weight formula against the Golub-Welsch eigenvector identity
//! `w_i = v_{i,0}^2`, and the nodes against an independent eigensolve.

use dmqkd::GaussHermiteRule;
use nalgebra::{DMatrix, SymmetricEigen};

fn jacobi(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    })
}

#[test]
fn weights_match_first_eigenvector_components() {
    for m in [2, 3, 5, 8, 13, 21, 34, 64, 100] {
        let eig = SymmetricEigen::new(jacobi(m));
        let mut pairs: Vec<(f64, f64)> = (0..m)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

        let rule = GaussHermiteRule::new(m).unwrap();
        for (k, (node, weight)) in pairs.into_iter().enumerate() {
            assert!(
                (rule.nodes()[k] - node).abs() <= 1e-10 * node.abs().max(1.0),
                "m={m} node {k}"
            );
            // tiny tail weights are only reproduced to absolute accuracy
            assert!(
                (rule.weights()[k] - weight).abs() <= 1e-10 * weight + 1e-15,
                "m={m} weight {k}: {} vs {weight}",
                rule.weights()[k]
            );
        }
    }
}

#[test]
fn two_point_rule_integrates_cubics() {
    let rule = GaussHermiteRule::new(2).unwrap();
    let f = |x: f64| 2.0 * x.powi(3) - x * x + 4.0 * x + 7.0;
    let exact = -1.0 + 7.0;
    let got: f64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| w * f(x))
        .sum();
    assert!((got - exact).abs() < 1e-14);
}
