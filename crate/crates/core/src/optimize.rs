//! Small derivative-free minimiser (Nelder-Mead) used by the spoiling scan
//! and the candidate-protocol search. Deterministic given its inputs.

/// Minimises `f` over R^n starting from `x0` with initial simplex step
/// `scale`. Returns the best point and value seen.
pub(crate) fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    max_evals: usize,
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    assert!(n >= 1);
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    // initial simplex: x0 plus one displaced vertex per coordinate
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        let fv = eval(&v, &mut evals);
        simplex.push((v, fv));
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective must be finite"));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() < tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(v, _)| v[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let reflected: Vec<f64> = (0..n)
            .map(|d| centroid[d] + alpha * (centroid[d] - worst.0[d]))
            .collect();
        let fr = eval(&reflected, &mut evals);

        if fr < simplex[0].1 {
            let expanded: Vec<f64> = (0..n)
                .map(|d| centroid[d] + gamma * (reflected[d] - centroid[d]))
                .collect();
            let fe = eval(&expanded, &mut evals);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted: Vec<f64> = (0..n)
                .map(|d| centroid[d] + rho * (worst.0[d] - centroid[d]))
                .collect();
            let fc = eval(&contracted, &mut evals);
            if fc < worst.1 {
                simplex[n] = (contracted, fc);
            } else {
                // shrink towards the best vertex
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for d in 0..n {
                        vertex.0[d] = best[d] + sigma * (vertex.0[d] - best[d]);
                    }
                    vertex.1 = eval(&vertex.0, &mut evals);
                }
            }
        }
    }

    simplex
        .into_iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("objective must be finite"))
        .expect("simplex is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2) + 5.0;
        let (x, fx) = nelder_mead(f, &[0.0, 0.0], 1.0, 500, 1e-12);
        assert!((x[0] - 3.0).abs() < 1e-4);
        assert!((x[1] + 1.0).abs() < 1e-4);
        assert!((fx - 5.0).abs() < 1e-8);
    }

    #[test]
    fn deterministic_for_fixed_start() {
        let f = |x: &[f64]| x.iter().map(|v| v.cos() + v * v * 0.1).sum::<f64>();
        let a = nelder_mead(f, &[0.3, -0.7, 2.1], 0.5, 300, 1e-10);
        let b = nelder_mead(f, &[0.3, -0.7, 2.1], 0.5, 300, 1e-10);
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
