use super::jacobian::{evaluate, jacobian_xyz, triples_at};
use super::SolveError;
use crate::linalg::solve_linear;
use crate::model::{DiscSystem, LabeledValue, ParameterPoint, Pattern};

/// Result of a converged Newton correction.
#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub theta: ParameterPoint,
    pub iterations: usize,
    /// `‖f(θ) − target‖∞` at the returned point.
    pub residual: f64,
}

/// Correct `(x, y, z)` with `u`, `ω` held fixed until `‖f(θ) − target‖∞ ≤ tol`.
///
/// Each iteration solves `J_xyz δ = target − f(θ)` and sets `(x, y, z) += δ`.
pub fn newton_correct(
    p: &Pattern,
    d: &DiscSystem,
    theta: &ParameterPoint,
    target: &LabeledValue,
    max_iter: usize,
    tol: f64,
) -> Result<NewtonOutcome, SolveError> {
    let goal = target.to_vec();
    let mut theta = theta.clone();
    let mut residual = f64::INFINITY;
    for iterations in 0..=max_iter {
        let eval = evaluate(p, &theta, d)?;
        let rhs: Vec<f64> = goal
            .iter()
            .zip(eval.labels.to_vec())
            .map(|(g, f)| g - f)
            .collect();
        residual = rhs.iter().fold(0.0, |m, r| m.max(r.abs()));
        if residual <= tol {
            return Ok(NewtonOutcome {
                theta,
                iterations,
                residual,
            });
        }
        if iterations == max_iter {
            break;
        }
        let triples = triples_at(&eval.matrix, &eval.labels)?;
        let jac = jacobian_xyz(&eval.matrix, p, &triples)?;
        let delta = solve_linear(&jac, &rhs)?;
        let mut xyz = theta.xyz();
        xyz.iter_mut().zip(&delta).for_each(|(a, b)| *a += b);
        if xyz.iter().any(|a| !a.is_finite()) {
            break;
        }
        theta.set_xyz(&xyz);
    }
    Err(SolveError::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_all;
    use crate::model::{assemble, disc_radius, Slot, Spectrum};

    fn path3() -> (Spectrum, Pattern, DiscSystem) {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let p = Pattern::new(3, 1, vec![Slot { row: 1, col: 2, bidirected: true }]).unwrap();
        let d = disc_radius(&s).unwrap();
        (s, p, d)
    }

    #[test]
    fn exact_point_needs_no_iterations() {
        let (s, p, d) = path3();
        let theta = ParameterPoint::seed(&s, 1);
        let out = newton_correct(&p, &d, &theta, &s.coordinates(), 25, 1e-11).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.theta, theta);
    }

    #[test]
    fn corrects_small_fill_quickly() {
        let (s, p, d) = path3();
        let mut theta = ParameterPoint::seed(&s, 1);
        theta.u[0] = 0.05;
        theta.omega[0] = 0.05;
        let out = newton_correct(&p, &d, &theta, &s.coordinates(), 25, 1e-10).unwrap();
        assert!(out.iterations <= 5, "took {} iterations", out.iterations);
        assert!(out.residual <= 1e-10);
        assert_eq!(out.theta.u, theta.u);
        assert_eq!(out.theta.omega, theta.omega);

        let eigs = eig_all(&assemble(&p, &out.theta).unwrap()).unwrap();
        for target in s.points() {
            let nearest = eigs.iter().map(|&z| (z - target).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-9, "{target}: {nearest}");
        }
    }

    #[test]
    fn far_point_is_a_disc_violation() {
        let (s, p, d) = path3();
        let mut theta = ParameterPoint::seed(&s, 1);
        theta.z[0] = 10.0;
        let err = newton_correct(&p, &d, &theta, &s.coordinates(), 25, 1e-11).unwrap_err();
        assert!(matches!(
            err,
            SolveError::Model(crate::model::ModelError::DiscViolation(_))
        ));
    }
}
