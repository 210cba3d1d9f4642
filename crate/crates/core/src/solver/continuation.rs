//! Continuation driver: ramp the slot entries from zero to their targets and
//! re-solve for the block parameters at each step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::jacobian::{evaluate, triples_at, EigenTriples};
use super::newton::newton_correct;
use super::SolveError;
use crate::linalg::{eig_all, DenseMatrix, LinalgError};
use crate::model::{disc_radius, DiscSystem, ModelError, ParameterPoint, Pattern, Spectrum};

/// How the slot entries `u`, `ω` are tied together.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `u` and `ω` independent.
    #[default]
    Generic,
    /// `ω = u`; with an all-real spectrum the result is symmetric.
    Symmetric,
    /// `ω = −u`; the off-diagonal part is skew-symmetric.
    Skew,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Generic => "generic",
            Mode::Symmetric => "symmetric",
            Mode::Skew => "skew",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generic" => Ok(Mode::Generic),
            "symmetric" => Ok(Mode::Symmetric),
            "skew" => Ok(Mode::Skew),
            other => Err(format!("unknown mode `{other}` (generic|symmetric|skew)")),
        }
    }
}

/// Solver settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Default slot magnitude as a multiple of the disc radius.
    pub fill_scale: f64,
    /// Final spectrum tolerance, relative to `1 + ‖Λ‖∞`.
    pub final_rtol: f64,
    /// Newton tolerance, relative to `1 + ‖Λ‖∞`.
    pub newton_rtol: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    pub initial_step: f64,
    pub max_step: f64,
    pub step_min: f64,
    /// Accepted steps needing at most this many Newton iterations count as easy.
    pub easy_iterations: usize,
    /// Seed for randomized tie-breaks. No current code path draws from it.
    pub rng_seed: Option<u64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            fill_scale: 0.1,
            final_rtol: 1e-8,
            newton_rtol: 1e-11,
            max_newton_iters: 25,
            max_steps: 10_000,
            initial_step: 0.25,
            max_step: 0.25,
            step_min: 1e-6,
            easy_iterations: 3,
            rng_seed: None,
        }
    }
}

impl SolveConfig {
    pub fn tol_final(&self, s: &Spectrum) -> f64 {
        self.final_rtol * (1.0 + s.inf_norm())
    }

    pub fn tol_newton(&self, s: &Spectrum) -> f64 {
        self.newton_rtol * (1.0 + s.inf_norm())
    }
}

/// Target slot values `(u*, ω*)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FillTargets {
    pub u: Vec<f64>,
    pub omega: Vec<f64>,
}

impl FillTargets {
    /// `u*_r = fill_scale · ε`, with `ω*` tied to `u*` by the mode. `ω*` of a
    /// one-directional slot is zero.
    pub fn default_for(p: &Pattern, d: &DiscSystem, mode: Mode, cfg: &SolveConfig) -> Self {
        let value = cfg.fill_scale * d.radius;
        let u = vec![value; p.m()];
        let omega = p
            .slots()
            .iter()
            .map(|s| match (s.bidirected, mode) {
                (false, _) => 0.0,
                (true, Mode::Skew) => -value,
                (true, _) => value,
            })
            .collect();
        FillTargets { u, omega }
    }

    fn validate(&self, p: &Pattern, mode: Mode) -> Result<(), SolveError> {
        if self.u.len() != p.m() || self.omega.len() != p.m() {
            return Err(ModelError::DimensionMismatch(format!(
                "{} slots but {} u and {} ω targets",
                p.m(),
                self.u.len(),
                self.omega.len()
            ))
            .into());
        }
        for (r, s) in p.slots().iter().enumerate() {
            let (u, w) = (self.u[r], self.omega[r]);
            if u == 0.0 || !u.is_finite() || (s.bidirected && (w == 0.0 || !w.is_finite())) {
                return Err(SolveError::InvalidTargets(format!(
                    "slot {r} at ({}, {}) needs nonzero finite targets, got u = {u}, ω = {w}",
                    s.row, s.col
                )));
            }
            let tied = match mode {
                Mode::Generic => true,
                Mode::Symmetric => w == u,
                Mode::Skew => w == -u,
            };
            if s.bidirected && !tied {
                return Err(SolveError::InvalidTargets(format!(
                    "slot {r}: ω = {w} is not tied to u = {u} in {mode} mode"
                )));
            }
        }
        Ok(())
    }

    /// Slot values at homotopy parameter `t`. Tied modes derive `ω` from the
    /// scaled `u` so the tie holds bit-for-bit.
    fn at(&self, t: f64, p: &Pattern, mode: Mode) -> (Vec<f64>, Vec<f64>) {
        let u: Vec<f64> = self.u.iter().map(|&x| t * x).collect();
        let omega = p
            .slots()
            .iter()
            .enumerate()
            .map(|(r, s)| match (s.bidirected, mode) {
                (false, _) => 0.0,
                (true, Mode::Generic) => t * self.omega[r],
                (true, Mode::Symmetric) => u[r],
                (true, Mode::Skew) => -u[r],
            })
            .collect();
        (u, omega)
    }
}

/// Modes other than generic need every slot bidirected; symmetric mode also
/// needs an all-real spectrum since the matched blocks are skew.
pub fn check_mode(s: &Spectrum, p: &Pattern, mode: Mode) -> Result<(), SolveError> {
    match mode {
        Mode::Generic => Ok(()),
        Mode::Symmetric if s.k() > 0 => Err(SolveError::ModeUnsupported(format!(
            "symmetric mode needs an all-real spectrum, got {} conjugate pairs",
            s.k()
        ))),
        Mode::Symmetric | Mode::Skew if !p.all_bidirected() => Err(SolveError::ModeUnsupported(
            format!("{mode} mode needs every non-matching edge in both directions"),
        )),
        _ => Ok(()),
    }
}

/// One accepted continuation state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    /// Step size that produced this state.
    pub step: f64,
    pub newton_iterations: usize,
    /// `‖f(θ) − target‖∞` after correction.
    pub residual: f64,
    /// Every disc held exactly one eigenvalue.
    pub discs_exact: bool,
    /// `max |M − Mᵀ|` in symmetric mode, `max_{i≠j} |M + Mᵀ|` in skew mode,
    /// zero in generic mode.
    pub mode_defect: f64,
}

/// The live state of a continuation run.
#[derive(Clone, Debug)]
pub struct ContinuationState {
    pub t: f64,
    pub theta: ParameterPoint,
    pub step: f64,
    pub triples: EigenTriples,
    pub history: Vec<StepRecord>,
}

/// Outcome of a successful solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub matrix: DenseMatrix,
    /// Greedy nearest-neighbor spectrum error of `matrix`.
    pub residual: f64,
    pub tol_final: f64,
    /// Accepted continuation steps (excluding the starting point).
    pub steps: usize,
    pub rejected_steps: usize,
    pub newton_iterations_total: usize,
    pub mode: Mode,
    pub disc_radius: f64,
    pub fill: FillTargets,
    pub params: ParameterPoint,
    pub history: Vec<StepRecord>,
}

fn mode_defect(m: &DenseMatrix, mode: Mode) -> f64 {
    let n = m.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = match mode {
                Mode::Generic => 0.0,
                Mode::Symmetric => m[(i, j)] - m[(j, i)],
                Mode::Skew if i != j => m[(i, j)] + m[(j, i)],
                Mode::Skew => 0.0,
            };
            worst = worst.max(d.abs());
        }
    }
    worst
}

/// Errors after which a shorter continuation step may succeed.
fn is_recoverable(e: &SolveError) -> bool {
    matches!(
        e,
        SolveError::NoConvergence { .. }
            | SolveError::Model(ModelError::DiscViolation(_))
            | SolveError::Linalg(LinalgError::NonConvergence(_))
    )
}

/// Ramp `(u, ω) = t·(u*, ω*)` from `t = 0` to `t = 1`, Newton-correcting
/// `(x, y, z)` at every step. The returned matrix is in pattern labels.
///
/// Steps halve on recoverable failures and double after two consecutive easy
/// steps, within `[step_min, max_step]`. Running out of step size reports the
/// largest `t` reached.
pub fn continuation_solve(
    s: &Spectrum,
    p: &Pattern,
    targets: &FillTargets,
    mode: Mode,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolveError> {
    if !p.matches_spectrum(s) {
        return Err(ModelError::DimensionMismatch(format!(
            "pattern has n = {}, k = {}; spectrum has n = {}, k = {}",
            p.n(),
            p.k(),
            s.n(),
            s.k()
        ))
        .into());
    }
    check_mode(s, p, mode)?;
    targets.validate(p, mode)?;
    let d = disc_radius(s)?;
    let target = s.coordinates();
    let tol_newton = cfg.tol_newton(s);
    let tol_final = cfg.tol_final(s);

    let theta0 = ParameterPoint::seed(s, p.m());
    let eval0 = evaluate(p, &theta0, &d)?;
    let mut state = ContinuationState {
        t: 0.0,
        triples: triples_at(&eval0.matrix, &eval0.labels)?,
        theta: theta0,
        step: cfg.initial_step.min(cfg.max_step),
        history: vec![StepRecord {
            t: 0.0,
            step: 0.0,
            newton_iterations: 0,
            residual: eval0.labels.max_abs_diff(&target),
            discs_exact: d.occupancy(&eval0.eigenvalues).is_exact(),
            mode_defect: mode_defect(&eval0.matrix, mode),
        }],
    };
    let mut prev: Option<(f64, Vec<f64>)> = None;
    let mut easy_streak = 0;
    let mut rejected = 0;
    let mut newton_total = 0;

    while state.t < 1.0 && p.m() > 0 {
        if state.history.len() > cfg.max_steps {
            return Err(SolveError::MaxSteps {
                steps: cfg.max_steps,
                t_reached: state.t,
            });
        }
        let t_new = if state.t + state.step >= 1.0 {
            1.0
        } else {
            state.t + state.step
        };
        let mut trial = state.theta.clone();
        // Secant predictor through the last two accepted states.
        if let Some((t_prev, xyz_prev)) = &prev {
            let ratio = (t_new - state.t) / (state.t - t_prev);
            let xyz: Vec<f64> = state
                .theta
                .xyz()
                .iter()
                .zip(xyz_prev)
                .map(|(c, q)| c + ratio * (c - q))
                .collect();
            trial.set_xyz(&xyz);
        }
        let (u, omega) = targets.at(t_new, p, mode);
        trial.u = u;
        trial.omega = omega;

        let attempt = newton_correct(p, &d, &trial, &target, cfg.max_newton_iters, tol_newton)
            .and_then(|out| {
                let eval = evaluate(p, &out.theta, &d)?;
                let triples = triples_at(&eval.matrix, &eval.labels)?;
                Ok((out, eval, triples))
            });
        match attempt {
            Ok((out, eval, triples)) => {
                log::trace!(
                    "accepted t = {t_new:.6} after {} Newton iterations, residual {:.3e}",
                    out.iterations,
                    out.residual
                );
                newton_total += out.iterations;
                state.history.push(StepRecord {
                    t: t_new,
                    step: t_new - state.t,
                    newton_iterations: out.iterations,
                    residual: out.residual,
                    discs_exact: d.occupancy(&eval.eigenvalues).is_exact(),
                    mode_defect: mode_defect(&eval.matrix, mode),
                });
                prev = Some((state.t, state.theta.xyz()));
                state.t = t_new;
                state.theta = out.theta;
                state.triples = triples;
                if out.iterations <= cfg.easy_iterations {
                    easy_streak += 1;
                    if easy_streak >= 2 {
                        state.step = (2.0 * state.step).min(cfg.max_step);
                        easy_streak = 0;
                    }
                } else {
                    easy_streak = 0;
                }
            }
            Err(e) if is_recoverable(&e) => {
                log::debug!("rejected t = {t_new:.6} (step {:.3e}): {e}", state.step);
                rejected += 1;
                easy_streak = 0;
                state.step /= 2.0;
                if state.step < cfg.step_min {
                    return Err(SolveError::StepUnderflow {
                        t_reached: state.t,
                        step: state.step,
                        last: e.to_string(),
                    });
                }
            }
            Err(SolveError::Linalg(e)) => return Err(SolveError::at(t_new, e)),
            Err(e) => return Err(e),
        }
    }

    let matrix = crate::model::assemble(p, &state.theta)?;
    let eigs = eig_all(&matrix)?;
    let residual = s.matching_error(&eigs);
    if residual > tol_final {
        return Err(SolveError::NoConvergence {
            iterations: newton_total,
            residual,
        });
    }
    Ok(SolveReport {
        matrix,
        residual,
        tol_final,
        steps: state.history.len() - 1,
        rejected_steps: rejected,
        newton_iterations_total: newton_total,
        mode,
        disc_radius: d.radius,
        fill: targets.clone(),
        params: state.theta,
        history: state.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_seed, Slot};

    fn path3_pattern() -> Pattern {
        Pattern::new(3, 1, vec![Slot { row: 1, col: 2, bidirected: true }]).unwrap()
    }

    #[test]
    fn no_slots_means_no_steps() {
        let s = Spectrum::new(vec![(1.0, 2.0), (-1.0, 1.0)], vec![]).unwrap();
        let p = Pattern::blocks_only(&s);
        let d = disc_radius(&s).unwrap();
        let cfg = SolveConfig::default();
        let fill = FillTargets::default_for(&p, &d, Mode::Generic, &cfg);
        let r = continuation_solve(&s, &p, &fill, Mode::Generic, &cfg).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.matrix, build_seed(&s));
    }

    #[test]
    fn path_of_three_with_explicit_fill() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let p = path3_pattern();
        let fill = FillTargets { u: vec![0.1], omega: vec![0.1] };
        let r = continuation_solve(&s, &p, &fill, Mode::Generic, &SolveConfig::default()).unwrap();
        let m = &r.matrix;
        assert_eq!(m[(1, 2)], 0.1);
        assert_eq!(m[(2, 1)], 0.1);
        assert_eq!(m[(0, 2)], 0.0);
        assert_eq!(m[(2, 0)], 0.0);
        assert!(m[(0, 1)] != 0.0 && m[(1, 0)] != 0.0);
        assert!(s.matching_error(&eig_all(m).unwrap()) <= 1e-8);
        assert!(r.history.iter().all(|h| h.discs_exact));
        assert!(r.history.windows(2).all(|w| w[0].t < w[1].t));
        assert_eq!(r.history.last().unwrap().t, 1.0);
    }

    #[test]
    fn symmetric_mode_is_exactly_symmetric() {
        let s = Spectrum::new(vec![], vec![1.0, 2.0, 3.0]).unwrap();
        let p = Pattern::new(
            3,
            0,
            vec![
                Slot { row: 0, col: 1, bidirected: true },
                Slot { row: 1, col: 2, bidirected: true },
            ],
        )
        .unwrap();
        let d = disc_radius(&s).unwrap();
        let cfg = SolveConfig::default();
        let fill = FillTargets::default_for(&p, &d, Mode::Symmetric, &cfg);
        let r = continuation_solve(&s, &p, &fill, Mode::Symmetric, &cfg).unwrap();
        assert_eq!(r.matrix, r.matrix.transpose());
        assert!(r.history.iter().all(|h| h.mode_defect == 0.0));
        assert!(s.matching_error(&eig_all(&r.matrix).unwrap()) <= 1e-8);
    }

    #[test]
    fn skew_mode_has_skew_off_diagonal() {
        let s = Spectrum::new(vec![(0.0, 1.0), (0.0, 2.5)], vec![0.0]).unwrap();
        let p = Pattern::new(
            5,
            2,
            vec![
                Slot { row: 1, col: 2, bidirected: true },
                Slot { row: 3, col: 4, bidirected: true },
            ],
        )
        .unwrap();
        let d = disc_radius(&s).unwrap();
        let cfg = SolveConfig::default();
        let fill = FillTargets::default_for(&p, &d, Mode::Skew, &cfg);
        let r = continuation_solve(&s, &p, &fill, Mode::Skew, &cfg).unwrap();
        assert!(r.history.iter().all(|h| h.mode_defect == 0.0));
        assert!(s.matching_error(&eig_all(&r.matrix).unwrap()) <= 1e-8 * (1.0 + s.inf_norm()));
    }

    #[test]
    fn symmetric_mode_rejects_complex_spectrum() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let fill = FillTargets { u: vec![0.1], omega: vec![0.1] };
        let err = continuation_solve(&s, &path3_pattern(), &fill, Mode::Symmetric, &SolveConfig::default())
            .unwrap_err();
        assert!(matches!(err, SolveError::ModeUnsupported(_)));
    }

    #[test]
    fn zero_target_is_rejected() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let fill = FillTargets { u: vec![0.0], omega: vec![0.1] };
        assert!(matches!(
            continuation_solve(&s, &path3_pattern(), &fill, Mode::Generic, &SolveConfig::default()),
            Err(SolveError::InvalidTargets(_))
        ));
    }

    #[test]
    fn huge_fill_underflows_instead_of_lying() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let fill = FillTargets { u: vec![50.0], omega: vec![50.0] };
        let cfg = SolveConfig {
            step_min: 1e-3,
            ..SolveConfig::default()
        };
        match continuation_solve(&s, &path3_pattern(), &fill, Mode::Generic, &cfg) {
            Err(SolveError::StepUnderflow { t_reached, .. }) => assert!(t_reached < 1.0),
            Ok(r) => assert!(r.residual <= r.tol_final),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
