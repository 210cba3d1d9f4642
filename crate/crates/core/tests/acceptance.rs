//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use giep::apps::{min_eigen_gap, solve_instance, tridiagonalize, verify, VerifyTolerances, GAP_RTOL};
use giep::batch::{map, Execution};
use giep::graph::{max_matching, Graph};
use giep::instance::{random_graph, random_instance, random_spectrum, MIN_GAP};
use giep::linalg::{determinant, eig_all, eigen_triple, Complex, DenseMatrix};
use giep::model::{build_seed, disc_radius, label_eigenvalues, Pattern, Spectrum};
use giep::solver::{eigen_derivative, jacobian_xyz, triples_at, Mode, SolveConfig, SolveReport};
use giep::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_dense(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DenseMatrix {
    let data = (0..n * n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::new(n, n, data).unwrap()
}

fn spectrum_tol(s: &Spectrum) -> f64 {
    1e-8 * (1.0 + s.inf_norm())
}

/// Spectra with k ∈ 0..=4, l ∈ 0..=4, 2k + l ≥ 1.
fn random_sizes(rng: &mut ChaCha8Rng) -> (usize, usize) {
    loop {
        let (k, l) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        if 2 * k + l >= 1 {
            return (k, l);
        }
    }
}

fn jacobian_identity() -> Outcome {
    let specs: Vec<Spectrum> = (0..100u64)
        .map(|i| {
            let mut r = rng(1000 + i);
            let (k, l) = random_sizes(&mut r);
            random_spectrum(&mut r, k, l).unwrap()
        })
        .collect();
    let errs = map(&specs, Execution::Parallel, |s| {
        let p = Pattern::blocks_only(s);
        let m = build_seed(s);
        let d = disc_radius(s).map_err(|e| e.to_string())?;
        let labels = label_eigenvalues(&eig_all(&m).map_err(|e| e.to_string())?, &d)
            .map_err(|e| e.to_string())?;
        let t = triples_at(&m, &labels).map_err(|e| e.to_string())?;
        let j = jacobian_xyz(&m, &p, &t).map_err(|e| e.to_string())?;
        Ok::<f64, String>(j.max_abs_diff(&DenseMatrix::identity(s.n())))
    });
    let mut worst = 0.0f64;
    for e in &errs {
        match e {
            Ok(v) => worst = worst.max(*v),
            Err(msg) => return outcome(false, format!("evaluation failed: {msg}")),
        }
    }
    outcome(worst <= 1e-9, format!("100 spectra, max |J - I| = {worst:.2e}"))
}

/// Labeled coordinates of `m`: `(λ, μ)` per plus disc, `γ` per real disc.
fn coordinates(m: &DenseMatrix, s: &Spectrum) -> Option<Vec<f64>> {
    let d = disc_radius(s).ok()?;
    let eigs = eig_all(m).ok()?;
    label_eigenvalues(&eigs, &d).ok().map(|l| l.to_vec())
}

fn derivative_oracle() -> Outcome {
    const H: f64 = 1e-6;
    let cases: Vec<u64> = (0..50).collect();
    let errs = map(&cases, Execution::Parallel, |&i| -> Result<f64, String> {
        let mut r = rng(2000 + i);
        let (k, l) = random_sizes(&mut r);
        let s = random_spectrum(&mut r, k, l).map_err(|e| e.to_string())?;
        let n = s.n();
        let eps = disc_radius(&s).map_err(|e| e.to_string())?.radius;
        let m = build_seed(&s).add_scaled(&random_dense(&mut r, n, 1.0), 0.05 * eps);
        let b = random_dense(&mut r, n, 1.0);

        let base = coordinates(&m, &s).ok_or("labeling failed at base point")?;
        let up = coordinates(&m.add_scaled(&b, H), &s).ok_or("labeling failed at +h")?;
        let down = coordinates(&m.add_scaled(&b, -H), &s).ok_or("labeling failed at -h")?;
        let fd: Vec<f64> = up.iter().zip(&down).map(|(a, c)| (a - c) / (2.0 * H)).collect();

        let mut analytic = vec![0.0; 2 * k + l];
        for j in 0..k {
            let t = eigen_triple(&m, Complex::new(base[j], base[k + j])).map_err(|e| e.to_string())?;
            let z = eigen_derivative(&t, &b).map_err(|e| e.to_string())?;
            analytic[j] = z.re;
            analytic[k + j] = z.im;
        }
        for j in 0..l {
            let t = eigen_triple(&m, Complex::real(base[2 * k + j])).map_err(|e| e.to_string())?;
            analytic[2 * k + j] = eigen_derivative(&t, &b).map_err(|e| e.to_string())?.re;
        }
        Ok(fd.iter().zip(&analytic).fold(0.0, |w, (a, c)| w.max((a - c).abs())))
    });
    let mut worst = 0.0f64;
    for e in &errs {
        match e {
            Ok(v) => worst = worst.max(*v),
            Err(msg) => return outcome(false, format!("case failed: {msg}")),
        }
    }
    outcome(worst <= 1e-5, format!("50 cases, max |analytic - FD| = {worst:.2e}"))
}

struct EndToEnd {
    successes: usize,
    verified: usize,
    underflows: usize,
    other_failures: Vec<String>,
    accepted_states: usize,
    bad_states: usize,
}

fn end_to_end_runs() -> EndToEnd {
    let seeds: Vec<u64> = (0..200).collect();
    let results = map(&seeds, Execution::Parallel, |&seed| {
        let mut r = rng(3000 + seed);
        let n = r.gen_range(1..=8);
        let k = r.gen_range(0..=n / 2);
        let p = r.gen_range(0.0..=0.5);
        let directed = r.gen_bool(0.5);
        let inst = random_instance(n, k, p, 30_000 + seed, directed).unwrap();
        let res = solve_instance(&inst.spectrum, &inst.graph, Mode::Generic, &SolveConfig::default());
        let ok = res.as_ref().ok().map(|rep| {
            verify(&rep.matrix, &inst.spectrum, &inst.graph, &VerifyTolerances::for_spectrum(&inst.spectrum))
                .passed
        });
        (seed, res, ok)
    });
    let mut out = EndToEnd {
        successes: 0,
        verified: 0,
        underflows: 0,
        other_failures: Vec::new(),
        accepted_states: 0,
        bad_states: 0,
    };
    for (seed, res, ok) in results {
        match res {
            Ok(rep) => {
                out.successes += 1;
                if ok == Some(true) {
                    out.verified += 1;
                }
                out.accepted_states += rep.history.len();
                out.bad_states += rep.history.iter().filter(|h| !h.discs_exact).count();
            }
            Err(e) if e.is_step_underflow() => out.underflows += 1,
            Err(e) => out.other_failures.push(format!("seed {seed}: {e}")),
        }
    }
    out
}

fn end_to_end(r: &EndToEnd) -> Outcome {
    let rate = r.successes as f64 / 200.0;
    let passed = rate >= 0.95 && r.verified == r.successes && r.other_failures.is_empty();
    let mut detail = format!(
        "{}/200 solved, {} verified, {} step underflows",
        r.successes, r.verified, r.underflows
    );
    if let Some(f) = r.other_failures.first() {
        detail.push_str(&format!(", {} other failures (first: {f})", r.other_failures.len()));
    }
    outcome(passed, detail)
}

fn disc_occupancy(r: &EndToEnd) -> Outcome {
    outcome(
        r.bad_states == 0 && r.accepted_states > 0,
        format!("{} accepted states, {} with a disc not holding exactly one eigenvalue", r.accepted_states, r.bad_states),
    )
}

fn tridiagonalization() -> Outcome {
    let cases: Vec<u64> = (0..50).collect();
    let results = map(&cases, Execution::Parallel, |&i| -> Result<(), String> {
        let mut r = rng(4000 + i);
        let n = r.gen_range(2..=7);
        for _ in 0..1000 {
            let m = random_dense(&mut r, n, 1.0);
            let eigs = eig_all(&m).map_err(|e| e.to_string())?;
            if min_eigen_gap(&eigs) <= GAP_RTOL * (1.0 + m.frobenius_norm()) {
                continue;
            }
            let rep = match tridiagonalize(&m, &SolveConfig::default()) {
                Ok(rep) => rep,
                Err(Error::RepeatedEigenvalues { .. }) => continue,
                Err(e) => return Err(format!("case {i} (n = {n}): {e}")),
            };
            let t = &rep.matrix;
            for a in 0..n {
                for b in 0..n {
                    let off = a.abs_diff(b);
                    if off > 1 && t[(a, b)] != 0.0 {
                        return Err(format!("case {i}: entry ({a}, {b}) = {}", t[(a, b)]));
                    }
                    if off == 1 && t[(a, b)] == 0.0 {
                        return Err(format!("case {i}: zero at ({a}, {b})"));
                    }
                }
            }
            let s = Spectrum::from_eigenvalues(&eigs).map_err(|e| e.to_string())?;
            let err = s.matching_error(&eig_all(t).map_err(|e| e.to_string())?);
            if err > spectrum_tol(&s) {
                return Err(format!("case {i}: spectrum error {err:.2e}"));
            }
            return Ok(());
        }
        Err(format!("case {i}: no matrix with distinct eigenvalues found"))
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    match failures.first() {
        None => outcome(true, "50 matrices, all exactly tridiagonal and irreducible".into()),
        Some(f) => outcome(false, format!("{} failures (first: {f})", failures.len())),
    }
}

fn mode_check(r: &SolveReport, s: &Spectrum, g: &Graph) -> Result<(), String> {
    if r.history.iter().any(|h| h.mode_defect != 0.0) {
        return Err("mode defect at an intermediate step".into());
    }
    let v = verify(&r.matrix, s, g, &VerifyTolerances::for_spectrum(s));
    if !v.passed {
        return Err(format!("verification failed: {v:?}"));
    }
    Ok(())
}

fn symmetric_mode() -> Outcome {
    let cases: Vec<u64> = (0..25).collect();
    let results = map(&cases, Execution::Parallel, |&i| -> Result<(), String> {
        let mut r = rng(5000 + i);
        let n = r.gen_range(2..=8);
        let s = random_spectrum(&mut r, 0, n).map_err(|e| e.to_string())?;
        let p = r.gen_range(0.1..=0.6);
        let g = random_graph(&mut r, n, 0, p, false).map_err(|e| e.to_string())?;
        let rep = solve_instance(&s, &g, Mode::Symmetric, &SolveConfig::default())
            .map_err(|e| format!("case {i}: {e}"))?;
        let m = &rep.matrix;
        if m.max_abs_diff(&m.transpose()) != 0.0 {
            return Err(format!("case {i}: M is not exactly symmetric"));
        }
        mode_check(&rep, &s, &g).map_err(|e| format!("case {i}: {e}"))
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    match failures.first() {
        None => outcome(true, "25 instances, M - Mᵀ = 0 exactly".into()),
        Some(f) => outcome(false, format!("{} failures (first: {f})", failures.len())),
    }
}

fn imaginary_spectrum(rng: &mut ChaCha8Rng, k: usize, l: usize) -> Spectrum {
    let mut mus: Vec<f64> = Vec::new();
    while mus.len() < k {
        let mu = rng.gen_range(MIN_GAP..=5.0);
        if mus.iter().all(|m| (m - mu).abs() >= MIN_GAP) && (l == 0 || mu >= MIN_GAP) {
            mus.push(mu);
        }
    }
    Spectrum::new(mus.into_iter().map(|m| (0.0, m)).collect(), vec![0.0; l]).unwrap()
}

fn skew_mode() -> Outcome {
    let cases: Vec<u64> = (0..25).collect();
    let results = map(&cases, Execution::Parallel, |&i| -> Result<(), String> {
        let mut r = rng(6000 + i);
        let k = r.gen_range(1..=4);
        let l = r.gen_range(0..=1);
        let s = imaginary_spectrum(&mut r, k, l);
        let p = r.gen_range(0.1..=0.6);
        let g = random_graph(&mut r, s.n(), k, p, false).map_err(|e| e.to_string())?;
        let rep = solve_instance(&s, &g, Mode::Skew, &SolveConfig::default())
            .map_err(|e| format!("case {i}: {e}"))?;
        let m = &rep.matrix;
        for a in 0..s.n() {
            for b in 0..s.n() {
                if a != b && m[(a, b)] + m[(b, a)] != 0.0 {
                    return Err(format!("case {i}: M + Mᵀ nonzero at ({a}, {b})"));
                }
            }
        }
        mode_check(&rep, &s, &g).map_err(|e| format!("case {i}: {e}"))
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    match failures.first() {
        None => outcome(true, "25 instances, off-diagonal M + Mᵀ = 0 exactly".into()),
        Some(f) => outcome(false, format!("{} failures (first: {f})", failures.len())),
    }
}

/// Maximum matching over bidirected edges by exhaustive search on vertex subsets.
fn brute_force_matching(g: &Graph) -> usize {
    fn best(g: &Graph, free: u32, memo: &mut HashMap<u32, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut result = best(g, rest, memo);
        for u in 0..g.n() {
            if rest & (1 << u) != 0 && g.has_edge(u, v) && g.has_edge(v, u) {
                result = result.max(1 + best(g, rest & !(1 << u), memo));
            }
        }
        memo.insert(free, result);
        result
    }
    best(g, (1u32 << g.n()) - 1, &mut HashMap::new())
}

fn matching_oracle() -> Outcome {
    let cases: Vec<u64> = (0..500).collect();
    let results = map(&cases, Execution::Parallel, |&i| {
        let mut r = rng(8000 + i);
        let n = r.gen_range(1..=10);
        let p = r.gen_range(0.0..=1.0);
        let directed = r.gen_bool(0.3);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && (directed || a < b) && r.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = if directed { Graph::directed(n, edges) } else { Graph::undirected(n, edges) }.unwrap();
        let m = max_matching(&g);
        (m.is_valid_for(&g) && m.len() == brute_force_matching(&g), i)
    });
    let bad: Vec<u64> = results.iter().filter(|(ok, _)| !ok).map(|&(_, i)| i).collect();
    let detail = if bad.is_empty() {
        "500 graphs, no disagreements".to_string()
    } else {
        format!("500 graphs, disagreement on cases {bad:?}")
    };
    outcome(bad.is_empty(), detail)
}

fn eigensolver_identities() -> Outcome {
    let cases: Vec<u64> = (0..1000).collect();
    let results = map(&cases, Execution::Parallel, |&i| -> Result<(), String> {
        let mut r = rng(9000 + i);
        let n = r.gen_range(1..=12);
        let m = random_dense(&mut r, n, 1.0);
        let e = eig_all(&m).map_err(|e| format!("matrix {i}: {e}"))?;
        let sum = e.iter().fold(Complex::ZERO, |a, &b| a + b);
        let tr = m.trace();
        if (sum.re - tr).abs() > 1e-9 * (1.0 + tr.abs()) || sum.im.abs() > 1e-9 * (1.0 + tr.abs()) {
            return Err(format!("matrix {i}: eigenvalue sum {sum} vs trace {tr}"));
        }
        let prod = e.iter().fold(Complex::ONE, |a, &b| a * b);
        let det = determinant(&m).map_err(|e| e.to_string())?;
        if (prod - Complex::real(det)).abs() > 1e-8 * det.abs() {
            return Err(format!("matrix {i}: eigenvalue product {prod} vs determinant {det}"));
        }
        Ok(())
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    match failures.first() {
        None => outcome(true, "1000 matrices, trace and determinant identities hold".into()),
        Some(f) => outcome(false, format!("{} failures (first: {f})", failures.len())),
    }
}

fn main() -> ExitCode {
    let mut all_passed = true;
    let mut report = |id: u32, name: &str, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {id}. {name}: {} ({secs:.1}s)", o.detail);
        all_passed &= o.passed;
    };

    report(1, "Jacobian is the identity at the seed", &jacobian_identity);
    report(2, "eigenvalue derivative agrees with finite differences", &derivative_oracle);
    let start = Instant::now();
    let e2e = end_to_end_runs();
    let e2e_secs = start.elapsed().as_secs_f64();
    report(3, "end-to-end solves on random feasible instances", &|| {
        let o = end_to_end(&e2e);
        Outcome { detail: format!("{}, sweep {e2e_secs:.1}s", o.detail), ..o }
    });
    report(4, "tridiagonalization of random matrices", &tridiagonalization);
    report(5, "symmetric mode is exactly symmetric", &symmetric_mode);
    report(6, "skew mode is exactly skew off the diagonal", &skew_mode);
    report(7, "every accepted state has one eigenvalue per disc", &|| disc_occupancy(&e2e));
    report(8, "blossom matching agrees with brute force", &matching_oracle);
    report(9, "eigensolver trace and determinant identities", &eigensolver_identities);

    if all_passed {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
