use giep::apps::{solve_instance, verify, VerifyTolerances};
use giep::graph::{max_matching, parse_graph, plan_relabeling, Graph};
use giep::instance::random_instance;
use giep::linalg::eig_all;
use giep::model::io::{parse_csv, write_csv};
use giep::model::{build_seed, Spectrum};
use giep::solver::{Mode, SolveConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solved_matrix_has_the_requested_graph(
        n in 1usize..=7,
        k_frac in 0.0f64..=1.0,
        p in 0.0f64..=0.5,
        seed in any::<u64>(),
        directed in any::<bool>(),
    ) {
        let k = ((n / 2) as f64 * k_frac).floor() as usize;
        let inst = random_instance(n, k, p, seed, directed).unwrap();
        match solve_instance(&inst.spectrum, &inst.graph, Mode::Generic, &SolveConfig::default()) {
            Ok(rep) => {
                prop_assert!(Graph::of_matrix(&rep.matrix).same_edges(&inst.graph));
                let v = verify(&rep.matrix, &inst.spectrum, &inst.graph, &VerifyTolerances::for_spectrum(&inst.spectrum));
                prop_assert!(v.passed, "{:?}", v);
                prop_assert!(rep.residual <= rep.tol_final);
            }
            Err(e) => prop_assert!(e.is_step_underflow(), "unexpected failure: {}", e),
        }
    }

    #[test]
    fn relabeling_round_trips(n in 2usize..=9, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let inst = random_instance(n, n / 2, p, seed, false).unwrap();
        let g = &inst.graph;
        let (relabel, pattern) = plan_relabeling(g, &max_matching(g), n / 2).unwrap();
        let seed_m = build_seed(&inst.spectrum);
        let back = relabel.apply_to_matrix(&relabel.restore_matrix(&seed_m));
        prop_assert_eq!(back, seed_m);
        // The pattern covers every edge exactly once after relabeling.
        let relabeled = g.permuted(relabel.perm());
        let support: Vec<(usize, usize)> = pattern.support();
        for (a, b) in relabeled.edges() {
            prop_assert!(support.contains(&(a, b)), "edge ({}, {}) missing from pattern", a, b);
        }
        prop_assert_eq!(support.len(), relabeled.edge_count());
    }
}

#[test]
fn files_round_trip_through_text_formats() {
    let inst = random_instance(6, 2, 0.4, 11, true).unwrap();
    let rep = solve_instance(&inst.spectrum, &inst.graph, Mode::Generic, &SolveConfig::default()).unwrap();
    let m = parse_csv(&write_csv(&rep.matrix)).unwrap();
    assert_eq!(m, rep.matrix);
    let s = Spectrum::from_json(&inst.spectrum.to_json()).unwrap();
    assert_eq!(s, inst.spectrum);
    let g = parse_graph(&inst.graph.to_edge_list()).unwrap();
    assert!(g.same_edges(&inst.graph));
    assert!(s.matching_error(&eig_all(&m).unwrap()) <= 1e-8 * (1.0 + s.inf_norm()));
}

#[test]
fn path_graph_gives_irreducible_tridiagonal() {
    let s = Spectrum::new(vec![(0.5, 1.5), (-2.0, 0.75)], vec![3.0, -1.0]).unwrap();
    let g = Graph::path(6);
    let rep = solve_instance(&s, &g, Mode::Generic, &SolveConfig::default()).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let v = rep.matrix[(i, j)];
            match i.abs_diff(j) {
                0 => {}
                1 => assert!(v != 0.0),
                _ => assert_eq!(v, 0.0),
            }
        }
    }
}
