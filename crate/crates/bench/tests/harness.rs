use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use proptest::collection::vec;
use proptest::prelude::{prop_assert_eq, proptest, ProptestConfig};
use qaoa_bench::{
    emit_alpha_table, emit_landscape, emit_params_trace, parse_edge_list, read_edge_list, run_experiment,
    to_edge_list, write_edge_list, BenchError, ExperimentConfig, InstanceSpec, ResultSet,
};
use qaoa_core::{Graph, MaxCutProblem, ParameterVector, Strategy};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

const K2_BILINEAR: &str = r#"
strategies = ["bilinear"]
max_depth = 3
trials = 4

[[instances]]
class = "complete"
n = 2
"#;

const SMALL: &str = r#"
strategies = ["bilinear", "parameters_fixing", "layerwise"]
max_depth = 4
trials = 4
seed = 5

[symmetry]
samples = 10
max_n = 6
max_depth = 2

[[instances]]
class = "regular"
n = 6
degree = 3
seed = 1

[[instances]]
class = "erdos_renyi"
n = 6
prob = 0.5
seed = 2
"#;

fn csv_rows(csv: &str) -> Vec<Vec<&str>> {
    csv.lines().skip(1).map(|l| l.split(',').collect()).collect()
}

#[test]
fn k2_bilinear_reaches_one_at_every_depth() {
    let rs = run_experiment(&config(K2_BILINEAR), Path::new(".")).unwrap();
    assert_eq!(rs.records.len(), 3);
    for (p, r) in rs.records.iter().enumerate() {
        assert_eq!(r.instance, "k2");
        assert_eq!(r.record.depth, p + 1);
        assert!(
            (r.record.alpha - 1.0).abs() < 1e-6,
            "p={} alpha={}",
            p + 1,
            r.record.alpha
        );
    }
}

#[test]
fn zero_instances_is_a_config_error() {
    let cfg = config("strategies = [\"bilinear\"]\ninstances = []");
    assert!(matches!(
        run_experiment(&cfg, Path::new(".")),
        Err(BenchError::Config(_))
    ));
}

#[test]
fn unsatisfiable_instance_names_the_spec() {
    let cfg = config(
        "strategies = [\"bilinear\"]\n[[instances]]\nclass = \"regular\"\nn = 7\ndegree = 3\nseed = 0\n",
    );
    match run_experiment(&cfg, Path::new(".")) {
        Err(BenchError::Config(msg)) => assert!(msg.contains("reg3-n7-s0"), "{msg}"),
        other => panic!("expected config error, got {other:?}"),
    }
}

fn strip_timestamps(mut rs: ResultSet) -> String {
    rs.meta.started_at = 0;
    rs.meta.finished_at = 0;
    rs.to_json().unwrap()
}

#[test]
fn runs_are_deterministic_and_round_trip() {
    let cfg = config(SMALL);
    let a = run_experiment(&cfg, Path::new(".")).unwrap();
    let b = run_experiment(&cfg, Path::new(".")).unwrap();
    assert_eq!(a.records.len(), 2 * 3 * 4);
    assert_eq!(a.symmetry_reports.len(), 6);
    assert_eq!(strip_timestamps(a.clone()), strip_timestamps(b));

    let back = ResultSet::from_json(&a.to_json().unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn records_are_uniquely_keyed_and_sorted() {
    let rs = run_experiment(&config(SMALL), Path::new(".")).unwrap();
    let keys: Vec<_> = rs
        .records
        .iter()
        .map(|r| (r.instance.clone(), r.record.strategy, r.record.depth))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(keys, sorted);
}

#[test]
fn alpha_table_shape() {
    let rs = run_experiment(&config(SMALL), Path::new(".")).unwrap();
    let csv = emit_alpha_table(&rs).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "instance,strategy,p,F_star,alpha,nfev_cumulative"
    );
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), rs.records.len());
    for pair in rows.windows(2) {
        let alpha: f64 = pair[1][4].parse().unwrap();
        assert!((0.0..=1.0).contains(&alpha));
        if pair[0][..2] == pair[1][..2] {
            assert!(pair[0][5].parse::<u64>().unwrap() <= pair[1][5].parse::<u64>().unwrap());
            assert_eq!(
                pair[0][2].parse::<usize>().unwrap() + 1,
                pair[1][2].parse::<usize>().unwrap()
            );
        }
    }

    let mut single = rs.clone();
    single.records.truncate(1);
    assert_eq!(emit_alpha_table(&single).unwrap().lines().count(), 2);
    single.records.clear();
    assert!(emit_alpha_table(&single).is_err());
}

#[test]
fn params_trace_is_triangular_and_in_bounds() {
    let rs = run_experiment(&config(K2_BILINEAR), Path::new(".")).unwrap();
    let csv = emit_params_trace(&rs, "k2", Strategy::Bilinear).unwrap();
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 6);
    let pairs: Vec<(usize, usize)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    assert_eq!(pairs, [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]);
    let b = rs.meta.instances[0].bounds;
    for r in &rows {
        let (g, beta): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((b.gamma_min..=b.gamma_max).contains(&g) && (b.beta_min..=b.beta_max).contains(&beta));
    }
    assert!(emit_params_trace(&rs, "k2", Strategy::Layerwise).is_err());
    assert!(emit_params_trace(&rs, "k3", Strategy::Bilinear).is_err());
}

#[test]
fn landscape_grid_size() {
    let csv = emit_landscape(&Graph::complete(3).unwrap(), 3).unwrap();
    assert_eq!(csv_rows(&csv).len(), 9);
    assert!(emit_landscape(&Graph::complete(3).unwrap(), 1).is_err());
}

#[test]
fn landscape_matches_single_edge_closed_form() {
    let csv = emit_landscape(&Graph::complete(2).unwrap(), 16).unwrap();
    for r in csv_rows(&csv) {
        let [g, b, a]: [f64; 3] = [
            r[0].parse().unwrap(),
            r[1].parse().unwrap(),
            r[2].parse().unwrap(),
        ];
        let closed = 0.5 * (1.0 + (4.0 * b).sin() * g.sin());
        assert!((a - closed).abs() < 1e-9, "({g}, {b}): {a} vs {closed}");
    }
}

#[test]
fn landscape_point_symmetry() {
    let g = Graph::random_regular(8, 3, 6).unwrap();
    let res = 8;
    let csv = emit_landscape(&g, res).unwrap();
    let grid: Vec<f64> = csv_rows(&csv).iter().map(|r| r[2].parse().unwrap()).collect();
    let problem = MaxCutProblem::new(g).unwrap();
    for i in 0..res {
        for j in 0..res {
            // (2pi - gamma, pi/2 - beta) lands on grid index (-i, res/2 - j) modulo the periods.
            let mi = (res - i) % res;
            let mj = (res / 2 + res - j) % res;
            assert!((grid[i * res + j] - grid[mi * res + mj]).abs() < 1e-9);
            let gamma = 2.0 * PI * i as f64 / res as f64;
            let beta = PI * j as f64 / res as f64;
            let image = ParameterVector::new(vec![2.0 * PI - gamma], vec![FRAC_PI_2 - beta]).unwrap();
            let alpha = problem.approximation_ratio(problem.expectation(&image)).unwrap();
            assert!((grid[i * res + j] - alpha).abs() < 1e-9);
        }
    }
}

#[test]
fn config_hash_tracks_every_field() {
    let base = config(SMALL);
    let h = base.hash();
    assert_eq!(h, config(SMALL).hash());
    let mut variants = Vec::new();
    let mut c = base.clone();
    c.seed += 1;
    variants.push(c);
    let mut c = base.clone();
    c.trials += 1;
    variants.push(c);
    let mut c = base.clone();
    c.max_depth += 1;
    variants.push(c);
    let mut c = base.clone();
    c.optimizer.gradient_step *= 2.0;
    variants.push(c);
    let mut c = base.clone();
    c.strategies.pop();
    variants.push(c);
    let mut c = base.clone();
    c.instances[1] = InstanceSpec::ErdosRenyi {
        n: 6,
        prob: 0.5000001,
        seed: 2,
    };
    variants.push(c);
    let mut c = base.clone();
    c.output_dir.push("sub");
    variants.push(c);
    let mut c = base.clone();
    c.symmetry = None;
    variants.push(c);
    for v in variants {
        assert_ne!(v.hash(), h, "{v:?}");
    }
}

#[test]
fn edge_list_instances_run_from_config_dir() {
    let dir = tempfile::tempdir().unwrap();
    write_edge_list(&dir.path().join("tri.edges"), &Graph::cycle(3).unwrap()).unwrap();
    let cfg = config("strategies = [\"layerwise\"]\nmax_depth = 2\ntrials = 2\n[[instances]]\nclass = \"edge_list\"\npath = \"tri.edges\"\n");
    let rs = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(rs.meta.instances[0].id, "file-tri");
    assert_eq!(rs.meta.instances[0].c_max, 2);
    assert!(run_experiment(&cfg, Path::new("/nonexistent")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(n in 2usize..16, picks in vec((0usize..16, 0usize..16), 0..40)) {
        let mut edges: Vec<(usize, usize)> = picks
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort();
        edges.dedup();
        let g = Graph::new(n, edges).unwrap();
        prop_assert_eq!(&parse_edge_list(&to_edge_list(&g)).unwrap(), &g);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        write_edge_list(&path, &g).unwrap();
        prop_assert_eq!(read_edge_list(&path).unwrap(), g);
    }
}
