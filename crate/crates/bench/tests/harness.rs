use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use subcont_bench::config::{ExperimentConfig, ExperimentKind, MethodKind, PropertyCheckSpec, PropertyKind};
use subcont_bench::experiment::{
    config_from_manifest, read_manifest, read_summary, read_trace_csv, run_experiment, ExperimentError,
    ExperimentOutput, MANIFEST_FILE, TRACE_HEADER,
};
use subcont_bench::tsv::{load_bipartite_tsv, parse_edge_list, LoadedInstance};
use subcont_core::zoo::gen_nonmonotone_nqp_with;
use subcont_core::zoo::NonmonotoneNqpParams;
use subcont_core::Objective;

fn small(kind: ExperimentKind, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, out);
    cfg.seeds = 2;
    cfg.k_s = 50;
    cfg.sweep = vec![0.5, 1.5];
    match kind {
        ExperimentKind::MonotoneNqp => (cfg.n, cfg.m) = (8, 4),
        ExperimentKind::NonmonotoneNqp => cfg.n = 6,
        ExperimentKind::BudgetAllocation => (cfg.n, cfg.m, cfg.degree) = (4, 12, 2),
        ExperimentKind::Revenue => cfg.n = 12,
        ExperimentKind::PropertyCheck => {}
    }
    cfg
}

fn trace_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir.join("traces"))
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn summary_values_are_last_trace_rows() {
    for kind in [
        ExperimentKind::MonotoneNqp,
        ExperimentKind::NonmonotoneNqp,
        ExperimentKind::BudgetAllocation,
        ExperimentKind::Revenue,
    ] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(kind, dir.path());
        let ExperimentOutput::Runs(summary) = run_experiment(&cfg).unwrap() else {
            panic!("expected runs");
        };
        assert_eq!(summary, read_summary(dir.path()).unwrap());
        let labels = subcont_bench::experiment::method_labels(&cfg);
        assert_eq!(
            summary.records.len(),
            labels.len() * cfg.seeds * cfg.sweep.len(),
            "{kind}"
        );
        for r in &summary.records {
            let path = dir.path().join(&r.trace_path);
            let text = fs::read_to_string(&path).unwrap();
            assert_eq!(text.lines().next(), Some(TRACE_HEADER));
            let rows = read_trace_csv(&path).unwrap();
            assert_eq!(rows.last().unwrap().2, r.final_value, "{}", path.display());
            assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        }
        for p in &summary.points {
            for m in &p.methods {
                assert_eq!(m.count, cfg.seeds);
            }
        }
        assert_eq!(read_manifest(dir.path()).unwrap()["status"], "ok");
    }
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&small(ExperimentKind::MonotoneNqp, a.path())).unwrap();
    let mut cfg = config_from_manifest(&a.path().join(MANIFEST_FILE)).unwrap();
    cfg.output_dir = b.path().to_owned();
    run_experiment(&cfg).unwrap();
    let (ta, tb) = (trace_files(a.path()), trace_files(b.path()));
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn manifest_lists_seeds_and_step_note() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentKind::NonmonotoneNqp, dir.path());
    cfg.base_seed = 40;
    run_experiment(&cfg).unwrap();
    let m = read_manifest(dir.path()).unwrap();
    assert_eq!(m["instance_seeds"], serde_json::json!([40, 41]));
    assert_eq!(m["sweep_variable"], "upper");
    assert!(m["notes"][0].as_str().unwrap().contains("projgrad"));
}

#[test]
fn manifest_precedes_results() {
    let dir = tempfile::tempdir().unwrap();
    // a file where the trace directory should go stops the run before any result
    fs::write(dir.path().join("traces"), "").unwrap();
    let err = run_experiment(&small(ExperimentKind::MonotoneNqp, dir.path())).unwrap_err();
    assert!(matches!(err, ExperimentError::Io { .. }));
    assert_eq!(read_manifest(dir.path()).unwrap()["status"], "running");
    assert!(!dir.path().join("summary.json").exists());
}

#[test]
fn failures_keep_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentKind::NonmonotoneNqp, dir.path());
    cfg.n = 7;
    cfg.grid_points = Some(3);
    cfg.methods = vec![MethodKind::DoubleGreedy];
    let err = run_experiment(&cfg).unwrap_err();
    let ExperimentError::Failed(failures) = err else {
        panic!("{err}")
    };
    assert!(failures.iter().all(|f| f.method == "grid_oracle"));
    let m = read_manifest(dir.path()).unwrap();
    assert_eq!(m["status"], "failed");
    assert_eq!(m["failures"].as_array().unwrap().len(), failures.len());
    assert!(!trace_files(dir.path()).is_empty());
    assert_eq!(read_summary(dir.path()).unwrap().records.len(), 4);
}

#[test]
fn double_greedy_beats_third_of_grid_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentKind::NonmonotoneNqp, dir.path());
    cfg.n = 4;
    cfg.seeds = 5;
    cfg.grid_points = Some(51);
    cfg.methods = vec![MethodKind::DoubleGreedy];
    let ExperimentOutput::Runs(summary) = run_experiment(&cfg).unwrap() else {
        panic!()
    };
    assert_eq!(summary.records.len(), 10);
    for r in &summary.records {
        // independent scan of the same instance
        let params = NonmonotoneNqpParams {
            n: 4,
            upper: r.sweep_value,
            density: cfg.density,
        };
        let (f, _) = gen_nonmonotone_nqp_with(params, r.instance_seed).unwrap();
        let mut best = f64::NEG_INFINITY;
        let g = |k: usize| r.sweep_value * k as f64 / 50.0;
        for i in 0..51usize.pow(4) {
            let x = [g(i % 51), g(i / 51 % 51), g(i / 2601 % 51), g(i / 132651)];
            best = best.max(f.value(&x).unwrap());
        }
        assert_eq!(r.grid_optimum, Some(best));
        assert!(r.final_value >= best / 3.0, "{r:?}");
    }
}

#[test]
fn property_check_experiment_writes_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::PropertyCheck, dir.path());
    cfg.property = Some(PropertyCheckSpec {
        function: "product".into(),
        property: PropertyKind::WeakDr,
        dim: 2,
        trials: 300,
        seed: 4,
    });
    let ExperimentOutput::Check(v) = run_experiment(&cfg).unwrap() else {
        panic!()
    };
    assert_eq!(v.verdict, "fail");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verdict.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "fail");
    assert!(!json["witness"]["points"].as_array().unwrap().is_empty());
}

#[test]
fn loads_files_for_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let infl = dir.path().join("g.tsv");
    fs::write(&infl, "# kind=influence\nk1\tc1\t0.5\nk2\tc1\t0.3\nk2\tc2\t0.4\n").unwrap();
    let loaded = load_bipartite_tsv(&infl).unwrap();
    let LoadedInstance::Influence(inst) = loaded.instance else {
        panic!()
    };
    assert_eq!((inst.n_channels(), inst.n_customers()), (2, 2));
    assert_eq!(loaded.mapping.targets, vec!["c1", "c2"]);

    let mut cfg = small(ExperimentKind::BudgetAllocation, &dir.path().join("out"));
    cfg.data_path = Some(infl.clone());
    run_experiment(&cfg).unwrap();

    let rev = dir.path().join("r.tsv");
    fs::write(&rev, "# kind=revenue\na\tb\t0.5\nb\tc\t0.9\nc\tc\t0.2\n").unwrap();
    let mut cfg = small(ExperimentKind::Revenue, &dir.path().join("rev"));
    cfg.data_path = Some(rev);
    let ExperimentOutput::Runs(s) = run_experiment(&cfg).unwrap() else {
        panic!()
    };
    assert!(s.records.iter().all(|r| r.final_value.is_finite()));

    let mut cfg = small(ExperimentKind::Revenue, &dir.path().join("bad"));
    cfg.data_path = Some(infl);
    assert!(matches!(run_experiment(&cfg), Err(ExperimentError::Config(_))));
}

fn subcont(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_subcont"))
        .args(args)
        .env_remove("SUBCONT_SEED")
        .output()
        .unwrap()
}

#[test]
fn cli_run_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let o = subcont(&[
        "run",
        "--experiment",
        "monotone_nqp",
        "--n",
        "6",
        "--m",
        "3",
        "--K",
        "20",
        "--seeds",
        "2",
        "--ks",
        "30",
        "--steps",
        "0.001,0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stdout.as_array().unwrap().len(), 4);
    let cfg = config_from_manifest(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!((cfg.iterations, cfg.steps.clone()), (20, vec![0.001, 0.01]));

    let again = dir.path().join("b");
    let o = subcont(&[
        "run",
        "--manifest",
        out.join(MANIFEST_FILE).to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(trace_files(&out), trace_files(&again));
}

#[test]
fn cli_seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_subcont"))
        .args([
            "run",
            "--experiment",
            "revenue",
            "--n",
            "5",
            "--seeds",
            "1",
            "--ks",
            "5",
            "--out",
        ])
        .arg(dir.path())
        .env("SUBCONT_SEED", "17")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        read_manifest(dir.path()).unwrap()["instance_seeds"],
        serde_json::json!([17])
    );
}

#[test]
fn cli_failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = subcont(&[
        "run",
        "--experiment",
        "nonmonotone_nqp",
        "--n",
        "7",
        "--seeds",
        "1",
        "--grid",
        "3",
        "--out",
        out,
    ]);
    assert!(!o.status.success());
    assert_eq!(read_manifest(dir.path()).unwrap()["status"], "failed");
    assert!(
        !subcont(&["run", "--experiment", "monotone_nqp", "--gamma", "2", "--out", out])
            .status
            .success()
    );
    assert!(!subcont(&["check", "--function", "nowhere.tsv", "--property", "dr"])
        .status
        .success());
}

#[test]
fn cli_check_and_oracle() {
    let o = subcont(&[
        "check",
        "--function",
        "product",
        "--property",
        "weak-dr",
        "--trials",
        "200",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert!(v["witness"].is_object());

    let o = subcont(&[
        "check",
        "--function",
        "influence",
        "--property",
        "dr",
        "--trials",
        "200",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");

    let o = subcont(&["oracle", "--n", "2", "--grid", "11", "--function", "monotone_nqp"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["f_star"].as_f64().unwrap() > 0.0);
    assert!(!subcont(&["oracle", "--n", "7", "--grid", "10"]).status.success());
}

proptest! {
    #[test]
    fn edge_lists_round_trip(edges in prop::collection::btree_map((0u8..6, 0u8..9), 0.001f64..0.999, 1..20)) {
        let mut text = String::from("# kind=influence\n");
        for ((s, t), w) in &edges {
            text.push_str(&format!("s{s}\tt{t}\t{w}\n"));
        }
        let list = parse_edge_list(&text).unwrap();
        prop_assert_eq!(list.edges.len(), edges.len());
        for (s, t, w) in &list.edges {
            let key = (
                list.mapping.sources[*s][1..].parse::<u8>().unwrap(),
                list.mapping.targets[*t][1..].parse::<u8>().unwrap(),
            );
            prop_assert_eq!(edges[&key], *w);
        }
    }
}
