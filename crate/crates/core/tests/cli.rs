use serde_json::Value;

use tractor_bgg::cli::{run_with, RunConfig, SCHEMA};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tractor-bgg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, _) = run(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn bgg_table_and_json() {
    let (code, out, _) = run(&["bgg", "--n", "3", "--weight", "1,0,0"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS"));
    let (code, v) = json(&["bgg", "--n", "2", "--weight", "0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["command"], "bgg");
    assert_eq!(v["pass"], true);
}

#[test]
fn kostant_reports_homology() {
    let (code, v) = json(&["kostant", "--family", "dual", "--n", "3"]);
    assert_eq!(code, 0);
    let h: Vec<u64> = v["report"]["homology"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(h, vec![1, 6, 8, 3]);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bgg", "--n", "3", "--weight", "1,-1,0"]).0, 2);
    assert_eq!(run(&["kostant", "--family", "spinor", "--n", "3"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["holonomy", "--word", "9"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("cohomology"));
}

#[test]
fn cohomology_passes_for_symmetric_powers() {
    for (rep, h1) in [("defining", 6), ("symk:2", 10), ("symk:3", 14)] {
        let (code, v) = json(&["cohomology", "--rep", rep]);
        assert_eq!(code, 0, "{rep}");
        assert_eq!(v["h1"], h1);
        assert_eq!(v["h0"], 0);
    }
}

fn write_config(dir: &std::path::Path, cfg: &RunConfig) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, serde_json::to_string(cfg).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn failing_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.tolerances.holonomy = 1e-15;
    let p = write_config(dir.path(), &cfg);
    let (code, v) = json(&["--config", &p, "holonomy", "--word", "1", "--step", "0.01"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn sphere_normal_is_reported_as_not_parallel() {
    let (code, v) = json(&["geometry", "check-normal-tractor", "--surface", "sphere", "--samples", "4"]);
    assert_eq!(code, 0);
    assert!(v["max_error"].as_f64().unwrap() > 0.1);
}

#[test]
fn config_file_overrides_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.tolerances.holonomy = 1e-2;
    cfg.step = 0.05;
    let p = write_config(dir.path(), &cfg);
    let (code, v) = json(&["--config", &p, "holonomy", "--word", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["step"], 0.05);
    let path = dir.path().join("run.json");
    let p = p.as_str();

    std::fs::write(&path, r#"{"tolerances": {"holonomy": -1}}"#).unwrap();
    assert_eq!(run(&["--config", p, "bgg", "--n", "2", "--weight", "0,0"]).0, 2);
    std::fs::write(&path, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(run(&["--config", p, "bgg", "--n", "2", "--weight", "0,0"]).0, 2);
}

#[test]
fn config_cache_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache").join("groups.json");
    let cfg = RunConfig { cache: Some(cache.clone()), ..RunConfig::default() };
    let p = write_config(dir.path(), &cfg);
    let (code, _, err) = run(&["--config", &p, "cohomology", "--rep", "trivial"]);
    assert_eq!(code, 0, "{err}");
    assert!(cache.exists());
}

#[test]
fn holonomy_of_a_generator() {
    let (code, v) = json(&["holonomy", "--word", "2", "--step", "0.01"]);
    assert_eq!(code, 0);
    assert!(v["max_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn flatness_and_metric() {
    assert_eq!(run(&["geometry", "check-flatness", "--halvings", "2", "--side", "0.5"]).0, 0);
    assert_eq!(run(&["geometry", "check-metric"]).0, 0);
}

#[test]
fn vz_lists_summands() {
    let (code, v) = json(&["vz", "--n", "3", "--family", "symk", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["source_dim"], 10);
}

#[test]
fn crosscheck_suites() {
    for suite in ["kostant-vs-bgg", "euler-vs-fox"] {
        let (code, _, err) = run(&["crosscheck", "--suite", suite]);
        assert_eq!(code, 0, "{suite}: {err}");
    }
}
