use std::fs;
use std::path::{Path, PathBuf};

use orbindex::cli::run_in;
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn ws(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(format!("{name}.json")), text).unwrap();
    }
    dir
}

#[test]
fn integrate_closed_interval() {
    let (code, out, _) = run_in(&fixtures(), &["integrate", "interval", "interval_one"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\n");
    let (_, out, _) = run_in(&fixtures(), &["integrate", "interval", "interval_open"]);
    assert_eq!(out, "-1\n");
}

#[test]
fn checked_in_fixtures_match_the_generator() {
    for (name, doc) in orbindex::fixtures::documents() {
        let on_disk = fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
        assert_eq!(on_disk, orbindex::io::to_text(&doc), "{name}");
    }
}

#[test]
fn info_lists_every_object() {
    let (code, out, _) = run_in(&fixtures(), &["info"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), orbindex::fixtures::documents().len());
    let (code, out, _) = run_in(&fixtures(), &["info", "octahedron_sphere"]);
    assert_eq!(code, 0);
    assert!(out.contains("χ = 2"), "{out}");
}

#[test]
fn rationals_render_as_fractions() {
    let (code, out, _) = run_in(&fixtures(), &["iota", "--action", "point_z2"]);
    assert_eq!(code, 0);
    assert!(out.contains("1/2"), "{out}");
    assert!(!out.contains('.'), "{out}");
}

#[test]
fn morse_eval_matches_integral_for_every_order_kind() {
    let f = "triangle_one";
    for extra in [
        vec![],
        vec!["--weights", "0:1,1:5/2,2:-3"],
        vec!["--chart", "triangle_chart", "--covector", "1,3"],
    ] {
        let mut args = vec!["morse-eval", f];
        args.extend(extra);
        let (code, out, err) = run_in(&fixtures(), &args);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, "1\n");
    }
}

#[test]
fn cc_then_inverse_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("t.json");
    let (code, _, err) = run_in(
        &fixtures(),
        &[
            "cc",
            "triangle_open",
            "--chart",
            "triangle_chart",
            "--out",
            out_path.to_str().unwrap(),
        ],
    );
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let table = &report["result"];
    let read = |name: &str| fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
    let table = table.to_string();
    let work = ws(&[
        ("triangle", &read("triangle")),
        ("triangle_chart", &read("triangle_chart")),
        ("open_cc", &table),
    ]);
    let (code, out, err) = run_in(work.path(), &["cc-inverse", "open_cc"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "1 support simplices\n  [0,1,2] 1\n");
    let (_, out, _) = run_in(work.path(), &["intersect", "open_cc"]);
    assert_eq!(out, "1\n");
}

#[test]
fn intersect_rejects_wall_covectors() {
    let (code, _, err) = run_in(&fixtures(), &["intersect", "triangle_one_cc", "--covector", "0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("generic"), "{err}");
}

#[test]
fn mv_split_by_cover_and_by_sets() {
    let (code, out, _) = run_in(&fixtures(), &["mv-split", "circle_five", "--cover", "circle_arcs"]);
    assert_eq!(code, 0);
    assert!(out.contains("∫f = 0"), "{out}");
    let (code, _, err) = run_in(&fixtures(), &["mv-split", "circle_five", "--u", "disk_center_star"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn pushforward_conventions_differ_at_fixed_points() {
    let (_, norm, _) = run_in(&fixtures(), &["pushforward", "path_one", "--action", "swap"]);
    let (_, fiber, _) = run_in(
        &fixtures(),
        &["pushforward", "path_one", "--action", "swap", "--fiber-sum"],
    );
    assert!(norm.contains("  [0] 2"), "{norm}");
    assert!(fiber.contains("  [1] 1"), "{fiber}");
    assert!(norm.contains("  [1] 2"), "{norm}");
}

#[test]
fn quotient_regularizes_d4() {
    let (code, out, _) = run_in(&fixtures(), &["quotient", "--action", "square_d4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("subdivisions: 1\ngroup order: 8\n"), "{out}");
}

#[test]
fn verify_suites_pass_on_fixtures() {
    let cases: &[&[&str]] = &[
        &[
            "verify",
            "index",
            "--chart",
            "square_chart",
            "--trials",
            "20",
            "--seed",
            "7",
        ],
        &[
            "verify",
            "orbifold-index",
            "--complex",
            "path",
            "--action",
            "swap",
            "--trials",
            "10",
            "--seed",
            "7",
        ],
        &[
            "verify",
            "cosheaf",
            "--cover",
            "disk_center",
            "--chart",
            "hexagon_disk_chart",
            "--trials",
            "10",
        ],
        &["verify", "norm", "--action", "square_d4", "--trials", "10"],
        &["verify", "chambers", "--chart", "tetrahedron_chart", "--convex"],
    ];
    for args in cases {
        let (code, out, err) = run_in(&fixtures(), args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.ends_with("PASS\n"), "{out}");
    }
}

#[test]
fn orbifold_index_report_carries_triples() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let args = [
        "verify",
        "orbifold-index",
        "--complex",
        "path",
        "--action",
        "swap",
        "--trials",
        "6",
        "--out",
    ];
    let mut full: Vec<&str> = args.to_vec();
    full.push(out_path.to_str().unwrap());
    assert_eq!(run_in(&fixtures(), &full).0, 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    let triples = report["result"]["triples"].as_array().unwrap();
    assert_eq!(triples.len(), 6);
    for t in triples {
        let t = t.as_array().unwrap();
        assert_eq!(t.len(), 3);
        assert!(t[0] == t[1] && t[1] == t[2]);
    }
}

#[test]
fn verify_output_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let p = dir.path().join(name);
        let args = [
            "verify",
            "index",
            "--chart",
            "annulus_chart",
            "--trials",
            "8",
            "--seed",
            seed,
            "--out",
            p.to_str().unwrap(),
        ];
        let (code, out, _) = run_in(&fixtures(), &args);
        assert_eq!(code, 0);
        (out, fs::read(p).unwrap())
    };
    assert_eq!(run("11", "a.json"), run("11", "b.json"));
    assert_ne!(run("11", "a.json").1, run("12", "c.json").1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run_in(&fixtures(), &["frobnicate"]).0, 2);
    assert_eq!(run_in(&fixtures(), &["integrate", "interval"]).0, 2);
    let (code, _, err) = run_in(&fixtures(), &["integrate", "interval", "no_such_function"]);
    assert_eq!(code, 2);
    assert!(err.contains("no_such_function"), "{err}");
    let (code, out, _) = run_in(&fixtures(), &["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn load_errors_name_the_problem() {
    let dir = ws(&[("K", r#"{"vertices":[0,1,2],"simplices":[[0,1],[0,2"#)]);
    let (code, _, err) = run_in(dir.path(), &["info"]);
    assert_eq!(code, 2);
    assert!(err.contains("K") && err.contains("line 1"), "{err}");

    let dir = ws(&[("K", r#"{"vertices":[0,1],"simplices":[[0,1,2]]}"#)]);
    let (code, _, err) = run_in(dir.path(), &["info"]);
    assert_eq!(code, 2);
    assert!(err.contains("[2]"), "{err}");

    let dir = ws(&[
        ("K", r#"{"vertices":[0,1,2],"simplices":[[0,1],[2]]}"#),
        ("g", r#"{"complex":"K","generators":[{"0":1,"1":2,"2":0}]}"#),
    ]);
    let (code, _, err) = run_in(dir.path(), &["info"]);
    assert_eq!(code, 2);
    assert!(err.contains("g") && err.contains("[1,2]"), "{err}");

    let dir = ws(&[("f", r#"{"complex":"missing","values":[]}"#)]);
    let (code, _, err) = run_in(dir.path(), &["info"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing"), "{err}");
}

#[test]
fn fixtures_command_writes_a_loadable_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("ws");
    let (code, _, _) = run_in(dir.path(), &["fixtures", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = run_in(&target, &["integrate", "triangle", "triangle_one"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
}
