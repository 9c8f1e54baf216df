use std::path::PathBuf;
use std::process::Command;

use clusterkit::format::{load_map_file, load_seed_file, load_triangulation_file, parse_seed};
use clusterkit::morphism::Counterexample;
use clusterkit::{LaurentPoly, VarId};
use clusterkit_cli::{run, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("clusterkit").chain(args.iter().copied()))
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let out = cli(&full);
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out));
    (out.code, v)
}

fn map_args<'a>(src: &'a str, dst: &'a str, map: &'a str) -> Vec<&'a str> {
    vec!["--src", src, "--dst", dst, "--map", map]
}

#[test]
fn example_map_is_a_morphism() {
    let (src, dst, map) = (fixture("example.seed"), fixture("a2.seed"), fixture("example.map"));
    let mut args = vec!["check-morphism"];
    args.extend(map_args(&src, &dst, &map));
    args.extend(["--depth", "4"]);
    let out = cli(&args);
    assert_eq!(out.code, 0, "{out:?}");
    assert!(out.stdout.contains("cm3: verified to depth 4"));
}

#[test]
fn ideal_fixture_has_witness_y1() {
    let (src, dst, map) = (fixture("ideal.seed"), fixture("a2.seed"), fixture("ideal.map"));
    let mut args = vec!["check-ideal"];
    args.extend(map_args(&src, &dst, &map));
    let (code, v) = structured(&args);
    assert_eq!(code, 1);
    assert_eq!(v["witness"]["image"], "y1");
    assert_eq!(v["image_seed_size"], 0);
}

#[test]
fn path_quiver_positivity() {
    let out = cli(&[
        "positivity",
        "--oracle",
        "path-quiver",
        "--sequence",
        "x0,x1",
        "--target",
        "x0",
    ]);
    assert_eq!(out.code, 0, "{out:?}");
    assert!(out.stdout.contains("positive: true"));
}

#[test]
fn composite_counterexample_replays() {
    let (src, dst, map) = (fixture("comp_src.seed"), fixture("a2.seed"), fixture("comp.map"));
    let mut args = vec!["check-morphism"];
    args.extend(map_args(&src, &dst, &map));
    args.extend(["--depth", "1"]);
    let (code, v) = structured(&args);
    assert_eq!(code, 1);
    let c = &v["cm3"]["counterexample"];
    let poly = |x: &Value| x.as_str().unwrap().parse::<LaurentPoly>().unwrap();
    let witness = Counterexample {
        sequence: c["sequence"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| VarId::from(x.as_str().unwrap()))
            .collect(),
        variable: VarId::from(c["variable"].as_str().unwrap()),
        lhs: poly(&c["lhs"]),
        rhs: poly(&c["rhs"]),
    };
    assert_eq!(witness.lhs, "2".parse().unwrap());
    assert_eq!(witness.rhs, "y1^-1 + y1^-1*y2".parse().unwrap());
    let s = load_seed_file(src.as_ref()).unwrap();
    let t = load_seed_file(dst.as_ref()).unwrap();
    let m = load_map_file(map.as_ref(), &s, &t).unwrap();
    assert!(witness.replays(&m));
}

#[test]
fn enumerate_example_census() {
    let (code, v) = structured(&["enumerate", "--seed", &fixture("example.seed"), "--depth", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 6);
    let values: Vec<LaurentPoly> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().parse().unwrap())
        .collect();
    assert!(values.contains(&"x1*x2^-1*x3 + x2^-1".parse().unwrap()));
}

#[test]
fn mutate_round_trips_through_the_seed_format() {
    let (code, v) = structured(&["mutate", "--seed", &fixture("a2.seed"), "--sequence", "y1"]);
    assert_eq!(code, 0);
    let seed = parse_seed(&v["seed"].to_string()).unwrap();
    assert_eq!(seed.len(), 2);
    let text = cli(&["mutate", "--seed", &fixture("a2.seed"), "--sequence", "y1"]).stdout;
    let doc = &text[text.find('{').unwrap()..];
    assert_eq!(parse_seed(doc).unwrap(), seed);
}

#[test]
fn mutate_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("clusterkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.seed");
    let p = path.display().to_string();
    let out = cli(&[
        "mutate",
        "--seed",
        &fixture("example.seed"),
        "--sequence",
        "x2",
        "--out",
        &p,
    ]);
    assert_eq!(out.code, 0, "{out:?}");
    let s = load_seed_file(&path).unwrap();
    assert!(!s.is_initial());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coefficient_is_not_mutable() {
    let out = cli(&["mutate", "--seed", &fixture("example.seed"), "--sequence", "x1"]);
    assert_eq!(out.code, 3, "{out:?}");
}

#[test]
fn similarity_verdicts() {
    let a2 = fixture("a2.seed");
    let (code, v) = structured(&["similar", "--seed", &a2, "--seed", &a2]);
    assert_eq!(code, 0);
    assert_eq!(v["similar"], true);
    let out = cli(&["similar", "--seed", &a2, "--seed", &fixture("path3.seed")]);
    assert_eq!(out.code, 1);
    let out = cli(&["similar", "--seed", &a2]);
    assert_eq!(out.code, 3);
}

#[test]
fn components_and_coproduct() {
    let (code, v) = structured(&[
        "coproduct",
        "--seed",
        &fixture("a2.seed"),
        "--seed",
        &fixture("example.seed"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 5);
    let (code, v) = structured(&["components", "--seed", &fixture("example.seed")]);
    assert_eq!(code, 0);
    assert_eq!(v["connected"].as_array().unwrap().len(), 1);
}

#[test]
fn image_seed_of_example() {
    let (src, dst, map) = (fixture("example.seed"), fixture("a2.seed"), fixture("example.map"));
    let mut args = vec!["image-seed"];
    args.extend(map_args(&src, &dst, &map));
    let (code, v) = structured(&args);
    assert_eq!(code, 0);
    assert_eq!(v["exchangeable"], serde_json::json!(["y2"]));
}

#[test]
fn triangulation_commands() {
    let hex = fixture("hexagon.tri");
    assert_eq!(cli(&["validate-tri", "--tri", &hex]).code, 0);
    assert_eq!(cli(&["validate-tri", "--tri", &fixture("crossing.tri")]).code, 1);

    let (code, v) = structured(&["flip", "--tri", &hex, "--arc", "a(0;1/2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["added"], serde_json::json!(["a(1/3;2/3)"]));
    assert_eq!(cli(&["flip", "--tri", &hex, "--arc", "0,1/6"]).code, 1);
    assert_eq!(cli(&["flip", "--tri", &hex, "--arc", "1/6,1/2"]).code, 3);

    let (code, v) = structured(&["tri-seed", "--tri", &hex]);
    assert_eq!(code, 0);
    assert_eq!(v["exchangeable"], 3);

    let sf = fixture("split_fountain.tri");
    let (code, v) = structured(&["limit-arcs", "--tri", &sf]);
    assert_eq!(code, 0);
    assert_eq!(v["limit_arcs"], serde_json::json!(["a(0;1/4)", "a(0;3/4)"]));
    assert_eq!(v["components"], 3);
    assert!(load_triangulation_file(sf.as_ref()).is_ok());
}

#[test]
fn filtration_exports_stages() {
    let dir = std::env::temp_dir().join(format!("clusterkit-fil-{}", std::process::id()));
    let d = dir.display().to_string();
    let (code, v) = structured(&["filtration", "--oracle", "path-quiver", "--steps", "3", "--out-dir", &d]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["written"].as_array().unwrap().len(), 3);
    let last = load_seed_file(&dir.join("stage-2.seed")).unwrap();
    assert_eq!(last.len(), v["stages"][2]["size"].as_u64().unwrap() as usize);
    std::fs::remove_dir_all(&dir).unwrap();

    let (code, _) = structured(&[
        "filtration",
        "--oracle",
        "finite",
        "--seed",
        &fixture("example.seed"),
        "--steps",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(cli(&["filtration", "--oracle", "finite"]).code, 3);
}

#[test]
fn stable_mutation_on_path_quiver() {
    let (code, v) = structured(&[
        "stable-mutate",
        "--oracle",
        "path-quiver",
        "--sequence",
        "x0",
        "--target",
        "x0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["value"].as_str().unwrap().parse::<LaurentPoly>().unwrap(),
        "x0^-1*x1 + xm1*x0^-1".parse().unwrap()
    );
    assert_eq!(v["stage"], 1);
    assert_eq!(
        cli(&["stable-mutate", "--oracle", "path-quiver", "--target", "nope"]).code,
        3
    );
}

#[test]
fn positivity_on_seed_files() {
    assert_eq!(
        cli(&["positivity", "--seed", &fixture("example.seed"), "--depth", "5"]).code,
        0
    );
    assert_eq!(
        cli(&["positivity", "--seed", &fixture("path3.seed"), "--sequence", "x1,x2,x3"]).code,
        0
    );
}

#[test]
fn budgets_exhaust_to_exit_2() {
    let out = cli(&[
        "enumerate",
        "--seed",
        &fixture("path3.seed"),
        "--depth",
        "6",
        "--nodes",
        "3",
    ]);
    assert_eq!(out.code, 2, "{out:?}");
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(cli(&["mutate", "--seed", &fixture("a2.seed"), "--bogus"]).code, 3);
    assert_eq!(cli(&["frobnicate"]).code, 3);
    assert_eq!(cli(&["enumerate", "--seed", &fixture("bad_diagonal.seed")]).code, 3);
    assert_eq!(cli(&["enumerate", "--seed", "/nonexistent/x.seed"]).code, 3);
    assert_eq!(
        cli(&["enumerate", "--seed", &fixture("a2.seed"), "--jobs", "0"]).code,
        3
    );
    let (code, v) = structured(&["enumerate", "--seed", &fixture("bad_diagonal.seed")]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn reports_are_deterministic() {
    let (src, dst, map) = (fixture("example.seed"), fixture("a2.seed"), fixture("example.map"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--seed", &src, "--depth", "6"],
        vec!["check-morphism", "--src", &src, "--dst", &dst, "--map", &map],
        vec!["filtration", "--oracle", "split-fountain", "--steps", "4"],
    ];
    for args in &runs {
        let a = cli(args);
        let mut with_jobs = args.to_vec();
        with_jobs.extend(["--jobs", "3"]);
        let b = cli(&with_jobs);
        assert_eq!(a, cli(args));
        assert_eq!(a, b);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_clusterkit");
    let status = Command::new(bin)
        .args([
            "check-ideal",
            "--src",
            &fixture("ideal.seed"),
            "--dst",
            &fixture("a2.seed"),
            "--map",
            &fixture("ideal.map"),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stdout).contains("image: y1"));
    let status = Command::new(bin).arg("--unknown").output().unwrap();
    assert_eq!(status.status.code(), Some(3));
}
