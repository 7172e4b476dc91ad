use std::process::{Command, Output};

use serde_json::Value;

fn tracecode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracecode"))
        .args(args)
        .env_remove("TRACECODE_MAX_FIELD")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn nine_dimension_example_reproduces() {
    let out = tracecode(&[
        "code",
        "run",
        "--p",
        "3",
        "--m",
        "8",
        "--modulus",
        "2,2,2,0,1,2,0,0,1",
        "--a",
        "exp:820",
        "--tasks",
        "enumerate,predict",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["d"], 468);
    assert_eq!(v["n"], 729);
    assert_eq!(v["predicted_match"], true);
    assert_eq!(v["a"]["exponent"], 820);
    assert_eq!(v["cwe"].as_array().unwrap().len(), 8);
    let wd = v["weight_distribution"].as_array().unwrap();
    let weights: Vec<u64> = wd.iter().map(|r| r["weight"].as_u64().unwrap()).collect();
    assert_eq!(weights, vec![0, 468, 477, 486, 495, 504]);
}

#[test]
fn cubic_field_is_mds() {
    let out = tracecode(&[
        "code",
        "run",
        "--p",
        "3",
        "--m",
        "3",
        "--a",
        "exp:1",
        "--tasks",
        "enumerate,predict",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()),
        (Some(3), Some(3), Some(1))
    );
    assert_eq!(v["mds"], true);
}

#[test]
fn lemma_suite_passes() {
    let out = tracecode(&["verify", "lemmas", "--p", "3", "--m", "4", "--a", "exp:7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["lemmas"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn csv_has_weight_rows() {
    let out = tracecode(&[
        "code", "run", "--p", "3", "--m", "5", "--a", "exp:2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "weight,count\n0,1\n15,60\n18,116\n21,66\n"
    );
}

#[test]
fn mismatch_exits_one_with_both_values() {
    let out = tracecode(&["verify", "dual", "--p", "3", "--m", "5", "--a", "exp:2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    let mm = &v["mismatches"][0];
    assert!(mm["expected"].as_str().unwrap().contains("3024"));
    assert!(mm["actual"].as_str().unwrap().contains("96"));
}

#[test]
fn errors_exit_two() {
    let out = tracecode(&[
        "code",
        "run",
        "--p",
        "3",
        "--m",
        "3",
        "--modulus",
        "1,0,0,1",
        "--a",
        "exp:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = tracecode(&["code", "run", "--p", "3", "--m", "3", "--a", "coeffs:2,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime field"));
}

#[test]
fn size_guard_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tracecode"))
        .args(["code", "run", "--p", "3", "--m", "6", "--a", "exp:91"])
        .env("TRACECODE_MAX_FIELD", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn sweep_requires_seed_and_is_deterministic() {
    let args = [
        "code", "sweep", "--ps", "3,5", "--ms", "3,4,5", "--count", "5",
    ];
    assert_eq!(tracecode(&args).status.code(), Some(2));
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "11"]);
    let a = tracecode(&seeded);
    let b = tracecode(&seeded);
    assert_eq!(a.status.code(), Some(0));
    let (va, vb) = (json(&a), json(&b));
    assert_eq!(va["cells"].as_array().unwrap().len(), 30);
    let strip = |v: &Value| {
        v["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["config"].clone(), c["ok"].clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&va), strip(&vb));
}

#[test]
fn empty_sweep_succeeds() {
    let out = tracecode(&["code", "sweep"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cells"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_isolates_bad_cell() {
    let dir = std::env::temp_dir().join(format!("tracecode-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let grid = dir.join("grid.json");
    let cell = |modulus: &str| {
        format!(
            r#"{{"p":3,"m":3,"modulus":{modulus},"a":{{"exponent":1}},"tasks":["enumerate","predict"],
            "bounds":{{"max_field":59049,"max_triple_n":1000,"max_minimality":2187,"max_omega":10000}},"seed":0,"s":3}}"#
        )
    };
    std::fs::write(&grid, format!("[{},{}]", cell("[1,0,0,1]"), cell("null"))).unwrap();
    let out = tracecode(&["code", "sweep", "--grid", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["cells"][0]["error"].is_string());
    assert_eq!(v["cells"][1]["ok"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn field_info_and_apps() {
    let out = tracecode(&[
        "field",
        "info",
        "--p",
        "3",
        "--m",
        "8",
        "--modulus",
        "2,2,2,0,1,2,0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["generator_primitive"], true);

    let out = tracecode(&[
        "apps",
        "minimality",
        "--p",
        "3",
        "--m",
        "6",
        "--modulus",
        "2,2,1,0,2,0,1",
        "--a",
        "exp:91",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["minimality"]["non_minimal_count"], 0);

    let out = tracecode(&["apps", "sumset", "--p", "3", "--m", "5", "--a", "exp:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sumset"]["report"]["omega_size"], 54);
    assert_eq!(v["sumset"]["report"]["is_sum_set"], true);

    let out = tracecode(&["charsums", "--p", "3", "--m", "3", "--a", "exp:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["i2"], 3);
}

#[test]
fn codeword_dump_writes_every_word() {
    let dir = std::env::temp_dir().join(format!("tracecode-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("words.txt");
    let out = tracecode(&[
        "code",
        "run",
        "--p",
        "3",
        "--m",
        "4",
        "--a",
        "exp:7",
        "--dump-codewords",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 81);
    std::fs::remove_dir_all(&dir).unwrap();
}
