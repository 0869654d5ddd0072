use std::path::PathBuf;
use std::process::{Command, Output};

const FIXTURES: [&str; 5] = ["randclosure-s2", "randclosure-s3", "localbass-l1", "cusp", "wiegand-e1"];

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(format!("{name}.json")).display().to_string()
}

fn puremon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puremon")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn outputs_match_checked_in_expectations() {
    for name in FIXTURES {
        for cmd in ["supports", "generators", "classify"] {
            let out = puremon(&[cmd, "--system", &fixture(name)]);
            assert!(out.status.success(), "{cmd} {name}");
            let path = fixtures().join("expected").join(format!("{name}.{cmd}.json"));
            let want = std::fs::read_to_string(&path).unwrap();
            assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{cmd} {name}");
        }
    }
}

#[test]
fn every_fixture_passes_the_oracle() {
    for name in FIXTURES {
        let out = puremon(&["oracle", "--system", &fixture(name), "--bound", "3"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(stdout(&out)["mismatches"], 0);
        for kind in ["supports", "generators"] {
            let expected = fixtures().join("expected").join(format!("{name}.{kind}.json"));
            let out = puremon(&[
                "oracle", "--system", &fixture(name), "--bound", "3", "--expected", expected.to_str().unwrap(),
            ]);
            assert!(out.status.success(), "{name} against {kind}");
        }
    }
}

#[test]
fn oracle_rejects_a_wrong_answer() {
    let dir = std::env::temp_dir().join(format!("puremon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // Drops the infinite generators of the randclosure monoid.
    let wrong = dir.join("wrong.json");
    std::fs::write(&wrong, r#"{"s":3,"generators":[[1,0,0],[0,1,1]]}"#).unwrap();
    let out = puremon(&[
        "oracle", "--system", &fixture("randclosure-s2"), "--expected", wrong.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out)["mismatches"].as_u64().unwrap() > 0);
}

#[test]
fn membership_and_classification_of_randclosure() {
    let out = puremon(&["member", "--system", &fixture("randclosure-s2"), "--vector", "inf,1,0"]);
    assert_eq!(stdout(&out), serde_json::json!({ "member": true }));
    let out = puremon(&["member", "--system", &fixture("randclosure-s2"), "--vector", "0,1,0"]);
    assert_eq!(stdout(&out), serde_json::json!({ "member": false }));
    let report = stdout(&puremon(&["classify", "--system", &fixture("randclosure-s2")]));
    assert_eq!(report["all_fg_sums"], false);
    assert_eq!(report["witnesses"], serde_json::json!([["inf", 1, 0]]));
}

#[test]
fn constructions_and_rank_commands() {
    let sys = fixture("randclosure-s2");
    for cmd in ["aplusinfa", "bmin", "bmax"] {
        let out = puremon(&[cmd, "--system", &sys]);
        assert!(out.status.success(), "{cmd}");
        assert_eq!(stdout(&out)["s"], 3);
    }
    let out = puremon(&["wiegand", "--matrix", "[[1,-1]]"]);
    let v = stdout(&out);
    assert_eq!(v["rank_matrix"]["a"], serde_json::json!([[4, 3], [3, 4]]));
    assert_eq!(v["assumptions"].as_array().unwrap().len(), 2);

    let dir = std::env::temp_dir().join(format!("puremon-rank-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rank = dir.join("rank.json");
    std::fs::write(&rank, r#"{"s":3,"primes":2,"a":[[1,1,0],[1,0,1]]}"#).unwrap();
    let rank = rank.to_str().unwrap();
    let v = stdout(&puremon(&["lo-system", "--rank", rank]));
    assert_eq!(v["system"]["equations"]["F"], serde_json::json!([[1, 1, 0]]));
    let v = stdout(&puremon(&["lo-extended", "--rank", rank, "--vector", "inf,1,0"]));
    assert_eq!(v["extended"], true);
}

#[test]
fn exit_codes_and_error_payloads() {
    let out = puremon(&["member", "--system", &fixture("cusp"), "--vector", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out)["error"]["code"], "dimension_mismatch");

    let out = puremon(&["member", "--system", &fixture("cusp"), "--vector", "1,x,0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = puremon(&["wiegand", "--matrix", "[[1,1]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out)["error"]["code"], "no_order_unit");

    let out = puremon(&["oracle", "--system", &fixture("randclosure-s3"), "--bound", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out)["error"]["code"], "resource_cap");

    let out = puremon(&["supports", "--system", "/nonexistent/system.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = puremon(&["generators", "--system", &fixture("localbass-l1")]);
    let b = puremon(&["generators", "--system", &fixture("localbass-l1")]);
    assert_eq!(a.stdout, b.stdout);
}
