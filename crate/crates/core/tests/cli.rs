use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sidon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidon")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn write_text(dir: &Path, name: &str, elems: impl IntoIterator<Item = i64>) -> PathBuf {
    let mut s = String::from("# ambient: integers\n");
    for x in elems {
        s.push_str(&format!("{x}\n"));
    }
    let p = dir.join(name);
    std::fs::write(&p, s).unwrap();
    p
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_text(dir.path(), "sidon.txt", [0, 1, 3, 7, 12, 20]);
    write_text(dir.path(), "ap.txt", 0..32);
    dir
}

#[test]
fn exit_codes() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(code(&sidon(d, &["verify", "--set", "sidon.txt", "--g", "1"])), 0);
    assert_eq!(code(&sidon(d, &["verify", "--set", "ap.txt", "--g", "1"])), 1);
    assert_eq!(code(&sidon(d, &["energy", "--set", "missing.txt", "--k", "2"])), 2);
    assert_eq!(code(&sidon(d, &["energy", "--set", "sidon.txt"])), 2);
    assert_eq!(code(&sidon(d, &["--cap", "3", "exact", "--set", "ap.txt", "--k", "1"])), 3);
    assert_eq!(code(&sidon(d, &["--help"])), 0);
}

#[test]
fn envelope_shape() {
    let dir = setup();
    let o = sidon(dir.path(), &["energy", "--set", "sidon.txt", "--k", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o.stdout);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["command"], "energy");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["params"]["k"], 2);
    assert_eq!(v["inputs"][0]["role"], "set");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    // {0,1,3,7,12,20} is Sidon: E_2 = 2n^2 - n.
    assert_eq!(v["result"]["value"], "66");
}

#[test]
fn json_and_text_inputs_agree() {
    let dir = setup();
    let d = dir.path();
    std::fs::write(d.join("sidon.json"), r#"{"ambient":{"kind":"integers"},"elements":[0,1,3,7,12,20]}"#).unwrap();
    let a = json(&sidon(d, &["energy", "--set", "sidon.txt", "--k", "3"]).stdout);
    let b = json(&sidon(d, &["energy", "--set", "sidon.json", "--k", "3"]).stdout);
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let dir = setup();
    let d = dir.path();
    for cmd in [&["extract", "--set", "ap.txt", "--k", "2"][..], &["pipeline", "--set", "ap.txt"][..]] {
        let run = |threads: &str| {
            let mut args = vec!["--threads", threads, "--seed", "7"];
            args.extend_from_slice(cmd);
            sidon(d, &args).stdout
        };
        let one = run("1");
        assert!(!one.is_empty());
        assert_eq!(one, run("4"), "{cmd:?}");
    }
}

#[test]
fn seed_is_derived_from_inputs() {
    let dir = setup();
    let d = dir.path();
    let a = json(&sidon(d, &["extract", "--set", "ap.txt", "--k", "2"]).stdout);
    let b = json(&sidon(d, &["extract", "--set", "ap.txt", "--k", "2"]).stdout);
    assert!(a["seed"].is_u64());
    assert_eq!(a["seed"], b["seed"]);
    let c = json(&sidon(d, &["extract", "--set", "sidon.txt", "--k", "2"]).stdout);
    assert_ne!(a["seed"], c["seed"]);
}

#[test]
fn out_writes_report_and_manifest() {
    let dir = setup();
    let d = dir.path();
    let o = sidon(d, &["--out", "report.json", "decompose", "--set", "ap.txt"]);
    assert_eq!(code(&o), 0);
    assert!(!o.stdout.starts_with(b"{"), "report went to stdout");
    let report = json(&std::fs::read(d.join("report.json")).unwrap());
    assert_eq!(report["command"], "decompose");
    let manifest = json(&std::fs::read(d.join("report.json.manifest.json")).unwrap());
    assert_eq!(manifest["command"], "decompose");
    assert_eq!(manifest["inputs"], report["inputs"]);
    assert_eq!(manifest["outputs"][0], "report.json");
    assert!(manifest["wall_time_ms"].is_u64());
}

#[test]
fn certificates_round_trip_through_verify_certificate() {
    let dir = setup();
    let d = dir.path();
    for cmd in ["decompose", "rigid", "pipeline"] {
        let out = format!("{cmd}.json");
        assert_eq!(code(&sidon(d, &["--out", &out, cmd, "--set", "ap.txt"])), 0, "{cmd}");
        let o = sidon(d, &["verify-certificate", "--set", "ap.txt", "--cert", &out]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o.stdout)["status"], "ok");
    }
}

#[test]
fn certificate_against_the_wrong_set_fails() {
    let dir = setup();
    let d = dir.path();
    write_text(d, "other.txt", (0..32).map(|x| 3 * x));
    assert_eq!(code(&sidon(d, &["--out", "cert.json", "rigid", "--set", "ap.txt"])), 0);
    let o = sidon(d, &["verify-certificate", "--set", "other.txt", "--cert", "cert.json"]);
    assert_ne!(code(&o), 0);
}

#[test]
fn construct_writes_the_set() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(code(&sidon(d, &["construct", "sidon", "--n", "50", "--set-out", "c.txt"])), 0);
    assert_eq!(code(&sidon(d, &["construct", "sidon", "--n", "50", "--set-out", "c.json"])), 0);
    let text = std::fs::read_to_string(d.join("c.txt")).unwrap();
    assert!(text.starts_with("# ambient: integers"));
    let j = json(&std::fs::read(d.join("c.json")).unwrap());
    let from_json: Vec<String> = j["elements"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let from_text: Vec<String> =
        text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).map(str::to_string).collect();
    assert_eq!(from_json, from_text);
    // The written set is accepted back and is Sidon.
    assert_eq!(code(&sidon(d, &["verify", "--set", "c.txt", "--g", "1"])), 0);
}
