use std::process::{Command, Output};

use hfslice::{torus_model, Complex};

fn hfslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfslice")).args(args).env_remove("HFSLICE_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = hfslice(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn complex_commands() {
    let c = json(&["complex", "build", "T(2,5)"]);
    assert_eq!(c["generators"].as_array().unwrap().len(), 5);
    assert_eq!(json(&["complex", "width", "D"])["width"], 3);
    let t = json(&["complex", "tensor", "T(2,3)", "m(T(2,3))"]);
    assert_eq!(t["generators"].as_array().unwrap().len(), 9);
    let slices = json(&["complex", "slices", "D"]);
    assert_eq!(slices["0"]["-2"], 4);
    let table = stdout(&hfslice(&["--format", "table", "complex", "show", "T(2,3)"]));
    assert!(table.contains("j\\i"));
}

#[test]
fn build_then_show_round_trips() {
    let dir = std::env::temp_dir().join(format!("hfslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("t7.json");
    let o = hfslice(&["complex", "build", "T(2,7)", "-o", f.to_str().unwrap()]);
    assert!(o.status.success());
    let shown = Complex::from_json(&stdout(&hfslice(&["complex", "show", f.to_str().unwrap()]))).unwrap();
    assert_eq!(shown, torus_model(3).with_label("T(2,7)").canonical_form());
    // relative -o paths land in the output directory from the environment
    let o = Command::new(env!("CARGO_BIN_EXE_hfslice"))
        .args(["lens", "5", "2", "-o", "lens.json"])
        .env("HFSLICE_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.join("lens.json").is_file());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reduce_cancels_a_pair() {
    let dir = std::env::temp_dir().join(format!("hfslice-pair-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("pair.json");
    std::fs::write(
        &f,
        r#"{"label":"pair","shift_tag":[],
            "generators":[{"id":"a","gr":1,"i":0,"j":0},{"id":"b","gr":0,"i":0,"j":0}],
            "differential":[{"from":"a","to":"b","upow":0}]}"#,
    )
    .unwrap();
    let r = json(&["complex", "reduce", f.to_str().unwrap()]);
    assert!(r["generators"].as_array().unwrap().is_empty());
    std::fs::write(&f, r#"{"label":"bad","generators":[{"id":"a","gr":0,"i":0,"j":0}],"differential":[{"from":"a","to":"a","upow":0}]}"#).unwrap();
    assert_eq!(hfslice(&["complex", "show", f.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn refilter_commands() {
    let r = json(&["refilter", "U", "4", "1", "--normalize"]);
    assert_eq!((r["generators"][0]["i"].as_i64(), r["generators"][0]["j"].as_i64()), (Some(0), Some(-1)));
    let t = stdout(&hfslice(&["--format", "table", "refilter", "m(2*D)", "8", "1", "--normalize", "--reduce"]));
    assert!(t.contains("delta 0"), "{t}");
    let o = hfslice(&["refilter", "U", "2", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--extend"));
    let o = hfslice(&["refilter", "T(2,7)", "4", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N >= 2g violated"));
    let e = json(&["refilter", "U", "2", "1", "--extend", "2"]);
    assert_eq!(e["generators"][0]["j"], -4);
}

#[test]
fn ddiff_and_vectors() {
    assert_eq!(json(&["ddiff", "4", "1"])["d_diff"], -2);
    assert_eq!(stdout(&hfslice(&["--format", "table", "ddiff", "4", "0"])).trim(), "0");
    assert_eq!(hfslice(&["ddiff", "4", "2"]).status.code(), Some(2));
    let v = json(&["dvector", "3", "--k", "1"]);
    assert_eq!(v["modulus"], 37);
    assert_eq!(v["entries"].as_array().unwrap().len(), 37);
    let l = json(&["lens", "2", "1"]);
    assert_eq!(l["d"], serde_json::json!(["1/4", "-1/4"]));
    assert_eq!(hfslice(&["lens", "4", "2"]).status.code(), Some(2));
}

#[test]
fn obstruct_commands() {
    let s = json(&["obstruct", "sieve", "--count", "3"]);
    assert_eq!(s["members"][0]["n"], 2);
    assert_eq!(s["members"][0]["value"], 17);
    assert_eq!(stdout(&hfslice(&["--format", "table", "obstruct", "roots", "65"])).trim(), "8 18 47 57");
    let r = json(&["obstruct", "choose-kn", "10"]);
    assert!(r["s_b"].as_array().unwrap().len() <= 4);
    assert!(r["k_n"].as_u64().unwrap() < 5);
    assert_eq!(hfslice(&["obstruct", "choose-kn", "9"]).status.code(), Some(2));
    let m = json(&["obstruct", "metabolizers", "9", "--brute"]);
    assert!(!m.as_array().unwrap().is_empty());
    assert_eq!(hfslice(&["obstruct", "metabolizers", "9"]).status.code(), Some(2));
    assert_eq!(hfslice(&["obstruct", "bogus"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = stdout(&hfslice(&["--jobs", "1", "obstruct", "table", "--max-n", "12"]));
    let b = stdout(&hfslice(&["--jobs", "4", "obstruct", "table", "--max-n", "12"]));
    assert_eq!(a, b);
}
