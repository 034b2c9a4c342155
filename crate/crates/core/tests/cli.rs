use std::process::{Command, Output};

use serde_json::Value;

fn discspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discspace"))
        .args(args)
        .env_remove("DISCSPACE_CONFIG")
        .output()
        .unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

const BESOV_WITNESS: &str = r#"{"type":"lacunary","family":"besov_witness","params":{"p":6}}"#;

#[test]
fn decide_open_point() {
    let out = discspace(&["decide", "--from", "qs:0.5", "--to", "dt:4,2.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(r#"{"verdict_class":"open","#), "{text}");
    let v = json(text.as_bytes());
    assert_eq!(v["normalized"]["Y"], "dt:4,2.2");
    assert!(v["region"].as_str().unwrap().contains("Y.p >= 2"));
}

#[test]
fn decide_with_symbol() {
    let out = discspace(&[
        "decide",
        "--from",
        "bmoa",
        "--to",
        "hardy:1",
        "--symbol",
        r#"{"type":"poly","coeffs":[1,2,3]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["verdict_class"], "order1type0");
    assert_eq!(v["answer"], "yes");
    let out = discspace(&["decide", "--from", "bmoa", "--to", "dt:1,0", "--symbol", r#"{"type":"exp"}"#]);
    let v = json(&out.stdout);
    assert_eq!((v["verdict_class"].as_str(), v["answer"].as_str()), (Some("constant"), Some("no")));
}

#[test]
fn normalization_route_is_reported() {
    let v = json(&discspace(&["decide", "--from", "qs:1", "--to", "besov:2"]).stdout);
    assert_eq!(v["normalized"]["X"], "bmoa");
    assert_eq!(v["normalized"]["Y"], "dirichlet");
    assert_eq!(v["route"].as_array().unwrap().len(), 2);
}

#[test]
fn member_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    std::fs::write(&path, BESOV_WITNESS).unwrap();
    let arg = format!("@{}", path.display());
    let out = discspace(&["member", "--space", "besov:6", "--function", &arg]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!((v["verdict"].as_str(), v["method"].as_str()), (Some("in"), Some("criterion")));
    let v = json(&discspace(&["member", "--space", "qs:0.2", "--function", &arg]).stdout);
    assert_eq!(v["verdict"], "out");
    let out = discspace(&["member", "--space", "besov:6", "--function", "@/nonexistent/witness.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn member_without_criterion_uses_quadrature() {
    let out = discspace(&[
        "member",
        "--space",
        "hardy:2",
        "--function",
        r#"{"type":"power","coeffs":[1,[0,1]]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!((v["verdict"].as_str(), v["method"].as_str()), (Some("in"), Some("quadrature")));
}

#[test]
fn output_is_deterministic() {
    let args = ["member", "--space", "dt:3,1.5", "--function", BESOV_WITNESS];
    let a = discspace(&args);
    let b = discspace(&args);
    assert_eq!(a.stdout, b.stdout);
    // floats carry 17 significant digits
    assert!(String::from_utf8(a.stdout).unwrap().contains("1.0000000000000000e0"));
}

#[test]
fn norm_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("ladder.txt");
    let out = discspace(&[
        "norm",
        "--space",
        "bergman:2,0",
        "--function",
        r#"{"type":"binomial","beta":0.5}"#,
        "--plot-out",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["verdict"], "in");
    let rows: Vec<Vec<f64>> = std::fs::read_to_string(&plot)
        .unwrap()
        .lines()
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), v["report"]["ladder"].as_array().unwrap().len());
    assert!(rows.iter().all(|r| r.len() == 2 && r[0] < 1.0));
}

#[test]
fn inconclusive_exits_three() {
    let out = discspace(&[
        "--set",
        "ladder_depth=6",
        "norm",
        "--space",
        "hardy:2",
        "--function",
        r#"{"type":"binomial","beta":0.5}"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out.stdout)["verdict"], "unknown");
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("discspace.conf");
    std::fs::write(&cfg, "# fewer terms\nk_max = 20\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args: Vec<&str> = extra.to_vec();
        args.extend(["member", "--space", "besov:6", "--function", BESOV_WITNESS]);
        Command::new(env!("CARGO_BIN_EXE_discspace"))
            .args(&args)
            .env("DISCSPACE_CONFIG", &cfg)
            .output()
            .unwrap()
    };
    let rungs = |o: &Output| json(&o.stdout)["detail"]["report"]["ladder"].as_array().unwrap().len();
    assert_eq!(rungs(&run(&[])), 20);
    assert_eq!(rungs(&run(&["--set", "k_max=30"])), 30);
    assert_eq!(run(&["--set", "k_max"]).status.code(), Some(2));
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"], "parameter");
}

#[test]
fn order_type_and_include() {
    let v = json(&discspace(&["order-type", "--symbol", r#"{"type":"exp_sq"}"#]).stdout);
    assert_eq!(v["class"], "order2finite");
    assert!((v["order"]["value"].as_f64().unwrap() - 2.0).abs() < 0.1);
    let v = json(&discspace(&["order-type", "--symbol", r#"{"type":"poly","coeffs":[1,0,0,0,0,1]}"#]).stdout);
    assert_eq!(v["class"], "order1type0");
    let v = json(&discspace(&["include", "--from", "besov:1", "--to", "bloch"]).stdout);
    assert_eq!(v["verdict"], "in");
    assert!(!v["route"].as_array().unwrap().is_empty());
    let v = json(&discspace(&["include", "--from", "bloch", "--to", "bmoa"]).stdout);
    assert_eq!(v["verdict"], "out");
}

#[test]
fn witness_descriptor_round_trips() {
    let out = discspace(&["witness", "besov-not-qs", "--p", "6", "--s", "0.2", "--len", "60", "--no-verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert!(v.get("report").is_none());
    let f = v["function"].to_string();
    let m = json(&discspace(&["member", "--space", "qs:0.2", "--function", &f]).stdout);
    assert_eq!(m["verdict"], "out");
    assert_eq!(m["detail"]["report"]["ladder"].as_array().unwrap().len(), 60);
}

#[test]
fn witness_with_verification() {
    let out = discspace(&["witness", "unbounded-dt", "--p", "3", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out.stdout);
    assert_eq!(v["function"]["type"], "binomial");
    assert_eq!(v["report"]["result"], "PASS");
}

#[test]
fn refusals_and_errors() {
    for (args, kind) in [
        (vec!["witness", "girela"], "not-constructible"),
        (vec!["witness", "nowak"], "not-constructible"),
        (vec!["witness", "dt-not-qs", "--p", "3"], "parameter"),
        (vec!["decide", "--from", "qs:-1", "--to", "bloch"], "parameter"),
        (vec!["decide", "--from", "hardy:2", "--to", "hardy:3"], "unsupported-pair"),
        (vec!["decide", "--from", "lipschitz", "--to", "bloch"], "unsupported-space"),
        (
            vec!["member", "--space", "bloch", "--function", r#"{"type":"spline"}"#],
            "descriptor",
        ),
    ] {
        let out = discspace(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert_eq!(json(&out.stderr)["error"], kind, "{args:?}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(discspace(&[]).status.code(), Some(64));
    assert_eq!(discspace(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(discspace(&["decide", "--from", "bmoa"]).status.code(), Some(64));
    assert_eq!(discspace(&["verify", "--suite", "other"]).status.code(), Some(64));
    let help = discspace(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8(help.stdout).unwrap().contains("order-type"));
}

#[test]
fn verify_subset() {
    let out = discspace(&["verify", "--suite", "paper", "--criteria", "6,7,8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["pass"], true);
    let ids: Vec<u64> = v["results"].as_array().unwrap().iter().map(|r| r["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [6, 7, 8]);
    assert_eq!(discspace(&["verify", "--criteria", "11"]).status.code(), Some(2));
}
