use std::fs;

use godeaux::cli::run;
use serde_json::Value;

fn godeaux(args: &[&str]) -> i32 {
    run(std::iter::once("godeaux").chain(args.iter().copied()))
}

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn degenerate_reads_config_and_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("deg2.json");
    let out = dir.path().join("report.json");
    fs::write(
        &cfg,
        r#"{"case": "deg2", "b1": [{"form": "y0 + y1 - y2 + 2 * y3", "multiplicity": 2}], "b3": "y0 + 3 * y3"}"#,
    )
    .unwrap();
    let code = godeaux(&["cone", "degenerate", "--case", "2", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = read_json(&out);
    assert_eq!(r["details"]["verdict"], "normalization P2");
    assert_eq!(r["status"], "lookup");
}

#[test]
fn config_hash_tracks_file_contents() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.json");
    let out = dir.path().join("r.json");
    let hash = |body: &str| {
        fs::write(&pts, body).unwrap();
        assert_eq!(godeaux(&["cone", "pencil", "--points", pts.to_str().unwrap(), "--output", out.to_str().unwrap()]), 0);
        read_json(&out)["provenance"]["config_hash"].as_str().unwrap().to_string()
    };
    let a = hash(r#"{"points": [[1,0,0],[0,1,0],[0,0,1],[1,1,1]]}"#);
    let b = hash(r#"{"points": [[1,0,0],[0,1,0],[0,0,1],[1,1,1]]}"#);
    let c = hash(r#"{"points": [[1,0,0],[0,1,0],[0,0,1],[1,2,3]]}"#);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("collinear.json");
    fs::write(&pts, r#"{"points": [[1,0,0],[0,1,0],[1,1,0],[1,1,1]]}"#).unwrap();
    assert_eq!(godeaux(&["cone", "pencil", "--points", pts.to_str().unwrap()]), 2);
    assert_eq!(godeaux(&["cone", "degenerate", "--case", "7"]), 2);
    assert_eq!(godeaux(&["verify", "--primes", "15"]), 2);
    assert_eq!(godeaux(&["group", "divisibility", "--orders", "4,2", "--element", "1,0"]), 2);
    assert_eq!(godeaux(&["no-such-command"]), 2);
}

#[test]
fn failing_check_exits_one() {
    assert_eq!(godeaux(&["table1"]), 1);
    assert_eq!(godeaux(&["cover", "even-set", "--classes", "C1,C2,C3,C4"]), 1);
}

#[test]
fn primes_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    std::env::set_var("GODEAUX_PRIMES", "29");
    let code = godeaux(&["cone", "image-check", "--output", out.to_str().unwrap()]);
    std::env::remove_var("GODEAUX_PRIMES");
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("image-on-quartic-f29"));
    assert!(!text.contains("image-on-quartic-f13"));
}
