use std::fs;
use std::process::Command;

use paperfold::cli::run;
use paperfold::crease::{generate_recursive, CreasePattern};
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn paperfold(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("paperfold").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn generate_one_dimension() {
    let o = paperfold(&["generate", "-d", "1", "-n", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let json: Value = serde_json::from_str(&o.stdout).unwrap();
    let signs: Vec<&str> = json["faces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["sign"].as_str().unwrap())
        .collect();
    assert_eq!(signs, ["-", "-", "+", "+", "-", "+", "+"]);
}

#[test]
fn generate_methods_agree_on_the_grown_window() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.json");
    let sub = dir.path().join("sub.json");
    assert_eq!(
        paperfold(&[
            "generate",
            "-d",
            "2",
            "-n",
            "4",
            "-o",
            rec.to_str().unwrap()
        ])
        .code,
        0
    );
    let o = paperfold(&[
        "generate",
        "-d",
        "2",
        "-n",
        "4",
        "--method",
        "substitution",
        "-o",
        sub.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rec: CreasePattern = serde_json::from_str(&fs::read_to_string(rec).unwrap()).unwrap();
    let sub: CreasePattern = serde_json::from_str(&fs::read_to_string(sub).unwrap()).unwrap();
    assert!(!sub.is_empty());
    for (face, sign) in sub.iter() {
        assert_eq!(rec.get(&face), Some(sign));
    }
    let letters = paperfold(&[
        "generate",
        "-d",
        "1",
        "-n",
        "2",
        "--method",
        "substitution",
        "--letters",
    ]);
    let json: Value = serde_json::from_str(&letters.stdout).unwrap();
    assert_eq!(json["letters"], serde_json::json!([3, 0]));
}

#[test]
fn checks_report_and_exit() {
    let o = paperfold(&["check", "coincidence", "-d", "2"]);
    assert_eq!(o.code, 0);
    let json: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(json["coincidence"]["k"], 2);
    assert!(json["coincidence"]["positions"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([3, 3])));

    assert_eq!(
        paperfold(&["check", "equivalence", "-d", "1", "-k", "4"]).code,
        0
    );
    assert_eq!(paperfold(&["check", "primitivity", "-d", "2"]).code, 0);
    let failed = paperfold(&["check", "primitivity", "-d", "1", "-k", "1"]);
    assert_eq!(failed.code, 1);
    assert!(failed.stderr.contains("check failed"));
    assert_eq!(
        paperfold(&["check", "coincidence", "-d", "1", "-k", "1"]).code,
        1
    );
}

#[test]
fn cohomology_output() {
    let o = paperfold(&["cohomology", "-d", "1"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "H^0 = Z\nH^1 = Z[1/2] + Z\n");
    assert_eq!(paperfold(&["cohomology", "-d", "3"]).code, 2);
}

#[test]
fn complexity_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = paperfold(&[
        "complexity",
        "-d",
        "1",
        "--n-max",
        "8",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let csv = fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "d,n,count,formula_value,match");
    assert_eq!(lines[8], "1,8,32,32,true");
    assert!(o.stderr.is_empty());
}

#[test]
fn render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    let output = dir.path().join("p.svg");
    fs::write(
        &input,
        serde_json::to_string(&generate_recursive(2, 3).unwrap()).unwrap(),
    )
    .unwrap();
    let args = [
        "render",
        "-i",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ];
    assert_eq!(paperfold(&args).code, 0);
    let first = fs::read_to_string(&output).unwrap();
    assert_eq!(
        first.matches("<line").count(),
        generate_recursive(2, 3).unwrap().len()
    );
    assert_eq!(paperfold(&args).code, 0);
    assert_eq!(fs::read_to_string(&output).unwrap(), first);
}

#[test]
fn errors_have_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"d\": 2, \"faces\": [").unwrap();
    let out = dir.path().join("x.svg");
    let malformed = paperfold(&[
        "render",
        "-i",
        bad.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    let budget = paperfold(&["generate", "-d", "2", "-n", "40"]);
    let unknown = paperfold(&["generate", "-d", "1", "-n", "2", "--bogus"]);
    let three_d = dir.path().join("three.json");
    fs::write(
        &three_d,
        serde_json::to_string(&generate_recursive(3, 1).unwrap()).unwrap(),
    )
    .unwrap();
    let render_3d = paperfold(&[
        "render",
        "-i",
        three_d.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    for o in [&malformed, &budget, &unknown, &render_3d] {
        assert_eq!(o.code, 2, "{}", o.stderr);
    }
    assert!(malformed.stderr.contains("malformed pattern JSON"));
    assert!(budget.stderr.contains("budget"));
    assert!(unknown.stderr.contains("--bogus"));
    assert!(render_3d.stderr.contains("dimension 3"));
}

#[test]
fn help_goes_to_stdout() {
    let o = paperfold(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("generate") && o.stdout.contains("cohomology"));
    assert_eq!(paperfold(&[]).code, 2);
}

#[test]
fn binary_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_paperfold");
    let run_once = || {
        Command::new(bin)
            .args(["generate", "-d", "2", "-n", "3"])
            .output()
            .unwrap()
    };
    let (a, b) = (run_once(), run_once());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let status = Command::new(bin)
        .args(["check", "primitivity", "-d", "1", "-k", "1"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
