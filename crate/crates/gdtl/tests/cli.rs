use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect()
}

fn gdtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdtl")).args(args).env_remove("GDTL_FUEL").output().expect("binary runs")
}

fn on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = example(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    gdtl(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn source_file(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".gdtl").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn check_prints_the_type() {
    let o = on("check", "head_nil.gdtl", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Nat\n");
    let o = on("check", "approx.gdtl", &[]);
    assert_eq!(stdout(&o), "Vec Nat ?\n");
}

#[test]
fn run_reports_the_failing_pair() {
    let o = on("run", "head_nil.gdtl", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "");
    assert_eq!(stderr(&o), "runtime type error: ⟨Vec Nat 0⟩ ⊓ ⟨Vec Nat 1⟩ undefined\n");
}

#[test]
fn run_prints_values() {
    let o = on("run", "factorial.gdtl", &[]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "24\n"));
    let o = on("run", "head_dyn_cons.gdtl", &[]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0\n"));
}

#[test]
fn fuel_from_flag_and_environment() {
    let o = on("run", "omega.gdtl", &["--fuel", "1000"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr(&o), "fuel exhausted after 1000 steps\n");
    let path = example("omega.gdtl");
    let o = Command::new(env!("CARGO_BIN_EXE_gdtl"))
        .args(["run", path.to_str().unwrap()])
        .env("GDTL_FUEL", "37")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr(&o), "fuel exhausted after 37 steps\n");
}

#[test]
fn type_errors_carry_positions() {
    let o = on("check", "head_static_nil.gdtl", &[]);
    assert_eq!(o.status.code(), Some(1));
    let path = example("head_static_nil.gdtl");
    let expected = format!("{}:9:1: error: type mismatch: expected Vec Nat 1, found Vec Nat 0\n", path.display());
    assert_eq!(stderr(&o), expected);
}

#[test]
fn parse_errors_and_missing_files() {
    let f = source_file("main = (\\x. x\n");
    let path = f.path().to_str().unwrap();
    let o = gdtl(&["check", path]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr(&o), format!("{path}:1:8: error: unbalanced `(`\n"));
    let o = gdtl(&["check", "/nonexistent/file.gdtl"]);
    assert_eq!(o.status.code(), Some(3));
    let o = gdtl(&["--json", "check", path]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "{\"status\":\"parse-error\",\"error\":{\"message\":\"unbalanced `(`\",\"line\":1,\"column\":8}}\n");
}

#[test]
fn json_golden() {
    let o = gdtl(&["--json", "run", example("head_nil.gdtl").to_str().unwrap()]);
    assert_eq!(stdout(&o), "{\"status\":\"err\",\"error\":{\"left\":\"Vec Nat 0\",\"right\":\"Vec Nat 1\"},\"steps\":4}\n");
    let o = gdtl(&["--json", "run", "--fuel", "10", example("omega.gdtl").to_str().unwrap()]);
    assert_eq!(stdout(&o), "{\"status\":\"fuel\",\"fuelUsed\":10}\n");
    let o = gdtl(&["--json", "check", example("head_nil.gdtl").to_str().unwrap()]);
    assert_eq!(stdout(&o), "{\"status\":\"ok\",\"type\":\"Nat\"}\n");
}

/// JSON and human modes report the same category for every example.
#[test]
fn modes_agree() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples"].iter().collect();
    let mut names: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(names.len() >= 10);
    for path in names {
        let p = path.to_str().unwrap();
        for cmd in ["check", "norm", "elab", "run"] {
            let mut args = vec![cmd, p];
            if cmd == "run" {
                args.extend(["--fuel", "1000"]);
            }
            let human = gdtl(&args);
            args.insert(0, "--json");
            let json = gdtl(&args);
            assert_eq!(human.status.code(), json.status.code(), "{cmd} {p}");
            let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
            let status = v["status"].as_str().unwrap();
            let expected = match human.status.code() {
                Some(0) => "ok",
                Some(1) => "type-error",
                Some(2) => "err",
                Some(3) => "parse-error",
                Some(4) => "fuel",
                other => panic!("{cmd} {p}: exit {other:?}"),
            };
            assert_eq!(status, expected, "{cmd} {p}");
        }
    }
}

#[test]
fn trace_lines() {
    let o = on("run", "head_nil.gdtl", &["--trace"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"ERR"));
    assert!(lines[..lines.len() - 1].iter().all(|l| l.contains(" | ")));
    assert!(lines.iter().any(|l| l.starts_with("StepAscrFail | ") || l.starts_with("StepAppFailTrans | ")));
    let o = gdtl(&["--json", "run", "--trace", example("factorial.gdtl").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len() as u64, v["steps"].as_u64().unwrap());
    assert!(trace.iter().all(|t| t["rule"].is_string() && t["state"].is_string()));
}

#[test]
fn props_command() {
    let o = gdtl(&["props", "--seed", "1", "--count", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "50 cases, 150 checks, 0 skipped, 0 counterexamples\n");
    let o = gdtl(&["--json", "props", "--seed", "1", "--count", "5"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 15);
    assert!(lines.iter().all(|l| l["verdict"] == "pass"));
}

#[test]
fn static_route_matches_gradual_values() {
    let f = source_file("twice : (A : Type 1) -> (A -> A) -> A -> A = \\A f x. f (f x)\nmain = twice Nat (\\n. Succ n) 3\n");
    let p = f.path().to_str().unwrap();
    let g = gdtl(&["run", p]);
    let s = gdtl(&["--static", "run", p]);
    assert_eq!(stdout(&g), "5\n");
    assert_eq!(stdout(&s), "5\n");
}
