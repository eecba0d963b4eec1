use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spincalc_cli::report::render_table;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn spincalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincalc"))
        .args(args)
        .env_remove("SPINCALC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

// Splits a command line on whitespace, keeping double-quoted runs together.
fn split_args(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let (mut quoted, mut started) = (false, false);
    for ch in line.chars() {
        match ch {
            '"' => {
                quoted = !quoted;
                started = true;
            }
            c if c.is_whitespace() && !quoted => {
                if started {
                    out.push(std::mem::take(&mut cur));
                    started = false;
                }
            }
            c => {
                cur.push(c);
                started = true;
            }
        }
    }
    if started {
        out.push(cur);
    }
    out
}

fn golden_cases() -> Vec<(String, String)> {
    let text = std::fs::read_to_string(crate_dir().join("tests/golden/commands.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, cmd) = l.split_once('|').unwrap();
            (name.trim().to_string(), cmd.trim().to_string())
        })
        .collect()
}

fn run_line(cmd: &str) -> Output {
    let args = split_args(cmd);
    assert_eq!(args[0], "spincalc");
    let refs: Vec<&str> = args[1..].iter().map(String::as_str).collect();
    spincalc(&refs)
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, cmd) in golden_cases() {
        let out = run_line(&cmd);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let path = crate_dir().join(format!("tests/golden/{name}.out"));
        if update {
            std::fs::write(&path, stdout(&out)).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(stdout(&out), want, "{cmd}");
    }
}

#[test]
fn readme_documents_golden_commands() {
    let readme = std::fs::read_to_string(crate_dir().join("../../README.md")).unwrap();
    let cases = golden_cases();
    for (_, cmd) in &cases {
        assert!(readme.contains(&format!("$ {cmd}\n")), "README lacks `{cmd}`");
    }
    // Blocks of the form "$ command" followed by output must show the golden output.
    let mut shown = 0;
    for block in readme.split("```").skip(1).step_by(2) {
        let block = block.strip_prefix('\n').unwrap_or(block);
        let Some((first, rest)) = block.split_once('\n') else { continue };
        let Some(cmd) = first.strip_prefix("$ ") else { continue };
        if rest.is_empty() || rest.starts_with("$ ") {
            continue;
        }
        let (name, _) = cases.iter().find(|(_, c)| c == cmd).expect("documented command has a golden file");
        let want = std::fs::read_to_string(crate_dir().join(format!("tests/golden/{name}.out"))).unwrap();
        assert_eq!(rest, want, "README output for `{cmd}`");
        shown += 1;
    }
    assert!(shown > 0);
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(crate_dir().join("schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn reports_match_schema_and_pretty_tables() {
    let v = schema();
    for (name, cmd) in golden_cases() {
        let line = cmd.replace(" --pretty", "");
        let out = run_line(&line);
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{name}: {e}"));
        if let Err(e) = v.validate(&report) {
            panic!("{name}: {e}");
        }
        let pretty = run_line(&format!("{line} --pretty"));
        assert_eq!(stdout(&pretty), render_table(&report), "{name}");
    }
}

#[test]
fn spec_examples() {
    let r: Value = serde_json::from_slice(&spincalc(&["index", "CP4", "--c1", "5"]).stdout).unwrap();
    assert_eq!(r["alpha_c"], 1);
    let r: Value = serde_json::from_slice(&spincalc(&["search", "CP2 x S4", "--box", "9"]).stdout).unwrap();
    assert_eq!(r["classification"], "all-vanish");
    let r: Value = serde_json::from_slice(&spincalc(&["inddiff", "--summand", "1:1"]).stdout).unwrap();
    assert_eq!(r["value"], 1);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| spincalc(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["index", "CP4"]), 1);
    assert_eq!(code(&["index", "CP4 x", "--c1", "1"]), 1);
    assert_eq!(code(&["inddiff", "--summand", "1-1"]), 1);
    assert_eq!(code(&["trichotomy", "--potential", "random:2:1"]), 1);
    assert_eq!(code(&["index", "CP2 # CP3", "--c1", "1,1"]), 2);
    assert_eq!(code(&["index", "CP4", "--c1", "1,1"]), 2);
    assert_eq!(code(&["prescribe", "--grid", "4", "--potential", "1", "--kappa", "-1"]), 2);
    assert_eq!(code(&["prescribe", "--grid", "4", "--potential", "-1", "--kappa", "0.5"]), 2);
    assert_eq!(code(&["cliff", "--dim", "13"]), 2);
}

#[test]
fn seed_controls_sampling() {
    let with_seed = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_spincalc"))
            .args(["cliff", "--dim", "5", "--samples", "5"])
            .env("SPINCALC_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(with_seed("3"), with_seed("3"));
    assert_ne!(with_seed("3"), with_seed("4"));
    assert_eq!(with_seed("0"), spincalc(&["cliff", "--dim", "5", "--samples", "5"]).stdout);
}

#[test]
fn grid_function_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("spincalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sol = dir.join("u.json");
    let out = spincalc(&[
        "prescribe",
        "--grid",
        "4",
        "--potential",
        "-1",
        "--kappa",
        "-1",
        "--output",
        sol.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&sol).unwrap();
    let file: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(file["shape"], serde_json::json!([4, 4, 4]));
    // The solution is ≡ 1; feeding it back as a conformal factor keeps the class.
    let out = spincalc(&["trichotomy", "--potential", "-1", "--conformal-factor", sol.to_str().unwrap()]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["class"], "negative-class");
    assert_eq!(r["weighted"]["agrees"], true);
    let clash = spincalc(&["trichotomy", "--grid", "5", "--potential", sol.to_str().unwrap()]);
    assert_eq!(clash.status.code(), Some(1));
    std::fs::remove_dir_all(Path::new(&dir)).ok();
}

#[test]
fn printing_round_trips() {
    use spincalc_cli::parse_manifold;
    for s in ["CP2 x S4", "CP2 # ~CP2", "CP4 # SpinBott(8,1)", "~(CP1 x S2) # CP2", "(CP1 x CP1) x S4", "CP2 # (CP2 # CP2)"] {
        let e = parse_manifold(s).unwrap();
        let printed = e.to_string();
        assert_eq!(parse_manifold(&printed).unwrap(), e, "{s}");
        assert_eq!(parse_manifold(&printed).unwrap().to_string(), printed);
    }
}
