use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selgame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn selgame")
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn presets_meet_their_expectations() {
    for name in ["cliquish-thomae", "non-cliquish-dirichlet", "measure-thomae", "marczewski-dirichlet", "baire-dirichlet"] {
        let o = run(&["play", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let last = stdout(&o).lines().last().unwrap().to_string();
        let want = if name == "non-cliquish-dirichlet" { "divergence" } else { "convergence" };
        assert!(last.contains(&format!("\"kind\":\"{want}\"")), "{name}: {last}");
    }
}

#[test]
fn scenario_files_play() {
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["play", path.to_str().unwrap(), "--horizon", "12"]);
        assert_eq!(o.status.code(), Some(0), "{}", path.display());
    }
}

#[test]
fn malformed_family_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(
        &p,
        "family = \"clopen\"\nfunction = \"thomae\"\nvariant = \"g1\"\nplayer_I = \"random\"\nplayer_II = \"ii-hsop\"\nhorizon = 4\nseed = 1\n",
    )
    .unwrap();
    assert_eq!(run(&["play", p.to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(run(&["play", "no-such-preset"]).status.code(), Some(64));
    assert_eq!(run(&["analyze", "thomae", "clopen"]).status.code(), Some(64));
}

#[test]
fn expectation_mismatch_and_undecided_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.toml");
    let base = "family = \"clo\"\nfunction = \"thomae\"\nvariant = \"g1\"\nplayer_I = \"random\"\nplayer_II = \"ii-hsop\"\nhorizon = 4\nseed = 1\n";
    std::fs::write(&p, format!("{base}expect = \"divergence\"\n")).unwrap();
    assert_eq!(run(&["play", p.to_str().unwrap()]).status.code(), Some(1));
    // On the Dirichlet function no interval has small value spread, and random play claims no gap.
    let undecided = base.replace("\"ii-hsop\"", "\"random\"").replace("\"thomae\"", "\"dirichlet 1 0\"");
    std::fs::write(&p, undecided).unwrap();
    assert_eq!(run(&["play", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_accepts_detects_tampering_and_rejects_other_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.jsonl");
    let o = run(&["play", "cliquish-thomae", "--horizon", "6", "--out", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify", good.to_str().unwrap()]).status.code(), Some(0));

    let text = std::fs::read_to_string(&good).unwrap();
    let mut lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    for l in lines.iter_mut() {
        if l["index"] == 4 {
            l["payload"] = serde_json::json!(["1:1"]);
        }
    }
    let join = |ls: &[serde_json::Value]| ls.iter().map(|l| l.to_string() + "\n").collect::<String>();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, join(&lines)).unwrap();
    let o = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"index\":4"), "{}", stdout(&o));

    lines[0]["schema_version"] = serde_json::json!(99);
    std::fs::write(&bad, join(&lines)).unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn analyze_reports_the_dichotomy() {
    let cases = [
        ("thomae", "clo", "HSOP: yes; predicted winner: II"),
        ("dirichlet 1 0", "clo", "HSOP: no (witness α<1); predicted winner: I"),
        ("dirichlet 1 0", "tree", "HSOP: yes; predicted winner: II"),
        ("dirichlet 1 0", "residual dyadics", "HSOP: yes; predicted winner: II"),
    ];
    for (f, s, want) in cases {
        let o = run(&["analyze", f, s]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).lines().any(|l| l == want), "{f} {s}: {}", stdout(&o));
    }
}

#[test]
fn tournament_rows_and_parallel_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["cliquish-thomae", "non-cliquish-dirichlet", "marczewski-dirichlet"] {
        std::fs::copy(scenarios().join(format!("{name}.toml")), dir.path().join(format!("{name}.toml"))).unwrap();
    }
    let pattern = dir.path().join("*.toml");
    let go = |par: &str| {
        let o = run(&["tournament", pattern.to_str().unwrap(), "--repetitions", "10", "--parallelism", par, "--horizon", "8"]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = go("1");
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(lines[0], "scenario,seed,certificate,rounds,max_gap,final_radius");
    assert_eq!(lines.len(), 31);
    assert!(lines[1..].iter().all(|l| l.contains(",convergence,") || l.contains(",divergence,")));
    assert_eq!(go("4"), one);

    let empty = run(&["tournament", dir.path().join("*.nothing").to_str().unwrap()]);
    assert_eq!(stdout(&empty), "scenario,seed,certificate,rounds,max_gap,final_radius\n");
}

#[test]
fn tournament_records_broken_scenarios_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.toml"), "family = 3\n").unwrap();
    std::fs::copy(scenarios().join("cliquish-thomae.toml"), dir.path().join("ok.toml")).unwrap();
    let o = run(&["tournament", dir.path().join("*.toml").to_str().unwrap(), "--horizon", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("broken,,error"), "{out}");
    assert!(out.contains("cliquish-thomae,1,convergence"), "{out}");
}

fn interactive(script: &str) -> Output {
    let mut child = bin()
        .args(["interactive", "cliquish-thomae", "--horizon", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn interactive_reprompts_and_quits_undecided() {
    // P_0 is [0,1/4] against the whole space, so 1/2 is outside and 1/16 is inside.
    let o = interactive("\n1:0\n0001:0\nquit\n");
    let out = stdout(&o);
    assert!(out.contains("rule x ∉ P_n"), "{out}");
    assert!(out.contains("P_1 = "), "{out}");
    assert!(out.contains("certificate: undecided"), "{out}");
    assert_eq!(o.status.code(), Some(2));

    let eof = interactive("");
    assert!(stdout(&eof).contains("certificate: undecided"));
    assert_eq!(eof.status.code(), Some(2));
}

#[test]
fn interactive_game_can_finish() {
    let o = interactive("\n0001:0\n00001:0\n");
    let out = stdout(&o);
    assert!(out.contains("certificate: "), "{out}");
    assert_ne!(o.status.code(), Some(64));
}
