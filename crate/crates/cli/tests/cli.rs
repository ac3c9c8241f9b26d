use std::path::PathBuf;
use std::process::{Command, Output};

fn coregame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coregame")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coregame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn thresholds_table() {
    let o = coregame(&["thresholds", "--kmax", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,c_k,mu_ck");
    let ck = |line: &str| line.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!((ck(lines[1]) - 3.351).abs() < 1e-3, "{}", lines[1]);
    assert!((ck(lines[2]) - 5.149).abs() < 1e-3, "{}", lines[2]);
}

#[test]
fn generated_graph_peels() {
    let path = scratch("g.txt");
    let p = path.to_str().unwrap();
    let o = coregame(&["gen", "--n", "2000", "--c", "4.0", "--seed", "3", "--out", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = coregame(&["peel", "--graph", p, "--k", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let head = text.lines().next().unwrap();
    assert!(head.starts_with("# n=2000 "), "{head}");
    let core: usize = head.split("core_vertices=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(core > 500, "{head}");
    // same seed, same file
    let again = scratch("g2.txt");
    coregame(&["gen", "--n", "2000", "--c", "4.0", "--seed", "3", "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn play_reports_a_clean_game() {
    let o = coregame(&["play", "--n", "1500", "--c", "2.5", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("largest_maker_component="));
    assert!(text.contains("violations=0"));
}

#[test]
fn bad_config_exits_with_two() {
    let path = scratch("bad.cfg");
    std::fs::write(&path, "experiment = shattering\nwhat = 3\n").unwrap();
    let o = coregame(&["experiment", "shattering", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn identities_experiment_writes_csv() {
    let path = scratch("id.cfg");
    std::fs::write(&path, "experiment = identities\n").unwrap();
    let o = coregame(&["experiment", "identities", "--config", path.to_str().unwrap(), "--output", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() > 5);
}
