use std::path::PathBuf;
use std::process::Command;

use genprob::cli::{run, EXIT_DIAGNOSTICS, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("genprob").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scenario_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenarios", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn row<'a>(text: &'a str, first: &str) -> Vec<&'a str> {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .find(|cols| cols.first() == Some(&first))
        .unwrap_or_else(|| panic!("no row {first:?} in\n{text}"))
}

#[test]
fn replicator_table() {
    let (code, out, _) = call(&["examples", "replicator"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(row(&out, "cat-dead")[1], "2/3");
    assert_eq!(row(&out, "cat-alive")[1], "1/3");
    assert_eq!(row(&out, "cat-dead-1")[1], "1/3");
}

#[test]
fn sleeping_beauty_table() {
    let (code, out, _) = call(&["examples", "sleeping-beauty"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(row(&out, "H")[1], "1/2");
    assert_eq!(row(&out, "T_Tue")[1], "1/4");
    assert_eq!(row(&out, "T_Tue")[4], "1/2");
    assert_eq!(row(&out, "H_Mon")[4], "1/1");
}

#[test]
fn file_and_builtin_agree() {
    let (_, a, _) = call(&["examples", "sleeping-beauty", "--format", "machine"]);
    let (_, b, _) = call(&[
        "eval",
        &scenario_path("sleeping_beauty.scn"),
        "--format",
        "machine",
    ]);
    assert_eq!(a, b);
    assert!(a.starts_with("report {"));
}

#[test]
fn enumerated_scenario_file() {
    let (code, out, err) = call(&["eval", &scenario_path("enumerated_coin.scn")]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(row(&out, "zero")[1], "256/257");
    assert_eq!(row(&out, "zero")[5], "12");
    assert_eq!(row(&out, "other")[5], "21");
}

#[test]
fn empty_output_mass() {
    let (code, out, _) = call(&["prob", "", "--max-bits", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(row(&out, "mass")[1], "1/8");
    assert_eq!(row(&out, "shortest")[1], "HALT");

    let (_, out, _) = call(&["prob", "", "--max-bits", "6"]);
    assert_eq!(row(&out, "generators")[1], "4");
}

#[test]
fn compress_and_kraft() {
    let (code, out, _) = call(&["compress", "1", "--max-bits", "9"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("OUT1 HALT"), "{out}");

    let (code, out, _) = call(&["kraft", "--max-bits", "6"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("7/32"), "{out}");
}

#[test]
fn enumerate_lists_in_order() {
    let (code, out, _) = call(&["enumerate", "--max-bits", "6"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0][..3], ["3", "000", "HALT"]);
    assert_eq!(rows[6][1], "110000");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(call(&["prob", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["prob", "", "--max-bits", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["kraft", "--fuel", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["simulate", "x", "--samples", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["examples", "nope"]).0, EXIT_USAGE);
}

#[test]
fn diagnostics_exit_1() {
    let (code, _, err) = call(&["eval", "/definitely/not/here.scn"]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(!err.is_empty());

    let dir = std::env::temp_dir().join(format!("genprob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.scn");
    std::fs::write(&bad, "scenario x\nprestates m\nsituation s bits 2.5\n").unwrap();
    let (code, _, err) = call(&["eval", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(err.contains("3:"), "{err}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn simulate_reports_both_columns() {
    let path = scenario_path("replicator.scn");
    let (code, out, _) = call(&["simulate", &path, "--samples", "2000", "--seed", "9"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("exact") && out.contains("empirical"), "{out}");
    let again = call(&["simulate", &path, "--samples", "2000", "--seed", "9"]).1;
    assert_eq!(out, again);
}

#[test]
fn binary_honours_fuel_env() {
    let bin = env!("CARGO_BIN_EXE_genprob");
    let generators = |fuel: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["prob", "", "--max-bits", "6"]);
        match fuel {
            Some(f) => cmd.env("GENPROB_FUEL", f),
            None => cmd.env_remove("GENPROB_FUEL"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        row(&text, "generators")[1].to_string()
    };
    assert_eq!(generators(None), "4");
    // one step is only enough for a bare HALT
    assert_eq!(generators(Some("1")), "1");

    let status = Command::new(bin).arg("bogus").output().unwrap().status;
    assert_eq!(status.code(), Some(2));
}
