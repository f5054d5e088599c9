mod common;

use common::E1_QMF;
use fml2hol::embedding::TranslationConfig;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("E1.qmf"), E1_QMF).unwrap();
    dir
}

fn fml2hol(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fml2hol"))
        .current_dir(dir)
        .env_remove("FML2HOL_AXIOM_DIR")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn translate_writes_input_stem_thf_by_default() {
    let dir = workdir("default_output");
    let o = fml2hol(&dir, &["translate", "-f", "thf:d:const", "E1.qmf"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.join("E1.thf")).unwrap();
    assert!(text.starts_with("% fml2hol thf:d:const\n"));
    assert!(text.contains("thf(mbox_d,definition,"));
    assert!(text.contains("thf(con,conjecture,"));
}

#[test]
fn s5_vary_uses_mbox_s5_and_guarded_quantifier() {
    let dir = workdir("s5_vary");
    let o = fml2hol(
        &dir,
        &["translate", "-f", "thf:s5:vary", "--wrap", "0", "-o", "-", "E1.qmf"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("mbox_s5 @ ( f @ X )"));
    assert!(!text.contains("mbox_d"));
    assert!(text.contains("( exists_in_world @ X @ W ) => ( Phi @ X @ W )"));
    assert!(text.contains("thf(nonempty_ax,axiom,"));
    for a in [
        "thf(a1,axiom,( mreflexive @ rel_s5 )).",
        "thf(a2,axiom,( mtransitive @ rel_s5 )).",
        "thf(a3,axiom,( msymmetric @ rel_s5 )).",
    ] {
        assert!(text.contains(a), "{a}");
    }
}

#[test]
fn format_flag_and_long_flags_agree_for_all_configurations() {
    let dir = workdir("flags");
    for config in TranslationConfig::all() {
        let short = fml2hol(&dir, &["translate", "-f", &config.to_string(), "-o", "-", "E1.qmf"]);
        let long = fml2hol(
            &dir,
            &[
                "translate",
                "--logic",
                &config.logic.tag().to_uppercase(),
                "--domain",
                config.domain.tag(),
                "-o",
                "-",
                "E1.qmf",
            ],
        );
        assert_eq!(short.status.code(), Some(0));
        assert_eq!(short.stdout, long.stdout, "{config}");
    }
}

#[test]
fn translate_is_deterministic() {
    let dir = workdir("deterministic");
    let a = fml2hol(&dir, &["translate", "-f", "thf:s4:cumul", "-o", "-", "E1.qmf"]);
    let b = fml2hol(&dir, &["translate", "-f", "thf:s4:cumul", "-o", "-", "E1.qmf"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn include_mode_honours_axiom_dir_env() {
    let dir = workdir("include_env");
    let o = Command::new(env!("CARGO_BIN_EXE_fml2hol"))
        .current_dir(&dir)
        .env("FML2HOL_AXIOM_DIR", "lib/ax")
        .args(["translate", "-f", "thf:t:cumul", "--mode", "include", "E1.qmf"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.join("E1.thf")).unwrap();
    assert!(text.contains("include('lib/ax/fml_cumul.ax')."));
    assert!(text.contains("include('lib/ax/fml_t.ax')."));
    assert!(dir.join("lib/ax/fml_cumul.ax").is_file());
    assert!(dir.join("lib/ax/fml_t.ax").is_file());
}

#[test]
fn input_errors_exit_1_with_location() {
    let dir = workdir("input_errors");
    let o = fml2hol(&dir, &["translate", "-f", "thf:x7:const", "E1.qmf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown logic"));

    std::fs::write(dir.join("bad.qmf"), "qmf(a,axiom,\n  p & ).\n").unwrap();
    let o = fml2hol(&dir, &["translate", "-f", "thf:k:const", "bad.qmf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.qmf:2:7"), "{}", stderr(&o));
}

#[test]
fn missing_input_exits_2() {
    let dir = workdir("missing");
    let o = fml2hol(&dir, &["translate", "-f", "thf:k:const", "nope.qmf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_flags_exit_64() {
    let dir = workdir("usage");
    for args in [
        &[][..],
        &["translate"][..],
        &["translate", "E1.qmf"][..],
        &["translate", "--logic", "d", "E1.qmf"][..],
        &["translate", "-f", "thf:d:const", "--mode", "sideways", "E1.qmf"][..],
        &["check", "--max-worlds", "-3", "-f", "thf:d:const", "E1.qmf"][..],
        &["check", "--max-worlds", "0", "-f", "thf:d:const", "E1.qmf"][..],
        &["run-prover", "--prover", "true", "E1.qmf"][..],
        &["--bogus"][..],
    ] {
        let o = fml2hol(&dir, args);
        assert_eq!(o.status.code(), Some(64), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(fml2hol(&dir, &["--version"]).status.code(), Some(0));
    assert_eq!(fml2hol(&dir, &["check", "--help"]).status.code(), Some(0));
}

#[test]
fn check_reports_countermodel() {
    let dir = workdir("check_cs");
    let o = fml2hol(
        &dir,
        &[
            "check",
            "--logic",
            "d",
            "--domain",
            "vary",
            "--max-worlds",
            "2",
            "--max-individuals",
            "2",
            "E1.qmf",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("worlds: w1 w2"));
    assert!(text.contains("SZS status CounterSatisfiable"));
}

#[test]
fn check_reports_absence_within_bounds() {
    let dir = workdir("check_unknown");
    let o = fml2hol(
        &dir,
        &[
            "check",
            "--logic",
            "s5",
            "--domain",
            "cumul",
            "--max-worlds",
            "3",
            "--max-individuals",
            "3",
            "E1.qmf",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("no countermodel within bounds (worlds ≤ 3, individuals ≤ 3)"));
    assert!(text.contains("SZS status Unknown"));
}

#[test]
fn check_without_conjecture_exits_1() {
    let dir = workdir("check_noconj");
    std::fs::write(dir.join("ax.qmf"), "qmf(a,axiom,p).\n").unwrap();
    let o = fml2hol(&dir, &["check", "-f", "thf:k:const", "ax.qmf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no conjecture"));
}

#[test]
fn check_strict_timeout_exits_3() {
    let dir = workdir("check_timeout");
    let o = fml2hol(
        &dir,
        &[
            "check",
            "-f",
            "thf:k:const",
            "--max-worlds",
            "6",
            "--timeout",
            "0",
            "--strict-timeout",
            "E1.qmf",
        ],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let o = fml2hol(
        &dir,
        &[
            "check",
            "-f",
            "thf:k:const",
            "--max-worlds",
            "6",
            "--timeout",
            "0",
            "E1.qmf",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SZS status Timeout"));
}

const E1_COUNTERMODEL: &str = "\
worlds: w1 w2
rel: w1>w2 w2>w1
universe: a b
dom w1: b
dom w2: a
pred f @ w2: b
";

#[test]
fn eval_countermodel_fixture() {
    let dir = workdir("eval_cm");
    std::fs::write(dir.join("cm.model"), E1_COUNTERMODEL).unwrap();
    let o = fml2hol(&dir, &["eval", "-f", "thf:d:vary", "E1.qmf", "cm.model"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("con (conjecture): false at w1"), "{text}");
    assert!(text.contains("correspondence OK"));
}

#[test]
fn eval_rejects_models_outside_the_class() {
    let dir = workdir("eval_bad");
    std::fs::write(
        dir.join("empty.model"),
        "worlds: w1\nrel: w1>w1\nuniverse: a\ndom w1:\n",
    )
    .unwrap();
    let o = fml2hol(&dir, &["eval", "-f", "thf:d:vary", "E1.qmf", "empty.model"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("non-emptiness violated"));

    std::fs::write(dir.join("dead.model"), "worlds: w1\nuniverse: a\n").unwrap();
    let o = fml2hol(&dir, &["eval", "-f", "thf:d:const", "E1.qmf", "dead.model"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("serial"));
}

#[test]
fn eval_tautology_true_everywhere() {
    let dir = workdir("eval_taut");
    std::fs::write(dir.join("taut.qmf"), "qmf(t,conjecture,( p | ~ p )).\n").unwrap();
    std::fs::write(
        dir.join("m.model"),
        "worlds: w1 w2 w3\nrel: w1>w2\nuniverse: a\npred p @ w2: ()\n",
    )
    .unwrap();
    let o = fml2hol(
        &dir,
        &["eval", "--logic", "k", "--domain", "const", "taut.qmf", "m.model"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for w in ["w1", "w2", "w3"] {
        assert!(text.contains(&format!("t (conjecture): true at {w}")));
    }
    assert!(!text.contains("false"));
}

#[cfg(unix)]
#[test]
fn run_prover_with_stub_script() {
    let dir = workdir("prover");
    std::fs::write(dir.join("E1.thf"), "thf(a,axiom,$true).\n").unwrap();
    std::fs::write(
        dir.join("stub.sh"),
        "#!/bin/sh\necho \"% processing $1\"\necho '% SZS status Theorem for E1'\n",
    )
    .unwrap();
    let o = fml2hol(&dir, &["run-prover", "--prover", "sh stub.sh {file}", "E1.thf"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "% SZS status Theorem for E1\n");

    std::fs::write(dir.join("slow.sh"), "#!/bin/sh\nsleep 5\necho '% SZS status Theorem'\n").unwrap();
    let o = fml2hol(
        &dir,
        &[
            "run-prover",
            "--prover",
            "sh slow.sh {file}",
            "--timeout",
            "0.2",
            "E1.thf",
        ],
    );
    assert_eq!(stdout(&o), "% SZS status Timeout for E1\n");
    let o = fml2hol(
        &dir,
        &[
            "run-prover",
            "--prover",
            "sh slow.sh {file}",
            "--timeout",
            "0.2",
            "--strict-timeout",
            "E1.thf",
        ],
    );
    assert_eq!(o.status.code(), Some(3));

    let o = fml2hol(
        &dir,
        &["run-prover", "--prover", "/nonexistent/prover {file}", "E1.thf"],
    );
    assert_eq!(stdout(&o), "% SZS status Error for E1\n");
    assert!(stderr(&o).contains("cannot start"));
}
