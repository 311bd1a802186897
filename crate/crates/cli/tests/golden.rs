use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use gamequant::io::{parse_automaton, parse_document, parse_transducer, parse_upword, print_document};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gamequant-golden-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs the binary from the golden directory; returns stdout, stderr and the exit code.
fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_gamequant"))
        .args(args)
        .current_dir(golden(""))
        .output()
        .unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn expect(args: &[&str], stdout: &str, code: i32) {
    let (out, err, c) = run(args);
    assert_eq!((out.as_str(), c), (stdout, code), "gamequant {}\nstderr: {err}", args.join(" "));
}

#[test]
fn corpus_round_trips() {
    let mut seen = 0;
    for entry in fs::read_dir(golden("")).unwrap() {
        let path = entry.unwrap().path();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if !["aut", "tdr", "game", "alg", "hom", "upw", "vrd"].contains(&ext) {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(print_document(&doc), text, "{}", path.display());
        assert_eq!(parse_document(&print_document(&doc)).unwrap(), doc);
        seen += 1;
    }
    assert!(seen >= 10, "only {seen} golden documents");
}

#[test]
fn membership() {
    expect(&["membership", "--automaton", "linfa.aut", "--word", "a (b)"], "false\n", 1);
    expect(&["membership", "--automaton", "linfa.aut", "--word", "b (b a)"], "true\n", 0);
    expect(&["membership", "--automaton", "fina.aut", "--word", "a a (b)"], "true\n", 0);
}

#[test]
fn decide_index() {
    expect(&["decide-index", "--spec", "linfa.aut", "--index", "P,1,2", "--kind", "dt"], "true\n", 0);
    expect(&["decide-index", "--spec", "linfa.aut", "--index", "P,0,1", "--kind", "dt"], "false\n", 1);
    expect(&["decide-index", "--spec", "fina.aut", "--index", "P,1,2", "--kind", "dt"], "false\n", 1);
    expect(&["decide-index", "--spec", "fina.aut", "--index", "P,1,2", "--kind", "nd"], "true\n", 0);
    expect(&["decide-index", "--spec", "linfa.aut", "--index", "W,1,2", "--kind", "dt"], "false\n", 1);
}

#[test]
fn solve() {
    expect(&["solve", "--game", "small.game"], "false winner=I region_i=a,b,c region_ii=\"\"\n", 1);
    let dot = scratch("mixed.dot");
    expect(
        &["solve", "--game", "mixed.game", "--dot", dot.to_str().unwrap()],
        "true winner=II region_i=d region_ii=a,b,c\n",
        0,
    );
    assert_eq!(fs::read_to_string(dot).unwrap(), fs::read_to_string(golden("mixed.dot")).unwrap());
}

#[test]
fn synthesize_and_simulate() {
    let t = scratch("copy.tdr");
    expect(&["synthesize", "--spec", "copy.aut", "--out", t.to_str().unwrap()], "true states=1\n", 0);
    assert_eq!(fs::read_to_string(&t).unwrap(), fs::read_to_string(golden("copy.tdr")).unwrap());
    expect(&["simulate", "--spec", "copy.aut", "--transducer", "copy.tdr", "--x", "0 (1 0)"], "true y=\"0 (1 0)\"\n", 0);
}

#[test]
fn unrealizable_specification() {
    // y_n = x_{n+1} cannot be met without lookahead
    let (out, _, code) = run(&["synthesize", "--spec", "lookahead.aut"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("false refutation="), "{out}");
}

#[test]
fn separately_dependent_synthesis() {
    let t = scratch("sep.tdr");
    let (out, err, code) = run(&[
        "synthesize", "--psi", "firstbit.aut", "--gamma", "linfa.aut", "--fn", "1001", "--word", "1 (0)", "--out",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.starts_with("true states="), "{out}");
    // y must contain infinitely many a exactly when ⟨w, x⟩ is accepted by the ψ
    let tdr = parse_transducer(&fs::read_to_string(&t).unwrap()).unwrap();
    let psi = parse_automaton(&fs::read_to_string(golden("firstbit.aut")).unwrap()).unwrap();
    let gamma = parse_automaton(&fs::read_to_string(golden("linfa.aut")).unwrap()).unwrap();
    let w = parse_upword("1 (0)", psi.alphabet().factor(0)).unwrap();
    for x in ["(a)", "(b)", "a b (b a b)", "b (b b a)"] {
        let x = parse_upword(x, psi.alphabet().factor(1)).unwrap();
        let wx = psi.alphabet().tuple_word(&[&w, &x]);
        let y = tdr.apply(&wx).unwrap();
        assert_eq!(psi.accepts(&wx), gamma.accepts(&y), "x = {x:?}");
    }
}

#[test]
fn eliminate_game() {
    expect(&["eliminate-game", "--spec", "shift.aut"], &fs::read_to_string(golden("shift-elim.aut")).unwrap(), 0);
    for route in ["strategies", "refutations"] {
        let (out, _, code) = run(&["eliminate-game", "--spec", "shift.aut", "--route", route]);
        assert_eq!(code, 0);
        let e = parse_automaton(&out).unwrap();
        assert!(e.accepts(&parse_upword("0 (1)", e.alphabet()).unwrap()));
    }
    let (_, err, code) = run(&["eliminate-game", "--spec", "linfa.aut"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn eliminate_index() {
    let e = scratch("fb.aut");
    expect(
        &["eliminate-index", "--spec", "firstbit.aut", "--index", "P,1,2", "--kind", "dt", "--out", e.to_str().unwrap()],
        "ok states=3\n",
        0,
    );
    let e = e.to_str().unwrap();
    for (w, verdict, code) in [("1 (0)", "true\n", 0), ("0 (1)", "false\n", 1), ("1 0 (1)", "true\n", 0)] {
        expect(&["membership", "--automaton", e, "--word", w], verdict, code);
    }
}

#[test]
fn algebra_and_ramsey() {
    expect(&["algebra", "--automaton", "linfa.aut"], &fs::read_to_string(golden("linfa.hom")).unwrap(), 0);
    expect(&["algebra", "--check", "z3.alg"], "true violations=0\n", 0);
    expect(
        &["algebra", "--check", "broken.alg"],
        "false violations=6 first=\"associativity fails at (f, e, f)\"\n",
        1,
    );
    expect(&["ramsey-bound", "--algebra", "z3.alg"], "17\n", 0);
    expect(&["ramsey-bound", "--algebra", "z3.alg", "--exact"], "4\n", 0);
    expect(&["ramsey-bound", "--algebra", "linfa.hom"], "6\n", 0);
}

#[test]
fn dot_export() {
    for (input, golden_dot) in [("linfa.aut", "linfa.dot"), ("copy.tdr", "copy.dot")] {
        expect(&["dot", "--input", input], &fs::read_to_string(golden(golden_dot)).unwrap(), 0);
    }
    expect(&["dot", "--input", "mixed.game", "--solve"], &fs::read_to_string(golden("mixed.dot")).unwrap(), 0);
    let (_, _, code) = run(&["dot", "--input", "z3.alg"]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_with_two() {
    let (_, err, code) = run(&["membership", "--automaton", "linfa.aut", "--word", "a (c)"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown letter `c`"), "{err}");
    let (_, err, code) = run(&["membership", "--automaton", "invalid/bad-priority.aut", "--word", "(a)"]);
    assert_eq!(code, 2);
    assert!(err.contains("bad-priority.aut:7:11"), "{err}");
    assert!(err.contains("q0 --a/3--> q0"), "{err}");
    let (_, _, code) = run(&["membership", "--automaton", "missing.aut", "--word", "(a)"]);
    assert_eq!(code, 2);
    let (_, err, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (_, _, code) = run(&["decide-index", "--spec", "linfa.aut", "--index", "P,2,1"]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["eliminate-index", "--spec", "firstbit.aut", "--index", "P,1,2", "--kind", "nd"][..],
        &["algebra", "--automaton", "linfa.aut", "fina.aut"],
        &["dot", "--input", "mixed.game", "--solve"],
        &["eliminate-game", "--spec", "shift.aut", "--route", "strategies"],
    ] {
        assert_eq!(run(args), run(args), "gamequant {}", args.join(" "));
    }
}
