use std::path::PathBuf;

use serde_json::Value;
use zxdiff::cli::run_with;
use zxdiff::hamiltonian::IsingHamiltonian;
use zxdiff::io::serialize;
use zxdiff::{PhaseExpr, Term};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Out {
    let mut argv = vec!["zxdiff".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn fixture(name: &str, contents: &str) -> String {
    let dir: PathBuf = std::env::temp_dir().join(format!("zxdiff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn matrix(out: &str) -> Vec<Vec<(f64, f64)>> {
    let v: Value = serde_json::from_str(out).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| (z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

fn close(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(r, s)| {
            r.len() == s.len()
                && r.iter().zip(s).all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
        })
}

#[test]
fn add_reproduces_all_ones() {
    let a = fixture("cap.zx", &serialize(&Term::cap()));
    let b = fixture("xpi.zx", &serialize(&Term::xq(0, 2, 4)));
    let out = run(&["add", &a, &b, "--eval"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let ones = vec![vec![(1.0, 0.0)]; 4];
    assert!(close(&matrix(&out.stdout), &ones, 1e-9), "{}", out.stdout);
}

#[test]
fn matrix_derivative_of_constant_is_zero() {
    let f = fixture("h.zx", &serialize(&Term::h()));
    let out = run(&["diff", &f, "--method", "matrix", "--var", "beta", "--at", "0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(close(&matrix(&out.stdout), &vec![vec![(0.0, 0.0); 2]; 2], 0.0));
}

#[test]
fn four_diff_methods_agree() {
    let t = Term::z(1, 1, PhaseExpr::var("beta", 2) + PhaseExpr::quarter(1)).then(&Term::h()).then(&Term::x(
        1,
        2,
        PhaseExpr::var("beta", -1),
    ));
    let f = fixture("param.zx", &serialize(&t));
    let results: Vec<_> = ["controlizer", "factored", "pair", "matrix"]
        .iter()
        .map(|m| {
            let out = run(&["diff", &f, "--method", m, "--var", "beta", "--at", "0.7"]);
            assert_eq!(out.code, 0, "{m}: {}", out.stderr);
            matrix(&out.stdout)
        })
        .collect();
    for r in &results[1..] {
        assert!(close(&results[0], r, 1e-5));
    }
}

#[test]
fn ising_hamiltonian_then_interp() {
    let h = fixture("h.json", r#"{"n":2,"linear":{"1":1,"2":-1},"quadratic":{"1,2":1}}"#);
    let out = run(&["ising", &h, "--emit", "hamiltonian"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let d = fixture("hd.zx", &out.stdout);
    let m = run(&["interp", &d, "--eval"]);
    assert_eq!(m.code, 0, "{}", m.stderr);
    let mut want = vec![vec![(0.0, 0.0); 4]; 4];
    for (k, e) in [1.0, 1.0, -3.0, 1.0].into_iter().enumerate() {
        want[k][k] = (e, 0.0);
    }
    assert!(close(&matrix(&m.stdout), &want, 1e-9));
    let direct = run(&["ising", &h, "--emit", "matrix"]);
    assert!(close(&matrix(&direct.stdout), &want, 0.0));
    assert_eq!(IsingHamiltonian::from_json(&std::fs::read_to_string(&h).unwrap()).unwrap().n_qubits, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["diff", "x.zx", "--method", "nope", "--var", "b"]).code, 2);
    assert_eq!(run(&["interp", "/nonexistent/file.zx"]).code, 2);
    let bad = fixture(
        "bad.zx",
        r#"{"op":"compose","later":{"op":"gen","kind":"cup"},"earlier":{"op":"gen","kind":"h"}}"#,
    );
    let out = run(&["interp", &bad]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("ArityMismatch"), "{}", out.stderr);
    let p = fixture("p.zx", &serialize(&Term::z(1, 1, PhaseExpr::var("beta", 1))));
    let out = run(&["interp", &p, "--eval"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("UnboundVariable"));
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn check_cs_and_controlize() {
    let f = fixture("zx.zx", &serialize(&Term::zq(1, 2, 1)));
    let c = run(&["controlize", &f]);
    assert_eq!(c.code, 0);
    let cf = fixture("c.zx", &c.stdout);
    assert_eq!(run(&["check-cs", &cf]).stdout.trim(), "true");
    let id = fixture("id.zx", &serialize(&Term::zq(1, 1, 0)));
    assert_eq!(run(&["check-cs", &id]).stdout.trim(), "false");
}

#[test]
fn exports() {
    let f = fixture("e.zx", &serialize(&Term::h().then(&Term::zq(1, 2, 2))));
    let dot = run(&["export", &f, "--format", "dot"]);
    assert!(dot.stdout.starts_with("graph zx {"));
    let tikz = run(&["export", &f, "--format", "tikz"]);
    assert!(tikz.stdout.contains("\\begin{tikzpicture}"));
    let json = run(&["export", &f]);
    assert_eq!(json.stdout.trim(), std::fs::read_to_string(&f).unwrap());
}

#[test]
fn axioms_check_passes_and_is_deterministic() {
    let a = run(&["axioms-check", "--seed", "5"]);
    let b = run(&["axioms-check", "--seed", "5"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("FAIL"));
    assert_eq!(run(&["axioms-check", "--tol=-1"]).code, 1);
}
