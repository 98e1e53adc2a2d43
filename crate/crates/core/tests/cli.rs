use std::process::{Command, Output};

use serde_json::Value;
use trisparse::{FieldCtx, Level, Polynomial};

fn trisparse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisparse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_reports() {
    let o = trisparse(&["check", "--q", "3", "--n", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "sparse: true (64 = 2^6; base primes of 8: {2})\n"
    );

    let o = trisparse(&["check", "--q", "3", "--n", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "sparse: false (offending prime 7 ∤ 8)\n");

    let o = trisparse(&["check", "--q", "3", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("characteristic 3 divides n; coprime part 2"));
}

#[test]
fn check_verify_and_expressions() {
    let o = trisparse(&["check", "--q", "9", "--n", "2^4*5", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("sparse: true (80 = 2^4 * 5; base primes of 80: {2, 5})"));
    let o = trisparse(&["check", "--q", "5", "--n", "7", "--verify"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn factor_examples() {
    let o = trisparse(&["factor", "--q", "3", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "X + 1\nX + 2\nX^2 + 1\nX^2 + X + 2\nX^2 + 2*X + 2\n"
    );

    let o = trisparse(&["factor", "--q", "9", "--n", "5", "--method", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "X + 2\nX^2 + (a+2)*X + 1\nX^2 + (2*a+2)*X + 1\n"
    );

    let o = trisparse(&["factor", "--q", "3", "--n", "1"]);
    assert_eq!(stdout(&o), "X + 2\n");
}

#[test]
fn factor_structured_on_nonsparse_is_negative() {
    let o = trisparse(&["factor", "--q", "3", "--n", "7", "--method", "structured"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--method oracle"));
}

#[test]
fn factor_with_repeated_roots() {
    let o = trisparse(&["factor", "--q", "3", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(X + 1)^3\n(X + 2)^3\n");
}

#[test]
fn cross_check_agrees() {
    for n in ["40", "80", "400"] {
        let o = trisparse(&[
            "factor",
            "--q",
            "9",
            "--n",
            n,
            "--method",
            "structured",
            "--cross-check",
        ]);
        assert_eq!(o.status.code(), Some(0), "n = {n}: {}", stderr(&o));
    }
}

#[test]
fn factor_json_round_trips() {
    for (q, n) in [(3u64, 16u64), (9, 40), (5, 24), (7, 6)] {
        let o = trisparse(&[
            "factor",
            "--q",
            &q.to_string(),
            "--n",
            &n.to_string(),
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(doc["q"], q);
        assert_eq!(doc["n"], n);
        let ctx = FieldCtx::from_order(q, None).unwrap();
        assert_eq!(doc["r"], ctx.characteristic());
        assert_eq!(doc["k"], ctx.degree());
        assert_eq!(doc["modulus"], serde_json::json!(ctx.modulus()));
        let mut product = Polynomial::one(&ctx, Level::Base);
        let mut max_weight = 0;
        for f in doc["factors"].as_array().unwrap() {
            let coeffs: Vec<Vec<u64>> = serde_json::from_value(f["coeffs"].clone()).unwrap();
            let g = Polynomial::from_digit_vectors(&ctx, Level::Base, &coeffs).unwrap();
            assert_eq!(f["weight"], g.weight());
            assert_eq!(f["degree"], g.degree().unwrap());
            max_weight = max_weight.max(g.weight());
            product = &product * &g.pow(f["multiplicity"].as_u64().unwrap());
        }
        assert_eq!(product, Polynomial::x_pow_minus_one(&ctx, n as usize));
        assert_eq!(doc["sparse"], max_weight <= 3);
    }
}

#[test]
fn other_subcommands() {
    let o = trisparse(&["cyclo", "--q", "3", "--d", "8"]);
    assert_eq!(stdout(&o), "X^4 + 1\n");

    let o = trisparse(&["order", "--base", "3", "--mod", "16"]);
    assert_eq!(stdout(&o), "4\n");
    let o = trisparse(&["order", "--base", "3", "--mod", "8", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2\n"));

    let o = trisparse(&["enumerate", "--q", "3", "--bound", "40"]);
    assert_eq!(stdout(&o), "1, 2, 4, 8, 16, 32\n");

    let o = trisparse(&["witness", "--q", "3", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "X^6 + X^5 + X^4 + X^3 + X^2 + X + 1\nweight 7 ≥ 4 ⇒ X^7−1 not 3-sparse over F_3\n"
    );
}

#[test]
fn domain_errors_exit_two() {
    for args in [
        vec!["check", "--q", "12", "--n", "4"],
        vec!["check", "--q", "4", "--n", "3"],
        vec!["check", "--q", "3", "--n", "0"],
        vec!["witness", "--q", "3", "--p", "2"],
        vec!["witness", "--q", "3", "--p", "3"],
        vec!["cyclo", "--q", "3", "--d", "6"],
        vec!["order", "--base", "3", "--mod", "6"],
        vec!["factor", "--q", "9", "--modulus", "1,1,1", "--n", "4"],
        vec!["check", "--q", "3"],
        vec!["frobnicate"],
    ] {
        let o = trisparse(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "factor", "--q", "25", "--n", "312", "--format", "json", "--seed", "7",
    ];
    let first = trisparse(&args);
    let second = trisparse(&args);
    assert_eq!(first.stdout, second.stdout);
    let other_seed = trisparse(&["factor", "--q", "25", "--n", "312", "--format", "json"]);
    assert_eq!(first.stdout, other_seed.stdout);
}

#[test]
fn out_file_holds_json() {
    let dir = std::env::temp_dir().join(format!("trisparse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("factors.json");
    let o = trisparse(&[
        "factor",
        "--q",
        "3",
        "--n",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["factors"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}
