//! Drives the installed binary over every subcommand and documented file
//! format, checking the exit-code contract (0 trivial, 1 nontrivial,
//! 2 error) and byte-for-byte determinism.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigUint;

use gwp::slp::Slp;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gwp")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(bin())
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Dir {
        let p = std::env::temp_dir().join(format!("gwp-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&p).unwrap();
        Dir(p)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_owned()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

// ---------------------------------------------------------------------------
// wp
// ---------------------------------------------------------------------------

#[test]
fn wp_exit_codes_and_json() {
    let d = Dir::new("wp");
    let f = d.file("w1.txt", "a a\n");
    assert_eq!(code(&run(&["wp", "--group", "grigorchuk", &f])), 0);
    assert_eq!(stdout(&run(&["wp", "--group", "grigorchuk", &f])), "TRIVIAL\n");

    let f = d.file("w2.txt", "x0\n");
    let o = run(&["wp", "--group", "thompson", &f]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "NONTRIVIAL\n");

    let f = d.file("w3.txt", "x0 x1 x1' x0'  # cancels freely\n");
    assert_eq!(code(&run(&["wp", "--group", "f2", &f])), 0);
    let f3 = d.file("w3b.txt", "x2 x2'\n");
    assert_eq!(code(&run(&["wp", "--group", "f3", &f3])), 0);

    let f = d.file("w4.txt", "s s s s s\n");
    assert_eq!(code(&run(&["wp", "--group", "a5", &f])), 0);

    let o = run(&["wp", "--group", "nosuch", &f]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown group"));

    let f = d.file("w5.txt", "t a t' a'\n");
    let o = run(&["wp", "--group", "wreath:a5", "--json", &f]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trivial"], serde_json::json!(false));
    assert_eq!(v["length"], serde_json::json!(4));

    // the same word dies at modulus 1 and a modulus on a plain group errors
    assert_eq!(code(&run(&["wp", "--group", "wreath:a5@mod=1", &f])), 0);
    assert_eq!(code(&run(&["wp", "--group", "a5@mod=3", &f])), 2);

    // wreath over each base group
    let f = d.file("w6.txt", "t b t' b t b t' b\n");
    assert_eq!(code(&run(&["wp", "--group", "wreath:grigorchuk", &f])), 0);
    let f = d.file("w7.txt", "t x0 t' x0'\n");
    assert_eq!(code(&run(&["wp", "--group", "wreath:f2", &f])), 1);
    assert_eq!(code(&run(&["wp", "--group", "wreath:thompson", &f])), 1);

    // identical invocations give identical bytes
    let a = run(&["wp", "--group", "wreath:thompson", "--json", &f]);
    let b = run(&["wp", "--group", "wreath:thompson", "--json", &f]);
    assert_eq!(a.stdout, b.stdout);
}

// ---------------------------------------------------------------------------
// cwp
// ---------------------------------------------------------------------------

#[test]
fn cwp_exit_codes_guard_and_wreath() {
    let d = Dir::new("cwp");
    // s^{61440}: the order of s divides the exponent, so this is trivial
    let mut text = String::from("start P12\nP0 -> s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s s\n");
    for i in 1..=12 {
        text.push_str(&format!("P{i} -> P{} P{}\n", i - 1, i - 1));
    }
    let f = d.file("pow.slp", &text);
    assert_eq!(code(&run(&["cwp", "--group", "a5", &f])), 0);

    // the expansion guard reports the exact length when exceeded
    let o = run_env(&["cwp", "--group", "a5", &f], "GWP_EXPAND_LIMIT", "1000");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("245760"), "stderr: {}", stderr(&o));
    let o = run(&["cwp", "--group", "a5", "--limit", "1_000", &f]);
    assert_eq!(code(&o), 2);

    let f = d.file("x.slp", "start S\nS -> a b a d a b a d\n");
    assert_eq!(code(&run(&["cwp", "--group", "grigorchuk", &f])), 1);

    let f = d.file("cyc.slp", "start S\nS -> A\nA -> S a\n");
    assert_eq!(code(&run(&["cwp", "--group", "grigorchuk", &f])), 2);

    // compressed wreath evaluation, with and without a modulus
    let mut text = String::from("start Q4\nQ0 -> t a\n");
    for i in 1..=4 {
        text.push_str(&format!("Q{i} -> Q{} Q{}\n", i - 1, i - 1));
    }
    let f = d.file("lamp.slp", &text);
    let o = run(&["cwp", "--group", "wreath:a5", "--json", &f]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["length"], serde_json::json!("32"));
    // (ta)^32 has shift 32 ≡ 0 mod 16, one a at every position: nontrivial
    assert_eq!(code(&run(&["cwp", "--group", "wreath:a5@mod=16", &f])), 1);
    // mod 1 stacks all 32 a's at position 0: a^32 ≠ 1, still nontrivial
    assert_eq!(code(&run(&["cwp", "--group", "wreath:a5@mod=1", &f])), 1);
    // a tight support limit aborts with an error
    let o = run(&["cwp", "--group", "wreath:a5", "--support-limit", "3", &f]);
    assert_eq!(code(&o), 2);
}

// ---------------------------------------------------------------------------
// slp subcommands
// ---------------------------------------------------------------------------

#[test]
fn slp_queries_match_expansion() {
    let d = Dir::new("slp");
    let f = d.file("g.slp", "start S\nS -> A A B\nA -> a t\nB -> a' 1 b\n");
    assert_eq!(stdout(&run(&["slp", "expand", &f])), "a t a t a' 1 b\n");
    assert_eq!(stdout(&run(&["slp", "length", &f])), "7\n");
    assert_eq!(stdout(&run(&["slp", "at", &f, "4"])), "a'\n");
    assert_eq!(stdout(&run(&["slp", "at", &f, "0"])), "a\n");
    assert_eq!(code(&run(&["slp", "at", &f, "7"])), 2);
    assert_eq!(stdout(&run(&["slp", "count", &f, "a"])), "2\n");
    assert_eq!(stdout(&run(&["slp", "count", &f, "b'"])), "0\n");

    let out = d.path("inv.slp");
    assert_eq!(
        code(&run(&["slp", "invert", &f, "--group", "wreath:a5", "--out", &out])),
        0
    );
    let inv = run(&["slp", "expand", &out]);
    assert_eq!(stdout(&inv), "b' 1 a t' a' t' a'\n");

    // numeric arguments accept underscores; the guard is overridable
    let mut text = String::from("start D20\nD0 -> a\n");
    for i in 1..=20 {
        text.push_str(&format!("D{i} -> D{} D{}\n", i - 1, i - 1));
    }
    let f = d.file("big.slp", &text);
    assert_eq!(stdout(&run(&["slp", "length", &f])), format!("{}\n", 1u64 << 20));
    assert_eq!(stdout(&run(&["slp", "at", &f, "1_000_000"])), "a\n");
    let o = run_env(&["slp", "expand", &f], "GWP_EXPAND_LIMIT", "5");
    assert_eq!(code(&o), 2);
}

// ---------------------------------------------------------------------------
// barrington subcommands
// ---------------------------------------------------------------------------

const CIRCUIT: &str = "nandtree\ndepth 2\ninputs 3\nleaf 00 1 0 1\nleaf 01 2 1 1\nleaf 10 3 0 0\nleaf 11 1 1 0\n";

#[test]
fn barrington_compile_run_check() {
    let d = Dir::new("bar");
    let c = d.file("c.nt", CIRCUIT);
    let p = d.path("p.gp");
    assert_eq!(code(&run(&["barrington", "compile", &c, "--provider", "a5", "--out", &p])), 0);
    let parsed = fs::read_to_string(&p).unwrap();
    assert!(parsed.starts_with("gprogram 3\n"));
    // 8^2 · L instructions for the A5 provider (leaf length L = 8)
    assert_eq!(parsed.lines().count(), 1 + 64 * 8);

    let o = run(&["barrington", "run", &p, "--provider", "a5", "--input", "000"]);
    assert!(code(&o) == 0 || code(&o) == 1);
    let text = stdout(&o);
    let mut lines = text.lines();
    let word_line = lines.next().unwrap();
    assert_eq!(word_line.split_whitespace().count(), 64 * 8);
    let verdict = lines.next().unwrap();
    assert!(verdict == "TRIVIAL" || verdict == "NONTRIVIAL");

    // wrong input length is an error
    assert_eq!(code(&run(&["barrington", "run", &p, "--provider", "a5", "--input", "00"])), 2);

    for prov in ["a5", "f2", "f3", "grigorchuk", "thompson"] {
        let o = run(&["barrington", "check", &c, "--provider", prov]);
        assert_eq!(code(&o), 0, "{prov}: {}", stdout(&o));
        assert!(stdout(&o).contains("all 8 inputs agree"));
    }
    let o = run(&["barrington", "check", &c, "--provider", "f3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], serde_json::json!(true));
    assert_eq!(v["inputs"], serde_json::json!(8));

    // determinism of the compiled artifact
    let p2 = d.path("p2.gp");
    run(&["barrington", "compile", &c, "--provider", "a5", "--out", &p2]);
    assert_eq!(fs::read(&p).unwrap(), fs::read(&p2).unwrap());

    let bad = d.file("bad.nt", "nandtree\ndepth 1\ninputs 1\nleaf 0 2 0 1\nleaf 1 1 0 1\n");
    assert_eq!(code(&run(&["barrington", "compile", &bad, "--provider", "a5"])), 2);
}

// ---------------------------------------------------------------------------
// sens
// ---------------------------------------------------------------------------

#[test]
fn sens_witnesses() {
    let o = run(&["sens", "--group", "f3", "--depth", "2"]);
    assert_eq!(code(&o), 0);
    // the depth-2 commutator over single-letter leaves has length 4² · 1
    assert_eq!(stdout(&o).split_whitespace().count(), 16);

    // F2 leaves x0^{-e} x1 x0^{e} are padded to the next power of two above
    // 2·2^d + 1, so depth 3 prints 32 tokens
    let o = run(&["sens", "--group", "f2", "--depth", "3", "--leaf", "010"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).split_whitespace().count(), 32);

    assert_eq!(code(&run(&["sens", "--group", "a5", "--depth", "3", "--leaf", "01"])), 2);
    assert_eq!(code(&run(&["sens", "--group", "nosuch", "--depth", "1"])), 2);

    for g in ["a5", "grigorchuk", "thompson"] {
        assert_eq!(code(&run(&["sens", "--group", g, "--depth", "2"])), 0);
    }
}

// ---------------------------------------------------------------------------
// cwpreduce
// ---------------------------------------------------------------------------

const ONE_HOT: &str =
    "circuit\ninputs 2\ngate hot = nand c0 c0\ngate cold = nand c1 c1\noutput 0 hot\noutput 1 cold\n";

#[test]
fn cwpreduce_outputs_and_verify() {
    let d = Dir::new("red");
    let c = d.file("c.ct", ONE_HOT);
    let j = d.path("j.slp");
    let i = d.path("i.slp");
    let data = d.path("data.txt");
    let o = run(&[
        "cwpreduce", &c, "--m1", "1", "--group", "wreath:a5", "--out-j", &j, "--out-i", &i,
        "--out-data", &data, "--verify", "--support-limit", "8_000_000",
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("preprocessing"));
    assert!(text.contains("verify OK: J nontrivial"));

    // the emitted SLPs parse and have balanced shift counts
    let slp_j = Slp::parse(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(slp_j.count("t"), slp_j.count("t'"));
    let slp_i = Slp::parse(&fs::read_to_string(&i).unwrap()).unwrap();
    assert_eq!(slp_i.count("t"), slp_i.count("t'"));
    let data_text = fs::read_to_string(&data).unwrap();
    assert!(data_text.starts_with("subsetsum\noutputs 2\n"));

    // determinism
    let j2 = d.path("j2.slp");
    run(&["cwpreduce", &c, "--m1", "1", "--group", "wreath:a5", "--out-j", &j2]);
    assert_eq!(fs::read(&j).unwrap(), fs::read(&j2).unwrap());

    // a circuit that is hot on both outputs reports the witness input
    let bad = d.file(
        "bad.ct",
        "circuit\ninputs 2\ngate hot = nand c0 c0\ngate hot2 = nand c0 c0\noutput 0 hot\noutput 1 hot2\n",
    );
    let o = run(&["cwpreduce", &bad, "--m1", "1", "--group", "wreath:a5", "--out-j", &j]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("00"), "stderr: {}", stderr(&o));

    // a non-wreath group is rejected
    let o = run(&["cwpreduce", &c, "--m1", "1", "--group", "a5", "--out-j", &j]);
    assert_eq!(code(&o), 2);
}

#[test]
fn cwpreduce_embed_is_letterwise_at_one_step() {
    let d = Dir::new("embed");
    let c = d.file("c.ct", ONE_HOT);
    let phi = d.file(
        "phi1.txt",
        "x0 -> x0 x0\nx0' -> x0' x0'\nx1 -> x1\nx1' -> x1'\nt -> x0 x1\nt' -> x1' x0'\n",
    );
    let j = d.path("j.slp");
    let je = d.path("je.slp");
    let o = run(&["cwpreduce", &c, "--m1", "1", "--group", "wreath:f2", "--out-j", &j]);
    assert_eq!(code(&o), 0);
    let o = run(&[
        "cwpreduce", &c, "--m1", "1", "--group", "wreath:f2", "--out-j", &je, "--embed",
        &format!("{phi},2,1"),
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));

    // with one iteration the embedding is letterwise substitution, so letter
    // counts transform linearly: |J'|_y = Σ_x |J|_x · |φ₁(x)|_y
    let plain = Slp::parse(&fs::read_to_string(&j).unwrap()).unwrap();
    let embedded = Slp::parse(&fs::read_to_string(&je).unwrap()).unwrap();
    let phi1: HashMap<&str, Vec<&str>> = [
        ("x0", vec!["x0", "x0"]),
        ("x0'", vec!["x0'", "x0'"]),
        ("x1", vec!["x1"]),
        ("x1'", vec!["x1'"]),
        ("t", vec!["x0", "x1"]),
        ("t'", vec!["x1'", "x0'"]),
    ]
    .into_iter()
    .collect();
    for target in ["x0", "x0'", "x1", "x1'"] {
        let mut want = BigUint::from(0u32);
        for (src, image) in &phi1 {
            let hits = image.iter().filter(|y| **y == target).count();
            want += plain.count(src) * BigUint::from(hits);
        }
        assert_eq!(embedded.count(target), want, "count of {target}");
    }
    // the embedded program is over the base letters only
    assert_eq!(embedded.count("t"), BigUint::from(0u32));
    assert_eq!(embedded.count("t'"), BigUint::from(0u32));

    // malformed embed specs are errors
    assert_eq!(
        code(&run(&["cwpreduce", &c, "--m1", "1", "--group", "wreath:f2", "--out-j", &je,
            "--embed", &format!("{phi},2")])),
        2
    );
    assert_eq!(
        code(&run(&["cwpreduce", &c, "--m1", "1", "--group", "wreath:f2", "--out-j", &je,
            "--embed", &format!("{phi},1,1")])),
        2
    );
}
