use std::process::{Command, Output};

fn charsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charsum"))
        .args(args)
        .env_remove("CHARSUM_SIZE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn single_count_record() {
    let out = charsum(&["count", "--q", "13", "--e", "2", "--d", "3", "--a", "1", "--b", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 1);
    let row = rows[0].as_object().unwrap();
    let mut keys: Vec<&str> = row.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    let mut want = ["q", "e", "d", "a", "b", "formula_re", "formula_im", "oracle", "match", "disc", "ms"];
    want.sort_unstable();
    assert_eq!(keys, want);
    assert_eq!(row["match"], true);
    // y² = x³ + x + 1 over F_13, counted by hand from the squares table
    let squares: Vec<u64> = (0..13).map(|y| y * y % 13).collect();
    let n = (0..13u64)
        .map(|x| squares.iter().filter(|&&s| s == (x * x * x + x + 1) % 13).count())
        .sum::<usize>();
    assert_eq!(row["oracle"], n as u64);
}

#[test]
fn csv_sweep() {
    let out = charsum(&["count", "--q", "13", "--e", "2", "--d", "3", "--sweep", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 145);
    assert!(lines[0].starts_with("q,e,d,a,b,formula_re,formula_im,oracle,match,disc,ms"));
    assert!(lines[1..].iter().all(|l| l.split(',').nth(8) == Some("true")));
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["count", "--q", "14", "--e", "2", "--d", "3"][..],
        &["count", "--q", "13", "--e", "3", "--d", "4"],
        &["count", "--q", "13", "--e", "2", "--d", "3", "--a", "0", "--b", "1"],
        &["verify", "--suite", "unknown"],
        &["verify", "--suite", "special-values", "--q", "19"],
        &["eval", "hf", "--q", "13", "--upper", "1,5", "--lower", "", "--x", "1"],
        &["count", "--e", "2"],
    ] {
        assert_eq!(charsum(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn size_cap_from_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_charsum"))
            .args(["eval", "gauss", "--q", "61", "--m", "1"])
            .env("CHARSUM_SIZE_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("50").status.code(), Some(2));
    assert_eq!(run("100").status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let out = charsum(&["verify", "--suite", "lemmas", "--q", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_lines(&out).iter().all(|r| r["match"] == true));
    let out = charsum(&["verify", "--suite", "davenport-hasse", "--q", "13", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out).len(), 1);
    for suite in ["binom-props", "special-values", "cor42", "edwards", "lennon"] {
        let out = charsum(&["verify", "--suite", suite, "--q", "13"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
    }
    let out = charsum(&["verify", "--suite", "e34", "--q", "37", "--samples", "5", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out).len(), 5);
}

#[test]
fn mismatch_exits_1() {
    // α = β makes the Edwards curve reducible; the formula does not apply
    let out = charsum(&["verify", "--suite", "edwards", "--q", "13", "--a", "2", "--b", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_lines(&out)[0]["match"], false);
}

#[test]
fn eval_values() {
    let value = |args: &[&str]| -> (f64, f64) {
        let out = charsum(args);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        let mut parts = text.split_whitespace();
        let re = parts.next().unwrap().parse().unwrap();
        let im = parts.next().unwrap().trim_end_matches('i').parse().unwrap();
        (re, im)
    };
    let (re, im) = value(&["eval", "gauss", "--q", "13", "--m", "0"]);
    assert!((re + 1.0).abs() < 1e-9 && im.abs() < 1e-9);
    let (re, im) = value(&["eval", "gauss", "--q", "13", "--m", "6"]);
    assert!((re - 13f64.sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
    let (re, im) = value(&["eval", "hf", "--q", "13", "--upper", "1,5", "--lower", "6", "--x", "0"]);
    assert_eq!((re, im), (0.0, 0.0));
    let (re, _) = value(&["eval", "jacobi", "--q", "13", "--m", "0", "--k", "0"]);
    assert!((re - 11.0).abs() < 1e-9);
    let (re, _) = value(&["eval", "binom", "--q", "13", "--m", "0", "--k", "0"]);
    assert!((re - 11.0 / 13.0).abs() < 1e-9);
    // quadratic Gauss sum of F_9 is -(i√3)² = 3
    let (re, _) = value(&["eval", "gauss", "--p", "3", "--n", "2", "--m", "4"]);
    assert!((re - 3.0).abs() < 1e-9);
    let (re, _) = value(&["eval", "gauss", "--p", "5", "--n", "2", "--m", "12"]);
    assert!((re + 5.0).abs() < 1e-9);
}

#[test]
fn seeded_runs_are_reproducible() {
    let strip = |out: Output| -> Vec<serde_json::Value> {
        json_lines(&out)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("ms");
                v
            })
            .collect()
    };
    let args = ["count", "--q", "37", "--e", "3", "--d", "4", "--samples", "30", "--seed", "11"];
    let first = strip(charsum(&args));
    assert_eq!(first.len(), 30);
    assert_eq!(first, strip(charsum(&args)));
    let other = strip(charsum(&["count", "--q", "37", "--e", "3", "--d", "4", "--samples", "30", "--seed", "12"]));
    assert_ne!(first, other);
}

#[test]
fn extension_field_literals() {
    let out = charsum(&["count", "--p", "5", "--n", "2", "--e", "2", "--d", "3", "--a", "1,1", "--b", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json_lines(&out)[0];
    assert_eq!(row["a"], "1,1");
    assert_eq!(row["q"], 25);
}
