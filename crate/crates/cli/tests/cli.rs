use std::fs;
use std::path::Path;

use stormer_cli::{run, ResultFile, EXIT_FAILURE, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE};

fn stormer(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["stormer"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn xs(file: &ResultFile) -> Vec<String> {
    file.records.iter().map(|r| r.x.to_string()).collect()
}

#[test]
fn search_matches_oracle_below_limit() {
    let dir = tempfile::tempdir().unwrap();
    let s7 = dir.path().join("s7.txt");
    let (code, _, err) = stormer(&["search", "--k", "7", "--out", path_str(&s7)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let search = ResultFile::parse(&fs::read_to_string(&s7).unwrap()).unwrap();
    assert!(search.complete);

    let (code, text, _) = stormer(&["oracle", "--k", "7", "--limit", "1000000"]);
    assert_eq!(code, EXIT_OK);
    let oracle = ResultFile::parse(&text).unwrap();
    let below: Vec<_> = search
        .records
        .iter()
        .filter(|r| r.x <= 1_000_000.into())
        .cloned()
        .collect();
    // Oracle records carry the same d, n and exponents.
    assert_eq!(below, oracle.records);
}

#[test]
fn output_does_not_depend_on_jobs_or_interruption() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.txt");
    let resumed = dir.path().join("resumed.txt");
    let ck = dir.path().join("k7.ckpt");
    assert_eq!(
        stormer(&["search", "--k", "7", "--out", path_str(&plain)]).0,
        EXIT_OK
    );

    let base = [
        "search",
        "--k",
        "7",
        "--jobs",
        "3",
        "--chunk-size",
        "2",
        "--checkpoint",
        path_str(&ck),
    ];
    let mut first = base.to_vec();
    first.extend(["--stop-after-chunks", "3", "--out", path_str(&resumed)]);
    let (code, _, err) = stormer(&first);
    assert_eq!(code, EXIT_INCOMPLETE, "{err}");
    assert!(!resumed.exists());

    // A second run without --resume must not touch the checkpoint.
    let (code, _, err) = stormer(&base);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("resume"), "{err}");

    let mut again = base.to_vec();
    again.extend(["--resume", "--out", path_str(&resumed)]);
    assert_eq!(stormer(&again).0, EXIT_OK);
    assert_eq!(fs::read(&plain).unwrap(), fs::read(&resumed).unwrap());

    // Resuming with another bound is refused.
    let mut other = again.clone();
    other[2] = "11";
    assert_eq!(stormer(&other).0, EXIT_USAGE);
}

#[test]
fn verify_accepts_search_output_and_flags_bad_records() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.txt");
    assert_eq!(
        stormer(&["search", "--k", "7", "--out", path_str(&f)]).0,
        EXIT_OK
    );
    let (code, out, _) = stormer(&["verify", path_str(&f)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("29 passed, 0 failed"), "{out}");

    // 10² − 1 = 99 = 9·11 is not 7-smooth.
    let bad = "stormer-results 1\nsource=claims\nk=7\nbasis=2,3,5,7\ncomplete=false\nlimit=none\naudit=0\nx=9\nx=10\nrecords=2\n";
    fs::write(&f, bad).unwrap();
    let (code, out, _) = stormer(&["verify", path_str(&f)]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("FAIL x=10"), "{out}");
    assert!(out.contains("pass x=9"), "{out}");

    // A wrong tower index is caught too.
    let bad = "stormer-results 1\nsource=claims\nk=7\nbasis=\ncomplete=false\nlimit=none\naudit=0\nx=7 d=3 n=1\nrecords=1\n";
    fs::write(&f, bad).unwrap();
    let (code, out, _) = stormer(&["verify", path_str(&f)]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("n=1 but x is power 2"), "{out}");
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    fs::write(
        &f,
        "stormer-results 1\nsource=search\nk=7\nbasis=2,3,5,7\ncomplete=true\nlimit=none\naudit=0\nx=2 d=3\nx=oops\nrecords=2\n",
    )
    .unwrap();
    let (code, _, err) = stormer(&["verify", path_str(&f)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 9"), "{err}");
}

#[test]
fn report_on_toy_bound() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s3.txt");
    assert_eq!(
        stormer(&["search", "--k", "3", "--out", path_str(&f)]).0,
        EXIT_OK
    );
    let file = ResultFile::parse(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(xs(&file), ["2", "3", "5", "7", "17"]);
    let (code, out, _) = stormer(&["report", path_str(&f)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solutions: 5\n"), "{out}");
    assert!(out.contains("1. 17 "), "{out}");
    assert!(
        out.contains("k=1: 1 solutions, agrees with the conjectured list: (3; 3)"),
        "{out}"
    );
    assert!(out.contains("k=2: 3 solutions, agrees"), "{out}");
    assert!(
        out.contains("n=1: 8 (first pair from the odd solution 17)\n"),
        "{out}"
    );
    assert!(
        out.contains("n=3: 1 (first pair from the odd solution 3)\nn=4: none"),
        "{out}"
    );
}

#[test]
fn report_refuses_incomplete_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("o.txt");
    assert_eq!(
        stormer(&[
            "oracle",
            "--k",
            "5",
            "--limit",
            "100",
            "--out",
            path_str(&f)
        ])
        .0,
        EXIT_OK
    );
    let (code, _, err) = stormer(&["report", path_str(&f)]);
    assert_eq!(code, EXIT_INCOMPLETE);
    assert!(err.contains("not complete"), "{err}");

    let (code, out, err) = stormer(&["search", "--k", "5", "--mode", "compact", "--budget", "0"]);
    assert_eq!(code, EXIT_INCOMPLETE);
    assert!(err.contains("7 moduli skipped"), "{err}");
    fs::write(&f, out).unwrap();
    let (code, _, err) = stormer(&["report", path_str(&f)]);
    assert_eq!(code, EXIT_INCOMPLETE);
    assert!(err.contains("skip") || err.contains("skipped"), "{err}");
}

#[test]
fn oracle_small_limit() {
    let (code, out, _) = stormer(&["oracle", "--k", "5", "--limit", "2"]);
    assert_eq!(code, EXIT_OK);
    let f = ResultFile::parse(&out).unwrap();
    assert_eq!(xs(&f), ["2"]);
    assert_eq!(f.limit, Some(2));
}

#[test]
fn pell_inspector() {
    let (code, out, _) = stormer(&["pell", "--d", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("x1 = 2\ny1 = 1\n"), "{out}");
    assert!(out.contains("R* = 1.3169578969"), "{out}");

    let (_, out, _) = stormer(&["pell", "--d", "5"]);
    assert!(out.contains("x1 = 9\ny1 = 4\n"), "{out}");
    assert!(out.contains("norm of the fundamental unit: -1"), "{out}");

    // (2 + √3)^18, by direct multiplication.
    let (mut x, mut y) = (2u128, 1u128);
    for _ in 1..18 {
        (x, y) = (2 * x + 3 * y, x + 2 * y);
    }
    let (_, out, _) = stormer(&["pell", "--d", "3", "--n", "18"]);
    assert!(out.contains(&format!("x18 = {x}\ny18 = {y}\n")), "{out}");

    let (_, out, _) = stormer(&["pell", "--d", "3", "--n", "18", "--mod", "1000"]);
    assert!(
        out.contains(&format!("x18 mod 1000 = {}\n", x % 1000)),
        "{out}"
    );

    // The compact route gives the same residues.
    let (_, out, _) = stormer(&[
        "pell", "--d", "3", "--n", "18", "--mod", "1000", "--mode", "compact",
    ]);
    assert!(out.contains("compact representation: 1 parts"), "{out}");
    assert!(
        out.contains(&format!("x18 mod 1000 = {}\n", x % 1000)),
        "{out}"
    );

    assert_eq!(stormer(&["pell", "--d", "9"]).0, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(stormer(&["search"]).0, EXIT_USAGE);
    assert_eq!(
        stormer(&["search", "--k", "7", "--mode", "fast"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        stormer(&["search", "--k", "7", "--tolerance", "1.5"]).0,
        EXIT_USAGE
    );
    assert_eq!(stormer(&["search", "--k", "1"]).0, EXIT_USAGE);
    assert_eq!(stormer(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(stormer(&["--help"]).0, EXIT_OK);
}
