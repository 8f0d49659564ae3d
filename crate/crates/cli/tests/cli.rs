use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rolkit::classify::ClassName;
use rolkit::enumerate::enumerate_class;
use rolkit::fixtures;
use rolkit::format::{parse_alg, parse_catalog, write_alg};
use rolkit::ops::residuate;

fn rolkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rolkit"))
        .args(args)
        .env_remove("ROLKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_reports_membership() {
    let dir = tempfile::tempdir().unwrap();
    let b6 = write(dir.path(), "b6.alg", &write_alg(&fixtures::b6()));
    let out = rolkit(&["check", p(&b6)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "bil: yes\nol: yes\noml: no\nrol: yes\n");

    let out = rolkit(&["check", p(&b6), "--class", "oml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("oml: no — B6 subalgebra"));
    assert!(stdout(&out).contains("B6 subalgebra {0,na,nb,a,b,1}"));

    let out = rolkit(&["check", p(&b6), "--class", "rol"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "rol: yes (residual computed)\n");

    let b6r = write(dir.path(), "b6r.alg", &write_alg(&residuate(&fixtures::b6()).unwrap()));
    let out = rolkit(&["check", p(&b6r), "--class", "rol"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "rol: yes (residual verified)\n");
}

#[test]
fn check_explains_missing_residual() {
    let dir = tempfile::tempdir().unwrap();
    let nf = write(dir.path(), "nf.alg", &write_alg(&fixtures::nonflexible()));
    let out = rolkit(&["check", p(&nf)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "bil: yes\nol: yes\noml: no\nrol: no\n");
    let out = rolkit(&["check", p(&nf), "--class", "rol"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("rol: no — NoMaximum(z,0)"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.alg", "alg 1\nsize 3\n");
    let out = rolkit(&["check", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("rolkit: "));
    let out = rolkit(&["check", p(&dir.path().join("missing.alg"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_writes_a_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rol8.cat");
    let out = rolkit(&["enumerate", "--size", "8", "--class", "rol", "--out", p(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let cat = parse_catalog(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cat.class, ClassName::Rol);
    assert_eq!(cat.algebras, enumerate_class(8, ClassName::Rol).unwrap().algebras);
    assert!(stdout(&out).contains('4'));
}

#[test]
fn sizes_above_ten_need_deep() {
    let out = rolkit(&["counts", "--max", "11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--deep"));
    let out = rolkit(&["enumerate", "--size", "13", "--class", "ol", "--deep"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counts_prints_a_table() {
    let out = rolkit(&["counts", "--max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n\tomls\trols\n2\t1\t1\n3\t0\t0\n4\t1\t1\n5\t0\t0\n6\t1\t2\n7\t0\t0\n8\t2\t4\n"
    );
}

#[test]
fn thread_count_comes_from_the_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_rolkit"))
            .args(["counts", "--max", "10"])
            .env("ROLKIT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    for bad in ["0", "many", ""] {
        let out = run(bad);
        assert_eq!(out.status.code(), Some(2), "ROLKIT_THREADS={bad:?}");
        assert!(stderr(&out).contains("ROLKIT_THREADS"));
    }
}

#[test]
fn residuate_and_bar() {
    let dir = tempfile::tempdir().unwrap();
    let bare = write(dir.path(), "b6.alg", &write_alg(&fixtures::b6().without_residual()));
    let res_path = dir.path().join("b6r.alg");
    let out = rolkit(&["residuate", p(&bare), "--out", p(&res_path)]);
    assert_eq!(out.status.code(), Some(0));
    let b6r = parse_alg(&fs::read_to_string(&res_path).unwrap()).unwrap();
    assert_eq!(b6r.residual(), Some(&fixtures::b6_reference_residual()));

    let out = rolkit(&["bar", p(&res_path)]);
    assert_eq!(out.status.code(), Some(0));
    let image = parse_alg(&stdout(&out)).unwrap();
    assert_eq!(image.size(), 4);

    let nf = write(dir.path(), "nf.alg", &write_alg(&fixtures::nonflexible()));
    assert_eq!(rolkit(&["residuate", p(&nf)]).status.code(), Some(1));
}

#[test]
fn props_passes_on_b6_and_fails_on_the_nonflexible_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let b6 = write(dir.path(), "b6.alg", &write_alg(&fixtures::b6()));
    let out = rolkit(&["props", p(&b6)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));

    let nf = write(dir.path(), "nf.alg", &write_alg(&fixtures::nonflexible()));
    let out = rolkit(&["props", p(&nf)]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].contains("flexible"));
}

#[test]
fn translate_rewrites_negations() {
    let out = rolkit(&["translate", "x \\ y = x -> y"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "!x \\ !y = ~!x v !x ^ !y\n");
    let out = rolkit(&["translate", "--core", "--", "-x"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "((x \\ 0) \\ 0) \\ 0\n");
    assert_eq!(rolkit(&["translate", "x ^"]).status.code(), Some(2));
}

#[test]
fn congruences_in_both_signatures() {
    let dir = tempfile::tempdir().unwrap();
    let b6 = write(dir.path(), "b6.alg", &write_alg(&fixtures::b6()));
    let out = rolkit(&["congruences", p(&b6)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("5 congruences (ol signature)\n"));
    let out = rolkit(&["congruences", p(&b6), "--signature", "rol"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "2 congruences (rol signature)\n{0,na,nb,a,b,1}\n{0}{na}{nb}{a}{b}{1}\n1-regular: yes\n"
    );
}

#[test]
fn consequence_over_enumerated_catalogs() {
    let out = rolkit(&[
        "consequence",
        "--class",
        "oml",
        "--max-size",
        "8",
        "--goal",
        "x \\ y = x -> y",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result: holds over the catalog"));

    let out = rolkit(&[
        "consequence",
        "--class",
        "rol",
        "--max-size",
        "8",
        "--goal",
        "x \\ y = x -> y",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("result: counterexample"));
    assert!(text.contains("algebra: 3 (size 6)"));
}

#[test]
fn consequence_over_catalog_files_and_query_files() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("rol6.cat");
    let out = rolkit(&["enumerate", "--size", "6", "--class", "rol", "--out", p(&cat)]);
    assert_eq!(out.status.code(), Some(0));
    let query = write(dir.path(), "q.txt", "premises:\n  x ^ y = x\ngoal: x \\ y = x -> y\n");
    let out = rolkit(&["consequence", "--catalog", p(&cat), "--query", p(&query)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("catalog: rol 6 (2 algebras)"));

    let out = rolkit(&[
        "consequence",
        "--catalog",
        p(&cat),
        "--goal",
        "x1 ^ x2 ^ x3 ^ x4 ^ x5 = 0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = rolkit(&["consequence", "--catalog", p(&cat)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn translated_query_holds_over_residuated_catalogs() {
    let out = rolkit(&[
        "consequence",
        "--class",
        "rol",
        "--max-size",
        "8",
        "--goal",
        "x \\ y = x -> y",
        "--translate",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
