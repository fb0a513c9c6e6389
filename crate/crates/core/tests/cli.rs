mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;
use tempfile::TempDir;

fn sptag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sptag"))
        .args(args)
        .env_clear()
        .output()
        .expect("run sptag")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trained(dir: &TempDir) -> std::path::PathBuf {
    let model = dir.path().join("m.txt");
    let o = sptag(&["train", path(&fixture("train.vrt")), "--output", path(&model)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    model
}

#[test]
fn tagset_dumps_and_filters() {
    let o = sptag(&["tagset"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 493);
    assert!(stderr(&o).is_empty());

    let o = sptag(&["tagset", "--category=portmanteau"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(rows, ["PAL", "PDEL"]);

    let o = sptag(&["tagset", "--filter", "category=noun,subcategory=temporal"]);
    assert_eq!(stdout(&o).lines().count(), 5);

    assert_eq!(sptag(&["tagset", "--filter", "colour=red"]).status.code(), Some(2));
    assert_eq!(sptag(&["tagset", "--bogus"]).status.code(), Some(2));
    assert_eq!(sptag(&[]).status.code(), Some(2));
    assert_eq!(sptag(&["--help"]).status.code(), Some(0));
}

#[test]
fn validate_exit_codes() {
    let o = sptag(&["validate", path(&fixture("train.vrt"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let o = sptag(&["validate", path(&fixture("badtag.vrt"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert!(stderr(&o).contains("BADTAG"));

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.vrt");
    std::fs::write(&bad, "mesa NCFS\n").unwrap();
    let o = sptag(&["validate", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1"));

    let rules = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/rules/agreement.rules");
    let disagree = dir.path().join("disagree.vrt");
    std::fs::write(&disagree, "la\tARTDFS\ncasa\tNCMS\n\n").unwrap();
    let o = sptag(&["validate", path(&disagree), "--rules", path(&rules)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
    assert_eq!(sptag(&["validate", path(&disagree)]).status.code(), Some(0));

    assert_eq!(sptag(&["validate", "/nonexistent/x.vrt"]).status.code(), Some(2));
}

#[test]
fn train_then_tag() {
    let dir = TempDir::new().unwrap();
    let o = sptag(&["train", path(&fixture("train.vrt")), "--output", path(&dir.path().join("m.txt"))]);
    assert!(stdout(&o).contains("tokens\t34"), "{}", stdout(&o));
    let model = trained(&dir);

    let o = sptag(&["tag", "--lexicon", "seed", "--model", path(&model), path(&fixture("question.txt"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("¿\tIQUEST"));
    assert_eq!(out.lines().nth(4), Some("?\t?"));
    assert!(out.ends_with("?\t?\n\n"));

    let out_file = dir.path().join("out.vrt");
    let o = sptag(&[
        "tag", "--model", path(&model), "--jobs", "3", "-o", path(&out_file), path(&fixture("question.txt")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(&out_file).unwrap(), out);

    assert_eq!(sptag(&["tag", path(&fixture("question.txt"))]).status.code(), Some(2));
    let o = sptag(&["tag", "--model", "/nonexistent", path(&fixture("question.txt"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn saturated_rules_flag_the_sentence() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let rules = dir.path().join("all.rules");
    std::fs::write(&rules, "FORBID * *\n").unwrap();
    let o = sptag(&["tag", "--model", path(&model), "--rules", path(&rules), path(&fixture("question.txt"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("#FALLBACK\n¿\tIQUEST\n"));
    assert!(stderr(&o).contains("sentence 1"));
}

#[test]
fn tagging_is_deterministic_across_job_counts() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let text = dir.path().join("long.txt");
    std::fs::write(&text, "La mesa es grande. ¿Dónde está el gato? Hay dos libros del barrio. ".repeat(30)).unwrap();
    let run = |jobs: &str| stdout(&sptag(&["tag", "--model", path(&model), "--jobs", jobs, path(&text)]));
    let one = run("1");
    assert_eq!(one.matches("\n\n").count(), 90);
    assert_eq!(run("4"), one);
    assert_eq!(run("8"), one);
}

#[test]
fn eval_reports_accuracy() {
    let o = sptag(&["eval", path(&fixture("gold10.vrt")), path(&fixture("pred10.vrt"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("accuracy\t0.900000"), "{out}");
    assert!(out.contains("ADVLP\tADVL\t1"));

    let o = sptag(&["eval", path(&fixture("gold10.vrt")), path(&fixture("train.vrt"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("position"));
}

#[test]
fn tokenize_lists_textwords() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("t.txt");
    std::fs::write(&text, "Vino al cine. Adiós").unwrap();
    let o = sptag(&["tokenize", path(&text)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "Vino\tword\t0\t4\nal\tportmanteau-part\t5\t7\ncine\tword\t8\t12\n.\tpunctuation\t12\t13\n\nAdiós\tword\t14\t20\n\n"
    );
}
