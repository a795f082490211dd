use std::path::PathBuf;
use std::process::{Command, Output};

use ffc_core::classifier::ClassificationRecord;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn ffc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffc"))
        .args(args)
        .env_remove("FFC_COLOR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_golden_manifest() {
    let o = ffc(&["classify", "--manifest", &data("golden/golden.json")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 14);
    for line in text.lines() {
        let rec: ClassificationRecord = serde_json::from_str(line).unwrap();
        assert!(!rec.classes.is_empty(), "{line}");
        assert_eq!(serde_json::to_string(&rec).unwrap(), line);
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let m = data("golden/golden.json");
    let one = ffc(&[
        "classify",
        "--manifest",
        &m,
        "--jobs",
        "1",
        "--emit-alignment",
    ]);
    let four = ffc(&[
        "classify",
        "--manifest",
        &m,
        "--jobs",
        "4",
        "--emit-alignment",
    ]);
    let again = ffc(&[
        "classify",
        "--manifest",
        &m,
        "--jobs",
        "4",
        "--emit-alignment",
    ]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let first: serde_json::Value =
        serde_json::from_str(stdout(&one).lines().next().unwrap()).unwrap();
    assert!(first["alignment"]["pairs"].is_array() && first["edge_diff"]["cfg_changed"].is_array());
}

#[test]
fn csv_row_for_missing_break() {
    let o = ffc(&[
        "classify",
        "--manifest",
        &data("golden/golden.json"),
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("project,id,order,jump,call,pred,guard,block,def,use\n"));
    assert!(
        text.lines().any(|l| l == "Lang,62,0,1,0,0,0,0,0,0"),
        "{text}"
    );
}

#[test]
fn empty_manifest_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, "[]").unwrap();
    let o = ffc(&[
        "classify",
        "--manifest",
        m.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "project,id,order,jump,call,pred,guard,block,def,use\n"
    );
}

#[test]
fn unclassifiable_entry_exits_one_with_entry_name() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("a.mj"), "void m() { x = 1; }").unwrap();
    std::fs::write(p.join("b.mj"), "void m() { x = 1; }").unwrap();
    std::fs::write(p.join("bad.mj"), "void m( { }").unwrap();
    let m = p.join("m.json");
    std::fs::write(
        &m,
        r#"[{"project":"P","id":"P-1","faulty":"a.mj","fixed":"b.mj","method":"m"},
            {"project":"P","id":"P-2","faulty":"a.mj","fixed":"bad.mj","method":"m"}]"#,
    )
    .unwrap();
    let o = ffc(&["classify", "--manifest", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("P-2"));
    // the good entry is still reported
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn table1_stats() {
    let o = ffc(&["stats", "--labels", &data("table1.csv"), "--table1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o).lines().last().unwrap(),
        "All,16,63,139,104,194,94,330,56,2.04,1.03,154,81,253,488"
    );
    let by = ffc(&["stats", "--labels", &data("table1.csv"), "--by-project"]);
    assert_eq!(stdout(&by).lines().count(), 9);
}

#[test]
fn label_stats_and_cooccurrence() {
    let labels = data("golden/golden_labels.csv");
    let t = stdout(&ffc(&["stats", "--labels", &labels]));
    assert_eq!(
        t.lines().last().unwrap(),
        "All,1,3,3,1,2,1,5,1,1.21,0.41,8,4,2,14"
    );
    let d = stdout(&ffc(&["stats", "--labels", &labels, "--distribution"]));
    assert_eq!(d.lines().last().unwrap(), "All,1,1,1,1,2,11,3,0,0,0,0,0,0");
    let c = stdout(&ffc(&["cooccur", "--labels", &labels]));
    assert!(
        c.lines()
            .any(|l| l == "use,0.0,0.0,100.0,0.0,0.0,0.0,0.0,100.0"),
        "{c}"
    );
}

#[test]
fn external_column_names() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("l.csv");
    std::fs::write(
        &labels,
        "proj,bug,order,jump,call,pred,guard,block,def,use\nLang,62,0,1,0,0,0,0,0,0\n",
    )
    .unwrap();
    let map = dir.path().join("cols.json");
    std::fs::write(&map, r#"{"project":"proj","id":"bug"}"#).unwrap();
    let o = ffc(&[
        "cooccur",
        "--labels",
        labels.to_str().unwrap(),
        "--columns",
        map.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let without = ffc(&["cooccur", "--labels", labels.to_str().unwrap()]);
    assert_eq!(without.status.code(), Some(1));
}

#[test]
fn compare_against_golden_labels() {
    let o = ffc(&[
        "compare",
        "--manifest",
        &data("golden/golden.json"),
        "--labels",
        &data("golden/golden_labels.csv"),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("id,relation,expected,actual\n"));
    assert_eq!(
        text.lines()
            .filter(|l| l.split(',').nth(1) == Some("exact"))
            .count(),
        14
    );
}

#[test]
fn colour_only_when_asked() {
    let args = [
        "classify",
        "--manifest",
        &data("golden/golden.json"),
        "--format",
        "text",
    ];
    assert!(!stdout(&ffc(&args)).contains('\x1b'));
    let coloured = Command::new(env!("CARGO_BIN_EXE_ffc"))
        .args(args)
        .env("FFC_COLOR", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8(coloured.stdout)
        .unwrap()
        .contains("\x1b[36mjump\x1b[0m"));
}

#[test]
fn graph_outputs() {
    let f = data("golden/lang55_fixed.mj");
    let dot = stdout(&ffc(&["graph", &f, "--method", "stop", "--dot"]));
    assert!(dot.starts_with("digraph flowgraph {"));
    let json = stdout(&ffc(&["graph", &f]));
    let g = ffc_core::flowgraph::import_graph(&json).unwrap();
    assert!(g
        .nodes
        .values()
        .any(|n| n.kind == ffc_core::flowgraph::NodeKind::Predicate
            && n.label.contains("this.runningState == STATE_RUNNING")));
}

#[test]
fn parse_outputs() {
    let f = data("golden/lang62_faulty.mj");
    let o = ffc(&["parse", &f]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("entityValue\t"));
    let ast = stdout(&ffc(&["parse", &f, "--emit-ast"]));
    let v: serde_json::Value = serde_json::from_str(&ast).unwrap();
    assert_eq!(v["methods"][0]["name"], "entityValue");
}

#[test]
fn exit_codes() {
    let missing = ffc(&["parse", "missing.mj"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.mj"));
    assert_eq!(ffc(&["classify"]).status.code(), Some(2));
    assert_eq!(
        ffc(&["stats", "--labels", "x", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ffc(&[
            "classify",
            "--manifest",
            &data("golden/golden.json"),
            "--jobs",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(ffc(&["bogus"]).status.code(), Some(2));
}
