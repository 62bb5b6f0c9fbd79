use std::path::Path;
use std::process::{Command, Output};

use grouphull::group::{build_symmetry_action, coxeter_group, AnyMatGroup, CoxeterName, SymmetryOptions};
use grouphull::scalar::Rational;
use grouphull::store::{load_checkpoint, to_text, Metadata, OrbitDatabase};
use num_bigint::BigUint;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grouphull")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn group_command() {
    let o = run(&["group", "F4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("order 1152, dim 4"));
    let o = run(&["group", "H4"]);
    assert_eq!(stdout(&o).trim(), "order 14400, dim 4, field Q(sqrt 5)");
    assert_eq!(run(&["group", "X9"]).status.code(), Some(2));
    assert_eq!(run(&["group"]).status.code(), Some(2));
    let o = run(&["group", "A2", "--elements"]);
    // Blocks in the matrix input format, separated by blank lines.
    let text = stdout(&o);
    let blocks: Vec<&str> = text.split("\n\n").skip(1).collect();
    assert_eq!(blocks.len(), 6);
    assert!(blocks.iter().all(|b| b.trim().lines().count() == 3));
}

#[test]
fn direct_and_adjacency_expand_to_the_same_facets() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.orbits");
    let b = dir.path().join("b.orbits");
    assert_eq!(run(&["enumerate", "A3", "--direct", "-o", path_str(&a)]).status.code(), Some(0));
    assert_eq!(run(&["enumerate", "A3", "--adjacency", "-o", path_str(&b)]).status.code(), Some(0));
    let AnyMatGroup::Rational(g) = coxeter_group(CoxeterName::A(3)).unwrap() else { panic!() };
    let sym = build_symmetry_action(&g, SymmetryOptions::default()).unwrap();
    let expand = |p: &Path| {
        let db: OrbitDatabase<Rational> = load_checkpoint(p).unwrap();
        let mut all: Vec<Vec<u32>> = db.records().flat_map(|r| sym.set_orbit(&r.key)).collect();
        all.sort();
        all
    };
    let (fa, fb) = (expand(&a), expand(&b));
    assert_eq!(fa.len(), 16);
    assert_eq!(fa, fb);
}

#[test]
fn verify_command() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("a.txt");
    std::fs::write(&m, "0 0 0 0\n0 0 0 0\n0 0 0 0\n1 0 0 -1\n").unwrap();
    let o = run(&["verify", "F4", path_str(&m)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid, incidence 288, facet: yes, rank 1, stabilizer 4608");
    // Doubling A: the 288 tight elements now reach 2.
    let o = run(&["verify", "F4", path_str(&m), "--rhs", "1/2"]);
    assert!(stdout(&o).starts_with("invalid, 288 violations"));
    std::fs::write(&m, "1 0\n0 1\n").unwrap();
    assert_eq!(run(&["verify", "F4", path_str(&m)]).status.code(), Some(2));
    std::fs::write(&m, "1 2 3 oops\n").unwrap();
    assert_eq!(run(&["verify", "F4", path_str(&m)]).status.code(), Some(2));
}

#[test]
fn report_command_and_integrity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.orbits");
    let db: OrbitDatabase<Rational> = OrbitDatabase::new(Metadata {
        group: "A2".into(),
        radicand: None,
        symmetry_order: BigUint::from(72u32),
        ambient_dim: 9,
        full_dim: 4,
        vertex_count: 6,
        config: Vec::new(),
    });
    std::fs::write(&empty, to_text(&db)).unwrap();
    let o = run(&["report", path_str(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orbits 0"));

    let full = dir.path().join("a2.orbits");
    assert_eq!(run(&["enumerate", "A2", "-o", path_str(&full)]).status.code(), Some(0));
    let o = run(&["report", path_str(&full), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("incidence histogram {4: 1}"));
    let text = std::fs::read_to_string(&full).unwrap();
    std::fs::write(&full, text.replace("stabilizer 8", "stabilizer 9")).unwrap();
    assert_eq!(run(&["report", path_str(&full)]).status.code(), Some(3));
    std::fs::write(&full, "not a database\n").unwrap();
    assert_eq!(run(&["report", path_str(&full)]).status.code(), Some(3));
}

#[test]
fn budget_stop_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.orbits");
    let whole = dir.path().join("whole.orbits");
    assert_eq!(run(&["enumerate", "D4", "--threads", "2", "-o", path_str(&whole)]).status.code(), Some(0));
    let o = run(&["enumerate", "D4", "--max-orbits", "1", "--checkpoint", path_str(&ck)]);
    assert_eq!(o.status.code(), Some(4));
    let partial = std::fs::read_to_string(&ck).unwrap();
    assert!(partial.contains("status unprocessed"));
    let o = run(&["enumerate", "D4", "--resume", path_str(&ck)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&ck).unwrap(), std::fs::read(&whole).unwrap());
    // Settings must match the checkpoint.
    let o = run(&["enumerate", "D4", "--resume", path_str(&ck), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(2));
}
