use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn haraforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haraforge")).args(args).env("NO_COLOR", "1").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn demo() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let path = dir.path().to_path_buf();
    assert!(haraforge(&["demo", path.to_str().unwrap()]).status.success());
    (dir, path)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn clean_corpus_validates_silently() {
    let (_d, dir) = demo();
    let o = haraforge(&["validate", s(&dir.join("afas.item")), s(&dir.join("afas-rev2.hara")), "--history", s(&dir)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn injected_mismatch_exits_one() {
    let (_d, dir) = demo();
    let path = dir.join("afas-rev2.hara");
    let text = fs::read_to_string(&path).unwrap();
    // Entry 1: S3 E4 C2 derives C.
    let mutated = text.replacen("  asil C\n  goal SG01", "  asil D\n  goal SG01", 1);
    assert_ne!(mutated, text);
    let bad = dir.join("bad.hara");
    fs::write(&bad, mutated).unwrap();

    let o = haraforge(&["validate", s(&dir.join("afas.item")), s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "R3\tentry:1\tstated ASIL D but S3 E4 C2 derive C\n");

    let o = haraforge(&["validate", "--machine", s(&dir.join("afas.item")), s(&bad)]);
    assert_eq!(
        stdout(&o),
        "{\"rule\":\"R3\",\"location\":\"entry:1\",\"severity\":\"error\",\"message\":\"stated ASIL D but S3 E4 C2 derive C\"}\n"
    );
}

#[test]
fn warnings_fail_only_in_strict_mode() {
    let (_d, dir) = demo();
    let text = fs::read_to_string(dir.join("afas-rev2.hara")).unwrap();
    let start = text.find("waive function").unwrap();
    let end = start + text[start..].find("\nwaive").unwrap() + 1;
    let gap = dir.join("gap.hara");
    fs::write(&gap, format!("{}{}", &text[..start], &text[end..])).unwrap();
    let o = haraforge(&["validate", s(&dir.join("afas.item")), s(&gap)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("R7\ttriple:"));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = haraforge(&["validate", "--strict", s(&dir.join("afas.item")), s(&gap)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failures_exit_two() {
    let (_d, dir) = demo();
    let o = haraforge(&["validate", s(&dir.join("missing.item")), s(&dir.join("afas-rev2.hara"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.item"));

    let broken = dir.join("broken.hara");
    fs::write(&broken, "hara \"x\" revision 0 kind initial\n").unwrap();
    let o = haraforge(&["validate", s(&dir.join("afas.item")), s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.hara:1:"));

    assert_eq!(haraforge(&["asil", "S5", "E1", "C1"]).status.code(), Some(2));
    assert_eq!(haraforge(&["asil", "S1", "E1"]).status.code(), Some(2));
    assert_eq!(haraforge(&["bogus"]).status.code(), Some(2));
    assert_eq!(haraforge(&["explain", "R99"]).status.code(), Some(2));
}

#[test]
fn history_conflicts_are_input_errors() {
    let (_d, dir) = demo();
    let text = fs::read_to_string(dir.join("afas-rev2.hara")).unwrap();
    let other = TempDir::new().unwrap();
    fs::write(other.path().join("afas-rev1.hara"), fs::read(dir.join("afas-rev1.hara")).unwrap()).unwrap();
    fs::write(other.path().join("afas-rev2.hara"), text.replace("Maximum velocity", "Top speed")).unwrap();
    let o = haraforge(&[
        "validate",
        s(&dir.join("afas.item")),
        s(&dir.join("afas-rev2.hara")),
        "--history",
        s(other.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asil_lookup() {
    assert_eq!(stdout(&haraforge(&["asil", "S3", "E4", "C3"])), "ASIL D\n");
    assert_eq!(stdout(&haraforge(&["asil", "S0 E1 C1"])), "QM\n");
    assert_eq!(stdout(&haraforge(&["asil", "S2", "E3", "C2"])), "ASIL A\n");
}

#[test]
fn diff_and_reports() {
    let (_d, dir) = demo();
    let item = dir.join("afas.item");
    let o = haraforge(&["diff", s(&dir.join("afas-rev1.hara")), s(&dir.join("afas-rev2.hara")), s(&item)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("revision 1 -> 2: safety-refinement\n"));
    assert!(text.contains("entry modified 37: ASIL D -> B\n"));
    assert!(text.contains("entry added 37a (ASIL D, goal SG03)\n"));
    assert!(text.contains("split 37 -> [37a]\n"));
    assert!(text.contains("goal added SG03\n"));

    let md = stdout(&haraforge(&["report", s(&item), s(&dir.join("afas-rev2.hara"))]));
    assert!(md.starts_with("# aFAS protective vehicle HARA (revision 2)\n"));
    assert!(md.contains("| SG01 | Unintended and not permitted operating mode change must be prevented. |  |"));
    let csv = stdout(&haraforge(&["report", "--format", "csv", s(&item), s(&dir.join("afas-rev2.hara"))]));
    assert!(csv.starts_with("ID;Operating Mode;Function;Malfunction;"));

    let all = stdout(&haraforge(&["generate", s(&item)]));
    assert_eq!(all.lines().count(), 232);
    assert!(all.lines().next().unwrap().starts_with("Braking\tEARLY\tCoupledMode\t"));
    let gaps = haraforge(&["generate", s(&item), "--uncovered", s(&dir.join("afas-rev2.hara"))]);
    assert_eq!(stdout(&gaps), "");
    assert!(stdout(&haraforge(&["explain", "R10"])).contains("safety refinement"));
}

#[test]
fn output_is_deterministic() {
    let (_d, dir) = demo();
    let item = dir.join("afas.item");
    for args in [
        vec!["report", s(&item), s(&dir.join("afas-rev2.hara"))],
        vec!["generate", s(&item)],
        vec!["diff", s(&dir.join("afas-rev1.hara")), s(&dir.join("afas-rev2.hara")), s(&item), "--format", "md"],
    ] {
        assert_eq!(haraforge(&args).stdout, haraforge(&args).stdout);
    }
}
