use std::fs;
use std::process::Command;

fn bspa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bspa"))
}

fn length_of(stdout: &[u8]) -> u32 {
    let text = String::from_utf8_lossy(stdout);
    let mut words = text.split_whitespace();
    words.find(|w| *w == "length").expect("length in output");
    words.next().unwrap().parse().unwrap()
}

#[test]
fn solves_a_trivial_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("one.txt");
    fs::write(&inst, "4\n2\n4 3\n4 3\n").unwrap();
    let out_file = dir.path().join("one.sol");
    let svg = dir.path().join("one.svg");
    let out = bspa()
        .args(["solve", "--deterministic", "--nodes", "50", "--format", "canonical"])
        .arg(&inst)
        .arg("--out")
        .arg(&out_file)
        .arg("--svg")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(length_of(&out.stdout), 6);
    assert!(String::from_utf8_lossy(&out.stdout).contains("gap 0.0000%"));
    assert!(fs::read_to_string(&out_file).unwrap().starts_with("4 6\n"));
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn rotation_never_hurts() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("rot.txt");
    fs::write(&inst, "6\n3\n2 6\n2 6\n6 2\n").unwrap();
    let run = |rot: &str| {
        let out = bspa()
            .args(["solve", "--deterministic", "--nodes", "200", "--format", "canonical", "--rotation", rot])
            .arg(&inst)
            .output()
            .unwrap();
        assert!(out.status.success());
        length_of(&out.stdout)
    };
    assert!(run("rf") <= run("of"));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("d.txt");
    fs::write(&inst, "10\n7\n3 4\n5 2\n7 3\n2 2\n4 6\n6 1\n3 3\n").unwrap();
    let files: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|p| {
            let sol = dir.path().join(format!("p{p}.sol"));
            let out = bspa()
                .args(["solve", "--deterministic", "--nodes", "100", "--format", "canonical", "--p", p])
                .arg(&inst)
                .arg("--out")
                .arg(&sol)
                .output()
                .unwrap();
            assert!(out.status.success());
            fs::read(sol).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

#[test]
fn render_refuses_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    let sol = dir.path().join("s.sol");
    fs::write(&inst, "4\n2\n4 2\n4 2\n").unwrap();
    fs::write(&sol, "4 2\n0 0 0 4 2\n0 0 0 4 2\n").unwrap();
    let out = bspa()
        .args(["render", "--format", "canonical"])
        .arg(&sol)
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = bspa().args(["solve", "/nonexistent/x.txt"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let wide = dir.path().join("wide.txt");
    fs::write(&wide, "4\n1\n5 2\n").unwrap();
    let out = bspa()
        .args(["solve", "--deterministic", "--format", "canonical"])
        .arg(&wide)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("KR")).unwrap();
    fs::write(dir.path().join("KR/k1.txt"), "3\n10 20\n10 4\n5 6\n5 6\n").unwrap();
    let csv = dir.path().join("r.csv");
    let out = bspa()
        .args(["bench", "--deterministic", "--nodes", "50"])
        .arg(dir.path())
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = bspa::bench::read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].family, "KR");
    assert_eq!(records[0].used_length, Some(10));
}
