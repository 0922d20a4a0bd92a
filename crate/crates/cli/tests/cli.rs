use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hamdecomp::instances::{parse_certificate, parse_instance};
use tempfile::TempDir;

const FIG1: &str = "p hd undirected 6\nx 1 2 3 4 5 6\ny 1 4 6 2 3 5\n";
const FIG3: &str = "p hd directed 6\nx 1 2 3 4 5 6\ny 1 4 6 2 3 5\n";

fn hamdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamdecomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.txt", FIG1);
    let fig3 = write(&dir, "fig3.txt", FIG3);

    for algo in ["bcef", "bsp"] {
        let out = hamdecomp(&["solve", s(&fig1), "--algo", algo]);
        assert_eq!(code(&out), 0);
        let cert = parse_certificate(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(cert.z.as_ref().unwrap()[0], 1);

        let out = hamdecomp(&["solve", s(&fig3), "--algo", algo]);
        assert_eq!(code(&out), 1);
        assert!(String::from_utf8(out.stdout)
            .unwrap()
            .starts_with("s NONE\n"));
    }
    let out = hamdecomp(&["solve", s(&fig1), "--node-limit", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("s TIMEOUT\n"));
}

#[test]
fn solve_reports_parse_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.txt",
        "p hd undirected 6\nx 1 2 3 4 5 5\ny 1 2 3 4 5 6\n",
    );
    let out = hamdecomp(&["solve", s(&bad)]);
    assert_eq!(code(&out), 64);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:2:"), "{err}");

    let missing = dir.path().join("nope.txt");
    assert_eq!(code(&hamdecomp(&["solve", s(&missing)])), 64);
    assert_eq!(code(&hamdecomp(&["solve", s(&bad), "--algo", "dfs"])), 64);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&hamdecomp(&[])), 64);
    assert_eq!(code(&hamdecomp(&["--help"])), 0);
    assert_eq!(code(&hamdecomp(&["--version"])), 0);
    assert_eq!(
        code(&hamdecomp(&["gen", "--n", "2", "--mode", "directed"])),
        64
    );
    assert_eq!(code(&hamdecomp(&["bench", "--n", ""])), 64);
    assert_eq!(code(&hamdecomp(&["bench"])), 64);
    assert_eq!(code(&hamdecomp(&["bench", "--n", "8", "--jobs", "0"])), 64);
}

#[test]
fn gen_writes_reproducible_suites() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = hamdecomp(&[
            "gen",
            "--n",
            "32",
            "--mode",
            "undirected",
            "--count",
            "100",
            "--seed",
            "0",
            "--out",
            s(dir.path()),
        ]);
        assert_eq!(code(&out), 0);
    }
    let names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 100);
    for k in 0..100 {
        let name = format!("inst_undirected_32_{k}.txt");
        let ta = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(ta, fs::read(b.path().join(&name)).unwrap());
        let inst = parse_instance(std::str::from_utf8(&ta).unwrap()).unwrap();
        assert_eq!(
            inst,
            hamdecomp::gen_instance(32, hamdecomp::Mode::Undirected, k).unwrap()
        );
    }
}

#[test]
fn verify_certificates() {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.txt", FIG1);
    let fig3 = write(&dir, "fig3.txt", FIG3);
    let good = write(
        &dir,
        "good.txt",
        "s DECOMPOSED\nz 1 4 5 3 2 6\nw 1 2 3 4 6 5\nt 0 0 0\n",
    );
    let same = write(
        &dir,
        "same.txt",
        "s DECOMPOSED\nz 1 2 3 4 5 6\nw 1 4 6 2 3 5\nt 0 0 0\n",
    );
    let none = write(&dir, "none.txt", "s NONE\nt 0 0 0\n");

    assert_eq!(code(&hamdecomp(&["verify", s(&fig1), s(&good)])), 0);
    assert_eq!(code(&hamdecomp(&["verify", s(&fig1), s(&same)])), 1);
    assert_eq!(
        code(&hamdecomp(&["verify", s(&fig3), s(&none), "--exhaustive"])),
        0
    );
    assert_eq!(
        code(&hamdecomp(&["verify", s(&fig1), s(&none), "--exhaustive"])),
        1
    );
    assert_eq!(code(&hamdecomp(&["verify", s(&fig3), s(&none)])), 64);
    assert_eq!(code(&hamdecomp(&["verify", s(&fig3), s(&fig1)])), 64);
}

#[test]
fn solve_then_verify_closes_the_loop() {
    let dir = TempDir::new().unwrap();
    let out = hamdecomp(&[
        "gen",
        "--n",
        "9",
        "--mode",
        "directed",
        "--count",
        "30",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let mut decided = 0;
    for k in 0..30 {
        let inst = dir.path().join(format!("inst_directed_9_{k}.txt"));
        for algo in ["bcef", "bsp"] {
            let out = hamdecomp(&["solve", s(&inst), "--algo", algo]);
            assert!(matches!(code(&out), 0 | 1));
            let cert = write(
                &dir,
                &format!("cert_{algo}_{k}.txt"),
                &String::from_utf8(out.stdout).unwrap(),
            );
            let v = hamdecomp(&["verify", s(&inst), s(&cert), "--exhaustive"]);
            assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stdout));
            decided += 1;
        }
    }
    assert_eq!(decided, 60);
}

fn bench_csv(extra: &[&str]) -> (String, String) {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("rows.csv");
    let mut args = vec![
        "bench",
        "--n",
        "16,24",
        "--mode",
        "undirected,directed",
        "--algo",
        "bcef,bsp",
        "--count",
        "10",
        "--seed",
        "5",
        "--csv",
    ];
    args.push(s(&csv));
    args.extend_from_slice(extra);
    let out = hamdecomp(&args);
    assert_eq!(code(&out), 0);
    (
        fs::read_to_string(&csv).unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn without_timing(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            format!(
                "{},{},{},{},{},{}",
                cols[0], cols[1], cols[2], cols[3], cols[4], cols[6]
            )
        })
        .collect()
}

#[test]
fn bench_rows_and_summary() {
    let (csv, summary) = bench_csv(&[]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "mode,n,seed,algo,status,elapsed_ms,nodes,edges_fixed"
    );
    assert_eq!(lines.len(), 1 + 2 * 2 * 10 * 2);
    assert_eq!(
        lines[1].split(',').take(4).collect::<Vec<_>>(),
        ["undirected", "16", "5", "bcef"]
    );

    // Summary counts are recomputable from the rows.
    for line in summary.lines().skip(1) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        let rows: Vec<Vec<&str>> = lines[1..]
            .iter()
            .map(|l| l.split(',').collect::<Vec<_>>())
            .filter(|r| r[0] == cols[0] && r[1] == cols[1] && r[3] == cols[2])
            .collect();
        let feasible = rows.iter().filter(|r| r[4] == "DECOMPOSED").count();
        let infeasible = rows.iter().filter(|r| r[4] == "NONE").count();
        assert_eq!(cols[3].parse::<usize>().unwrap(), feasible);
        assert_eq!(cols[5].parse::<usize>().unwrap(), infeasible);
        assert_eq!(feasible + infeasible, 10);
    }
    assert_eq!(summary.lines().count(), 1 + 8);

    // Same matrix on four workers: same rows in the same order.
    let (parallel, _) = bench_csv(&["--jobs", "4"]);
    assert_eq!(without_timing(&csv), without_timing(&parallel));
}
