//! End-to-end tests through the compiled binary: worked examples, oracle
//! agreement on the shipped datasets, index round-trips, exit codes, and
//! SVG rendering.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_chromaspan")
}

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn build_index(dataset: &str, dir: &Path) -> PathBuf {
    let out = dir.join(format!("{dataset}.idx"));
    let o = run(&[
        "build",
        "--input",
        testdata(dataset).to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "build failed: {}", String::from_utf8_lossy(&o.stderr));
    out
}

fn query_json(index: &Path, object: &str, point: &str, oracle: bool) -> serde_json::Value {
    let sub = if oracle { "oracle" } else { "query" };
    let o = run(&[
        sub,
        "--index",
        index.to_str().unwrap(),
        "--object",
        object,
        "--point",
        point,
        "--json",
    ]);
    assert!(
        o.status.success(),
        "{sub} {object} at {point} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("valid JSON record")
}

#[test]
fn scsi_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build_index("line.csv", dir.path());
    let rec = query_json(&idx, "scsi", "2.5", false);
    assert_eq!(rec["schema"], 1);
    assert_eq!(rec["object_type"], "scsi");
    assert!((rec["size"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(rec["geometry"]["shape"], "interval");
}

#[test]
fn planar_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build_index("plane.csv", dir.path());
    // Square of side 2 when q pulls the pair rightward.
    let sq = query_json(&idx, "scss", "2,0.5", false);
    assert!((sq["size"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    // Rectangle semi-perimeter 3 for the same query point.
    let re = query_json(&idx, "scsr", "2,0.5", false);
    assert!((re["size"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    // Apex-up triangle: side 4/sqrt(3) when q sits above the pair.
    let tr = query_json(&idx, "scst", "0.5,2", false);
    assert!((tr["size"].as_f64().unwrap() - 4.0 / 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn circle_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build_index("circles.csv", dir.path());
    // q inside the only minimal circle.
    let inside = query_json(&idx, "scsc", "1,0.5", false);
    assert!((inside["size"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(inside["provenance"], "contained");
    // q outside: boundary case, within (1+0.1) of the exact 5/4.
    let outside = query_json(&idx, "scsc", "1,2", false);
    let r = outside["size"].as_f64().unwrap();
    assert!(r >= 1.25 - 1e-9 && r <= 1.1 * 1.25 + 1e-9, "got {r}");
}

#[test]
fn query_agrees_with_oracle_on_shipped_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str], &[&str])] = &[
        ("line.csv", &["scsi"], &["0", "2.2", "3.7", "6"]),
        (
            "mixed.csv",
            &["scss", "scsr", "scst"],
            &["2,2", "0,0", "6,6", "3.1,0.2"],
        ),
        ("circles.csv", &["scsc"], &["1,0.1", "0.5,0.5"]),
    ];
    for (dataset, objects, points) in cases {
        let idx = build_index(dataset, dir.path());
        for object in *objects {
            for point in *points {
                let fast = query_json(&idx, object, point, false)["size"].as_f64().unwrap();
                let oracle = query_json(&idx, object, point, true)["size"].as_f64().unwrap();
                let tol = if *object == "scsc" { 0.1 * oracle + 1e-9 } else { 1e-9 * oracle.max(1.0) };
                assert!(
                    (fast - oracle).abs() <= tol && fast >= oracle - 1e-9,
                    "{dataset} {object} at {point}: {fast} vs oracle {oracle}"
                );
            }
        }
    }
}

#[test]
fn index_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build_index("mixed.csv", dir.path());
    // In-memory reference answer through the library.
    let ds = chromaspan::load_csv(&testdata("mixed.csv")).unwrap();
    let lib = chromaspan::scss::build(&ds.points, ds.k)
        .unwrap()
        .query(chromaspan::Point::new(2.0, 2.0));
    let rec = query_json(&idx, "scss", "2,2", false);
    let cli_size = rec["size"].as_f64().unwrap();
    let lib_size: f64 = format!("{:.11e}", lib.size).parse().unwrap();
    assert_eq!(cli_size.to_bits(), lib_size.to_bits());
    // Repeat queries from the same file are identical apart from timing.
    let mut a = query_json(&idx, "scss", "2,2", false);
    let mut b = query_json(&idx, "scss", "2,2", false);
    a.as_object_mut().unwrap().remove("elapsed_ns");
    b.as_object_mut().unwrap().remove("elapsed_ns");
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // 4: parse error.
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,abc\n").unwrap();
    let o = run(&[
        "build",
        "--input",
        bad.to_str().unwrap(),
        "--out",
        dir.path().join("x.idx").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));

    // 3: infeasible (missing color 1 of inferred k=3).
    let gap = dir.path().join("gap.csv");
    std::fs::write(&gap, "0,0,0\n1,1,2\n").unwrap();
    let o = run(&[
        "build",
        "--input",
        gap.to_str().unwrap(),
        "--out",
        dir.path().join("y.idx").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    // 2: flag validation (epsilon outside (0,1] with scsc requested).
    let o = run(&[
        "build",
        "--input",
        testdata("circles.csv").to_str().unwrap(),
        "--objects",
        "scsc",
        "--epsilon",
        "0",
        "--out",
        dir.path().join("z.idx").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    // 2: unknown object.
    let idx = build_index("plane.csv", dir.path());
    let o = run(&["query", "--index", idx.to_str().unwrap(), "--object", "blob", "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(2));

    // 5: orientation memory cap.
    let big = dir.path().join("big.csv");
    let mut text = String::new();
    for i in 0..400 {
        text.push_str(&format!("{},{},{}\n", i as f64 * 0.5, (i % 7) as f64, i % 2));
    }
    std::fs::write(&big, text).unwrap();
    let o = run(&[
        "build",
        "--input",
        big.to_str().unwrap(),
        "--objects",
        "scsc",
        "--epsilon",
        "0.001",
        "--out",
        dir.path().join("w.idx").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bench_runs_and_is_deterministic() {
    let o1 = Command::new(bin())
        .args(["bench", "--sizes", "1000,2000", "--trials", "20"])
        .env("CHROMASPAN_SEED", "42")
        .output()
        .unwrap();
    assert!(o1.status.success());
    let table = String::from_utf8_lossy(&o1.stdout);
    assert!(table.contains("1000") && table.contains("2000"), "{table}");

    let o = run(&["bench", "--object", "scsr"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_svg() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build_index("plane.csv", dir.path());
    let svg = dir.path().join("out.svg");
    let o = run(&[
        "render",
        "--index",
        idx.to_str().unwrap(),
        "--object",
        "scss",
        "--point",
        "2,0.5",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<svg") && text.contains("<rect"));

    // Circle answers render a circle outline.
    let cidx = build_index("circles.csv", dir.path());
    let csvg = dir.path().join("c.svg");
    let o = run(&[
        "render",
        "--index",
        cidx.to_str().unwrap(),
        "--object",
        "scsc",
        "--point",
        "1,0.5",
        "--svg",
        csvg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csvg).unwrap();
    assert!(text.contains("<circle"));

    // 1D render draws the baseline segment.
    let lidx = build_index("line.csv", dir.path());
    let lsvg = dir.path().join("l.svg");
    let o = run(&[
        "render",
        "--index",
        lidx.to_str().unwrap(),
        "--object",
        "scsi",
        "--point",
        "2.5",
        "--svg",
        lsvg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&lsvg).unwrap().contains("<line"));
}
