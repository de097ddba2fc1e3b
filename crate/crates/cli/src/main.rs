//! Command-line front end: build persistent indexes over colored point
//! sets, answer localized color-spanning queries, cross-check against the
//! brute-force oracles, benchmark, and render answers as SVG.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use chromaspan::geom::{self, Point};
use chromaspan::oracle::{
    oracle_scsc_exact, oracle_scsi, oracle_scsr, oracle_scss, oracle_scst,
};
use chromaspan::scsc_envelope::ScscIndex;
use chromaspan::scsi::{self, LinePoint, MinimalInterval};
use chromaspan::scsr::{self, MinimalRect};
use chromaspan::scss::{self, MinimalSquare};
use chromaspan::scst::{self, MinimalTriangle};
use chromaspan::{Dataset, Error, Geometry, Provenance, QueryAnswer};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "chromaspan", version, about = "Localized color-spanning object queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a CSV dataset and persist a query index.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated list of scsi,scss,scsr,scst,scsc.
        #[arg(long, default_value = "auto")]
        objects: String,
        /// Approximation parameter for scsc, in (0, 1].
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a query from a persisted index.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        object: String,
        /// "x,y" for 2D datasets, "x" for 1D.
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Answer the same query with the brute-force reference oracle.
    Oracle {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Time Type-I square queries across synthetic candidate-set sizes.
    Bench {
        #[arg(long, default_value = "1000,10000")]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "scss")]
        object: String,
    },
    /// Render the dataset and a query answer as an SVG.
    Render {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        svg: PathBuf,
    },
}

/// Persisted index: dataset, configuration, and the candidate-object blobs
/// the in-memory search trees are rebuilt from on load.
#[derive(Serialize, Deserialize)]
struct IndexFile {
    format_version: u32,
    dataset_sha256: String,
    epsilon: f64,
    objects: Vec<String>,
    dataset: Dataset,
    #[serde(default)]
    intervals: Option<Vec<MinimalInterval>>,
    #[serde(default)]
    squares: Option<Vec<MinimalSquare>>,
    #[serde(default)]
    rects: Option<Vec<MinimalRect>>,
    #[serde(default)]
    triangles: Option<Vec<MinimalTriangle>>,
}

#[derive(Serialize)]
struct QueryResultRecord {
    schema: u32,
    object_type: String,
    size: f64,
    geometry: Geometry,
    provenance: Provenance,
    family: String,
    elapsed_ns: u128,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError { code: 2, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match &e {
            Error::Parse { .. } | Error::NonIntegerColor(_) | Error::NaNCoordinate(_) => 4,
            Error::MissingColor(_) | Error::EmptyInput => 3,
            Error::CapExceeded(_, _) => 5,
            Error::BadEpsilon(_) => 2,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError { code: 2, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Build { input, objects, epsilon, out } => build_cmd(&input, &objects, epsilon, &out),
        Cmd::Query { index, object, point, json } => {
            answer_cmd(&index, &object, &point, json, false)
        }
        Cmd::Oracle { index, object, point, json } => {
            answer_cmd(&index, &object, &point, json, true)
        }
        Cmd::Bench { sizes, trials, object } => bench_cmd(&sizes, trials, &object),
        Cmd::Render { index, object, point, svg } => render_cmd(&index, &object, &point, &svg),
    }
}

fn known_objects(dims: u8) -> &'static [&'static str] {
    if dims == 1 {
        &["scsi"]
    } else {
        &["scss", "scsr", "scst", "scsc"]
    }
}

fn build_cmd(input: &Path, objects: &str, epsilon: f64, out: &Path) -> Result<(), CliError> {
    let bytes = std::fs::read(input)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError { code: 4, message: "input is not UTF-8".into() })?;
    let dataset = chromaspan::parse_csv(&text)?;
    dataset.check_colors()?;
    let sha = hex(&Sha256::digest(&bytes));

    let requested: Vec<String> = if objects == "auto" {
        known_objects(dataset.dims).iter().map(|s| s.to_string()).collect()
    } else {
        objects.split(',').map(|s| s.trim().to_string()).collect()
    };
    for o in &requested {
        if !["scsi", "scss", "scsr", "scst", "scsc"].contains(&o.as_str()) {
            return Err(CliError::usage(format!("unknown object '{o}'")));
        }
        if !known_objects(dataset.dims).contains(&o.as_str()) {
            return Err(CliError::usage(format!(
                "object '{o}' is not available for a {}D dataset",
                dataset.dims
            )));
        }
    }
    if requested.iter().any(|o| o == "scsc") && !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::BadEpsilon(epsilon).into());
    }

    let mut file = IndexFile {
        format_version: FORMAT_VERSION,
        dataset_sha256: sha,
        epsilon,
        objects: requested.clone(),
        dataset: dataset.clone(),
        intervals: None,
        squares: None,
        rects: None,
        triangles: None,
    };
    for o in &requested {
        match o.as_str() {
            "scsi" => {
                let pts = line_points(&dataset);
                file.intervals = Some(scsi::enumerate_minimal_intervals(&pts, dataset.k)?);
            }
            "scss" => {
                file.squares = Some(scss::enumerate_minimal_squares(&dataset.points, dataset.k)?)
            }
            "scsr" => {
                file.rects = Some(scsr::enumerate_minimal_rects(&dataset.points, dataset.k)?)
            }
            "scst" => {
                file.triangles =
                    Some(scst::enumerate_minimal_triangles(&dataset.points, dataset.k)?)
            }
            "scsc" => {
                // Validate eagerly so cap violations surface at build time.
                ScscIndex::build(&dataset.points, dataset.k, epsilon)?;
            }
            _ => unreachable!(),
        }
    }
    std::fs::write(out, serde_json::to_string(&file).expect("index serializes"))?;
    eprintln!(
        "built index for {} objects over {} points (k={})",
        requested.len(),
        dataset.points.len(),
        dataset.k
    );
    Ok(())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn line_points(ds: &Dataset) -> Vec<LinePoint> {
    ds.points
        .iter()
        .map(|p| LinePoint { x: p.x, color: p.color })
        .collect()
}

fn load_index(path: &Path) -> Result<IndexFile, CliError> {
    let text = std::fs::read_to_string(path)?;
    let file: IndexFile = serde_json::from_str(&text)
        .map_err(|e| CliError { code: 4, message: format!("bad index file: {e}") })?;
    if file.format_version != FORMAT_VERSION {
        return Err(CliError {
            code: 4,
            message: format!("unsupported index format version {}", file.format_version),
        });
    }
    Ok(file)
}

fn parse_query_point(ds: &Dataset, s: &str) -> Result<Point, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let want = if ds.dims == 1 { 1 } else { 2 };
    if parts.len() != want {
        return Err(CliError::usage(format!(
            "--point needs {want} coordinate(s) for a {}D dataset",
            ds.dims
        )));
    }
    let mut coords = [0.0f64; 2];
    for (i, p) in parts.iter().enumerate() {
        coords[i] = p
            .parse()
            .map_err(|_| CliError::usage(format!("bad coordinate '{p}'")))?;
    }
    Ok(Point::new(coords[0], coords[1]))
}

/// Rounds to 12 significant digits, the frozen output precision.
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn answer_query(file: &IndexFile, object: &str, q: Point) -> Result<QueryAnswer, CliError> {
    let ds = &file.dataset;
    Ok(match object {
        "scsi" => {
            let pts = line_points(ds);
            scsi::build(&pts, ds.k)?.query(q.x)
        }
        "scss" => match &file.squares {
            Some(sq) => scss::build_from_squares(sq.clone()).query(q),
            None => scss::build(&ds.points, ds.k)?.query(q),
        },
        "scsr" => match &file.rects {
            Some(r) => scsr::build_from_rects(r.clone()).query(q),
            None => scsr::build(&ds.points, ds.k)?.query(q),
        },
        "scst" => match &file.triangles {
            Some(t) => scst::build_from_triangles(t.clone()).query(q),
            None => scst::build(&ds.points, ds.k)?.query(q),
        },
        "scsc" => ScscIndex::build(&ds.points, ds.k, file.epsilon)?.query(q),
        other => return Err(CliError::usage(format!("unknown object '{other}'"))),
    })
}

fn answer_oracle(file: &IndexFile, object: &str, q: Point) -> Result<QueryAnswer, CliError> {
    let ds = &file.dataset;
    let (size, geometry) = match object {
        "scsi" => {
            let pts = line_points(ds);
            let a = oracle_scsi(&pts, ds.k, q.x)?;
            (a.size, a.geometry)
        }
        "scss" => {
            let a = oracle_scss(&ds.points, ds.k, q)?;
            (a.size, a.geometry)
        }
        "scsr" => {
            let a = oracle_scsr(&ds.points, ds.k, q)?;
            (a.size, a.geometry)
        }
        "scst" => {
            let a = oracle_scst(&ds.points, ds.k, q)?;
            (a.size, a.geometry)
        }
        "scsc" => {
            let a = oracle_scsc_exact(&ds.points, ds.k, q)?;
            (a.size, a.geometry)
        }
        other => return Err(CliError::usage(format!("unknown object '{other}'"))),
    };
    let provenance = if strictly_inside(&geometry, q) {
        Provenance::Contained
    } else {
        Provenance::BoundaryExtension
    };
    Ok(QueryAnswer { size, geometry, provenance, family: "oracle".into() })
}

fn strictly_inside(g: &Geometry, q: Point) -> bool {
    let tol = 1e-9;
    match g {
        Geometry::Interval { left, right } => left + tol < q.x && q.x < right - tol,
        Geometry::Square { l, r, b, t } | Geometry::Rect { l, r, b, t } => {
            l + tol < q.x && q.x < r - tol && b + tol < q.y && q.y < t - tol
        }
        Geometry::Triangle { v_bl, v_br, v_top } => {
            let tri = geom::Triangle { v_bl: *v_bl, v_br: *v_br, v_top: *v_top };
            q.y > tri.base_level() + tol
                && geom::tri_frame(q).y_alpha < tri.left_level() - tol
                && geom::tri_frame(q).y_beta < tri.right_level() - tol
        }
        Geometry::Circle { center, radius } => q.dist(center) < radius - tol,
    }
}

fn answer_cmd(
    index: &Path,
    object: &str,
    point: &str,
    json: bool,
    oracle: bool,
) -> Result<(), CliError> {
    let file = load_index(index)?;
    let q = parse_query_point(&file.dataset, point)?;
    let start = Instant::now();
    let answer = if oracle {
        answer_oracle(&file, object, q)?
    } else {
        answer_query(&file, object, q)?
    };
    let elapsed_ns = start.elapsed().as_nanos();
    let record = QueryResultRecord {
        schema: 1,
        object_type: object.to_string(),
        size: sig12(answer.size),
        geometry: answer.geometry,
        provenance: answer.provenance,
        family: answer.family,
        elapsed_ns,
    };
    if json {
        println!("{}", serde_json::to_string(&record).expect("record serializes"));
    } else {
        println!(
            "{} size={} provenance={} family={} geometry={} elapsed_ns={}",
            record.object_type,
            record.size,
            match record.provenance {
                Provenance::Contained => "contained",
                Provenance::BoundaryExtension => "boundary-extension",
            },
            record.family,
            serde_json::to_string(&record.geometry).expect("geometry serializes"),
            record.elapsed_ns
        );
    }
    Ok(())
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }
    fn f64(&mut self) -> f64 {
        (self.next() & ((1 << 53) - 1)) as f64 / (1u64 << 53) as f64
    }
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }
}

fn bench_cmd(sizes: &str, trials: usize, object: &str) -> Result<(), CliError> {
    if object != "scss" {
        return Err(CliError::usage(format!(
            "bench supports only 'scss' (got '{object}')"
        )));
    }
    let seed = std::env::var("CHROMASPAN_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE_u64);
    let mut rng = Lcg(seed);
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::usage(format!("bad size '{s}'"))))
        .collect::<Result<_, _>>()?;
    println!("{:>10} {:>14} {:>18}", "N", "build (ms)", "median query (ns)");
    let mut medians: Vec<(usize, f64)> = Vec::new();
    for &n in &sizes {
        let mut squares = Vec::with_capacity(n);
        for _ in 0..n {
            let lam = rng.range(0.5, 5.0);
            let l = rng.range(0.0, 1000.0);
            let b = rng.range(0.0, 1000.0);
            squares.push(MinimalSquare { l, r: l + lam, b, t: b + lam, lambda: lam });
        }
        let t0 = Instant::now();
        let idx = scss::build_from_squares(squares);
        let build_ms = t0.elapsed().as_secs_f64() * 1e3;
        let mut times: Vec<u128> = Vec::with_capacity(trials);
        for _ in 0..trials.max(1) {
            let q = Point::new(rng.range(0.0, 1000.0), rng.range(0.0, 1000.0));
            let t1 = Instant::now();
            std::hint::black_box(idx.query_contained(q));
            times.push(t1.elapsed().as_nanos());
        }
        times.sort_unstable();
        let median = times[times.len() / 2] as f64;
        println!("{n:>10} {build_ms:>14.3} {median:>18.0}");
        medians.push((n, median.max(1.0)));
    }
    if let (Some(first), Some(last)) = (medians.first(), medians.last()) {
        if last.0 > first.0 {
            let ratio = last.1 / first.1;
            let budget = ((last.0 as f64) / (first.0 as f64)).sqrt() * 4.0;
            if ratio > budget {
                eprintln!(
                    "warning: query time ratio {ratio:.1} exceeds sqrt-growth budget {budget:.1}"
                );
            }
        }
    }
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#b8860b", "#a65628", "#f781bf",
];

fn render_cmd(index: &Path, object: &str, point: &str, svg: &Path) -> Result<(), CliError> {
    let file = load_index(index)?;
    let q = parse_query_point(&file.dataset, point)?;
    let answer = answer_query(&file, object, q)?;

    // Bounding box of points, query, and answer geometry.
    let mut xs: Vec<f64> = file.dataset.points.iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = file.dataset.points.iter().map(|p| p.y).collect();
    xs.push(q.x);
    ys.push(q.y);
    match &answer.geometry {
        Geometry::Interval { left, right } => xs.extend([*left, *right]),
        Geometry::Square { l, r, b, t } | Geometry::Rect { l, r, b, t } => {
            xs.extend([*l, *r]);
            ys.extend([*b, *t]);
        }
        Geometry::Triangle { v_bl, v_br, v_top } => {
            xs.extend([v_bl.x, v_br.x, v_top.x]);
            ys.extend([v_bl.y, v_br.y, v_top.y]);
        }
        Geometry::Circle { center, radius } => {
            xs.extend([center.x - radius, center.x + radius]);
            ys.extend([center.y - radius, center.y + radius]);
        }
    }
    let (lo_x, hi_x) = bounds(&xs);
    let (lo_y, hi_y) = bounds(&ys);
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let scale = 900.0 / span; // 1000px viewport with 5% margin each side
    let map = |p: Point| -> (f64, f64) {
        (
            50.0 + (p.x - lo_x) * scale,
            // SVG y grows downward.
            50.0 + (hi_y - p.y) * scale,
        )
    };

    let mut body = String::new();
    let _ = writeln!(
        body,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(body, r#"<rect width="1000" height="1000" fill="white"/>"#);
    let style = r##"fill="none" stroke="#222222" stroke-width="3""##;
    match &answer.geometry {
        Geometry::Interval { left, right } => {
            let (x1, y1) = map(Point::new(*left, 0.0));
            let (x2, _) = map(Point::new(*right, 0.0));
            let _ = writeln!(
                body,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y1:.2}" stroke="#222222" stroke-width="6"/>"##
            );
        }
        Geometry::Square { l, r, b, t } | Geometry::Rect { l, r, b, t } => {
            let (x, y) = map(Point::new(*l, *t));
            let w = (r - l) * scale;
            let h = (t - b) * scale;
            let _ = writeln!(
                body,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" {style}/>"#
            );
        }
        Geometry::Triangle { v_bl, v_br, v_top } => {
            let pts: Vec<String> = [*v_bl, *v_br, *v_top]
                .iter()
                .map(|v| {
                    let (x, y) = map(*v);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(body, r#"<polygon points="{}" {style}/>"#, pts.join(" "));
        }
        Geometry::Circle { center, radius } => {
            let (cx, cy) = map(*center);
            let r = radius * scale;
            let _ = writeln!(
                body,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" {style}/>"#
            );
        }
    }
    if file.dataset.dims == 1 {
        let (x1, y1) = map(Point::new(lo_x, 0.0));
        let (x2, _) = map(Point::new(hi_x, 0.0));
        let _ = writeln!(
            body,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y1:.2}" stroke="#cccccc" stroke-width="1"/>"##
        );
    }
    for p in &file.dataset.points {
        let (cx, cy) = map(p.point());
        let color = PALETTE[p.color as usize % PALETTE.len()];
        let _ = writeln!(
            body,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="6" fill="{color}"/>"#
        );
    }
    let (qx, qy) = map(q);
    let _ = writeln!(
        body,
        r#"<path d="M {x1:.2} {y1:.2} L {x2:.2} {y2:.2} M {x3:.2} {y1:.2} L {x4:.2} {y2:.2}" stroke="black" stroke-width="3"/>"#,
        x1 = qx - 8.0,
        y1 = qy - 8.0,
        x2 = qx + 8.0,
        y2 = qy + 8.0,
        x3 = qx + 8.0,
        x4 = qx - 8.0,
    );
    let _ = writeln!(body, "</svg>");
    std::fs::write(svg, body)?;
    eprintln!("wrote {}", svg.display());
    Ok(())
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
