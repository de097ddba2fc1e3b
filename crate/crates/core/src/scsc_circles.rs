//! Minimal color-spanning circles and the Type-I circle query.
//!
//! Candidate circles come from per-color Voronoi pair diagrams: for each
//! point p_i the union of its cells over the other colors is a star-shaped
//! polygon whose boundary is the locus of centers of color-spanning circles
//! through p_i. Local minima of the distance to p_i along that boundary
//! (perpendicular feet and concave vertices) yield the candidate centers;
//! an exact spanning/minimality filter keeps the genuine minimal circles.

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};
use crate::geom::{self, Circle, ColoredPoint, LiftedPlane, Point, EPS};

/// Closed convex region as a counterclockwise vertex list (possibly empty).
type ConvexCell = Vec<Point>;

#[derive(Debug, Clone)]
pub struct StarPolygon {
    pub owner: u32,
    /// Closed boundary, counterclockwise around the owner point.
    pub boundary: Vec<Point>,
}

#[derive(Debug, Clone)]
pub struct MinimalCircle {
    pub circle: Circle,
    /// Point on the boundary from whose star the circle was generated.
    pub owner: u32,
}

/// Radius-sorted set of minimal color-spanning circles.
#[derive(Debug, Clone)]
pub struct MinimalCircleSet {
    pub circles: Vec<MinimalCircle>,
}

#[derive(Debug, Clone)]
pub struct PairDiagrams {
    pub points: Vec<ColoredPoint>,
    pub k: u32,
    /// Clip rectangle (10x the point-set diameter) used for unbounded cells.
    pub clip: ConvexCell,
    /// vor_j(p_i): cell of p_i in the Voronoi diagram of its own color.
    pub color_cells: Vec<ConvexCell>,
    /// For each p_i of color j: (theta, cell of p_i in VOR(P_j + P_theta)).
    pub pair_cells: Vec<Vec<(u32, ConvexCell)>>,
}

fn clip_box(points: &[ColoredPoint]) -> ConvexCell {
    let xs = points.iter().map(|p| p.x);
    let ys = points.iter().map(|p| p.y);
    let (mut lo_x, mut hi_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
    }
    for y in ys {
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let diam = ((hi_x - lo_x).powi(2) + (hi_y - lo_y).powi(2)).sqrt().max(1.0);
    let cx = 0.5 * (lo_x + hi_x);
    let cy = 0.5 * (lo_y + hi_y);
    let r = 10.0 * diam;
    vec![
        Point::new(cx - r, cy - r),
        Point::new(cx + r, cy - r),
        Point::new(cx + r, cy + r),
        Point::new(cx - r, cy + r),
    ]
}

/// Intersects a convex polygon with the halfplane a*x + b*y <= c.
fn clip_halfplane(poly: &[Point], a: f64, b: f64, c: f64) -> ConvexCell {
    let scale = f64::max(1.0, f64::max(a.abs(), b.abs()));
    if scale <= EPS {
        // Degenerate constraint: either everything or nothing satisfies it.
        return if c >= -EPS { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = a * p.x + b * p.y - c;
        let fq = a * q.x + b * q.y - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
        }
    }
    out
}

/// Cell of `site` under the nearest-point rule against `others`.
fn voronoi_cell(site: Point, others: &[Point], clip: &[Point]) -> ConvexCell {
    let mut cell = clip.to_vec();
    for &t in others {
        if cell.is_empty() {
            break;
        }
        let dx = t.x - site.x;
        let dy = t.y - site.y;
        if dx.abs() <= EPS && dy.abs() <= EPS {
            continue; // coincident site: equidistant everywhere
        }
        // |z - site|^2 <= |z - t|^2  <=>  2*dx*x + 2*dy*y <= |t|^2 - |site|^2
        let c = t.x * t.x + t.y * t.y - site.x * site.x - site.y * site.y;
        cell = clip_halfplane(&cell, 2.0 * dx, 2.0 * dy, c);
    }
    cell
}

fn point_in_convex(p: Point, cell: &[Point], tol: f64) -> bool {
    let n = cell.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = cell[i];
        let b = cell[(i + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if cross < -tol {
            return false;
        }
    }
    true
}

pub fn build_pair_diagrams(points: &[ColoredPoint], k: u32) -> Result<PairDiagrams> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k < 2 {
        return Err(Error::Invalid("pair diagrams require k >= 2".into()));
    }
    let mut by_color: Vec<Vec<Point>> = vec![Vec::new(); k as usize];
    for p in points {
        if p.color >= k {
            return Err(Error::Invalid(format!("color {} out of range", p.color)));
        }
        by_color[p.color as usize].push(p.point());
    }
    for (c, pts) in by_color.iter().enumerate() {
        if pts.is_empty() {
            return Err(Error::MissingColor(c as u32));
        }
    }
    let clip = clip_box(points);
    let mut color_cells = Vec::with_capacity(points.len());
    let mut pair_cells = Vec::with_capacity(points.len());
    for p in points {
        let site = p.point();
        let j = p.color as usize;
        let own: Vec<Point> = by_color[j]
            .iter()
            .copied()
            .filter(|t| t.x != site.x || t.y != site.y)
            .collect();
        color_cells.push(voronoi_cell(site, &own, &clip));
        let mut cells = Vec::with_capacity(k as usize - 1);
        for theta in 0..k {
            if theta as usize == j {
                continue;
            }
            let mut sites = own.clone();
            sites.extend_from_slice(&by_color[theta as usize]);
            cells.push((theta, voronoi_cell(site, &sites, &clip)));
        }
        pair_cells.push(cells);
    }
    Ok(PairDiagrams {
        points: points.to_vec(),
        k,
        clip,
        color_cells,
        pair_cells,
    })
}

/// Boundary of the union of p_i's pair-diagram cells: all cells are convex
/// and contain p_i, so the union is star-shaped and its boundary vertices
/// are cell vertices plus crossings between edges of different cells,
/// filtered to the points interior to no cell and sorted by angle.
pub fn star_polygon(diagrams: &PairDiagrams, i: u32) -> StarPolygon {
    let center = diagrams.points[i as usize].point();
    let cells: Vec<&ConvexCell> = diagrams.pair_cells[i as usize]
        .iter()
        .map(|(_, c)| c)
        .collect();
    let scale = diagrams.clip[2].x - diagrams.clip[0].x;
    let tol = EPS * scale.max(1.0) * scale.max(1.0);
    let mut cands: Vec<Point> = Vec::new();
    for cell in &cells {
        cands.extend_from_slice(cell);
    }
    for a in 0..cells.len() {
        for b in (a + 1)..cells.len() {
            for e1 in edges(cells[a]) {
                for e2 in edges(cells[b]) {
                    if let Some(x) = segment_intersection(e1, e2) {
                        cands.push(x);
                    }
                }
            }
        }
    }
    let mut boundary: Vec<(f64, f64, Point)> = Vec::new();
    'cand: for v in cands {
        let mut on_some = false;
        for cell in &cells {
            if point_in_convex(v, cell, tol) {
                on_some = true;
                // Strictly interior to a cell means not on the union boundary.
                if point_in_convex_strict(v, cell, tol) {
                    continue 'cand;
                }
            }
        }
        if !on_some {
            continue;
        }
        let ang = (v.y - center.y).atan2(v.x - center.x);
        let r = v.dist(&center);
        boundary.push((ang, r, v));
    }
    boundary.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    boundary.dedup_by(|a, b| (a.2.x - b.2.x).abs() <= tol && (a.2.y - b.2.y).abs() <= tol);
    StarPolygon {
        owner: i,
        boundary: boundary.into_iter().map(|(_, _, v)| v).collect(),
    }
}

fn point_in_convex_strict(p: Point, cell: &[Point], tol: f64) -> bool {
    let n = cell.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = cell[i];
        let b = cell[(i + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if cross <= tol {
            return false;
        }
    }
    true
}

fn edges(cell: &ConvexCell) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = cell.len();
    (0..n).map(move |i| (cell[i], cell[(i + 1) % n]))
}

fn segment_intersection(a: (Point, Point), b: (Point, Point)) -> Option<Point> {
    let d1 = Point::new(a.1.x - a.0.x, a.1.y - a.0.y);
    let d2 = Point::new(b.1.x - b.0.x, b.1.y - b.0.y);
    let denom = d1.x * d2.y - d1.y * d2.x;
    if denom.abs() <= 1e-30 {
        return None;
    }
    let sx = b.0.x - a.0.x;
    let sy = b.0.y - a.0.y;
    let t = (sx * d2.y - sy * d2.x) / denom;
    let u = (sx * d1.y - sy * d1.x) / denom;
    if !(-1e-9..=1.0 + 1e-9).contains(&t) || !(-1e-9..=1.0 + 1e-9).contains(&u) {
        return None;
    }
    Some(Point::new(a.0.x + t * d1.x, a.0.y + t * d1.y))
}

/// Spanning radius at `c`: max over colors of the nearest same-color point.
pub fn spanning_radius(points: &[ColoredPoint], k: u32, c: Point) -> f64 {
    let mut nearest = vec![f64::INFINITY; k as usize];
    for p in points {
        let d = p.point().dist(&c);
        let slot = &mut nearest[p.color as usize];
        if d < *slot {
            *slot = d;
        }
    }
    nearest.into_iter().fold(0.0f64, f64::max)
}

fn circle_spans(points: &[ColoredPoint], k: u32, c: &Circle) -> bool {
    let mut seen = vec![false; k as usize];
    for p in points {
        if c.contains(p.point()) {
            seen[p.color as usize] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Smallest color-spanning circle radius over the sub-point-set `pts`,
/// by exhausting diametral pairs and circumcircle triples.
fn smallest_spanning_radius_over(pts: &[ColoredPoint], k: u32) -> Option<f64> {
    let mut seen = vec![false; k as usize];
    for p in pts {
        seen[p.color as usize] = true;
    }
    if seen.iter().any(|s| !s) {
        return None;
    }
    let mut best = f64::INFINITY;
    let mut consider = |c: Circle| {
        if c.radius < best && circle_spans(pts, k, &c) {
            best = c.radius;
        }
    };
    for p in pts {
        consider(Circle::new(p.point(), 0.0));
    }
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let (a, b) = (pts[i].point(), pts[j].point());
            let mid = Point::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            consider(Circle::new(mid, 0.5 * a.dist(&b)));
            for l in (j + 1)..pts.len() {
                if let Some(cc) = geom::circumcenter(a, b, pts[l].point()) {
                    consider(Circle::new(cc, cc.dist(&a)));
                }
            }
        }
    }
    (best < f64::INFINITY).then_some(best)
}

/// Minimality in the containment sense: no color-spanning circle of
/// smaller radius exists whose points are a subset of this circle's points.
pub fn is_minimal_circle(points: &[ColoredPoint], k: u32, c: &Circle) -> bool {
    if !circle_spans(points, k, c) {
        return false;
    }
    let tol = EPS * f64::max(1.0, c.radius);
    let inside: Vec<ColoredPoint> = points
        .iter()
        .filter(|p| c.contains(p.point()))
        .cloned()
        .collect();
    match smallest_spanning_radius_over(&inside, k) {
        Some(r) => r >= c.radius - tol,
        None => false,
    }
}

pub fn minimal_circles(points: &[ColoredPoint], k: u32) -> Result<MinimalCircleSet> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 1 {
        // Every point is its own zero-radius spanning circle.
        let mut circles: Vec<MinimalCircle> = points
            .iter()
            .enumerate()
            .map(|(i, p)| MinimalCircle {
                circle: Circle::new(p.point(), 0.0),
                owner: i as u32,
            })
            .collect();
        dedup_circles(&mut circles);
        return Ok(MinimalCircleSet { circles });
    }
    let diagrams = build_pair_diagrams(points, k)?;
    let mut circles: Vec<MinimalCircle> = Vec::new();
    for i in 0..points.len() {
        let site = points[i].point();
        let star = star_polygon(&diagrams, i as u32);
        let mut centers: Vec<Point> = Vec::new();
        let m = star.boundary.len();
        for e in 0..m {
            let a = star.boundary[e];
            let b = star.boundary[(e + 1) % m];
            centers.push(foot_on_segment(site, a, b));
        }
        // Belt and braces: feet on the raw cell edges cover boundary pieces
        // an imprecise union construction might have trimmed away.
        for (_, cell) in &diagrams.pair_cells[i] {
            for (a, b) in edges(cell) {
                centers.push(foot_on_segment(site, a, b));
            }
        }
        for c in centers {
            let cand = Circle::new(c, c.dist(&site));
            if is_minimal_circle(points, k, &cand) {
                circles.push(MinimalCircle {
                    circle: cand,
                    owner: i as u32,
                });
            }
        }
    }
    dedup_circles(&mut circles);
    Ok(MinimalCircleSet { circles })
}

fn foot_on_segment(p: Point, a: Point, b: Point) -> Point {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len_sq = dx * dx + dy * dy;
    if len_sq <= 1e-30 {
        return a;
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq).clamp(0.0, 1.0);
    Point::new(a.x + t * dx, a.y + t * dy)
}

fn dedup_circles(circles: &mut Vec<MinimalCircle>) {
    circles.sort_by(|a, b| {
        a.circle
            .radius
            .total_cmp(&b.circle.radius)
            .then(a.circle.center.x.total_cmp(&b.circle.center.x))
            .then(a.circle.center.y.total_cmp(&b.circle.center.y))
            .then(a.owner.cmp(&b.owner))
    });
    circles.dedup_by(|a, b| {
        (a.circle.radius - b.circle.radius).abs() <= 1e-9
            && (a.circle.center.x - b.circle.center.x).abs() <= 1e-9
            && (a.circle.center.y - b.circle.center.y).abs() <= 1e-9
    });
}

/// Radius-ordered search structure for "smallest minimal circle containing q".
#[derive(Debug, Clone)]
pub struct Type1Index {
    pub set: MinimalCircleSet,
    planes: Vec<LiftedPlane>,
}

impl Type1Index {
    pub fn build(points: &[ColoredPoint], k: u32) -> Result<Type1Index> {
        let set = minimal_circles(points, k)?;
        let planes = set.circles.iter().map(|c| geom::lift_circle(&c.circle)).collect();
        Ok(Type1Index { set, planes })
    }

    /// Leftmost (smallest-radius) circle whose closed disk contains q, via
    /// binary descent over the radius order; each node answers "does any
    /// circle in my range contain q" with the lifted-plane predicate.
    pub fn query(&self, q: Point) -> Option<QueryAnswer> {
        let idx = self.first_containing(0, self.planes.len(), q)?;
        let c = &self.set.circles[idx];
        Some(QueryAnswer {
            size: c.circle.radius,
            geometry: Geometry::circle(&c.circle),
            provenance: Provenance::Contained,
            family: "type1-minimal".into(),
        })
    }

    fn any_below(&self, lo: usize, hi: usize, q: Point) -> bool {
        self.planes[lo..hi].iter().any(|pl| geom::point_below_lift(q, pl))
    }

    fn first_containing(&self, lo: usize, hi: usize, q: Point) -> Option<usize> {
        if lo >= hi || !self.any_below(lo, hi, q) {
            return None;
        }
        if hi - lo == 1 {
            return Some(lo);
        }
        let mid = lo + (hi - lo) / 2;
        self.first_containing(lo, mid, q)
            .or_else(|| self.first_containing(mid, hi, q))
    }
}
