//! Distance-curve envelopes for circle queries constrained to a line, the
//! per-input-line envelope family answering queries on any horizontal line,
//! and the orientation-sampled (1+epsilon) Type-II circle answer.
//!
//! All envelopes live in squared-distance space. Subtracting x^2 from a
//! squared-distance parabola leaves a line, so per-color lower envelopes and
//! the cross-color upper envelope are computed on lines and carried around
//! as (owner, x-interval) arcs; heights are evaluated from the owner point.

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};
use crate::geom::{self, Circle, ColoredPoint, Point, EPS};
use crate::scsc_circles::{spanning_radius, Type1Index};

#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub owner: u32,
    pub x_from: f64,
    pub x_to: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    ArcIntersection,
    ArcMinimum,
}

#[derive(Debug, Clone, Copy)]
pub struct Vertex {
    pub x: f64,
    pub sq_height: f64,
    pub kind: VertexKind,
    pub radius: f64,
}

/// Upper envelope (over colors) of per-color lower envelopes of squared
/// distance curves from a sliding center on `y = base_line_y`.
#[derive(Debug, Clone)]
pub struct EnvelopeCurve {
    pub base_line_y: f64,
    /// Working point set: input reflected above the base line.
    pub points: Vec<ColoredPoint>,
    pub arcs: Vec<Arc>,
    pub vertices: Vec<Vertex>,
}

/// One piecewise-linear function in g-space (squared distance minus x^2):
/// maximal intervals with a single owning point.
type Piecewise = Vec<Arc>;

fn g_coeffs(p: Point, line_y: f64) -> (f64, f64) {
    let h = p.y - line_y;
    (-2.0 * p.x, p.x * p.x + h * h)
}

fn eval_g(points: &[ColoredPoint], owner: u32, line_y: f64, x: f64) -> f64 {
    let (m, b) = g_coeffs(points[owner as usize].point(), line_y);
    m * x + b
}

/// Lower envelope of the lines for `ids` (a single color class).
fn lower_envelope(points: &[ColoredPoint], line_y: f64, ids: &[u32]) -> Piecewise {
    // Leftmost piece belongs to the steepest descending line, i.e. the
    // largest slope as x -> -inf minimizes m*x. Sort by slope descending,
    // tie-broken by intercept so dominated duplicates drop out.
    let mut lines: Vec<(f64, f64, u32)> = ids
        .iter()
        .map(|&i| {
            let (m, b) = g_coeffs(points[i as usize].point(), line_y);
            (m, b, i)
        })
        .collect();
    lines.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    lines.dedup_by(|a, b| a.0 == b.0); // keep the lower of equal slopes
    let mut hull: Vec<(f64, f64, u32)> = Vec::new();
    let mut breaks: Vec<f64> = Vec::new();
    for (m, b, id) in lines {
        loop {
            match hull.last() {
                None => break,
                Some(&(pm, pb, _)) => {
                    // Crossing with the previous hull line.
                    let x = (b - pb) / (pm - m);
                    if let Some(&last_break) = breaks.last() {
                        if x <= last_break {
                            hull.pop();
                            breaks.pop();
                            continue;
                        }
                    }
                    breaks.push(x);
                    break;
                }
            }
        }
        hull.push((m, b, id));
    }
    let mut out = Vec::with_capacity(hull.len());
    for (i, &(_, _, id)) in hull.iter().enumerate() {
        let x_from = if i == 0 { f64::NEG_INFINITY } else { breaks[i - 1] };
        let x_to = if i == hull.len() - 1 { f64::INFINITY } else { breaks[i] };
        out.push(Arc { owner: id, x_from, x_to });
    }
    out
}

/// Pointwise max of two piecewise-linear functions in g-space.
fn merge_upper(points: &[ColoredPoint], line_y: f64, f: &Piecewise, g: &Piecewise) -> Piecewise {
    let mut cuts: Vec<f64> = Vec::new();
    for a in f.iter().chain(g.iter()) {
        if a.x_from.is_finite() {
            cuts.push(a.x_from);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out: Piecewise = Vec::new();
    let push = |owner: u32, x_from: f64, x_to: f64, out: &mut Piecewise| {
        if x_to <= x_from {
            return;
        }
        if let Some(last) = out.last_mut() {
            if last.owner == owner {
                last.x_to = x_to;
                return;
            }
        }
        out.push(Arc { owner, x_from, x_to });
    };
    let mut bounds: Vec<f64> = Vec::with_capacity(cuts.len() + 2);
    bounds.push(f64::NEG_INFINITY);
    bounds.extend_from_slice(&cuts);
    bounds.push(f64::INFINITY);
    let mut fi = 0usize;
    let mut gi = 0usize;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        while f[fi].x_to <= lo && fi + 1 < f.len() {
            fi += 1;
        }
        while g[gi].x_to <= lo && gi + 1 < g.len() {
            gi += 1;
        }
        let fa = f[fi];
        let ga = g[gi];
        let (fm, fb) = g_coeffs(points[fa.owner as usize].point(), line_y);
        let (gm, gb) = g_coeffs(points[ga.owner as usize].point(), line_y);
        let dm = fm - gm;
        let db = fb - gb;
        // Crossing of the two lines inside (lo, hi)?
        let cross = if dm != 0.0 {
            let x = -db / dm;
            (x > lo && x < hi).then_some(x)
        } else {
            None
        };
        let probe = |a: f64, b: f64| -> f64 {
            if a.is_finite() && b.is_finite() {
                0.5 * (a + b)
            } else if a.is_finite() {
                a + 1.0
            } else if b.is_finite() {
                b - 1.0
            } else {
                0.0
            }
        };
        match cross {
            Some(x) => {
                let lval = dm * probe(lo, x) + db;
                let (first, second) = if lval >= 0.0 {
                    (fa.owner, ga.owner)
                } else {
                    (ga.owner, fa.owner)
                };
                push(first, lo, x, &mut out);
                push(second, x, hi, &mut out);
            }
            None => {
                let val = dm * probe(lo, hi) + db;
                let owner = if val >= 0.0 { fa.owner } else { ga.owner };
                push(owner, lo, hi, &mut out);
            }
        }
    }
    out
}

fn envelope_value_at(points: &[ColoredPoint], line_y: f64, arcs: &[Arc], x: f64) -> f64 {
    let i = arcs.partition_point(|a| a.x_to < x).min(arcs.len() - 1);
    eval_g(points, arcs[i].owner, line_y, x) + x * x
}

pub fn build_envelope(points: &[ColoredPoint], line_y: f64, k: u32) -> Result<EnvelopeCurve> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let reflected = geom::reflect_below_line(points, line_y);
    let mut by_color: Vec<Vec<u32>> = vec![Vec::new(); k as usize];
    for (i, p) in reflected.iter().enumerate() {
        if p.color >= k {
            return Err(Error::Invalid(format!("color {} out of range", p.color)));
        }
        by_color[p.color as usize].push(i as u32);
    }
    let mut upper: Option<Piecewise> = None;
    for (c, ids) in by_color.iter().enumerate() {
        if ids.is_empty() {
            return Err(Error::MissingColor(c as u32));
        }
        let lower = lower_envelope(&reflected, line_y, ids);
        upper = Some(match upper {
            None => lower,
            Some(u) => merge_upper(&reflected, line_y, &u, &lower),
        });
    }
    let arcs = upper.unwrap();
    let mut vertices: Vec<Vertex> = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        let p = reflected[a.owner as usize].point();
        if p.x > a.x_from && p.x < a.x_to {
            let sq = (p.y - line_y) * (p.y - line_y);
            vertices.push(Vertex {
                x: p.x,
                sq_height: sq,
                kind: VertexKind::ArcMinimum,
                radius: sq.max(0.0).sqrt(),
            });
        }
        if i + 1 < arcs.len() {
            let x = a.x_to;
            let sq = eval_g(&reflected, a.owner, line_y, x) + x * x;
            vertices.push(Vertex {
                x,
                sq_height: sq,
                kind: VertexKind::ArcIntersection,
                radius: sq.max(0.0).sqrt(),
            });
        }
    }
    vertices.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(EnvelopeCurve {
        base_line_y: line_y,
        points: reflected,
        arcs,
        vertices,
    })
}

impl EnvelopeCurve {
    /// Squared spanning radius of a center at (x, base_line).
    pub fn value(&self, x: f64) -> f64 {
        envelope_value_at(&self.points, self.base_line_y, &self.arcs, x)
    }
}

/// Center x and radius of the smallest color-spanning circle centered on
/// the envelope's line.
pub fn envelope_global_min(env: &EnvelopeCurve) -> (f64, f64) {
    let best = env
        .vertices
        .iter()
        .min_by(|a, b| a.sq_height.total_cmp(&b.sq_height))
        .expect("envelope has at least one vertex");
    (best.x, best.radius)
}

/// Smallest color-spanning circle centered on the envelope's line whose
/// closed disk contains `q`: minimize over x the max of the envelope and
/// the squared distance curve of q.
pub fn query_constrained(env: &EnvelopeCurve, q: Point) -> QueryAnswer {
    let line_y = env.base_line_y;
    let hq = (q.y - line_y).abs();
    let q_up = Point::new(q.x, line_y + hq);
    let (qm, qb) = g_coeffs(q_up, line_y);
    let fq = |x: f64| (x - q.x) * (x - q.x) + hq * hq;

    // Candidate centers: arc boundaries, per-arc parabola minima, crossings
    // of f_q with each arc, and q's own vertical. The pointwise max of two
    // piecewise parabolas attains its minimum at one of these.
    let mut cands: Vec<f64> = vec![q.x];
    for a in &env.arcs {
        if a.x_from.is_finite() {
            cands.push(a.x_from);
        }
        if a.x_to.is_finite() {
            cands.push(a.x_to);
        }
        let p = env.points[a.owner as usize].point();
        if p.x > a.x_from && p.x < a.x_to {
            cands.push(p.x);
        }
        let (m, b) = g_coeffs(p, line_y);
        let dm = qm - m;
        if dm != 0.0 {
            let x = -(qb - b) / dm;
            if x >= a.x_from && x <= a.x_to {
                cands.push(x);
            }
        }
    }
    let mut best_x = q.x;
    let mut best = f64::INFINITY;
    for x in cands {
        let v = env.value(x).max(fq(x));
        if v < best {
            best = v;
            best_x = x;
        }
    }
    let radius = best.max(0.0).sqrt();
    let provenance = if fq(best_x) < env.value(best_x) - EPS * best.max(1.0) {
        Provenance::Contained
    } else {
        Provenance::BoundaryExtension
    };
    QueryAnswer {
        size: radius,
        geometry: Geometry::circle(&Circle::new(Point::new(best_x, line_y), radius)),
        provenance,
        family: "constrained".into(),
    }
}

/// One envelope per input point, keyed by that point's horizontal line.
#[derive(Debug, Clone)]
pub struct EnvelopeFamily {
    pub k: u32,
    /// Original (unreflected) points, shared by every envelope.
    pub points: Vec<ColoredPoint>,
    /// Sorted distinct line heights and the envelope at each.
    pub line_ys: Vec<f64>,
    pub envelopes: Vec<EnvelopeCurve>,
}

pub fn build_hq_family(points: &[ColoredPoint], k: u32) -> Result<EnvelopeFamily> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let mut envelopes = Vec::with_capacity(ys.len());
    for &y in &ys {
        envelopes.push(build_envelope(points, y, k)?);
    }
    Ok(EnvelopeFamily {
        k,
        points: points.to_vec(),
        line_ys: ys,
        envelopes,
    })
}

/// Smallest color-spanning circle centered on the horizontal line through
/// `q` and containing `q` (boundary or interior). Candidate centers are
/// taken from the bracketing envelope's combinatorial structure (the
/// order-preservation lemma keeps arc ownership stable between consecutive
/// input lines) and re-evaluated exactly against the original points.
pub fn query_hq(family: &EnvelopeFamily, q: Point) -> QueryAnswer {
    let idx = family
        .line_ys
        .partition_point(|&y| y <= q.y)
        .saturating_sub(1);
    let env = &family.envelopes[idx];
    let pts = &family.points;
    let k = family.k;

    let mut cands: Vec<f64> = vec![q.x];
    // Arc owners: bisector crossings with q and own parabola minima.
    let mut owners: Vec<u32> = env.arcs.iter().map(|a| a.owner).collect();
    owners.sort_unstable();
    owners.dedup();
    for &o in &owners {
        let p = pts[o as usize].point();
        cands.push(p.x);
        if let Some(z) = geom::bisector_line_intersection(q, p, q.y) {
            cands.push(z.x);
        }
    }
    // Vertex re-evaluation: adjacent arc owners define the envelope's
    // intersection vertices; recompute their centers exactly on h(q).
    for w in env.arcs.windows(2) {
        let a = pts[w[0].owner as usize].point();
        let b = pts[w[1].owner as usize].point();
        if let Some(z) = geom::bisector_line_intersection(a, b, q.y) {
            cands.push(z.x);
        }
    }
    // Vertical projections of the envelope's vertices.
    for v in &env.vertices {
        cands.push(v.x);
    }
    // Desk-scale safety net: the lemma's transfer argument can wobble when
    // reflected points land between the two lines, so also admit every
    // point's bisector with q and all pairwise bisectors.
    for i in 0..pts.len() {
        let a = pts[i].point();
        if let Some(z) = geom::bisector_line_intersection(q, a, q.y) {
            cands.push(z.x);
        }
        for j in (i + 1)..pts.len() {
            if let Some(z) = geom::bisector_line_intersection(a, pts[j].point(), q.y) {
                cands.push(z.x);
            }
        }
    }

    let mut best_x = q.x;
    let mut best = f64::INFINITY;
    for x in cands {
        let c = Point::new(x, q.y);
        let r = spanning_radius(pts, k, c).max((x - q.x).abs());
        if r < best {
            best = r;
            best_x = x;
        }
    }
    let center = Point::new(best_x, q.y);
    let provenance = if (best_x - q.x).abs() < best - EPS * best.max(1.0) {
        Provenance::Contained
    } else {
        Provenance::BoundaryExtension
    };
    QueryAnswer {
        size: best,
        geometry: Geometry::circle(&Circle::new(center, best)),
        provenance,
        family: "hq".into(),
    }
}

/// Rotated copies of the h(q) machinery, one per sampled orientation.
#[derive(Debug, Clone)]
pub struct OrientationFamily {
    pub epsilon: f64,
    pub angles: Vec<f64>,
    pub frames: Vec<EnvelopeFamily>,
}

pub const ORIENTATION_MEMORY_CAP: u64 = 1_000_000;

pub fn build_orientations(
    points: &[ColoredPoint],
    k: u32,
    epsilon: f64,
) -> Result<OrientationFamily> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let count = (std::f64::consts::PI / epsilon).ceil() as u64;
    let need = count * points.len() as u64;
    if need > ORIENTATION_MEMORY_CAP {
        return Err(Error::CapExceeded(need, ORIENTATION_MEMORY_CAP));
    }
    let angles: Vec<f64> = (0..count).map(|t| t as f64 * epsilon).collect();
    build_orientations_with_angles(points, k, epsilon, angles)
}

/// Explicit-angle constructor, used by the rotation-consistency tests.
pub fn build_orientations_with_angles(
    points: &[ColoredPoint],
    k: u32,
    epsilon: f64,
    angles: Vec<f64>,
) -> Result<OrientationFamily> {
    let mut frames = Vec::with_capacity(angles.len());
    for &theta in &angles {
        let rotated = geom::rotate_point_set(points, -theta);
        frames.push(build_hq_family(&rotated, k)?);
    }
    Ok(OrientationFamily {
        epsilon,
        angles,
        frames,
    })
}

/// Best constrained answer over all sampled orientations, mapped back to
/// the input frame. Within (1+epsilon) of the optimal circle with q on its
/// boundary, and never below the true optimum containing q.
pub fn query_type2_approx(fam: &OrientationFamily, q: Point) -> QueryAnswer {
    let mut best: Option<QueryAnswer> = None;
    for (t, frame) in fam.frames.iter().enumerate() {
        let theta = fam.angles[t];
        let qr = geom::rotate_point(q, -theta);
        let mut a = query_hq(frame, qr);
        if let Geometry::Circle { center, radius } = a.geometry {
            let c = geom::rotate_point(center, theta);
            a.geometry = Geometry::circle(&Circle::new(c, radius));
        }
        a.family = format!("type2-approx[{t}]");
        best = match best {
            None => Some(a),
            Some(b) => Some(if a.size < b.size { a } else { b }),
        };
    }
    best.expect("orientation family is never empty")
}

/// Full circle index: exact Type-I over minimal circles plus the
/// orientation-sampled Type-II approximation.
#[derive(Debug, Clone)]
pub struct ScscIndex {
    pub epsilon: f64,
    pub type1: Type1Index,
    pub orientations: OrientationFamily,
}

impl ScscIndex {
    pub fn build(points: &[ColoredPoint], k: u32, epsilon: f64) -> Result<ScscIndex> {
        Ok(ScscIndex {
            epsilon,
            type1: Type1Index::build(points, k)?,
            orientations: build_orientations(points, k, epsilon)?,
        })
    }

    pub fn query(&self, q: Point) -> QueryAnswer {
        let t2 = query_type2_approx(&self.orientations, q);
        match self.type1.query(q) {
            Some(t1) if t1.size <= t2.size => t1,
            _ => t2,
        }
    }
}
