//! Brute-force reference implementations of all five localized queries and
//! the constrained-circle sub-oracle. These deliberately share no index
//! code with the fast paths: agreement between the two is evidence, not a
//! tautology. Everything here is O(n^2)-O(n^4) by design and meant for
//! desk-scale instances (n <= 60).

use crate::answer::Geometry;
use crate::error::{Error, Result};
use crate::geom::{
    circumcenter, le_eps, tri_frame, Circle, ColoredPoint, Point, Triangle, EPS,
};
use crate::scsi::LinePoint;

/// Test plumbing knobs for the oracle cross-checks.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Documented desk-scale bound; the oracles are not meant beyond it.
    pub max_n: usize,
    pub max_k: u32,
    pub tolerance: f64,
    /// Step for dense-grid cross-checks, as a fraction of the instance
    /// diameter.
    pub grid_step_fraction: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n: 60,
            max_k: 8,
            tolerance: EPS,
            grid_step_fraction: 1.0 / 24.0,
            seed: 0xC0FFEE,
        }
    }
}

/// Size and placement of a reference optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer {
    pub size: f64,
    pub geometry: Geometry,
}

fn check_colors_1d(points: &[LinePoint], k: u32) -> Result<()> {
    let mut seen = vec![false; k as usize];
    for p in points {
        seen[p.color as usize] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(c) => Err(Error::MissingColor(c as u32)),
        None => Ok(()),
    }
}

fn check_colors_2d(points: &[ColoredPoint], k: u32) -> Result<()> {
    let mut seen = vec![false; k as usize];
    for p in points {
        seen[p.color as usize] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(c) => Err(Error::MissingColor(c as u32)),
        None => Ok(()),
    }
}

/// Exhaustive minimization over left endpoints: the smallest interval
/// `[a, b]` containing `q` with a point of every color, `a, b` drawn from
/// point coordinates and `q` itself.
pub fn oracle_scsi(points: &[LinePoint], k: u32, q: f64) -> Result<OracleAnswer> {
    check_colors_1d(points, k)?;
    let mut lefts: Vec<f64> = points.iter().map(|p| p.x).filter(|&x| x <= q).collect();
    lefts.push(q);
    let mut best: Option<(f64, f64, f64)> = None;
    for &a in &lefts {
        // minimal right endpoint for this left endpoint
        let mut per_color = vec![f64::INFINITY; k as usize];
        for p in points {
            if p.x >= a && p.x < per_color[p.color as usize] {
                per_color[p.color as usize] = p.x;
            }
        }
        let needed = per_color.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !needed.is_finite() {
            continue;
        }
        let b = f64::max(q, needed);
        let len = b - a;
        if best.map_or(true, |(l, _, _)| len < l) {
            best = Some((len, a, b));
        }
    }
    let (len, a, b) = best.expect("all colors present, so the full span is feasible");
    Ok(OracleAnswer {
        size: len,
        geometry: Geometry::Interval { left: a, right: b },
    })
}

fn square_feasible(
    points: &[ColoredPoint],
    k: u32,
    q: Point,
    lambda: f64,
) -> Option<(f64, f64)> {
    // any feasible placement can slide left then down until an edge is
    // pinned by a point or by q, so these candidate anchors are complete
    let mut ls: Vec<f64> = points.iter().map(|p| p.x - lambda).collect();
    ls.push(q.x - lambda);
    let mut bs: Vec<f64> = points.iter().map(|p| p.y - lambda).collect();
    bs.push(q.y - lambda);
    for &l in &ls {
        if !le_eps(l, q.x) || !le_eps(q.x, l + lambda) {
            continue;
        }
        for &b in &bs {
            if !le_eps(b, q.y) || !le_eps(q.y, b + lambda) {
                continue;
            }
            let mut seen = vec![false; k as usize];
            let mut covered = 0;
            for p in points {
                if le_eps(l, p.x)
                    && le_eps(p.x, l + lambda)
                    && le_eps(b, p.y)
                    && le_eps(p.y, b + lambda)
                    && !seen[p.color as usize]
                {
                    seen[p.color as usize] = true;
                    covered += 1;
                }
            }
            if covered == k {
                return Some((l, b));
            }
        }
    }
    None
}

/// Smallest color-spanning axis-parallel square containing `q`: binary
/// search over the candidate side lengths (all pairwise coordinate
/// differences among points and `q`, per axis).
pub fn oracle_scss(points: &[ColoredPoint], k: u32, q: Point) -> Result<OracleAnswer> {
    check_colors_2d(points, k)?;
    let xs: Vec<f64> = points.iter().map(|p| p.x).chain([q.x]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).chain([q.y]).collect();
    let mut sides = vec![0.0];
    for vals in [&xs, &ys] {
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                sides.push((vals[i] - vals[j]).abs());
            }
        }
    }
    sides.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sides.dedup();
    // feasibility is monotone in the side length
    let mut lo = 0usize;
    let mut hi = sides.len() - 1;
    debug_assert!(square_feasible(points, k, q, sides[hi]).is_some());
    if square_feasible(points, k, q, sides[0]).is_none() {
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if square_feasible(points, k, q, sides[mid]).is_some() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    } else {
        hi = 0;
    }
    let lambda = sides[hi];
    let (l, b) = square_feasible(points, k, q, lambda).unwrap();
    Ok(OracleAnswer {
        size: lambda,
        geometry: Geometry::Square {
            l,
            r: l + lambda,
            b,
            t: b + lambda,
        },
    })
}

/// Smallest-semi-perimeter color-spanning axis-parallel rectangle
/// containing `q`: enumerate tight (l, r) pairs, then sweep the bottom
/// edge downward solving the induced 1D y-window problem.
pub fn oracle_scsr(points: &[ColoredPoint], k: u32, q: Point) -> Result<OracleAnswer> {
    check_colors_2d(points, k)?;
    let mut lefts: Vec<f64> = points.iter().map(|p| p.x).filter(|&x| le_eps(x, q.x)).collect();
    lefts.push(q.x);
    let mut rights: Vec<f64> = points.iter().map(|p| p.x).filter(|&x| le_eps(q.x, x)).collect();
    rights.push(q.x);
    let mut best: Option<(f64, f64, f64, f64, f64)> = None;
    for &l in &lefts {
        for &r in &rights {
            if r < l {
                continue;
            }
            // points inside the x-slab, sorted by descending y
            let mut slab: Vec<&ColoredPoint> = points
                .iter()
                .filter(|p| le_eps(l, p.x) && le_eps(p.x, r))
                .collect();
            slab.sort_by(|a, b| b.y.partial_cmp(&a.y).unwrap());
            // lowering b grows the eligible set; per color, the smallest
            // eligible y is the most recently added point of that color
            let mut lowest = vec![f64::INFINITY; k as usize];
            let mut covered = 0usize;
            let mut idx = 0usize;
            let try_bottom = |b: f64,
                                  lowest: &[f64],
                                  covered: usize,
                                  best: &mut Option<(f64, f64, f64, f64, f64)>| {
                if covered < k as usize || !le_eps(b, q.y) {
                    return;
                }
                let t = lowest.iter().cloned().fold(q.y, f64::max);
                let size = (r - l) + (t - b);
                if best.map_or(true, |(s, _, _, _, _)| size < s) {
                    *best = Some((size, l, r, b, t));
                }
            };
            // candidate bottoms: q.y, then each slab y below it
            while idx < slab.len() && slab[idx].y >= q.y {
                let c = slab[idx].color as usize;
                if lowest[c].is_infinite() {
                    covered += 1;
                }
                lowest[c] = slab[idx].y;
                idx += 1;
            }
            try_bottom(q.y, &lowest, covered, &mut best);
            while idx < slab.len() {
                let c = slab[idx].color as usize;
                if lowest[c].is_infinite() {
                    covered += 1;
                }
                lowest[c] = slab[idx].y;
                let b = slab[idx].y;
                idx += 1;
                // process ties together so every color at this level counts
                while idx < slab.len() && slab[idx].y == b {
                    let c2 = slab[idx].color as usize;
                    if lowest[c2].is_infinite() {
                        covered += 1;
                    }
                    lowest[c2] = slab[idx].y;
                    idx += 1;
                }
                try_bottom(b, &lowest, covered, &mut best);
            }
        }
    }
    let (size, l, r, b, t) = best.expect("all colors present, so the bounding rectangle is feasible");
    Ok(OracleAnswer {
        size,
        geometry: Geometry::Rect { l, r, b, t },
    })
}

/// Smallest color-spanning apex-up equilateral triangle containing `q`:
/// enumerate tight base levels and left-arm levels, derive the minimal
/// right-arm level per color.
pub fn oracle_scst(points: &[ColoredPoint], k: u32, q: Point) -> Result<OracleAnswer> {
    check_colors_2d(points, k)?;
    let frames: Vec<_> = points.iter().map(|p| tri_frame(p.point())).collect();
    let fq = tri_frame(q);
    let mut bases: Vec<f64> = frames.iter().map(|f| f.y_nu).filter(|&b| le_eps(b, fq.y_nu)).collect();
    bases.push(fq.y_nu);
    let mut arms: Vec<f64> = frames
        .iter()
        .map(|f| f.y_alpha)
        .filter(|&a| le_eps(fq.y_alpha, a))
        .collect();
    arms.push(fq.y_alpha);
    let mut best: Option<(f64, Triangle)> = None;
    for &b in &bases {
        for &a in &arms {
            let mut per_color = vec![f64::INFINITY; k as usize];
            for (p, f) in points.iter().zip(&frames) {
                if le_eps(b, f.y_nu) && le_eps(f.y_alpha, a) && f.y_beta < per_color[p.color as usize] {
                    per_color[p.color as usize] = f.y_beta;
                }
            }
            let needed = per_color.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !needed.is_finite() {
                continue;
            }
            let r = f64::max(fq.y_beta, needed);
            let tri = Triangle::from_levels(b, a, r);
            let side = tri.side();
            if side < -EPS {
                continue;
            }
            if best.as_ref().map_or(true, |(s, _)| side < *s) {
                best = Some((side, tri));
            }
        }
    }
    let (size, tri) = best.expect("all colors present, so some containing triangle is feasible");
    Ok(OracleAnswer {
        size,
        geometry: Geometry::triangle(&tri),
    })
}

fn circle_spans(points: &[ColoredPoint], k: u32, c: &Circle) -> bool {
    let mut seen = vec![false; k as usize];
    let mut covered = 0;
    for p in points {
        if !seen[p.color as usize] && c.contains(p.point()) {
            seen[p.color as usize] = true;
            covered += 1;
            if covered == k {
                return true;
            }
        }
    }
    covered == k
}

/// Smallest color-spanning circle containing `q`, exactly. The optimum is
/// the minimum enclosing circle of {q} plus one representative per color,
/// hence determined by at most three points of `points` and `q`: enumerate
/// degenerate single-point circles, diametral pairs and circumcircles.
pub fn oracle_scsc_exact(points: &[ColoredPoint], k: u32, q: Point) -> Result<OracleAnswer> {
    check_colors_2d(points, k)?;
    let all: Vec<Point> = points.iter().map(|p| p.point()).chain([q]).collect();
    let mut best: Option<Circle> = None;
    let mut consider = |c: Circle| {
        if best.as_ref().map_or(true, |b| c.radius < b.radius)
            && c.contains(q)
            && circle_spans(points, k, &c)
        {
            best = Some(c);
        }
    };
    for p in &all {
        consider(Circle::new(*p, 0.0));
    }
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let center = Point::new((all[i].x + all[j].x) / 2.0, (all[i].y + all[j].y) / 2.0);
            consider(Circle::new(center, all[i].dist(&all[j]) / 2.0));
            for m in (j + 1)..all.len() {
                if let Some(center) = circumcenter(all[i], all[j], all[m]) {
                    consider(Circle::new(center, center.dist(&all[i])));
                }
            }
        }
    }
    let c = best.expect("the enclosing circle of everything is always a candidate");
    Ok(OracleAnswer {
        size: c.radius,
        geometry: Geometry::circle(&c),
    })
}

/// max(distance to q, spanning radius) for a center on the line `y = h`.
fn constrained_objective(points: &[ColoredPoint], k: u32, q: Point, h: f64, x: f64) -> f64 {
    let c = Point::new(x, h);
    let mut worst = c.dist(&q);
    let mut per_color = vec![f64::INFINITY; k as usize];
    for p in points {
        let d = c.dist(&p.point());
        if d < per_color[p.color as usize] {
            per_color[p.color as usize] = d;
        }
    }
    for d in per_color {
        worst = f64::max(worst, d);
    }
    worst
}

/// Smallest radius of a circle containing `q` and all colors whose center
/// lies on the horizontal line `y = h`: candidate centers are perpendicular
/// feet and pairwise-bisector crossings, refined by golden-section search
/// in each candidate gap (the objective is convex between breakpoints).
pub fn oracle_constrained_scsc(
    points: &[ColoredPoint],
    k: u32,
    q: Point,
    h: f64,
) -> Result<(f64, Point)> {
    check_colors_2d(points, k)?;
    let sites: Vec<Point> = points.iter().map(|p| p.point()).chain([q]).collect();
    let mut xs: Vec<f64> = sites.iter().map(|p| p.x).collect();
    for i in 0..sites.len() {
        for j in (i + 1)..sites.len() {
            if let Some(p) = crate::geom::bisector_line_intersection(sites[i], sites[j], h) {
                xs.push(p.x);
            }
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let f = |x: f64| constrained_objective(points, k, q, h, x);
    let mut best_x = xs[0];
    let mut best_v = f(xs[0]);
    let consider = |x: f64, v: f64, best_x: &mut f64, best_v: &mut f64| {
        if v < *best_v {
            *best_v = v;
            *best_x = x;
        }
    };
    for &x in &xs[1..] {
        consider(x, f(x), &mut best_x, &mut best_v);
    }
    const PHI: f64 = 0.6180339887498949;
    for w in xs.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if hi - lo <= EPS {
            continue;
        }
        let mut x1 = hi - PHI * (hi - lo);
        let mut x2 = lo + PHI * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - PHI * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + PHI * (hi - lo);
                f2 = f(x2);
            }
            if hi - lo <= EPS * f64::max(1.0, lo.abs().max(hi.abs())) {
                break;
            }
        }
        let xm = (lo + hi) / 2.0;
        consider(xm, f(xm), &mut best_x, &mut best_v);
    }
    Ok((best_v, Point::new(best_x, h)))
}
