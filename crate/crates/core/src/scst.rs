//! Minimal color-spanning apex-up equilateral triangles and localized
//! queries. A triangle is the intersection of three half-planes, one per
//! frame: y >= b (base), y_alpha <= a (left arm), y_beta <= r (right arm).
//! A query point outside a triangle violates one constraint (edge slab) or
//! two (vertex cone); each of the six cases keeps the untouched lines and
//! moves the violated ones through q, giving an affine extended size.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};
use crate::geom::{
    le_eps, point_in_triangle_direct, point_in_triangle_frames, tri_frame, ColoredPoint, Point,
    Triangle, EPS,
};
use crate::index::{
    build_index, query_best, AggregateDominanceIndex, AggregateMode, Bound, DominanceQuery,
    KeyedSite,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalTriangle {
    pub tri: Triangle,
    /// base level y(s^l)
    pub b: f64,
    /// left-arm level y_alpha(s^l)
    pub a: f64,
    /// right-arm level y_beta(s^r)
    pub r: f64,
    pub lambda: f64,
}

fn check_colors(points: &[ColoredPoint], k: u32) -> Result<()> {
    let mut seen = vec![false; k as usize];
    for p in points {
        seen[p.color as usize] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(c) => Err(Error::MissingColor(c as u32)),
        None => Ok(()),
    }
}

/// Brute force over the three frame levels drawn from the points' frame
/// coordinates: every minimal triangle has each level tight at some
/// necessary color, so the candidate grid is complete; a keep-list pass
/// drops candidates properly containing a kept member.
pub fn enumerate_minimal_triangles(points: &[ColoredPoint], k: u32) -> Result<Vec<MinimalTriangle>> {
    check_colors(points, k)?;
    let frames: Vec<_> = points.iter().map(|p| tri_frame(p.point())).collect();
    let mut cands: Vec<MinimalTriangle> = Vec::new();
    for fb in &frames {
        let b = fb.y_nu;
        for fa in &frames {
            let a = fa.y_alpha;
            // smallest right-arm level spanning all colors within the wedge
            let mut per_color = vec![f64::INFINITY; k as usize];
            for (p, f) in points.iter().zip(&frames) {
                if le_eps(b, f.y_nu) && le_eps(f.y_alpha, a) && f.y_beta < per_color[p.color as usize] {
                    per_color[p.color as usize] = f.y_beta;
                }
            }
            let r = per_color.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !r.is_finite() {
                continue;
            }
            let tri = Triangle::from_levels(b, a, r);
            if tri.side() < -EPS {
                continue;
            }
            cands.push(MinimalTriangle {
                tri,
                b,
                a,
                r,
                lambda: tri.side().max(0.0),
            });
        }
    }
    cands.sort_by(|x, y| {
        (x.lambda, x.b, x.a)
            .partial_cmp(&(y.lambda, y.b, y.a))
            .unwrap()
    });
    cands.dedup_by(|x, y| {
        (x.b - y.b).abs() <= EPS && (x.a - y.a).abs() <= EPS && (x.r - y.r).abs() <= EPS
    });
    let mut kept: Vec<MinimalTriangle> = Vec::new();
    'outer: for c in cands {
        for m in &kept {
            // m inside c: higher base, lower arm levels
            if m.lambda < c.lambda - EPS && le_eps(c.b, m.b) && le_eps(m.a, c.a) && le_eps(m.r, c.r) {
                continue 'outer;
            }
        }
        kept.push(c);
    }
    Ok(kept)
}

/// Validates the frame sign conventions once per process: the frames
/// containment predicate must agree with the direct orientation tests, and
/// each of the six extension formulas must produce a triangle containing
/// both q and the source triangle. Build fails loudly on any disagreement.
fn validate_frame_conventions() -> Result<()> {
    static CHECK: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    CHECK
        .get_or_init(|| {
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            for _ in 0..500 {
                let b = next() * 10.0 - 5.0;
                let a = next() * 10.0 - 5.0;
                let r = b - a + next() * 10.0;
                let tri = Triangle::from_levels(b, a, r);
                let q = Point::new(next() * 30.0 - 15.0, next() * 30.0 - 15.0);
                let f = tri_frame(q);
                let margins = [
                    (f.y_nu - b).abs(),
                    (f.y_alpha - a).abs(),
                    (f.y_beta - r).abs(),
                ];
                if margins.iter().any(|m| *m < 1e-6) {
                    continue;
                }
                if point_in_triangle_frames(q, &tri) != point_in_triangle_direct(q, &tri) {
                    return Err(format!("frame/direct containment disagree at q={q:?} tri={tri:?}"));
                }
                if point_in_triangle_frames(q, &tri) {
                    continue;
                }
                // the extension moving each violated line through q must
                // contain q and the source triangle
                let eb = if f.y_nu < b { f.y_nu } else { b };
                let ea = if f.y_alpha > a { f.y_alpha } else { a };
                let er = if f.y_beta > r { f.y_beta } else { r };
                let ext = Triangle::from_levels(eb, ea, er);
                if !point_in_triangle_frames(q, &ext)
                    || !point_in_triangle_frames(tri.v_bl, &ext)
                    || !point_in_triangle_frames(tri.v_br, &ext)
                    || !point_in_triangle_frames(tri.v_top, &ext)
                {
                    return Err(format!("extension does not cover source at q={q:?} tri={tri:?}"));
                }
            }
            Ok(())
        })
        .clone()
        .map_err(Error::Invalid)
}

pub struct ScstIndex {
    pub triangles: Vec<MinimalTriangle>,
    contained: AggregateDominanceIndex,
    edge_base: AggregateDominanceIndex,
    edge_left: AggregateDominanceIndex,
    edge_right: AggregateDominanceIndex,
    cone_apex: AggregateDominanceIndex,
    cone_bl: AggregateDominanceIndex,
    cone_br: AggregateDominanceIndex,
}

pub fn build(points: &[ColoredPoint], k: u32) -> Result<ScstIndex> {
    validate_frame_conventions()?;
    let triangles = enumerate_minimal_triangles(points, k)?;
    Ok(build_from_triangles(triangles))
}

pub fn build_from_triangles(triangles: Vec<MinimalTriangle>) -> ScstIndex {
    let make = |key: &dyn Fn(&MinimalTriangle) -> f64, mode: AggregateMode| {
        build_index(
            triangles
                .iter()
                .enumerate()
                .map(|(i, t)| KeyedSite::new(vec![t.b, t.a, t.r], key(t), i as u32))
                .collect(),
            mode,
        )
    };
    ScstIndex {
        contained: make(&|t| t.lambda, AggregateMode::Min),
        // base slab: lambda' = 2(a + r - y(q))/sqrt(3)
        edge_base: make(&|t| t.a + t.r, AggregateMode::Min),
        // left-arm slab: lambda' = 2(y_alpha(q) + r - b)/sqrt(3)
        edge_left: make(&|t| t.r - t.b, AggregateMode::Min),
        // right-arm slab: lambda' = 2(y_beta(q) - (b - a))/sqrt(3)
        edge_right: make(&|t| t.b - t.a, AggregateMode::Max),
        // apex cone: lambda' = 2(y(q) - b)/sqrt(3)
        cone_apex: make(&|t| t.b, AggregateMode::Max),
        // bottom-left cone: lambda' = 2(r - y_beta(q))/sqrt(3)
        cone_bl: make(&|t| t.r, AggregateMode::Min),
        // bottom-right cone: lambda' = 2(a - y_alpha(q))/sqrt(3)
        cone_br: make(&|t| t.a, AggregateMode::Min),
        triangles,
    }
}

impl ScstIndex {
    pub fn query_contained(&self, q: Point) -> Option<QueryAnswer> {
        let f = tri_frame(q);
        let dq = DominanceQuery::new(vec![
            Bound::Le(f.y_nu),
            Bound::Ge(f.y_alpha),
            Bound::Ge(f.y_beta),
        ]);
        let (lambda, id) = query_best(&self.contained, &dq)?;
        Some(QueryAnswer {
            size: lambda,
            geometry: Geometry::triangle(&self.triangles[id as usize].tri),
            provenance: Provenance::Contained,
            family: "contained".into(),
        })
    }

    /// The three vertex-cone families (two constraints violated).
    pub fn query_vertex_regions(&self, q: Point) -> Option<QueryAnswer> {
        let f = tri_frame(q);
        let mut best: Option<QueryAnswer> = None;
        // apex cone: both arms moved through q; base condition is implied
        if let Some((b, id)) = query_best(
            &self.cone_apex,
            &DominanceQuery::new(vec![Bound::Free, Bound::Le(f.y_alpha), Bound::Le(f.y_beta)]),
        ) {
            best = self.merge(best, id, Triangle::from_levels(b, f.y_alpha, f.y_beta), "cone-apex");
        }
        // bottom-left cone: base and left arm moved through q
        if let Some((r, id)) = query_best(
            &self.cone_bl,
            &DominanceQuery::new(vec![Bound::Ge(f.y_nu), Bound::Le(f.y_alpha), Bound::Free]),
        ) {
            best = self.merge(best, id, Triangle::from_levels(f.y_nu, f.y_alpha, r), "cone-bl");
        }
        // bottom-right cone: base and right arm moved through q
        if let Some((a, id)) = query_best(
            &self.cone_br,
            &DominanceQuery::new(vec![Bound::Ge(f.y_nu), Bound::Free, Bound::Le(f.y_beta)]),
        ) {
            best = self.merge(best, id, Triangle::from_levels(f.y_nu, a, f.y_beta), "cone-br");
        }
        best
    }

    /// The three edge-slab families (one constraint violated).
    pub fn query_edge_regions(&self, q: Point) -> Option<QueryAnswer> {
        let f = tri_frame(q);
        let mut best: Option<QueryAnswer> = None;
        if let Some((_, id)) = query_best(
            &self.edge_base,
            &DominanceQuery::new(vec![Bound::Ge(f.y_nu), Bound::Ge(f.y_alpha), Bound::Ge(f.y_beta)]),
        ) {
            let t = &self.triangles[id as usize];
            best = self.merge(best, id, Triangle::from_levels(f.y_nu, t.a, t.r), "edge-base");
        }
        if let Some((_, id)) = query_best(
            &self.edge_left,
            &DominanceQuery::new(vec![Bound::Le(f.y_nu), Bound::Le(f.y_alpha), Bound::Ge(f.y_beta)]),
        ) {
            let t = &self.triangles[id as usize];
            best = self.merge(best, id, Triangle::from_levels(t.b, f.y_alpha, t.r), "edge-left");
        }
        if let Some((_, id)) = query_best(
            &self.edge_right,
            &DominanceQuery::new(vec![Bound::Le(f.y_nu), Bound::Ge(f.y_alpha), Bound::Le(f.y_beta)]),
        ) {
            let t = &self.triangles[id as usize];
            best = self.merge(best, id, Triangle::from_levels(t.b, t.a, f.y_beta), "edge-right");
        }
        best
    }

    fn merge(&self, best: Option<QueryAnswer>, _id: u32, ext: Triangle, fam: &str) -> Option<QueryAnswer> {
        let cand = QueryAnswer {
            size: ext.side(),
            geometry: Geometry::triangle(&ext),
            provenance: Provenance::BoundaryExtension,
            family: fam.into(),
        };
        crate::answer::min_answer(best, Some(cand))
    }

    /// Minimum over containment, three cones and three edge slabs.
    pub fn query(&self, q: Point) -> QueryAnswer {
        let mut best = self.query_contained(q);
        for cand in [self.query_vertex_regions(q), self.query_edge_regions(q)] {
            best = crate::answer::min_answer(best, cand);
        }
        best.expect("a nonempty triangle set always yields an extension for any q")
    }
}
