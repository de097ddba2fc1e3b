//! Minimal color-spanning axis-parallel rectangles with semi-perimeter
//! size, and localized queries via one containment structure plus eight
//! extension families. Every extension is the bounding box of the source
//! rectangle and q, so each family's key is the affine part of that size.

use serde::{Deserialize, Serialize};

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};
use crate::geom::{le_eps, ColoredPoint, Point, EPS};
use crate::index::{
    build_index, query_best, AggregateDominanceIndex, AggregateMode, Bound, DominanceQuery,
    KeyedSite,
};
use crate::scsi::{enumerate_minimal_intervals, LinePoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalRect {
    pub l: f64,
    pub r: f64,
    pub b: f64,
    pub t: f64,
}

impl MinimalRect {
    pub fn width(&self) -> f64 {
        self.r - self.l
    }

    pub fn height(&self) -> f64 {
        self.t - self.b
    }

    /// Semi-perimeter.
    pub fn size(&self) -> f64 {
        self.width() + self.height()
    }

    pub fn contains(&self, p: Point) -> bool {
        le_eps(self.l, p.x) && le_eps(p.x, self.r) && le_eps(self.b, p.y) && le_eps(p.y, self.t)
    }
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

/// All minimal color-spanning rectangles: for each x-boundary pair, the
/// minimal color-spanning y-windows of the points in the slab, then a
/// keep-list pass dropping anything that properly contains a kept member.
pub fn enumerate_minimal_rects(points: &[ColoredPoint], k: u32) -> Result<Vec<MinimalRect>> {
    check_colors(points, k)?;
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let mut cands: Vec<MinimalRect> = Vec::new();
    for (i, &l) in xs.iter().enumerate() {
        for &r in &xs[i..] {
            let slab: Vec<LinePoint> = points
                .iter()
                .filter(|p| le_eps(l, p.x) && le_eps(p.x, r))
                .map(|p| LinePoint { x: p.y, color: p.color })
                .collect();
            let windows = match enumerate_minimal_intervals(&slab, k) {
                Ok(w) => w,
                Err(Error::MissingColor(_)) => continue,
                Err(e) => return Err(e),
            };
            for w in windows {
                cands.push(MinimalRect {
                    l,
                    r,
                    b: w.left,
                    t: w.right,
                });
            }
        }
    }
    cands.sort_by(|a, b| {
        (a.size(), a.l, a.b, a.r)
            .partial_cmp(&(b.size(), b.l, b.b, b.r))
            .unwrap()
    });
    cands.dedup_by(|a, b| {
        (a.l - b.l).abs() <= EPS && (a.r - b.r).abs() <= EPS && (a.b - b.b).abs() <= EPS && (a.t - b.t).abs() <= EPS
    });
    let mut kept: Vec<MinimalRect> = Vec::new();
    'outer: for c in cands {
        for m in &kept {
            if m.size() < c.size() - EPS
                && le_eps(c.l, m.l)
                && le_eps(m.r, c.r)
                && le_eps(c.b, m.b)
                && le_eps(m.t, c.t)
            {
                continue 'outer;
            }
        }
        kept.push(c);
    }
    Ok(kept)
}

pub struct ScsrIndex {
    pub rects: Vec<MinimalRect>,
    contained: AggregateDominanceIndex,
    stabbed_tbr: AggregateDominanceIndex,
    stabbed_tbl: AggregateDominanceIndex,
    stabbed_lrb: AggregateDominanceIndex,
    stabbed_lrt: AggregateDominanceIndex,
    corner_bl: AggregateDominanceIndex,
    corner_br: AggregateDominanceIndex,
    corner_tl: AggregateDominanceIndex,
    corner_tr: AggregateDominanceIndex,
}

pub fn build(points: &[ColoredPoint], k: u32) -> Result<ScsrIndex> {
    let rects = enumerate_minimal_rects(points, k)?;
    Ok(build_from_rects(rects))
}

pub fn build_from_rects(rects: Vec<MinimalRect>) -> ScsrIndex {
    let make = |coords: &dyn Fn(&MinimalRect) -> Vec<f64>,
                key: &dyn Fn(&MinimalRect) -> f64,
                mode: AggregateMode| {
        build_index(
            rects
                .iter()
                .enumerate()
                .map(|(i, s)| KeyedSite::new(coords(s), key(s), i as u32))
                .collect(),
            mode,
        )
    };
    ScsrIndex {
        contained: make(&|s| vec![s.t, s.b, s.l, s.r], &|s| s.size(), AggregateMode::Min),
        // rect beside q, its y-window containing y(q)
        stabbed_tbr: make(&|s| vec![s.t, s.b, s.r], &|s| s.height() - s.l, AggregateMode::Min),
        stabbed_tbl: make(&|s| vec![s.t, s.b, s.l], &|s| s.height() + s.r, AggregateMode::Min),
        stabbed_lrb: make(&|s| vec![s.l, s.r, s.t], &|s| s.width() - s.b, AggregateMode::Min),
        stabbed_lrt: make(&|s| vec![s.l, s.r, s.b], &|s| s.width() + s.t, AggregateMode::Min),
        // rect entirely in one quadrant of q
        corner_bl: make(&|s| vec![s.r, s.t], &|s| s.l + s.b, AggregateMode::Max),
        corner_br: make(&|s| vec![s.l, s.t], &|s| s.r - s.b, AggregateMode::Min),
        corner_tl: make(&|s| vec![s.r, s.b], &|s| s.t - s.l, AggregateMode::Min),
        corner_tr: make(&|s| vec![s.l, s.b], &|s| s.r + s.t, AggregateMode::Min),
        rects,
    }
}

impl ScsrIndex {
    fn answer(&self, id: u32, q: Point, size: f64, prov: Provenance, fam: &str) -> QueryAnswer {
        let s = &self.rects[id as usize];
        // the extension is exactly the bounding box of the rect and q
        QueryAnswer {
            size,
            geometry: Geometry::Rect {
                l: f64::min(s.l, q.x),
                r: f64::max(s.r, q.x),
                b: f64::min(s.b, q.y),
                t: f64::max(s.t, q.y),
            },
            provenance: prov,
            family: fam.into(),
        }
    }

    pub fn query_contained(&self, q: Point) -> Option<QueryAnswer> {
        let dq = DominanceQuery::new(vec![
            Bound::Ge(q.y),
            Bound::Le(q.y),
            Bound::Le(q.x),
            Bound::Ge(q.x),
        ]);
        let (size, id) = query_best(&self.contained, &dq)?;
        Some(self.answer(id, q, size, Provenance::Contained, "contained"))
    }

    pub fn query_stabbed(&self, q: Point) -> Option<QueryAnswer> {
        let cases: [(&AggregateDominanceIndex, DominanceQuery, f64, &str); 4] = [
            (
                &self.stabbed_tbr,
                DominanceQuery::new(vec![Bound::Ge(q.y), Bound::Le(q.y), Bound::Le(q.x)]),
                q.x,
                "stabbed-tbr",
            ),
            (
                &self.stabbed_tbl,
                DominanceQuery::new(vec![Bound::Ge(q.y), Bound::Le(q.y), Bound::Ge(q.x)]),
                -q.x,
                "stabbed-tbl",
            ),
            (
                &self.stabbed_lrb,
                DominanceQuery::new(vec![Bound::Le(q.x), Bound::Ge(q.x), Bound::Le(q.y)]),
                q.y,
                "stabbed-lrb",
            ),
            (
                &self.stabbed_lrt,
                DominanceQuery::new(vec![Bound::Le(q.x), Bound::Ge(q.x), Bound::Ge(q.y)]),
                -q.y,
                "stabbed-lrt",
            ),
        ];
        let mut best: Option<QueryAnswer> = None;
        for (idx, dq, offset, fam) in cases {
            if let Some((key, id)) = query_best(idx, &dq) {
                let cand = self.answer(id, q, key + offset, Provenance::BoundaryExtension, fam);
                best = crate::answer::min_answer(best, Some(cand));
            }
        }
        best
    }

    pub fn query_not_stabbed(&self, q: Point) -> Option<QueryAnswer> {
        let cases: [(&AggregateDominanceIndex, DominanceQuery, f64, f64, &str); 4] = [
            // size = (x(q) + y(q)) - (l + b), maximized key
            (
                &self.corner_bl,
                DominanceQuery::new(vec![Bound::Le(q.x), Bound::Le(q.y)]),
                -1.0,
                q.x + q.y,
                "corner-bl",
            ),
            // size = (r - b) + (y(q) - x(q))
            (
                &self.corner_br,
                DominanceQuery::new(vec![Bound::Ge(q.x), Bound::Le(q.y)]),
                1.0,
                q.y - q.x,
                "corner-br",
            ),
            // size = (t - l) + (x(q) - y(q))
            (
                &self.corner_tl,
                DominanceQuery::new(vec![Bound::Le(q.x), Bound::Ge(q.y)]),
                1.0,
                q.x - q.y,
                "corner-tl",
            ),
            // size = (r + t) - (x(q) + y(q))
            (
                &self.corner_tr,
                DominanceQuery::new(vec![Bound::Ge(q.x), Bound::Ge(q.y)]),
                1.0,
                -(q.x + q.y),
                "corner-tr",
            ),
        ];
        let mut best: Option<QueryAnswer> = None;
        for (idx, dq, sign, offset, fam) in cases {
            if let Some((key, id)) = query_best(idx, &dq) {
                let cand = self.answer(id, q, sign * key + offset, Provenance::BoundaryExtension, fam);
                best = crate::answer::min_answer(best, Some(cand));
            }
        }
        best
    }

    /// Minimum over the nine structures.
    pub fn query(&self, q: Point) -> QueryAnswer {
        let mut best = self.query_contained(q);
        for cand in [self.query_stabbed(q), self.query_not_stabbed(q)] {
            best = crate::answer::min_answer(best, cand);
        }
        best.expect("a nonempty rect set always yields an extension for any q")
    }
}
