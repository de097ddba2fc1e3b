//! Minimal color-spanning axis-parallel squares and localized queries:
//! one containment structure, four stabbed extension families and four
//! not-stabbed (quadrant corner) families.

use serde::{Deserialize, Serialize};

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};
use crate::geom::{le_eps, ColoredPoint, Point, EPS};
use crate::index::{
    build_index, build_linf_corner_index_with_region, query_best, query_linf_nearest,
    AggregateDominanceIndex, AggregateMode, Bound, CornerIndex, CornerSite, DominanceQuery,
    KeyedSite,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalSquare {
    pub l: f64,
    pub r: f64,
    pub b: f64,
    pub t: f64,
    pub lambda: f64,
}

impl MinimalSquare {
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

fn spans(points: &[ColoredPoint], k: u32, l: f64, r: f64, b: f64, t: f64) -> bool {
    let mut seen = vec![false; k as usize];
    let mut covered = 0;
    for p in points {
        if !seen[p.color as usize]
            && le_eps(l, p.x)
            && le_eps(p.x, r)
            && le_eps(b, p.y)
            && le_eps(p.y, t)
        {
            seen[p.color as usize] = true;
            covered += 1;
            if covered == k {
                return true;
            }
        }
    }
    covered == k
}

/// The canonical finite set of minimal color-spanning squares: every
/// minimal square has a pair of opposite edges pinned by points (shrink
/// argument), and squares free to slide along the other axis are
/// represented by their pinned extreme positions; those extremes cover
/// every query the mid-slide positions would answer.
pub fn enumerate_minimal_squares(points: &[ColoredPoint], k: u32) -> Result<Vec<MinimalSquare>> {
    check_colors(points, k)?;
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let mut cands: Vec<MinimalSquare> = Vec::new();
    // squares with left/right edges pinned: side from an x-pair, bottom
    // edge candidates from pinned y positions
    for &xi in &xs {
        for &xj in &xs {
            let lambda = xj - xi;
            if lambda < 0.0 {
                continue;
            }
            for &ym in &ys {
                for b in [ym, ym - lambda] {
                    if spans(points, k, xi, xi + lambda, b, b + lambda) {
                        cands.push(MinimalSquare {
                            l: xi,
                            r: xi + lambda,
                            b,
                            t: b + lambda,
                            lambda,
                        });
                    }
                }
            }
        }
    }
    // top/bottom edges pinned: side from a y-pair
    for &yi in &ys {
        for &yj in &ys {
            let lambda = yj - yi;
            if lambda < 0.0 {
                continue;
            }
            for &xm in &xs {
                for l in [xm, xm - lambda] {
                    if spans(points, k, l, l + lambda, yi, yi + lambda) {
                        cands.push(MinimalSquare {
                            l,
                            r: l + lambda,
                            b: yi,
                            t: yi + lambda,
                            lambda,
                        });
                    }
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        (a.lambda, a.l, a.b)
            .partial_cmp(&(b.lambda, b.l, b.b))
            .unwrap()
    });
    cands.dedup_by(|a, b| {
        (a.l - b.l).abs() <= EPS && (a.b - b.b).abs() <= EPS && (a.lambda - b.lambda).abs() <= EPS
    });
    // keep-list minimality filter: processed by ascending side, a square
    // is dropped when a kept spanning square fits properly inside it
    let mut kept: Vec<MinimalSquare> = Vec::new();
    'outer: for s in cands {
        for m in &kept {
            if m.lambda < s.lambda - EPS
                && le_eps(s.l, m.l)
                && le_eps(m.r, s.r)
                && le_eps(s.b, m.b)
                && le_eps(m.t, s.t)
            {
                continue 'outer;
            }
        }
        kept.push(s);
    }
    Ok(kept)
}

/// Query structures over the enumerated square set.
pub struct ScssIndex {
    pub squares: Vec<MinimalSquare>,
    contained: AggregateDominanceIndex,
    stabbed_tbr: AggregateDominanceIndex,
    stabbed_tbl: AggregateDominanceIndex,
    stabbed_lrb: AggregateDominanceIndex,
    stabbed_lrt: AggregateDominanceIndex,
    corner_bl: CornerIndex,
    corner_br: CornerIndex,
    corner_tl: CornerIndex,
    corner_tr: CornerIndex,
}

pub fn build(points: &[ColoredPoint], k: u32) -> Result<ScssIndex> {
    let squares = enumerate_minimal_squares(points, k)?;
    Ok(build_from_squares(squares))
}

pub fn build_from_squares(squares: Vec<MinimalSquare>) -> ScssIndex {
    let site = |coords: Vec<f64>, key: f64, i: usize| KeyedSite::new(coords, key, i as u32);
    let contained = build_index(
        squares
            .iter()
            .enumerate()
            .map(|(i, s)| site(vec![s.t, s.b, s.l, s.r], s.lambda, i))
            .collect(),
        AggregateMode::Min,
    );
    let stabbed_tbr = build_index(
        squares
            .iter()
            .enumerate()
            .map(|(i, s)| site(vec![s.t, s.b, s.r], s.l, i))
            .collect(),
        AggregateMode::Max,
    );
    let stabbed_tbl = build_index(
        squares
            .iter()
            .enumerate()
            .map(|(i, s)| site(vec![s.t, s.b, s.l], s.r, i))
            .collect(),
        AggregateMode::Min,
    );
    let stabbed_lrb = build_index(
        squares
            .iter()
            .enumerate()
            .map(|(i, s)| site(vec![s.l, s.r, s.t], s.b, i))
            .collect(),
        AggregateMode::Max,
    );
    let stabbed_lrt = build_index(
        squares
            .iter()
            .enumerate()
            .map(|(i, s)| site(vec![s.l, s.r, s.b], s.t, i))
            .collect(),
        AggregateMode::Min,
    );
    let corner = |f: &dyn Fn(&MinimalSquare) -> ([f64; 2], Point)| {
        build_linf_corner_index_with_region(
            squares
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let (region_coords, corner) = f(s);
                    CornerSite {
                        region_coords,
                        corner,
                        payload: i as u32,
                    }
                })
                .collect(),
        )
    };
    // families named by the square's quadrant relative to q; the far
    // corner of the extension is the square corner away from q
    let corner_bl = corner(&|s| ([s.r, s.t], Point::new(s.l, s.b)));
    let corner_br = corner(&|s| ([s.l, s.t], Point::new(s.r, s.b)));
    let corner_tl = corner(&|s| ([s.r, s.b], Point::new(s.l, s.t)));
    let corner_tr = corner(&|s| ([s.l, s.b], Point::new(s.r, s.t)));
    ScssIndex {
        squares,
        contained,
        stabbed_tbr,
        stabbed_tbl,
        stabbed_lrb,
        stabbed_lrt,
        corner_bl,
        corner_br,
        corner_tl,
        corner_tr,
    }
}

/// Deterministic placement of the final square of side `s`: the source
/// square stays contained, q stays covered, remaining slack is centered.
fn place_square(sq: &MinimalSquare, q: Point, s: f64) -> Geometry {
    let axis = |lo: f64, hi: f64, qc: f64| {
        let a = f64::max(hi, qc) - s;
        let b = f64::min(lo, qc);
        let centered = (lo + hi) / 2.0 - s / 2.0;
        centered.max(a).min(b)
    };
    let x0 = axis(sq.l, sq.r, q.x);
    let y0 = axis(sq.b, sq.t, q.y);
    Geometry::Square {
        l: x0,
        r: x0 + s,
        b: y0,
        t: y0 + s,
    }
}

impl ScssIndex {
    /// Smallest enumerated square containing q.
    pub fn query_contained(&self, q: Point) -> Option<QueryAnswer> {
        let dq = DominanceQuery::new(vec![
            Bound::Ge(q.y),
            Bound::Le(q.y),
            Bound::Le(q.x),
            Bound::Ge(q.x),
        ]);
        let (lambda, id) = query_best(&self.contained, &dq)?;
        let s = &self.squares[id as usize];
        Some(QueryAnswer {
            size: lambda,
            geometry: Geometry::Square {
                l: s.l,
                r: s.r,
                b: s.b,
                t: s.t,
            },
            provenance: Provenance::Contained,
            family: "contained".into(),
        })
    }

    /// Best extension of a square whose horizontal (or vertical) slab
    /// contains q while the square lies beside (or below/above) q.
    pub fn query_stabbed(&self, q: Point) -> Option<QueryAnswer> {
        let mut best: Option<QueryAnswer> = None;
        let mut consider = |res: Option<(f64, u32)>, size_of: &dyn Fn(f64) -> f64, fam: &str| {
            if let Some((key, id)) = res {
                let size = size_of(key);
                let sq = &self.squares[id as usize];
                let cand = QueryAnswer {
                    size,
                    geometry: place_square(sq, q, size),
                    provenance: Provenance::BoundaryExtension,
                    family: fam.into(),
                };
                best = Some(match best.take() {
                    Some(b) => b.better_of(cand),
                    None => cand,
                });
            }
        };
        consider(
            query_best(
                &self.stabbed_tbr,
                &DominanceQuery::new(vec![Bound::Ge(q.y), Bound::Le(q.y), Bound::Le(q.x)]),
            ),
            &|l| q.x - l,
            "stabbed-tbr",
        );
        consider(
            query_best(
                &self.stabbed_tbl,
                &DominanceQuery::new(vec![Bound::Ge(q.y), Bound::Le(q.y), Bound::Ge(q.x)]),
            ),
            &|r| r - q.x,
            "stabbed-tbl",
        );
        consider(
            query_best(
                &self.stabbed_lrb,
                &DominanceQuery::new(vec![Bound::Le(q.x), Bound::Ge(q.x), Bound::Le(q.y)]),
            ),
            &|b| q.y - b,
            "stabbed-lrb",
        );
        consider(
            query_best(
                &self.stabbed_lrt,
                &DominanceQuery::new(vec![Bound::Le(q.x), Bound::Ge(q.x), Bound::Ge(q.y)]),
            ),
            &|t| t - q.y,
            "stabbed-lrt",
        );
        best
    }

    /// Best extension of a square lying entirely in one quadrant of q:
    /// the extended side is the L∞ distance from q to the far corner.
    pub fn query_not_stabbed(&self, q: Point) -> Option<QueryAnswer> {
        let mut best: Option<QueryAnswer> = None;
        let mut consider = |res: Option<(f64, u32)>, fam: &str| {
            if let Some((size, id)) = res {
                let sq = &self.squares[id as usize];
                let cand = QueryAnswer {
                    size,
                    geometry: place_square(sq, q, size),
                    provenance: Provenance::BoundaryExtension,
                    family: fam.into(),
                };
                best = Some(match best.take() {
                    Some(b) => b.better_of(cand),
                    None => cand,
                });
            }
        };
        let le = |a, b| DominanceQuery::new(vec![a, b]);
        consider(
            query_linf_nearest(&self.corner_bl, &le(Bound::Le(q.x), Bound::Le(q.y)), q),
            "corner-bl",
        );
        consider(
            query_linf_nearest(&self.corner_br, &le(Bound::Ge(q.x), Bound::Le(q.y)), q),
            "corner-br",
        );
        consider(
            query_linf_nearest(&self.corner_tl, &le(Bound::Le(q.x), Bound::Ge(q.y)), q),
            "corner-tl",
        );
        consider(
            query_linf_nearest(&self.corner_tr, &le(Bound::Ge(q.x), Bound::Ge(q.y)), q),
            "corner-tr",
        );
        best
    }

    /// Minimum over the nine structures.
    pub fn query(&self, q: Point) -> QueryAnswer {
        let mut best = self.query_contained(q);
        for cand in [self.query_stabbed(q), self.query_not_stabbed(q)] {
            best = crate::answer::min_answer(best, cand);
        }
        best.expect("a nonempty square set always yields an extension for any q")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_scss;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cp(pts: &[(f64, f64, u32)]) -> Vec<ColoredPoint> {
        pts.iter().map(|&(x, y, c)| ColoredPoint::new(x, y, c)).collect()
    }

    fn two_point() -> Vec<ColoredPoint> {
        cp(&[(0.0, 0.0, 0), (1.0, 1.0, 1)])
    }

    #[test]
    fn enumerate_two_point_instance() {
        let sqs = enumerate_minimal_squares(&two_point(), 2).unwrap();
        assert_eq!(sqs.len(), 1);
        let s = sqs[0];
        assert_eq!((s.l, s.r, s.b, s.t, s.lambda), (0.0, 1.0, 0.0, 1.0, 1.0));
    }

    #[test]
    fn enumerate_three_point_instance() {
        // slide continua collapse to their pinned extremes
        let pts = cp(&[(0.0, 0.0, 0), (1.0, 0.0, 1), (0.0, 1.0, 1)]);
        let sqs = enumerate_minimal_squares(&pts, 2).unwrap();
        assert!(sqs.iter().all(|s| (s.lambda - 1.0).abs() < 1e-12));
        let has = |l: f64, b: f64| sqs.iter().any(|s| (s.l - l).abs() < 1e-12 && (s.b - b).abs() < 1e-12);
        assert!(has(0.0, 0.0));
        assert!(has(0.0, -1.0));
        assert!(has(-1.0, 0.0));
    }

    #[test]
    fn enumerate_single_color() {
        let pts = cp(&[(3.0, 4.0, 0)]);
        let sqs = enumerate_minimal_squares(&pts, 1).unwrap();
        assert_eq!(sqs.len(), 1);
        assert_eq!(sqs[0].lambda, 0.0);
        assert_eq!((sqs[0].l, sqs[0].b), (3.0, 4.0));
    }

    #[test]
    fn contained_examples() {
        let idx = build(&two_point(), 2).unwrap();
        let a = idx.query_contained(Point::new(0.5, 0.5)).unwrap();
        assert_eq!(a.size, 1.0);
        assert!(idx.query_contained(Point::new(2.0, 2.0)).is_none());
        let a = idx.query_contained(Point::new(1.0, 0.5)).unwrap();
        assert_eq!(a.size, 1.0);
    }

    #[test]
    fn stabbed_examples() {
        let idx = build(&two_point(), 2).unwrap();
        let a = idx.query_stabbed(Point::new(2.0, 0.5)).unwrap();
        assert_eq!(a.size, 2.0);
        assert_eq!(a.family, "stabbed-tbr");
        let a = idx.query_stabbed(Point::new(0.5, -1.0)).unwrap();
        assert_eq!(a.size, 2.0);
        assert_eq!(a.family, "stabbed-lrt");
        assert!(idx.query_stabbed(Point::new(0.5, 0.5)).is_none());
    }

    #[test]
    fn not_stabbed_examples() {
        let idx = build(&two_point(), 2).unwrap();
        let a = idx.query_not_stabbed(Point::new(2.0, 2.0)).unwrap();
        assert_eq!(a.size, 2.0);
        assert_eq!(a.family, "corner-bl");
        let a = idx.query_not_stabbed(Point::new(-1.0, 2.0)).unwrap();
        assert_eq!(a.size, 2.0);
        assert_eq!(a.family, "corner-br");
        let a = idx.query_not_stabbed(Point::new(1.5, 1.5)).unwrap();
        assert_eq!(a.size, 1.5);
    }

    #[test]
    fn query_answer_geometry_is_valid() {
        let pts = two_point();
        let idx = build(&pts, 2).unwrap();
        for q in [
            Point::new(2.0, 0.5),
            Point::new(0.5, 0.5),
            Point::new(2.0, 2.0),
            Point::new(-3.0, 0.2),
        ] {
            let a = idx.query(q);
            if let Geometry::Square { l, r, b, t } = a.geometry {
                assert!((r - l - a.size).abs() < 1e-9);
                assert!((t - b - a.size).abs() < 1e-9);
                assert!(le_eps(l, q.x) && le_eps(q.x, r) && le_eps(b, q.y) && le_eps(q.y, t));
                assert!(spans(&pts, 2, l, r, b, t), "not spanning at q={q:?}");
            } else {
                panic!("expected a square");
            }
        }
    }

    #[test]
    fn random_instances_match_oracle() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..40 {
            let n = rng.gen_range(4..=24);
            let k = rng.gen_range(2..=4u32);
            let pts: Vec<ColoredPoint> = (0..n)
                .map(|i| {
                    ColoredPoint::new(
                        rng.gen_range(0.0..100.0),
                        rng.gen_range(0.0..100.0),
                        if (i as u32) < k { i as u32 } else { rng.gen_range(0..k) },
                    )
                })
                .collect();
            let idx = build(&pts, k).unwrap();
            for _ in 0..10 {
                let q = Point::new(rng.gen_range(-100.0..200.0), rng.gen_range(-100.0..200.0));
                let fast = idx.query(q).size;
                let slow = oracle_scss(&pts, k, q).unwrap().size;
                assert!(
                    (fast - slow).abs() <= 1e-9 * f64::max(1.0, slow),
                    "fast {fast} vs oracle {slow} at q={q:?} pts={pts:?}"
                );
            }
        }
    }

    #[test]
    fn soft_cardinality_bound() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..10 {
            let n = rng.gen_range(6..=30);
            let k = rng.gen_range(2..=5u32);
            let pts: Vec<ColoredPoint> = (0..n)
                .map(|i| {
                    ColoredPoint::new(
                        rng.gen_range(0.0..50.0),
                        rng.gen_range(0.0..50.0),
                        if (i as u32) < k { i as u32 } else { rng.gen_range(0..k) },
                    )
                })
                .collect();
            let sqs = enumerate_minimal_squares(&pts, k).unwrap();
            assert!(
                sqs.len() <= 8 * n * k as usize,
                "cardinality {} exceeds 8nk = {}",
                sqs.len(),
                8 * n * k as usize
            );
        }
    }
}
