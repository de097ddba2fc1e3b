//! Smallest color-spanning intervals on a line: enumeration of the minimal
//! interval set, per-point start/end/span lists, and localized queries.

use serde::{Deserialize, Serialize};

use crate::answer::{Geometry, Provenance, QueryAnswer};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalInterval {
    pub left: f64,
    pub right: f64,
}

impl MinimalInterval {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    pub fn contains(&self, q: f64) -> bool {
        self.left <= q && q <= self.right
    }
}

/// A 1D input point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinePoint {
    pub x: f64,
    pub color: u32,
}

/// Per-point interval lists, indexed like the sorted point array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointIntervalLists {
    pub start: Vec<Option<MinimalInterval>>,
    pub end: Vec<Option<MinimalInterval>>,
    pub span: Vec<Option<MinimalInterval>>,
}

/// Built query structure: sorted points plus the three lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScsiIndex {
    pub points: Vec<LinePoint>,
    pub k: u32,
    pub intervals: Vec<MinimalInterval>,
    pub lists: PointIntervalLists,
}

fn check_colors(points: &[LinePoint], k: u32) -> Result<()> {
    let mut seen = vec![false; k as usize];
    for p in points {
        seen[p.color as usize] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(c) => Err(Error::MissingColor(c as u32)),
        None => Ok(()),
    }
}

/// For each point index `i`: smallest index `e` such that the interval
/// `[x[i], x[e]]` spans all colors, or `None` when no such interval exists.
/// Points sharing an x value always enter or leave the window together, so
/// the sweep advances over distinct-x groups; the minimal `e` is monotone
/// non-decreasing in `i`, which makes a plain two-pointer exact.
fn forward_windows(points: &[LinePoint], k: u32) -> Vec<Option<usize>> {
    let n = points.len();
    let mut counts = vec![0usize; k as usize];
    let mut covered = 0usize;
    let mut j = 0usize;
    let mut out = vec![None; n];
    let mut i = 0usize;
    while i < n {
        let mut g = i;
        while g + 1 < n && points[g + 1].x == points[i].x {
            g += 1;
        }
        while covered < k as usize && j < n {
            // add whole same-x groups: the interval boundary is an x value,
            // so duplicate-x points enter together
            let gj = points[j].x;
            while j < n && points[j].x == gj {
                let c = points[j].color as usize;
                if counts[c] == 0 {
                    covered += 1;
                }
                counts[c] += 1;
                j += 1;
            }
        }
        if covered < k as usize {
            break; // shrinking the window further cannot help
        }
        for slot in &mut out[i..=g] {
            *slot = Some(j - 1);
        }
        for p in &points[i..=g] {
            let c = p.color as usize;
            counts[c] -= 1;
            if counts[c] == 0 {
                covered -= 1;
            }
        }
        i = g + 1;
    }
    out
}

/// Exactly the set of minimal color-spanning intervals, sorted by left
/// endpoint, pairwise non-nesting.
pub fn enumerate_minimal_intervals(points: &[LinePoint], k: u32) -> Result<Vec<MinimalInterval>> {
    check_colors(points, k)?;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    let windows = forward_windows(&pts, k);
    let mut candidates: Vec<MinimalInterval> = Vec::new();
    for (i, w) in windows.iter().enumerate() {
        if let Some(j) = w {
            let iv = MinimalInterval {
                left: pts[i].x,
                right: pts[*j].x,
            };
            if candidates.last() != Some(&iv) {
                candidates.push(iv);
            }
        }
    }
    // drop intervals properly containing another candidate
    let mut out = Vec::new();
    'outer: for (a, iv) in candidates.iter().enumerate() {
        for (b, other) in candidates.iter().enumerate() {
            if a != b
                && other.left >= iv.left
                && other.right <= iv.right
                && (other.left > iv.left || other.right < iv.right)
            {
                continue 'outer;
            }
        }
        out.push(*iv);
    }
    out.dedup();
    Ok(out)
}

/// Builds start/end/span lists for the sorted point array.
pub fn build_lists(points: &[LinePoint], k: u32, intervals: &[MinimalInterval]) -> PointIntervalLists {
    let n = points.len();
    let mut start = vec![None; n];
    let mut end = vec![None; n];
    let mut span = vec![None; n];

    // start(p_i): smallest spanning interval with left endpoint exactly p_i
    let windows = forward_windows(points, k);
    for i in 0..n {
        if let Some(j) = windows[i] {
            start[i] = Some(MinimalInterval {
                left: points[i].x,
                right: points[j].x,
            });
        }
    }
    // end(p_i): mirror sweep
    let mirrored: Vec<LinePoint> = points
        .iter()
        .rev()
        .map(|p| LinePoint { x: -p.x, color: p.color })
        .collect();
    let back = forward_windows(&mirrored, k);
    for i in 0..n {
        if let Some(j) = back[i] {
            let orig_i = n - 1 - i;
            let orig_j = n - 1 - j;
            end[orig_i] = Some(MinimalInterval {
                left: points[orig_j].x,
                right: points[orig_i].x,
            });
        }
    }
    // span(p_i): smallest minimal interval strictly containing p_i
    for (i, p) in points.iter().enumerate() {
        let mut best: Option<MinimalInterval> = None;
        for iv in intervals {
            if iv.left < p.x && p.x < iv.right {
                if best.map_or(true, |b| iv.length() < b.length()) {
                    best = Some(*iv);
                }
            }
        }
        span[i] = best;
    }
    PointIntervalLists { start, end, span }
}

pub fn build(points: &[LinePoint], k: u32) -> Result<ScsiIndex> {
    check_colors(points, k)?;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    let intervals = enumerate_minimal_intervals(&pts, k)?;
    let lists = build_lists(&pts, k, &intervals);
    Ok(ScsiIndex {
        points: pts,
        k,
        intervals,
        lists,
    })
}

impl ScsiIndex {
    /// The minimum-length color-spanning interval containing `q`.
    pub fn query(&self, q: f64) -> QueryAnswer {
        let n = self.points.len();
        // last index with x <= q
        let i = self.points.partition_point(|p| p.x <= q);
        let lower = if i > 0 { Some(i - 1) } else { None };
        let upper = if i < n { Some(i) } else { None };

        let mut best: Option<(MinimalInterval, Provenance, &'static str)> = None;
        let mut consider = |iv: MinimalInterval, prov: Provenance, fam: &'static str| {
            if iv.contains(q) {
                if best.map_or(true, |(b, _, _)| iv.length() < b.length()) {
                    best = Some((iv, prov, fam));
                }
            }
        };

        if let Some(li) = lower {
            if let Some(s) = self.lists.span[li] {
                consider(s, Provenance::Contained, "span-lower");
            }
            if let Some(s) = self.lists.start[li] {
                consider(s, Provenance::Contained, "start-lower");
            }
            if let Some(e) = self.lists.end[li] {
                consider(
                    MinimalInterval { left: e.left, right: q },
                    Provenance::BoundaryExtension,
                    "end-lower-extended",
                );
            }
        }
        if let Some(ui) = upper {
            if let Some(s) = self.lists.span[ui] {
                consider(s, Provenance::Contained, "span-upper");
            }
            if let Some(e) = self.lists.end[ui] {
                consider(e, Provenance::Contained, "end-upper");
            }
            if let Some(s) = self.lists.start[ui] {
                consider(
                    MinimalInterval { left: q, right: s.right },
                    Provenance::BoundaryExtension,
                    "start-upper-extended",
                );
            }
        }

        let (iv, prov, fam) = best.expect("spanning interval always exists after a successful build");
        QueryAnswer {
            size: iv.length(),
            geometry: Geometry::Interval {
                left: iv.left,
                right: iv.right,
            },
            provenance: prov,
            family: fam.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[(f64, u32)]) -> Vec<LinePoint> {
        xs.iter().map(|&(x, color)| LinePoint { x, color }).collect()
    }

    // instance x = [1r, 2b, 3r, 5b]
    fn four_point() -> Vec<LinePoint> {
        pts(&[(1.0, 0), (2.0, 1), (3.0, 0), (5.0, 1)])
    }

    #[test]
    fn enumerate_four_point_instance() {
        let ivs = enumerate_minimal_intervals(&four_point(), 2).unwrap();
        let expect = [(1.0, 2.0), (2.0, 3.0), (3.0, 5.0)];
        assert_eq!(ivs.len(), 3);
        for (iv, (l, r)) in ivs.iter().zip(expect) {
            assert_eq!((iv.left, iv.right), (l, r));
        }
    }

    #[test]
    fn enumerate_singleton_colors() {
        let ivs = enumerate_minimal_intervals(&pts(&[(4.0, 0), (7.0, 0)]), 1).unwrap();
        assert_eq!(ivs.len(), 2);
        assert_eq!((ivs[0].left, ivs[0].right), (4.0, 4.0));
        assert_eq!((ivs[1].left, ivs[1].right), (7.0, 7.0));
    }

    #[test]
    fn enumerate_two_points() {
        let ivs = enumerate_minimal_intervals(&pts(&[(0.0, 0), (1.0, 1)]), 2).unwrap();
        assert_eq!(ivs.len(), 1);
        assert_eq!((ivs[0].left, ivs[0].right), (0.0, 1.0));
    }

    #[test]
    fn missing_color_is_an_error() {
        assert!(matches!(
            enumerate_minimal_intervals(&pts(&[(0.0, 0)]), 2),
            Err(Error::MissingColor(1))
        ));
    }

    #[test]
    fn lists_four_point_instance() {
        let idx = build(&four_point(), 2).unwrap();
        let l = &idx.lists;
        // p_1 = 2.0 is index 1 in sorted order
        assert_eq!(l.start[1], Some(MinimalInterval { left: 2.0, right: 3.0 }));
        assert_eq!(l.end[1], Some(MinimalInterval { left: 1.0, right: 2.0 }));
        assert_eq!(l.span[1], None);
        assert_eq!(l.start[0], Some(MinimalInterval { left: 1.0, right: 2.0 }));
        assert_eq!(l.end[3], Some(MinimalInterval { left: 3.0, right: 5.0 }));
        // extreme points are never spanned
        assert_eq!(l.span[0], None);
        assert_eq!(l.span[3], None);
    }

    #[test]
    fn query_four_point_instance() {
        let idx = build(&four_point(), 2).unwrap();
        let a = idx.query(2.5);
        assert_eq!(a.size, 1.0);
        assert_eq!(a.geometry, Geometry::Interval { left: 2.0, right: 3.0 });

        let a = idx.query(1.0);
        assert_eq!(a.size, 1.0);

        let a = idx.query(0.0);
        assert_eq!(a.size, 2.0);
        assert_eq!(a.geometry, Geometry::Interval { left: 0.0, right: 2.0 });
        assert_eq!(a.provenance, Provenance::BoundaryExtension);
    }

    #[test]
    fn non_nesting_property() {
        let instance = pts(&[
            (0.5, 0),
            (1.0, 1),
            (1.5, 2),
            (2.0, 0),
            (2.2, 2),
            (3.0, 1),
            (4.0, 0),
            (4.5, 1),
            (4.6, 2),
        ]);
        let ivs = enumerate_minimal_intervals(&instance, 3).unwrap();
        for a in &ivs {
            for b in &ivs {
                if a != b {
                    let proper = b.left >= a.left && b.right <= a.right && (b.left > a.left || b.right < a.right);
                    assert!(!proper, "{a:?} properly contains {b:?}");
                }
            }
        }
    }
}
