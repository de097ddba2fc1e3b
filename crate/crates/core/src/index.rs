//! Layered dominance-search structures: a d-dimensional kd-tree with a
//! best-key subtree aggregate answering orthant queries, and a 2D variant
//! returning the L∞-nearest stored site within a dominance region.
//!
//! Answers are defined by contract: identical to a linear scan over all
//! sites, ties broken by smallest payload id.

use serde::{Deserialize, Serialize};

use crate::geom::Point;

/// Per-dimension constraint of an orthant query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bound {
    /// coordinate <= threshold
    Le(f64),
    /// coordinate >= threshold
    Ge(f64),
    Free,
}

impl Bound {
    fn admits(&self, v: f64) -> bool {
        match *self {
            Bound::Le(t) => v <= t,
            Bound::Ge(t) => v >= t,
            Bound::Free => true,
        }
    }

    /// Whether the interval [lo, hi] intersects / is contained in the bound.
    fn intersects(&self, lo: f64, hi: f64) -> bool {
        match *self {
            Bound::Le(t) => lo <= t,
            Bound::Ge(t) => hi >= t,
            Bound::Free => true,
        }
    }

    fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        match *self {
            Bound::Le(t) => hi <= t,
            Bound::Ge(t) => lo >= t,
            Bound::Free => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceQuery {
    pub bounds: Vec<Bound>,
}

impl DominanceQuery {
    pub fn new(bounds: Vec<Bound>) -> Self {
        assert!(
            bounds.iter().any(|b| !matches!(b, Bound::Free)),
            "at least one constrained dimension required"
        );
        DominanceQuery { bounds }
    }

    fn admits(&self, coords: &[f64]) -> bool {
        self.bounds.iter().zip(coords).all(|(b, &v)| b.admits(v))
    }
}

/// A site in the index: d coordinates, an aggregate key and the id of the
/// candidate object it stands for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyedSite {
    pub coords: Vec<f64>,
    pub key: f64,
    pub payload: u32,
}

impl KeyedSite {
    pub fn new(coords: Vec<f64>, key: f64, payload: u32) -> Self {
        KeyedSite { coords, key, payload }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AggregateMode {
    Min,
    Max,
}

impl AggregateMode {
    fn better(&self, a: (f64, u32), b: (f64, u32)) -> (f64, u32) {
        let first_wins = match self {
            AggregateMode::Min => a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1),
            AggregateMode::Max => a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1),
        };
        if first_wins {
            a
        } else {
            b
        }
    }
}

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
struct KdNode {
    /// bounding box of the subtree, per dimension
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// best (key, payload) in the subtree
    agg: (f64, u32),
    /// leaf: range into the site array; internal: child node ids
    children: Option<(usize, usize)>,
    start: usize,
    end: usize,
}

/// Immutable orthant-query index with a best-key aggregate.
#[derive(Debug, Clone)]
pub struct AggregateDominanceIndex {
    dims: usize,
    mode: AggregateMode,
    sites: Vec<KeyedSite>,
    nodes: Vec<KdNode>,
    root: Option<usize>,
}

impl AggregateDominanceIndex {
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }
}

/// Builds the index. All sites must share the same dimensionality.
pub fn build_index(mut sites: Vec<KeyedSite>, mode: AggregateMode) -> AggregateDominanceIndex {
    if sites.is_empty() {
        return AggregateDominanceIndex {
            dims: 0,
            mode,
            sites,
            nodes: Vec::new(),
            root: None,
        };
    }
    let dims = sites[0].coords.len();
    assert!(sites.iter().all(|s| s.coords.len() == dims), "non-uniform dimensionality");
    let mut nodes = Vec::new();
    let n = sites.len();
    let root = build_node(&mut sites, 0, n, 0, dims, mode, &mut nodes);
    AggregateDominanceIndex {
        dims,
        mode,
        sites,
        nodes,
        root: Some(root),
    }
}

fn build_node(
    sites: &mut [KeyedSite],
    start: usize,
    end: usize,
    depth: usize,
    dims: usize,
    mode: AggregateMode,
    nodes: &mut Vec<KdNode>,
) -> usize {
    let slice = &sites[start..end];
    let mut lo = vec![f64::INFINITY; dims];
    let mut hi = vec![f64::NEG_INFINITY; dims];
    let mut agg = (slice[0].key, slice[0].payload);
    for s in slice {
        for d in 0..dims {
            lo[d] = lo[d].min(s.coords[d]);
            hi[d] = hi[d].max(s.coords[d]);
        }
        agg = mode.better(agg, (s.key, s.payload));
    }
    let id = nodes.len();
    nodes.push(KdNode {
        lo,
        hi,
        agg,
        children: None,
        start,
        end,
    });
    if end - start > LEAF_SIZE {
        let axis = depth % dims;
        let mid = (start + end) / 2;
        sites[start..end].select_nth_unstable_by(mid - start, |a, b| {
            a.coords[axis].partial_cmp(&b.coords[axis]).unwrap()
        });
        let left = build_node(sites, start, mid, depth + 1, dims, mode, nodes);
        let right = build_node(sites, mid, end, depth + 1, dims, mode, nodes);
        nodes[id].children = Some((left, right));
    }
    id
}

/// The extreme key among sites satisfying every constraint, with its
/// payload; `None` when the region is empty.
pub fn query_best(index: &AggregateDominanceIndex, q: &DominanceQuery) -> Option<(f64, u32)> {
    let root = index.root?;
    assert_eq!(q.bounds.len(), index.dims, "query dimensionality mismatch");
    let mut best: Option<(f64, u32)> = None;
    query_node(index, root, q, &mut best);
    best
}

fn query_node(index: &AggregateDominanceIndex, id: usize, q: &DominanceQuery, best: &mut Option<(f64, u32)>) {
    let node = &index.nodes[id];
    let mut full = true;
    for d in 0..index.dims {
        if !q.bounds[d].intersects(node.lo[d], node.hi[d]) {
            return;
        }
        full &= q.bounds[d].contains_interval(node.lo[d], node.hi[d]);
    }
    if full {
        merge(best, node.agg, index.mode);
        return;
    }
    match node.children {
        Some((l, r)) => {
            query_node(index, l, q, best);
            query_node(index, r, q, best);
        }
        None => {
            for s in &index.sites[node.start..node.end] {
                if q.admits(&s.coords) {
                    merge(best, (s.key, s.payload), index.mode);
                }
            }
        }
    }
}

fn merge(best: &mut Option<(f64, u32)>, cand: (f64, u32), mode: AggregateMode) {
    *best = Some(match *best {
        Some(b) => mode.better(b, cand),
        None => cand,
    });
}

/// A site of the L∞-nearest structure: the dominance region is checked
/// against `region_coords`, the distance is measured to `corner`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerSite {
    pub region_coords: [f64; 2],
    pub corner: Point,
    pub payload: u32,
}

#[derive(Debug, Clone)]
struct CornerNode {
    lo: [f64; 2],
    hi: [f64; 2],
    corner_lo: [f64; 2],
    corner_hi: [f64; 2],
    children: Option<(usize, usize)>,
    start: usize,
    end: usize,
}

/// 2D dominance region + L∞ nearest corner structure.
#[derive(Debug, Clone)]
pub struct CornerIndex {
    sites: Vec<CornerSite>,
    nodes: Vec<CornerNode>,
    root: Option<usize>,
}

/// Convenience build where the region coordinates are the corners themselves.
pub fn build_linf_corner_index(sites: &[(Point, u32)]) -> CornerIndex {
    build_linf_corner_index_with_region(
        sites
            .iter()
            .map(|&(p, payload)| CornerSite {
                region_coords: [p.x, p.y],
                corner: p,
                payload,
            })
            .collect(),
    )
}

pub fn build_linf_corner_index_with_region(mut sites: Vec<CornerSite>) -> CornerIndex {
    if sites.is_empty() {
        return CornerIndex {
            sites,
            nodes: Vec::new(),
            root: None,
        };
    }
    let mut nodes = Vec::new();
    let n = sites.len();
    let root = build_corner_node(&mut sites, 0, n, 0, &mut nodes);
    CornerIndex {
        sites,
        nodes,
        root: Some(root),
    }
}

fn build_corner_node(sites: &mut [CornerSite], start: usize, end: usize, depth: usize, nodes: &mut Vec<CornerNode>) -> usize {
    let slice = &sites[start..end];
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut clo = [f64::INFINITY; 2];
    let mut chi = [f64::NEG_INFINITY; 2];
    for s in slice {
        for d in 0..2 {
            lo[d] = lo[d].min(s.region_coords[d]);
            hi[d] = hi[d].max(s.region_coords[d]);
        }
        clo[0] = clo[0].min(s.corner.x);
        clo[1] = clo[1].min(s.corner.y);
        chi[0] = chi[0].max(s.corner.x);
        chi[1] = chi[1].max(s.corner.y);
    }
    let id = nodes.len();
    nodes.push(CornerNode {
        lo,
        hi,
        corner_lo: clo,
        corner_hi: chi,
        children: None,
        start,
        end,
    });
    if end - start > LEAF_SIZE {
        let axis = depth % 2;
        let mid = (start + end) / 2;
        sites[start..end].select_nth_unstable_by(mid - start, |a, b| {
            a.region_coords[axis].partial_cmp(&b.region_coords[axis]).unwrap()
        });
        let left = build_corner_node(sites, start, mid, depth + 1, nodes);
        let right = build_corner_node(sites, mid, end, depth + 1, nodes);
        nodes[id].children = Some((left, right));
    }
    id
}

/// Among sites whose region coordinates satisfy `region`, the one
/// minimizing the L∞ distance from `q` to its corner. Ties by payload id.
pub fn query_linf_nearest(index: &CornerIndex, region: &DominanceQuery, q: Point) -> Option<(f64, u32)> {
    let root = index.root?;
    assert_eq!(region.bounds.len(), 2);
    let mut best: Option<(f64, u32)> = None;
    corner_query(index, root, region, q, &mut best);
    best
}

fn linf_to_box(q: Point, lo: &[f64; 2], hi: &[f64; 2]) -> f64 {
    let dx = if q.x < lo[0] {
        lo[0] - q.x
    } else if q.x > hi[0] {
        q.x - hi[0]
    } else {
        0.0
    };
    let dy = if q.y < lo[1] {
        lo[1] - q.y
    } else if q.y > hi[1] {
        q.y - hi[1]
    } else {
        0.0
    };
    f64::max(dx, dy)
}

fn corner_query(index: &CornerIndex, id: usize, region: &DominanceQuery, q: Point, best: &mut Option<(f64, u32)>) {
    let node = &index.nodes[id];
    for d in 0..2 {
        if !region.bounds[d].intersects(node.lo[d], node.hi[d]) {
            return;
        }
    }
    // prune by distance lower bound; keep exploring on ties so the
    // payload tie rule matches the linear scan
    if let Some((bd, _)) = *best {
        if linf_to_box(q, &node.corner_lo, &node.corner_hi) > bd {
            return;
        }
    }
    match node.children {
        Some((l, r)) => {
            corner_query(index, l, region, q, best);
            corner_query(index, r, region, q, best);
        }
        None => {
            for s in &index.sites[node.start..node.end] {
                if region.admits(&s.region_coords) {
                    let d = f64::max((q.x - s.corner.x).abs(), (q.y - s.corner.y).abs());
                    let cand = (d, s.payload);
                    *best = Some(match *best {
                        Some(b) => {
                            if cand.0 < b.0 || (cand.0 == b.0 && cand.1 < b.1) {
                                cand
                            } else {
                                b
                            }
                        }
                        None => cand,
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn scan_best(sites: &[KeyedSite], q: &DominanceQuery, mode: AggregateMode) -> Option<(f64, u32)> {
        let mut best = None;
        for s in sites {
            if q.admits(&s.coords) {
                merge(&mut best, (s.key, s.payload), mode);
            }
        }
        best
    }

    #[test]
    fn two_site_examples() {
        let sites = vec![
            KeyedSite::new(vec![1.0, 1.0], 5.0, 0),
            KeyedSite::new(vec![2.0, 2.0], 3.0, 1),
        ];
        let idx = build_index(sites.clone(), AggregateMode::Min);
        let q = DominanceQuery::new(vec![Bound::Le(3.0), Bound::Le(3.0)]);
        assert_eq!(query_best(&idx, &q), Some((3.0, 1)));
        let q = DominanceQuery::new(vec![Bound::Le(1.5), Bound::Le(3.0)]);
        assert_eq!(query_best(&idx, &q), Some((5.0, 0)));
        let q = DominanceQuery::new(vec![Bound::Le(0.5), Bound::Free]);
        assert_eq!(query_best(&idx, &q), None);
    }

    #[test]
    fn empty_input_answers_none() {
        let idx = build_index(Vec::new(), AggregateMode::Min);
        assert!(idx.is_empty());
    }

    #[test]
    fn random_queries_match_linear_scan() {
        let mut rng = StdRng::seed_from_u64(7);
        for &dims in &[2usize, 3, 4] {
            for mode in [AggregateMode::Min, AggregateMode::Max] {
                let sites: Vec<KeyedSite> = (0..500)
                    .map(|i| {
                        let coords = (0..dims).map(|_| rng.gen_range(-10.0..10.0)).collect();
                        KeyedSite::new(coords, rng.gen_range(-5.0..5.0), i)
                    })
                    .collect();
                let idx = build_index(sites.clone(), mode);
                for _ in 0..200 {
                    let bounds = (0..dims)
                        .map(|_| match rng.gen_range(0..3) {
                            0 => Bound::Le(rng.gen_range(-12.0..12.0)),
                            1 => Bound::Ge(rng.gen_range(-12.0..12.0)),
                            _ => Bound::Free,
                        })
                        .collect::<Vec<_>>();
                    if bounds.iter().all(|b| matches!(b, Bound::Free)) {
                        continue;
                    }
                    let q = DominanceQuery::new(bounds);
                    assert_eq!(query_best(&idx, &q), scan_best(&sites, &q, mode));
                }
            }
        }
    }

    #[test]
    fn corner_index_examples() {
        let idx = build_linf_corner_index(&[(Point::new(0.0, 0.0), 0), (Point::new(5.0, 5.0), 1)]);
        let all = DominanceQuery::new(vec![Bound::Le(f64::INFINITY), Bound::Free]);
        assert_eq!(query_linf_nearest(&idx, &all, Point::new(1.0, 1.0)), Some((1.0, 0)));
        let right = DominanceQuery::new(vec![Bound::Ge(4.0), Bound::Free]);
        assert_eq!(query_linf_nearest(&idx, &right, Point::new(1.0, 1.0)), Some((4.0, 1)));
    }

    #[test]
    fn corner_index_matches_scan() {
        let mut rng = StdRng::seed_from_u64(11);
        let sites: Vec<(Point, u32)> = (0..300)
            .map(|i| (Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)), i))
            .collect();
        let idx = build_linf_corner_index(&sites);
        for _ in 0..300 {
            let bounds = vec![
                match rng.gen_range(0..3) {
                    0 => Bound::Le(rng.gen_range(-12.0..12.0)),
                    1 => Bound::Ge(rng.gen_range(-12.0..12.0)),
                    _ => Bound::Free,
                },
                Bound::Le(rng.gen_range(-12.0..12.0)),
            ];
            let q = DominanceQuery::new(bounds);
            let p = Point::new(rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0));
            let mut expect: Option<(f64, u32)> = None;
            for &(site, payload) in &sites {
                if q.admits(&[site.x, site.y]) {
                    let d = f64::max((p.x - site.x).abs(), (p.y - site.y).abs());
                    if expect.map_or(true, |(bd, bp)| d < bd || (d == bd && payload < bp)) {
                        expect = Some((d, payload));
                    }
                }
            }
            assert_eq!(query_linf_nearest(&idx, &q, p), expect);
        }
    }
}
