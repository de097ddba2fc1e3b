//! Floating-point geometric primitives shared by all shape pipelines:
//! rotated coordinate frames for equilateral triangles, containment
//! predicates, paraboloid lifting, bisectors and squared-distance curves.

use serde::{Deserialize, Serialize};

/// Global comparison tolerance. Relative where magnitudes exceed 1.
pub const EPS: f64 = 1e-9;

pub const SIN60: f64 = 0.8660254037844386; // sqrt(3)/2
pub const COS60: f64 = 0.5;
pub const SQRT3: f64 = 1.7320508075688772;

/// Tolerant comparison: `a <= b` up to EPS, relative for large magnitudes.
#[inline]
pub fn le_eps(a: f64, b: f64) -> bool {
    a <= b + EPS * f64::max(1.0, f64::max(a.abs(), b.abs()))
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS * f64::max(1.0, f64::max(a.abs(), b.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// An input point carrying a color id in `0..k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColoredPoint {
    pub x: f64,
    pub y: f64,
    pub color: u32,
}

impl ColoredPoint {
    pub fn new(x: f64, y: f64, color: u32) -> Self {
        ColoredPoint { x, y, color }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// The six frame coordinates of a point: the plain (ν) frame, the α frame
/// in which the left arm of an apex-up equilateral triangle is horizontal,
/// and the β frame in which the right arm is horizontal.
///
/// Convention (validated against the direct containment predicate):
/// α is the clockwise 60° rotation, β the anticlockwise one. Under it an
/// apex-up equilateral triangle with bottom-left vertex `bl` and
/// bottom-right vertex `br` is exactly
/// `{ p : y(p) >= y(bl), y_alpha(p) <= y_alpha(bl), y_beta(p) <= y_beta(br) }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriFrameCoords {
    pub x_nu: f64,
    pub y_nu: f64,
    pub x_alpha: f64,
    pub y_alpha: f64,
    pub x_beta: f64,
    pub y_beta: f64,
}

/// All six frame coordinates of `p`. Rotations preserve distances.
pub fn tri_frame(p: Point) -> TriFrameCoords {
    TriFrameCoords {
        x_nu: p.x,
        y_nu: p.y,
        // clockwise 60°
        x_alpha: p.x * COS60 + p.y * SIN60,
        y_alpha: -p.x * SIN60 + p.y * COS60,
        // anticlockwise 60°
        x_beta: p.x * COS60 - p.y * SIN60,
        y_beta: p.x * SIN60 + p.y * COS60,
    }
}

/// An apex-up equilateral triangle with horizontal base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub v_bl: Point,
    pub v_br: Point,
    pub v_top: Point,
}

impl Triangle {
    /// Builds the triangle from its three frame levels: base level `b`
    /// (ν frame), left-arm level `a` (α frame) and right-arm level `r`
    /// (β frame). Nonempty iff `a + r >= b`; side length `2(a+r-b)/√3`.
    pub fn from_levels(b: f64, a: f64, r: f64) -> Triangle {
        // bl: y = b, y_alpha = a  =>  -x*s + y*c = a with y = b
        let s = SIN60;
        let c = COS60;
        let bl = Point::new((b * c - a) / s, b);
        let br = Point::new((r - b * c) / s, b);
        // y_alpha + y_beta = 2*c*y = y and y_beta - y_alpha = 2*s*x
        let top = Point::new((r - a) / (2.0 * s), a + r);
        Triangle {
            v_bl: bl,
            v_br: br,
            v_top: top,
        }
    }

    pub fn side(&self) -> f64 {
        self.v_br.x - self.v_bl.x
    }

    /// Base level in the ν frame.
    pub fn base_level(&self) -> f64 {
        self.v_bl.y
    }

    /// Left-arm level in the α frame (level of `v_bl` and `v_top`).
    pub fn left_level(&self) -> f64 {
        tri_frame(self.v_bl).y_alpha
    }

    /// Right-arm level in the β frame (level of `v_br` and `v_top`).
    pub fn right_level(&self) -> f64 {
        tri_frame(self.v_br).y_beta
    }
}

/// Reference containment predicate via three orientation tests.
pub fn point_in_triangle_direct(p: Point, t: &Triangle) -> bool {
    let orient = |a: Point, b: Point| (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let scale = f64::max(1.0, t.side());
    let tol = EPS * scale * scale;
    orient(t.v_bl, t.v_br) >= -tol && orient(t.v_br, t.v_top) >= -tol && orient(t.v_top, t.v_bl) >= -tol
}

/// Containment as three above/below tests in the ν, α and β frames.
/// Agrees with [`point_in_triangle_direct`] for apex-up equilateral
/// triangles with horizontal base.
pub fn point_in_triangle_frames(p: Point, t: &Triangle) -> bool {
    let f = tri_frame(p);
    le_eps(t.base_level(), f.y_nu) && le_eps(f.y_alpha, t.left_level()) && le_eps(f.y_beta, t.right_level())
}

/// Chebyshev distance.
pub fn linf_distance(p: Point, q: Point) -> f64 {
    f64::max((p.x - q.x).abs(), (p.y - q.y).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    /// Closed-disk membership.
    pub fn contains(&self, p: Point) -> bool {
        le_eps(self.center.dist(&p), self.radius)
    }
}

/// The plane `z = a·x + b·y + c` lifted from a circle on the unit
/// paraboloid: a point lies below the plane iff the circle contains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn lift_circle(c: &Circle) -> LiftedPlane {
    let (p, q) = (c.center.x, c.center.y);
    LiftedPlane {
        a: 2.0 * p,
        b: 2.0 * q,
        c: c.radius * c.radius - p * p - q * q,
    }
}

/// True iff the lift of `p` onto the paraboloid lies on or below `pl`,
/// i.e. the source circle's closed disk contains `p`.
pub fn point_below_lift(p: Point, pl: &LiftedPlane) -> bool {
    let lift = p.x * p.x + p.y * p.y;
    let plane = pl.a * p.x + pl.b * p.y + pl.c;
    le_eps(lift, plane)
}

/// The unique point on the horizontal line `y = line_y` equidistant from
/// `p` and `q`, or `None` when the perpendicular bisector of `pq` is
/// parallel to the line (`p.x == q.x`).
pub fn bisector_line_intersection(p: Point, q: Point, line_y: f64) -> Option<Point> {
    let dx = q.x - p.x;
    if dx.abs() <= EPS * f64::max(1.0, f64::max(p.x.abs(), q.x.abs())) {
        return None;
    }
    // |z - p|^2 = |z - q|^2 with z = (x, line_y)
    let dp = p.x * p.x + (p.y - line_y) * (p.y - line_y);
    let dq = q.x * q.x + (q.y - line_y) * (q.y - line_y);
    let x = (dq - dp) / (2.0 * dx);
    Some(Point::new(x, line_y))
}

/// Squared distance from `(x, line_y)` to `p`: a parabola in `x`.
pub fn distance_curve_eval(p: Point, line_y: f64, x: f64) -> f64 {
    let dx = x - p.x;
    let dy = p.y - line_y;
    dx * dx + dy * dy
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveIntersection {
    At(f64),
    /// `p.x == q.x` with different heights: the bisector is vertical in
    /// squared-distance space, the curves never meet.
    None,
    /// Mirror-equal points: the curves coincide everywhere.
    Coincident,
}

/// The unique x where the squared-distance parabolas of `p` and `q`
/// (both measured from the line `y = line_y`) agree.
pub fn curve_intersection_x(p: Point, q: Point, line_y: f64) -> CurveIntersection {
    let dx = q.x - p.x;
    if dx.abs() <= EPS * f64::max(1.0, f64::max(p.x.abs(), q.x.abs())) {
        let hp = (p.y - line_y).abs();
        let hq = (q.y - line_y).abs();
        if approx_eq(hp, hq) {
            return CurveIntersection::Coincident;
        }
        return CurveIntersection::None;
    }
    let dp = p.x * p.x + (p.y - line_y) * (p.y - line_y);
    let dq = q.x * q.x + (q.y - line_y) * (q.y - line_y);
    CurveIntersection::At((dq - dp) / (2.0 * dx))
}

/// Mirrors every point strictly below `line_y` about the line. Order and
/// colors are preserved.
pub fn reflect_below_line(points: &[ColoredPoint], line_y: f64) -> Vec<ColoredPoint> {
    points
        .iter()
        .map(|p| {
            if p.y < line_y {
                ColoredPoint::new(p.x, 2.0 * line_y - p.y, p.color)
            } else {
                *p
            }
        })
        .collect()
}

/// Rigid rotation of the whole set about the origin.
pub fn rotate_point_set(points: &[ColoredPoint], theta: f64) -> Vec<ColoredPoint> {
    let (s, c) = theta.sin_cos();
    points
        .iter()
        .map(|p| ColoredPoint::new(p.x * c - p.y * s, p.x * s + p.y * c, p.color))
        .collect()
}

pub fn rotate_point(p: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(p.x * c - p.y * s, p.x * s + p.y * c)
}

/// Circumcenter of three points, or `None` when they are (near) collinear.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let scale = f64::max(1.0, [a, b, c].iter().map(|p| f64::max(p.x.abs(), p.y.abs())).fold(0.0, f64::max));
    if d.abs() <= 1e-12 * scale * scale {
        return None;
    }
    let a2 = a.x * a.x + a.y * a.y;
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    Some(Point::new(ux, uy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tri_frame_origin_fixed() {
        let f = tri_frame(Point::new(0.0, 0.0));
        assert_eq!(
            (f.x_nu, f.y_nu, f.x_alpha, f.y_alpha, f.x_beta, f.y_beta),
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn tri_frame_unit_vector() {
        let f = tri_frame(Point::new(1.0, 0.0));
        assert!(approx_eq(f.y_beta, SIN60));
        assert!(approx_eq(f.y_alpha, -SIN60));
        assert!(approx_eq(f.x_alpha, COS60));
    }

    #[test]
    fn triangle_from_levels_unit() {
        // unit triangle (0,0),(1,0),(0.5,√3/2): levels b=0, a=0, r=√3/2
        let t = Triangle::from_levels(0.0, 0.0, SIN60);
        assert!(approx_eq(t.v_bl.x, 0.0) && approx_eq(t.v_bl.y, 0.0));
        assert!(approx_eq(t.v_br.x, 1.0) && approx_eq(t.v_br.y, 0.0));
        assert!(approx_eq(t.v_top.x, 0.5) && approx_eq(t.v_top.y, SIN60));
        assert!(approx_eq(t.side(), 1.0));
    }

    #[test]
    fn containment_direct_basic() {
        let t = Triangle::from_levels(0.0, 0.0, SIN60);
        let centroid = Point::new(0.5, SIN60 / 3.0);
        assert!(point_in_triangle_direct(centroid, &t));
        assert!(point_in_triangle_direct(t.v_bl, &t)); // closed
        let far = Point::new(0.5 + 2.0, SIN60 / 3.0);
        assert!(!point_in_triangle_direct(far, &t));
    }

    #[test]
    fn frames_agree_with_direct_on_random_pairs() {
        // predicate-equivalence oracle over 1000 pseudo-random pairs
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let b = next() * 10.0 - 5.0;
            let a = next() * 10.0 - 5.0;
            let r = b - a + next() * 10.0; // ensures a + r >= b
            let t = Triangle::from_levels(b, a, r);
            let p = Point::new(next() * 20.0 - 10.0, next() * 20.0 - 10.0);
            // skip points too close to the boundary for a strict comparison
            let f = tri_frame(p);
            let m = [
                (f.y_nu - t.base_level()).abs(),
                (f.y_alpha - t.left_level()).abs(),
                (f.y_beta - t.right_level()).abs(),
            ];
            if m.iter().any(|d| *d < 1e-6) {
                continue;
            }
            assert_eq!(
                point_in_triangle_frames(p, &t),
                point_in_triangle_direct(p, &t),
                "p={p:?} t={t:?}"
            );
        }
    }

    #[test]
    fn linf_examples() {
        assert_eq!(linf_distance(Point::new(0.0, 0.0), Point::new(0.0, 0.0)), 0.0);
        assert_eq!(linf_distance(Point::new(0.0, 0.0), Point::new(2.0, 2.0)), 2.0);
        assert_eq!(linf_distance(Point::new(0.0, 0.0), Point::new(3.0, -1.0)), 3.0);
    }

    #[test]
    fn lift_unit_circle() {
        let c = Circle::new(Point::new(0.0, 0.0), 1.0);
        let pl = lift_circle(&c);
        assert_eq!((pl.a, pl.b, pl.c), (0.0, 0.0, 1.0));
        assert!(point_below_lift(Point::new(0.0, 0.0), &pl));
        assert!(!point_below_lift(Point::new(2.0, 0.0), &pl));
    }

    #[test]
    fn bisector_examples() {
        let g = bisector_line_intersection(Point::new(1.0, 0.0), Point::new(0.0, 1.0), 0.0).unwrap();
        assert!(approx_eq(g.x, 0.0) && g.y == 0.0);
        assert!(bisector_line_intersection(Point::new(0.0, 2.0), Point::new(0.0, 4.0), 0.0).is_none());
        let g = bisector_line_intersection(Point::new(0.0, 1.0), Point::new(2.0, 1.0), 0.0).unwrap();
        assert!(approx_eq(g.x, 1.0));
    }

    #[test]
    fn distance_curve_examples() {
        assert!(approx_eq(distance_curve_eval(Point::new(0.0, 1.0), 0.0, 0.0), 1.0));
        assert!(approx_eq(distance_curve_eval(Point::new(0.0, 1.0), 0.0, 1.0), 2.0));
        assert!(approx_eq(distance_curve_eval(Point::new(2.0, 1.0), 0.0, 0.0), 5.0));
    }

    #[test]
    fn curve_intersection_examples() {
        match curve_intersection_x(Point::new(0.0, 1.0), Point::new(2.0, 1.0), 0.0) {
            CurveIntersection::At(x) => assert!(approx_eq(x, 1.0)),
            other => panic!("expected intersection, got {other:?}"),
        }
        assert_eq!(
            curve_intersection_x(Point::new(0.0, 1.0), Point::new(0.0, 3.0), 0.0),
            CurveIntersection::None
        );
        match curve_intersection_x(Point::new(0.0, 1.0), Point::new(4.0, 3.0), 0.0) {
            CurveIntersection::At(x) => {
                assert!(approx_eq(x, 3.0));
                let a = distance_curve_eval(Point::new(0.0, 1.0), 0.0, x);
                let b = distance_curve_eval(Point::new(4.0, 3.0), 0.0, x);
                assert!((a - b).abs() <= 1e-9 * f64::max(1.0, a.abs()));
            }
            other => panic!("expected intersection, got {other:?}"),
        }
    }

    #[test]
    fn reflect_examples() {
        let pts = vec![
            ColoredPoint::new(0.0, -1.0, 0),
            ColoredPoint::new(0.0, 1.0, 1),
            ColoredPoint::new(3.0, 0.0, 2),
        ];
        let r = reflect_below_line(&pts, 0.0);
        assert_eq!(r[0].y, 1.0);
        assert_eq!(r[1].y, 1.0);
        assert_eq!(r[2].y, 0.0);
        assert_eq!(r[0].color, 0);
    }

    proptest! {
        #[test]
        fn rotation_preserves_pairwise_distances(
            pts in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..20),
            theta in -6.0f64..6.0,
        ) {
            let set: Vec<ColoredPoint> = pts.iter().map(|&(x, y)| ColoredPoint::new(x, y, 0)).collect();
            let rot = rotate_point_set(&set, theta);
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    let d0 = set[i].point().dist(&set[j].point());
                    let d1 = rot[i].point().dist(&rot[j].point());
                    prop_assert!((d0 - d1).abs() <= 1e-12 * f64::max(1.0, d0));
                }
            }
        }

        #[test]
        fn lift_predicate_matches_disk_membership(
            cx in -50.0f64..50.0, cy in -50.0f64..50.0, r in 0.0f64..30.0,
            px in -80.0f64..80.0, py in -80.0f64..80.0,
        ) {
            let c = Circle::new(Point::new(cx, cy), r);
            let p = Point::new(px, py);
            let direct = c.center.dist(&p) <= r + 1e-12 * f64::max(1.0, r);
            let lifted = point_below_lift(p, &lift_circle(&c));
            // only compare away from the boundary at the shared tolerance
            if (c.center.dist(&p) - r).abs() > 1e-6 {
                prop_assert_eq!(direct, lifted);
            }
        }

        #[test]
        fn rotate_identity_and_quarter(x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let set = vec![ColoredPoint::new(x, y, 0)];
            let id = rotate_point_set(&set, 0.0);
            prop_assert!(approx_eq(id[0].x, x) && approx_eq(id[0].y, y));
            let q = rotate_point_set(&vec![ColoredPoint::new(1.0, 0.0, 0)], std::f64::consts::FRAC_PI_2);
            prop_assert!(approx_eq(q[0].x, 0.0) && approx_eq(q[0].y, 1.0));
        }
    }
}
