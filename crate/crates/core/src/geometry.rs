//! Two-dimensional geometry for down-closed convex rate regions.
//!
//! A [`Region`] keeps both descriptions of the same set: a counter-clockwise
//! vertex list that starts at the origin, and the half-planes through its
//! edges. Regions are always convex, contain the origin and are down-closed
//! in the non-negative quadrant.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance of the geometric predicates.
pub const GEOM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub const ORIGIN: RatePoint = RatePoint { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.r1
            .total_cmp(&other.r1)
            .then(self.r2.total_cmp(&other.r2))
    }
}

impl From<(f64, f64)> for RatePoint {
    fn from((r1, r2): (f64, f64)) -> Self {
        Self { r1, r2 }
    }
}

/// The closed half-plane `a*r1 + b*r2 <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `r1 <= c`
    pub fn r1_at_most(c: f64) -> Self {
        Self::new(1.0, 0.0, c)
    }

    /// `r2 <= c`
    pub fn r2_at_most(c: f64) -> Self {
        Self::new(0.0, 1.0, c)
    }

    /// `r1 + r2 <= c`
    pub fn sum_at_most(c: f64) -> Self {
        Self::new(1.0, 1.0, c)
    }

    pub fn slack(&self, p: RatePoint) -> f64 {
        self.c - (self.a * p.r1 + self.b * p.r2)
    }

    fn normalized(&self) -> Self {
        let n = self.a.hypot(self.b);
        Self::new(self.a / n, self.b / n, self.c / n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionMode {
    /// Coordinates are rates in bits per channel use.
    Rate,
    /// Coordinates are normalized degrees of freedom.
    Gdof,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    vertices: Vec<RatePoint>,
    halfplanes: Vec<HalfPlane>,
    mode: RegionMode,
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Andrew's monotone chain. Collinear and near-duplicate points are dropped;
/// the output is counter-clockwise and starts at the lexicographically
/// smallest point.
pub(crate) fn monotone_chain(mut pts: Vec<RatePoint>) -> Vec<RatePoint> {
    pts.sort_unstable_by(RatePoint::lex_cmp);
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let mut lower: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= GEOM_EPS
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= GEOM_EPS
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && (lower[0].r1 - lower[1].r1).abs() <= GEOM_EPS && (lower[0].r2 - lower[1].r2).abs() <= GEOM_EPS {
        lower.truncate(1);
    }
    lower
}

/// Adds the origin and the axis projections of every point, then hulls.
fn down_closed_hull(pts: Vec<RatePoint>) -> Vec<RatePoint> {
    let raw = monotone_chain(pts);
    let mut aug = Vec::with_capacity(3 * raw.len() + 1);
    aug.push(RatePoint::ORIGIN);
    for p in raw {
        aug.push(p);
        aug.push(RatePoint::new(p.r1, 0.0));
        aug.push(RatePoint::new(0.0, p.r2));
    }
    monotone_chain(aug)
}

impl Region {
    /// Builds a region from a counter-clockwise vertex list starting at the
    /// origin. The half-planes are derived from the edges.
    pub(crate) fn from_ccw_vertices(vertices: Vec<RatePoint>, mode: RegionMode) -> Self {
        let halfplanes = match vertices.len() {
            0 | 1 => vec![
                HalfPlane::new(-1.0, 0.0, 0.0),
                HalfPlane::new(0.0, -1.0, 0.0),
                HalfPlane::r1_at_most(0.0),
                HalfPlane::r2_at_most(0.0),
            ],
            2 => {
                let far = vertices[1];
                vec![
                    HalfPlane::new(-1.0, 0.0, 0.0),
                    HalfPlane::new(0.0, -1.0, 0.0),
                    HalfPlane::r1_at_most(far.r1),
                    HalfPlane::r2_at_most(far.r2),
                ]
            }
            n => (0..n)
                .map(|i| {
                    let p = vertices[i];
                    let q = vertices[(i + 1) % n];
                    let a = q.r2 - p.r2;
                    let b = p.r1 - q.r1;
                    HalfPlane::new(a, b, a * p.r1 + b * p.r2).normalized()
                })
                .collect(),
        };
        let vertices = if vertices.is_empty() {
            vec![RatePoint::ORIGIN]
        } else {
            vertices
        };
        Self {
            vertices,
            halfplanes,
            mode,
        }
    }

    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn mode(&self) -> RegionMode {
        self.mode
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|p| p.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|p| p.r2).fold(0.0, f64::max)
    }

    pub fn max_sum(&self) -> f64 {
        self.vertices.iter().map(|p| p.r1 + p.r2).fold(0.0, f64::max)
    }

    /// Largest `r2` in the region on the vertical line `r1 = x`, or `None`
    /// when the line misses the region.
    pub fn max_r2_at(&self, x: f64) -> Option<f64> {
        if x < -GEOM_EPS || x > self.max_r1() + GEOM_EPS {
            return None;
        }
        let n = self.vertices.len();
        let mut best: Option<f64> = None;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let (lo, hi) = if p.r1 <= q.r1 { (p, q) } else { (q, p) };
            if x < lo.r1 - GEOM_EPS || x > hi.r1 + GEOM_EPS {
                continue;
            }
            let y = if hi.r1 - lo.r1 <= GEOM_EPS {
                lo.r2.max(hi.r2)
            } else {
                let t = ((x - lo.r1) / (hi.r1 - lo.r1)).clamp(0.0, 1.0);
                lo.r2 + t * (hi.r2 - lo.r2)
            };
            best = Some(best.map_or(y, |b: f64| b.max(y)));
        }
        best
    }

    /// Euclidean distance from `p` to the region (zero inside).
    pub fn distance_to(&self, p: RatePoint) -> f64 {
        if contains(self, p, GEOM_EPS) {
            return 0.0;
        }
        let n = self.vertices.len();
        if n == 1 {
            let v = self.vertices[0];
            return (p.r1 - v.r1).hypot(p.r2 - v.r2);
        }
        (0..n)
            .map(|i| segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Hausdorff distance between two regions.
    pub fn hausdorff(&self, other: &Region) -> f64 {
        let ab = self
            .vertices
            .iter()
            .map(|&v| other.distance_to(v))
            .fold(0.0, f64::max);
        let ba = other
            .vertices
            .iter()
            .map(|&v| self.distance_to(v))
            .fold(0.0, f64::max);
        ab.max(ba)
    }

    /// Set equality up to `tol`.
    pub fn approx_eq(&self, other: &Region, tol: f64) -> bool {
        subset_of(self, other, tol) && subset_of(other, self, tol)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return true;
        }
        (0..n).all(|i| {
            cross(
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            ) >= -GEOM_EPS
        })
    }

    pub fn is_down_closed(&self, tol: f64) -> bool {
        contains(self, RatePoint::ORIGIN, tol)
            && self.vertices.iter().all(|v| {
                contains(self, RatePoint::new(v.r1, 0.0), tol)
                    && contains(self, RatePoint::new(0.0, v.r2), tol)
            })
    }
}

fn segment_distance(p: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.r1 - (a.r1 + t * dx)).hypot(p.r2 - (a.r2 + t * dy))
}

/// Down-closed convex hull of a point set.
pub fn hull(points: &[RatePoint], mode: RegionMode) -> Result<Region> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    for p in points {
        if !(p.r1 >= 0.0 && p.r2 >= 0.0 && p.r1.is_finite() && p.r2.is_finite()) {
            return Err(Error::Domain {
                name: "point coordinate",
                value: if p.r1 >= 0.0 && p.r1.is_finite() { p.r2 } else { p.r1 },
                domain: "finite and non-negative",
            });
        }
    }
    Ok(Region::from_ccw_vertices(
        down_closed_hull(points.to_vec()),
        mode,
    ))
}

/// Convex hull of the union of regions (time sharing).
pub fn hull_regions(regions: &[&Region]) -> Result<Region> {
    let mode = regions.first().ok_or(Error::EmptyInput)?.mode;
    let pts: Vec<RatePoint> = regions
        .iter()
        .flat_map(|r| r.vertices.iter().copied())
        .collect();
    hull(&pts, mode)
}

/// Crossing point of two boundary lines. Axis-parallel lines pin their
/// coordinate exactly so shared faces produce bit-identical vertices.
fn line_intersection(l1: HalfPlane, l2: HalfPlane) -> Option<RatePoint> {
    let det = l1.a * l2.b - l1.b * l2.a;
    if det.abs() <= 1e-15 {
        return None;
    }
    let pinned = |l: HalfPlane, other: HalfPlane| {
        if l.a == 0.0 {
            let y = l.c / l.b;
            Some(RatePoint::new((other.c - other.b * y) / other.a, y))
        } else if l.b == 0.0 {
            let x = l.c / l.a;
            Some(RatePoint::new(x, (other.c - other.a * x) / other.b))
        } else {
            None
        }
    };
    pinned(l1, l2).or_else(|| pinned(l2, l1)).or_else(|| {
        let x = (l1.c * l2.b - l1.b * l2.c) / det;
        let y = (l1.a * l2.c - l1.c * l2.a) / det;
        Some(RatePoint::new(x, y))
    })
}

/// Polygon `{r1, r2 >= 0} ∩ planes`. Fails when the set is unbounded or
/// misses the origin.
pub fn intersect_halfplanes(planes: &[HalfPlane], mode: RegionMode) -> Result<Region> {
    // Recession directions (t, 1-t), t in [0,1], must be cut off by some plane.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for h in planes {
        // (a - b) t + b <= 0
        let k = h.a - h.b;
        if k.abs() <= f64::EPSILON {
            if h.b > 0.0 {
                lo = 1.0;
                hi = 0.0;
            }
        } else if k > 0.0 {
            hi = hi.min(-h.b / k);
        } else {
            lo = lo.max(-h.b / k);
        }
    }
    if lo <= hi {
        let which = if hi >= 1.0 {
            "R1"
        } else if lo <= 0.0 {
            "R2"
        } else {
            "a diagonal direction"
        };
        return Err(Error::Unbounded(which));
    }

    let norm: Vec<HalfPlane> = planes.iter().map(HalfPlane::normalized).collect();
    if norm.iter().any(|h| h.c < -GEOM_EPS) {
        return Err(Error::Infeasible);
    }
    let mut lines = norm.clone();
    lines.push(HalfPlane::new(-1.0, 0.0, 0.0));
    lines.push(HalfPlane::new(0.0, -1.0, 0.0));

    let feasible = |p: RatePoint| {
        p.r1 >= -GEOM_EPS
            && p.r2 >= -GEOM_EPS
            && norm.iter().all(|h| h.slack(p) >= -GEOM_EPS * (1.0 + h.c.abs()))
    };
    let mut candidates = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if let Some(p) = line_intersection(lines[i], lines[j]) {
                let p = RatePoint::new(p.r1.max(0.0) + 0.0, p.r2.max(0.0) + 0.0);
                if feasible(p) {
                    candidates.push(p);
                }
            }
        }
    }
    candidates.push(RatePoint::ORIGIN);
    Ok(Region::from_ccw_vertices(monotone_chain(candidates), mode))
}

/// `true` iff `p` satisfies every half-plane of `region` within `tol`.
///
/// The region's own vertices are always inside, even at `tol = 0`, although
/// the rounded edge normals may put them a few ulps outside.
pub fn contains(region: &Region, p: RatePoint, tol: f64) -> bool {
    region.vertices.contains(&p) || region.halfplanes.iter().all(|h| h.slack(p) >= -tol)
}

/// `true` iff every vertex of `a` lies in `b` within `tol`.
pub fn subset_of(a: &Region, b: &Region, tol: f64) -> bool {
    a.vertices.iter().all(|&v| contains(b, v, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<RatePoint> {
        v.iter().copied().map(RatePoint::from).collect()
    }

    fn assert_vertices(region: &Region, expected: &[(f64, f64)]) {
        let got = region.vertices();
        assert_eq!(got.len(), expected.len(), "vertices {got:?}");
        for (g, e) in got.iter().zip(expected) {
            assert!(
                (g.r1 - e.0).abs() < 1e-12 && (g.r2 - e.1).abs() < 1e-12,
                "{got:?} vs {expected:?}"
            );
        }
    }

    fn unit_square() -> Region {
        intersect_halfplanes(
            &[HalfPlane::r1_at_most(1.0), HalfPlane::r2_at_most(1.0)],
            RegionMode::Rate,
        )
        .unwrap()
    }

    fn unit_triangle() -> Region {
        hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]), RegionMode::Rate).unwrap()
    }

    #[test]
    fn hull_of_triangle() {
        assert_vertices(&unit_triangle(), &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    }

    #[test]
    fn hull_of_two_boxes_matches_brute_force() {
        // Brute force: a box corner survives iff it is not inside the
        // triangle/quad spanned by the other corners. Worked by hand for the
        // eight corners of [0,0.5]x[0,0.7] and [0,1]x[0,0.5].
        let corners = pts(&[
            (0.0, 0.0),
            (0.5, 0.0),
            (0.5, 0.7),
            (0.0, 0.7),
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (0.0, 0.5),
        ]);
        let r = hull(&corners, RegionMode::Gdof).unwrap();
        assert_vertices(
            &r,
            &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 0.7), (0.0, 0.7)],
        );
    }

    #[test]
    fn hull_is_idempotent() {
        let r = hull(
            &pts(&[(0.2, 3.0), (1.5, 2.5), (2.0, 0.4), (1.0, 1.0)]),
            RegionMode::Rate,
        )
        .unwrap();
        let again = hull(r.vertices(), RegionMode::Rate).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn hull_rejects_empty_and_negative() {
        assert_eq!(hull(&[], RegionMode::Rate), Err(Error::EmptyInput));
        assert!(hull(&pts(&[(-1.0, 0.0)]), RegionMode::Rate).is_err());
    }

    #[test]
    fn degenerate_hulls() {
        let seg = hull(&pts(&[(2.0, 0.0), (1.0, 0.0)]), RegionMode::Rate).unwrap();
        assert_vertices(&seg, &[(0.0, 0.0), (2.0, 0.0)]);
        assert!(contains(&seg, RatePoint::new(1.5, 0.0), 0.0));
        assert!(!contains(&seg, RatePoint::new(1.0, 1e-6), 1e-9));

        let origin = hull(&pts(&[(0.0, 0.0)]), RegionMode::Rate).unwrap();
        assert_vertices(&origin, &[(0.0, 0.0)]);
        assert!(!contains(&origin, RatePoint::new(1e-6, 0.0), 1e-9));
    }

    #[test]
    fn intersect_unit_square() {
        assert_vertices(
            &unit_square(),
            &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        );
    }

    #[test]
    fn intersect_pentagon() {
        let r = intersect_halfplanes(
            &[
                HalfPlane::r1_at_most(1.0),
                HalfPlane::r2_at_most(0.5),
                HalfPlane::sum_at_most(1.2),
            ],
            RegionMode::Gdof,
        )
        .unwrap();
        // Pairwise line intersections: x=1 & x+y=1.2 -> (1,0.2); y=0.5 & x+y=1.2 -> (0.7,0.5).
        assert_vertices(
            &r,
            &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.2), (0.7, 0.5), (0.0, 0.5)],
        );
    }

    #[test]
    fn redundant_sum_face_gives_rectangle() {
        let alpha = 0.4;
        let r = intersect_halfplanes(
            &[
                HalfPlane::r1_at_most(1.0),
                HalfPlane::r2_at_most(1.0 - alpha),
                HalfPlane::sum_at_most(2.0 - alpha),
            ],
            RegionMode::Gdof,
        )
        .unwrap();
        assert_eq!(r.vertices().len(), 4);
        assert_vertices(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.6), (0.0, 0.6)]);
    }

    #[test]
    fn intersect_errors() {
        assert_eq!(
            intersect_halfplanes(&[HalfPlane::r1_at_most(1.0)], RegionMode::Rate),
            Err(Error::Unbounded("R2"))
        );
        assert_eq!(
            intersect_halfplanes(&[HalfPlane::r2_at_most(1.0)], RegionMode::Rate),
            Err(Error::Unbounded("R1"))
        );
        assert!(matches!(
            intersect_halfplanes(
                &[HalfPlane::new(1.0, -1.0, 1.0), HalfPlane::new(-1.0, 1.0, 1.0)],
                RegionMode::Rate
            ),
            Err(Error::Unbounded(_))
        ));
        assert_eq!(
            intersect_halfplanes(
                &[HalfPlane::r1_at_most(-1.0), HalfPlane::r2_at_most(1.0)],
                RegionMode::Rate
            ),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn containment_examples() {
        let sq = unit_square();
        assert!(contains(&sq, RatePoint::new(0.5, 0.5), 0.0));
        assert!(contains(&sq, RatePoint::new(1.0 + 1e-10, 0.0), 1e-9));
        assert!(!contains(&unit_triangle(), RatePoint::new(0.6, 0.6), 1e-9));
    }

    #[test]
    fn subset_examples() {
        let sq = unit_square();
        let tri = unit_triangle();
        assert!(subset_of(&sq, &sq, 0.0));
        assert!(subset_of(&tri, &sq, 0.0));
        assert!(!subset_of(&sq, &tri, 1e-9));
    }

    #[test]
    fn max_r2_on_vertical_lines() {
        let r = hull(&pts(&[(1.0, 0.5), (0.5, 0.7)]), RegionMode::Gdof).unwrap();
        assert!((r.max_r2_at(0.25).unwrap() - 0.7).abs() < 1e-12);
        assert!((r.max_r2_at(0.75).unwrap() - 0.6).abs() < 1e-12);
        assert!((r.max_r2_at(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(r.max_r2_at(1.1), None);
    }

    #[test]
    fn distances() {
        let sq = unit_square();
        assert_eq!(sq.distance_to(RatePoint::new(0.5, 0.5)), 0.0);
        assert!((sq.distance_to(RatePoint::new(2.0, 0.5)) - 1.0).abs() < 1e-12);
        assert!((sq.distance_to(RatePoint::new(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-12);
        assert!((sq.hausdorff(&unit_triangle()) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point_set() -> impl Strategy<Value = Vec<RatePoint>> {
            prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..40)
                .prop_map(|v| v.into_iter().map(RatePoint::from).collect())
        }

        proptest! {
            #[test]
            fn hull_is_convex_and_down_closed(ps in point_set()) {
                let r = hull(&ps, RegionMode::Rate).unwrap();
                prop_assert!(r.is_convex());
                prop_assert!(r.is_down_closed(1e-12));
                prop_assert_eq!(r.vertices()[0], RatePoint::ORIGIN);
                for &p in &ps {
                    prop_assert!(contains(&r, p, 1e-9));
                }
            }

            #[test]
            fn halfplanes_reproduce_vertices(ps in point_set()) {
                let r = hull(&ps, RegionMode::Rate).unwrap();
                let back = intersect_halfplanes(r.halfplanes(), RegionMode::Rate).unwrap();
                // Vertices of nearly parallel edges are ill-conditioned in
                // the (a, b, c) form, so compare the sets by face slack.
                prop_assert_eq!(back.vertices().len(), r.vertices().len());
                for (x, y) in [(&back, &r), (&r, &back)] {
                    for &v in x.vertices() {
                        for h in y.halfplanes() {
                            prop_assert!(h.slack(v) >= -GEOM_EPS * (1.0 + h.c.abs()));
                        }
                    }
                }
            }

            #[test]
            fn subset_is_transitive(a in point_set(), b in point_set(), c in point_set()) {
                let ra = hull(&a, RegionMode::Rate).unwrap();
                let mut ab = a.clone();
                ab.extend(b);
                let rb = hull(&ab, RegionMode::Rate).unwrap();
                let mut abc = ab.clone();
                abc.extend(c);
                let rc = hull(&abc, RegionMode::Rate).unwrap();
                prop_assert!(subset_of(&ra, &ra, 0.0));
                prop_assert!(subset_of(&ra, &rb, 1e-9));
                prop_assert!(subset_of(&rb, &rc, 1e-9));
                prop_assert!(subset_of(&ra, &rc, 1e-9));
            }
        }
    }
}
