//! Guards: broadcast stations with an apex, an angular cone swept
//! counterclockwise from `d1` to `d2`, and a unique key. The polygon never
//! blocks broadcasts, so cone membership consults nothing but the cone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::{Direction, Line, Point, Ray, Segment, Sign};

use super::polygon::Polygon;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuardError {
    #[error("guard directions must not be positive multiples of each other")]
    ParallelDirections,
    #[error("reflex flag inconsistent with directions: width {actual} requires reflex={expected}")]
    ReflexMismatch {
        expected: bool,
        actual: &'static str,
    },
    #[error("guard key must be nonempty")]
    EmptyKey,
}

/// Which natural angle at a vertex a guard broadcasts over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaturalSide {
    Internal,
    External,
}

/// A guard: apex plus the closed angular sector swept counterclockwise from
/// `d1` to `d2`. `reflex = false` means width in (0, pi] (width exactly pi is
/// encoded as `d2 = -d1`); `reflex = true` means width in (pi, 2pi).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGuard", into = "RawGuard")]
pub struct Guard {
    apex: Point,
    d1: Direction,
    d2: Direction,
    reflex: bool,
    key: String,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawGuard {
    apex: Point,
    d1: Direction,
    d2: Direction,
    reflex: bool,
    key: String,
}

impl TryFrom<RawGuard> for Guard {
    type Error = GuardError;
    fn try_from(raw: RawGuard) -> Result<Guard, GuardError> {
        Guard::new(raw.apex, raw.d1, raw.d2, raw.reflex, raw.key)
    }
}

impl From<Guard> for RawGuard {
    fn from(g: Guard) -> RawGuard {
        RawGuard {
            apex: g.apex,
            d1: g.d1,
            d2: g.d2,
            reflex: g.reflex,
            key: g.key,
        }
    }
}

impl Guard {
    pub fn new(
        apex: Point,
        d1: Direction,
        d2: Direction,
        reflex: bool,
        key: impl Into<String>,
    ) -> Result<Guard, GuardError> {
        let key = key.into();
        if key.is_empty() {
            return Err(GuardError::EmptyKey);
        }
        if d1 == d2 {
            return Err(GuardError::ParallelDirections);
        }
        // The counterclockwise sweep from d1 to d2 has width < pi iff
        // d1 x d2 > 0, width = pi iff d2 = -d1, width > pi iff d1 x d2 < 0.
        let expected_reflex = match d1.cross(&d2) {
            Sign::Pos => false,
            Sign::Neg => true,
            Sign::Zero => false, // antiparallel: half-plane of width pi
        };
        if reflex != expected_reflex {
            let actual = if expected_reflex {
                "in (pi, 2pi)"
            } else {
                "in (0, pi]"
            };
            return Err(GuardError::ReflexMismatch {
                expected: expected_reflex,
                actual,
            });
        }
        Ok(Guard {
            apex,
            d1,
            d2,
            reflex,
            key,
        })
    }

    /// Guard with the reflex flag inferred from the directions.
    pub fn spanning(
        apex: Point,
        d1: Direction,
        d2: Direction,
        key: impl Into<String>,
    ) -> Result<Guard, GuardError> {
        let reflex = d1.cross(&d2) == Sign::Neg;
        Guard::new(apex, d1, d2, reflex, key)
    }

    /// The natural guard at vertex `v`: apex there, boundary directions along
    /// the two incident edges, broadcasting over the full internal or
    /// external angle.
    pub fn natural(
        polygon: &Polygon,
        v: usize,
        side: NaturalSide,
        key: impl Into<String>,
    ) -> Guard {
        let n = polygon.len();
        assert!(v < n, "vertex index out of range");
        let vert = polygon.vertex(v);
        let prev = polygon.vertex((v + n - 1) % n);
        let next = polygon.vertex((v + 1) % n);
        let to_prev = Direction::between(vert, prev).expect("distinct vertices");
        let to_next = Direction::between(vert, next).expect("distinct vertices");
        // Interior lies to the left of the directed boundary of a ccw
        // polygon, so the internal sector sweeps ccw from the outgoing edge
        // direction to the incoming one; mirrored for cw input.
        let (d1, d2) = if polygon.is_ccw() {
            (to_next, to_prev)
        } else {
            (to_prev, to_next)
        };
        let (d1, d2) = match side {
            NaturalSide::Internal => (d1, d2),
            NaturalSide::External => (d2, d1),
        };
        Guard::spanning(vert.clone(), d1, d2, key)
            .expect("polygon invariants forbid straight vertices")
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn d1(&self) -> &Direction {
        &self.d1
    }

    pub fn d2(&self) -> &Direction {
        &self.d2
    }

    pub fn is_reflex(&self) -> bool {
        self.reflex
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn with_key(mut self, key: impl Into<String>) -> Guard {
        self.key = key.into();
        self
    }

    pub fn boundary_rays(&self) -> (Ray, Ray) {
        (
            Ray::new(self.apex.clone(), self.d1.clone()),
            Ray::new(self.apex.clone(), self.d2.clone()),
        )
    }

    pub fn boundary_lines(&self) -> (Line, Line) {
        (
            Line::from_point_dir(&self.apex, &self.d1),
            Line::from_point_dir(&self.apex, &self.d2),
        )
    }

    /// Closed-cone membership. The apex always belongs to the cone.
    pub fn cone_contains(&self, p: &Point) -> bool {
        if p == &self.apex {
            return true;
        }
        let vx = &p.x - &self.apex.x;
        let vy = &p.y - &self.apex.y;
        let s1 = self.d1.cross_vec(&vx, &vy);
        let s2 = self.d2.cross_vec(&vx, &vy);
        if !self.reflex {
            // Left of (or on) ray d1 and right of (or on) ray d2.
            s1 != Sign::Neg && s2 != Sign::Pos
        } else {
            // Complement of the strict interior of the opposite convex
            // sector (swept ccw from d2 to d1), boundary inclusive.
            !(s2 == Sign::Pos && s1 == Sign::Neg)
        }
    }

    /// True iff the segment's supporting line equals one of this guard's
    /// broadcast boundary lines.
    pub fn covers(&self, e: &Segment) -> bool {
        let edge_line = Line::of_segment(e);
        let (l1, l2) = self.boundary_lines();
        edge_line == l1 || edge_line == l2
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}@{:?} [{:?} ccw {:?}{}]",
            self.key,
            self.apex,
            self.d1,
            self.d2,
            if self.reflex { ", reflex" } else { "" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, pt_r, Scalar};
    use crate::model::polygon::Polygon;

    fn dir(dx: i64, dy: i64) -> Direction {
        Direction::of_ints(dx, dy)
    }

    fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    fn spike_m2() -> Polygon {
        Polygon::new(vec![
            pt(-1, -2),
            pt(0, 1),
            pt(0, 0),
            pt(39, 0),
            pt(40, 3),
            pt(40, 0),
        ])
        .unwrap()
    }

    #[test]
    fn half_plane_guard() {
        let g = Guard::new(pt(0, 0), dir(1, 0), dir(-1, 0), false, "k").unwrap();
        assert!(g.cone_contains(&pt(0, 5)));
        assert!(!g.cone_contains(&pt(0, -5)));
        assert!(g.cone_contains(&pt(7, 0))); // boundary included
        assert!(g.cone_contains(&pt(0, 0)));
    }

    #[test]
    fn invalid_direction_pairs() {
        assert_eq!(
            Guard::new(pt(0, 0), dir(1, 0), dir(2, 0), false, "k").unwrap_err(),
            GuardError::ParallelDirections
        );
        assert!(matches!(
            Guard::new(pt(0, 0), dir(1, 0), dir(0, 1), true, "k").unwrap_err(),
            GuardError::ReflexMismatch { .. }
        ));
        assert!(matches!(
            Guard::new(pt(0, 0), dir(1, 0), dir(-1, 0), true, "k").unwrap_err(),
            GuardError::ReflexMismatch { .. }
        ));
        assert_eq!(
            Guard::new(pt(0, 0), dir(1, 0), dir(0, 1), false, "").unwrap_err(),
            GuardError::EmptyKey
        );
    }

    #[test]
    fn natural_internal_at_square_corner() {
        let sq = unit_square();
        let g = Guard::natural(&sq, 0, NaturalSide::Internal, "k");
        assert!(!g.is_reflex());
        assert!(g.cone_contains(&pt(2, 3)));
        assert!(g.cone_contains(&pt(1, 0)));
        assert!(!g.cone_contains(&pt(-1, 1)));
        assert!(!g.cone_contains(&pt(1, -1)));
    }

    #[test]
    fn natural_external_is_reflex_complement() {
        let sq = unit_square();
        let int = Guard::natural(&sq, 0, NaturalSide::Internal, "i");
        let ext = Guard::natural(&sq, 0, NaturalSide::External, "e");
        assert!(ext.is_reflex());
        for p in [pt(2, 3), pt(-1, 1), pt(1, -1), pt(-2, -2), pt(5, 0)] {
            let on_boundary = {
                let (r1, r2) = int.boundary_rays();
                r1.contains(&p) || r2.contains(&p)
            };
            if on_boundary {
                assert!(int.cone_contains(&p) && ext.cone_contains(&p));
            } else {
                assert_ne!(int.cone_contains(&p), ext.cone_contains(&p));
            }
        }
    }

    #[test]
    fn natural_tip_guard_on_spike_polygon() {
        let p = spike_m2();
        let g = Guard::natural(&p, 1, NaturalSide::Internal, "t1");
        assert_eq!(g.d1(), &dir(-1, -3));
        assert_eq!(g.d2(), &dir(0, -1));
        assert!(!g.is_reflex());
        // Interior sample near the tip.
        assert!(g.cone_contains(&pt_r(-1, 10, 0, 1)));
        assert!(g.cone_contains(&Point::new(Scalar::ratio(-1, 2), Scalar::from_int(-5))));
        assert!(!g.cone_contains(&pt(5, 0)));
    }

    #[test]
    fn natural_internal_at_reflex_vertex() {
        // r_1 of the spike polygon has internal angle 3pi/2.
        let p = spike_m2();
        let g = Guard::natural(&p, 2, NaturalSide::Internal, "r1");
        assert!(g.is_reflex());
        assert!(g.cone_contains(&pt(5, -1))); // trough side
        assert!(g.cone_contains(&pt_r(-1, 10, 1, 10))); // spike side
        assert!(!g.cone_contains(&pt(5, 1))); // exterior quadrant
    }

    #[test]
    fn covers_uses_supporting_lines() {
        let p = spike_m2();
        let edges = p.edges();
        let t1 = Guard::natural(&p, 1, NaturalSide::Internal, "t1");
        assert!(t1.covers(&edges[0])); // l1 -> t1
        assert!(t1.covers(&edges[1])); // t1 -> r1
        assert!(!t1.covers(&edges[2]));

        // Guard at l2 with one ray toward t2 covers edge l2->t2 (line 3x - y = 117).
        let g = Guard::spanning(pt(39, 0), dir(1, 3), dir(-1, 0), "g").unwrap();
        assert!(g.covers(&edges[3]));
        // Reversing a segment does not change coverage.
        assert!(g.covers(&edges[3].reversed()));

        let far = Guard::spanning(pt(0, 0), dir(1, 3), dir(-1, 0), "f").unwrap();
        assert!(!far.covers(&edges[3]));
    }

    #[test]
    fn guard_json_round_trip() {
        let g = Guard::new(pt(0, 0), dir(1, 0), dir(-1, 0), false, "k1").unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"apex\""));
        let back: Guard = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
        // An inconsistent reflex flag is rejected at parse time.
        let bad = r#"{"apex":["0","0"],"d1":["1","0"],"d2":["0","1"],"reflex":true,"key":"k"}"#;
        assert!(serde_json::from_str::<Guard>(bad).is_err());
    }
}
