//! Simple polygons with exact point location.

use serde::{Deserialize, Serialize};

use crate::geom::{orient, predicates::segments_intersect, Point, Scalar, Segment, Sign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("duplicate vertex at positions {0} and {1}")]
    DuplicateVertex(usize, usize),
    #[error("vertices {0}, {1}, {2} are consecutive and collinear")]
    CollinearRun(usize, usize, usize),
    #[error("non-simple polygon: edges {0} and {1} intersect")]
    NonSimple(usize, usize),
}

/// Classification of a point against a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointLocation {
    Inside,
    Outside,
    Boundary,
}

/// A simple polygon: no two non-adjacent edges intersect, adjacent edges
/// share only their endpoint, no three consecutive vertices collinear.
/// Vertex order is kept as given; the signed area records the orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
    signed_area: Scalar,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if vertices[i] == vertices[j] {
                    return Err(PolygonError::DuplicateVertex(i, j));
                }
            }
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if orient(a, b, c) == Sign::Zero {
                return Err(PolygonError::CollinearRun(i, (i + 1) % n, (i + 2) % n));
            }
        }
        let edges: Vec<Segment> = (0..n)
            .map(|i| {
                Segment::new(vertices[i].clone(), vertices[(i + 1) % n].clone())
                    .expect("distinct consecutive vertices")
            })
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(&edges[i], &edges[j]) {
                    return Err(PolygonError::NonSimple(i, j));
                }
            }
        }
        let signed_area = shoelace(&vertices);
        Ok(Polygon {
            vertices,
            signed_area,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    /// Edge from vertex `i` to vertex `i+1` (mod n).
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.len();
        Segment::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone())
            .expect("distinct consecutive vertices")
    }

    pub fn edges(&self) -> Vec<Segment> {
        (0..self.len()).map(|i| self.edge(i)).collect()
    }

    /// Twice-signed-area convention is not used: this is the full signed
    /// area, positive for counterclockwise vertex order.
    pub fn signed_area(&self) -> &Scalar {
        &self.signed_area
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area.sign() == Sign::Pos
    }

    /// Exact point location by crossing parity, with the boundary handled
    /// explicitly first.
    pub fn locate(&self, p: &Point) -> PointLocation {
        let n = self.len();
        for i in 0..n {
            if self.edge(i).contains(p) {
                return PointLocation::Boundary;
            }
        }
        // Count crossings of the rightward horizontal ray from p. The
        // half-open y-interval rule counts each vertex level once; since p is
        // not on the boundary the crossing abscissa never equals p.x.
        let mut crossings = 0usize;
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            if (a.y > p.y) == (b.y > p.y) {
                continue;
            }
            let t = (&p.y - &a.y) / (&b.y - &a.y);
            let x_int = &a.x + &(t * (&b.x - &a.x));
            debug_assert!(x_int != p.x);
            if x_int > p.x {
                crossings += 1;
            }
        }
        if crossings % 2 == 1 {
            PointLocation::Inside
        } else {
            PointLocation::Outside
        }
    }
}

fn shoelace(vertices: &[Point]) -> Scalar {
    let n = vertices.len();
    let mut twice = Scalar::zero();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        twice = twice + (&a.x * &b.y - &b.x * &a.y);
    }
    twice / Scalar::from_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, pt_r};

    pub(crate) fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    #[test]
    fn square_area_and_orientation() {
        let sq = unit_square();
        assert_eq!(sq.signed_area(), &Scalar::one());
        assert!(sq.is_ccw());
        let cw = Polygon::new(vec![pt(0, 1), pt(1, 1), pt(1, 0), pt(0, 0)]).unwrap();
        assert_eq!(cw.signed_area(), &Scalar::from_int(-1));
        assert!(!cw.is_ccw());
    }

    #[test]
    fn bowtie_rejected() {
        let err = Polygon::new(vec![pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)]).unwrap_err();
        assert!(matches!(err, PolygonError::NonSimple(..)));
    }

    #[test]
    fn collinear_run_rejected() {
        let err = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(2, 0), pt(1, 2)]).unwrap_err();
        assert!(matches!(err, PolygonError::CollinearRun(..)));
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let err = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(0, 0), pt(0, 1)]).unwrap_err();
        assert!(matches!(err, PolygonError::DuplicateVertex(..)));
    }

    #[test]
    fn locate_on_unit_square() {
        let sq = unit_square();
        assert_eq!(sq.locate(&pt_r(1, 2, 1, 2)), PointLocation::Inside);
        assert_eq!(sq.locate(&pt(2, 2)), PointLocation::Outside);
        assert_eq!(sq.locate(&pt(0, 0)), PointLocation::Boundary);
        assert_eq!(sq.locate(&pt_r(1, 2, 0, 1)), PointLocation::Boundary);
        assert_eq!(sq.locate(&pt_r(1, 2, 1, 1)), PointLocation::Boundary);
    }

    #[test]
    fn locate_handles_vertex_level_rays() {
        // p shares its y with vertices of the polygon; parity must not double
        // count them.
        let diamond = Polygon::new(vec![pt(0, 0), pt(2, -2), pt(4, 0), pt(2, 2)]).unwrap();
        assert_eq!(diamond.locate(&pt(2, 0)), PointLocation::Inside);
        assert_eq!(diamond.locate(&pt(-1, 0)), PointLocation::Outside);
        assert_eq!(diamond.locate(&pt(5, 0)), PointLocation::Outside);
    }
}
