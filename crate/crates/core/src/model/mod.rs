//! The wireless localization domain model: polygons, guards with angular
//! broadcast cones and keys, monotone formulas, and the covering relation
//! between guards and edges.

mod formula;
mod guard;
mod polygon;

pub use formula::{key_set_at, FormulaError, KeySet, MonotoneFormula};
pub use guard::{Guard, GuardError, NaturalSide};
pub use polygon::{PointLocation, Polygon, PolygonError};

use crate::geom::{Line, Point, Segment, Sign};

/// General-position violations: a vertex collinear with a non-incident spike
/// edge, or two spike edges sharing a supporting line. An empty report means
/// general position holds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneralPositionReport {
    pub vertex_violations: Vec<(Point, Segment)>,
    pub collinear_spike_pairs: Vec<(Segment, Segment)>,
}

impl GeneralPositionReport {
    pub fn is_empty(&self) -> bool {
        self.vertex_violations.is_empty() && self.collinear_spike_pairs.is_empty()
    }
}

/// Lists every (vertex, spike edge) collinear non-incident pair and every
/// collinear spike-edge pair.
pub fn general_position_report(
    polygon: &Polygon,
    spike_edges: &[Segment],
) -> GeneralPositionReport {
    let mut report = GeneralPositionReport::default();
    let lines: Vec<Line> = spike_edges.iter().map(Line::of_segment).collect();
    for (edge, line) in spike_edges.iter().zip(&lines) {
        for v in polygon.vertices() {
            if edge.has_endpoint(v) {
                continue;
            }
            if line.side_of(v) == Sign::Zero {
                report.vertex_violations.push((v.clone(), edge.clone()));
            }
        }
    }
    for i in 0..spike_edges.len() {
        for j in (i + 1)..spike_edges.len() {
            if lines[i] == lines[j] {
                report
                    .collinear_spike_pairs
                    .push((spike_edges[i].clone(), spike_edges[j].clone()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, pt_r};

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

    fn spike_edges_m2(p: &Polygon) -> Vec<Segment> {
        let e = p.edges();
        vec![e[0].clone(), e[1].clone(), e[3].clone(), e[4].clone()]
    }

    #[test]
    fn key_set_examples() {
        let sq = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap();
        let k1 = Guard::natural(&sq, 0, NaturalSide::Internal, "k1");
        let k2 = Guard::natural(&sq, 2, NaturalSide::Internal, "k2");
        let guards = vec![k1, k2];
        assert!(key_set_at(&[], &pt(3, 3)).is_empty());
        let mid = key_set_at(&guards, &pt_r(1, 2, 1, 2));
        assert_eq!(mid, ["k1", "k2"].into_iter().collect());
        // (2, 1/2): k2's sector x<=1, y<=1 excludes it; k1's contains it.
        let right = key_set_at(&guards, &pt_r(2, 1, 1, 2));
        assert_eq!(right, ["k1"].into_iter().collect());
    }

    #[test]
    fn spike_point_location_examples() {
        let p = spike_m2();
        assert_eq!(p.locate(&pt_r(20, 1, -1, 2)), PointLocation::Inside);
        assert_eq!(p.locate(&pt(20, 1)), PointLocation::Outside);
        assert_eq!(p.locate(&pt(0, 1)), PointLocation::Boundary);
    }

    #[test]
    fn spike_polygon_is_in_general_position() {
        let p = spike_m2();
        let report = general_position_report(&p, &spike_edges_m2(&p));
        assert!(report.is_empty());
    }

    #[test]
    fn square_spike_edges_are_parallel_not_collinear() {
        let sq = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap();
        let report = general_position_report(&sq, &sq.edges());
        assert!(report.is_empty());
    }

    #[test]
    fn collinear_spike_pair_detected() {
        // Two edges on the line y = 0.
        let hexagon = Polygon::new(vec![
            pt(0, 0),
            pt(1, 0),
            pt(2, 1),
            pt(3, 0),
            pt(4, 0),
            pt(2, 3),
        ])
        .unwrap();
        let edges = hexagon.edges();
        let spikes = vec![edges[0].clone(), edges[3].clone()];
        let report = general_position_report(&hexagon, &spikes);
        assert_eq!(report.collinear_spike_pairs.len(), 1);
        // Each collinear edge also puts the other's endpoints on its line.
        assert_eq!(report.vertex_violations.len(), 4);
    }

    #[test]
    fn vertex_on_spike_edge_extension_detected() {
        // Vertex (0, -7) lies on the line x = 0 carrying the spike edge
        // (0,0)-(0,1) but is not incident to it.
        let poly = Polygon::new(vec![
            pt(0, 0),
            pt(0, 1),
            pt(-3, 2),
            pt(-4, -5),
            pt(0, -7),
            pt(3, -1),
        ])
        .unwrap();
        let edges = poly.edges();
        let spikes = vec![edges[0].clone()];
        let report = general_position_report(&poly, &spikes);
        assert_eq!(report.vertex_violations.len(), 1);
        assert_eq!(report.vertex_violations[0].0, pt(0, -7));
    }

    #[test]
    fn natural_sectors_partition_directions_around_vertex() {
        let p = spike_m2();
        for v in 0..p.len() {
            let int = Guard::natural(&p, v, NaturalSide::Internal, "i");
            let ext = Guard::natural(&p, v, NaturalSide::External, "e");
            let apex = p.vertex(v).clone();
            for (dx, dy) in [
                (1i64, 0i64),
                (0, 1),
                (-1, 0),
                (0, -1),
                (3, 2),
                (-3, 2),
                (3, -2),
                (-3, -2),
                (1, 5),
                (-5, 1),
            ] {
                let q = Point::new(
                    &apex.x + &crate::geom::Scalar::from_int(dx),
                    &apex.y + &crate::geom::Scalar::from_int(dy),
                );
                // Every direction falls in at least one sector; both only on
                // the shared boundary rays.
                assert!(int.cone_contains(&q) || ext.cone_contains(&q));
                if int.cone_contains(&q) && ext.cone_contains(&q) {
                    let (r1, r2) = int.boundary_rays();
                    assert!(r1.contains(&q) || r2.contains(&q));
                }
            }
        }
    }

    use crate::geom::{Point, Scalar};

    #[test]
    fn natural_internal_contains_interior_points_near_vertex() {
        let p = spike_m2();
        // Pull each vertex slightly toward the polygon's inside by sampling
        // toward the midpoint of the two adjacent vertices, scaled down.
        for v in 0..p.len() {
            let int = Guard::natural(&p, v, NaturalSide::Internal, "i");
            let ext = Guard::natural(&p, v, NaturalSide::External, "e");
            let n = p.len();
            let apex = p.vertex(v);
            let prev = p.vertex((v + n - 1) % n);
            let next = p.vertex((v + 1) % n);
            // Bisector-ish probe: average of unit steps along both edges
            // would need square roots; instead walk a small rational step
            // along each edge and average, which stays inside the angle.
            let eps = Scalar::ratio(1, 1000);
            let step = |to: &Point| {
                Point::new(
                    &apex.x + &(&eps * &(&to.x - &apex.x)),
                    &apex.y + &(&eps * &(&to.y - &apex.y)),
                )
            };
            let a = step(prev);
            let b = step(next);
            let mid = Point::new(
                (&a.x + &b.x) / Scalar::from_int(2),
                (&a.y + &b.y) / Scalar::from_int(2),
            );
            match p.locate(&mid) {
                PointLocation::Inside => {
                    assert!(int.cone_contains(&mid), "vertex {v}");
                    assert!(!ext.cone_contains(&mid), "vertex {v}");
                }
                PointLocation::Outside => {
                    assert!(ext.cone_contains(&mid), "vertex {v}");
                    assert!(!int.cone_contains(&mid), "vertex {v}");
                }
                PointLocation::Boundary => unreachable!("midpoint off the boundary"),
            }
        }
    }
}
