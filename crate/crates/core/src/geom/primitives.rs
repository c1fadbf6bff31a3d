//! Points, directions, rays and segments over exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, thiserror::Error)]
pub enum GeomError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("segment endpoints must be distinct")]
    DegenerateSegment,
}

/// A point in the plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Point, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Point;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a point as a two-element array [x, y]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Point, A::Error> {
                let x = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let y = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<Scalar>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Point::new(x, y))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// A direction, compared up to positive scaling; opposite directions are
/// distinct. Stored in primitive integer form (coprime integer components).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    dx: BigInt,
    dy: BigInt,
}

impl Direction {
    pub fn new(dx: Scalar, dy: Scalar) -> Result<Direction, GeomError> {
        if dx.is_zero() && dy.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        // Clear denominators, then divide by the gcd; sign is preserved, so
        // positive multiples normalize to the same representative.
        let nx = dx.numer() * dy.denom();
        let ny = dy.numer() * dx.denom();
        let g = nx.gcd(&ny);
        Ok(Direction {
            dx: nx / &g,
            dy: ny / &g,
        })
    }

    pub fn of_ints(dx: i64, dy: i64) -> Direction {
        Direction::new(Scalar::from_int(dx), Scalar::from_int(dy)).expect("nonzero direction")
    }

    /// Direction from `from` toward `to`; error if the points coincide.
    pub fn between(from: &Point, to: &Point) -> Result<Direction, GeomError> {
        Direction::new(&to.x - &from.x, &to.y - &from.y)
    }

    pub fn dx(&self) -> Scalar {
        Scalar::from_bigint(self.dx.clone())
    }

    pub fn dy(&self) -> Scalar {
        Scalar::from_bigint(self.dy.clone())
    }

    pub fn opposite(&self) -> Direction {
        Direction {
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    /// Sign of the cross product `self × other`.
    pub fn cross(&self, other: &Direction) -> Sign {
        sign_of_bigint(&(&self.dx * &other.dy - &self.dy * &other.dx))
    }

    /// Sign of `self × v` for an arbitrary rational vector `v`.
    pub fn cross_vec(&self, vx: &Scalar, vy: &Scalar) -> Sign {
        (&self.dx() * vy - &self.dy() * vx).sign()
    }

    /// Sign of the dot product with a rational vector.
    pub fn dot_vec(&self, vx: &Scalar, vy: &Scalar) -> Sign {
        (&self.dx() * vx + &self.dy() * vy).sign()
    }

    pub(crate) fn raw(&self) -> (&BigInt, &BigInt) {
        (&self.dx, &self.dy)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dir({}, {})", self.dx, self.dy)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.dx())?;
        t.serialize_element(&self.dy())?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Direction, D::Error> {
        let p = Point::deserialize(deserializer)?;
        Direction::new(p.x, p.y).map_err(de::Error::custom)
    }
}

fn sign_of_bigint(n: &BigInt) -> Sign {
    if n.is_zero() {
        Sign::Zero
    } else if n.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// A ray: origin plus direction, including the origin itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    pub origin: Point,
    pub dir: Direction,
}

impl Ray {
    pub fn new(origin: Point, dir: Direction) -> Ray {
        Ray { origin, dir }
    }

    pub fn through(origin: Point, target: &Point) -> Result<Ray, GeomError> {
        let dir = Direction::between(&origin, target)?;
        Ok(Ray { origin, dir })
    }

    /// True iff `p = origin + t*dir` for some exact `t >= 0`.
    pub fn contains(&self, p: &Point) -> bool {
        let vx = &p.x - &self.origin.x;
        let vy = &p.y - &self.origin.y;
        self.dir.cross_vec(&vx, &vy) == Sign::Zero && self.dir.dot_vec(&vx, &vy) != Sign::Neg
    }
}

/// A segment with distinct endpooints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Segment, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn has_endpoint(&self, p: &Point) -> bool {
        &self.a == p || &self.b == p
    }

    /// True iff `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        if super::predicates::orient(&self.a, &self.b, p) != Sign::Zero {
            return false;
        }
        let dx = &self.b.x - &self.a.x;
        let dy = &self.b.y - &self.a.y;
        let px = &p.x - &self.a.x;
        let py = &p.y - &self.a.y;
        let dot = &dx * &px + &dy * &py;
        let len2 = &dx * &dx + &dy * &dy;
        dot.sign() != Sign::Neg && dot <= len2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;

    #[test]
    fn direction_positive_scaling_is_identity() {
        let a = Direction::new(Scalar::ratio(1, 2), Scalar::ratio(3, 2)).unwrap();
        let b = Direction::of_ints(2, 6);
        assert_eq!(a, b);
        assert_ne!(a, a.opposite());
    }

    #[test]
    fn zero_direction_rejected() {
        assert_eq!(
            Direction::new(Scalar::zero(), Scalar::zero()),
            Err(GeomError::ZeroDirection)
        );
    }

    #[test]
    fn ray_contains_origin_and_forward_points() {
        let r = Ray::new(pt(0, 0), Direction::of_ints(1, 0));
        assert!(r.contains(&pt(5, 0)));
        assert!(r.contains(&pt(0, 0)));
        assert!(!r.contains(&pt(-1, 0)));
        assert!(!r.contains(&pt(5, 1)));
    }

    #[test]
    fn ray_contains_spike_instance() {
        // t_3 = (80, 5) toward l_2 = (39, 0) in the m=4 spike polygon; the
        // target sits at parameter t = 1 exactly.
        let r = Ray::new(pt(80, 5), Direction::of_ints(-41, -5));
        assert!(r.contains(&pt(39, 0)));
    }

    #[test]
    fn segment_contains_endpoints_and_midpoint() {
        let s = Segment::new(pt(0, 0), pt(2, 2)).unwrap();
        assert!(s.contains(&pt(0, 0)));
        assert!(s.contains(&pt(1, 1)));
        assert!(s.contains(&pt(2, 2)));
        assert!(!s.contains(&pt(3, 3)));
        assert!(!s.contains(&pt(1, 0)));
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(pt(1, 1), pt(1, 1)).is_err());
    }
}
