//! Lines in canonical integer form `ax + by = c` with gcd(a, b, c) = 1 and
//! leading nonzero coefficient positive, so coincident supporting lines
//! compare equal. The arrangement verifier keys cells by this identity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::primitives::{Direction, Point, Ray, Segment};
use super::scalar::{Scalar, Sign};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// Result of intersecting two lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineIntersection {
    Point(Point),
    Parallel,
    Identical,
}

impl Line {
    /// Line through `p` with direction `dir`.
    pub fn from_point_dir(p: &Point, dir: &Direction) -> Line {
        let (dx, dy) = dir.raw();
        // Normal (dy, -dx); c fixed by the anchor. Clear denominators before
        // reducing.
        let a = dy * p.x.denom() * p.y.denom();
        let b = -(dx * p.x.denom() * p.y.denom());
        let c = dy * p.x.numer() * p.y.denom() - dx * p.y.numer() * p.x.denom();
        Line::canonical(a, b, c)
    }

    /// Line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Line {
        let dir = Direction::between(p, q).expect("distinct points");
        Line::from_point_dir(p, &dir)
    }

    pub fn of_segment(s: &Segment) -> Line {
        Line::through(s.a(), s.b())
    }

    pub fn of_ray(r: &Ray) -> Line {
        Line::from_point_dir(&r.origin, &r.dir)
    }

    fn canonical(a: BigInt, b: BigInt, c: BigInt) -> Line {
        debug_assert!(!(a.is_zero() && b.is_zero()));
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        let flip = if a.is_zero() {
            b.is_negative()
        } else {
            a.is_negative()
        };
        if flip {
            a = -a;
            b = -b;
            c = -c;
        }
        Line { a, b, c }
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    /// Sign of `a*x + b*y - c` under the canonical coefficients;
    /// deterministic across runs.
    pub fn side_of(&self, p: &Point) -> Sign {
        self.eval(p).sign()
    }

    fn eval(&self, p: &Point) -> Scalar {
        Scalar::from_bigint(self.a.clone()) * &p.x + Scalar::from_bigint(self.b.clone()) * &p.y
            - Scalar::from_bigint(self.c.clone())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.side_of(p) == Sign::Zero
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// `y` value at a given `x`; None for vertical lines.
    pub fn y_at(&self, x: &Scalar) -> Option<Scalar> {
        if self.is_vertical() {
            return None;
        }
        let num = Scalar::from_bigint(self.c.clone()) - Scalar::from_bigint(self.a.clone()) * x;
        Some(num / Scalar::from_bigint(self.b.clone()))
    }

    /// `x` coordinate of a vertical line.
    pub fn x_of_vertical(&self) -> Option<Scalar> {
        if !self.is_vertical() {
            return None;
        }
        Some(Scalar::from_bigint(self.c.clone()) / Scalar::from_bigint(self.a.clone()))
    }

    /// `x` value at a given `y`; None for horizontal lines.
    pub fn x_at(&self, y: &Scalar) -> Option<Scalar> {
        if self.a.is_zero() {
            return None;
        }
        let num = Scalar::from_bigint(self.c.clone()) - Scalar::from_bigint(self.b.clone()) * y;
        Some(num / Scalar::from_bigint(self.a.clone()))
    }

    pub fn intersection(&self, other: &Line) -> LineIntersection {
        let det = &self.a * &other.b - &other.a * &self.b;
        if det.is_zero() {
            return if self == other {
                LineIntersection::Identical
            } else {
                LineIntersection::Parallel
            };
        }
        let det = Scalar::from_bigint(det);
        let x = Scalar::from_bigint(&self.c * &other.b - &other.c * &self.b) / det.clone();
        let y = Scalar::from_bigint(&self.a * &other.c - &other.a * &self.c) / det;
        LineIntersection::Point(Point::new(x, y))
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use proptest::prelude::*;

    #[test]
    fn canonical_axes() {
        let x_axis = Line::through(&pt(0, 0), &pt(1, 0)); // y = 0
        assert_eq!(
            x_axis.coefficients(),
            (&BigInt::from(0), &BigInt::from(1), &BigInt::from(0))
        );
        let y_axis = Line::through(&pt(0, 0), &pt(0, 1)); // x = 0
        assert_eq!(
            y_axis.coefficients(),
            (&BigInt::from(1), &BigInt::from(0), &BigInt::from(0))
        );
    }

    #[test]
    fn side_of_follows_canonical_coefficients() {
        let y_axis = Line::through(&pt(0, 0), &pt(0, 1));
        assert_eq!(y_axis.side_of(&pt(1, 0)), Sign::Pos);
        assert_eq!(y_axis.side_of(&pt(0, 7)), Sign::Zero);
        assert_eq!(y_axis.side_of(&pt(-3, 2)), Sign::Neg);
    }

    #[test]
    fn closing_edge_line_of_the_m2_spike() {
        // Through (-1,-2) and (40,0): canonical 2x - 41y = 80.
        let l = Line::through(&pt(-1, -2), &pt(40, 0));
        assert_eq!(
            l.coefficients(),
            (&BigInt::from(2), &BigInt::from(-41), &BigInt::from(80))
        );
        assert_eq!(l.side_of(&pt(0, 0)), Sign::Neg);
    }

    #[test]
    fn intersection_examples() {
        let x_axis = Line::through(&pt(0, 0), &pt(1, 0));
        let y_axis = Line::through(&pt(0, 0), &pt(0, 1));
        assert_eq!(
            x_axis.intersection(&y_axis),
            LineIntersection::Point(pt(0, 0))
        );

        let y1 = Line::through(&pt(0, 1), &pt(1, 1));
        assert_eq!(x_axis.intersection(&y1), LineIntersection::Parallel);

        // line((39,0),(40,3)) meets x = 40 at (40, 3)
        let spike = Line::through(&pt(39, 0), &pt(40, 3));
        let x40 = Line::through(&pt(40, 0), &pt(40, 1));
        assert_eq!(spike.intersection(&x40), LineIntersection::Point(pt(40, 3)));
    }

    #[test]
    fn identical_lines_from_different_point_pairs() {
        let l1 = Line::through(&pt(39, 0), &pt(40, 3));
        let l2 = Line::through(&pt(41, 6), &pt(38, -3));
        assert_eq!(l1, l2);
        assert_eq!(l1.intersection(&l2), LineIntersection::Identical);
    }

    #[test]
    fn intersection_lies_on_both_lines() {
        let l1 = Line::through(&pt(0, 0), &pt(3, 5));
        let l2 = Line::through(&pt(1, 0), &pt(-2, 7));
        match l1.intersection(&l2) {
            LineIntersection::Point(p) => {
                assert_eq!(l1.side_of(&p), Sign::Zero);
                assert_eq!(l2.side_of(&p), Sign::Zero);
            }
            other => panic!("expected a point, got {:?}", other),
        }
    }

    proptest! {
        #[test]
        fn any_two_point_pairs_on_a_line_give_equal_canonical_forms(
            ax in -20i64..20, ay in -20i64..20,
            dx in -9i64..10, dy in -9i64..10,
            t1 in 1i64..30, t2 in -30i64..-1, t3 in 31i64..60,
        ) {
            prop_assume!(dx != 0 || dy != 0);
            let p0 = pt(ax, ay);
            let p1 = pt(ax + t1 * dx, ay + t1 * dy);
            let p2 = pt(ax + t2 * dx, ay + t2 * dy);
            let p3 = pt(ax + t3 * dx, ay + t3 * dy);
            let la = Line::through(&p0, &p1);
            let lb = Line::through(&p2, &p3);
            prop_assert_eq!(la, lb);
        }
    }
}
