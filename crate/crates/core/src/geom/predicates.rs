//! Orientation and segment-intersection predicates.

use super::primitives::{Point, Segment};
use super::scalar::Sign;

/// Sign of the cross product `(b - a) x (c - a)`: `Pos` means `c` lies to the
/// left of the directed line `a -> b` (counterclockwise turn), `Zero` means
/// the three points are collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Sign {
    let ux = &b.x - &a.x;
    let uy = &b.y - &a.y;
    let vx = &c.x - &a.x;
    let vy = &c.y - &a.y;
    (ux * vy - uy * vx).sign()
}

/// True iff the closed segments share at least one point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let o1 = orient(s.a(), s.b(), t.a());
    let o2 = orient(s.a(), s.b(), t.b());
    let o3 = orient(t.a(), t.b(), s.a());
    let o4 = orient(t.a(), t.b(), s.b());

    if o1 != o2 && o3 != o4 && !o1.is_zero() && !o2.is_zero() && !o3.is_zero() && !o4.is_zero() {
        return true;
    }
    (o1.is_zero() && s.contains(t.a()))
        || (o2.is_zero() && s.contains(t.b()))
        || (o3.is_zero() && t.contains(s.a()))
        || (o4.is_zero() && t.contains(s.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, Scalar};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(2, 0)), Sign::Zero);
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), Sign::Pos);
        // sign(1*0 - 3*(-39)) = +1
        assert_eq!(orient(&pt(39, 0), &pt(40, 3), &pt(0, 0)), Sign::Pos);
    }

    #[test]
    fn crossing_and_touching_segments() {
        let s = Segment::new(pt(0, 0), pt(4, 4)).unwrap();
        let t = Segment::new(pt(0, 4), pt(4, 0)).unwrap();
        assert!(segments_intersect(&s, &t));

        let u = Segment::new(pt(4, 4), pt(8, 0)).unwrap();
        assert!(segments_intersect(&s, &u)); // share an endpoint

        let v = Segment::new(pt(5, 5), pt(8, 8)).unwrap();
        assert!(!segments_intersect(&s, &v)); // collinear, disjoint

        let w = Segment::new(pt(2, 2), pt(9, 9)).unwrap();
        assert!(segments_intersect(&s, &w)); // collinear overlap
    }

    /// Recompute orient with pure big-integer arithmetic after clearing all
    /// denominators; the rational route must match exactly.
    fn orient_bigint_oracle(
        a: &crate::geom::Point,
        b: &crate::geom::Point,
        c: &crate::geom::Point,
    ) -> i8 {
        let scale: BigInt = [&a.x, &a.y, &b.x, &b.y, &c.x, &c.y]
            .iter()
            .map(|s| s.denom().clone())
            .product();
        let ix = |s: &Scalar| s.numer() * (&scale / s.denom());
        let (ax, ay) = (ix(&a.x), ix(&a.y));
        let (bx, by) = (ix(&b.x), ix(&b.y));
        let (cx, cy) = (ix(&c.x), ix(&c.y));
        let det = (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax);
        use num_traits::Zero;
        if det.is_zero() {
            0
        } else if det > BigInt::zero() {
            1
        } else {
            -1
        }
    }

    proptest! {
        #[test]
        fn orient_antisymmetric_in_last_two_args(
            ax in -50i64..50, ay in -50i64..50,
            bx in -50i64..50, by in -50i64..50,
            cx in -50i64..50, cy in -50i64..50,
        ) {
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            prop_assert_eq!(orient(&a, &b, &c), orient(&a, &c, &b).flip());
        }

        #[test]
        fn orient_matches_independent_bigint_route(
            axn in -40i64..40, axd in 1i64..7, ayn in -40i64..40, ayd in 1i64..7,
            bxn in -40i64..40, bxd in 1i64..7, byn in -40i64..40, byd in 1i64..7,
            cxn in -40i64..40, cxd in 1i64..7, cyn in -40i64..40, cyd in 1i64..7,
        ) {
            let a = crate::geom::pt_r(axn, axd, ayn, ayd);
            let b = crate::geom::pt_r(bxn, bxd, byn, byd);
            let c = crate::geom::pt_r(cxn, cxd, cyn, cyd);
            prop_assert_eq!(orient(&a, &b, &c).as_i8(), orient_bigint_oracle(&a, &b, &c));
        }

        #[test]
        fn orient_zero_iff_point_solves_line_equation(
            ax in -20i64..20, ay in -20i64..20,
            bx in -20i64..20, by in -20i64..20,
            cx in -20i64..20, cy in -20i64..20,
        ) {
            prop_assume!(ax != bx || ay != by);
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            let line = crate::geom::Line::through(&a, &b);
            prop_assert_eq!(orient(&a, &b, &c) == Sign::Zero, line.contains(&c));
        }
    }
}
