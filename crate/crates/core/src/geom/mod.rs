//! Exact rational geometry kernel: scalars, points, directions, lines, rays,
//! segments and the predicates built on them. No floating point anywhere;
//! the construction uses near-degenerate slivers where doubles misclassify.

mod line;
pub mod predicates;
mod primitives;
mod scalar;

pub use line::{Line, LineIntersection};
pub use predicates::orient;
pub use primitives::{Direction, GeomError, Point, Ray, Segment};
pub use scalar::{ParseScalarError, Scalar, Sign};

/// Integer point, convenient in tests and constructions.
pub fn pt(x: i64, y: i64) -> Point {
    Point::new(Scalar::from_int(x), Scalar::from_int(y))
}

/// Rational point `(xn/xd, yn/yd)`.
pub fn pt_r(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
    Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd))
}
