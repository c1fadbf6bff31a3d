//! Quantitative objects behind the vertex-guard lower bound: ray
//! contributions against a tip guard's cone, the double-cone maximum, the
//! separator-count bound, and the guard-count ledger.

use crate::geom::{Line, LineIntersection, Point, Ray, Scalar, Sign};
use crate::spike::SpikePolygon;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("spike index {index} out of range {min}..={max}")]
    SpikeIndexOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },
    #[error("n must be a positive multiple of 3, got {0}")]
    NotMultipleOfThree(u64),
    #[error("n0 = {n0} exceeds the spike count n/3 = {max}")]
    TooManyTipGuards { n0: u64, max: u64 },
}

/// A ray's capacity to help separate the ambiguity regions of spike i: the
/// difference in y between its crossings of the tip guard's two boundary
/// rays, 0 if either boundary ray is missed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContributionReport {
    pub ray: Ray,
    pub left_hit: Option<Point>,
    pub right_hit: Option<Point>,
    pub value: Scalar,
}

fn check_index(i: usize, min: usize, max: usize) -> Result<(), BoundsError> {
    if i < min || i > max {
        return Err(BoundsError::SpikeIndexOutOfRange { index: i, min, max });
    }
    Ok(())
}

/// Intersect the ray's supporting line with one boundary ray of the tip
/// guard's cone; a hit exactly at the apex counts.
fn boundary_hit(ray_line: &Line, boundary: &Ray) -> Option<Point> {
    match ray_line.intersection(&Line::of_ray(boundary)) {
        LineIntersection::Point(p) => boundary.contains(&p).then_some(p),
        LineIntersection::Parallel => None,
        // Degenerate: the ray runs along the boundary line itself.
        LineIntersection::Identical => None,
    }
}

/// Contribution of `ray` to separating the ambiguity regions of spike `i`:
/// intersect its supporting line with the two boundary rays of the natural
/// internal tip guard at t_i (from t_i through l_i and through r_i, extended
/// beyond) and take the absolute y-difference of the hits.
pub fn contribution(
    ray: &Ray,
    sp: &SpikePolygon,
    i: usize,
) -> Result<ContributionReport, BoundsError> {
    check_index(i, 1, sp.m())?;
    let tip = sp.tip(i);
    let left_boundary = Ray::through(tip.clone(), sp.left(i)).expect("distinct vertices");
    let right_boundary = Ray::through(tip.clone(), sp.right(i)).expect("distinct vertices");
    let ray_line = Line::of_ray(ray);
    let left_hit = boundary_hit(&ray_line, &left_boundary);
    let right_hit = boundary_hit(&ray_line, &right_boundary);
    let value = match (&left_hit, &right_hit) {
        (Some(l), Some(r)) => (&l.y - &r.y).abs(),
        _ => Scalar::zero(),
    };
    Ok(ContributionReport {
        ray: ray.clone(),
        left_hit,
        right_hit,
        value,
    })
}

/// The maximal contribution among the four rays bounding the double-cone of
/// rays from `p` through polygon vertices: through t_{i-1}, l_{i-1}, t_{i+1}
/// and either l_{i+1} or r_m depending on p's side of line(l_{i+1}, r_m).
/// Valid for interior spikes 2 <= i <= m-1; `p` is expected inside or on the
/// boundary of the tip guard's cone.
pub fn max_contribution_from(
    p: &Point,
    sp: &SpikePolygon,
    i: usize,
) -> Result<(Scalar, Ray), BoundsError> {
    check_index(i, 2, sp.m() - 1)?;
    let split = Line::through(sp.left(i + 1), sp.right(sp.m()));
    // Above the split line the nearer base vertex bounds the cone from
    // below; on or below it, r_m does.
    let fourth = if is_above(&split, p) {
        sp.left(i + 1)
    } else {
        sp.right(sp.m())
    };
    let targets = [sp.tip(i + 1), sp.tip(i - 1), sp.left(i - 1), fourth];
    let mut best: Option<(Scalar, Ray)> = None;
    for target in targets {
        if target == p {
            continue;
        }
        let ray = Ray::through(p.clone(), target).expect("distinct points");
        let report = contribution(&ray, sp, i)?;
        match &best {
            Some((v, _)) if *v >= report.value => {}
            _ => best = Some((report.value, ray)),
        }
    }
    Ok(best.expect("at least one bounding ray"))
}

/// True iff `p` lies strictly on the +y side of the (non-vertical) line.
fn is_above(line: &Line, p: &Point) -> bool {
    let (_, b, _) = line.coefficients();
    let side = line.side_of(p);
    use num_traits::Signed;
    match side {
        Sign::Zero => false,
        Sign::Pos => b.is_positive(),
        Sign::Neg => b.is_negative(),
    }
}

/// The maximal contribution achievable by any vertex ray from inside the
/// tip guard's cone of spike i; on this embedding it equals
/// 2.5 h delta / (delta + w), attained from p = l_i by the ray through
/// t_{i+1}.
pub fn cone_separation_max(sp: &SpikePolygon, i: usize) -> Result<Scalar, BoundsError> {
    Ok(max_contribution_from(sp.left(i), sp, i)?.0)
}

/// Like `cone_separation_max` but also reports the achieving ray.
pub fn cone_separation_max_ray(sp: &SpikePolygon, i: usize) -> Result<(Scalar, Ray), BoundsError> {
    max_contribution_from(sp.left(i), sp, i)
}

/// Closed form 2.5 h delta / (delta + w) of the maximal contribution; the
/// geometric computation must reproduce it exactly.
pub fn max_tip_contribution(sp: &SpikePolygon) -> Scalar {
    let p = sp.params();
    Scalar::ratio(5, 2) * &p.h * &p.delta / (&p.delta + &p.w)
}

/// The exact rational threshold (h - delta) / cone_separation_max: any set
/// of rays separating the ambiguity regions from points other than the
/// spike's own vertices must contribute in total at least h - delta.
pub fn separation_threshold(sp: &SpikePolygon, i: usize) -> Result<Scalar, BoundsError> {
    let max = cone_separation_max(sp, i)?;
    let p = sp.params();
    Ok((&p.h - &p.delta) / max)
}

/// Smallest integer strictly greater than the separation threshold.
pub fn min_separators(sp: &SpikePolygon, i: usize) -> Result<u64, BoundsError> {
    let threshold = separation_threshold(sp, i)?;
    let k = threshold.floor_int() + 1u32;
    Ok(u64::try_from(&k).expect("separator count fits in u64"))
}

/// The guard-count ledger: with n0 >= 1 natural tip guards the solution
/// needs at least n0 + (n0 - 1) + (2n/3 - 2n0) = 2n/3 - 1 guards; with
/// n0 = 0 it needs at least 2n/3.
pub fn guard_ledger(n: u64, n0: u64) -> Result<u64, BoundsError> {
    if n == 0 || n % 3 != 0 {
        return Err(BoundsError::NotMultipleOfThree(n));
    }
    let spikes = n / 3;
    if n0 > spikes {
        return Err(BoundsError::TooManyTipGuards { n0, max: spikes });
    }
    let two_thirds = 2 * n / 3;
    Ok(if n0 == 0 {
        two_thirds
    } else {
        n0 + (n0 - 1) + (two_thirds - 2 * n0)
    })
}

/// floor(2n/3) - 1: the vertex-guard lower bound.
pub fn vertex_guard_lower_bound(n: u64) -> u64 {
    2 * n / 3 - 1
}
