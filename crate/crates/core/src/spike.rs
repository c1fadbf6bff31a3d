//! The lower-bound polygon: m narrow spikes parameterized by (m, w, h,
//! delta) with an explicit coordinate embedding, its spike edges and vertex
//! roles, and ambiguity sample pairs flanking a tip guard's cone.
//!
//! The embedding, with i running from 1 to m:
//!   t_i = ((i-1)w, (i-1)h + h/2)
//!   l_i = ((i-1)w - delta, (i-2)h)
//!   r_i = ((i-1)w, (i-1)h)        for i < m
//!   r_m = ((m-1)w, (m-2)h)
//! so t_i r_i is vertical of height h/2 (h·1.5 for i = m), r_i l_{i+1} is
//! horizontal, l_i and r_i are delta apart horizontally and h vertically,
//! consecutive r's are w apart, and r_m l_1 closes the polygon.

use std::fmt;

use crate::geom::{Line, Point, Scalar, Segment, Sign};
use crate::model::{
    general_position_report, GeneralPositionReport, Guard, NaturalSide, PointLocation, Polygon,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpikeError {
    #[error("spike construction needs m >= 2, got {0}")]
    TooFewSpikes(usize),
    #[error("parameters must satisfy 0 < delta < h < w; violated: {0}")]
    ParameterOrder(&'static str),
    #[error("spike index {index} out of range {min}..={max}")]
    SpikeIndexOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },
    #[error("offset must satisfy 0 < offset < delta/4")]
    OffsetOutOfRange,
    #[error("parameters too degenerate: sample pair fails its inside/outside classification")]
    DegenerateSample,
    #[error("embedding produced an invalid polygon: {0}")]
    InvalidEmbedding(String),
}

/// Parameters (m, w, h, delta) with 0 < delta < h < w and m >= 2; the
/// polygon has n = 3m vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeParams {
    pub m: usize,
    pub w: Scalar,
    pub h: Scalar,
    pub delta: Scalar,
}

impl SpikeParams {
    pub fn new(m: usize, w: Scalar, h: Scalar, delta: Scalar) -> Result<SpikeParams, SpikeError> {
        if m < 2 {
            return Err(SpikeError::TooFewSpikes(m));
        }
        if delta.sign() != Sign::Pos {
            return Err(SpikeError::ParameterOrder("delta <= 0"));
        }
        if delta >= h {
            return Err(SpikeError::ParameterOrder("delta >= h"));
        }
        if h >= w {
            return Err(SpikeError::ParameterOrder("h >= w"));
        }
        Ok(SpikeParams { m, w, h, delta })
    }

    pub fn of_ints(m: usize, w: i64, h: i64, delta: i64) -> Result<SpikeParams, SpikeError> {
        SpikeParams::new(
            m,
            Scalar::from_int(w),
            Scalar::from_int(h),
            Scalar::from_int(delta),
        )
    }

    pub fn n(&self) -> usize {
        3 * self.m
    }
}

/// Role of a spike-polygon vertex: the left base, tip, or right base of
/// spike `i` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    Left(usize),
    Tip(usize),
    Right(usize),
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRole::Left(i) => write!(f, "l{i}"),
            VertexRole::Tip(i) => write!(f, "t{i}"),
            VertexRole::Right(i) => write!(f, "r{i}"),
        }
    }
}

impl VertexRole {
    pub fn parse(s: &str) -> Option<VertexRole> {
        let (kind, idx) = s.split_at(1);
        let i: usize = idx.parse().ok()?;
        match kind {
            "l" => Some(VertexRole::Left(i)),
            "t" => Some(VertexRole::Tip(i)),
            "r" => Some(VertexRole::Right(i)),
            _ => None,
        }
    }
}

/// The constructed polygon with per-vertex roles, in boundary order
/// l_1, t_1, r_1, ..., l_m, t_m, r_m.
#[derive(Debug, Clone)]
pub struct SpikePolygon {
    params: SpikeParams,
    polygon: Polygon,
    roles: Vec<VertexRole>,
}

impl SpikePolygon {
    pub fn build(params: SpikeParams) -> Result<SpikePolygon, SpikeError> {
        let m = params.m;
        let half = |s: &Scalar| s / Scalar::from_int(2);
        let at = |i: usize| Scalar::from_int(i as i64 - 1); // i-1 as scalar
        let mut vertices = Vec::with_capacity(3 * m);
        let mut roles = Vec::with_capacity(3 * m);
        for i in 1..=m {
            let l = Point::new(
                &at(i) * &params.w - &params.delta,
                (&at(i) - &Scalar::one()) * &params.h,
            );
            let t = Point::new(&at(i) * &params.w, &at(i) * &params.h + half(&params.h));
            let r = if i < m {
                Point::new(&at(i) * &params.w, &at(i) * &params.h)
            } else {
                Point::new(&at(m) * &params.w, (&at(m) - &Scalar::one()) * &params.h)
            };
            vertices.push(l);
            roles.push(VertexRole::Left(i));
            vertices.push(t);
            roles.push(VertexRole::Tip(i));
            vertices.push(r);
            roles.push(VertexRole::Right(i));
        }
        let polygon =
            Polygon::new(vertices).map_err(|e| SpikeError::InvalidEmbedding(e.to_string()))?;
        Ok(SpikePolygon {
            params,
            polygon,
            roles,
        })
    }

    pub fn params(&self) -> &SpikeParams {
        &self.params
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    /// Vertex index of l_i / t_i / r_i in the polygon (i is 1-based).
    pub fn left_index(&self, i: usize) -> usize {
        3 * (i - 1)
    }

    pub fn tip_index(&self, i: usize) -> usize {
        3 * (i - 1) + 1
    }

    pub fn right_index(&self, i: usize) -> usize {
        3 * (i - 1) + 2
    }

    pub fn left(&self, i: usize) -> &Point {
        self.polygon.vertex(self.left_index(i))
    }

    pub fn tip(&self, i: usize) -> &Point {
        self.polygon.vertex(self.tip_index(i))
    }

    pub fn right(&self, i: usize) -> &Point {
        self.polygon.vertex(self.right_index(i))
    }

    /// Exactly the 2m edges incident to some tip, in boundary order.
    pub fn spike_edges(&self) -> Vec<Segment> {
        let mut out = Vec::with_capacity(2 * self.m());
        for i in 1..=self.m() {
            out.push(self.polygon.edge(self.left_index(i)));
            out.push(self.polygon.edge(self.tip_index(i)));
        }
        out
    }

    pub fn general_position(&self) -> GeneralPositionReport {
        general_position_report(&self.polygon, &self.spike_edges())
    }

    /// The natural internal guard at tip i.
    pub fn tip_guard(&self, i: usize, key: impl Into<String>) -> Guard {
        Guard::natural(&self.polygon, self.tip_index(i), NaturalSide::Internal, key)
    }

    /// The supporting line of the closing edge r_m l_1.
    pub fn closing_line(&self) -> Line {
        Line::through(self.right(self.m()), self.left(1))
    }

    /// A horizontal ambiguity pair at the mid-height of spike i's base: `a`
    /// just outside the left cone-boundary line of the natural tip guard
    /// (exterior), `b` just right of the spike's vertical line (interior),
    /// both outside that guard's cone.
    pub fn sample_ab_pair(&self, i: usize, offset: &Scalar) -> Result<(Point, Point), SpikeError> {
        if i < 1 || i >= self.m() {
            return Err(SpikeError::SpikeIndexOutOfRange {
                index: i,
                min: 1,
                max: self.m() - 1,
            });
        }
        let quarter_delta = &self.params.delta / Scalar::from_int(4);
        if offset.sign() != Sign::Pos || offset >= &quarter_delta {
            return Err(SpikeError::OffsetOutOfRange);
        }
        let l = self.left(i);
        let r = self.right(i);
        let y_mid = (&l.y + &r.y) / Scalar::from_int(2);
        let left_boundary = Line::through(self.tip(i), l);
        // The left boundary is never horizontal: l_i sits h/2 + h below t_i.
        let x_on_boundary = left_boundary
            .x_at(&y_mid)
            .expect("left boundary not horizontal");
        let a_point = Point::new(&x_on_boundary - offset, y_mid.clone());
        let b_point = Point::new(&r.x + offset, y_mid);

        let guard = self.tip_guard(i, "probe");
        let ok = self.polygon.locate(&a_point) == PointLocation::Outside
            && self.polygon.locate(&b_point) == PointLocation::Inside
            && !guard.cone_contains(&a_point)
            && !guard.cone_contains(&b_point);
        if !ok {
            return Err(SpikeError::DegenerateSample);
        }
        Ok((a_point, b_point))
    }
}
