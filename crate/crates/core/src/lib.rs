//! loclab: an exact-arithmetic toolkit for the wireless localization model.
//!
//! Guards broadcast unique keys over angular cones; a device decides whether
//! it is inside a secure polygon by evaluating a monotone AND/OR formula
//! over the keys it hears. This crate decides such localization schemes
//! exactly over line-arrangement cells, builds the spike polygon behind the
//! vertex-guard lower bound, computes the quantitative bounds of its
//! analysis, and searches for small guard placements.

pub mod arrangement;
pub mod bounds;
pub mod geom;
pub mod model;
pub mod search;
pub mod spike;

pub use arrangement::{
    build_labeling, collect_lines, decide_localizable, enumerate_cells, label_cells,
    synthesize_dnf, verify_localization, AmbiguityWitness, ArrangementError, Cell, CellInfo,
    CellLabel, CellLabeling, FormulaWitness, LineSet, Localizability, SynthesisError,
    VerifyVerdict, Workers,
};
pub use bounds::{
    cone_separation_max, contribution, guard_ledger, max_contribution_from, max_tip_contribution,
    min_separators, vertex_guard_lower_bound, BoundsError, ContributionReport,
};
pub use geom::{Direction, GeomError, Line, LineIntersection, Point, Ray, Scalar, Segment, Sign};
pub use model::{
    general_position_report, key_set_at, GeneralPositionReport, Guard, GuardError, KeySet,
    MonotoneFormula, NaturalSide, PointLocation, Polygon, PolygonError,
};
pub use search::{
    covers_all_edges, enumerate_canonical_guards, general_solution, min_vertex_guards,
    vertex_solution, SearchError, SearchReport, Solution, SolutionKind,
};
pub use spike::{SpikeError, SpikeParams, SpikePolygon, VertexRole};
