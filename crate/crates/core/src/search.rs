//! Verified guard placements: the vertex-guard scheme for the spike polygon,
//! a general-position scheme that drops below the vertex lower bound, and an
//! exhaustive minimal vertex-guard search over canonical candidates.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::arrangement::{
    build_labeling, collect_lines, decide_against_labeling, enumerate_cells, synthesize_dnf,
    verify_against_labeling, ArrangementError, Cell, FormulaWitness, Localizability,
    SynthesisError, Workers,
};
use crate::geom::{Direction, Line, Point, Segment};
use crate::model::{Guard, MonotoneFormula, PointLocation, Polygon};
use crate::spike::SpikePolygon;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error("constructed solution failed verification: {0:?}")]
    VerificationFailed(FormulaWitness),
    #[error("placement scheme failed: {0}")]
    SchemeFailed(String),
}

/// Kind of a verified solution: every apex a polygon vertex, or arbitrary
/// apex points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Vertex,
    General,
}

/// A guard set together with a monotone formula that verifies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub guards: Vec<Guard>,
    pub formula: MonotoneFormula,
    pub kind: SolutionKind,
}

impl Solution {
    pub fn size(&self) -> usize {
        self.guards.len()
    }
}

/// Every polygon edge must lie on some selected guard's broadcast boundary
/// line; a guard set that misses an edge cannot localize.
pub fn covers_all_edges(polygon: &Polygon, guards: &[Guard]) -> bool {
    polygon
        .edges()
        .iter()
        .all(|e| guards.iter().any(|g| g.covers(e)))
}

/// For each polygon edge, how many guard boundary rays span it entirely
/// (same supporting line and both endpoints on the ray).
pub fn edge_ray_span_counts(polygon: &Polygon, guards: &[Guard]) -> Vec<usize> {
    polygon
        .edges()
        .iter()
        .map(|e| {
            guards
                .iter()
                .flat_map(|g| {
                    let (r1, r2) = g.boundary_rays();
                    [r1, r2]
                })
                .filter(|r| r.contains(e.a()) && r.contains(e.b()))
                .count()
        })
        .collect()
}

fn finish_solution(
    polygon: &Polygon,
    guards: Vec<Guard>,
    kind: SolutionKind,
    workers: Workers,
) -> Result<Solution, SearchError> {
    let labeling = build_labeling(polygon, &guards, workers)?;
    let formula = synthesize_dnf(&labeling)?;
    let verdict = verify_against_labeling(&labeling, &formula);
    if !verdict.ok {
        return Err(SearchError::VerificationFailed(verdict.witness.unwrap()));
    }
    Ok(Solution {
        guards,
        formula,
        kind,
    })
}

/// The vertex solution of size 2m = 2n/3: natural internal tip guards, a
/// quadrant guard at each r_i separating that spike's ambiguity regions and
/// covering the horizontal edge, and one half-plane guard along the closing
/// edge.
pub fn vertex_solution(sp: &SpikePolygon) -> Result<Solution, SearchError> {
    vertex_solution_with(sp, Workers::default())
}

pub fn vertex_solution_with(sp: &SpikePolygon, workers: Workers) -> Result<Solution, SearchError> {
    let m = sp.m();
    let mut guards = Vec::with_capacity(2 * m);
    for i in 1..=m {
        guards.push(sp.tip_guard(i, format!("t{i}")));
    }
    for i in 1..m {
        let base = Guard::spanning(
            sp.right(i).clone(),
            Direction::of_ints(0, -1),
            Direction::of_ints(1, 0),
            format!("b{i}"),
        )
        .expect("quadrant directions are valid");
        guards.push(base);
    }
    guards.push(closing_half_plane(sp, "close"));
    finish_solution(sp.polygon(), guards, SolutionKind::Vertex, workers)
}

/// Half-plane guard at r_m whose boundary is the closing edge's line,
/// broadcasting over the side containing the polygon.
fn closing_half_plane(sp: &SpikePolygon, key: &str) -> Guard {
    let r_m = sp.right(sp.m()).clone();
    let up_along = Direction::between(sp.left(1), &r_m).expect("distinct vertices");
    let down_along = up_along.opposite();
    Guard::spanning(r_m, up_along, down_along, key).expect("half-plane directions are valid")
}

/// Interior side of a polygon edge relative to a ray direction along its
/// supporting line: true iff the interior lies to the left of the ray.
fn interior_is_left_of(polygon: &Polygon, edge_idx: usize, ray_dir: &Direction) -> bool {
    let e = polygon.edge(edge_idx);
    let edge_dir = Direction::between(e.a(), e.b()).expect("edge endpoints distinct");
    let interior_left_of_edge = polygon.is_ccw();
    if &edge_dir == ray_dir {
        interior_left_of_edge
    } else {
        debug_assert_eq!(edge_dir.opposite(), *ray_dir);
        !interior_left_of_edge
    }
}

/// A guard candidate whose boundary rays each span one whole polygon edge.
/// Crossing a boundary edge flips inside/outside, and the only key that can
/// change there belongs to the guard holding that edge's line, so a viable
/// guard must broadcast over the interior side along every edge it holds.
/// Near its d1 ray a sector occupies the left side and near its d2 ray the
/// right side, which forces the sector outright: a candidate exists only
/// when the required interior sides of its two edges disagree in handedness.
#[derive(Debug, Clone)]
struct EdgeGuard {
    apex: Point,
    d1: Direction,
    d2: Direction,
}

impl EdgeGuard {
    fn realize(&self, key: impl Into<String>) -> Guard {
        Guard::spanning(self.apex.clone(), self.d1.clone(), self.d2.clone(), key)
            .expect("edge-guard directions are never positive-parallel")
    }
}

/// Direction of the ray from `apex` that spans the whole edge, or None when
/// the apex lies strictly inside the edge's span.
fn spanning_ray_dir(apex: &Point, e: &Segment) -> Option<Direction> {
    if apex == e.a() {
        return Direction::between(apex, e.b()).ok();
    }
    if apex == e.b() {
        return Direction::between(apex, e.a()).ok();
    }
    let da = Direction::between(apex, e.a()).ok()?;
    let db = Direction::between(apex, e.b()).ok()?;
    (da == db).then_some(da)
}

/// The guard pairing two edges: apex at the intersection of their supporting
/// lines, rays spanning both edges, sector forced onto the interior sides.
/// None when the lines are parallel, the apex falls inside a span, or the
/// interior-side requirements clash.
fn edge_pair_guard(polygon: &Polygon, e1: usize, e2: usize) -> Option<EdgeGuard> {
    let s1 = polygon.edge(e1);
    let s2 = polygon.edge(e2);
    let apex = match Line::of_segment(&s1).intersection(&Line::of_segment(&s2)) {
        crate::geom::LineIntersection::Point(p) => p,
        _ => return None,
    };
    let u = spanning_ray_dir(&apex, &s1)?;
    let v = spanning_ray_dir(&apex, &s2)?;
    let pu = interior_is_left_of(polygon, e1, &u);
    let pv = interior_is_left_of(polygon, e2, &v);
    let (d1, d2) = match (pu, pv) {
        (true, false) => (u, v),
        (false, true) => (v, u),
        _ => return None,
    };
    Some(EdgeGuard { apex, d1, d2 })
}

/// The half-plane guard covering a single edge: apex on the supporting line
/// one edge-length beyond the first endpoint, broadcasting the interior
/// side.
fn edge_half_plane_guard(polygon: &Polygon, e: usize) -> EdgeGuard {
    let s = polygon.edge(e);
    let apex = Point::new(
        &(&s.a().x + &s.a().x) - &s.b().x,
        &(&s.a().y + &s.a().y) - &s.b().y,
    );
    let u = Direction::between(&apex, s.b()).expect("distinct");
    let (d1, d2) = if interior_is_left_of(polygon, e, &u) {
        (u.clone(), u.opposite())
    } else {
        (u.opposite(), u)
    };
    EdgeGuard { apex, d1, d2 }
}

/// Per-cell membership masks for a guard list, with every guard boundary
/// line required to lie in the (edge-line) arrangement the cells came from.
fn membership_column(guard: &EdgeGuard, cells: &[Cell]) -> Vec<bool> {
    let g = guard.realize("probe");
    cells
        .iter()
        .map(|c| g.cone_contains(&c.representative))
        .collect()
}

/// Backtracking state for the edge-matching search.
struct MatchingSearch<'a> {
    n: usize,
    pair_guards: Vec<Vec<(usize, usize)>>, // per edge: (partner, candidate index)
    singles: Vec<usize>,                   // per edge: candidate index of its half-plane
    candidates: Vec<EdgeGuard>,
    membership: Vec<Vec<bool>>, // per candidate, per cell
    inside: &'a [bool],
    extra: Option<Vec<bool>>, // membership of a fixed extra guard
    allow_single: bool,
}

impl MatchingSearch<'_> {
    /// First matching (in deterministic order) whose induced key sets pass
    /// the monotone-localizability subset test.
    fn run(&self) -> Option<Vec<usize>> {
        let mut matched = vec![false; self.n];
        let mut chosen: Vec<usize> = Vec::new();
        let mut single_used = !self.allow_single;
        self.recurse(&mut matched, &mut chosen, &mut single_used)
    }

    fn recurse(
        &self,
        matched: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        single_used: &mut bool,
    ) -> Option<Vec<usize>> {
        let e = match (0..self.n).find(|&e| !matched[e]) {
            Some(e) => e,
            None => return self.test(chosen).then(|| chosen.clone()),
        };
        matched[e] = true;
        for &(partner, cand) in &self.pair_guards[e] {
            if matched[partner] {
                continue;
            }
            matched[partner] = true;
            chosen.push(cand);
            if let Some(found) = self.recurse(matched, chosen, single_used) {
                return Some(found);
            }
            chosen.pop();
            matched[partner] = false;
        }
        if !*single_used {
            *single_used = true;
            chosen.push(self.singles[e]);
            if let Some(found) = self.recurse(matched, chosen, single_used) {
                return Some(found);
            }
            chosen.pop();
            *single_used = false;
        }
        matched[e] = false;
        None
    }

    fn test(&self, chosen: &[usize]) -> bool {
        debug_assert!(chosen.len() <= 63);
        let cells = self.inside.len();
        let mut inside_masks: BTreeSet<u64> = BTreeSet::new();
        let mut outside_masks: BTreeSet<u64> = BTreeSet::new();
        for c in 0..cells {
            let mut mask = 0u64;
            for (bit, &cand) in chosen.iter().enumerate() {
                if self.membership[cand][c] {
                    mask |= 1 << bit;
                }
            }
            if let Some(extra) = &self.extra {
                if extra[c] {
                    mask |= 1 << chosen.len();
                }
            }
            if self.inside[c] {
                inside_masks.insert(mask);
            } else {
                outside_masks.insert(mask);
            }
        }
        inside_masks
            .iter()
            .all(|mi| !outside_masks.iter().any(|mo| mi & !mo == 0))
    }
}

/// A verified solution with apexes at arbitrary points: n/2 guards for even
/// m (ceil(n/2) for odd m) when an edge matching verifies on its own, one
/// more after falling back to an added closing half-plane guard, and never
/// more than ceil(n/2) + 1. Each guard's two boundary rays align with two
/// distinct edges (apex at the intersection of their supporting lines), so
/// three guards serve six edges.
pub fn general_solution(sp: &SpikePolygon) -> Result<Solution, SearchError> {
    general_solution_with(sp, Workers::default())
}

pub fn general_solution_with(sp: &SpikePolygon, workers: Workers) -> Result<Solution, SearchError> {
    let polygon = sp.polygon();
    let n = polygon.len();
    assert!(n <= 62, "edge matching capped at 62 edges");

    // Candidate guards: every viable edge pair plus per-edge half-planes.
    let mut candidates: Vec<EdgeGuard> = Vec::new();
    let mut pair_guards: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e1 in 0..n {
        for e2 in (e1 + 1)..n {
            if let Some(g) = edge_pair_guard(polygon, e1, e2) {
                pair_guards[e1].push((e2, candidates.len()));
                candidates.push(g);
            }
        }
    }
    let mut singles: Vec<usize> = Vec::with_capacity(n);
    for e in 0..n {
        singles.push(candidates.len());
        candidates.push(edge_half_plane_guard(polygon, e));
    }

    // All candidate boundary lines lie on edge lines, so the polygon's own
    // edge-line arrangement is already guard-refined: enumerate it once.
    let lines = collect_lines(polygon, &[]);
    for g in &candidates {
        for d in [&g.d1, &g.d2] {
            if !lines.lines().contains(&Line::from_point_dir(&g.apex, d)) {
                return Err(SearchError::SchemeFailed(
                    "candidate guard leaves the edge-line arrangement".into(),
                ));
            }
        }
    }
    let cells = enumerate_cells(&lines, workers)?;
    let inside: Vec<bool> = cells
        .iter()
        .map(|c| polygon.locate(&c.representative) == PointLocation::Inside)
        .collect();
    let membership: Vec<Vec<bool>> = candidates
        .iter()
        .map(|g| membership_column(g, &cells))
        .collect();

    let close = closing_half_plane(sp, "close");
    let close_membership: Vec<bool> = cells
        .iter()
        .map(|c| close.cone_contains(&c.representative))
        .collect();

    let mut search = MatchingSearch {
        n,
        pair_guards,
        singles,
        candidates,
        membership,
        inside: &inside,
        extra: None,
        allow_single: n % 2 == 1,
    };

    // Matchings alone first: they hit the n/2 target for even m. Fall back
    // to one extra guard, the closing half-plane, if none verifies.
    let (chosen, extra) = match search.run() {
        Some(chosen) => (chosen, None),
        None => {
            search.extra = Some(close_membership);
            match search.run() {
                Some(chosen) => (chosen, Some(close.clone())),
                None => {
                    return Err(SearchError::SchemeFailed(
                        "no edge matching localizes, with or without the closing half-plane".into(),
                    ))
                }
            }
        }
    };

    let mut guards: Vec<Guard> = chosen
        .iter()
        .enumerate()
        .map(|(i, &cand)| search.candidates[cand].realize(format!("g{}", i + 1)))
        .collect();
    if let Some(extra) = extra {
        guards.push(extra);
    }
    finish_solution(polygon, guards, SolutionKind::General, workers)
}

/// All guards with apex at a polygon vertex and both boundary directions
/// drawn from D(v): directions from v to every other vertex plus both
/// directions along each incident edge. Ordered pairs over both reflex
/// settings, deduplicated; no candidate has d1 positive-parallel to d2.
pub fn enumerate_canonical_guards(polygon: &Polygon) -> Vec<Guard> {
    let n = polygon.len();
    let mut guards: Vec<Guard> = Vec::new();
    for v in 0..n {
        let vert = polygon.vertex(v);
        let mut dirs: BTreeSet<Direction> = BTreeSet::new();
        for u in 0..n {
            if u != v {
                dirs.insert(Direction::between(vert, polygon.vertex(u)).expect("distinct"));
            }
        }
        let prev = polygon.vertex((v + n - 1) % n);
        let next = polygon.vertex((v + 1) % n);
        for neighbor in [prev, next] {
            let toward = Direction::between(vert, neighbor).expect("distinct");
            dirs.insert(toward.opposite());
            dirs.insert(toward);
        }
        let dirs: Vec<Direction> = dirs.into_iter().collect();
        for d1 in &dirs {
            for d2 in &dirs {
                if d1 == d2 {
                    continue;
                }
                guards.push(
                    Guard::spanning(vert.clone(), d1.clone(), d2.clone(), "tmp")
                        .expect("distinct canonical directions"),
                );
            }
        }
    }
    guards.sort();
    guards.dedup();
    guards
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.with_key(format!("c{i}")))
        .collect()
}

/// Outcome of the bounded minimal vertex-guard search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub kmax: usize,
    #[serde(rename = "bestFound")]
    pub best_found: Option<Solution>,
    #[serde(rename = "infeasibleSizes")]
    pub infeasible_sizes: Vec<usize>,
    #[serde(rename = "candidateCount")]
    pub candidate_count: usize,
    pub exhaustive: bool,
}

/// For k = 1..kmax, enumerate k-subsets of the canonical candidates in
/// lexicographic order, pruned by the covering necessity (every edge's
/// supporting line must carry some selected aligned boundary ray), and
/// report the smallest k admitting a localizable set. Sizes listed in
/// `infeasible_sizes` were fully enumerated; `exhaustive` is false if the
/// budget ran out.
pub fn min_vertex_guards(
    polygon: &Polygon,
    kmax: usize,
    budget: Duration,
) -> Result<SearchReport, SearchError> {
    min_vertex_guards_with(polygon, kmax, budget, Workers::default())
}

pub fn min_vertex_guards_with(
    polygon: &Polygon,
    kmax: usize,
    budget: Duration,
    workers: Workers,
) -> Result<SearchReport, SearchError> {
    let deadline = Instant::now() + budget;
    let candidates = enumerate_canonical_guards(polygon);
    let edges = polygon.edges();
    assert!(edges.len() <= 64, "edge bitmask capped at 64 edges");
    let full_cover: u64 = (1u64 << edges.len()) - 1;
    let cover_masks: Vec<u64> = candidates
        .iter()
        .map(|g| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, e)| g.covers(e))
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();

    let mut report = SearchReport {
        kmax,
        best_found: None,
        infeasible_sizes: Vec::new(),
        candidate_count: candidates.len(),
        exhaustive: true,
    };

    for k in 1..=kmax {
        let mut selected: Vec<usize> = Vec::with_capacity(k);
        let outcome = search_size(
            polygon,
            &candidates,
            &cover_masks,
            full_cover,
            k,
            0,
            &mut selected,
            deadline,
            workers,
        )?;
        match outcome {
            SizeOutcome::Found(solution) => {
                report.best_found = Some(solution);
                return Ok(report);
            }
            SizeOutcome::Infeasible => report.infeasible_sizes.push(k),
            SizeOutcome::BudgetExhausted => {
                report.exhaustive = false;
                return Ok(report);
            }
        }
    }
    Ok(report)
}

enum SizeOutcome {
    Found(Solution),
    Infeasible,
    BudgetExhausted,
}

#[allow(clippy::too_many_arguments)]
fn search_size(
    polygon: &Polygon,
    candidates: &[Guard],
    cover_masks: &[u64],
    uncovered: u64,
    k: usize,
    start: usize,
    selected: &mut Vec<usize>,
    deadline: Instant,
    workers: Workers,
) -> Result<SizeOutcome, SearchError> {
    if selected.len() == k {
        if uncovered != 0 {
            return Ok(SizeOutcome::Infeasible);
        }
        if Instant::now() > deadline {
            return Ok(SizeOutcome::BudgetExhausted);
        }
        let guards: Vec<Guard> = selected.iter().map(|&i| candidates[i].clone()).collect();
        let labeling = build_labeling(polygon, &guards, workers)?;
        if let Localizability::Localizable = decide_against_labeling(&labeling) {
            let formula = synthesize_dnf(&labeling)?;
            let verdict = verify_against_labeling(&labeling, &formula);
            if !verdict.ok {
                return Err(SearchError::VerificationFailed(verdict.witness.unwrap()));
            }
            return Ok(SizeOutcome::Found(Solution {
                guards,
                formula,
                kind: SolutionKind::Vertex,
            }));
        }
        return Ok(SizeOutcome::Infeasible);
    }
    let remaining = k - selected.len();
    // A guard covers at most two edge lines, so prune branches that cannot
    // complete the cover.
    if (uncovered.count_ones() as usize) > 2 * remaining {
        return Ok(SizeOutcome::Infeasible);
    }
    if Instant::now() > deadline {
        return Ok(SizeOutcome::BudgetExhausted);
    }
    for i in start..candidates.len() {
        if candidates.len() - i < remaining {
            break;
        }
        selected.push(i);
        let outcome = search_size(
            polygon,
            candidates,
            cover_masks,
            uncovered & !cover_masks[i],
            k,
            i + 1,
            selected,
            deadline,
            workers,
        )?;
        selected.pop();
        match outcome {
            SizeOutcome::Infeasible => {}
            other => return Ok(other),
        }
    }
    Ok(SizeOutcome::Infeasible)
}
