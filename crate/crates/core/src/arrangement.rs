//! Exact localization decisions over the line arrangement of all supporting
//! lines. Every polygon edge and guard boundary ray lies on an arrangement
//! line, so the key set and the inside/outside status are constant on each
//! open 2D cell; checking the finitely many cells decides localization
//! exactly. Boundary points (measure zero) are excluded by construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::{Line, LineIntersection, Point, Scalar, Sign};
use crate::model::{Guard, KeySet, MonotoneFormula, PointLocation, Polygon};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("internal error: sample point landed on an arrangement line")]
    SampleOnLine,
    #[error("internal error: cell representative classified as boundary")]
    RepresentativeOnBoundary,
    #[error("arrangement needs at least one line")]
    NoLines,
}

/// Deduplicated canonical supporting lines of all polygon edges and guard
/// boundary rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSet {
    lines: Vec<Line>,
}

impl LineSet {
    pub fn from_lines(mut lines: Vec<Line>) -> LineSet {
        lines.sort();
        lines.dedup();
        LineSet { lines }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Exactly the deduplicated supporting lines of all edges and all guard
/// boundary rays.
pub fn collect_lines(polygon: &Polygon, guards: &[Guard]) -> LineSet {
    let mut lines = Vec::new();
    for e in polygon.edges() {
        lines.push(Line::of_segment(&e));
    }
    for g in guards {
        let (l1, l2) = g.boundary_lines();
        lines.push(l1);
        lines.push(l2);
    }
    LineSet::from_lines(lines)
}

/// One open 2D face of the arrangement: its per-line sign vector (no zeros)
/// and a representative point strictly off every line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub signs: Vec<i8>,
    pub representative: Point,
}

/// Worker count for the cell-enumeration and labeling loops. Results are
/// deterministic regardless of the worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers(pub usize);

impl Default for Workers {
    fn default() -> Workers {
        Workers(1)
    }
}

impl Workers {
    fn count(self) -> usize {
        self.0.max(1)
    }
}

/// Enumerates one cell per nonempty open face by slab decomposition: sort all
/// pairwise intersection abscissas (plus vertical-line abscissas), sample one
/// rational x strictly inside each slab and beyond each end, and between
/// consecutive line crossings at that x sample one rational y (and beyond the
/// extremes). Distinct cells have distinct sign vectors; output is ordered by
/// sign vector.
pub fn enumerate_cells(
    line_set: &LineSet,
    workers: Workers,
) -> Result<Vec<Cell>, ArrangementError> {
    let lines = line_set.lines();
    if lines.is_empty() {
        return Err(ArrangementError::NoLines);
    }

    let mut xs: Vec<Scalar> = Vec::new();
    for (i, li) in lines.iter().enumerate() {
        if let Some(x) = li.x_of_vertical() {
            xs.push(x);
        }
        for lj in &lines[(i + 1)..] {
            if let LineIntersection::Point(p) = li.intersection(lj) {
                xs.push(p.x);
            }
        }
    }
    xs.sort();
    xs.dedup();
    let sample_xs = interleave_samples(&xs);

    let chunk = sample_xs.len().div_ceil(workers.count());
    let sample_slabs: Vec<(usize, Vec<(usize, Point)>)> = run_chunked(
        &sample_xs,
        chunk,
        |slab_offset, xs_chunk| -> Result<Vec<(usize, Vec<(usize, Point)>)>, ArrangementError> {
            let mut out = Vec::with_capacity(xs_chunk.len());
            for (k, x) in xs_chunk.iter().enumerate() {
                let mut ys: Vec<Scalar> = lines.iter().filter_map(|l| l.y_at(x)).collect();
                ys.sort();
                debug_assert!(ys.windows(2).all(|w| w[0] != w[1]));
                let sample_ys = interleave_samples(&ys);
                let points = sample_ys
                    .into_iter()
                    .enumerate()
                    .map(|(yi, y)| (yi, Point::new(x.clone(), y)))
                    .collect();
                out.push((slab_offset + k, points));
            }
            Ok(out)
        },
    )?;

    // Dedup by sign vector, keeping the first sample in (slab, y) order so
    // the representative choice is deterministic.
    let mut cells: BTreeMap<Vec<i8>, (usize, usize, Point)> = BTreeMap::new();
    for (slab_idx, points) in sample_slabs {
        for (y_idx, p) in points {
            let mut signs = Vec::with_capacity(lines.len());
            for l in lines {
                match l.side_of(&p) {
                    Sign::Zero => return Err(ArrangementError::SampleOnLine),
                    s => signs.push(s.as_i8()),
                }
            }
            match cells.get(&signs) {
                Some((s, y, _)) if (*s, *y) <= (slab_idx, y_idx) => {}
                _ => {
                    cells.insert(signs, (slab_idx, y_idx, p));
                }
            }
        }
    }

    Ok(cells
        .into_iter()
        .map(|(signs, (_, _, representative))| Cell {
            signs,
            representative,
        })
        .collect())
}

/// Midpoints between consecutive values plus one sample beyond each end;
/// just `0` when there are no values to separate.
fn interleave_samples(values: &[Scalar]) -> Vec<Scalar> {
    if values.is_empty() {
        return vec![Scalar::zero()];
    }
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(values.first().unwrap() - &one);
    for w in values.windows(2) {
        out.push((&w[0] + &w[1]) / two.clone());
    }
    out.push(values.last().unwrap() + &one);
    out
}

/// Runs `f` over chunks of `items` on scoped threads (sequentially for a
/// single chunk), concatenating the per-chunk outputs in chunk order.
fn run_chunked<T: Sync, R: Send, E: Send>(
    items: &[T],
    chunk: usize,
    f: impl Fn(usize, &[T]) -> Result<Vec<R>, E> + Sync,
) -> Result<Vec<R>, E> {
    let chunk = chunk.max(1);
    if items.len() <= chunk {
        return f(0, items);
    }
    let chunks: Vec<(usize, &[T])> = items
        .chunks(chunk)
        .enumerate()
        .map(|(i, c)| (i * chunk, c))
        .collect();
    let f = &f;
    let results: Vec<Result<Vec<R>, E>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|(offset, c)| scope.spawn(move || f(offset, c)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Per-cell label: indices into the guard list plus the inside flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLabel {
    pub key_indices: Vec<u32>,
    pub inside: bool,
}

/// The verification substrate: every arrangement cell with its key set and
/// inside/outside flag.
#[derive(Debug, Clone)]
pub struct CellLabeling {
    cells: Vec<Cell>,
    labels: Vec<CellLabel>,
    keys: Vec<String>,
}

impl CellLabeling {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn labels(&self) -> &[CellLabel] {
        &self.labels
    }

    /// Guard keys, indexed by the entries of `CellLabel::key_indices`.
    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn key_set(&self, label: &CellLabel) -> KeySet {
        label
            .key_indices
            .iter()
            .map(|&i| self.keys[i as usize].clone())
            .collect()
    }

    pub fn cell_info(&self, idx: usize) -> CellInfo {
        CellInfo {
            representative: self.cells[idx].representative.clone(),
            key_set: self.key_set(&self.labels[idx]),
            inside: self.labels[idx].inside,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Evaluates the key set and inside flag of every cell at its representative.
/// Constant-over-cell is guaranteed because every edge and boundary ray lies
/// on an arrangement line.
pub fn label_cells(
    polygon: &Polygon,
    guards: &[Guard],
    cells: Vec<Cell>,
    workers: Workers,
) -> Result<CellLabeling, ArrangementError> {
    let chunk = cells.len().div_ceil(workers.count());
    let labels = run_chunked(&cells, chunk, |_, chunk_cells| {
        let mut out = Vec::with_capacity(chunk_cells.len());
        for cell in chunk_cells {
            let p = &cell.representative;
            let inside = match polygon.locate(p) {
                PointLocation::Inside => true,
                PointLocation::Outside => false,
                PointLocation::Boundary => return Err(ArrangementError::RepresentativeOnBoundary),
            };
            let key_indices = guards
                .iter()
                .enumerate()
                .filter(|(_, g)| g.cone_contains(p))
                .map(|(i, _)| i as u32)
                .collect();
            out.push(CellLabel {
                key_indices,
                inside,
            });
        }
        Ok(out)
    })?;
    Ok(CellLabeling {
        cells,
        labels,
        keys: guards.iter().map(|g| g.key().to_string()).collect(),
    })
}

/// Convenience: collect lines, enumerate and label in one step.
pub fn build_labeling(
    polygon: &Polygon,
    guards: &[Guard],
    workers: Workers,
) -> Result<CellLabeling, ArrangementError> {
    let lines = collect_lines(polygon, guards);
    let cells = enumerate_cells(&lines, workers)?;
    label_cells(polygon, guards, cells, workers)
}

/// A re-checkable witness cell: representative point, key set, inside flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellInfo {
    pub representative: Point,
    #[serde(rename = "keySet")]
    pub key_set: KeySet,
    pub inside: bool,
}

/// Outcome of checking a formula against every cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyVerdict {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FormulaWitness>,
}

/// A cell where the formula value disagrees with the inside flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaWitness {
    #[serde(flatten)]
    pub cell: CellInfo,
    pub expected: bool,
    pub actual: bool,
}

/// Ok iff the formula evaluates to the inside flag on every cell; otherwise
/// the first failing cell (in sign-vector order) with expected/actual.
pub fn verify_localization(
    polygon: &Polygon,
    guards: &[Guard],
    formula: &MonotoneFormula,
    workers: Workers,
) -> Result<VerifyVerdict, ArrangementError> {
    let labeling = build_labeling(polygon, guards, workers)?;
    Ok(verify_against_labeling(&labeling, formula))
}

pub fn verify_against_labeling(
    labeling: &CellLabeling,
    formula: &MonotoneFormula,
) -> VerifyVerdict {
    for idx in 0..labeling.len() {
        let info = labeling.cell_info(idx);
        let actual = formula.evaluate(&info.key_set);
        if actual != info.inside {
            return VerifyVerdict {
                ok: false,
                witness: Some(FormulaWitness {
                    expected: info.inside,
                    actual,
                    cell: info,
                }),
            };
        }
    }
    VerifyVerdict {
        ok: true,
        witness: None,
    }
}

/// An inside cell whose key set is a subset of an outside cell's: no
/// monotone formula can distinguish the pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityWitness {
    #[serde(rename = "insideCell")]
    pub inside_cell: CellInfo,
    #[serde(rename = "outsideCell")]
    pub outside_cell: CellInfo,
}

/// Whether some monotone formula localizes the scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Localizability {
    Localizable,
    NotLocalizable(AmbiguityWitness),
}

impl Localizability {
    pub fn is_localizable(&self) -> bool {
        matches!(self, Localizability::Localizable)
    }
}

/// Yes iff no inside-cell key set is a subset of any outside-cell key set;
/// this is exactly realizability by a monotone formula.
pub fn decide_localizable(
    polygon: &Polygon,
    guards: &[Guard],
    workers: Workers,
) -> Result<Localizability, ArrangementError> {
    let labeling = build_labeling(polygon, guards, workers)?;
    Ok(decide_against_labeling(&labeling))
}

pub fn decide_against_labeling(labeling: &CellLabeling) -> Localizability {
    let mut inside_cells: Vec<usize> = Vec::new();
    let mut outside_cells: Vec<usize> = Vec::new();
    for (idx, label) in labeling.labels().iter().enumerate() {
        if label.inside {
            inside_cells.push(idx);
        } else {
            outside_cells.push(idx);
        }
    }
    for &i in &inside_cells {
        for &o in &outside_cells {
            if is_subset(
                &labeling.labels()[i].key_indices,
                &labeling.labels()[o].key_indices,
            ) {
                return Localizability::NotLocalizable(AmbiguityWitness {
                    inside_cell: labeling.cell_info(i),
                    outside_cell: labeling.cell_info(o),
                });
            }
        }
    }
    Localizability::Localizable
}

/// Subset test on sorted index vectors.
fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("scene is not localizable by any monotone formula")]
    NotLocalizable(AmbiguityWitness),
    #[error("no inside cells to synthesize from")]
    NoInsideCells,
}

/// The canonical monotone DNF: OR over inside cells of AND over their key
/// sets, deduplicated and subset-minimized (a conjunct whose key set is a
/// superset of another's is dropped). The result passes verification
/// whenever the scene is localizable.
pub fn synthesize_dnf(labeling: &CellLabeling) -> Result<MonotoneFormula, SynthesisError> {
    if let Localizability::NotLocalizable(w) = decide_against_labeling(labeling) {
        return Err(SynthesisError::NotLocalizable(w));
    }
    let mut conjuncts: Vec<Vec<u32>> = labeling
        .labels()
        .iter()
        .filter(|l| l.inside)
        .map(|l| l.key_indices.clone())
        .collect();
    if conjuncts.is_empty() {
        return Err(SynthesisError::NoInsideCells);
    }
    conjuncts.sort();
    conjuncts.dedup();
    let minimal: Vec<Vec<u32>> = conjuncts
        .iter()
        .filter(|c| {
            !conjuncts
                .iter()
                .any(|other| other.len() < c.len() && is_subset(other, c))
        })
        .cloned()
        .collect();

    let mut terms: Vec<MonotoneFormula> = Vec::with_capacity(minimal.len());
    for c in &minimal {
        // Localizability rules out an empty inside key set (it would be a
        // subset of every outside cell's keys).
        debug_assert!(!c.is_empty());
        let leaves: Vec<MonotoneFormula> = c
            .iter()
            .map(|&i| MonotoneFormula::key(labeling.keys()[i as usize].clone()))
            .collect();
        terms.push(if leaves.len() == 1 {
            leaves.into_iter().next().unwrap()
        } else {
            MonotoneFormula::and(leaves)
        });
    }
    Ok(if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        MonotoneFormula::or(terms)
    })
}
