//! Heaps of words: lattice placement, coalescing, decorated heaps with
//! string overlays, shape detectors, convexity, critical zeros, defect
//! graphs, and the type D to type A projection.
//!
//! The heap of a word places one entry per letter on an integer lattice.
//! Every generator owns a column (in type D the two fork generators share
//! column 1) and each entry settles, under gravity, one level above the
//! highest earlier entry it does not commute with. The induced partial
//! order (an entry precedes the later entries it does not commute with) is
//! word-independent up to commuting swaps, so the heap is a faithful
//! picture of the commutativity class.
//!
//! On top of the bare heap this module builds the mask calculus in visual
//! form: decorations classify entries by mask bit and defect status,
//! strings weave between columns and read off the subexpression at the top
//! edge, critical zeros locate the bounces that witness a zero-defect, and
//! the defect graph ties zero-defects to the critical zeros they share.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::coxeter::{
    build_system, canonical_reduced_word, element_from_word, CoxeterSystem, Element, Family, Word,
};
use crate::error::Error;
use crate::masks::{defect_profile, Mask, PositionStatus};
use crate::Result;

/// One letter of a word placed on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeapEntry {
    /// Position of the letter in the word (0-based).
    pub id: usize,
    /// Internal generator index.
    pub letter: usize,
    /// Lattice column of the generator (1-based).
    pub column: usize,
    /// Lattice level (1-based, growing upward).
    pub level: usize,
}

/// The heap of a word: entries on the lattice plus the cover relation of
/// the underlying poset. Entry ids equal word positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heap {
    system: Arc<CoxeterSystem>,
    word: Word,
    entries: Vec<HeapEntry>,
    covers: Vec<(usize, usize)>,
}

impl Heap {
    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.system
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn entries(&self) -> &[HeapEntry] {
        &self.entries
    }

    /// Cover pairs (lower id, upper id) of the heap order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_level(&self) -> usize {
        self.entries.iter().map(|e| e.level).max().unwrap_or(0)
    }

    /// Ids of the heap-maximal entries (covered by nothing).
    pub fn maximal_entries(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.covers.iter().any(|&(lo, _)| lo == i))
            .collect()
    }

    /// The set of occupied lattice points. A shared type D fork point
    /// appears once.
    pub fn occupied_points(&self) -> HashSet<(usize, usize)> {
        self.entries.iter().map(|e| (e.column, e.level)).collect()
    }
}

fn commutes(system: &CoxeterSystem, a: usize, b: usize) -> bool {
    a != b && system.coxeter_order(a, b) == 2
}

fn validate_letters(system: &CoxeterSystem, word: &[usize]) -> Result<()> {
    for &s in word {
        if s >= system.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: s,
                rank: system.rank(),
            });
        }
    }
    Ok(())
}

/// Builds the gravity heap of a word (any word, reduced or not): each
/// entry sits one level above the highest earlier entry whose letter it
/// does not commute with.
pub fn heap_from_word(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<Heap> {
    validate_letters(system, word)?;
    let n = word.len();
    let mut levels = vec![0usize; n];
    for j in 0..n {
        let mut level = 1;
        for i in 0..j {
            if !commutes(system, word[i], word[j]) {
                level = level.max(levels[i] + 1);
            }
        }
        levels[j] = level;
    }
    let entries = (0..n)
        .map(|i| HeapEntry {
            id: i,
            letter: word[i],
            column: system.column(word[i]),
            level: levels[i],
        })
        .collect();
    Ok(Heap {
        system: Arc::clone(system),
        word: word.to_vec(),
        entries,
        covers: covers_of(system, word),
    })
}

/// Transitive reduction of the transitive closure of the relation "i comes
/// before j and their letters do not commute".
fn covers_of(system: &CoxeterSystem, word: &[usize]) -> Vec<(usize, usize)> {
    let n = word.len();
    let mut reach = vec![vec![false; n]; n];
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            if !commutes(system, word[i], word[j]) {
                reach[i][j] = true;
            }
        }
        for j in (i + 1)..n {
            if reach[i][j] {
                for k in (j + 1)..n {
                    if reach[j][k] {
                        reach[i][k] = true;
                    }
                }
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if reach[i][j] && !((i + 1)..j).any(|k| reach[i][k] && reach[k][j]) {
                covers.push((i, j));
            }
        }
    }
    covers
}

/// Connected components of the contact relation (entries within one column
/// and one level of each other), each sorted, ordered by smallest member.
fn contact_components(entries: &[HeapEntry], levels: &[usize]) -> Vec<Vec<usize>> {
    let n = entries.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let dc = entries[i].column.abs_diff(entries[j].column);
            let dl = levels[i].abs_diff(levels[j]);
            if dc <= 1 && dl <= 1 {
                let (ri, rj) = (uf_find(&mut parent, i), uf_find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = uf_find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn uf_find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Compacts a heap: a contact component rises one level at a time while
/// some outside entry within horizontal reach sits strictly higher, unless
/// an outside entry exactly one level up blocks it. The one non-blocking
/// overlap is a commuting type D fork pair meeting in column 1, which
/// merges onto a shared lattice point. Components are recomputed after
/// every step; the result does not depend on the processing order and
/// coalescing is idempotent.
pub fn coalesce(heap: &Heap) -> Heap {
    let n = heap.len();
    if n == 0 {
        return heap.clone();
    }
    let system = heap.system.as_ref();
    let entries = &heap.entries;
    let mut levels: Vec<usize> = entries.iter().map(|e| e.level).collect();
    let bound = n * (heap.max_level() + n) + 8;
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps <= bound, "coalescing failed to settle");
        let mut moved = false;
        'components: for comp in contact_components(entries, &levels) {
            let inside: HashSet<usize> = comp.iter().copied().collect();
            let mut pulled = false;
            for &c in &comp {
                for e in 0..n {
                    if inside.contains(&e) || entries[e].column.abs_diff(entries[c].column) > 1 {
                        continue;
                    }
                    if levels[e] > levels[c] {
                        pulled = true;
                    }
                    if levels[e] == levels[c] + 1 {
                        let shares_point = entries[e].column == entries[c].column
                            && commutes(system, entries[e].letter, entries[c].letter);
                        if !shares_point {
                            continue 'components;
                        }
                    }
                }
            }
            if pulled {
                for &c in &comp {
                    levels[c] += 1;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    let min = *levels.iter().min().expect("nonempty heap");
    let entries = entries
        .iter()
        .map(|e| HeapEntry {
            level: levels[e.id] - (min - 1),
            ..*e
        })
        .collect();
    Heap {
        system: Arc::clone(&heap.system),
        word: heap.word.clone(),
        entries,
        covers: heap.covers.clone(),
    }
}

/// Visual class of a decorated entry. Mask-1 entries are not split by
/// defect status; zeros are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    MaskOne,
    PlainZero,
    ZeroDefect,
}

impl Decoration {
    pub fn from_status(status: PositionStatus) -> Decoration {
        match status {
            PositionStatus::PlainOne | PositionStatus::OneDefect => Decoration::MaskOne,
            PositionStatus::PlainZero => Decoration::PlainZero,
            PositionStatus::ZeroDefect => Decoration::ZeroDefect,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Decoration::MaskOne => '#',
            Decoration::PlainZero => 'o',
            Decoration::ZeroDefect => 'D',
        }
    }
}

/// A heap of a reduced word together with a mask and the mask's per-entry
/// classification.
#[derive(Clone, Debug)]
pub struct DecoratedHeap {
    pub heap: Heap,
    pub mask: Mask,
    pub statuses: Vec<PositionStatus>,
    pub decorations: Vec<Decoration>,
}

/// Attaches a mask to a heap. The heap's word must be reduced and the mask
/// must have matching length.
pub fn decorate(heap: &Heap, mask: &Mask) -> Result<DecoratedHeap> {
    let profile = defect_profile(&heap.system, &heap.word, mask)?;
    let decorations = profile
        .statuses
        .iter()
        .map(|&s| Decoration::from_status(s))
        .collect();
    Ok(DecoratedHeap {
        heap: heap.clone(),
        mask: mask.clone(),
        statuses: profile.statuses,
        decorations,
    })
}

/// The string overlay of a decorated heap.
///
/// Strings start at the bottom in positions 1..=N carrying the labels
/// 1..=N, visit the entries that engage their current position, cross at
/// mask-1 entries and bounce at mask-0 entries. A mask-1 fork entry in
/// type D additionally negates both labels it crosses. The labels at the
/// top edge spell the one-line notation of the mask's subexpression.
#[derive(Clone, Debug)]
pub struct StringDiagram {
    /// Per string (index id-1): the (column, level) points it visits,
    /// bottom to top.
    pub paths: Vec<Vec<(usize, usize)>>,
    /// Final signed label per string (index id-1).
    pub labels: Vec<i32>,
    /// Labels read along the top edge by position.
    pub top_assignment: Vec<i32>,
    /// Labels along the bottom edge (always 1..=N).
    pub bottom_assignment: Vec<i32>,
    /// Per entry: the string ids at its left and right foot, recorded
    /// before the entry acts.
    pub participants: Vec<(usize, usize)>,
}

struct StringTrace {
    /// Position (0-based) to string id (1-based).
    at: Vec<usize>,
    /// String id - 1 to current signed label.
    labels: Vec<i32>,
    participants: Vec<(usize, usize)>,
}

fn string_count(system: &CoxeterSystem) -> Result<usize> {
    match system.family() {
        Family::A | Family::B => Ok(system.rank() + 1),
        Family::D => Ok(system.rank()),
        _ => Err(Error::Unsupported(format!(
            "string diagrams are drawn for one-line families, not {}",
            system.descriptor()
        ))),
    }
}

/// Runs the string trace over the first `stop` entries. Type B heaps are
/// traced with the type A crossing rules on rank+1 strings (the transport
/// reinterprets the same internal letters in type A); only the type D fork
/// generator negates labels.
fn trace_strings(decorated: &DecoratedHeap, stop: usize) -> Result<StringTrace> {
    let system = decorated.heap.system();
    let n = string_count(system)?;
    let negates = system.family() == Family::D;
    let mut at: Vec<usize> = (1..=n).collect();
    let mut labels: Vec<i32> = (1..=n as i32).collect();
    let mut participants = Vec::with_capacity(stop);
    for (j, entry) in decorated.heap.entries[..stop].iter().enumerate() {
        let c = entry.column;
        let (u, v) = (at[c - 1], at[c]);
        participants.push((u, v));
        if decorated.mask.bit(j) {
            at.swap(c - 1, c);
            if negates && entry.letter == 0 {
                labels[u - 1] = -labels[u - 1];
                labels[v - 1] = -labels[v - 1];
            }
        }
    }
    Ok(StringTrace {
        at,
        labels,
        participants,
    })
}

/// Draws the strings of a decorated heap. Supported for types A and D
/// natively and for type B through the type A transport.
pub fn strings(decorated: &DecoratedHeap) -> Result<StringDiagram> {
    let trace = trace_strings(decorated, decorated.heap.len())?;
    let n = trace.at.len();
    let mut paths = vec![Vec::new(); n];
    for (j, &(u, v)) in trace.participants.iter().enumerate() {
        let e = &decorated.heap.entries[j];
        paths[u - 1].push((e.column, e.level));
        paths[v - 1].push((e.column, e.level));
    }
    let top_assignment = trace.at.iter().map(|&id| trace.labels[id - 1]).collect();
    Ok(StringDiagram {
        paths,
        labels: trace.labels,
        top_assignment,
        bottom_assignment: (1..=n as i32).collect(),
        participants: trace.participants,
    })
}

fn unordered(pair: (usize, usize)) -> (usize, usize) {
    if pair.0 <= pair.1 {
        pair
    } else {
        (pair.1, pair.0)
    }
}

/// Reads an entry's defect status off the string diagram instead of the
/// length test.
///
/// Type A: an entry is a defect exactly when its two strings crossed an
/// odd number of times below it. Type D, non-fork entries: an entry is a
/// defect exactly when the signed label arriving on its left foot exceeds
/// the one on its right foot. Fork entries and type B are not covered by a
/// two-string rule; use the defect profile there.
pub fn defect_by_string_parity(decorated: &DecoratedHeap, entry: usize) -> Result<bool> {
    let heap = &decorated.heap;
    if entry >= heap.len() {
        return Err(Error::InvalidInput(format!(
            "entry {entry} out of range for a word of length {}",
            heap.len()
        )));
    }
    match heap.system().family() {
        Family::A => {
            let trace = trace_strings(decorated, heap.len())?;
            let pair = unordered(trace.participants[entry]);
            let crossings = (0..entry)
                .filter(|&i| decorated.mask.bit(i) && unordered(trace.participants[i]) == pair)
                .count();
            Ok(crossings % 2 == 1)
        }
        Family::D => {
            if heap.entries[entry].letter == 0 {
                return Err(Error::Unsupported(
                    "the two-string test does not cover fork entries; use the defect profile"
                        .into(),
                ));
            }
            let trace = trace_strings(decorated, entry)?;
            let c = heap.entries[entry].column;
            let (u, v) = (trace.at[c - 1], trace.at[c]);
            Ok(trace.labels[u - 1] > trace.labels[v - 1])
        }
        Family::B => Err(Error::Unsupported(
            "type B strings live on the transported type A word; test there".into(),
        )),
        _ => Err(Error::Unsupported(format!(
            "string diagrams are drawn for one-line families, not {}",
            heap.system().descriptor()
        ))),
    }
}

/// Lattice fragments whose occurrence anywhere in a heap is tested by
/// [`detect_shape`]. Levels inside one column step by two because adjacent
/// columns interleave.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Three same-column entries at levels y, y+2, y+4.
    ThreeStack,
    /// Four same-column entries at levels y, y+2, y+4, y+6.
    FourStack,
    /// Two horizontal dominoes at (c, y), (c+2, y) and (c, y+4), (c+2, y+4)
    /// joined by the two-entry stack (c+1, y+1), (c+1, y+3).
    IShape,
}

/// True iff the fragment occurs somewhere in the heap, translated
/// anywhere on the lattice. Other entries are irrelevant.
pub fn detect_shape(heap: &Heap, shape: Shape) -> bool {
    let occupied = heap.occupied_points();
    let has = |c: usize, l: usize| occupied.contains(&(c, l));
    occupied.iter().any(|&(c, l)| match shape {
        Shape::ThreeStack => has(c, l + 2) && has(c, l + 4),
        Shape::FourStack => has(c, l + 2) && has(c, l + 4) && has(c, l + 6),
        Shape::IShape => {
            has(c + 2, l)
                && has(c + 1, l + 1)
                && has(c + 1, l + 3)
                && has(c, l + 4)
                && has(c + 2, l + 4)
        }
    })
}

/// Side classification of a minimal pair's resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    /// Both resolving entries sit in the column left of the pair.
    Left,
    /// Both resolving entries sit in the column right of the pair.
    Right,
    /// The resolving entries sit in distinct columns.
    Distinct,
}

/// Two consecutive same-generator entries together with the two entries
/// that resolve them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPair {
    /// Word position of the lower entry.
    pub lower: usize,
    /// Word position of the upper entry.
    pub upper: usize,
    pub column: usize,
    /// Word positions of the two non-commuting entries between the pair.
    pub resolvers: (usize, usize),
    pub resolution: Resolution,
}

/// True iff no reduced word of x contains a factor s t s with the order of
/// s t at least 3. Searches words from the right end with memoization on
/// (remaining element, last two letters chosen).
pub fn is_short_braid_avoiding(x: &Element) -> bool {
    let system = Arc::clone(x.system());
    let rank = system.rank();
    // `rank` stands in for "no letter yet".
    let mut seen: HashSet<(Element, usize, usize)> = HashSet::new();
    let mut stack = vec![(x.clone(), rank, rank)];
    seen.insert((x.clone(), rank, rank));
    while let Some((y, a, b)) = stack.pop() {
        for s in 0..rank {
            if !y.is_right_descent(s) {
                continue;
            }
            // The suffix built so far starts with a then b; choosing s
            // prepends it, so the word would read s a s.
            if b == s && system.coxeter_order(s, a) >= 3 {
                return false;
            }
            let next = y.right(s);
            if seen.insert((next.clone(), s, a)) {
                stack.push((next, s, a));
            }
        }
    }
    true
}

/// Minimal pairs of a short-braid avoiding element in type A or D, read
/// off the coalesced heap of its canonical word, and whether every pair
/// resolves distinctly (convexity).
///
/// Same-generator entries consecutive in their column form a pair; in
/// type D a column-1 pair is not minimal when an entry of the other fork
/// generator lies strictly between. At least two non-commuting entries lie
/// strictly between the pair; a resolution picks two of them, preferring a
/// column-distinct pick (only the fork column can host more than one
/// resolver per side, so a pair classifies as distinct exactly when its
/// resolvers span both neighboring columns).
pub fn minimal_pairs_and_convexity(x: &Element) -> Result<(Vec<MinimalPair>, bool)> {
    let system = Arc::clone(x.system());
    if !matches!(system.family(), Family::A | Family::D) {
        return Err(Error::Unsupported(format!(
            "minimal pairs are defined for types A and D, not {}",
            system.descriptor()
        )));
    }
    if !is_short_braid_avoiding(x) {
        return Err(Error::Precondition(
            "minimal pairs need a short-braid avoiding element".into(),
        ));
    }
    let word = canonical_reduced_word(x);
    let heap = coalesce(&heap_from_word(&system, &word)?);
    let entries = heap.entries();
    let mut by_letter = vec![Vec::new(); system.rank()];
    for e in entries {
        by_letter[e.letter].push(e.id);
    }
    let mut pairs = Vec::new();
    for (letter, ids) in by_letter.iter_mut().enumerate() {
        ids.sort_by_key(|&i| entries[i].level);
        for pair in ids.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let column = entries[lo].column;
            if system.family() == Family::D && column == 1 {
                let broken = entries.iter().any(|e| {
                    e.column == 1
                        && e.letter != letter
                        && entries[lo].level < e.level
                        && e.level < entries[hi].level
                });
                if broken {
                    continue;
                }
            }
            let resolvers: Vec<usize> = ((lo + 1)..hi)
                .filter(|&k| system.coxeter_order(word[k], letter) >= 3)
                .collect();
            if resolvers.len() < 2 {
                return Err(Error::Precondition(format!(
                    "expected two entries resolving the pair at positions {lo} and {hi}, found {}",
                    resolvers.len()
                )));
            }
            let partner = resolvers[1..]
                .iter()
                .copied()
                .find(|&k| entries[k].column != entries[resolvers[0]].column)
                .unwrap_or(resolvers[1]);
            let (c1, c2) = (entries[resolvers[0]].column, entries[partner].column);
            let resolution = if c1 < column && c2 < column {
                Resolution::Left
            } else if c1 > column && c2 > column {
                Resolution::Right
            } else {
                Resolution::Distinct
            };
            pairs.push(MinimalPair {
                lower: lo,
                upper: hi,
                column,
                resolvers: (resolvers[0], partner),
                resolution,
            });
        }
    }
    let convex = pairs.iter().all(|p| p.resolution == Resolution::Distinct);
    Ok((pairs, convex))
}

/// Left and right critical zeros of a zero-defect entry in a type A
/// decorated heap, plus the convention that the entry counts as a critical
/// zero of itself (the returned bool, always true).
///
/// The defect's two strings last crossed at the highest mask-1 entry of
/// that pair below the defect; each string's critical zero is the highest
/// bounce it takes strictly between that crossing and the defect. Either
/// side may be absent.
pub fn critical_zeros(
    decorated: &DecoratedHeap,
    entry: usize,
) -> Result<(Option<usize>, Option<usize>, bool)> {
    let heap = &decorated.heap;
    if heap.system().family() != Family::A {
        return Err(Error::Unsupported(format!(
            "critical zeros are computed in type A, not {}",
            heap.system().descriptor()
        )));
    }
    if entry >= heap.len() || decorated.statuses[entry] != PositionStatus::ZeroDefect {
        return Err(Error::InvalidInput(format!(
            "critical zeros are defined for zero-defect entries; position {entry} is not one"
        )));
    }
    let trace = trace_strings(decorated, heap.len())?;
    let (left, right) = critical_zero_sides(decorated, &trace, entry);
    Ok((left, right, true))
}

fn critical_zero_sides(
    decorated: &DecoratedHeap,
    trace: &StringTrace,
    entry: usize,
) -> (Option<usize>, Option<usize>) {
    let entries = decorated.heap.entries();
    let (u, v) = trace.participants[entry];
    let pair = unordered((u, v));
    let level = entries[entry].level;
    let crossing = (0..decorated.mask.len())
        .filter(|&i| {
            decorated.mask.bit(i)
                && entries[i].level < level
                && unordered(trace.participants[i]) == pair
        })
        .max_by_key(|&i| entries[i].level)
        .expect("a zero-defect undoes at least one crossing of its strings");
    let floor = entries[crossing].level;
    let side = |id: usize| {
        (0..decorated.mask.len())
            .filter(|&i| {
                !decorated.mask.bit(i)
                    && entries[i].level > floor
                    && entries[i].level < level
                    && (trace.participants[i].0 == id || trace.participants[i].1 == id)
            })
            .max_by_key(|&i| entries[i].level)
    };
    (side(u), side(v))
}

/// The defect graph of a type A decorated heap: one vertex per zero-defect
/// and an edge whenever two zero-defects share a critical zero (each
/// vertex's critical set contains the vertex itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectGraph {
    /// Zero-defect word positions, ascending.
    pub vertices: Vec<usize>,
    /// Vertex pairs (ascending within a pair and lexicographically).
    pub edges: Vec<(usize, usize)>,
    /// Per vertex: (entry, left critical zero, right critical zero). The
    /// entry itself always completes its own critical set.
    pub critical_zero_table: Vec<(usize, Option<usize>, Option<usize>)>,
}

impl DefectGraph {
    pub fn is_forest(&self) -> bool {
        let index: HashMap<usize, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        for &(a, b) in &self.edges {
            let (ra, rb) = (
                uf_find(&mut parent, index[&a]),
                uf_find(&mut parent, index[&b]),
            );
            if ra == rb {
                return false;
            }
            parent[ra.max(rb)] = ra.min(rb);
        }
        true
    }

    /// Acyclic, connected, and nonempty. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty()
            && self.is_forest()
            && self.edges.len() == self.vertices.len() - 1
    }
}

/// Builds the defect graph of a type A decorated heap.
pub fn defect_graph(decorated: &DecoratedHeap) -> Result<DefectGraph> {
    if decorated.heap.system().family() != Family::A {
        return Err(Error::Unsupported(format!(
            "defect graphs are computed in type A, not {}",
            decorated.heap.system().descriptor()
        )));
    }
    let trace = trace_strings(decorated, decorated.heap.len())?;
    let vertices: Vec<usize> = (0..decorated.heap.len())
        .filter(|&i| decorated.statuses[i] == PositionStatus::ZeroDefect)
        .collect();
    let critical_zero_table: Vec<(usize, Option<usize>, Option<usize>)> = vertices
        .iter()
        .map(|&d| {
            let (left, right) = critical_zero_sides(decorated, &trace, d);
            (d, left, right)
        })
        .collect();
    let critical_set = |row: &(usize, Option<usize>, Option<usize>)| -> HashSet<usize> {
        [Some(row.0), row.1, row.2].into_iter().flatten().collect()
    };
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let a = critical_set(&critical_zero_table[i]);
            let b = critical_set(&critical_zero_table[j]);
            if !a.is_disjoint(&b) {
                edges.push((vertices[i], vertices[j]));
            }
        }
    }
    Ok(DefectGraph {
        vertices,
        edges,
        critical_zero_table,
    })
}

/// Result of the type D to type A projection: a masked word in the type A
/// system of one higher rank.
#[derive(Clone, Debug)]
pub struct PiImage {
    pub system: Arc<CoxeterSystem>,
    pub word: Word,
    pub mask: Mask,
    /// Per image position: the source position in the input word, or None
    /// for the three added wedge entries.
    pub source: Vec<Option<usize>>,
}

/// Projects a masked type D word with exactly three column-1 entries to a
/// masked type A word, shifting every column right by two and filling a
/// three-entry wedge below the top column-1 entry.
///
/// Requirements on the coalesced heap: exactly three column-1 entries, on
/// distinct levels, with alternating fork generators, and no entry
/// northeast of the top one. The wedge bits and the middle entry's new bit
/// depend on the top entry's status: a plain one keeps everything and adds
/// three ones; a zero-defect adds (0,0,1) when the middle entry carries a
/// one, (0,1,0) when it carries a zero and shares the top entry's strings,
/// and (1,0,1) with the middle bit flipped to one when it carries a zero
/// and does not. Other top statuses are not covered by the table.
pub fn pi_project_word(
    system: &Arc<CoxeterSystem>,
    word: &[usize],
    mask: &Mask,
) -> Result<PiImage> {
    if system.family() != Family::D {
        return Err(Error::Precondition(format!(
            "the projection starts from type D, not {}",
            system.descriptor()
        )));
    }
    let heap = coalesce(&heap_from_word(system, word)?);
    let decorated = decorate(&heap, mask)?;
    let entries = heap.entries();
    let mut column_one: Vec<usize> = (0..entries.len())
        .filter(|&i| entries[i].column == 1)
        .collect();
    if column_one.len() != 3 {
        return Err(Error::Precondition(format!(
            "the projection needs exactly three column-1 entries, found {}",
            column_one.len()
        )));
    }
    column_one.sort_by_key(|&i| entries[i].level);
    let (bottom, middle, top) = (column_one[0], column_one[1], column_one[2]);
    if entries[bottom].level == entries[middle].level
        || entries[middle].level == entries[top].level
    {
        return Err(Error::Precondition(
            "the projection needs the column-1 entries on three distinct levels".into(),
        ));
    }
    if entries[bottom].letter != entries[top].letter
        || entries[middle].letter == entries[top].letter
    {
        return Err(Error::Precondition(
            "the projection needs the column-1 generators to alternate".into(),
        ));
    }
    let top_level = entries[top].level;
    if entries
        .iter()
        .any(|e| e.column == 2 && e.level == top_level + 1)
    {
        return Err(Error::Precondition(
            "the projection needs no entry northeast of the top column-1 entry".into(),
        ));
    }
    let mut out_bits: Vec<bool> = mask.bits().to_vec();
    let wedge = match decorated.statuses[top] {
        PositionStatus::PlainOne => (true, true, true),
        PositionStatus::ZeroDefect => {
            if mask.bit(middle) {
                (false, false, true)
            } else {
                let trace = trace_strings(&decorated, entries.len())?;
                let meet = unordered(trace.participants[top])
                    == unordered(trace.participants[middle]);
                if meet {
                    (false, true, false)
                } else {
                    out_bits[middle] = true;
                    (true, false, true)
                }
            }
        }
        status => {
            return Err(Error::Unsupported(format!(
                "the projection table does not cover a {status} top entry"
            )));
        }
    };
    let y = entries[middle].level;
    // (level, column, bit, source); reading by level then column is a
    // linear extension because same-level entries commute.
    let mut points: Vec<(usize, usize, bool, Option<usize>)> = entries
        .iter()
        .map(|e| (e.level, e.column + 2, out_bits[e.id], Some(e.id)))
        .collect();
    points.push((y + 1, 2, wedge.0, None));
    points.push((y, 1, wedge.1, None));
    points.push((y - 1, 2, wedge.2, None));
    points.sort_by_key(|p| (p.0, p.1));
    for pair in points.windows(2) {
        debug_assert!(
            pair[0].0 != pair[1].0 || pair[0].1 + 1 < pair[1].1,
            "same-level image entries must commute"
        );
    }
    let image_system = build_system(Family::A, system.rank() + 1)?;
    Ok(PiImage {
        system: image_system,
        word: points.iter().map(|p| p.1 - 1).collect(),
        mask: Mask::new(points.iter().map(|p| p.2).collect()),
        source: points.iter().map(|p| p.3).collect(),
    })
}

/// [`pi_project_word`] on the canonical reduced word of w. The mask
/// indexes that word.
pub fn pi_project(w: &Element, mask: &Mask) -> Result<PiImage> {
    pi_project_word(w.system(), &canonical_reduced_word(w), mask)
}

/// Deletes the columns up to and including the leftmost column carrying a
/// non-distinct minimal pair of a non-convex type D element, and rereads
/// the rest as a type A element (old column c becomes column c - cut).
/// Every deleted column must contain exactly two entries; that is asserted,
/// not returned as an error.
pub fn strip_nonconvex_prefix(x: &Element) -> Result<Element> {
    let system = x.system();
    if system.family() != Family::D {
        return Err(Error::Precondition(format!(
            "prefix stripping starts from type D, not {}",
            system.descriptor()
        )));
    }
    let (pairs, convex) = minimal_pairs_and_convexity(x)?;
    if convex {
        return Err(Error::Precondition(
            "prefix stripping needs a non-convex element".into(),
        ));
    }
    let cut = pairs
        .iter()
        .filter(|p| p.resolution != Resolution::Distinct)
        .map(|p| p.column)
        .min()
        .expect("a non-convex element has a non-distinct pair");
    let word = canonical_reduced_word(x);
    let heap = heap_from_word(system, &word)?;
    for c in 1..=cut {
        let count = heap.entries().iter().filter(|e| e.column == c).count();
        assert!(
            count == 2,
            "stripped column {c} must contain exactly two entries, found {count}"
        );
    }
    let image_system = build_system(Family::A, system.rank() - 1 - cut)?;
    let image_word: Word = heap
        .entries()
        .iter()
        .filter(|e| e.column > cut)
        .map(|e| e.column - cut - 1)
        .collect();
    let (element, _) = element_from_word(&image_system, &image_word)?;
    Ok(element)
}

/// Draws a decorated heap as text, top level first. Column c starts at
/// character offset 2(c-1); mask-1 entries print '#', plain zeros 'o',
/// zero-defects 'D'. A shared type D fork point prints the plain
/// generator's glyph followed by '~'.
pub fn render_ascii(decorated: &DecoratedHeap) -> String {
    let heap = &decorated.heap;
    if heap.is_empty() {
        return String::new();
    }
    let mut rows = Vec::new();
    for level in (1..=heap.max_level()).rev() {
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in heap.entries() {
            if e.level == level {
                cells.entry(e.column).or_default().push(e.id);
            }
        }
        let mut row: Vec<char> = Vec::new();
        let put = |row: &mut Vec<char>, offset: usize, ch: char| {
            if row.len() <= offset {
                row.resize(offset + 1, ' ');
            }
            row[offset] = ch;
        };
        for (column, ids) in cells {
            let offset = 2 * (column - 1);
            if ids.len() == 2 {
                let plain = ids
                    .iter()
                    .copied()
                    .find(|&i| heap.entries()[i].letter != 0)
                    .expect("a shared point pairs the fork generators");
                put(&mut row, offset, decorated.decorations[plain].glyph());
                put(&mut row, offset + 1, '~');
            } else {
                put(&mut row, offset, decorated.decorations[ids[0]].glyph());
            }
        }
        rows.push(row.into_iter().collect::<String>());
    }
    rows.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{enumerate_elements, reduced_words};
    use crate::masks::{is_deodhar, mu_masks, subexpression};

    fn sys(family: Family, rank: usize) -> Arc<CoxeterSystem> {
        build_system(family, rank).unwrap()
    }

    fn heap_of(system: &Arc<CoxeterSystem>, labels: &str) -> Heap {
        heap_from_word(system, &system.parse_word(labels).unwrap()).unwrap()
    }

    fn decorated_of(system: &Arc<CoxeterSystem>, labels: &str, mask: &str) -> DecoratedHeap {
        decorate(&heap_of(system, labels), &Mask::parse(mask).unwrap()).unwrap()
    }

    fn points(heap: &Heap) -> Vec<(usize, usize)> {
        heap.entries().iter().map(|e| (e.column, e.level)).collect()
    }

    fn all_masks(len: usize) -> Vec<Mask> {
        (0u32..(1 << len))
            .map(|bits| Mask::new((0..len).map(|j| bits >> j & 1 == 1).collect()))
            .collect()
    }

    #[test]
    fn gravity_placement() {
        let a5 = sys(Family::A, 5);
        let h = heap_of(&a5, "1 4 2 3 5");
        assert_eq!(points(&h), vec![(1, 1), (4, 1), (2, 2), (3, 3), (5, 2)]);
        assert_eq!(h.covers(), &[(0, 2), (1, 3), (1, 4), (2, 3)]);
        assert_eq!(h.maximal_entries(), vec![3, 4]);

        let single = heap_of(&sys(Family::A, 4), "3");
        assert_eq!(points(&single), vec![(3, 1)]);
        assert!(single.covers().is_empty());

        // Same-letter entries block each other even across a commuting gap.
        let chain = heap_of(&sys(Family::A, 2), "2 1 2");
        assert_eq!(points(&chain), vec![(2, 1), (1, 2), (2, 3)]);
        assert_eq!(chain.covers(), &[(0, 1), (1, 2)]);

        let flat = heap_of(&sys(Family::A, 3), "1 3");
        assert_eq!(points(&flat), vec![(1, 1), (3, 1)]);

        assert!(heap_of(&a5, "").is_empty());
        assert!(matches!(
            heap_from_word(&a5, &[5]),
            Err(Error::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn type_d_fork_shares_a_point() {
        let d4 = sys(Family::D, 4);
        let h = heap_of(&d4, "1~ 2 3 1 2 1~ 1");
        assert_eq!(
            points(&h),
            vec![(1, 1), (2, 2), (3, 3), (1, 3), (2, 4), (1, 5), (1, 5)]
        );
        // Already compact: the fork pair sharing (1, 5) stays put.
        assert_eq!(points(&coalesce(&h)), points(&h));
        assert_eq!(h.occupied_points().len(), 6);
    }

    #[test]
    fn coalescing_golden() {
        let a5 = sys(Family::A, 5);
        let h = heap_of(&a5, "1 4 2 3 5");
        let c = coalesce(&h);
        assert_eq!(points(&c), vec![(1, 1), (4, 2), (2, 2), (3, 3), (5, 3)]);
        assert_eq!(points(&coalesce(&c)), points(&c));
        assert_eq!(c.covers(), h.covers());
        assert_eq!(c.word(), h.word());

        // Nothing within reach: no motion.
        let flat = heap_of(&sys(Family::A, 3), "1 3");
        assert_eq!(points(&coalesce(&flat)), vec![(1, 1), (3, 1)]);
    }

    #[test]
    fn heaps_isomorphic_across_words() {
        fn canon(h: &Heap) -> (Vec<(usize, usize, usize)>, Vec<(usize, usize)>) {
            let mut order: Vec<usize> = (0..h.len()).collect();
            order.sort_by_key(|&i| {
                let e = &h.entries()[i];
                (e.column, e.level, e.letter)
            });
            let mut rank = vec![0; h.len()];
            for (r, &i) in order.iter().enumerate() {
                rank[i] = r;
            }
            let ents = order
                .iter()
                .map(|&i| {
                    let e = &h.entries()[i];
                    (e.column, e.level, e.letter)
                })
                .collect();
            let mut covs: Vec<(usize, usize)> =
                h.covers().iter().map(|&(a, b)| (rank[a], rank[b])).collect();
            covs.sort();
            (ents, covs)
        }
        let a4 = sys(Family::A, 4);
        for x in enumerate_elements(&a4, None) {
            if !is_short_braid_avoiding(&x) {
                continue;
            }
            let words = reduced_words(&x, None);
            let base = canon(&heap_from_word(&a4, &words[0]).unwrap());
            for word in &words[1..] {
                assert_eq!(base, canon(&heap_from_word(&a4, word).unwrap()));
            }
        }
    }

    #[test]
    fn string_goldens() {
        let a3 = sys(Family::A, 3);
        let d = decorated_of(&a3, "1 2 1", "111");
        let diagram = strings(&d).unwrap();
        assert_eq!(diagram.top_assignment, vec![3, 2, 1, 4]);
        assert_eq!(diagram.bottom_assignment, vec![1, 2, 3, 4]);
        assert_eq!(diagram.participants, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(diagram.paths[0], vec![(1, 1), (2, 2)]);

        let a5 = sys(Family::A, 5);
        let d = decorated_of(&a5, "1 4 2 3 5", "11111");
        assert_eq!(
            strings(&d).unwrap().top_assignment,
            vec![2, 3, 5, 1, 6, 4]
        );

        let d4 = sys(Family::D, 4);
        let d = decorated_of(&d4, "1~ 2 3 1 2 1~ 1", "1111111");
        let diagram = strings(&d).unwrap();
        assert_eq!(diagram.top_assignment, vec![-3, -4, -2, -1]);
        assert_eq!(diagram.bottom_assignment, vec![1, 2, 3, 4]);

        // Type B traces with the type A rules on rank+1 strings.
        let b3 = sys(Family::B, 3);
        let d = decorated_of(&b3, "0 1 0", "111");
        assert_eq!(strings(&d).unwrap().top_assignment, vec![3, 2, 1, 4]);

        let g2 = sys(Family::G, 2);
        let d = decorated_of(&g2, "1 2", "11");
        assert!(matches!(strings(&d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn strings_read_the_subexpression() {
        for (family, rank) in [(Family::A, 3), (Family::D, 3)] {
            let system = sys(family, rank);
            for x in enumerate_elements(&system, None) {
                for word in reduced_words(&x, None) {
                    let heap = heap_from_word(&system, &word).unwrap();
                    for mask in all_masks(word.len()) {
                        let decorated = decorate(&heap, &mask).unwrap();
                        let top = strings(&decorated).unwrap().top_assignment;
                        let sub = subexpression(&system, &word, &mask).unwrap();
                        assert_eq!(top, sub.one_line().unwrap());
                    }
                }
            }
        }
        // Exhaustive over masks on the canonical word at the next rank.
        for (family, rank) in [(Family::A, 4), (Family::D, 4)] {
            let system = sys(family, rank);
            for x in enumerate_elements(&system, None) {
                let word = canonical_reduced_word(&x);
                let heap = heap_from_word(&system, &word).unwrap();
                for mask in all_masks(word.len()) {
                    let decorated = decorate(&heap, &mask).unwrap();
                    let top = strings(&decorated).unwrap().top_assignment;
                    let sub = subexpression(&system, &word, &mask).unwrap();
                    assert_eq!(top, sub.one_line().unwrap());
                }
            }
        }
        // Type B tops equal the transported type A subexpression.
        let b3 = sys(Family::B, 3);
        let a3 = sys(Family::A, 3);
        for x in enumerate_elements(&b3, None) {
            for word in reduced_words(&x, None) {
                let heap = heap_from_word(&b3, &word).unwrap();
                for mask in all_masks(word.len()) {
                    let decorated = decorate(&heap, &mask).unwrap();
                    let top = strings(&decorated).unwrap().top_assignment;
                    let transported = subexpression(&a3, &word, &mask).unwrap();
                    assert_eq!(top, transported.one_line().unwrap());
                }
            }
        }
    }

    #[test]
    fn string_parity_goldens() {
        let a3 = sys(Family::A, 3);
        let d = decorated_of(&a3, "2 1 3 2", "1000");
        assert!(defect_by_string_parity(&d, 3).unwrap());
        assert!(!defect_by_string_parity(&d, 1).unwrap());
        // The parity test ignores the entry's own bit: a one-defect too.
        let d = decorated_of(&a3, "2 1 3 2", "1001");
        assert!(defect_by_string_parity(&d, 3).unwrap());
        let d = decorated_of(&a3, "1 3", "11");
        assert!(!defect_by_string_parity(&d, 0).unwrap());
        assert!(!defect_by_string_parity(&d, 1).unwrap());
        assert!(matches!(
            defect_by_string_parity(&d, 2),
            Err(Error::InvalidInput(_))
        ));
        let b3 = sys(Family::B, 3);
        let d = decorated_of(&b3, "0 1", "11");
        assert!(matches!(
            defect_by_string_parity(&d, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn string_parity_matches_defect_status() {
        let a3 = sys(Family::A, 3);
        for x in enumerate_elements(&a3, None) {
            for word in reduced_words(&x, None) {
                let heap = heap_from_word(&a3, &word).unwrap();
                for mask in all_masks(word.len()) {
                    let decorated = decorate(&heap, &mask).unwrap();
                    for j in 0..word.len() {
                        assert_eq!(
                            defect_by_string_parity(&decorated, j).unwrap(),
                            decorated.statuses[j].is_defect()
                        );
                    }
                }
            }
        }
        // Type D: the signed comparison covers every non-fork entry.
        for rank in [3, 4] {
            let dn = sys(Family::D, rank);
            for x in enumerate_elements(&dn, None) {
                let word = canonical_reduced_word(&x);
                let heap = heap_from_word(&dn, &word).unwrap();
                for mask in all_masks(word.len()) {
                    let decorated = decorate(&heap, &mask).unwrap();
                    for j in 0..word.len() {
                        if word[j] == 0 {
                            assert!(matches!(
                                defect_by_string_parity(&decorated, j),
                                Err(Error::Unsupported(_))
                            ));
                        } else {
                            assert_eq!(
                                defect_by_string_parity(&decorated, j).unwrap(),
                                decorated.statuses[j].is_defect()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shape_detection() {
        let a3 = sys(Family::A, 3);
        let tall = heap_of(&a3, "2 1 3 2 1 3 2 1 3 2");
        assert!(detect_shape(&tall, Shape::FourStack));
        assert!(detect_shape(&tall, Shape::ThreeStack));
        assert!(detect_shape(&tall, Shape::IShape));

        let mid = heap_of(&a3, "2 1 3 2 1 3 2");
        assert!(detect_shape(&mid, Shape::ThreeStack));
        assert!(!detect_shape(&mid, Shape::FourStack));
        assert!(!detect_shape(&mid, Shape::IShape));

        let small = heap_of(&a3, "2 1 3 2");
        assert!(!detect_shape(&small, Shape::ThreeStack));
        assert!(!detect_shape(&small, Shape::FourStack));
        assert!(!detect_shape(&small, Shape::IShape));

        // Translation invariance: the same pattern one column over.
        let a5 = sys(Family::A, 5);
        let shifted = heap_of(&a5, "3 2 4 3 2 4 3 2 4 3");
        assert!(detect_shape(&shifted, Shape::FourStack));
        assert!(detect_shape(&shifted, Shape::IShape));

        let empty = heap_of(&a3, "");
        let single = heap_of(&a3, "2");
        for shape in [Shape::ThreeStack, Shape::FourStack, Shape::IShape] {
            assert!(!detect_shape(&empty, shape));
            assert!(!detect_shape(&single, shape));
        }
    }

    #[test]
    fn short_braid_avoidance() {
        let a2 = sys(Family::A, 2);
        let fc: Vec<bool> = enumerate_elements(&a2, None)
            .map(|x| is_short_braid_avoiding(&x))
            .collect();
        assert_eq!(fc.iter().filter(|&&b| b).count(), 5);

        for (family, rank, expected) in [
            (Family::A, 3, 14),
            (Family::A, 4, 42),
            (Family::D, 3, 14),
        ] {
            let system = sys(family, rank);
            let count = enumerate_elements(&system, None)
                .filter(is_short_braid_avoiding)
                .count();
            assert_eq!(count, expected, "{family}{rank}");
        }

        // Brute force: scan every reduced word for a factor s t s.
        for (family, rank) in [(Family::A, 3), (Family::D, 3), (Family::B, 3)] {
            let system = sys(family, rank);
            for x in enumerate_elements(&system, None) {
                let brute = !reduced_words(&x, None).iter().any(|word| {
                    word.windows(3).any(|w| {
                        w[0] == w[2] && system.coxeter_order(w[0], w[1]) >= 3
                    })
                });
                assert_eq!(is_short_braid_avoiding(&x), brute);
            }
        }
    }

    #[test]
    fn minimal_pairs_golden() {
        let a3 = sys(Family::A, 3);
        let x = element_from_word(&a3, &a3.parse_word("2 1 3 2").unwrap())
            .unwrap()
            .0;
        let (pairs, convex) = minimal_pairs_and_convexity(&x).unwrap();
        assert!(convex);
        assert_eq!(
            pairs,
            vec![MinimalPair {
                lower: 0,
                upper: 3,
                column: 2,
                resolvers: (1, 2),
                resolution: Resolution::Distinct,
            }]
        );

        let d3 = sys(Family::D, 3);
        let x = element_from_word(&d3, &d3.parse_word("2 1 1~ 2").unwrap())
            .unwrap()
            .0;
        let (pairs, convex) = minimal_pairs_and_convexity(&x).unwrap();
        assert!(!convex);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].column, 2);
        assert_eq!(pairs[0].resolution, Resolution::Left);

        // A fork entry between a column-1 pair breaks its minimality, so
        // the projection golden below is convex.
        let d4 = sys(Family::D, 4);
        let x = element_from_word(&d4, &d4.parse_word("1 2 1~ 3 2 1").unwrap())
            .unwrap()
            .0;
        let (pairs, convex) = minimal_pairs_and_convexity(&x).unwrap();
        assert!(convex);
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].lower, pairs[0].upper), (1, 4));
        assert_eq!(pairs[0].resolution, Resolution::Distinct);

        let no_repeats = element_from_word(&a3, &a3.parse_word("1 3").unwrap())
            .unwrap()
            .0;
        let (pairs, convex) = minimal_pairs_and_convexity(&no_repeats).unwrap();
        assert!(pairs.is_empty() && convex);

        let braid = element_from_word(&a3, &a3.parse_word("1 2 1").unwrap())
            .unwrap()
            .0;
        assert!(matches!(
            minimal_pairs_and_convexity(&braid),
            Err(Error::Precondition(_))
        ));
        let b2 = sys(Family::B, 2);
        assert!(matches!(
            minimal_pairs_and_convexity(&Element::identity(&b2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn critical_zero_goldens() {
        let a3 = sys(Family::A, 3);
        let d = decorated_of(&a3, "2 1 3 2", "1000");
        assert_eq!(critical_zeros(&d, 3).unwrap(), (Some(1), Some(2), true));
        assert!(matches!(
            critical_zeros(&d, 0),
            Err(Error::InvalidInput(_))
        ));

        // One side may be empty: here the left string rises untouched.
        let a2 = sys(Family::A, 2);
        let d = decorated_of(&a2, "1 2 1", "100");
        assert_eq!(critical_zeros(&d, 2).unwrap(), (None, Some(1), true));

        let d3 = sys(Family::D, 3);
        let d = decorated_of(&d3, "1 2", "10");
        assert!(matches!(
            critical_zeros(&d, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn defect_graph_small() {
        let a3 = sys(Family::A, 3);
        let d = decorated_of(&a3, "2 1 3 2", "1000");
        let g = defect_graph(&d).unwrap();
        assert_eq!(g.vertices, vec![3]);
        assert!(g.edges.is_empty());
        assert_eq!(g.critical_zero_table, vec![(3, Some(1), Some(2))]);
        assert!(g.is_tree());
        assert!(g.is_forest());

        // No zero-defects: the empty graph is a forest but not a tree.
        let d = decorated_of(&a3, "2 1 3 2", "1111");
        let g = defect_graph(&d).unwrap();
        assert!(g.vertices.is_empty() && g.edges.is_empty());
        assert!(g.is_forest());
        assert!(!g.is_tree());
    }

    #[test]
    fn worked_mu_mask_example() {
        // A length-17 word in A8 read level by level, carrying a mu-mask
        // with five zero-defects a..e whose defect graph is a tree.
        let a8 = sys(Family::A, 8);
        let word = a8.parse_word("5 4 6 3 5 7 2 4 6 8 1 3 5 7 2 4 3").unwrap();
        let mask = Mask::parse("11001110000000001").unwrap();
        let heap = heap_from_word(&a8, &word).unwrap();
        let levels: Vec<usize> = heap.entries().iter().map(|e| e.level).collect();
        assert_eq!(
            levels,
            vec![1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 6, 6, 7]
        );
        let decorated = decorate(&heap, &mask).unwrap();
        let profile = defect_profile(&a8, &word, &mask).unwrap();
        assert_eq!(profile.deodhar_statistic, 1);
        assert_eq!(
            profile.subexpression.one_line().unwrap(),
            &[1, 3, 6, 2, 5, 4, 8, 7, 9]
        );
        let count = |d: Decoration| decorated.decorations.iter().filter(|&&x| x == d).count();
        assert_eq!(count(Decoration::MaskOne), 6);
        assert_eq!(count(Decoration::PlainZero), 6);
        assert_eq!(count(Decoration::ZeroDefect), 5);

        let w = element_from_word(&a8, &word).unwrap().0;
        assert!(is_deodhar(&w));
        assert!(mu_masks(&a8, &word, &profile.subexpression)
            .unwrap()
            .contains(&mask));

        let g = defect_graph(&decorated).unwrap();
        assert_eq!(g.vertices, vec![7, 12, 13, 14, 15]);
        let sets: HashMap<usize, HashSet<usize>> = g
            .critical_zero_table
            .iter()
            .map(|&(d, l, r)| {
                assert!(l.is_some() && r.is_some());
                (d, [Some(d), l, r].into_iter().flatten().collect())
            })
            .collect();
        assert_eq!(sets[&7], HashSet::from([2, 3, 7]));
        assert_eq!(sets[&12], HashSet::from([7, 8, 12]));
        assert_eq!(sets[&13], HashSet::from([8, 9, 13]));
        assert_eq!(sets[&14], HashSet::from([10, 11, 14]));
        assert_eq!(sets[&15], HashSet::from([11, 12, 15]));
        assert_eq!(g.edges, vec![(7, 12), (12, 13), (12, 15), (14, 15)]);
        assert!(g.is_tree());
    }

    #[test]
    fn deodhar_defect_graphs_are_calibrated() {
        // Over every mask on every Deodhar element of S5: graphs are
        // forests, no entry is critical for more than two zero-defects
        // (itself included), every zero-defect has both critical zeros,
        // and mu-masks are exactly the proper masks with a tree graph and
        // every plain zero critical (single plain zero when no defect).
        let a4 = sys(Family::A, 4);
        for x in enumerate_elements(&a4, None) {
            if !is_deodhar(&x) {
                continue;
            }
            let word = canonical_reduced_word(&x);
            let heap = heap_from_word(&a4, &word).unwrap();
            for mask in all_masks(word.len()) {
                let decorated = decorate(&heap, &mask).unwrap();
                let g = defect_graph(&decorated).unwrap();
                assert!(g.is_forest());
                let mut critical_for: HashMap<usize, usize> = HashMap::new();
                let mut critical: HashSet<usize> = HashSet::new();
                for &(d, l, r) in &g.critical_zero_table {
                    assert!(l.is_some() && r.is_some());
                    for e in [Some(d), l, r].into_iter().flatten() {
                        *critical_for.entry(e).or_insert(0) += 1;
                        critical.insert(e);
                    }
                }
                assert!(critical_for.values().all(|&c| c <= 2));

                let profile = defect_profile(&a4, &word, &mask).unwrap();
                let is_mu = mask.is_proper() && profile.deodhar_statistic == 1;
                let plain_zeros: Vec<usize> = (0..word.len())
                    .filter(|&j| profile.statuses[j] == PositionStatus::PlainZero)
                    .collect();
                if g.vertices.is_empty() {
                    // Degenerate case: no defects to hang a graph on.
                    assert_eq!(is_mu, mask.is_proper() && plain_zeros.len() == 1);
                } else {
                    let characterized =
                        g.is_tree() && plain_zeros.iter().all(|j| critical.contains(j));
                    assert_eq!(is_mu, characterized);
                }
            }
        }
    }

    #[test]
    fn deodhar_heaps_avoid_shapes() {
        // Deodhar type A heaps contain neither an I-shape nor a 4-stack.
        let a5 = sys(Family::A, 5);
        for x in enumerate_elements(&a5, None) {
            if !is_deodhar(&x) {
                continue;
            }
            let heap = coalesce(&heap_from_word(&a5, &canonical_reduced_word(&x)).unwrap());
            assert!(!detect_shape(&heap, Shape::IShape));
            assert!(!detect_shape(&heap, Shape::FourStack));
        }
        // Same for convex Deodhar type D heaps occupying at least two
        // column-1 levels.
        let d4 = sys(Family::D, 4);
        for x in enumerate_elements(&d4, None) {
            if !is_deodhar(&x) || !is_short_braid_avoiding(&x) {
                continue;
            }
            let (_, convex) = minimal_pairs_and_convexity(&x).unwrap();
            if !convex {
                continue;
            }
            let heap = coalesce(&heap_from_word(&d4, &canonical_reduced_word(&x)).unwrap());
            let column_one_levels: HashSet<usize> = heap
                .entries()
                .iter()
                .filter(|e| e.column == 1)
                .map(|e| e.level)
                .collect();
            if column_one_levels.len() < 2 {
                continue;
            }
            assert!(!detect_shape(&heap, Shape::IShape));
            assert!(!detect_shape(&heap, Shape::FourStack));
        }
    }

    #[test]
    fn mu_masks_have_no_maximal_one_defect() {
        // A one-defect at a heap-maximal entry would let the mask drop it
        // and lower D below 1, so mu-masks never carry one.
        let a4 = sys(Family::A, 4);
        for x in enumerate_elements(&a4, None) {
            if !is_deodhar(&x) {
                continue;
            }
            let word = canonical_reduced_word(&x);
            let heap = heap_from_word(&a4, &word).unwrap();
            let maximal = heap.maximal_entries();
            for mask in all_masks(word.len()) {
                let profile = defect_profile(&a4, &word, &mask).unwrap();
                if !(mask.is_proper() && profile.deodhar_statistic == 1) {
                    continue;
                }
                for &m in &maximal {
                    assert_ne!(profile.statuses[m], PositionStatus::OneDefect);
                }
            }
        }
    }

    #[test]
    fn projection_plain_one_golden() {
        // All-ones mask: the top column-1 entry is a plain one, the wedge
        // fills with ones, and D stays 0.
        let d3 = sys(Family::D, 3);
        let word = d3.parse_word("1 2 1~ 2 1").unwrap();
        let mask = Mask::all_ones(5);
        let image = pi_project_word(&d3, &word, &mask).unwrap();
        assert_eq!(image.system.descriptor(), "A4");
        assert_eq!(image.word, image.system.parse_word("3 2 4 1 3 2 4 3").unwrap());
        assert_eq!(image.mask, Mask::all_ones(8));
        assert_eq!(
            image.source,
            vec![
                Some(0),
                None,
                Some(1),
                None,
                Some(2),
                None,
                Some(3),
                Some(4)
            ]
        );
        let input_d = defect_profile(&d3, &word, &mask)
            .unwrap()
            .deodhar_statistic;
        let image_d = defect_profile(&image.system, &image.word, &image.mask)
            .unwrap()
            .deodhar_statistic;
        assert_eq!(input_d, 0);
        assert_eq!(image_d, 0);
    }

    #[test]
    fn projection_split_defect_golden() {
        // The top entry is a zero-defect whose strings do not meet the
        // middle entry's: the wedge gets (1,0,1) and the middle bit flips.
        let d4 = sys(Family::D, 4);
        let word = d4.parse_word("1 2 1~ 3 2 1").unwrap();
        let mask = Mask::parse("110010").unwrap();
        let image = pi_project(
            &element_from_word(&d4, &word).unwrap().0,
            &mask,
        )
        .unwrap();
        assert_eq!(image.system.descriptor(), "A5");
        assert_eq!(
            image.word,
            image.system.parse_word("3 2 4 1 3 5 2 4 3").unwrap()
        );
        assert_eq!(image.mask, Mask::parse("111010110").unwrap());
        assert_eq!(
            image.source,
            vec![
                Some(0),
                None,
                Some(1),
                None,
                Some(2),
                Some(3),
                None,
                Some(4),
                Some(5)
            ]
        );

        let input_profile = defect_profile(&d4, &word, &mask).unwrap();
        let image_profile =
            defect_profile(&image.system, &image.word, &image.mask).unwrap();
        assert_eq!(input_profile.deodhar_statistic, 1);
        assert_eq!(image_profile.deodhar_statistic, 1);

        // The image is again a mu-mask of a Deodhar element.
        let image_element = element_from_word(&image.system, &image.word).unwrap().0;
        assert!(is_deodhar(&image_element));
        assert!(
            mu_masks(&image.system, &image.word, &image_profile.subexpression)
                .unwrap()
                .contains(&image.mask)
        );

        // Decorations right of column 1 survive; the fine status need
        // not: the one-defect at input position 4 lands as a plain one.
        for (image_pos, src) in image.source.iter().enumerate() {
            let Some(s) = *src else { continue };
            if d4.column(word[s]) >= 2 {
                assert_eq!(
                    Decoration::from_status(image_profile.statuses[image_pos]),
                    Decoration::from_status(input_profile.statuses[s])
                );
            }
        }
        assert_eq!(
            input_profile.statuses[4],
            PositionStatus::OneDefect
        );
        let image_pos_of_4 = image.source.iter().position(|&s| s == Some(4)).unwrap();
        assert_eq!(
            image_profile.statuses[image_pos_of_4],
            PositionStatus::PlainOne
        );
    }

    #[test]
    fn projection_preconditions() {
        let d4 = sys(Family::D, 4);
        // Two column-1 entries only.
        let word = d4.parse_word("1 2 1~").unwrap();
        assert!(matches!(
            pi_project_word(&d4, &word, &Mask::all_ones(3)),
            Err(Error::Precondition(_))
        ));
        // An entry northeast of the top column-1 entry.
        let word = d4.parse_word("1 2 1~ 3 2 1 2").unwrap();
        assert!(matches!(
            pi_project_word(&d4, &word, &Mask::all_ones(7)),
            Err(Error::Precondition(_))
        ));
        // Column-1 letters fail to alternate.
        let word = d4.parse_word("1 2 1 3 2 1~").unwrap();
        assert!(matches!(
            pi_project_word(&d4, &word, &Mask::all_ones(6)),
            Err(Error::Precondition(_))
        ));
        // A top entry status outside the table.
        let word = d4.parse_word("1 2 1~ 3 2 1").unwrap();
        assert!(matches!(
            pi_project_word(&d4, &word, &Mask::all_zeros(6)),
            Err(Error::Unsupported(_))
        ));
        // Wrong family.
        let a3 = sys(Family::A, 3);
        let word = a3.parse_word("1 2 1").unwrap();
        assert!(matches!(
            pi_project_word(&a3, &word, &Mask::all_ones(3)),
            Err(Error::Precondition(_))
        ));
        // Mask length mismatch surfaces from decoration.
        let word = d4.parse_word("1 2 1~ 3 2 1").unwrap();
        assert!(matches!(
            pi_project_word(&d4, &word, &Mask::all_ones(5)),
            Err(Error::MaskLengthMismatch { .. })
        ));
    }

    #[test]
    fn strip_prefix_goldens() {
        // Both columns strip away: the image is the trivial element.
        let d3 = sys(Family::D, 3);
        let x = element_from_word(&d3, &d3.parse_word("2 1 1~ 2").unwrap())
            .unwrap()
            .0;
        let stripped = strip_nonconvex_prefix(&x).unwrap();
        assert!(stripped.is_identity());
        assert_eq!(stripped.system().descriptor(), "A0");

        let d4 = sys(Family::D, 4);
        let x = element_from_word(&d4, &d4.parse_word("2 1 1~ 2").unwrap())
            .unwrap()
            .0;
        let stripped = strip_nonconvex_prefix(&x).unwrap();
        assert!(stripped.is_identity());
        assert_eq!(stripped.system().descriptor(), "A1");

        // One entry survives right of the cut.
        let x = element_from_word(&d4, &d4.parse_word("2 1 1~ 2 3").unwrap())
            .unwrap()
            .0;
        let stripped = strip_nonconvex_prefix(&x).unwrap();
        assert_eq!(stripped.one_line().unwrap(), &[2, 1]);

        // Convex input is rejected.
        let convex = element_from_word(&d4, &d4.parse_word("1 2 1~ 3 2 1").unwrap())
            .unwrap()
            .0;
        assert!(matches!(
            strip_nonconvex_prefix(&convex),
            Err(Error::Precondition(_))
        ));
        let a3 = sys(Family::A, 3);
        assert!(matches!(
            strip_nonconvex_prefix(&Element::identity(&a3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ascii_rendering() {
        let a3 = sys(Family::A, 3);
        let d = decorated_of(&a3, "2 1 3 2", "1000");
        assert_eq!(render_ascii(&d), "  D\no   o\n  #");

        let a5 = sys(Family::A, 5);
        let heap = coalesce(&heap_of(&a5, "1 4 2 3 5"));
        let d = decorate(&heap, &Mask::all_ones(5)).unwrap();
        assert_eq!(render_ascii(&d), "    #   #\n  #   #\n#");

        let d4 = sys(Family::D, 4);
        let d = decorated_of(&d4, "1~ 2 3 1 2 1~ 1", "1111111");
        assert_eq!(render_ascii(&d), "#~\n  #\n#   #\n  #\n#");

        let empty = decorated_of(&a3, "", "");
        assert_eq!(render_ascii(&empty), "");
    }

    #[test]
    fn type_b_transport_on_deodhar_elements() {
        // For Deodhar elements of B3, reinterpreting any reduced word in
        // A3 preserves reducedness, every defect status, and D.
        let b3 = sys(Family::B, 3);
        let a3 = sys(Family::A, 3);
        let mut deodhar = 0;
        for x in enumerate_elements(&b3, None) {
            if !is_deodhar(&x) {
                continue;
            }
            deodhar += 1;
            let word = canonical_reduced_word(&x);
            let (_, reduced) = element_from_word(&a3, &word).unwrap();
            assert!(reduced);
            for mask in all_masks(word.len()) {
                let b = defect_profile(&b3, &word, &mask).unwrap();
                let a = defect_profile(&a3, &word, &mask).unwrap();
                assert_eq!(b.statuses, a.statuses);
                assert_eq!(b.deodhar_statistic, a.deodhar_statistic);
            }
        }
        assert!(deodhar > 0);

        // Outside the Deodhar class the transport can break down: this
        // reduced B3 word is no longer reduced in A3.
        let word = b3.parse_word("0 1 0 1").unwrap();
        let (x, reduced) = element_from_word(&b3, &word).unwrap();
        assert!(reduced);
        assert_eq!(x.one_line().unwrap(), &[-1, -2, 3]);
        let (_, reduced_a) = element_from_word(&a3, &word).unwrap();
        assert!(!reduced_a);
    }
}
