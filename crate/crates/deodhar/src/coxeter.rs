//! Finite Weyl group kernel: systems, elements, words, and Bruhat order.
//!
//! Types A, B, D carry elements as signed 1-line notation; E6-E8, F4, G2
//! carry them as integer matrices acting on simple-root coordinates. All
//! arithmetic is exact integer arithmetic.
//!
//! Generator indices are dense `usize` values. Display labels follow the
//! usual diagram conventions: type A uses "1".."n", type B uses "0".."n-1"
//! with "0" the sign flip, type D uses "1~" then "1".."n-1", and E/F/G use
//! "1".."n" (Bourbaki numbering for E).

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::Error;
use crate::Result;

/// Weyl group family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(Error::Configuration(other.to_string())),
        }
    }
}

/// A word in the generators, as internal indices.
pub type Word = Vec<usize>;

/// Which side a generator acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// A finite Weyl group together with its root datum.
///
/// Immutable after construction; share via `Arc`.
pub struct CoxeterSystem {
    family: Family,
    rank: usize,
    coxeter_matrix: Vec<Vec<u32>>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    labels: Vec<String>,
    uses_matrix: bool,
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.rank == other.rank
    }
}
impl Eq for CoxeterSystem {}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({self})")
    }
}

/// Builds the Coxeter system for the given family and rank.
///
/// Supported ranks: A n>=0 (rank 0 is the trivial group), B n>=1, D n>=2,
/// E 6..8, F 4, G 2. Anything else is a configuration error.
pub fn build_system(family: Family, rank: usize) -> Result<Arc<CoxeterSystem>> {
    let supported = match family {
        Family::A => true,
        Family::B => rank >= 1,
        Family::D => rank >= 2,
        Family::E => (6..=8).contains(&rank),
        Family::F => rank == 4,
        Family::G => rank == 2,
    };
    if !supported {
        return Err(Error::Configuration(format!("{family}{rank}")));
    }
    let coxeter_matrix = coxeter_orders(family, rank);
    let cartan = cartan_matrix(family, rank, &coxeter_matrix);
    let positive_roots = positive_roots_by_closure(&cartan);
    let labels = generator_labels(family, rank);
    Ok(Arc::new(CoxeterSystem {
        family,
        rank,
        coxeter_matrix,
        cartan,
        positive_roots,
        labels,
        uses_matrix: matches!(family, Family::E | Family::F | Family::G),
    }))
}

fn coxeter_orders(family: Family, rank: usize) -> Vec<Vec<u32>> {
    fn set(m: &mut [Vec<u32>], a: usize, b: usize, v: u32) {
        m[a][b] = v;
        m[b][a] = v;
    }
    let mut m = vec![vec![2u32; rank]; rank];
    for s in 0..rank {
        m[s][s] = 1;
    }
    match family {
        Family::A => {
            for i in 1..rank {
                set(&mut m, i - 1, i, 3);
            }
        }
        Family::B => {
            if rank >= 2 {
                set(&mut m, 0, 1, 4);
            }
            for i in 2..rank {
                set(&mut m, i - 1, i, 3);
            }
        }
        Family::D => {
            if rank >= 3 {
                set(&mut m, 0, 2, 3);
            }
            for i in 2..rank {
                set(&mut m, i - 1, i, 3);
            }
        }
        Family::E => {
            for &(a, b) in &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)] {
                if b < rank {
                    set(&mut m, a, b, 3);
                }
            }
        }
        Family::F => {
            set(&mut m, 0, 1, 3);
            set(&mut m, 1, 2, 4);
            set(&mut m, 2, 3, 3);
        }
        Family::G => {
            set(&mut m, 0, 1, 6);
        }
    }
    m
}

/// Cartan entries c[s][t] = 2(a_s, a_t)/(a_s, a_s), so that the simple
/// reflection acts on root coordinates v by v[s] -= sum_t c[s][t] v[t].
fn cartan_matrix(family: Family, rank: usize, m: &[Vec<u32>]) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; rank]; rank];
    for s in 0..rank {
        for t in 0..rank {
            c[s][t] = if s == t {
                2
            } else {
                match m[s][t] {
                    2 => 0,
                    // Bond order 4 or 6 entries default to -1; the short-root
                    // side is overridden below.
                    3 | 4 | 6 => -1,
                    other => unreachable!("bond order {other}"),
                }
            };
        }
    }
    match family {
        Family::B if rank >= 2 => c[0][1] = -2,
        Family::F => c[2][1] = -2,
        Family::G => c[0][1] = -3,
        _ => {}
    }
    c
}

fn generator_labels(family: Family, rank: usize) -> Vec<String> {
    match family {
        Family::A | Family::E | Family::F | Family::G => {
            (1..=rank).map(|i| i.to_string()).collect()
        }
        Family::B => (0..rank).map(|i| i.to_string()).collect(),
        Family::D => {
            let mut v = vec!["1~".to_string()];
            v.extend((1..rank).map(|i| i.to_string()));
            v
        }
    }
}

/// All positive roots in simple-root coordinates, found by closing the set of
/// simple roots under simple reflections and keeping nonnegative vectors.
fn positive_roots_by_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut stack: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        stack.push(e);
    }
    while let Some(r) = stack.pop() {
        for s in 0..n {
            let dot: i64 = (0..n).map(|j| cartan[s][j] * r[j]).sum();
            if dot == 0 {
                continue;
            }
            let mut img = r.clone();
            img[s] -= dot;
            if img.iter().all(|&c| c >= 0) && seen.insert(img.clone()) {
                stack.push(img);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    roots
}

impl CoxeterSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Short descriptor such as "A3" or "D4".
    pub fn descriptor(&self) -> String {
        self.to_string()
    }

    /// Bond order m(s, t) of a generator pair.
    pub fn coxeter_order(&self, s: usize, t: usize) -> u32 {
        self.coxeter_matrix[s][t]
    }

    /// Positive roots in simple-root coordinates, one vector per root.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Length of the longest element (= number of positive roots).
    pub fn longest_element_length(&self) -> usize {
        self.positive_roots.len()
    }

    /// Display labels of the generators, indexed by internal index.
    pub fn generator_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    /// True when elements are carried as root-coordinate matrices (E/F/G).
    pub fn is_matrix_family(&self) -> bool {
        self.uses_matrix
    }

    /// Number of entries in the 1-line notation, when the family has one.
    pub fn one_line_size(&self) -> Option<usize> {
        match self.family {
            Family::A => Some(self.rank + 1),
            Family::B | Family::D => Some(self.rank),
            _ => None,
        }
    }

    /// Lattice column a generator occupies in heap pictures. The two fork
    /// generators of type D share column 1; every other family is injective.
    pub fn column(&self, s: usize) -> usize {
        match self.family {
            Family::D => {
                if s == 0 {
                    1
                } else {
                    s
                }
            }
            _ => s + 1,
        }
    }

    /// Largest column over all generators.
    pub fn column_count(&self) -> usize {
        (0..self.rank).map(|s| self.column(s)).max().unwrap_or(0)
    }

    /// Resolves a display label to an internal generator index.
    pub fn parse_generator_label(&self, token: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == token)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown generator '{token}' for {self} (labels: {})",
                    self.labels.join(" ")
                ))
            })
    }

    /// Parses a word given as label tokens separated by spaces or commas.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_generator_label(t))
            .collect()
    }

    /// Renders a word as space-separated labels.
    pub fn format_word(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&s| self.labels[s].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub(crate) fn cartan_row(&self, s: usize) -> &[i64] {
        &self.cartan[s]
    }

    /// Product of simple-reflection matrices of a word, acting on
    /// simple-root coordinates (row-major rank x rank).
    #[cfg(test)]
    pub(crate) fn word_root_matrix(&self, word: &[usize]) -> Vec<i64> {
        let mut m = identity_matrix(self.rank);
        for &s in word {
            apply_right_matrix(&mut m, self.rank, self.cartan_row(s), s);
        }
        m
    }

    /// Number of positive roots sent negative by the matrix.
    pub(crate) fn matrix_length(&self, m: &[i64]) -> usize {
        let n = self.rank;
        self.positive_roots
            .iter()
            .filter(|r| {
                for i in 0..n {
                    let mut v = 0i64;
                    for j in 0..n {
                        v += m[i * n + j] * r[j];
                    }
                    // The image of a root is a root: the first nonzero
                    // coordinate decides its sign.
                    match v.cmp(&0) {
                        Ordering::Less => return true,
                        Ordering::Greater => return false,
                        Ordering::Equal => {}
                    }
                }
                false
            })
            .count()
    }

    /// Sign test of the image of a simple root: column s of the matrix.
    pub(crate) fn matrix_right_descent(&self, m: &[i64], s: usize) -> bool {
        let n = self.rank;
        for i in 0..n {
            match m[i * n + s].cmp(&0) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        false
    }
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0i64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// M <- M * S_s where S_s = I - e_s c_s^T: column update using the Cartan row.
fn apply_right_matrix(m: &mut [i64], n: usize, cartan_row: &[i64], s: usize) {
    for k in 0..n {
        let ms = m[k * n + s];
        if ms == 0 {
            continue;
        }
        for (j, &c) in cartan_row.iter().enumerate() {
            if c != 0 {
                m[k * n + j] -= ms * c;
            }
        }
    }
}

/// M <- S_s * M: row s gets M[s] - c_s^T M.
fn apply_left_matrix(m: &mut [i64], n: usize, cartan_row: &[i64], s: usize) {
    let mut acc = vec![0i64; n];
    for (t, &c) in cartan_row.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for j in 0..n {
            acc[j] += c * m[t * n + j];
        }
    }
    for j in 0..n {
        m[s * n + j] -= acc[j];
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Repr {
    OneLine(Vec<i32>),
    Matrix(Vec<i64>),
}

/// A group element, owned by its system.
///
/// Equality, hashing, and ordering compare the canonical representation;
/// mixing elements of different systems is a caller bug.
#[derive(Clone)]
pub struct Element {
    system: Arc<CoxeterSystem>,
    repr: Repr,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.repr == other.repr
    }
}
impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert!(self.system == other.system);
        self.repr.cmp(&other.repr)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::OneLine(line) => {
                write!(f, "[")?;
                for (i, v) in line.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Repr::Matrix(_) => {
                write!(f, "word({})", self.system.format_word(&canonical_reduced_word(self)))
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.system, self)
    }
}

impl Element {
    /// The identity of the system.
    pub fn identity(system: &Arc<CoxeterSystem>) -> Element {
        let repr = if system.uses_matrix {
            Repr::Matrix(identity_matrix(system.rank))
        } else {
            let n = system.one_line_size().expect("classical family") as i32;
            Repr::OneLine((1..=n).collect())
        };
        Element {
            system: Arc::clone(system),
            repr,
        }
    }

    /// Builds a classical element from signed 1-line notation, validating
    /// the family's constraints (type A unsigned, type D evenly signed).
    pub fn from_one_line(system: &Arc<CoxeterSystem>, line: Vec<i32>) -> Result<Element> {
        let n = system.one_line_size().ok_or_else(|| {
            Error::InvalidInput(format!(
                "{} elements have no 1-line notation; give a word instead",
                system.descriptor()
            ))
        })?;
        if line.len() != n {
            return Err(Error::InvalidInput(format!(
                "1-line notation for {} needs {} entries, got {}",
                system.descriptor(),
                n,
                line.len()
            )));
        }
        let mut seen = vec![false; n];
        let mut negatives = 0usize;
        for &v in &line {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n {
                return Err(Error::InvalidInput(format!(
                    "1-line entry {v} out of range for {}",
                    system.descriptor()
                )));
            }
            if seen[a - 1] {
                return Err(Error::InvalidInput(format!(
                    "1-line notation repeats value {a}"
                )));
            }
            seen[a - 1] = true;
            if v < 0 {
                negatives += 1;
            }
        }
        if system.family == Family::A && negatives > 0 {
            return Err(Error::InvalidInput(
                "type A 1-line notation cannot have barred entries".into(),
            ));
        }
        if system.family == Family::D && negatives % 2 == 1 {
            return Err(Error::InvalidInput(
                "type D needs an even number of barred entries".into(),
            ));
        }
        Ok(Element {
            system: Arc::clone(system),
            repr: Repr::OneLine(line),
        })
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.system
    }

    /// Signed 1-line notation for classical families.
    pub fn one_line(&self) -> Option<&[i32]> {
        match &self.repr {
            Repr::OneLine(l) => Some(l),
            Repr::Matrix(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.repr {
            Repr::OneLine(l) => l.iter().enumerate().all(|(i, &v)| v == i as i32 + 1),
            Repr::Matrix(m) => *m == identity_matrix(self.system.rank),
        }
    }

    /// x * s (right) without bounds checking; callers validate s.
    pub(crate) fn right(&self, s: usize) -> Element {
        debug_assert!(s < self.system.rank);
        let mut e = self.clone();
        match &mut e.repr {
            Repr::OneLine(line) => one_line_right(self.system.family, line, s),
            Repr::Matrix(m) => {
                apply_right_matrix(m, self.system.rank, self.system.cartan_row(s), s)
            }
        }
        e
    }

    /// s * x (left) without bounds checking.
    pub(crate) fn left(&self, s: usize) -> Element {
        debug_assert!(s < self.system.rank);
        let mut e = self.clone();
        match &mut e.repr {
            Repr::OneLine(line) => one_line_left(self.system.family, line, s),
            Repr::Matrix(m) => apply_left_matrix(m, self.system.rank, self.system.cartan_row(s), s),
        }
        e
    }

    /// Coxeter length; equals the letter count of any reduced word.
    pub fn length(&self) -> usize {
        match &self.repr {
            Repr::OneLine(line) => one_line_length(self.system.family, line),
            Repr::Matrix(m) => self.system.matrix_length(m),
        }
    }

    /// True iff length(x s) < length(x).
    pub fn is_right_descent(&self, s: usize) -> bool {
        debug_assert!(s < self.system.rank);
        match &self.repr {
            Repr::OneLine(line) => one_line_right_descent(self.system.family, line, s),
            Repr::Matrix(m) => self.system.matrix_right_descent(m, s),
        }
    }

    pub(crate) fn min_right_descent(&self) -> Option<usize> {
        (0..self.system.rank).find(|&s| self.is_right_descent(s))
    }

    /// The group inverse.
    pub fn inverse(&self) -> Element {
        match &self.repr {
            Repr::OneLine(line) => Element {
                system: Arc::clone(&self.system),
                repr: Repr::OneLine(one_line_inverse(line)),
            },
            Repr::Matrix(_) => {
                // Peel x down to the identity by right descents; the letters
                // read in peel order multiply to the inverse.
                let mut cur = self.clone();
                let mut letters = Vec::new();
                while let Some(s) = cur.min_right_descent() {
                    letters.push(s);
                    cur = cur.right(s);
                }
                let mut res = Element::identity(&self.system);
                for &s in &letters {
                    res = res.right(s);
                }
                res
            }
        }
    }
}

fn one_line_right(family: Family, line: &mut [i32], s: usize) {
    match family {
        Family::A => line.swap(s, s + 1),
        Family::B => {
            if s == 0 {
                line[0] = -line[0];
            } else {
                line.swap(s - 1, s);
            }
        }
        Family::D => {
            if s == 0 {
                let (a, b) = (line[0], line[1]);
                line[0] = -b;
                line[1] = -a;
            } else {
                line.swap(s - 1, s);
            }
        }
        _ => unreachable!("matrix family"),
    }
}

fn one_line_left(family: Family, line: &mut [i32], s: usize) {
    match family {
        Family::A => {
            let v = s as i32 + 1;
            for e in line.iter_mut() {
                if *e == v {
                    *e = v + 1;
                } else if *e == v + 1 {
                    *e = v;
                }
            }
        }
        Family::B => {
            if s == 0 {
                for e in line.iter_mut() {
                    if e.abs() == 1 {
                        *e = -*e;
                    }
                }
            } else {
                one_line_left_swap_values(line, s as i32);
            }
        }
        Family::D => {
            if s == 0 {
                // Value action 1 -> -2, 2 -> -1 (and negatives back).
                for e in line.iter_mut() {
                    let a = e.abs();
                    if a == 1 || a == 2 {
                        *e = -(e.signum() * (3 - a));
                    }
                }
            } else {
                one_line_left_swap_values(line, s as i32);
            }
        }
        _ => unreachable!("matrix family"),
    }
}

fn one_line_left_swap_values(line: &mut [i32], v: i32) {
    for e in line.iter_mut() {
        if e.abs() == v {
            *e = e.signum() * (v + 1);
        } else if e.abs() == v + 1 {
            *e = e.signum() * v;
        }
    }
}

fn one_line_length(family: Family, line: &[i32]) -> usize {
    let mut inv = 0usize;
    for i in 0..line.len() {
        for j in i + 1..line.len() {
            if line[i] > line[j] {
                inv += 1;
            }
        }
    }
    let extra: usize = match family {
        Family::A => 0,
        Family::B => line
            .iter()
            .filter(|&&v| v < 0)
            .map(|&v| v.unsigned_abs() as usize)
            .sum(),
        Family::D => line
            .iter()
            .filter(|&&v| v < 0)
            .map(|&v| v.unsigned_abs() as usize - 1)
            .sum(),
        _ => unreachable!("matrix family"),
    };
    inv + extra
}

fn one_line_right_descent(family: Family, line: &[i32], s: usize) -> bool {
    match family {
        Family::A => line[s] > line[s + 1],
        Family::B => {
            if s == 0 {
                line[0] < 0
            } else {
                line[s - 1] > line[s]
            }
        }
        Family::D => {
            if s == 0 {
                line[0] + line[1] < 0
            } else {
                line[s - 1] > line[s]
            }
        }
        _ => unreachable!("matrix family"),
    }
}

fn one_line_inverse(line: &[i32]) -> Vec<i32> {
    let mut inv = vec![0i32; line.len()];
    for (i, &v) in line.iter().enumerate() {
        inv[v.unsigned_abs() as usize - 1] = v.signum() * (i as i32 + 1);
    }
    inv
}

/// Applies generator s to x on the requested side.
pub fn apply_generator(x: &Element, s: usize, side: Side) -> Result<Element> {
    let rank = x.system().rank();
    if s >= rank {
        return Err(Error::GeneratorOutOfRange { index: s, rank });
    }
    Ok(match side {
        Side::Right => x.right(s),
        Side::Left => x.left(s),
    })
}

/// Multiplies out a word left to right; the flag reports whether the word is
/// reduced (length of the product equals the letter count).
pub fn element_from_word(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<(Element, bool)> {
    for &s in word {
        if s >= system.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: s,
                rank: system.rank(),
            });
        }
    }
    let mut x = Element::identity(system);
    for &s in word {
        x = x.right(s);
    }
    let reduced = x.length() == word.len();
    Ok((x, reduced))
}

/// The lexicographically smallest reduced word for x, built by repeatedly
/// taking the smallest left descent. Only the running inverse is tracked:
/// left descents of y are right descents of y^{-1}.
pub fn canonical_reduced_word(x: &Element) -> Word {
    let mut word = Vec::with_capacity(x.length());
    let mut inv = x.inverse();
    while let Some(s) = inv.min_right_descent() {
        word.push(s);
        inv = inv.right(s);
    }
    word
}

/// All reduced words of x in lexicographic order, capped at `limit` when
/// given. Recurses on left descents of the remaining factor, tracked via its
/// inverse.
pub fn reduced_words(x: &Element, limit: Option<usize>) -> Vec<Word> {
    fn dfs(
        r: &Element,
        remaining: usize,
        word: &mut Word,
        out: &mut Vec<Word>,
        limit: Option<usize>,
    ) -> bool {
        if remaining == 0 {
            out.push(word.clone());
            return limit != Some(out.len());
        }
        for s in 0..r.system().rank() {
            if r.is_right_descent(s) {
                word.push(s);
                let more = dfs(&r.right(s), remaining - 1, word, out, limit);
                word.pop();
                if !more {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    let mut word = Vec::new();
    dfs(&x.inverse(), x.length(), &mut word, &mut out, limit);
    out
}

/// All subexpression values of the given word (the lower Bruhat interval
/// when the word is reduced), as a set.
pub(crate) fn interval_via_word(system: &Arc<CoxeterSystem>, word: &[usize]) -> HashSet<Element> {
    let mut cur: HashSet<Element> = HashSet::new();
    cur.insert(Element::identity(system));
    for &s in word {
        let mut next = cur.clone();
        for y in &cur {
            next.insert(y.right(s));
        }
        cur = next;
    }
    cur
}

/// Everything below w in Bruhat order (w included), sorted by length then
/// representation.
pub fn bruhat_interval(w: &Element) -> Vec<Element> {
    let word = canonical_reduced_word(w);
    let set = interval_via_word(w.system(), &word);
    let mut v: Vec<(usize, Element)> = set.into_iter().map(|e| (e.length(), e)).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    v.into_iter().map(|p| p.1).collect()
}

/// Bruhat order test via the lifting property.
///
/// For s a right descent of w: x <= w iff (xs <= ws when xs < x, else
/// x <= ws). Peeling w one descent at a time needs O(length(w)) group
/// operations and no interval enumeration.
pub fn bruhat_leq(x: &Element, w: &Element) -> bool {
    assert!(
        x.system() == w.system(),
        "bruhat_leq needs elements of one system"
    );
    let mut x = x.clone();
    let mut w = w.clone();
    loop {
        if x.length() > w.length() {
            return false;
        }
        if x.is_identity() {
            return true;
        }
        // x is not the identity, so the length check guarantees w is not
        // either and has a descent.
        let s = w.min_right_descent().expect("non-identity element");
        w = w.right(s);
        if x.is_right_descent(s) {
            x = x.right(s);
        }
    }
}

/// Iterator over group elements in nondecreasing length order.
pub struct Elements {
    system: Arc<CoxeterSystem>,
    layer: Vec<Element>,
    pos: usize,
    len: usize,
    max_length: Option<usize>,
}

impl Iterator for Elements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        loop {
            if self.pos < self.layer.len() {
                self.pos += 1;
                return Some(self.layer[self.pos - 1].clone());
            }
            if self.layer.is_empty() {
                return None;
            }
            if let Some(m) = self.max_length {
                if self.len >= m {
                    self.layer.clear();
                    return None;
                }
            }
            // Every product of a length-k element with a non-descent has
            // length exactly k+1, so deduping within the new layer suffices.
            let mut next: Vec<Element> = Vec::new();
            for x in &self.layer {
                for s in 0..self.system.rank() {
                    if !x.is_right_descent(s) {
                        next.push(x.right(s));
                    }
                }
            }
            next.sort();
            next.dedup();
            self.layer = next;
            self.len += 1;
            self.pos = 0;
        }
    }
}

/// Enumerates each element exactly once by nondecreasing length, the whole
/// group when max_length is absent.
pub fn enumerate_elements(system: &Arc<CoxeterSystem>, max_length: Option<usize>) -> Elements {
    Elements {
        system: Arc::clone(system),
        layer: vec![Element::identity(system)],
        pos: 0,
        len: 0,
        max_length,
    }
}

/// Parses signed 1-line notation such as "3 4 1 2", "[-4,2,-3,1]".
pub fn parse_one_line(system: &Arc<CoxeterSystem>, text: &str) -> Result<Element> {
    let cleaned = text.replace(['[', ']'], " ");
    let mut entries = Vec::new();
    for tok in cleaned.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let v: i32 = tok
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad 1-line entry '{tok}'")))?;
        entries.push(v);
    }
    Element::from_one_line(system, entries)
}
