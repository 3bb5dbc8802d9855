//! Mask calculus on reduced words: subexpression evaluation, defect
//! classification, the statistics d and D, boundedness, and mu-masks.
//!
//! A mask assigns a bit to each letter of a reduced word; the letters with
//! bit 1 multiply to the subexpression. Position j is a defect when the
//! letter there is a right descent of the preceding subexpression prefix,
//! a test independent of bit j itself. D counts plain-zeros minus
//! zero-defects and satisfies l(w) - l(w^sigma) - 2 d(sigma) = D(sigma).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::coxeter::{canonical_reduced_word, element_from_word, CoxeterSystem, Element, Family};
use crate::error::Error;
use crate::patterns::{contains_pattern, Pattern};
use crate::Result;

/// A bit per letter of a word; bit 0 is the leftmost letter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(bits: Vec<bool>) -> Mask {
        Mask { bits }
    }

    pub fn all_ones(len: usize) -> Mask {
        Mask {
            bits: vec![true; len],
        }
    }

    pub fn all_zeros(len: usize) -> Mask {
        Mask {
            bits: vec![false; len],
        }
    }

    /// Parses a bitstring such as "1011"; separators ' ' ',' are ignored.
    pub fn parse(text: &str) -> Result<Mask> {
        let mut bits = Vec::new();
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | ',' | '(' | ')' => {}
                other => {
                    return Err(Error::InvalidInput(format!(
                        "mask may only contain bits, got '{other}'"
                    )))
                }
            }
        }
        Ok(Mask { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Proper means not all-ones.
    pub fn is_proper(&self) -> bool {
        self.bits.iter().any(|&b| !b)
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask({self})")
    }
}

/// Per-position classification by (mask bit, defect test).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PositionStatus {
    PlainZero,
    ZeroDefect,
    PlainOne,
    OneDefect,
}

impl PositionStatus {
    fn classify(bit: bool, defect: bool) -> PositionStatus {
        match (bit, defect) {
            (false, false) => PositionStatus::PlainZero,
            (false, true) => PositionStatus::ZeroDefect,
            (true, false) => PositionStatus::PlainOne,
            (true, true) => PositionStatus::OneDefect,
        }
    }

    pub fn is_defect(self) -> bool {
        matches!(self, PositionStatus::ZeroDefect | PositionStatus::OneDefect)
    }

    pub fn bit(self) -> bool {
        matches!(self, PositionStatus::PlainOne | PositionStatus::OneDefect)
    }
}

impl fmt::Display for PositionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PositionStatus::PlainZero => "plain-zero",
            PositionStatus::ZeroDefect => "zero-defect",
            PositionStatus::PlainOne => "plain-one",
            PositionStatus::OneDefect => "one-defect",
        };
        write!(f, "{s}")
    }
}

/// Everything the mask calculus derives from one (word, mask) pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefectProfile {
    pub statuses: Vec<PositionStatus>,
    /// d: number of defect positions (either bit value).
    pub defect_count: usize,
    /// D: plain-zeros minus zero-defects.
    pub deodhar_statistic: i64,
    /// The product of the bit-1 letters.
    pub subexpression: Element,
}

fn validate_letters(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<()> {
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

fn validate_mask(word: &[usize], mask: &Mask) -> Result<()> {
    if mask.len() != word.len() {
        return Err(Error::MaskLengthMismatch {
            mask: mask.len(),
            word: word.len(),
        });
    }
    Ok(())
}

/// Errors with NotReduced unless the word is reduced; returns its element.
fn require_reduced(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<Element> {
    validate_letters(system, word)?;
    let (x, reduced) = element_from_word(system, word)?;
    if !reduced {
        return Err(Error::NotReduced(system.format_word(word)));
    }
    Ok(x)
}

/// Product of the bit-1 letters of the word, in order.
pub fn subexpression(
    system: &Arc<CoxeterSystem>,
    word: &[usize],
    mask: &Mask,
) -> Result<Element> {
    validate_letters(system, word)?;
    validate_mask(word, mask)?;
    let mut y = Element::identity(system);
    for (j, &s) in word.iter().enumerate() {
        if mask.bit(j) {
            y = y.right(s);
        }
    }
    Ok(y)
}

/// Classifies every position of a mask on a reduced word and computes the
/// statistics d and D.
pub fn defect_profile(
    system: &Arc<CoxeterSystem>,
    word: &[usize],
    mask: &Mask,
) -> Result<DefectProfile> {
    validate_mask(word, mask)?;
    require_reduced(system, word)?;
    let mut statuses = Vec::with_capacity(word.len());
    let mut y = Element::identity(system);
    for (j, &s) in word.iter().enumerate() {
        let defect = y.is_right_descent(s);
        statuses.push(PositionStatus::classify(mask.bit(j), defect));
        if mask.bit(j) {
            y = y.right(s);
        }
    }
    Ok(profile_from_parts(statuses, y))
}

fn profile_from_parts(statuses: Vec<PositionStatus>, subexpression: Element) -> DefectProfile {
    let defect_count = statuses.iter().filter(|s| s.is_defect()).count();
    let plain_zeros = statuses
        .iter()
        .filter(|&&s| s == PositionStatus::PlainZero)
        .count() as i64;
    let zero_defects = statuses
        .iter()
        .filter(|&&s| s == PositionStatus::ZeroDefect)
        .count() as i64;
    DefectProfile {
        statuses,
        defect_count,
        deodhar_statistic: plain_zeros - zero_defects,
        subexpression,
    }
}

/// True iff every proper mask on the word has D > 0.
///
/// Dynamic programming over positions: a state is (prefix subexpression,
/// still-all-ones flag) with the minimum D accumulated so far. Bit 1 keeps D
/// and advances the prefix; bit 0 adds +1 (plain-zero) or -1 (zero-defect).
pub fn is_bounded(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<bool> {
    require_reduced(system, word)?;
    let mut states: HashMap<(Element, bool), i64> = HashMap::new();
    states.insert((Element::identity(system), true), 0);
    for &s in word {
        let mut next: HashMap<(Element, bool), i64> = HashMap::with_capacity(states.len() * 2);
        for ((y, ones), dmin) in &states {
            let one_key = (y.right(s), *ones);
            match next.get_mut(&one_key) {
                Some(v) => *v = (*v).min(*dmin),
                None => {
                    next.insert(one_key, *dmin);
                }
            }
            let delta = if y.is_right_descent(s) { -1 } else { 1 };
            let zero_key = (y.clone(), false);
            let d = dmin + delta;
            match next.get_mut(&zero_key) {
                Some(v) => *v = (*v).min(d),
                None => {
                    next.insert(zero_key, d);
                }
            }
        }
        states = next;
    }
    Ok(states
        .iter()
        .filter(|((_, ones), _)| !ones)
        .all(|(_, &d)| d >= 1))
}

/// Exhaustive 2^l check of the same property, for cross-validation.
#[cfg(test)]
pub(crate) fn is_bounded_brute(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<bool> {
    let k = word.len();
    assert!(k <= 20, "brute-force mask scan capped at 20 letters");
    for m in 0..(1u32 << k) - 1 {
        let bits: Vec<bool> = (0..k).map(|j| m >> j & 1 == 1).collect();
        let profile = defect_profile(system, word, &Mask::new(bits))?;
        if profile.deodhar_statistic <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff x is a Deodhar element: some (equivalently every) reduced word
/// is bounded. Type A elements containing a 321 pattern are rejected first;
/// they are not short-braid avoiding, which boundedness requires.
pub fn is_deodhar(x: &Element) -> bool {
    if x.system().family() == Family::A {
        let p321 = Pattern::new(vec![3, 2, 1]).unwrap();
        if contains_pattern(x, &p321).expect("type A unsigned pattern") {
            return false;
        }
    }
    let word = canonical_reduced_word(x);
    is_bounded(x.system(), &word).expect("canonical word is reduced")
}

/// All masks on the word whose subexpression is x, with their profiles, in
/// lexicographic order (0 before 1). Backward reachability sets prune the
/// forward scan to exactly the successful prefixes.
pub fn masks_evaluating_to(
    system: &Arc<CoxeterSystem>,
    word: &[usize],
    x: &Element,
) -> Result<Vec<(Mask, DefectProfile)>> {
    require_reduced(system, word)?;
    let k = word.len();
    let mut reach: Vec<HashSet<Element>> = Vec::with_capacity(k + 1);
    reach.resize(k + 1, HashSet::new());
    reach[k].insert(x.clone());
    for j in (0..k).rev() {
        let s = word[j];
        let mut set = HashSet::with_capacity(reach[j + 1].len() * 2);
        for y in &reach[j + 1] {
            set.insert(y.clone());
            set.insert(y.right(s));
        }
        reach[j] = set;
    }

    let mut out = Vec::new();
    let start = Element::identity(system);
    if !reach[0].contains(&start) {
        return Ok(out);
    }
    let mut statuses: Vec<PositionStatus> = Vec::with_capacity(k);
    dfs_masks(system, word, x, &reach, 0, start, &mut statuses, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_masks(
    system: &Arc<CoxeterSystem>,
    word: &[usize],
    x: &Element,
    reach: &[HashSet<Element>],
    j: usize,
    y: Element,
    statuses: &mut Vec<PositionStatus>,
    out: &mut Vec<(Mask, DefectProfile)>,
) {
    if j == word.len() {
        debug_assert!(y == *x);
        let bits = statuses.iter().map(|s| s.bit()).collect();
        out.push((Mask::new(bits), profile_from_parts(statuses.clone(), y)));
        return;
    }
    let s = word[j];
    let defect = y.is_right_descent(s);
    if reach[j + 1].contains(&y) {
        statuses.push(PositionStatus::classify(false, defect));
        dfs_masks(system, word, x, reach, j + 1, y.clone(), statuses, out);
        statuses.pop();
    }
    let ys = y.right(s);
    if reach[j + 1].contains(&ys) {
        statuses.push(PositionStatus::classify(true, defect));
        dfs_masks(system, word, x, reach, j + 1, ys, statuses, out);
        statuses.pop();
    }
}

/// The mu-masks for x on a bounded reduced word: proper masks evaluating to
/// x with D = 1. Their count is the mu-coefficient mu(x, w).
pub fn mu_masks(system: &Arc<CoxeterSystem>, word: &[usize], x: &Element) -> Result<Vec<Mask>> {
    if !is_bounded(system, word)? {
        return Err(Error::Unsupported(format!(
            "word {} is not bounded, so mask counts do not give mu",
            system.format_word(word)
        )));
    }
    Ok(masks_evaluating_to(system, word, x)?
        .into_iter()
        .filter(|(mask, profile)| mask.is_proper() && profile.deodhar_statistic == 1)
        .map(|(mask, _)| mask)
        .collect())
}
