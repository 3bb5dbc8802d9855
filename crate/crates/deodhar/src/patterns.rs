//! Classical pattern containment and the type A smoothness test.

use crate::coxeter::{Element, Family};
use crate::error::Error;
use crate::Result;

/// A (possibly signed) permutation pattern such as `[3,4,1,2]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pattern {
    entries: Vec<i32>,
}

impl Pattern {
    /// Validates that the absolute values form {1..k} without repeats.
    pub fn new(entries: Vec<i32>) -> Result<Pattern> {
        let k = entries.len();
        let mut seen = vec![false; k];
        for &v in &entries {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > k || seen[a - 1] {
                return Err(Error::InvalidInput(format!(
                    "pattern entries must be distinct values 1..{k}, got {entries:?}"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(Pattern { entries })
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn is_signed(&self) -> bool {
        self.entries.iter().any(|&v| v < 0)
    }
}

/// True iff some subsequence of w's 1-line notation is order-isomorphic to
/// the pattern. Only unsigned patterns on type A elements are supported.
pub fn contains_pattern(w: &Element, pattern: &Pattern) -> Result<bool> {
    if w.system().family() != Family::A {
        return Err(Error::Unsupported(format!(
            "pattern containment is defined for type A, not {}",
            w.system().descriptor()
        )));
    }
    if pattern.is_signed() {
        return Err(Error::Unsupported(
            "signed patterns are not supported on type A elements".into(),
        ));
    }
    let line = w.one_line().expect("type A has 1-line notation");
    Ok(scan(line, &pattern.entries))
}

/// Backtracking subsequence scan: choose positions left to right, keeping
/// the chosen values in the same relative order as the pattern.
fn scan(line: &[i32], pattern: &[i32]) -> bool {
    fn dfs(line: &[i32], pattern: &[i32], start: usize, chosen: &mut Vec<i32>) -> bool {
        let t = chosen.len();
        if t == pattern.len() {
            return true;
        }
        if line.len() - start < pattern.len() - t {
            return false;
        }
        'candidates: for i in start..line.len() {
            for (u, &c) in chosen.iter().enumerate() {
                if (pattern[u] < pattern[t]) != (c < line[i]) {
                    continue 'candidates;
                }
            }
            chosen.push(line[i]);
            if dfs(line, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    dfs(line, pattern, 0, &mut Vec::with_capacity(pattern.len()))
}

/// True iff w avoids both [3,4,1,2] and [4,2,3,1]; such permutations index
/// the smooth type A Schubert varieties.
pub fn is_smooth_type_a(w: &Element) -> bool {
    assert_eq!(
        w.system().family(),
        Family::A,
        "smoothness test is type A only"
    );
    let p3412 = Pattern::new(vec![3, 4, 1, 2]).unwrap();
    let p4231 = Pattern::new(vec![4, 2, 3, 1]).unwrap();
    !contains_pattern(w, &p3412).unwrap() && !contains_pattern(w, &p4231).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_system, enumerate_elements, Element};

    fn a(n: usize) -> std::sync::Arc<crate::coxeter::CoxeterSystem> {
        build_system(Family::A, n).unwrap()
    }

    fn p(entries: &[i32]) -> Pattern {
        Pattern::new(entries.to_vec()).unwrap()
    }

    fn contains(line: &[i32], pattern: &[i32]) -> bool {
        let system = a(line.len() - 1);
        let w = Element::from_one_line(&system, line.to_vec()).unwrap();
        contains_pattern(&w, &p(pattern)).unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&[3, 2, 1, 4], &[3, 2, 1]));
        assert!(!contains(&[2, 1, 4, 3], &[3, 2, 1]));
        assert!(contains(&[4, 2, 3, 1], &[4, 2, 3, 1]));
        assert!(contains(&[3, 5, 1, 4, 2], &[3, 4, 1, 2]));
        assert!(!contains(&[2, 5, 4, 1, 3], &[3, 4, 1, 2]));
        assert!(!contains(&[1, 2, 3, 4], &[2, 1]));
    }

    #[test]
    fn rejects_unsupported_combinations() {
        let b2 = build_system(Family::B, 2).unwrap();
        let w = Element::from_one_line(&b2, vec![2, 1]).unwrap();
        assert!(contains_pattern(&w, &p(&[2, 1])).is_err());
        let a2 = a(2);
        let x = Element::from_one_line(&a2, vec![2, 1, 3]).unwrap();
        assert!(contains_pattern(&x, &Pattern::new(vec![-1, 2]).unwrap()).is_err());
        assert!(Pattern::new(vec![1, 3]).is_err());
        assert!(Pattern::new(vec![2, 2]).is_err());
    }

    #[test]
    fn smooth_examples_and_s4_count() {
        let a3 = a(3);
        assert!(is_smooth_type_a(&Element::identity(&a3)));
        assert!(!is_smooth_type_a(
            &Element::from_one_line(&a3, vec![3, 4, 1, 2]).unwrap()
        ));
        let mut smooth = 0;
        let mut rough = Vec::new();
        for w in enumerate_elements(&a3, None) {
            if is_smooth_type_a(&w) {
                smooth += 1;
            } else {
                rough.push(w.one_line().unwrap().to_vec());
            }
        }
        assert_eq!(smooth, 22);
        rough.sort();
        assert_eq!(rough, vec![vec![3, 4, 1, 2], vec![4, 2, 3, 1]]);
    }

    #[test]
    fn containment_monotone_under_deletion() {
        // Deleting an entry (and standardizing) never creates a containment.
        let a4 = a(4);
        let patterns = [p(&[3, 2, 1]), p(&[3, 4, 1, 2])];
        for w in enumerate_elements(&a4, None) {
            let line = w.one_line().unwrap();
            for skip in 0..line.len() {
                let mut sub: Vec<i32> = line
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                // standardize to values 1..k
                let mut order: Vec<usize> = (0..sub.len()).collect();
                order.sort_by_key(|&i| sub[i]);
                let mut std = vec![0i32; sub.len()];
                for (rank, &i) in order.iter().enumerate() {
                    std[i] = rank as i32 + 1;
                }
                sub = std;
                let smaller = Element::from_one_line(&a(sub.len() - 1), sub).unwrap();
                for pat in &patterns {
                    if contains_pattern(&smaller, pat).unwrap() {
                        assert!(contains_pattern(&w, pat).unwrap());
                    }
                }
            }
        }
    }
}
