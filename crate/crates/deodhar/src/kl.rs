//! Kazhdan-Lusztig polynomials, mu-coefficients, and whole-group 0-1
//! verification.
//!
//! Two independent routes compute P_{x,w}. The classical recursion peels a
//! right descent s of w and expresses P_{x,w} through the interval below
//! ws, correcting with the mu-coefficients of ws. The mask route applies
//! only below a Deodhar element w: there P_{x,w} is the generating
//! function, graded by defect count, of the masks on a reduced word of w
//! whose subexpression is x. Comparing the two routes over a whole group
//! is the verification sweep: on Deodhar elements every mu-coefficient
//! must be 0 or 1, and the mask count must agree with the recursion.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use crate::coxeter::{
    bruhat_interval, bruhat_leq, canonical_reduced_word, enumerate_elements, CoxeterSystem,
    Element,
};
use crate::error::Error;
use crate::masks::is_deodhar;
use crate::poly::QPolynomial;
use crate::Result;

/// The full Kazhdan-Lusztig data below one element w: P_{x,w} for every x
/// in the Bruhat interval [e, w], plus the nonzero mu-coefficients.
#[derive(Debug)]
pub struct KlTable {
    /// P_{x,w} keyed by x. Contains every x <= w and nothing else, so a
    /// lookup doubles as a Bruhat order test.
    polys: HashMap<Element, QPolynomial>,
    /// (z, mu(z, w)) for the z < w with mu(z, w) != 0, ordered by length
    /// then representation.
    mu: Vec<(Element, u64)>,
}

impl KlTable {
    /// P_{x,w}, or None when x is not below w.
    pub fn poly(&self, x: &Element) -> Option<&QPolynomial> {
        self.polys.get(x)
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.polys.contains_key(x)
    }

    pub fn interval_size(&self) -> usize {
        self.polys.len()
    }

    /// The nonzero mu-coefficients below w.
    pub fn mu_pairs(&self) -> &[(Element, u64)] {
        &self.mu
    }

    pub fn mu_coefficient(&self, x: &Element) -> u64 {
        self.mu
            .iter()
            .find(|(z, _)| z == x)
            .map(|&(_, m)| m)
            .unwrap_or(0)
    }
}

/// A cache of [`KlTable`]s keyed by their top element, shareable across
/// threads. Lookups take a read lock; a missing table is built outside any
/// lock and inserted under a write lock, so concurrent builders may
/// duplicate work but never block each other's recursion (first insert
/// wins).
#[derive(Debug, Default)]
pub struct KlCache {
    tables: RwLock<HashMap<Element, Arc<KlTable>>>,
}

impl KlCache {
    pub fn new() -> KlCache {
        KlCache::default()
    }

    /// The table below w, building it (and everything it depends on) on
    /// first use.
    pub fn table(&self, w: &Element) -> Arc<KlTable> {
        if let Some(table) = self.tables.read().expect("cache lock").get(w) {
            return Arc::clone(table);
        }
        let built = Arc::new(self.build(w));
        let mut tables = self.tables.write().expect("cache lock");
        Arc::clone(tables.entry(w.clone()).or_insert(built))
    }

    /// P_{x,w}; the zero polynomial when x is not below w.
    pub fn poly(&self, x: &Element, w: &Element) -> QPolynomial {
        assert!(
            x.system() == w.system(),
            "Kazhdan-Lusztig data needs elements of one system"
        );
        self.table(w)
            .poly(x)
            .cloned()
            .unwrap_or_else(QPolynomial::zero)
    }

    /// mu(x, w) by the recursion route.
    pub fn mu(&self, x: &Element, w: &Element) -> u64 {
        assert!(
            x.system() == w.system(),
            "Kazhdan-Lusztig data needs elements of one system"
        );
        self.table(w).mu_coefficient(x)
    }

    fn build(&self, w: &Element) -> KlTable {
        if w.is_identity() {
            let mut polys = HashMap::new();
            polys.insert(w.clone(), QPolynomial::one());
            return KlTable {
                polys,
                mu: Vec::new(),
            };
        }
        let s = w.min_right_descent().expect("non-identity element");
        let v = w.right(s);
        let v_table = self.table(&v);
        // Only the z < v with zs < z correct the recursion; fetch their
        // tables up front so the x loop is pure lookups.
        let lowers: Vec<(Element, u64, Arc<KlTable>)> = v_table
            .mu
            .iter()
            .filter(|(z, _)| z.is_right_descent(s))
            .map(|(z, m)| (z.clone(), *m, self.table(z)))
            .collect();
        let interval = bruhat_interval(w);
        let lw = w.length();
        let mut polys = HashMap::with_capacity(interval.len());
        for x in &interval {
            let xs = x.right(s);
            let c = usize::from(xs.length() < x.length());
            let mut p = QPolynomial::zero();
            if let Some(base) = v_table.polys.get(&xs) {
                p += &base.shift(1 - c);
            }
            if let Some(base) = v_table.polys.get(x) {
                p += &base.shift(c);
            }
            for (z, m, z_table) in &lowers {
                // The lookup is also the test x <= z.
                if let Some(base) = z_table.polys.get(x) {
                    p -= &base.shift((lw - z.length()) / 2).scale(*m as i64);
                }
            }
            debug_assert!(p.coefficient(0) == 1, "constant term 1 below the top");
            debug_assert!(
                if x == w {
                    p.is_one()
                } else {
                    p.degree().unwrap_or(0) * 2 + 1 <= lw - x.length()
                },
                "degree bound violated"
            );
            polys.insert(x.clone(), p);
        }
        let mut mu = Vec::new();
        for x in &interval {
            let gap = lw - x.length();
            if x == w || gap % 2 == 0 {
                continue;
            }
            let coefficient = polys[x].coefficient((gap - 1) / 2);
            debug_assert!(coefficient >= 0, "negative Kazhdan-Lusztig coefficient");
            if coefficient != 0 {
                mu.push((x.clone(), coefficient as u64));
            }
        }
        KlTable { polys, mu }
    }
}

/// P_{x,w} by the classical descent recursion. Total: the zero polynomial
/// when x is not below w. For repeated queries share a [`KlCache`].
pub fn kl_recursive(x: &Element, w: &Element) -> QPolynomial {
    KlCache::new().poly(x, w)
}

/// The mask layer of a word: for every subexpression value y, the
/// generating function of the masks evaluating to y graded by defect
/// count. Processing the word letter by letter, a bit at a descent
/// position contributes a factor q whether set or not, which is exactly
/// the defect grading.
fn mask_layer(system: &Arc<CoxeterSystem>, word: &[usize]) -> HashMap<Element, QPolynomial> {
    let mut layer = HashMap::from([(Element::identity(system), QPolynomial::one())]);
    for &s in word {
        let mut next: HashMap<Element, QPolynomial> = HashMap::with_capacity(layer.len() * 2);
        for (y, p) in layer {
            let advanced = y.right(s);
            let p = if y.is_right_descent(s) { p.shift(1) } else { p };
            *next.entry(y).or_insert_with(QPolynomial::zero) += &p;
            *next.entry(advanced).or_insert_with(QPolynomial::zero) += &p;
        }
        layer = next;
    }
    layer
}

/// Per subexpression value y, the number of masks on the word with
/// Deodhar statistic exactly 1 evaluating to y. On a Deodhar element these
/// counts are the mu-coefficients.
fn mu_mask_counts(system: &Arc<CoxeterSystem>, word: &[usize]) -> HashMap<Element, u64> {
    let mut layer: HashMap<(Element, i64), u64> =
        HashMap::from([((Element::identity(system), 0), 1)]);
    for &s in word {
        let mut next: HashMap<(Element, i64), u64> = HashMap::with_capacity(layer.len() * 2);
        for ((y, d), count) in layer {
            let delta = if y.is_right_descent(s) { -1 } else { 1 };
            let advanced = y.right(s);
            *next.entry((y, d + delta)).or_insert(0) += count;
            *next.entry((advanced, d)).or_insert(0) += count;
        }
        layer = next;
    }
    let mut counts = HashMap::new();
    for ((y, d), count) in layer {
        if d == 1 {
            *counts.entry(y).or_insert(0) += count;
        }
    }
    counts
}

/// P_{x,w} as the defect generating function of the masks on the canonical
/// word of w evaluating to x. Unsupported unless w is Deodhar; below a
/// Deodhar element this agrees with [`kl_recursive`].
pub fn kl_deodhar(x: &Element, w: &Element) -> Result<QPolynomial> {
    assert!(
        x.system() == w.system(),
        "Kazhdan-Lusztig data needs elements of one system"
    );
    if !is_deodhar(w) {
        return Err(Error::Unsupported(
            "the mask generating function computes P only below Deodhar elements".into(),
        ));
    }
    let mut layer = mask_layer(w.system(), &canonical_reduced_word(w));
    Ok(layer.remove(x).unwrap_or_else(QPolynomial::zero))
}

/// The coefficient mu(x, w) of q^((l(w)-l(x)-1)/2) in P_{x,w}. Zero when
/// x = w, when x is not below w, or when the length gap is even. Deodhar
/// targets are counted through masks; everything else falls back to the
/// recursion.
pub fn mu(x: &Element, w: &Element) -> u64 {
    assert!(
        x.system() == w.system(),
        "Kazhdan-Lusztig data needs elements of one system"
    );
    if x == w || !bruhat_leq(x, w) {
        return 0;
    }
    if (w.length() - x.length()) % 2 == 0 {
        return 0;
    }
    if is_deodhar(w) {
        let counts = mu_mask_counts(w.system(), &canonical_reduced_word(w));
        return counts.get(x).copied().unwrap_or(0);
    }
    KlCache::new().mu(x, w)
}

/// Options for [`verify_zero_one`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Restrict targets to Deodhar elements (the 0-1 statement's scope).
    /// When false every element is a target; non-Deodhar targets get the
    /// recursion route only and are never flagged.
    pub deodhar_only: bool,
    /// Skip elements longer than this.
    pub max_length: Option<usize>,
    /// Worker threads. Defaults to the available parallelism, capped at 8.
    pub jobs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            deodhar_only: true,
            max_length: None,
            jobs: None,
        }
    }
}

/// A pair flagged by the sweep: the routes disagree, or a Deodhar target
/// carries a mu-coefficient above 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuViolation {
    /// Canonical word of x ("e" for the identity).
    pub x: String,
    /// Canonical word of w.
    pub w: String,
    /// Mask-route count, when w is Deodhar.
    pub mask_route: Option<u64>,
    pub recursion_route: u64,
}

/// Result of a 0-1 verification sweep over one group.
#[derive(Clone, Debug)]
pub struct MuReport {
    /// System descriptor, e.g. "A3".
    pub system: String,
    /// Elements enumerated (after the length filter).
    pub elements: usize,
    /// Deodhar elements among them.
    pub deodhar_count: usize,
    /// Elements taken as targets w.
    pub targets_checked: usize,
    /// (x, w) pairs with x < w whose mu was computed.
    pub pairs_checked: u64,
    /// Pairs whose target was not Deodhar (recursion route only).
    pub recursion_only_pairs: u64,
    /// Distribution of recursion-route mu over the checked pairs.
    pub mu_histogram: BTreeMap<u64, u64>,
    pub violations: Vec<MuViolation>,
    pub elapsed: Duration,
}

impl MuReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Stable line-per-fact rendering; the elapsed footer is the only
    /// non-deterministic line.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("system={}", self.system),
            format!("elements={}", self.elements),
            format!("deodhar={}", self.deodhar_count),
            format!("targets={}", self.targets_checked),
            format!("pairs={}", self.pairs_checked),
            format!("recursion_only_pairs={}", self.recursion_only_pairs),
        ];
        for (value, count) in &self.mu_histogram {
            lines.push(format!("mu[{value}]={count}"));
        }
        lines.push(format!("violations={}", self.violations.len()));
        for v in &self.violations {
            let mask = v
                .mask_route
                .map_or_else(|| "none".to_string(), |m| m.to_string());
            lines.push(format!(
                "violation: x={} w={} mask_route={mask} recursion_route={}",
                v.x, v.w, v.recursion_route
            ));
        }
        lines.push(format!("elapsed_ms={}", self.elapsed.as_millis()));
        lines.join("\n")
    }
}

fn element_name(x: &Element) -> String {
    if x.is_identity() {
        "e".to_string()
    } else {
        x.system().format_word(&canonical_reduced_word(x))
    }
}

struct TargetOutcome {
    pairs: u64,
    recursion_only: u64,
    histogram: BTreeMap<u64, u64>,
    violations: Vec<MuViolation>,
}

fn check_target(cache: &KlCache, w: &Element, deodhar: bool) -> TargetOutcome {
    let table = cache.table(w);
    let mask_counts = deodhar.then(|| mu_mask_counts(w.system(), &canonical_reduced_word(w)));
    let mut outcome = TargetOutcome {
        pairs: 0,
        recursion_only: 0,
        histogram: BTreeMap::new(),
        violations: Vec::new(),
    };
    let mut below: Vec<&Element> = table.polys.keys().filter(|x| *x != w).collect();
    below.sort();
    for x in below {
        outcome.pairs += 1;
        let recursion = table.mu_coefficient(x);
        *outcome.histogram.entry(recursion).or_insert(0) += 1;
        match &mask_counts {
            Some(counts) => {
                let mask = counts.get(x).copied().unwrap_or(0);
                if mask != recursion || recursion > 1 {
                    outcome.violations.push(MuViolation {
                        x: element_name(x),
                        w: element_name(w),
                        mask_route: Some(mask),
                        recursion_route: recursion,
                    });
                }
            }
            None => outcome.recursion_only += 1,
        }
    }
    outcome
}

/// Sweeps a whole group (optionally truncated by length): for every
/// Deodhar target w and every x < w, the mask count of mu must match the
/// recursion and stay within {0, 1}. With `deodhar_only` off the remaining
/// elements are swept too, contributing recursion-route mu values to the
/// histogram without being flagged. Deterministic for a fixed input
/// regardless of thread count.
pub fn verify_zero_one(system: &Arc<CoxeterSystem>, options: &VerifyOptions) -> MuReport {
    let start = Instant::now();
    let elements: Vec<Element> = enumerate_elements(system, options.max_length).collect();
    let deodhar_flags: Vec<bool> = elements.iter().map(is_deodhar).collect();
    let deodhar_count = deodhar_flags.iter().filter(|&&b| b).count();
    let targets: Vec<usize> = (0..elements.len())
        .filter(|&i| deodhar_flags[i] || !options.deodhar_only)
        .collect();
    let cache = KlCache::new();
    let jobs = options
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
                .min(8)
        })
        .max(1)
        .min(targets.len().max(1));
    let outcomes: Vec<TargetOutcome> = if jobs == 1 {
        targets
            .iter()
            .map(|&t| check_target(&cache, &elements[t], deodhar_flags[t]))
            .collect()
    } else {
        let mut slots: Vec<Option<TargetOutcome>> = Vec::new();
        slots.resize_with(targets.len(), || None);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for worker in 0..jobs {
                let cache = &cache;
                let elements = &elements;
                let targets = &targets;
                let deodhar_flags = &deodhar_flags;
                handles.push(scope.spawn(move || {
                    let mut done = Vec::new();
                    let mut i = worker;
                    while i < targets.len() {
                        let t = targets[i];
                        done.push((i, check_target(cache, &elements[t], deodhar_flags[t])));
                        i += jobs;
                    }
                    done
                }));
            }
            for handle in handles {
                for (i, outcome) in handle.join().expect("verification worker") {
                    slots[i] = Some(outcome);
                }
            }
        });
        slots
            .into_iter()
            .map(|slot| slot.expect("every target checked"))
            .collect()
    };
    let mut report = MuReport {
        system: system.descriptor(),
        elements: elements.len(),
        deodhar_count,
        targets_checked: targets.len(),
        pairs_checked: 0,
        recursion_only_pairs: 0,
        mu_histogram: BTreeMap::new(),
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for outcome in outcomes {
        report.pairs_checked += outcome.pairs;
        report.recursion_only_pairs += outcome.recursion_only;
        for (value, count) in outcome.histogram {
            *report.mu_histogram.entry(value).or_insert(0) += count;
        }
        report.violations.extend(outcome.violations);
    }
    report.elapsed = start.elapsed();
    report
}
