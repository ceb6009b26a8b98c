//! Exact duel arithmetic for value multisets (dice faces, stick lengths):
//! m-copy sum tallies, cycle verification, multiplayer dominance, and a
//! bounded exhaustive search for intransitive families.
//!
//! Everything here is exact: counts are big integers, probabilities are big
//! rationals, and there is no floating point anywhere. A "duel" compares the
//! sum of `copies` independent draws from each side over the full product
//! space; ties neither win nor lose, and "beats" means strictly more winning
//! outcomes than losing ones.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use num::bigint::BigInt;
use num::{BigUint, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{rational_string, Rational};
use crate::relations::{DuelResult, TournamentGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiceError {
    #[error("value multiset must be nonempty")]
    EmptyMultiset,
    #[error("label must be nonempty")]
    EmptyLabel,
    #[error("copies must be >= 1, got {0}")]
    CopiesOutOfRange(u32),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("need at least {needed} items, got {got}")]
    TooFewItems { needed: usize, got: usize },
    #[error("matrix row {row} has {got} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("k must satisfy 1 <= k < {items}, got {k}")]
    KOutOfRange { k: usize, items: usize },
    #[error("invalid search spec: {0}")]
    SpecInvalid(String),
}

/// A labeled multiset of exact rational values. Order carries no meaning;
/// the canonical form (and the stored form) is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ValueMultiset {
    label: String,
    values: Vec<Rational>,
}

impl ValueMultiset {
    pub fn new(label: impl Into<String>, mut values: Vec<Rational>) -> Result<Self, DiceError> {
        let label = label.into();
        if label.is_empty() {
            return Err(DiceError::EmptyLabel);
        }
        if values.is_empty() {
            return Err(DiceError::EmptyMultiset);
        }
        values.sort();
        Ok(Self { label, values })
    }

    pub fn from_ints(label: impl Into<String>, values: &[i64]) -> Result<Self, DiceError> {
        Self::new(
            label,
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Values in ascending order.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }
}

/// How a duel came out for the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DuelOrdering {
    AWins,
    BWins,
    Balanced,
}

/// Exact outcome counts and probabilities for one duel. Counts always sum
/// to the full product-space size, probabilities to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeatTally {
    #[serde(with = "count_value")]
    pub wins: BigUint,
    #[serde(with = "count_value")]
    pub ties: BigUint,
    #[serde(with = "count_value")]
    pub losses: BigUint,
    #[serde(with = "rational_string")]
    pub p_win: Rational,
    #[serde(with = "rational_string")]
    pub p_tie: Rational,
    #[serde(with = "rational_string")]
    pub p_loss: Rational,
}

impl BeatTally {
    fn from_counts(wins: BigUint, ties: BigUint, losses: BigUint) -> Self {
        let total = &wins + &ties + &losses;
        let prob =
            |c: &BigUint| Rational::new(BigInt::from(c.clone()), BigInt::from(total.clone()));
        Self {
            p_win: prob(&wins),
            p_tie: prob(&ties),
            p_loss: prob(&losses),
            wins,
            ties,
            losses,
        }
    }

    pub fn outcome_count(&self) -> BigUint {
        &self.wins + &self.ties + &self.losses
    }

    /// |p_win − p_loss|, the edge weight used in duel graphs.
    pub fn margin(&self) -> Rational {
        let d = &self.p_win - &self.p_loss;
        if d < Rational::zero() {
            -d
        } else {
            d
        }
    }

    pub fn ordering(&self) -> DuelOrdering {
        match self.p_win.cmp(&self.p_loss) {
            std::cmp::Ordering::Greater => DuelOrdering::AWins,
            std::cmp::Ordering::Less => DuelOrdering::BWins,
            std::cmp::Ordering::Equal => DuelOrdering::Balanced,
        }
    }

    /// "wins:ties:losses" as decimal strings.
    pub fn counts_string(&self) -> String {
        format!("{}:{}:{}", self.wins, self.ties, self.losses)
    }
}

mod count_value {
    use num::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(c: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(c.clone()) {
            Ok(n) => Repr::Int(n).serialize(ser),
            Err(_) => Repr::Str(c.to_string()).serialize(ser),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        use serde::de::Error as _;
        match Repr::deserialize(de)? {
            Repr::Int(n) => Ok(BigUint::from(n)),
            Repr::Str(s) => s
                .parse::<BigUint>()
                .map_err(|e| D::Error::custom(format!("bad count {s:?}: {e}"))),
        }
    }
}

/// Distribution of the sum of `copies` independent draws: sum value →
/// number of ordered draw sequences producing it. Total mass is
/// `values.len() ^ copies`.
pub fn sum_distribution(values: &[Rational], copies: u32) -> BTreeMap<Rational, BigUint> {
    let mut dist: BTreeMap<Rational, BigUint> =
        BTreeMap::from([(Rational::zero(), BigUint::one())]);
    for _ in 0..copies {
        let mut next: BTreeMap<Rational, BigUint> = BTreeMap::new();
        for (sum, count) in &dist {
            for v in values {
                *next.entry(sum + v).or_default() += count;
            }
        }
        dist = next;
    }
    dist
}

fn tally_from_distributions(
    da: &BTreeMap<Rational, BigUint>,
    db: &BTreeMap<Rational, BigUint>,
) -> BeatTally {
    let total_b: BigUint = db.values().sum();
    let b_entries: Vec<(&Rational, &BigUint)> = db.iter().collect();
    let mut wins = BigUint::zero();
    let mut ties = BigUint::zero();
    let mut losses = BigUint::zero();
    let mut below = BigUint::zero(); // mass of b strictly less than the current a-key
    let mut j = 0usize;
    for (sa, ca) in da {
        while j < b_entries.len() && b_entries[j].0 < sa {
            below += b_entries[j].1;
            j += 1;
        }
        let tie_mass = if j < b_entries.len() && b_entries[j].0 == sa {
            b_entries[j].1.clone()
        } else {
            BigUint::zero()
        };
        wins += ca * &below;
        ties += ca * &tie_mass;
        losses += ca * (&total_b - &below - &tie_mass);
    }
    BeatTally::from_counts(wins, ties, losses)
}

/// Exact tally of (sum of `copies` draws from `a`) vs the same for `b`,
/// over the full product space, computed by convolution of the two sum
/// distributions.
pub fn beat_tally(
    a: &ValueMultiset,
    b: &ValueMultiset,
    copies: u32,
) -> Result<BeatTally, DiceError> {
    if copies < 1 {
        return Err(DiceError::CopiesOutOfRange(copies));
    }
    let da = sum_distribution(a.values(), copies);
    let db = sum_distribution(b.values(), copies);
    Ok(tally_from_distributions(&da, &db))
}

pub fn beats(a: &ValueMultiset, b: &ValueMultiset, copies: u32) -> Result<DuelOrdering, DiceError> {
    Ok(beat_tally(a, b, copies)?.ordering())
}

/// Tournament graph over all pairs: edge winner→loser with margin
/// |p_win − p_loss| for every non-balanced duel.
pub fn duel_graph(items: &[ValueMultiset], copies: u32) -> Result<TournamentGraph, DiceError> {
    if items.len() < 2 {
        return Err(DiceError::TooFewItems {
            needed: 2,
            got: items.len(),
        });
    }
    check_distinct_labels(items)?;
    let mut results = Vec::new();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            let tally = beat_tally(a, b, copies)?;
            let winner = match tally.ordering() {
                DuelOrdering::AWins => a.label(),
                DuelOrdering::BWins => b.label(),
                DuelOrdering::Balanced => a.label(), // margin 0 → tie, no edge
            };
            results.push(DuelResult::new(
                a.label(),
                b.label(),
                winner,
                tally.margin(),
            ));
        }
    }
    TournamentGraph::build(items.iter().map(|s| s.label().to_string()), &results)
        .map_err(|e| DiceError::SpecInvalid(e.to_string()))
}

fn check_distinct_labels(items: &[ValueMultiset]) -> Result<(), DiceError> {
    let mut seen = BTreeSet::new();
    for s in items {
        if !seen.insert(s.label()) {
            return Err(DiceError::DuplicateLabel(s.label().to_string()));
        }
    }
    Ok(())
}

/// One leg of a cycle check: `left` vs `right` with its full tally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTally {
    pub left: String,
    pub right: String,
    pub tally: BeatTally,
}

/// Result of [`verify_cycle`]: `holds` plus the per-pair evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub holds: bool,
    pub pairs: Vec<PairTally>,
}

/// True iff each item beats the next and the last beats the first, with
/// per-pair tallies as evidence either way.
pub fn verify_cycle(items: &[ValueMultiset], copies: u32) -> Result<CycleCheck, DiceError> {
    if items.len() < 3 {
        return Err(DiceError::TooFewItems {
            needed: 3,
            got: items.len(),
        });
    }
    let mut holds = true;
    let mut pairs = Vec::with_capacity(items.len());
    for (i, a) in items.iter().enumerate() {
        let b = &items[(i + 1) % items.len()];
        let tally = beat_tally(a, b, copies)?;
        holds &= tally.ordering() == DuelOrdering::AWins;
        pairs.push(PairTally {
            left: a.label().to_string(),
            right: b.label().to_string(),
            tally,
        });
    }
    Ok(CycleCheck { holds, pairs })
}

/// One multiset per matrix row, labeled Row1..RowN.
pub fn sets_from_square(matrix: &[Vec<Rational>]) -> Result<Vec<ValueMultiset>, DiceError> {
    if matrix.is_empty() || matrix[0].is_empty() {
        return Err(DiceError::EmptyMatrix);
    }
    let width = matrix[0].len();
    matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != width {
                return Err(DiceError::RaggedMatrix {
                    row: i + 1,
                    expected: width,
                    got: row.len(),
                });
            }
            ValueMultiset::new(format!("Row{}", i + 1), row.clone())
        })
        .collect()
}

// --- search ------------------------------------------------------------------

/// Parameters for the exhaustive intransitive-family search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub n_sets: usize,
    pub n_faces: usize,
    pub value_min: i64,
    pub value_max: i64,
    pub copies: u32,
    pub required_cycle_len: usize,
    pub min_margin: Option<Rational>,
}

impl SearchSpec {
    fn validate(&self) -> Result<(), DiceError> {
        if self.n_sets < 3 {
            return Err(DiceError::SpecInvalid(format!(
                "n_sets must be >= 3, got {}",
                self.n_sets
            )));
        }
        if self.n_faces < 1 {
            return Err(DiceError::SpecInvalid("n_faces must be >= 1".into()));
        }
        if self.value_min > self.value_max {
            return Err(DiceError::SpecInvalid(format!(
                "value range is empty: {} > {}",
                self.value_min, self.value_max
            )));
        }
        if self.copies < 1 {
            return Err(DiceError::SpecInvalid("copies must be >= 1".into()));
        }
        Ok(())
    }
}

/// One qualifying family: the member multisets in canonical order plus the
/// witness cycle (labels) whose edges all meet the margin requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyHit {
    pub items: Vec<ValueMultiset>,
    pub cycle: Vec<String>,
}

/// Exhaustively enumerates families of `n_sets` multisets with `n_faces`
/// integer values in `[value_min, value_max]` and streams every family (up
/// to order-isomorphism of the combined value set) whose duel graph contains
/// a directed cycle of exactly `required_cycle_len` with every cycle-edge
/// margin ≥ `min_margin`.
///
/// Canonical order: values sorted within a set, sets sorted lexicographically
/// within a family, families visited in lexicographic order. The first
/// member of each order-isomorphism class qualifies; later isomorphs are
/// dropped. Output content and order are identical for every `jobs` value —
/// enumeration is split into fixed chunks whose results are merged back in
/// enumeration order before deduplication.
///
/// `emit` may return `ControlFlow::Break` to stop early (e.g. a result
/// limit). Returns the number of families emitted.
pub fn search_intransitive_sets<F>(
    spec: &SearchSpec,
    jobs: usize,
    mut emit: F,
) -> Result<u64, DiceError>
where
    F: FnMut(&FamilyHit) -> ControlFlow<()>,
{
    spec.validate()?;
    let faces = enumerate_face_multisets(spec.value_min, spec.value_max, spec.n_faces);
    let pool = if jobs == 1 {
        None
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if jobs > 0 {
            builder = builder.num_threads(jobs);
        }
        Some(builder.build().expect("worker pool"))
    };

    const CHUNK: usize = 1024;
    let mut emitted = 0u64;
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut cursor = Some(vec![0usize; spec.n_sets]);
    while let Some(start) = cursor {
        let (chunk, next) = take_family_chunk(start, faces.len(), CHUNK);
        cursor = next;
        let evaluate = |indices: &Vec<usize>| evaluate_family(spec, &faces, indices);
        let hits: Vec<Option<FamilyHit>> = match &pool {
            Some(p) => p.install(|| chunk.par_iter().map(evaluate).collect()),
            None => chunk.iter().map(evaluate).collect(),
        };
        for hit in hits.into_iter().flatten() {
            if seen.insert(order_iso_signature(&hit.items)) {
                emitted += 1;
                if emit(&hit) == ControlFlow::Break(()) {
                    return Ok(emitted);
                }
            }
        }
    }
    Ok(emitted)
}

/// All multisets of `len` values from `min..=max`, as sorted vectors in
/// lexicographic order.
fn enumerate_face_multisets(min: i64, max: i64, len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![min; len];
    loop {
        out.push(current.clone());
        // advance the non-decreasing odometer
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max {
                let v = current[i] + 1;
                for slot in &mut current[i..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Collects up to `chunk` non-decreasing index tuples starting at `start`
/// (inclusive), returning them plus the successor of the last one taken.
fn take_family_chunk(
    start: Vec<usize>,
    base: usize,
    chunk: usize,
) -> (Vec<Vec<usize>>, Option<Vec<usize>>) {
    let mut out = Vec::with_capacity(chunk);
    let mut current = Some(start);
    while out.len() < chunk {
        match current {
            Some(c) => {
                out.push(c.clone());
                current = next_family_indices(c, base);
            }
            None => break,
        }
    }
    (out, current)
}

fn next_family_indices(mut indices: Vec<usize>, base: usize) -> Option<Vec<usize>> {
    let len = indices.len();
    let mut i = len;
    loop {
        if i == 0 {
            return None;
        }
        i -= 1;
        if indices[i] + 1 < base {
            let v = indices[i] + 1;
            for slot in &mut indices[i..] {
                *slot = v;
            }
            return Some(indices);
        }
    }
}

fn family_labels(n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("S{i:0width$}")).collect()
}

fn evaluate_family(spec: &SearchSpec, faces: &[Vec<i64>], indices: &[usize]) -> Option<FamilyHit> {
    let labels = family_labels(spec.n_sets);
    let items: Vec<ValueMultiset> = indices
        .iter()
        .zip(&labels)
        .map(|(&ix, label)| {
            ValueMultiset::from_ints(label.clone(), &faces[ix]).expect("nonempty face set")
        })
        .collect();
    let graph = duel_graph(&items, spec.copies).expect("distinct generated labels");
    let cycles = graph.find_beat_cycles(spec.required_cycle_len);
    let cycle = cycles.into_iter().find(|c| {
        c.len() == spec.required_cycle_len
            && match &spec.min_margin {
                None => true,
                Some(m) => (0..c.len()).all(|i| {
                    graph
                        .margin(&c[i], &c[(i + 1) % c.len()])
                        .is_some_and(|edge| edge >= m)
                }),
            }
    })?;
    // postcondition: the witness ordering itself passes verify_cycle
    let by_label: BTreeMap<&str, &ValueMultiset> = items.iter().map(|s| (s.label(), s)).collect();
    let ordered: Vec<ValueMultiset> = cycle.iter().map(|l| by_label[l.as_str()].clone()).collect();
    debug_assert!(
        verify_cycle(&ordered, spec.copies)
            .expect("cycle length >= 3")
            .holds
    );
    Some(FamilyHit { items, cycle })
}

/// Dense-rank signature over the union of all values in the family; two
/// families share a signature iff one maps onto the other by a strictly
/// increasing value substitution.
fn order_iso_signature(items: &[ValueMultiset]) -> Vec<Vec<usize>> {
    let union: BTreeSet<&Rational> = items.iter().flat_map(|s| s.values()).collect();
    let rank: BTreeMap<&Rational, usize> =
        union.into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    items
        .iter()
        .map(|s| s.values().iter().map(|v| rank[v]).collect())
        .collect()
}

// --- multiplayer dominance -----------------------------------------------------

/// Which reading of "one die beats k opponents" to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DominanceSemantics {
    /// x beats every member of the subset in separate two-player duels.
    Pairwise,
    /// In one joint draw, P(x strictly exceeds all of them) > P(someone
    /// strictly exceeds x).
    Simultaneous,
}

/// Evidence for [`verify_k_player_dominance`]: a dominator per subset when
/// the property holds, or the first failing subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport {
    pub holds: bool,
    /// subset labels (in item order) → dominator label, for every subset
    /// checked before a failure (all of them when `holds`).
    pub witnesses: Vec<(Vec<String>, String)>,
    pub counterexample: Option<Vec<String>>,
}

/// For every k-subset of `items`, is there some remaining item that beats
/// the whole subset under the chosen semantics? Subsets are visited in
/// lexicographic index order; the first suitable dominator (by item order)
/// is recorded per subset.
pub fn verify_k_player_dominance(
    items: &[ValueMultiset],
    k: usize,
    copies: u32,
    semantics: DominanceSemantics,
) -> Result<DominanceReport, DiceError> {
    if copies < 1 {
        return Err(DiceError::CopiesOutOfRange(copies));
    }
    check_distinct_labels(items)?;
    if k < 1 || k >= items.len() {
        return Err(DiceError::KOutOfRange {
            k,
            items: items.len(),
        });
    }
    let dists: Vec<BTreeMap<Rational, BigUint>> = items
        .iter()
        .map(|s| sum_distribution(s.values(), copies))
        .collect();

    let mut witnesses = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let dominator =
            (0..items.len())
                .filter(|x| !subset.contains(x))
                .find(|&x| match semantics {
                    DominanceSemantics::Pairwise => subset.iter().all(|&s| {
                        tally_from_distributions(&dists[x], &dists[s]).ordering()
                            == DuelOrdering::AWins
                    }),
                    DominanceSemantics::Simultaneous => simultaneous_dominates(&dists, x, &subset),
                });
        let labels: Vec<String> = subset
            .iter()
            .map(|&i| items[i].label().to_string())
            .collect();
        match dominator {
            Some(x) => witnesses.push((labels, items[x].label().to_string())),
            None => {
                return Ok(DominanceReport {
                    holds: false,
                    witnesses,
                    counterexample: Some(labels),
                })
            }
        }
        if !advance_combination(&mut subset, items.len()) {
            break;
        }
    }
    Ok(DominanceReport {
        holds: true,
        witnesses,
        counterexample: None,
    })
}

fn advance_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
}

/// P(x's sum strictly exceeds every subset member's sum in one joint draw)
/// > P(some member strictly exceeds x's sum).
fn simultaneous_dominates(
    dists: &[BTreeMap<Rational, BigUint>],
    x: usize,
    subset: &[usize],
) -> bool {
    let prob_dist = |i: usize| -> Vec<(Rational, Rational)> {
        let total: BigUint = dists[i].values().sum();
        dists[i]
            .iter()
            .map(|(v, c)| {
                (
                    v.clone(),
                    Rational::new(BigInt::from(c.clone()), BigInt::from(total.clone())),
                )
            })
            .collect()
    };
    let px = prob_dist(x);
    let opponents: Vec<Vec<(Rational, Rational)>> = subset.iter().map(|&s| prob_dist(s)).collect();
    // cumulative P(value < v) and P(value <= v) via sorted scan
    let cdf = |dist: &[(Rational, Rational)], v: &Rational, strict: bool| -> Rational {
        let mut acc = Rational::zero();
        for (val, p) in dist {
            if (strict && val < v) || (!strict && val <= v) {
                acc += p;
            } else {
                break;
            }
        }
        acc
    };
    let mut p_beats_all = Rational::zero();
    let mut p_someone_beats_x = Rational::zero();
    for (v, p) in &px {
        let mut all_below = Rational::one();
        let mut all_at_most = Rational::one();
        for opp in &opponents {
            all_below *= cdf(opp, v, true);
            all_at_most *= cdf(opp, v, false);
        }
        p_beats_all += p * all_below;
        p_someone_beats_x += p * (Rational::one() - all_at_most);
    }
    p_beats_all > p_someone_beats_x
}
