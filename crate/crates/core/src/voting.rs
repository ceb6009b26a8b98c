//! Preference profiles, pairwise-majority margins, majority-cycle detection,
//! and the cyclic-rotation generator that seeds every rotated-device
//! construction in this workbench.
//!
//! A profile is a list of ballots, each a total order over the same
//! candidate set. Pairwise majorities induce a [`TournamentGraph`]; a
//! majority cycle (A over B over C over A) is the classic paradox where
//! individually consistent rankings aggregate to an intransitive relation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::rat;
use crate::relations::{DuelResult, TournamentGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VotingError {
    #[error("candidate list must be nonempty")]
    EmptyCandidates,
    #[error("duplicate candidate {0:?}")]
    DuplicateCandidate(String),
    #[error("profile needs at least one ballot")]
    EmptyProfile,
    #[error("ballot {index} is not a permutation of the candidates: {reason}")]
    MalformedBallot { index: usize, reason: String },
    #[error("rows must satisfy 1 <= rows <= {k}, got {rows}")]
    RowsOutOfRange { rows: usize, k: usize },
    #[error("rotation base must be nonempty")]
    EmptyBase,
    #[error("rotation base has duplicate symbol {0:?}")]
    DuplicateSymbol(String),
}

/// A fixed candidate set plus ballots that each rank all candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    candidates: Vec<String>,
    ballots: Vec<Vec<String>>,
}

impl PreferenceProfile {
    pub fn new(candidates: Vec<String>, ballots: Vec<Vec<String>>) -> Result<Self, VotingError> {
        if candidates.is_empty() {
            return Err(VotingError::EmptyCandidates);
        }
        let mut sorted = candidates.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(VotingError::DuplicateCandidate(pair[0].clone()));
            }
        }
        if ballots.is_empty() {
            return Err(VotingError::EmptyProfile);
        }
        for (index, ballot) in ballots.iter().enumerate() {
            let mut b = ballot.clone();
            b.sort();
            if b != sorted {
                return Err(VotingError::MalformedBallot {
                    index,
                    reason: format!("got {ballot:?}"),
                });
            }
        }
        Ok(Self {
            candidates,
            ballots,
        })
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn ballots(&self) -> &[Vec<String>] {
        &self.ballots
    }

    pub fn ballot_count(&self) -> usize {
        self.ballots.len()
    }
}

/// Raw head-to-head counts: (preferred, other) → number of ballots ranking
/// `preferred` above `other`. Every ordered candidate pair is present.
pub fn pairwise_counts(profile: &PreferenceProfile) -> BTreeMap<(String, String), u64> {
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for a in profile.candidates() {
        for b in profile.candidates() {
            if a != b {
                counts.insert((a.clone(), b.clone()), 0);
            }
        }
    }
    for ballot in profile.ballots() {
        for (i, above) in ballot.iter().enumerate() {
            for below in &ballot[i + 1..] {
                *counts.get_mut(&(above.clone(), below.clone())).unwrap() += 1;
            }
        }
    }
    counts
}

/// Pairwise-majority tournament: edge from the majority winner of each pair
/// with margin |count difference| / |ballots|; exactly split pairs get no
/// edge.
pub fn pairwise_margins(profile: &PreferenceProfile) -> TournamentGraph {
    let counts = pairwise_counts(profile);
    let total = profile.ballot_count() as i64;
    let mut results = Vec::new();
    let cands = profile.candidates();
    for (i, a) in cands.iter().enumerate() {
        for b in &cands[i + 1..] {
            let ab = counts[&(a.clone(), b.clone())] as i64;
            let ba = counts[&(b.clone(), a.clone())] as i64;
            let winner = if ab >= ba { a } else { b };
            results.push(DuelResult::new(
                a.clone(),
                b.clone(),
                winner.clone(),
                rat((ab - ba).abs(), total),
            ));
        }
    }
    TournamentGraph::build(cands.iter().cloned(), &results)
        .expect("validated profile yields a well-formed tournament")
}

/// All pairwise-majority cycles up to the number of candidates, canonically
/// ordered. Empty iff the majority relation is acyclic.
pub fn detect_condorcet_cycle(profile: &PreferenceProfile) -> Vec<Vec<String>> {
    pairwise_margins(profile).find_beat_cycles(profile.candidates().len())
}

/// Which end of the sequence moves on each rotation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationDirection {
    /// First element moves to the last position.
    Left,
    /// Last element moves to the first position.
    Right,
}

impl RotationDirection {
    pub fn rotate_once<T: Clone>(self, seq: &[T]) -> Vec<T> {
        if seq.len() <= 1 {
            return seq.to_vec();
        }
        match self {
            RotationDirection::Left => {
                let mut out = seq[1..].to_vec();
                out.push(seq[0].clone());
                out
            }
            RotationDirection::Right => {
                let mut out = Vec::with_capacity(seq.len());
                out.push(seq[seq.len() - 1].clone());
                out.extend_from_slice(&seq[..seq.len() - 1]);
                out
            }
        }
    }
}

/// A base sequence of distinct symbols plus a rotation direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationScheme {
    base: Vec<String>,
    direction: RotationDirection,
}

impl RotationScheme {
    pub fn new(base: Vec<String>, direction: RotationDirection) -> Result<Self, VotingError> {
        if base.is_empty() {
            return Err(VotingError::EmptyBase);
        }
        let mut sorted = base.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(VotingError::DuplicateSymbol(pair[0].clone()));
            }
        }
        Ok(Self { base, direction })
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn direction(&self) -> RotationDirection {
        self.direction
    }
}

/// Row 1 is the base; each subsequent row is the previous row rotated one
/// step in the scheme's direction. With `rows` equal to the base length the
/// result is a circulant Latin square.
pub fn condorcet_rotation(
    scheme: &RotationScheme,
    rows: usize,
) -> Result<Vec<Vec<String>>, VotingError> {
    let k = scheme.base().len();
    if rows < 1 || rows > k {
        return Err(VotingError::RowsOutOfRange { rows, k });
    }
    let mut out = Vec::with_capacity(rows);
    out.push(scheme.base().to_vec());
    for _ in 1..rows {
        let next = scheme.direction().rotate_once(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}
