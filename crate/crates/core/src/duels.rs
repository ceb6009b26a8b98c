//! One-dimensional lane-contact duels: two devices approach each other on
//! rails, each presenting a row of lanes holding protrusions of exact
//! rational length. They stop at first contact — the lane(s) maximizing the
//! combined protrusion length — and what touches there decides the outcome:
//! markers mark whatever they reach, wedges ride under solid edges and lift
//! the opponent, everything else just stalls.
//!
//! The same model covers paint-tower duels (marker lanes), ramp combs
//! (wedge/tooth lanes), and the wing-tap birds (marker contact under other
//! labels). Lane alignment is index-to-index; mirrored facing can be had by
//! reversing one profile before the duel.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{rat_int, Rational};
use crate::relations::{DuelResult, TournamentGraph};
use crate::voting::RotationDirection;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DuelsError {
    #[error("labels must be nonempty")]
    EmptyLabel,
    #[error("a profile needs at least one lane")]
    NoLanes,
    #[error("profiles have different lane counts ({0} vs {1})")]
    LaneCountMismatch(usize, usize),
    #[error("a gap has length 0; solid elements need a positive length")]
    BadElementLength,
    #[error("duplicate profile label {0:?}")]
    DuplicateLabel(String),
    #[error("search space is invalid: {0}")]
    SpecInvalid(String),
}

/// What a lane holds, facing the opponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LaneKind {
    /// Soft tip that marks whatever it touches first.
    Marker,
    /// Plain solid protrusion.
    Block,
    /// Inclined solid that rides under the opposing body and lifts it.
    Wedge,
    /// Solid peg a wedge can get under.
    Tooth,
    /// Nothing: bare facade at depth 0.
    Gap,
}

pub const ALL_KINDS: [LaneKind; 5] = [
    LaneKind::Marker,
    LaneKind::Block,
    LaneKind::Wedge,
    LaneKind::Tooth,
    LaneKind::Gap,
];

/// One lane: a kind plus how far it protrudes. Gaps protrude 0; everything
/// else must protrude a positive amount.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaneElement {
    kind: LaneKind,
    length: Rational,
}

impl LaneElement {
    pub fn new(kind: LaneKind, length: Rational) -> Result<Self, DuelsError> {
        let ok = match kind {
            LaneKind::Gap => length.is_zero(),
            _ => length > Rational::zero(),
        };
        if !ok {
            return Err(DuelsError::BadElementLength);
        }
        Ok(Self { kind, length })
    }

    pub fn gap() -> Self {
        Self {
            kind: LaneKind::Gap,
            length: Rational::zero(),
        }
    }

    pub fn marker(length: Rational) -> Result<Self, DuelsError> {
        Self::new(LaneKind::Marker, length)
    }

    pub fn block(length: Rational) -> Result<Self, DuelsError> {
        Self::new(LaneKind::Block, length)
    }

    pub fn wedge(length: Rational) -> Result<Self, DuelsError> {
        Self::new(LaneKind::Wedge, length)
    }

    pub fn tooth(length: Rational) -> Result<Self, DuelsError> {
        Self::new(LaneKind::Tooth, length)
    }

    pub fn kind(&self) -> LaneKind {
        self.kind
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    /// Listing notation, e.g. "Marker 3" or "Gap".
    pub fn describe(&self) -> String {
        match self.kind {
            LaneKind::Gap => "Gap".to_string(),
            kind => format!(
                "{kind:?} {}",
                crate::rational::format_rational(&self.length)
            ),
        }
    }
}

/// A labeled device facade: one element per lane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneProfile {
    label: String,
    lanes: Vec<LaneElement>,
}

impl LaneProfile {
    pub fn new(label: impl Into<String>, lanes: Vec<LaneElement>) -> Result<Self, DuelsError> {
        let label = label.into();
        if label.is_empty() {
            return Err(DuelsError::EmptyLabel);
        }
        if lanes.is_empty() {
            return Err(DuelsError::NoLanes);
        }
        Ok(Self { label, lanes })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lanes(&self) -> &[LaneElement] {
        &self.lanes
    }

    /// Listing notation, e.g. "(Marker 3, Gap, Block 1)".
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.lanes.iter().map(LaneElement::describe).collect();
        format!("({})", parts.join(", "))
    }
}

/// Where two approaching profiles stop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contact {
    /// Center-to-center stopping distance: the largest combined protrusion.
    pub distance: Rational,
    /// Every lane achieving that maximum (0-indexed).
    pub lanes: Vec<usize>,
}

/// First contact between two aligned profiles: the pair stops where the
/// combined protrusion is largest; all lanes at that maximum touch at once.
/// Two facing gaps contribute 0, so all-gap profiles meet facade-to-facade.
pub fn first_contact(a: &LaneProfile, b: &LaneProfile) -> Result<Contact, DuelsError> {
    if a.lanes().len() != b.lanes().len() {
        return Err(DuelsError::LaneCountMismatch(
            a.lanes().len(),
            b.lanes().len(),
        ));
    }
    let sums: Vec<Rational> = a
        .lanes()
        .iter()
        .zip(b.lanes())
        .map(|(ea, eb)| ea.length() + eb.length())
        .collect();
    let distance = sums.iter().max().expect("profiles are nonempty").clone();
    let lanes = sums
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == distance)
        .map(|(i, _)| i)
        .collect();
    Ok(Contact { distance, lanes })
}

/// Who acts on whom at first contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AActsOnB,
    BActsOnA,
    /// Both sides reach the other (possibly in different lanes).
    Mutual,
    /// Nothing happens: solid parts or facades rest against each other.
    None,
}

/// What the acting side does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    Marks,
    Lifts,
    Stalls,
}

/// Directed rule table: what `ka` does to a facing `kb`. A marker marks
/// anything it reaches, a facade included; a wedge gets under solid edges
/// (tooth, block) and under the body across a gap, but not under a marker
/// tip; nothing else acts. Wedge-on-wedge is symmetric tip contact: no
/// action.
fn acts(ka: LaneKind, kb: LaneKind) -> Option<ActionKind> {
    match (ka, kb) {
        (LaneKind::Marker, _) => Some(ActionKind::Marks),
        (LaneKind::Wedge, LaneKind::Tooth | LaneKind::Block | LaneKind::Gap) => {
            Some(ActionKind::Lifts)
        }
        _ => None,
    }
}

/// Full duel record: who acts, what the action is, and where contact
/// happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuelOutcome {
    pub verdict: Verdict,
    /// Strongest action present at contact (marks over lifts); `Stalls`
    /// exactly when the verdict is `None`.
    pub action: ActionKind,
    pub contact_distance: Rational,
    pub contact_lanes: Vec<usize>,
}

/// Evaluates the rule table at every contact lane and aggregates: one side
/// acting anywhere with the other side acting nowhere is a one-sided
/// verdict; both sides acting (same lane or different lanes) is `Mutual`;
/// nobody acting is `None` with action `Stalls`.
pub fn duel_outcome(a: &LaneProfile, b: &LaneProfile) -> Result<DuelOutcome, DuelsError> {
    let contact = first_contact(a, b)?;
    let mut actions = Vec::new(); // (a_acted, action) per acting lane side
    for &lane in &contact.lanes {
        let (ea, eb) = (&a.lanes()[lane], &b.lanes()[lane]);
        if let Some(action) = acts(ea.kind(), eb.kind()) {
            actions.push((true, action));
        }
        if let Some(action) = acts(eb.kind(), ea.kind()) {
            actions.push((false, action));
        }
    }
    let a_acts = actions.iter().any(|(by_a, _)| *by_a);
    let b_acts = actions.iter().any(|(by_a, _)| !*by_a);
    let verdict = match (a_acts, b_acts) {
        (true, true) => Verdict::Mutual,
        (true, false) => Verdict::AActsOnB,
        (false, true) => Verdict::BActsOnA,
        (false, false) => Verdict::None,
    };
    let action = if actions.iter().any(|(_, k)| *k == ActionKind::Marks) {
        ActionKind::Marks
    } else if actions.iter().any(|(_, k)| *k == ActionKind::Lifts) {
        ActionKind::Lifts
    } else {
        ActionKind::Stalls
    };
    Ok(DuelOutcome {
        verdict,
        action,
        contact_distance: contact.distance,
        contact_lanes: contact.lanes,
    })
}

/// Tournament of one-sided actions over all profile pairs: an edge from the
/// actor with unit margin. Mutual and inert contacts contribute no edge.
pub fn action_duel_graph(profiles: &[LaneProfile]) -> Result<TournamentGraph, DuelsError> {
    let mut labels = BTreeSet::new();
    for p in profiles {
        if !labels.insert(p.label()) {
            return Err(DuelsError::DuplicateLabel(p.label().to_string()));
        }
    }
    let mut results = Vec::new();
    for (i, a) in profiles.iter().enumerate() {
        for b in &profiles[i + 1..] {
            let outcome = duel_outcome(a, b)?;
            let winner = match outcome.verdict {
                Verdict::AActsOnB => a.label(),
                Verdict::BActsOnA => b.label(),
                Verdict::Mutual | Verdict::None => continue,
            };
            results.push(DuelResult::new(a.label(), b.label(), winner, rat_int(1)));
        }
    }
    Ok(
        TournamentGraph::build(profiles.iter().map(|p| p.label().to_string()), &results)
            .expect("labels distinct, margins positive"),
    )
}

/// One palette option: a kind plus the discrete lengths it may take. Gaps
/// carry no lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteEntry {
    pub kind: LaneKind,
    pub lengths: Vec<Rational>,
}

impl PaletteEntry {
    /// Expands to concrete elements, dropping exact duplicate lengths while
    /// keeping the caller's order (which fixes the enumeration order).
    fn expand(&self) -> Result<Vec<LaneElement>, DuelsError> {
        if self.kind == LaneKind::Gap {
            return Ok(vec![LaneElement::gap()]);
        }
        if self.lengths.is_empty() {
            return Err(DuelsError::SpecInvalid(format!(
                "{:?} palette entry has no lengths",
                self.kind
            )));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for len in &self.lengths {
            if seen.insert(len.clone()) {
                out.push(LaneElement::new(self.kind, len.clone())?);
            }
        }
        Ok(out)
    }
}

/// A base sequence whose three cyclic rotations act in a strict cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleHit {
    pub base: Vec<LaneElement>,
    /// The three rotation profiles, labeled A, B, C in rotation order.
    pub rotations: Vec<LaneProfile>,
    /// Actor cycle over those labels: each acts on the next, never reversed.
    pub cycle: Vec<String>,
}

/// Exhaustively enumerates base sequences of `lanes` elements drawn from the
/// expanded palette and streams every base whose three cyclic rotations
/// (per `direction`) realize a strict action 3-cycle — A acts on B, B on C,
/// C on A, with no action reversed.
///
/// Bases are visited in lexicographic order over palette-option indices
/// (options expand in the order given), and the stream is identical for
/// every `jobs` value: enumeration is split into fixed chunks whose results
/// are merged back in enumeration order. All rotations of a qualifying base
/// qualify too and are emitted at their own positions.
///
/// `emit` may return `ControlFlow::Break` to stop early. Returns the number
/// of bases emitted.
pub fn search_condorcet_triples<F>(
    palette: &[PaletteEntry],
    lanes: usize,
    direction: RotationDirection,
    jobs: usize,
    mut emit: F,
) -> Result<u64, DuelsError>
where
    F: FnMut(&TripleHit) -> ControlFlow<()>,
{
    if lanes == 0 {
        return Err(DuelsError::SpecInvalid("lanes must be at least 1".into()));
    }
    let mut options = Vec::new();
    for entry in palette {
        options.extend(entry.expand()?);
    }
    if options.is_empty() {
        return Err(DuelsError::SpecInvalid("palette is empty".into()));
    }

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
    let mut cursor = Some(vec![0usize; lanes]);
    while let Some(start) = cursor {
        let (chunk, next) = take_base_chunk(start, options.len(), CHUNK);
        cursor = next;
        let evaluate = |indices: &Vec<usize>| evaluate_base(&options, indices, direction);
        let hits: Vec<Option<TripleHit>> = match &pool {
            Some(p) => p.install(|| chunk.par_iter().map(evaluate).collect()),
            None => chunk.iter().map(evaluate).collect(),
        };
        for hit in hits.into_iter().flatten() {
            emitted += 1;
            if emit(&hit).is_break() {
                return Ok(emitted);
            }
        }
    }
    Ok(emitted)
}

fn take_base_chunk(
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
                current = next_base_indices(c, base);
            }
            None => break,
        }
    }
    (out, current)
}

/// Plain base-`base` odometer over index vectors, most significant digit
/// first.
fn next_base_indices(mut indices: Vec<usize>, base: usize) -> Option<Vec<usize>> {
    for digit in indices.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return Some(indices);
        }
        *digit = 0;
    }
    None
}

fn evaluate_base(
    options: &[LaneElement],
    indices: &[usize],
    direction: RotationDirection,
) -> Option<TripleHit> {
    let base: Vec<LaneElement> = indices.iter().map(|&i| options[i].clone()).collect();
    let hit = strict_triple(&base, direction);
    debug_assert!(
        hit.as_ref()
            .is_none_or(|h| verify_strict_cycle(&h.rotations)),
        "emitted base failed re-verification"
    );
    hit
}

/// Builds the three rotations of `base` and keeps it iff they act in a
/// strict cycle.
pub fn strict_triple(base: &[LaneElement], direction: RotationDirection) -> Option<TripleHit> {
    let mut rows = vec![base.to_vec()];
    for _ in 0..2 {
        rows.push(direction.rotate_once(rows.last().unwrap()));
    }
    let rotations: Vec<LaneProfile> = rows
        .into_iter()
        .zip(["A", "B", "C"])
        .map(|(lanes, label)| LaneProfile::new(label, lanes).expect("nonempty rotation"))
        .collect();
    if verify_strict_cycle(&rotations) {
        Some(TripleHit {
            base: base.to_vec(),
            rotations,
            cycle: vec!["A".into(), "B".into(), "C".into()],
        })
    } else {
        None
    }
}

/// A strict 3-cycle: each profile acts on the next, one-sidedly.
fn verify_strict_cycle(rotations: &[LaneProfile]) -> bool {
    (0..3).all(|i| {
        duel_outcome(&rotations[i], &rotations[(i + 1) % 3])
            .map(|o| o.verdict == Verdict::AActsOnB)
            .unwrap_or(false)
    })
}
