//! Orchestration behind the command-line front end: canonical demos,
//! verification of user-supplied device files, and search drivers, all
//! reporting through one deterministic `RunReport` shape.
//!
//! Reports are plain data — exact rational strings, stable ordering — so the
//! same run always produces byte-identical text and JSON, regardless of
//! worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::ControlFlow;
use std::path::Path;

use num::{One, Signed};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dice::{
    beat_tally, duel_graph, sets_from_square, verify_cycle, DiceError, SearchSpec, ValueMultiset,
};
use crate::duels::{
    action_duel_graph, duel_outcome, DuelsError, LaneElement, LaneProfile, PaletteEntry, Verdict,
};
use crate::gears::{
    build_condorcet_chain, detect_jam, lever_duel, pulley_duel, speed_duel_graph, speed_ratio,
    Assembly, GearGeometry, GearShaft, GearsError, JamWitness, LeverPair, LeverVerdict, PairJam,
    Pulley, PulleyVerdict, SlotElement, SpeedRelation,
};
use crate::io::{parse_input, Expectation, IoError, ParsedInput};
use crate::rational::{decimal_string, format_rational, rat_int, Rational};
use crate::relations::{RelationsError, TournamentGraph};
use crate::voting::{
    condorcet_rotation, pairwise_counts, pairwise_margins, PreferenceProfile, RotationDirection,
    RotationScheme, VotingError,
};

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("unknown demo {0:?} (try: efron, losho-sticks, condorcet-vote, gears3, gears-chain-n, levers, pulleys, towers, combs, birds)")]
    UnknownDemo(String),
    #[error("bad option: {0}")]
    BadOption(String),
    #[error(transparent)]
    Dice(#[from] DiceError),
    #[error(transparent)]
    Voting(#[from] VotingError),
    #[error(transparent)]
    Gears(#[from] GearsError),
    #[error(transparent)]
    Duels(#[from] DuelsError),
    #[error(transparent)]
    Relations(#[from] RelationsError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("cannot read {path}: {message}")]
    FileRead { path: String, message: String },
    #[error("cannot write results: {0}")]
    StreamWrite(String),
}

/// One pairwise outcome. For directed relations ("beats", "marks", …) the
/// stronger side is always `left`; symmetric relations keep the listing
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub left: String,
    pub right: String,
    pub relation: String,
    pub directed: bool,
    /// Named exact quantities, rendered as rational strings (with a marked
    /// decimal approximation appended in decimal mode).
    pub quantities: BTreeMap<String, String>,
}

impl PairVerdict {
    fn directed(
        left: impl Into<String>,
        right: impl Into<String>,
        relation: &str,
        quantities: BTreeMap<String, String>,
    ) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
            relation: relation.to_string(),
            directed: true,
            quantities,
        }
    }

    fn symmetric(
        left: impl Into<String>,
        right: impl Into<String>,
        relation: &str,
        quantities: BTreeMap<String, String>,
    ) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
            relation: relation.to_string(),
            directed: false,
            quantities,
        }
    }
}

/// Complete, deterministic record of one command run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    /// Canonicalized echo of what ran (never includes --jobs, which must not
    /// affect output).
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub notes: Vec<String>,
    pub pairs: Vec<PairVerdict>,
    pub cycles: Vec<Vec<String>>,
    pub confirmed: bool,
    pub exit_code: i32,
}

impl RunReport {
    fn new(command: String) -> Self {
        Self {
            command,
            input_digest: None,
            notes: Vec::new(),
            pairs: Vec::new(),
            cycles: Vec::new(),
            confirmed: false,
            exit_code: 1,
        }
    }

    fn confirm(&mut self, confirmed: bool) {
        self.confirmed = confirmed;
        self.exit_code = if confirmed { 0 } else { 1 };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(digest) = &self.input_digest {
            out.push_str(&format!("digest: {digest}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        for pair in &self.pairs {
            let head = if pair.directed {
                format!("{} {} {}", pair.left, pair.relation, pair.right)
            } else {
                format!("{} vs {}: {}", pair.left, pair.right, pair.relation)
            };
            let tail = pair
                .quantities
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join("  ");
            if tail.is_empty() {
                out.push_str(&format!("{head}\n"));
            } else {
                out.push_str(&format!("{head}  [{tail}]\n"));
            }
        }
        for cycle in &self.cycles {
            let mut closed = cycle.clone();
            if let Some(first) = cycle.first() {
                closed.push(first.clone());
            }
            out.push_str(&format!("cycle: {}\n", closed.join(" -> ")));
        }
        if self.cycles.is_empty() && !self.pairs.is_empty() {
            out.push_str("cycle: none found\n");
        }
        out.push_str(&format!(
            "confirmed: {} (exit {})\n",
            if self.confirmed { "yes" } else { "no" },
            self.exit_code
        ));
        out
    }
}

/// Options shared by the demo and verify commands.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Copies per side in value-multiset duels.
    pub copies: u32,
    /// Longest cycle to search for; 0 means "up to the number of players".
    pub max_cycle_len: usize,
    /// Rotation direction override; each fixture has its own default.
    pub rotation: Option<RotationDirection>,
    /// Append a clearly marked decimal approximation to non-integer values.
    pub decimal: bool,
    /// Ring size for the chain demo.
    pub n: usize,
    /// Gear radii for the mechanical demos.
    pub geometry: GearGeometry,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            copies: 1,
            max_cycle_len: 0,
            rotation: None,
            decimal: false,
            n: 4,
            geometry: GearGeometry::default_two_one(),
        }
    }
}

fn effective_max(max_cycle_len: usize, auto: usize) -> usize {
    if max_cycle_len == 0 {
        auto
    } else {
        max_cycle_len
    }
}

/// Exact rendering, optionally with a marked decimal approximation.
fn fmt_q(r: &Rational, decimal: bool) -> String {
    let exact = format_rational(r);
    if decimal && !r.denom().is_one() {
        format!("{exact} ({})", decimal_string(r, 6))
    } else {
        exact
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

// --- pair builders -------------------------------------------------------------

fn dice_pairs(
    items: &[ValueMultiset],
    copies: u32,
    decimal: bool,
) -> Result<Vec<PairVerdict>, WorkbenchError> {
    let mut pairs = Vec::new();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            let tally = beat_tally(a, b, copies)?;
            let mut q = BTreeMap::new();
            q.insert("counts".to_string(), tally.counts_string());
            q.insert("p_win".to_string(), fmt_q(&tally.p_win, decimal));
            q.insert("p_tie".to_string(), fmt_q(&tally.p_tie, decimal));
            q.insert("p_loss".to_string(), fmt_q(&tally.p_loss, decimal));
            q.insert("margin".to_string(), fmt_q(&tally.margin(), decimal));
            use crate::dice::DuelOrdering::*;
            pairs.push(match tally.ordering() {
                AWins => PairVerdict::directed(a.label(), b.label(), "beats", q),
                BWins => {
                    // re-orient the probabilities to the displayed winner
                    let flipped = beat_tally(b, a, copies)?;
                    let mut q = BTreeMap::new();
                    q.insert("counts".to_string(), flipped.counts_string());
                    q.insert("p_win".to_string(), fmt_q(&flipped.p_win, decimal));
                    q.insert("p_tie".to_string(), fmt_q(&flipped.p_tie, decimal));
                    q.insert("p_loss".to_string(), fmt_q(&flipped.p_loss, decimal));
                    q.insert("margin".to_string(), fmt_q(&flipped.margin(), decimal));
                    PairVerdict::directed(b.label(), a.label(), "beats", q)
                }
                Balanced => PairVerdict::symmetric(a.label(), b.label(), "balanced", q),
            });
        }
    }
    Ok(pairs)
}

fn voting_pairs(profile: &PreferenceProfile, decimal: bool) -> Vec<PairVerdict> {
    let counts = pairwise_counts(profile);
    let total = profile.ballot_count() as i64;
    let candidates: Vec<&str> = profile.candidates().iter().map(String::as_str).collect();
    let mut pairs = Vec::new();
    for (i, &x) in candidates.iter().enumerate() {
        for &y in &candidates[i + 1..] {
            let xy = counts[&(x.to_string(), y.to_string())];
            let yx = counts[&(y.to_string(), x.to_string())];
            let (left, right, lw, rw) = if xy >= yx {
                (x, y, xy, yx)
            } else {
                (y, x, yx, xy)
            };
            let mut q = BTreeMap::new();
            q.insert("ballots_for".to_string(), lw.to_string());
            q.insert("ballots_against".to_string(), rw.to_string());
            let margin = crate::rational::rat(lw as i64 - rw as i64, total.max(1));
            q.insert("margin".to_string(), fmt_q(&margin, decimal));
            if lw == rw {
                pairs.push(PairVerdict::symmetric(left, right, "tied", q));
            } else {
                pairs.push(PairVerdict::directed(left, right, "beats", q));
            }
        }
    }
    pairs
}

fn speed_pair(
    a: &GearShaft,
    b: &GearShaft,
    geometry: &GearGeometry,
    decimal: bool,
) -> Result<PairVerdict, WorkbenchError> {
    Ok(match speed_ratio(a, b, geometry)? {
        SpeedRelation::Unrelated => {
            PairVerdict::symmetric(a.label(), b.label(), "unrelated", BTreeMap::new())
        }
        SpeedRelation::Jammed(jam) => {
            let mut q = BTreeMap::new();
            match jam {
                PairJam::Interference { slot } => {
                    q.insert("interference_slot".to_string(), slot.to_string());
                }
                PairJam::ConflictingMeshes { slots } => {
                    q.insert(
                        "conflicting_slots".to_string(),
                        slots
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                }
            }
            PairVerdict::symmetric(a.label(), b.label(), "jams with", q)
        }
        SpeedRelation::Ratio(ratio) => {
            let magnitude = ratio.clone().abs();
            let (left, right, oriented) = if magnitude >= Rational::from_integer(1.into()) {
                (a.label(), b.label(), ratio)
            } else {
                (b.label(), a.label(), ratio.recip())
            };
            let mut q = BTreeMap::new();
            q.insert("signed_ratio".to_string(), fmt_q(&oriented, decimal));
            q.insert(
                "speed_advantage".to_string(),
                fmt_q(
                    &(oriented.abs() - Rational::from_integer(1.into())),
                    decimal,
                ),
            );
            PairVerdict::directed(left, right, "turns faster than", q)
        }
    })
}

fn lane_pair(
    a: &LaneProfile,
    b: &LaneProfile,
    decimal: bool,
) -> Result<PairVerdict, WorkbenchError> {
    let outcome = duel_outcome(a, b)?;
    let mut q = BTreeMap::new();
    q.insert(
        "contact_distance".to_string(),
        fmt_q(&outcome.contact_distance, decimal),
    );
    q.insert(
        "contact_lanes".to_string(),
        outcome
            .contact_lanes
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let verb = |action: crate::duels::ActionKind| match action {
        crate::duels::ActionKind::Marks => "marks",
        crate::duels::ActionKind::Lifts => "lifts",
        crate::duels::ActionKind::Stalls => "stalls with",
    };
    Ok(match outcome.verdict {
        Verdict::AActsOnB => PairVerdict::directed(a.label(), b.label(), verb(outcome.action), q),
        Verdict::BActsOnA => PairVerdict::directed(b.label(), a.label(), verb(outcome.action), q),
        Verdict::Mutual => PairVerdict::symmetric(a.label(), b.label(), "mutual action with", q),
        Verdict::None => PairVerdict::symmetric(a.label(), b.label(), "stalls with", q),
    })
}

fn jam_notes(assembly: &Assembly, decimal: bool) -> Result<(bool, Vec<String>), WorkbenchError> {
    let report = detect_jam(assembly)?;
    let mut notes = Vec::new();
    if report.consistent {
        let omega = report
            .velocity_assignment
            .expect("consistent reports carry velocities");
        let rendered: Vec<String> = omega
            .iter()
            .map(|(label, w)| format!("{label}={}", fmt_q(w, decimal)))
            .collect();
        notes.push(format!(
            "assembly turns freely; one velocity assignment: {}",
            rendered.join(", ")
        ));
    } else {
        match report.witness.expect("jam reports carry a witness") {
            JamWitness::Interference { pair, slot } => notes.push(format!(
                "jam: gears of {} and {} overlap at slot {slot}",
                pair.0, pair.1
            )),
            JamWitness::ConflictingMeshes { pair, slots } => notes.push(format!(
                "jam: {} and {} mesh at slots {} with conflicting ratios",
                pair.0,
                pair.1,
                slots.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            )),
            JamWitness::InconsistentCycle { shafts, ratio_product } => notes.push(format!(
                "jam: mesh loop {} multiplies speed by {} per lap (an odd number of external meshes makes this negative, so it can never be 1)",
                shafts.join(" -> "),
                fmt_q(&ratio_product, decimal)
            )),
        }
    }
    Ok((!report.consistent, notes))
}

// --- fixtures ------------------------------------------------------------------

fn efron_items() -> Vec<ValueMultiset> {
    vec![
        ValueMultiset::from_ints("blue", &[4, 4, 4, 4, 0, 0]).unwrap(),
        ValueMultiset::from_ints("yellow", &[3, 3, 3, 3, 3, 3]).unwrap(),
        ValueMultiset::from_ints("red", &[6, 6, 2, 2, 2, 2]).unwrap(),
        ValueMultiset::from_ints("green", &[5, 5, 5, 1, 1, 1]).unwrap(),
    ]
}

fn lo_shu_rows() -> Vec<Vec<Rational>> {
    [[4i64, 9, 2], [3, 5, 7], [8, 1, 6]]
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect()
}

fn lever_triple() -> Vec<LeverPair> {
    let base: Vec<Option<Rational>> = vec![Some(rat_int(2)), Some(rat_int(1)), None];
    let mut rows = vec![base];
    for _ in 0..2 {
        rows.push(RotationDirection::Right.rotate_once(rows.last().unwrap()));
    }
    rows.into_iter()
        .zip(["A", "B", "C"])
        .map(|(slots, label)| LeverPair::new(label, slots).expect("valid lever fixture"))
        .collect()
}

fn pulley_triple() -> Vec<GearShaft> {
    use SlotElement::{Empty as Z, LargeGear as X, SmallGear as Y};
    let pulley = || Pulley::new(rat_int(1), rat_int(10)).expect("valid pulley fixture");
    let rows = [vec![X, Y, Z], vec![Z, X, Y], vec![Y, Z, X]];
    rows.into_iter()
        .zip(["A", "B", "C"])
        .map(|(slots, label)| GearShaft::new(label, slots, Some(pulley())).expect("valid shaft"))
        .collect()
}

fn lane_rotations(base: Vec<LaneElement>, direction: RotationDirection) -> Vec<LaneProfile> {
    let mut rows = vec![base];
    for _ in 0..2 {
        rows.push(direction.rotate_once(rows.last().unwrap()));
    }
    rows.into_iter()
        .zip(["A", "B", "C"])
        .map(|(lanes, label)| LaneProfile::new(label, lanes).expect("nonempty rotation"))
        .collect()
}

fn tower_base() -> Vec<LaneElement> {
    vec![
        LaneElement::marker(rat_int(3)).unwrap(),
        LaneElement::gap(),
        LaneElement::block(rat_int(1)).unwrap(),
    ]
}

fn comb_base() -> Vec<LaneElement> {
    vec![
        LaneElement::wedge(rat_int(3)).unwrap(),
        LaneElement::gap(),
        LaneElement::tooth(rat_int(1)).unwrap(),
    ]
}

// --- demos ---------------------------------------------------------------------

/// Builds and verifies one of the canonical fixtures.
pub fn cmd_demo(name: &str, options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    match name {
        "efron" => demo_efron(options),
        "losho-sticks" => demo_losho(options),
        "condorcet-vote" => demo_condorcet_vote(options),
        "gears3" => demo_gears_chain(3, "demo gears3".to_string(), options),
        "gears-chain-n" => demo_gears_chain(
            options.n,
            format!("demo gears-chain-n --n {}", options.n),
            options,
        ),
        "levers" => demo_levers(options),
        "pulleys" => demo_pulleys(options),
        "towers" => demo_lanes("towers", tower_base(), options),
        "combs" => demo_lanes("combs", comb_base(), options),
        "birds" => demo_lanes("birds", tower_base(), options),
        other => Err(WorkbenchError::UnknownDemo(other.to_string())),
    }
}

fn demo_efron(options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let items = efron_items();
    let mut report = RunReport::new(format!("demo efron --copies {}", options.copies));
    report.notes.push(
        "four six-value sets; around the cycle each set wins with chance exactly 2/3".to_string(),
    );
    report.pairs = dice_pairs(&items, options.copies, options.decimal)?;
    let graph = duel_graph(&items, options.copies)?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, items.len()));
    let check = verify_cycle(&items, options.copies)?;
    report.confirm(check.holds);
    Ok(report)
}

fn demo_losho(options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let sets = sets_from_square(&lo_shu_rows())?;
    let mut report = RunReport::new(format!("demo losho-sticks --copies {}", options.copies));
    report.notes.push(
        "stick lengths are the rows of the Lo Shu magic square, a canonical stand-in".to_string(),
    );
    report
        .notes
        .push("one stick from each set duels one from the other; longer stick wins".to_string());
    report.pairs = dice_pairs(&sets, options.copies, options.decimal)?;
    let graph = duel_graph(&sets, options.copies)?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, sets.len()));
    // canonical direction: middle row beats first, first beats last, last
    // beats middle
    let ordered = vec![sets[1].clone(), sets[0].clone(), sets[2].clone()];
    let check = verify_cycle(&ordered, options.copies)?;
    report.confirm(check.holds);
    Ok(report)
}

fn demo_condorcet_vote(options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let direction = options.rotation.unwrap_or(RotationDirection::Left);
    let base: Vec<String> = ["A", "B", "C"].iter().map(ToString::to_string).collect();
    let scheme = RotationScheme::new(base.clone(), direction)?;
    let ballots = condorcet_rotation(&scheme, base.len())?;
    let profile = PreferenceProfile::new(base, ballots)?;
    let mut report = RunReport::new(format!(
        "demo condorcet-vote --rotation {}",
        direction_name(direction)
    ));
    report.notes.push(format!(
        "ballots are the {} rotations of the base order",
        direction_name(direction)
    ));
    report.pairs = voting_pairs(&profile, options.decimal);
    let graph = pairwise_margins(&profile);
    report.cycles = graph.find_beat_cycles(effective_max(
        options.max_cycle_len,
        profile.candidates().len(),
    ));
    let confirmed = !report.cycles.is_empty();
    report.confirm(confirmed);
    Ok(report)
}

fn demo_gears_chain(
    n: usize,
    command: String,
    options: &RunOptions,
) -> Result<RunReport, WorkbenchError> {
    let direction = options.rotation.unwrap_or(RotationDirection::Right);
    let assembly = build_condorcet_chain(n, direction, options.geometry.clone())?;
    let mut report = RunReport::new(command);
    report.notes.push(format!(
        "slots use X (large gear, radius {}), Y (small gear, radius {}), Z (empty); adjacent shafts sit at center spacing {}",
        format_rational(assembly.geometry().r_large()),
        format_rational(assembly.geometry().r_small()),
        format_rational(&assembly.geometry().center_spacing()),
    ));
    for shaft in assembly.shafts() {
        report
            .notes
            .push(format!("shaft {}: {}", shaft.label(), shaft.slot_string()));
    }
    let shafts = assembly.shafts();
    for i in 0..shafts.len() {
        for j in i + 1..shafts.len() {
            report.pairs.push(speed_pair(
                &shafts[i],
                &shafts[j],
                assembly.geometry(),
                options.decimal,
            )?);
        }
    }
    let graph = speed_duel_graph(shafts, assembly.geometry())?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, n));
    let (jammed, notes) = jam_notes(&assembly, options.decimal)?;
    report.notes.extend(notes);
    let has_n_cycle = report.cycles.iter().any(|c| c.len() == n);
    report.confirm(has_n_cycle && jammed);
    Ok(report)
}

fn demo_levers(options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let torque = rat_int(10);
    let devices = lever_triple();
    let mut report = RunReport::new("demo levers".to_string());
    report.notes.push(format!(
        "double levers with arms 2 and 1, cyclically rotated across three slots; both sides drive with torque {}",
        format_rational(&torque)
    ));
    let mut results = Vec::new();
    for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
        let (a, b) = (&devices[i], &devices[j]);
        match lever_duel(a, b, &torque)? {
            LeverVerdict::Winner {
                winner,
                contact_slot,
                force_a,
                force_b,
            } => {
                let (loser, force_w, force_l) = if winner == a.label() {
                    (b.label(), force_a, force_b)
                } else {
                    (a.label(), force_b, force_a)
                };
                let mut q = BTreeMap::new();
                q.insert("contact_slot".to_string(), contact_slot.to_string());
                q.insert("force_winner".to_string(), fmt_q(&force_w, options.decimal));
                q.insert("force_loser".to_string(), fmt_q(&force_l, options.decimal));
                results.push(crate::relations::DuelResult::new(
                    a.label(),
                    b.label(),
                    winner.clone(),
                    force_w - force_l,
                ));
                report
                    .pairs
                    .push(PairVerdict::directed(winner, loser, "overpowers", q));
            }
            LeverVerdict::Stalemate {
                contact_slot,
                force,
            } => {
                let mut q = BTreeMap::new();
                q.insert("contact_slot".to_string(), contact_slot.to_string());
                q.insert("force".to_string(), fmt_q(&force, options.decimal));
                report.pairs.push(PairVerdict::symmetric(
                    a.label(),
                    b.label(),
                    "stalemates with",
                    q,
                ));
            }
            LeverVerdict::Unrelated => {
                report.pairs.push(PairVerdict::symmetric(
                    a.label(),
                    b.label(),
                    "unrelated",
                    BTreeMap::new(),
                ));
            }
        }
    }
    let graph = TournamentGraph::build(devices.iter().map(|d| d.label().to_string()), &results)?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, devices.len()));
    let confirmed = report.cycles.iter().any(|c| c.len() == 3);
    report.confirm(confirmed);
    Ok(report)
}

fn demo_pulleys(options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let shafts = pulley_triple();
    let mut report = RunReport::new("demo pulleys".to_string());
    report.notes.push(
        "each shaft carries the same pulley (radius 1) and load (weight 10); the side whose meshing gear is smaller descends and lifts the other".to_string(),
    );
    let mut results = Vec::new();
    let mut energy_ok = true;
    for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
        let (a, b) = (&shafts[i], &shafts[j]);
        match pulley_duel(a, b, &options.geometry)? {
            PulleyVerdict::Descends {
                descender,
                displacement_ratio,
                pe_change_per_unit_descent,
            } => {
                let riser = if descender == a.label() {
                    b.label()
                } else {
                    a.label()
                };
                let mut q = BTreeMap::new();
                q.insert(
                    "displacement_ratio".to_string(),
                    fmt_q(&displacement_ratio, options.decimal),
                );
                q.insert(
                    "pe_change_per_unit_descent".to_string(),
                    fmt_q(&pe_change_per_unit_descent, options.decimal),
                );
                energy_ok &= pe_change_per_unit_descent < Rational::from_integer(0.into());
                results.push(crate::relations::DuelResult::new(
                    a.label(),
                    b.label(),
                    descender.clone(),
                    Rational::from_integer(1.into()) - displacement_ratio,
                ));
                report.pairs.push(PairVerdict::directed(
                    descender,
                    riser,
                    "descends against",
                    q,
                ));
            }
            PulleyVerdict::Stalemate => {
                report.pairs.push(PairVerdict::symmetric(
                    a.label(),
                    b.label(),
                    "stalemates with",
                    BTreeMap::new(),
                ));
            }
            PulleyVerdict::Unrelated => {
                report.pairs.push(PairVerdict::symmetric(
                    a.label(),
                    b.label(),
                    "unrelated",
                    BTreeMap::new(),
                ));
            }
        }
    }
    let graph = TournamentGraph::build(shafts.iter().map(|s| s.label().to_string()), &results)?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, shafts.len()));
    report.notes.push(
        "every descent dissipates potential energy, so the loop powers no machine".to_string(),
    );
    let confirmed = report.cycles.iter().any(|c| c.len() == 3) && energy_ok;
    report.confirm(confirmed);
    Ok(report)
}

fn demo_lanes(
    name: &str,
    base: Vec<LaneElement>,
    options: &RunOptions,
) -> Result<RunReport, WorkbenchError> {
    let direction = options.rotation.unwrap_or(RotationDirection::Right);
    let profiles = lane_rotations(base, direction);
    let mut report = RunReport::new(format!(
        "demo {name} --rotation {}",
        direction_name(direction)
    ));
    report
        .notes
        .push("lane alignment: index-to-index (devices approach on rails)".to_string());
    report.notes.push(
        "facade profiles are model-internal reconstructions; only the cycle direction is canonical"
            .to_string(),
    );
    if name == "birds" {
        report.notes.push(
            "bird reading: Marker = outstretched wing (a touch makes the other bird pull its head in), Block = extended head, Gap = tucked side"
                .to_string(),
        );
    }
    for p in &profiles {
        report
            .notes
            .push(format!("device {}: {}", p.label(), p.describe()));
    }
    for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
        report
            .pairs
            .push(lane_pair(&profiles[i], &profiles[j], options.decimal)?);
    }
    let graph = action_duel_graph(&profiles)?;
    report.cycles = graph.find_beat_cycles(effective_max(options.max_cycle_len, profiles.len()));
    let confirmed = report.cycles.iter().any(|c| c.len() == 3);
    report.confirm(confirmed);
    Ok(report)
}

fn direction_name(direction: RotationDirection) -> &'static str {
    match direction {
        RotationDirection::Left => "left",
        RotationDirection::Right => "right",
    }
}

// --- verify --------------------------------------------------------------------

/// Reads, parses, and verifies a device file; the report's digest pins the
/// exact input bytes.
pub fn cmd_verify_file(path: &Path, options: &RunOptions) -> Result<RunReport, WorkbenchError> {
    let bytes = std::fs::read(path).map_err(|e| WorkbenchError::FileRead {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| WorkbenchError::FileRead {
        path: path.display().to_string(),
        message: "not valid UTF-8".to_string(),
    })?;
    let mut report = cmd_verify_text(&text, format!("verify {}", path.display()), options)?;
    report.input_digest = Some(sha256_hex(&bytes));
    Ok(report)
}

/// Verifies one JSON document: parses, dispatches on its kind, and checks
/// for the expected intransitive structure.
pub fn cmd_verify_text(
    text: &str,
    command: String,
    options: &RunOptions,
) -> Result<RunReport, WorkbenchError> {
    let input = parse_input(text)?;
    verify_parsed(&input, command, options)
}

/// Same as [`cmd_verify_text`] but starting from an already-parsed document.
pub fn verify_parsed(
    input: &ParsedInput,
    command: String,
    options: &RunOptions,
) -> Result<RunReport, WorkbenchError> {
    let mut report = RunReport::new(command);
    match input {
        ParsedInput::Dice(items) => {
            report.notes.push(format!(
                "value-multiset duel at {} cop{} per side",
                options.copies,
                if options.copies == 1 { "y" } else { "ies" }
            ));
            report.pairs = dice_pairs(items, options.copies, options.decimal)?;
            let graph = duel_graph(items, options.copies)?;
            report.cycles =
                graph.find_beat_cycles(effective_max(options.max_cycle_len, items.len()));
            let confirmed = !report.cycles.is_empty();
            report.confirm(confirmed);
        }
        ParsedInput::Profile(profile) => {
            report.notes.push(format!(
                "{} ballots over {} candidates",
                profile.ballot_count(),
                profile.candidates().len()
            ));
            report.pairs = voting_pairs(profile, options.decimal);
            let graph = pairwise_margins(profile);
            report.cycles = graph.find_beat_cycles(effective_max(
                options.max_cycle_len,
                profile.candidates().len(),
            ));
            let confirmed = !report.cycles.is_empty();
            report.confirm(confirmed);
        }
        ParsedInput::Gears { assembly, expect } => {
            report.notes.push(format!(
                "declared expectation: {}",
                match expect {
                    Expectation::Cycle => "cycle",
                    Expectation::Jam => "jam",
                }
            ));
            let shafts = assembly.shafts();
            for i in 0..shafts.len() {
                for j in i + 1..shafts.len() {
                    report.pairs.push(speed_pair(
                        &shafts[i],
                        &shafts[j],
                        assembly.geometry(),
                        options.decimal,
                    )?);
                }
            }
            let graph = speed_duel_graph(shafts, assembly.geometry())?;
            report.cycles =
                graph.find_beat_cycles(effective_max(options.max_cycle_len, shafts.len()));
            let (jammed, notes) = jam_notes(assembly, options.decimal)?;
            report.notes.extend(notes);
            let confirmed = match expect {
                Expectation::Cycle => !report.cycles.is_empty(),
                Expectation::Jam => jammed,
            };
            report.confirm(confirmed);
        }
        ParsedInput::Lanes(profiles) => {
            report
                .notes
                .push("lane alignment: index-to-index (devices approach on rails)".to_string());
            for (i, a) in profiles.iter().enumerate() {
                for b in &profiles[i + 1..] {
                    report.pairs.push(lane_pair(a, b, options.decimal)?);
                }
            }
            let graph = action_duel_graph(profiles)?;
            report.cycles =
                graph.find_beat_cycles(effective_max(options.max_cycle_len, profiles.len()));
            let confirmed = !report.cycles.is_empty();
            report.confirm(confirmed);
        }
    }
    Ok(report)
}

// --- search --------------------------------------------------------------------

/// Streams qualifying families as JSON Lines to `out` (one self-contained,
/// re-verifiable document per line, annotated with its cycle) and returns
/// the summary report.
pub fn cmd_search_dice(
    spec: &SearchSpec,
    jobs: usize,
    limit: Option<u64>,
    out: &mut dyn Write,
) -> Result<RunReport, WorkbenchError> {
    let mut command = format!(
        "search dice --sets {} --faces {} --min {} --max {} --copies {} --cycle-len {}",
        spec.n_sets,
        spec.n_faces,
        spec.value_min,
        spec.value_max,
        spec.copies,
        spec.required_cycle_len
    );
    if let Some(margin) = &spec.min_margin {
        command.push_str(&format!(" --min-margin {}", format_rational(margin)));
    }
    if let Some(limit) = limit {
        command.push_str(&format!(" --limit {limit}"));
    }
    let mut report = RunReport::new(command);
    let mut taken = 0u64;
    let mut stream_error: Option<std::io::Error> = None;
    let emitted = crate::dice::search_intransitive_sets(spec, jobs, |hit| {
        let mut value = serde_json::to_value(crate::io::dice_document(&hit.items))
            .expect("document serializes");
        value
            .as_object_mut()
            .expect("documents are objects")
            .insert("cycle".to_string(), serde_json::json!(hit.cycle));
        let line = serde_json::to_string(&value).expect("value serializes");
        if let Err(e) = writeln!(out, "{line}") {
            stream_error = Some(e);
            return ControlFlow::Break(());
        }
        taken += 1;
        match limit {
            Some(limit) if taken >= limit => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })?;
    if let Some(e) = stream_error {
        return Err(WorkbenchError::StreamWrite(e.to_string()));
    }
    report
        .notes
        .push(format!("emitted {emitted} families in canonical order"));
    report.notes.push(
        "each line is a dice_set document annotated with its cycle; it re-verifies as-is"
            .to_string(),
    );
    report.confirm(emitted > 0);
    Ok(report)
}

/// Streams strict lane triples as JSON Lines to `out`; same shape as the
/// dice search.
pub fn cmd_search_lane_triples(
    palette: &[PaletteEntry],
    lanes: usize,
    direction: RotationDirection,
    jobs: usize,
    limit: Option<u64>,
    out: &mut dyn Write,
) -> Result<RunReport, WorkbenchError> {
    let mut command = format!(
        "search lane-triples --lanes {lanes} --rotation {} --palette {}",
        direction_name(direction),
        palette_to_string(palette)
    );
    if let Some(limit) = limit {
        command.push_str(&format!(" --limit {limit}"));
    }
    let mut report = RunReport::new(command);
    let mut taken = 0u64;
    let mut stream_error: Option<std::io::Error> = None;
    let emitted = crate::duels::search_condorcet_triples(palette, lanes, direction, jobs, |hit| {
        let mut value = serde_json::to_value(crate::io::lane_document(&hit.rotations))
            .expect("document serializes");
        value
            .as_object_mut()
            .expect("documents are objects")
            .insert("cycle".to_string(), serde_json::json!(hit.cycle));
        let line = serde_json::to_string(&value).expect("value serializes");
        if let Err(e) = writeln!(out, "{line}") {
            stream_error = Some(e);
            return ControlFlow::Break(());
        }
        taken += 1;
        match limit {
            Some(limit) if taken >= limit => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })?;
    if let Some(e) = stream_error {
        return Err(WorkbenchError::StreamWrite(e.to_string()));
    }
    report
        .notes
        .push(format!("emitted {emitted} bases in canonical order"));
    report.notes.push(
        "each line is a lane_profile_set document holding the three rotations, annotated with its cycle"
            .to_string(),
    );
    report
        .notes
        .push("lane alignment: index-to-index (devices approach on rails)".to_string());
    report.confirm(emitted > 0);
    Ok(report)
}

/// Renders a palette back to the CLI syntax: entries comma-separated, solid
/// kinds as "Kind:lo-hi" or "Kind:len", gaps as "Gap".
pub fn palette_to_string(palette: &[PaletteEntry]) -> String {
    palette
        .iter()
        .map(|entry| {
            if entry.lengths.is_empty() {
                format!("{:?}", entry.kind)
            } else {
                let parts: Vec<String> = entry.lengths.iter().map(format_rational).collect();
                format!("{:?}:{}", entry.kind, parts.join("|"))
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses the CLI palette syntax: comma-separated entries, each "Gap",
/// "Kind:lo-hi" (inclusive integer range), or "Kind:a|b|c" (explicit
/// lengths, rationals allowed).
pub fn parse_palette(text: &str) -> Result<Vec<PaletteEntry>, WorkbenchError> {
    use crate::duels::LaneKind;
    let mut entries = Vec::new();
    for raw in text.split(',') {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let (kind_name, spec) = match raw.split_once(':') {
            Some((k, s)) => (k.trim(), Some(s.trim())),
            None => (raw, None),
        };
        let kind = match kind_name {
            "Marker" => LaneKind::Marker,
            "Block" => LaneKind::Block,
            "Wedge" => LaneKind::Wedge,
            "Tooth" => LaneKind::Tooth,
            "Gap" => LaneKind::Gap,
            other => {
                return Err(WorkbenchError::BadOption(format!(
                    "unknown lane kind {other:?} in palette (expected Marker, Block, Wedge, Tooth, or Gap)"
                )))
            }
        };
        let lengths = match (kind, spec) {
            (LaneKind::Gap, None) => Vec::new(),
            (LaneKind::Gap, Some(_)) => {
                return Err(WorkbenchError::BadOption(
                    "Gap palette entries take no lengths".to_string(),
                ))
            }
            (_, None) => {
                return Err(WorkbenchError::BadOption(format!(
                    "{kind_name} palette entry needs lengths, e.g. {kind_name}:1-3"
                )))
            }
            (_, Some(spec)) => parse_length_spec(spec)?,
        };
        entries.push(PaletteEntry { kind, lengths });
    }
    if entries.is_empty() {
        return Err(WorkbenchError::BadOption("palette is empty".to_string()));
    }
    Ok(entries)
}

fn parse_length_spec(spec: &str) -> Result<Vec<Rational>, WorkbenchError> {
    let bad = |msg: String| WorkbenchError::BadOption(msg);
    if let Some((lo, hi)) = spec.split_once('-') {
        let parse = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| bad(format!("range bound {s:?} is not an integer")))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(bad(format!("empty length range {lo}-{hi}")));
        }
        return Ok((lo..=hi).map(rat_int).collect());
    }
    spec.split('|')
        .map(|part| {
            crate::rational::parse_rational(part)
                .map_err(|e| bad(format!("bad length {part:?}: {e}")))
        })
        .collect()
}
