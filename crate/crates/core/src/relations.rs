//! Tournament graphs: labeled nodes, directed "beats" edges with exact
//! margins, transitivity classification, and bounded directed-cycle
//! discovery.
//!
//! This is the substrate every other module reduces to: dice duels, voting
//! margins, gear speed races, and lane duels all end up as a
//! [`TournamentGraph`] whose cycles witness intransitivity.
//!
//! Conventions baked in here:
//! - ties are modeled as *absent* edges, never zero-margin edges, so the
//!   graph is always a strict relation;
//! - at most one edge per unordered node pair (strictness);
//! - cycles are reported in canonical rotation (lexicographically smallest
//!   start label) and the cycle list is sorted by (length, sequence), so
//!   output is reproducible and diffable across runs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, rational_string, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationsError {
    #[error("node labels must be nonempty")]
    EmptyLabel,
    #[error("self duel on {0:?}")]
    SelfDuel(String),
    #[error("duplicate result for pair {0:?} / {1:?}")]
    DuplicatePair(String, String),
    #[error("winner {winner:?} is not one of {a:?} / {b:?}")]
    WinnerNotInPair {
        a: String,
        b: String,
        winner: String,
    },
    #[error("negative margin for pair {0:?} / {1:?}")]
    NegativeMargin(String, String),
    #[error("transitivity report is internally inconsistent")]
    InconsistentReport,
}

/// One pairwise duel result: `winner` must be `a` or `b`; a zero margin
/// records a tie (no edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuelResult {
    pub a: String,
    pub b: String,
    pub winner: String,
    pub margin: Rational,
}

impl DuelResult {
    pub fn new(
        a: impl Into<String>,
        b: impl Into<String>,
        winner: impl Into<String>,
        margin: Rational,
    ) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            winner: winner.into(),
            margin,
        }
    }
}

/// Directed graph of strict pairwise superiority with exact margins.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TournamentGraph {
    nodes: BTreeSet<String>,
    /// (winner, loser) -> margin, margin > 0.
    edges: BTreeMap<(String, String), Rational>,
}

impl TournamentGraph {
    /// Builds a graph from declared nodes plus duel results. Endpoints of
    /// results are added to the node set automatically; zero-margin results
    /// record a tie and produce no edge.
    pub fn build<I, S>(nodes: I, results: &[DuelResult]) -> Result<Self, RelationsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = TournamentGraph::default();
        for n in nodes {
            g.insert_node(n.into())?;
        }
        let mut seen_pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for r in results {
            if r.a.is_empty() || r.b.is_empty() || r.winner.is_empty() {
                return Err(RelationsError::EmptyLabel);
            }
            if r.a == r.b {
                return Err(RelationsError::SelfDuel(r.a.clone()));
            }
            let key = unordered(&r.a, &r.b);
            if !seen_pairs.insert(key) {
                return Err(RelationsError::DuplicatePair(r.a.clone(), r.b.clone()));
            }
            if r.winner != r.a && r.winner != r.b {
                return Err(RelationsError::WinnerNotInPair {
                    a: r.a.clone(),
                    b: r.b.clone(),
                    winner: r.winner.clone(),
                });
            }
            if r.margin < Rational::zero() {
                return Err(RelationsError::NegativeMargin(r.a.clone(), r.b.clone()));
            }
            g.insert_node(r.a.clone())?;
            g.insert_node(r.b.clone())?;
            if !r.margin.is_zero() {
                let loser = if r.winner == r.a { &r.b } else { &r.a };
                g.edges
                    .insert((r.winner.clone(), loser.clone()), r.margin.clone());
            }
        }
        Ok(g)
    }

    fn insert_node(&mut self, label: String) -> Result<(), RelationsError> {
        if label.is_empty() {
            return Err(RelationsError::EmptyLabel);
        }
        self.nodes.insert(label);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node labels in sorted order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    /// Edges as (winner, loser, margin), sorted by (winner, loser).
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &Rational)> {
        self.edges
            .iter()
            .map(|((w, l), m)| (w.as_str(), l.as_str(), m))
    }

    pub fn has_edge(&self, winner: &str, loser: &str) -> bool {
        self.edges
            .contains_key(&(winner.to_string(), loser.to_string()))
    }

    pub fn margin(&self, winner: &str, loser: &str) -> Option<&Rational> {
        self.edges.get(&(winner.to_string(), loser.to_string()))
    }

    /// Sorted successor labels of `node`.
    fn successors<'a>(&'a self, node: &str) -> Vec<&'a str> {
        // edges is sorted by (winner, loser), so this scan yields sorted losers
        self.edges
            .range((node.to_string(), String::new())..)
            .take_while(|((w, _), _)| w == node)
            .map(|((_, l), _)| l.as_str())
            .collect()
    }

    /// Every directed simple cycle of length <= `max_len`, each in canonical
    /// rotation (lexicographically smallest start label), sorted by
    /// (length, sequence). Lengths below 3 cannot occur: self-edges and
    /// 2-cycles are excluded by construction.
    pub fn find_beat_cycles(&self, max_len: usize) -> Vec<Vec<String>> {
        let labels: Vec<&str> = self.nodes().collect();
        let index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let succ: Vec<Vec<usize>> = labels
            .iter()
            .map(|&l| self.successors(l).iter().map(|s| index[s]).collect())
            .collect();

        let mut cycles: Vec<Vec<String>> = Vec::new();
        if max_len < 3 {
            return cycles;
        }
        let n = labels.len();
        let mut on_path = vec![false; n];
        let mut path: Vec<usize> = Vec::new();

        // Roots ascend; a cycle is recorded exactly once, rooted at its
        // smallest label, which is also its canonical rotation.
        for root in 0..n {
            path.clear();
            path.push(root);
            on_path[root] = true;
            dfs_cycles(
                root,
                root,
                &succ,
                max_len,
                &mut path,
                &mut on_path,
                &mut |p| {
                    cycles.push(p.iter().map(|&i| labels[i].to_string()).collect());
                },
            );
            on_path[root] = false;
        }
        cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cycles
    }

    /// Closure and cycle classification.
    ///
    /// Closure is checked as: for all edges a->b and b->c, the edge a->c is
    /// present. For incomplete graphs this is reported separately from
    /// acyclicity; the two coincide only on complete graphs.
    pub fn classify(&self) -> TransitivityReport {
        let closed = self.is_transitively_closed();
        let shortest = self.shortest_cycle();
        TransitivityReport::new(closed, shortest.is_some(), shortest)
            .expect("strict graphs cannot be both closed and cyclic")
    }

    fn is_transitively_closed(&self) -> bool {
        for (a, b) in self.edges.keys() {
            for c in self.successors(b) {
                if c != a && !self.has_edge(a, c) {
                    return false;
                }
            }
        }
        true
    }

    /// Shortest directed cycle in canonical rotation; ties broken
    /// lexicographically. BFS from every node, deterministic by sorted order.
    fn shortest_cycle(&self) -> Option<Vec<String>> {
        let labels: Vec<&str> = self.nodes().collect();
        let index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let succ: Vec<Vec<usize>> = labels
            .iter()
            .map(|&l| self.successors(l).iter().map(|s| index[s]).collect())
            .collect();
        let n = labels.len();
        let mut best: Option<Vec<usize>> = None;

        for start in 0..n {
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut dist: Vec<Option<usize>> = vec![None; n];
            dist[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            let mut closing: Option<usize> = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for &v in &succ[u] {
                    if v == start {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if dist[v].is_none() {
                        dist[v] = Some(dist[u].unwrap() + 1);
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                }
            }
            if let Some(mut u) = closing {
                let mut cycle = vec![u];
                while let Some(p) = parent[u] {
                    cycle.push(p);
                    u = p;
                }
                debug_assert_eq!(*cycle.last().unwrap(), start);
                cycle.reverse();
                let canon = canonical_rotation(&cycle);
                let better = match &best {
                    None => true,
                    Some(b) => {
                        (canon.len(), cycle_labels(&canon, &labels))
                            < (b.len(), cycle_labels(b, &labels))
                    }
                };
                if better {
                    best = Some(canon);
                }
            }
        }
        best.map(|c| c.into_iter().map(|i| labels[i].to_string()).collect())
    }

    /// Relabels every node through `f`; panics if `f` is not injective on
    /// the node set. Test and tooling helper.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> TournamentGraph {
        let nodes: BTreeSet<String> = self.nodes.iter().map(|n| f(n)).collect();
        assert_eq!(
            nodes.len(),
            self.nodes.len(),
            "relabeling must be a bijection"
        );
        let edges = self
            .edges
            .iter()
            .map(|((w, l), m)| ((f(w), f(l)), m.clone()))
            .collect();
        TournamentGraph { nodes, edges }
    }
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// DFS that only visits nodes with index > root, so each simple cycle is
/// emitted exactly once, rooted at its minimum-label node.
fn dfs_cycles(
    root: usize,
    current: usize,
    succ: &[Vec<usize>],
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    emit: &mut impl FnMut(&[usize]),
) {
    for &next in &succ[current] {
        if next == root {
            if path.len() >= 3 {
                emit(path);
            }
            continue;
        }
        if next < root || on_path[next] || path.len() == max_len {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        dfs_cycles(root, next, succ, max_len, path, on_path, emit);
        on_path[next] = false;
        path.pop();
    }
}

fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut rotated = Vec::with_capacity(cycle.len());
    rotated.extend_from_slice(&cycle[min_pos..]);
    rotated.extend_from_slice(&cycle[..min_pos]);
    rotated
}

fn cycle_labels(cycle: &[usize], labels: &[&str]) -> Vec<String> {
    cycle.iter().map(|&i| labels[i].to_string()).collect()
}

/// Outcome of [`TournamentGraph::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityReport {
    pub is_transitively_closed: bool,
    pub has_directed_cycle: bool,
    pub shortest_cycle: Option<Vec<String>>,
}

impl TransitivityReport {
    /// Checked constructor: `has_directed_cycle` must match the presence of
    /// `shortest_cycle`, and a closed graph with a cycle is rejected (strict
    /// superiority cannot be both).
    pub fn new(
        is_transitively_closed: bool,
        has_directed_cycle: bool,
        shortest_cycle: Option<Vec<String>>,
    ) -> Result<Self, RelationsError> {
        if has_directed_cycle != shortest_cycle.is_some() {
            return Err(RelationsError::InconsistentReport);
        }
        if is_transitively_closed && has_directed_cycle {
            return Err(RelationsError::InconsistentReport);
        }
        Ok(Self {
            is_transitively_closed,
            has_directed_cycle,
            shortest_cycle,
        })
    }
}

// --- serialization -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EdgeDto {
    winner: String,
    loser: String,
    #[serde(with = "rational_string")]
    margin: Rational,
}

#[derive(Serialize, Deserialize)]
struct GraphDto {
    nodes: Vec<String>,
    edges: Vec<EdgeDto>,
}

impl Serialize for TournamentGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let dto = GraphDto {
            nodes: self.nodes.iter().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|((w, l), m)| EdgeDto {
                    winner: w.clone(),
                    loser: l.clone(),
                    margin: m.clone(),
                })
                .collect(),
        };
        dto.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TournamentGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = GraphDto::deserialize(de)?;
        let results: Vec<DuelResult> = dto
            .edges
            .into_iter()
            .map(|e| DuelResult {
                a: e.winner.clone(),
                b: e.loser.clone(),
                winner: e.winner,
                margin: e.margin,
            })
            .collect();
        TournamentGraph::build(dto.nodes, &results)
            .map_err(|e| D::Error::custom(format!("invalid tournament graph: {e}")))
    }
}

impl std::fmt::Display for TournamentGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "nodes: {}",
            self.nodes.iter().cloned().collect::<Vec<_>>().join(", ")
        )?;
        for ((w, l), m) in &self.edges {
            writeln!(f, "  {w} beats {l} (margin {})", format_rational(m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn rps() -> TournamentGraph {
        TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("R", "S", "R", rat_int(1)),
                DuelResult::new("S", "P", "S", rat_int(1)),
                DuelResult::new("P", "R", "P", rat_int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn build_three_cycle() {
        let g = rps();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge("R", "S"));
        assert!(g.has_edge("S", "P"));
        assert!(g.has_edge("P", "R"));
        assert_eq!(g.find_beat_cycles(3), vec![vec!["P", "R", "S"]]);
    }

    #[test]
    fn build_isolated_node() {
        let g = TournamentGraph::build(["A"], &[]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.find_beat_cycles(5).is_empty());
    }

    #[test]
    fn build_rejects_duplicate_pair() {
        let err = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("A", "B", "B", rat_int(1)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, RelationsError::DuplicatePair("A".into(), "B".into()));

        // also caught with endpoints swapped
        let err = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("B", "A", "B", rat_int(1)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, RelationsError::DuplicatePair("B".into(), "A".into()));
    }

    #[test]
    fn build_rejects_self_duel_and_bad_winner() {
        let err = TournamentGraph::build(
            Vec::<String>::new(),
            &[DuelResult::new("A", "A", "A", rat_int(1))],
        )
        .unwrap_err();
        assert_eq!(err, RelationsError::SelfDuel("A".into()));

        let err = TournamentGraph::build(
            Vec::<String>::new(),
            &[DuelResult::new("A", "B", "C", rat_int(1))],
        )
        .unwrap_err();
        assert!(matches!(err, RelationsError::WinnerNotInPair { .. }));
    }

    #[test]
    fn zero_margin_is_a_tie() {
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[DuelResult::new("A", "B", "A", rat_int(0))],
        )
        .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn single_edge_is_acyclic() {
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[DuelResult::new("A", "B", "A", rat_int(1))],
        )
        .unwrap();
        assert!(g.find_beat_cycles(10).is_empty());
        let rep = g.classify();
        assert!(rep.is_transitively_closed);
        assert!(!rep.has_directed_cycle);
        assert_eq!(rep.shortest_cycle, None);
    }

    #[test]
    fn classify_transitive_chain_closed() {
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("B", "C", "B", rat_int(1)),
                DuelResult::new("A", "C", "A", rat_int(1)),
            ],
        )
        .unwrap();
        let rep = g.classify();
        assert!(rep.is_transitively_closed);
        assert!(!rep.has_directed_cycle);
    }

    #[test]
    fn classify_open_chain_not_closed() {
        // A->B, B->C only: closure demands A->C
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("B", "C", "B", rat_int(1)),
            ],
        )
        .unwrap();
        let rep = g.classify();
        assert!(!rep.is_transitively_closed);
        assert!(!rep.has_directed_cycle);
    }

    #[test]
    fn classify_rps_reports_cycle() {
        let rep = rps().classify();
        assert!(!rep.is_transitively_closed);
        assert!(rep.has_directed_cycle);
        // canonical rotation of the R->S->P->R cycle starts at P
        assert_eq!(
            rep.shortest_cycle,
            Some(vec!["P".into(), "R".into(), "S".into()])
        );
    }

    #[test]
    fn report_constructor_rejects_inconsistency() {
        assert!(TransitivityReport::new(false, true, None).is_err());
        assert!(TransitivityReport::new(true, true, Some(vec!["A".into()])).is_err());
        assert!(TransitivityReport::new(true, false, None).is_ok());
    }

    #[test]
    fn efron_duel_graph_contains_four_cycle() {
        // blue > yellow > red > green > blue, plus the red > blue diagonal
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("blue", "yellow", "blue", rat(1, 3)),
                DuelResult::new("yellow", "red", "yellow", rat(1, 3)),
                DuelResult::new("red", "green", "red", rat(1, 3)),
                DuelResult::new("green", "blue", "green", rat(1, 3)),
                DuelResult::new("blue", "red", "red", rat(1, 9)),
                DuelResult::new("yellow", "green", "yellow", rat(0, 1)),
            ],
        )
        .unwrap();
        let cycles = g.find_beat_cycles(4);
        assert!(cycles.contains(&vec![
            "blue".to_string(),
            "yellow".to_string(),
            "red".to_string(),
            "green".to_string()
        ]));
    }

    #[test]
    fn complete_cyclic_triangle_has_exactly_one_cycle() {
        // derived by enumerating both orientations of the third edge by hand:
        // a 3-node complete graph is either transitive (0 cycles) or a single 3-cycle
        let g = rps();
        assert_eq!(g.find_beat_cycles(3).len(), 1);
    }

    #[test]
    fn max_len_bounds_cycle_length() {
        // 4-cycle only; max_len 3 must find nothing
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("B", "C", "B", rat_int(1)),
                DuelResult::new("C", "D", "C", rat_int(1)),
                DuelResult::new("D", "A", "D", rat_int(1)),
            ],
        )
        .unwrap();
        assert!(g.find_beat_cycles(3).is_empty());
        assert_eq!(g.find_beat_cycles(4).len(), 1);
    }

    #[test]
    fn json_round_trip_matches_schema() {
        let g = rps();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.starts_with(
            r#"{"nodes":["P","R","S"],"edges":[{"winner":"P","loser":"R","margin":"1"}"#
        ));
        let back: TournamentGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    /// Brute-force check over every complete graph on <= 5 nodes:
    /// closed <=> no directed 3-cycle <=> acyclic.
    #[test]
    fn complete_graph_closure_equals_acyclicity() {
        for n in 2..=5usize {
            let labels: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let results: Vec<DuelResult> = pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(i, j))| {
                        let winner = if mask >> k & 1 == 1 { i } else { j };
                        DuelResult::new(
                            labels[i].clone(),
                            labels[j].clone(),
                            labels[winner].clone(),
                            rat_int(1),
                        )
                    })
                    .collect();
                let g = TournamentGraph::build(Vec::<String>::new(), &results).unwrap();
                let rep = g.classify();
                let has_3_cycle = !g.find_beat_cycles(3).is_empty();
                assert_eq!(
                    rep.is_transitively_closed, !has_3_cycle,
                    "mask {mask} n {n}"
                );
                assert_eq!(rep.is_transitively_closed, !rep.has_directed_cycle);
            }
        }
    }

    #[test]
    fn relabeling_preserves_cycle_length_multiset() {
        let g = TournamentGraph::build(
            Vec::<String>::new(),
            &[
                DuelResult::new("A", "B", "A", rat_int(1)),
                DuelResult::new("B", "C", "B", rat_int(1)),
                DuelResult::new("C", "A", "C", rat_int(1)),
                DuelResult::new("C", "D", "C", rat_int(1)),
                DuelResult::new("D", "A", "D", rat_int(1)),
                DuelResult::new("B", "D", "B", rat_int(1)),
            ],
        )
        .unwrap();
        let lens = |g: &TournamentGraph| {
            let mut v: Vec<usize> = g.find_beat_cycles(6).iter().map(Vec::len).collect();
            v.sort();
            v
        };
        let relabeled = g.relabeled(|n| format!("Z{n}x"));
        assert_eq!(lens(&g), lens(&relabeled));
    }
}
