//! A workbench for systems whose "stronger than" relation refuses to be a
//! ranking: sets of dice or sticks where each beats the next around a loop,
//! voting profiles with majority cycles, gear trains where each shaft spins
//! faster than its neighbor around a ring, and lane-aligned devices that
//! mark or lift each other cyclically.
//!
//! Everything is exact: quantities are arbitrary-precision rationals, counts
//! are big integers, and searches enumerate bounded spaces exhaustively in a
//! canonical order. Parallel runs produce byte-identical output to serial
//! runs.
//!
//! Modules:
//! - [`rational`]: exact arithmetic plus string/serde adapters.
//! - [`relations`]: labeled win/loss graphs, cycle finding, transitivity
//!   classification.
//! - [`dice`]: value-multiset duels, convolution tallies, exhaustive search.
//! - [`voting`]: preference profiles, pairwise majorities, rotation schemes.
//! - [`gears`]: shaft/slot assemblies, speed ratios, jam detection, levers
//!   and pulleys.
//! - [`duels`]: lane-contact devices (markers, blocks, wedges, teeth) and
//!   triple search.
//! - [`io`]: the JSON document formats.
//! - [`workbench`]: demos, file verification, search streaming, and report
//!   rendering behind the CLI.

pub mod dice;
pub mod duels;
pub mod gears;
pub mod io;
pub mod rational;
pub mod relations;
pub mod voting;
pub mod workbench;

pub use rational::Rational;
pub use relations::TournamentGraph;
