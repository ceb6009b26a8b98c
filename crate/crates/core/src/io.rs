//! JSON document formats for the four input kinds the command-line front
//! end accepts, and their conversion into domain objects.
//!
//! A document is a single JSON object whose "kind" field selects the schema:
//!
//! ```json
//! {"kind":"dice_set","items":[{"label":"blue","values":[4,4,4,4,0,0]}]}
//! {"kind":"preference_profile","candidates":["A","B","C"],"ballots":[["A","B","C"]]}
//! {"kind":"gear_assembly","R_X":"2","R_Y":"1","expect":"jam",
//!  "shafts":[{"label":"A","slots":["X","Y","Z"]}],"adjacent":[["A","B"]]}
//! {"kind":"lane_profile_set","lanes":3,
//!  "profiles":[{"label":"A","elements":[{"kind":"Marker","length":"3"},{"kind":"Gap"}]}]}
//! ```
//!
//! Numbers are exact rationals: integers may appear bare, everything else is
//! a "p/q" string. Unknown fields are ignored, so annotated search output
//! (which carries an extra "cycle" field) re-verifies as-is. Gear slots use
//! the letters X (large gear), Y (small gear), Z (empty). Assemblies must
//! declare what they are expected to do — "cycle" or "jam" — so that
//! verification has an unambiguous pass condition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dice::ValueMultiset;
use crate::duels::{LaneElement, LaneKind, LaneProfile};
use crate::gears::{Assembly, GearGeometry, GearShaft, Pulley, SlotElement};
use crate::rational::{rational_string, rational_string_opt, rational_values, Rational};
use crate::voting::PreferenceProfile;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("not a valid document: {0}")]
    ParseError(String),
    #[error("document violates its schema: {0}")]
    SchemaViolation(String),
}

/// Declared expectation for a gear assembly under verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// The speed tournament contains an intransitive cycle.
    Cycle,
    /// Whole-assembly motion is inconsistent.
    Jam,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiceItem {
    pub label: String,
    #[serde(with = "rational_values")]
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulleyDto {
    #[serde(with = "rational_string")]
    pub radius: Rational,
    #[serde(with = "rational_string")]
    pub weight: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShaftDto {
    pub label: String,
    pub slots: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulley: Option<PulleyDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaneElementDto {
    pub kind: LaneKind,
    #[serde(
        default,
        with = "rational_string_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub length: Option<Rational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaneProfileDto {
    pub label: String,
    pub elements: Vec<LaneElementDto>,
}

/// The four accepted document schemas, selected by the "kind" field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    DiceSet {
        items: Vec<DiceItem>,
    },
    PreferenceProfile {
        candidates: Vec<String>,
        ballots: Vec<Vec<String>>,
    },
    GearAssembly {
        #[serde(rename = "R_X", with = "rational_string")]
        r_x: Rational,
        #[serde(rename = "R_Y", with = "rational_string")]
        r_y: Rational,
        expect: Expectation,
        shafts: Vec<ShaftDto>,
        adjacent: Vec<(String, String)>,
    },
    LaneProfileSet {
        lanes: usize,
        profiles: Vec<LaneProfileDto>,
    },
}

/// Domain objects built from a document, ready for verification.
#[derive(Debug, Clone)]
pub enum ParsedInput {
    Dice(Vec<ValueMultiset>),
    Profile(PreferenceProfile),
    Gears {
        assembly: Assembly,
        expect: Expectation,
    },
    Lanes(Vec<LaneProfile>),
}

impl ParsedInput {
    /// Short schema name, mirroring the document "kind" values.
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedInput::Dice(_) => "dice_set",
            ParsedInput::Profile(_) => "preference_profile",
            ParsedInput::Gears { .. } => "gear_assembly",
            ParsedInput::Lanes(_) => "lane_profile_set",
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::ParseError(e.to_string()))
}

/// Full pipeline: JSON text to validated domain objects.
pub fn parse_input(text: &str) -> Result<ParsedInput, IoError> {
    document_to_input(parse_document(text)?)
}

pub fn document_to_input(doc: Document) -> Result<ParsedInput, IoError> {
    let schema = |e: &dyn std::fmt::Display| IoError::SchemaViolation(e.to_string());
    match doc {
        Document::DiceSet { items } => {
            let sets = items
                .into_iter()
                .map(|item| ValueMultiset::new(item.label, item.values))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| schema(&e))?;
            Ok(ParsedInput::Dice(sets))
        }
        Document::PreferenceProfile {
            candidates,
            ballots,
        } => {
            let profile = PreferenceProfile::new(candidates, ballots).map_err(|e| schema(&e))?;
            Ok(ParsedInput::Profile(profile))
        }
        Document::GearAssembly {
            r_x,
            r_y,
            expect,
            shafts,
            adjacent,
        } => {
            let geometry = GearGeometry::new(r_x, r_y).map_err(|e| schema(&e))?;
            let shafts = shafts
                .into_iter()
                .map(|dto| {
                    let slots = dto
                        .slots
                        .iter()
                        .map(|s| parse_slot(s))
                        .collect::<Result<Vec<_>, _>>()?;
                    let pulley = dto
                        .pulley
                        .map(|p| Pulley::new(p.radius, p.weight).map_err(|e| schema(&e)))
                        .transpose()?;
                    GearShaft::new(dto.label, slots, pulley).map_err(|e| schema(&e))
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            let assembly = Assembly::new(shafts, adjacent, geometry).map_err(|e| schema(&e))?;
            Ok(ParsedInput::Gears { assembly, expect })
        }
        Document::LaneProfileSet { lanes, profiles } => {
            let profiles = profiles
                .into_iter()
                .map(|dto| {
                    if dto.elements.len() != lanes {
                        return Err(IoError::SchemaViolation(format!(
                            "profile {:?} has {} elements, document says lanes={}",
                            dto.label,
                            dto.elements.len(),
                            lanes
                        )));
                    }
                    let elements = dto
                        .elements
                        .into_iter()
                        .map(lane_element_from_dto)
                        .collect::<Result<Vec<_>, _>>()?;
                    LaneProfile::new(dto.label, elements).map_err(|e| schema(&e))
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            Ok(ParsedInput::Lanes(profiles))
        }
    }
}

fn parse_slot(s: &str) -> Result<SlotElement, IoError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => SlotElement::from_letter(c).ok_or_else(|| {
            IoError::SchemaViolation(format!("unknown slot letter {s:?} (expected X, Y, or Z)"))
        }),
        _ => Err(IoError::SchemaViolation(format!(
            "unknown slot letter {s:?} (expected X, Y, or Z)"
        ))),
    }
}

fn lane_element_from_dto(dto: LaneElementDto) -> Result<LaneElement, IoError> {
    let length = match (dto.kind, dto.length) {
        (LaneKind::Gap, None) => Rational::from_integer(0.into()),
        (LaneKind::Gap, Some(len)) => len, // validated below: must be 0
        (kind, None) => {
            return Err(IoError::SchemaViolation(format!(
                "{kind:?} element needs a length"
            )))
        }
        (_, Some(len)) => len,
    };
    LaneElement::new(dto.kind, length).map_err(|e| IoError::SchemaViolation(e.to_string()))
}

/// Document for a set of value multisets (search output, fixtures).
pub fn dice_document(items: &[ValueMultiset]) -> Document {
    Document::DiceSet {
        items: items
            .iter()
            .map(|item| DiceItem {
                label: item.label().to_string(),
                values: item.values().to_vec(),
            })
            .collect(),
    }
}

/// Document for a set of lane profiles (search output, fixtures).
pub fn lane_document(profiles: &[LaneProfile]) -> Document {
    let lanes = profiles.first().map_or(0, |p| p.lanes().len());
    Document::LaneProfileSet {
        lanes,
        profiles: profiles
            .iter()
            .map(|p| LaneProfileDto {
                label: p.label().to_string(),
                elements: p
                    .lanes()
                    .iter()
                    .map(|e| LaneElementDto {
                        kind: e.kind(),
                        length: match e.kind() {
                            LaneKind::Gap => None,
                            _ => Some(e.length().clone()),
                        },
                    })
                    .collect(),
            })
            .collect(),
    }
}
