//! JSON and DOT formats for frames.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{Admissible, FrameError, GeneralFrame, KripkeFrame};
use crate::worldset::WorldSet;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed frame JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid frame: {0}")]
    Frame(#[from] FrameError),
    #[error("admissible must be \"full\" or a list of world lists, found {0:?}")]
    BadAdmissible(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AdmissibleJson {
    Keyword(String),
    Sets(Vec<Vec<String>>),
}

/// On-disk frame description. Relation pairs and admissible sets are
/// written in canonical order, so serialization is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub worlds: Vec<String>,
    pub relation: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<AdmissibleJson>,
}

fn names_of(f: &KripkeFrame, x: WorldSet) -> Vec<String> {
    x.iter().map(|w| f.name(w).to_string()).collect()
}

impl FrameJson {
    pub fn from_frame(g: &GeneralFrame) -> Self {
        let f = &g.base;
        let relation = f
            .edges()
            .into_iter()
            .map(|(a, b)| [f.name(a).to_string(), f.name(b).to_string()])
            .collect();
        let admissible = Some(match g.admissible() {
            Admissible::Full => AdmissibleJson::Keyword("full".into()),
            Admissible::Sets(fam) => {
                AdmissibleJson::Sets(fam.sets().iter().map(|&x| names_of(f, x)).collect())
            }
        });
        FrameJson {
            worlds: f.names().to_vec(),
            relation,
            admissible,
        }
    }

    /// Builds the frame; an explicit family is certified when it is closed.
    pub fn to_frame(&self) -> Result<GeneralFrame, IoError> {
        let probe = KripkeFrame::new(self.worlds.clone(), [])?;
        let edges = self
            .relation
            .iter()
            .map(|[a, b]| Ok((probe.index_of(a)?, probe.index_of(b)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        let base = KripkeFrame::new(self.worlds.clone(), edges)?;
        match &self.admissible {
            None => Ok(GeneralFrame::full(base)),
            Some(AdmissibleJson::Keyword(k)) if k == "full" => Ok(GeneralFrame::full(base)),
            Some(AdmissibleJson::Keyword(k)) => Err(IoError::BadAdmissible(k.clone())),
            Some(AdmissibleJson::Sets(sets)) => {
                let sets = sets
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|n| base.index_of(n))
                            .collect::<Result<WorldSet, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GeneralFrame::pd(base, sets)?.certify_if_closed())
            }
        }
    }
}

pub fn frame_to_json(g: &GeneralFrame) -> String {
    serde_json::to_string_pretty(&FrameJson::from_frame(g)).expect("frame serializes")
}

pub fn frame_from_json(text: &str) -> Result<GeneralFrame, IoError> {
    serde_json::from_str::<FrameJson>(text)?.to_frame()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering of the accessibility relation.
pub fn frame_to_dot(f: &KripkeFrame) -> String {
    let mut out = String::from("digraph frame {\n");
    for name in f.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (a, b) in f.edges() {
        let _ = writeln!(out, "  {} -> {};", quote(f.name(a)), quote(f.name(b)));
    }
    out.push_str("}\n");
    out
}
