//! JSON model files and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Frame, KripkeError, KripkeModel};

/// `{"worlds": [ids], "rel": [[a, b], ..], "val": {atom: [ids]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub rel: Vec<(String, String)>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
}

/// A model file without a valuation.
pub type FrameFile = ModelFile;

const PALETTE: &[&str] = &[
    "lightblue",
    "palegreen",
    "lightyellow",
    "lightpink",
    "lightsalmon",
    "plum",
    "lightgrey",
];

impl ModelFile {
    pub fn into_model(self) -> Result<KripkeModel, KripkeError> {
        let frame = Frame::new(self.worlds, self.rel)?;
        KripkeModel::from_names(frame, self.val)
    }
}

impl Frame {
    pub fn from_json(text: &str) -> Result<Frame, KripkeError> {
        let file: ModelFile = serde_json::from_str(text)?;
        Frame::new(file.worlds, file.rel)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            worlds: self.worlds.clone(),
            rel: self
                .pairs()
                .into_iter()
                .map(|(a, b)| (self.worlds[a].clone(), self.worlds[b].clone()))
                .collect(),
            val: BTreeMap::new(),
        }
    }

    /// Graphviz digraph; on transitive frames clusters become same-rank
    /// subgraphs filled by cluster rank.
    pub fn to_dot(&self) -> String {
        dot(self, None)
    }
}

impl KripkeModel {
    pub fn from_json(text: &str) -> Result<KripkeModel, KripkeError> {
        serde_json::from_str::<ModelFile>(text)?.into_model()
    }

    pub fn to_file(&self) -> ModelFile {
        let mut file = self.frame().to_file();
        file.val = self
            .val()
            .iter()
            .map(|(a, s)| (a.clone(), self.frame().names_of(s)))
            .collect();
        file
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model files always serialise")
    }

    pub fn to_dot(&self) -> String {
        dot(self.frame(), Some(self))
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot(frame: &Frame, model: Option<&KripkeModel>) -> String {
    let mut out = String::from("digraph frame {\n  node [shape=circle, style=filled];\n");
    let label = |i: usize| -> String {
        let name = frame.name(i);
        match model {
            Some(m) => {
                let atoms: Vec<&str> = m
                    .val()
                    .iter()
                    .filter(|(_, s)| s.contains(i))
                    .map(|(a, _)| a.as_str())
                    .collect();
                if atoms.is_empty() {
                    name.to_string()
                } else {
                    format!("{name}\\n{}", atoms.join(","))
                }
            }
            None => name.to_string(),
        }
    };
    match frame.clusters() {
        Ok(d) => {
            for c in 0..d.len() {
                let color = PALETTE[(d.rank(c) - 1) % PALETTE.len()];
                let _ = writeln!(out, "  subgraph cluster_{c} {{");
                let _ = writeln!(out, "    rank=same; label=\"rank {}\";", d.rank(c));
                for i in d.cluster(c).iter() {
                    let _ = writeln!(
                        out,
                        "    {} [label={}, fillcolor={color}];",
                        quote(frame.name(i)),
                        quote(&label(i))
                    );
                }
                out.push_str("  }\n");
            }
        }
        Err(_) => {
            for i in 0..frame.len() {
                let _ = writeln!(
                    out,
                    "  {} [label={}, fillcolor=white];",
                    quote(frame.name(i)),
                    quote(&label(i))
                );
            }
        }
    }
    for (a, b) in frame.pairs() {
        let _ = writeln!(
            out,
            "  {} -> {};",
            quote(frame.name(a)),
            quote(frame.name(b))
        );
    }
    out.push_str("}\n");
    out
}
