//! JSON forms of algebras, relations and decisions.

use cubeterm_core::decide::{CubeDecision, CubeVerdict, NuDecision, NuVerdict};
use cubeterm_core::relation::{ChippedBlock, ChippedCubeSpec};
use cubeterm_core::{AlgebraDescription, Blocker, ElementSet, OperationDescription};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: u64,
    pub operations: Vec<OperationJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OperationJson {
    pub name: String,
    pub arity: u64,
    pub table: Vec<u64>,
}

impl From<&AlgebraJson> for AlgebraDescription {
    fn from(a: &AlgebraJson) -> Self {
        AlgebraDescription {
            name: a.name.clone(),
            size: a.size,
            operations: a
                .operations
                .iter()
                .map(|op| OperationDescription { name: op.name.clone(), arity: op.arity, table: op.table.clone() })
                .collect(),
        }
    }
}

impl From<AlgebraDescription> for AlgebraJson {
    fn from(d: AlgebraDescription) -> Self {
        AlgebraJson {
            name: d.name,
            size: d.size,
            operations: d
                .operations
                .into_iter()
                .map(|op| OperationJson { name: op.name, arity: op.arity, table: op.table })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BlockerJson {
    #[serde(rename = "C")]
    pub c: Vec<u8>,
    #[serde(rename = "D")]
    pub d: Vec<u8>,
}

impl From<&Blocker> for BlockerJson {
    fn from(b: &Blocker) -> Self {
        BlockerJson { c: b.c.to_vec(), d: b.d.to_vec() }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ChippedBlockJson {
    #[serde(rename = "C")]
    pub c: Vec<u8>,
    #[serde(rename = "D")]
    pub d: Vec<u8>,
    pub mult: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ChippedCubeSpecJson {
    pub blocks: Vec<ChippedBlockJson>,
}

impl From<&ChippedCubeSpec> for ChippedCubeSpecJson {
    fn from(s: &ChippedCubeSpec) -> Self {
        ChippedCubeSpecJson {
            blocks: s
                .blocks
                .iter()
                .map(|b: &ChippedBlock| ChippedBlockJson { c: b.c.to_vec(), d: b.d.to_vec(), mult: b.mult })
                .collect(),
        }
    }
}

impl ChippedCubeSpecJson {
    pub fn to_spec(&self) -> anyhow::Result<ChippedCubeSpec> {
        let set = |elems: &[u8]| {
            let mut s = ElementSet::default();
            for &e in elems {
                s.insert(e);
            }
            s
        };
        let blocks = self.blocks.iter().map(|b| ChippedBlock { c: set(&b.c), d: set(&b.d), mult: b.mult }).collect();
        Ok(ChippedCubeSpec::new(blocks)?)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RelationJson {
    pub arity: usize,
    pub tuples: Vec<Vec<u8>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CubeDecisionJson {
    pub verdict: String,
    pub dimension_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocker: Option<BlockerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_pair: Option<[u8; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn cube_verdict_name(v: CubeVerdict) -> &'static str {
    match v {
        CubeVerdict::HasCubeTerm => "has_cube_term",
        CubeVerdict::NoCubeTerm => "no_cube_term",
        CubeVerdict::Undecided => "undecided",
    }
}

impl From<&CubeDecision> for CubeDecisionJson {
    fn from(d: &CubeDecision) -> Self {
        CubeDecisionJson {
            verdict: cube_verdict_name(d.verdict).into(),
            dimension_bound: d.dimension_bound,
            witness_dimension: d.witness_dimension,
            blocker: d.blocker.as_ref().map(Into::into),
            failing_pair: d.failing_pair.map(|(a, b)| [a, b]),
            note: d.note.clone(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct NuDecisionJson {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_cube_dimension: Option<usize>,
    pub cube: CubeDecisionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&NuDecision> for NuDecisionJson {
    fn from(d: &NuDecision) -> Self {
        let (verdict, arity) = match d.verdict {
            NuVerdict::HasNu(k) => ("has_nu", Some(k)),
            NuVerdict::NoNu => ("no_nu", None),
            NuVerdict::Undecided => ("undecided", None),
        };
        NuDecisionJson {
            verdict: verdict.into(),
            arity,
            minimal_cube_dimension: d.minimal_cube_dimension,
            cube: (&d.cube).into(),
            note: d.note.clone(),
        }
    }
}

/// Envelope printed for every command.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub command: String,
    /// Hex SHA-256 of the input file, when there is one.
    pub input_digest: Option<String>,
    pub payload: serde_json::Value,
    pub elapsed_ms: u64,
}
