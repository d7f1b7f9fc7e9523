//! JSON spec file format.
//!
//! ```json
//! {
//!   "kappa": 3,
//!   "eta": [2, 0, 0],
//!   "circuit_mu": ["5/3", "1/3", "1"],
//!   "branch_mu": [ {"r": 1, "i": 1, "prefix": ["1"], "tail": ["1"]},
//!                  {"r": 1, "i": 2, "prefix": ["1"], "tail": ["1"]} ],
//!   "weight": { "circuit_pi": ["1", "1", "1"],
//!               "branch_pi": [ {"r": 1, "i": 1, "prefix": [], "tail_const": "1/2"},
//!                              {"r": 1, "i": 2, "prefix": [], "tail_const": "1/2"} ] },
//!   "k": 1, "m": 2
//! }
//! ```
//!
//! `tail` lists polynomial coefficients lowest degree first and applies for
//! `j > len(prefix)`. `weight`, `k` and `m` are optional. Unknown fields are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::numeric::{EventuallyPolynomialSeq, Polynomial, Rational};
use crate::space::{EventuallyConstantSeq, MeasureSpec, WeightSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kappa: usize,
    pub eta: Vec<usize>,
    pub circuit_mu: Vec<Rational>,
    pub branch_mu: Vec<BranchMuEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchMuEntry {
    pub r: usize,
    pub i: usize,
    pub prefix: Vec<Rational>,
    pub tail: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub circuit_pi: Vec<Rational>,
    pub branch_pi: Vec<BranchPiEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPiEntry {
    pub r: usize,
    pub i: usize,
    pub prefix: Vec<Rational>,
    pub tail_const: Rational,
}

/// A parsed and shape-checked spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedSpec {
    pub measure: MeasureSpec,
    pub weight: Option<WeightSpec>,
    pub k: Option<usize>,
    pub m: Option<usize>,
}

fn insert_unique<V>(map: &mut BTreeMap<(usize, usize), V>, r: usize, i: usize, v: V, field: &str) -> Result<()> {
    if map.insert((r, i), v).is_some() {
        return Err(Error::Validation(format!("{field} lists branch r={r}, i={i} twice")));
    }
    Ok(())
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    pub fn into_spec(self) -> Result<LoadedSpec> {
        let graph = GraphSpec::new(self.kappa, self.eta)?;
        let mut branch_mu = BTreeMap::new();
        for e in self.branch_mu {
            let seq = EventuallyPolynomialSeq::new(e.prefix, Polynomial::new(e.tail));
            insert_unique(&mut branch_mu, e.r, e.i, seq, "branch_mu")?;
        }
        let measure = MeasureSpec::new(graph.clone(), self.circuit_mu, branch_mu)?;
        let weight = match self.weight {
            None => None,
            Some(w) => {
                let mut branch_pi = BTreeMap::new();
                for e in w.branch_pi {
                    let seq = EventuallyConstantSeq { prefix: e.prefix, tail: e.tail_const };
                    insert_unique(&mut branch_pi, e.r, e.i, seq, "branch_pi")?;
                }
                Some(WeightSpec::new(graph, w.circuit_pi, branch_pi)?)
            }
        };
        Ok(LoadedSpec { measure, weight, k: self.k, m: self.m })
    }

    pub fn from_spec(
        measure: &MeasureSpec,
        weight: Option<&WeightSpec>,
        k: Option<usize>,
        m: Option<usize>,
    ) -> Self {
        let g = measure.graph();
        SpecFile {
            kappa: g.kappa(),
            eta: g.eta().to_vec(),
            circuit_mu: measure.circuit_mu().to_vec(),
            branch_mu: measure
                .branch_mu()
                .iter()
                .map(|(&(r, i), s)| BranchMuEntry {
                    r,
                    i,
                    prefix: s.prefix().to_vec(),
                    tail: s.tail().coeffs().to_vec(),
                })
                .collect(),
            weight: weight.map(|w| WeightEntry {
                circuit_pi: w.circuit_pi().to_vec(),
                branch_pi: w
                    .branch_pi()
                    .iter()
                    .map(|(&(r, i), s)| BranchPiEntry {
                        r,
                        i,
                        prefix: s.prefix.clone(),
                        tail_const: s.tail.clone(),
                    })
                    .collect(),
            }),
            k,
            m,
        }
    }
}

/// Parses spec-file text into measures and optional weights.
pub fn parse_spec(text: &str) -> Result<LoadedSpec> {
    SpecFile::from_json(text)?.into_spec()
}
