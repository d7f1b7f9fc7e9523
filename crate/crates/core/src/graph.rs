//! Directed graphs with one circuit and finitely many branches.
//!
//! The circuit rotates as `x_t -> x_{t-1}` for `t >= 2` and `x_1 -> x_κ`.
//! Branch `i` at circuit vertex `x_r` is the chain `x^r_{i,1}, x^r_{i,2}, ...`
//! with `x^r_{i,j+1} -> x^r_{i,j}` and `x^r_{i,1} -> x_r`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A vertex: `x_r` or `x^r_{i,j}`. All indices are 1-based.
///
/// Ordering is circuit vertices first, then branch vertices lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    Circuit { r: usize },
    Branch { r: usize, i: usize, j: usize },
}

impl VertexId {
    pub fn circuit(r: usize) -> Self {
        VertexId::Circuit { r }
    }

    pub fn branch(r: usize, i: usize, j: usize) -> Self {
        VertexId::Branch { r, i, j }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Circuit { r } => write!(f, "c:{r}"),
            VertexId::Branch { r, i, j } => write!(f, "b:{r}:{i}:{j}"),
        }
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid vertex {s:?}; expected \"c:r\" or \"b:r:i:j\""));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<usize> {
            // reject signs and leading zeros so the encoding round-trips exactly
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        match parts.as_slice() {
            ["c", r] => Ok(VertexId::circuit(num(r)?)),
            ["b", r, i, j] => Ok(VertexId::branch(num(r)?, num(i)?, num(j)?)),
            _ => Err(bad()),
        }
    }
}

/// `Φ₂`: the representative of `p mod κ` in `{1, …, κ}`.
pub fn phi2(p: i64, kappa: usize) -> Result<usize> {
    if kappa < 1 {
        return Err(Error::Domain("circuit length must be >= 1".into()));
    }
    let rem = p.rem_euclid(kappa as i64) as usize;
    Ok(if rem == 0 { kappa } else { rem })
}

/// `Φ₁`: the quotient with `p = Φ₁(p)·κ + Φ₂(p)`.
pub fn phi1(p: i64, kappa: usize) -> Result<i64> {
    let r = phi2(p, kappa)? as i64;
    Ok((p - r) / kappa as i64)
}

/// Circuit length `κ` and branch counts `η_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    kappa: usize,
    eta: Vec<usize>,
}

impl GraphSpec {
    pub fn new(kappa: usize, eta: Vec<usize>) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::Validation("kappa must be >= 1".into()));
        }
        if eta.len() != kappa {
            return Err(Error::Validation(format!(
                "eta has {} entries but kappa is {kappa}",
                eta.len()
            )));
        }
        if eta.iter().all(|&e| e == 0) {
            return Err(Error::Validation("at least one circuit vertex must carry a branch".into()));
        }
        Ok(GraphSpec { kappa, eta })
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn eta(&self) -> &[usize] {
        &self.eta
    }

    /// Number of branches at `x_r`.
    pub fn eta_at(&self, r: usize) -> usize {
        self.eta[r - 1]
    }

    /// All `(r, i)` branch labels in canonical order.
    pub fn branches(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.kappa).flat_map(move |r| (1..=self.eta_at(r)).map(move |i| (r, i)))
    }

    fn phi2(&self, p: i64) -> usize {
        phi2(p, self.kappa).expect("kappa >= 1")
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        let invalid = |reason: String| Err(Error::InvalidVertex { vertex: v, reason });
        match v {
            VertexId::Circuit { r } if r < 1 || r > self.kappa => {
                invalid(format!("circuit index must lie in 1..={}", self.kappa))
            }
            VertexId::Branch { r, .. } if r < 1 || r > self.kappa => {
                invalid(format!("circuit index must lie in 1..={}", self.kappa))
            }
            VertexId::Branch { r, i, .. } if i < 1 || i > self.eta_at(r) => {
                invalid(format!("x_{r} has {} branches", self.eta_at(r)))
            }
            VertexId::Branch { j: 0, .. } => invalid("branch depth must be >= 1".into()),
            _ => Ok(()),
        }
    }

    /// `φ(v)`.
    pub fn parent(&self, v: VertexId) -> Result<VertexId> {
        self.check_vertex(v)?;
        Ok(match v {
            VertexId::Branch { r, i, j } if j > 1 => VertexId::branch(r, i, j - 1),
            VertexId::Branch { r, .. } => VertexId::circuit(r),
            VertexId::Circuit { r } => VertexId::circuit(self.phi2(r as i64 - 1)),
        })
    }

    /// `φ^p(v)` in closed form.
    pub fn iterate(&self, v: VertexId, p: usize) -> Result<VertexId> {
        self.check_vertex(v)?;
        let p = p as i64;
        Ok(match v {
            VertexId::Branch { r, i, j } if j as i64 > p => VertexId::branch(r, i, j - p as usize),
            VertexId::Branch { r: s, j, .. } => VertexId::circuit(self.phi2(s as i64 + j as i64 - p)),
            VertexId::Circuit { r } => VertexId::circuit(self.phi2(r as i64 - p)),
        })
    }

    /// One-step preimage `φ^{-1}({v})`, read off the parent map directly.
    pub fn children(&self, v: VertexId) -> Result<BTreeSet<VertexId>> {
        self.check_vertex(v)?;
        Ok(match v {
            VertexId::Branch { r, i, j } => BTreeSet::from([VertexId::branch(r, i, j + 1)]),
            VertexId::Circuit { r } => {
                let mut out = BTreeSet::from([VertexId::circuit(self.phi2(r as i64 + 1))]);
                out.extend((1..=self.eta_at(r)).map(|i| VertexId::branch(r, i, 1)));
                out
            }
        })
    }

    /// Atom `φ^{-p}({v})` in closed form, `p >= 1`.
    pub fn preimage(&self, v: VertexId, p: usize) -> Result<BTreeSet<VertexId>> {
        self.check_vertex(v)?;
        if p < 1 {
            return Err(Error::Domain("preimage order must be >= 1".into()));
        }
        Ok(match v {
            VertexId::Branch { r, i, j } => BTreeSet::from([VertexId::branch(r, i, j + p)]),
            VertexId::Circuit { r } => {
                let mut out = BTreeSet::from([VertexId::circuit(self.phi2((p + r) as i64))]);
                for j in 1..=p {
                    let s = self.phi2(p as i64 + r as i64 - j as i64);
                    out.extend((1..=self.eta_at(s)).map(|i| VertexId::branch(s, i, j)));
                }
                out
            }
        })
    }

    /// Circuit vertices followed by branch vertices with depth `j <= depth`, canonical order.
    pub fn vertices_to_depth(&self, depth: usize) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = (1..=self.kappa).map(VertexId::circuit).collect();
        for (r, i) in self.branches() {
            out.extend((1..=depth).map(|j| VertexId::branch(r, i, j)));
        }
        out
    }
}

/// The index sets `A_r = {(s, j) : s ∈ J_κ, j ∈ J_{p+k}, Φ₂(p+k+r) = Φ₂(s+j)}` for `r = 1..=κ`.
pub fn partition_indices(kappa: usize, p: usize, k: usize) -> Result<Vec<BTreeSet<(usize, usize)>>> {
    if kappa < 1 || p < 1 {
        return Err(Error::Domain("kappa and p must be >= 1".into()));
    }
    let n = (p + k) as i64;
    (1..=kappa)
        .map(|r| {
            let target = phi2(n + r as i64, kappa)?;
            let mut set = BTreeSet::new();
            for s in 1..=kappa {
                for j in 1..=p + k {
                    if phi2((s + j) as i64, kappa)? == target {
                        set.insert((s, j));
                    }
                }
            }
            Ok(set)
        })
        .collect()
}
