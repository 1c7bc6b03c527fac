//! Operator-valued processes on a finite probability space, realized in
//! `L_∞(Ω) ⊗ M_d` as block-diagonal matrices. An atom of probability
//! `k / L` is replicated `k` times among `L` equal-weight blocks, so the
//! normalized trace of the big matrix is `E ⊗ τ`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::{Filtration, OperatorSequence, SubalgebraSpec};
use crate::opcore::{Exponent, Operator};

use super::report::{InequalityId, RatioReport};
use super::stein::check_stein_pq;

/// Largest dimension of the embedded algebra.
const MAX_EMBEDDED_DIM: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probability {
    pub num: u64,
    pub den: u64,
}

/// `paths[ω]` is the sequence `(f_n(ω))_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticProcess {
    pub probabilities: Vec<Probability>,
    pub paths: Vec<OperatorSequence>,
}

/// Increasing partitions of the atoms `0..|Ω|`, coarsest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalFiltration {
    pub partitions: Vec<Vec<Vec<usize>>>,
}

impl ClassicalFiltration {
    /// On `2^k` atoms: level `n` groups atoms into cells of `2^{k-n}`.
    pub fn dyadic(atoms: usize) -> Result<Self> {
        if atoms == 0 || !atoms.is_power_of_two() {
            return Err(Error::InvalidFiltration(format!("dyadic filtration needs 2^k atoms, got {atoms}")));
        }
        let depth = atoms.trailing_zeros();
        let partitions = (0..=depth)
            .map(|n| {
                let size = atoms >> n;
                (0..atoms / size).map(|c| (c * size..(c + 1) * size).collect()).collect()
            })
            .collect();
        Ok(Self { partitions })
    }

    fn embed(&self, replicas: &[Vec<usize>], block_dim: usize) -> Result<Filtration> {
        let levels = self
            .partitions
            .iter()
            .map(|partition| {
                let mut cells = Vec::with_capacity(partition.len());
                for cell in partition {
                    let mut blocks = Vec::new();
                    for &atom in cell {
                        let copies = replicas.get(atom).ok_or_else(|| {
                            Error::InvalidFiltration(format!("atom {atom} out of range 0..{}", replicas.len()))
                        })?;
                        blocks.extend_from_slice(copies);
                    }
                    cells.push(blocks);
                }
                SubalgebraSpec::cell_average(block_dim, cells)
            })
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(levels)
    }
}

/// Block indices of each atom's replicas.
fn replication(probabilities: &[Probability]) -> Result<Vec<Vec<usize>>> {
    if probabilities.is_empty() {
        return Err(Error::InvalidProbabilities("no atoms".into()));
    }
    let mut common = 1u64;
    for pr in probabilities {
        if pr.num == 0 || pr.den == 0 {
            return Err(Error::InvalidProbabilities(format!(
                "probability {}/{} must be positive",
                pr.num, pr.den
            )));
        }
        common = common.lcm(&pr.den);
        if common > MAX_EMBEDDED_DIM as u64 {
            return Err(Error::OutOfRange(format!(
                "common denominator exceeds {MAX_EMBEDDED_DIM} blocks"
            )));
        }
    }
    let counts: Vec<u64> = probabilities.iter().map(|pr| pr.num * (common / pr.den)).collect();
    let total: u64 = counts.iter().sum();
    if total != common {
        return Err(Error::InvalidProbabilities(format!(
            "probabilities sum to {total}/{common}, not 1"
        )));
    }
    let mut next = 0usize;
    Ok(counts
        .iter()
        .map(|&c| {
            let ids = (next..next + c as usize).collect();
            next += c as usize;
            ids
        })
        .collect())
}

impl StochasticProcess {
    /// The process as one positive sequence in `L_∞(Ω) ⊗ M_d`, with the block
    /// indices of each atom's replicas.
    pub fn embed(&self) -> Result<(OperatorSequence, Vec<Vec<usize>>)> {
        let replicas = replication(&self.probabilities)?;
        if self.paths.len() != self.probabilities.len() {
            return Err(Error::LengthMismatch(format!(
                "{} paths for {} atoms",
                self.paths.len(),
                self.probabilities.len()
            )));
        }
        let d = self.paths[0].dim();
        let len = self.paths[0].len();
        for path in &self.paths {
            if path.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: path.dim() });
            }
            if path.len() != len {
                return Err(Error::LengthMismatch(format!("paths of lengths {len} and {}", path.len())));
            }
        }
        let blocks: usize = replicas.iter().map(Vec::len).sum();
        if blocks * d > MAX_EMBEDDED_DIM {
            return Err(Error::OutOfRange(format!(
                "embedded dimension {} exceeds {MAX_EMBEDDED_DIM}",
                blocks * d
            )));
        }
        let dim = blocks * d;
        let items = (0..len)
            .map(|n| {
                let mut m = nalgebra::DMatrix::zeros(dim, dim);
                for (atom, copies) in replicas.iter().enumerate() {
                    let f = self.paths[atom].items()[n].matrix();
                    for &b in copies {
                        m.view_mut((b * d, b * d), (d, d)).copy_from(f);
                    }
                }
                Operator::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((OperatorSequence::new(items)?.into_positive()?, replicas))
    }
}

/// Stein ratio for a positive process with `E_n = 𝔼_n ⊗ id`, evaluated in
/// the embedded algebra.
pub fn check_semicommutative(
    process: &StochasticProcess,
    classical: &ClassicalFiltration,
    p: Exponent,
    q: Exponent,
    lag: usize,
) -> Result<RatioReport> {
    let (seq, replicas) = process.embed()?;
    let filt = classical.embed(&replicas, process.paths[0].dim())?;
    let mut report = check_stein_pq(&seq, &filt, p, q, lag)?;
    report.inequality = InequalityId::Semicommutative;
    Ok(report)
}
