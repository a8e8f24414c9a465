//! Exact enumeration: orbit census of the whole space or of a subspace, and
//! the character-sum oracle for the Fourier matrix.
//!
//! A subspace with basis `b_0..b_{k-1}` is walked as an odometer on the
//! coefficient digits. Each step adds the basis vectors whose digit changed,
//! and the same update is applied to precomputed pairings with the probe
//! vectors, so a step costs a few additions plus one classification.

use std::ops::Range;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{BigRational, FpSubspace, RationalMatrix};
use crate::exec::{map_reduce, ExecConfig};
use crate::reps::{RepKind, Space, UNCLASSIFIED};

/// Default enumeration budget in classified elements per call.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub budget: u64,
    pub exec: ExecConfig,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            budget: DEFAULT_BUDGET,
            exec: ExecConfig::default(),
        }
    }
}

impl CensusConfig {
    pub fn sequential() -> Self {
        CensusConfig {
            exec: ExecConfig::sequential(),
            ..Default::default()
        }
    }
}

/// Orbit counts in descriptor label order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    pub rep: RepKind,
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.counts
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect()
    }
}

/// A subspace given by a coordinate mask or an explicit basis.
#[derive(Clone, Debug)]
pub enum SubspaceSpec {
    Mask(Vec<bool>),
    Basis(FpSubspace),
}

impl SubspaceSpec {
    pub fn full(kind: RepKind) -> Self {
        SubspaceSpec::Mask(vec![true; kind.dim()])
    }

    pub fn dim(&self) -> usize {
        match self {
            SubspaceSpec::Mask(m) => m.iter().filter(|&&b| b).count(),
            SubspaceSpec::Basis(w) => w.dim(),
        }
    }

    pub fn to_subspace(&self, space: &Space) -> Result<FpSubspace> {
        match self {
            SubspaceSpec::Mask(m) => {
                if m.len() != space.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: space.dim(),
                        got: m.len(),
                    });
                }
                Ok(FpSubspace::coordinate(space.field(), m))
            }
            SubspaceSpec::Basis(w) => {
                if w.ambient_dim() != space.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: space.dim(),
                        got: w.ambient_dim(),
                    });
                }
                Ok(w.clone())
            }
        }
    }
}

/// `N[i][k] = #{x ∈ O_i : [x,y] = k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterHistogram {
    pub rep: RepKind,
    pub y: Vec<u32>,
    pub counts: Vec<Vec<u64>>,
}

impl CharacterHistogram {
    /// Whether every orbit row is constant on the nonzero residues.
    pub fn is_uniform(&self) -> bool {
        self.counts
            .iter()
            .all(|row| row.len() < 3 || row[1..].iter().all(|&c| c == row[1]))
    }

    /// `ê_j(y) = p^{-dim}(N_j[0] − N_j[1])`, valid once the row is uniform.
    pub fn transform(&self, j: usize) -> Result<BigRational> {
        let row = &self.counts[j];
        if row.len() >= 3 && row[1..].iter().any(|&c| c != row[1]) {
            return Err(Error::Inconsistent(format!(
                "histogram row {j} is not constant on nonzero residues"
            )));
        }
        let p = row.len() as u64;
        let volume = BigInt::from(p).pow(self.rep.dim() as u32);
        let diff = BigInt::from(row[0]) - BigInt::from(row[1]);
        Ok(BigRational::new(diff, volume))
    }
}

fn check_budget(space: &Space, dim: usize, budget: u64) -> Result<u64> {
    let required = (space.p() as u128).pow(dim as u32);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required as u64)
}

/// Enumerates a subspace in mixed-radix order of the basis coefficients.
struct Walker<'a> {
    space: &'a Space,
    p: u32,
    /// Sparse basis vectors `(coordinate, value)`.
    basis: Vec<Vec<(usize, u32)>>,
    /// `[b_j, y_i]` for each basis vector and probe.
    pair_steps: Vec<Vec<u32>>,
    probes: usize,
}

impl<'a> Walker<'a> {
    fn new(space: &'a Space, w: &FpSubspace, probes: &[Vec<u32>]) -> Result<Self> {
        let basis = w
            .basis()
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(k, &v)| (k, v))
                    .collect()
            })
            .collect();
        let pair_steps = w
            .basis()
            .iter()
            .map(|b| probes.iter().map(|y| space.bilinear(b, y)).collect())
            .collect::<Result<_>>()?;
        Ok(Walker {
            space,
            p: space.field().p(),
            basis,
            pair_steps,
            probes: probes.len(),
        })
    }

    /// Calls `visit(x, pairings)` for each element with index in `range`.
    #[inline]
    fn walk(&self, range: Range<u64>, mut visit: impl FnMut(&[u32], &[u32])) {
        if range.is_empty() {
            return;
        }
        let p = self.p;
        let k = self.basis.len();
        let mut digits = vec![0u32; k];
        let mut x = vec![0u32; self.space.dim()];
        let mut pairs = vec![0u32; self.probes];
        let add = |acc: &mut u32, v: u32| {
            let s = *acc + v;
            *acc = if s >= p { s - p } else { s };
        };
        let mut rest = range.start;
        for j in 0..k {
            let d = (rest % p as u64) as u32;
            rest /= p as u64;
            digits[j] = d;
            for _ in 0..d {
                for &(c, v) in &self.basis[j] {
                    add(&mut x[c], v);
                }
                for (a, &s) in pairs.iter_mut().zip(&self.pair_steps[j]) {
                    add(a, s);
                }
            }
        }
        for _ in range {
            visit(&x, &pairs);
            let mut j = 0;
            while j < k {
                for &(c, v) in &self.basis[j] {
                    add(&mut x[c], v);
                }
                for (a, &s) in pairs.iter_mut().zip(&self.pair_steps[j]) {
                    add(a, s);
                }
                digits[j] += 1;
                if digits[j] < p {
                    break;
                }
                digits[j] = 0;
                j += 1;
            }
        }
    }
}

fn add_vec(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn finish(space: &Space, mut counts: Vec<u64>) -> Result<CountVector> {
    let bad = counts.pop().unwrap_or(0);
    if bad > 0 {
        return Err(Error::Inconsistent(format!(
            "{bad} elements of {} over F_{} matched no orbit",
            space.kind(),
            space.p()
        )));
    }
    Ok(CountVector {
        rep: space.kind(),
        counts,
    })
}

/// `|O_i ∩ W|` for every orbit, by enumerating `W`.
pub fn count_in_subspace(space: &Space, w: &SubspaceSpec, cfg: &CensusConfig) -> Result<CountVector> {
    let w = w.to_subspace(space)?;
    let total = check_budget(space, w.dim(), cfg.budget)?;
    let walker = Walker::new(space, &w, &[])?;
    let r = space.orbit_count();
    let label = format!("{} census", space.kind());
    let counts = map_reduce(
        &cfg.exec,
        &label,
        total,
        || vec![0u64; r + 1],
        |acc, range| {
            walker.walk(range, |x, _| {
                let i = space.classify_index(x);
                let slot = if i == UNCLASSIFIED { r } else { i as usize };
                acc[slot] += 1;
            })
        },
        add_vec,
    )?;
    finish(space, counts)
}

/// `|O_i|` for every orbit, by enumerating the whole space.
pub fn full_census(space: &Space, cfg: &CensusConfig) -> Result<CountVector> {
    count_in_subspace(space, &SubspaceSpec::full(space.kind()), cfg)
}

/// Histograms for several probe vectors in one pass over the space.
pub fn character_histograms(space: &Space, ys: &[Vec<u32>], cfg: &CensusConfig) -> Result<Vec<CharacterHistogram>> {
    for y in ys {
        if y.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: y.len(),
            });
        }
    }
    let total = check_budget(space, space.dim(), cfg.budget)?;
    let full = FpSubspace::coordinate(space.field(), &vec![true; space.dim()]);
    let walker = Walker::new(space, &full, ys)?;
    let r = space.orbit_count();
    let p = space.p() as usize;
    let n = ys.len();
    // layout: [probe][orbit or unclassified][residue]
    let stride = (r + 1) * p;
    let label = format!("{} oracle", space.kind());
    let flat = map_reduce(
        &cfg.exec,
        &label,
        total,
        || vec![0u64; n * stride],
        |acc, range| {
            walker.walk(range, |x, pairs| {
                let i = space.classify_index(x);
                let slot = if i == UNCLASSIFIED { r } else { i as usize };
                for (t, &k) in pairs.iter().enumerate() {
                    acc[t * stride + slot * p + k as usize] += 1;
                }
            })
        },
        add_vec,
    )?;
    let mut out = Vec::with_capacity(n);
    for (t, y) in ys.iter().enumerate() {
        let block = &flat[t * stride..(t + 1) * stride];
        let bad: u64 = block[r * p..].iter().sum();
        if bad > 0 {
            return Err(Error::Inconsistent(format!(
                "{bad} elements of {} over F_{} matched no orbit",
                space.kind(),
                space.p()
            )));
        }
        out.push(CharacterHistogram {
            rep: space.kind(),
            y: y.clone(),
            counts: block[..r * p].chunks(p).map(|c| c.to_vec()).collect(),
        });
    }
    Ok(out)
}

pub fn character_histogram(space: &Space, y: &[u32], cfg: &CensusConfig) -> Result<CharacterHistogram> {
    Ok(character_histograms(space, &[y.to_vec()], cfg)?.remove(0))
}

/// Fourier matrix `a_ij = ê_j(y_i)` by direct character sums at the orbit
/// representatives `y_i`, all in one enumeration pass.
pub fn oracle_ft_matrix(space: &Space, cfg: &CensusConfig) -> Result<RationalMatrix> {
    let reps = space.representatives()?;
    let hists = character_histograms(space, &reps, cfg)?;
    let rows = hists
        .iter()
        .map(|h| {
            if !h.is_uniform() {
                return Err(Error::Inconsistent(format!(
                    "character histogram at y = {:?} is not uniform on nonzero residues",
                    h.y
                )));
            }
            (0..space.orbit_count()).map(|j| h.transform(j)).collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    RationalMatrix::from_rows(rows)
}
