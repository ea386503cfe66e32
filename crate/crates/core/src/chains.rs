//! Decrease d(F) and inversion power u(f), computed exactly by
//! longest-path dynamic programming over the componentwise order on
//! E_k^n, together with explicit witness chains.
//!
//! The DP processes points in a fixed linear extension (coordinate sum,
//! then lexicographic) and relaxes over **all** comparable pairs, not
//! just covering pairs, so it works unchanged on arbitrary sub-posets
//! (domain masks). Ties prefer the lexicographically smallest
//! predecessor, which makes witnesses reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::kfunc::{leq_coords, table_len, Basis, FunctionSystem, KFunction, KValue, Point};
use crate::Limits;

/// An increasing chain: pairwise-distinct points, each componentwise ≤
/// the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    points: Vec<Point>,
}

impl Chain {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidChain("chain must be non-empty".into()))?;
        let (k, arity) = (first.k(), first.arity());
        for p in &points {
            if p.k() != k || p.arity() != arity {
                return Err(Error::InvalidChain(
                    "chain points disagree on (k, arity)".into(),
                ));
            }
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidChain(format!(
                    "duplicate consecutive point {}",
                    w[0]
                )));
            }
            if !leq_coords(w[0].coords(), w[1].coords()) {
                return Err(Error::InvalidChain(format!(
                    "{} does not precede {} componentwise",
                    w[0], w[1]
                )));
            }
        }
        Ok(Chain { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k(&self) -> KValue {
        self.points[0].k()
    }

    pub fn arity(&self) -> usize {
        self.points[0].arity()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Decrease,
    InversionPower,
}

/// A chain certifying a computed metric value; re-evaluating the metric
/// along the chain reproduces the value exactly.
#[derive(Debug, Clone)]
pub struct ChainWitness {
    pub chain: Chain,
    pub value: u32,
    pub kind: WitnessKind,
}

impl ChainWitness {
    /// Re-evaluates a decrease witness against the system it certifies.
    pub fn verify_decrease(&self, system: &FunctionSystem) -> Result<bool> {
        if self.kind != WitnessKind::Decrease {
            return Ok(false);
        }
        Ok(decrease_over_chain(&self.chain, system)? == self.value)
    }

    /// Re-evaluates an inversion-power witness: the whole chain must be
    /// strictly decreasing in value and as long as the claimed power.
    pub fn verify_inversion_power(&self, f: &KFunction) -> Result<bool> {
        if self.kind != WitnessKind::InversionPower {
            return Ok(false);
        }
        if self.chain.len() != self.value as usize {
            return Ok(false);
        }
        for w in self.chain.points().windows(2) {
            if f.eval(&w[0])? <= f.eval(&w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// d(B) and u(B): maxima of the per-ω metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisProfile {
    pub d: u32,
    pub u: u32,
}

/// Number of consecutive pairs of the chain that are jumps for the system.
pub fn decrease_over_chain(chain: &Chain, system: &FunctionSystem) -> Result<u32> {
    if chain.k() != system.k() || chain.arity() != system.n() as usize {
        return Err(Error::Mismatch(
            "chain incompatible with system".to_string(),
        ));
    }
    let mut count = 0;
    for w in chain.points().windows(2) {
        let (a, b) = (w[0].index(), w[1].index());
        if system
            .members()
            .iter()
            .any(|f| f.eval_index(a) > f.eval_index(b))
        {
            count += 1;
        }
    }
    Ok(count)
}

/// The comparability structure of E_k^n, shared across DP runs.
pub(crate) struct Poset {
    pub(crate) k: KValue,
    pub(crate) n: u32,
    pub(crate) len: usize,
    /// linear extension: coordinate sum ascending, then index ascending
    order: Vec<u32>,
    /// strict comparable predecessors of each point, index ascending
    preds: Vec<Vec<u32>>,
}

impl Poset {
    pub(crate) fn new(k: KValue, n: u32) -> Result<Self> {
        let len = table_len(k, n)?;
        let nu = n as usize;
        let mut digits = vec![0 as KValue; len * nu];
        let mut sums = vec![0u32; len];
        let mut cur = vec![0 as KValue; nu];
        for i in 0..len {
            digits[i * nu..(i + 1) * nu].copy_from_slice(&cur);
            sums[i] = cur.iter().map(|&d| d as u32).sum();
            for j in (0..nu).rev() {
                if cur[j] + 1 < k {
                    cur[j] += 1;
                    break;
                }
                cur[j] = 0;
            }
        }
        let mut order: Vec<u32> = (0..len as u32).collect();
        order.sort_by_key(|&i| (sums[i as usize], i));
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); len];
        for b in 0..len {
            let cb = &digits[b * nu..(b + 1) * nu];
            for a in 0..len {
                if a != b && leq_coords(&digits[a * nu..(a + 1) * nu], cb) {
                    preds[b].push(a as u32);
                }
            }
        }
        Ok(Poset {
            k,
            n,
            len,
            order,
            preds,
        })
    }

    /// Strict comparable predecessors of a point, index ascending.
    pub(crate) fn strict_preds(&self, point: usize) -> &[u32] {
        &self.preds[point]
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Default)]
pub(crate) struct DpScratch {
    best: Vec<u32>,
    parent: Vec<u32>,
}

/// Longest-jump-path DP: best[b] = max decrease of a chain ending at b
/// (within the mask, when given). Returns the overall maximum and its
/// lexicographically smallest terminal; `None` terminal means the mask
/// selected no points.
pub(crate) fn decrease_dp(
    poset: &Poset,
    tables: &[&[KValue]],
    mask: Option<&[bool]>,
    scratch: &mut DpScratch,
) -> (u32, Option<usize>) {
    let len = poset.len;
    scratch.best.clear();
    scratch.best.resize(len, 0);
    scratch.parent.clear();
    scratch.parent.resize(len, NO_PARENT);
    let in_mask = |i: usize| mask.is_none_or(|m| m[i]);
    for &b in &poset.order {
        let b = b as usize;
        if !in_mask(b) {
            continue;
        }
        let mut best = 0u32;
        let mut parent = NO_PARENT;
        for &a in &poset.preds[b] {
            let a = a as usize;
            if !in_mask(a) {
                continue;
            }
            let w = u32::from(tables.iter().any(|t| t[a] > t[b]));
            let cand = scratch.best[a] + w;
            if cand > best {
                best = cand;
                parent = a as u32;
            }
        }
        scratch.best[b] = best;
        scratch.parent[b] = if best > 0 { parent } else { NO_PARENT };
    }
    let mut value = 0;
    let mut terminal = None;
    for i in 0..len {
        if in_mask(i) && (terminal.is_none() || scratch.best[i] > value) {
            value = scratch.best[i];
            terminal = Some(i);
        }
    }
    (value, terminal)
}

/// Max-decrease ending at each point of the mask (the DP profile the
/// level-partition construction consumes).
pub(crate) fn decrease_profile(
    poset: &Poset,
    tables: &[&[KValue]],
    mask: Option<&[bool]>,
) -> Vec<u32> {
    let mut scratch = DpScratch::default();
    decrease_dp(poset, tables, mask, &mut scratch);
    scratch.best
}

/// Maximum decrease over chains confined to the masked points.
pub(crate) fn max_decrease_within(poset: &Poset, tables: &[&[KValue]], mask: &[bool]) -> u32 {
    let mut scratch = DpScratch::default();
    decrease_dp(poset, tables, Some(mask), &mut scratch).0
}

/// Longest strictly-decreasing-value chain DP for a single function.
pub(crate) fn inversion_dp(
    poset: &Poset,
    table: &[KValue],
    scratch: &mut DpScratch,
) -> (u32, usize) {
    let len = poset.len;
    scratch.best.clear();
    scratch.best.resize(len, 1);
    scratch.parent.clear();
    scratch.parent.resize(len, NO_PARENT);
    for &b in &poset.order {
        let b = b as usize;
        for &a in &poset.preds[b] {
            let a = a as usize;
            if table[a] > table[b] {
                let cand = scratch.best[a] + 1;
                if cand > scratch.best[b] {
                    scratch.best[b] = cand;
                    scratch.parent[b] = a as u32;
                }
            }
        }
    }
    let mut value = 0;
    let mut terminal = 0;
    for i in 0..len {
        if scratch.best[i] > value {
            value = scratch.best[i];
            terminal = i;
        }
    }
    (value, terminal)
}

fn chain_from_parents(poset: &Poset, scratch: &DpScratch, terminal: usize) -> Result<Chain> {
    let mut idxs = vec![terminal];
    let mut cur = terminal;
    while scratch.parent[cur] != NO_PARENT {
        cur = scratch.parent[cur] as usize;
        idxs.push(cur);
    }
    idxs.reverse();
    let points = idxs
        .into_iter()
        .map(|i| Point::from_index(poset.k as u32, poset.n, i))
        .collect::<Result<Vec<_>>>()?;
    Chain::new(points)
}

/// Exact decrease d(F): the maximum number of jumps over all chains.
pub fn decrease(system: &FunctionSystem, limits: &Limits) -> Result<(u32, ChainWitness)> {
    limits.check(system.points() as u64)?;
    let poset = Poset::new(system.k(), system.n())?;
    let tables: Vec<&[KValue]> = system.members().iter().map(|f| f.table()).collect();
    let mut scratch = DpScratch::default();
    let (value, terminal) = decrease_dp(&poset, &tables, None, &mut scratch);
    let terminal = terminal.expect("full domain is non-empty");
    let chain = chain_from_parents(&poset, &scratch, terminal)?;
    Ok((
        value,
        ChainWitness {
            chain,
            value,
            kind: WitnessKind::Decrease,
        },
    ))
}

/// Decrease restricted to chains through the masked points only
/// (mask[i] indexed like the value tables).
pub fn decrease_within(
    system: &FunctionSystem,
    mask: &[bool],
    limits: &Limits,
) -> Result<(u32, ChainWitness)> {
    limits.check(system.points() as u64)?;
    if mask.len() != system.points() {
        return Err(Error::Mismatch(format!(
            "mask has {} entries for a domain of {} points",
            mask.len(),
            system.points()
        )));
    }
    if !mask.iter().any(|&m| m) {
        return Err(Error::InvalidParameter(
            "domain mask selects no points".into(),
        ));
    }
    let poset = Poset::new(system.k(), system.n())?;
    let tables: Vec<&[KValue]> = system.members().iter().map(|f| f.table()).collect();
    let mut scratch = DpScratch::default();
    let (value, terminal) = decrease_dp(&poset, &tables, Some(mask), &mut scratch);
    let terminal = terminal.expect("mask selects at least one point");
    let chain = chain_from_parents(&poset, &scratch, terminal)?;
    Ok((
        value,
        ChainWitness {
            chain,
            value,
            kind: WitnessKind::Decrease,
        },
    ))
}

/// Exact inversion power u(f): the maximum length of a chain along which
/// f strictly decreases at every step.
pub fn inversion_power(f: &KFunction, limits: &Limits) -> Result<(u32, ChainWitness)> {
    limits.check(f.points() as u64)?;
    let poset = Poset::new(f.k(), f.n())?;
    let mut scratch = DpScratch::default();
    let (value, terminal) = inversion_dp(&poset, f.table(), &mut scratch);
    let chain = chain_from_parents(&poset, &scratch, terminal)?;
    Ok((
        value,
        ChainWitness {
            chain,
            value,
            kind: WitnessKind::InversionPower,
        },
    ))
}

/// d(B) = max d(ω_i), u(B) = max u(ω_i).
pub fn basis_profile(basis: &Basis, limits: &Limits) -> Result<BasisProfile> {
    let mut d = 0;
    let mut u = 0;
    for w in basis.omegas() {
        let sys = FunctionSystem::single(w.func().clone())?;
        d = d.max(decrease(&sys, limits)?.0);
        u = u.max(inversion_power(w.func(), limits)?.0);
    }
    Ok(BasisProfile { d, u })
}
