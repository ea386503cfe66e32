//! Independent brute-force verifiers.
//!
//! `decrease_bruteforce` and `inversion_power_bruteforce` enumerate
//! chains explicitly by depth-first search over the componentwise order,
//! realizing the definitions directly; they share nothing with the DP in
//! [`crate::chains`] beyond the order predicate itself. The scans walk
//! entire function spaces (using the fast DP, which the brute-force pair
//! validates separately) to confirm the closed-form worst-case values.

use std::collections::BTreeMap;

use crate::chains::{decrease_dp, DpScratch, Poset};
use crate::error::{Error, Result};
use crate::kfunc::{leq_coords, table_len, FunctionSystem, KFunction, KValue};

/// Chain enumeration explodes combinatorially; brute force stops here.
pub const MAX_ORACLE_POINTS: u64 = 12;

/// Cap on scanned function/system spaces.
pub const MAX_SCAN_SPACE: u64 = 1 << 26;

fn oracle_domain(k: KValue, n: u32) -> Result<Vec<Vec<KValue>>> {
    let len = table_len(k, n)? as u64;
    if len > MAX_ORACLE_POINTS {
        return Err(Error::SizeGuard {
            points: len,
            limit: MAX_ORACLE_POINTS,
        });
    }
    let mut coords = vec![0 as KValue; n as usize];
    let mut all = Vec::with_capacity(len as usize);
    for _ in 0..len {
        all.push(coords.clone());
        for j in (0..n as usize).rev() {
            if coords[j] + 1 < k {
                coords[j] += 1;
                break;
            }
            coords[j] = 0;
        }
    }
    Ok(all)
}

/// Maximum number of jumps over all chains, by exhaustive DFS over all
/// increasing sequences of distinct comparable points.
pub fn decrease_bruteforce(system: &FunctionSystem) -> Result<u32> {
    let coords = oracle_domain(system.k(), system.n())?;
    let tables: Vec<&[KValue]> = system.members().iter().map(|f| f.table()).collect();
    let len = coords.len();

    fn dfs(last: usize, jumps: u32, coords: &[Vec<KValue>], tables: &[&[KValue]], max: &mut u32) {
        if jumps > *max {
            *max = jumps;
        }
        for next in 0..coords.len() {
            if next != last && leq_coords(&coords[last], &coords[next]) {
                let w = u32::from(tables.iter().any(|t| t[last] > t[next]));
                dfs(next, jumps + w, coords, tables, max);
            }
        }
    }

    let mut max = 0;
    for start in 0..len {
        dfs(start, 0, &coords, &tables, &mut max);
    }
    Ok(max)
}

/// Maximum length of a chain with strictly decreasing values, by
/// exhaustive DFS extending only through strict value drops.
pub fn inversion_power_bruteforce(f: &KFunction) -> Result<u32> {
    let coords = oracle_domain(f.k(), f.n())?;
    let table = f.table();

    fn dfs(last: usize, depth: u32, coords: &[Vec<KValue>], table: &[KValue], max: &mut u32) {
        if depth > *max {
            *max = depth;
        }
        for next in 0..coords.len() {
            if next != last && leq_coords(&coords[last], &coords[next]) && table[last] > table[next]
            {
                dfs(next, depth + 1, coords, table, max);
            }
        }
    }

    let mut max = 0;
    for start in 0..coords.len() {
        dfs(start, 1, &coords, table, &mut max);
    }
    Ok(max)
}

/// Sampling parameters recorded in a report produced by a sampled scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanSampling {
    pub count: u64,
    pub seed: u64,
}

/// Result of a function-space scan.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub k: KValue,
    pub n: u32,
    pub m: usize,
    /// Functions or systems examined.
    pub scanned: u64,
    /// `None` means the scan was exhaustive.
    pub sampled: Option<ScanSampling>,
    pub max_decrease: u32,
    /// decrease value → number of scanned instances attaining it
    pub histogram: BTreeMap<u32, u64>,
    /// first scanned instance attaining `max_decrease`
    pub extremal: FunctionSystem,
}

fn scan_space(k: KValue, n: u32, m: usize) -> Result<u64> {
    let len = table_len(k, n)? as u32;
    let digits = (len as u64).saturating_mul(m as u64);
    let mut space: u64 = 1;
    for _ in 0..digits {
        space = space.saturating_mul(k as u64);
        if space > MAX_SCAN_SPACE {
            return Err(Error::SizeGuard {
                points: space,
                limit: MAX_SCAN_SPACE,
            });
        }
    }
    Ok(space)
}

struct ScanState {
    poset: Poset,
    scratch: DpScratch,
    max: u32,
    histogram: BTreeMap<u32, u64>,
    extremal: Option<Vec<Vec<KValue>>>,
}

impl ScanState {
    fn new(k: KValue, n: u32) -> Result<Self> {
        Ok(ScanState {
            poset: Poset::new(k, n)?,
            scratch: DpScratch::default(),
            max: 0,
            histogram: BTreeMap::new(),
            extremal: None,
        })
    }

    fn feed(&mut self, tables: &[&[KValue]]) {
        let (d, _) = decrease_dp(&self.poset, tables, None, &mut self.scratch);
        *self.histogram.entry(d).or_insert(0) += 1;
        if self.extremal.is_none() || d > self.max {
            self.max = d;
            self.extremal = Some(tables.iter().map(|t| t.to_vec()).collect());
        }
    }

    fn report(
        self,
        k: KValue,
        n: u32,
        m: usize,
        scanned: u64,
        sampled: Option<ScanSampling>,
    ) -> Result<ScanReport> {
        let extremal = FunctionSystem::from_tables(
            k as u32,
            n,
            self.extremal.expect("at least one instance scanned"),
        )?;
        Ok(ScanReport {
            k,
            n,
            m,
            scanned,
            sampled,
            max_decrease: self.max,
            histogram: self.histogram,
            extremal,
        })
    }
}

/// Exact maximum decrease over every function of P_k(n), with the full
/// distribution and the first extremal witness.
pub fn scan_single_functions(k: u32, n: u32) -> Result<ScanReport> {
    scan_systems(k, n, 1)
}

/// Exact maximum decrease over every ordered m-member system of P_k(n)
/// functions.
pub fn scan_systems(k: u32, n: u32, m: usize) -> Result<ScanReport> {
    let kv = crate::kfunc::check_k(k)?;
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("scan needs n ≥ 1 and m ≥ 1".into()));
    }
    let space = scan_space(kv, n, m)?;
    let len = table_len(kv, n)?;
    let mut state = ScanState::new(kv, n)?;
    // one base-k odometer over all m concatenated tables
    let mut digits = vec![0 as KValue; len * m];
    for _ in 0..space {
        let tables: Vec<&[KValue]> = digits.chunks_exact(len).collect();
        state.feed(&tables);
        for j in (0..digits.len()).rev() {
            if digits[j] + 1 < kv {
                digits[j] += 1;
                break;
            }
            digits[j] = 0;
        }
    }
    state.report(kv, n, m, space, None)
}

/// Seeded random scan for spaces too large to exhaust. Deterministic for
/// a fixed seed.
pub fn scan_systems_sampled(k: u32, n: u32, m: usize, count: u64, seed: u64) -> Result<ScanReport> {
    let kv = crate::kfunc::check_k(k)?;
    if n == 0 || m == 0 || count == 0 {
        return Err(Error::InvalidParameter(
            "sampled scan needs n ≥ 1, m ≥ 1 and a positive sample count".into(),
        ));
    }
    let len = table_len(kv, n)?;
    let mut state = ScanState::new(kv, n)?;
    let mut rng = SplitMix64::new(seed);
    let mut digits = vec![0 as KValue; len * m];
    for _ in 0..count {
        for d in digits.iter_mut() {
            *d = rng.below(kv as u64) as KValue;
        }
        let tables: Vec<&[KValue]> = digits.chunks_exact(len).collect();
        state.feed(&tables);
    }
    state.report(kv, n, m, count, Some(ScanSampling { count, seed }))
}

/// SplitMix64: a tiny, fully deterministic generator used for
/// reproducible sampling (stable output across platforms and versions).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in 0..bound via rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}
