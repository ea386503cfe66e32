//! Core domain types for k-valued logic: explicit value tables over
//! E_k^n, the componentwise partial order, monotonicity and jump
//! predicates, and the named standard functions used by the synthesis
//! procedure (Post negation, Łukasiewicz negation, thresholds, min/max).
//!
//! Tables are indexed with x_1 as the most significant base-k digit:
//! `index(x_1..x_n) = Σ x_i · k^(n-i)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value in E_k = {0, ..., k-1}. Range checks happen at construction
/// boundaries (`Point::new`, `KFunction::new`, file parsing).
pub type KValue = u8;

/// Hard cap on k. Everything downstream is exponential in n, and values
/// are stored as single base-k digits.
pub const MAX_K: KValue = 16;

/// Hard cap on stored table length (k^n entries).
pub const MAX_TABLE_LEN: u64 = 1 << 20;

pub(crate) fn check_k(k: u32) -> Result<KValue> {
    if !(2..=MAX_K as u32).contains(&k) {
        return Err(Error::InvalidK {
            k,
            max: MAX_K as u32,
        });
    }
    Ok(k as KValue)
}

/// Number of points k^n, guarded by the table storage cap.
pub(crate) fn table_len(k: KValue, n: u32) -> Result<usize> {
    let mut p: u64 = 1;
    for _ in 0..n {
        p = p.saturating_mul(k as u64);
        if p > MAX_TABLE_LEN {
            return Err(Error::TableTooLarge {
                k,
                n,
                cap: MAX_TABLE_LEN,
            });
        }
    }
    Ok(p as usize)
}

/// Componentwise ≤ on coordinate slices of equal length.
pub(crate) fn leq_coords(a: &[KValue], b: &[KValue]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A tuple in E_k^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    k: KValue,
    coords: Vec<KValue>,
}

impl Point {
    pub fn new(k: u32, coords: Vec<KValue>) -> Result<Self> {
        let k = check_k(k)?;
        for &v in &coords {
            if v >= k {
                return Err(Error::ValueOutOfRange { value: v as u32, k });
            }
        }
        Ok(Point { k, coords })
    }

    pub fn k(&self) -> KValue {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[KValue] {
        &self.coords
    }

    /// Table index of this point, x_1 most significant.
    pub fn index(&self) -> usize {
        self.coords
            .iter()
            .fold(0usize, |acc, &v| acc * self.k as usize + v as usize)
    }

    /// Inverse of [`Point::index`] for a domain of n coordinates.
    pub fn from_index(k: u32, n: u32, index: usize) -> Result<Self> {
        let kv = check_k(k)?;
        let len = table_len(kv, n)?;
        if index >= len {
            return Err(Error::InvalidParameter(format!(
                "point index {index} out of range for k^n = {len}"
            )));
        }
        let mut coords = vec![0; n as usize];
        let mut rest = index;
        for j in (0..n as usize).rev() {
            coords[j] = (rest % kv as usize) as KValue;
            rest /= kv as usize;
        }
        Ok(Point { k: kv, coords })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, v) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise order on E_k^n: true iff `a_j ≤ b_j` for every coordinate.
pub fn leq_point(a: &Point, b: &Point) -> Result<bool> {
    if a.k != b.k {
        return Err(Error::Mismatch(format!(
            "points have different k ({} vs {})",
            a.k, b.k
        )));
    }
    if a.arity() != b.arity() {
        return Err(Error::Mismatch(format!(
            "points have different arity ({} vs {})",
            a.arity(),
            b.arity()
        )));
    }
    Ok(leq_coords(&a.coords, &b.coords))
}

/// A total function E_k^n → E_k stored as an explicit value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KFunction {
    k: KValue,
    n: u32,
    table: Vec<KValue>,
}

impl KFunction {
    /// Builds a function from its full value table (length must be k^n,
    /// every entry in E_k).
    pub fn new(k: u32, n: u32, table: Vec<KValue>) -> Result<Self> {
        let k = check_k(k)?;
        let want = table_len(k, n)?;
        if table.len() != want {
            return Err(Error::TableLength {
                got: table.len(),
                want: want as u64,
            });
        }
        for &v in &table {
            if v >= k {
                return Err(Error::ValueOutOfRange { value: v as u32, k });
            }
        }
        Ok(KFunction { k, n, table })
    }

    pub fn k(&self) -> KValue {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn table(&self) -> &[KValue] {
        &self.table
    }

    /// Number of domain points (table length).
    pub fn points(&self) -> usize {
        self.table.len()
    }

    pub fn eval_index(&self, index: usize) -> KValue {
        self.table[index]
    }

    pub fn eval(&self, p: &Point) -> Result<KValue> {
        if p.k() != self.k || p.arity() != self.n as usize {
            return Err(Error::Mismatch(format!(
                "point ({}, arity {}) incompatible with function ({}, arity {})",
                p.k(),
                p.arity(),
                self.k,
                self.n
            )));
        }
        Ok(self.table[p.index()])
    }

    /// Applies the table to already-validated argument values.
    pub(crate) fn eval_args(&self, args: &[KValue]) -> KValue {
        debug_assert_eq!(args.len(), self.n as usize);
        let idx = args
            .iter()
            .fold(0usize, |acc, &v| acc * self.k as usize + v as usize);
        self.table[idx]
    }

    /// True iff no comparable pair drops the value. Checks covering pairs
    /// only (points differing by +1 in one coordinate), which is
    /// equivalent by transitivity.
    pub fn is_monotone(&self) -> bool {
        let k = self.k as usize;
        let n = self.n as usize;
        // stride of coordinate j (0-based): k^(n-1-j)
        let mut stride = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            stride[j] = stride[j + 1] * k;
        }
        for idx in 0..self.table.len() {
            for &st in &stride {
                let digit = (idx / st) % k;
                if digit + 1 < k && self.table[idx] > self.table[idx + st] {
                    return false;
                }
            }
        }
        true
    }

    /// Post negation: x ↦ (x+1) mod k.
    pub fn post_negation(k: u32) -> Result<Self> {
        let kv = check_k(k)?;
        Self::new(k, 1, (0..kv).map(|x| (x + 1) % kv).collect())
    }

    /// Łukasiewicz negation: x ↦ k-1-x.
    pub fn lukasiewicz_negation(k: u32) -> Result<Self> {
        let kv = check_k(k)?;
        Self::new(k, 1, (0..kv).map(|x| kv - 1 - x).collect())
    }

    /// φ: 0 ↦ 0 and z ↦ k-1 for z ≠ 0. Monotone.
    pub fn phi(k: u32) -> Result<Self> {
        let kv = check_k(k)?;
        Self::new(
            k,
            1,
            (0..kv).map(|x| if x == 0 { 0 } else { kv - 1 }).collect(),
        )
    }

    /// Threshold λ_j: x ↦ 1 if x ≥ j else 0, for 1 ≤ j ≤ k-1. Monotone.
    pub fn threshold_at(k: u32, j: u32) -> Result<Self> {
        let kv = check_k(k)?;
        if !(1..k).contains(&j) {
            return Err(Error::InvalidParameter(format!(
                "threshold j must satisfy 1 ≤ j ≤ k-1, got j={j} for k={k}"
            )));
        }
        Self::new(k, 1, (0..kv).map(|x| u8::from(x as u32 >= j)).collect())
    }

    /// n-ary minimum. Monotone.
    pub fn min_of(k: u32, n: u32) -> Result<Self> {
        Self::pointwise(k, n, |coords| coords.iter().copied().min().unwrap_or(0))
    }

    /// n-ary maximum. Monotone.
    pub fn max_of(k: u32, n: u32) -> Result<Self> {
        Self::pointwise(k, n, |coords| coords.iter().copied().max().unwrap_or(0))
    }

    /// Constant function of any arity (arity 0 gives a single-entry table).
    pub fn constant(k: u32, n: u32, c: KValue) -> Result<Self> {
        let kv = check_k(k)?;
        if c >= kv {
            return Err(Error::ValueOutOfRange {
                value: c as u32,
                k: kv,
            });
        }
        let len = table_len(kv, n)?;
        Self::new(k, n, vec![c; len])
    }

    /// Projection onto coordinate `i` (0-based).
    pub fn projection(k: u32, n: u32, i: u32) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidParameter(format!(
                "projection index {i} out of range for arity {n}"
            )));
        }
        Self::pointwise(k, n, |coords| coords[i as usize])
    }

    fn pointwise(k: u32, n: u32, f: impl Fn(&[KValue]) -> KValue) -> Result<Self> {
        let kv = check_k(k)?;
        let len = table_len(kv, n)?;
        let mut coords = vec![0 as KValue; n as usize];
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            table.push(f(&coords));
            // base-k odometer, last coordinate fastest
            for j in (0..n as usize).rev() {
                if coords[j] + 1 < kv {
                    coords[j] += 1;
                    break;
                }
                coords[j] = 0;
            }
        }
        Self::new(k, n, table)
    }
}

/// True iff `a ≤ b` componentwise and at least one member of the system
/// drops its value from `a` to `b`.
pub fn is_jump(a: &Point, b: &Point, system: &FunctionSystem) -> Result<bool> {
    if a.k() != system.k() || a.arity() != system.n() as usize {
        return Err(Error::Mismatch(
            "point incompatible with system".to_string(),
        ));
    }
    if !leq_point(a, b)? {
        return Ok(false);
    }
    let (ia, ib) = (a.index(), b.index());
    Ok(system
        .members()
        .iter()
        .any(|f| f.eval_index(ia) > f.eval_index(ib)))
}

/// An ordered, non-empty list of functions sharing the same (k, n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSystem {
    k: KValue,
    n: u32,
    members: Vec<KFunction>,
}

impl FunctionSystem {
    pub fn new(members: Vec<KFunction>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidParameter("system must be non-empty".into()))?;
        let (k, n) = (first.k(), first.n());
        if n == 0 {
            return Err(Error::InvalidParameter(
                "top-level systems need n ≥ 1".into(),
            ));
        }
        for f in &members {
            if f.k() != k || f.n() != n {
                return Err(Error::Mismatch(format!(
                    "system members disagree on (k, n): ({k}, {n}) vs ({}, {})",
                    f.k(),
                    f.n()
                )));
            }
        }
        Ok(FunctionSystem { k, n, members })
    }

    pub fn single(f: KFunction) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn from_tables(k: u32, n: u32, tables: Vec<Vec<KValue>>) -> Result<Self> {
        let members = tables
            .into_iter()
            .map(|t| KFunction::new(k, n, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn k(&self) -> KValue {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> usize {
        self.members[0].points()
    }

    pub fn members(&self) -> &[KFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_all_monotone(&self) -> bool {
        self.members.iter().all(|f| f.is_monotone())
    }

    /// Parses a system file: `{"k", "n", "functions": [[..], ..]}`.
    /// A single-function file `{"k", "n", "values": [..]}` is accepted too.
    pub fn from_json(text: &str) -> Result<Self> {
        let dto: SystemFileDto =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match dto {
            SystemFileDto::System { k, n, functions } => Self::from_tables(k, n, functions),
            SystemFileDto::Single { k, n, values } => Self::from_tables(k, n, vec![values]),
        }
    }

    /// Canonical system file: keys k, n, functions in that order.
    pub fn to_canonical_json(&self) -> String {
        let dto = SystemFileOut {
            k: self.k as u32,
            n: self.n,
            functions: self.members.iter().map(|f| f.table().to_vec()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&dto).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SystemFileDto {
    System {
        k: u32,
        n: u32,
        functions: Vec<Vec<KValue>>,
    },
    Single {
        k: u32,
        n: u32,
        values: Vec<KValue>,
    },
}

#[derive(Serialize)]
struct SystemFileOut {
    k: u32,
    n: u32,
    functions: Vec<Vec<KValue>>,
}

/// A basis function ω with the name it is referenced by in circuit files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFunction {
    name: String,
    func: KFunction,
}

impl NamedFunction {
    pub fn new(name: impl Into<String>, func: KFunction) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidParameter(
                "function name must be non-empty".into(),
            ));
        }
        Ok(NamedFunction { name, func })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn func(&self) -> &KFunction {
        &self.func
    }
}

/// A basis M ∪ {ω_1..ω_p}: the monotone class is implicit, the ω_i are
/// explicit and must all be non-monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    k: KValue,
    omegas: Vec<NamedFunction>,
}

impl Basis {
    pub fn new(k: u32, omegas: Vec<NamedFunction>) -> Result<Self> {
        let k = check_k(k)?;
        if omegas.is_empty() {
            return Err(Error::InvalidParameter(
                "basis needs at least one ω function".into(),
            ));
        }
        let mut names: Vec<&str> = Vec::new();
        for w in &omegas {
            if w.func().k() != k {
                return Err(Error::Mismatch(format!(
                    "ω `{}` has k={} but the basis has k={k}",
                    w.name(),
                    w.func().k()
                )));
            }
            if w.func().n() == 0 {
                return Err(Error::InvalidParameter(format!(
                    "ω `{}` must have arity ≥ 1",
                    w.name()
                )));
            }
            if w.func().is_monotone() {
                return Err(Error::InvalidParameter(format!(
                    "ω `{}` must be non-monotone",
                    w.name()
                )));
            }
            if names.contains(&w.name()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate ω name `{}`",
                    w.name()
                )));
            }
            names.push(w.name());
        }
        Ok(Basis { k, omegas })
    }

    /// B_P = M ∪ {x+1 mod k}.
    pub fn post(k: u32) -> Result<Self> {
        Self::new(
            k,
            vec![NamedFunction::new(
                "post_negation",
                KFunction::post_negation(k)?,
            )?],
        )
    }

    /// B_L = M ∪ {k-1-x}.
    pub fn lukasiewicz(k: u32) -> Result<Self> {
        Self::new(
            k,
            vec![NamedFunction::new(
                "lukasiewicz_negation",
                KFunction::lukasiewicz_negation(k)?,
            )?],
        )
    }

    pub fn k(&self) -> KValue {
        self.k
    }

    pub fn omegas(&self) -> &[NamedFunction] {
        &self.omegas
    }

    pub fn find(&self, name: &str) -> Option<&NamedFunction> {
        self.omegas.iter().find(|w| w.name() == name)
    }

    /// True iff some ω of this basis has exactly this value table.
    pub fn contains_table(&self, f: &KFunction) -> bool {
        self.omegas.iter().any(|w| w.func() == f)
    }

    /// Parses a basis file: `{"k", "omegas": [{"name", "values"}]}`.
    /// Arity is recovered from the table length (must be k^q, q ≥ 1).
    pub fn from_json(text: &str) -> Result<Self> {
        let dto: BasisFileDto =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let k = check_k(dto.k)?;
        let omegas = dto
            .omegas
            .into_iter()
            .map(|w| {
                let q = arity_from_len(k, w.values.len()).ok_or_else(|| {
                    Error::Parse(format!(
                        "ω `{}` table length {} is not a positive power of k={k}",
                        w.name,
                        w.values.len()
                    ))
                })?;
                NamedFunction::new(w.name, KFunction::new(dto.k, q, w.values)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dto.k, omegas)
    }

    pub fn to_canonical_json(&self) -> String {
        let dto = BasisFileDto {
            k: self.k as u32,
            omegas: self
                .omegas
                .iter()
                .map(|w| OmegaDto {
                    name: w.name().to_string(),
                    values: w.func().table().to_vec(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&dto).expect("serializable");
        s.push('\n');
        s
    }
}

/// Recovers q from a table of length k^q, requiring q ≥ 1.
pub(crate) fn arity_from_len(k: KValue, len: usize) -> Option<u32> {
    let mut q = 0u32;
    let mut p = 1usize;
    while p < len {
        p = p.checked_mul(k as usize)?;
        q += 1;
    }
    if p == len && q >= 1 {
        Some(q)
    } else {
        None
    }
}

#[derive(Serialize, Deserialize)]
struct BasisFileDto {
    k: u32,
    omegas: Vec<OmegaDto>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct OmegaDto {
    pub(crate) name: String,
    pub(crate) values: Vec<KValue>,
}
