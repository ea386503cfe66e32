//! Gate-level circuit IR over bases M ∪ {ω_1..ω_p}.
//!
//! Gates carry explicit value tables. Monotone gates weigh 0; designated
//! ω-gates weigh 1, and the non-monotone weight of a circuit is the count
//! of its ω-gates. Node lists are topologically ordered (arguments always
//! reference inputs or earlier gates), which fixes the "first ω-gate"
//! used by the excision surgery. Circuits are immutable; surgery returns
//! new circuits.
//!
//! The JSON file format is canonical: keys in the order `k`, `inputs`,
//! `basis`, `nodes`, `outputs`; nodes in topological order; ω-gates
//! reference their table by basis name; integers only.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::chains;
use crate::error::{Error, Result};
use crate::kfunc::{
    arity_from_len, check_k, Basis, FunctionSystem, KFunction, KValue, NamedFunction, OmegaDto,
};
use crate::Limits;

/// Reference to an input or an earlier gate, by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRef {
    Input(usize),
    Gate(usize),
}

/// What a gate computes and how it is weighted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateOp {
    /// Weight-0 gate; the table must be monotone for the circuit to be
    /// valid over any basis.
    Monotone(KFunction),
    /// Weight-1 gate carrying the basis name it was instantiated from.
    Omega { name: String, func: KFunction },
}

impl GateOp {
    pub fn func(&self) -> &KFunction {
        match self {
            GateOp::Monotone(f) => f,
            GateOp::Omega { func, .. } => func,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, GateOp::Omega { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    id: String,
    op: GateOp,
    args: Vec<NodeRef>,
}

impl Gate {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn op(&self) -> &GateOp {
        &self.op
    }

    pub fn args(&self) -> &[NodeRef] {
        &self.args
    }
}

/// A DAG of named inputs and table gates with ordered outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    k: KValue,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<NodeRef>,
}

impl Circuit {
    fn from_parts(
        k: KValue,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<NodeRef>,
    ) -> Result<Self> {
        let mut names: HashSet<&str> = HashSet::new();
        for name in &inputs {
            if name.is_empty() {
                return Err(Error::InvalidCircuit("empty input name".into()));
            }
            if !names.insert(name) {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate input name `{name}`"
                )));
            }
        }
        for (i, gate) in gates.iter().enumerate() {
            if gate.id.is_empty() {
                return Err(Error::InvalidCircuit("empty gate id".into()));
            }
            if !names.insert(&gate.id) {
                return Err(Error::InvalidCircuit(format!(
                    "node id `{}` is not unique",
                    gate.id
                )));
            }
            let func = gate.op.func();
            if func.k() != k {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` has k={}, circuit has k={k}",
                    gate.id,
                    func.k()
                )));
            }
            if func.n() as usize != gate.args.len() {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` has {} args for an arity-{} table",
                    gate.id,
                    gate.args.len(),
                    func.n()
                )));
            }
            for &arg in &gate.args {
                if !ref_in_range(arg, inputs.len(), i) {
                    return Err(Error::InvalidCircuit(format!(
                        "gate `{}` references a node at or after itself",
                        gate.id
                    )));
                }
            }
        }
        if outputs.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no outputs".into()));
        }
        for &out in &outputs {
            if !ref_in_range(out, inputs.len(), gates.len()) {
                return Err(Error::InvalidCircuit(
                    "output references a missing node".into(),
                ));
            }
        }
        Ok(Circuit {
            k,
            inputs,
            gates,
            outputs,
        })
    }

    pub fn k(&self) -> KValue {
        self.k
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[NodeRef] {
        &self.outputs
    }

    /// Total weight: the number of ω-gates (monotone gates are free).
    pub fn inversion_weight(&self) -> usize {
        self.gates.iter().filter(|g| g.op.is_omega()).count()
    }

    /// Checks basis discipline and returns every violation found (empty
    /// means the circuit is valid over `basis`). Structural soundness is
    /// already guaranteed by construction.
    pub fn validate(&self, basis: &Basis) -> Vec<String> {
        let mut violations = Vec::new();
        if basis.k() != self.k {
            violations.push(format!(
                "circuit has k={} but basis has k={}",
                self.k,
                basis.k()
            ));
        }
        for gate in &self.gates {
            match &gate.op {
                GateOp::Monotone(f) => {
                    if !f.is_monotone() {
                        violations.push(format!(
                            "gate `{}`: non-monotone table in weight-0 gate",
                            gate.id
                        ));
                    }
                }
                GateOp::Omega { func, .. } => {
                    if func.is_monotone() {
                        violations.push(format!("gate `{}`: ω must be non-monotone", gate.id));
                    }
                    if !basis.contains_table(func) {
                        violations.push(format!("gate `{}`: omega table not in basis", gate.id));
                    }
                }
            }
        }
        violations
    }

    /// Bottom-up evaluation of every output under the assignment.
    pub fn evaluate(&self, assignment: &[KValue]) -> Result<Vec<KValue>> {
        if assignment.len() != self.inputs.len() {
            return Err(Error::Mismatch(format!(
                "assignment has {} values for {} inputs",
                assignment.len(),
                self.inputs.len()
            )));
        }
        for &v in assignment {
            if v >= self.k {
                return Err(Error::ValueOutOfRange {
                    value: v as u32,
                    k: self.k,
                });
            }
        }
        let mut vals: Vec<KValue> = Vec::with_capacity(self.gates.len());
        let mut argbuf: Vec<KValue> = Vec::new();
        for gate in &self.gates {
            argbuf.clear();
            argbuf.extend(gate.args.iter().map(|&r| match r {
                NodeRef::Input(i) => assignment[i],
                NodeRef::Gate(g) => vals[g],
            }));
            vals.push(gate.op.func().eval_args(&argbuf));
        }
        Ok(self
            .outputs
            .iter()
            .map(|&r| match r {
                NodeRef::Input(i) => assignment[i],
                NodeRef::Gate(g) => vals[g],
            })
            .collect())
    }

    /// Full truth tables of all outputs, by evaluating every point of
    /// E_k^n (n = number of inputs).
    pub fn realized_system(&self, limits: &Limits) -> Result<FunctionSystem> {
        let n = self.inputs.len();
        let points = crate::kfunc::table_len(self.k, n as u32)?;
        limits.check(points as u64)?;
        let mut tables = vec![Vec::with_capacity(points); self.outputs.len()];
        let mut coords = vec![0 as KValue; n];
        for _ in 0..points {
            let out = self.evaluate(&coords)?;
            for (t, v) in tables.iter_mut().zip(out) {
                t.push(v);
            }
            for j in (0..n).rev() {
                if coords[j] + 1 < self.k {
                    coords[j] += 1;
                    break;
                }
                coords[j] = 0;
            }
        }
        FunctionSystem::from_tables(self.k as u32, n as u32, tables)
    }

    /// Removes the first ω-gate (in node order), rewiring its consumers
    /// to a fresh input appended after the existing ones. Returns the new
    /// circuit and the argument references of the removed gate (valid in
    /// both the old and new circuit: they strictly precede the gate).
    pub fn excise_first_omega(&self) -> Result<(Circuit, Vec<NodeRef>)> {
        let e = self
            .gates
            .iter()
            .position(|g| g.op.is_omega())
            .ok_or(Error::NoOmegaGate)?;
        let h_refs = self.gates[e].args.clone();
        let y_name = self.fresh_name("y");
        let y_ref = NodeRef::Input(self.inputs.len());
        let remap = |r: NodeRef| match r {
            NodeRef::Gate(i) if i == e => y_ref,
            NodeRef::Gate(i) if i > e => NodeRef::Gate(i - 1),
            other => other,
        };
        let mut inputs = self.inputs.clone();
        inputs.push(y_name);
        let gates = self
            .gates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, g)| Gate {
                id: g.id.clone(),
                op: g.op.clone(),
                args: g.args.iter().copied().map(remap).collect(),
            })
            .collect();
        let outputs = self.outputs.iter().copied().map(remap).collect();
        let circuit = Circuit::from_parts(self.k, inputs, gates, outputs)?;
        Ok((circuit, h_refs))
    }

    /// Sub-circuit computing a single node: same inputs, only the gates
    /// the node depends on, one output.
    pub fn cone(&self, root: NodeRef) -> Result<Circuit> {
        if !ref_in_range(root, self.inputs.len(), self.gates.len()) {
            return Err(Error::InvalidCircuit("cone root is not a node".into()));
        }
        let mut keep = vec![false; self.gates.len()];
        let mut stack = vec![root];
        while let Some(r) = stack.pop() {
            if let NodeRef::Gate(g) = r {
                if !keep[g] {
                    keep[g] = true;
                    stack.extend(self.gates[g].args.iter().copied());
                }
            }
        }
        let mut new_index = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (i, gate) in self.gates.iter().enumerate() {
            if keep[i] {
                new_index[i] = gates.len();
                gates.push(Gate {
                    id: gate.id.clone(),
                    op: gate.op.clone(),
                    args: gate
                        .args
                        .iter()
                        .map(|&r| match r {
                            NodeRef::Gate(g) => NodeRef::Gate(new_index[g]),
                            other => other,
                        })
                        .collect(),
                });
            }
        }
        let out = match root {
            NodeRef::Gate(g) => NodeRef::Gate(new_index[g]),
            other => other,
        };
        Circuit::from_parts(self.k, self.inputs.clone(), gates, vec![out])
    }

    /// Appends an ω-gate fed by fresh constant-0 gates, with its output
    /// left unconnected. Used to equalize weights before excision in the
    /// connector recursion.
    pub(crate) fn with_dummy_omega(&self, omega: &NamedFunction) -> Result<Circuit> {
        let q = omega.func().n();
        let mut gates = self.gates.clone();
        let mut arg_refs = Vec::with_capacity(q as usize);
        for j in 0..q {
            let id = self.fresh_name(&format!("pad{j}"));
            arg_refs.push(NodeRef::Gate(gates.len()));
            gates.push(Gate {
                id,
                op: GateOp::Monotone(KFunction::constant(self.k as u32, 0, 0)?),
                args: vec![],
            });
        }
        gates.push(Gate {
            id: self.fresh_name("pad_omega"),
            op: GateOp::Omega {
                name: omega.name().to_string(),
                func: omega.func().clone(),
            },
            args: arg_refs,
        });
        Circuit::from_parts(self.k, self.inputs.clone(), gates, self.outputs.clone())
    }

    /// First unused node name of the form `base`, `base2`, `base3`, ...
    fn fresh_name(&self, base: &str) -> String {
        let taken = |name: &str| {
            self.inputs.iter().any(|i| i == name) || self.gates.iter().any(|g| g.id == name)
        };
        if !taken(base) {
            return base.to_string();
        }
        let mut i = 2usize;
        loop {
            let candidate = format!("{base}{i}");
            if !taken(&candidate) {
                return candidate;
            }
            i += 1;
        }
    }

    fn ref_name(&self, r: NodeRef) -> String {
        match r {
            NodeRef::Input(i) => self.inputs[i].clone(),
            NodeRef::Gate(g) => self.gates[g].id.clone(),
        }
    }

    /// Canonical circuit file. Deserializing and re-serializing the
    /// result is byte-identical.
    pub fn to_canonical_json(&self) -> String {
        let mut basis: Vec<OmegaDto> = Vec::new();
        for gate in &self.gates {
            if let GateOp::Omega { name, func } = &gate.op {
                if !basis.iter().any(|b| &b.name == name) {
                    basis.push(OmegaDto {
                        name: name.clone(),
                        values: func.table().to_vec(),
                    });
                }
            }
        }
        let nodes = self
            .gates
            .iter()
            .map(|gate| {
                let (kind, table, omega) = match &gate.op {
                    GateOp::Monotone(f) => ("monotone", Some(f.table().to_vec()), None),
                    GateOp::Omega { name, .. } => ("omega", None, Some(name.clone())),
                };
                NodeDto {
                    id: gate.id.clone(),
                    kind: kind.to_string(),
                    table,
                    omega,
                    args: gate.args.iter().map(|&r| self.ref_name(r)).collect(),
                }
            })
            .collect();
        let dto = CircuitFileDto {
            k: self.k as u32,
            inputs: self.inputs.clone(),
            basis,
            nodes,
            outputs: self.outputs.iter().map(|&r| self.ref_name(r)).collect(),
        };
        let mut s = serde_json::to_string_pretty(&dto).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses a circuit file. Structural problems (bad references,
    /// length/arity mismatches, duplicate ids) are parse errors; basis
    /// discipline is checked separately by [`Circuit::validate`].
    pub fn from_json(text: &str) -> Result<Circuit> {
        let dto: CircuitFileDto =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let k = check_k(dto.k).map_err(|e| Error::Parse(e.to_string()))?;
        let mut declared: HashMap<String, KFunction> = HashMap::new();
        for w in dto.basis {
            let q = arity_from_len(k, w.values.len()).ok_or_else(|| {
                Error::Parse(format!(
                    "basis entry `{}` has table length {}, not a positive power of k={k}",
                    w.name,
                    w.values.len()
                ))
            })?;
            let func =
                KFunction::new(dto.k, q, w.values).map_err(|e| Error::Parse(e.to_string()))?;
            if declared.insert(w.name.clone(), func).is_some() {
                return Err(Error::Parse(format!("duplicate basis entry `{}`", w.name)));
            }
        }
        let mut refs: HashMap<String, NodeRef> = HashMap::new();
        for (i, name) in dto.inputs.iter().enumerate() {
            refs.insert(name.clone(), NodeRef::Input(i));
        }
        let mut gates = Vec::with_capacity(dto.nodes.len());
        for node in dto.nodes {
            let args = node
                .args
                .iter()
                .map(|a| {
                    refs.get(a).copied().ok_or_else(|| {
                        Error::Parse(format!(
                            "node `{}` references unknown node `{a}` (nodes must be topologically ordered)",
                            node.id
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let op = match node.kind.as_str() {
                "monotone" => {
                    let table = node.table.ok_or_else(|| {
                        Error::Parse(format!("monotone node `{}` is missing its table", node.id))
                    })?;
                    if node.omega.is_some() {
                        return Err(Error::Parse(format!(
                            "monotone node `{}` must not name an omega",
                            node.id
                        )));
                    }
                    GateOp::Monotone(
                        KFunction::new(dto.k, args.len() as u32, table)
                            .map_err(|e| Error::Parse(format!("node `{}`: {e}", node.id)))?,
                    )
                }
                "omega" => {
                    let name = node.omega.ok_or_else(|| {
                        Error::Parse(format!(
                            "omega node `{}` is missing its basis name",
                            node.id
                        ))
                    })?;
                    if node.table.is_some() {
                        return Err(Error::Parse(format!(
                            "omega node `{}` must reference its table by basis name only",
                            node.id
                        )));
                    }
                    let func = declared.get(&name).cloned().ok_or_else(|| {
                        Error::Parse(format!(
                            "omega node `{}` references undeclared basis entry `{name}`",
                            node.id
                        ))
                    })?;
                    if func.n() as usize != args.len() {
                        return Err(Error::Parse(format!(
                            "omega node `{}` has {} args for arity-{} ω `{name}`",
                            node.id,
                            args.len(),
                            func.n()
                        )));
                    }
                    GateOp::Omega { name, func }
                }
                other => {
                    return Err(Error::Parse(format!(
                        "node `{}` has unknown kind `{other}`",
                        node.id
                    )))
                }
            };
            if refs
                .insert(node.id.clone(), NodeRef::Gate(gates.len()))
                .is_some()
            {
                return Err(Error::Parse(format!("node id `{}` is not unique", node.id)));
            }
            gates.push(Gate {
                id: node.id,
                op,
                args,
            });
        }
        let outputs = dto
            .outputs
            .iter()
            .map(|o| {
                refs.get(o)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("output references unknown node `{o}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_parts(k, dto.inputs, gates, outputs).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn ref_in_range(r: NodeRef, inputs: usize, gates_before: usize) -> bool {
    match r {
        NodeRef::Input(i) => i < inputs,
        NodeRef::Gate(g) => g < gates_before,
    }
}

/// Checks `d(realized) ≤ (d(B)+1)^weight − 1`, which every valid circuit
/// over B must satisfy.
pub fn check_weight_bound(circuit: &Circuit, basis: &Basis, limits: &Limits) -> Result<bool> {
    let realized = circuit.realized_system(limits)?;
    let (d_f, _) = chains::decrease(&realized, limits)?;
    let profile = chains::basis_profile(basis, limits)?;
    let weight = circuit.inversion_weight() as u32;
    let bound = match (profile.d as u128 + 1).checked_pow(weight) {
        Some(p) => p - 1,
        None => return Ok(true),
    };
    Ok(d_f as u128 <= bound)
}

/// Incremental, validated construction of circuits. Gate ids are
/// assigned as `g0`, `g1`, ... in order.
pub struct CircuitBuilder {
    k: KValue,
    inputs: Vec<String>,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(k: u32) -> Result<Self> {
        Ok(CircuitBuilder {
            k: check_k(k)?,
            inputs: Vec::new(),
            gates: Vec::new(),
        })
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Result<NodeRef> {
        let name = name.into();
        if name.is_empty() || self.inputs.contains(&name) {
            return Err(Error::InvalidCircuit(format!(
                "input name `{name}` is empty or already taken"
            )));
        }
        self.inputs.push(name);
        Ok(NodeRef::Input(self.inputs.len() - 1))
    }

    fn add_gate(&mut self, op: GateOp, args: Vec<NodeRef>) -> Result<NodeRef> {
        let func = op.func();
        if func.k() != self.k {
            return Err(Error::Mismatch(format!(
                "gate has k={}, builder has k={}",
                func.k(),
                self.k
            )));
        }
        if func.n() as usize != args.len() {
            return Err(Error::Mismatch(format!(
                "{} args for an arity-{} table",
                args.len(),
                func.n()
            )));
        }
        for &arg in &args {
            if !ref_in_range(arg, self.inputs.len(), self.gates.len()) {
                return Err(Error::InvalidCircuit(
                    "argument references a missing node".into(),
                ));
            }
        }
        self.gates.push(Gate {
            id: format!("g{}", self.gates.len()),
            op,
            args,
        });
        Ok(NodeRef::Gate(self.gates.len() - 1))
    }

    /// Adds a weight-0 gate; the table must be monotone.
    pub fn add_monotone(&mut self, func: KFunction, args: Vec<NodeRef>) -> Result<NodeRef> {
        if !func.is_monotone() {
            return Err(Error::InvalidParameter(
                "weight-0 gates require a monotone table".into(),
            ));
        }
        self.add_gate(GateOp::Monotone(func), args)
    }

    /// Adds a weight-1 ω-gate.
    pub fn add_omega(&mut self, omega: &NamedFunction, args: Vec<NodeRef>) -> Result<NodeRef> {
        if omega.func().is_monotone() {
            return Err(Error::InvalidParameter("ω must be non-monotone".into()));
        }
        self.add_gate(
            GateOp::Omega {
                name: omega.name().to_string(),
                func: omega.func().clone(),
            },
            args,
        )
    }

    /// Splices a whole circuit into this one: `input_map[i]` supplies the
    /// node standing in for the sub-circuit's i-th input. Returns the
    /// references corresponding to the sub-circuit's outputs.
    pub fn import(&mut self, sub: &Circuit, input_map: &[NodeRef]) -> Result<Vec<NodeRef>> {
        if sub.k() != self.k {
            return Err(Error::Mismatch(format!(
                "imported circuit has k={}, builder has k={}",
                sub.k(),
                self.k
            )));
        }
        if input_map.len() != sub.inputs().len() {
            return Err(Error::Mismatch(format!(
                "input map covers {} of {} inputs",
                input_map.len(),
                sub.inputs().len()
            )));
        }
        for &r in input_map {
            if !ref_in_range(r, self.inputs.len(), self.gates.len()) {
                return Err(Error::InvalidCircuit(
                    "input map references a missing node".into(),
                ));
            }
        }
        let mut imported = Vec::with_capacity(sub.gates().len());
        for gate in sub.gates() {
            let args = gate
                .args()
                .iter()
                .map(|&r| match r {
                    NodeRef::Input(i) => input_map[i],
                    NodeRef::Gate(g) => imported[g],
                })
                .collect();
            let r = self.add_gate(gate.op().clone(), args)?;
            imported.push(r);
        }
        Ok(sub
            .outputs()
            .iter()
            .map(|&r| match r {
                NodeRef::Input(i) => input_map[i],
                NodeRef::Gate(g) => imported[g],
            })
            .collect())
    }

    pub fn finish(self, outputs: Vec<NodeRef>) -> Result<Circuit> {
        Circuit::from_parts(self.k, self.inputs, self.gates, outputs)
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFileDto {
    k: u32,
    inputs: Vec<String>,
    basis: Vec<OmegaDto>,
    nodes: Vec<NodeDto>,
    outputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeDto {
    id: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    table: Option<Vec<KValue>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    omega: Option<String>,
    args: Vec<String>,
}
