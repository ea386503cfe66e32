//! Report types shared by the subcommands. Text output is stable
//! line-oriented `key: value`; `--json` emits the same fields as a
//! canonical JSON object (keys in declaration order).

use serde::Serialize;

use kinv::chains::Chain;

pub fn chain_points(chain: &Chain) -> Vec<Vec<u8>> {
    chain.points().iter().map(|p| p.coords().to_vec()).collect()
}

pub fn chain_text(chain: &Chain) -> String {
    format!("{chain}")
}

fn opt_line(value: &Option<u32>) -> String {
    match value {
        Some(v) => v.to_string(),
        None => "none".to_string(),
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub k: u32,
    pub n: u32,
    pub m: usize,
    pub basis: String,
    #[serde(rename = "d_B")]
    pub d_b: u32,
    #[serde(rename = "u_B")]
    pub u_b: u32,
    #[serde(rename = "d_F")]
    pub d_f: u32,
    pub u: Vec<u32>,
    pub lower: u32,
    pub upper: u32,
    pub exact: Option<u32>,
    pub witness_d: Vec<Vec<u8>>,
    pub witness_u: Vec<Vec<Vec<u8>>>,
    #[serde(skip)]
    pub witness_d_text: String,
    #[serde(skip)]
    pub witness_u_text: Vec<String>,
}

impl AnalyzeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("k: {}\n", self.k));
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("m: {}\n", self.m));
        out.push_str(&format!("basis: {}\n", self.basis));
        out.push_str(&format!("d_B: {}\n", self.d_b));
        out.push_str(&format!("u_B: {}\n", self.u_b));
        out.push_str(&format!("d_F: {}\n", self.d_f));
        let u: Vec<String> = self.u.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("u: {}\n", u.join(" ")));
        out.push_str(&format!("lower: {}\n", self.lower));
        out.push_str(&format!("upper: {}\n", self.upper));
        out.push_str(&format!("exact: {}\n", opt_line(&self.exact)));
        out.push_str(&format!("witness_d: {}\n", self.witness_d_text));
        for (j, w) in self.witness_u_text.iter().enumerate() {
            out.push_str(&format!("witness_u[{}]: {}\n", j + 1, w));
        }
        out
    }
}

#[derive(Serialize)]
pub struct SynthesizeReport {
    pub k: u32,
    pub n: u32,
    pub m: usize,
    pub basis: String,
    pub omega: String,
    #[serde(rename = "d_F")]
    pub d_f: u32,
    pub u_omega: u32,
    pub weight: usize,
    pub bound: u32,
    pub verified: bool,
    pub wrote: String,
}

impl SynthesizeReport {
    pub fn text(&self) -> String {
        format!(
            "k: {}\nn: {}\nm: {}\nbasis: {}\nomega: {}\nd_F: {}\nu_omega: {}\nweight: {}\nbound: {}\nverified: {}\nwrote: {}\n",
            self.k,
            self.n,
            self.m,
            self.basis,
            self.omega,
            self.d_f,
            self.u_omega,
            self.weight,
            self.bound,
            self.verified,
            self.wrote
        )
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub k: u32,
    pub n: u32,
    pub m: usize,
    pub basis: String,
    pub valid: bool,
    pub violations: Vec<String>,
    pub realizes: bool,
    pub weight: usize,
    #[serde(rename = "d_F")]
    pub d_f: Option<u32>,
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    pub exact: Option<u32>,
    pub optimal: Option<bool>,
    pub weight_bound_ok: Option<bool>,
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("k: {}\n", self.k));
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("m: {}\n", self.m));
        out.push_str(&format!("basis: {}\n", self.basis));
        out.push_str(&format!("valid: {}\n", self.valid));
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out.push_str(&format!("realizes: {}\n", self.realizes));
        out.push_str(&format!("weight: {}\n", self.weight));
        if let Some(d) = self.d_f {
            out.push_str(&format!("d_F: {d}\n"));
        }
        if let Some(l) = self.lower {
            out.push_str(&format!("lower: {l}\n"));
        }
        if let Some(u) = self.upper {
            out.push_str(&format!("upper: {u}\n"));
        }
        out.push_str(&format!("exact: {}\n", opt_line(&self.exact)));
        if let Some(o) = self.optimal {
            out.push_str(&format!("optimal: {o}\n"));
        }
        if let Some(ok) = self.weight_bound_ok {
            out.push_str(&format!("weight_bound_ok: {ok}\n"));
        }
        out
    }
}

#[derive(Serialize)]
pub struct ShannonReport {
    pub k: u32,
    pub n: u64,
    pub m: Option<u64>,
    pub basis: String,
    pub value: u64,
    pub max_d_expected: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ShannonScan>,
}

#[derive(Serialize)]
pub struct ShannonScan {
    pub mode: String,
    pub instances: u64,
    pub max_d: u32,
    pub histogram: Vec<(u32, u64)>,
    /// first scanned system attaining max_d, one table per member
    pub extremal: Vec<Vec<u8>>,
}

impl ShannonReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("k: {}\n", self.k));
        out.push_str(&format!("n: {}\n", self.n));
        if let Some(m) = self.m {
            out.push_str(&format!("m: {m}\n"));
        }
        out.push_str(&format!("basis: {}\n", self.basis));
        out.push_str(&format!("value: {}\n", self.value));
        out.push_str(&format!("max_d_expected: {}\n", self.max_d_expected));
        if let Some(scan) = &self.scan {
            out.push_str(&format!("scan: {}\n", scan.mode));
            out.push_str(&format!("scan_instances: {}\n", scan.instances));
            out.push_str(&format!("scan_max_d: {}\n", scan.max_d));
            let hist: Vec<String> = scan
                .histogram
                .iter()
                .map(|(d, c)| format!("{d}={c}"))
                .collect();
            out.push_str(&format!("histogram: {}\n", hist.join(" ")));
            let tables: Vec<String> = scan
                .extremal
                .iter()
                .map(|t| {
                    let vals: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                    format!("[{}]", vals.join(","))
                })
                .collect();
            out.push_str(&format!("extremal: {}\n", tables.join(" ")));
        }
        out
    }
}

pub fn emit<T: Serialize>(report: &T, text: String, json: bool) {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("serializable");
        s.push('\n');
        print!("{s}");
    } else {
        print!("{text}");
    }
}
