//! Report records, JSON serialisation and the plain-text table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bundle::TransitionBundle;
use crate::cech::{CechClass, CoboundaryWitness, DegreeBox, Generator, H1Result};
use crate::ring::{Exponent, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    DiscrepancyFlagged,
    Failed,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::DiscrepancyFlagged => "discrepancy-flagged",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoxJson {
    pub l_lo: i64,
    pub l_hi: i64,
    pub fiber_max: u32,
}

impl From<&DegreeBox> for BoxJson {
    fn from(b: &DegreeBox) -> Self {
        BoxJson { l_lo: b.l_lo, l_hi: b.l_hi, fiber_max: b.fiber_max }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratorJson {
    /// 1-based.
    pub component: usize,
    pub exponents: BTreeMap<String, i64>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimJson {
    pub fiber_degree: u32,
    pub dim: usize,
}

/// One claim or one command result. Claim-only fields stay `null` or empty
/// for plain commands.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Record {
    pub claim_id: Option<String>,
    pub anchor: Option<String>,
    pub status: Option<Status>,
    pub space: String,
    pub bundle: String,
    #[serde(rename = "box")]
    pub degree_box: Option<BoxJson>,
    pub certification: Option<Value>,
    pub generators: Vec<GeneratorJson>,
    pub dims: Vec<DimJson>,
    pub witnesses: Vec<Value>,
    /// The stated set next to the computed one when they differ.
    pub stated: Vec<String>,
    pub computed: Vec<String>,
    pub notes: Vec<String>,
}

impl Record {
    pub fn new(space: impl Into<String>, bundle: impl Into<String>) -> Self {
        Record {
            claim_id: None,
            anchor: None,
            status: None,
            space: space.into(),
            bundle: bundle.into(),
            degree_box: None,
            certification: None,
            generators: vec![],
            dims: vec![],
            witnesses: vec![],
            stated: vec![],
            computed: vec![],
            notes: vec![],
        }
    }

    pub fn with_h1(mut self, bundle: &TransitionBundle, res: &H1Result) -> Self {
        let sig = bundle.space().u_signature();
        self.degree_box = Some((&res.degree_box).into());
        self.certification = Some(serde_json::to_value(&res.certification).expect("serialisable"));
        self.generators = res.generators.iter().map(|g| generator_json(sig, g)).collect();
        self.dims = res.dims.iter().map(|&(d, n)| DimJson { fiber_degree: d, dim: n }).collect();
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub fn exponent_map(sig: &Signature, e: &Exponent) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    m.insert(sig.base_name().to_string(), e.base);
    for (k, &d) in e.fibers.iter().enumerate() {
        m.insert(sig.fiber_name(k), d as i64);
    }
    m
}

pub fn generator_json(sig: &Signature, g: &Generator) -> GeneratorJson {
    GeneratorJson { component: g.component + 1, exponents: exponent_map(sig, &g.exponent), coeff: g.coeff.to_string() }
}

/// `component k: monomial`, 1-based, for human-readable sets.
pub fn key_label(sig: &Signature, component: usize, e: &Exponent) -> String {
    let p = crate::ring::LaurentPoly::monomial(sig, e.clone(), crate::ring::rat(1));
    format!("[{}] {p}", component + 1)
}

pub fn witness_json(bundle: &TransitionBundle, class: &CechClass, w: &CoboundaryWitness) -> Value {
    let ok = w.verify(bundle, class).unwrap_or(false);
    json!({
        "class": class.to_string(),
        "alpha": w.alpha.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "beta": w.beta.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "revalidated": ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub verified: usize,
    pub discrepancy_flagged: usize,
    pub failed: usize,
}

/// Claim records sorted by id, with a SHA-256 of the canonical body.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn new(mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        SuiteReport { records }
    }

    pub fn summary(&self) -> Summary {
        let count = |s| self.records.iter().filter(|r| r.status == Some(s)).count();
        Summary {
            verified: count(Status::Verified),
            discrepancy_flagged: count(Status::DiscrepancyFlagged),
            failed: count(Status::Failed),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary().failed > 0 {
            1
        } else {
            0
        }
    }

    fn body(&self) -> Value {
        json!({ "claims": self.records, "summary": self.summary() })
    }

    pub fn body_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.body()).expect("serialisable");
        Sha256::digest(&bytes).iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn to_json(&self) -> String {
        let mut body = self.body();
        body["bodySha256"] = Value::String(self.body_hash());
        serde_json::to_string_pretty(&body).expect("serialisable")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let w = self.records.iter().filter_map(|r| r.claim_id.as_ref()).map(String::len).max().unwrap_or(8);
        for r in &self.records {
            let cert = r.certification.as_ref().and_then(|c| c["kind"].as_str()).unwrap_or("-");
            let _ = writeln!(
                out,
                "{:<w$}  {:<19}  {:<12}  {}",
                r.claim_id.as_deref().unwrap_or("-"),
                r.status.map(Status::label).unwrap_or("-"),
                cert,
                r.notes.first().map(String::as_str).unwrap_or(""),
            );
        }
        let s = self.summary();
        let _ = writeln!(out, "\n{} verified, {} discrepancy-flagged, {} failed", s.verified, s.discrepancy_flagged, s.failed);
        out
    }
}

/// Human table for a single h1-style record.
pub fn record_table(r: &Record) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space         {}", r.space);
    let _ = writeln!(out, "bundle        {}", r.bundle);
    if let Some(b) = &r.degree_box {
        let _ = writeln!(out, "box           l in [{}, {}], fiber exponents <= {}", b.l_lo, b.l_hi, b.fiber_max);
    }
    if let Some(c) = &r.certification {
        let _ = writeln!(out, "certification {}", certification_text(c));
    }
    if !r.dims.is_empty() {
        let _ = writeln!(out, "\nfiber degree  dim");
        for d in &r.dims {
            let _ = writeln!(out, "{:>12}  {}", d.fiber_degree, d.dim);
        }
    }
    if !r.generators.is_empty() {
        let _ = writeln!(out, "\ncomponent  generator");
        for g in &r.generators {
            // base variable first
            let mut vars: Vec<(&String, &i64)> = g.exponents.iter().collect();
            vars.sort_by_key(|(v, _)| !matches!(v.as_str(), "z" | "xi"));
            let mono: Vec<String> = vars
                .into_iter()
                .filter(|(_, &e)| e != 0)
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            let _ = writeln!(out, "{:>9}  {}", g.component, if g.coeff == "1" { mono } else { format!("{}*{mono}", g.coeff) });
        }
    }
    for w in &r.witnesses {
        let _ = writeln!(out, "\nwitness {}", serde_json::to_string(w).expect("serialisable"));
    }
    for n in &r.notes {
        let _ = writeln!(out, "{n}");
    }
    out
}

fn certification_text(c: &Value) -> String {
    match c["kind"].as_str() {
        Some("StableInBox") => format!(
            "StableInBox (xi <= {}, v <= {}, {} rounds)",
            c["vBox"]["xiMax"], c["vBox"]["vMax"], c["rounds"]
        ),
        Some(k) => k.to_string(),
        None => c.to_string(),
    }
}
