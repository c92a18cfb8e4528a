//! Command-line front end: JSON algebra documents in, tabular and
//! machine-readable reports out.
//!
//! Exit codes: 0 success, 2 invalid input, 3 mathematical precondition
//! failure, 4 internal certification failure.

use crate::ainfty::{
    check_cinfty, check_morphism, check_stasheff, compose_morphisms, invert_iso, transfer_dga, transfer_minimal_model, AInfinity,
    AinfError, Morphism, Report as CheckReport, TransferOptions,
};
use crate::barcobar::{bar_construction, bar_homology, BarError};
use crate::complexes::{cochain_algebra, simplicial_chain_coalgebra, ChainComplex, ComplexError, DgAlgebra, DgCoalgebra, SimplicialComplex};
use crate::exactlin::{Field, LinError, Matrix, Scalar, Vector};
use crate::graded::{GradedModule, MultiOp, Tensor};
use crate::hochschild::{harrison, hochschild_cohomology, symmetrize_to_cinfty, HochError, Hochschild, TwistingElement};
use crate::models;
use crate::rht::{classify_single_arity, formality, rational_homotopy, Criterion, Evidence, Realization, RhtError};
use crate::twisting::{check_brown, twisted_tensor, Coalgebra, DgModule, TwistError, TwistingCochain};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

/// Input algebra: a dg algebra, an A∞ algebra, or the cochains of a simplicial complex.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    /// "Q" or "F<p>" for a prime p.
    pub field: String,
    /// (name, cohomological degree).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<(String, i64)>,
    /// Name of the unit; detected from the products when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// (source, target, coefficient): d(source) ∋ coefficient·target.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<(String, String, String)>,
    /// (left, right, result, coefficient).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<(String, String, String, String)>,
    /// Cohomology above this degree is discarded from the minimal model
    /// (for models truncated at a finite degree).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplicial: Option<SimplicialBlock>,
    /// Higher operations m_n, n ≥ 3.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ainfty: Vec<AinftyEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisting: Option<TwistingBlock>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SimplicialBlock {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AinftyEntry {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub output: String,
    pub coefficient: String,
}

/// Twisting cochain φ: K → A into the document's dg algebra A.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TwistingBlock {
    pub coalgebra: CoalgebraBlock,
    /// (coalgebra element, algebra element, coefficient).
    pub map: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraBlock {
    pub basis: Vec<(String, i64)>,
    #[serde(default)]
    pub differential: Vec<(String, String, String)>,
    /// (source, left, right, coefficient): Δ(source) ∋ coefficient·left⊗right.
    pub coproduct: Vec<(String, String, String, String)>,
}

/// Algebra map on cohomology for `realize`: (source class, target class, coefficient).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub entries: Vec<(String, String, String)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certification failed: {0}")]
    Certification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Certification(_) => 4,
        }
    }
}

impl From<LinError> for CliError {
    fn from(e: LinError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Simplicial(_) | ComplexError::Dimension(_) => CliError::Schema(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<AinfError> for CliError {
    fn from(e: AinfError) -> Self {
        match e {
            AinfError::NotCycle(..) | AinfError::Unsolvable(..) => CliError::Certification(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<BarError> for CliError {
    fn from(e: BarError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<HochError> for CliError {
    fn from(e: HochError) -> Self {
        match e {
            HochError::Internal(_) => CliError::Certification(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TwistError> for CliError {
    fn from(e: TwistError) -> Self {
        match e {
            TwistError::Unsolvable(_) => CliError::Certification(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<RhtError> for CliError {
    fn from(e: RhtError) -> Self {
        match e {
            RhtError::NotIdeal(_) => CliError::Certification(e.to_string()),
            RhtError::Bar(b) => b.into(),
            RhtError::Hoch(h) => h.into(),
            RhtError::Ainf(a) => a.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(Field::Q);
    }
    let p = t.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()).ok_or_else(|| CliError::Schema(format!("unknown field {s:?}; expected \"Q\" or \"F<p>\"")))?;
    Ok(Field::prime(p)?)
}

pub fn parse_document<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
}

fn read_document<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

/// A parsed input algebra.
#[derive(Clone, Debug)]
pub enum Algebra {
    Dga(DgAlgebra),
    Ainf(AInfinity),
}

fn resolve(m: &GradedModule, name: &str, what: &str) -> Result<usize, CliError> {
    m.index_of(name).ok_or_else(|| CliError::Schema(format!("unknown {what} {name:?}")))
}

fn build_module(field: Field, basis: &[(String, i64)]) -> Result<GradedModule, CliError> {
    GradedModule::new(field, basis.iter().cloned()).map_err(|e| CliError::Schema(e.to_string()))
}

fn build_differential(m: &GradedModule, field: Field, entries: &[(String, String, String)]) -> Result<Matrix, CliError> {
    let mut d = Matrix::zero(m.dim(), m.dim());
    for (s, t, c) in entries {
        let (s, t) = (resolve(m, s, "basis element")?, resolve(m, t, "basis element")?);
        d.add_entry(t, s, &field.parse(c)?);
    }
    Ok(d)
}

fn detect_unit(m: &GradedModule, mul: &MultiOp) -> Option<usize> {
    m.in_degree(0).iter().copied().find(|&e| {
        (0..m.dim()).all(|i| mul.eval_owned(&[e, i]) == Vector::unit(i) && mul.eval_owned(&[i, e]) == Vector::unit(i))
    })
}

/// Builds the algebra a document describes, with `field` overriding the document's field.
pub fn load_algebra(doc: &AlgebraDocument, field: Option<Field>) -> Result<Algebra, CliError> {
    let field = match field {
        Some(f) => f,
        None => parse_field(&doc.field)?,
    };
    if let Some(s) = &doc.simplicial {
        if !doc.basis.is_empty() || !doc.differential.is_empty() || !doc.products.is_empty() || !doc.ainfty.is_empty() {
            return Err(CliError::Schema("a simplicial document cannot also list basis, differential, products or ainfty".into()));
        }
        let mut facets = Vec::new();
        for f in &s.facets {
            let idx: Result<Vec<usize>, CliError> = f
                .iter()
                .map(|v| s.vertices.iter().position(|x| x == v).ok_or_else(|| CliError::Schema(format!("unknown vertex {v:?}"))))
                .collect();
            facets.push(idx?);
        }
        let sc = SimplicialComplex::from_facets(s.vertices.clone(), &facets)?;
        return Ok(Algebra::Dga(cochain_algebra(&simplicial_chain_coalgebra(&sc, field))));
    }
    let m = build_module(field, &doc.basis)?;
    let d = build_differential(&m, field, &doc.differential)?;
    let mut mul = MultiOp::new(2, 0);
    for (l, r, t, c) in &doc.products {
        let w = vec![resolve(&m, l, "basis element")?, resolve(&m, r, "basis element")?];
        mul.add(w, &Vector::single(resolve(&m, t, "basis element")?, field.parse(c)?));
    }
    let unit = match &doc.unit {
        Some(u) => Some(resolve(&m, u, "unit")?),
        None => detect_unit(&m, &mul),
    };
    if doc.ainfty.is_empty() {
        let c = ChainComplex::new(m.clone(), d)?;
        return Ok(Algebra::Dga(DgAlgebra::new(c, mul, unit.map(Vector::unit))?));
    }
    let top = doc.ainfty.iter().map(|e| e.arity).max().unwrap_or(2).max(2);
    let mut a = AInfinity::new(m.clone(), top);
    a.unit = unit;
    for j in 0..m.dim() {
        if !d.column(j).is_zero() {
            a.ops[1].set(vec![j], d.column(j).clone());
        }
    }
    a.ops[2] = mul;
    for e in &doc.ainfty {
        if e.arity < 3 || e.inputs.len() != e.arity {
            return Err(CliError::Schema(format!("ainfty entry {:?} needs arity ≥ 3 and that many inputs", e.inputs)));
        }
        let w: Result<Vec<usize>, CliError> = e.inputs.iter().map(|x| resolve(&m, x, "basis element")).collect();
        a.ops[e.arity].add(w?, &Vector::single(resolve(&m, &e.output, "basis element")?, field.parse(&e.coefficient)?));
    }
    for (n, op) in a.ops.iter().enumerate().skip(1) {
        op.check_degree(&m, &m).map_err(|e| CliError::Precondition(format!("m_{n}: {e}")))?;
    }
    Ok(Algebra::Ainf(a))
}

/// Scalar printed as an element of `f` (integer constants may still be rational).
fn show(c: &Scalar, f: Field) -> String {
    (c * &f.one()).to_string()
}

fn terms(m: &GradedModule, v: &Vector) -> Vec<(String, String)> {
    v.iter().map(|(i, c)| (m.name(*i).to_string(), show(c, m.field))).collect()
}

/// Document form of a minimal structure: m_2 as products, m_{≥3} as the ainfty block.
pub fn structure_document(a: &AInfinity, top: Option<i64>) -> AlgebraDocument {
    let m = &a.module;
    let name = |i: &usize| m.name(*i).to_string();
    let f = a.field();
    let unit = a.unit.or_else(|| a.m(2).and_then(|mu| detect_unit(m, mu)));
    let mut doc = AlgebraDocument {
        field: a.field().name(),
        basis: m.gens().iter().map(|g| (g.name.clone(), g.degree)).collect(),
        unit: unit.map(|u| name(&u)),
        differential: vec![],
        products: vec![],
        top,
        simplicial: None,
        ainfty: vec![],
        twisting: None,
    };
    if let Some(m1) = a.m(1) {
        for (w, v) in &m1.table {
            for (i, c) in v.iter() {
                doc.differential.push((name(&w[0]), name(i), show(c, f)));
            }
        }
    }
    if let Some(m2) = a.m(2) {
        for (w, v) in &m2.table {
            for (i, c) in v.iter() {
                doc.products.push((name(&w[0]), name(&w[1]), name(i), show(c, f)));
            }
        }
    }
    for (n, op) in a.ops.iter().enumerate().skip(3) {
        for (w, v) in &op.table {
            for (i, c) in v.iter() {
                doc.ainfty.push(AinftyEntry { arity: n, inputs: w.iter().map(name).collect(), output: name(i), coefficient: show(c, f) });
            }
        }
    }
    doc
}

/// Outcome of one certification check.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub ok: bool,
    /// At most five sample violations.
    pub violations: Vec<String>,
}

impl Check {
    fn from_report(name: &str, r: &CheckReport) -> Check {
        Check { name: name.into(), checked: r.checked, ok: r.ok(), violations: r.violations.iter().take(5).cloned().collect() }
    }

    fn flag(name: &str, ok: bool, what: &str) -> Check {
        Check { name: name.into(), checked: 1, ok, violations: if ok { vec![] } else { vec![what.into()] } }
    }
}

/// One component value f_n(inputs) or m_n(inputs).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct OpEntry {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub value: Vec<(String, String)>,
}

fn op_entries(src: &GradedModule, tgt: &GradedModule, comps: &[MultiOp], from: usize) -> Vec<OpEntry> {
    let mut out = Vec::new();
    for (n, op) in comps.iter().enumerate().skip(from) {
        for (w, v) in &op.table {
            if !v.is_zero() {
                out.push(OpEntry { arity: n, inputs: w.iter().map(|i| src.name(*i).to_string()).collect(), value: terms(tgt, v) });
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MinmodelResult {
    pub structure: AlgebraDocument,
    /// Components f_n of the quasi-isomorphism from the minimal structure to the input.
    pub morphism: Vec<OpEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    pub rows: Vec<(i64, usize)>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FormalityResult {
    pub verdict: String,
    pub evidence: String,
    pub arity: Option<usize>,
    /// Coordinates of the obstruction class in the Harrison (or Hochschild) cohomology basis.
    pub class: Vec<String>,
    /// Orbits of Aut(H) on the classes of the single live arity, when decided.
    pub orbits: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HochRow {
    pub arity: usize,
    pub degree: i64,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub dim: usize,
    pub harrison: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HochResult {
    pub rows: Vec<HochRow>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RealizeResult {
    pub realized: bool,
    pub arity: Option<usize>,
    pub forced: Option<bool>,
    /// Unshifted defect at the obstructed arity.
    pub residual: Vec<OpEntry>,
    pub morphism: Vec<OpEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Minmodel(MinmodelResult),
    Barhom(RankTable),
    Pi(RankTable),
    Formality(FormalityResult),
    Hoch(HochResult),
    Realize(RealizeResult),
    Twist(RankTable),
}

/// Machine-readable report of one command.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub field: String,
    /// Truncations used and why they are safe.
    pub certificate: Vec<String>,
    pub checks: Vec<Check>,
    pub result: Outcome,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Human-readable form.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} over {}", self.command, self.field);
        for c in &self.certificate {
            let _ = writeln!(s, "truncation: {c}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "check {:<20} {:>8} instances  {}", c.name, c.checked, if c.ok { "ok" } else { "FAILED" });
            for v in &c.violations {
                let _ = writeln!(s, "    {v}");
            }
        }
        let fmt_terms = |t: &[(String, String)]| -> String {
            if t.is_empty() {
                return "0".into();
            }
            let mut out = String::new();
            for (k, (n, c)) in t.iter().enumerate() {
                let (neg, mag) = match c.strip_prefix('-') {
                    Some(m) => (true, m),
                    None => (false, c.as_str()),
                };
                out.push_str(match (k, neg) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => " + ",
                    (_, true) => " - ",
                });
                if mag != "1" {
                    out.push_str(mag);
                    out.push('·');
                }
                out.push_str(n);
            }
            out
        };
        let fmt_entries = |s: &mut String, label: &str, es: &[OpEntry]| {
            if es.is_empty() {
                let _ = writeln!(s, "  (none)");
            }
            for e in es {
                let _ = writeln!(s, "  {label}_{}({}) = {}", e.arity, e.inputs.join(", "), fmt_terms(&e.value));
            }
        };
        match &self.result {
            Outcome::Minmodel(r) => {
                let d = &r.structure;
                let _ = writeln!(s, "basis: {}", d.basis.iter().map(|(n, k)| format!("{n}[{k}]")).collect::<Vec<_>>().join(" "));
                let unit = d.unit.as_deref();
                let _ = writeln!(s, "m_2 on non-unit elements:");
                let products: Vec<_> = d.products.iter().filter(|(l, r2, _, _)| Some(l.as_str()) != unit && Some(r2.as_str()) != unit).collect();
                if products.is_empty() {
                    let _ = writeln!(s, "  (all zero)");
                }
                for (l, r2, t, c) in products {
                    let _ = writeln!(s, "  {l}·{r2} = {}", fmt_terms(&[(t.clone(), c.clone())]));
                }
                if !d.ainfty.is_empty() {
                    let _ = writeln!(s, "higher operations:");
                    for e in &d.ainfty {
                        let _ = writeln!(s, "  m_{}({}) ∋ {}", e.arity, e.inputs.join(", "), fmt_terms(&[(e.output.clone(), e.coefficient.clone())]));
                    }
                }
                let _ = writeln!(s, "morphism:");
                fmt_entries(&mut s, "f", &r.morphism);
            }
            Outcome::Barhom(t) | Outcome::Pi(t) | Outcome::Twist(t) => {
                let (col, rank) = match &self.result {
                    Outcome::Pi(_) => ("k", "rank π^k"),
                    _ => ("degree", "rank"),
                };
                let _ = writeln!(s, "{col:>6}  {rank}");
                for (d, r) in &t.rows {
                    let _ = writeln!(s, "{d:>6}  {r}");
                }
            }
            Outcome::Formality(f) => {
                let _ = writeln!(s, "verdict: {}", f.verdict);
                let _ = writeln!(s, "evidence: {}", f.evidence);
                if let Some(n) = f.arity {
                    let _ = writeln!(s, "arity: {n}");
                }
                if !f.class.is_empty() {
                    let _ = writeln!(s, "class: ({})", f.class.join(", "));
                }
                if let Some(o) = f.orbits {
                    let _ = writeln!(s, "orbits: {o}");
                }
            }
            Outcome::Hoch(h) => {
                let _ = writeln!(s, "{:>5} {:>6} {:>8} {:>8} {:>8} {:>5} {:>8}", "n", "k", "cochains", "cocycles", "bounds", "HH", "Harr");
                for r in &h.rows {
                    let harr = r.harrison.map_or("-".to_string(), |x| x.to_string());
                    let _ = writeln!(s, "{:>5} {:>6} {:>8} {:>8} {:>8} {:>5} {:>8}", r.arity, r.degree, r.cochains, r.cocycles, r.coboundaries, r.dim, harr);
                }
            }
            Outcome::Realize(r) => {
                if r.realized {
                    let _ = writeln!(s, "realized");
                    fmt_entries(&mut s, "g", &r.morphism);
                } else {
                    let _ = writeln!(s, "obstructed at arity {} ({})", r.arity.unwrap_or(0), if r.forced == Some(true) { "independent of choices" } else { "along the chosen path" });
                    let _ = writeln!(s, "residual:");
                    fmt_entries(&mut s, "r", &r.residual);
                }
            }
        }
        s
    }
}

#[derive(Parser, Debug)]
#[command(name = "ainf", version, about = "Exact minimal A∞/C∞ models and rational homotopy invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit only the machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the documents' field ("Q" or "F<p>").
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Discard cohomology above this degree (overrides the document's "top").
    #[arg(long, global = true)]
    pub top: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    pub input: PathBuf,
    /// Arity truncation; by default the degree bound certifies the arity.
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal A∞ (or C∞) model with its quasi-isomorphism and certification.
    Minmodel {
        #[command(flatten)]
        model: ModelArgs,
        /// Require a C∞ structure, symmetrizing the transferred one if necessary.
        #[arg(long)]
        cinfty: bool,
    },
    /// Bar homology of the minimal model in degrees below --max-degree.
    Barhom {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10)]
        max_degree: i64,
    },
    /// Ranks of rational homotopy π^k for k ≤ --max-degree.
    Pi {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: i64,
    },
    /// Formality verdict with its evidence.
    Formality {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Hochschild cohomology HH^{n,k} of the cohomology algebra for n ≤ --arity (default 3).
    Hoch {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        internal_degree: Option<i64>,
        /// Also compute Harrison cohomology.
        #[arg(long)]
        cinfty: bool,
    },
    /// Whether a cohomology algebra map extends to a C∞ morphism of minimal models.
    Realize {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Homology of the twisted tensor product K ⊗_φ A.
    Twist { input: PathBuf },
    /// Print a built-in example document.
    Example { name: String },
    /// Print the JSON schema of algebra documents.
    Schema,
}

/// Names accepted by `ainf example`.
pub const EXAMPLES: &[&str] = &["x", "y", "worked", "s3", "s5", "torus", "wedge", "hopf", "map-x-s5", "map-y-s5"];

fn algebra_document(a: &DgAlgebra) -> AlgebraDocument {
    let mut doc = structure_document(&AInfinity::from_dga(a), None);
    doc.unit = a.unit.as_ref().and_then(|u| u.first().map(|(i, _)| a.module().name(*i).to_string()));
    doc
}

/// Built-in documents, serialized as in the documents/ directory.
pub fn example(name: &str) -> Result<String, CliError> {
    let json = |v: &dyn erased::Ser| v.json();
    let text = match name {
        "x" => json(&algebra_document(&models::x_algebra())),
        "y" => {
            let mut d = algebra_document(&models::y_model());
            d.top = Some(models::Y_TOP - 1);
            json(&d)
        }
        "worked" => json(&structure_document(&models::worked_example(1, 0), None)),
        "s3" => json(&algebra_document(&models::sphere(3))),
        "s5" => json(&algebra_document(&models::sphere(5))),
        "torus" | "wedge" => {
            let sc = if name == "torus" { models::torus7() } else { models::wedge_s1_s1_s2() };
            let verts = sc.vertices.clone();
            let facets = maximal_faces(&sc).iter().map(|f| f.iter().map(|&v| verts[v].clone()).collect()).collect();
            json(&AlgebraDocument {
                field: "Q".into(),
                basis: vec![],
                unit: None,
                differential: vec![],
                products: vec![],
                top: None,
                simplicial: Some(SimplicialBlock { vertices: verts, facets }),
                ainfty: vec![],
                twisting: None,
            })
        }
        "hopf" => {
            let mut d = algebra_document(&models::exterior_s1());
            let k = models::s2_cells();
            d.twisting = Some(TwistingBlock { coalgebra: coalgebra_block(&k), map: vec![("e2".into(), "t".into(), "1".into())] });
            json(&d)
        }
        "map-x-s5" => json(&MapDocument { entries: vec![("e".into(), "e".into(), "1".into()), ("z".into(), "s".into(), "1".into())] }),
        "map-y-s5" => json(&MapDocument { entries: vec![("1".into(), "e".into(), "1".into()), ("h5_0".into(), "s".into(), "1".into())] }),
        _ => return Err(CliError::Schema(format!("unknown example {name:?}; available: {}", EXAMPLES.join(", ")))),
    };
    Ok(text)
}

mod erased {
    pub trait Ser {
        fn json(&self) -> String;
    }
    impl<T: serde::Serialize> Ser for T {
        fn json(&self) -> String {
            serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
        }
    }
}

fn maximal_faces(sc: &SimplicialComplex) -> Vec<Vec<usize>> {
    let is_face = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.contains(x));
    sc.simplices.iter().filter(|s| !sc.simplices.iter().any(|t| is_face(s, t))).cloned().collect()
}

fn coalgebra_block(k: &DgCoalgebra) -> CoalgebraBlock {
    let m = k.module();
    let name = |i: usize| m.name(i).to_string();
    let mut differential = vec![];
    for j in 0..m.dim() {
        for (i, c) in k.complex.d.column(j).iter() {
            differential.push((name(j), name(*i), c.to_string()));
        }
    }
    let mut coproduct = vec![];
    for (j, t) in k.comul.iter().enumerate() {
        for (w, c) in t.iter() {
            coproduct.push((name(j), name(w[0]), name(w[1]), c.to_string()));
        }
    }
    CoalgebraBlock { basis: m.gens().iter().map(|g| (g.name.clone(), g.degree)).collect(), differential, coproduct }
}

/// JSON schema of algebra documents.
pub const SCHEMA: &str = include_str!("../schema/algebra-document.schema.json");

pub fn schema() -> String {
    SCHEMA.to_string()
}

/// Minimal model of a document together with its certification.
struct Model {
    minimal: AInfinity,
    morphism: Option<Morphism>,
    certificate: Vec<String>,
    checks: Vec<Check>,
}

fn is_commutative(a: &Algebra) -> bool {
    match a {
        Algebra::Dga(d) => d.is_graded_commutative(),
        Algebra::Ainf(a) => check_cinfty(a).ok(),
    }
}

fn require(check: Check, err: impl Fn(String) -> CliError) -> Result<Check, CliError> {
    if check.ok {
        Ok(check)
    } else {
        Err(err(format!("{}: {}", check.name, check.violations.join("; "))))
    }
}

fn model(doc: &AlgebraDocument, field: Option<Field>, arity: Option<usize>, cinfty: bool, top: Option<i64>) -> Result<Model, CliError> {
    let alg = load_algebra(doc, field)?;
    if cinfty && !is_commutative(&alg) {
        return Err(CliError::Precondition("a C∞ model needs a graded commutative (or C∞) input".into()));
    }
    let mut checks = Vec::new();
    let mut certificate = Vec::new();
    let opts = TransferOptions { arity, ..Default::default() };
    let (mut minimal, mut morphism) = match &alg {
        Algebra::Ainf(a) if a.is_minimal() => {
            checks.push(require(Check::from_report("stasheff(input)", &check_stasheff(a)), CliError::Precondition)?);
            certificate.push(format!("input is minimal; operations through arity {}", a.truncation));
            (a.clone(), None)
        }
        _ => {
            let t = match &alg {
                Algebra::Dga(d) => transfer_dga(d, opts)?,
                Algebra::Ainf(a) => {
                    checks.push(require(Check::from_report("stasheff(input)", &check_stasheff(a)), CliError::Precondition)?);
                    transfer_minimal_model(a, opts)?
                }
            };
            certificate.push(t.certificate.clone());
            checks.push(require(Check::from_report("stasheff", &check_stasheff(&t.minimal)), CliError::Certification)?);
            checks.push(require(Check::from_report("morphism", &check_morphism(&t.morphism)), CliError::Certification)?);
            (t.minimal, Some(t.morphism))
        }
    };
    let shuffle = Check::from_report("shuffle", &check_cinfty(&minimal));
    if cinfty && !shuffle.ok {
        let m = TwistingElement::from_ainfinity(&minimal)?;
        let s = symmetrize_to_cinfty(&m)?.map_err(|n| CliError::Certification(format!("shuffle defect at arity {n} not removable")))?;
        let mut sym = s.element.to_ainfinity();
        sym.truncation = minimal.truncation;
        if let Some(f) = morphism.take() {
            let mut g = f;
            for step in s.steps.iter().rev() {
                let inv = invert_iso(&step.morphism)?;
                g = compose_morphisms(&inv, &g)?;
            }
            g.source = sym.clone();
            checks.push(require(Check::from_report("morphism(cinfty)", &check_morphism(&g)), CliError::Certification)?);
            morphism = Some(g);
        }
        certificate.push(format!("symmetrized by {} perturbation(s)", s.steps.len()));
        minimal = sym;
        checks.push(require(Check::from_report("stasheff(cinfty)", &check_stasheff(&minimal)), CliError::Certification)?);
        checks.push(require(Check::from_report("shuffle", &check_cinfty(&minimal)), CliError::Certification)?);
    } else {
        checks.push(shuffle);
    }
    let top = top.or(doc.top);
    if let Some(t) = top {
        if minimal.module.max_degree().is_some_and(|d| d > t) {
            certificate.push(format!("cohomology above degree {t} discarded"));
            minimal = minimal.below(t);
        }
    }
    Ok(Model { minimal, morphism, certificate, checks })
}

fn restricted_morphism(f: &Morphism, keep: &GradedModule) -> Vec<OpEntry> {
    let all = op_entries(&f.source.module, &f.target.module, &f.comps, 1);
    all.into_iter().filter(|e| e.inputs.iter().all(|n| keep.index_of(n).is_some())).collect()
}

fn rank_rows(r: &BTreeMap<i64, usize>, lo: i64, hi: i64) -> Vec<(i64, usize)> {
    (lo..=hi).map(|d| (d, r.get(&d).copied().unwrap_or(0))).collect()
}

fn field_name(doc_field: &str, field: Option<Field>) -> Result<String, CliError> {
    Ok(match field {
        Some(f) => f.name(),
        None => parse_field(doc_field)?.name(),
    })
}

/// Runs one command and returns its report, or the text of `example`/`schema`.
pub fn run(cli: &Cli) -> Result<Result<Report, String>, CliError> {
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    let top = cli.top;
    let report = |command: &str, doc: &AlgebraDocument, model: Model, result: Outcome| -> Result<Report, CliError> {
        Ok(Report { command: command.into(), field: field_name(&doc.field, field)?, certificate: model.certificate, checks: model.checks, result })
    };
    let out = match &cli.command {
        Command::Example { name } => return Ok(Err(example(name)?)),
        Command::Schema => return Ok(Err(schema())),
        Command::Minmodel { model: a, cinfty } => {
            let doc: AlgebraDocument = read_document(&a.input)?;
            let m = model(&doc, field, a.arity, *cinfty, top)?;
            let morphism = m.morphism.as_ref().map_or(vec![], |f| restricted_morphism(f, &m.minimal.module));
            let structure = structure_document(&m.minimal, None);
            report("minmodel", &doc, m, Outcome::Minmodel(MinmodelResult { structure, morphism }))?
        }
        Command::Barhom { model: a, max_degree } => {
            let doc: AlgebraDocument = read_document(&a.input)?;
            let mut m = model(&doc, field, a.arity, false, top)?;
            let bar = bar_construction(&m.minimal, *max_degree)?;
            m.checks.push(require(Check::flag("bar d²", bar.check_d_squared(), "d_B² ≠ 0"), CliError::Certification)?);
            let h = bar_homology(&m.minimal, *max_degree)?;
            m.certificate.push(format!("bar words of degree < {max_degree}"));
            let rows = rank_rows(&h.ranks, 0, max_degree - 1);
            report("barhom", &doc, m, Outcome::Barhom(RankTable { rows }))?
        }
        Command::Pi { model: a, max_degree } => {
            let doc: AlgebraDocument = read_document(&a.input)?;
            let mut m = model(&doc, field, a.arity, true, top)?;
            let r = rational_homotopy(&m.minimal, *max_degree)?;
            m.certificate.push(format!("indecomposables of bar degree ≤ {}", max_degree - 1));
            let rows = rank_rows(&r, 2, *max_degree);
            report("pi", &doc, m, Outcome::Pi(RankTable { rows }))?
        }
        Command::Formality { model: a } => {
            let doc: AlgebraDocument = read_document(&a.input)?;
            let m = model(&doc, field, a.arity, true, top)?;
            let f = formality(&m.minimal)?;
            let coords = |v: &Vector, n: usize| (0..n).map(|i| v.coeff(&i).to_string()).collect::<Vec<_>>();
            let mut res = FormalityResult { verdict: format!("{:?}", f.verdict).to_lowercase(), evidence: String::new(), arity: None, class: vec![], orbits: None };
            match &f.evidence {
                Evidence::Structural { criterion, arity } => {
                    res.evidence = match criterion {
                        Criterion::Window { n } => format!("degree window [{n}, {}]", 3 * n - 2),
                        Criterion::OddDegrees => "odd degrees only".into(),
                    };
                    res.arity = Some(*arity);
                }
                Evidence::HarrisonVanishing { arity } => {
                    res.evidence = "Harrison cohomology vanishes".into();
                    res.arity = Some(*arity);
                }
                Evidence::SingleArity { arity, class, trivializer } => {
                    let c = classify_single_arity(&m.minimal)?;
                    res.evidence = if trivializer.is_some() { "single live arity, class zero".into() } else { "single live arity, class nonzero".into() };
                    res.arity = Some(*arity);
                    res.class = coords(class, c.class_dim);
                    res.orbits = c.orbit_count;
                }
                Evidence::Trivialized { steps } => {
                    res.evidence = format!("trivialized in {} step(s)", steps.len());
                }
                Evidence::GreedyObstruction { arity, class } => {
                    res.evidence = "obstruction along the greedy path".into();
                    res.arity = Some(*arity);
                    res.class = class.iter().map(|(i, c)| format!("{i}:{c}")).collect();
                }
            }
            report("formality", &doc, m, Outcome::Formality(res))?
        }
        Command::Hoch { model: a, internal_degree, cinfty } => {
            let doc: AlgebraDocument = read_document(&a.input)?;
            let mut m = model(&doc, field, None, false, top)?;
            let h = Hochschild::from_ainfinity(&m.minimal)?;
            if *cinfty && !h.is_commutative() {
                return Err(CliError::Precondition("Harrison cohomology needs a graded commutative algebra".into()));
            }
            let n_max = a.arity.unwrap_or(3);
            let hm = &m.minimal.module;
            let nonunit: Vec<i64> = (0..hm.dim()).filter(|&i| Some(i) != m.minimal.unit).map(|i| hm.degree(i)).collect();
            let (lo, hi) = (hm.min_degree().unwrap_or(0), hm.max_degree().unwrap_or(0));
            let (dlo, dhi) = (nonunit.iter().copied().min().unwrap_or(0), nonunit.iter().copied().max().unwrap_or(0));
            let mut rows = Vec::new();
            for n in 0..=n_max {
                let ks: Vec<i64> = match internal_degree {
                    Some(k) => vec![*k],
                    None if n > 0 && nonunit.is_empty() => vec![],
                    None => (lo - n as i64 * dhi..=hi - n as i64 * dlo).collect(),
                };
                for k in ks {
                    let c = hochschild_cohomology(&h, n, k);
                    if c.cochain_dim == 0 {
                        continue;
                    }
                    let harr = if *cinfty && n >= 1 { Some(harrison(&h, n, k)?.dim) } else { None };
                    rows.push(HochRow { arity: n, degree: k, cochains: c.cochain_dim, cocycles: c.cocycle_dim, coboundaries: c.coboundary_dim, dim: c.dim, harrison: harr });
                }
            }
            m.certificate.push(format!("normalized cochains of arity ≤ {n_max}"));
            report("hoch", &doc, m, Outcome::Hoch(HochResult { rows }))?
        }
        Command::Realize { source, target, map, arity } => {
            let sdoc: AlgebraDocument = read_document(source)?;
            let tdoc: AlgebraDocument = read_document(target)?;
            let mdoc: MapDocument = read_document(map)?;
            let mut ms = model(&sdoc, field, *arity, true, top)?;
            let mt = model(&tdoc, field, *arity, true, top)?;
            let (sm, tm) = (&ms.minimal.module, &mt.minimal.module);
            let f = sm.field;
            let mut g = Matrix::zero(tm.dim(), sm.dim());
            for (s, t, c) in &mdoc.entries {
                g.add_entry(resolve(tm, t, "target class")?, resolve(sm, s, "source class")?, &f.parse(c)?);
            }
            let res = match realizability(&g, &ms.minimal, &mt.minimal)? {
                Realization::Realized { morphism } => {
                    ms.checks.push(require(Check::from_report("morphism", &check_morphism(&morphism)), CliError::Certification)?);
                    ms.checks.push(require(Check::from_report("shuffle(morphism)", &crate::ainfty::check_cinfty_morphism(&morphism)), CliError::Certification)?);
                    RealizeResult { realized: true, arity: None, forced: None, residual: vec![], morphism: op_entries(sm, tm, &morphism.comps, 1) }
                }
                Realization::Obstructed { arity, residual, forced } => RealizeResult {
                    realized: false,
                    arity: Some(arity),
                    forced: Some(forced),
                    residual: op_entries(sm, tm, &[MultiOp::new(0, 0), residual], 1).into_iter().map(|mut e| {
                        e.arity = arity;
                        e
                    }).collect(),
                    morphism: vec![],
                },
            };
            ms.certificate.extend(mt.certificate.iter().map(|c| format!("target: {c}")));
            ms.checks.extend(mt.checks.into_iter().map(|mut c| {
                c.name = format!("target {}", c.name);
                c
            }));
            report("realize", &sdoc, ms, Outcome::Realize(res))?
        }
        Command::Twist { input } => {
            let doc: AlgebraDocument = read_document(input)?;
            let (t, checks) = twist(&doc, field)?;
            let r = t.ranks();
            let (lo, hi) = (t.complex.module.min_degree().unwrap_or(0), t.complex.module.max_degree().unwrap_or(0));
            let m = Model { minimal: AInfinity::new(GradedModule::zero(Field::Q), 2), morphism: None, certificate: vec!["finite coalgebra: no truncation".into()], checks };
            report("twist", &doc, m, Outcome::Twist(RankTable { rows: rank_rows(&r, lo, hi) }))?
        }
    };
    Ok(Ok(out))
}

use crate::rht::realizability;

fn twist(doc: &AlgebraDocument, field: Option<Field>) -> Result<(crate::twisting::TwistedTensor, Vec<Check>), CliError> {
    let block = doc.twisting.as_ref().ok_or_else(|| CliError::Schema("twist needs a \"twisting\" block".into()))?;
    let a = match load_algebra(doc, field)? {
        Algebra::Dga(a) => a,
        Algebra::Ainf(_) => return Err(TwistError::NotDga.into()),
    };
    let f = a.field();
    let km = build_module(f, &block.coalgebra.basis)?;
    let d = build_differential(&km, f, &block.coalgebra.differential)?;
    let mut comul = vec![Tensor::new(); km.dim()];
    for (s, l, r, c) in &block.coalgebra.coproduct {
        let s = resolve(&km, s, "coalgebra element")?;
        comul[s].add_term(vec![resolve(&km, l, "coalgebra element")?, resolve(&km, r, "coalgebra element")?], &f.parse(c)?);
    }
    let k = DgCoalgebra::new(ChainComplex::new(km.clone(), d)?, comul)?;
    let k = Coalgebra::from_dg(&k)?;
    let mut map = Matrix::zero(a.module().dim(), km.dim());
    for (x, y, c) in &block.map {
        map.add_entry(resolve(a.module(), y, "algebra element")?, resolve(&km, x, "coalgebra element")?, &f.parse(c)?);
    }
    let phi = TwistingCochain::new(k, AInfinity::from_dga(&a), map)?;
    let brown = Check::from_report("brown", &check_brown(&phi)?);
    let brown = require(brown, CliError::Precondition)?;
    let t = twisted_tensor(&phi, &DgModule::regular(&a))?;
    Ok((t, vec![brown]))
}

/// Entry point for the binary: prints the report and returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(Ok(r)) => {
            print!("{}", if cli.json { r.to_json() } else { r.table() });
            0
        }
        Ok(Err(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
