//! Command-line front end.
//!
//! Exit codes: 0 when the question was decided, 2 for invalid input, 3 when
//! the domain or value lies outside what the classifier covers. JSON reports
//! are objects with keys in lexicographic order.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::automorphisms::{
    aut_group, compactness, AutError, AutFamily, CompactnessWitness, FunctionalCase, ShearAut,
};
use crate::domain::{DomainDesc, DomainError, FullType, NonHyperbolicReason};
use crate::exact_arith::{format_rat, parse_rat, quad_normalize, ArithError, QuadExt, Rat};
use crate::normal_form::{
    normal_form, strip_type, DiscFactor, Fiber, MonomialMap, NormalForm, NormalFormError,
    NormalFormTag, StripType,
};
use crate::pell::{pell_fundamental, pell_generator, pell_iterate, AutMatrix, PellError};
use crate::proper_maps::{
    proper_annuli, proper_full, proper_pointed, Certificate, ProperError, ProperMapAnswer,
};
use crate::schema::{parse_domain_file, quad_to_json, DomainFile, SchemaError};
use crate::verdicts::{serre_verdict, stehle_eval, stehle_witness_for, VerdictError};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_OUT_OF_SCOPE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "reinhardt",
    version,
    about = "Classify non-hyperbolic pseudoconvex Reinhardt domains in C^2"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hyperbolicity, full type, line content and normal form.
    Classify { file: PathBuf },
    /// Membership in the Serre class.
    Serre { file: PathBuf },
    /// Automorphism group families and compactness.
    Aut {
        file: PathBuf,
        /// Include a non-compactness witness with its iterate growth.
        #[arg(long)]
        witness: bool,
    },
    /// Normal form and the monomial map reaching it.
    NormalForm { file: PathBuf },
    /// Solutions of x^2 - D y^2 = 1.
    Pell {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Pell automorphism matrix of D*_alpha for alpha = p + sqrt(q).
    PellAut {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Proper holomorphic maps between the normal forms of two strips.
    Proper {
        src: PathBuf,
        dst: PathBuf,
        /// Box for the brute-force cross-check.
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
    /// Evaluate the exhaustion function at a log-coordinate point.
    Stehle {
        file: PathBuf,
        /// Point `t,s` with t = log|z1|, s = log|z2|.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Debug)]
struct Failure {
    exit_code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        exit_code: EXIT_INVALID,
        message: message.into(),
    }
}

fn out_of_scope(message: impl Into<String>) -> Failure {
    Failure {
        exit_code: EXIT_OUT_OF_SCOPE,
        message: message.into(),
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        invalid(e.to_string())
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::RadicandTooLarge | ArithError::MaxTermsExceeded { .. } => {
                out_of_scope(e.to_string())
            }
            _ => invalid(e.to_string()),
        }
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::Invalid(_) => invalid(e.to_string()),
            DomainError::Arith(a) => a.into(),
            _ => out_of_scope(e.to_string()),
        }
    }
}

impl From<NormalFormError> for Failure {
    fn from(e: NormalFormError) -> Self {
        match e {
            NormalFormError::Domain(d) => d.into(),
            _ => out_of_scope(e.to_string()),
        }
    }
}

impl From<PellError> for Failure {
    fn from(e: PellError) -> Self {
        match e {
            PellError::SquareInput(_) | PellError::RationalSqrt | PellError::NonPositiveQ => {
                invalid(e.to_string())
            }
            PellError::Arith(a) => a.into(),
            _ => out_of_scope(e.to_string()),
        }
    }
}

impl From<AutError> for Failure {
    fn from(e: AutError) -> Self {
        match e {
            AutError::Domain(d) => d.into(),
            AutError::NormalForm(n) => n.into(),
            AutError::Pell(p) => p.into(),
            _ => out_of_scope(e.to_string()),
        }
    }
}

impl From<VerdictError> for Failure {
    fn from(e: VerdictError) -> Self {
        match e {
            VerdictError::Domain(d) => d.into(),
            VerdictError::NormalForm(n) => n.into(),
            VerdictError::Pell(p) => p.into(),
            VerdictError::Aut(a) => a.into(),
            VerdictError::OutsideDomain { .. } => invalid(e.to_string()),
            VerdictError::NoWitness => out_of_scope(e.to_string()),
        }
    }
}

impl From<ProperError> for Failure {
    fn from(e: ProperError) -> Self {
        match e {
            ProperError::Arith(a) => a.into(),
            _ => invalid(e.to_string()),
        }
    }
}

/// A command's result: JSON payload, text lines, and exit code.
struct Report {
    payload: Map<String, Value>,
    text: Vec<String>,
    diagnostics: Vec<String>,
    exit_code: i32,
}

impl Report {
    fn new() -> Self {
        Report {
            payload: Map::new(),
            text: vec![],
            diagnostics: vec![],
            exit_code: EXIT_DECIDED,
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.payload.insert(key.to_string(), value);
    }

    fn line(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }
}

fn big(value: &BigInt) -> Value {
    match value.to_i64() {
        Some(v) => json!(v),
        None => json!(value.to_string()),
    }
}

fn quad(value: &QuadExt) -> Value {
    serde_json::to_value(quad_to_json(value)).expect("plain struct")
}

fn matrix(m: &AutMatrix) -> Value {
    json!({"k1": big(&m.k1), "k2": big(&m.k2), "l1": big(&m.l1), "l2": big(&m.l2)})
}

fn map_value(m: &MonomialMap) -> Value {
    json!({"matrix": matrix(&m.matrix), "logModulus1": quad(&m.log_modulus1), "logModulus2": quad(&m.log_modulus2)})
}

fn shear_value(s: &ShearAut) -> Value {
    json!({"logA": quad(&s.log_a), "logB": quad(&s.log_b), "k": big(&s.k), "epsilon": s.epsilon})
}

fn tag_value(tag: &NormalFormTag) -> Value {
    let mut out = Map::new();
    out.insert("form".into(), json!(tag.name()));
    out.insert("text".into(), json!(tag.to_string()));
    match tag {
        NormalFormTag::FormA(b) | NormalFormTag::FormB(b) => {
            out.insert("beta".into(), quad(b));
        }
        NormalFormTag::FormC { beta, log_r } => {
            out.insert("beta".into(), quad(beta));
            out.insert("logR".into(), quad(log_r));
        }
        NormalFormTag::ProductD { factor, fiber } => {
            let (name, log_r) = match factor {
                DiscFactor::Disc => ("Disc", None),
                DiscFactor::PuncturedDisc => ("PuncturedDisc", None),
                DiscFactor::Annulus(l) => ("Annulus", Some(quad(l))),
            };
            out.insert("factor".into(), json!(name));
            if let Some(l) = log_r {
                out.insert("logR".into(), l);
            }
            out.insert(
                "fiber".into(),
                json!(if *fiber == Fiber::C { "C" } else { "CStar" }),
            );
        }
        NormalFormTag::FormE { p, q } | NormalFormTag::FormF { p, q } => {
            out.insert("p".into(), big(p));
            out.insert("q".into(), big(q));
        }
        NormalFormTag::Full(kind) => {
            out.insert("fullType".into(), json!(kind.name()));
        }
    }
    Value::Object(out)
}

fn normal_form_value(nf: &NormalForm) -> Value {
    json!({
        "tag": tag_value(&nf.tag),
        "witness": map_value(&nf.witness),
        "stripForm": nf.strip_form.as_ref().map(tag_value),
    })
}

fn read_domain(path: &PathBuf) -> Result<DomainDesc, Failure> {
    let bytes = std::fs::read(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    parse_domain_file(&bytes).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn classify(file: &PathBuf) -> Result<Report, Failure> {
    let desc = read_domain(file)?;
    let mut r = Report::new();
    let hyperbolicity = desc.hyperbolicity();
    r.set("hyperbolic", json!(hyperbolicity.is_hyperbolic()));
    if let crate::domain::Hyperbolicity::NonHyperbolic(reasons) = &hyperbolicity {
        let reasons: Vec<Value> = reasons
            .iter()
            .map(|reason| match reason {
                NonHyperbolicReason::Line { direction } => {
                    json!({"line": [quad(&direction.0), quad(&direction.1)]})
                }
                NonHyperbolicReason::Slice { axis } => json!({"axisSlice": axis}),
            })
            .collect();
        r.set("reasons", Value::Array(reasons));
    }
    if hyperbolicity.is_hyperbolic() {
        r.line("Hyperbolic");
        r.diagnostics
            .push("serre, aut and normal-form are out of scope for hyperbolic domains".into());
        r.exit_code = EXIT_OUT_OF_SCOPE;
        return Ok(r);
    }
    r.line("Non-hyperbolic");
    let full = desc.full_type();
    r.set("fullType", json!(full.name()));
    r.line(format!("full type: {}", full.name()));
    let line = desc.contains_line();
    r.set(
        "line",
        line.as_ref()
            .map_or(Value::Null, |(dt, ds)| json!([quad(dt), quad(ds)])),
    );
    if full == FullType::NotFull {
        match &line {
            Some((dt, ds)) => {
                r.line(format!("contains the line direction ({dt}, {ds})"));
                let kind = strip_type(&desc)?;
                r.set(
                    "stripType",
                    json!(if kind == StripType::Rational {
                        "Rational"
                    } else {
                        "Irrational"
                    }),
                );
                r.line(format!("strip type: {kind:?}"));
            }
            None => r.line("contains no line"),
        }
    }
    if full != FullType::NotFull || line.is_some() {
        let nf = normal_form(&desc)?;
        r.line(format!("normal form: {}", nf.tag));
        r.set("normalForm", tag_value(&nf.tag));
    }
    Ok(r)
}

fn serre(file: &PathBuf) -> Result<Report, Failure> {
    let desc = read_domain(file)?;
    let v = serre_verdict(&desc)?;
    let mut r = Report::new();
    r.set("inS", v.in_s.map_or(Value::Null, Value::Bool));
    r.set("branch", json!(v.branch.name()));
    r.set("witness", v.witness.as_ref().map_or(Value::Null, matrix));
    r.set(
        "normalForm",
        v.normal_form
            .as_ref()
            .map_or(Value::Null, normal_form_value),
    );
    match v.in_s {
        Some(in_s) => r.line(format!(
            "{} ({})",
            if in_s { "in S" } else { "not in S" },
            v.branch
        )),
        None => {
            r.line(format!("out of scope ({})", v.branch));
            r.diagnostics
                .push("hyperbolic domains are outside the Serre-class classification".into());
            r.exit_code = EXIT_OUT_OF_SCOPE;
        }
    }
    if let Some(m) = &v.witness {
        r.line(format!("witness {m} with trace {}", m.trace()));
    }
    if let Some(nf) = &v.normal_form {
        r.line(format!("normal form: {}", nf.tag));
    }
    Ok(r)
}

fn family_value(family: &AutFamily) -> Value {
    let mut out = Map::new();
    out.insert("name".into(), json!(family.name()));
    match family {
        AutFamily::TorusScaling { alpha } | AutFamily::TorusWithFlip { alpha } => {
            out.insert("alpha".into(), quad(alpha));
        }
        AutFamily::MonomialHyperbolic { alpha, generator } => {
            out.insert("alpha".into(), quad(alpha));
            out.insert("generator".into(), matrix(generator));
        }
        AutFamily::Functional(case) => {
            out.insert("case".into(), json!(case.case_id()));
            out.insert("slots".into(), json!(case.slots()));
            match case {
                FunctionalCase::MonomialBall { p, q }
                | FunctionalCase::PuncturedMonomialBall { p, q } => {
                    out.insert("p".into(), big(p));
                    out.insert("q".into(), big(q));
                }
                FunctionalCase::Product { fiber, .. } => {
                    out.insert(
                        "fiber".into(),
                        json!(if *fiber == Fiber::C { "C" } else { "CStar" }),
                    );
                }
                FunctionalCase::BallProduct => {}
            }
        }
        AutFamily::FullGroup(kind) => {
            out.insert("fullType".into(), json!(kind.name()));
        }
        AutFamily::Shear { generator } => {
            out.insert("generator".into(), shear_value(generator));
        }
        AutFamily::Rotations => {}
    }
    Value::Object(out)
}

fn aut(file: &PathBuf, with_witness: bool) -> Result<Report, Failure> {
    let desc = read_domain(file)?;
    if desc.hyperbolicity().is_hyperbolic() {
        return Err(out_of_scope(
            "domain is hyperbolic; its automorphism group is outside this classification",
        ));
    }
    let group = aut_group(&desc)?;
    let verdict = compactness(&desc)?;
    let mut r = Report::new();
    r.set(
        "families",
        Value::Array(group.families.iter().map(family_value).collect()),
    );
    r.set("frame", map_value(&group.frame));
    r.set(
        "model",
        serde_json::to_value(DomainFile::from_desc(&group.model)).expect("plain struct"),
    );
    r.set("compact", json!(verdict.compact));
    r.set("reason", json!(verdict.reason.name()));
    let names: Vec<_> = group.families.iter().map(|f| f.name()).collect();
    r.line(format!("families: {}", names.join(", ")));
    r.line(format!("frame: {}", group.frame));
    r.line(format!(
        "{} ({})",
        if verdict.compact {
            "compact"
        } else {
            "non-compact"
        },
        verdict.reason.name()
    ));
    if with_witness {
        let value = verdict.witness.as_ref().map_or(Value::Null, |w| {
            let growth: Vec<Value> = w.iterate_growth().iter().map(|(c1, c2)| json!([quad(c1), quad(c2)])).collect();
            let kind = match w {
                CompactnessWitness::Translation(_) => "Translation",
                CompactnessWitness::Shear(_) => "Shear",
            };
            json!({"kind": kind, "map": map_value(&w.to_map()), "growth": growth, "unbounded": w.is_unbounded()})
        });
        if let Some(w) = &verdict.witness {
            r.line(format!("witness: {}", w.to_map()));
            for (label, (c1, c2)) in ["log|a|", "log|b|"].iter().zip(w.iterate_growth().iter()) {
                r.line(format!("  {label} of the n-th iterate: {c1} n + {c2} n^2"));
            }
        }
        r.set("witness", value);
    }
    Ok(r)
}

fn normal_form_cmd(file: &PathBuf) -> Result<Report, Failure> {
    let desc = read_domain(file)?;
    let nf = normal_form(&desc)?;
    let mut r = Report::new();
    r.line(format!("normal form: {}", nf.tag));
    r.line(format!("map: {}", nf.witness));
    if let Some(strip) = &nf.strip_form {
        r.line(format!("via strip form: {strip}"));
    }
    r.set("normalForm", normal_form_value(&nf));
    Ok(r)
}

fn pell(d: u64, count: u32) -> Result<Report, Failure> {
    let fund = pell_fundamental(d)?;
    let solutions = pell_iterate(&fund, count)?;
    let mut r = Report::new();
    r.set("d", json!(d));
    r.set(
        "solutions",
        Value::Array(
            solutions
                .iter()
                .map(|s| json!({"index": s.index, "x": big(&s.x), "y": big(&s.y)}))
                .collect(),
        ),
    );
    for s in &solutions {
        r.line(format!("({}, {})", s.x, s.y));
    }
    Ok(r)
}

fn parse_rational(text: &str, name: &str) -> Result<Rat, Failure> {
    parse_rat(text)
        .ok_or_else(|| invalid(format!("--{name}: {text:?} is not a rational \"num/den\"")))
}

fn pell_aut(p: &str, q: &str) -> Result<Report, Failure> {
    let (p, q) = (parse_rational(p, "p")?, parse_rational(q, "q")?);
    let alpha = quad_normalize(&p, &Rat::from_integer(1.into()), &q)?;
    if alpha.is_rational() {
        return Err(invalid("sqrt(q) is rational"));
    }
    let (data, sol, m) = pell_generator(&alpha)?;
    let mut r = Report::new();
    r.set("alpha", quad(&alpha));
    r.set(
        "pell",
        json!({"d": sol.d, "x": big(&sol.x), "y": big(&sol.y)}),
    );
    r.set("n", big(&data.n));
    r.set("matrix", matrix(&m));
    r.set("trace", big(&m.trace()));
    r.set("det", big(&m.det()));
    r.line(format!(
        "alpha = {alpha} ({} + sqrt({}))",
        format_rat(&p),
        format_rat(&q)
    ));
    r.line(format!("x^2 - {} y^2 = 1 at ({}, {})", sol.d, sol.x, sol.y));
    r.line(format!("matrix {m}, trace {}, det {}", m.trace(), m.det()));
    Ok(r)
}

fn certificate_value(c: &Certificate) -> Value {
    match c {
        Certificate::Annuli { gamma, matrix: m } => {
            json!({"kind": "Annuli", "gamma": quad(gamma), "matrix": matrix(m)})
        }
        Certificate::Pointed { matrix: m } => json!({"kind": "Pointed", "matrix": matrix(m)}),
        Certificate::PositiveRatio { p } => json!({"kind": "PositiveRatio", "p": format_rat(p)}),
        Certificate::NegativeAffine { p1, p2 } => {
            json!({"kind": "NegativeAffine", "p1": format_rat(p1), "p2": format_rat(p2)})
        }
        Certificate::Refuted(reason) => json!({"kind": "Refuted", "refutation": reason.name()}),
    }
}

fn irrational_form(desc: &DomainDesc, path: &PathBuf) -> Result<NormalForm, Failure> {
    let nf = normal_form(desc)?;
    match nf.tag {
        NormalFormTag::FormA(ref b) | NormalFormTag::FormB(ref b) if !b.is_rational() => Ok(nf),
        NormalFormTag::FormC { ref beta, .. } if !beta.is_rational() => Ok(nf),
        _ => Err(out_of_scope(format!(
            "{}: proper maps are decided only between irrational strips, got {}",
            path.display(),
            nf.tag
        ))),
    }
}

fn proper(src: &PathBuf, dst: &PathBuf, bound: u32) -> Result<Report, Failure> {
    let (a, b) = (read_domain(src)?, read_domain(dst)?);
    let (na, nb) = (irrational_form(&a, src)?, irrational_form(&b, dst)?);
    let (case, answer): (&str, ProperMapAnswer) = match (&na.tag, &nb.tag) {
        (
            NormalFormTag::FormC { beta: alpha, log_r },
            NormalFormTag::FormC {
                beta,
                log_r: log_big_r,
            },
        ) => ("annuli", proper_annuli(alpha, log_r, beta, log_big_r)?),
        (NormalFormTag::FormB(alpha), NormalFormTag::FormB(beta)) => {
            ("pointed", proper_pointed(alpha, beta, bound)?)
        }
        (NormalFormTag::FormA(alpha), NormalFormTag::FormA(beta)) => {
            ("full", proper_full(alpha, beta)?)
        }
        (x, y) => {
            return Err(out_of_scope(format!(
                "proper maps between {} and {} are not covered",
                x.name(),
                y.name()
            )));
        }
    };
    let mut r = Report::new();
    r.set("case", json!(case));
    r.set("source", normal_form_value(&na));
    r.set("target", normal_form_value(&nb));
    r.set("exists", json!(answer.exists));
    r.set(
        "families",
        Value::Array(
            answer
                .families
                .iter()
                .map(|f| {
                    json!({"matrix": matrix(&f.matrix), "scalarTorus": f.scalar_torus,
                           "multiples": f.multiples, "text": f.to_string()})
                })
                .collect(),
        ),
    );
    r.set("certificate", certificate_value(&answer.certificate));
    r.set(
        "crossCheck",
        answer.cross_check.as_ref().map_or(
            Value::Null,
            |c| json!({"bound": c.bound, "bruteFound": c.brute_found, "consistent": c.consistent}),
        ),
    );
    r.line(format!("{} -> {} ({case})", na.tag, nb.tag));
    match answer.refutation() {
        Some(reason) => r.line(format!("no proper holomorphic map: {}", reason.name())),
        None => {
            r.line("proper holomorphic maps exist, in normal-form coordinates:");
            for f in &answer.families {
                r.line(format!("  {f}"));
            }
        }
    }
    if let Some(c) = &answer.cross_check {
        r.line(format!(
            "brute-force check within {}: {}",
            c.bound,
            if c.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        ));
    }
    Ok(r)
}

fn stehle(file: &PathBuf, at: &str) -> Result<Report, Failure> {
    let desc = read_domain(file)?;
    let parse = |x: &str| x.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let (t, s) = match at.split_once(',') {
        Some((t, s)) => match (parse(t), parse(s)) {
            (Some(t), Some(s)) => (t, s),
            _ => {
                return Err(invalid(format!(
                    "--at {at:?}: expected two finite numbers \"t,s\""
                )))
            }
        },
        None => return Err(invalid(format!("--at {at:?}: expected \"t,s\""))),
    };
    let (w, group) = stehle_witness_for(&desc)?;
    let (mt, ms) = group.frame.apply_log_f64(t, s);
    let u = stehle_eval(&w, mt, ms)?;
    let mut r = Report::new();
    r.set("formula", json!(w.formula_id()));
    r.set("at", json!([t, s]));
    r.set("modelPoint", json!([mt, ms]));
    r.set("u", json!(u));
    r.line(format!("{}({t}, {s}) = {u}", w.formula_id()));
    Ok(r)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Serre { .. } => "serre",
        Command::Aut { .. } => "aut",
        Command::NormalForm { .. } => "normal-form",
        Command::Pell { .. } => "pell",
        Command::PellAut { .. } => "pell-aut",
        Command::Proper { .. } => "proper",
        Command::Stehle { .. } => "stehle",
    }
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: rendered.trim_end().to_string(),
                        stderr: vec![],
                        exit_code: EXIT_DECIDED,
                    }
                }
                _ => Outcome {
                    stdout: String::new(),
                    stderr: vec![rendered.trim_end().to_string()],
                    exit_code: EXIT_INVALID,
                },
            };
        }
    };
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Classify { file } => classify(file),
        Command::Serre { file } => serre(file),
        Command::Aut { file, witness } => aut(file, *witness),
        Command::NormalForm { file } => normal_form_cmd(file),
        Command::Pell { d, count } => pell(*d, *count),
        Command::PellAut { p, q } => pell_aut(p, q),
        Command::Proper { src, dst, bound } => proper(src, dst, *bound),
        Command::Stehle { file, at } => stehle(file, at),
    };
    let report = result.unwrap_or_else(|f| Report {
        payload: Map::new(),
        text: vec![],
        diagnostics: vec![f.message],
        exit_code: f.exit_code,
    });
    let stdout = match cli.format {
        Format::Json => {
            let mut payload = report.payload;
            payload.insert("command".into(), json!(name));
            payload.insert("diagnostics".into(), json!(report.diagnostics));
            payload.insert("exitCode".into(), json!(report.exit_code));
            serde_json::to_string(&Value::Object(payload)).expect("json values serialize")
        }
        Format::Text => report.text.join("\n"),
    };
    let stderr = report
        .diagnostics
        .iter()
        .map(|d| format!("{name}: {d}"))
        .collect();
    Outcome {
        stdout,
        stderr,
        exit_code: report.exit_code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pell_command() {
        let out = run(["reinhardt", "pell", "--d", "2", "--count", "2"]);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.stdout, "(3, 2)\n(17, 12)");
        let out = run(["reinhardt", "pell", "--d", "4"]);
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn pell_aut_command() {
        let out = run([
            "reinhardt",
            "--format",
            "json",
            "pell-aut",
            "--p",
            "1",
            "--q",
            "2",
        ]);
        assert_eq!(out.exit_code, 0);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["matrix"], json!({"k1": 1, "k2": 2, "l1": 2, "l2": 5}));
        assert_eq!(v["trace"], json!(6));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["reinhardt", "frobnicate"]).exit_code, 2);
        assert_eq!(
            run(["reinhardt", "serre", "/nonexistent/file.json"]).exit_code,
            2
        );
        assert_eq!(run(["reinhardt", "--help"]).exit_code, 0);
    }
}
