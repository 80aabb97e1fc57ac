use std::fs;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use quantred::geometry::document::{from_json, to_json};
use quantred::geometry::{check_moment_bundle, validate, Diagnostic, GeometryError};
use quantred::localization::{induce_decomposition, Decomposition, LocalizationError, Status};
use quantred::{
    critical_set, decompose, generic_directions, gallery, make_flag_manifold, make_projective_space,
    positivity_certificate, product, rigidity_check, rr_character, verify, GCharacter, LaurentElement,
    ManifoldSpec, RootDatum, VerifyOptions, Weight,
};

use crate::args::{Command, Format, Generator, Group, Job};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{path}: {} problem(s) found", diagnostics.len())]
    Validation {
        path: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 4,
            _ => 2,
        }
    }
}

/// What a successful run prints, and whether an identity failed.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub identity_failed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            identity_failed: false,
        }
    }
}

fn compute_error(e: LocalizationError) -> CliError {
    match e {
        LocalizationError::Geometry(g @ GeometryError::UnknownBundle(_)) => CliError::Usage(g.to_string()),
        other => CliError::Compute(other.to_string()),
    }
}

fn load_unchecked(source: &str) -> Result<ManifoldSpec, CliError> {
    let text = match source.strip_prefix("gallery:") {
        Some(name) => gallery::entry(name)
            .ok_or_else(|| CliError::Usage(format!("no shipped spec named {name}")))?
            .json
            .to_string(),
        None => fs::read_to_string(source).map_err(|e| CliError::Parse(format!("{source}: {e}")))?,
    };
    from_json(&text).map_err(|e| CliError::Parse(format!("{source}: {e}")))
}

fn load(source: &str) -> Result<ManifoldSpec, CliError> {
    let spec = load_unchecked(source)?;
    let diagnostics = validate(&spec);
    if diagnostics.is_empty() {
        Ok(spec)
    } else {
        Err(CliError::Validation {
            path: source.to_string(),
            diagnostics,
        })
    }
}

fn parse_vector(flag: &str, text: &str, rank: Option<usize>) -> Result<Weight, CliError> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--{flag} {text}: {e}")))?;
    if let Some(r) = rank {
        if coords.len() != r {
            return Err(CliError::Usage(format!(
                "--{flag} {text}: expected {r} coordinates, got {}",
                coords.len()
            )));
        }
    }
    Ok(Weight::new(coords))
}

/// The parsed and checked inputs of a computation.
struct Context {
    spec: ManifoldSpec,
    bundle: String,
    direction: Weight,
    tiebreak: Option<Weight>,
    cutoff: i64,
    format: Format,
}

impl Context {
    fn new(job: &Job) -> Result<Self, CliError> {
        let spec = load(&job.spec)?;
        let rank = Some(spec.rank());
        let bundle = match &job.bundle {
            Some(b) => b.clone(),
            None => spec
                .moment_bundle
                .clone()
                .or_else(|| spec.bundle_names.first().cloned())
                .ok_or_else(|| CliError::Usage("the spec declares no bundle".into()))?,
        };
        spec.check_bundle(&bundle).map_err(|e| CliError::Usage(e.to_string()))?;
        let direction = match &job.direction {
            Some(d) => parse_vector("direction", d, rank)?,
            None => generic_directions(&spec, 1)
                .pop()
                .ok_or_else(|| CliError::Usage("no generic direction found; pass --direction".into()))?,
        };
        let tiebreak = job
            .tiebreak
            .as_deref()
            .map(|t| parse_vector("tiebreak", t, rank))
            .transpose()?;
        if job.cutoff < 1 {
            return Err(CliError::Usage(format!("--cutoff {}: must be at least 1", job.cutoff)));
        }
        Ok(Context {
            spec,
            bundle,
            direction,
            tiebreak,
            cutoff: job.cutoff,
            format: job.format,
        })
    }

    fn header(&self) -> Value {
        json!({
            "spec": self.spec.name,
            "bundle": self.bundle,
            "direction": self.direction.coords(),
            "cutoff": self.cutoff,
        })
    }
}

fn number(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(n) => json!(n),
        Err(_) => json!(c.to_string()),
    }
}

fn json_terms(x: &LaurentElement) -> Value {
    Value::Array(
        x.terms()
            .iter()
            .map(|(a, c)| json!({"weight": a.coords(), "multiplicity": number(c)}))
            .collect(),
    )
}

fn json_mults(g: &GCharacter) -> Value {
    Value::Array(
        g.mults()
            .iter()
            .map(|(l, m)| json!({"highest_weight": l.coords(), "multiplicity": number(m)}))
            .collect(),
    )
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Compute(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn character_rows<'a>(part: Option<&'a str>, x: &'a LaurentElement) -> impl Iterator<Item = Vec<String>> + 'a {
    x.terms().iter().map(move |(a, c)| {
        let mut row: Vec<String> = part.map(str::to_string).into_iter().collect();
        row.push(a.to_string());
        row.push(c.to_string());
        row
    })
}

fn mult_rows<'a>(part: &'a str, g: &'a GCharacter) -> impl Iterator<Item = Vec<String>> + 'a {
    g.mults()
        .iter()
        .map(move |(l, m)| vec![part.to_string(), format!("chi{l}"), m.to_string()])
}

fn compute(job: &Job) -> Result<Outcome, CliError> {
    let cx = Context::new(job)?;
    let rr = rr_character(&cx.spec, &cx.bundle, &cx.direction, cx.cutoff).map_err(compute_error)?;
    let out = match cx.format {
        Format::Text => rr.to_string(),
        Format::Csv => csv_rows(&["weight_coords", "multiplicity"], character_rows(None, &rr))?,
        Format::Json => {
            let mut v = cx.header();
            v["terms"] = json_terms(&rr);
            pretty(&v)
        }
    };
    Ok(Outcome::ok(out))
}

fn stratum_label(dec: &Decomposition, i: usize, j: usize) -> String {
    format!("beta={}", dec.strata[i].members[j].beta)
}

fn decompose_cmd(job: &Job) -> Result<Outcome, CliError> {
    let cx = Context::new(job)?;
    let dec = decompose(&cx.spec, &cx.bundle, &cx.direction, cx.tiebreak.as_ref(), cx.cutoff)
        .map_err(compute_error)?;
    let induced = if cx.spec.datum.is_torus() {
        None
    } else {
        Some(induce_decomposition(&dec, &cx.spec.datum).map_err(compute_error)?)
    };
    let out = match cx.format {
        Format::Text => {
            let mut s = format!(
                "spec {} bundle {} direction {} cutoff {}\n\ntotal\n{}",
                cx.spec.name, cx.bundle, cx.direction, cx.cutoff, dec.total
            );
            for (i, st) in dec.strata.iter().enumerate() {
                for (j, m) in st.members.iter().enumerate() {
                    s.push_str(&format!(
                        "\nstratum {} (points {}; exact on {})\n{}",
                        stratum_label(&dec, i, j),
                        m.provenance.join(" "),
                        m.series.halfspace(),
                        m.series
                    ));
                }
            }
            s.push_str(&format!("\nzero (exact on {})\n{}", dec.zero.window, dec.zero.terms));
            if let Some(g) = &induced {
                s.push_str(&format!("\nG total\n{}", g.total));
                for (beta, c) in &g.strata {
                    s.push_str(&format!("\nG stratum beta={beta} (exact on {})\n{c}", c.window()));
                }
                s.push_str(&format!("\nG zero (exact on {})\n{}", g.zero.window(), g.zero));
            }
            s
        }
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = character_rows(Some("total"), &dec.total).collect();
            for (i, st) in dec.strata.iter().enumerate() {
                for (j, m) in st.members.iter().enumerate() {
                    let label = stratum_label(&dec, i, j);
                    rows.extend(character_rows(Some(&label), m.series.terms()));
                }
            }
            rows.extend(character_rows(Some("zero"), &dec.zero.terms));
            if let Some(g) = &induced {
                rows.extend(mult_rows("G total", &g.total));
                for (beta, c) in &g.strata {
                    rows.extend(mult_rows(&format!("G beta={beta}"), c));
                }
                rows.extend(mult_rows("G zero", &g.zero));
            }
            csv_rows(&["part", "weight_coords", "multiplicity"], rows)?
        }
        Format::Json => {
            let mut v = cx.header();
            v["total"] = json_terms(&dec.total);
            v["strata"] = Value::Array(
                dec.members()
                    .map(|m| {
                        json!({
                            "beta": m.beta.to_string(),
                            "direction": m.direction.coords(),
                            "tiebreak": m.tiebreak.as_ref().map(|t| t.coords().to_vec()),
                            "provenance": m.provenance,
                            "window": m.series.halfspace().to_string(),
                            "terms": json_terms(m.series.terms()),
                        })
                    })
                    .collect(),
            );
            v["zero"] = json!({"window": dec.zero.window.to_string(), "terms": json_terms(&dec.zero.terms)});
            if let Some(g) = &induced {
                v["induced"] = json!({
                    "total": json_mults(&g.total),
                    "strata": g.strata.iter().map(|(beta, c)| json!({
                        "beta": beta.to_string(),
                        "window": c.window().to_string(),
                        "multiplicities": json_mults(c),
                    })).collect::<Vec<_>>(),
                    "zero": {"window": g.zero.window().to_string(), "multiplicities": json_mults(&g.zero)},
                });
            }
            pretty(&v)
        }
    };
    Ok(Outcome::ok(out))
}

fn verify_cmd(job: &Job) -> Result<Outcome, CliError> {
    let cx = Context::new(job)?;
    let opts = VerifyOptions {
        direction: Some(cx.direction.clone()),
        tiebreak: cx.tiebreak.clone(),
        cutoff: cx.cutoff,
    };
    let report = verify(&cx.spec, &cx.bundle, &opts).map_err(compute_error)?;
    let out = match cx.format {
        Format::Text => report.to_string(),
        Format::Csv => csv_rows(
            &["identity", "window", "status", "first_discrepancy", "detail"],
            report.records.iter().map(|r| {
                vec![
                    r.identity.clone(),
                    r.window.clone(),
                    r.status.to_string(),
                    r.first_discrepancy.as_ref().map(Weight::to_string).unwrap_or_default(),
                    r.detail.clone(),
                ]
            }),
        )?,
        Format::Json => pretty(&serde_json::to_value(&report).expect("reports serialize")),
    };
    Ok(Outcome {
        stdout: out,
        stderr: String::new(),
        identity_failed: report.records.iter().any(|r| r.status == Status::Fail),
    })
}

fn certify(job: &Job) -> Result<Outcome, CliError> {
    let cx = Context::new(job)?;
    let mut certs = Vec::new();
    for s in critical_set(&cx.spec).into_iter().filter(|s| !s.is_zero()) {
        certs.push(positivity_certificate(&cx.spec, &cx.bundle, &s.beta).map_err(compute_error)?);
    }
    let rigidity = rigidity_check(&cx.spec, &cx.bundle, &cx.direction).map_err(compute_error)?;
    let minimal = |k: Option<i64>| k.map_or("none".to_string(), |k| k.to_string());
    let out = match cx.format {
        Format::Text => {
            let mut s = String::new();
            for c in &certs {
                s.push_str(&format!(
                    "beta {}: eta = {}, <theta, beta> = {}, strictly positive = {}, minimal k = {}, holds for {} = {}\n",
                    c.beta,
                    c.eta,
                    c.theta_pairing,
                    c.strictly_positive,
                    minimal(c.minimal_k),
                    cx.bundle,
                    c.holds_for(1)
                ));
            }
            match rigidity.constant {
                Some(k) => s.push_str(&format!("rigid = true, constant = {k}, verified = {}\n", rigidity.verified)),
                None => s.push_str("rigid = false\n"),
            }
            s
        }
        Format::Csv => csv_rows(
            &["beta", "eta", "theta_pairing", "strictly_positive", "minimal_k", "holds"],
            certs.iter().map(|c| {
                vec![
                    c.beta.to_string(),
                    c.eta.to_string(),
                    c.theta_pairing.to_string(),
                    c.strictly_positive.to_string(),
                    minimal(c.minimal_k),
                    c.holds_for(1).to_string(),
                ]
            }),
        )?,
        Format::Json => {
            let mut v = cx.header();
            v["certificates"] = Value::Array(
                certs
                    .iter()
                    .map(|c| {
                        json!({
                            "beta": c.beta.to_string(),
                            "eta": c.eta.to_string(),
                            "theta_pairing": c.theta_pairing.to_string(),
                            "strictly_positive": c.strictly_positive,
                            "minimal_k": c.minimal_k,
                            "holds": c.holds_for(1),
                        })
                    })
                    .collect(),
            );
            v["rigidity"] = json!({
                "rigid": rigidity.rigid,
                "constant": rigidity.constant,
                "verified": rigidity.verified,
            });
            pretty(&v)
        }
    };
    Ok(Outcome {
        stdout: out,
        stderr: String::new(),
        identity_failed: !rigidity.verified,
    })
}

fn validate_cmd(source: &str) -> Result<Outcome, CliError> {
    let spec = load(source)?;
    let mut stderr = String::new();
    if let Some(m) = &spec.moment_bundle {
        let matches = check_moment_bundle(&spec, m).map_err(|e| CliError::Usage(e.to_string()))?;
        for (p, ok) in spec.points.iter().zip(matches) {
            if !ok {
                stderr.push_str(&format!(
                    "warning: point {}: fiber of {m} differs from the moment value\n",
                    p.id
                ));
            }
        }
    }
    Ok(Outcome {
        stdout: format!(
            "{source}: ok ({} points, rank {}, bundles {})\n",
            spec.points.len(),
            spec.rank(),
            spec.bundle_names.join(" ")
        ),
        stderr,
        identity_failed: false,
    })
}

fn datum(group: Group) -> RootDatum {
    match group {
        Group::Su2 => RootDatum::su2(),
        Group::A2 => RootDatum::a2(),
        Group::B2 => RootDatum::b2(),
        Group::G2 => RootDatum::g2(),
        Group::A1A1 => RootDatum::a1_a1(),
    }
}

fn generate(generator: &Generator) -> Result<String, CliError> {
    let geometry = |e: GeometryError| CliError::Usage(e.to_string());
    let rename = |mut spec: ManifoldSpec, name: &Option<String>| {
        if let Some(n) = name {
            spec.name = n.clone();
        }
        spec
    };
    let spec = match generator {
        Generator::Projective { weights, k, shift, name } => {
            let weights = weights
                .split(';')
                .map(|w| parse_vector("weights", w, None))
                .collect::<Result<Vec<_>, _>>()?;
            let rank = weights.first().map_or(0, Weight::rank);
            let shift = match shift {
                Some(s) => parse_vector("shift", s, Some(rank))?,
                None => Weight::zero(rank),
            };
            rename(make_projective_space(&weights, *k, &shift).map_err(geometry)?, name)
        }
        Generator::Flag { group, lambda, name } => {
            let datum = datum(*group);
            let lambda = parse_vector("lambda", lambda, Some(datum.rank()))?;
            rename(make_flag_manifold(&datum, &lambda).map_err(geometry)?, name)
        }
        Generator::Product { left, right, name } => {
            let (a, b) = (load(left)?, load(right)?);
            rename(product(&a, &b).map_err(geometry)?, name)
        }
        Generator::Gallery { name: None } => {
            return Ok(gallery::GALLERY.iter().map(|e| format!("{}\n", e.name)).collect());
        }
        Generator::Gallery { name: Some(n) } => load(&format!("gallery:{n}"))?,
    };
    Ok(to_json(&spec))
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { spec } => validate_cmd(spec),
        Command::Generate { generator, out } => {
            let text = generate(generator)?;
            match out {
                Some(path) => {
                    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        Command::Compute(job) => compute(job),
        Command::Decompose(job) => decompose_cmd(job),
        Command::Verify(job) => verify_cmd(job),
        Command::Certify(job) => certify(job),
    }
}
