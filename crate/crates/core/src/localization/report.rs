//! Verification records and the full check suite run by `quantred verify`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::{
    decompose, generic_directions, induce_decomposition, multiplicity_support_check,
    positivity_certificate, rigidity_check, rr_character, su2_root, su2_theta_induced,
    LocalizationError, DEFAULT_CUTOFF,
};
use crate::characters::{Window, WindowedCharacter};
use crate::geometry::ManifoldSpec;
use crate::induction::{invariant_part, GCharacter};
use crate::lattice_weyl::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "COMPUTED_UNVERIFIED")]
    ComputedUnverified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ComputedUnverified => "COMPUTED_UNVERIFIED",
        })
    }
}

/// Outcome of checking one identity on a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub identity: String,
    pub window: String,
    pub status: Status,
    pub first_discrepancy: Option<Weight>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl VerificationRecord {
    pub fn compared(identity: impl Into<String>, window: &Window, first_discrepancy: Option<Weight>) -> Self {
        VerificationRecord {
            identity: identity.into(),
            window: window.to_string(),
            status: if first_discrepancy.is_none() { Status::Pass } else { Status::Fail },
            first_discrepancy,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for VerificationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} on {}", self.status, self.identity, self.window)?;
        if let Some(w) = &self.first_discrepancy {
            write!(f, "; first discrepancy at {w}")?;
        }
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub spec: String,
    pub bundle: String,
    pub direction: Weight,
    pub records: Vec<VerificationRecord>,
    pub facts: Vec<Fact>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(VerificationRecord::passed)
    }

    pub fn fact(&self, name: &str) -> Option<&str> {
        self.facts.iter().find(|f| f.name == name).map(|f| f.value.as_str())
    }

    fn push_fact(&mut self, name: impl Into<String>, value: impl ToString) {
        self.facts.push(Fact {
            name: name.into(),
            value: value.to_string(),
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec {} bundle {} direction {}", self.spec, self.bundle, self.direction)?;
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        for fact in &self.facts {
            writeln!(f, "{} = {}", fact.name, fact.value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub direction: Option<Weight>,
    pub tiebreak: Option<Weight>,
    pub cutoff: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            direction: None,
            tiebreak: None,
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

fn first_difference(a: &crate::characters::LaurentElement, b: &crate::characters::LaurentElement) -> Option<Weight> {
    a.sub(b).terms().keys().next().cloned()
}

fn sum_strata(induced: &[(crate::lattice_weyl::RationalWeight, GCharacter)], skip: Option<usize>, start: GCharacter) -> GCharacter {
    induced
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .fold(start, |acc, (_, (_, g))| acc.add(g))
}

/// Runs every applicable check on one bundle.
pub fn verify(
    spec: &ManifoldSpec,
    bundle: &str,
    opts: &VerifyOptions,
) -> Result<VerificationReport, LocalizationError> {
    spec.check_bundle(bundle)?;
    let generic = generic_directions(spec, 3);
    let direction = match &opts.direction {
        Some(d) => d.clone(),
        None => generic.first().cloned().ok_or(LocalizationError::NoGenericDirection)?,
    };
    let mut report = VerificationReport {
        spec: spec.name.clone(),
        bundle: bundle.to_string(),
        direction: direction.clone(),
        records: Vec::new(),
        facts: Vec::new(),
    };
    let datum = &spec.datum;
    let cutoff = opts.cutoff;

    let total = rr_character(spec, bundle, &direction, cutoff)?;
    let mut first = None;
    let mut used = vec![direction.clone()];
    for d in generic.iter().filter(|d| **d != direction) {
        let other = rr_character(spec, bundle, d, cutoff)?;
        used.push(d.clone());
        first = first.or_else(|| first_difference(&total, &other));
    }
    let names: Vec<String> = used.iter().map(Weight::to_string).collect();
    report.records.push(
        VerificationRecord::compared("polarization independence", &Window::everywhere(), first)
            .with_detail(format!("directions {}", names.join(" "))),
    );

    let dec = decompose(spec, bundle, &direction, opts.tiebreak.as_ref(), cutoff)?;
    let mut rhs = dec.zero.terms.clone();
    for m in dec.members() {
        rhs = rhs.add(m.series.terms());
    }
    let lhs = WindowedCharacter::new(&dec.total, dec.window().clone());
    let rhs = WindowedCharacter::new(&rhs, dec.window().clone());
    report.records.push(VerificationRecord::compared(
        "decomposition RR = RR_0 + sum RR_beta",
        dec.window(),
        lhs.first_discrepancy(&rhs),
    ));
    report.records.push(VerificationRecord::compared(
        "zero stratum pointwise",
        &dec.zero_pointwise.window,
        dec.zero.first_discrepancy(&dec.zero_pointwise),
    ));

    let induced = induce_decomposition(&dec, datum)?;
    let assembled = sum_strata(&induced.strata, None, induced.zero.clone());
    report.records.push(VerificationRecord::compared(
        "induced decomposition RR^G = RR^G_0 + sum RR^G_beta",
        assembled.window(),
        induced.total.clone().with_window(assembled.window().clone()).first_discrepancy(&assembled),
    ));
    if !datum.is_torus() {
        for (i, (beta, g)) in induced.strata.iter().enumerate() {
            let others = sum_strata(&induced.strata, Some(i), induced.zero.clone());
            let direct = induced.total.sub(&others).with_window(g.window().clone());
            let g = g.clone().with_window(direct.window().clone());
            report.records.push(VerificationRecord::compared(
                format!("induction formula at beta = {beta}"),
                direct.window(),
                direct.first_discrepancy(&g),
            ));
        }
    }

    if su2_root(datum).is_ok() {
        let theta = su2_theta_induced(spec, bundle, cutoff)?;
        let rhs = induced.zero.add(&theta);
        let lhs = induced.total.clone().with_window(rhs.window().clone());
        report.records.push(VerificationRecord::compared(
            "RR^G = Hol(RR_0) + Hol(Theta (1 - h^-alpha))",
            rhs.window(),
            lhs.first_discrepancy(&rhs),
        ));
    }

    if let Some(lambda) = borel_weil_weight(spec, bundle)? {
        let expected = GCharacter::irreducible(datum, lambda.clone())?;
        report.records.push(
            VerificationRecord::compared(
                "Borel-Weil",
                &Window::everywhere(),
                induced.total.first_discrepancy(&expected),
            )
            .with_detail(format!("expected chi{lambda}")),
        );
    }

    for (s, (beta, g)) in dec.strata.iter().zip(&induced.strata) {
        let cert = positivity_certificate(spec, bundle, beta)?;
        report.push_fact(format!("eta(beta={beta})"), cert.eta);
        report.push_fact(
            format!("minimal_k(beta={beta})"),
            cert.minimal_k.map_or("none".to_string(), |k| k.to_string()),
        );
        if cert.holds_for(1) {
            let vanishes = invariant_part(g).ok().map(|m| m == BigInt::from(0));
            let status = match vanishes {
                Some(true) => Status::Pass,
                Some(false) => Status::Fail,
                None => Status::ComputedUnverified,
            };
            report.records.push(VerificationRecord {
                identity: format!("vanishing of [RR^G_beta]^G at beta = {beta}"),
                window: g.window().to_string(),
                status,
                first_discrepancy: None,
                detail: format!("eta = {} > <theta, beta> = {}", cert.eta, cert.theta_pairing),
            });
        }
        if cert.strictly_positive {
            for m in &s.members {
                let eta = super::eta(spec, bundle, &m.beta)?;
                let ok = multiplicity_support_check(spec.gram(), m, eta);
                report.records.push(VerificationRecord {
                    identity: format!("support of RR_beta at beta = {}", m.beta),
                    window: m.series.halfspace().to_string(),
                    status: if ok { Status::Pass } else { Status::Fail },
                    first_discrepancy: None,
                    detail: format!("<a, beta> >= {eta}"),
                });
            }
        }
    }

    let rigidity = rigidity_check(spec, bundle, &direction)?;
    if rigidity.rigid {
        report.records.push(VerificationRecord {
            identity: "rigidity".to_string(),
            window: Window::everywhere().to_string(),
            status: if rigidity.verified { Status::Pass } else { Status::Fail },
            first_discrepancy: None,
            detail: format!("constant {}", rigidity.constant.unwrap_or(0)),
        });
    }

    let higher = induced.zero.mults().keys().filter(|l| !l.is_zero()).count();
    report.records.push(VerificationRecord {
        identity: "higher multiplicities of RR_0".to_string(),
        window: induced.zero.window().to_string(),
        status: Status::ComputedUnverified,
        first_discrepancy: None,
        detail: format!("{higher} nonzero highest weights"),
    });
    report.push_fact("invariant_part", invariant_part(&induced.total)?);
    if let Ok(m) = invariant_part(&induced.zero) {
        report.push_fact("rr0_invariant_part", m);
    }
    Ok(report)
}

/// The highest weight predicted by Borel–Weil, when the spec looks like a
/// full flag manifold: `|W|` points, one of which has the positive roots as
/// tangent weights and a single dominant fiber.
fn borel_weil_weight(spec: &ManifoldSpec, bundle: &str) -> Result<Option<Weight>, LocalizationError> {
    let datum = &spec.datum;
    if datum.is_torus() || spec.points.len() != datum.weyl_group()?.len() {
        return Ok(None);
    }
    let mut positive = datum.positive_roots().to_vec();
    positive.sort();
    for p in &spec.points {
        let mut tangent = p.tangent.clone();
        tangent.sort();
        if tangent != positive {
            continue;
        }
        if let [lambda] = p.fibers(bundle)? {
            if datum.is_dominant(lambda) {
                return Ok(Some(lambda.clone()));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dual, make_flag_manifold, make_projective_space};
    use crate::lattice_weyl::RootDatum;

    #[test]
    fn flag_reports() {
        let m = make_flag_manifold(&RootDatum::su2(), &Weight::new(vec![2])).unwrap();
        let r = verify(&m, "L", &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.records.iter().any(|x| x.identity == "Borel-Weil" && x.status == Status::Pass));
        assert!(r.records.iter().any(|x| x.identity.starts_with("RR^G = Hol")));
        let (d, name) = dual(&m, "L").unwrap();
        let r = verify(&d, &name, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.to_string().contains("invariant_part = -1"));
        assert_eq!(r.fact("minimal_k(beta=[2])"), Some("2"));
    }

    #[test]
    fn a2_flag_report() {
        let m = make_flag_manifold(&RootDatum::a2(), &Weight::new(vec![1, 1])).unwrap();
        let r = verify(&m, "L", &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.fact("invariant_part"), Some("0"));
    }

    #[test]
    fn torus_report_and_json() {
        let m = make_projective_space(
            &[Weight::new(vec![0]), Weight::new(vec![1])],
            2,
            &Weight::new(vec![-1]),
        )
        .unwrap();
        let r = verify(&m, "L", &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.fact("rr0_invariant_part"), Some("1"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["records"][0]["status"], "PASS");
        assert!(r.records.iter().any(|x| x.status == Status::ComputedUnverified));
    }
}
