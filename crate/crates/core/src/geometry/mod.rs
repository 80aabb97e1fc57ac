//! Fixed-point data of a compact manifold with a torus action: tangent
//! weights, bundle fiber weights and moment values at each isolated fixed
//! point, together with validators and generators for standard examples.

pub mod document;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::lattice_weyl::{Gram, LatticeError, RationalWeight, RootDatum, Weight};

pub use document::{from_json, to_json, SpecDocument};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("bundle {bundle} is not a line bundle at point {point}")]
    NotALineBundle { point: String, bundle: String },
    #[error("unknown bundle {0}")]
    UnknownBundle(String),
    #[error("action weights are not pairwise distinct")]
    RepeatedWeights,
    #[error("weight {0} is not strictly dominant")]
    NotRegularDominant(Weight),
    #[error("specs are built over different root data")]
    DatumMismatch,
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An isolated fixed point of the maximal torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointDatum {
    pub id: String,
    pub tangent: Vec<Weight>,
    pub bundles: BTreeMap<String, Vec<Weight>>,
    pub moment: RationalWeight,
}

impl FixedPointDatum {
    pub fn fibers(&self, bundle: &str) -> Result<&[Weight], GeometryError> {
        self.bundles
            .get(bundle)
            .map(Vec::as_slice)
            .ok_or_else(|| GeometryError::UnknownBundle(bundle.to_string()))
    }

    pub fn line_fiber(&self, bundle: &str) -> Result<&Weight, GeometryError> {
        match self.fibers(bundle)? {
            [xi] => Ok(xi),
            _ => Err(GeometryError::NotALineBundle {
                point: self.id.clone(),
                bundle: bundle.to_string(),
            }),
        }
    }
}

/// A `G`-manifold at the level of localization data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub name: String,
    pub datum: RootDatum,
    pub points: Vec<FixedPointDatum>,
    pub bundle_names: Vec<String>,
    /// Declared, not detected: 0 is a regular value of the moment map.
    pub zero_regular: bool,
    /// The line bundle whose fiber weights the moment values come from.
    pub moment_bundle: Option<String>,
}

impl ManifoldSpec {
    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn gram(&self) -> &Gram {
        self.datum.gram()
    }

    pub fn has_bundle(&self, bundle: &str) -> bool {
        self.bundle_names.iter().any(|b| b == bundle)
    }

    pub fn check_bundle(&self, bundle: &str) -> Result<(), GeometryError> {
        if self.has_bundle(bundle) {
            Ok(())
        } else {
            Err(GeometryError::UnknownBundle(bundle.to_string()))
        }
    }

    pub fn point(&self, id: &str) -> Option<&FixedPointDatum> {
        self.points.iter().find(|p| p.id == id)
    }

    fn with_bundle(mut self, name: &str, fibers: Vec<Vec<Weight>>) -> Self {
        for (p, f) in self.points.iter_mut().zip(fibers) {
            p.bundles.insert(name.to_string(), f);
        }
        if !self.has_bundle(name) {
            self.bundle_names.push(name.to_string());
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticKind {
    RankMismatch,
    DuplicateId,
    ZeroTangentWeight,
    TangentCountMismatch,
    MissingBundle,
    UndeclaredBundle,
    UnknownMomentBundle,
    ZeroMoment,
    WeylSymmetry,
}

impl DiagnosticKind {
    pub fn label(self) -> &'static str {
        match self {
            DiagnosticKind::RankMismatch => "rank",
            DiagnosticKind::DuplicateId => "duplicate-id",
            DiagnosticKind::ZeroTangentWeight => "isolation",
            DiagnosticKind::TangentCountMismatch => "dimension",
            DiagnosticKind::MissingBundle => "missing-bundle",
            DiagnosticKind::UndeclaredBundle => "undeclared-bundle",
            DiagnosticKind::UnknownMomentBundle => "moment-bundle",
            DiagnosticKind::ZeroMoment => "zero-regular",
            DiagnosticKind::WeylSymmetry => "weyl-symmetry",
        }
    }
}

/// One violated invariant, located by point id and Weyl element when relevant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub point: Option<String>,
    /// Index into [`RootDatum::weyl_group`] together with its matrix.
    pub weyl_element: Option<(usize, Vec<Vec<i64>>)>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.kind.label())?;
        if let Some(p) = &self.point {
            write!(f, " point {p}:")?;
        }
        if let Some((i, m)) = &self.weyl_element {
            write!(f, " weyl element #{i} {m:?}:")?;
        }
        write!(f, " {}", self.message)
    }
}

fn diag(kind: DiagnosticKind, point: Option<&str>, message: String) -> Diagnostic {
    Diagnostic {
        kind,
        point: point.map(str::to_string),
        weyl_element: None,
        message,
    }
}

// Canonical form of a point's data, used to match w·p against the points.
type Signature = (Vec<Weight>, Vec<(String, Vec<Weight>)>, RationalWeight);

fn signature(p: &FixedPointDatum, map: impl Fn(&Weight) -> Weight, moment: RationalWeight) -> Signature {
    let mut tangent: Vec<Weight> = p.tangent.iter().map(&map).collect();
    tangent.sort();
    let bundles = p
        .bundles
        .iter()
        .map(|(name, fibers)| {
            let mut f: Vec<Weight> = fibers.iter().map(&map).collect();
            f.sort();
            (name.clone(), f)
        })
        .collect();
    (tangent, bundles, moment)
}

/// Checks every structural invariant; the empty list means the spec is valid.
pub fn validate(spec: &ManifoldSpec) -> Vec<Diagnostic> {
    use DiagnosticKind::*;
    let mut out = Vec::new();
    let r = spec.rank();
    let mut rank_ok = true;
    for p in &spec.points {
        let id = Some(p.id.as_str());
        let bad_rank = p.tangent.iter().any(|a| a.rank() != r)
            || p.bundles.values().flatten().any(|a| a.rank() != r)
            || p.moment.rank() != r;
        if bad_rank {
            rank_ok = false;
            out.push(diag(RankMismatch, id, format!("a weight does not have rank {r}")));
        }
        if p.tangent.iter().any(Weight::is_zero) {
            out.push(diag(
                ZeroTangentWeight,
                id,
                "zero tangent weight: the fixed point is not isolated".into(),
            ));
        }
        for b in &spec.bundle_names {
            if !p.bundles.contains_key(b) {
                out.push(diag(MissingBundle, id, format!("no fibers for bundle {b}")));
            }
        }
        for b in p.bundles.keys() {
            if !spec.has_bundle(b) {
                out.push(diag(UndeclaredBundle, id, format!("bundle {b} is not declared")));
            }
        }
        if spec.zero_regular && p.moment.is_zero() {
            out.push(diag(
                ZeroMoment,
                id,
                "moment is 0 but 0 is declared a regular value".into(),
            ));
        }
    }
    for (i, p) in spec.points.iter().enumerate() {
        if spec.points[..i].iter().any(|q| q.id == p.id) {
            out.push(diag(DuplicateId, Some(&p.id), "repeated point id".into()));
        }
    }
    if let Some(first) = spec.points.first() {
        let n = first.tangent.len();
        for p in &spec.points {
            if p.tangent.len() != n {
                out.push(diag(
                    TangentCountMismatch,
                    Some(&p.id),
                    format!("{} tangent weights, expected {n}", p.tangent.len()),
                ));
            }
        }
    }
    if let Some(m) = &spec.moment_bundle {
        if !spec.has_bundle(m) {
            out.push(diag(UnknownMomentBundle, None, format!("moment bundle {m} is not declared")));
        }
    }
    if !rank_ok {
        return out;
    }
    let group = match spec.datum.weyl_group() {
        Ok(g) => g,
        Err(e) => {
            out.push(diag(WeylSymmetry, None, e.to_string()));
            return out;
        }
    };
    let mut targets: Vec<Signature> = spec
        .points
        .iter()
        .map(|p| signature(p, Weight::clone, p.moment.clone()))
        .collect();
    targets.sort();
    for (index, w) in group.iter().enumerate().skip(1) {
        let mut remaining = targets.clone();
        for p in &spec.points {
            let image = signature(p, |a| w.apply(a), w.apply_rational(&p.moment));
            match remaining.binary_search(&image) {
                Ok(pos) => {
                    remaining.remove(pos);
                }
                Err(_) => {
                    out.push(Diagnostic {
                        kind: WeylSymmetry,
                        point: Some(p.id.clone()),
                        weyl_element: Some((index, w.matrix().to_vec())),
                        message: "no fixed point carries the transformed data".into(),
                    });
                    break;
                }
            }
        }
    }
    out
}

/// Whether the line bundle's fiber weight equals the moment value, per point.
pub fn check_moment_bundle(spec: &ManifoldSpec, bundle: &str) -> Result<Vec<bool>, GeometryError> {
    spec.check_bundle(bundle)?;
    spec.points
        .iter()
        .map(|p| Ok(RationalWeight::from(p.line_fiber(bundle)?) == p.moment))
        .collect()
}

/// The points with moment value `beta`, together with `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumMember {
    pub beta: RationalWeight,
    pub points: Vec<usize>,
}

/// A dominant `β` of the critical set and its Weyl orbit of moment values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub beta: RationalWeight,
    pub members: Vec<StratumMember>,
}

impl Stratum {
    pub fn is_zero(&self) -> bool {
        self.beta.is_zero()
    }

    pub fn member(&self, beta: &RationalWeight) -> Option<&StratumMember> {
        self.members.iter().find(|m| &m.beta == beta)
    }

    /// Points whose moment is the dominant representative itself.
    pub fn dominant_points(&self) -> &[usize] {
        self.member(&self.beta).map_or(&[], |m| m.points.as_slice())
    }
}

/// Moment values grouped into Weyl orbits, zero stratum first.
pub fn critical_set(spec: &ManifoldSpec) -> Vec<Stratum> {
    let mut by_value: BTreeMap<RationalWeight, Vec<usize>> = BTreeMap::new();
    for (i, p) in spec.points.iter().enumerate() {
        by_value.entry(p.moment.clone()).or_default().push(i);
    }
    let zero = RationalWeight::zero(spec.rank());
    let mut strata: BTreeMap<RationalWeight, Vec<StratumMember>> = BTreeMap::new();
    for (beta, points) in by_value {
        if beta.is_zero() {
            continue;
        }
        let dominant = spec.datum.dominant_representative_rational(&beta);
        strata
            .entry(dominant)
            .or_default()
            .push(StratumMember { beta, points });
    }
    let mut out = Vec::new();
    let zero_points: Vec<usize> = spec
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.moment.is_zero())
        .map(|(i, _)| i)
        .collect();
    if spec.zero_regular || !zero_points.is_empty() {
        out.push(Stratum {
            beta: zero.clone(),
            members: vec![StratumMember {
                beta: zero,
                points: zero_points,
            }],
        });
    }
    out.extend(
        strata
            .into_iter()
            .map(|(beta, members)| Stratum { beta, members }),
    );
    out
}

/// `CP^n` with torus weights `w_0, …, w_n`. At `p_i` the tangent weights are
/// `w_i − w_j` and the line bundle `L` has weight `k·w_i + shift`, which is
/// also the moment value. A trivial bundle `O` is included.
pub fn make_projective_space(
    weights: &[Weight],
    k: i64,
    shift: &Weight,
) -> Result<ManifoldSpec, GeometryError> {
    let rank = shift.rank();
    for a in weights {
        if a.rank() != rank {
            return Err(GeometryError::Lattice(LatticeError::RankMismatch {
                expected: rank,
                got: a.rank(),
            }));
        }
    }
    for (i, a) in weights.iter().enumerate() {
        if weights[..i].contains(a) {
            return Err(GeometryError::RepeatedWeights);
        }
    }
    let points = weights
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            let tangent = weights
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, wj)| wi - wj)
                .collect();
            let fiber = &wi.scale(k) + shift;
            FixedPointDatum {
                id: format!("p{i}"),
                tangent,
                moment: RationalWeight::from(&fiber),
                bundles: BTreeMap::from([
                    ("L".to_string(), vec![fiber]),
                    ("O".to_string(), vec![Weight::zero(rank)]),
                ]),
            }
        })
        .collect();
    Ok(finish(
        format!("cp{}", weights.len().saturating_sub(1)),
        RootDatum::torus(rank),
        points,
        vec!["L".into(), "O".into()],
        Some("L".into()),
    ))
}

/// The generators declare 0 regular exactly when no fixed point maps to 0.
fn finish(
    name: String,
    datum: RootDatum,
    points: Vec<FixedPointDatum>,
    bundle_names: Vec<String>,
    moment_bundle: Option<String>,
) -> ManifoldSpec {
    let zero_regular = points.iter().all(|p| !p.moment.is_zero());
    ManifoldSpec {
        name,
        datum,
        points,
        bundle_names,
        zero_regular,
        moment_bundle,
    }
}

/// The coadjoint orbit through a strictly dominant `λ`. Points are indexed
/// by `W`; at `w` the tangent weights are `w·α` for `α > 0` and the line
/// bundle `L` (and the moment) has weight `w·λ`.
pub fn make_flag_manifold(datum: &RootDatum, lambda: &Weight) -> Result<ManifoldSpec, GeometryError> {
    datum.check_rank(lambda)?;
    let strict = datum
        .simple_roots()
        .iter()
        .all(|a| datum.pair(lambda, a) > 0);
    if !strict {
        return Err(GeometryError::NotRegularDominant(lambda.clone()));
    }
    let group = datum.weyl_group()?;
    let points = group
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let fiber = w.apply(lambda);
            FixedPointDatum {
                id: format!("w{i}"),
                tangent: datum.positive_roots().iter().map(|a| w.apply(a)).collect(),
                moment: RationalWeight::from(&fiber),
                bundles: BTreeMap::from([
                    ("L".to_string(), vec![fiber]),
                    ("O".to_string(), vec![Weight::zero(datum.rank())]),
                ]),
            }
        })
        .collect();
    Ok(finish(
        format!("flag{lambda}"),
        datum.clone(),
        points,
        vec!["L".into(), "O".into()],
        Some("L".into()),
    ))
}

/// A single point with moment 0 and the trivial bundle `O`.
pub fn make_point(datum: &RootDatum) -> ManifoldSpec {
    let rank = datum.rank();
    let point = FixedPointDatum {
        id: "pt".into(),
        tangent: vec![],
        moment: RationalWeight::zero(rank),
        bundles: BTreeMap::from([("O".to_string(), vec![Weight::zero(rank)])]),
    };
    ManifoldSpec {
        name: "point".into(),
        datum: datum.clone(),
        points: vec![point],
        bundle_names: vec!["O".into()],
        zero_regular: false,
        moment_bundle: Some("O".into()),
    }
}

/// Name of the external product `E₁ ⊠ E₂`.
pub fn product_bundle_name(a: &str, b: &str) -> String {
    format!("{a}⊠{b}")
}

/// `M₁ × M₂` with the diagonal action: moments add and every pair of
/// bundles gives an external product.
pub fn product(m1: &ManifoldSpec, m2: &ManifoldSpec) -> Result<ManifoldSpec, GeometryError> {
    if m1.datum != m2.datum {
        return Err(GeometryError::DatumMismatch);
    }
    let mut points = Vec::new();
    for p in &m1.points {
        for q in &m2.points {
            let mut bundles = BTreeMap::new();
            for (b1, f1) in &p.bundles {
                for (b2, f2) in &q.bundles {
                    let fibers = f1.iter().flat_map(|x| f2.iter().map(move |y| x + y)).collect();
                    bundles.insert(product_bundle_name(b1, b2), fibers);
                }
            }
            points.push(FixedPointDatum {
                id: format!("{}.{}", p.id, q.id),
                tangent: p.tangent.iter().chain(&q.tangent).cloned().collect(),
                moment: p.moment.add(&q.moment),
                bundles,
            });
        }
    }
    let bundle_names = m1
        .bundle_names
        .iter()
        .flat_map(|a| m2.bundle_names.iter().map(move |b| product_bundle_name(a, b)))
        .collect();
    let moment_bundle = match (&m1.moment_bundle, &m2.moment_bundle) {
        (Some(a), Some(b)) => Some(product_bundle_name(a, b)),
        _ => None,
    };
    Ok(finish(
        format!("{}x{}", m1.name, m2.name),
        m1.datum.clone(),
        points,
        bundle_names,
        moment_bundle,
    ))
}

/// Name of the dual bundle: `L ↔ L^-1`.
pub fn dual_name(bundle: &str) -> String {
    match bundle.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{bundle}^-1"),
    }
}

/// Adds the dual of `bundle`. Dualizing the moment bundle also negates the
/// moment values, so that the dual becomes the moment bundle.
pub fn dual(spec: &ManifoldSpec, bundle: &str) -> Result<(ManifoldSpec, String), GeometryError> {
    spec.check_bundle(bundle)?;
    let name = dual_name(bundle);
    let fibers = spec
        .points
        .iter()
        .map(|p| Ok(p.fibers(bundle)?.iter().map(|a| -a).collect()))
        .collect::<Result<Vec<_>, GeometryError>>()?;
    let mut out = spec.clone().with_bundle(&name, fibers);
    if spec.moment_bundle.as_deref() == Some(bundle) {
        for p in &mut out.points {
            p.moment = p.moment.neg();
        }
        out.moment_bundle = Some(name.clone());
    }
    Ok((out, name))
}

/// Adds the `k`-th tensor power of a line bundle; moment values are kept.
pub fn tensor_power(
    spec: &ManifoldSpec,
    bundle: &str,
    k: i64,
) -> Result<(ManifoldSpec, String), GeometryError> {
    spec.check_bundle(bundle)?;
    let fibers = spec
        .points
        .iter()
        .map(|p| Ok(vec![p.line_fiber(bundle)?.scale(k)]))
        .collect::<Result<Vec<_>, GeometryError>>()?;
    if k == 1 {
        return Ok((spec.clone(), bundle.to_string()));
    }
    let name = if bundle.contains('^') {
        format!("({bundle})^{k}")
    } else {
        format!("{bundle}^{k}")
    };
    Ok((spec.clone().with_bundle(&name, fibers), name))
}
