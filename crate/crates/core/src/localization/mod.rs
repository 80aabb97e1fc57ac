//! Fixed-point localization of Riemann–Roch characters.
//!
//! The character `RR(M, E)` is the sum over fixed points of
//! `h^ξ · [∧•T̄_p]^{-1}_γ` for any generic direction `γ`; the infinite tails
//! cancel and a Laurent polynomial remains. Polarizing each point by its own
//! moment value instead gives the localized characters `RR_β`, and what is
//! left over is the contribution `RR_0` of the zero level set.
//!
//! Cutoffs passed to whole-spec operations are measured in units of the
//! level envelope `max_p (max_ξ |⟨ξ, d⟩| + Σ_j |⟨α_j, d⟩|)`, which bounds the
//! levels of the polynomial and the floors of every point contribution.
//! [`point_contribution`] takes an absolute level cutoff.

pub mod report;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::characters::{
    polarized_inverse, CharacterError, LaurentElement, PolarizedSeries, Window, WindowedCharacter,
};
use crate::geometry::{critical_set, FixedPointDatum, GeometryError, ManifoldSpec};
use crate::induction::{decompose_invariant, hol_series, hol_windowed, GCharacter, InductionError};
use crate::lattice_weyl::{Gram, LatticeError, Rational, RationalWeight, RootDatum, Weight};

pub use report::{verify, Status, VerificationRecord, VerificationReport, VerifyOptions};

/// Cutoff, in envelope units, used where an operation takes none.
pub const DEFAULT_CUTOFF: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("tangent weight {weight} at point {point} is orthogonal to {direction}")]
    OrthogonalWeight {
        point: String,
        weight: Weight,
        direction: Weight,
    },
    #[error("tails did not cancel: nonzero coefficient at level {level} above {threshold}")]
    TailNotCancelled { level: i64, threshold: i64 },
    #[error("no fixed point has moment value {0}")]
    EmptyStratum(RationalWeight),
    #[error("the family does not contain the full Weyl orbit of {0}")]
    IncompleteOrbit(RationalWeight),
    #[error("the root datum is not that of SU(2)")]
    NotSU2,
    #[error("the character is not Weyl invariant (weight {0})")]
    NotWeylInvariant(Weight),
    #[error("cutoff must be at least 1")]
    InvalidCutoff,
    #[error("no generic direction with coordinates of size at most 4")]
    NoGenericDirection,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Induction(#[from] InductionError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

type Result<T> = std::result::Result<T, LocalizationError>;

fn check_direction(p: &FixedPointDatum, gram: &Gram, d: &Weight) -> Result<()> {
    let f = gram.functional(d);
    match p.tangent.iter().find(|a| a.eval(&f) == 0) {
        Some(a) => Err(LocalizationError::OrthogonalWeight {
            point: p.id.clone(),
            weight: a.clone(),
            direction: d.clone(),
        }),
        None => Ok(()),
    }
}

/// `(Σ_ξ h^ξ) · [∧•T̄_p]^{-1}_γ` with every coefficient exact up to `cutoff`.
pub fn point_contribution(
    p: &FixedPointDatum,
    bundle: &str,
    gram: &Gram,
    direction: &Weight,
    cutoff: i64,
) -> Result<PolarizedSeries> {
    check_direction(p, gram, direction)?;
    let rank = direction.rank();
    let fibers = LaurentElement::from_terms(rank, p.fibers(bundle)?.iter().map(|a| (a.clone(), 1)));
    let f = gram.functional(direction);
    let lowest = fibers.level_range(&f).map_or(0, |(lo, _)| lo);
    let inverse = polarized_inverse(gram, &p.tangent, direction, cutoff - lowest)?;
    Ok(inverse.mul_laurent(&fibers).truncate(cutoff))
}

/// The level envelope of a bundle along `d`; at least 1.
pub fn level_unit(spec: &ManifoldSpec, bundle: &str, d: &Weight) -> Result<i64> {
    let f = spec.gram().functional(d);
    let mut unit = 1;
    for p in &spec.points {
        let fiber = p.fibers(bundle)?.iter().map(|a| a.eval(&f).abs()).max().unwrap_or(0);
        let tangent: i64 = p.tangent.iter().map(|a| a.eval(&f).abs()).sum();
        unit = unit.max(fiber + tangent);
    }
    Ok(unit)
}

/// Sum of point contributions, computed in parallel and reduced in point order.
fn contribution_sum(
    spec: &ManifoldSpec,
    points: &[usize],
    bundle: &str,
    direction: &Weight,
    cutoff: i64,
) -> Result<PolarizedSeries> {
    let gram = spec.gram();
    let parts = points
        .par_iter()
        .map(|&i| point_contribution(&spec.points[i], bundle, gram, direction, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = PolarizedSeries::zero(gram, direction.clone(), cutoff);
    for part in &parts {
        sum = sum.add(part)?;
    }
    Ok(sum)
}

fn absolute_cutoff(spec: &ManifoldSpec, bundle: &str, d: &Weight, cutoff: i64) -> Result<i64> {
    if cutoff < 1 {
        return Err(LocalizationError::InvalidCutoff);
    }
    Ok(cutoff * level_unit(spec, bundle, d)?)
}

/// Upper bound for the levels of the polynomial: expanding every point in
/// the opposite direction puts its support at or below
/// `max_ξ ⟨ξ, d⟩ − Σ_{⟨α,d⟩<0} |⟨α, d⟩|`.
fn top_level_bound(spec: &ManifoldSpec, bundle: &str, d: &Weight) -> Result<i64> {
    let f = spec.gram().functional(d);
    let mut bound = i64::MIN;
    for p in &spec.points {
        let Some(top) = p.fibers(bundle)?.iter().map(|a| a.eval(&f)).max() else {
            continue;
        };
        let drop: i64 = p.tangent.iter().map(|a| a.eval(&f)).filter(|&l| l < 0).sum();
        bound = bound.max(top + drop);
    }
    Ok(bound)
}

/// `RR(M, E)` restricted to `H`, as a Laurent polynomial.
///
/// Fails with `TailNotCancelled` if a nonzero coefficient survives in the top
/// third of the exact slab or above the level bound of the polynomial; for a nonabelian datum the result is also checked to
/// be `W`-invariant.
pub fn rr_character(
    spec: &ManifoldSpec,
    bundle: &str,
    direction: &Weight,
    cutoff: i64,
) -> Result<LaurentElement> {
    spec.check_bundle(bundle)?;
    spec.datum.check_rank(direction)?;
    let c = absolute_cutoff(spec, bundle, direction, cutoff)?;
    let all: Vec<usize> = (0..spec.points.len()).collect();
    let sum = contribution_sum(spec, &all, bundle, direction, c)?;
    let threshold = (c - (c - sum.floor()).max(0) / 3).min(top_level_bound(spec, bundle, direction)?);
    let top = sum
        .terms()
        .terms()
        .keys()
        .map(|a| sum.level(a))
        .filter(|&l| l > threshold)
        .max();
    if let Some(level) = top {
        return Err(LocalizationError::TailNotCancelled { level, threshold });
    }
    let poly = sum.terms().clone();
    if !spec.datum.is_torus() {
        for w in spec.datum.weyl_group()? {
            let image = poly.map_weights(|a| w.apply(a));
            if let Some(a) = image.sub(&poly).terms().keys().next() {
                return Err(LocalizationError::NotWeylInvariant(a.clone()));
            }
        }
    }
    Ok(poly)
}

/// `RR^G(M, E)` as a combination of irreducible characters.
pub fn rr_g(spec: &ManifoldSpec, bundle: &str, direction: &Weight, cutoff: i64) -> Result<GCharacter> {
    let poly = rr_character(spec, bundle, direction, cutoff)?;
    Ok(decompose_invariant(&poly, &spec.datum)?)
}

/// A β-localized character over `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedCharacter {
    /// The moment value of the stratum.
    pub beta: RationalWeight,
    /// Polarization and truncation direction: the primitive lattice vector
    /// along `β`, augmented by the tie-break when one was needed.
    pub direction: Weight,
    pub tiebreak: Option<Weight>,
    pub series: PolarizedSeries,
    pub provenance: Vec<String>,
}

/// Direction polarizing every tangent weight at the given points like `β`,
/// with ties `⟨α, β⟩ = 0` broken by the sign of `⟨α, γ'⟩`.
fn stratum_direction(
    spec: &ManifoldSpec,
    points: &[usize],
    beta: &RationalWeight,
    tiebreak: Option<&Weight>,
) -> Result<(Weight, Option<(Weight, i64)>)> {
    let gram = spec.gram();
    let b = beta.primitive_lattice_direction();
    let fb = gram.functional(&b);
    let weights: Vec<(&FixedPointDatum, &Weight)> = points
        .iter()
        .flat_map(|&i| spec.points[i].tangent.iter().map(move |a| (&spec.points[i], a)))
        .collect();
    let ties: Vec<&(&FixedPointDatum, &Weight)> =
        weights.iter().filter(|(_, a)| a.eval(&fb) == 0).collect();
    let Some(&&(p, a)) = ties.first() else {
        return Ok((b, None));
    };
    let Some(t) = tiebreak else {
        return Err(LocalizationError::OrthogonalWeight {
            point: p.id.clone(),
            weight: a.clone(),
            direction: b,
        });
    };
    spec.datum.check_rank(t)?;
    let ft = gram.functional(t);
    if let Some((p, a)) = ties.iter().find(|(_, a)| a.eval(&ft) == 0) {
        return Err(LocalizationError::OrthogonalWeight {
            point: p.id.clone(),
            weight: (*a).clone(),
            direction: t.clone(),
        });
    }
    // |N⟨α,b⟩| ≥ N > |⟨α,γ'⟩| whenever ⟨α,b⟩ ≠ 0
    let n = weights.iter().map(|(_, a)| a.eval(&ft).abs()).max().unwrap_or(0) + 1;
    Ok((&b.scale(n) + t, Some((t.clone(), n))))
}

fn stratum_points(spec: &ManifoldSpec, beta: &RationalWeight) -> Vec<usize> {
    spec.points
        .iter()
        .enumerate()
        .filter(|(_, p)| &p.moment == beta)
        .map(|(i, _)| i)
        .collect()
}

/// `RR^H_β(M, E)` for a nonzero moment value `β`.
pub fn rr_localized(
    spec: &ManifoldSpec,
    bundle: &str,
    beta: &RationalWeight,
    tiebreak: Option<&Weight>,
    cutoff: i64,
) -> Result<LocalizedCharacter> {
    spec.check_bundle(bundle)?;
    let points = stratum_points(spec, beta);
    if beta.is_zero() || points.is_empty() {
        return Err(LocalizationError::EmptyStratum(beta.clone()));
    }
    let (direction, tie) = stratum_direction(spec, &points, beta, tiebreak)?;
    let c = absolute_cutoff(spec, bundle, &direction, cutoff)?;
    let series = contribution_sum(spec, &points, bundle, &direction, c)?;
    let mut provenance: Vec<String> = points.iter().map(|&i| spec.points[i].id.clone()).collect();
    if let Some((t, n)) = &tie {
        provenance.push(format!("tiebreak {t} scaled by {n}"));
    }
    Ok(LocalizedCharacter {
        beta: beta.clone(),
        direction,
        tiebreak: tie.map(|(t, _)| t),
        series,
        provenance,
    })
}

/// The localized characters of one Weyl orbit of moment values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedStratum {
    /// Dominant representative.
    pub beta: RationalWeight,
    pub members: Vec<LocalizedCharacter>,
}

/// `RR = RR_0 + Σ_{β≠0} RR_β` over `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub direction: Weight,
    pub total: LaurentElement,
    pub strata: Vec<LocalizedStratum>,
    /// `RR_0`, exact on the intersection of the strata windows.
    pub zero: WindowedCharacter,
    /// `RR_0` recomputed point by point as `Σ_p (contrib_γ(p) − contrib_{f(p)}(p))`.
    pub zero_pointwise: WindowedCharacter,
}

impl Decomposition {
    /// The window on which every localized character is exact.
    pub fn window(&self) -> &Window {
        &self.zero.window
    }

    pub fn members(&self) -> impl Iterator<Item = &LocalizedCharacter> {
        self.strata.iter().flat_map(|s| s.members.iter())
    }
}

/// Computes the full decomposition; `RR_0` is obtained by subtraction.
pub fn decompose(
    spec: &ManifoldSpec,
    bundle: &str,
    direction: &Weight,
    tiebreak: Option<&Weight>,
    cutoff: i64,
) -> Result<Decomposition> {
    let total = rr_character(spec, bundle, direction, cutoff)?;
    let mut strata = Vec::new();
    for s in critical_set(spec).into_iter().filter(|s| !s.is_zero()) {
        let members = s
            .members
            .iter()
            .map(|m| rr_localized(spec, bundle, &m.beta, tiebreak, cutoff))
            .collect::<Result<Vec<_>>>()?;
        strata.push(LocalizedStratum {
            beta: s.beta,
            members,
        });
    }
    let mut window = Window::everywhere();
    let mut localized = LaurentElement::zero(spec.rank());
    for m in strata.iter().flat_map(|s| &s.members) {
        window.push(m.series.halfspace());
        localized = localized.add(m.series.terms());
    }
    let zero = WindowedCharacter::new(&window.restrict(&total.sub(&localized)), window.clone());

    // point by point, on the window intersected with the γ-slab
    let c = absolute_cutoff(spec, bundle, direction, cutoff)?;
    let mut pointwise = LaurentElement::zero(spec.rank());
    let mut pw_window = window.clone();
    let all: Vec<usize> = (0..spec.points.len()).collect();
    let generic = contribution_sum(spec, &all, bundle, direction, c)?;
    pw_window.push(generic.halfspace());
    pointwise = pointwise.add(generic.terms());
    for m in strata.iter().flat_map(|s| &s.members) {
        pointwise = pointwise.sub(m.series.terms());
    }
    let zero_pointwise = WindowedCharacter::new(&pointwise, pw_window);

    Ok(Decomposition {
        direction: direction.clone(),
        total,
        strata,
        zero,
        zero_pointwise,
    })
}

/// `RR_0` with the window on which it is exact.
pub fn rr_localized_zero(
    spec: &ManifoldSpec,
    bundle: &str,
    direction: &Weight,
    tiebreak: Option<&Weight>,
    cutoff: i64,
) -> Result<WindowedCharacter> {
    Ok(decompose(spec, bundle, direction, tiebreak, cutoff)?.zero)
}

fn weyl_orbit(datum: &RootDatum, beta: &RationalWeight) -> Result<BTreeSet<RationalWeight>> {
    Ok(datum
        .weyl_group()?
        .iter()
        .map(|w| w.apply_rational(beta))
        .collect())
}

/// `RR^G_β = Σ_{β' ∈ W·β} Hol(RR^H_{β'})`.
pub fn induce_localized(members: &[LocalizedCharacter], datum: &RootDatum) -> Result<GCharacter> {
    let Some(first) = members.first() else {
        return Ok(GCharacter::zero(datum));
    };
    let orbit = weyl_orbit(datum, &first.beta)?;
    let present: BTreeSet<RationalWeight> = members.iter().map(|m| m.beta.clone()).collect();
    if present != orbit {
        return Err(LocalizationError::IncompleteOrbit(first.beta.clone()));
    }
    let mut out = GCharacter::zero(datum);
    for m in members {
        out = out.add(&hol_series(&m.series, datum)?);
    }
    Ok(out)
}

/// The decomposition after holomorphic induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedDecomposition {
    pub total: GCharacter,
    pub strata: Vec<(RationalWeight, GCharacter)>,
    pub zero: GCharacter,
}

pub fn induce_decomposition(dec: &Decomposition, datum: &RootDatum) -> Result<InducedDecomposition> {
    let total = decompose_invariant(&dec.total, datum)?;
    let strata = dec
        .strata
        .iter()
        .map(|s| Ok((s.beta.clone(), induce_localized(&s.members, datum)?)))
        .collect::<Result<Vec<_>>>()?;
    let zero = hol_windowed(&dec.zero, datum)?;
    Ok(InducedDecomposition {
        total,
        strata,
        zero,
    })
}

/// `η_{E,β} = min ⟨ξ, β⟩` over the fibers at the points with moment `β`.
pub fn eta(spec: &ManifoldSpec, bundle: &str, beta: &RationalWeight) -> Result<Rational> {
    let points = stratum_points(spec, beta);
    let gram = spec.gram();
    let mut best: Option<Rational> = None;
    for &i in &points {
        for xi in spec.points[i].fibers(bundle)? {
            let v = gram.pair_rational(xi, beta);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best.ok_or_else(|| LocalizationError::EmptyStratum(beta.clone()))
}

/// Positivity data of a bundle along a nonzero stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub beta: RationalWeight,
    pub eta: Rational,
    pub theta_pairing: Rational,
    pub strictly_positive: bool,
    /// Smallest `k` with `k·η > ⟨θ, β⟩`, when `η > 0`.
    pub minimal_k: Option<i64>,
}

impl Certificate {
    /// Whether `k·η > ⟨θ, β⟩`, the condition forcing `[RR^G_β]^G = 0`.
    pub fn holds_for(&self, k: i64) -> bool {
        self.eta * k > self.theta_pairing
    }
}

pub fn positivity_certificate(
    spec: &ManifoldSpec,
    bundle: &str,
    beta: &RationalWeight,
) -> Result<Certificate> {
    spec.check_bundle(bundle)?;
    if beta.is_zero() {
        return Err(LocalizationError::EmptyStratum(beta.clone()));
    }
    let eta = eta(spec, bundle, beta)?;
    let theta_pairing = spec.gram().pair_rational(spec.datum.theta(), beta);
    let strictly_positive = eta.is_positive();
    let minimal_k = strictly_positive.then(|| (theta_pairing / eta).floor().to_integer() + 1);
    Ok(Certificate {
        beta: beta.clone(),
        eta,
        theta_pairing,
        strictly_positive,
        minimal_k,
    })
}

/// Every term `a` of the localized series satisfies `⟨a, β⟩ ≥ η`.
pub fn multiplicity_support_check(gram: &Gram, localized: &LocalizedCharacter, eta: Rational) -> bool {
    localized
        .series
        .terms()
        .terms()
        .keys()
        .all(|a| gram.pair_rational(a, &localized.beta) >= eta)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityReport {
    pub rigid: bool,
    /// Number of fibers over the points where every tangent weight pairs
    /// negatively with `γ`.
    pub constant: Option<i64>,
    /// Whether the computed character equals the constant.
    pub verified: bool,
}

/// For a bundle with trivial fibers the character is a constant.
pub fn rigidity_check(spec: &ManifoldSpec, bundle: &str, direction: &Weight) -> Result<RigidityReport> {
    spec.check_bundle(bundle)?;
    let mut rigid = true;
    for p in &spec.points {
        rigid &= p.fibers(bundle)?.iter().all(Weight::is_zero);
    }
    if !rigid {
        return Ok(RigidityReport {
            rigid,
            constant: None,
            verified: true,
        });
    }
    let f = spec.gram().functional(direction);
    let mut constant = 0i64;
    for p in &spec.points {
        if p.tangent.iter().all(|a| a.eval(&f) < 0) {
            constant += p.fibers(bundle)?.len() as i64;
        }
    }
    let poly = rr_character(spec, bundle, direction, DEFAULT_CUTOFF)?;
    let expected = LaurentElement::one(spec.rank()).scale(&BigInt::from(constant));
    Ok(RigidityReport {
        rigid,
        constant: Some(constant),
        verified: poly == expected,
    })
}

/// The simple root of a rank-one datum with a single positive root.
pub fn su2_root(datum: &RootDatum) -> Result<&Weight> {
    match datum.positive_roots() {
        [alpha] if datum.rank() == 1 => Ok(alpha),
        _ => Err(LocalizationError::NotSU2),
    }
}

/// `Θ(E)`: the contributions of the fixed points with positive moment,
/// polarized by the positive direction.
pub fn su2_theta(spec: &ManifoldSpec, bundle: &str, cutoff: i64) -> Result<PolarizedSeries> {
    let alpha = su2_root(&spec.datum)?;
    spec.check_bundle(bundle)?;
    let d = Weight::new(vec![1]);
    let c = absolute_cutoff(spec, bundle, &d, cutoff)?;
    let positive: Vec<usize> = spec
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| spec.gram().pair_rational(alpha, &p.moment).is_positive())
        .map(|(i, _)| i)
        .collect();
    contribution_sum(spec, &positive, bundle, &d, c)
}

/// `Hol(Θ(E) · (1 − h^{−α}))`.
pub fn su2_theta_induced(spec: &ManifoldSpec, bundle: &str, cutoff: i64) -> Result<GCharacter> {
    let alpha = su2_root(&spec.datum)?;
    let theta = su2_theta(spec, bundle, cutoff)?;
    let factor = LaurentElement::from_terms(1, [(Weight::zero(1), 1), (-alpha, -1)]);
    Ok(hol_series(&theta.mul_laurent(&factor), &spec.datum)?)
}

/// Generic directions for every fixed point, primitive vectors first, then
/// by size, preferring positive coordinates.
pub fn generic_directions(spec: &ManifoldSpec, count: usize) -> Vec<Weight> {
    let r = spec.rank();
    let radius = 4i64;
    let mut candidates: Vec<Weight> = Vec::new();
    let mut current = vec![-radius; r];
    loop {
        let w = Weight::new(current.clone());
        if !w.is_zero() {
            candidates.push(w);
        }
        let mut i = 0;
        while i < r && current[i] == radius {
            current[i] = -radius;
            i += 1;
        }
        if i == r {
            break;
        }
        current[i] += 1;
    }
    let gcd = |w: &Weight| {
        w.coords()
            .iter()
            .fold(0i64, |g, &c| num_integer::Integer::gcd(&g, &c))
    };
    candidates.sort_by_key(|w| {
        let size = w.coords().iter().map(|c| c.abs()).max().unwrap_or(0);
        let neg: Vec<i64> = w.coords().iter().map(|c| -c).collect();
        (gcd(w) != 1, size, neg)
    });
    candidates
        .into_iter()
        .filter(|d| spec.points.iter().all(|p| check_direction(p, spec.gram(), d).is_ok()))
        .take(count)
        .collect()
}

/// `k·[RR_0]^G` style helper: the coefficient of the zero weight.
pub fn zero_coefficient(x: &WindowedCharacter) -> Option<BigInt> {
    let zero = Weight::zero(x.terms.rank());
    x.window.contains(&zero).then(|| x.terms.coeff(&zero))
}
