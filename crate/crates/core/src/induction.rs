//! Characters of `G`: the Weyl character formula, holomorphic induction
//! `Hol^G_H` and decomposition of `W`-invariant torus characters.
//!
//! `Hol(h^λ)` is `sign(w)·χ_μ` when `w ∘ λ = μ` is dominant and `0` when
//! `λ + ρ` is singular. It is extended linearly to finite elements and to
//! truncated series; for the latter the exactness window is transported so
//! that no partially summed multiplicity is ever reported.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::characters::{
    wedge_dual, HalfSpace, LaurentElement, PolarizedSeries, Window, WindowedCharacter,
};
use crate::lattice_weyl::{DominantWitness, LatticeError, RootDatum, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("cutoff {bound} along {direction} leaves no exact dominant weight after induction")]
    CutoffNotInduceable { direction: Weight, bound: i64 },
    #[error("the subgroup datum is not a sub-datum of the group datum")]
    NotSubDatum,
    #[error("character is not Weyl invariant (weight {0})")]
    NotWeylInvariant(Weight),
    #[error("the zero weight lies outside the exactness window {0}")]
    ZeroOutsideWindow(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A virtual character `Σ m_λ χ_λ` of `G`, exact on `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GCharacter {
    datum: RootDatum,
    mults: BTreeMap<Weight, BigInt>,
    window: Window,
}

impl GCharacter {
    pub fn zero(datum: &RootDatum) -> Self {
        GCharacter {
            datum: datum.clone(),
            mults: BTreeMap::new(),
            window: Window::everywhere(),
        }
    }

    pub fn irreducible(datum: &RootDatum, lambda: Weight) -> Result<Self, InductionError> {
        Self::from_mults(datum, [(lambda, BigInt::from(1))])
    }

    pub fn from_mults<I>(datum: &RootDatum, mults: I) -> Result<Self, InductionError>
    where
        I: IntoIterator<Item = (Weight, BigInt)>,
    {
        let mut out = Self::zero(datum);
        for (lambda, m) in mults {
            datum.check_rank(&lambda)?;
            if !datum.is_dominant(&lambda) {
                return Err(InductionError::NotDominant(lambda));
            }
            out.add_mult(lambda, m);
        }
        Ok(out)
    }

    /// Restricts to a window, dropping multiplicities outside it.
    pub fn with_window(mut self, window: Window) -> Self {
        self.window = self.window.intersect(&window);
        let w = &self.window;
        self.mults.retain(|lambda, _| w.contains(lambda));
        self
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn mults(&self) -> &BTreeMap<Weight, BigInt> {
        &self.mults
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn is_zero(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn multiplicity(&self, lambda: &Weight) -> BigInt {
        self.mults.get(lambda).cloned().unwrap_or_default()
    }

    fn add_mult(&mut self, lambda: Weight, m: BigInt) {
        if m.is_zero() {
            return;
        }
        let entry = self.mults.entry(lambda).or_default();
        *entry += m;
        if entry.is_zero() {
            self.mults.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &GCharacter) -> GCharacter {
        let mut out = self.clone();
        for (lambda, m) in &other.mults {
            out.add_mult(lambda.clone(), m.clone());
        }
        out.with_window(other.window.clone())
    }

    pub fn neg(&self) -> GCharacter {
        GCharacter {
            mults: self.mults.iter().map(|(l, m)| (l.clone(), -m)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &GCharacter) -> GCharacter {
        self.add(&other.neg())
    }

    /// First dominant weight in the common window where the two differ.
    pub fn first_discrepancy(&self, other: &GCharacter) -> Option<Weight> {
        let diff = self.sub(other);
        diff.mults.keys().next().cloned()
    }
}

impl fmt::Display for GCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mults.is_empty() {
            return writeln!(f, "0");
        }
        for (lambda, m) in &self.mults {
            writeln!(f, "{m} * chi{lambda}")?;
        }
        Ok(())
    }
}

/// Restriction `χ_λ|_H`, as the exact quotient `J(h^{λ+ρ}) / J(h^ρ)`.
///
/// Both sides are multiplied by `h^{−ρ}` so that half-integral `ρ` (Levi
/// factors) stays in the lattice. Terms are ordered by `(⟨a, θ⟩, a)`, a total
/// order compatible with addition in which the denominator leads with `1`.
pub fn weyl_character(lambda: &Weight, datum: &RootDatum) -> Result<LaurentElement, InductionError> {
    datum.check_rank(lambda)?;
    if !datum.is_dominant(lambda) {
        return Err(InductionError::NotDominant(lambda.clone()));
    }
    let rank = datum.rank();
    let group = datum.weyl_group()?;
    let zero = Weight::zero(rank);
    let mut num = LaurentElement::zero(rank);
    let mut den = LaurentElement::zero(rank);
    for w in &group {
        num.add_term(datum.affine_action(w, lambda), BigInt::from(w.sign()));
        den.add_term(datum.affine_action(w, &zero), BigInt::from(w.sign()));
    }
    let theta = datum.gram().functional(datum.theta());
    let key = |a: &Weight| (a.eval(&theta), a.clone());
    let lead = |x: &LaurentElement| {
        x.terms()
            .iter()
            .max_by_key(|(a, _)| key(a))
            .map(|(a, c)| (a.clone(), c.clone()))
    };
    let (den_lead, den_coeff) = lead(&den).expect("denominator is nonzero");
    debug_assert!(den_lead.is_zero() && den_coeff == BigInt::from(1));

    let mut quotient = LaurentElement::zero(rank);
    let mut rem = num;
    while let Some((a, c)) = lead(&rem) {
        quotient.add_term(a.clone(), c.clone());
        rem = rem.sub(&den.shift(&a).scale(&c));
    }
    Ok(quotient)
}

/// `Hol(h^a)` as `(sign, μ)`, or `None` when `a + ρ` is singular.
pub fn hol_term(a: &Weight, datum: &RootDatum) -> Option<(i8, Weight)> {
    match datum.dominant_witness(a) {
        DominantWitness::Regular { element, dominant } => Some((element.sign(), dominant)),
        DominantWitness::Singular => None,
    }
}

/// Holomorphic induction of a finite torus character.
pub fn hol(x: &LaurentElement, datum: &RootDatum) -> GCharacter {
    let mut out = GCharacter::zero(datum);
    for (a, c) in x.terms() {
        if let Some((sign, mu)) = hol_term(a, datum) {
            out.add_mult(mu, c * sign);
        }
    }
    out
}

/// Image of an exactness half-space: if `⟨a, d⟩ ≤ C` then every `χ_μ` with
/// `⟨μ, d⁺⟩ ≤ C − ⟨ρ, d⁺ − d⟩` only receives terms from inside the slab.
pub fn induce_halfspace(h: &HalfSpace, datum: &RootDatum) -> Result<HalfSpace, InductionError> {
    let d = h.direction();
    let d_plus = datum.dominant_representative(d);
    let shift = datum.gram().pair(datum.theta(), &(&d_plus - d));
    let bound = h.bound() - Integer::div_ceil(&shift, &2);
    if bound < 0 {
        return Err(InductionError::CutoffNotInduceable {
            direction: d_plus,
            bound,
        });
    }
    Ok(HalfSpace::new(datum.gram(), d_plus, bound))
}

fn induce_window(window: &Window, datum: &RootDatum) -> Result<Window, InductionError> {
    let mut out = Window::everywhere();
    for h in window.halfspaces() {
        out.push(induce_halfspace(h, datum)?);
    }
    Ok(out)
}

/// Holomorphic induction of a character known on a window.
pub fn hol_windowed(x: &WindowedCharacter, datum: &RootDatum) -> Result<GCharacter, InductionError> {
    let window = induce_window(&x.window, datum)?;
    Ok(hol(&x.terms, datum).with_window(window))
}

/// Holomorphic induction of a truncated series.
pub fn hol_series(s: &PolarizedSeries, datum: &RootDatum) -> Result<GCharacter, InductionError> {
    hol_windowed(&s.to_windowed(), datum)
}

/// `Hol^G_{G_β}` of a character of the subgroup: since
/// `Hol^{G_β}_H(h^μ) = χ^{G_β}_μ`, transitivity gives `Σ m_μ Hol^G_H(h^μ)`.
pub fn hol_from_levi(v: &GCharacter, datum: &RootDatum) -> Result<GCharacter, InductionError> {
    if !datum.contains_sub_datum(v.datum()) {
        return Err(InductionError::NotSubDatum);
    }
    let x = LaurentElement::from_terms(datum.rank(), v.mults().clone());
    let window = induce_window(v.window(), datum)?;
    Ok(hol(&x, datum).with_window(window))
}

/// `Hol^G_H` computed as `Hol^G_{G_β} ∘ Hol^{G_β}_H`.
pub fn hol_via_subgroup(
    x: &WindowedCharacter,
    datum: &RootDatum,
    sub: &RootDatum,
) -> Result<GCharacter, InductionError> {
    if !datum.contains_sub_datum(sub) {
        return Err(InductionError::NotSubDatum);
    }
    hol_from_levi(&hol_windowed(x, sub)?, datum)
}

/// Multiplicities of a `W`-invariant character:
/// `m_λ = [h^λ](c · Π_{α>0}(1 − h^{−α}))` for dominant `λ`.
pub fn decompose_invariant(c: &LaurentElement, datum: &RootDatum) -> Result<GCharacter, InductionError> {
    for w in datum.weyl_group()? {
        let image = c.map_weights(|a| w.apply(a));
        if let Some(a) = image.sub(c).terms().keys().next() {
            return Err(InductionError::NotWeylInvariant(a.clone()));
        }
    }
    let prod = c.mul(&wedge_dual(datum.rank(), datum.positive_roots()));
    let mut out = GCharacter::zero(datum);
    for (a, m) in prod.terms() {
        if datum.is_dominant(a) {
            out.add_mult(a.clone(), m.clone());
        }
    }
    Ok(out)
}

/// `Σ m_λ χ_λ|_H`.
pub fn restrict(chi: &GCharacter) -> Result<LaurentElement, InductionError> {
    let mut out = LaurentElement::zero(chi.datum.rank());
    for (lambda, m) in &chi.mults {
        out = out.add(&weyl_character(lambda, &chi.datum)?.scale(m));
    }
    Ok(out)
}

/// Multiplicity `[χ]^G` of the trivial representation.
pub fn invariant_part(chi: &GCharacter) -> Result<BigInt, InductionError> {
    let zero = Weight::zero(chi.datum.rank());
    if !chi.window.contains(&zero) {
        return Err(InductionError::ZeroOutsideWindow(chi.window.to_string()));
    }
    Ok(chi.multiplicity(&zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_weyl::RationalWeight;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn poly(rank: usize, terms: &[(&[i64], i64)]) -> LaurentElement {
        LaurentElement::from_terms(rank, terms.iter().map(|(a, c)| (w(a), *c)))
    }

    fn chi(datum: &RootDatum, terms: &[(&[i64], i64)]) -> GCharacter {
        GCharacter::from_mults(datum, terms.iter().map(|(a, c)| (w(a), BigInt::from(*c)))).unwrap()
    }

    // independent oracle: (h^{λ+1} − h^{−λ−1}) / (h − h^{−1}) = Σ h^{λ−2k}
    fn su2_character(lambda: i64) -> LaurentElement {
        LaurentElement::from_terms(1, (0..=lambda).map(|k| (w(&[lambda - 2 * k]), 1)))
    }

    fn weyl_dimension(lambda: &Weight, d: &RootDatum) -> Ratio<i64> {
        let rho = d.rho().unwrap();
        d.positive_roots().iter().fold(Ratio::from_integer(1), |acc, a| {
            acc * Ratio::new(d.pair(&(lambda + rho), a), d.pair(rho, a))
        })
    }

    #[test]
    fn weyl_character_examples() {
        let su2 = RootDatum::su2();
        assert_eq!(weyl_character(&w(&[0]), &su2).unwrap(), LaurentElement::one(1));
        assert_eq!(weyl_character(&w(&[1]), &su2).unwrap(), poly(1, &[(&[1], 1), (&[-1], 1)]));
        assert_eq!(
            weyl_character(&w(&[2]), &su2).unwrap(),
            poly(1, &[(&[2], 1), (&[0], 1), (&[-2], 1)])
        );
        for l in 0..8 {
            assert_eq!(weyl_character(&w(&[l]), &su2).unwrap(), su2_character(l));
        }
        assert_eq!(
            weyl_character(&w(&[-1]), &su2),
            Err(InductionError::NotDominant(w(&[-1])))
        );
        // adjoint of SU(3): six roots and the zero weight twice
        let a2 = RootDatum::a2();
        let adj = weyl_character(&w(&[1, 1]), &a2).unwrap();
        assert_eq!(adj.coeff(&w(&[0, 0])), BigInt::from(2));
        assert_eq!(adj.len(), 7);
    }

    #[test]
    fn weyl_dimension_formula() {
        for d in [RootDatum::a2(), RootDatum::b2(), RootDatum::g2(), RootDatum::a1_a1()] {
            for x in 0..=3 {
                for y in 0..=3 {
                    let lambda = w(&[x, y]);
                    let c = weyl_character(&lambda, &d).unwrap();
                    let dim: BigInt = c.terms().values().sum();
                    assert_eq!(Ratio::from_integer(i64::try_from(dim).unwrap()), weyl_dimension(&lambda, &d));
                }
            }
        }
    }

    #[test]
    fn hol_examples() {
        let su2 = RootDatum::su2();
        assert_eq!(hol(&LaurentElement::one(1), &su2), chi(&su2, &[(&[0], 1)]));
        assert!(hol(&poly(1, &[(&[-1], 1)]), &su2).is_zero());
        assert_eq!(hol(&poly(1, &[(&[-2], 1)]), &su2), chi(&su2, &[(&[0], -1)]));
    }

    #[test]
    fn hol_series_transports_the_window() {
        let su2 = RootDatum::su2();
        // Σ_{k≥1} h^{−2k} along direction (−1), cutoff 9
        let terms = LaurentElement::from_terms(1, (1..=4).map(|k| (w(&[-2 * k]), 1)));
        let s = PolarizedSeries::from_laurent(su2.gram(), w(&[-1]), &terms, 9);
        let g = hol_series(&s, &su2).unwrap();
        // h^{−2k} ↦ −χ_{2k−2}; exact for ⟨μ, 1⟩ ≤ 9 − 2
        assert_eq!(g.window().halfspaces()[0].bound(), 7);
        assert_eq!(g, chi(&su2, &[(&[0], -1), (&[2], -1), (&[4], -1), (&[6], -1)]).with_window(g.window().clone()));
        let tight = PolarizedSeries::from_laurent(su2.gram(), w(&[-1]), &terms, 1);
        assert!(matches!(hol_series(&tight, &su2), Err(InductionError::CutoffNotInduceable { .. })));
    }

    #[test]
    fn subgroup_route() {
        let su2 = RootDatum::su2();
        let x = WindowedCharacter::exact(poly(1, &[(&[-2], 1), (&[3], 2), (&[-1], 5)]));
        let torus = RootDatum::torus(1);
        assert_eq!(hol_via_subgroup(&x, &su2, &torus).unwrap(), hol(&x.terms, &su2));
        assert_eq!(hol_via_subgroup(&x, &su2, &su2).unwrap(), hol(&x.terms, &su2));
        let v = chi(&su2, &[(&[2], 3)]);
        assert_eq!(hol_from_levi(&v, &su2).unwrap(), v);
        assert_eq!(
            hol_via_subgroup(&x, &torus, &su2),
            Err(InductionError::NotSubDatum)
        );
    }

    #[test]
    fn a2_levi_induction() {
        let a2 = RootDatum::a2();
        let levi = a2.levi(&RationalWeight::from(&w(&[0, 1])));
        let outside: Vec<Weight> = a2
            .positive_roots()
            .iter()
            .filter(|r| !levi.positive_roots().contains(r))
            .cloned()
            .collect();
        assert_eq!(outside.len(), 2);
        let wedge = wedge_dual(2, &outside);
        // χ_0 ⊗ ∧•(g/g_β) as a character of the Levi factor
        let v = decompose_invariant(&wedge, &levi).unwrap();
        let direct = hol(&wedge, &a2);
        assert_eq!(hol_from_levi(&v, &a2).unwrap(), direct);
        // term by term: 1 ↦ χ_0, −h^{−α_2} ↦ χ_0, h^{−α_1−α_2} singular, h^{−α_1−2α_2} ↦ χ_0
        assert_eq!(direct, chi(&a2, &[(&[0, 0], 3)]));
        assert_eq!(hol_from_levi(&chi(&levi, &[(&[0, 0], 1)]), &a2).unwrap(), chi(&a2, &[(&[0, 0], 1)]));
    }

    #[test]
    fn decomposition_examples() {
        let su2 = RootDatum::su2();
        assert_eq!(decompose_invariant(&LaurentElement::one(1), &su2).unwrap(), chi(&su2, &[(&[0], 1)]));
        assert_eq!(
            decompose_invariant(&poly(1, &[(&[1], 1), (&[-1], 1)]), &su2).unwrap(),
            chi(&su2, &[(&[1], 1)])
        );
        let c = poly(1, &[(&[2], 1), (&[0], 2), (&[-2], 1)]);
        assert_eq!(decompose_invariant(&c, &su2).unwrap(), chi(&su2, &[(&[2], 1), (&[0], 1)]));
        assert_eq!(
            decompose_invariant(&poly(1, &[(&[1], 1)]), &su2),
            Err(InductionError::NotWeylInvariant(w(&[-1])))
        );
    }

    #[test]
    fn restriction_and_invariant_part() {
        let su2 = RootDatum::su2();
        assert_eq!(restrict(&chi(&su2, &[(&[0], 1)])).unwrap(), LaurentElement::one(1));
        assert_eq!(restrict(&chi(&su2, &[(&[1], 1)])).unwrap(), poly(1, &[(&[1], 1), (&[-1], 1)]));
        assert_eq!(invariant_part(&chi(&su2, &[(&[0], 1)])).unwrap(), BigInt::from(1));
        for k in 2..6 {
            assert!(invariant_part(&chi(&su2, &[(&[2 * (k - 1)], -1)])).unwrap().is_zero());
        }
        assert_eq!(invariant_part(&chi(&su2, &[(&[0], 3), (&[2], -1)])).unwrap(), BigInt::from(3));
        let outside = chi(&su2, &[(&[0], 1)])
            .with_window(Window::from_halfspaces(vec![HalfSpace::new(su2.gram(), w(&[-1]), -1)]));
        assert!(matches!(invariant_part(&outside), Err(InductionError::ZeroOutsideWindow(_))));
    }

    #[test]
    fn text_form() {
        let su2 = RootDatum::su2();
        assert_eq!(chi(&su2, &[(&[2], -1), (&[0], 3)]).to_string(), "3 * chi[0]\n-1 * chi[2]\n");
        assert_eq!(GCharacter::zero(&su2).to_string(), "0\n");
    }

    fn rank_two() -> Vec<RootDatum> {
        vec![RootDatum::a2(), RootDatum::b2(), RootDatum::g2(), RootDatum::a1_a1()]
    }

    #[test]
    fn vanishing_criterion_and_chamber_remark() {
        let mut data = rank_two();
        data.push(RootDatum::su2());
        for d in data {
            let r = d.rank();
            let range: Vec<i64> = (-5..=5).collect();
            let points: Vec<Weight> = if r == 1 {
                range.iter().map(|&x| w(&[x])).collect()
            } else {
                range.iter().flat_map(|&x| range.iter().map(move |&y| w(&[x, y]))).collect()
            };
            let dominant: Vec<&Weight> = points.iter().filter(|p| d.is_dominant(p)).collect();
            for lambda in &points {
                let g = hol(&LaurentElement::monomial(lambda.clone(), 1), &d);
                let shifted = lambda + d.rho().unwrap();
                let singular = d.positive_roots().iter().any(|a| d.pair(&shifted, a) == 0);
                assert_eq!(g.is_zero(), singular, "{lambda}");
                if !invariant_part(&g).unwrap().is_zero() {
                    assert!(dominant.iter().all(|x| d.pair(lambda, x) <= 0), "{lambda}");
                }
            }
        }
    }

    fn small_character() -> impl Strategy<Value = (usize, Vec<((i64, i64), i64)>)> {
        (0usize..4, prop::collection::vec(((0i64..=3, 0i64..=3), -3i64..=3), 0..4))
    }

    proptest! {
        #[test]
        fn sign_rule(x in -6i64..=6, y in -6i64..=6) {
            for d in rank_two() {
                let lambda = w(&[x, y]);
                let base = hol(&LaurentElement::monomial(lambda.clone(), 1), &d);
                for e in d.weyl_group().unwrap() {
                    let moved = hol(&LaurentElement::monomial(d.affine_action(&e, &lambda), 1), &d);
                    let expected = if e.sign() == 1 { base.clone() } else { base.neg() };
                    prop_assert_eq!(moved, expected);
                }
            }
        }

        #[test]
        fn weyl_integration_round_trip((which, terms) in small_character()) {
            let d = rank_two().swap_remove(which);
            let c = GCharacter::from_mults(
                &d,
                terms.iter().map(|((x, y), m)| (w(&[*x, *y]), BigInt::from(*m))),
            ).unwrap();
            let r = restrict(&c).unwrap();
            prop_assert_eq!(hol(&r, &d), c.clone());
            prop_assert_eq!(decompose_invariant(&r, &d).unwrap(), c);
        }
    }
}
