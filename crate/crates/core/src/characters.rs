//! The character ring `R(H)` of the maximal torus and slab-truncated elements
//! of its completion.
//!
//! A [`LaurentElement`] is a finite integer combination of characters `h^a`.
//! A [`PolarizedSeries`] stands for an infinite formal sum whose support is
//! bounded below along a direction `d`; only the terms with level
//! `⟨a, d⟩ ≤ cutoff` are stored, and every stored coefficient is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice_weyl::{Gram, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("series directions differ: {0} vs {1}")]
    DirectionMismatch(Weight, Weight),
    #[error("weight {weight} is orthogonal to the direction {direction}")]
    OrthogonalWeight { weight: Weight, direction: Weight },
    #[error("sign {sign} does not match the sign of the pairing of {weight} with {direction}")]
    SignMismatch {
        weight: Weight,
        direction: Weight,
        sign: i8,
    },
    #[error("expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("cannot parse term {0:?}")]
    Parse(String),
}

/// A finite element `Σ m_a h^a` of `R(H)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    rank: usize,
    terms: BTreeMap<Weight, BigInt>,
}

impl LaurentElement {
    pub fn zero(rank: usize) -> Self {
        LaurentElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), 1)
    }

    pub fn monomial(a: Weight, coeff: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(a.rank());
        x.add_term(a, coeff.into());
        x
    }

    pub fn from_terms<I, C>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Weight, C)>,
        C: Into<BigInt>,
    {
        let mut x = Self::zero(rank);
        for (a, c) in terms {
            x.add_term(a, c.into());
        }
        x
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Weight, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &Weight) -> BigInt {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, a: Weight, c: BigInt) {
        debug_assert_eq!(a.rank(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentElement) -> LaurentElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> LaurentElement {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentElement) -> LaurentElement {
        let mut out = Self::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Multiplication by `h^a`.
    pub fn shift(&self, a: &Weight) -> LaurentElement {
        LaurentElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(b, c)| (b + a, c.clone())).collect(),
        }
    }

    /// Image under a map of the lattice, e.g. a Weyl group element.
    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> LaurentElement {
        let mut out = Self::zero(self.rank);
        for (a, c) in &self.terms {
            out.add_term(f(a), c.clone());
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Weight) -> bool) -> LaurentElement {
        LaurentElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest and largest level `⟨a, d⟩` over the support.
    pub fn level_range(&self, functional: &[i64]) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|a| a.eval(functional));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), l| (lo.min(l), hi.max(l))))
    }

    /// Parses the text form with an explicit rank, so that `0` is accepted.
    pub fn parse_with_rank(s: &str, rank: usize) -> Result<Self, CharacterError> {
        let mut out = Self::zero(rank);
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "0" {
                continue;
            }
            let (c, a) = parse_term(line, "h^")?;
            if a.rank() != rank {
                return Err(CharacterError::RankMismatch {
                    expected: rank,
                    got: a.rank(),
                });
            }
            out.add_term(a, c);
        }
        Ok(out)
    }
}

pub(crate) fn parse_term(line: &str, marker: &str) -> Result<(BigInt, Weight), CharacterError> {
    let err = || CharacterError::Parse(line.to_string());
    let (c, rest) = line.split_once('*').ok_or_else(err)?;
    let c: BigInt = c.trim().parse().map_err(|_| err())?;
    let rest = rest.trim().strip_prefix(marker).ok_or_else(err)?;
    let inner = rest
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(err)?;
    let coords = if inner.trim().is_empty() {
        vec![]
    } else {
        inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok((c, Weight::new(coords)))
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (a, c) in &self.terms {
            writeln!(f, "{c} * h^{a}")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentElement {
    type Err = CharacterError;

    /// The rank is read off the first term; the zero element parses as rank 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rank = s
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && *l != "0")
            .map(|l| parse_term(l, "h^").map(|(_, a)| a.rank()))
            .transpose()?
            .unwrap_or(0);
        Self::parse_with_rank(s, rank)
    }
}

/// The constraint `⟨a, direction⟩ ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    direction: Weight,
    functional: Vec<i64>,
    bound: i64,
}

impl HalfSpace {
    pub fn new(gram: &Gram, direction: Weight, bound: i64) -> Self {
        let functional = gram.functional(&direction);
        HalfSpace {
            direction,
            functional,
            bound,
        }
    }

    pub fn direction(&self) -> &Weight {
        &self.direction
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn level(&self, a: &Weight) -> i64 {
        a.eval(&self.functional)
    }

    pub fn contains(&self, a: &Weight) -> bool {
        self.level(a) <= self.bound
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<a,{}> <= {}", self.direction, self.bound)
    }
}

/// An intersection of half-spaces; the empty list is the whole lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Window {
    halfspaces: Vec<HalfSpace>,
}

impl Window {
    pub fn everywhere() -> Self {
        Window::default()
    }

    pub fn from_halfspaces(halfspaces: Vec<HalfSpace>) -> Self {
        let mut w = Window::default();
        for h in halfspaces {
            w.push(h);
        }
        w
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn is_everywhere(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn contains(&self, a: &Weight) -> bool {
        self.halfspaces.iter().all(|h| h.contains(a))
    }

    /// Adds a constraint, keeping only the tighter bound for a repeated direction.
    pub fn push(&mut self, h: HalfSpace) {
        if let Some(old) = self
            .halfspaces
            .iter_mut()
            .find(|o| o.direction == h.direction)
        {
            old.bound = old.bound.min(h.bound);
        } else {
            self.halfspaces.push(h);
        }
    }

    pub fn intersect(&self, other: &Window) -> Window {
        let mut w = self.clone();
        for h in &other.halfspaces {
            w.push(h.clone());
        }
        w
    }

    pub fn restrict(&self, x: &LaurentElement) -> LaurentElement {
        x.filter(|a| self.contains(a))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.halfspaces.is_empty() {
            return write!(f, "everywhere");
        }
        for (i, h) in self.halfspaces.iter().enumerate() {
            if i > 0 {
                write!(f, " and ")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

/// A character known exactly on a window and unknown outside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedCharacter {
    pub terms: LaurentElement,
    pub window: Window,
}

impl WindowedCharacter {
    pub fn new(terms: &LaurentElement, window: Window) -> Self {
        WindowedCharacter {
            terms: window.restrict(terms),
            window,
        }
    }

    pub fn exact(terms: LaurentElement) -> Self {
        WindowedCharacter {
            terms,
            window: Window::everywhere(),
        }
    }

    /// First weight inside both windows where the two disagree.
    pub fn first_discrepancy(&self, other: &WindowedCharacter) -> Option<Weight> {
        let window = self.window.intersect(&other.window);
        let diff = window.restrict(&self.terms.sub(&other.terms));
        diff.terms.keys().next().cloned()
    }
}

/// Polarization data of a series: the direction and its Gram-dual covector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polarization {
    direction: Weight,
    functional: Vec<i64>,
}

impl Polarization {
    pub fn new(gram: &Gram, direction: Weight) -> Self {
        let functional = gram.functional(&direction);
        Polarization {
            direction,
            functional,
        }
    }

    pub fn direction(&self) -> &Weight {
        &self.direction
    }

    pub fn level(&self, a: &Weight) -> i64 {
        a.eval(&self.functional)
    }
}

/// Slab truncation of an infinite series bounded below along a direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedSeries {
    polarization: Polarization,
    cutoff: i64,
    floor: i64,
    terms: LaurentElement,
}

impl PolarizedSeries {
    /// A finite element viewed as a series. The zero element gets
    /// `floor = cutoff`.
    pub fn from_laurent(gram: &Gram, direction: Weight, x: &LaurentElement, cutoff: i64) -> Self {
        let polarization = Polarization::new(gram, direction);
        let floor = x
            .level_range(&polarization.functional)
            .map_or(cutoff, |(lo, _)| lo);
        let terms = x.filter(|a| polarization.level(a) <= cutoff);
        PolarizedSeries {
            polarization,
            cutoff,
            floor,
            terms,
        }
    }

    pub fn zero(gram: &Gram, direction: Weight, cutoff: i64) -> Self {
        let rank = direction.rank();
        Self::from_laurent(gram, direction, &LaurentElement::zero(rank), cutoff)
    }

    pub fn direction(&self) -> &Weight {
        &self.polarization.direction
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn terms(&self) -> &LaurentElement {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.rank()
    }

    pub fn level(&self, a: &Weight) -> i64 {
        self.polarization.level(a)
    }

    pub fn coeff(&self, a: &Weight) -> BigInt {
        self.terms.coeff(a)
    }

    /// The half-space on which every coefficient is exact.
    pub fn halfspace(&self) -> HalfSpace {
        HalfSpace {
            direction: self.polarization.direction.clone(),
            functional: self.polarization.functional.clone(),
            bound: self.cutoff,
        }
    }

    pub fn to_windowed(&self) -> WindowedCharacter {
        WindowedCharacter {
            terms: self.terms.clone(),
            window: Window::from_halfspaces(vec![self.halfspace()]),
        }
    }

    /// Lowers the cutoff; raising it is not possible without recomputation.
    pub fn truncate(&self, cutoff: i64) -> PolarizedSeries {
        let cutoff = cutoff.min(self.cutoff);
        PolarizedSeries {
            polarization: self.polarization.clone(),
            cutoff,
            floor: self.floor,
            terms: self.terms.filter(|a| self.polarization.level(a) <= cutoff),
        }
    }

    fn check_direction(&self, other: &PolarizedSeries) -> Result<(), CharacterError> {
        if self.polarization.direction != other.polarization.direction {
            return Err(CharacterError::DirectionMismatch(
                self.polarization.direction.clone(),
                other.polarization.direction.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolarizedSeries) -> Result<PolarizedSeries, CharacterError> {
        self.check_direction(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let sum = self.terms.add(&other.terms);
        Ok(PolarizedSeries {
            polarization: self.polarization.clone(),
            cutoff,
            floor: self.floor.min(other.floor),
            terms: sum.filter(|a| self.polarization.level(a) <= cutoff),
        })
    }

    pub fn sub(&self, other: &PolarizedSeries) -> Result<PolarizedSeries, CharacterError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolarizedSeries {
        PolarizedSeries {
            terms: self.terms.neg(),
            ..self.clone()
        }
    }

    /// Truncated convolution. A product coefficient at level `L` needs the
    /// factors up to `L − floor` of the other factor, hence the new cutoff.
    pub fn mul(&self, other: &PolarizedSeries) -> Result<PolarizedSeries, CharacterError> {
        self.check_direction(other)?;
        let cutoff = (self.cutoff + other.floor).min(other.cutoff + self.floor);
        let pol = &self.polarization;
        let rhs: Vec<(&Weight, &BigInt, i64)> = other
            .terms
            .terms
            .iter()
            .map(|(b, y)| (b, y, pol.level(b)))
            .collect();
        let mut out = LaurentElement::zero(self.rank());
        for (a, x) in &self.terms.terms {
            let la = pol.level(a);
            for (b, y, lb) in &rhs {
                if la + lb <= cutoff {
                    out.add_term(a + b, x * *y);
                }
            }
        }
        Ok(PolarizedSeries {
            polarization: self.polarization.clone(),
            cutoff,
            floor: self.floor + other.floor,
            terms: out,
        })
    }

    /// Product with a finite element; the cutoff moves by its lowest level.
    pub fn mul_laurent(&self, x: &LaurentElement) -> PolarizedSeries {
        let pol = &self.polarization;
        let Some((lo, _)) = x.level_range(&pol.functional) else {
            return PolarizedSeries {
                terms: LaurentElement::zero(self.rank()),
                floor: self.cutoff,
                ..self.clone()
            };
        };
        let cutoff = self.cutoff + lo;
        let mut out = LaurentElement::zero(self.rank());
        for (a, c) in &x.terms {
            let la = pol.level(a);
            for (b, y) in &self.terms.terms {
                if la + pol.level(b) <= cutoff {
                    out.add_term(a + b, c * y);
                }
            }
        }
        PolarizedSeries {
            polarization: self.polarization.clone(),
            cutoff,
            floor: self.floor + lo,
            terms: out,
        }
    }
}

impl fmt::Display for PolarizedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.terms)
    }
}

/// Expansion of `1/(1 − h^{−α})` polarized by `direction`.
///
/// With `ε = +1` this is `−h^α Σ_{k≥0} h^{kα}`, with `ε = −1` it is
/// `Σ_{k≥0} h^{−kα}`; `ε` must be the sign of `⟨α, direction⟩`.
pub fn geometric_expansion(
    gram: &Gram,
    alpha: &Weight,
    sign: i8,
    direction: &Weight,
    cutoff: i64,
) -> Result<PolarizedSeries, CharacterError> {
    let polarization = Polarization::new(gram, direction.clone());
    let l = polarization.level(alpha);
    if l == 0 {
        return Err(CharacterError::OrthogonalWeight {
            weight: alpha.clone(),
            direction: direction.clone(),
        });
    }
    if i64::from(sign) != l.signum() {
        return Err(CharacterError::SignMismatch {
            weight: alpha.clone(),
            direction: direction.clone(),
            sign,
        });
    }
    let step = l.abs();
    let (first, generator, coeff, floor) = if l > 0 {
        (1, alpha.clone(), -BigInt::one(), l)
    } else {
        (0, -alpha, BigInt::one(), 0)
    };
    let mut terms = LaurentElement::zero(alpha.rank());
    let mut k = first;
    while k * step <= cutoff {
        terms.add_term(generator.scale(k), coeff.clone());
        k += 1;
    }
    Ok(PolarizedSeries {
        polarization,
        cutoff,
        floor,
        terms,
    })
}

/// `Π_α (1 − h^{−α})`.
pub fn wedge_dual(rank: usize, weights: &[Weight]) -> LaurentElement {
    let mut out = LaurentElement::one(rank);
    for a in weights {
        let factor =
            LaurentElement::from_terms(rank, [(Weight::zero(rank), 1), (-a, -1)]);
        out = out.mul(&factor);
    }
    out
}

/// Coefficients for [`divide_geometric`]: machine integers with overflow
/// detection, or big integers.
trait Coefficient: Clone + Default {
    fn accumulate(&mut self, other: &Self) -> Option<()>;
    fn vanishes(&self) -> bool;
}

impl Coefficient for i128 {
    fn accumulate(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }

    fn vanishes(&self) -> bool {
        *self == 0
    }
}

impl Coefficient for BigInt {
    fn accumulate(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// `x · Σ_{k≥0} h^{kg}` up to `cutoff`, for `g` of positive level.
///
/// Uses `y_a = x_a + y_{a−g}`, visiting weights in increasing level, so the
/// cost is linear in the output rather than in the number of pairs. `None`
/// on overflow.
fn divide_geometric<C: Coefficient>(
    x: BTreeMap<(i64, Weight), C>,
    g: &Weight,
    step: i64,
    cutoff: i64,
) -> Option<BTreeMap<(i64, Weight), C>> {
    let mut queue = x;
    let mut out = BTreeMap::new();
    while let Some(((l, a), c)) = queue.pop_first() {
        if c.vanishes() {
            continue;
        }
        if l + step <= cutoff {
            queue.entry((l + step, &a + g)).or_insert_with(C::default).accumulate(&c)?;
        }
        out.insert((l, a), c);
    }
    Some(out)
}

/// Product of the polarized geometric expansions, keyed by level. `None` on
/// overflow.
fn inverse_terms<C: Coefficient>(
    pol: &Polarization,
    weights: &[Weight],
    cutoff: i64,
    one: C,
    neg: impl Fn(&C) -> C,
) -> Option<BTreeMap<(i64, Weight), C>> {
    let rank = pol.direction.rank();
    let mut terms: BTreeMap<(i64, Weight), C> = BTreeMap::new();
    if cutoff >= 0 {
        terms.insert((0, Weight::zero(rank)), one);
    }
    for a in weights {
        let l = pol.level(a);
        // 1/(1 − h^{−α}) is −h^α Σ h^{kα} or Σ h^{−kα}
        let (x, g) = if l > 0 {
            let shifted = terms
                .iter()
                .map(|((la, b), c)| ((la + l, b + a), neg(c)))
                .filter(|((la, _), _)| *la <= cutoff)
                .collect();
            (shifted, a.clone())
        } else {
            (terms, -a)
        };
        terms = divide_geometric(x, &g, l.abs(), cutoff)?;
    }
    Some(terms)
}

/// The inverse of [`wedge_dual`] whose support pairs non-negatively with
/// `direction`: the product of the polarized geometric expansions of
/// [`geometric_expansion`].
pub fn polarized_inverse(
    gram: &Gram,
    weights: &[Weight],
    direction: &Weight,
    cutoff: i64,
) -> Result<PolarizedSeries, CharacterError> {
    let polarization = Polarization::new(gram, direction.clone());
    let mut floor = 0;
    for a in weights {
        let l = polarization.level(a);
        if l == 0 {
            return Err(CharacterError::OrthogonalWeight {
                weight: a.clone(),
                direction: direction.clone(),
            });
        }
        floor += l.max(0);
    }
    let mut terms = LaurentElement::zero(direction.rank());
    match inverse_terms(&polarization, weights, cutoff, 1i128, |c| -c) {
        Some(fast) => {
            for ((_, a), c) in fast {
                terms.terms.insert(a, BigInt::from(c));
            }
        }
        None => {
            let slow = inverse_terms(&polarization, weights, cutoff, BigInt::one(), |c| -c)
                .expect("big integers do not overflow");
            for ((_, a), c) in slow {
                terms.terms.insert(a, c);
            }
        }
    }
    Ok(PolarizedSeries {
        polarization,
        cutoff,
        floor,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn g1() -> Gram {
        Gram::identity(1)
    }

    fn poly1(terms: &[(i64, i64)]) -> LaurentElement {
        LaurentElement::from_terms(1, terms.iter().map(|&(a, c)| (w(&[a]), c)))
    }

    #[test]
    fn laurent_basics() {
        let one = LaurentElement::one(1);
        assert_eq!(one.add(&one), poly1(&[(0, 2)]));
        let x = poly1(&[(1, 1), (-1, 1)]);
        assert_eq!(x.mul(&x), poly1(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!(
            LaurentElement::monomial(w(&[1, 2]), 1).mul(&LaurentElement::monomial(w(&[3, -1]), 1)),
            LaurentElement::monomial(w(&[4, 1]), 1)
        );
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let x = LaurentElement::from_terms(2, [(w(&[1, -2]), 3), (w(&[0, 0]), -1)]);
        let s = x.to_string();
        assert_eq!(s, "-1 * h^[0,0]\n3 * h^[1,-2]\n");
        assert_eq!(s.parse::<LaurentElement>().unwrap(), x);
        assert_eq!("0\n".parse::<LaurentElement>().unwrap(), LaurentElement::zero(0));
        assert!("3 h[1]".parse::<LaurentElement>().is_err());
    }

    #[test]
    fn series_addition_telescopes() {
        let d = w(&[1]);
        let a = PolarizedSeries::from_laurent(&g1(), d.clone(), &poly1(&[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1)]), 5);
        let b = PolarizedSeries::from_laurent(&g1(), d.clone(), &poly1(&[(1, -1), (2, -1), (3, -1), (4, -1), (5, -1)]), 5);
        let s = a.add(&b).unwrap();
        assert_eq!(s.terms(), &LaurentElement::one(1));
        assert_eq!(s.floor(), 0);
        let c = PolarizedSeries::zero(&g1(), w(&[-1]), 5);
        assert!(matches!(a.add(&c), Err(CharacterError::DirectionMismatch(..))));
    }

    #[test]
    fn series_product_with_wedge_is_one() {
        let inv = geometric_expansion(&g1(), &w(&[-2]), -1, &w(&[1]), 10).unwrap();
        let prod = inv.mul_laurent(&wedge_dual(1, &[w(&[-2])]));
        // 1 − h^{2} times Σ h^{2k}
        assert_eq!(prod.terms(), &LaurentElement::one(1));
        let s = PolarizedSeries::from_laurent(&g1(), w(&[1]), &poly1(&[(1, 1), (-1, 1)]), 10);
        assert_eq!(s.mul(&s).unwrap().terms(), &poly1(&[(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn circle_expansions() {
        let e = geometric_expansion(&g1(), &w(&[1]), 1, &w(&[1]), 3).unwrap();
        assert_eq!(e.terms(), &poly1(&[(1, -1), (2, -1), (3, -1)]));
        assert_eq!(e.floor(), 1);
        let e = geometric_expansion(&g1(), &w(&[1]), -1, &w(&[-1]), 3).unwrap();
        assert_eq!(e.terms(), &poly1(&[(0, 1), (-1, 1), (-2, 1), (-3, 1)]));
        assert_eq!(e.floor(), 0);
        let e = geometric_expansion(&g1(), &w(&[2]), 1, &w(&[1]), 5).unwrap();
        assert_eq!(e.terms(), &poly1(&[(2, -1), (4, -1)]));
        assert!(matches!(
            geometric_expansion(&g1(), &w(&[2]), -1, &w(&[1]), 5),
            Err(CharacterError::SignMismatch { .. })
        ));
        assert!(matches!(
            geometric_expansion(&Gram::identity(2), &w(&[1, 0]), 1, &w(&[0, 1]), 5),
            Err(CharacterError::OrthogonalWeight { .. })
        ));
    }

    #[test]
    fn wedge_dual_examples() {
        assert_eq!(wedge_dual(1, &[]), LaurentElement::one(1));
        assert_eq!(wedge_dual(1, &[w(&[2])]), poly1(&[(0, 1), (-2, -1)]));
        assert_eq!(wedge_dual(1, &[w(&[1]), w(&[1])]), poly1(&[(0, 1), (-1, -2), (-2, 1)]));
    }

    #[test]
    fn polarized_inverse_examples() {
        let d = w(&[1]);
        let p = polarized_inverse(&g1(), &[w(&[1])], &d, 4).unwrap();
        assert_eq!(p.terms(), &poly1(&[(1, -1), (2, -1), (3, -1), (4, -1)]));
        let p = polarized_inverse(&g1(), &[w(&[-1])], &d, 4).unwrap();
        assert_eq!(p.terms(), &poly1(&[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]));
        // brute-force convolution of −Σ_{k≥1} h^k and Σ_{k≥0} h^k
        let p = polarized_inverse(&g1(), &[w(&[1]), w(&[-1])], &d, 3).unwrap();
        let mut oracle = LaurentElement::zero(1);
        for i in 1..=3 {
            for j in 0..=3 {
                if i + j <= 3 {
                    oracle.add_term(w(&[i + j]), BigInt::from(-1));
                }
            }
        }
        assert_eq!(p.terms(), &oracle);
        assert_eq!(p.terms(), &poly1(&[(1, -1), (2, -2), (3, -3)]));
    }

    fn weight_multiset() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>)> {
        (1usize..=3).prop_flat_map(|rank| {
            (
                Just(rank),
                prop::collection::vec(prop::collection::vec(-3i64..=3, rank), 0..=4),
                prop::collection::vec(-3i64..=3, rank),
            )
        })
    }

    proptest! {
        #[test]
        fn inverse_identity((rank, ws, d) in weight_multiset(), cutoff in 0i64..12) {
            let gram = Gram::identity(rank);
            let d = Weight::new(d);
            let ws: Vec<Weight> = ws.into_iter().map(Weight::new).collect();
            let f = gram.functional(&d);
            prop_assume!(ws.iter().all(|a| a.eval(&f) != 0));
            let inv = polarized_inverse(&gram, &ws, &d, cutoff).unwrap();
            let prod = inv.mul_laurent(&wedge_dual(rank, &ws));
            let window = Window::from_halfspaces(vec![prod.halfspace()]);
            prop_assert_eq!(window.restrict(prod.terms()), window.restrict(&LaurentElement::one(rank)));
            // polarization: positive levels only, the constant term needs r = 0
            for a in inv.terms().terms().keys() {
                let l = a.eval(&f);
                prop_assert!(l > 0 || (a.is_zero() && ws.iter().all(|b| b.eval(&f) < 0)));
            }
        }

        #[test]
        fn series_product_commutes_and_associates(
            xs in prop::collection::vec((-4i64..=6, -3i64..=3), 1..6),
            ys in prop::collection::vec((-4i64..=6, -3i64..=3), 1..6),
            zs in prop::collection::vec((-4i64..=6, -3i64..=3), 1..6),
        ) {
            let d = w(&[1]);
            let mk = |v: &[(i64, i64)]| PolarizedSeries::from_laurent(&g1(), d.clone(), &poly1(v), 6);
            let (x, y, z) = (mk(&xs), mk(&ys), mk(&zs));
            let xy = x.mul(&y).unwrap();
            let yx = y.mul(&x).unwrap();
            prop_assert_eq!(xy.cutoff(), yx.cutoff());
            prop_assert_eq!(xy.terms(), yx.terms());
            let l = xy.mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            let c = l.cutoff().min(r.cutoff());
            prop_assert_eq!(l.truncate(c).terms().clone(), r.truncate(c).terms().clone());
            // every reported coefficient agrees with the untruncated product
            let full = poly1(&xs).mul(&poly1(&ys)).mul(&poly1(&zs));
            prop_assert_eq!(l.truncate(c).terms().clone(), full.filter(|a| a.coords()[0] <= c));
        }

        #[test]
        fn two_expansions_of_one_function(m in 1i64..=4, cutoff in 0i64..20) {
            let a = w(&[m]);
            let up = geometric_expansion(&g1(), &a, 1, &w(&[1]), cutoff).unwrap();
            let down = geometric_expansion(&g1(), &a, -1, &w(&[-1]), cutoff).unwrap();
            let wedge = wedge_dual(1, &[a.clone()]);
            for back in [up.mul_laurent(&wedge), down.mul_laurent(&wedge)] {
                let window = Window::from_halfspaces(vec![back.halfspace()]);
                prop_assert_eq!(back.terms().clone(), window.restrict(&LaurentElement::one(1)));
            }
            prop_assert!(up.terms().terms().keys().all(|k| k.coords()[0] > 0));
            prop_assert!(down.terms().terms().keys().all(|k| k.coords()[0] <= 0));
        }
    }
}
