//! Weight-lattice geometry: weights in raw lattice coordinates, a fixed
//! invariant pairing, root data and the finite Weyl group.
//!
//! Weights are stored as integer coordinate vectors together with a
//! user-supplied Gram matrix, so a torus, a semisimple group and any mixed
//! product of the two are handled by the same code path. Every reflection is
//! checked to preserve the lattice when the datum is built; after that all
//! arithmetic stays in the integers.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational scalar used for moment values and pairings with them.
pub type Rational = Ratio<i64>;

/// Default bound on the Weyl group order enumerated by [`RootDatum::weyl_group`].
pub const DEFAULT_GROUP_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("reflection in simple root {root} does not preserve the lattice (basis vector {basis})")]
    NonCrystallographic { root: Weight, basis: usize },
    #[error("half sum of positive roots {0} is not integral")]
    NonIntegralRho(Weight),
    #[error("simple roots do not form a simple system: {0}")]
    InvalidSimpleRoots(String),
    #[error("expected a vector of rank {expected}, got rank {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Weyl group order exceeds the bound {0}")]
    GroupTooLarge(usize),
}

/// An integer point of the weight lattice, in lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    /// Plain dot product with a covector (e.g. the output of [`Gram::functional`]).
    pub fn eval(&self, covector: &[i64]) -> i64 {
        self.0.iter().zip(covector).map(|(a, b)| a * b).sum()
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A point of the real weight space with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalWeight(Vec<Rational>);

impl RationalWeight {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalWeight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        RationalWeight(vec![Rational::zero(); rank])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Smallest positive multiple lying in the lattice, made primitive.
    pub fn primitive_lattice_direction(&self) -> Weight {
        let lcm = self.0.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
        let coords: Vec<i64> = self.0.iter().map(|c| c.numer() * (lcm / c.denom())).collect();
        let g = coords.iter().fold(0i64, |acc, c| acc.gcd(c));
        if g == 0 {
            return Weight(coords);
        }
        Weight(coords.into_iter().map(|c| c / g).collect())
    }

    pub fn add(&self, other: &RationalWeight) -> RationalWeight {
        RationalWeight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> RationalWeight {
        RationalWeight(self.0.iter().map(|a| -a).collect())
    }
}

impl From<&Weight> for RationalWeight {
    fn from(w: &Weight) -> Self {
        RationalWeight(w.0.iter().map(|&c| Rational::from_integer(c)).collect())
    }
}

impl fmt::Display for RationalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The fixed invariant scalar product, as a symmetric integer matrix in
/// lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gram(Vec<Vec<i64>>);

impl Gram {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        Gram(rows)
    }

    pub fn identity(rank: usize) -> Self {
        Gram((0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect())
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// The covector `x ↦ ⟨x, v⟩`.
    pub fn functional(&self, v: &Weight) -> Vec<i64> {
        self.0.iter().map(|row| v.eval(row)).collect()
    }

    pub fn pair(&self, a: &Weight, b: &Weight) -> i64 {
        a.eval(&self.functional(b))
    }

    pub fn pair_rational(&self, a: &Weight, b: &RationalWeight) -> Rational {
        let mut acc = Rational::zero();
        for (i, row) in self.0.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc += b.0[j] * (a.0[i] * g);
            }
        }
        acc
    }

    pub fn pair_rationals(&self, a: &RationalWeight, b: &RationalWeight) -> Rational {
        let mut acc = Rational::zero();
        for (i, row) in self.0.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc += a.0[i] * b.0[j] * *g;
            }
        }
        acc
    }

    fn validate(&self) -> Result<(), LatticeError> {
        let n = self.0.len();
        if self.0.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if self.0[i][j] != self.0[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        // Fraction-free elimination: the k-th pivot is the k-th leading minor.
        let mut m: Vec<Vec<i128>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] <= 0 {
                return Err(LatticeError::NotPositiveDefinite(k + 1));
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        Ok(())
    }
}

/// A Weyl group element acting on lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
    sign: i8,
    length: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            matrix: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
            sign: 1,
            length: 0,
        }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// The signature `(-1)^w`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn apply(&self, v: &Weight) -> Weight {
        Weight(self.matrix.iter().map(|row| v.eval(row)).collect())
    }

    pub fn apply_rational(&self, v: &RationalWeight) -> RationalWeight {
        RationalWeight(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .fold(Rational::zero(), |acc, (m, x)| acc + *x * *m)
                })
                .collect(),
        )
    }

    /// `self ∘ other`, with the length taken as the sum (an upper bound; exact
    /// for the reduced words built by the enumeration).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            matrix: mat_mul(&self.matrix, &other.matrix),
            sign: self.sign * other.sign,
            length: self.length + other.length,
        }
    }

    /// Integer determinant of the matrix.
    pub fn determinant(&self) -> i64 {
        let n = self.matrix.len();
        let mut m: Vec<Vec<i128>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return 0;
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * m[n - 1][n - 1]) as i64
    }
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Outcome of moving `λ + ρ` into the dominant chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DominantWitness {
    /// `element ∘ λ = dominant`.
    Regular { element: WeylElement, dominant: Weight },
    /// `λ + ρ` lies on a reflection hyperplane.
    Singular,
}

/// Root datum of a compact connected group `G` with maximal torus `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    gram: Gram,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    // None for sub-data (Levi factors) whose half sum is not integral
    rho: Option<Weight>,
    theta: Weight,
    // reflection coefficients c_i(x) = 2⟨x,α_i⟩/⟨α_i,α_i⟩ as integer covectors
    coroots: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn new(rank: usize, gram: Gram, simple_roots: Vec<Weight>) -> Result<Self, LatticeError> {
        Self::build(rank, gram, simple_roots, true)
    }

    fn build(
        rank: usize,
        gram: Gram,
        simple_roots: Vec<Weight>,
        integral_rho: bool,
    ) -> Result<Self, LatticeError> {
        if rank == 0 {
            return Err(LatticeError::RankMismatch { expected: 1, got: 0 });
        }
        if gram.rank() != rank {
            return Err(LatticeError::RankMismatch {
                expected: rank,
                got: gram.rank(),
            });
        }
        gram.validate()?;
        for a in &simple_roots {
            if a.rank() != rank {
                return Err(LatticeError::RankMismatch {
                    expected: rank,
                    got: a.rank(),
                });
            }
        }

        let mut coroots = Vec::with_capacity(simple_roots.len());
        for a in &simple_roots {
            let norm = gram.pair(a, a);
            if norm <= 0 {
                return Err(LatticeError::InvalidSimpleRoots(format!("{a} is zero")));
            }
            let fa = gram.functional(a);
            let mut cov = Vec::with_capacity(rank);
            for (basis, &x) in fa.iter().enumerate() {
                if (2 * x) % norm != 0 {
                    return Err(LatticeError::NonCrystallographic {
                        root: a.clone(),
                        basis,
                    });
                }
                cov.push(2 * x / norm);
            }
            coroots.push(cov);
        }
        for (i, a) in simple_roots.iter().enumerate() {
            for b in &simple_roots[..i] {
                if gram.pair(a, b) > 0 {
                    return Err(LatticeError::InvalidSimpleRoots(format!(
                        "{a} and {b} form an acute angle"
                    )));
                }
            }
        }
        if !linearly_independent(&simple_roots) {
            return Err(LatticeError::InvalidSimpleRoots(
                "simple roots are linearly dependent".into(),
            ));
        }

        // s_i permutes the positive roots other than α_i.
        let mut seen: BTreeSet<Weight> = simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Weight> = simple_roots.iter().cloned().collect();
        while let Some(root) = queue.pop_front() {
            for (i, a) in simple_roots.iter().enumerate() {
                if &root == a {
                    continue;
                }
                let image = reflect_with(&root, a, &coroots[i]);
                if seen.insert(image.clone()) {
                    if seen.len() > DEFAULT_GROUP_BOUND {
                        return Err(LatticeError::GroupTooLarge(DEFAULT_GROUP_BOUND));
                    }
                    queue.push_back(image);
                }
            }
        }
        let positive_roots: Vec<Weight> = seen.into_iter().collect();
        let theta = positive_roots
            .iter()
            .fold(Weight::zero(rank), |acc, r| &acc + r);
        let rho = if theta.0.iter().any(|c| c % 2 != 0) {
            if integral_rho {
                return Err(LatticeError::NonIntegralRho(theta));
            }
            None
        } else {
            Some(Weight(theta.0.iter().map(|c| c / 2).collect()))
        };

        Ok(RootDatum {
            rank,
            gram,
            simple_roots,
            positive_roots,
            rho,
            theta,
            coroots,
        })
    }

    /// A torus of the given rank with the standard pairing.
    pub fn torus(rank: usize) -> Self {
        RootDatum::new(rank, Gram::identity(rank), vec![]).expect("torus datum is valid")
    }

    /// `SU(2)` in fundamental-weight coordinates: α = (2), ρ = (1).
    pub fn su2() -> Self {
        RootDatum::new(1, Gram::new(vec![vec![1]]), vec![Weight::new(vec![2])])
            .expect("SU(2) datum is valid")
    }

    /// `SU(3)` in fundamental-weight coordinates (pairing scaled by 3).
    pub fn a2() -> Self {
        RootDatum::new(
            2,
            Gram::new(vec![vec![2, 1], vec![1, 2]]),
            vec![Weight::new(vec![2, -1]), Weight::new(vec![-1, 2])],
        )
        .expect("A2 datum is valid")
    }

    /// `Sp(4)` in fundamental-weight coordinates, first simple root long.
    pub fn b2() -> Self {
        RootDatum::new(
            2,
            Gram::new(vec![vec![2, 1], vec![1, 1]]),
            vec![Weight::new(vec![2, -2]), Weight::new(vec![-1, 2])],
        )
        .expect("B2 datum is valid")
    }

    /// `G2` in fundamental-weight coordinates, first simple root long.
    pub fn g2() -> Self {
        RootDatum::new(
            2,
            Gram::new(vec![vec![6, 3], vec![3, 2]]),
            vec![Weight::new(vec![2, -3]), Weight::new(vec![-1, 2])],
        )
        .expect("G2 datum is valid")
    }

    /// `SU(2) × SU(2)`.
    pub fn a1_a1() -> Self {
        RootDatum::new(
            2,
            Gram::identity(2),
            vec![Weight::new(vec![2, 0]), Weight::new(vec![0, 2])],
        )
        .expect("A1xA1 datum is valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Half sum of the positive roots. Always present for data built with
    /// [`RootDatum::new`]; a Levi factor may have a half-integral `ρ`.
    pub fn rho(&self) -> Option<&Weight> {
        self.rho.as_ref()
    }

    /// `⟨ρ, d⟩`, rounded down when `ρ` is half-integral.
    pub fn rho_pairing(&self, d: &Weight) -> i64 {
        Integer::div_floor(&self.gram.pair(&self.theta, d), &2)
    }

    pub fn theta(&self) -> &Weight {
        &self.theta
    }

    pub fn is_torus(&self) -> bool {
        self.simple_roots.is_empty()
    }

    pub fn pair(&self, a: &Weight, b: &Weight) -> i64 {
        self.gram.pair(a, b)
    }

    pub fn check_rank(&self, w: &Weight) -> Result<(), LatticeError> {
        if w.rank() == self.rank {
            Ok(())
        } else {
            Err(LatticeError::RankMismatch {
                expected: self.rank,
                got: w.rank(),
            })
        }
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        self.simple_roots.iter().all(|a| self.gram.pair(w, a) >= 0)
    }

    pub fn is_dominant_rational(&self, w: &RationalWeight) -> bool {
        self.simple_roots
            .iter()
            .all(|a| !self.gram.pair_rational(a, w).is_negative())
    }

    /// Simple reflection `s_i`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        reflect_with(w, &self.simple_roots[i], &self.coroots[i])
    }

    fn reflect_rational(&self, i: usize, w: &RationalWeight) -> RationalWeight {
        let c = self.coroots[i]
            .iter()
            .zip(&w.0)
            .fold(Rational::zero(), |acc, (k, x)| acc + *x * *k);
        RationalWeight(
            w.0.iter()
                .zip(&self.simple_roots[i].0)
                .map(|(x, a)| *x - c * *a)
                .collect(),
        )
    }

    fn simple_reflection(&self, i: usize) -> WeylElement {
        let a = &self.simple_roots[i];
        let cov = &self.coroots[i];
        let matrix = (0..self.rank)
            .map(|r| {
                (0..self.rank)
                    .map(|c| i64::from(r == c) - cov[c] * a.0[r])
                    .collect()
            })
            .collect();
        WeylElement {
            matrix,
            sign: -1,
            length: 1,
        }
    }

    /// Whether `other` is a sub-datum: same lattice and pairing, positive
    /// roots a subset of ours.
    pub fn contains_sub_datum(&self, other: &RootDatum) -> bool {
        other.rank == self.rank
            && other.gram == self.gram
            && other
                .positive_roots
                .iter()
                .all(|r| self.positive_roots.contains(r))
    }

    /// Root datum of the stabilizer `G_β` of a dominant `β`: the simple roots
    /// orthogonal to `β`. Its `ρ` need not be integral; the affine action
    /// only uses `wρ − ρ`, which always is.
    pub fn levi(&self, beta: &RationalWeight) -> RootDatum {
        let simple = self
            .simple_roots
            .iter()
            .filter(|a| self.gram.pair_rational(a, beta).is_zero())
            .cloned()
            .collect();
        RootDatum::build(self.rank, self.gram.clone(), simple, false)
            .expect("a sub-diagram of a valid datum is valid")
    }

    /// The full Weyl group (identity first) with the default order bound.
    pub fn weyl_group(&self) -> Result<Vec<WeylElement>, LatticeError> {
        self.weyl_group_bounded(DEFAULT_GROUP_BOUND)
    }

    /// Breadth-first enumeration over words in the simple reflections, so
    /// each element carries its length.
    pub fn weyl_group_bounded(&self, bound: usize) -> Result<Vec<WeylElement>, LatticeError> {
        let gens: Vec<WeylElement> = (0..self.simple_roots.len())
            .map(|i| self.simple_reflection(i))
            .collect();
        let id = WeylElement::identity(self.rank);
        let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        index.insert(id.matrix.clone(), 0);
        let mut out = vec![id];
        let mut cursor = 0;
        while cursor < out.len() {
            let current = out[cursor].clone();
            for g in &gens {
                let next = g.compose(&current);
                if !index.contains_key(&next.matrix) {
                    if out.len() >= bound {
                        return Err(LatticeError::GroupTooLarge(bound));
                    }
                    index.insert(next.matrix.clone(), out.len());
                    out.push(next);
                }
            }
            cursor += 1;
        }
        Ok(out)
    }

    /// `w ∘ λ = w(λ + ρ) − ρ`.
    pub fn affine_action(&self, w: &WeylElement, lambda: &Weight) -> Weight {
        let shift = &w.apply(&self.theta) - &self.theta;
        let half = Weight(shift.0.iter().map(|c| c / 2).collect());
        &w.apply(lambda) + &half
    }

    /// Moves `λ + ρ` into the dominant chamber by simple reflections.
    pub fn dominant_witness(&self, lambda: &Weight) -> DominantWitness {
        // work with 2(λ + ρ) so that half-integral ρ stays exact
        let mut x = &lambda.scale(2) + &self.theta;
        let mut w = WeylElement::identity(self.rank);
        'outer: loop {
            for i in 0..self.simple_roots.len() {
                let c = x.eval(&self.coroots[i]);
                if c < 0 {
                    x = self.reflect(i, &x);
                    w = self.simple_reflection(i).compose(&w);
                    continue 'outer;
                }
            }
            break;
        }
        if (0..self.simple_roots.len()).any(|i| x.eval(&self.coroots[i]) == 0) {
            return DominantWitness::Singular;
        }
        DominantWitness::Regular {
            element: w,
            dominant: Weight((&x - &self.theta).0.iter().map(|c| c / 2).collect()),
        }
    }

    /// Dominant representative of the linear Weyl orbit of `w`.
    pub fn dominant_representative(&self, w: &Weight) -> Weight {
        let mut x = w.clone();
        'outer: loop {
            for i in 0..self.simple_roots.len() {
                if x.eval(&self.coroots[i]) < 0 {
                    x = self.reflect(i, &x);
                    continue 'outer;
                }
            }
            return x;
        }
    }

    pub fn dominant_representative_rational(&self, w: &RationalWeight) -> RationalWeight {
        let mut x = w.clone();
        'outer: loop {
            for i in 0..self.simple_roots.len() {
                let c = self.coroots[i]
                    .iter()
                    .zip(&x.0)
                    .fold(Rational::zero(), |acc, (k, v)| acc + *v * *k);
                if c.is_negative() {
                    x = self.reflect_rational(i, &x);
                    continue 'outer;
                }
            }
            return x;
        }
    }
}

fn reflect_with(x: &Weight, root: &Weight, coroot: &[i64]) -> Weight {
    let c = x.eval(coroot);
    Weight(x.0.iter().zip(&root.0).map(|(v, a)| v - c * a).collect())
}

fn linearly_independent(vectors: &[Weight]) -> bool {
    let Some(first) = vectors.first() else {
        return true;
    };
    let cols = first.rank();
    let mut m: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|v| v.0.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c] / m[rank][c];
                for k in 0..cols {
                    let v = m[rank][k];
                    m[r][k] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank == vectors.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    #[test]
    fn torus_datum_has_no_roots() {
        let t = RootDatum::new(1, Gram::new(vec![vec![1]]), vec![]).unwrap();
        assert!(t.positive_roots().is_empty());
        assert_eq!(t.rho(), Some(&w(&[0])));
        assert_eq!(t.weyl_group().unwrap().len(), 1);
    }

    #[test]
    fn su2_datum() {
        let g = RootDatum::su2();
        assert_eq!(g.positive_roots(), &[w(&[2])]);
        assert_eq!(g.rho(), Some(&w(&[1])));
        assert_eq!(g.theta(), &w(&[2]));
        let group = g.weyl_group().unwrap();
        assert_eq!(group.len(), 2);
        assert!(group[0].is_identity());
        assert_eq!(group[1].sign(), -1);
    }

    #[test]
    fn a2_datum() {
        let g = RootDatum::a2();
        assert_eq!(g.positive_roots().len(), 3);
        assert_eq!(g.theta(), &w(&[2, 2]));
        assert_eq!(g.rho(), Some(&w(&[1, 1])));
        let group = g.weyl_group().unwrap();
        assert_eq!(group.len(), 6);
        assert_eq!(group.iter().filter(|e| e.sign() == 1).count(), 3);
        assert_eq!(group.iter().filter(|e| e.sign() == -1).count(), 3);
    }

    #[test]
    fn rank_two_group_orders() {
        assert_eq!(RootDatum::b2().weyl_group().unwrap().len(), 8);
        assert_eq!(RootDatum::g2().weyl_group().unwrap().len(), 12);
        assert_eq!(RootDatum::a1_a1().weyl_group().unwrap().len(), 4);
        assert_eq!(RootDatum::b2().positive_roots().len(), 4);
        assert_eq!(RootDatum::g2().positive_roots().len(), 6);
    }

    #[test]
    fn group_bound_is_enforced() {
        assert_eq!(
            RootDatum::g2().weyl_group_bounded(5),
            Err(LatticeError::GroupTooLarge(5))
        );
    }

    #[test]
    fn construction_errors() {
        // ρ = 1/2 for the root (1).
        assert!(matches!(
            RootDatum::new(1, Gram::new(vec![vec![1]]), vec![w(&[1])]),
            Err(LatticeError::NonIntegralRho(_))
        ));
        assert!(matches!(
            RootDatum::new(1, Gram::new(vec![vec![0]]), vec![]),
            Err(LatticeError::NotPositiveDefinite(1))
        ));
        assert!(matches!(
            RootDatum::new(2, Gram::new(vec![vec![1, 2], vec![2, 1]]), vec![]),
            Err(LatticeError::NotPositiveDefinite(2))
        ));
        // 2⟨e_1, α⟩/⟨α, α⟩ = 2/5 for α = (1, 2) with the identity pairing.
        assert!(matches!(
            RootDatum::new(2, Gram::identity(2), vec![w(&[1, 2])]),
            Err(LatticeError::NonCrystallographic { .. })
        ));
        assert!(matches!(
            RootDatum::new(2, Gram::new(vec![vec![1, 0], vec![1, 1]]), vec![]),
            Err(LatticeError::NotSymmetric)
        ));
    }

    #[test]
    fn affine_action_su2() {
        let g = RootDatum::su2();
        let group = g.weyl_group().unwrap();
        let s = &group[1];
        assert_eq!(g.affine_action(&group[0], &w(&[5])), w(&[5]));
        assert_eq!(g.affine_action(s, &w(&[0])), w(&[-2]));
        assert_eq!(g.affine_action(s, &w(&[-2])), w(&[0]));
    }

    #[test]
    fn dominant_witness_su2() {
        let g = RootDatum::su2();
        assert_eq!(
            g.dominant_witness(&w(&[3])),
            DominantWitness::Regular {
                element: WeylElement::identity(1),
                dominant: w(&[3])
            }
        );
        assert_eq!(g.dominant_witness(&w(&[-1])), DominantWitness::Singular);
        match g.dominant_witness(&w(&[-3])) {
            DominantWitness::Regular { element, dominant } => {
                assert_eq!(dominant, w(&[1]));
                assert_eq!(element.sign(), -1);
            }
            DominantWitness::Singular => panic!("(-3) is regular"),
        }
    }

    #[test]
    fn levi_of_a2() {
        let g = RootDatum::a2();
        // β = fundamental weight ϖ_2 is orthogonal to α_1.
        let beta = RationalWeight::from(&w(&[0, 1]));
        let l = g.levi(&beta);
        assert_eq!(l.simple_roots(), &[w(&[2, -1])]);
        assert_eq!(l.rho(), None);
        let group = l.weyl_group().unwrap();
        // s_1 ∘ 0 = −α_1
        assert_eq!(l.affine_action(&group[1], &w(&[0, 0])), w(&[-2, 1]));
        assert_eq!(l.dominant_witness(&w(&[-1, 0])), DominantWitness::Singular);
        assert!(g.contains_sub_datum(&l));
        assert!(!l.contains_sub_datum(&g));
    }

    fn all_data() -> Vec<RootDatum> {
        vec![
            RootDatum::torus(2),
            RootDatum::su2(),
            RootDatum::a2(),
            RootDatum::b2(),
            RootDatum::g2(),
            RootDatum::a1_a1(),
        ]
    }

    fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
        (0..m.len())
            .map(|i| m.iter().map(|row| row[i]).collect())
            .collect()
    }

    #[test]
    fn group_preserves_gram_and_roots() {
        for d in all_data() {
            let group = d.weyl_group().unwrap();
            let mut roots: BTreeSet<Weight> = d.positive_roots().iter().cloned().collect();
            roots.extend(d.positive_roots().iter().map(|r| -r));
            for e in &group {
                let m = e.matrix();
                let lhs = mat_mul(&mat_mul(&transpose(m), d.gram().rows()), m);
                assert_eq!(lhs, d.gram().rows());
                assert_eq!(i64::from(e.sign()), e.determinant());
                for r in &roots {
                    assert!(roots.contains(&e.apply(r)));
                }
            }
        }
    }

    #[test]
    fn sign_is_a_homomorphism() {
        for d in all_data() {
            let group = d.weyl_group().unwrap();
            let by_matrix: HashMap<_, _> =
                group.iter().map(|e| (e.matrix().to_vec(), e.sign())).collect();
            for a in &group {
                for b in &group {
                    let ab = a.compose(b);
                    assert_eq!(by_matrix[ab.matrix()], a.sign() * b.sign());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn affine_action_is_an_action(x in -6i64..=6, y in -6i64..=6) {
            for d in [RootDatum::a2(), RootDatum::b2(), RootDatum::g2()] {
                let group = d.weyl_group().unwrap();
                let lambda = w(&[x, y]);
                for a in &group {
                    for b in &group {
                        let lhs = d.affine_action(&a.compose(b), &lambda);
                        let rhs = d.affine_action(a, &d.affine_action(b, &lambda));
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }

        #[test]
        fn witness_matches_orbit_enumeration(x in -7i64..=7, y in -7i64..=7) {
            for d in [RootDatum::a2(), RootDatum::b2(), RootDatum::g2(), RootDatum::a1_a1()] {
                let group = d.weyl_group().unwrap();
                let lambda = w(&[x, y]);
                let orbit: Vec<Weight> = group.iter().map(|e| d.affine_action(e, &lambda)).collect();
                let on_wall = orbit.iter().any(|mu| {
                    let shifted = mu + d.rho().unwrap();
                    d.simple_roots().iter().any(|a| d.pair(&shifted, a) == 0)
                });
                let dominant: Vec<&Weight> = orbit.iter().filter(|mu| d.is_dominant(mu)).collect();
                match d.dominant_witness(&lambda) {
                    DominantWitness::Singular => {
                        prop_assert!(dominant.is_empty() || on_wall);
                    }
                    DominantWitness::Regular { element, dominant: mu } => {
                        prop_assert!(!on_wall);
                        prop_assert_eq!(dominant.len(), 1);
                        prop_assert_eq!(dominant[0], &mu);
                        prop_assert_eq!(&d.affine_action(&element, &lambda), &mu);
                        let sign = group.iter().find(|e| e.matrix() == element.matrix()).unwrap().sign();
                        prop_assert_eq!(sign, element.sign());
                    }
                }
            }
        }
    }
}
