//! Truncated, even-degree, graded commutative rings over the rationals.
//!
//! A [`RingStructure`] is given by a monomial basis per even degree, a
//! multiplication table on positive-degree basis elements, and a linear
//! pairing on the top-degree component (evaluation on the fundamental
//! class). [`GradedClass`] values are inhomogeneous elements of such a
//! ring. All arithmetic is exact; products landing above the top degree are
//! discarded.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("classes live in different ambient rings")]
    MismatchedRings,
    #[error("expected a class homogeneous of degree {expected}")]
    NotHomogeneous { expected: usize },
    #[error("degree {0} is odd; only even degrees are represented")]
    OddDegree(usize),
    #[error("basis element {index} does not exist in degree {degree}")]
    NoSuchBasis { degree: usize, index: usize },
    #[error("product of degree-{0} and degree-{1} basis elements must land in degree {2}")]
    DegreeMismatch(usize, usize, usize),
}

/// A basis monomial, addressed by its (even) degree and position in that
/// degree's basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisId {
    pub degree: usize,
    pub index: usize,
}

impl BasisId {
    pub fn new(degree: usize, index: usize) -> Self {
        BasisId { degree, index }
    }
}

/// Multiplicative structure of a truncated even-degree cohomology ring.
///
/// Degree 0 always has the single basis element `1`, which acts as the
/// unit and is never stored in the multiplication table. Missing table
/// entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingStructure {
    top_degree: usize,
    labels: Vec<Vec<String>>,
    table: BTreeMap<(BasisId, BasisId), Vec<Rational>>,
    pairing: Vec<Rational>,
}

impl RingStructure {
    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    /// Highest even degree that can carry classes.
    pub fn top_even_degree(&self) -> usize {
        self.top_degree - self.top_degree % 2
    }

    pub fn rank(&self, degree: usize) -> usize {
        if degree % 2 == 1 || degree > self.top_degree {
            return 0;
        }
        self.labels[degree / 2].len()
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        if degree % 2 == 1 || degree > self.top_degree {
            return &[];
        }
        &self.labels[degree / 2]
    }

    /// Pairing functional on the top-degree basis. Empty when the top degree
    /// is odd.
    pub fn pairing(&self) -> &[Rational] {
        &self.pairing
    }

    /// All basis elements, degree-major.
    pub fn basis(&self) -> impl Iterator<Item = BasisId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(h, ls)| (0..ls.len()).map(move |i| BasisId::new(2 * h, i)))
    }

    /// Product of two basis elements as a coefficient vector in degree
    /// `a.degree + b.degree`, or `None` when that degree is truncated.
    pub fn basis_product(&self, a: BasisId, b: BasisId) -> Option<Vec<Rational>> {
        let d = a.degree + b.degree;
        if d > self.top_degree {
            return None;
        }
        let rank = self.rank(d);
        if a.degree == 0 || b.degree == 0 {
            let other = if a.degree == 0 { b } else { a };
            let mut v = vec![Rational::zero(); rank];
            v[other.index] = Rational::one();
            return Some(v);
        }
        Some(
            self.table
                .get(&(a, b))
                .cloned()
                .unwrap_or_else(|| vec![Rational::zero(); rank]),
        )
    }

    /// Label of a basis element (for display).
    pub fn label(&self, id: BasisId) -> &str {
        &self.labels[id.degree / 2][id.index]
    }

    pub(crate) fn with_pairing(&self, pairing: Vec<Rational>) -> RingStructure {
        RingStructure {
            pairing,
            ..self.clone()
        }
    }
}

/// Incremental constructor for [`RingStructure`].
#[derive(Debug, Clone)]
pub struct RingBuilder {
    ring: RingStructure,
}

impl RingBuilder {
    pub fn new(top_degree: usize) -> Self {
        let mut labels = vec![Vec::new(); top_degree / 2 + 1];
        labels[0].push("1".to_string());
        let pairing = if top_degree == 0 {
            vec![Rational::zero()]
        } else {
            Vec::new()
        };
        RingBuilder {
            ring: RingStructure {
                top_degree,
                labels,
                table: BTreeMap::new(),
                pairing,
            },
        }
    }

    pub fn add_basis(&mut self, degree: usize, label: impl Into<String>) -> Result<BasisId, RingError> {
        if degree % 2 == 1 {
            return Err(RingError::OddDegree(degree));
        }
        assert!(degree > 0 && degree <= self.ring.top_degree, "basis degree out of range");
        let slot = &mut self.ring.labels[degree / 2];
        slot.push(label.into());
        if degree == self.ring.top_degree {
            self.ring.pairing.push(Rational::zero());
        }
        Ok(BasisId::new(degree, slot.len() - 1))
    }

    /// Records `a * b = Σ coeffs[i] e_i` in degree `a.degree + b.degree`.
    /// Only the given order is recorded; callers set both orders.
    pub fn set_product(&mut self, a: BasisId, b: BasisId, coeffs: Vec<Rational>) -> Result<(), RingError> {
        let d = a.degree + b.degree;
        for id in [a, b] {
            if id.index >= self.ring.rank(id.degree) {
                return Err(RingError::NoSuchBasis {
                    degree: id.degree,
                    index: id.index,
                });
            }
        }
        if d > self.ring.top_degree {
            return Ok(());
        }
        if coeffs.len() != self.ring.rank(d) {
            return Err(RingError::DegreeMismatch(a.degree, b.degree, d));
        }
        if coeffs.iter().all(Zero::is_zero) {
            self.ring.table.remove(&(a, b));
        } else {
            self.ring.table.insert((a, b), coeffs);
        }
        Ok(())
    }

    pub fn set_pairing(&mut self, index: usize, value: Rational) {
        self.ring.pairing[index] = value;
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ring.rank(degree)
    }

    pub fn build(self) -> Arc<RingStructure> {
        Arc::new(self.ring)
    }
}

/// Inhomogeneous element of a [`RingStructure`].
#[derive(Clone)]
pub struct GradedClass {
    ring: Arc<RingStructure>,
    // comps[h] holds the coefficients in degree 2h.
    comps: Vec<Vec<Rational>>,
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass({self})")
    }
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.comps == other.comps
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (h, comp) in self.comps.iter().enumerate() {
            for (i, c) in comp.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let label = &self.ring.labels[h][i];
                let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
                if first {
                    if sign == "-" {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                first = false;
                if h == 0 {
                    write!(f, "{mag}")?;
                } else if mag.is_one() {
                    write!(f, "{label}")?;
                } else {
                    write!(f, "{mag}*{label}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl GradedClass {
    pub fn zero(ring: &Arc<RingStructure>) -> Self {
        let comps = ring.labels.iter().map(|ls| vec![Rational::zero(); ls.len()]).collect();
        GradedClass {
            ring: Arc::clone(ring),
            comps,
        }
    }

    pub fn scalar(ring: &Arc<RingStructure>, value: Rational) -> Self {
        let mut c = Self::zero(ring);
        c.comps[0][0] = value;
        c
    }

    pub fn one(ring: &Arc<RingStructure>) -> Self {
        Self::scalar(ring, Rational::one())
    }

    pub fn basis(ring: &Arc<RingStructure>, id: BasisId) -> Result<Self, RingError> {
        Self::monomial(ring, id, Rational::one())
    }

    pub fn monomial(ring: &Arc<RingStructure>, id: BasisId, coeff: Rational) -> Result<Self, RingError> {
        if id.degree % 2 == 1 {
            return Err(RingError::OddDegree(id.degree));
        }
        if id.index >= ring.rank(id.degree) {
            return Err(RingError::NoSuchBasis {
                degree: id.degree,
                index: id.index,
            });
        }
        let mut c = Self::zero(ring);
        c.comps[id.degree / 2][id.index] = coeff;
        Ok(c)
    }

    /// Homogeneous class of the given degree from a coefficient vector.
    pub fn homogeneous(ring: &Arc<RingStructure>, degree: usize, coeffs: Vec<Rational>) -> Result<Self, RingError> {
        if degree % 2 == 1 {
            return Err(RingError::OddDegree(degree));
        }
        let mut c = Self::zero(ring);
        if degree > ring.top_degree {
            return Ok(c);
        }
        if coeffs.len() != ring.rank(degree) {
            return Err(RingError::NoSuchBasis {
                degree,
                index: coeffs.len(),
            });
        }
        c.comps[degree / 2] = coeffs;
        Ok(c)
    }

    pub fn ring(&self) -> &Arc<RingStructure> {
        &self.ring
    }

    /// Coefficient vector of the degree-`degree` part (empty if absent).
    pub fn component(&self, degree: usize) -> &[Rational] {
        if degree % 2 == 1 || degree > self.ring.top_degree {
            return &[];
        }
        &self.comps[degree / 2]
    }

    pub fn coefficient(&self, id: BasisId) -> Rational {
        self.component(id.degree)
            .get(id.index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree_zero(&self) -> &Rational {
        &self.comps[0][0]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(Zero::is_zero)
    }

    /// True when every nonzero coefficient sits in `degree`. The zero class
    /// is homogeneous of every degree.
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.comps
            .iter()
            .enumerate()
            .all(|(h, comp)| 2 * h == degree || comp.iter().all(Zero::is_zero))
    }

    fn check_ring(&self, other: &GradedClass) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::MismatchedRings)
        }
    }

    pub fn add(&self, other: &GradedClass) -> Result<GradedClass, RingError> {
        self.check_ring(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(GradedClass {
            ring: Arc::clone(&self.ring),
            comps,
        })
    }

    pub fn sub(&self, other: &GradedClass) -> Result<GradedClass, RingError> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> GradedClass {
        let comps = self
            .comps
            .iter()
            .map(|comp| comp.iter().map(|c| c * s).collect())
            .collect();
        GradedClass {
            ring: Arc::clone(&self.ring),
            comps,
        }
    }

    /// Cup product, truncated above the top degree.
    pub fn mul(&self, other: &GradedClass) -> Result<GradedClass, RingError> {
        self.check_ring(other)?;
        let mut out = GradedClass::zero(&self.ring);
        for (ha, ca) in self.comps.iter().enumerate() {
            for (ia, a) in ca.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (hb, cb) in other.comps.iter().enumerate().take(self.comps.len() - ha) {
                    for (ib, b) in cb.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let prod = self
                            .ring
                            .basis_product(BasisId::new(2 * ha, ia), BasisId::new(2 * hb, ib));
                        if let Some(v) = prod {
                            let ab = a * b;
                            for (k, coeff) in v.iter().enumerate() {
                                if !coeff.is_zero() {
                                    out.comps[ha + hb][k] += &ab * coeff;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> GradedClass {
        let mut acc = GradedClass::one(&self.ring);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `exp(c/2) = Σ_j c^j / (2^j j!)` for a degree-2 class `c`.
    pub fn exp_half(&self) -> Result<GradedClass, RingError> {
        if !self.is_homogeneous(2) {
            return Err(RingError::NotHomogeneous { expected: 2 });
        }
        let half = rat(1, 2);
        let step = self.scale(&half);
        let mut term = GradedClass::one(&self.ring);
        let mut sum = term.clone();
        for j in 1..=self.ring.top_degree / 2 {
            term = term.mul(&step)?.scale(&rat(1, j as i64));
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    /// Evaluation on the fundamental class: the pairing functional applied to
    /// the top-degree component. Zero when the top degree is odd.
    pub fn pair(&self) -> Rational {
        let n = self.ring.top_degree;
        if n % 2 == 1 {
            return Rational::zero();
        }
        self.comps[n / 2]
            .iter()
            .zip(&self.ring.pairing)
            .fold(Rational::zero(), |acc, (c, p)| acc + c * p)
    }

    /// Same coefficients, reinterpreted in a ring with identical basis and
    /// multiplication (used when only the pairing changes).
    pub(crate) fn rebind(&self, ring: &Arc<RingStructure>) -> GradedClass {
        debug_assert_eq!(self.ring.labels, ring.labels);
        GradedClass {
            ring: Arc::clone(ring),
            comps: self.comps.clone(),
        }
    }

    pub(crate) fn components(&self) -> &[Vec<Rational>] {
        &self.comps
    }

    pub(crate) fn from_components(ring: &Arc<RingStructure>, comps: Vec<Vec<Rational>>) -> GradedClass {
        debug_assert_eq!(comps.len(), ring.labels.len());
        GradedClass {
            ring: Arc::clone(ring),
            comps,
        }
    }
}

/// Coefficients `a_j` of `(t/2)/sinh(t/2) = Σ a_j t^{2j}`, obtained by exact
/// inversion of `sinh(t/2)/(t/2) = Σ t^{2j} / (4^j (2j+1)!)`.
pub fn ahat_series(num_terms: usize) -> Vec<Rational> {
    let mut sinh = Vec::with_capacity(num_terms);
    let mut fact = BigInt::one();
    let mut four = BigInt::one();
    for j in 0..num_terms {
        if j > 0 {
            fact *= BigInt::from((2 * j) * (2 * j + 1));
            four *= 4;
        }
        sinh.push(Rational::new(BigInt::one(), &fact * &four));
    }
    invert_series(&sinh)
}

/// Multiplicative inverse of a power series with constant term 1.
pub fn invert_series(s: &[Rational]) -> Vec<Rational> {
    assert!(!s.is_empty() && s[0].is_one(), "series must start with 1");
    let mut inv: Vec<Rational> = Vec::with_capacity(s.len());
    inv.push(Rational::one());
    for k in 1..s.len() {
        let acc = (1..=k).fold(Rational::zero(), |acc, i| acc + &s[i] * &inv[k - i]);
        inv.push(-acc);
    }
    inv
}

/// Truncated power of a power series.
pub fn series_pow(s: &[Rational], exp: u32) -> Vec<Rational> {
    let n = s.len();
    let mut acc = vec![Rational::zero(); n];
    if n == 0 {
        return acc;
    }
    acc[0] = Rational::one();
    for _ in 0..exp {
        let mut next = vec![Rational::zero(); n];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in s.iter().enumerate().take(n - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}
