//! Spin^c index computations on manifold models.
//!
//! `α^c(M, L) = ⟨Â(M) e^{c1(L)/2}, [M]⟩` is evaluated exactly, either for a
//! concrete line bundle or symbolically as a polynomial in the coordinates
//! of `c1(L)` in the degree-2 basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gring::{int, GradedClass, Rational, RingError};
use crate::mancat::{self, ManifoldError, ManifoldModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("c1 has {got} coordinates but the degree-2 basis has rank {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("index of {manifold} at c1 = {c1:?} is {value}, not an integer")]
    NonIntegral {
        manifold: String,
        c1: Vec<i64>,
        value: Box<Rational>,
    },
    #[error("index of the product ({product}) differs from the product of indices ({factors})")]
    NotMultiplicative { product: Box<Rational>, factors: Box<Rational> },
    #[error("integer overflow while summing index contributions")]
    Overflow,
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Integer coordinates of `c1(L)` in a model's degree-2 basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineBundleClass(pub Vec<i64>);

impl LineBundleClass {
    pub fn new(coords: Vec<i64>) -> Self {
        LineBundleClass(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Whether every coordinate has the residue mod 2 the model requires.
    pub fn is_admissible(&self, m: &ManifoldModel) -> bool {
        self.0.len() == m.parity().len()
            && self
                .0
                .iter()
                .zip(m.parity())
                .all(|(c, p)| c.rem_euclid(2) as u8 == *p)
    }
}

impl From<Vec<i64>> for LineBundleClass {
    fn from(v: Vec<i64>) -> Self {
        LineBundleClass(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexValue {
    pub value: Rational,
    pub admissible: bool,
    pub notes: Vec<String>,
}

/// `α^c(M, L)` for `c1(L) = c1`.
///
/// Inadmissible classes are evaluated anyway and flagged. For admissible
/// classes the result must be an integer; anything else is reported as an
/// error.
pub fn alpha_c(m: &ManifoldModel, c1: &LineBundleClass) -> Result<IndexValue, IndexError> {
    if c1.0.len() != m.b2() {
        return Err(IndexError::CoordinateCount {
            expected: m.b2(),
            got: c1.0.len(),
        });
    }
    let admissible = c1.is_admissible(m);
    let mut notes = Vec::new();
    if !admissible {
        notes.push("c1 violates the spin^c parity constraint".to_string());
    }
    if m.dim() % 2 == 1 {
        notes.push("odd-dimension: the index vanishes identically".to_string());
        return Ok(IndexValue {
            value: Rational::zero(),
            admissible,
            notes,
        });
    }
    let c = m.degree_two_class(&c1.0)?;
    let value = m.ahat().mul(&c.exp_half()?)?.pair();
    if admissible && !value.is_integer() {
        return Err(IndexError::NonIntegral {
            manifold: m.name().to_string(),
            c1: c1.0.clone(),
            value: Box::new(value),
        });
    }
    Ok(IndexValue {
        value,
        admissible,
        notes,
    })
}

/// Polynomial in the degree-2 coordinates `t_1, …, t_b2` with rational
/// coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl IndexPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IndexPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            let slot = p.terms.entry(e).or_insert_with(Rational::zero);
            *slot += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, point: &[i64]) -> Rational {
        let pt: Vec<Rational> = point.iter().map(|&v| int(v)).collect();
        self.eval_rational(&pt)
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .fold(Rational::one(), |m, (&k, v)| m * num_traits::pow(v.clone(), k as usize));
            acc + c * mono
        })
    }

    /// Coefficients (ascending in `s`) of `s ↦ p(base + s·dir)`.
    pub fn restrict_to_line(&self, base: &[Rational], dir: &[Rational]) -> Vec<Rational> {
        let deg = self.total_degree() as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            let mut poly = vec![c.clone()];
            for ((&k, b), d) in e.iter().zip(base).zip(dir) {
                for _ in 0..k {
                    let mut next = vec![Rational::zero(); poly.len() + 1];
                    for (i, a) in poly.iter().enumerate() {
                        next[i] += a * b;
                        next[i + 1] += a * d;
                    }
                    poly = next;
                }
            }
            for (i, a) in poly.into_iter().enumerate() {
                out[i] += a;
            }
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }
}

impl fmt::Display for IndexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = monomial_string(e);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// `t1^2*t2`-style rendering of an exponent vector; empty for the constant.
pub fn monomial_string(exps: &[u32]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("t{}", i + 1)
            } else {
                format!("t{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn exponent_vectors(nvars: usize, total: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in exponent_vectors(nvars - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Symbolic `⟨Â(M) e^{c1/2}, [M]⟩` with `c1 = Σ t_i e_i`.
///
/// The coefficient of `t^m` is `⟨Â · e^m, [M]⟩ / (2^{|m|} Π m_i!)`, which
/// is the multinomial expansion of `Σ_j c1^j / (2^j j!)`.
pub fn index_polynomial(m: &ManifoldModel) -> Result<IndexPolynomial, IndexError> {
    let b2 = m.b2();
    if m.dim() % 2 == 1 {
        return Ok(IndexPolynomial::zero(b2));
    }
    let ring = m.ring();
    let gens: Vec<GradedClass> = (0..b2)
        .map(|i| {
            let mut v = vec![0; b2];
            v[i] = 1;
            m.degree_two_class(&v)
        })
        .collect::<Result<_, _>>()?;
    let mut terms = Vec::new();
    for total in 0..=(m.dim() / 2) as u32 {
        for exps in exponent_vectors(b2, total) {
            let mut mono = GradedClass::one(ring);
            let mut denom = BigInt::one() << total;
            for (g, &k) in gens.iter().zip(&exps) {
                mono = mono.mul(&g.pow(k))?;
                denom *= factorial(k);
            }
            let value = m.ahat().mul(&mono)?.pair();
            if !value.is_zero() {
                terms.push((exps, value / Rational::from_integer(denom)));
            }
        }
    }
    Ok(IndexPolynomial::from_terms(b2, terms))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// The index polynomial is identically zero.
    AllVanish,
    /// Only the listed roots exist in the box. With `b2 = 1` this is
    /// exhaustive over all of `ℤ` for the box given; otherwise no line of
    /// roots was detected inside the box.
    FiniteRoots,
    /// An arithmetic progression of admissible classes on which the index
    /// vanishes identically.
    InfiniteFamilyWitness,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::AllVanish => "all-vanish",
            Classification::FiniteRoots => "finite-roots",
            Classification::InfiniteFamilyWitness => "infinite-family-witness",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VanishingReport {
    pub polynomial: IndexPolynomial,
    /// Admissible roots inside the box, lexicographic.
    pub roots: Vec<LineBundleClass>,
    pub classification: Classification,
    /// `(base, step)` such that `base + s·step` is a root for every integer `s`.
    pub witness: Option<(LineBundleClass, LineBundleClass)>,
}

// Pairs of roots examined when looking for a line of roots.
const WITNESS_ROOT_CAP: usize = 256;

/// All admissible `c1` with `|c1_i| ≤ bound` on which the index vanishes.
pub fn find_vanishing(m: &ManifoldModel, bound: i64) -> Result<VanishingReport, IndexError> {
    let polynomial = index_polynomial(m)?;
    let b2 = m.b2();
    let parity = m.parity();
    let axis: Vec<Vec<i64>> = parity
        .iter()
        .map(|&p| (-bound..=bound).filter(|v| v.rem_euclid(2) as u8 == p).collect())
        .collect();

    let roots: Vec<LineBundleClass> = lattice_points(&axis)
        .into_iter()
        .filter(|pt| polynomial.eval(pt).is_zero())
        .map(LineBundleClass)
        .collect();

    let (classification, witness) = if polynomial.is_zero() {
        (Classification::AllVanish, None)
    } else if b2 <= 1 {
        (Classification::FiniteRoots, None)
    } else {
        match line_witness(&polynomial, &roots) {
            Some(w) => (Classification::InfiniteFamilyWitness, Some(w)),
            None => (Classification::FiniteRoots, None),
        }
    };
    Ok(VanishingReport {
        polynomial,
        roots,
        classification,
        witness,
    })
}

/// Cartesian product of the per-axis values, lexicographic.
fn lattice_points(axis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    axis.iter().fold(vec![Vec::new()], |acc, values| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn line_witness(p: &IndexPolynomial, roots: &[LineBundleClass]) -> Option<(LineBundleClass, LineBundleClass)> {
    let roots = &roots[..roots.len().min(WITNESS_ROOT_CAP)];
    for (i, r1) in roots.iter().enumerate() {
        for r2 in &roots[i + 1..] {
            let step = primitive_step(r1, r2);
            let base: Vec<Rational> = r1.0.iter().map(|&v| int(v)).collect();
            let dir: Vec<Rational> = step.iter().map(|&v| int(v)).collect();
            if p.restrict_to_line(&base, &dir).iter().all(Zero::is_zero) {
                return Some((r1.clone(), LineBundleClass(step)));
            }
        }
    }
    None
}

/// Smallest parity-preserving step from `a` towards `b`: the difference
/// divided by the gcd of its entries, doubled back up if needed to keep
/// every coordinate's residue.
fn primitive_step(a: &LineBundleClass, b: &LineBundleClass) -> Vec<i64> {
    let diff: Vec<i64> = b.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
    let g = diff.iter().fold(0i64, |g, v| g.gcd(v));
    let mut step: Vec<i64> = diff.iter().map(|v| v / g).collect();
    if step.iter().any(|v| v % 2 != 0) {
        step.iter_mut().for_each(|v| *v *= 2);
    }
    step
}

/// Integer value of the index difference for bordisms built from `k_i`
/// copies of spin manifolds with Â-genus `a_i`: `Σ k_i a_i`. The cylinder
/// part contributes nothing.
pub fn inddiff_value(summands: &[(i64, i64)]) -> Result<i64, IndexError> {
    summands.iter().try_fold(0i64, |acc, &(k, a)| {
        k.checked_mul(a)
            .and_then(|v| acc.checked_add(v))
            .ok_or(IndexError::Overflow)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexProduct {
    pub product: Rational,
    pub factors: (Rational, Rational),
}

/// Index on `M1 × M2` for `c1 = c1_1 ⊕ c1_2`, checked against the product of
/// the factor indices.
pub fn index_product(
    m1: &ManifoldModel,
    c1_1: &LineBundleClass,
    m2: &ManifoldModel,
    c1_2: &LineBundleClass,
) -> Result<IndexProduct, IndexError> {
    let prod = mancat::product(m1, m2)?;
    let joined = LineBundleClass(c1_1.0.iter().chain(&c1_2.0).copied().collect());
    let product = alpha_c(&prod, &joined)?.value;
    let a = alpha_c(m1, c1_1)?.value;
    let b = alpha_c(m2, c1_2)?.value;
    let factors = &a * &b;
    if product != factors {
        return Err(IndexError::NotMultiplicative {
            product: Box::new(product),
            factors: Box::new(factors),
        });
    }
    Ok(IndexProduct {
        product,
        factors: (a, b),
    })
}

/// Converts an integral rational to `i64`, if it fits.
pub fn as_integer(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::rat;
    use crate::mancat::{connected_sum, cp, product, reverse, sphere, synthetic_spin};

    fn lb(v: &[i64]) -> LineBundleClass {
        LineBundleClass(v.to_vec())
    }

    #[test]
    fn cp4_value_at_k2() {
        let v = alpha_c(&cp(4).unwrap(), &lb(&[5])).unwrap();
        assert_eq!(v.value, int(1));
        assert!(v.admissible);
    }

    #[test]
    fn cp2_small_classes() {
        let m = cp(2).unwrap();
        assert_eq!(alpha_c(&m, &lb(&[1])).unwrap().value, int(0));
        assert_eq!(alpha_c(&m, &lb(&[-1])).unwrap().value, int(0));
        assert_eq!(alpha_c(&m, &lb(&[3])).unwrap().value, int(1));
    }

    #[test]
    fn inadmissible_is_flagged() {
        let m = cp(2).unwrap();
        let v = alpha_c(&m, &lb(&[2])).unwrap();
        assert!(!v.admissible);
        assert_eq!(v.value, rat(3, 8));
        assert!(!v.notes.is_empty());
    }

    #[test]
    fn odd_dimension_vanishes() {
        let m = product(&cp(2).unwrap(), &sphere(7).unwrap()).unwrap();
        let v = alpha_c(&m, &lb(&[3])).unwrap();
        assert_eq!(v.value, int(0));
        assert!(v.notes.iter().any(|n| n.starts_with("odd-dimension")));
    }

    #[test]
    fn wrong_coordinate_count() {
        let err = alpha_c(&cp(2).unwrap(), &lb(&[1, 1])).unwrap_err();
        assert_eq!(err, IndexError::CoordinateCount { expected: 1, got: 2 });
    }

    #[test]
    fn blow_up_polynomial() {
        let m = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
        let p = index_polynomial(&m).unwrap();
        let expected = IndexPolynomial::from_terms(2, [(vec![2, 0], rat(1, 8)), (vec![0, 2], rat(-1, 8))]);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "1/8*t1^2 - 1/8*t2^2");
    }

    #[test]
    fn cp4_polynomial_on_odd_classes() {
        let p = index_polynomial(&cp(4).unwrap()).unwrap();
        // a = 2k + 1
        let coeffs = p.restrict_to_line(&[int(1)], &[int(2)]);
        // (k-1)k(k+1)(k+2)/24 = (k^4 + 2k^3 - k^2 - 2k)/24
        assert_eq!(coeffs, vec![int(0), rat(-2, 24), rat(-1, 24), rat(2, 24), rat(1, 24)]);
    }

    #[test]
    fn product_with_s4_is_zero_polynomial() {
        let m = product(&cp(2).unwrap(), &sphere(4).unwrap()).unwrap();
        assert!(index_polynomial(&m).unwrap().is_zero());
        assert_eq!(alpha_c(&m, &lb(&[7])).unwrap().value, int(0));
    }

    #[test]
    fn vanishing_search_cp4() {
        let r = find_vanishing(&cp(4).unwrap(), 9).unwrap();
        assert_eq!(r.roots, vec![lb(&[-3]), lb(&[-1]), lb(&[1]), lb(&[3])]);
        assert_eq!(r.classification, Classification::FiniteRoots);
    }

    #[test]
    fn vanishing_search_never_vanishing_sum() {
        let m = connected_sum(&cp(4).unwrap(), &synthetic_spin(8, 1).unwrap()).unwrap();
        let r = find_vanishing(&m, 15).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.classification, Classification::FiniteRoots);
    }

    #[test]
    fn vanishing_search_blow_up() {
        let m = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
        let r = find_vanishing(&m, 9).unwrap();
        assert_eq!(r.roots.len(), 20);
        assert!(r.roots.iter().all(|c| c.0[0].abs() == c.0[1].abs() && c.0[0] % 2 != 0));
        assert_eq!(r.classification, Classification::InfiniteFamilyWitness);
        let (base, step) = r.witness.unwrap();
        assert_eq!(base, lb(&[-9, -9]));
        assert_eq!(step, lb(&[2, 2]));
    }

    #[test]
    fn vanishing_search_all_vanish() {
        let m = product(&cp(2).unwrap(), &sphere(4).unwrap()).unwrap();
        let r = find_vanishing(&m, 9).unwrap();
        assert_eq!(r.classification, Classification::AllVanish);
        assert_eq!(r.roots.len(), 10);
    }

    #[test]
    fn vanishing_search_without_degree_two() {
        let r = find_vanishing(&synthetic_spin(8, 1).unwrap(), 3).unwrap();
        assert!(r.roots.is_empty());
        let r = find_vanishing(&synthetic_spin(8, 0).unwrap(), 3).unwrap();
        assert_eq!(r.roots, vec![lb(&[])]);
        assert_eq!(r.classification, Classification::AllVanish);
    }

    #[test]
    fn inddiff() {
        assert_eq!(inddiff_value(&[(1, 1)]).unwrap(), 1);
        assert_eq!(inddiff_value(&[]).unwrap(), 0);
        assert_eq!(inddiff_value(&[(3, 2)]).unwrap(), 6);
        assert_eq!(inddiff_value(&[(i64::MAX, 2)]).unwrap_err(), IndexError::Overflow);
    }

    #[test]
    fn products_multiply() {
        let cp2 = cp(2).unwrap();
        let bott = synthetic_spin(8, 1).unwrap();
        let r = index_product(&cp2, &lb(&[3]), &bott, &lb(&[])).unwrap();
        assert_eq!(r.product, int(1));
        let r = index_product(&cp2, &lb(&[3]), &cp2, &lb(&[3])).unwrap();
        assert_eq!(r.product, int(1));
        let r = index_product(&cp2, &lb(&[1]), &cp(4).unwrap(), &lb(&[5])).unwrap();
        assert_eq!(r.product, int(0));
    }
}
