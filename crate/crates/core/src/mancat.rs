//! Manifold models: cohomology ring, Â class and spin^c parity data.
//!
//! Models are built from complex projective spaces, spheres and declared
//! spin manifolds with a prescribed Â-genus, combined by products,
//! connected sums and orientation reversal.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::gring::{ahat_series, int, series_pow, BasisId, GradedClass, Rational, RingBuilder, RingError, RingStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("dimension must be at least 1 (got {0})")]
    ZeroDimension(usize),
    #[error("connected sum needs equal even dimensions (got {0} and {1})")]
    DimensionMismatch(usize, usize),
    #[error("synthetic spin models need dimension divisible by 4 (got {0})")]
    NotMultipleOfFour(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A closed oriented manifold as seen by the index formula.
#[derive(Clone, PartialEq)]
pub struct ManifoldModel {
    name: String,
    dim: usize,
    ring: Arc<RingStructure>,
    ahat: GradedClass,
    parity: Vec<u8>,
    orientation: i8,
}

impl fmt::Debug for ManifoldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManifoldModel")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("ahat", &self.ahat)
            .field("parity", &self.parity)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl ManifoldModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> &Arc<RingStructure> {
        &self.ring
    }

    /// The total Â class.
    pub fn ahat(&self) -> &GradedClass {
        &self.ahat
    }

    /// `⟨Â(M), [M]⟩`.
    pub fn ahat_genus(&self) -> Rational {
        self.ahat.pair()
    }

    pub fn b2(&self) -> usize {
        self.ring.rank(2)
    }

    /// Residues mod 2 that the coordinates of an admissible `c1` must have.
    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Degree-2 class with the given integer coordinates.
    pub fn degree_two_class(&self, coords: &[i64]) -> Result<GradedClass, RingError> {
        let coeffs = coords.iter().map(|&c| int(c)).collect();
        GradedClass::homogeneous(&self.ring, 2, coeffs)
    }

    fn from_parts(name: String, dim: usize, ring: Arc<RingStructure>, ahat: GradedClass, parity: Vec<u8>) -> Self {
        debug_assert!(ahat.degree_zero().is_one());
        debug_assert_eq!(parity.len(), ring.rank(2));
        ManifoldModel {
            name,
            dim,
            ring,
            ahat,
            parity,
            orientation: 1,
        }
    }
}

/// The one-point model: unit for [`product`].
pub fn point() -> ManifoldModel {
    let mut b = RingBuilder::new(0);
    b.set_pairing(0, int(1));
    let ring = b.build();
    let ahat = GradedClass::one(&ring);
    ManifoldModel::from_parts("pt".into(), 0, ring, ahat, Vec::new())
}

/// Complex projective space `CP^n`, real dimension `2n`.
pub fn cp(n: usize) -> Result<ManifoldModel, ManifoldError> {
    if n == 0 {
        return Err(ManifoldError::ZeroDimension(0));
    }
    let mut b = RingBuilder::new(2 * n);
    let ids: Vec<BasisId> = (1..=n)
        .map(|j| b.add_basis(2 * j, if j == 1 { "x".into() } else { format!("x^{j}") }))
        .collect::<Result<_, _>>()?;
    for (i, a) in ids.iter().enumerate() {
        for (j, c) in ids.iter().enumerate() {
            if i + j + 2 <= n {
                b.set_product(*a, *c, vec![int(1)])?;
            }
        }
    }
    b.set_pairing(0, int(1));
    let ring = b.build();

    // Â(CP^n) = ((x/2)/sinh(x/2))^{n+1}
    let series = series_pow(&ahat_series(n / 2 + 1), (n + 1) as u32);
    let mut ahat = GradedClass::one(&ring);
    for (j, coeff) in series.iter().enumerate().skip(1) {
        if 2 * j > n {
            break;
        }
        ahat = ahat.add(&GradedClass::monomial(&ring, ids[2 * j - 1], coeff.clone())?)?;
    }
    Ok(ManifoldModel::from_parts(
        format!("CP{n}"),
        2 * n,
        ring,
        ahat,
        vec![((n + 1) % 2) as u8],
    ))
}

/// The sphere `S^n`. Odd-degree generators are not represented.
pub fn sphere(n: usize) -> Result<ManifoldModel, ManifoldError> {
    if n == 0 {
        return Err(ManifoldError::ZeroDimension(0));
    }
    let mut b = RingBuilder::new(n);
    let mut parity = Vec::new();
    if n.is_multiple_of(2) {
        b.add_basis(n, format!("y{n}"))?;
        b.set_pairing(0, int(1));
        if n == 2 {
            parity.push(0);
        }
    }
    let ring = b.build();
    let ahat = GradedClass::one(&ring);
    Ok(ManifoldModel::from_parts(format!("S{n}"), n, ring, ahat, parity))
}

/// A spin manifold of dimension `dim ≡ 0 (4)` with trivial middle cohomology
/// and Â-genus `ahat`, declared rather than constructed.
pub fn synthetic_spin(dim: usize, ahat: i64) -> Result<ManifoldModel, ManifoldError> {
    if dim == 0 || !dim.is_multiple_of(4) {
        return Err(ManifoldError::NotMultipleOfFour(dim));
    }
    let mut b = RingBuilder::new(dim);
    let top = b.add_basis(dim, format!("z{dim}"))?;
    b.set_pairing(0, int(1));
    let ring = b.build();
    let class = GradedClass::one(&ring).add(&GradedClass::monomial(&ring, top, int(ahat))?)?;
    Ok(ManifoldModel::from_parts(
        format!("SpinBott({dim},{ahat})"),
        dim,
        ring,
        class,
        Vec::new(),
    ))
}

/// Orientation reversal: negates the pairing, keeps the Â class.
pub fn reverse(m: &ManifoldModel) -> ManifoldModel {
    let pairing = m.ring.pairing().iter().map(|p| -p).collect();
    let ring = Arc::new(m.ring.with_pairing(pairing));
    let ahat = m.ahat.rebind(&ring);
    let name = match m.name.strip_prefix('~') {
        Some(rest) => rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest)
            .to_string(),
        None => format!("~{}", wrap(&m.name)),
    };
    ManifoldModel {
        name,
        dim: m.dim,
        ring,
        ahat,
        parity: m.parity.clone(),
        orientation: -m.orientation,
    }
}

fn wrap(name: &str) -> String {
    if name.contains(' ') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

/// Primes every generator of a monomial label: `x^2*y4` becomes `x'^2*y4'`.
fn prime_label(label: &str) -> String {
    label
        .split('*')
        .map(|f| match f.split_once('^') {
            Some((g, e)) => format!("{g}'^{e}"),
            None => format!("{f}'"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn join_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", _) => b.to_string(),
        (_, "1") => a.to_string(),
        _ => format!("{a}*{b}"),
    }
}

/// Cartesian product (Künneth on even parts).
pub fn product(m1: &ManifoldModel, m2: &ManifoldModel) -> Result<ManifoldModel, ManifoldError> {
    let (r1, r2) = (&m1.ring, &m2.ring);
    let (n1, n2) = (r1.top_degree(), r2.top_degree());
    let n = n1 + n2;

    // Basis of degree d: pairs (a, b) with deg a + deg b = d, listed with the
    // first factor's degree descending so degree 2 is [M1's, M2's].
    let mut b = RingBuilder::new(n);
    let mut index_of = std::collections::BTreeMap::new();
    let mut pairs_of: Vec<Vec<(BasisId, BasisId)>> = vec![Vec::new(); n / 2 + 1];
    pairs_of[0].push((BasisId::new(0, 0), BasisId::new(0, 0)));
    index_of.insert((BasisId::new(0, 0), BasisId::new(0, 0)), BasisId::new(0, 0));
    for d in (2..=n).step_by(2) {
        for d1 in (0..=d.min(n1)).rev().filter(|d1| d1 % 2 == 0) {
            let d2 = d - d1;
            if d2 > n2 {
                continue;
            }
            for i in 0..r1.rank(d1) {
                for j in 0..r2.rank(d2) {
                    let (a, c) = (BasisId::new(d1, i), BasisId::new(d2, j));
                    let id = b.add_basis(d, join_label(r1.label(a), r2.label(c)))?;
                    index_of.insert((a, c), id);
                    pairs_of[d / 2].push((a, c));
                }
            }
        }
    }

    let tensor = |v1: &[Rational], d1: usize, v2: &[Rational], d2: usize, out_rank: usize| {
        let mut out = vec![Rational::zero(); out_rank];
        for (i, x) in v1.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in v2.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let id = index_of[&(BasisId::new(d1, i), BasisId::new(d2, j))];
                out[id.index] += x * y;
            }
        }
        out
    };

    let all: Vec<(BasisId, (BasisId, BasisId))> = index_of.iter().map(|(k, v)| (*v, *k)).collect();
    for &(p, (a1, a2)) in &all {
        for &(q, (c1, c2)) in &all {
            if p.degree == 0 || q.degree == 0 || p.degree + q.degree > n {
                continue;
            }
            let d = p.degree + q.degree;
            let (Some(v1), Some(v2)) = (r1.basis_product(a1, c1), r2.basis_product(a2, c2)) else {
                b.set_product(p, q, vec![Rational::zero(); b.rank(d)])?;
                continue;
            };
            let v = tensor(&v1, a1.degree + c1.degree, &v2, a2.degree + c2.degree, b.rank(d));
            b.set_product(p, q, v)?;
        }
    }

    if n.is_multiple_of(2) {
        for (k, (a, c)) in pairs_of[n / 2].iter().enumerate() {
            if a.degree == n1 && c.degree == n2 && n1 % 2 == 0 {
                let value = &r1.pairing()[a.index] * &r2.pairing()[c.index];
                b.set_pairing(k, value);
            }
        }
    }
    let ring = b.build();

    let mut comps: Vec<Vec<Rational>> = (0..=n / 2).map(|h| vec![Rational::zero(); ring.rank(2 * h)]).collect();
    for (h1, v1) in m1.ahat.components().iter().enumerate() {
        for (h2, v2) in m2.ahat.components().iter().enumerate() {
            let h = h1 + h2;
            let t = tensor(v1, 2 * h1, v2, 2 * h2, ring.rank(2 * h));
            for (slot, val) in comps[h].iter_mut().zip(t) {
                *slot += val;
            }
        }
    }
    let ahat = GradedClass::from_components(&ring, comps);

    let name = if m2.dim == 0 {
        m1.name.clone()
    } else if m1.dim == 0 {
        m2.name.clone()
    } else {
        format!("{} x {}", wrap_sum(&m1.name), wrap_sum(&m2.name))
    };
    let parity = m1.parity.iter().chain(&m2.parity).copied().collect();
    Ok(ManifoldModel::from_parts(name, m1.dim + m2.dim, ring, ahat, parity))
}

fn wrap_sum(name: &str) -> String {
    if name.contains('#') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

/// Connected sum of two closed oriented models of the same even dimension.
///
/// Positive-degree bases are concatenated (top degree included); products of
/// classes from different summands vanish, and the pairing is the sum of the
/// summands' pairings.
pub fn connected_sum(m1: &ManifoldModel, m2: &ManifoldModel) -> Result<ManifoldModel, ManifoldError> {
    if m1.dim != m2.dim || m1.dim % 2 == 1 || m1.dim == 0 {
        return Err(ManifoldError::DimensionMismatch(m1.dim, m2.dim));
    }
    let n = m1.dim;
    let labels = |m: &ManifoldModel| -> Vec<Vec<String>> { (0..=n).map(|d| m.ring.labels(d).to_vec()).collect() };
    let first = labels(m1);
    let mut second = labels(m2);
    let taken = |l: &String| first.iter().flatten().any(|f| f == l);
    while second.iter().flatten().any(taken) {
        second = second.iter().map(|ls| ls.iter().map(|l| prime_label(l)).collect()).collect();
    }
    let mut b = RingBuilder::new(n);
    let mut embed: [Vec<Vec<BasisId>>; 2] = [Vec::new(), Vec::new()];
    for (s, ls) in [first, second].into_iter().enumerate() {
        embed[s] = vec![Vec::new(); n / 2 + 1];
        embed[s][0].push(BasisId::new(0, 0));
        for d in (2..=n).step_by(2) {
            for label in &ls[d] {
                let id = b.add_basis(d, label.clone())?;
                embed[s][d / 2].push(id);
            }
        }
    }
    // Cross-summand products stay zero (absent from the table).
    for (s, m) in [m1, m2].into_iter().enumerate() {
        let ids: Vec<BasisId> = m.ring.basis().filter(|id| id.degree > 0).collect();
        for &a in &ids {
            for &c in &ids {
                let d = a.degree + c.degree;
                if d > n {
                    continue;
                }
                let v = m.ring.basis_product(a, c).expect("degree within range");
                let mut out = vec![Rational::zero(); b.rank(d)];
                for (k, coeff) in v.into_iter().enumerate() {
                    out[embed[s][d / 2][k].index] = coeff;
                }
                b.set_product(embed[s][a.degree / 2][a.index], embed[s][c.degree / 2][c.index], out)?;
            }
        }
        for (k, p) in m.ring.pairing().iter().enumerate() {
            b.set_pairing(embed[s][n / 2][k].index, p.clone());
        }
    }
    let ring = b.build();

    // Â = 1 + (Â(M1) - 1) + (Â(M2) - 1)
    let mut ahat = GradedClass::one(&ring);
    for (s, m) in [m1, m2].into_iter().enumerate() {
        for id in m.ring.basis().filter(|id| id.degree > 0) {
            let coeff = m.ahat.coefficient(id);
            if !coeff.is_zero() {
                let target = embed[s][id.degree / 2][id.index];
                ahat = ahat.add(&GradedClass::monomial(&ring, target, coeff)?)?;
            }
        }
    }
    let parity = m1.parity.iter().chain(&m2.parity).copied().collect();
    Ok(ManifoldModel::from_parts(
        format!("{} # {}", m1.name, m2.name),
        n,
        ring,
        ahat,
        parity,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::rat;

    fn coeff(m: &ManifoldModel, degree: usize) -> Rational {
        m.ahat().component(degree)[0].clone()
    }

    #[test]
    fn cp_ahat_classes() {
        assert_eq!(cp(1).unwrap().ahat(), &GradedClass::one(cp(1).unwrap().ring()));
        let cp2 = cp(2).unwrap();
        assert_eq!(cp2.ahat().to_string(), "1 - 1/8*x^2");
        let cp4 = cp(4).unwrap();
        assert_eq!(coeff(&cp4, 4), rat(-5, 24));
        assert_eq!(coeff(&cp4, 8), rat(3, 128));
        assert!(cp4.ahat().component(2)[0].is_zero());
        assert_eq!(cp(3).unwrap().parity(), &[0]);
        assert_eq!(cp4.parity(), &[1]);
        assert_eq!(cp(0).unwrap_err(), ManifoldError::ZeroDimension(0));
    }

    #[test]
    fn spheres() {
        let s4 = sphere(4).unwrap();
        assert_eq!(s4.ahat_genus(), int(0));
        assert_eq!(GradedClass::basis(s4.ring(), BasisId::new(4, 0)).unwrap().pair(), int(1));
        assert_eq!(sphere(7).unwrap().b2(), 0);
        assert_eq!(sphere(2).unwrap().b2(), 1);
        assert_eq!(sphere(4).unwrap().b2(), 0);
    }

    #[test]
    fn product_with_sphere() {
        let m = product(&cp(2).unwrap(), &sphere(4).unwrap()).unwrap();
        assert_eq!(m.dim(), 8);
        assert_eq!(m.b2(), 1);
        assert_eq!(m.ring().labels(4), ["x^2", "y4"]);
        assert_eq!(m.ring().labels(6), ["x*y4"]);
        assert_eq!(m.ring().labels(8), ["x^2*y4"]);
        let x = GradedClass::basis(m.ring(), BasisId::new(2, 0)).unwrap();
        let y = GradedClass::basis(m.ring(), BasisId::new(4, 1)).unwrap();
        assert_eq!(m.ring().label(BasisId::new(4, 1)), "y4");
        assert_eq!(x.mul(&x).unwrap().mul(&y).unwrap().pair(), int(1));
        assert!(x.pow(3).is_zero());
        assert_eq!(product(&cp(2).unwrap(), &sphere(7).unwrap()).unwrap().dim(), 11);
    }

    #[test]
    fn product_with_point_is_identity() {
        let m = cp(2).unwrap();
        let p = product(&m, &point()).unwrap();
        assert_eq!(p.ring().as_ref(), m.ring().as_ref());
        assert_eq!(p.ahat().components(), m.ahat().components());
        assert_eq!(p.name(), "CP2");
    }

    #[test]
    fn blow_up_ring() {
        let m = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
        assert_eq!(m.b2(), 2);
        let x = GradedClass::basis(m.ring(), BasisId::new(2, 0)).unwrap();
        let y = GradedClass::basis(m.ring(), BasisId::new(2, 1)).unwrap();
        assert!(x.mul(&y).unwrap().is_zero());
        assert_eq!(x.mul(&x).unwrap().pair(), int(1));
        assert_eq!(y.mul(&y).unwrap().pair(), int(-1));
        assert_eq!(m.parity(), &[1, 1]);
        assert_eq!(m.name(), "CP2 # ~CP2");
        assert_eq!(m.ring().labels(2), ["x", "x'"]);
        assert_eq!(m.ahat().to_string(), "1 - 1/8*x^2 - 1/8*x'^2");
        let triple = connected_sum(&m, &cp(2).unwrap()).unwrap();
        assert_eq!(triple.ring().labels(4), ["x^2", "x'^2", "x''^2"]);
    }

    #[test]
    fn reverse_is_involution() {
        let m = product(&cp(2).unwrap(), &sphere(4).unwrap()).unwrap();
        let rr = reverse(&reverse(&m));
        assert_eq!(rr, m);
        assert_eq!(reverse(&sphere(4).unwrap()).ahat_genus(), int(0));
        assert!(reverse(&sphere(4).unwrap()).ahat().is_homogeneous(0));
    }

    #[test]
    fn connected_sum_dimension_mismatch() {
        let err = connected_sum(&cp(2).unwrap(), &cp(3).unwrap()).unwrap_err();
        assert_eq!(err, ManifoldError::DimensionMismatch(4, 6));
        assert!(connected_sum(&sphere(3).unwrap(), &sphere(3).unwrap()).is_err());
    }

    #[test]
    fn synthetic_models() {
        assert_eq!(synthetic_spin(8, 1).unwrap().ahat_genus(), int(1));
        assert_eq!(synthetic_spin(8, 0).unwrap().ahat_genus(), int(0));
        assert_eq!(synthetic_spin(8, 2).unwrap().ahat_genus(), int(2));
        assert_eq!(synthetic_spin(6, 1).unwrap_err(), ManifoldError::NotMultipleOfFour(6));
        // Â(CP4) integrates to 3/128; the genus is additive under #.
        let m = connected_sum(&cp(4).unwrap(), &synthetic_spin(8, 1).unwrap()).unwrap();
        assert_eq!(m.ahat_genus(), rat(131, 128));
    }
}
