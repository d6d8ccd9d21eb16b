//! Lattices, tropical tori and rational simplices.
//!
//! Volumes are lattice-normalized: the affine span of a simplex inherits the
//! integral lattice `span ∩ ℤⁿ`, and a fundamental cell of that lattice has
//! volume one. A standard `d`-simplex therefore has volume `1/d!`, and every
//! volume computed here is rational.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::{self, RatMatrix};
use crate::rat::{content, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lattice basis is singular")]
    SingularLattice,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("image of the simplex under the affine map is degenerate")]
    DegenerateImage,
    #[error("simplex vertices are affinely dependent")]
    AffinelyDependent,
    #[error("simplex needs at least one vertex")]
    EmptySimplex,
    #[error("a simplex in dimension {ambient} has at most {max} vertices, got {found}")]
    TooManyVertices { ambient: usize, max: usize, found: usize },
    #[error("malformed matrix: {0}")]
    Shape(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

#[derive(Debug)]
struct LatticeInner {
    basis: RatMatrix,
    inverse: RatMatrix,
    det: Rat,
}

/// A full-rank lattice `Γ ⊂ ℚⁿ`. Rows of `basis` are the generators.
///
/// Cloning is cheap; the basis is shared.
#[derive(Clone)]
pub struct Lattice(Arc<LatticeInner>);

impl Lattice {
    pub fn new(basis: RatMatrix) -> Result<Lattice> {
        let n = basis.len();
        if n == 0 {
            return Err(GeometryError::Shape("lattice basis is empty".into()));
        }
        if let Some(row) = basis.iter().find(|r| r.len() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: row.len() });
        }
        let det = linalg::determinant(&basis);
        if det.is_zero() {
            return Err(GeometryError::SingularLattice);
        }
        let inverse = linalg::inverse(&basis).ok_or(GeometryError::SingularLattice)?;
        Ok(Lattice(Arc::new(LatticeInner { basis, inverse, det })))
    }

    /// The standard lattice `ℤⁿ`.
    pub fn standard(n: usize) -> Lattice {
        Lattice::new(linalg::identity(n)).expect("identity is regular")
    }

    /// `ℓℤ ⊂ ℝ`, the skeleton lattice of a Tate curve with parameter `ℓ`.
    pub fn circle(length: Rat) -> Result<Lattice> {
        Lattice::new(vec![vec![length]])
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.0.basis
    }

    pub fn determinant(&self) -> &Rat {
        &self.0.det
    }

    /// Euclidean volume of a fundamental domain, `|det B|`.
    pub fn covolume(&self) -> Rat {
        self.0.det.abs()
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn coords(&self, x: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| &x[i] * &self.0.inverse[i][j]).sum()).collect()
    }

    /// The ambient point with the given basis coordinates.
    pub fn from_coords(&self, c: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| &c[i] * &self.0.basis[i][j]).sum()).collect()
    }

    pub fn vector(&self, k: &[BigInt]) -> Vec<Rat> {
        let c: Vec<Rat> = k.iter().map(|x| Rat::from_int(x.clone())).collect();
        self.from_coords(&c)
    }

    /// True iff `v` lies in the lattice.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).iter().all(Rat::is_integer)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.basis == other.0.basis
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("basis", &self.0.basis).finish()
    }
}

/// A point of `ℝⁿ/Γ` in canonical form: basis coordinates in `[0,1)ⁿ`.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusPoint {
    ambient: Vec<Rat>,
    coords: Vec<Rat>,
    lattice: Lattice,
}

impl TorusPoint {
    pub fn ambient(&self) -> &[Rat] {
        &self.ambient
    }

    /// Basis coordinates, each in `[0, 1)`.
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Image under multiplication by two on the torus.
    pub fn double(&self) -> TorusPoint {
        let coords: Vec<Rat> = self.coords.iter().map(|c| (c + c).fract()).collect();
        TorusPoint {
            ambient: self.lattice.from_coords(&coords),
            coords,
            lattice: self.lattice.clone(),
        }
    }
}

impl std::hash::Hash for TorusPoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusPoint{:?}", self.ambient)
    }
}

/// Canonical representative of `x` modulo `Γ`.
pub fn reduce_point(x: &[Rat], lattice: &Lattice) -> Result<TorusPoint> {
    lattice.check_dim(x.len())?;
    let coords: Vec<Rat> = lattice.coords(x).iter().map(Rat::fract).collect();
    Ok(TorusPoint { ambient: lattice.from_coords(&coords), coords, lattice: lattice.clone() })
}

/// The convex hull of `d + 1` affinely independent points of `ℚⁿ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSimplex {
    vertices: Vec<Vec<Rat>>,
}

impl RationalSimplex {
    pub fn new(vertices: Vec<Vec<Rat>>) -> Result<RationalSimplex> {
        let Some(first) = vertices.first() else {
            return Err(GeometryError::EmptySimplex);
        };
        let n = first.len();
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: v.len() });
        }
        if vertices.len() > n + 1 {
            return Err(GeometryError::TooManyVertices {
                ambient: n,
                max: n + 1,
                found: vertices.len(),
            });
        }
        let s = RationalSimplex { vertices };
        if linalg::rank(&s.edges()) != s.dim() {
            return Err(GeometryError::AffinelyDependent);
        }
        Ok(s)
    }

    /// `[a, b] ⊂ ℝ`.
    pub fn interval(a: Rat, b: Rat) -> Result<RationalSimplex> {
        RationalSimplex::new(vec![vec![a], vec![b]])
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Edge vectors `v_i − v_0`, `i = 1..=d`.
    pub fn edges(&self) -> RatMatrix {
        let v0 = &self.vertices[0];
        self.vertices[1..].iter().map(|v| linalg::vec_sub(v, v0)).collect()
    }

    pub fn barycenter(&self) -> Vec<Rat> {
        let k = Rat::from_int(self.vertices.len() as i64);
        (0..self.ambient_dim())
            .map(|j| self.vertices.iter().map(|v| &v[j]).sum::<Rat>() / &k)
            .collect()
    }

    pub fn translate(&self, t: &[Rat]) -> RationalSimplex {
        RationalSimplex { vertices: self.vertices.iter().map(|v| linalg::vec_add(v, t)).collect() }
    }

    /// Barycentric coordinates of `p`, or `None` if `p` is off the affine span.
    pub fn barycentric(&self, p: &[Rat]) -> Option<Vec<Rat>> {
        if p.len() != self.ambient_dim() {
            return None;
        }
        let rhs = linalg::vec_sub(p, &self.vertices[0]);
        let columns = linalg::transpose(&self.edges());
        let lam = if self.dim() == 0 {
            rhs.iter().all(Rat::is_zero).then(Vec::new)?
        } else {
            linalg::solve_consistent(&columns, &rhs)?
        };
        let l0 = Rat::one() - lam.iter().sum::<Rat>();
        let mut out = vec![l0];
        out.extend(lam);
        Some(out)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.barycentric(p).is_some_and(|b| b.iter().all(|x| !x.is_negative()))
    }

    pub fn contains_simplex(&self, other: &RationalSimplex) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Per-coordinate minimum and maximum over the vertices.
    pub fn bounding_box(&self) -> (Vec<Rat>, Vec<Rat>) {
        let n = self.ambient_dim();
        let lo = (0..n)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).reduce(Rat::min).unwrap())
            .collect();
        let hi = (0..n)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).reduce(Rat::max).unwrap())
            .collect();
        (lo, hi)
    }
}

impl fmt::Debug for RationalSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Simplex{:?}", self.vertices)
    }
}

fn factorial(d: usize) -> Rat {
    (1..=d as i64).fold(Rat::one(), |acc, k| acc * Rat::from_int(k))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Lattice-normalized `d`-volume of a simplex.
///
/// The maximal minors of the edge matrix form the Plücker vector of the span;
/// its content is the index of the edge parallelotope in the saturated lattice
/// `span ∩ ℤⁿ`.
pub fn normalized_volume(simplex: &RationalSimplex) -> Rat {
    let d = simplex.dim();
    if d == 0 {
        return Rat::one();
    }
    let edges = simplex.edges();
    let n = simplex.ambient_dim();
    let index = if d == n {
        linalg::determinant(&edges).abs()
    } else {
        let minors: Vec<Rat> = combinations(n, d)
            .into_iter()
            .map(|cols| {
                let sub: RatMatrix = edges
                    .iter()
                    .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                    .collect();
                linalg::determinant(&sub)
            })
            .collect();
        content(&minors)
    };
    index / factorial(d)
}

/// `|det Λ₁ / det Λ₂|`.
pub fn covolume_ratio(l1: &Lattice, l2: &Lattice) -> Result<Rat> {
    l2.check_dim(l1.dim())?;
    Ok((l1.determinant() / l2.determinant()).abs())
}

/// `x ↦ L x + t` from `ℚⁿ` to `ℚᵐ`.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineMap {
    linear: RatMatrix,
    translation: Vec<Rat>,
    source_dim: usize,
}

impl AffineMap {
    pub fn new(linear: RatMatrix, translation: Vec<Rat>) -> Result<AffineMap> {
        if linear.len() != translation.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: linear.len(),
                found: translation.len(),
            });
        }
        let source_dim = linear.first().map_or(0, Vec::len);
        if let Some(row) = linear.iter().find(|r| r.len() != source_dim) {
            return Err(GeometryError::DimensionMismatch { expected: source_dim, found: row.len() });
        }
        if linear.is_empty() {
            return Err(GeometryError::Shape("affine map needs a target dimension".into()));
        }
        Ok(AffineMap { linear, translation, source_dim })
    }

    pub fn identity(n: usize) -> AffineMap {
        AffineMap::new(linalg::identity(n), vec![Rat::zero(); n]).expect("identity")
    }

    /// Multiplication by a scalar on `ℚⁿ`.
    pub fn scaling(n: usize, factor: Rat) -> AffineMap {
        let linear = linalg::identity(n)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * &factor).collect())
            .collect();
        AffineMap::new(linear, vec![Rat::zero(); n]).expect("scaling")
    }

    pub fn linear(&self) -> &RatMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[Rat] {
        &self.translation
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.linear.len()
    }

    pub fn apply(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.source_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.source_dim,
                found: x.len(),
            });
        }
        Ok(linalg::vec_add(&linalg::mat_vec(&self.linear, x), &self.translation))
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap({:?} + {:?})", self.linear, self.translation)
    }
}

pub fn apply_affine(map: &AffineMap, simplex: &RationalSimplex) -> Result<RationalSimplex> {
    let image = simplex
        .vertices()
        .iter()
        .map(|v| map.apply(v))
        .collect::<Result<Vec<_>>>()?;
    RationalSimplex::new(image).map_err(|e| match e {
        GeometryError::AffinelyDependent | GeometryError::TooManyVertices { .. } => {
            GeometryError::DegenerateImage
        }
        other => other,
    })
}

/// Translates a simplex by a lattice vector so that its first vertex is the
/// canonical torus representative.
pub fn reduce_simplex(simplex: &RationalSimplex, lattice: &Lattice) -> Result<RationalSimplex> {
    let v0 = &simplex.vertices()[0];
    let rep = reduce_point(v0, lattice)?;
    Ok(simplex.translate(&linalg::vec_sub(rep.ambient(), v0)))
}

/// Precomputed barycentric chart of a full-dimensional simplex.
#[derive(Clone, Debug)]
pub struct SimplexFrame {
    origin: Vec<Rat>,
    /// Inverse of the edge matrix (edges as rows).
    inv_edges: RatMatrix,
}

impl SimplexFrame {
    /// `None` unless the simplex is full-dimensional in its ambient space.
    pub fn new(simplex: &RationalSimplex) -> Option<SimplexFrame> {
        if simplex.dim() != simplex.ambient_dim() || simplex.dim() == 0 {
            return None;
        }
        Some(SimplexFrame {
            origin: simplex.vertices()[0].clone(),
            inv_edges: linalg::inverse(&simplex.edges())?,
        })
    }

    /// Barycentric coordinates `(λ₀, λ₁, …, λ_n)`.
    pub fn barycentric(&self, x: &[Rat]) -> Vec<Rat> {
        let rel = linalg::vec_sub(x, &self.origin);
        let n = rel.len();
        let lam: Vec<Rat> =
            (0..n).map(|i| (0..n).map(|j| &rel[j] * &self.inv_edges[j][i]).sum()).collect();
        let mut out = vec![Rat::one() - lam.iter().sum::<Rat>()];
        out.extend(lam);
        out
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.barycentric(x).iter().all(|l| !l.is_negative())
    }

    /// The barycentric coordinates as affine functions `x ↦ a·x + b`.
    pub fn barycentric_forms(&self) -> Vec<(Vec<Rat>, Rat)> {
        let n = self.origin.len();
        let mut forms: Vec<(Vec<Rat>, Rat)> = (0..n)
            .map(|i| {
                let a: Vec<Rat> = (0..n).map(|j| self.inv_edges[j][i].clone()).collect();
                let b = -linalg::dot(&a, &self.origin);
                (a, b)
            })
            .collect();
        let a0: Vec<Rat> = (0..n).map(|j| -forms.iter().map(|f| &f.0[j]).sum::<Rat>()).collect();
        let b0 = Rat::one() - forms.iter().map(|f| &f.1).sum::<Rat>();
        forms.insert(0, (a0, b0));
        forms
    }
}

/// Box of a simplex in lattice-basis coordinates.
pub type CoordBox = (Vec<Rat>, Vec<Rat>);

pub fn lattice_box(simplex: &RationalSimplex, lattice: &Lattice) -> CoordBox {
    let cs: Vec<Vec<Rat>> = simplex.vertices().iter().map(|v| lattice.coords(v)).collect();
    let n = lattice.dim();
    let lo = (0..n).map(|j| cs.iter().map(|c| c[j].clone()).reduce(Rat::min).unwrap()).collect();
    let hi = (0..n).map(|j| cs.iter().map(|c| c[j].clone()).reduce(Rat::max).unwrap()).collect();
    (lo, hi)
}

/// Integer shifts `k` with `(moving + k) ∩ fixed ≠ ∅` for two coordinate boxes.
pub fn translates_between(moving: &CoordBox, fixed: &CoordBox) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for j in 0..moving.0.len() {
        let lo = (&fixed.0[j] - &moving.1[j]).ceil();
        let hi = (&fixed.1[j] - &moving.0[j]).floor();
        let mut next = Vec::new();
        for prefix in &out {
            let mut k = lo.clone();
            while k <= hi {
                let mut p = prefix.clone();
                p.push(k.clone());
                next.push(p);
                k += 1;
            }
        }
        out = next;
    }
    out
}

/// Lattice translates `γ` (as integer basis coordinates) for which the boxes of
/// `moving + γ` and `fixed` intersect, boundary contact included.
pub fn candidate_translates(
    moving: &RationalSimplex,
    fixed: &RationalSimplex,
    lattice: &Lattice,
) -> Vec<Vec<BigInt>> {
    translates_between(&lattice_box(moving, lattice), &lattice_box(fixed, lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{r, rat};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn lat(rows: &[&[i64]]) -> Result<Lattice> {
        Lattice::new(rows.iter().map(|r| v(r)).collect())
    }

    #[test]
    fn lattice_construction() {
        assert_eq!(lat(&[&[1]]).unwrap().dim(), 1);
        assert_eq!(lat(&[&[2, 0], &[0, 3]]).unwrap().covolume(), Rat::from_int(6));
        assert_eq!(lat(&[&[1, 2], &[2, 4]]).unwrap_err(), GeometryError::SingularLattice);
        assert!(matches!(lat(&[&[1, 2]]), Err(GeometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn reduce_point_examples() {
        let z = Lattice::standard(1);
        assert_eq!(reduce_point(&[rat(7, 3)], &z).unwrap().ambient(), &[rat(1, 3)]);
        assert_eq!(reduce_point(&[rat(-1, 4)], &z).unwrap().ambient(), &[rat(3, 4)]);
        let g = lat(&[&[2, 0], &[0, 3]]).unwrap();
        let p = reduce_point(&[rat(5, 2), rat(-1, 1)], &g).unwrap();
        assert_eq!(p.ambient(), &[rat(1, 2), rat(2, 1)]);
        assert_eq!(p.coords(), &[rat(1, 4), rat(2, 3)]);
        assert!(matches!(
            reduce_point(&[Rat::one()], &g),
            Err(GeometryError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn doubling_on_the_circle() {
        let z = Lattice::standard(1);
        let p = reduce_point(&[rat(3, 5)], &z).unwrap();
        assert_eq!(p.double().ambient(), &[rat(1, 5)]);
    }

    #[test]
    fn volumes() {
        for d in 1..=4usize {
            let mut verts = vec![vec![Rat::zero(); d]];
            for i in 0..d {
                let mut e = vec![Rat::zero(); d];
                e[i] = Rat::one();
                verts.push(e);
            }
            let s = RationalSimplex::new(verts).unwrap();
            assert_eq!(normalized_volume(&s), factorial(d).recip());
        }
        let seg = RationalSimplex::new(vec![v(&[0, 0]), v(&[3, 4])]).unwrap();
        assert_eq!(normalized_volume(&seg), Rat::one());
        let seg = RationalSimplex::new(vec![v(&[0, 0]), v(&[2, 2])]).unwrap();
        assert_eq!(normalized_volume(&seg), Rat::from_int(2));
        let seg = RationalSimplex::new(vec![vec![r("1/2"), r("0")], vec![r("1"), r("1/3")]]).unwrap();
        assert_eq!(normalized_volume(&seg), rat(1, 6));
        let pt = RationalSimplex::new(vec![v(&[5, 5])]).unwrap();
        assert_eq!(normalized_volume(&pt), Rat::one());
    }

    #[test]
    fn simplex_validation() {
        assert_eq!(RationalSimplex::new(vec![]).unwrap_err(), GeometryError::EmptySimplex);
        assert_eq!(
            RationalSimplex::new(vec![v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).unwrap_err(),
            GeometryError::AffinelyDependent
        );
        assert!(matches!(
            RationalSimplex::new(vec![v(&[0]), v(&[1]), v(&[2])]),
            Err(GeometryError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn covolume_ratios() {
        let z = Lattice::standard(1);
        assert_eq!(covolume_ratio(&z, &z).unwrap(), Rat::one());
        let third = Lattice::circle(rat(1, 3)).unwrap();
        assert_eq!(covolume_ratio(&third, &z).unwrap(), rat(1, 3));
        let a = lat(&[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(covolume_ratio(&a, &Lattice::standard(2)).unwrap(), Rat::from_int(2));
        assert!(covolume_ratio(&a, &z).is_err());
    }

    #[test]
    fn affine_images() {
        let seg = RationalSimplex::interval(Rat::zero(), Rat::one()).unwrap();
        assert_eq!(apply_affine(&AffineMap::identity(1), &seg).unwrap(), seg);
        let doubled = apply_affine(&AffineMap::scaling(1, Rat::from_int(2)), &seg).unwrap();
        assert_eq!(doubled.vertices(), &[v(&[0]), v(&[2])]);
        let tri = RationalSimplex::new(vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap();
        let proj = AffineMap::new(vec![v(&[1, 0])], v(&[0])).unwrap();
        assert_eq!(apply_affine(&proj, &tri).unwrap_err(), GeometryError::DegenerateImage);
    }

    #[test]
    fn containment_and_barycentric() {
        let tri = RationalSimplex::new(vec![v(&[0, 0]), v(&[2, 0]), v(&[0, 2])]).unwrap();
        assert!(tri.contains(&v(&[1, 1])));
        assert!(!tri.contains(&[rat(3, 2), rat(3, 4)]));
        let seg = RationalSimplex::new(vec![v(&[0, 0]), v(&[2, 2])]).unwrap();
        assert!(seg.contains(&v(&[1, 1])));
        assert!(!seg.contains(&v(&[1, 0])));
        assert_eq!(seg.barycentric(&v(&[1, 1])), Some(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn translates_cover_overlaps() {
        let z = Lattice::standard(1);
        let cell = RationalSimplex::interval(rat(1, 2), Rat::one()).unwrap();
        let target = RationalSimplex::interval(Rat::zero(), rat(2, 1)).unwrap();
        let ks = candidate_translates(&cell, &target, &z);
        let ks: Vec<i64> = ks.iter().map(|k| i64::try_from(&k[0]).unwrap()).collect();
        assert_eq!(ks, vec![-1, 0, 1]);
    }
}
