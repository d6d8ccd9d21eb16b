//! Piecewise-linear functions and simplicial measures on a tropical torus.
//!
//! A [`PLFunction`] is a list of affine pieces, each living on a simplex in
//! `ℝⁿ`; the function on `ℝⁿ/Γ` is obtained by letting every piece act on all
//! of its `Γ`-translates. Integration against a [`SimplicialMeasure`] is exact.
//! Simplices that straddle several cells are refined by interval splitting or
//! convex polygon clipping, which covers every simplex of dimension at most
//! two in an ambient space of dimension at most two.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::geometry::{
    self, lattice_box, normalized_volume, reduce_point, translates_between, AffineMap, CoordBox,
    GeometryError, Lattice, RationalSimplex, SimplexFrame, TorusPoint,
};
use crate::linalg;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("point {0:?} is outside the support of the function")]
    OutsideSupport(Vec<Rat>),
    #[error("simplex is not contained in the cell of the affine piece")]
    NotContained,
    #[error("refining a simplex across cells is only supported in dimension <= 2 (got {ambient})")]
    RefinementUnsupported { ambient: usize },
    #[error("cells cover {covered} of a simplex instead of all of it")]
    CoverMismatch { covered: Rat },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = PlError> = std::result::Result<T, E>;

/// `x ↦ gradient·x + constant` on `cell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub cell: RationalSimplex,
    pub gradient: Vec<Rat>,
    pub constant: Rat,
}

impl AffinePiece {
    pub fn new(cell: RationalSimplex, gradient: Vec<Rat>, constant: Rat) -> Result<AffinePiece> {
        if gradient.len() != cell.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: cell.ambient_dim(),
                found: gradient.len(),
            }
            .into());
        }
        Ok(AffinePiece { cell, gradient, constant })
    }

    pub fn constant_on(cell: RationalSimplex, c: Rat) -> AffinePiece {
        let n = cell.ambient_dim();
        AffinePiece { cell, gradient: vec![Rat::zero(); n], constant: c }
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        linalg::dot(&self.gradient, x) + &self.constant
    }

    fn scaled(&self, s: &Rat) -> AffinePiece {
        AffinePiece {
            cell: self.cell.clone(),
            gradient: linalg::vec_scale(&self.gradient, s),
            constant: &self.constant * s,
        }
    }
}

#[derive(Clone, Debug)]
struct PieceIndex {
    bbox: CoordBox,
    frame: Option<SimplexFrame>,
}

/// A `Γ`-periodic piecewise-linear function.
#[derive(Clone, Debug)]
pub struct PLFunction {
    pieces: Vec<AffinePiece>,
    lattice: Lattice,
    index: Vec<PieceIndex>,
}

impl PartialEq for PLFunction {
    fn eq(&self, other: &Self) -> bool {
        self.pieces == other.pieces && self.lattice == other.lattice
    }
}

impl PLFunction {
    pub fn new(pieces: Vec<AffinePiece>, lattice: Lattice) -> Result<PLFunction> {
        let n = lattice.dim();
        if let Some(p) = pieces.iter().find(|p| p.cell.ambient_dim() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: p.cell.ambient_dim() }
                .into());
        }
        let index = pieces
            .iter()
            .map(|p| PieceIndex { bbox: lattice_box(&p.cell, &lattice), frame: SimplexFrame::new(&p.cell) })
            .collect();
        Ok(PLFunction { pieces, lattice, index })
    }

    /// The zero function, carried by one cell covering a fundamental domain.
    pub fn zero(lattice: &Lattice) -> PLFunction {
        PLFunction::constant(lattice, Rat::zero())
    }

    /// A constant on the whole torus, as one piece per simplex of the standard
    /// triangulation of the fundamental parallelotope.
    pub fn constant(lattice: &Lattice, c: Rat) -> PLFunction {
        let pieces = fundamental_simplices(lattice)
            .into_iter()
            .map(|cell| AffinePiece::constant_on(cell, c.clone()))
            .collect();
        PLFunction::new(pieces, lattice.clone()).expect("fundamental cells match the lattice")
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn scaled(&self, s: &Rat) -> PLFunction {
        let pieces = self.pieces.iter().map(|p| p.scaled(s)).collect();
        PLFunction::new(pieces, self.lattice.clone()).expect("same shape")
    }

    fn piece_contains(&self, i: usize, x: &[Rat]) -> bool {
        match &self.index[i].frame {
            Some(frame) => frame.contains(x),
            None => self.pieces[i].cell.contains(x),
        }
    }

    /// First `(piece, translate)` whose cell contains `x + γ`, with the shifted point.
    fn locate(&self, x: &[Rat]) -> Option<(usize, Vec<Rat>)> {
        let c = self.lattice.coords(x);
        let point_box = (c.clone(), c);
        for (i, idx) in self.index.iter().enumerate() {
            for k in translates_between(&point_box, &idx.bbox) {
                let shifted = linalg::vec_add(x, &self.lattice.vector(&k));
                if self.piece_contains(i, &shifted) {
                    return Some((i, shifted));
                }
            }
        }
        None
    }

    /// Value at an arbitrary ambient point, read modulo `Γ`.
    pub fn value_at(&self, x: &[Rat]) -> Result<Rat> {
        let (i, shifted) = self.locate(x).ok_or_else(|| PlError::OutsideSupport(x.to_vec()))?;
        Ok(self.pieces[i].value(&shifted))
    }

    /// `max |f|` over all cell vertices, which bounds `|f|` everywhere.
    pub fn sup_abs(&self) -> Rat {
        self.pieces
            .iter()
            .flat_map(|p| p.cell.vertices().iter().map(move |v| p.value(v).abs()))
            .fold(Rat::zero(), Rat::max)
    }
}

/// The `n!` simplices `0 ≤ c_{σ(1)} ≤ … ≤ c_{σ(n)} ≤ 1` of the fundamental
/// parallelotope, mapped into ambient coordinates.
pub fn fundamental_simplices(lattice: &Lattice) -> Vec<RationalSimplex> {
    let n = lattice.dim();
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    perms
        .into_iter()
        .map(|perm| {
            let mut c = vec![Rat::zero(); n];
            let mut verts = vec![lattice.from_coords(&c)];
            for &axis in &perm {
                c[axis] = Rat::one();
                verts.push(lattice.from_coords(&c));
            }
            RationalSimplex::new(verts).expect("fundamental simplex")
        })
        .collect()
}

pub fn pl_eval(f: &PLFunction, x: &TorusPoint) -> Result<Rat> {
    f.value_at(x.ambient())
}

/// A disagreement between two pieces (or one piece and its translate) at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlViolation {
    pub cell_a: usize,
    pub cell_b: usize,
    /// Lattice coordinates of `γ` with `point ∈ cell_b + γ`.
    pub translate: Vec<BigInt>,
    pub point: Vec<Rat>,
    pub value_a: Rat,
    pub value_b: Rat,
}

/// Checks face agreement and periodicity at every cell vertex.
///
/// Two affine functions agreeing at the vertices of a convex set agree on it,
/// and cells with disjoint interiors meet in sets spanned by their vertices.
pub fn pl_validate(f: &PLFunction) -> Vec<PlViolation> {
    let lattice = &f.lattice;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a, piece_a) in f.pieces.iter().enumerate() {
        for v in piece_a.cell.vertices() {
            let value_a = piece_a.value(v);
            let c = lattice.coords(v);
            let point_box = (c.clone(), c);
            for (b, idx) in f.index.iter().enumerate() {
                for k in translates_between(&idx.bbox, &point_box) {
                    if a == b && k.iter().all(|x| x == &BigInt::from(0)) {
                        continue;
                    }
                    let local = linalg::vec_sub(v, &lattice.vector(&k));
                    if !f.piece_contains(b, &local) {
                        continue;
                    }
                    let value_b = f.pieces[b].value(&local);
                    if value_a == value_b {
                        continue;
                    }
                    let rep = reduce_point(v, lattice).expect("dimension checked");
                    let key = (a.min(b), a.max(b), rep.coords().to_vec());
                    if seen.insert(key) {
                        out.push(PlViolation {
                            cell_a: a,
                            cell_b: b,
                            translate: k,
                            point: v.clone(),
                            value_a: value_a.clone(),
                            value_b,
                        });
                    }
                }
            }
        }
    }
    out
}

/// `vol(Δ) · piece(barycenter Δ)`.
pub fn integrate_affine(piece: &AffinePiece, simplex: &RationalSimplex) -> Result<Rat> {
    if simplex.ambient_dim() != piece.cell.ambient_dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: piece.cell.ambient_dim(),
            found: simplex.ambient_dim(),
        }
        .into());
    }
    if !piece.cell.contains_simplex(simplex) {
        return Err(PlError::NotContained);
    }
    Ok(normalized_volume(simplex) * piece.value(&simplex.barycenter()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureTerm {
    pub coefficient: Rat,
    pub simplex: RationalSimplex,
}

/// `Σ cᵢ δ_{Δᵢ}` where `δ_Δ` is lattice-normalized Lebesgue measure on `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMeasure {
    terms: Vec<MeasureTerm>,
    lattice: Lattice,
}

impl SimplicialMeasure {
    pub fn new(terms: Vec<MeasureTerm>, lattice: Lattice) -> Result<SimplicialMeasure> {
        let n = lattice.dim();
        if let Some(t) = terms.iter().find(|t| t.simplex.ambient_dim() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: t.simplex.ambient_dim() }
                .into());
        }
        Ok(SimplicialMeasure { terms, lattice })
    }

    pub fn zero(lattice: &Lattice) -> SimplicialMeasure {
        SimplicialMeasure { terms: Vec::new(), lattice: lattice.clone() }
    }

    /// `c · δ_Δ`.
    pub fn single(coefficient: Rat, simplex: RationalSimplex, lattice: &Lattice) -> Result<Self> {
        SimplicialMeasure::new(vec![MeasureTerm { coefficient, simplex }], lattice.clone())
    }

    pub fn terms(&self) -> &[MeasureTerm] {
        &self.terms
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &SimplicialMeasure) -> SimplicialMeasure {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SimplicialMeasure { terms, lattice: self.lattice.clone() }
    }

    pub fn scaled(&self, s: &Rat) -> SimplicialMeasure {
        let terms = self
            .terms
            .iter()
            .map(|t| MeasureTerm { coefficient: &t.coefficient * s, simplex: t.simplex.clone() })
            .collect();
        SimplicialMeasure { terms, lattice: self.lattice.clone() }
    }

    /// Moves every simplex to its fundamental-domain representative.
    pub fn reduced(&self) -> SimplicialMeasure {
        let terms = self
            .terms
            .iter()
            .map(|t| MeasureTerm {
                coefficient: t.coefficient.clone(),
                simplex: geometry::reduce_simplex(&t.simplex, &self.lattice).expect("dimension checked"),
            })
            .collect();
        SimplicialMeasure { terms, lattice: self.lattice.clone() }
    }

    /// Reinterprets the measure on another torus of the same dimension.
    pub fn on_lattice(&self, lattice: &Lattice) -> Result<SimplicialMeasure> {
        SimplicialMeasure::new(self.terms.clone(), lattice.clone()).map(|m| m.reduced())
    }
}

pub fn total_mass(measure: &SimplicialMeasure) -> Rat {
    measure.terms.iter().map(|t| &t.coefficient * normalized_volume(&t.simplex)).sum()
}

/// Pushes each term forward along `map`, rescaling the density so mass is kept.
///
/// The result lives on the same lattice when the map is an endomorphism and on
/// the standard lattice of the target space otherwise.
pub fn pushforward_affine(measure: &SimplicialMeasure, map: &AffineMap) -> Result<SimplicialMeasure> {
    let terms = measure
        .terms
        .iter()
        .map(|t| {
            let image = geometry::apply_affine(map, &t.simplex)?;
            let coefficient =
                &t.coefficient * normalized_volume(&t.simplex) / normalized_volume(&image);
            Ok(MeasureTerm { coefficient, simplex: image })
        })
        .collect::<Result<Vec<_>>>()?;
    let lattice = if map.target_dim() == measure.lattice.dim() {
        measure.lattice.clone()
    } else {
        Lattice::standard(map.target_dim())
    };
    Ok(SimplicialMeasure { terms, lattice })
}

/// `∫ f dμ`, exactly.
pub fn integrate_pl(f: &PLFunction, measure: &SimplicialMeasure) -> Result<Rat> {
    let mut acc = Rat::zero();
    for term in &measure.terms {
        if term.coefficient.is_zero() {
            continue;
        }
        acc += &term.coefficient * integrate_over_simplex(f, &term.simplex)?;
    }
    Ok(acc)
}

/// `∫_Δ f dδ_Δ`.
pub fn integrate_over_simplex(f: &PLFunction, simplex: &RationalSimplex) -> Result<Rat> {
    let n = f.lattice.dim();
    if simplex.ambient_dim() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, found: simplex.ambient_dim() }.into());
    }
    let sbox = lattice_box(simplex, &f.lattice);
    // whole simplex inside one translated cell
    for (i, idx) in f.index.iter().enumerate() {
        for k in translates_between(&idx.bbox, &sbox) {
            let g = f.lattice.vector(&k);
            let inside = simplex.vertices().iter().all(|v| f.piece_contains(i, &linalg::vec_sub(v, &g)));
            if inside {
                let bary = linalg::vec_sub(&simplex.barycenter(), &g);
                return Ok(normalized_volume(simplex) * f.pieces[i].value(&bary));
            }
        }
    }
    if simplex.dim() == 0 {
        return Err(PlError::OutsideSupport(simplex.vertices()[0].clone()));
    }
    if n > 2 {
        return Err(PlError::RefinementUnsupported { ambient: n });
    }
    match simplex.dim() {
        1 => integrate_segment(f, simplex, &sbox),
        2 => integrate_triangle(f, simplex, &sbox),
        _ => unreachable!("simplex dimension is bounded by the ambient dimension"),
    }
}

/// Barycentric forms of a full-dimensional cell pulled back to the simplex
/// parameter `t` (`x = v₀ + Σ tᵢ eᵢ`), as `(coefficients in t, constant)`.
fn forms_in_parameter(frame: &SimplexFrame, shift: &[Rat], simplex: &RationalSimplex) -> Vec<(Vec<Rat>, Rat)> {
    let origin = linalg::vec_sub(&simplex.vertices()[0], shift);
    let edges = simplex.edges();
    frame
        .barycentric_forms()
        .into_iter()
        .map(|(a, b)| {
            let coeffs = edges.iter().map(|e| linalg::dot(&a, e)).collect();
            (coeffs, linalg::dot(&a, &origin) + b)
        })
        .collect()
}

fn point_at(simplex: &RationalSimplex, t: &[Rat]) -> Vec<Rat> {
    let mut x = simplex.vertices()[0].clone();
    for (ti, e) in t.iter().zip(simplex.edges()) {
        x = linalg::vec_add(&x, &linalg::vec_scale(&e, ti));
    }
    x
}

fn integrate_segment(f: &PLFunction, simplex: &RationalSimplex, sbox: &CoordBox) -> Result<Rat> {
    let mut cuts: BTreeSet<Rat> = [Rat::zero(), Rat::one()].into_iter().collect();
    for (idx, _) in f.index.iter().zip(&f.pieces) {
        let Some(frame) = &idx.frame else { continue };
        for k in translates_between(&idx.bbox, sbox) {
            let g = f.lattice.vector(&k);
            let (mut lo, mut hi) = (Rat::zero(), Rat::one());
            let mut empty = false;
            for (c, c0) in forms_in_parameter(frame, &g, simplex) {
                let slope = &c[0];
                if slope.is_zero() {
                    empty |= c0.is_negative();
                } else {
                    let root = -&c0 / slope;
                    if slope.is_positive() {
                        lo = lo.max(root);
                    } else {
                        hi = hi.min(root);
                    }
                }
            }
            if !empty && lo <= hi {
                cuts.insert(lo);
                cuts.insert(hi);
            }
        }
    }
    let cuts: Vec<Rat> = cuts.into_iter().collect();
    let length = normalized_volume(simplex);
    let mut acc = Rat::zero();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let pa = point_at(simplex, std::slice::from_ref(a));
        let pb = point_at(simplex, std::slice::from_ref(b));
        let mid = point_at(simplex, &[(a + b) / Rat::from_int(2)]);
        let piece = RationalSimplex::new(vec![pa, pb])?;
        let value = segment_value(f, &piece, &mid)
            .ok_or_else(|| PlError::OutsideSupport(mid.clone()))?;
        acc += (b - a) * &length * value;
    }
    Ok(acc)
}

/// Value at `mid` from the first cell translate containing all of `piece`.
fn segment_value(f: &PLFunction, piece: &RationalSimplex, mid: &[Rat]) -> Option<Rat> {
    let pbox = lattice_box(piece, &f.lattice);
    for (i, idx) in f.index.iter().enumerate() {
        for k in translates_between(&idx.bbox, &pbox) {
            let g = f.lattice.vector(&k);
            if piece.vertices().iter().all(|v| f.piece_contains(i, &linalg::vec_sub(v, &g))) {
                return Some(f.pieces[i].value(&linalg::vec_sub(mid, &g)));
            }
        }
    }
    None
}

fn clip_polygon(poly: Vec<Vec<Rat>>, coeffs: &[Rat], c0: &Rat) -> Vec<Vec<Rat>> {
    let eval = |p: &[Rat]| linalg::dot(coeffs, p) + c0;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let (fc, fnx) = (eval(cur), eval(next));
        let cur_in = !fc.is_negative();
        let next_in = !fnx.is_negative();
        if cur_in {
            out.push(cur.clone());
        }
        if cur_in != next_in && fc != fnx {
            let s = &fc / (&fc - &fnx);
            let diff = linalg::vec_sub(next, cur);
            out.push(linalg::vec_add(cur, &linalg::vec_scale(&diff, &s)));
        }
    }
    out
}

fn twice_signed_area(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

fn integrate_triangle(f: &PLFunction, simplex: &RationalSimplex, sbox: &CoordBox) -> Result<Rat> {
    let vol = normalized_volume(simplex);
    let three = Rat::from_int(3);
    let mut covered = Rat::zero();
    let mut acc = Rat::zero();
    for (i, idx) in f.index.iter().enumerate() {
        let Some(frame) = &idx.frame else { continue };
        for k in translates_between(&idx.bbox, sbox) {
            let g = f.lattice.vector(&k);
            let mut poly = vec![
                vec![Rat::zero(), Rat::zero()],
                vec![Rat::one(), Rat::zero()],
                vec![Rat::zero(), Rat::one()],
            ];
            for (c, c0) in forms_in_parameter(frame, &g, simplex) {
                poly = clip_polygon(poly, &c, &c0);
                if poly.len() < 3 {
                    break;
                }
            }
            if poly.len() < 3 {
                continue;
            }
            for j in 1..poly.len() - 1 {
                // fraction of the parameter triangle, whose doubled area is 1
                let frac = twice_signed_area(&poly[0], &poly[j], &poly[j + 1]).abs();
                if frac.is_zero() {
                    continue;
                }
                let centroid: Vec<Rat> = (0..2)
                    .map(|c| (&poly[0][c] + &poly[j][c] + &poly[j + 1][c]) / &three)
                    .collect();
                let x = linalg::vec_sub(&point_at(simplex, &centroid), &g);
                acc += &frac * &vol * f.pieces[i].value(&x);
                covered += frac;
            }
        }
    }
    if covered != Rat::one() {
        return Err(PlError::CoverMismatch { covered });
    }
    Ok(acc)
}

/// Fraction of the full-dimensional simplex `cell` lying inside `other`, for
/// ambient dimension at most two. `None` in higher dimensions.
pub(crate) fn overlap_fraction(cell: &RationalSimplex, other: &RationalSimplex) -> Option<Rat> {
    let frame = SimplexFrame::new(other)?;
    let zero = vec![Rat::zero(); cell.ambient_dim()];
    match cell.ambient_dim() {
        1 => {
            let (mut lo, mut hi) = (Rat::zero(), Rat::one());
            for (c, c0) in forms_in_parameter(&frame, &zero, cell) {
                if c[0].is_zero() {
                    if c0.is_negative() {
                        return Some(Rat::zero());
                    }
                } else if c[0].is_positive() {
                    lo = lo.max(-&c0 / &c[0]);
                } else {
                    hi = hi.min(-&c0 / &c[0]);
                }
            }
            Some(if lo < hi { hi - lo } else { Rat::zero() })
        }
        2 => {
            let mut poly = vec![
                vec![Rat::zero(), Rat::zero()],
                vec![Rat::one(), Rat::zero()],
                vec![Rat::zero(), Rat::one()],
            ];
            for (c, c0) in forms_in_parameter(&frame, &zero, cell) {
                poly = clip_polygon(poly, &c, &c0);
            }
            if poly.len() < 3 {
                return Some(Rat::zero());
            }
            Some(
                (1..poly.len() - 1)
                    .map(|j| twice_signed_area(&poly[0], &poly[j], &poly[j + 1]).abs())
                    .sum(),
            )
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn circle() -> Lattice {
        Lattice::standard(1)
    }

    fn seg(a: Rat, b: Rat) -> RationalSimplex {
        RationalSimplex::interval(a, b).unwrap()
    }

    /// g(u) = 1/4 − u on [0,1/2], u − 3/4 on [1/2,1].
    fn tate_g() -> PLFunction {
        PLFunction::new(
            vec![
                AffinePiece::new(seg(Rat::zero(), rat(1, 2)), vec![rat(-1, 1)], rat(1, 4)).unwrap(),
                AffinePiece::new(seg(rat(1, 2), Rat::one()), vec![Rat::one()], rat(-3, 4)).unwrap(),
            ],
            circle(),
        )
        .unwrap()
    }

    fn at(x: Rat) -> TorusPoint {
        reduce_point(&[x], &circle()).unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(pl_eval(&PLFunction::zero(&circle()), &at(rat(2, 7))).unwrap(), Rat::zero());
        let g = tate_g();
        assert_eq!(pl_eval(&g, &at(rat(1, 3))).unwrap(), rat(-1, 12));
        assert_eq!(pl_eval(&g, &at(rat(1, 2))).unwrap(), rat(-1, 4));
        assert_eq!(g.pieces()[1].value(&[rat(1, 2)]), rat(-1, 4));
        // 0 is represented by both 0 and 1
        assert_eq!(pl_eval(&g, &at(Rat::zero())).unwrap(), rat(1, 4));
        assert_eq!(g.value_at(&[Rat::from_int(7)]).unwrap(), rat(1, 4));
    }

    #[test]
    fn outside_support() {
        let f = PLFunction::new(
            vec![AffinePiece::constant_on(seg(Rat::zero(), rat(1, 2)), Rat::one())],
            circle(),
        )
        .unwrap();
        assert!(matches!(pl_eval(&f, &at(rat(3, 4))), Err(PlError::OutsideSupport(_))));
    }

    #[test]
    fn validation() {
        assert!(pl_validate(&tate_g()).is_empty());
        assert!(pl_validate(&PLFunction::constant(&circle(), rat(5, 3))).is_empty());
        let bad = PLFunction::new(
            vec![
                AffinePiece::new(seg(Rat::zero(), rat(1, 2)), vec![rat(-1, 1)], rat(1, 4)).unwrap(),
                AffinePiece::new(seg(rat(1, 2), Rat::one()), vec![Rat::one()], rat(-1, 2)).unwrap(),
            ],
            circle(),
        )
        .unwrap();
        let v = pl_validate(&bad);
        let at_half = v.iter().find(|v| v.point == vec![rat(1, 2)]).expect("violation at 1/2");
        let mut vals = [at_half.value_a.clone(), at_half.value_b.clone()];
        vals.sort();
        assert_eq!(vals, [rat(-1, 4), Rat::zero()]);
        // the wrap-around vertex disagrees too: g(1) = 1/2 against g(0) = 1/4
        assert!(v.iter().any(|v| v.point == vec![Rat::one()] || v.point == vec![Rat::zero()]));
    }

    #[test]
    fn validation_in_two_dimensions() {
        let l = Lattice::standard(2);
        assert!(pl_validate(&PLFunction::constant(&l, Rat::one())).is_empty());
        // a linear function is not periodic
        let pieces = fundamental_simplices(&l)
            .into_iter()
            .map(|c| AffinePiece::new(c, vec![Rat::one(), Rat::zero()], Rat::zero()).unwrap())
            .collect();
        let f = PLFunction::new(pieces, l).unwrap();
        assert!(!pl_validate(&f).is_empty());
    }

    #[test]
    fn affine_integrals() {
        let g = tate_g();
        let quarter = seg(Rat::zero(), rat(1, 4));
        assert_eq!(integrate_affine(&g.pieces()[0], &quarter).unwrap(), rat(1, 32));
        assert_eq!(integrate_affine(&g.pieces()[1], &seg(rat(3, 4), Rat::one())).unwrap(), rat(1, 32));
        let c = AffinePiece::constant_on(seg(Rat::zero(), Rat::from_int(3)), rat(2, 3));
        assert_eq!(integrate_affine(&c, &seg(Rat::one(), Rat::from_int(3))).unwrap(), rat(4, 3));
        assert_eq!(integrate_affine(&g.pieces()[0], &seg(Rat::zero(), rat(3, 4))), Err(PlError::NotContained));
    }

    #[test]
    fn pl_integrals() {
        let g = tate_g();
        let l = circle();
        let lebesgue = SimplicialMeasure::single(Rat::one(), seg(Rat::zero(), Rat::one()), &l).unwrap();
        assert_eq!(integrate_pl(&g, &lebesgue).unwrap(), Rat::zero());
        assert_eq!(integrate_pl(&PLFunction::zero(&l), &lebesgue).unwrap(), Rat::zero());
        let q = SimplicialMeasure::single(Rat::one(), seg(Rat::zero(), rat(1, 4)), &l).unwrap();
        assert_eq!(integrate_pl(&g, &q).unwrap(), rat(1, 32));
        // straddles 1/2 and wraps past 1
        let w = SimplicialMeasure::single(Rat::one(), seg(rat(1, 4), rat(5, 4)), &l).unwrap();
        assert_eq!(integrate_pl(&g, &w).unwrap(), Rat::zero());
        // ∫_{1/4}^{3/4} g = -1/32 - 1/32
        let mid = SimplicialMeasure::single(Rat::one(), seg(rat(1, 4), rat(3, 4)), &l).unwrap();
        assert_eq!(integrate_pl(&g, &mid).unwrap(), rat(-1, 16));
    }

    #[test]
    fn dirac_terms_evaluate() {
        let g = tate_g();
        let l = circle();
        let pt = RationalSimplex::new(vec![vec![rat(1, 3)]]).unwrap();
        let m = SimplicialMeasure::single(Rat::from_int(2), pt, &l).unwrap();
        assert_eq!(integrate_pl(&g, &m).unwrap(), rat(-1, 6));
    }

    #[test]
    fn triangle_refinement() {
        let l = Lattice::standard(2);
        // cells[0] is {x <= y}, cells[1] is {y <= x}; f = x on the first, y on the second
        let cells = fundamental_simplices(&l);
        let pieces = vec![
            AffinePiece::new(cells[0].clone(), vec![Rat::one(), Rat::zero()], Rat::zero()).unwrap(),
            AffinePiece::new(cells[1].clone(), vec![Rat::zero(), Rat::one()], Rat::zero()).unwrap(),
        ];
        let f = PLFunction::new(pieces, l.clone()).unwrap();
        let square_half = RationalSimplex::new(vec![
            vec![Rat::zero(), Rat::zero()],
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ])
        .unwrap();
        // the diagonal cuts it into two triangles of area 1/4 whose centroids have
        // (x, y) = (1/6, 1/2) and (1/2, 1/6); both pieces read off 1/6
        assert_eq!(integrate_over_simplex(&f, &square_half).unwrap(), rat(1, 12));
        let shifted = square_half.translate(&[rat(1, 2), rat(-1, 3)]);
        let r = integrate_over_simplex(&f, &shifted);
        assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn refinement_limited_to_low_dimension() {
        let l = Lattice::standard(3);
        let f = PLFunction::constant(&l, Rat::one());
        let big = RationalSimplex::new(vec![
            vec![Rat::zero(), Rat::zero(), Rat::zero()],
            vec![Rat::from_int(2), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), Rat::from_int(2), Rat::zero()],
            vec![Rat::zero(), Rat::zero(), Rat::from_int(2)],
        ])
        .unwrap();
        assert_eq!(integrate_over_simplex(&f, &big), Err(PlError::RefinementUnsupported { ambient: 3 }));
        let small = RationalSimplex::new(vec![
            vec![Rat::zero(), Rat::zero(), Rat::zero()],
            vec![rat(1, 2), Rat::zero(), Rat::zero()],
            vec![rat(1, 2), rat(1, 2), Rat::zero()],
            vec![rat(1, 2), rat(1, 2), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(integrate_over_simplex(&f, &small).unwrap(), rat(1, 48));
    }

    #[test]
    fn masses_and_pushforwards() {
        let l = circle();
        assert_eq!(total_mass(&SimplicialMeasure::zero(&l)), Rat::zero());
        let unit = SimplicialMeasure::single(Rat::one(), seg(Rat::zero(), Rat::one()), &l).unwrap();
        assert_eq!(total_mass(&unit), Rat::one());
        let five = SimplicialMeasure::single(rat(2, 5), seg(Rat::zero(), Rat::from_int(5)), &l).unwrap();
        assert_eq!(total_mass(&five), Rat::from_int(2));

        assert_eq!(pushforward_affine(&unit, &AffineMap::identity(1)).unwrap(), unit);
        let stretched = pushforward_affine(&unit, &AffineMap::scaling(1, Rat::from_int(2))).unwrap();
        assert_eq!(stretched.terms()[0].coefficient, rat(1, 2));
        assert_eq!(stretched.terms()[0].simplex, seg(Rat::zero(), Rat::from_int(2)));

        let embed = AffineMap::new(vec![vec![Rat::from_int(3)], vec![Rat::from_int(4)]], vec![Rat::zero(); 2]).unwrap();
        let line = pushforward_affine(&unit, &embed).unwrap();
        assert_eq!(line.terms()[0].coefficient, Rat::one());
        assert_eq!(line.lattice().dim(), 2);
        assert_eq!(total_mass(&line), Rat::one());
    }
}
