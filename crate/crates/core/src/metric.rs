//! The canonical Weil function `λ = −log‖s‖` restricted to the skeleton.
//!
//! `λ` is pinned down by `4λ(x) − λ(2x) = g(x)` where `g` is the tropicalized
//! PL datum. Pointwise it is evaluated either exactly, by solving the linear
//! recurrence along the (eventually periodic) doubling orbit of a rational
//! point, or approximately by the geometric series `Σ 4^{−(k+1)} g(2ᵏx)`.
//! Integrals against cell measures are always exact and go through the
//! transfer system.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::doubling::{solve_canonical_integrals, DoublingError, TransferSystem};
use crate::geometry::{
    lattice_box, normalized_volume, reduce_point, translates_between, GeometryError, Lattice,
    RationalSimplex, TorusPoint,
};
use crate::linalg;
use crate::pl::{integrate_pl, pl_eval, pl_validate, AffinePiece, PLFunction, PlError, PlViolation, SimplicialMeasure};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("datum is not a periodic PL function ({} violation(s))", .0.len())]
    InvalidDatum(Vec<PlViolation>),
    #[error("orbit exceeded the budget of {budget} points")]
    OrbitBudgetExceeded { budget: usize },
    #[error("measure cannot be expressed over the transfer complex: {0}")]
    RefinementUnsupported(String),
    #[error("datum is not a multiple of the Tate datum on this circle")]
    NotTateDatum,
    #[error(transparent)]
    Doubling(#[from] DoublingError),
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = MetricError> = std::result::Result<T, E>;

/// The lattice `Γ` together with the PL right-hand side `g` of the functional equation.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalDatum {
    g: PLFunction,
}

impl CanonicalDatum {
    pub fn new(g: PLFunction) -> Result<CanonicalDatum> {
        let violations = pl_validate(&g);
        if !violations.is_empty() {
            return Err(MetricError::InvalidDatum(violations));
        }
        Ok(CanonicalDatum { g })
    }

    pub fn lattice(&self) -> &Lattice {
        self.g.lattice()
    }

    pub fn g(&self) -> &PLFunction {
        &self.g
    }

    /// The datum of the tensor power `s^{⊗k}`: `g` scales linearly.
    pub fn scaled(&self, k: &Rat) -> CanonicalDatum {
        CanonicalDatum { g: self.g.scaled(k) }
    }
}

/// Datum of the divisor `m·(O)` on a Tate curve with skeleton `ℝ/ℓℤ`:
/// `g(x) = m(ℓ/4 − x)` on `[0, ℓ/2]` and `m(x − 3ℓ/4)` on `[ℓ/2, ℓ]`.
pub fn tate_datum(length: &Rat, multiplicity: &Rat) -> Result<CanonicalDatum> {
    let lattice = Lattice::circle(length.clone())?;
    let half = length / Rat::from_int(2);
    let quarter = length / Rat::from_int(4);
    let m = multiplicity;
    let pieces = vec![
        AffinePiece::new(RationalSimplex::interval(Rat::zero(), half.clone())?, vec![-m], m * &quarter)?,
        AffinePiece::new(
            RationalSimplex::interval(half, length.clone())?,
            vec![m.clone()],
            -(m * (length - &quarter)),
        )?,
    ];
    CanonicalDatum::new(PLFunction::new(pieces, lattice)?)
}

/// `(ℓ/2)·B₂({x/ℓ})` with `B₂(t) = t² − t + 1/6`: the classical local height on a Tate curve.
pub fn tate_oracle(length: &Rat, x: &Rat) -> Rat {
    let t = (x / length).fract();
    let b2 = &t * &t - &t + Rat::new(1, 6);
    length / Rat::from_int(2) * b2
}

/// Partial sum of `Σ 4^{−(k+1)} g(2ᵏx)` over `k < depth`, and the certified tail bound
/// `sup|g|/3 · 4^{−depth}`.
pub fn lambda_series(datum: &CanonicalDatum, x: &TorusPoint, depth: usize) -> Result<(Rat, Rat)> {
    let mut value = Rat::zero();
    let mut weight = Rat::new(1, 4);
    let quarter = Rat::new(1, 4);
    let mut y = x.clone();
    for _ in 0..depth {
        value += &weight * pl_eval(&datum.g, &y)?;
        weight *= &quarter;
        y = y.double();
    }
    let bound = datum.g.sup_abs() / Rat::from_int(3) * Rat::new(1, 4).pow(depth as i32);
    Ok((value, bound))
}

/// The doubling orbit of `x`, split as a pre-period followed by one cycle.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub points: Vec<TorusPoint>,
    /// Index of the first point on the cycle.
    pub cycle_start: usize,
}

impl Orbit {
    pub fn period(&self) -> usize {
        self.points.len() - self.cycle_start
    }
}

pub fn doubling_orbit_of(x: &TorusPoint, budget: usize) -> Result<Orbit> {
    let mut index: HashMap<TorusPoint, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut y = x.clone();
    loop {
        if let Some(&start) = index.get(&y) {
            return Ok(Orbit { points, cycle_start: start });
        }
        if points.len() >= budget {
            return Err(MetricError::OrbitBudgetExceeded { budget });
        }
        index.insert(y.clone(), points.len());
        let next = y.double();
        points.push(y);
        y = next;
    }
}

/// Exact `λ` at every point of the orbit of `x` (same order as the orbit).
pub fn lambda_along_orbit(datum: &CanonicalDatum, x: &TorusPoint, budget: usize) -> Result<(Orbit, Vec<Rat>)> {
    let orbit = doubling_orbit_of(x, budget)?;
    let g: Vec<Rat> = orbit.points.iter().map(|y| pl_eval(&datum.g, y)).collect::<Result<_, _>>()?;
    let s = orbit.cycle_start;
    let p = orbit.period();
    // λ(y_s) = Σ_{k<p} 4^{p−1−k} g(y_{s+k}) / (4^p − 1); Horner over a common denominator
    let mut common = BigInt::one();
    for v in &g[s..] {
        common = num_integer::Integer::lcm(&common, v.denom());
    }
    let mut acc = BigInt::zero();
    for v in &g[s..] {
        acc <<= 2;
        acc += v.numer() * (&common / v.denom());
    }
    let four_p = (BigInt::one() << (2 * p)) - BigInt::one();
    let mut values = vec![Rat::zero(); orbit.points.len()];
    values[s] = Rat::new(acc, four_p * common);
    let quarter = Rat::new(1, 4);
    // the rest of the cycle, then the pre-period, from 4λ(y) = λ(2y) + g(y) read backwards
    for k in (s + 1..orbit.points.len()).rev().chain((0..s).rev()) {
        let next = if k + 1 == orbit.points.len() { s } else { k + 1 };
        values[k] = (&values[next] + &g[k]) * &quarter;
    }
    Ok((orbit, values))
}

/// Exact `λ(x)` for a rational point.
pub fn lambda_exact_periodic(datum: &CanonicalDatum, x: &TorusPoint, budget: usize) -> Result<Rat> {
    if let Some(compiled) = CompiledDatum::new(&datum.g) {
        if let Some(value) = compiled.lambda(x, budget)? {
            return Ok(value);
        }
    }
    let (_, values) = lambda_along_orbit(datum, x, budget)?;
    Ok(values.into_iter().next().expect("orbit contains x"))
}

/// An affine form `Σ aᵢuᵢ + b` in lattice coordinates with denominators cleared
/// by a positive factor.
#[derive(Clone, Debug)]
struct IntForm {
    coeffs: Vec<i128>,
    constant: i128,
}

impl IntForm {
    fn from_rat(coeffs: &[Rat], constant: &Rat) -> Option<(IntForm, BigInt)> {
        let mut l = constant.denom().clone();
        for c in coeffs {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let scale = |r: &Rat| -> Option<i128> { i128::try_from(r.numer() * (&l / r.denom())).ok() };
        let form = IntForm {
            coeffs: coeffs.iter().map(scale).collect::<Option<_>>()?,
            constant: scale(constant)?,
        };
        Some((form, l))
    }

    /// Numerator of the form at `(m + k q)/q`, over the denominator `q`.
    fn eval(&self, m: &[i128], k: &[i128], q: i128) -> Option<i128> {
        let mut acc = self.constant.checked_mul(q)?;
        for ((a, mi), ki) in self.coeffs.iter().zip(m).zip(k) {
            let u = ki.checked_mul(q)?.checked_add(*mi)?;
            acc = acc.checked_add(a.checked_mul(u)?)?;
        }
        Some(acc)
    }
}

#[derive(Clone, Debug)]
struct CompiledPiece {
    forms: Vec<IntForm>,
    value: IntForm,
    translates: Vec<Vec<i128>>,
}

/// The datum in lattice coordinates with integer coefficients, for orbit
/// evaluation at points `m/q`. Values come out as numerators over `scale·q`.
#[derive(Clone, Debug)]
struct CompiledDatum {
    pieces: Vec<CompiledPiece>,
    scale: i128,
}

impl CompiledDatum {
    fn new(g: &PLFunction) -> Option<CompiledDatum> {
        let lattice = g.lattice();
        let n = lattice.dim();
        let mut raw = Vec::new();
        let mut scale = BigInt::one();
        for piece in g.pieces() {
            let coords: Vec<Vec<Rat>> = piece.cell.vertices().iter().map(|v| lattice.coords(v)).collect();
            let cell = RationalSimplex::new(coords).ok()?;
            let frame = crate::geometry::SimplexFrame::new(&cell)?;
            let forms = frame
                .barycentric_forms()
                .iter()
                .map(|(a, b)| IntForm::from_rat(a, b).map(|f| f.0))
                .collect::<Option<Vec<_>>>()?;
            let grad: Vec<Rat> = lattice.basis().iter().map(|b| linalg::dot(b, &piece.gradient)).collect();
            let (value, l) = IntForm::from_rat(&grad, &piece.constant)?;
            scale = num_integer::Integer::lcm(&scale, &l);
            let (lo, hi) = cell.bounding_box();
            let mut translates: Vec<Vec<i128>> = vec![Vec::new()];
            for j in 0..n {
                let a = i128::try_from(lo[j].floor()).ok()? - 1;
                let b = i128::try_from(hi[j].ceil()).ok()?;
                translates = translates
                    .into_iter()
                    .flat_map(|p| {
                        (a..=b).map(move |k| {
                            let mut p = p.clone();
                            p.push(k);
                            p
                        })
                    })
                    .collect();
            }
            raw.push((forms, value, l, translates));
        }
        let scale_i = i128::try_from(&scale).ok()?;
        let pieces = raw
            .into_iter()
            .map(|(forms, value, l, translates)| {
                let factor = i128::try_from(&scale / l).ok()?;
                let value = IntForm {
                    coeffs: value.coeffs.iter().map(|c| c.checked_mul(factor)).collect::<Option<_>>()?,
                    constant: value.constant.checked_mul(factor)?,
                };
                Some(CompiledPiece { forms, value, translates })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(CompiledDatum { pieces, scale: scale_i })
    }

    /// Numerator of `g(m/q)` over `scale·q`.
    fn value(&self, m: &[i128], q: i128) -> Option<i128> {
        for piece in &self.pieces {
            for k in &piece.translates {
                let mut inside = true;
                for f in &piece.forms {
                    if f.eval(m, k, q)? < 0 {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    return piece.value.eval(m, k, q);
                }
            }
        }
        None
    }

    /// `Ok(None)` when the integers would overflow or a point is off the support;
    /// the caller falls back to the generic route, which reports errors precisely.
    fn lambda(&self, x: &TorusPoint, budget: usize) -> Result<Option<Rat>> {
        let mut q_big = BigInt::one();
        for c in x.coords() {
            q_big = num_integer::Integer::lcm(&q_big, c.denom());
        }
        // keep q·(coefficients) comfortably inside i128
        if q_big.bits() > 48 {
            return Ok(None);
        }
        let q = i128::try_from(&q_big).expect("checked width");
        let start: Vec<i128> = x
            .coords()
            .iter()
            .map(|c| i128::try_from(c.numer() * (&q_big / c.denom())).expect("bounded by q"))
            .collect();
        let mut index: HashMap<Vec<i128>, usize> = HashMap::new();
        let mut numerators: Vec<i128> = Vec::new();
        let mut m = start;
        let cycle_start = loop {
            if let Some(&s) = index.get(&m) {
                break s;
            }
            if numerators.len() >= budget {
                return Err(MetricError::OrbitBudgetExceeded { budget });
            }
            let Some(v) = self.value(&m, q) else { return Ok(None) };
            numerators.push(v);
            let next = m.iter().map(|mi| (2 * mi) % q).collect();
            index.insert(std::mem::replace(&mut m, next), numerators.len() - 1);
        };
        let period = numerators.len() - cycle_start;
        let mut acc = BigInt::zero();
        for v in &numerators[cycle_start..] {
            acc <<= 2;
            acc += *v;
        }
        let denom = ((BigInt::one() << (2 * period)) - 1) * BigInt::from(self.scale) * &q_big;
        let mut value = Rat::new(acc, denom);
        let unit = Rat::new(1, self.scale) / Rat::from_int(q_big.clone());
        let quarter = Rat::new(1, 4);
        for v in numerators[..cycle_start].iter().rev() {
            value = (value + Rat::from_int(*v) * &unit) * &quarter;
        }
        Ok(Some(value))
    }
}

/// `max |4λ(x) − λ(2x) − g(x)|` over the samples.
pub fn check_functional_equation<F>(datum: &CanonicalDatum, mut lambda: F, samples: &[TorusPoint]) -> Result<Rat>
where
    F: FnMut(&TorusPoint) -> Result<Rat>,
{
    let mut worst = Rat::zero();
    for x in samples {
        let residual = Rat::from_int(4) * lambda(x)? - lambda(&x.double())? - pl_eval(&datum.g, x)?;
        worst = worst.max(residual.abs());
    }
    Ok(worst)
}

/// A model-metric correction `±(−log‖·‖)` pulled back to a stratum simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionTerm {
    pub simplex: RationalSimplex,
    pub pl: PLFunction,
    pub negative: bool,
}

impl CorrectionTerm {
    pub fn sign(&self) -> Rat {
        if self.negative {
            Rat::from_int(-1)
        } else {
            Rat::one()
        }
    }
}

/// Decomposes `μ` over the cells of the transfer complex: coefficient per cell,
/// plus the Dirac terms, which are handled pointwise.
type Diracs = Vec<(Rat, Vec<Rat>)>;

fn cell_coefficients(system: &TransferSystem, measure: &SimplicialMeasure) -> Result<(Vec<Rat>, Diracs)> {
    let complex = system.complex();
    let lattice = complex.lattice();
    let mut coeffs = vec![Rat::zero(); complex.len()];
    let mut diracs = Vec::new();
    for term in measure.terms() {
        let simplex = &term.simplex;
        if simplex.dim() == 0 {
            diracs.push((term.coefficient.clone(), simplex.vertices()[0].clone()));
            continue;
        }
        if simplex.dim() != lattice.dim() {
            return Err(MetricError::RefinementUnsupported(format!(
                "{}-dimensional simplex in a {}-dimensional skeleton",
                simplex.dim(),
                lattice.dim()
            )));
        }
        let sbox = lattice_box(simplex, lattice);
        let mut covered = Rat::zero();
        for (j, cell) in complex.cells().iter().enumerate() {
            for k in translates_between(&lattice_box(cell, lattice), &sbox) {
                if simplex.contains_simplex(&cell.translate(&lattice.vector(&k))) {
                    coeffs[j] += &term.coefficient;
                    covered += &system.masses()[j];
                }
            }
        }
        if covered != normalized_volume(simplex) {
            return Err(MetricError::RefinementUnsupported(format!(
                "simplex {simplex:?} is not a union of complex cells"
            )));
        }
    }
    Ok((coeffs, diracs))
}

/// `∫ λ dμ + Σ ± ∫ (correction) d(measure)`, exactly.
///
/// Full-dimensional terms of `μ` must be unions of cells of the transfer
/// complex; Dirac terms are evaluated with the exact orbit solver.
pub fn local_integral(
    datum: &CanonicalDatum,
    system: &TransferSystem,
    skeleton: &SimplicialMeasure,
    corrections: &[(CorrectionTerm, SimplicialMeasure)],
    budget: usize,
) -> Result<Rat> {
    let (coeffs, diracs) = cell_coefficients(system, skeleton)?;
    let mut total = Rat::zero();
    if coeffs.iter().any(|c| !c.is_zero()) {
        let f = solve_canonical_integrals(system, &datum.g)?;
        total += linalg::dot(&coeffs, &f);
    }
    for (c, x) in diracs {
        let point = reduce_point(&x, datum.lattice())?;
        total += c * lambda_exact_periodic(datum, &point, budget)?;
    }
    for (term, measure) in corrections {
        total += term.sign() * integrate_pl(&term.pl, measure)?;
    }
    Ok(total)
}

/// Per-generator quasi-periodicity data: crossing generator `t` shifts the PL
/// function by `z_t(x) + c_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleDatum {
    /// `(gradient, constant)` of `z_t`, one entry per lattice basis vector.
    pub z: Vec<(Vec<Rat>, Rat)>,
    pub c: Vec<Rat>,
}

impl CocycleDatum {
    pub fn trivial(lattice: &Lattice) -> CocycleDatum {
        let n = lattice.dim();
        CocycleDatum { z: vec![(vec![Rat::zero(); n], Rat::zero()); n], c: vec![Rat::zero(); n] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleViolation {
    pub generator: usize,
    pub vertex: Vec<Rat>,
    /// `f(v + t) − f(v)` as read off the pieces.
    pub defect: Rat,
    /// `z_t(v) + c_t`.
    pub expected: Rat,
}

/// Compares `f(v + t) − f(v)` against `z_t(v) + c_t` wherever a cell vertex
/// `v` and its translate by a generator both lie in cells of `f`.
pub fn cocycle_check_pl(f: &PLFunction, cocycle: &CocycleDatum) -> Vec<CocycleViolation> {
    let lattice = f.lattice();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let cells_containing = |x: &[Rat]| -> Vec<usize> {
        f.pieces().iter().enumerate().filter(|(_, p)| p.cell.contains(x)).map(|(i, _)| i).collect()
    };
    for (t, generator) in lattice.basis().iter().enumerate() {
        let (zg, zc) = &cocycle.z[t];
        for piece in f.pieces() {
            for v in piece.cell.vertices() {
                // v as the near point, and v as the far point
                for base in [v.clone(), linalg::vec_sub(v, generator)] {
                    let far = linalg::vec_add(&base, generator);
                    for i in cells_containing(&base) {
                        for j in cells_containing(&far) {
                            let defect = f.pieces()[j].value(&far) - f.pieces()[i].value(&base);
                            let expected = linalg::dot(zg, &base) + zc + &cocycle.c[t];
                            if defect != expected && seen.insert((t, base.clone())) {
                                out.push(CocycleViolation { generator: t, vertex: base.clone(), defect, expected });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn cocycle_check(datum: &CanonicalDatum, cocycle: &CocycleDatum) -> Vec<CocycleViolation> {
    cocycle_check_pl(&datum.g, cocycle)
}
