//! Doubling-stable subdivisions of the torus and the transfer system.
//!
//! On a complex `Ω` whose cells are carried onto unions of cells by `x ↦ 2x`,
//! the pushforward `[2]_*` acts on the cell measures by a nonnegative rational
//! matrix `T`. The canonical integrals `F_Δ = ∫ λ dδ_Δ` then solve
//! `(4I − T) F = G` with `G_Δ = ∫ g dδ_Δ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::geometry::{
    apply_affine, lattice_box, normalized_volume, translates_between, AffineMap, GeometryError,
    Lattice, RationalSimplex,
};
use crate::linalg::{self, RatMatrix};
use crate::pl::{self, integrate_over_simplex, PLFunction, PlError};
use crate::rat::Rat;

/// Default cap on the number of orbit points explored.
pub const DEFAULT_ORBIT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoublingError {
    #[error("orbit exceeded the budget of {budget} points")]
    OrbitBudgetExceeded { budget: usize },
    #[error("complex is not doubling-stable ({} violation(s))", .0.len())]
    UnstableComplex(Vec<StabilityViolation>),
    #[error("4I - T is singular")]
    SingularSystem,
    #[error("orbit complexes are built on circles; lattice has dimension {0}")]
    NotCircle(usize),
    #[error("cells of a doubling complex must be full-dimensional")]
    LowerDimensionalCell,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Pl(#[from] PlError),
}

pub type Result<T, E = DoublingError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Generated,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityViolation {
    /// Cell volumes do not add up to the covolume of the lattice.
    Coverage { total: Rat, expected: Rat },
    /// Two cells (up to a lattice translate) share interior points.
    Overlap { cell_a: usize, cell_b: usize, translate: Vec<BigInt> },
    /// The doubled cell is not a union of cells.
    NotUnion { cell: usize, covered: Rat, expected: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingComplex {
    lattice: Lattice,
    cells: Vec<RationalSimplex>,
    provenance: Provenance,
}

impl DoublingComplex {
    /// Wraps user-supplied cells. Stability is checked separately by
    /// [`verify_doubling_stable`].
    pub fn user_supplied(lattice: Lattice, cells: Vec<RationalSimplex>) -> Result<DoublingComplex> {
        let n = lattice.dim();
        for c in &cells {
            if c.ambient_dim() != n {
                return Err(GeometryError::DimensionMismatch { expected: n, found: c.ambient_dim() }.into());
            }
            if c.dim() != n {
                return Err(DoublingError::LowerDimensionalCell);
            }
        }
        Ok(DoublingComplex { lattice, cells, provenance: Provenance::UserSupplied })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cells(&self) -> &[RationalSimplex] {
        &self.cells
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Forward orbit closure of `points` (basis coordinates in `[0,1)`) under doubling.
pub fn doubling_orbit(points: impl IntoIterator<Item = Rat>, budget: usize) -> Result<BTreeSet<Rat>> {
    let mut seen = BTreeSet::new();
    let mut work: Vec<Rat> = points.into_iter().map(|p| p.fract()).collect();
    while let Some(u) = work.pop() {
        if !seen.insert(u.clone()) {
            continue;
        }
        if seen.len() > budget {
            return Err(DoublingError::OrbitBudgetExceeded { budget });
        }
        work.push((&u + &u).fract());
    }
    Ok(seen)
}

/// Partition of `ℝ/ℓℤ` cut at the forward doubling orbit of the breakpoints.
///
/// Breakpoints are ambient coordinates; cells are returned in increasing order
/// of their left endpoint, the last one wrapping past `ℓ`.
pub fn build_orbit_complex(breakpoints: &[Rat], lattice: &Lattice, budget: usize) -> Result<DoublingComplex> {
    if lattice.dim() != 1 {
        return Err(DoublingError::NotCircle(lattice.dim()));
    }
    let mut coords: Vec<Rat> = breakpoints.iter().map(|b| lattice.coords(std::slice::from_ref(b))[0].clone()).collect();
    if coords.is_empty() {
        coords.push(Rat::zero());
    }
    let orbit: Vec<Rat> = doubling_orbit(coords, budget)?.into_iter().collect();
    let k = orbit.len();
    let cells = (0..k)
        .map(|i| {
            let a = orbit[i].clone();
            let b = if i + 1 < k { orbit[i + 1].clone() } else { &orbit[0] + &Rat::one() };
            RationalSimplex::new(vec![lattice.from_coords(&[a]), lattice.from_coords(&[b])])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DoublingComplex { lattice: lattice.clone(), cells, provenance: Provenance::Generated })
}

fn contained_translates(container: &RationalSimplex, cell: &RationalSimplex, lattice: &Lattice) -> Vec<Vec<BigInt>> {
    let cbox = lattice_box(container, lattice);
    translates_between(&lattice_box(cell, lattice), &cbox)
        .into_iter()
        .filter(|k| container.contains_simplex(&cell.translate(&lattice.vector(k))))
        .collect()
}

fn doubled(cell: &RationalSimplex) -> RationalSimplex {
    let n = cell.ambient_dim();
    apply_affine(&AffineMap::scaling(n, Rat::from_int(2)), cell).expect("doubling is injective")
}

/// Empty iff the cells tile the torus and every doubled cell is a union of cells.
///
/// Interior overlaps are detected exactly in dimension one and two; in higher
/// dimensions only the volume bookkeeping is checked.
pub fn verify_doubling_stable(complex: &DoublingComplex) -> Vec<StabilityViolation> {
    let lattice = &complex.lattice;
    let n = lattice.dim();
    let mut out = Vec::new();
    let volumes: Vec<Rat> = complex.cells.iter().map(normalized_volume).collect();
    let total: Rat = volumes.iter().sum();
    if total != lattice.covolume() {
        out.push(StabilityViolation::Coverage { total, expected: lattice.covolume() });
    }
    for (a, cell_a) in complex.cells.iter().enumerate() {
        let abox = lattice_box(cell_a, lattice);
        for (b, cell_b) in complex.cells.iter().enumerate().skip(a) {
            for k in translates_between(&lattice_box(cell_b, lattice), &abox) {
                if a == b && k.iter().all(|x| x == &BigInt::from(0)) {
                    continue;
                }
                let moved = cell_b.translate(&lattice.vector(&k));
                if let Some(frac) = pl::overlap_fraction(cell_a, &moved) {
                    if frac.is_positive() {
                        out.push(StabilityViolation::Overlap { cell_a: a, cell_b: b, translate: k });
                    }
                }
            }
        }
    }
    let scale = Rat::from_int(2).pow(n as i32);
    for (i, cell) in complex.cells.iter().enumerate() {
        let big = doubled(cell);
        let covered: Rat = complex
            .cells
            .iter()
            .zip(&volumes)
            .map(|(c, v)| v * Rat::from_int(contained_translates(&big, c, lattice).len() as i64))
            .sum();
        let expected = &volumes[i] * &scale;
        if covered != expected {
            out.push(StabilityViolation::NotUnion { cell: i, covered, expected });
        }
    }
    out
}

/// The pushforward matrix of `[2]` on cell measures, with the cell masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferSystem {
    complex: DoublingComplex,
    matrix: RatMatrix,
    masses: Vec<Rat>,
}

impl TransferSystem {
    pub fn complex(&self) -> &DoublingComplex {
        &self.complex
    }

    /// `T[i][j] = r_{Δᵢ,Δⱼ}`.
    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn masses(&self) -> &[Rat] {
        &self.masses
    }

    /// `m(δ_{Δᵢ}) − Σⱼ r_{ij} m(δ_{Δⱼ})` for every row; all zero for a valid system.
    pub fn mass_defects(&self) -> Vec<Rat> {
        self.matrix
            .iter()
            .zip(&self.masses)
            .map(|(row, m)| m - linalg::dot(row, &self.masses))
            .collect()
    }

    /// `4F − TF`.
    pub fn apply_functional_equation(&self, f: &[Rat]) -> Vec<Rat> {
        let tf = linalg::mat_vec(&self.matrix, f);
        f.iter().zip(tf).map(|(x, t)| Rat::from_int(4) * x - t).collect()
    }

    /// `G_Δ = ∫ g dδ_Δ` for every cell.
    pub fn cell_integrals(&self, g: &PLFunction) -> Result<Vec<Rat>> {
        self.complex
            .cells
            .iter()
            .map(|c| integrate_over_simplex(g, c).map_err(DoublingError::from))
            .collect()
    }
}

pub fn transfer_matrix(complex: &DoublingComplex) -> Result<TransferSystem> {
    let violations = verify_doubling_stable(complex);
    if !violations.is_empty() {
        return Err(DoublingError::UnstableComplex(violations));
    }
    let lattice = &complex.lattice;
    let sheet = Rat::from_int(2).pow(lattice.dim() as i32).recip();
    let matrix = complex
        .cells
        .iter()
        .map(|cell| {
            let big = doubled(cell);
            complex
                .cells
                .iter()
                .map(|c| &sheet * Rat::from_int(contained_translates(&big, c, lattice).len() as i64))
                .collect()
        })
        .collect();
    let masses = complex.cells.iter().map(normalized_volume).collect();
    Ok(TransferSystem { complex: complex.clone(), matrix, masses })
}

/// Exact `F = (4I − T)⁻¹ G`.
pub fn solve_canonical_integrals(system: &TransferSystem, g: &PLFunction) -> Result<Vec<Rat>> {
    let rhs = system.cell_integrals(g)?;
    solve_with_rhs(system, &rhs)
}

pub fn solve_with_rhs(system: &TransferSystem, rhs: &[Rat]) -> Result<Vec<Rat>> {
    let n = system.matrix.len();
    let four = Rat::from_int(4);
    let a: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let t = &system.matrix[i][j];
                    if i == j {
                        &four - t
                    } else {
                        -t
                    }
                })
                .collect()
        })
        .collect();
    linalg::solve(&a, rhs).ok_or(DoublingError::SingularSystem)
}
