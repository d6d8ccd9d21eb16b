//! Canonical measures assembled from semistable strata.
//!
//! Each non-degenerate stratum `S` of dimension `e` contributes
//! `t_S · δ_{Δ_S}` with `t_S = d!/(d−e)! · deg_H(S̄) · vol(Λ_S^L)/vol(Λ_S)`.
//! Pushing the sum forward along the strata maps (times the degree of the
//! alteration) gives a rational combination of simplex measures on the torus.

use thiserror::Error;

use crate::geometry::{apply_affine, covolume_ratio, AffineMap, GeometryError, Lattice, RationalSimplex};
use crate::pl::{pushforward_affine, total_mass, MeasureTerm, PlError, SimplicialMeasure};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("stratum {0:?} is degenerate and carries no mass")]
    DegenerateStratum(String),
    #[error("stratum {name:?} has dimension {e} above the cycle dimension {d}")]
    StratumTooLarge { name: String, e: usize, d: usize },
    #[error("stratum {name:?}: {reason}")]
    Shape { name: String, reason: String },
    #[error("stratum {name:?} is flagged non-degenerate={flag} but its map says otherwise")]
    InconsistentFlag { name: String, flag: bool },
    #[error("measure term {index} does not match the simplex of the corresponding stratum")]
    MeasureMismatch { index: usize },
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = MeasureError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDatum {
    pub name: String,
    /// Dimension of the stratum.
    pub e: usize,
    pub simplex: RationalSimplex,
    /// `deg_H(S̄)`.
    pub degree: i64,
    pub lattice_l: Lattice,
    pub lattice: Lattice,
    /// `val ∘ f̃_S` on the simplex.
    pub map: AffineMap,
    pub nondegenerate: bool,
}

impl StratumDatum {
    fn shape_error(&self, reason: impl Into<String>) -> MeasureError {
        MeasureError::Shape { name: self.name.clone(), reason: reason.into() }
    }

    /// Checks lattice ranks, the map's source dimension and the degeneracy flag.
    pub fn validate(&self) -> Result<()> {
        let k = self.simplex.dim();
        if self.lattice_l.dim() != k || self.lattice.dim() != k {
            return Err(self.shape_error(format!(
                "lattices must have the simplex dimension {k}, got {} and {}",
                self.lattice_l.dim(),
                self.lattice.dim()
            )));
        }
        if self.map.source_dim() != self.simplex.ambient_dim() {
            return Err(self.shape_error(format!(
                "map expects {}-vectors, simplex lives in dimension {}",
                self.map.source_dim(),
                self.simplex.ambient_dim()
            )));
        }
        let injective = apply_affine(&self.map, &self.simplex).is_ok();
        if injective != self.nondegenerate {
            return Err(MeasureError::InconsistentFlag { name: self.name.clone(), flag: self.nondegenerate });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataBundle {
    /// Dimension of the cycle `Z`.
    pub d: usize,
    /// `deg(f)` of the alteration.
    pub mapping_degree: i64,
    pub strata: Vec<StratumDatum>,
    /// `deg_L(Z)`.
    pub expected_mass: i64,
    /// The torus receiving the pushforward.
    pub torus: Lattice,
}

impl StrataBundle {
    pub fn validate(&self) -> Result<()> {
        if self.mapping_degree < 1 {
            return Err(MeasureError::Shape {
                name: "<bundle>".into(),
                reason: format!("mapping degree must be positive, got {}", self.mapping_degree),
            });
        }
        for s in &self.strata {
            if s.e > self.d {
                return Err(MeasureError::StratumTooLarge { name: s.name.clone(), e: s.e, d: self.d });
            }
            if s.map.target_dim() != self.torus.dim() {
                return Err(s.shape_error(format!(
                    "map lands in dimension {}, torus has dimension {}",
                    s.map.target_dim(),
                    self.torus.dim()
                )));
            }
            s.validate()?;
        }
        Ok(())
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = &StratumDatum> {
        self.strata.iter().filter(|s| s.nondegenerate)
    }
}

fn falling_factorial_ratio(d: usize, e: usize) -> Rat {
    // d!/(d−e)!
    ((d - e + 1)..=d).fold(Rat::one(), |acc, k| acc * Rat::from_int(k as i64))
}

/// `t_S = d!/(d−e)! · deg_H(S̄) · vol(Λ_S^L)/vol(Λ_S)`.
pub fn gubler_coefficient(d: usize, stratum: &StratumDatum) -> Result<Rat> {
    if !stratum.nondegenerate {
        return Err(MeasureError::DegenerateStratum(stratum.name.clone()));
    }
    if stratum.e > d {
        return Err(MeasureError::StratumTooLarge { name: stratum.name.clone(), e: stratum.e, d });
    }
    let ratio = covolume_ratio(&stratum.lattice_l, &stratum.lattice)?;
    Ok(falling_factorial_ratio(d, stratum.e) * Rat::from_int(stratum.degree) * ratio)
}

/// `Σ t_S δ_{Δ_S}` over the non-degenerate strata, in stratum order, on the
/// source simplices. Degenerate strata contribute nothing.
pub fn assemble_measure(bundle: &StrataBundle) -> Result<SimplicialMeasure> {
    bundle.validate()?;
    let mut terms = Vec::new();
    let mut ambient = None;
    for s in bundle.nondegenerate() {
        let n = s.simplex.ambient_dim();
        if *ambient.get_or_insert(n) != n {
            return Err(s.shape_error("strata simplices must share one ambient dimension"));
        }
        terms.push(MeasureTerm { coefficient: gubler_coefficient(bundle.d, s)?, simplex: s.simplex.clone() });
    }
    let lattice = Lattice::standard(ambient.unwrap_or_else(|| bundle.torus.dim()));
    Ok(SimplicialMeasure::new(terms, lattice)?)
}

/// `deg(f) · Σ (val∘f_S)_* (t_S δ_{Δ_S})`, reduced onto the torus.
///
/// `measure` must be term-aligned with the non-degenerate strata, as produced
/// by [`assemble_measure`].
pub fn pushforward_measure(bundle: &StrataBundle, measure: &SimplicialMeasure) -> Result<SimplicialMeasure> {
    bundle.validate()?;
    let strata: Vec<&StratumDatum> = bundle.nondegenerate().collect();
    if strata.len() != measure.terms().len() {
        return Err(MeasureError::MeasureMismatch { index: strata.len().min(measure.terms().len()) });
    }
    let degree = Rat::from_int(bundle.mapping_degree);
    let mut terms = Vec::new();
    for (index, (s, term)) in strata.iter().zip(measure.terms()).enumerate() {
        if term.simplex != s.simplex {
            return Err(MeasureError::MeasureMismatch { index });
        }
        let single = SimplicialMeasure::new(vec![term.clone()], measure.lattice().clone())?;
        let image = pushforward_affine(&single, &s.map)?;
        terms.extend(image.terms().iter().map(|t| MeasureTerm {
            coefficient: &t.coefficient * &degree,
            simplex: t.simplex.clone(),
        }));
    }
    Ok(SimplicialMeasure::new(terms, bundle.torus.clone())?.reduced())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassReport {
    pub ok: bool,
    pub mass: Rat,
    pub expected: Rat,
    /// `mass − expected`.
    pub discrepancy: Rat,
}

pub fn mass_check(bundle: &StrataBundle, measure: &SimplicialMeasure) -> MassReport {
    let mass = total_mass(measure);
    let expected = Rat::from_int(bundle.expected_mass);
    let discrepancy = &mass - &expected;
    MassReport { ok: discrepancy.is_zero(), mass, expected, discrepancy }
}

/// The one-stratum bundle of a Tate curve with skeleton `ℝ/ℓℤ` and `deg_L = 2`:
/// `Δ = [0, ℓ]`, `Λ^L = ℤ`, `Λ = ℓℤ`, identity map.
pub fn tate_bundle(length: &Rat) -> Result<StrataBundle> {
    let torus = Lattice::circle(length.clone())?;
    Ok(StrataBundle {
        d: 1,
        mapping_degree: 1,
        strata: vec![StratumDatum {
            name: "special-fibre".into(),
            e: 0,
            simplex: RationalSimplex::interval(Rat::zero(), length.clone())?,
            degree: 2,
            lattice_l: Lattice::standard(1),
            lattice: torus.clone(),
            map: AffineMap::identity(1),
            nondegenerate: true,
        }],
        expected_mass: 2,
        torus,
    })
}
