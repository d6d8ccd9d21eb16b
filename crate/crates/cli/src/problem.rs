//! The JSON problem file and its conversion into core types.

use serde::Deserialize;
use tropheight_core::geometry::{AffineMap, Lattice, RationalSimplex};
use tropheight_core::ledger::{HeightProblem, PlaceRecord};
use tropheight_core::measure::{StrataBundle, StratumDatum};
use tropheight_core::metric::{tate_datum, CocycleDatum, CorrectionTerm};
use tropheight_core::pl::{AffinePiece, MeasureTerm, PLFunction, SimplicialMeasure};
use tropheight_core::Rat;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

type Matrix = Vec<Vec<Rat>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    /// Rows are the lattice generators.
    pub torus: Matrix,
    #[serde(default)]
    pub datum: Option<DatumSpec>,
    #[serde(default)]
    pub complex: Option<ComplexSpec>,
    #[serde(default)]
    pub skeleton_measure: Option<Vec<TermSpec>>,
    #[serde(default)]
    pub strata: Option<StrataSpec>,
    #[serde(default)]
    pub corrections: Vec<CorrectionSpec>,
    #[serde(default)]
    pub cocycle: Option<CocycleSpec>,
    #[serde(default)]
    pub ledger: Option<LedgerSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum DatumSpec {
    Pieces(Vec<PieceSpec>),
    Tate { length: Rat, multiplicity: Rat },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub cell: Matrix,
    pub gradient: Vec<Rat>,
    pub constant: Rat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ComplexSpec {
    Cells(Vec<Matrix>),
    Breakpoints(Vec<Rat>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coefficient: Rat,
    pub simplex: Matrix,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrataSpec {
    pub d: usize,
    pub mapping_degree: i64,
    pub expected_mass: i64,
    pub strata: Vec<StratumSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub name: String,
    pub e: usize,
    pub simplex: Matrix,
    pub degree: i64,
    pub lattice_l: Matrix,
    pub lattice: Matrix,
    pub map: MapSpec,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub linear: Matrix,
    pub translation: Vec<Rat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectionSpec {
    pub simplex: Matrix,
    pub pieces: Vec<PieceSpec>,
    #[serde(default)]
    pub negative: bool,
    pub measure: Vec<TermSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub pieces: Vec<PieceSpec>,
    /// One `(gradient, constant)` per generator.
    pub z: Vec<AffineSpec>,
    pub c: Vec<Rat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub gradient: Vec<Rat>,
    pub constant: Rat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerSpec {
    pub d: usize,
    pub deg_l: i64,
    #[serde(default = "Rat::zero")]
    pub lower_term: Rat,
    pub places: Vec<PlaceSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceSpec {
    pub id: String,
    pub source: PlaceSource,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum PlaceSource {
    /// A local integral computed elsewhere.
    Value(Rat),
    /// `coefficient · λ(point)` for the file's datum.
    Point {
        point: Vec<Rat>,
        #[serde(default = "Rat::one")]
        coefficient: Rat,
    },
    /// The file's full local-integral pipeline.
    Pipeline,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Extra sample points for `tate-check`.
    #[serde(default)]
    pub points: Vec<Rat>,
    /// `tate-check` grid size; samples `kℓ/grid` for `k < grid`.
    #[serde(default)]
    pub grid: Option<u32>,
    /// `plot` resolution.
    #[serde(default)]
    pub resolution: Option<u32>,
    #[serde(default)]
    pub evaluator: Option<String>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn simplex(vertices: &Matrix, what: &str) -> Result<RationalSimplex, CliError> {
    RationalSimplex::new(vertices.clone()).map_err(|e| invalid(format!("{what}: {e}")))
}

fn lattice(basis: &Matrix, what: &str) -> Result<Lattice, CliError> {
    Lattice::new(basis.clone()).map_err(|e| invalid(format!("{what}: {e}")))
}

fn pl_function(pieces: &[PieceSpec], lattice: &Lattice, what: &str) -> Result<PLFunction, CliError> {
    let pieces = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            AffinePiece::new(simplex(&p.cell, &format!("{what} piece {i}"))?, p.gradient.clone(), p.constant.clone())
                .map_err(|e| invalid(format!("{what} piece {i}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    PLFunction::new(pieces, lattice.clone()).map_err(|e| invalid(format!("{what}: {e}")))
}

fn measure(terms: &[TermSpec], lattice: &Lattice, what: &str) -> Result<SimplicialMeasure, CliError> {
    let terms = terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok(MeasureTerm { coefficient: t.coefficient.clone(), simplex: simplex(&t.simplex, &format!("{what} term {i}"))? })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    SimplicialMeasure::new(terms, lattice.clone()).map_err(|e| invalid(format!("{what}: {e}")))
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, CliError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        lattice(&self.torus, "torus")
    }

    /// The divisor datum as a PL function, not yet checked for periodicity.
    pub fn g(&self) -> Result<PLFunction, CliError> {
        let lattice = self.lattice()?;
        match self.datum.as_ref().ok_or_else(|| invalid("the problem has no datum"))? {
            DatumSpec::Pieces(pieces) => pl_function(pieces, &lattice, "datum"),
            DatumSpec::Tate { length, multiplicity } => {
                if lattice.dim() != 1 || lattice.basis()[0][0].abs() != length.abs() {
                    return Err(invalid("a tate datum needs the torus [[length]]"));
                }
                Ok(tate_datum(length, multiplicity)?.g().clone())
            }
        }
    }

    /// Cells of the transfer complex, or breakpoints to close under doubling.
    /// Without a complex section the datum's own breakpoints are used.
    pub fn complex_spec(&self) -> Result<Result<Vec<RationalSimplex>, Vec<Rat>>, CliError> {
        match &self.complex {
            Some(ComplexSpec::Cells(cells)) => Ok(Ok(cells
                .iter()
                .enumerate()
                .map(|(i, c)| simplex(c, &format!("complex cell {i}")))
                .collect::<Result<_, _>>()?)),
            Some(ComplexSpec::Breakpoints(b)) => Ok(Err(b.clone())),
            None => {
                let g = self.g()?;
                if g.lattice().dim() != 1 {
                    return Err(invalid("a complex must be given explicitly away from the circle"));
                }
                let mut b: Vec<Rat> =
                    g.pieces().iter().flat_map(|p| p.cell.vertices().iter().map(|v| v[0].clone())).collect();
                b.sort();
                b.dedup();
                Ok(Err(b))
            }
        }
    }

    pub fn skeleton_measure(&self) -> Result<Option<SimplicialMeasure>, CliError> {
        let lattice = self.lattice()?;
        self.skeleton_measure.as_ref().map(|t| measure(t, &lattice, "skeleton_measure")).transpose()
    }

    pub fn strata(&self) -> Result<Option<StrataBundle>, CliError> {
        let Some(spec) = &self.strata else { return Ok(None) };
        let strata = spec
            .strata
            .iter()
            .map(|s| {
                let what = format!("stratum {:?}", s.name);
                Ok(StratumDatum {
                    name: s.name.clone(),
                    e: s.e,
                    simplex: simplex(&s.simplex, &what)?,
                    degree: s.degree,
                    lattice_l: lattice(&s.lattice_l, &what)?,
                    lattice: lattice(&s.lattice, &what)?,
                    map: AffineMap::new(s.map.linear.clone(), s.map.translation.clone())
                        .map_err(|e| invalid(format!("{what}: {e}")))?,
                    nondegenerate: s.nondegenerate,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Some(StrataBundle {
            d: spec.d,
            mapping_degree: spec.mapping_degree,
            strata,
            expected_mass: spec.expected_mass,
            torus: self.lattice()?,
        }))
    }

    /// Corrections live on the stratum simplices, in their own ambient space.
    pub fn corrections(&self) -> Result<Vec<(CorrectionTerm, SimplicialMeasure)>, CliError> {
        self.corrections
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let what = format!("correction {i}");
                let s = simplex(&c.simplex, &what)?;
                let local = Lattice::standard(s.ambient_dim());
                let pl = pl_function(&c.pieces, &local, &what)?;
                let mu = measure(&c.measure, &local, &what)?;
                Ok((CorrectionTerm { simplex: s, pl, negative: c.negative }, mu))
            })
            .collect()
    }

    pub fn cocycle(&self) -> Result<Option<(PLFunction, CocycleDatum)>, CliError> {
        let Some(spec) = &self.cocycle else { return Ok(None) };
        let lattice = self.lattice()?;
        if spec.z.len() != lattice.dim() || spec.c.len() != lattice.dim() {
            return Err(invalid("cocycle needs one z and one c per generator"));
        }
        let f = pl_function(&spec.pieces, &lattice, "cocycle")?;
        let z = spec.z.iter().map(|a| (a.gradient.clone(), a.constant.clone())).collect();
        Ok(Some((f, CocycleDatum { z, c: spec.c.clone() })))
    }

    pub fn ledger(&self) -> Result<&LedgerSpec, CliError> {
        self.ledger.as_ref().ok_or_else(|| invalid("the problem has no ledger"))
    }
}

impl LedgerSpec {
    pub fn problem(&self, places: Vec<PlaceRecord>) -> HeightProblem {
        HeightProblem { d: self.d, deg_l: self.deg_l, lower_term: self.lower_term.clone(), places }
    }
}
