//! Global assembly: local integrals summed per place, the induction formula,
//! and the final height normalization.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::TorusPoint;
use crate::metric::{lambda_exact_periodic, CanonicalDatum, MetricError};
use crate::pl::pl_eval;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("deg_L(Z) must be at least 1, got {0}")]
    NonPositiveDegree(i64),
    #[error("place {0:?} appears more than once")]
    DuplicatePlace(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceRecord {
    pub id: String,
    pub local_integral: Rat,
}

impl PlaceRecord {
    pub fn new(id: impl Into<String>, local_integral: Rat) -> PlaceRecord {
        PlaceRecord { id: id.into(), local_integral }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProblem {
    pub d: usize,
    pub deg_l: i64,
    pub lower_term: Rat,
    pub places: Vec<PlaceRecord>,
}

impl HeightProblem {
    pub fn validate(&self) -> Result<(), LedgerError> {
        if self.deg_l < 1 {
            return Err(LedgerError::NonPositiveDegree(self.deg_l));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.places {
            if !seen.insert(p.id.as_str()) {
                return Err(LedgerError::DuplicatePlace(p.id.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightResult {
    pub d: usize,
    pub deg_l: i64,
    pub lower_term: Rat,
    /// Places in id order.
    pub places: Vec<PlaceRecord>,
    pub intersection: Rat,
    pub height: Rat,
}

/// `⟨L̂^{d+1}|Z⟩ = lower + Σ_v local_v` and `ĥ = ⟨L̂^{d+1}|Z⟩ / ((d+1)·deg_L Z)`.
pub fn induction_step(problem: &HeightProblem) -> Result<HeightResult, LedgerError> {
    problem.validate()?;
    let ordered: BTreeMap<&str, &PlaceRecord> = problem.places.iter().map(|p| (p.id.as_str(), p)).collect();
    let places: Vec<PlaceRecord> = ordered.into_values().cloned().collect();
    let intersection = places.iter().fold(problem.lower_term.clone(), |acc, p| acc + &p.local_integral);
    let height = &intersection / Rat::from_int((problem.d as i64 + 1) * problem.deg_l);
    Ok(HeightResult {
        d: problem.d,
        deg_l: problem.deg_l,
        lower_term: problem.lower_term.clone(),
        places,
        intersection,
        height,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerLine {
    pub source: String,
    pub value: Rat,
}

/// The height as a reduced fraction together with every term that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub height: String,
    pub intersection: String,
    pub normalization: String,
    pub ledger: Vec<LedgerLine>,
}

pub fn assert_rational(result: &HeightResult) -> Certificate {
    let mut ledger = vec![LedgerLine { source: "lower-term".into(), value: result.lower_term.clone() }];
    ledger.extend(
        result.places.iter().map(|p| LedgerLine { source: format!("place:{}", p.id), value: p.local_integral.clone() }),
    );
    Certificate {
        height: result.height.to_string(),
        intersection: result.intersection.to_string(),
        normalization: Rat::from_int((result.d as i64 + 1) * result.deg_l).to_string(),
        ledger,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    /// `Σ_{k<n} 4^{−(k+1)} g(2ᵏx)`.
    pub partial: Rat,
    /// `λ(x) − partial`.
    pub gap: Rat,
}

/// Tate's limit on the skeleton: the partial sums approaching `λ(x)`, with the exact gap
/// at each `n = 0..=n_max`.
pub fn tate_limit_probe(
    datum: &CanonicalDatum,
    x: &TorusPoint,
    n_max: usize,
    budget: usize,
) -> Result<Vec<ProbeRow>, MetricError> {
    let limit = lambda_exact_periodic(datum, x, budget)?;
    let quarter = Rat::new(1, 4);
    let mut weight = quarter.clone();
    let mut partial = Rat::zero();
    let mut y = x.clone();
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        rows.push(ProbeRow { n, partial: partial.clone(), gap: &limit - &partial });
        partial += &weight * pl_eval(datum.g(), &y)?;
        weight *= &quarter;
        y = y.double();
    }
    Ok(rows)
}
