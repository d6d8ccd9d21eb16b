//! One function per subcommand, each producing a JSON document.

use serde_json::{json, Value};
use tropheight_core::doubling::{
    build_orbit_complex, solve_canonical_integrals, transfer_matrix, verify_doubling_stable, DoublingComplex,
    Provenance, StabilityViolation, TransferSystem,
};
use tropheight_core::evaluator::{EvaluatorConfig, EvaluatorRegistry, WeilEvaluator};
use tropheight_core::geometry::reduce_point;
use tropheight_core::ledger::{assert_rational, induction_step, PlaceRecord};
use tropheight_core::measure::{assemble_measure, gubler_coefficient, mass_check, pushforward_measure, MassReport};
use tropheight_core::metric::{
    cocycle_check, cocycle_check_pl, lambda_exact_periodic, local_integral, CanonicalDatum,
    CocycleDatum, CocycleViolation, MetricError,
};
use tropheight_core::pl::{integrate_pl, pl_validate, total_mass, PlViolation, SimplicialMeasure};
use tropheight_core::Rat;

use crate::error::CliError;
use crate::problem::{PlaceSource, ProblemFile};

pub const DEFAULT_GRID: u32 = 24;
const DECIMAL_DIGITS: usize = 12;

#[derive(Clone, Debug)]
pub struct Settings {
    pub budget: usize,
    pub series_depth: usize,
    pub evaluator: Option<String>,
}

/// A finished document; `failed` marks a completed check that found problems.
pub struct Report {
    pub document: Value,
    pub failed: bool,
}

impl Report {
    fn ok(document: Value) -> Report {
        Report { document, failed: false }
    }
}

fn datum(file: &ProblemFile) -> Result<CanonicalDatum, CliError> {
    CanonicalDatum::new(file.g()?).map_err(|e| match e {
        MetricError::InvalidDatum(v) => CliError::Validation(format!(
            "datum is not periodic: {}",
            v.iter().map(describe_pl).collect::<Vec<_>>().join("; ")
        )),
        other => other.into(),
    })
}

fn describe_pl(v: &PlViolation) -> String {
    format!("cells {} and {} disagree at {:?} ({} vs {})", v.cell_a, v.cell_b, v.point, v.value_a, v.value_b)
}

fn complex(file: &ProblemFile, settings: &Settings) -> Result<DoublingComplex, CliError> {
    let lattice = file.lattice()?;
    match file.complex_spec()? {
        Ok(cells) => Ok(DoublingComplex::user_supplied(lattice, cells)?),
        Err(breakpoints) => Ok(build_orbit_complex(&breakpoints, &lattice, settings.budget)?),
    }
}

fn system(file: &ProblemFile, settings: &Settings) -> Result<TransferSystem, CliError> {
    let c = complex(file, settings)?;
    let violations = verify_doubling_stable(&c);
    if !violations.is_empty() {
        return Err(CliError::Validation(format!(
            "complex is not doubling-stable: {}",
            violations.iter().map(describe_stability).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(transfer_matrix(&c)?)
}

fn describe_stability(v: &StabilityViolation) -> String {
    match v {
        StabilityViolation::Coverage { total, expected } => format!("cells cover {total} of {expected}"),
        StabilityViolation::Overlap { cell_a, cell_b, translate } => {
            format!("cells {cell_a} and {cell_b} overlap (translate {translate:?})")
        }
        StabilityViolation::NotUnion { cell, covered, expected } => {
            format!("double of cell {cell} covers {covered} of {expected}")
        }
    }
}

fn provenance(p: Provenance) -> &'static str {
    match p {
        Provenance::Generated => "generated",
        Provenance::UserSupplied => "user-supplied",
    }
}

fn evaluator(file: &ProblemFile, settings: &Settings) -> Result<Box<dyn WeilEvaluator>, CliError> {
    let name = settings.evaluator.as_deref().or(file.options.evaluator.as_deref()).unwrap_or("exact");
    let config = EvaluatorConfig { budget: settings.budget, series_depth: settings.series_depth };
    Ok(EvaluatorRegistry::with_builtins().create(name, &config)?)
}

/// The skeleton measure given in the file, or else the pushed-forward strata measure.
fn skeleton(file: &ProblemFile) -> Result<SimplicialMeasure, CliError> {
    if let Some(mu) = file.skeleton_measure()? {
        return Ok(mu);
    }
    let bundle = file
        .strata()?
        .ok_or_else(|| CliError::Validation("need skeleton_measure or strata".into()))?;
    Ok(pushforward_measure(&bundle, &assemble_measure(&bundle)?)?)
}

fn measure_json(mu: &SimplicialMeasure) -> Value {
    mu.terms()
        .iter()
        .map(|t| json!({ "coefficient": t.coefficient, "simplex": t.simplex.vertices() }))
        .collect()
}

fn mass_json(r: &MassReport) -> Value {
    json!({ "ok": r.ok, "mass": r.mass, "expected": r.expected, "discrepancy": r.discrepancy })
}

pub fn solve_transfer(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let datum = datum(file)?;
    let sys = system(file, settings)?;
    let g = sys.cell_integrals(datum.g())?;
    let f = solve_canonical_integrals(&sys, datum.g())?;
    Ok(Report::ok(json!({
        "command": "solve-transfer",
        "provenance": provenance(sys.complex().provenance()),
        "cells": sys.complex().cells().iter().map(|c| c.vertices()).collect::<Vec<_>>(),
        "masses": sys.masses(),
        "transfer": sys.matrix(),
        "g": g,
        "f": f,
    })))
}

pub fn integrate_canonical(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let datum = datum(file)?;
    let sys = system(file, settings)?;
    let f = solve_canonical_integrals(&sys, datum.g())?;
    let mu = skeleton(file)?;
    let value = local_integral(&datum, &sys, &mu, &[], settings.budget)?;
    Ok(Report::ok(json!({
        "command": "integrate-canonical",
        "cells": sys.complex().cells().iter().map(|c| c.vertices()).collect::<Vec<_>>(),
        "f": f,
        "measure": measure_json(&mu),
        "mass": total_mass(&mu),
        "integral": value,
    })))
}

pub fn assemble(file: &ProblemFile) -> Result<Report, CliError> {
    let bundle = file.strata()?.ok_or_else(|| CliError::Validation("the problem has no strata".into()))?;
    let source = assemble_measure(&bundle)?;
    let pushed = pushforward_measure(&bundle, &source)?;
    let report = mass_check(&bundle, &pushed);
    let coefficients: Vec<Value> = bundle
        .strata
        .iter()
        .map(|s| {
            let t = if s.nondegenerate { Some(gubler_coefficient(bundle.d, s)?) } else { None };
            Ok(json!({ "stratum": s.name, "nondegenerate": s.nondegenerate, "coefficient": t }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Report {
        failed: !report.ok,
        document: json!({
            "command": "assemble-measure",
            "coefficients": coefficients,
            "source": measure_json(&source),
            "pushforward": measure_json(&pushed),
            "mass_check": mass_json(&report),
        }),
    })
}

fn pipeline_integral(file: &ProblemFile, settings: &Settings) -> Result<(Rat, Rat, Vec<Rat>), CliError> {
    let datum = datum(file)?;
    let sys = system(file, settings)?;
    let mu = skeleton(file)?;
    let corrections = file.corrections()?;
    let skeleton_term = local_integral(&datum, &sys, &mu, &[], settings.budget)?;
    let correction_terms = corrections
        .iter()
        .map(|(term, m)| Ok(term.sign() * integrate_pl(&term.pl, m)?))
        .collect::<Result<Vec<Rat>, CliError>>()?;
    let total = local_integral(&datum, &sys, &mu, &corrections, settings.budget)?;
    Ok((total, skeleton_term, correction_terms))
}

pub fn local(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let (total, skeleton_term, corrections) = pipeline_integral(file, settings)?;
    Ok(Report::ok(json!({
        "command": "local-integral",
        "skeleton_term": skeleton_term,
        "corrections": corrections,
        "value": total,
    })))
}

pub fn height(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let spec = file.ledger()?;
    let mut places = Vec::with_capacity(spec.places.len());
    let mut pipeline = None;
    for place in &spec.places {
        let value = match &place.source {
            PlaceSource::Value(v) => v.clone(),
            PlaceSource::Point { point, coefficient } => {
                let d = datum(file)?;
                let x = reduce_point(point, d.lattice())?;
                let eval = evaluator(file, settings)?.evaluate(&d, &x)?;
                if !eval.is_exact() {
                    return Err(CliError::Validation(format!(
                        "place {:?}: evaluator gave a value with error bound {}; certificates need exact values",
                        place.id, eval.bound
                    )));
                }
                coefficient * eval.value
            }
            PlaceSource::Pipeline => {
                if pipeline.is_none() {
                    pipeline = Some(pipeline_integral(file, settings)?.0);
                }
                pipeline.clone().expect("just computed")
            }
        };
        places.push(PlaceRecord::new(place.id.clone(), value));
    }
    let result = induction_step(&spec.problem(places))?;
    let cert = assert_rational(&result);
    Ok(Report::ok(json!({
        "command": "height",
        "d": result.d,
        "deg_l": result.deg_l,
        "certificate": cert,
    })))
}

pub fn tate_check(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let datum = datum(file)?;
    let tate = EvaluatorRegistry::with_builtins()
        .create("tate", &EvaluatorConfig { budget: settings.budget, series_depth: settings.series_depth })?;
    let lattice = datum.lattice().clone();
    if lattice.dim() != 1 {
        return Err(CliError::Validation("tate-check needs a circle".into()));
    }
    let length = lattice.basis()[0][0].abs();
    let grid = file.options.grid.unwrap_or(DEFAULT_GRID).max(1);
    let mut xs: Vec<Rat> = (0..grid).map(|k| &length * Rat::new(k, grid)).collect();
    xs.extend(file.options.points.iter().cloned());
    let mut rows = Vec::with_capacity(xs.len());
    let mut agree = true;
    for x in xs {
        let p = reduce_point(std::slice::from_ref(&x), &lattice)?;
        let exact = lambda_exact_periodic(&datum, &p, settings.budget)?;
        // the closed form needs the multiplicity, which the evaluator infers
        let oracle = tate.evaluate(&datum, &p)?.value;
        let same = exact == oracle;
        agree &= same;
        rows.push(json!({ "x": x, "exact": exact, "oracle": oracle, "agree": same }));
    }
    Ok(Report { failed: !agree, document: json!({ "command": "tate-check", "agree": agree, "samples": rows }) })
}

fn pl_violation_json(v: &PlViolation) -> Value {
    json!({
        "cell_a": v.cell_a,
        "cell_b": v.cell_b,
        "translate": v.translate.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "point": v.point,
        "value_a": v.value_a,
        "value_b": v.value_b,
    })
}

fn cocycle_json(v: &CocycleViolation) -> Value {
    json!({ "generator": v.generator, "vertex": v.vertex, "defect": v.defect, "expected": v.expected })
}

fn stability_json(v: &StabilityViolation) -> Value {
    match v {
        StabilityViolation::Coverage { total, expected } => {
            json!({ "kind": "coverage", "total": total, "expected": expected })
        }
        StabilityViolation::Overlap { cell_a, cell_b, translate } => json!({
            "kind": "overlap",
            "cell_a": cell_a,
            "cell_b": cell_b,
            "translate": translate.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        }),
        StabilityViolation::NotUnion { cell, covered, expected } => {
            json!({ "kind": "not-union", "cell": cell, "covered": covered, "expected": expected })
        }
    }
}

pub fn validate(file: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let g = file.g()?;
    let pl: Vec<Value> = pl_validate(&g).iter().map(pl_violation_json).collect();
    let mut failed = !pl.is_empty();
    let mut doc = json!({ "command": "validate", "datum": { "violations": pl } });

    let cocycle: Vec<Value> = match file.cocycle()? {
        Some((f, z)) => cocycle_check_pl(&f, &z),
        None => match CanonicalDatum::new(g.clone()) {
            Ok(d) => cocycle_check(&d, &CocycleDatum::trivial(d.lattice())),
            Err(_) => cocycle_check_pl(&g, &CocycleDatum::trivial(g.lattice())),
        },
    }
    .iter()
    .map(cocycle_json)
    .collect();
    failed |= !cocycle.is_empty();
    doc["cocycle"] = json!({ "violations": cocycle });

    if file.complex.is_some() || g.lattice().dim() == 1 {
        let c = complex(file, settings)?;
        let stability: Vec<Value> = verify_doubling_stable(&c).iter().map(stability_json).collect();
        failed |= !stability.is_empty();
        doc["complex"] = json!({ "cells": c.len(), "violations": stability });
    }
    if let Some(bundle) = file.strata()? {
        let report = mass_check(&bundle, &pushforward_measure(&bundle, &assemble_measure(&bundle)?)?);
        failed |= !report.ok;
        doc["mass_check"] = mass_json(&report);
    }
    doc["ok"] = json!(!failed);
    Ok(Report { document: doc, failed })
}

/// `(x, λ(x))` at `kℓ/resolution` for `k < resolution`, exact and in decimal.
pub fn emit_plot_data(
    datum: &CanonicalDatum,
    resolution: u32,
    evaluator: &dyn WeilEvaluator,
) -> Result<Value, CliError> {
    let lattice = datum.lattice();
    if lattice.dim() != 1 {
        return Err(CliError::Validation("plot data is only produced on a circle".into()));
    }
    let length = lattice.basis()[0][0].abs();
    let rows = (0..resolution.max(1))
        .map(|k| {
            let x = &length * Rat::new(k, resolution.max(1));
            let eval = evaluator.evaluate(datum, &reduce_point(std::slice::from_ref(&x), lattice)?)?;
            Ok(json!([
                x,
                x.to_decimal(DECIMAL_DIGITS),
                eval.value,
                eval.value.to_decimal(DECIMAL_DIGITS),
                eval.bound,
            ]))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({
        "columns": ["x", "x_decimal", "lambda", "lambda_decimal", "bound"],
        "rows": rows,
    }))
}

pub fn plot(file: &ProblemFile, settings: &Settings, resolution: Option<u32>) -> Result<Report, CliError> {
    let datum = datum(file)?;
    let resolution = resolution.or(file.options.resolution).unwrap_or(DEFAULT_GRID);
    let table = emit_plot_data(&datum, resolution, evaluator(file, settings)?.as_ref())?;
    Ok(Report::ok(json!({ "command": "plot", "evaluator": evaluator(file, settings)?.name(), "table": table })))
}
