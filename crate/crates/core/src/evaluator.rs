//! Pointwise evaluators for the canonical Weil function, registered by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::doubling::DEFAULT_ORBIT_BUDGET;
use crate::geometry::TorusPoint;
use crate::metric::{
    lambda_exact_periodic, lambda_series, tate_datum, tate_oracle, CanonicalDatum, MetricError,
};
use crate::pl::pl_validate;
use crate::rat::Rat;

/// A value of `λ` together with a certified error bound (zero when exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rat,
    pub bound: Rat,
}

impl Evaluation {
    pub fn exact(value: Rat) -> Evaluation {
        Evaluation { value, bound: Rat::zero() }
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_zero()
    }
}

pub trait WeilEvaluator: Send + Sync {
    fn name(&self) -> &'static str;

    fn evaluate(&self, datum: &CanonicalDatum, x: &TorusPoint) -> Result<Evaluation, MetricError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatorConfig {
    pub budget: usize,
    pub series_depth: usize,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        EvaluatorConfig { budget: DEFAULT_ORBIT_BUDGET, series_depth: 64 }
    }
}

/// Solves the orbit recurrence exactly; rational points only.
pub struct ExactOrbit {
    pub budget: usize,
}

impl WeilEvaluator for ExactOrbit {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn evaluate(&self, datum: &CanonicalDatum, x: &TorusPoint) -> Result<Evaluation, MetricError> {
        lambda_exact_periodic(datum, x, self.budget).map(Evaluation::exact)
    }
}

/// Truncated geometric series with its tail bound.
pub struct TruncatedSeries {
    pub depth: usize,
}

impl WeilEvaluator for TruncatedSeries {
    fn name(&self) -> &'static str {
        "series"
    }

    fn evaluate(&self, datum: &CanonicalDatum, x: &TorusPoint) -> Result<Evaluation, MetricError> {
        let (value, bound) = lambda_series(datum, x, self.depth)?;
        Ok(Evaluation { value, bound })
    }
}

/// Closed form `m·(ℓ/2)·B₂({x/ℓ})`, valid only when the datum is `m` times the
/// Tate datum of its circle.
pub struct TateClosedForm;

impl TateClosedForm {
    fn multiplicity(datum: &CanonicalDatum) -> Result<(Rat, Rat), MetricError> {
        let lattice = datum.lattice();
        if lattice.dim() != 1 {
            return Err(MetricError::NotTateDatum);
        }
        let length = lattice.basis()[0][0].abs();
        // g(0) = m·ℓ/4
        let m = datum.g().value_at(&[Rat::zero()])? * Rat::from_int(4) / &length;
        let reference = tate_datum(&length, &m)?;
        let g = datum.g();
        let probes = g
            .pieces()
            .iter()
            .chain(reference.g().pieces())
            .flat_map(|p| p.cell.vertices().iter().cloned());
        for v in probes {
            if g.value_at(&v)? != reference.g().value_at(&v)? {
                return Err(MetricError::NotTateDatum);
            }
        }
        Ok((length, m))
    }
}

impl WeilEvaluator for TateClosedForm {
    fn name(&self) -> &'static str {
        "tate"
    }

    fn evaluate(&self, datum: &CanonicalDatum, x: &TorusPoint) -> Result<Evaluation, MetricError> {
        debug_assert!(pl_validate(datum.g()).is_empty());
        let (length, m) = Self::multiplicity(datum)?;
        Ok(Evaluation::exact(m * tate_oracle(&length, &x.ambient()[0])))
    }
}

type Factory = Arc<dyn Fn(&EvaluatorConfig) -> Box<dyn WeilEvaluator> + Send + Sync>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown evaluator {name:?} (known: {known})")]
pub struct UnknownEvaluator {
    pub name: String,
    pub known: String,
}

/// Evaluator factories keyed by name.
#[derive(Clone, Default)]
pub struct EvaluatorRegistry {
    factories: BTreeMap<String, Factory>,
}

impl EvaluatorRegistry {
    pub fn empty() -> EvaluatorRegistry {
        EvaluatorRegistry::default()
    }

    /// `exact`, `series` and `tate`.
    pub fn with_builtins() -> EvaluatorRegistry {
        let mut reg = EvaluatorRegistry::empty();
        reg.register("exact", |cfg| Box::new(ExactOrbit { budget: cfg.budget }));
        reg.register("series", |cfg| Box::new(TruncatedSeries { depth: cfg.series_depth }));
        reg.register("tate", |_| Box::new(TateClosedForm));
        reg
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&EvaluatorConfig) -> Box<dyn WeilEvaluator> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn create(&self, name: &str, config: &EvaluatorConfig) -> Result<Box<dyn WeilEvaluator>, UnknownEvaluator> {
        match self.factories.get(name) {
            Some(f) => Ok(f(config)),
            None => Err(UnknownEvaluator { name: name.to_string(), known: self.names().join(", ") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reduce_point, Lattice};
    use crate::pl::PLFunction;
    use crate::rat::rat;

    #[test]
    fn builtins_are_registered() {
        let reg = EvaluatorRegistry::with_builtins();
        assert_eq!(reg.names(), vec!["exact", "series", "tate"]);
        let cfg = EvaluatorConfig::default();
        for name in reg.names() {
            assert_eq!(reg.create(name, &cfg).unwrap().name(), name);
        }
        let err = reg.create("newton", &cfg).err().unwrap();
        assert_eq!(err.name, "newton");
    }

    #[test]
    fn evaluators_agree_on_the_tate_circle() {
        let length = rat(7, 3);
        let datum = tate_datum(&length, &Rat::from_int(2)).unwrap();
        let reg = EvaluatorRegistry::with_builtins();
        let cfg = EvaluatorConfig { budget: 1000, series_depth: 40 };
        let lattice = datum.lattice().clone();
        for k in 0..12 {
            let x = reduce_point(&[rat(k, 5)], &lattice).unwrap();
            let exact = reg.create("exact", &cfg).unwrap().evaluate(&datum, &x).unwrap();
            let tate = reg.create("tate", &cfg).unwrap().evaluate(&datum, &x).unwrap();
            let series = reg.create("series", &cfg).unwrap().evaluate(&datum, &x).unwrap();
            assert_eq!(exact, tate);
            assert!((&series.value - &exact.value).abs() <= series.bound);
            assert!(!series.is_exact());
        }
    }

    #[test]
    fn closed_form_refuses_other_data() {
        let l = Lattice::standard(1);
        let datum = CanonicalDatum::new(PLFunction::constant(&l, Rat::one())).unwrap();
        let x = reduce_point(&[rat(1, 3)], &l).unwrap();
        assert_eq!(TateClosedForm.evaluate(&datum, &x), Err(MetricError::NotTateDatum));
    }

    #[test]
    fn custom_registration() {
        struct Zero;
        impl WeilEvaluator for Zero {
            fn name(&self) -> &'static str {
                "zero"
            }
            fn evaluate(&self, _: &CanonicalDatum, _: &TorusPoint) -> Result<Evaluation, MetricError> {
                Ok(Evaluation::exact(Rat::zero()))
            }
        }
        let mut reg = EvaluatorRegistry::with_builtins();
        reg.register("zero", |_| Box::new(Zero));
        assert!(reg.names().contains(&"zero"));
    }
}
