use serde_json::Value;

use super::{cheeger_constant_coordinate, q_valence_coordinate, PairingError, PairingTriple};
use crate::field::{FieldSpec, PrimeField, Rationals};

/// A triple whose field is only known at run time, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DynTriple {
    Prime(PairingTriple<PrimeField>),
    Rational(PairingTriple<Rationals>),
}

impl DynTriple {
    /// Reads the `"field"` key and parses the rest accordingly. Unknown keys are ignored.
    pub fn from_json(v: &Value) -> Result<Self, PairingError> {
        let spec: FieldSpec = v
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| PairingError::Json("missing string \"field\"".into()))?
            .parse()?;
        Ok(match spec {
            FieldSpec::Prime(p) => DynTriple::Prime(PairingTriple::from_json(PrimeField::new(p)?, v)?),
            FieldSpec::Rational => DynTriple::Rational(PairingTriple::from_json(Rationals, v)?),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, PairingError> {
        let v: Value = serde_json::from_str(text).map_err(|e| PairingError::Json(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            DynTriple::Prime(t) => t.to_json(),
            DynTriple::Rational(t) => t.to_json(),
        }
    }

    pub fn field_spec(&self) -> FieldSpec {
        match self {
            DynTriple::Prime(t) => FieldSpec::Prime(t.field().modulus()),
            DynTriple::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn dim_v(&self) -> usize {
        match self {
            DynTriple::Prime(t) => t.dim_v(),
            DynTriple::Rational(t) => t.dim_v(),
        }
    }

    /// The finite-field triple, or an error naming the field when it is the rationals.
    pub fn finite(&self) -> Result<&PairingTriple<PrimeField>, PairingError> {
        match self {
            DynTriple::Prime(t) => Ok(t),
            DynTriple::Rational(_) => Err(PairingError::NonEnumerable(FieldSpec::Rational)),
        }
    }

    pub fn augment(&self, pivot: usize) -> Result<DynTriple, PairingError> {
        Ok(match self {
            DynTriple::Prime(t) => DynTriple::Prime(t.augment(pivot)?),
            DynTriple::Rational(t) => DynTriple::Rational(t.augment(pivot)?),
        })
    }

    pub fn is_alternating(&self) -> bool {
        match self {
            DynTriple::Prime(t) => t.is_alternating(),
            DynTriple::Rational(t) => t.is_alternating(),
        }
    }

    pub fn q_valence_coordinate(&self) -> usize {
        match self {
            DynTriple::Prime(t) => q_valence_coordinate(t),
            DynTriple::Rational(t) => q_valence_coordinate(t),
        }
    }

    /// Coordinate-subspace Cheeger report as JSON; works over every field.
    pub fn cheeger_coordinate_json(&self, subset_budget: u64) -> Result<Value, PairingError> {
        Ok(match self {
            DynTriple::Prime(t) => cheeger_constant_coordinate(t, subset_budget)?.to_json(),
            DynTriple::Rational(t) => cheeger_constant_coordinate(t, subset_budget)?.to_json(),
        })
    }
}
