//! JSON form of jets and germs.
//!
//! ```json
//! {"dimension": 2, "order": 4,
//!  "coordinates": [[{"exponents": [1, 0], "value": "1/2"}],
//!                  [{"exponents": [0, 1], "re": 0.25, "im": 0}]]}
//! ```
//!
//! A term carries either `value`, an exact string such as `"1/2 + -3*ζ_5^2"`,
//! or `re`/`im` (numbers or rational strings). Exact mode reads `re + im·i`
//! with `i = ζ_4`; floating mode evaluates `value` numerically.

use serde::{Deserialize, Serialize};

use crate::algebra::group::DiagonalGroup;
use crate::algebra::jet::Jet;
use crate::error::{AlgebraError, ParseError};
use crate::scalar::{parse_rational, Cyclotomic, Float, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn to_f64(&self) -> Result<f64, ParseError> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => {
                let r = parse_rational(s)?;
                Ok(Cyclotomic::rational(r).to_complex().re)
            }
        }
    }

    fn to_exact(&self) -> Result<Cyclotomic, ParseError> {
        match self {
            Number::Float(x) if x.is_finite() => Ok(Cyclotomic::rational(parse_rational(&x.to_string())?)),
            Number::Float(x) => Err(ParseError::Scalar(x.to_string())),
            Number::Text(s) => Ok(Cyclotomic::rational(parse_rational(s)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub exponents: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetDocument {
    pub dimension: usize,
    pub order: u32,
    pub coordinates: Vec<Vec<TermDocument>>,
}

/// A germ as read from disk: jet, optional group and the twist `k` in
/// `f∘γ = γ^k∘f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermDocument {
    pub jet: JetDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<DiagonalGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_twist: Option<i64>,
}

/// Scalars that can be written to and read from a [`TermDocument`].
pub trait JsonScalar: Scalar {
    fn encode(&self, exponents: Vec<u32>) -> TermDocument;
    fn decode(term: &TermDocument) -> Result<Self, ParseError>;
}

fn missing(term: &TermDocument) -> ParseError {
    ParseError::Document(format!("term {:?} has neither value nor re/im", term.exponents))
}

impl JsonScalar for Cyclotomic {
    fn encode(&self, exponents: Vec<u32>) -> TermDocument {
        TermDocument {
            exponents,
            value: Some(self.to_string()),
            re: None,
            im: None,
        }
    }

    fn decode(term: &TermDocument) -> Result<Self, ParseError> {
        if let Some(v) = &term.value {
            return v.parse();
        }
        if term.re.is_none() && term.im.is_none() {
            return Err(missing(term));
        }
        let re = term.re.as_ref().map(Number::to_exact).transpose()?.unwrap_or_else(Cyclotomic::zero);
        let im = term.im.as_ref().map(Number::to_exact).transpose()?.unwrap_or_else(Cyclotomic::zero);
        Ok(re.add(&im.mul(&Cyclotomic::root_of_unity(4, 1))))
    }
}

impl JsonScalar for Float {
    fn encode(&self, exponents: Vec<u32>) -> TermDocument {
        TermDocument {
            exponents,
            value: None,
            re: Some(Number::Float(self.0.re)),
            im: Some(Number::Float(self.0.im)),
        }
    }

    fn decode(term: &TermDocument) -> Result<Self, ParseError> {
        if let Some(v) = &term.value {
            return Ok(Float(v.parse::<Cyclotomic>()?.to_complex()));
        }
        if term.re.is_none() && term.im.is_none() {
            return Err(missing(term));
        }
        let re = term.re.as_ref().map(Number::to_f64).transpose()?.unwrap_or(0.0);
        let im = term.im.as_ref().map(Number::to_f64).transpose()?.unwrap_or(0.0);
        Ok(Float::new(re, im))
    }
}

impl JetDocument {
    pub fn to_jet<S: JsonScalar>(&self) -> Result<Jet<S>, AlgebraError> {
        if self.coordinates.len() != self.dimension {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dimension,
                right: self.coordinates.len(),
            });
        }
        let mut terms = Vec::new();
        for (k, coord) in self.coordinates.iter().enumerate() {
            for t in coord {
                terms.push((k, t.exponents.clone(), S::decode(t)?));
            }
        }
        Jet::from_terms(self.dimension, self.order, terms)
    }

    pub fn from_jet<S: JsonScalar>(jet: &Jet<S>) -> Self {
        let mut coordinates = vec![Vec::new(); jet.dim()];
        for (k, n, c) in jet.terms() {
            coordinates[k].push(c.encode(n.exponents().to_vec()));
        }
        JetDocument {
            dimension: jet.dim(),
            order: jet.order(),
            coordinates,
        }
    }
}
