//! JSON schema for charts, coefficient functions, forms and multivectors.
//!
//! ```json
//! {
//!   "chart": {"axes": [{"kind": "line"}, {"kind": "circle"}]},
//!   "kind": "form",
//!   "degree": 1,
//!   "terms": [{"indices": [1], "coef": [{"pow": [1, 0], "wave": [0, 2], "c": "1/2*tau^1"}]}]
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::chart::{Chart, ChartRef, ChartRepr};
use super::coef::{CoefFn, Mono};
use super::form::{basis_indices, Form, MultiVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonoRepr {
    pub pow: Vec<u32>,
    pub wave: Vec<i64>,
    pub c: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRepr {
    pub indices: Vec<usize>,
    pub coef: Vec<MonoRepr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    Form,
    Multivector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorRepr {
    pub chart: ChartRepr,
    pub kind: TensorKind,
    pub degree: usize,
    pub terms: Vec<TermRepr>,
}

pub fn coef_to_repr(f: &CoefFn) -> Vec<MonoRepr> {
    f.terms()
        .iter()
        .map(|(m, c)| MonoRepr {
            pow: m.pow.clone(),
            wave: m.wave.clone(),
            c: c.clone(),
        })
        .collect()
}

pub fn coef_from_repr(dim: usize, r: &[MonoRepr]) -> Result<CoefFn> {
    for m in r {
        if m.pow.len() != dim || m.wave.len() != dim {
            return Err(Error::Parse(format!(
                "monomial of the wrong dimension (expected {dim})"
            )));
        }
    }
    Ok(CoefFn::from_terms(
        dim,
        r.iter().map(|m| {
            (
                Mono {
                    pow: m.pow.clone(),
                    wave: m.wave.clone(),
                },
                m.c.clone(),
            )
        }),
    ))
}

fn terms_repr<'a>(it: impl Iterator<Item = (&'a u32, &'a CoefFn)>) -> Vec<TermRepr> {
    it.map(|(b, f)| TermRepr {
        indices: basis_indices(*b),
        coef: coef_to_repr(f),
    })
    .collect()
}

fn raw_terms(chart: &ChartRef, terms: &[TermRepr]) -> Result<Vec<(Vec<usize>, CoefFn)>> {
    terms
        .iter()
        .map(|t| Ok((t.indices.clone(), coef_from_repr(chart.dim(), &t.coef)?)))
        .collect()
}

impl Form {
    pub fn to_repr(&self) -> TensorRepr {
        TensorRepr {
            chart: self.chart().to_repr(),
            kind: TensorKind::Form,
            degree: self.degree(),
            terms: terms_repr(self.terms().iter()),
        }
    }

    pub fn from_repr(r: &TensorRepr) -> Result<Form> {
        if r.kind != TensorKind::Form {
            return Err(Error::Parse("expected kind `form`".into()));
        }
        let chart = Chart::from_repr(&r.chart)?;
        Form::from_terms(chart.clone(), r.degree, raw_terms(&chart, &r.terms)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("form serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Form> {
        let r: TensorRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Form::from_repr(&r)
    }
}

impl MultiVector {
    pub fn to_repr(&self) -> TensorRepr {
        TensorRepr {
            chart: self.chart().to_repr(),
            kind: TensorKind::Multivector,
            degree: self.degree(),
            terms: terms_repr(self.terms().iter()),
        }
    }

    pub fn from_repr(r: &TensorRepr) -> Result<MultiVector> {
        if r.kind != TensorKind::Multivector {
            return Err(Error::Parse("expected kind `multivector`".into()));
        }
        let chart = Chart::from_repr(&r.chart)?;
        MultiVector::from_terms(chart.clone(), r.degree, raw_terms(&chart, &r.terms)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("multivector serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MultiVector> {
        let r: TensorRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        MultiVector::from_repr(&r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse::{parse_form, parse_multivector};

    #[test]
    fn round_trip() {
        let c = Chart::from_code("rt").unwrap();
        let a = parse_form(&c, "1/2*tau*x0*E[0,2]*dx1 - i*dx0").unwrap();
        assert_eq!(Form::from_json(&a.to_json()).unwrap(), a);
        let m = parse_multivector(&c, "x0*pd0^pd1").unwrap();
        assert_eq!(MultiVector::from_json(&m.to_json()).unwrap(), m);
        assert!(Form::from_json(&m.to_json()).is_err());
    }

    #[test]
    fn invariants_enforced_on_load() {
        let c = Chart::torus(1);
        let mut r = Form::dx(c.clone(), 0).to_repr();
        r.terms[0].coef[0].pow = vec![1];
        assert!(Form::from_repr(&r).is_err());
    }
}
