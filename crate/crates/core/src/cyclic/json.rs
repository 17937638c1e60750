//! Canonical JSON form of a chain:
//! `{"degree": k, "terms": [{"coeff": "-2", "legs": ["1*x*y", "1", ...]}, ...]}`
//! with terms in the chain's canonical order.

use serde::{Deserialize, Serialize};

use crate::freealg::{parse_poly, FreePoly};
use crate::scalar::{fmt_gq, gq_int};

use super::{Chain, CyclicError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub legs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl Chain {
    pub fn to_json(&self) -> ChainJson {
        let terms = self
            .terms()
            .map(|(words, c)| TermJson {
                coeff: fmt_gq(c),
                legs: words
                    .iter()
                    .map(|w| FreePoly::monomial(gq_int(1), w.clone()).to_string())
                    .collect(),
            })
            .collect();
        ChainJson { degree: self.degree(), terms }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("chain serializes")
    }

    pub fn from_json(j: &ChainJson) -> Result<Chain, CyclicError> {
        let mut chain = Chain::zero(j.degree);
        for t in &j.terms {
            if t.legs.len() != j.degree + 1 {
                return Err(CyclicError::Format(format!(
                    "term has {} legs, degree {} needs {}",
                    t.legs.len(),
                    j.degree,
                    j.degree + 1
                )));
            }
            let coeff = parse_poly(&t.coeff)
                .ok()
                .filter(|p| p.terms().all(|(w, _)| w.is_empty()))
                .map(|p| p.coeff(&Default::default()))
                .ok_or_else(|| CyclicError::Format(format!("bad coefficient {:?}", t.coeff)))?;
            let legs = t
                .legs
                .iter()
                .map(|s| parse_poly(s).map_err(|e| CyclicError::Format(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            chain.add_tensor(&coeff, &legs);
        }
        Ok(chain)
    }

    pub fn from_json_str(s: &str) -> Result<Chain, CyclicError> {
        let j: ChainJson = serde_json::from_str(s).map_err(|e| CyclicError::Format(e.to_string()))?;
        Chain::from_json(&j)
    }
}
