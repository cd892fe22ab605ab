use serde::{Deserialize, Serialize};

use crate::json::{complex_from_json, complex_to_json, matrix_from_json, matrix_to_json, vector_from_json, vector_to_json};
use crate::json::{JsonComplex, JsonMatrix};
use crate::oracle::{HopfPresentation, OracleError, Tensor3};
use crate::scalar::Real;

pub const HOPF_FORMAT: &str = "cqg-hopf/1";

type Triplet = (usize, usize, usize, JsonComplex);

#[derive(Serialize, Deserialize)]
struct HopfDoc {
    format: String,
    basis: Vec<String>,
    unit: Vec<JsonComplex>,
    m: Vec<Triplet>,
    delta: Vec<Triplet>,
    epsilon: Vec<JsonComplex>,
    antipode: JsonMatrix,
    star: JsonMatrix,
}

fn tensor_from<T: Real>(n: usize, name: &str, entries: &[Triplet]) -> Result<Tensor3<T>, OracleError> {
    let parsed = entries
        .iter()
        .map(|&(i, j, k, v)| complex_from_json::<T>(&v).map(|z| (i, j, k, z)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| OracleError::Parse(format!("{name}: {e}")))?;
    Tensor3::from_triplets(n, parsed).ok_or_else(|| OracleError::Parse(format!("{name}: index out of range")))
}

/// Parses a `cqg-hopf/1` document. Axioms are checked separately by
/// [`crate::oracle::validate_hopf`].
pub fn load_hopf<T: Real>(bytes: &[u8]) -> Result<HopfPresentation<T>, OracleError> {
    let doc: HopfDoc = serde_json::from_slice(bytes).map_err(|e| OracleError::Parse(e.to_string()))?;
    if doc.format != HOPF_FORMAT {
        return Err(OracleError::Parse(format!(
            "expected format {HOPF_FORMAT:?}, found {:?}",
            doc.format
        )));
    }
    let n = doc.basis.len();
    fn parse_err(what: &'static str) -> impl Fn(String) -> OracleError {
        move |e| OracleError::Parse(format!("{what}: {e}"))
    }
    let p = HopfPresentation {
        unit: vector_from_json(&doc.unit).map_err(parse_err("unit"))?,
        m: tensor_from(n, "m", &doc.m)?,
        delta: tensor_from(n, "delta", &doc.delta)?,
        epsilon: vector_from_json(&doc.epsilon).map_err(parse_err("epsilon"))?,
        antipode: matrix_from_json(&doc.antipode).map_err(parse_err("antipode"))?,
        star: matrix_from_json(&doc.star).map_err(parse_err("star"))?,
        basis: doc.basis,
    };
    p.check_shapes()?;
    Ok(p)
}

pub fn save_hopf<T: Real>(p: &HopfPresentation<T>) -> String {
    let trip = |t: &Tensor3<T>| -> Vec<Triplet> { t.triplets().map(|(i, j, k, v)| (i, j, k, complex_to_json(v))).collect() };
    let doc = HopfDoc {
        format: HOPF_FORMAT.to_owned(),
        basis: p.basis.clone(),
        unit: vector_to_json(&p.unit),
        m: trip(&p.m),
        delta: trip(&p.delta),
        epsilon: vector_to_json(&p.epsilon),
        antipode: matrix_to_json(&p.antipode),
        star: matrix_to_json(&p.star),
    };
    serde_json::to_string_pretty(&doc).expect("hopf document serializes")
}
