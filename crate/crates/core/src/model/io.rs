use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::json::{matrix_from_json, matrix_to_json, JsonMatrix};
use crate::model::{validate_instance, BlockLabel, BlockSpec, ConvElement, InstanceSpec, ModelError};
use crate::scalar::Real;

pub const INSTANCE_FORMAT: &str = "cqg-instance/1";
pub const ELEMENT_FORMAT: &str = "cqg-element/1";

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    format: String,
    blocks: Vec<BlockDoc>,
}

#[derive(Serialize, Deserialize)]
struct BlockDoc {
    label: String,
    dim: usize,
    dual: String,
    #[serde(rename = "Q")]
    q: JsonMatrix,
}

#[derive(Serialize, Deserialize)]
struct ElementDoc {
    format: String,
    blocks: BTreeMap<String, JsonMatrix>,
}

fn check_format(found: &str, expected: &str) -> Result<(), ModelError> {
    if found == expected {
        Ok(())
    } else {
        Err(ModelError::Parse(format!("expected format {expected:?}, found {found:?}")))
    }
}

/// Parses and validates a `cqg-instance/1` document.
pub fn load_instance<T: Real>(bytes: &[u8]) -> Result<InstanceSpec<T>, ModelError> {
    let spec = parse_instance(bytes)?;
    let report = validate_instance(&spec);
    if !report.passed() {
        return Err(ModelError::Validation(report));
    }
    Ok(spec)
}

/// Parses a `cqg-instance/1` document without validating the blocks, so a
/// report can be produced for invalid instances.
pub fn parse_instance<T: Real>(bytes: &[u8]) -> Result<InstanceSpec<T>, ModelError> {
    let doc: InstanceDoc = serde_json::from_slice(bytes).map_err(|e| ModelError::Parse(e.to_string()))?;
    check_format(&doc.format, INSTANCE_FORMAT)?;
    let blocks = doc
        .blocks
        .into_iter()
        .map(|b| {
            let q = matrix_from_json::<T>(&b.q)
                .map_err(|e| ModelError::Parse(format!("block {:?}: {e}", b.label)))?;
            Ok(BlockSpec::new(b.label, b.dim, q, b.dual))
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    InstanceSpec::from_blocks(blocks)
}

pub fn save_instance<T: Real>(spec: &InstanceSpec<T>) -> String {
    let doc = InstanceDoc {
        format: INSTANCE_FORMAT.to_owned(),
        blocks: spec
            .blocks()
            .map(|b| BlockDoc {
                label: b.label().as_str().to_owned(),
                dim: b.dim(),
                dual: b.dual().as_str().to_owned(),
                q: matrix_to_json(b.q()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance serializes")
}

/// Parses a `cqg-element/1` document. Membership in an instance is checked
/// separately with [`ConvElement::check_membership`].
pub fn load_element<T: Real>(bytes: &[u8]) -> Result<ConvElement<T>, ModelError> {
    let doc: ElementDoc = serde_json::from_slice(bytes).map_err(|e| ModelError::Parse(e.to_string()))?;
    check_format(&doc.format, ELEMENT_FORMAT)?;
    let mut out = ConvElement::zero();
    for (label, m) in doc.blocks {
        let m = matrix_from_json::<T>(&m).map_err(|e| ModelError::Parse(format!("block {label:?}: {e}")))?;
        out.insert(BlockLabel::new(label), m);
    }
    Ok(out)
}

pub fn save_element<T: Real>(f: &ConvElement<T>) -> String {
    let doc = ElementDoc {
        format: ELEMENT_FORMAT.to_owned(),
        blocks: f
            .blocks()
            .map(|(l, m)| (l.as_str().to_owned(), matrix_to_json(m)))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("element serializes")
}
