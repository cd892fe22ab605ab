use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::{GroupError, GroupFunction, GroupTable, Irrep, IrrepSet};
use crate::json::{complex_from_json, complex_to_json, matrix_from_json, matrix_to_json, JsonComplex, JsonMatrix};
use crate::model::BlockLabel;
use crate::scalar::{czero, Real};

pub const GROUP_FORMAT: &str = "cqg-group/1";

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    irreps: Option<Vec<IrrepDoc>>,
}

#[derive(Serialize, Deserialize)]
struct IrrepDoc {
    label: String,
    matrices: Vec<JsonMatrix>,
}

/// Parses a `cqg-group/1` document; the irreps section is optional.
pub fn load_group<T: Real>(bytes: &[u8]) -> Result<(GroupTable, Option<IrrepSet<T>>), GroupError> {
    let doc: GroupDoc = serde_json::from_slice(bytes).map_err(|e| GroupError::Parse(e.to_string()))?;
    if let Some(f) = &doc.format {
        if f != GROUP_FORMAT {
            return Err(GroupError::Parse(format!("expected format {GROUP_FORMAT:?}, found {f:?}")));
        }
    }
    let g = GroupTable::new(doc.elements, doc.table)?;
    let irreps = match doc.irreps {
        None => None,
        Some(list) => {
            let irreps = list
                .into_iter()
                .map(|r| {
                    let matrices = r
                        .matrices
                        .iter()
                        .map(matrix_from_json)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| GroupError::Parse(format!("irrep {:?}: {e}", r.label)))?;
                    Ok(Irrep {
                        label: BlockLabel::new(r.label),
                        matrices,
                    })
                })
                .collect::<Result<Vec<_>, GroupError>>()?;
            Some(IrrepSet { irreps })
        }
    };
    Ok((g, irreps))
}

pub fn save_group<T: Real>(g: &GroupTable, irreps: Option<&IrrepSet<T>>) -> String {
    let doc = GroupDoc {
        format: Some(GROUP_FORMAT.to_owned()),
        elements: g.elements().to_vec(),
        table: g.table().to_vec(),
        irreps: irreps.map(|set| {
            set.irreps
                .iter()
                .map(|r| IrrepDoc {
                    label: r.label.to_string(),
                    matrices: r.matrices.iter().map(matrix_to_json).collect(),
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("group serializes")
}

/// Reads a function as a map from element label to `[re, im]`; missing
/// elements are zero.
pub fn load_function<T: Real>(g: &GroupTable, bytes: &[u8]) -> Result<GroupFunction<T>, GroupError> {
    let map: BTreeMap<String, JsonComplex> =
        serde_json::from_slice(bytes).map_err(|e| GroupError::Parse(e.to_string()))?;
    let mut out = vec![czero(); g.order()];
    for (label, v) in map {
        let x = g.index_of(&label).ok_or(GroupError::UnknownLabel(label))?;
        out[x] = complex_from_json(&v).map_err(GroupError::Parse)?;
    }
    Ok(out)
}

pub fn save_function<T: Real>(g: &GroupTable, f: &[crate::scalar::C<T>]) -> String {
    let map: BTreeMap<&str, JsonComplex> = g
        .elements()
        .iter()
        .zip(f)
        .map(|(l, z)| (l.as_str(), complex_to_json(*z)))
        .collect();
    serde_json::to_string_pretty(&map).expect("function serializes")
}
