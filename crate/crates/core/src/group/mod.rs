//! Finite groups: multiplication tables, unitary irreducible representations,
//! the function Hopf algebra and the Fourier bridge to the block model.

mod builtin;
mod fourier;
mod hopf;
mod io;
mod irreps;

use thiserror::Error;

pub use builtin::{builtin_group, BUILTIN_GROUPS};
pub use fourier::{
    fourier, group_convolution, inverse_fourier, left_convolution_matrix, random_function, GroupFunction,
};
pub use hopf::{build_function_hopf, comodule_of_irrep, group_decomposition, instance_from_group};
pub use io::{load_function, load_group, save_function, save_group, GROUP_FORMAT};
pub use irreps::{validate_irreps, Irrep, IrrepSet, IRREP_TOLERANCE};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("unknown built-in group {0:?} (expected one of z2, z3, z6, s3, d4)")]
    UnknownGroup(String),
    #[error("irrep set is incomplete: sum of squared dimensions {sum} != group order {order}")]
    IncompleteIrreps { sum: usize, order: usize },
    #[error("irrep {0:?}: wrong number or shape of matrices")]
    IrrepShape(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("group has order {0}, above the oracle limit of 24")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Largest group order accepted on the oracle path.
pub const MAX_ORDER: usize = 24;

/// A finite group by its multiplication table: `table[a][b]` is the index of `ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates shape, associativity, identity and inverses exhaustively.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = elements.len();
        let bad = |m: String| Err(GroupError::InvalidTable(m));
        if n == 0 {
            return bad("empty group".into());
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return bad(format!("duplicate element {e:?}"));
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad(format!("table must be {n}x{n} with entries below {n}"));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return bad(format!("element {:?} has no inverse", elements[a])),
            }
        }
        Ok(GroupTable {
            elements,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }
}
