use std::f64::consts::PI;

use crate::group::{GroupError, GroupTable, Irrep, IrrepSet};
use crate::linalg::CMatrix;
use crate::model::BlockLabel;
use crate::scalar::{c, Real};

pub const BUILTIN_GROUPS: [&str; 5] = ["z2", "z3", "z6", "s3", "d4"];

/// A built-in group with a complete set of unitary irreps.
pub fn builtin_group<T: Real>(name: &str) -> Result<(GroupTable, IrrepSet<T>), GroupError> {
    match name {
        "z2" => Ok(cyclic(2)),
        "z3" => Ok(cyclic(3)),
        "z6" => Ok(cyclic(6)),
        "s3" => Ok(symmetric3()),
        "d4" => Ok(dihedral4()),
        other => Err(GroupError::UnknownGroup(other.to_owned())),
    }
}

fn from_product(elements: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> GroupTable {
    let n = elements.len();
    let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    GroupTable::new(elements, table).expect("built-in table is a group")
}

fn cyclic<T: Real>(n: usize) -> (GroupTable, IrrepSet<T>) {
    let g = from_product((0..n).map(|x| x.to_string()).collect(), |a, b| (a + b) % n);
    let irreps = (0..n)
        .map(|k| {
            let label = if k == 0 { "0".to_owned() } else { format!("k{k}") };
            let matrices = (0..n)
                .map(|x| {
                    // Exact 1 on the trivial character and at x = 0.
                    let theta = 2.0 * PI * ((k * x) % n) as f64 / n as f64;
                    if (k * x) % n == 0 {
                        CMatrix::scalar(c(1.0, 0.0))
                    } else {
                        CMatrix::scalar(c(theta.cos(), theta.sin()))
                    }
                })
                .collect();
            Irrep {
                label: BlockLabel::new(label),
                matrices,
            }
        })
        .collect();
    (g, IrrepSet { irreps })
}

fn real_matrix<T: Real>(rows: &[&[f64]]) -> CMatrix<T> {
    let r: Vec<Vec<_>> = rows.iter().map(|row| row.iter().map(|&x| c(x, 0.0)).collect()).collect();
    CMatrix::from_rows(&r).expect("rectangular fixture")
}

/// S₃ as permutations of {1,2,3} in one-line notation, `(στ)(i) = σ(τ(i))`.
fn symmetric3<T: Real>() -> (GroupTable, IrrepSet<T>) {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let names = perms
        .iter()
        .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
        .collect();
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
    let g = from_product(names, |a, b| {
        let (s, t) = (perms[a], perms[b]);
        index([s[t[0]], s[t[1]], s[t[2]]])
    });

    let sign = |p: &[usize; 3]| {
        let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    // Orthonormal basis of the sum-zero plane, as rows.
    let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
    let basis = [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];
    let standard = |p: &[usize; 3]| {
        // P e_i = e_{p(i)}; restrict B P Bᵀ.
        let mut m = [[0.0; 2]; 2];
        for (a, row_a) in m.iter_mut().enumerate() {
            for (b, entry) in row_a.iter_mut().enumerate() {
                *entry = (0..3).map(|i| basis[a][p[i]] * basis[b][i]).sum();
            }
        }
        real_matrix::<T>(&[&m[0], &m[1]])
    };
    let irreps = vec![
        Irrep {
            label: BlockLabel::zero(),
            matrices: perms.iter().map(|_| real_matrix(&[&[1.0]])).collect(),
        },
        Irrep {
            label: BlockLabel::new("sign"),
            matrices: perms.iter().map(|p| real_matrix(&[&[sign(p)]])).collect(),
        },
        Irrep {
            label: BlockLabel::new("std"),
            matrices: perms.iter().map(standard).collect(),
        },
    ];
    (g, IrrepSet { irreps })
}

/// D₄ of order 8: `r^a s^f` with `(a,f)(b,g) = (a + (−1)^f b, f + g)`.
fn dihedral4<T: Real>() -> (GroupTable, IrrepSet<T>) {
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..4).map(move |a| (a, f))).collect();
    let name = |(a, f): (usize, usize)| {
        let r = match a {
            0 => String::new(),
            1 => "r".to_owned(),
            _ => format!("r{a}"),
        };
        match (r.is_empty(), f) {
            (true, 0) => "e".to_owned(),
            (_, 0) => r,
            (_, _) => format!("{r}s"),
        }
    };
    let index = |e: (usize, usize)| elems.iter().position(|x| *x == e).expect("closed");
    let g = from_product(elems.iter().map(|&e| name(e)).collect(), |x, y| {
        let ((a, f), (b, h)) = (elems[x], elems[y]);
        let b = if f == 1 { (4 - b) % 4 } else { b };
        index(((a + b) % 4, (f + h) % 2))
    });

    let character = |label: &str, cr: f64, cs: f64| Irrep {
        label: BlockLabel::new(label),
        matrices: elems
            .iter()
            .map(|&(a, f)| real_matrix(&[&[cr.powi(a as i32) * cs.powi(f as i32)]]))
            .collect(),
    };
    let rot = [[1.0, 0.0, 0.0, 1.0], [0.0, -1.0, 1.0, 0.0], [-1.0, 0.0, 0.0, -1.0], [0.0, 1.0, -1.0, 0.0]];
    let two_dim = Irrep {
        label: BlockLabel::new("std"),
        matrices: elems
            .iter()
            .map(|&(a, f)| {
                let r = rot[a];
                let r = real_matrix::<T>(&[&[r[0], r[1]], &[r[2], r[3]]]);
                if f == 1 {
                    &r * &real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]])
                } else {
                    r
                }
            })
            .collect(),
    };
    let irreps = vec![
        character("0", 1.0, 1.0),
        character("r+s-", 1.0, -1.0),
        character("r-s+", -1.0, 1.0),
        character("r-s-", -1.0, -1.0),
        two_dim,
    ];
    (g, IrrepSet { irreps })
}
