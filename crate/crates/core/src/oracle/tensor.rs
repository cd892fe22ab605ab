use crate::scalar::{Real, C};

/// Sparse 3-index tensor `T[i][j][k]`, stored as one triplet list per first
/// index. Used both for products (`b_i b_j = Σ_k T[i][j][k] b_k`) and for
/// coproducts (`Δ(b_i) = Σ_{j,k} T[i][j][k] b_j ⊗ b_k`).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T: Real> {
    n: usize,
    rows: Vec<Vec<(usize, usize, C<T>)>>,
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    /// Collects triplets, summing duplicates and dropping exact zeros.
    /// Returns `None` if an index is out of range.
    pub fn from_triplets(n: usize, entries: impl IntoIterator<Item = (usize, usize, usize, C<T>)>) -> Option<Self> {
        let mut t = Self::zeros(n);
        for (i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return None;
            }
            t.add(i, j, k, v);
        }
        t.rows.iter_mut().for_each(|r| r.retain(|e| e.2 != C::new(T::zero(), T::zero())));
        Some(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` to entry `(i, j, k)`; panics on out-of-range indices.
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: C<T>) {
        assert!(i < self.n && j < self.n && k < self.n, "tensor index out of range");
        let row = &mut self.rows[i];
        match row.binary_search_by(|e| (e.0, e.1).cmp(&(j, k))) {
            Ok(pos) => row[pos].2 += v,
            Err(pos) => row.insert(pos, (j, k, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> C<T> {
        self.rows[i]
            .binary_search_by(|e| (e.0, e.1).cmp(&(j, k)))
            .map_or(C::new(T::zero(), T::zero()), |pos| self.rows[i][pos].2)
    }

    pub fn row(&self, i: usize) -> &[(usize, usize, C<T>)] {
        &self.rows[i]
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, usize, C<T>)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, k, v)| (i, j, k, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}
