//! Supra-matrices for a multislice network: the block-diagonal intra-layer
//! matrix `A` and the node-aligned inter-layer matrix `C`, both symmetric
//! 0/1 matrices of size `(n·L) × (n·L)`. Vertex `(u, layer i)` maps to row
//! `i·n + u`, so layers form contiguous blocks.

use crate::network::MultisliceNetwork;

/// Sparse symmetric matrix with integer entries, stored as sorted
/// `(column, value)` rows. Products of 0/1 matrices carry walk counts, so
/// values are `u64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        let c = c as u32;
        self.rows[r]
            .binary_search_by_key(&c, |&(col, _)| col)
            .map(|idx| self.rows[r][idx].1)
            .unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> &[(u32, u64)] {
        &self.rows[r]
    }

    /// 0/1 matrix from (row, column) positions; duplicates collapse.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); dim];
        for (r, c) in entries {
            rows[r].push((c as u32, 1));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            row.dedup_by_key(|&mut (c, _)| c);
        }
        SparseMatrix { dim, rows }
    }

    /// `self * other`, accumulating each output row in a dense scratch
    /// buffer. Fine for the `nL` sizes this library targets; the layout
    /// stays sparse so pathological blowup is contained to one row.
    pub fn multiply(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let dim = self.dim;
        let mut scratch: Vec<u64> = vec![0; dim];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); dim];
        for (r, out) in rows.iter_mut().enumerate() {
            for &(k, av) in &self.rows[r] {
                for &(c, bv) in &other.rows[k as usize] {
                    if scratch[c as usize] == 0 {
                        touched.push(c);
                    }
                    scratch[c as usize] += av * bv;
                }
            }
            touched.sort_unstable();
            out.reserve(touched.len());
            for &c in &touched {
                out.push((c, scratch[c as usize]));
                scratch[c as usize] = 0;
            }
            touched.clear();
        }
        SparseMatrix { dim, rows }
    }

    pub fn trace(&self) -> u64 {
        (0..self.dim).map(|r| self.get(r, r)).sum()
    }

    /// Trace of `self * other` without materializing the product.
    pub fn trace_with(&self, other: &SparseMatrix) -> u64 {
        let mut total = 0u64;
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                total += v * other.get(c as usize, r);
            }
        }
        total
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().all(|&(c, v)| self.get(c as usize, r) == v))
    }
}

/// The pair (A, C) of supra-matrices for one network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupraMatrices {
    n: usize,
    layers: usize,
    intra: SparseMatrix,
    inter: SparseMatrix,
}

impl SupraMatrices {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    pub fn dim(&self) -> usize {
        self.n * self.layers
    }

    /// Block-diagonal intra-layer matrix A.
    pub fn intra(&self) -> &SparseMatrix {
        &self.intra
    }

    /// Inter-layer matrix C (zero diagonal blocks; node-aligned off-diagonal
    /// blocks are 0/1 diagonal matrices).
    pub fn inter(&self) -> &SparseMatrix {
        &self.inter
    }

    /// Assemble from raw matrices. The type can represent general
    /// inter-layer blocks (cross-node links included), but the census
    /// formulas are only meaningful for node-aligned ones; the trace
    /// engine reports an internal-consistency error when its divisions
    /// stop being exact. Panics if dimensions disagree.
    pub fn from_parts(n: usize, layers: usize, intra: SparseMatrix, inter: SparseMatrix) -> Self {
        assert_eq!(intra.dim(), n * layers, "intra-layer matrix dimension");
        assert_eq!(inter.dim(), n * layers, "inter-layer matrix dimension");
        SupraMatrices {
            n,
            layers,
            intra,
            inter,
        }
    }
}

/// Build the supra-matrices A (intra-layer blocks) and C (node-aligned
/// inter-layer links) of a network. Total on valid networks.
pub fn supra_matrices(net: &MultisliceNetwork) -> SupraMatrices {
    let n = net.node_count();
    let layers = net.layer_count();
    let dim = n * layers;

    let mut a_entries = Vec::new();
    for layer in 0..layers {
        let base = layer * n;
        for &(u, v) in net.edges(layer) {
            let (u, v) = (u as usize, v as usize);
            a_entries.push((base + u, base + v));
            a_entries.push((base + v, base + u));
        }
    }

    let mut c_entries = Vec::new();
    for (i, j, u) in net.couplings() {
        c_entries.push((i * n + u, j * n + u));
        c_entries.push((j * n + u, i * n + u));
    }

    SupraMatrices {
        n,
        layers,
        intra: SparseMatrix::from_entries(dim, a_entries),
        inter: SparseMatrix::from_entries(dim, c_entries),
    }
}
