#![allow(clippy::needless_range_loop)] // matrix loops index two sides at once
//! Bit-packed linear algebra over F2.
//!
//! Rows are packed 64 columns per word. Elimination uses deterministic
//! pivoting (lowest column index first, first eligible row first) so that
//! ranks, kernels and chosen representatives are reproducible run to run.

/// A vector over F2 with a fixed length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_in(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// A dense F2 matrix with bit-packed rows.
#[derive(Clone, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vec::zero(cols); rows],
        }
    }

    pub fn from_rows(rows: Vec<F2Vec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.data[i]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r].set(c, v);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// In-place reduction to row echelon form. Returns the pivot columns in
    /// increasing order; reduced rows are reordered so row i has pivot
    /// `pivots[i]` and every pivot column is cleared in the other rows.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            let mut pivot_row = None;
            for r in next_row..self.rows {
                if self.data[r].get(col) {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            self.data.swap(next_row, pr);
            let pivot = self.data[next_row].clone();
            for (r, row) in self.data.iter_mut().enumerate() {
                if r != next_row && row.get(col) {
                    row.xor_in(&pivot);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        self.data.truncate(pivots.len());
        self.rows = pivots.len();
        pivots
    }

    /// Basis of the kernel of the linear map `v -> v * self` (rows index the
    /// domain). Returned vectors are in reduced echelon form over the domain
    /// coordinates, sorted by leading index.
    pub fn kernel_basis(&self) -> Vec<F2Vec> {
        // Augment each row with an identity tag and eliminate.
        let n = self.rows;
        let mut work: Vec<(F2Vec, F2Vec)> = (0..n)
            .map(|i| {
                let mut tag = F2Vec::zero(n);
                tag.set(i, true);
                (self.data[i].clone(), tag)
            })
            .collect();
        let mut next = 0;
        for col in 0..self.cols {
            let mut pivot = None;
            for r in next..n {
                if work[r].0.get(col) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot else { continue };
            work.swap(next, pr);
            let (prow, ptag) = (work[next].0.clone(), work[next].1.clone());
            for (r, (row, tag)) in work.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_in(&prow);
                    tag.xor_in(&ptag);
                }
            }
            next += 1;
            if next == n {
                break;
            }
        }
        let mut kernel: Vec<F2Vec> = work
            .into_iter()
            .filter(|(row, _)| row.is_zero())
            .map(|(_, tag)| tag)
            .collect();
        // Canonicalize: reduce the kernel tags themselves.
        let mut m = F2Matrix::from_rows(kernel.clone(), n);
        m.row_reduce();
        kernel = m.data;
        kernel.sort_by_key(|v| v.leading().unwrap_or(usize::MAX));
        kernel
    }

    /// Solve `x * self = target` for x over the row space. Deterministic:
    /// returns the solution produced by forward elimination.
    pub fn solve(&self, target: &F2Vec) -> Option<F2Vec> {
        debug_assert_eq!(target.len(), self.cols);
        let n = self.rows;
        let mut rows: Vec<(F2Vec, F2Vec)> = (0..n)
            .map(|i| {
                let mut tag = F2Vec::zero(n);
                tag.set(i, true);
                (self.data[i].clone(), tag)
            })
            .collect();
        let mut b = target.clone();
        let mut bcoef = F2Vec::zero(n);
        let mut next = 0;
        for col in 0..self.cols {
            let mut pivot = None;
            for r in next..n {
                if rows[r].0.get(col) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot else { continue };
            rows.swap(next, pr);
            let (prow, ptag) = (rows[next].0.clone(), rows[next].1.clone());
            for (r, (row, tag)) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_in(&prow);
                    tag.xor_in(&ptag);
                }
            }
            if b.get(col) {
                b.xor_in(&prow);
                bcoef.xor_in(&ptag);
            }
            next += 1;
            if next == n {
                break;
            }
        }
        if b.is_zero() {
            Some(bcoef)
        } else {
            None
        }
    }
}

/// Row-reduced image data used to reduce vectors modulo a subspace.
pub struct Subspace {
    cols: usize,
    rows: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(mut m: F2Matrix) -> Self {
        let pivots = m.row_reduce();
        Subspace {
            cols: m.cols,
            rows: m.data,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        let mut r = v.clone();
        self.reduce(&mut r);
        r.is_zero()
    }

    /// Reduce `v` modulo the subspace in place.
    pub fn reduce(&self, v: &mut F2Vec) {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_in(row);
            }
        }
    }
}

/// Symmetric difference of two sorted index vectors.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Incremental sparse column reduction over F2, with the pivot of a column
/// being its lowest index. Suited to the very sparse differential matrices
/// whose dense form is out of reach.
#[derive(Default)]
pub struct ColumnReduction {
    /// pivot index -> (reduced column, tracked combination of pushed ids)
    cols: std::collections::HashMap<u32, (Vec<u32>, Vec<u32>)>,
}

impl ColumnReduction {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce_col(&self, mut col: Vec<u32>, mut combo: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
        while let Some(&pivot) = col.first() {
            let Some((pcol, pcombo)) = self.cols.get(&pivot) else {
                break;
            };
            col = xor_sorted(&col, pcol);
            combo = xor_sorted(&combo, pcombo);
        }
        (col, combo)
    }

    /// Insert a column; returns true when it was dependent on the previous
    /// ones (reduced to zero).
    pub fn push(&mut self, col: Vec<u32>) -> bool {
        self.push_tracked(col, u32::MAX).is_some()
    }

    /// Insert a column tagged with an id; when the column is dependent,
    /// returns the sorted ids of a combination summing to zero (a kernel
    /// vector over the pushed columns, including this one).
    pub fn push_tracked(&mut self, col: Vec<u32>, id: u32) -> Option<Vec<u32>> {
        let combo = if id == u32::MAX { Vec::new() } else { vec![id] };
        let (col, combo) = self.reduce_col(col, combo);
        match col.first() {
            None => Some(combo),
            Some(&pivot) => {
                self.cols.insert(pivot, (col, combo));
                None
            }
        }
    }

    /// Number of independent columns inserted so far.
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Does the target lie in the span of the inserted columns?
    pub fn reduces_to_zero(&self, target: Vec<u32>) -> bool {
        self.reduce_col(target, Vec::new()).0.is_empty()
    }

    /// Express the target over the tracked column ids, if it lies in the
    /// span.
    pub fn express(&self, target: Vec<u32>) -> Option<Vec<u32>> {
        let (col, combo) = self.reduce_col(target, Vec::new());
        if col.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    /// Rank of a sparse column family.
    pub fn rank(columns: Vec<Vec<u32>>) -> usize {
        let mut red = ColumnReduction::new();
        for c in columns {
            red.push(c);
        }
        red.dim()
    }
}
