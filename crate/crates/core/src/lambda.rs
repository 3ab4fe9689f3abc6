//! The mod-2 Lambda algebra as a differential graded algebra.
//!
//! Generators are written by index: a monomial is a finite sequence
//! (i_1, ..., i_f) of nonnegative integers standing for the product
//! lambda_{i_1} ... lambda_{i_f}. A monomial is admissible when
//! 2*i_j >= i_{j+1} throughout; admissible monomials form a basis. The stem
//! of a monomial is the sum of its indices and the filtration is its length,
//! so lambda_3 lives in bidegree (3, 1) and represents h_2.
//!
//! An inadmissible adjacent pair rewrites by
//!
//! ```text
//! lambda_i lambda_{2i+1+n} = sum_j C(n-1-j, j) lambda_{i+n-j} lambda_{2i+1+j}
//! ```
//!
//! (ordinary binomials mod 2; the n = 0 instance reads
//! lambda_i lambda_{2i+1} = 0), and the differential is generated by
//!
//! ```text
//! d(lambda_n) = sum_{j>=1} C(n-j, j) lambda_{n-j} lambda_{j-1},
//! ```
//!
//! extended as a derivation. Homology of the resulting complex is Ext over
//! the mod-2 Steenrod algebra. Both formulas are validated by machine checks
//! (d o d = 0, confluence of the rewriting, homology ranks against a dense
//! oracle) in the test suite.
//!
//! Monomials are packed into fixed 16-byte words so that rewriting runs on
//! machine integers; bases in the working range reach a few hundred thousand
//! monomials per bidegree.

use crate::arith::binom_mod2;
use crate::f2::{ColumnReduction, F2Matrix, F2Vec, Subspace};
use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// Maximum monomial length (filtration) supported by the packed encoding.
pub const MAX_LEN: usize = 16;
/// Maximum generator index supported by the packed encoding.
pub const MAX_INDEX: u32 = 255;

/// A product of lambda generators, stored as a packed index sequence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    len: u8,
    bytes: [u8; MAX_LEN],
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            len: 0,
            bytes: [0; MAX_LEN],
        }
    }

    /// Build from an index sequence. Panics past the packed limits; every
    /// public computation window keeps filtrations at or below 15 and
    /// indices far below 255.
    pub fn new(indices: &[u32]) -> Self {
        assert!(
            indices.len() <= MAX_LEN,
            "monomial length {} exceeds the packed limit {MAX_LEN}",
            indices.len()
        );
        let mut bytes = [0u8; MAX_LEN];
        for (slot, &i) in bytes.iter_mut().zip(indices) {
            assert!(i <= MAX_INDEX, "generator index {i} exceeds the packed limit");
            *slot = i as u8;
        }
        Monomial {
            len: indices.len() as u8,
            bytes,
        }
    }

    pub fn indices(&self) -> &[u8] {
        &self.bytes[..self.len as usize]
    }

    pub fn stem(&self) -> i64 {
        self.indices().iter().map(|&i| i as i64).sum()
    }

    pub fn filtration(&self) -> i64 {
        self.len as i64
    }

    pub fn is_admissible(&self) -> bool {
        self.indices().windows(2).all(|w| 2 * w[0] as u32 >= w[1] as u32)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({:?})", self.indices())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "l{i}")?;
        }
        Ok(())
    }
}

/// A finite F2-sum of admissible monomials. The empty sum is zero; all
/// nonzero elements produced by this module are homogeneous.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Element {
    terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        debug_assert!(m.is_admissible());
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Element { terms }
    }

    fn from_sorted_parity(mut words: Vec<Monomial>) -> Self {
        words.sort_unstable();
        let mut terms = BTreeSet::new();
        let mut i = 0;
        while i < words.len() {
            let mut j = i + 1;
            while j < words.len() && words[j] == words[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                terms.insert(words[i]);
            }
            i = j;
        }
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bidegree (stem, filtration) of a homogeneous element.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        self.terms
            .iter()
            .next()
            .map(|m| (m.stem(), m.filtration()))
    }

    /// Symmetric-difference addition (characteristic 2).
    pub fn add_term(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&mut self, other: &Element) {
        for t in &other.terms {
            self.add_term(*t);
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

// Precomputed rewriting data. PAIR_TABLE[i * 256 + m] expands the
// inadmissible pair lambda_i lambda_m (m > 2i) into admissible pairs;
// D_TABLE[n] lists the admissible pairs of d(lambda_n).
static PAIR_TABLE: OnceLock<Vec<Vec<(u8, u8)>>> = OnceLock::new();
static D_TABLE: OnceLock<Vec<Vec<(u8, u8)>>> = OnceLock::new();

fn pair_table() -> &'static [Vec<(u8, u8)>] {
    PAIR_TABLE.get_or_init(|| {
        let mut table = vec![Vec::new(); 128 * 256];
        for i in 0..128u32 {
            for m in (2 * i + 1)..256 {
                let n = m - 2 * i - 1;
                let mut out = Vec::new();
                if n > 0 {
                    for j in 0..=(n - 1) / 2 {
                        if binom_mod2((n - 1 - j) as i64, j as u64) {
                            out.push(((i + n - j) as u8, (2 * i + 1 + j) as u8));
                        }
                    }
                }
                table[(i * 256 + m) as usize] = out;
            }
        }
        table
    })
}

fn d_table() -> &'static [Vec<(u8, u8)>] {
    D_TABLE.get_or_init(|| {
        (0..256u32)
            .map(|n| {
                let mut out = Vec::new();
                for j in 1..=n / 2 {
                    if binom_mod2((n - j) as i64, j as u64) {
                        out.push(((n - j) as u8, (j - 1) as u8));
                    }
                }
                out
            })
            .collect()
    })
}

/// Expansion of one inadmissible pair; exposed for the convention
/// fingerprint and tests.
pub fn expand_pair(i: u32, m: u32) -> Vec<(u32, u32)> {
    debug_assert!(m > 2 * i && i < 128 && m < 256);
    pair_table()[(i * 256 + m) as usize]
        .iter()
        .map(|&(a, b)| (a as u32, b as u32))
        .collect()
}

/// Rewrite strategy for [`adem_reduce_with`]. Both strategies must agree
/// (confluence); the leftmost scan is the default.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    LeftmostFirst,
    RightmostFirst,
}

fn find_inadmissible(m: &Monomial, strategy: Strategy) -> Option<usize> {
    let b = m.indices();
    match strategy {
        Strategy::LeftmostFirst => {
            (0..b.len().saturating_sub(1)).find(|&k| (2 * b[k] as u32) < b[k + 1] as u32)
        }
        Strategy::RightmostFirst => (0..b.len().saturating_sub(1))
            .rev()
            .find(|&k| (2 * b[k] as u32) < b[k + 1] as u32),
    }
}

fn reduce_into(word: Monomial, strategy: Strategy, out: &mut Vec<Monomial>, stack: &mut Vec<Monomial>) {
    stack.push(word);
    while let Some(w) = stack.pop() {
        match find_inadmissible(&w, strategy) {
            None => out.push(w),
            Some(k) => {
                let (i, m) = (w.bytes[k] as u32, w.bytes[k + 1] as u32);
                for &(a, b) in &pair_table()[(i * 256 + m) as usize] {
                    let mut nw = w;
                    nw.bytes[k] = a;
                    nw.bytes[k + 1] = b;
                    stack.push(nw);
                }
            }
        }
    }
}

/// Normal form of an arbitrary index sequence as an F2-sum of admissible
/// monomials.
pub fn adem_reduce(word: &[u32]) -> Element {
    adem_reduce_with(word, Strategy::LeftmostFirst)
}

pub fn adem_reduce_with(word: &[u32], strategy: Strategy) -> Element {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    reduce_into(Monomial::new(word), strategy, &mut out, &mut stack);
    Element::from_sorted_parity(out)
}

/// The differential of a single monomial, as an admissible sum.
pub fn differential_monomial(m: &Monomial) -> Element {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    differential_monomial_into(m, &mut out, &mut stack);
    Element::from_sorted_parity(out)
}

fn differential_monomial_into(m: &Monomial, out: &mut Vec<Monomial>, stack: &mut Vec<Monomial>) {
    let len = m.len as usize;
    assert!(len < MAX_LEN, "differential overflows the packed length limit");
    for p in 0..len {
        for &(a, b) in &d_table()[m.bytes[p] as usize] {
            let mut w = Monomial {
                len: m.len + 1,
                bytes: [0; MAX_LEN],
            };
            w.bytes[..p].copy_from_slice(&m.bytes[..p]);
            w.bytes[p] = a;
            w.bytes[p + 1] = b;
            w.bytes[p + 2..=len].copy_from_slice(&m.bytes[p + 1..len]);
            reduce_into(w, Strategy::LeftmostFirst, out, stack);
        }
    }
}

/// Linear extension of the differential: bidegree (s, f) -> (s-1, f+1).
pub fn differential(x: &Element) -> Element {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for t in x.terms() {
        differential_monomial_into(t, &mut out, &mut stack);
    }
    Element::from_sorted_parity(out)
}

/// Concatenation product, bilinear over F2 and reduced to normal form.
pub fn concat_product(x: &Element, y: &Element) -> Element {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for a in x.terms() {
        for b in y.terms() {
            let total = (a.len + b.len) as usize;
            assert!(total <= MAX_LEN, "product overflows the packed length limit");
            let mut w = Monomial {
                len: a.len + b.len,
                bytes: [0; MAX_LEN],
            };
            w.bytes[..a.len as usize].copy_from_slice(a.indices());
            w.bytes[a.len as usize..total].copy_from_slice(b.indices());
            reduce_into(w, Strategy::LeftmostFirst, &mut out, &mut stack);
        }
    }
    Element::from_sorted_parity(out)
}

/// Left multiplication by a single generator, reduced.
pub fn left_multiply(gen: u32, x: &Element) -> Element {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for t in x.terms() {
        let len = t.len as usize;
        assert!(len < MAX_LEN && gen <= MAX_INDEX);
        let mut w = Monomial {
            len: t.len + 1,
            bytes: [0; MAX_LEN],
        };
        w.bytes[0] = gen as u8;
        w.bytes[1..=len].copy_from_slice(t.indices());
        reduce_into(w, Strategy::LeftmostFirst, &mut out, &mut stack);
    }
    Element::from_sorted_parity(out)
}

/// All admissible monomials of the given stem and filtration, in
/// lexicographic order on the index sequences.
pub fn admissible_basis(stem: i64, fil: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if stem < 0 || fil < 0 || fil as usize > MAX_LEN {
        return out;
    }
    if stem > (MAX_INDEX as i64) * fil.max(1) {
        return out;
    }
    let (stem, fil) = (stem as u64, fil as u64);
    if fil == 0 {
        if stem == 0 {
            out.push(Monomial::unit());
        }
        return out;
    }
    fn rec(
        word: &mut Monomial,
        pos: usize,
        remaining: u64,
        len_left: u64,
        bound: Option<u64>,
        out: &mut Vec<Monomial>,
    ) {
        if len_left == 0 {
            if remaining == 0 {
                out.push(*word);
            }
            return;
        }
        let hi = match bound {
            Some(b) => b.min(remaining),
            None => remaining,
        }
        .min(MAX_INDEX as u64);
        for x in 0..=hi {
            let rest = remaining - x;
            // Later letters are bounded by doubling; prune infeasible tails:
            // x(2 + 4 + ... + 2^(len_left - 1)) = x(2^len_left - 2).
            let max_tail = if len_left > 1 {
                x.saturating_mul((1u64 << len_left.min(62)) - 2)
            } else {
                0
            };
            if rest > max_tail {
                continue;
            }
            word.bytes[pos] = x as u8;
            rec(word, pos + 1, rest, len_left - 1, Some(2 * x), out);
        }
        word.bytes[pos] = 0;
    }
    let mut word = Monomial {
        len: fil as u8,
        bytes: [0; MAX_LEN],
    };
    rec(&mut word, 0, stem, fil, None, &mut out);
    out
}

/// Homology data at one bidegree: the dimension and canonical cycle
/// representatives (reduced echelon form over the admissible basis).
pub struct Homology {
    pub dim: usize,
    pub reps: Vec<Element>,
}

/// Computation window for sphere Ext charts.
#[derive(Clone, Copy, Debug)]
pub struct Ceiling {
    pub max_stem: i64,
    pub max_fil: i64,
}

impl Default for Ceiling {
    fn default() -> Self {
        Ceiling {
            max_stem: 30,
            max_fil: 15,
        }
    }
}

/// Sparse differential data at one bidegree: for each source basis monomial
/// the sorted target indices of its differential.
pub fn d_columns(stem: i64, fil: i64) -> Vec<Vec<u32>> {
    let src = admissible_basis(stem, fil);
    let dst = admissible_basis(stem - 1, fil + 1);
    let index: std::collections::HashMap<Monomial, u32> = dst
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    let mut cols = Vec::with_capacity(src.len());
    for m in &src {
        let d = differential_monomial(m);
        let mut col: Vec<u32> = d.terms().map(|t| index[t]).collect();
        col.sort_unstable();
        cols.push(col);
    }
    cols
}

/// Matrix of the differential from (stem, fil) to (stem-1, fil+1) in the
/// admissible bases (rows index the source basis).
pub fn d_matrix(stem: i64, fil: i64) -> F2Matrix {
    let cols = admissible_basis(stem - 1, fil + 1).len();
    let sparse = d_columns(stem, fil);
    let mut mat = F2Matrix::zero(sparse.len(), cols);
    for (r, col) in sparse.iter().enumerate() {
        for &c in col {
            mat.set(r, c as usize, true);
        }
    }
    mat
}

fn vec_to_element(v: &F2Vec, basis: &[Monomial]) -> Element {
    let mut e = Element::zero();
    for i in v.iter_ones() {
        e.add_term(basis[i]);
    }
    e
}

/// Express an element in coordinates over a basis slice.
pub fn element_to_vec(e: &Element, basis: &[Monomial]) -> Option<F2Vec> {
    let index: std::collections::HashMap<Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut v = F2Vec::zero(basis.len());
    for t in e.terms() {
        let c = index.get(t)?;
        v.set(*c, true);
    }
    Some(v)
}

/// ker d / im d at one bidegree, with deterministic representatives.
pub fn homology_bidegree(stem: i64, fil: i64, ceiling: Ceiling) -> Result<Homology> {
    if stem > ceiling.max_stem || fil > ceiling.max_fil {
        return Err(Error::range(format!(
            "bidegree ({stem}, {fil}) outside computation ceiling ({}, {})",
            ceiling.max_stem, ceiling.max_fil
        )));
    }
    Ok(homology_unchecked(stem, fil))
}

fn homology_unchecked(stem: i64, fil: i64) -> Homology {
    let basis = admissible_basis(stem, fil);
    if basis.is_empty() {
        return Homology {
            dim: 0,
            reps: Vec::new(),
        };
    }
    let out = d_matrix(stem, fil);
    let kernel = out.kernel_basis();
    let image = Subspace::from_spanning(d_matrix(stem + 1, fil - 1));
    let mut reduced: Vec<F2Vec> = Vec::new();
    for k in &kernel {
        let mut v = k.clone();
        image.reduce(&mut v);
        if !v.is_zero() {
            reduced.push(v);
        }
    }
    let mut m = F2Matrix::from_rows(reduced, basis.len());
    m.row_reduce();
    let reps: Vec<Element> = (0..m.rows())
        .map(|i| vec_to_element(m.row(i), &basis))
        .collect();
    Homology {
        dim: reps.len(),
        reps,
    }
}

/// Homology dimension only, through sparse column reduction; suitable for
/// the larger bidegrees where dense elimination is out of reach.
pub fn homology_dim(stem: i64, fil: i64) -> usize {
    let n = admissible_basis(stem, fil).len();
    if n == 0 {
        return 0;
    }
    let rank_out = ColumnReduction::rank(d_columns(stem, fil));
    let rank_in = ColumnReduction::rank(d_columns(stem + 1, fil - 1));
    n - rank_out - rank_in
}

/// Is a cycle nonzero in homology at its own bidegree? Uses the sparse
/// engine, so it remains usable at product-sized bidegrees.
pub fn class_is_nonzero(x: &Element) -> bool {
    if x.is_zero() {
        return false;
    }
    if !differential(x).is_zero() {
        return false;
    }
    let (stem, fil) = x.bidegree().expect("nonzero");
    let basis = admissible_basis(stem, fil);
    let index: std::collections::HashMap<Monomial, u32> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    let mut target: Vec<u32> = x.terms().map(|t| index[t]).collect();
    target.sort_unstable();
    let mut red = ColumnReduction::new();
    for col in d_columns(stem + 1, fil - 1) {
        red.push(col);
    }
    !red.reduces_to_zero(target)
}

/// A deterministic cycle representative of some nonzero class at (stem,
/// fil), through the sparse engine: the first kernel vector of d that is not
/// a boundary. Intended for bidegrees of homology dimension one.
pub fn sparse_nonzero_cycle(stem: i64, fil: i64) -> Option<Element> {
    let basis = admissible_basis(stem, fil);
    if basis.is_empty() {
        return None;
    }
    let mut image = ColumnReduction::new();
    for col in d_columns(stem + 1, fil - 1) {
        image.push(col);
    }
    let mut red = ColumnReduction::new();
    for (i, col) in d_columns(stem, fil).into_iter().enumerate() {
        if let Some(combo) = red.push_tracked(col, i as u32) {
            // combo is a kernel vector of d.
            if !image.reduces_to_zero(combo.clone()) {
                let mut e = Element::zero();
                for i in combo {
                    e.add_term(basis[i as usize]);
                }
                return Some(e);
            }
        }
    }
    None
}

/// Solve d(b) = target at the bidegree one step above the target; returns a
/// deterministic preimage when the target is a boundary. The zero element
/// bounds trivially.
pub fn solve_boundary(target: &Element) -> Option<Element> {
    if target.is_zero() {
        return Some(Element::zero());
    }
    let (stem, fil) = target.bidegree()?;
    let src = admissible_basis(stem + 1, fil - 1);
    let dst = admissible_basis(stem, fil);
    let index: std::collections::HashMap<Monomial, u32> = dst
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    let mut t: Vec<u32> = Vec::with_capacity(target.len());
    for term in target.terms() {
        t.push(*index.get(term)?);
    }
    t.sort_unstable();
    let mut red = ColumnReduction::new();
    for (i, col) in d_columns(stem + 1, fil - 1).into_iter().enumerate() {
        red.push_tracked(col, i as u32);
    }
    let combo = red.express(t)?;
    let mut e = Element::zero();
    for i in combo {
        e.add_term(src[i as usize]);
    }
    Some(e)
}

/// Coordinates of a cycle's class over the canonical homology basis at its
/// bidegree. Returns None when the element is not a cycle.
pub fn class_coordinates(x: &Element) -> Option<Vec<usize>> {
    let (stem, fil) = x.bidegree()?;
    if !differential(x).is_zero() {
        return None;
    }
    let basis = admissible_basis(stem, fil);
    let mut v = element_to_vec(x, &basis)?;
    let image = Subspace::from_spanning(d_matrix(stem + 1, fil - 1));
    image.reduce(&mut v);
    let h = homology_unchecked(stem, fil);
    let mut coords = Vec::new();
    for (i, rep) in h.reps.iter().enumerate() {
        let rv = element_to_vec(rep, &basis).expect("rep lies in basis");
        let lead = rv.leading().expect("nonzero rep");
        if v.get(lead) {
            v.xor_in(&rv);
            coords.push(i);
        }
    }
    if v.is_zero() {
        Some(coords)
    } else {
        // Representatives span homology; a reduced cycle always lands here.
        None
    }
}

/// Classical names for chart classes, keyed by (stem, filtration, index in
/// the canonical homology basis).
#[derive(Clone, Debug, Default)]
pub struct NameTable {
    map: std::collections::HashMap<(i64, i64, usize), String>,
}

pub const DEFAULT_NAMES: &str = include_str!("../data/named_classes.tsv");

impl NameTable {
    pub fn parse(text: &str) -> Result<NameTable> {
        let mut map = std::collections::HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "name table line {}: expected 4 tab-separated fields",
                    lineno + 1
                )));
            }
            let parse_i = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("name table line {}: bad integer", lineno + 1)))
            };
            map.insert(
                (parse_i(fields[0])?, parse_i(fields[1])?, parse_i(fields[2])? as usize),
                fields[3].to_string(),
            );
        }
        Ok(NameTable { map })
    }

    pub fn builtin() -> NameTable {
        NameTable::parse(DEFAULT_NAMES).expect("embedded name table parses")
    }

    /// Name for the i-th class at (stem, fil); unnamed classes print their
    /// coordinates.
    pub fn label(&self, stem: i64, fil: i64, index: usize) -> String {
        self.map
            .get(&(stem, fil, index))
            .cloned()
            .unwrap_or_else(|| format!("({stem},{fil},{index})"))
    }

    /// Label of a sum of basis classes.
    pub fn label_sum(&self, stem: i64, fil: i64, coords: &[usize]) -> String {
        match coords.len() {
            0 => "0".to_string(),
            1 => self.label(stem, fil, coords[0]),
            _ => coords
                .iter()
                .map(|&i| self.label(stem, fil, i))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

/// The Ext chart of the sphere over a rectangular window. Chart keys are
/// (stem, filtration). Dimensions come from the sparse engine; labels from
/// the curated name table.
pub fn ext_sphere_chart(
    max_stem: i64,
    max_fil: i64,
    ceiling: Ceiling,
    names: &NameTable,
) -> Result<crate::chart::Chart> {
    if max_stem > ceiling.max_stem || max_fil > ceiling.max_fil {
        return Err(Error::range(format!(
            "requested window ({max_stem}, {max_fil}) exceeds ceiling ({}, {})",
            ceiling.max_stem, ceiling.max_fil
        )));
    }
    let mut chart = crate::chart::Chart::default();
    // d-ranks are shared between adjacent bidegrees; compute each once.
    let mut ranks: std::collections::HashMap<(i64, i64), usize> = std::collections::HashMap::new();
    let rank_at = |stem: i64, fil: i64, ranks: &mut std::collections::HashMap<(i64, i64), usize>| {
        if let Some(&r) = ranks.get(&(stem, fil)) {
            return r;
        }
        let r = if stem < 0 || fil < 0 {
            0
        } else {
            ColumnReduction::rank(d_columns(stem, fil))
        };
        ranks.insert((stem, fil), r);
        r
    };
    for stem in 0..=max_stem {
        for fil in 0..=max_fil {
            let n = admissible_basis(stem, fil).len();
            if n == 0 {
                continue;
            }
            let dim = n - rank_at(stem, fil, &mut ranks) - rank_at(stem + 1, fil - 1, &mut ranks);
            if dim == 0 {
                continue;
            }
            let labels: Vec<String> = (0..dim).map(|i| names.label(stem, fil, i)).collect();
            chart.insert(crate::chart::ChartCell {
                s: stem,
                w: fil,
                glyph: crate::chart::Glyph::F2Dot,
                group: if dim == 1 {
                    "F2".to_string()
                } else {
                    format!("F2^{dim}")
                },
                label: labels.join(";"),
                fate: String::new(),
            });
        }
    }
    Ok(chart)
}

/// Fingerprint of the algebra conventions (admissibility rule, rewriting
/// rule, differential). Chart caches record this and refuse to load under a
/// different convention.
pub fn convention_fingerprint() -> String {
    let mut h = Sha256::new();
    h.update(b"lambda-convention-v1;admissible:2*i_j>=i_{j+1};");
    for n in 0..=24u32 {
        let d = differential_monomial(&Monomial::new(&[n]));
        h.update(format!("d(l{n})={d};"));
    }
    for i in 0..=10u32 {
        for m in (2 * i + 1)..=(2 * i + 16) {
            let e = adem_reduce(&[i, m]);
            h.update(format!("l{i}l{m}={e};"));
        }
    }
    format!("{:x}", h.finalize())
}
