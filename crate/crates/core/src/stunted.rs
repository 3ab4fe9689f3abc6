//! Stunted real projective spectra as cell modules over the Steenrod
//! algebra, their Lambda complexes, and splitting predicates.
//!
//! The spectrum RP[a..b] has one cell e_m for each a <= m <= b; a may be
//! negative. The transposed Steenrod action is Sq^j_* e_m = C(m-j, j) e_{m-j}
//! mod 2, with negative upper indices read 2-adically, and the cell Lambda
//! complex carries the differential
//!
//! ```text
//! d(e_m (x) mu) = sum_{j>=1} C(m-j, j) e_{m-j} (x) lambda_{j-1} mu
//!               + e_m (x) d(mu),
//! ```
//!
//! terms falling below the bottom cell being dropped.

use crate::arith::{binom_mod2, psi_i64};
use crate::f2::{F2Matrix, F2Vec, Subspace};
use crate::lambda::{
    admissible_basis, differential_monomial, left_multiply, Element, Monomial,
};
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Top cell of a stunted spectrum: a finite cell or unbounded above.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Top {
    Cell(i64),
    Infinite,
}

/// A stunted projective spectrum RP[bottom..top].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StuntedSpectrum {
    pub bottom: i64,
    pub top: Top,
}

impl StuntedSpectrum {
    pub fn finite(bottom: i64, top: i64) -> Result<Self> {
        if bottom > top {
            return Err(Error::domain(format!(
                "empty cell range: bottom {bottom} > top {top}"
            )));
        }
        Ok(StuntedSpectrum {
            bottom,
            top: Top::Cell(top),
        })
    }

    pub fn infinite(bottom: i64) -> Self {
        StuntedSpectrum {
            bottom,
            top: Top::Infinite,
        }
    }

    pub fn has_cell(&self, m: i64) -> bool {
        m >= self.bottom
            && match self.top {
                Top::Cell(t) => m <= t,
                Top::Infinite => true,
            }
    }

    /// Parse the CLI descriptor grammar "RP[a..b]" / "RP[a..inf]".
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad spectrum descriptor {s:?}; expected RP[a..b] or RP[a..inf]"));
        let inner = s
            .strip_prefix("RP[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (lo, hi) = inner.split_once("..").ok_or_else(bad)?;
        let bottom: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim();
        if hi == "inf" {
            Ok(StuntedSpectrum::infinite(bottom))
        } else {
            let top: i64 = hi.parse().map_err(|_| bad())?;
            StuntedSpectrum::finite(bottom, top)
        }
    }
}

impl fmt::Display for StuntedSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.top {
            Top::Cell(t) => write!(f, "RP[{}..{}]", self.bottom, t),
            Top::Infinite => write!(f, "RP[{}..inf]", self.bottom),
        }
    }
}

/// Coefficient of e_{m-j} in Sq^j_* e_m.
pub fn sq_coeff(m: i64, j: u64) -> bool {
    binom_mod2(m - j as i64, j)
}

/// Table of transposed Steenrod actions over a window of cells. Entry
/// `[j-1][i]` records whether Sq^j_* carries the i-th cell of the window to a
/// cell inside the spectrum (coefficients landing below the bottom cell are
/// dropped, matching the module structure).
pub fn sq_dual_table(spec: &StuntedSpectrum, window: (i64, i64), max_j: u64) -> Vec<Vec<bool>> {
    let (lo, hi) = window;
    let mut table = Vec::new();
    for j in 1..=max_j {
        let mut row = Vec::new();
        for m in lo..=hi {
            row.push(spec.has_cell(m) && spec.has_cell(m - j as i64) && sq_coeff(m, j));
        }
        table.push(row);
    }
    table
}

/// Does the top cell of RP[n - psi(|n|) .. n-1] split off when truncated at
/// `bottom`? True exactly when bottom >= n - psi(|n|).
pub fn top_cell_splits(n: i64, bottom: i64) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("top_cell_splits requires n != 0"));
    }
    if bottom > n - 1 {
        return Err(Error::domain(format!(
            "bottom {bottom} exceeds top cell {}",
            n - 1
        )));
    }
    let p = psi_i64(n.abs())? as i64;
    Ok(bottom >= n - p)
}

/// Does the bottom cell of RP[bottom..top] split off? With n = bottom - 1
/// and k = top - bottom this happens exactly when k <= psi(n+1) - 1.
/// Negative bottoms are handled through |bottom|, which agrees with the
/// positive case under James periodicity.
pub fn bottom_cell_splits(bottom: i64, top: i64) -> Result<bool> {
    if top < bottom {
        return Err(Error::domain(format!("empty range: top {top} < bottom {bottom}")));
    }
    if bottom == 0 {
        return Err(Error::domain("bottom cell 0 has no Radon-Hurwitz index"));
    }
    let k = top - bottom;
    let p = psi_i64(bottom.abs())? as i64;
    Ok(k < p)
}

/// Shift a finite spectrum into nonnegative indices by the James period: the
/// minimal N with 2^N > max(|bottom|, |top|, width) leaves every Sq
/// coefficient in range invariant.
pub fn james_shift(spec: &StuntedSpectrum) -> Result<(StuntedSpectrum, i64)> {
    let Top::Cell(top) = spec.top else {
        return Err(Error::domain("james_shift requires a finite spectrum"));
    };
    let width = top - spec.bottom;
    let bound = spec.bottom.abs().max(top.abs()).max(width);
    let mut shift = 1i64;
    while shift <= bound {
        shift <<= 1;
    }
    Ok((
        StuntedSpectrum {
            bottom: spec.bottom + shift,
            top: Top::Cell(top + shift),
        },
        shift,
    ))
}

/// A finite F2-sum of cells tensor Lambda monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CellChain {
    terms: BTreeSet<(i64, Monomial)>,
}

impl CellChain {
    pub fn zero() -> Self {
        CellChain::default()
    }

    pub fn term(cell: i64, mono: Monomial) -> Self {
        let mut c = CellChain::zero();
        c.add_term(cell, mono);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &(i64, Monomial)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, cell: i64, mono: Monomial) {
        let key = (cell, mono);
        if !self.terms.remove(&key) {
            self.terms.insert(key);
        }
    }

    pub fn add(&mut self, other: &CellChain) {
        for (c, m) in &other.terms {
            self.add_term(*c, *m);
        }
    }

    /// Attach a Lambda element on one cell.
    pub fn add_on_cell(&mut self, cell: i64, e: &Element) {
        for t in e.terms() {
            self.add_term(cell, *t);
        }
    }

    /// Total bidegree (stem, filtration) of a homogeneous chain.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        self.terms
            .iter()
            .next()
            .map(|(c, m)| (c + m.stem(), m.filtration()))
    }

    /// Maximal cell index occurring (the leading cell of the chart-label
    /// convention).
    pub fn leading_cell(&self) -> Option<i64> {
        self.terms.iter().map(|(c, _)| *c).max()
    }

    /// The part of the chain sitting on one cell, as a Lambda element.
    pub fn on_cell(&self, cell: i64) -> Element {
        let mut e = Element::zero();
        for (c, m) in &self.terms {
            if *c == cell {
                e.add_term(*m);
            }
        }
        e
    }
}

impl fmt::Display for CellChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "e[{c}]*{m}")?;
            first = false;
        }
        Ok(())
    }
}

/// The cell Lambda differential, dropping terms below the bottom cell.
pub fn cell_differential(spec: &StuntedSpectrum, x: &CellChain) -> CellChain {
    let mut out = CellChain::zero();
    for (m, mu) in x.terms() {
        // Internal Lambda differential.
        out.add_on_cell(*m, &differential_monomial(mu));
        // Steenrod terms.
        let max_j = (m - spec.bottom) as u64;
        for j in 1..=max_j {
            if sq_coeff(*m, j) {
                out.add_on_cell(m - j as i64, &left_multiply(j as u32 - 1, &Element::from_monomial(*mu)));
            }
        }
    }
    out
}

/// Basis of the cell complex at one total bidegree, ordered by descending
/// cell index then lexicographic monomial. Infinite spectra contribute only
/// cells m <= total stem, so the basis is finite.
pub fn cell_basis(spec: &StuntedSpectrum, total_stem: i64, fil: i64) -> Vec<(i64, Monomial)> {
    let hi = match spec.top {
        Top::Cell(t) => t.min(total_stem),
        Top::Infinite => total_stem,
    };
    let mut out = Vec::new();
    let mut m = hi;
    while m >= spec.bottom {
        for mono in admissible_basis(total_stem - m, fil) {
            out.push((m, mono));
        }
        m -= 1;
    }
    out
}

fn chain_to_vec(x: &CellChain, basis: &[(i64, Monomial)]) -> Option<F2Vec> {
    let index: std::collections::HashMap<&(i64, Monomial), usize> =
        basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut v = F2Vec::zero(basis.len());
    for t in x.terms() {
        v.set(*index.get(t)?, true);
    }
    Some(v)
}

fn vec_to_chain(v: &F2Vec, basis: &[(i64, Monomial)]) -> CellChain {
    let mut c = CellChain::zero();
    for i in v.iter_ones() {
        let (cell, mono) = &basis[i];
        c.add_term(*cell, *mono);
    }
    c
}

/// Matrix of the cell differential from (stem, fil) to (stem-1, fil+1).
pub fn cell_d_matrix(spec: &StuntedSpectrum, stem: i64, fil: i64) -> F2Matrix {
    let src = cell_basis(spec, stem, fil);
    let dst = cell_basis(spec, stem - 1, fil + 1);
    let index: std::collections::HashMap<&(i64, Monomial), usize> =
        dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut mat = F2Matrix::zero(src.len(), dst.len());
    for (r, (cell, mono)) in src.iter().enumerate() {
        let d = cell_differential(spec, &CellChain::term(*cell, *mono));
        for t in d.terms() {
            mat.set(r, *index.get(t).expect("cell differential stays in range"), true);
        }
    }
    mat
}

/// Homology of the cell Lambda complex at one total bidegree.
pub struct CellHomology {
    pub dim: usize,
    pub reps: Vec<CellChain>,
}

pub fn cell_homology(spec: &StuntedSpectrum, stem: i64, fil: i64) -> CellHomology {
    let basis = cell_basis(spec, stem, fil);
    if basis.is_empty() {
        return CellHomology {
            dim: 0,
            reps: Vec::new(),
        };
    }
    let out = cell_d_matrix(spec, stem, fil);
    let kernel = out.kernel_basis();
    let image = Subspace::from_spanning(cell_d_matrix(spec, stem + 1, fil - 1));
    let mut reduced = Vec::new();
    for k in &kernel {
        let mut v = k.clone();
        image.reduce(&mut v);
        if !v.is_zero() {
            reduced.push(v);
        }
    }
    let mut m = F2Matrix::from_rows(reduced, basis.len());
    m.row_reduce();
    let reps = (0..m.rows()).map(|i| vec_to_chain(m.row(i), &basis)).collect::<Vec<_>>();
    CellHomology {
        dim: reps.len(),
        reps,
    }
}

/// Is a cycle nonzero in the homology of the cell complex?
pub fn cell_class_is_nonzero(spec: &StuntedSpectrum, x: &CellChain) -> bool {
    if x.is_zero() {
        return false;
    }
    if !cell_differential(spec, x).is_zero() {
        return false;
    }
    let (stem, fil) = x.bidegree().expect("nonzero");
    let basis = cell_basis(spec, stem, fil);
    let v = chain_to_vec(x, &basis).expect("chain lies in basis");
    let image = Subspace::from_spanning(cell_d_matrix(spec, stem + 1, fil - 1));
    !image.contains(&v)
}

/// Solve d(y) = x in the cell complex; deterministic preimage when x is a
/// boundary.
pub fn cell_solve_boundary(spec: &StuntedSpectrum, x: &CellChain) -> Option<CellChain> {
    let (stem, fil) = x.bidegree()?;
    let src = cell_basis(spec, stem + 1, fil - 1);
    let dst = cell_basis(spec, stem, fil);
    let mat = cell_d_matrix(spec, stem + 1, fil - 1);
    let t = chain_to_vec(x, &dst)?;
    let sol = mat.solve(&t)?;
    Some(vec_to_chain(&sol, &src))
}

fn product_word(word: &[u32], tail: &Element) -> Element {
    crate::lambda::concat_product(&crate::lambda::adem_reduce(word), tail)
}

/// The six-term chain over cells [b-c .. b-c+7] whose differential is
/// concentrated on cell b-c+2. Here `alpha` is a cycle (the class whose
/// h1^3-multiple survives on the leading cell) and `beta` solves
/// d(beta) = l0 l0 l0 alpha.
pub fn h1_cubed_survivor_chain(b: i64, c: i64, alpha: &Element, beta: &Element) -> CellChain {
    let base = b - c;
    let mut s = CellChain::zero();
    s.add_on_cell(base + 7, &product_word(&[0, 0], alpha));
    s.add_on_cell(base + 5, &product_word(&[2, 0], alpha));
    s.add_on_cell(base + 4, &product_word(&[1, 2], alpha));
    s.add_on_cell(base + 1, &product_word(&[6, 0], alpha));
    let mut mixed = product_word(&[6, 1], alpha);
    mixed.add(&product_word(&[5, 2], alpha));
    mixed.add(&product_word(&[3, 4], alpha));
    s.add_on_cell(base, &mixed);
    s.add_on_cell(base + 6, beta);
    s
}

/// The obstruction cycle gamma = l4 l0 l0 alpha + l3 beta + l2 l2 l0 alpha
/// + l1 l1 l2 alpha carried by cell b-c+2 under the chain above.
pub fn gamma_obstruction(alpha: &Element, beta: &Element) -> Element {
    let mut g = product_word(&[4, 0, 0], alpha);
    g.add(&product_word(&[3], beta));
    g.add(&product_word(&[2, 2, 0], alpha));
    g.add(&product_word(&[1, 1, 2], alpha));
    g
}

/// The six-term cycle over cells [b-c .. b-c+5] with leading term
/// e_{b-c+5} (x) l0^3 alpha_t. Here `alpha_t` is a cycle and `beta_t`
/// solves d(beta_t) = l0^4 alpha_t; the chain is closed.
pub fn imj_tower_survivor_chain(b: i64, c: i64, alpha_t: &Element, beta_t: &Element) -> CellChain {
    let base = b - c;
    let mut s = CellChain::zero();
    s.add_on_cell(base + 5, &product_word(&[0, 0, 0], alpha_t));
    s.add_on_cell(base + 4, beta_t);
    s.add_on_cell(base + 3, &product_word(&[2, 0, 0], alpha_t));
    s.add_on_cell(base + 2, &product_word(&[1, 2, 0], alpha_t));
    let mut mixed = product_word(&[4, 0, 0], alpha_t);
    mixed.add(&product_word(&[2, 2, 0], alpha_t));
    mixed.add(&product_word(&[1, 1, 2], alpha_t));
    s.add_on_cell(base + 1, &mixed);
    s.add_on_cell(base, &product_word(&[3, 2, 0], alpha_t));
    s
}

/// Close the h1-cubed survivor chain to a cycle in RP[b-c..inf] by solving
/// away the obstruction on cell b-c+2, and return the cycle. The correction
/// solves d(x) = gamma directly when gamma bounds, and otherwise matches
/// gamma against l0^3 times a cycle one filtration down, as dictated by the
/// two possible fates of the obstruction class.
pub fn h1_cubed_survivor_cycle(
    spec: &StuntedSpectrum,
    b: i64,
    c: i64,
    alpha: &Element,
) -> Result<CellChain> {
    use crate::lambda::{
        class_coordinates, concat_product, homology_bidegree, solve_boundary, Ceiling,
    };
    let base = b - c;
    if spec.bottom != base {
        return Err(Error::domain(format!(
            "chain lives over bottom cell {base}, spectrum starts at {}",
            spec.bottom
        )));
    }
    let l0cubed_alpha = product_word(&[0, 0, 0], alpha);
    let beta = solve_boundary(&l0cubed_alpha)
        .ok_or_else(|| Error::domain("l0^3 alpha does not bound; alpha is not in the expected family"))?;
    let chain = h1_cubed_survivor_chain(b, c, alpha, &beta);
    let gamma = gamma_obstruction(alpha, &beta);
    let (gs, gf) = gamma
        .bidegree()
        .ok_or_else(|| Error::domain("gamma vanished; nothing to correct"))?;
    let mut cycle = chain;
    match solve_boundary(&gamma) {
        Some(beta_t) => {
            cycle.add_on_cell(base + 2, &beta_t);
        }
        None => {
            // gamma is homologous to l0^3 alpha_t for some cycle alpha_t one
            // filtration below; search the (small) homology there.
            let target = class_coordinates(&gamma)
                .ok_or_else(|| Error::domain("gamma is not a cycle"))?;
            let h = homology_bidegree(gs, gf - 3, Ceiling { max_stem: gs.max(30), max_fil: gf.max(15) })?;
            let mut found = None;
            for mask in 1u32..(1u32 << h.dim.min(8)) {
                let mut cand = Element::zero();
                for (i, rep) in h.reps.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        cand.add(rep);
                    }
                }
                let shifted = product_word(&[0, 0, 0], &cand);
                if class_coordinates(&shifted).as_deref() == Some(&target[..]) {
                    found = Some(cand);
                    break;
                }
            }
            let alpha_t = found.ok_or_else(|| {
                Error::domain("gamma matches no l0^3-divisible class; chain cannot be closed")
            })?;
            let mut shifted = gamma.clone();
            shifted.add(&product_word(&[0, 0, 0], &alpha_t));
            let beta_t = solve_boundary(&shifted)
                .ok_or_else(|| Error::domain("gamma + l0^3 alpha_t does not bound"))?;
            cycle.add_on_cell(base + 2, &beta_t);
            cycle.add_on_cell(base + 3, &concat_product(&crate::lambda::adem_reduce(&[0, 0]), &alpha_t));
            cycle.add_on_cell(base + 1, &concat_product(&crate::lambda::adem_reduce(&[2, 0]), &alpha_t));
            cycle.add_on_cell(base, &concat_product(&crate::lambda::adem_reduce(&[1, 2]), &alpha_t));
        }
    }
    if !cell_differential(spec, &cycle).is_zero() {
        return Err(Error::domain("correction failed to close the chain"));
    }
    Ok(cycle)
}

/// Chart label of a homology class: leading-cell convention x[m], where m is
/// the maximal cell occurring and x names the sphere class of the part of
/// the chain on that cell.
pub fn chain_label(x: &CellChain, names: &crate::lambda::NameTable) -> String {
    let Some(m) = x.leading_cell() else {
        return "0".to_string();
    };
    let top = x.on_cell(m);
    let (stem, fil) = top.bidegree().expect("leading part nonzero");
    match crate::lambda::class_coordinates(&top) {
        Some(coords) if !coords.is_empty() => {
            format!("{}[{m}]", names.label_sum(stem, fil, &coords))
        }
        _ => format!("({stem},{fil},?)[{m}]"),
    }
}

/// The Ext chart of a stunted spectrum over a window of total stems and
/// filtrations. Chart keys are (total stem, filtration).
pub fn ext_stunted_chart(
    spec: &StuntedSpectrum,
    stem_range: (i64, i64),
    max_fil: i64,
    names: &crate::lambda::NameTable,
) -> Result<crate::chart::Chart> {
    let (lo, hi) = stem_range;
    if lo > hi {
        return Err(Error::domain(format!("empty stem range {lo}..{hi}")));
    }
    if hi - lo > 512 || max_fil > 15 {
        return Err(Error::range("stunted chart window too large"));
    }
    // Steenrod terms from cell m reach down by m - bottom, so the packed
    // generator index is bounded by the reachable span.
    if hi - spec.bottom > 200 {
        return Err(Error::range(format!(
            "window reaches {} cells above the bottom cell; limit is 200",
            hi - spec.bottom
        )));
    }
    let mut chart = crate::chart::Chart::default();
    for stem in lo..=hi {
        for fil in 0..=max_fil {
            let h = cell_homology(spec, stem, fil);
            if h.dim == 0 {
                continue;
            }
            let labels: Vec<String> = h.reps.iter().map(|r| chain_label(r, names)).collect();
            chart.insert(crate::chart::ChartCell {
                s: stem,
                w: fil,
                glyph: crate::chart::Glyph::F2Dot,
                group: if h.dim == 1 {
                    "F2".to_string()
                } else {
                    format!("F2^{}", h.dim)
                },
                label: labels.join(";"),
                fate: String::new(),
            });
        }
    }
    Ok(chart)
}

/// The algebraic Atiyah-Hirzebruch d1: present exactly when Sq^1_* acts
/// nontrivially from cell m (m even), where it carries x[m] to h0*x[m-1].
pub fn ahss_d1(spec: &StuntedSpectrum, m: i64, class_label: &str) -> Option<String> {
    if m - 1 < spec.bottom || !spec.has_cell(m) {
        return None;
    }
    if sq_coeff(m, 1) {
        Some(format!("h0*{class_label}[{}]", m - 1))
    } else {
        None
    }
}
