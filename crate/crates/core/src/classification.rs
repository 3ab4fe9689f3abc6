//! Closed-form classification of RO(C2)-graded coefficient groups, Hurewicz
//! images, zero-line classes and their differential behavior.
//!
//! Gradings follow the (stem s, weight w) convention with coweight s - w.
//! The negative-cone generator theta/(rho^a tau^b) sits in bidegree
//! (a, a + b + 2).

use crate::arith::{psi_i64, v2_i64};
use crate::labels::{theta_label, Base, Label};
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// An (s, w) pair: s is the stem, w the weight, s - w the coweight.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct BiDegree {
    pub s: i64,
    pub w: i64,
}

impl BiDegree {
    pub fn new(s: i64, w: i64) -> Self {
        BiDegree { s, w }
    }

    pub fn coweight(&self) -> i64 {
        self.s - self.w
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.w)
    }
}

/// A formal class theta/(rho^a tau^b), the filtration-0 currency of the
/// negative cone.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct NegConeGenerator {
    pub a: u64,
    pub b: u64,
}

impl NegConeGenerator {
    pub fn bidegree(&self) -> BiDegree {
        BiDegree::new(self.a as i64, self.a as i64 + self.b as i64 + 2)
    }

    pub fn label(&self) -> String {
        theta_label(self.a, self.b)
    }
}

/// Kind of group a Hurewicz-image (or coefficient) entry carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    Zero,
    F2,
    Z,
    BurnsideRing,
}

/// A graded piece together with its canonical generator label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HurewiczValue {
    pub kind: GroupKind,
    pub generator_label: String,
}

impl HurewiczValue {
    pub fn zero() -> Self {
        HurewiczValue {
            kind: GroupKind::Zero,
            generator_label: Label::Zero.to_string(),
        }
    }

    fn f2(label: Label) -> Self {
        HurewiczValue {
            kind: GroupKind::F2,
            generator_label: label.to_string(),
        }
    }

    fn z(label: Label) -> Self {
        HurewiczValue {
            kind: GroupKind::Z,
            generator_label: label.to_string(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == GroupKind::Zero
    }
}

/// pi_{s,w} of the F2 Eilenberg-MacLane spectrum: the polynomial part
/// F2[rho, tau] plus the negative cone.
pub fn coefficients_hf2(deg: BiDegree) -> HurewiczValue {
    let BiDegree { s, w } = deg;
    if s <= 0 && w <= s {
        // rho^i tau^j at (-i, -i-j).
        let i = (-s) as u64;
        let j = (s - w) as u64;
        return HurewiczValue::f2(Label::plain(Base::RhoTau(i, j)));
    }
    if s >= 0 && w >= s + 2 {
        let a = s as u64;
        let b = (w - s - 2) as u64;
        return HurewiczValue::f2(Label::plain(Base::Theta(a, b)));
    }
    HurewiczValue::zero()
}

/// Coefficient groups of the integral Eilenberg-MacLane spectrum.
#[allow(clippy::if_same_then_else)] // the cases mirror the coefficient table
pub fn coefficients_hz(deg: BiDegree) -> GroupKind {
    let BiDegree { s, w } = deg;
    let cw = s - w;
    if s == 0 && w % 2 == 0 {
        GroupKind::Z
    } else if s < 0 && cw >= 0 && cw % 2 == 0 {
        GroupKind::F2
    } else if s >= 0 && cw <= -3 && cw.rem_euclid(2) == 1 {
        GroupKind::F2
    } else {
        GroupKind::Zero
    }
}

/// Coefficient groups of the Burnside Eilenberg-MacLane spectrum.
#[allow(clippy::if_same_then_else)] // the cases mirror the coefficient table
pub fn coefficients_ha(deg: BiDegree) -> GroupKind {
    let BiDegree { s, w } = deg;
    let cw = s - w;
    if s == 0 && w == 0 {
        GroupKind::BurnsideRing
    } else if s == 0 && w % 2 == 0 {
        GroupKind::Z
    } else if s == w {
        GroupKind::Z
    } else if s < 0 && cw >= 2 && cw % 2 == 0 {
        GroupKind::F2
    } else if s >= 0 && cw <= -3 && cw.rem_euclid(2) == 1 {
        GroupKind::F2
    } else {
        GroupKind::Zero
    }
}

/// The zero-line Ext_{C2}^{s,0,w} of the genuine equivariant Adams E2-page.
pub fn zero_line(deg: BiDegree) -> HurewiczValue {
    let BiDegree { s, w } = deg;
    if s == w && s <= 0 {
        let base = if s == 0 { Base::One } else { Base::Rho((-s) as u64) };
        return HurewiczValue::f2(Label::plain(base));
    }
    if s >= 0 && s - w <= -2 {
        let n = w - s - 1; // >= 1
        let v = v2_i64(n).expect("n >= 1");
        if (s as u64) < (1u64 << v.min(62)) {
            return HurewiczValue::f2(Label::plain(Base::Theta(s as u64, (w - s - 2) as u64)));
        }
    }
    HurewiczValue::zero()
}

/// Survivors of the rho-Bockstein differential family among the
/// negative-cone generators theta/(rho^a tau^b) with a <= max_a, b <= max_b.
///
/// The family is applied literally: for every n, i, k >= 0 the class with
/// a = 2^n + i and b = k*2^(n+1) + 2^n - 1 is a source. Classes never
/// appearing as a source survive.
pub fn bockstein_survivors(max_a: u64, max_b: u64) -> BTreeSet<NegConeGenerator> {
    let mut sources = vec![vec![false; (max_b + 1) as usize]; (max_a + 1) as usize];
    let mut n = 0u32;
    while 1u64 << n <= max_a {
        let p = 1u64 << n; // 2^n
        let period = p << 1; // 2^(n+1)
        let mut b = p - 1;
        while b <= max_b {
            let mut a = p;
            while a <= max_a {
                sources[a as usize][b as usize] = true;
                a += 1;
            }
            b += period;
        }
        n += 1;
    }
    let mut out = BTreeSet::new();
    for a in 0..=max_a {
        for b in 0..=max_b {
            if !sources[a as usize][b as usize] {
                out.insert(NegConeGenerator { a, b });
            }
        }
    }
    out
}

/// The graded Hurewicz image of the F2 Eilenberg-MacLane spectrum.
pub fn hurewicz_hf2(deg: BiDegree) -> HurewiczValue {
    let BiDegree { s, w } = deg;
    if s == w && s <= 0 {
        let base = if s == 0 { Base::One } else { Base::Rho((-s) as u64) };
        return HurewiczValue::f2(Label::plain(base));
    }
    if s >= 0 && s - w <= -2 {
        let n = w - s - 1;
        let p = psi_i64(n).expect("n >= 1");
        if (s as u64) < p {
            return HurewiczValue::f2(Label::plain(Base::Theta(s as u64, (w - s - 2) as u64)));
        }
    }
    HurewiczValue::zero()
}

/// The step function n(s) entering the Burnside-spectrum image on the
/// positive diagonal.
pub fn n_of_s(s: i64) -> Result<i64> {
    if s <= 0 {
        return Err(Error::domain(format!("n(s) requires s >= 1, got {s}")));
    }
    let t = s / 8;
    let j = s % 8;
    Ok(match j {
        0 => 4 * (t - 1) + 3, // s = 8t: 4t - 1
        1..=4 => 4 * t,
        5 => 4 * t + 1,
        6 => 4 * t + 2,
        _ => 4 * t + 3,
    })
}

/// The graded Hurewicz image of the integral Eilenberg-MacLane spectrum.
pub fn hurewicz_hz(deg: BiDegree) -> HurewiczValue {
    let BiDegree { s, w } = deg;
    if s == 0 && w == 0 {
        return HurewiczValue::z(Label::plain(Base::One));
    }
    if s == 0 && w > 0 && w % 2 == 0 {
        let k = (w / 2) as u64;
        return HurewiczValue::z(Label::plain(Base::Theta(0, 2 * k - 2)));
    }
    if s == 0 && w < 0 && w % 2 == 0 {
        let k = (-w / 2) as u64;
        return HurewiczValue::z(Label::Scaled(1, Base::Tau(2 * k)));
    }
    if s == w && s < 0 {
        return HurewiczValue::f2(Label::plain(Base::Rho((-s) as u64)));
    }
    let cw = s - w;
    if s >= 0 && cw <= -3 && cw.rem_euclid(2) == 1 {
        let n = w - s - 1;
        let p = psi_i64(n).expect("n >= 2");
        if (s as u64) < p {
            return HurewiczValue::f2(Label::plain(Base::Theta(s as u64, (w - s - 2) as u64)));
        }
    }
    HurewiczValue::zero()
}

/// The graded Hurewicz image of the Burnside Eilenberg-MacLane spectrum.
pub fn hurewicz_ha(deg: BiDegree) -> HurewiczValue {
    let BiDegree { s, w } = deg;
    if s == 0 && w == 0 {
        return HurewiczValue {
            kind: GroupKind::BurnsideRing,
            generator_label: Label::BurnsidePair.to_string(),
        };
    }
    if s == w && s > 0 {
        let n = n_of_s(s).expect("s >= 1");
        let e = (s - n - 1) as u64;
        return HurewiczValue::z(Label::Scaled(e, Base::EtaOverRho((s - 1) as u64)));
    }
    if s == w && s < 0 {
        return HurewiczValue::z(Label::plain(Base::Rho((-s) as u64)));
    }
    // The remaining cases agree with the integral image.
    let hz = hurewicz_hz(deg);
    match hz.kind {
        GroupKind::Zero => HurewiczValue::zero(),
        _ => hz,
    }
}

/// Fate of a filtration-0 class in the genuine equivariant Adams spectral
/// sequence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fil0Status {
    NotPresent,
    PermanentCycle,
    SupportsDifferential,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    EdgeRule,
    LongestDiffTheorem,
    CuratedExample,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fil0Fate {
    pub status: Fil0Status,
    /// Length r of the known differential, when proved. Differential targets
    /// are stored for the stunted-spectrum translation; the genuine-side
    /// target is defined only up to indeterminacy.
    pub known_length: Option<u32>,
    pub known_target_label: Option<String>,
    pub provenance: Provenance,
}

impl Fil0Fate {
    fn simple(status: Fil0Status) -> Self {
        Fil0Fate {
            status,
            known_length: None,
            known_target_label: None,
            provenance: Provenance::Unknown,
        }
    }
}

/// One curated differential record, keyed by (coweight, s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuratedRecord {
    pub coweight: i64,
    pub s: i64,
    pub length: u32,
    pub target_label: String,
    pub citation_tag: String,
}

/// The curated table of proved differential lengths. Only machine-recorded
/// facts ship; everything else reports Unknown.
#[derive(Clone, Debug, Default)]
pub struct CuratedTable {
    records: Vec<CuratedRecord>,
}

pub const DEFAULT_CURATED: &str = include_str!("../data/curated_examples.tsv");

impl CuratedTable {
    pub fn parse(text: &str) -> Result<CuratedTable> {
        let mut records = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!(
                    "curated table line {}: expected 5 tab-separated fields",
                    lineno + 1
                )));
            }
            let parse_i = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("curated table line {}: bad integer {s:?}", lineno + 1)))
            };
            records.push(CuratedRecord {
                coweight: parse_i(fields[0])?,
                s: parse_i(fields[1])?,
                length: parse_i(fields[2])? as u32,
                target_label: fields[3].to_string(),
                citation_tag: fields[4].to_string(),
            });
        }
        Ok(CuratedTable { records })
    }

    pub fn builtin() -> CuratedTable {
        CuratedTable::parse(DEFAULT_CURATED).expect("embedded table parses")
    }

    pub fn lookup(&self, coweight: i64, s: i64) -> Option<&CuratedRecord> {
        self.records
            .iter()
            .find(|r| r.coweight == coweight && r.s == s)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Classify the fate of the filtration-0 class at `deg`.
pub fn classify_fil0(deg: BiDegree, curated: &CuratedTable) -> Fil0Fate {
    let BiDegree { s, w } = deg;
    if zero_line(deg).is_zero() {
        return Fil0Fate::simple(Fil0Status::NotPresent);
    }
    if s == w && s <= 0 {
        return Fil0Fate::simple(Fil0Status::PermanentCycle);
    }
    let n = w - s - 1;
    let p = psi_i64(n).expect("n >= 1") as i64;
    if s < p {
        return Fil0Fate::simple(Fil0Status::PermanentCycle);
    }
    // psi(n) <= s < 2^v2(n): the class supports a differential.
    let v = v2_i64(n).expect("n >= 1");
    let coweight = s - w;
    if let Some(rec) = curated.lookup(coweight, s) {
        return Fil0Fate {
            status: Fil0Status::SupportsDifferential,
            known_length: Some(rec.length),
            known_target_label: Some(rec.target_label.clone()),
            provenance: Provenance::CuratedExample,
        };
    }
    if s == p && v >= 5 {
        let data = longest_diff_data(coweight).expect("v2 >= 5 implies a prediction");
        return Fil0Fate {
            status: Fil0Status::SupportsDifferential,
            known_length: Some((v - 1) as u32),
            known_target_label: Some(format!("{}[{}]", data.target_family_label, coweight - data.c)),
            provenance: Provenance::LongestDiffTheorem,
        };
    }
    if s == (1i64 << v) - 1 {
        // Largest class of the coweight: always a d2.
        return Fil0Fate {
            status: Fil0Status::SupportsDifferential,
            known_length: Some(2),
            known_target_label: None,
            provenance: Provenance::EdgeRule,
        };
    }
    Fil0Fate {
        status: Fil0Status::SupportsDifferential,
        known_length: None,
        known_target_label: None,
        provenance: Provenance::Unknown,
    }
}

/// Record of the longest-differential prediction for a coweight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongestDiffData {
    /// c = psi(-coweight - 1): the rho-exponent of the last nonsurviving
    /// class, equal to the cell drop of the differential.
    pub c: i64,
    /// Adams filtration of the detecting element a_{c-1}.
    pub m: i64,
    pub source_generator: String,
    pub target_family_label: String,
}

/// Table of indices for the longest differential at a coweight with
/// v2(-coweight - 1) >= 4.
pub fn longest_diff_data(coweight: i64) -> Result<LongestDiffData> {
    if coweight > -2 {
        return Err(Error::domain(format!(
            "longest differential data requires coweight <= -2, got {coweight}"
        )));
    }
    let n = -coweight - 1; // = w - s - 1 >= 1
    let v = v2_i64(n)?;
    if v < 4 {
        return Err(Error::domain(format!(
            "no longest-differential prediction: v2({n}) = {v} < 4"
        )));
    }
    let c = psi_i64(n)? as i64;
    let (m, target) = if v == 5 {
        (3, "h1^2h3".to_string())
    } else {
        let k = (v / 4) as i64;
        match v % 4 {
            0 => (4 * k - 1, p_power("c0", k - 1)),
            1 => (4 * k, format!("h1{}", p_power("c0", k - 1))),
            2 => (4 * k + 1, p_power("h2", k)),
            _ => {
                let m = 4 * k + 1 - v2_i64(k + 1)? as i64;
                (m, imj_detector_label(k))
            }
        }
    };
    let source = theta_label(c as u64, n as u64 - 1);
    Ok(LongestDiffData {
        c,
        m,
        source_generator: source,
        target_family_label: target,
    })
}

fn p_power(base: &str, k: i64) -> String {
    match k {
        0 => base.to_string(),
        1 => format!("P{base}"),
        _ => format!("P^{k}{base}"),
    }
}

/// Name of the Ext element detecting the image-of-J generator in stem 8k+7.
fn imj_detector_label(k: i64) -> String {
    match k {
        1 => "h0^3h4".to_string(),
        2 => "h0^2i".to_string(),
        3 => "h0^10h5".to_string(),
        _ => format!("a(8*{k}+7)"),
    }
}

/// Predictor record for the image-of-J differential in stem 8k+7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImJData {
    pub stem: i64,
    pub r_k: i64,
    pub two_order: i64,
    pub a_filtration: i64,
    pub a_label: String,
    pub a_prime_label: String,
    pub a_prime_bidegree: (i64, i64),
    pub target_label: String,
    pub target_bidegree: (i64, i64),
}

pub fn imj_data(k: i64) -> Result<ImJData> {
    if k <= 0 {
        return Err(Error::domain(format!("imj_data requires k >= 1, got {k}")));
    }
    let r_k = v2_i64(k + 1)? as i64 + 2;
    let a_fil = 4 * k + 3 - r_k;
    let a_prime = match k {
        1 => "h0^2h4".to_string(),
        2 => "h0i".to_string(),
        3 => "h0^9h5".to_string(),
        _ => format!("a'(8*{k}+7)"),
    };
    Ok(ImJData {
        stem: 8 * k + 7,
        r_k,
        two_order: 1i64 << (v2_i64(k + 1)? + 4),
        a_filtration: a_fil,
        a_label: imj_detector_label(k),
        a_prime_label: a_prime,
        a_prime_bidegree: (8 * k + 7, a_fil - 1),
        target_label: format!("h2{}", p_power("h2", k)),
        target_bidegree: (8 * k + 6, 4 * k + 2),
    })
}

/// Translation of a zero-line class to its stunted-projective address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuntedAddress {
    /// Bottom cell of the hosting spectrum RP^inf_bottom.
    pub bottom: i64,
    /// Cell carrying the class 1[m].
    pub cell: i64,
}

impl StuntedAddress {
    pub fn cell_class_label(&self) -> String {
        format!("1[{}]", self.cell)
    }

    /// Recover the (s, w) bidegree of the class this address came from.
    pub fn bidegree(&self) -> BiDegree {
        let w = -self.bottom;
        BiDegree::new(self.cell + w, w)
    }
}

/// theta/(rho^s tau^(w-s-2)) corresponds to 1[s-w] on RP^inf_{-w}.
pub fn translate_to_stunted(deg: BiDegree) -> Result<StuntedAddress> {
    if deg.s < 0 || zero_line(deg).is_zero() {
        return Err(Error::domain(format!(
            "{deg} carries no zero-line class of the negative cone"
        )));
    }
    if deg.coweight() > -2 {
        return Err(Error::domain(format!("{deg} lies outside the negative cone")));
    }
    Ok(StuntedAddress {
        bottom: -deg.w,
        cell: deg.coweight(),
    })
}
