//! Bigraded charts, their TSV and SVG serializations, and the chart cache.
//!
//! TSV output is the machine format: a fixed five-column header
//! `s<TAB>w<TAB>group<TAB>label<TAB>fate`, one row per nonzero cell, rows
//! sorted by (w, s), UTF-8 with LF line endings, byte-deterministic.

use crate::classification::GroupKind;
use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Glyph vocabulary shared with the figures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Glyph {
    F2Dot,
    ZSquare,
    BurnsideSquare,
    HollowCircle,
    RedDot,
    BlueDot,
}

impl Glyph {
    pub fn name(self) -> &'static str {
        match self {
            Glyph::F2Dot => "f2dot",
            Glyph::ZSquare => "zsquare",
            Glyph::BurnsideSquare => "burnside-square",
            Glyph::HollowCircle => "hollow-circle",
            Glyph::RedDot => "red-dot",
            Glyph::BlueDot => "blue-dot",
        }
    }
}

/// One populated cell of a chart. `w` doubles as the filtration axis for
/// Ext charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCell {
    pub s: i64,
    pub w: i64,
    pub glyph: Glyph,
    pub group: String,
    pub label: String,
    pub fate: String,
}

/// A chart: populated cells keyed by (w, s) for deterministic emission.
#[derive(Clone, Debug, Default)]
pub struct Chart {
    pub cells: BTreeMap<(i64, i64), ChartCell>,
}

impl Chart {
    pub fn insert(&mut self, cell: ChartCell) {
        self.cells.insert((cell.w, cell.s), cell);
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }
}

pub fn group_name(kind: GroupKind) -> &'static str {
    match kind {
        GroupKind::Zero => "0",
        GroupKind::F2 => "F2",
        GroupKind::Z => "Z",
        GroupKind::BurnsideRing => "A(C2)",
    }
}

/// Emit the canonical TSV byte stream.
pub fn emit_tsv(chart: &Chart) -> Vec<u8> {
    let mut out = String::from("s\tw\tgroup\tlabel\tfate\n");
    for cell in chart.cells.values() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            cell.s, cell.w, cell.group, cell.label, cell.fate
        )
        .expect("write to string");
    }
    out.into_bytes()
}

/// Emit an SVG 1.1 document: dashed axes, one glyph per populated cell, and
/// a legend block. The s axis points right and the w axis up.
pub fn emit_svg(chart: &Chart) -> Result<Vec<u8>> {
    const UNIT: i64 = 24;
    const MARGIN: i64 = 60;
    let (mut s_lo, mut s_hi, mut w_lo, mut w_hi) = (0i64, 1i64, 0i64, 1i64);
    for cell in chart.cells.values() {
        s_lo = s_lo.min(cell.s);
        s_hi = s_hi.max(cell.s);
        w_lo = w_lo.min(cell.w);
        w_hi = w_hi.max(cell.w);
    }
    if (s_hi - s_lo) > 10_000 || (w_hi - w_lo) > 10_000 {
        return Err(Error::range("chart too large for SVG emission"));
    }
    let width = (s_hi - s_lo + 2) * UNIT + 2 * MARGIN;
    let height = (w_hi - w_lo + 2) * UNIT + 2 * MARGIN + 90;
    let sx = |s: i64| MARGIN + (s - s_lo + 1) * UNIT;
    let wy = |w: i64| height - 90 - MARGIN - (w - w_lo + 1) * UNIT;

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(svg, "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>").unwrap();
    // Dashed axes through (0, 0) when visible, else along the chart edge.
    let axis_y = wy(0i64.clamp(w_lo, w_hi));
    let axis_x = sx(0i64.clamp(s_lo, s_hi));
    writeln!(
        svg,
        "  <line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"black\" stroke-dasharray=\"4 3\"/>",
        x1 = sx(s_lo) - UNIT,
        x2 = sx(s_hi) + UNIT,
        y = axis_y
    )
    .unwrap();
    writeln!(
        svg,
        "  <line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"black\" stroke-dasharray=\"4 3\"/>",
        x = axis_x,
        y1 = wy(w_hi) - UNIT,
        y2 = wy(w_lo) + UNIT
    )
    .unwrap();
    writeln!(
        svg,
        "  <text x=\"{x}\" y=\"{y}\" font-size=\"12\">s</text>",
        x = sx(s_hi) + UNIT + 4,
        y = axis_y + 4
    )
    .unwrap();
    writeln!(
        svg,
        "  <text x=\"{x}\" y=\"{y}\" font-size=\"12\">w</text>",
        x = axis_x - 4,
        y = wy(w_hi) - UNIT - 4
    )
    .unwrap();
    // Axis ticks every 2 units.
    let mut s_tick = s_lo - s_lo.rem_euclid(2);
    while s_tick <= s_hi {
        if s_tick != 0 {
            writeln!(
                svg,
                "  <text x=\"{x}\" y=\"{y}\" font-size=\"9\" text-anchor=\"middle\" fill=\"gray\">{s_tick}</text>",
                x = sx(s_tick),
                y = axis_y + 14
            )
            .unwrap();
        }
        s_tick += 2;
    }
    let mut w_tick = w_lo - w_lo.rem_euclid(2);
    while w_tick <= w_hi {
        if w_tick != 0 {
            writeln!(
                svg,
                "  <text x=\"{x}\" y=\"{y}\" font-size=\"9\" text-anchor=\"end\" fill=\"gray\">{w_tick}</text>",
                x = axis_x - 6,
                y = wy(w_tick) + 3
            )
            .unwrap();
        }
        w_tick += 2;
    }
    for cell in chart.cells.values() {
        let (x, y) = (sx(cell.s), wy(cell.w));
        let title = format!("({}, {}) {} {}", cell.s, cell.w, cell.group, cell.label);
        let shape = glyph_svg(cell.glyph, x, y);
        writeln!(svg, "  <g>{shape}<title>{}</title></g>", xml_escape(&title)).unwrap();
    }
    // Legend block.
    let legend = [
        (Glyph::F2Dot, "F2"),
        (Glyph::ZSquare, "Z"),
        (Glyph::BurnsideSquare, "A(C2)"),
        (Glyph::BlueDot, "permanent cycle"),
        (Glyph::RedDot, "supports differential"),
        (Glyph::HollowCircle, "dies earlier"),
    ];
    let ly = height - 80;
    writeln!(svg, "  <text x=\"{MARGIN}\" y=\"{ly}\" font-size=\"11\">legend:</text>").unwrap();
    for (i, (g, desc)) in legend.iter().enumerate() {
        let x = MARGIN + 10 + (i as i64 % 3) * 170;
        let y = ly + 16 + (i as i64 / 3) * 20;
        writeln!(
            svg,
            "  <g>{}<text x=\"{tx}\" y=\"{ty}\" font-size=\"10\">{desc}</text></g>",
            glyph_svg(*g, x, y - 3),
            tx = x + 10,
            ty = y
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg.into_bytes())
}

fn glyph_svg(glyph: Glyph, x: i64, y: i64) -> String {
    match glyph {
        Glyph::F2Dot => format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"black\"/>"),
        Glyph::BlueDot => format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"blue\"/>"),
        Glyph::RedDot => format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"red\"/>"),
        Glyph::HollowCircle => {
            format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"none\" stroke=\"gray\"/>")
        }
        Glyph::ZSquare => format!(
            "<rect x=\"{}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"blue\"/>",
            x - 4,
            y - 4
        ),
        Glyph::BurnsideSquare => format!(
            "<rect x=\"{}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"blue\"/>",
            x - 4,
            y - 4
        ),
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Store a chart in a cache directory. The file records the Lambda
/// convention fingerprint and a content checksum; writes are atomic
/// (temp file + rename).
pub fn cache_store(dir: &Path, key: &str, chart: &Chart) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let body = emit_tsv(chart);
    let convention = crate::lambda::convention_fingerprint();
    let content = format!("{:x}", Sha256::digest(&body));
    let mut file = String::new();
    writeln!(file, "c2ext-chart-cache v1").unwrap();
    writeln!(file, "key {key}").unwrap();
    writeln!(file, "convention {convention}").unwrap();
    writeln!(file, "content {content}").unwrap();
    file.push('\n');
    file.push_str(std::str::from_utf8(&body).expect("tsv is utf-8"));
    let path = dir.join(format!("{}.tsv", sanitize_key(key)));
    let tmp = dir.join(format!(".{}.tmp", sanitize_key(key)));
    std::fs::write(&tmp, file)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load a chart from the cache; checksum or convention mismatch rejects the
/// file so callers recompute.
pub fn cache_load(dir: &Path, key: &str) -> Result<Chart> {
    let path = dir.join(format!("{}.tsv", sanitize_key(key)));
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::CacheRejected(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let magic = lines.next().unwrap_or_default();
    if magic != "c2ext-chart-cache v1" {
        return Err(Error::CacheRejected("bad magic".into()));
    }
    let key_line = lines.next().unwrap_or_default();
    if key_line != format!("key {key}") {
        return Err(Error::CacheRejected("key mismatch".into()));
    }
    let conv_line = lines.next().unwrap_or_default();
    let expect_conv = format!("convention {}", crate::lambda::convention_fingerprint());
    if conv_line != expect_conv {
        return Err(Error::CacheRejected("convention checksum mismatch".into()));
    }
    let content_line = lines.next().unwrap_or_default();
    let stored_hash = content_line
        .strip_prefix("content ")
        .ok_or_else(|| Error::CacheRejected("missing content checksum".into()))?;
    let blank = lines.next().unwrap_or_default();
    if !blank.is_empty() {
        return Err(Error::CacheRejected("missing separator".into()));
    }
    let header_len: usize = text
        .lines()
        .take(5)
        .map(|l| l.len() + 1)
        .sum();
    let body = &text[header_len..];
    let actual = format!("{:x}", Sha256::digest(body.as_bytes()));
    if actual != stored_hash {
        return Err(Error::CacheRejected("content checksum mismatch".into()));
    }
    parse_tsv_chart(body)
}

fn sanitize_key(key: &str) -> String {
    key.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

/// Parse the TSV serialization back into a chart (glyphs are not stored;
/// cached charts are data charts).
pub fn parse_tsv_chart(text: &str) -> Result<Chart> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "s\tw\tgroup\tlabel\tfate" {
        return Err(Error::Parse(format!("bad chart header {header:?}")));
    }
    let mut chart = Chart::default();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!("bad chart row {line:?}")));
        }
        let s: i64 = fields[0].parse().map_err(|_| Error::Parse("bad s".into()))?;
        let w: i64 = fields[1].parse().map_err(|_| Error::Parse("bad w".into()))?;
        chart.insert(ChartCell {
            s,
            w,
            glyph: Glyph::F2Dot,
            group: fields[2].to_string(),
            label: fields[3].to_string(),
            fate: fields[4].to_string(),
        });
    }
    Ok(chart)
}
