//! Command-line front end: chart builders, subcommand dispatch and exit
//! codes (0 success, 2 domain error, 3 range/resource error, 64 usage).

use crate::chart::{emit_svg, emit_tsv, group_name, Chart, ChartCell, Glyph};
use crate::classification::{
    classify_fil0, coefficients_ha, coefficients_hf2, coefficients_hz, hurewicz_ha, hurewicz_hf2,
    hurewicz_hz, zero_line, BiDegree, CuratedTable, Fil0Status, GroupKind, Provenance,
};
use crate::hurwitz_radon::{hurwitz_radon_family, tangent_frame, QuadraticMapSpec};
use crate::lambda::{ext_sphere_chart, Ceiling, NameTable};
use crate::stunted::{bottom_cell_splits, ext_stunted_chart, top_cell_splits, StuntedSpectrum};
use crate::{Error, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num::BigRational;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_RANGE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "c2ext",
    about = "RO(C2)-graded charts, Lambda-algebra Ext computations, stunted projective spectra, and Hurwitz-Radon constructions",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "tsv", value_parser = ["tsv", "svg"])]
    format: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    /// Stem range, inclusive: A..B.
    #[arg(long, default_value = "-8..34", allow_hyphen_values = true)]
    s: String,
    /// Weight range, inclusive: A..B.
    #[arg(long, default_value = "-8..40", allow_hyphen_values = true)]
    w: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Radon-Hurwitz numbers over a range of n.
    Psi {
        /// Inclusive range A..B.
        range: String,
        /// Step between consecutive n.
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The zero-line of the genuine equivariant Adams E2-page.
    Zeroline {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Graded Hurewicz image charts.
    Hurewicz {
        /// Which spectrum: hf2, hz or ha.
        which: String,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fate of filtration-0 classes.
    Classify {
        /// Classify one coweight column (s - w <= -2).
        #[arg(long, allow_hyphen_values = true)]
        coweight: Option<i64>,
        #[command(flatten)]
        range: RangeArgs,
        /// Override the curated differential table.
        #[arg(long)]
        curated: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ext chart of the sphere via the Lambda algebra.
    ExtSphere {
        /// Stem range 0..N.
        #[arg(long, default_value = "0..20")]
        stem: String,
        /// Filtration range 0..M.
        #[arg(long, default_value = "0..10")]
        fil: String,
        /// Computation ceiling on stems.
        #[arg(long, default_value_t = 30)]
        ceiling_stem: i64,
        /// Computation ceiling on filtrations.
        #[arg(long, default_value_t = 15)]
        ceiling_fil: i64,
        /// Cache directory (defaults to C2EXT_CACHE_DIR).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ext chart of a stunted projective spectrum RP[a..b] / RP[a..inf].
    ExtStunted {
        /// Spectrum descriptor, e.g. RP[-26..inf].
        spec: String,
        /// Total-stem range A..B.
        #[arg(long, allow_hyphen_values = true)]
        stem: String,
        /// Filtration range 0..M.
        #[arg(long, default_value = "0..8")]
        fil: String,
        /// Cache directory (defaults to C2EXT_CACHE_DIR).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cell-splitting predicates for stunted spectra.
    Splits {
        /// Spectrum descriptor RP[a..b]; reports both cell splittings.
        spec: Option<String>,
        /// Or a range of n: thresholds n - psi(n) for each n in A..B.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tangent vector fields on S^n from the Hurwitz-Radon family.
    Vf {
        /// Sphere dimension n.
        n: usize,
        /// Rational base point, comma-separated (default: first unit vector).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Export the family matrices for R^(n+1) as plain text.
        #[arg(long)]
        matrices_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The equivariant quadratic map: exact evaluation and top-cell inverse.
    Qmap {
        /// Sphere dimension n.
        n: usize,
        /// Number of fields (default psi(n+1) - 1).
        #[arg(long)]
        k: Option<usize>,
        /// Evaluate at a rational point v,xs (n+1 then k+1 coordinates).
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
        /// Invert at a float point u,y on S^(n+1) (n+2 coordinates).
        #[arg(long, allow_hyphen_values = true)]
        invert: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Glyph charts mirroring the coefficient and Hurewicz-image figures.
    Chart {
        /// Chart kind: coefficients | zeroline | hurewicz.
        kind: String,
        /// Spectrum for hurewicz/coefficients charts: hf2, hz or ha.
        which: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        /// Override the curated differential table.
        #[arg(long)]
        curated: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::domain(format!("bad range {s:?}; expected A..B")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("bad range bound {lo:?}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("bad range bound {hi:?}")))?;
    if lo > hi {
        return Err(Error::domain(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn parse_rationals(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let parse_int = |x: &str| {
                x.parse::<num::BigInt>()
                    .map_err(|_| Error::domain(format!("bad rational {t:?}")))
            };
            if let Some((n, d)) = t.split_once('/') {
                Ok(BigRational::new(parse_int(n)?, parse_int(d)?))
            } else {
                Ok(BigRational::from_integer(parse_int(t)?))
            }
        })
        .collect()
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad float {t:?}")))
        })
        .collect()
}

fn check_area(s_range: (i64, i64), w_range: (i64, i64)) -> Result<()> {
    let cells = (s_range.1 - s_range.0 + 1).saturating_mul(w_range.1 - w_range.0 + 1);
    if cells > 4_000_000 {
        return Err(Error::range(format!("chart window of {cells} cells exceeds the resource limit")));
    }
    Ok(())
}

fn fate_string(deg: BiDegree, curated: &CuratedTable) -> String {
    let fate = classify_fil0(deg, curated);
    match fate.status {
        Fil0Status::NotPresent => "not-present".to_string(),
        Fil0Status::PermanentCycle => "permanent".to_string(),
        Fil0Status::SupportsDifferential => {
            let prov = match fate.provenance {
                Provenance::EdgeRule => "edge-rule",
                Provenance::LongestDiffTheorem => "longest-diff",
                Provenance::CuratedExample => "curated",
                Provenance::Unknown => "unknown",
            };
            let mut s = match fate.known_length {
                Some(r) => format!("d{r}[{prov}]"),
                None => format!("d?[{prov}]"),
            };
            if let Some(t) = fate.known_target_label {
                write!(s, "->{t}").unwrap();
            }
            s
        }
    }
}

/// Chart of the coefficient groups of one of the three spectra.
pub fn coefficients_chart(which: &str, s_range: (i64, i64), w_range: (i64, i64)) -> Result<Chart> {
    check_area(s_range, w_range)?;
    let mut chart = Chart::default();
    for s in s_range.0..=s_range.1 {
        for w in w_range.0..=w_range.1 {
            let deg = BiDegree::new(s, w);
            match which {
                "hf2" => {
                    let v = coefficients_hf2(deg);
                    if !v.is_zero() {
                        chart.insert(ChartCell {
                            s,
                            w,
                            glyph: Glyph::F2Dot,
                            group: group_name(v.kind).to_string(),
                            label: v.generator_label,
                            fate: String::new(),
                        });
                    }
                }
                "hz" | "ha" => {
                    let kind = if which == "hz" {
                        coefficients_hz(deg)
                    } else {
                        coefficients_ha(deg)
                    };
                    if kind != GroupKind::Zero {
                        let glyph = match kind {
                            GroupKind::F2 => Glyph::F2Dot,
                            GroupKind::Z => Glyph::ZSquare,
                            GroupKind::BurnsideRing => Glyph::BurnsideSquare,
                            GroupKind::Zero => unreachable!(),
                        };
                        chart.insert(ChartCell {
                            s,
                            w,
                            glyph,
                            group: group_name(kind).to_string(),
                            label: String::new(),
                            fate: String::new(),
                        });
                    }
                }
                other => return Err(Error::domain(format!("unknown spectrum {other:?}"))),
            }
        }
    }
    Ok(chart)
}

/// Chart of the zero-line classes.
pub fn zeroline_chart(s_range: (i64, i64), w_range: (i64, i64)) -> Result<Chart> {
    check_area(s_range, w_range)?;
    let mut chart = Chart::default();
    for s in s_range.0..=s_range.1 {
        for w in w_range.0..=w_range.1 {
            let v = zero_line(BiDegree::new(s, w));
            if !v.is_zero() {
                chart.insert(ChartCell {
                    s,
                    w,
                    glyph: Glyph::F2Dot,
                    group: group_name(v.kind).to_string(),
                    label: v.generator_label,
                    fate: String::new(),
                });
            }
        }
    }
    Ok(chart)
}

/// Hurewicz-image chart with the figure glyph conventions: blue for image
/// classes, red for zero-line classes supporting differentials, hollow for
/// nonzero coefficient groups outside the image.
pub fn hurewicz_chart(
    which: &str,
    s_range: (i64, i64),
    w_range: (i64, i64),
    curated: &CuratedTable,
) -> Result<Chart> {
    check_area(s_range, w_range)?;
    let mut chart = Chart::default();
    for s in s_range.0..=s_range.1 {
        for w in w_range.0..=w_range.1 {
            let deg = BiDegree::new(s, w);
            let cell = match which {
                "hf2" => {
                    let img = hurewicz_hf2(deg);
                    if !img.is_zero() {
                        Some(ChartCell {
                            s,
                            w,
                            glyph: if s >= 0 { Glyph::BlueDot } else { Glyph::F2Dot },
                            group: group_name(img.kind).to_string(),
                            label: img.generator_label,
                            fate: "permanent".to_string(),
                        })
                    } else {
                        let fate = classify_fil0(deg, curated);
                        if fate.status == Fil0Status::SupportsDifferential {
                            let zl = zero_line(deg);
                            Some(ChartCell {
                                s,
                                w,
                                glyph: Glyph::RedDot,
                                group: group_name(zl.kind).to_string(),
                                label: zl.generator_label,
                                fate: fate_string(deg, curated),
                            })
                        } else {
                            let coeff = coefficients_hf2(deg);
                            if !coeff.is_zero() {
                                let negative_cone = s >= 0 && w >= s + 2;
                                Some(ChartCell {
                                    s,
                                    w,
                                    glyph: if negative_cone {
                                        Glyph::HollowCircle
                                    } else {
                                        Glyph::F2Dot
                                    },
                                    group: group_name(coeff.kind).to_string(),
                                    label: coeff.generator_label,
                                    fate: if negative_cone {
                                        "not-present".to_string()
                                    } else {
                                        String::new()
                                    },
                                })
                            } else {
                                None
                            }
                        }
                    }
                }
                "hz" | "ha" => {
                    let img = if which == "hz" { hurewicz_hz(deg) } else { hurewicz_ha(deg) };
                    let coeff = if which == "hz" {
                        coefficients_hz(deg)
                    } else {
                        coefficients_ha(deg)
                    };
                    if !img.is_zero() {
                        let glyph = match img.kind {
                            GroupKind::F2 => Glyph::BlueDot,
                            GroupKind::Z => Glyph::ZSquare,
                            GroupKind::BurnsideRing => Glyph::BurnsideSquare,
                            GroupKind::Zero => unreachable!(),
                        };
                        Some(ChartCell {
                            s,
                            w,
                            glyph,
                            group: group_name(img.kind).to_string(),
                            label: img.generator_label,
                            fate: "in-image".to_string(),
                        })
                    } else if coeff != GroupKind::Zero {
                        Some(ChartCell {
                            s,
                            w,
                            glyph: Glyph::HollowCircle,
                            group: group_name(coeff).to_string(),
                            label: String::new(),
                            fate: "not-in-image".to_string(),
                        })
                    } else {
                        None
                    }
                }
                other => return Err(Error::domain(format!("unknown spectrum {other:?}"))),
            };
            if let Some(c) = cell {
                chart.insert(c);
            }
        }
    }
    Ok(chart)
}

/// Classification chart: one row per zero-line class in range.
pub fn classify_chart(
    coweight: Option<i64>,
    s_range: (i64, i64),
    w_range: (i64, i64),
    curated: &CuratedTable,
) -> Result<Chart> {
    let mut chart = Chart::default();
    let mut push = |deg: BiDegree| {
        let zl = zero_line(deg);
        if zl.is_zero() {
            return;
        }
        chart.insert(ChartCell {
            s: deg.s,
            w: deg.w,
            glyph: match classify_fil0(deg, curated).status {
                Fil0Status::PermanentCycle => Glyph::BlueDot,
                Fil0Status::SupportsDifferential => Glyph::RedDot,
                Fil0Status::NotPresent => Glyph::HollowCircle,
            },
            group: group_name(zl.kind).to_string(),
            label: zl.generator_label,
            fate: fate_string(deg, curated),
        });
    };
    match coweight {
        Some(cw) => {
            if cw <= -2 {
                let n = -cw - 1;
                let v = crate::arith::v2_i64(n)?;
                if v > 21 {
                    return Err(Error::range(format!(
                        "coweight {cw} carries 2^{v} zero-line classes; listing limit is 2^21"
                    )));
                }
                let top = 1i64 << v;
                for s in 0..top {
                    push(BiDegree::new(s, s - cw));
                }
            }
            // Coweights above -2 carry no negative-cone classes: empty chart.
        }
        None => {
            check_area(s_range, w_range)?;
            for s in s_range.0..=s_range.1 {
                for w in w_range.0..=w_range.1 {
                    push(BiDegree::new(s, w));
                }
            }
        }
    }
    Ok(chart)
}

fn load_curated(path: &Option<PathBuf>) -> Result<CuratedTable> {
    match path {
        Some(p) => CuratedTable::parse(&std::fs::read_to_string(p)?),
        None => Ok(CuratedTable::builtin()),
    }
}

fn write_output(output: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            Ok(())
        }
        None => match std::io::stdout().write_all(bytes) {
            // A closed pipe downstream is not our error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => Ok(other?),
        },
    }
}

fn emit_chart(chart: &Chart, output: &OutputArgs) -> Result<()> {
    let bytes = match output.format.as_str() {
        "svg" => emit_svg(chart)?,
        _ => emit_tsv(chart),
    };
    write_output(output, &bytes)
}

fn cache_dir(flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone()
        .or_else(|| std::env::var_os("C2EXT_CACHE_DIR").map(PathBuf::from))
}

fn chart_with_cache<F: FnOnce() -> Result<Chart>>(
    cache: Option<PathBuf>,
    key: &str,
    compute: F,
) -> Result<Chart> {
    if let Some(dir) = &cache {
        if let Ok(chart) = crate::chart::cache_load(dir, key) {
            return Ok(chart);
        }
    }
    let chart = compute()?;
    if let Some(dir) = &cache {
        crate::chart::cache_store(dir, key, &chart)?;
    }
    Ok(chart)
}

fn run_cmd(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Psi { range, step, output } => {
            let (lo, hi) = parse_range(&range)?;
            if lo < 1 {
                return Err(Error::domain("psi requires n >= 1"));
            }
            if step == 0 {
                return Err(Error::domain("step must be positive"));
            }
            let mut text = String::from("n\tpsi\n");
            let mut n = lo;
            while n <= hi {
                writeln!(text, "{n}\t{}", crate::arith::psi_i64(n)?).unwrap();
                n += step as i64;
            }
            write_output(&output, text.as_bytes())
        }
        Cmd::Zeroline { range, output } => {
            let chart = zeroline_chart(parse_range(&range.s)?, parse_range(&range.w)?)?;
            emit_chart(&chart, &output)
        }
        Cmd::Hurewicz { which, range, output } => {
            let chart = hurewicz_chart(
                &which,
                parse_range(&range.s)?,
                parse_range(&range.w)?,
                &CuratedTable::builtin(),
            )?;
            emit_chart(&chart, &output)
        }
        Cmd::Classify {
            coweight,
            range,
            curated,
            output,
        } => {
            let table = load_curated(&curated)?;
            let chart = classify_chart(
                coweight,
                parse_range(&range.s)?,
                parse_range(&range.w)?,
                &table,
            )?;
            emit_chart(&chart, &output)
        }
        Cmd::ExtSphere {
            stem,
            fil,
            ceiling_stem,
            ceiling_fil,
            cache,
            output,
        } => {
            let (slo, shi) = parse_range(&stem)?;
            let (flo, fhi) = parse_range(&fil)?;
            if slo != 0 || flo != 0 {
                return Err(Error::domain("ext-sphere ranges start at 0"));
            }
            let ceiling = Ceiling {
                max_stem: ceiling_stem,
                max_fil: ceiling_fil,
            };
            let key = format!("ext-sphere-{shi}-{fhi}");
            let chart = chart_with_cache(cache_dir(&cache), &key, || {
                ext_sphere_chart(shi, fhi, ceiling, &NameTable::builtin())
            })?;
            emit_chart(&chart, &output)
        }
        Cmd::ExtStunted {
            spec,
            stem,
            fil,
            cache,
            output,
        } => {
            let spectrum = StuntedSpectrum::parse(&spec)?;
            let stem_range = parse_range(&stem)?;
            let (flo, fhi) = parse_range(&fil)?;
            if flo != 0 {
                return Err(Error::domain("filtration range starts at 0"));
            }
            let key = format!(
                "ext-stunted-{spectrum}-{}-{}-{fhi}",
                stem_range.0, stem_range.1
            );
            let chart = chart_with_cache(cache_dir(&cache), &key, || {
                ext_stunted_chart(&spectrum, stem_range, fhi, &NameTable::builtin())
            })?;
            emit_chart(&chart, &output)
        }
        Cmd::Splits { spec, n, output } => {
            let mut text = String::new();
            match (spec, n) {
                (Some(desc), _) => {
                    let sp = StuntedSpectrum::parse(&desc)?;
                    let crate::stunted::Top::Cell(top) = sp.top else {
                        return Err(Error::domain("splits requires a finite spectrum"));
                    };
                    text.push_str("spectrum\ttop-splits\tbottom-splits\n");
                    let top_split = top_cell_splits(top + 1, sp.bottom)?;
                    let bottom_split = bottom_cell_splits(sp.bottom, top)?;
                    writeln!(text, "{sp}\t{top_split}\t{bottom_split}").unwrap();
                }
                (None, Some(range)) => {
                    let (lo, hi) = parse_range(&range)?;
                    text.push_str("n\tpsi\tsplit-threshold\n");
                    for n in lo..=hi {
                        if n == 0 {
                            continue;
                        }
                        let p = crate::arith::psi_i64(n.abs())? as i64;
                        writeln!(text, "{n}\t{p}\t{}", n - p).unwrap();
                    }
                }
                (None, None) => {
                    return Err(Error::domain("splits needs a spectrum descriptor or --n range"));
                }
            }
            write_output(&output, text.as_bytes())
        }
        Cmd::Vf {
            n,
            point,
            matrices_out,
            output,
        } => {
            if let Some(path) = &matrices_out {
                let fam = hurwitz_radon_family(n + 1)?;
                let mut text = String::new();
                for (i, a) in fam.iter().enumerate() {
                    if i > 0 {
                        text.push('\n');
                    }
                    text.push_str(&a.to_text());
                }
                std::fs::write(path, text)?;
            }
            let v = match &point {
                Some(p) => parse_rationals(p)?,
                None => {
                    let mut v = vec![BigRational::from_integer(0.into()); n + 1];
                    v[0] = BigRational::from_integer(1.into());
                    v
                }
            };
            let frame = tangent_frame(n, &v)?;
            let mut text = String::new();
            for vec in &frame {
                let row: Vec<String> = vec.iter().map(|c| c.to_string()).collect();
                writeln!(text, "{}", row.join("\t")).unwrap();
            }
            write_output(&output, text.as_bytes())
        }
        Cmd::Qmap {
            n,
            k,
            eval,
            invert,
            output,
        } => {
            let k = match k {
                Some(k) => k,
                None => crate::arith::psi_i64(n as i64 + 1)? as usize - 1,
            };
            let spec = QuadraticMapSpec::new(n, k)?;
            let mut text = String::new();
            match (eval, invert) {
                (Some(p), None) => {
                    let coords = parse_rationals(&p)?;
                    if coords.len() != spec.domain_dim() {
                        return Err(Error::domain(format!(
                            "expected {} coordinates (v then xs), got {}",
                            spec.domain_dim(),
                            coords.len()
                        )));
                    }
                    let out = spec.eval(&coords[..n + 1], &coords[n + 1..])?;
                    let row: Vec<String> = out.iter().map(|c| c.to_string()).collect();
                    writeln!(text, "{}", row.join("\t")).unwrap();
                }
                (None, Some(p)) => {
                    let coords = parse_floats(&p)?;
                    if coords.len() != n + 2 {
                        return Err(Error::domain(format!(
                            "expected {} coordinates (u then y), got {}",
                            n + 2,
                            coords.len()
                        )));
                    }
                    let out = spec.top_cell_inverse(&coords[..n + 1], coords[n + 1])?;
                    let row: Vec<String> = out.iter().map(|c| format!("{c:.12}")).collect();
                    writeln!(text, "{}", row.join("\t")).unwrap();
                }
                _ => {
                    return Err(Error::domain("qmap needs exactly one of --eval or --invert"));
                }
            }
            write_output(&output, text.as_bytes())
        }
        Cmd::Chart {
            kind,
            which,
            range,
            curated,
            output,
        } => {
            let s_range = parse_range(&range.s)?;
            let w_range = parse_range(&range.w)?;
            let chart = match kind.as_str() {
                "coefficients" => {
                    coefficients_chart(which.as_deref().unwrap_or("hf2"), s_range, w_range)?
                }
                "zeroline" => zeroline_chart(s_range, w_range)?,
                "hurewicz" => {
                    let table = load_curated(&curated)?;
                    hurewicz_chart(
                        which.as_deref().ok_or_else(|| {
                            Error::domain("chart hurewicz needs a spectrum: hf2, hz or ha")
                        })?,
                        s_range,
                        w_range,
                        &table,
                    )?
                }
                other => return Err(Error::domain(format!("unknown chart kind {other:?}"))),
            };
            emit_chart(&chart, &output)
        }
    }
}

/// Entry point: parse arguments, dispatch, and map errors to exit codes.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run_cmd(cli.cmd) {
        Ok(()) => EXIT_OK,
        Err(Error::Range(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RANGE
        }
        Err(Error::CacheRejected(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RANGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("c2ext").chain(args.iter().copied()))
    }

    #[test]
    fn classify_coweight_minus17() {
        let table = CuratedTable::builtin();
        let chart = classify_chart(Some(-17), (0, 0), (0, 0), &table).unwrap();
        assert_eq!(chart.len(), 16); // s = 0..15
        let rows: Vec<&ChartCell> = chart.cells.values().collect();
        for cell in &rows {
            if cell.s <= 8 {
                assert_eq!(cell.fate, "permanent", "s={}", cell.s);
            } else {
                assert!(cell.fate.starts_with("d2[curated]"), "s={}", cell.s);
            }
        }
    }

    #[test]
    fn zeroline_small_grid_rows() {
        let chart = zeroline_chart((0, 2), (2, 4)).unwrap();
        let text = String::from_utf8(emit_tsv(&chart)).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(
            rows,
            vec![
                "0\t2\tF2\ttheta\t",
                "0\t3\tF2\ttheta/tau\t",
                "0\t4\tF2\ttheta/tau^2\t",
                "1\t4\tF2\ttheta/(rho tau)\t",
            ]
        );
    }

    #[test]
    fn hurewicz_chart_glyph_invariant() {
        let table = CuratedTable::builtin();
        let chart = hurewicz_chart("hf2", (0, 33), (2, 40), &table).unwrap();
        for cell in chart.cells.values() {
            let deg = BiDegree::new(cell.s, cell.w);
            let blue = !hurewicz_hf2(deg).is_zero() && cell.s >= 0;
            let red =
                classify_fil0(deg, &table).status == Fil0Status::SupportsDifferential;
            let hollow = zero_line(deg).is_zero() && !coefficients_hf2(deg).is_zero();
            match cell.glyph {
                Glyph::BlueDot => assert!(blue),
                Glyph::RedDot => assert!(red),
                Glyph::HollowCircle => assert!(hollow),
                _ => {}
            }
        }
    }

    #[test]
    fn curated_override_changes_classification() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.tsv");
        std::fs::write(&path, "-33\t31\t2\tfabricated[-43]\ttest-v0\n").unwrap();
        let table = load_curated(&Some(path)).unwrap();
        let fate = classify_fil0(BiDegree::new(31, 64), &table);
        assert_eq!(fate.provenance, Provenance::CuratedExample);
        assert_eq!(fate.known_target_label.as_deref(), Some("fabricated[-43]"));
        // The builtin table has no such row: the edge rule applies instead.
        let fate = classify_fil0(BiDegree::new(31, 64), &CuratedTable::builtin());
        assert_eq!(fate.provenance, Provenance::EdgeRule);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["no-such-subcommand"]), EXIT_USAGE);
        assert_eq!(run_args(&["psi", "0..4", "--out", "/dev/null"]), EXIT_DOMAIN);
        assert_eq!(
            run_args(&["ext-sphere", "--stem", "0..40", "--out", "/dev/null"]),
            EXIT_RANGE
        );
        assert_eq!(run_args(&["psi", "2..8", "--out", "/dev/null"]), EXIT_OK);
    }

    #[test]
    fn figure_one_pattern() {
        // Coefficients of the F2 spectrum on -5..5 x -5..7: the positive
        // cone fills s <= 0, w <= s; the negative cone fills s >= 0,
        // w >= s + 2.
        let chart = coefficients_chart("hf2", (-5, 5), (-5, 7)).unwrap();
        for s in -5..=5i64 {
            for w in -5..=7i64 {
                let expect = (s <= 0 && w <= s) || (s >= 0 && w >= s + 2);
                assert_eq!(
                    chart.cells.contains_key(&(w, s)),
                    expect,
                    "({s},{w})"
                );
            }
        }
    }

    #[test]
    fn ext_sphere_cache_roundtrip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let compute = || ext_sphere_chart(10, 6, Ceiling::default(), &NameTable::builtin());
        let key = "ext-sphere-10-6";
        let fresh = emit_tsv(&compute().unwrap());

        // First call stores, second call loads; both agree with a direct
        // computation.
        let a = chart_with_cache(Some(dir.path().to_path_buf()), key, compute).unwrap();
        let b = chart_with_cache(Some(dir.path().to_path_buf()), key, compute).unwrap();
        assert_eq!(emit_tsv(&a), fresh);
        assert_eq!(emit_tsv(&b), fresh);

        // Tampering forces recomputation, after which the cache is valid
        // again.
        let path = dir.path().join(format!("{key}.tsv"));
        std::fs::write(&path, "garbage").unwrap();
        let recomputed = chart_with_cache(Some(dir.path().to_path_buf()), key, compute).unwrap();
        assert_eq!(emit_tsv(&recomputed), fresh);
        let reloaded = crate::chart::cache_load(dir.path(), key).unwrap();
        assert_eq!(emit_tsv(&reloaded), fresh);
    }

    #[test]
    fn svg_ha_chart_carries_figure_labels() {
        let table = CuratedTable::builtin();
        let chart = hurewicz_chart("ha", (-6, 6), (-6, 6), &table).unwrap();
        let svg = String::from_utf8(emit_svg(&chart).unwrap()).unwrap();
        for label in ["eta", "2 eta/rho", "2^2 eta/rho^2", "2^3 eta/rho^3", "rho^4"] {
            assert!(svg.contains(label), "missing {label}");
        }
        assert!(svg.contains("rect")); // squares for the integral classes
    }

    #[test]
    fn ha_chart_diagonal_labels() {
        let table = CuratedTable::builtin();
        let chart = hurewicz_chart("ha", (0, 5), (0, 5), &table).unwrap();
        let labels: Vec<String> = (1..=5)
            .map(|s| chart.cells.get(&(s, s)).unwrap().label.clone())
            .collect();
        assert_eq!(
            labels,
            vec!["eta", "2 eta/rho", "2^2 eta/rho^2", "2^3 eta/rho^3", "2^3 eta/rho^4"]
        );
    }
}
