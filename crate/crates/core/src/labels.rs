//! Canonical textual labels for coefficient-ring and homotopy generators.
//!
//! Grammar (ASCII, stable across releases; chart emitters and tests rely on
//! byte-exact round-tripping):
//!
//! ```text
//! label     := "0" | "1, [C2]" | [coeff " "] base
//! coeff     := "2" | "2^" exp                      (2^0 and 2^1 collapse)
//! base      := "1" | "rho" pow | "tau" pow | "eta" ("/rho" pow)? | theta
//! theta     := "theta" | "theta/rho" pow | "theta/tau" pow
//!            | "theta/(rho" pow " tau" pow ")"
//! pow       := "" | "^" exp                        (exponent 1 is implicit)
//! ```

use crate::{Error, Result};
use std::fmt;

/// A parsed generator label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Label {
    Zero,
    /// The Burnside-ring basis {1, [C2]}.
    BurnsidePair,
    /// coefficient 2^e times a base generator.
    Scaled(u64, Base),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Base {
    One,
    Rho(u64),
    Tau(u64),
    /// rho^i tau^j, a positive-cone monomial (collapses to the forms above
    /// when an exponent vanishes).
    RhoTau(u64, u64),
    /// eta / rho^j
    EtaOverRho(u64),
    /// theta / (rho^a tau^b)
    Theta(u64, u64),
}

impl Base {
    /// Collapse RhoTau with a vanishing exponent to the canonical pure form.
    pub fn normalize(self) -> Base {
        match self {
            Base::RhoTau(0, 0) => Base::One,
            Base::RhoTau(i, 0) => Base::Rho(i),
            Base::RhoTau(0, j) => Base::Tau(j),
            other => other,
        }
    }
}

impl Label {
    pub fn plain(base: Base) -> Self {
        Label::Scaled(0, base)
    }
}

fn write_pow(f: &mut fmt::Formatter<'_>, name: &str, e: u64) -> fmt::Result {
    match e {
        1 => write!(f, "{name}"),
        _ => write!(f, "{name}^{e}"),
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Zero => write!(f, "0"),
            Label::BurnsidePair => write!(f, "1, [C2]"),
            Label::Scaled(e, base) => {
                match e {
                    0 => {}
                    1 => write!(f, "2 ")?,
                    _ => write!(f, "2^{e} ")?,
                }
                match base.clone().normalize() {
                    Base::One => write!(f, "1"),
                    Base::Rho(k) => write_pow(f, "rho", k),
                    Base::Tau(k) => write_pow(f, "tau", k),
                    Base::RhoTau(i, j) => {
                        write_pow(f, "rho", i)?;
                        write!(f, " ")?;
                        write_pow(f, "tau", j)
                    }
                    Base::EtaOverRho(0) => write!(f, "eta"),
                    Base::EtaOverRho(j) => {
                        write!(f, "eta/")?;
                        write_pow(f, "rho", j)
                    }
                    Base::Theta(0, 0) => write!(f, "theta"),
                    Base::Theta(a, 0) => {
                        write!(f, "theta/")?;
                        write_pow(f, "rho", a)
                    }
                    Base::Theta(0, b) => {
                        write!(f, "theta/")?;
                        write_pow(f, "tau", b)
                    }
                    Base::Theta(a, b) => {
                        write!(f, "theta/(")?;
                        write_pow(f, "rho", a)?;
                        write!(f, " ")?;
                        write_pow(f, "tau", b)?;
                        write!(f, ")")
                    }
                }
            }
        }
    }
}

fn parse_pow<'a>(s: &'a str, name: &str) -> Option<(u64, &'a str)> {
    let rest = s.strip_prefix(name)?;
    if let Some(r) = rest.strip_prefix('^') {
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let e: u64 = r[..end].parse().ok()?;
        Some((e, &r[end..]))
    } else {
        Some((1, rest))
    }
}

/// Parse a canonical label. Inverse of `Display` on canonical output.
pub fn parse_label(s: &str) -> Result<Label> {
    let bad = || Error::Parse(format!("unrecognized generator label: {s:?}"));
    let s = s.trim();
    if s == "0" {
        return Ok(Label::Zero);
    }
    if s == "1, [C2]" {
        return Ok(Label::BurnsidePair);
    }
    // Optional power-of-two coefficient.
    let (coeff, rest) = if let Some(r) = s.strip_prefix("2^") {
        let end = r.find(' ').ok_or_else(bad)?;
        let e: u64 = r[..end].parse().map_err(|_| bad())?;
        (e, r[end + 1..].trim_start())
    } else if let Some(r) = s.strip_prefix("2 ") {
        (1, r.trim_start())
    } else {
        (0, s)
    };
    let base = if rest == "1" {
        Base::One
    } else if rest == "eta" {
        Base::EtaOverRho(0)
    } else if let Some(r) = rest.strip_prefix("eta/") {
        let (j, tail) = parse_pow(r, "rho").ok_or_else(bad)?;
        if !tail.is_empty() {
            return Err(bad());
        }
        Base::EtaOverRho(j)
    } else if rest == "theta" {
        Base::Theta(0, 0)
    } else if let Some(r) = rest.strip_prefix("theta/(") {
        let (a, tail) = parse_pow(r, "rho").ok_or_else(bad)?;
        let tail = tail.strip_prefix(' ').ok_or_else(bad)?;
        let (b, tail) = parse_pow(tail, "tau").ok_or_else(bad)?;
        if tail != ")" {
            return Err(bad());
        }
        Base::Theta(a, b)
    } else if let Some(r) = rest.strip_prefix("theta/") {
        if let Some((a, tail)) = parse_pow(r, "rho") {
            if !tail.is_empty() {
                return Err(bad());
            }
            Base::Theta(a, 0)
        } else if let Some((b, tail)) = parse_pow(r, "tau") {
            if !tail.is_empty() {
                return Err(bad());
            }
            Base::Theta(0, b)
        } else {
            return Err(bad());
        }
    } else if let Some((k, tail)) = parse_pow(rest, "rho") {
        if let Some(t2) = tail.strip_prefix(' ') {
            let (j, t3) = parse_pow(t2, "tau").ok_or_else(bad)?;
            if !t3.is_empty() {
                return Err(bad());
            }
            Base::RhoTau(k, j)
        } else if tail.is_empty() {
            Base::Rho(k)
        } else {
            return Err(bad());
        }
    } else if let Some((k, tail)) = parse_pow(rest, "tau") {
        if !tail.is_empty() {
            return Err(bad());
        }
        Base::Tau(k)
    } else {
        return Err(bad());
    };
    Ok(Label::Scaled(coeff, base))
}

/// Canonical label for theta/(rho^a tau^b).
pub fn theta_label(a: u64, b: u64) -> String {
    Label::plain(Base::Theta(a, b)).to_string()
}
