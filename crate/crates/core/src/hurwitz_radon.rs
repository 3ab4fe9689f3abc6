#![allow(clippy::needless_range_loop)] // matrix loops index two sides at once
//! Exact Hurwitz-Radon matrix families, tangent frames on spheres, and the
//! equivariant quadratic map with its norm identity.
//!
//! On R^(2^e) the maximal anticommuting family of signed-permutation complex
//! structures is built from 2x2 blocks by tensor recursion: octonion-style
//! doubling up to e = 3, then the period-4 step that adjoins the volume
//! element of the eight structures on R^16. Replicating block-diagonally
//! over the odd part reaches every m = (2a+1) 2^e with the full
//! psi(m) - 1 matrices.

use crate::arith::psi_i64;
use crate::{Error, Result};
use num::{BigRational, Zero};

/// A square integer matrix with entries in {-1, 0, 1} and exactly one
/// nonzero entry in every row and column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedMatrix {
    dim: usize,
    entries: Vec<i8>, // row-major
}

impl SignedMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = SignedMatrix {
            dim,
            entries: vec![0; dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.dim + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i8) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn from_entries(dim: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::domain("entry count does not match dimension"));
        }
        Ok(SignedMatrix { dim, entries })
    }

    /// Is this a signed permutation (one nonzero entry per row and column,
    /// entries in {-1,0,1})?
    pub fn is_signed_permutation(&self) -> bool {
        let n = self.dim;
        let mut col_seen = vec![false; n];
        for r in 0..n {
            let mut row_count = 0;
            for c in 0..n {
                match self.entry(r, c) {
                    0 => {}
                    1 | -1 => {
                        row_count += 1;
                        if col_seen[c] {
                            return false;
                        }
                        col_seen[c] = true;
                    }
                    _ => return false,
                }
            }
            if row_count != 1 {
                return false;
            }
        }
        true
    }

    pub fn mul(&self, other: &SignedMatrix) -> SignedMatrix {
        let n = self.dim;
        debug_assert_eq!(n, other.dim);
        let mut out = SignedMatrix {
            dim: n,
            entries: vec![0; n * n],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.entry(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let b = other.entry(k, c);
                    if b != 0 {
                        out.entries[r * n + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SignedMatrix {
        let n = self.dim;
        let mut out = SignedMatrix {
            dim: n,
            entries: vec![0; n * n],
        };
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entry(r, c);
            }
        }
        out
    }

    pub fn neg(&self) -> SignedMatrix {
        SignedMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| -e).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == SignedMatrix::identity(self.dim)
    }

    pub fn is_neg_identity(&self) -> bool {
        *self == SignedMatrix::identity(self.dim).neg()
    }

    /// Kronecker product.
    pub fn tensor(&self, other: &SignedMatrix) -> SignedMatrix {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = SignedMatrix {
            dim,
            entries: vec![0; dim * dim],
        };
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.entry(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        let b = other.entry(r2, c2);
                        if b != 0 {
                            out.set(r1 * m + r2, c1 * m + c2, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal replication: copies of self down the diagonal.
    pub fn replicate(&self, copies: usize) -> SignedMatrix {
        let n = self.dim;
        let dim = n * copies;
        let mut out = SignedMatrix {
            dim,
            entries: vec![0; dim * dim],
        };
        for k in 0..copies {
            for r in 0..n {
                for c in 0..n {
                    let v = self.entry(r, c);
                    if v != 0 {
                        out.set(k * n + r, k * n + c, v);
                    }
                }
            }
        }
        out
    }

    /// Apply to a rational vector.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim;
        debug_assert_eq!(v.len(), n);
        let mut out = vec![BigRational::zero(); n];
        for r in 0..n {
            for c in 0..n {
                match self.entry(r, c) {
                    0 => {}
                    1 => out[r] += &v[c],
                    _ => out[r] -= &v[c],
                }
            }
        }
        out
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for r in 0..n {
            for c in 0..n {
                match self.entry(r, c) {
                    0 => {}
                    1 => out[r] += v[c],
                    _ => out[r] -= v[c],
                }
            }
        }
        out
    }

    /// Plain-text export: one row per line, entries space-separated.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if c > 0 {
                    s.push(' ');
                }
                s.push_str(&self.entry(r, c).to_string());
            }
            s.push('\n');
        }
        s
    }
}

// 2x2 building blocks.
fn block_i() -> SignedMatrix {
    SignedMatrix::from_entries(2, vec![1, 0, 0, 1]).unwrap()
}
fn block_j() -> SignedMatrix {
    SignedMatrix::from_entries(2, vec![0, -1, 1, 0]).unwrap()
}
fn block_k() -> SignedMatrix {
    SignedMatrix::from_entries(2, vec![0, 1, 1, 0]).unwrap()
}
fn block_l() -> SignedMatrix {
    SignedMatrix::from_entries(2, vec![1, 0, 0, -1]).unwrap()
}

/// Maximal anticommuting family of complex structures on R^(2^e), of size
/// psi(2^e) - 1, all signed permutations.
fn power_of_two_family(e: u32) -> Vec<SignedMatrix> {
    match e {
        0 => Vec::new(),
        1 => vec![block_j()],
        2 => {
            // Quaternion left multiplications.
            vec![
                block_j().tensor(&block_i()),
                block_k().tensor(&block_j()),
                block_l().tensor(&block_j()),
            ]
        }
        3 => {
            // Left quaternions tensored in, plus right quaternions through
            // the commuting factor: 1 + 3 + 3 = 7 structures.
            let left = power_of_two_family(2);
            // Right multiplications commute with the left ones.
            let right = vec![
                block_i().tensor(&block_j()),
                block_j().tensor(&block_k()),
                block_j().tensor(&block_l()),
            ];
            let mut fam = vec![block_j().tensor(&SignedMatrix::identity(4))];
            for a in left {
                fam.push(block_k().tensor(&a));
            }
            for c in right {
                fam.push(block_l().tensor(&c));
            }
            fam
        }
        _ => {
            // Period 4: eight structures on R^16 plus volume (x) previous.
            let e16 = power_of_two_family(3)
                .into_iter()
                .map(|a| block_k().tensor(&a))
                .chain(std::iter::once(block_j().tensor(&SignedMatrix::identity(8))))
                .collect::<Vec<_>>();
            let omega = e16
                .iter()
                .fold(SignedMatrix::identity(16), |acc, a| acc.mul(a));
            let prev = power_of_two_family(e - 4);
            let lower_dim = 1usize << (e - 4);
            let mut fam: Vec<SignedMatrix> = e16
                .iter()
                .map(|a| a.tensor(&SignedMatrix::identity(lower_dim)))
                .collect();
            for a in prev {
                fam.push(omega.tensor(&a));
            }
            fam
        }
    }
}

/// The Hurwitz-Radon family on R^m: psi(m) - 1 signed permutation matrices
/// with A_i^2 = -I and A_i A_j = -A_j A_i.
pub fn hurwitz_radon_family(m: usize) -> Result<Vec<SignedMatrix>> {
    if m == 0 {
        return Err(Error::domain("hurwitz_radon_family requires m >= 1"));
    }
    if m > 16384 {
        return Err(Error::range(format!(
            "family on R^{m} exceeds the dense-matrix resource limit"
        )));
    }
    let e = (m as u64).trailing_zeros();
    let odd = m >> e;
    Ok(power_of_two_family(e)
        .into_iter()
        .map(|a| a.replicate(odd))
        .collect())
}

/// Verification report for a family of candidate Hurwitz-Radon matrices.
#[derive(Debug, Default, Clone)]
pub struct FamilyReport {
    pub violations: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact integer verification: signed-permutation shape, orthogonality,
/// A_i^2 = -I, pairwise anticommutation, and skewness.
pub fn verify_family(family: &[SignedMatrix]) -> FamilyReport {
    let mut report = FamilyReport::default();
    for (i, a) in family.iter().enumerate() {
        if !a.is_signed_permutation() {
            report.violations.push(format!("A_{i} is not a signed permutation"));
        }
        if !a.transpose().mul(a).is_identity() {
            report.violations.push(format!("A_{i}^T A_{i} != I"));
        }
        if !a.mul(a).is_neg_identity() {
            report.violations.push(format!("A_{i}^2 != -I"));
        }
        if a.transpose() != a.neg() {
            report.violations.push(format!("A_{i}^T != -A_{i}"));
        }
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            let mut anti = a.mul(b);
            let ba = b.mul(a);
            for (x, y) in anti.entries.iter_mut().zip(ba.entries.iter()) {
                *x += *y;
            }
            if anti.entries.iter().any(|&x| x != 0) {
                report.violations.push(format!("A_{i} A_{j} + A_{j} A_{i} != 0"));
            }
        }
    }
    report
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The tangent frame v -> (A_1 v, ..., A_k v) on S^n at a rational point.
pub fn tangent_frame(n: usize, v: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    if v.len() != n + 1 {
        return Err(Error::domain(format!(
            "point dimension {} does not match sphere dimension {n}",
            v.len()
        )));
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::domain("tangent frame is undefined at the origin"));
    }
    let fam = hurwitz_radon_family(n + 1)?;
    Ok(fam.iter().map(|a| a.apply(v)).collect())
}

/// Data of the equivariant quadratic map built from a Hurwitz-Radon family:
/// f(v, x_0..x_k) = (2 sum x_i A_i v, sum x_i^2 - |v|^2), with A_0 = I.
#[derive(Clone, Debug)]
pub struct QuadraticMapSpec {
    pub n: usize,
    pub k: usize,
    matrices: Vec<SignedMatrix>,
}

impl QuadraticMapSpec {
    /// Build the map for S^n with k fields. Construction is refused above
    /// the Radon-Hurwitz bound k = psi(n+1) - 1.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let bound = psi_i64((n + 1) as i64)? as usize - 1;
        if k > bound {
            return Err(Error::domain(format!(
                "no such family: k = {k} exceeds psi({}) - 1 = {bound}",
                n + 1
            )));
        }
        let matrices = hurwitz_radon_family(n + 1)?.into_iter().take(k).collect();
        Ok(QuadraticMapSpec { n, k, matrices })
    }

    pub fn matrices(&self) -> &[SignedMatrix] {
        &self.matrices
    }

    /// Domain dimension n + k + 2 (the sign-representation coordinates).
    pub fn domain_dim(&self) -> usize {
        self.n + self.k + 2
    }

    /// Exact evaluation at rational (v, x_0..x_k); output in R^(n+2).
    pub fn eval(&self, v: &[BigRational], xs: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.n + 1 || xs.len() != self.k + 1 {
            return Err(Error::domain(format!(
                "expected |v| = {} and |xs| = {}, got {} and {}",
                self.n + 1,
                self.k + 1,
                v.len(),
                xs.len()
            )));
        }
        let two = BigRational::from_integer(2.into());
        let mut spatial = vec![BigRational::zero(); self.n + 1];
        for (i, x) in xs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let av = if i == 0 {
                v.to_vec()
            } else {
                self.matrices[i - 1].apply(v)
            };
            for (s, a) in spatial.iter_mut().zip(av) {
                *s += x * a;
            }
        }
        let mut out: Vec<BigRational> = spatial.into_iter().map(|s| &two * s).collect();
        let xs_sq: BigRational = xs.iter().map(|x| x * x).sum();
        let v_sq = dot(v, v);
        out.push(xs_sq - v_sq);
        Ok(out)
    }

    /// Floating-point evaluation, for round trips through the inverse.
    pub fn eval_f64(&self, v: &[f64], xs: &[f64]) -> Vec<f64> {
        let mut spatial = vec![0.0; self.n + 1];
        for (i, &x) in xs.iter().enumerate() {
            let av = if i == 0 {
                v.to_vec()
            } else {
                self.matrices[i - 1].apply_f64(v)
            };
            for (s, a) in spatial.iter_mut().zip(av) {
                *s += x * a;
            }
        }
        let mut out: Vec<f64> = spatial.into_iter().map(|s| 2.0 * s).collect();
        let xs_sq: f64 = xs.iter().map(|x| x * x).sum();
        let v_sq: f64 = v.iter().map(|x| x * x).sum();
        out.push(xs_sq - v_sq);
        out
    }

    /// Inverse of the top-cell bijection: (u, y) on S^(n+1) away from the
    /// pole (0, -1) pulls back to (u/sqrt(2+2y), sqrt((1+y)/2), 0, ..., 0).
    pub fn top_cell_inverse(&self, u: &[f64], y: f64) -> Result<Vec<f64>> {
        if u.len() != self.n + 1 {
            return Err(Error::domain(format!(
                "expected |u| = {}, got {}",
                self.n + 1,
                u.len()
            )));
        }
        if (y + 1.0).abs() < 1e-12 {
            return Err(Error::domain("pole singularity: y = -1"));
        }
        let denom = (2.0 + 2.0 * y).sqrt();
        let mut out: Vec<f64> = u.iter().map(|&c| c / denom).collect();
        out.push(((1.0 + y) / 2.0).sqrt());
        out.extend(std::iter::repeat_n(0.0, self.k));
        Ok(out)
    }
}
