//! Exact integer combinatorics: 2-adic valuations, Radon–Hurwitz numbers and
//! mod-2 binomial coefficients.
//!
//! Binomials with a negative upper index are evaluated through the 2-adic
//! (two's-complement, infinitely extended) bit expansion; this is exactly the
//! convention that makes the coefficients stable under adding a large power
//! of two to the upper index.

use crate::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigUint, One, Signed, Zero};

/// The decomposition n = (2a+1) * 2^(c+4d) with 0 <= c <= 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonHurwitzDecomposition {
    /// Odd-part cofactor: the odd part of n is 2a+1.
    pub a: BigUint,
    pub c: u8,
    pub d: u64,
}

impl RadonHurwitzDecomposition {
    /// Rebuild (2a+1) * 2^(c+4d).
    pub fn reconstruct(&self) -> BigUint {
        let odd = &self.a * 2u32 + 1u32;
        odd << (self.c as u64 + 4 * self.d)
    }
}

/// 2-adic valuation of a nonzero integer.
pub fn v2(n: &BigInt) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::domain("v2(0) is undefined"));
    }
    Ok(n.trailing_zeros().expect("nonzero"))
}

pub fn v2_i64(n: i64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("v2(0) is undefined"));
    }
    Ok(n.trailing_zeros() as u64)
}

/// Decompose a positive integer as (2a+1) * 2^(c+4d), 0 <= c <= 3.
pub fn decompose(n: &BigInt) -> Result<RadonHurwitzDecomposition> {
    if !n.is_positive() {
        return Err(Error::domain(format!("decompose requires n >= 1, got {n}")));
    }
    let e = v2(n)?;
    let odd: BigUint = (n >> e).to_biguint().expect("positive");
    let a = (&odd - 1u32) / 2u32;
    Ok(RadonHurwitzDecomposition {
        a,
        c: (e % 4) as u8,
        d: e / 4,
    })
}

/// The Radon–Hurwitz number psi(n) = 2^c + 8d for n = (2a+1) * 2^(c+4d).
///
/// S^(n-1) admits exactly psi(n) - 1 linearly independent vector fields.
pub fn psi(n: &BigInt) -> Result<u64> {
    let dec = decompose(n)?;
    Ok((1u64 << dec.c) + 8 * dec.d)
}

pub fn psi_i64(n: i64) -> Result<u64> {
    psi(&BigInt::from(n))
}

/// C(m, j) mod 2 by the Lucas bit test: the coefficient is 1 exactly when
/// every set bit of j is set in the 2-adic expansion of m. Negative m is
/// interpreted through its (eventually all-ones) two's-complement expansion.
pub fn binom_mod2(m: i64, j: u64) -> bool {
    debug_assert!(j < 1 << 62 && m.unsigned_abs() < 1 << 62);
    (m & j as i64) == j as i64
}

/// Arbitrary-precision variant of [`binom_mod2`].
pub fn binom_mod2_big(m: &BigInt, j: &BigUint) -> bool {
    if m.sign() == Sign::Minus {
        // Two's complement: bit i of m is the complement of bit i of |m| - 1.
        let inv = m.magnitude() - 1u32;
        (j & &inv).is_zero()
    } else {
        let mag = m.magnitude();
        &(j & mag) == j
    }
}

/// C(m, j) as an exact integer, for small oracle computations in tests and
/// for the nonnegative range only.
pub fn binom_exact(m: u64, j: u64) -> BigUint {
    if j > m {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..j {
        acc = acc * (m - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn v2_examples() {
        assert_eq!(v2(&big(1)).unwrap(), 0);
        assert_eq!(v2(&big(8)).unwrap(), 3);
        assert_eq!(v2(&big(48)).unwrap(), 4);
        assert!(v2(&big(0)).is_err());
        assert_eq!(v2(&big(-48)).unwrap(), 4);
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&big(16)).unwrap();
        assert_eq!((d.a.clone(), d.c, d.d), (BigUint::zero(), 0, 1));
        let d = decompose(&big(24)).unwrap();
        assert_eq!((d.a.clone(), d.c, d.d), (BigUint::one(), 3, 0));
        let d = decompose(&big(7)).unwrap();
        assert_eq!((d.a.clone(), d.c, d.d), (BigUint::from(3u32), 0, 0));
        assert!(decompose(&big(0)).is_err());
        assert!(decompose(&big(-4)).is_err());
    }

    #[test]
    fn psi_examples_and_table() {
        assert_eq!(psi(&big(16)).unwrap(), 9);
        assert_eq!(psi(&big(32)).unwrap(), 10);
        assert_eq!(psi(&big(3)).unwrap(), 1);
        assert_eq!(psi(&big(64)).unwrap(), 12);
        assert!(psi(&big(0)).is_err());
        let table = [2, 4, 2, 8, 2, 4, 2, 9, 2, 4, 2, 8, 2, 4, 2, 10];
        for (i, want) in table.iter().enumerate() {
            let n = 2 * (i as i64 + 1);
            assert_eq!(psi(&big(n)).unwrap(), *want, "psi({n})");
        }
    }

    #[test]
    fn binom_examples() {
        assert!(!binom_mod2(4, 2));
        assert!(binom_mod2(14, 4)); // C(14,4) = 1001, odd
        assert_eq!(binom_exact(14, 4), BigUint::from(1001u32));
        assert!(binom_mod2(-1, 5)); // -1 has all bits set
        assert!(binom_mod2(7, 0));
    }

    #[test]
    fn binom_big_matches_small() {
        for m in -300..300i64 {
            for j in 0..64u64 {
                assert_eq!(
                    binom_mod2(m, j),
                    binom_mod2_big(&big(m), &BigUint::from(j)),
                    "m={m} j={j}"
                );
            }
        }
    }

    #[test]
    fn binom_matches_factorial_oracle() {
        for m in 0..40u64 {
            for j in 0..=m {
                let exact_odd = binom_exact(m, j) % 2u32 == BigUint::one();
                assert_eq!(binom_mod2(m as i64, j), exact_odd, "C({m},{j})");
            }
        }
    }

    #[test]
    fn psi_consistency_with_power_of_two() {
        // psi(n) = 2^v2(n) for v2 <= 3, and psi(n) - 1 < 2^v2(n) for v2 >= 4.
        for n in 1..4096i64 {
            let e = v2(&big(n)).unwrap();
            let p = psi(&big(n)).unwrap();
            if e <= 3 {
                assert_eq!(p, 1 << e);
            } else {
                assert!(p - 1 < (1 << e));
            }
        }
    }

    proptest! {
        #[test]
        fn reconstruct_roundtrip(n in 1i64..1_000_000_000) {
            let d = decompose(&big(n)).unwrap();
            prop_assert!(d.c <= 3);
            prop_assert_eq!(d.reconstruct(), BigUint::from(n as u64));
            prop_assert_eq!(d.c as u64 + 4 * d.d, v2(&big(n)).unwrap());
        }

        #[test]
        fn psi_periodicity(n in 1i64..5000, t in 0i64..8) {
            // psi(n) = psi(n + 2^N t) whenever 2^N > n.
            let mut pow = 1i64;
            while pow <= n { pow <<= 1; }
            prop_assert_eq!(psi(&big(n)).unwrap(), psi(&big(n + pow * t)).unwrap());
        }

        #[test]
        fn lucas_stabilization(m in 0i64..4096, j in 0u64..64) {
            let mut pow = 1i64;
            while pow as u64 <= j { pow <<= 1; }
            // Adding any power of two above j's bits once m is nonnegative
            // leaves the coefficient alone only when no borrow crosses; the
            // stable form adds a power exceeding both.
            while pow <= m { pow <<= 1; }
            prop_assert_eq!(binom_mod2(m, j), binom_mod2(m + pow, j));
        }

        #[test]
        fn pascal_identity(m in -512i64..512, j in 1u64..64) {
            // C(m, j) = C(m-1, j) + C(m-1, j-1) mod 2.
            let lhs = binom_mod2(m, j);
            let rhs = binom_mod2(m - 1, j) ^ binom_mod2(m - 1, j - 1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
