//! Acceptance suite: one test per shipped criterion. Each test prints a
//! single pass line on success; a failing assertion fails the test (and the
//! criterion) outright.

use c2ext::arith::{psi_i64, v2_i64};
use c2ext::classification::*;
use c2ext::hurwitz_radon::*;
use c2ext::lambda::{self, adem_reduce, admissible_basis, concat_product, differential,
    differential_monomial, solve_boundary, Ceiling, Element, Monomial, Strategy};
use c2ext::stunted::{self, CellChain, StuntedSpectrum};
use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(n: u32, what: &str) {
    println!("criterion {n:2} PASS: {what}");
}

#[test]
fn criterion_01_psi_table() {
    let t = Instant::now();
    let expect = [2u64, 4, 2, 8, 2, 4, 2, 9, 2, 4, 2, 8, 2, 4, 2, 10];
    let got: Vec<u64> = (1..=16).map(|i| psi_i64(2 * i).unwrap()).collect();
    let elapsed = t.elapsed();
    assert_eq!(got, expect);
    assert!(elapsed.as_micros() < 1000, "psi table took {elapsed:?}");

    // The CLI emits the identical column.
    let out = run_cli(&["psi", "2..32", "--step", "2"]);
    let values: Vec<u64> = String::from_utf8(out)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, expect);
    pass(1, &format!("psi(2..32) reproduced exactly in {elapsed:?}"));
}

#[test]
fn criterion_02_bockstein_oracle_equivalence() {
    let t = Instant::now();
    let survivors = bockstein_survivors(256, 256);
    for a in 0..=256u64 {
        for b in 0..=256u64 {
            let v = v2_i64(b as i64 + 1).unwrap().min(62);
            let closed_form = a < 1u64 << v;
            assert_eq!(
                survivors.contains(&NegConeGenerator { a, b }),
                closed_form,
                "a={a} b={b}"
            );
        }
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    pass(2, &format!("differential family matches a < 2^v2(b+1) on 257x257 ({elapsed:?})"));
}

#[test]
fn criterion_03_hurewicz_spot_checks() {
    let curated = CuratedTable::builtin();
    // (8, 25) is in the image.
    assert_eq!(
        hurewicz_hf2(BiDegree::new(8, 25)).generator_label,
        "theta/(rho^8 tau^15)"
    );
    // (9, 26) .. (15, 32): length-2 differentials.
    for s in 9..=15i64 {
        let f = classify_fil0(BiDegree::new(s, s + 17), &curated);
        assert_eq!(f.status, Fil0Status::SupportsDifferential, "s={s}");
        assert_eq!(f.known_length, Some(2), "s={s}");
    }
    // (32, 97): length 3.
    let f = classify_fil0(BiDegree::new(32, 97), &curated);
    assert_eq!(f.known_length, Some(3));
    // (12, 77): length 5 through the longest-differential rule at v2 = 6.
    let f = classify_fil0(BiDegree::new(12, 77), &curated);
    assert_eq!(f.known_length, Some(5));
    assert_eq!(f.provenance, Provenance::LongestDiffTheorem);
    // Vector-field equivalence on 0 <= k, n <= 128.
    for k in 0..=128u64 {
        for n in 0..=128u64 {
            let g = NegConeGenerator { a: k, b: n };
            let in_image = !hurewicz_hf2(g.bidegree()).is_zero();
            assert_eq!(in_image, k < psi_i64(n as i64 + 1).unwrap(), "k={k} n={n}");
        }
    }
    pass(3, "image spot checks and the 129x129 vector-field equivalence hold");
}

#[test]
fn criterion_04_lambda_dga_soundness() {
    let t = Instant::now();
    // d o d = 0 exhaustively for stems <= 24, filtrations <= 12.
    let mut checked = 0usize;
    for stem in 0..=24i64 {
        for fil in 0..=12i64 {
            for m in admissible_basis(stem, fil) {
                assert!(
                    differential(&differential_monomial(&m)).is_zero(),
                    "d^2 != 0 on {m}"
                );
                checked += 1;
            }
        }
    }
    // Confluence on all words of length <= 4, stem <= 20.
    let mut words = 0usize;
    for len in 1..=4usize {
        let mut idx = vec![0u32; len];
        loop {
            if idx.iter().sum::<u32>() <= 20 {
                let l = lambda::adem_reduce_with(&idx, Strategy::LeftmostFirst);
                let r = lambda::adem_reduce_with(&idx, Strategy::RightmostFirst);
                assert_eq!(l, r, "confluence fails on {idx:?}");
                words += 1;
            }
            let mut p = 0;
            while p < len && idx[p] == 20 {
                idx[p] = 0;
                p += 1;
            }
            if p == len {
                break;
            }
            idx[p] += 1;
        }
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(4, &format!("d^2 = 0 on {checked} monomials, confluence on {words} words ({elapsed:?})"));
}

/// Dense elimination over packed words, written independently of the
/// library's linear algebra: the rank oracle for criterion 5.
fn oracle_rank(rows: Vec<Vec<u64>>) -> usize {
    let mut rows = rows;
    let mut rank = 0;
    let width = rows.first().map(|r| r.len() * 64).unwrap_or(0);
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let mut pivot = None;
        for (i, r) in rows.iter().enumerate().skip(rank) {
            if r[w] >> b & 1 == 1 {
                pivot = Some(i);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let prow = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] >> b & 1 == 1 {
                for (x, y) in r.iter_mut().zip(&prow) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn oracle_d_rows(stem: i64, fil: i64) -> Vec<Vec<u64>> {
    let src = admissible_basis(stem, fil);
    let dst = admissible_basis(stem - 1, fil + 1);
    let index: std::collections::HashMap<&Monomial, usize> =
        dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let words = dst.len().div_ceil(64).max(1);
    src.iter()
        .map(|m| {
            let mut row = vec![0u64; words];
            for t in differential_monomial(m).terms() {
                let c = index[t];
                row[c / 64] |= 1 << (c % 64);
            }
            row
        })
        .collect()
}

fn oracle_homology_dim(stem: i64, fil: i64) -> usize {
    let n = admissible_basis(stem, fil).len();
    if n == 0 {
        return 0;
    }
    n - oracle_rank(oracle_d_rows(stem, fil)) - oracle_rank(oracle_d_rows(stem + 1, fil - 1))
}

#[test]
fn criterion_05_ext_sphere_desk_scale() {
    let t = Instant::now();
    // Dimensions against the dense oracle, bidegree by bidegree.
    for stem in 0..=14i64 {
        for fil in 0..=14i64 {
            assert_eq!(
                lambda::homology_dim(stem, fil),
                oracle_homology_dim(stem, fil),
                "dimension mismatch at ({stem},{fil})"
            );
        }
    }
    // Named presence: the Hopf classes, c0, Ph2, P^2h2.
    for (s, f) in [(1i64, 1i64), (3, 1), (7, 1), (15, 1), (8, 3), (11, 5), (19, 9)] {
        assert_eq!(lambda::homology_dim(s, f), 1, "expected one class at ({s},{f})");
    }
    // Nonzero products h2 * P^k h2 at (14, 6) and (22, 10).
    let h2 = adem_reduce(&[3]);
    for k in [1i64, 2] {
        let rep = lambda::sparse_nonzero_cycle(8 * k + 3, 4 * k + 1).expect("P^k h2 exists");
        let prod = concat_product(&h2, &rep);
        assert_eq!(prod.bidegree(), Some((8 * k + 6, 4 * k + 2)));
        assert!(lambda::class_is_nonzero(&prod), "h2 * P^{k}h2 = 0");
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    pass(5, &format!("chart matches the oracle through stem 14; products land ({elapsed:?})"));
}

#[test]
fn criterion_06_tower_truncations() {
    // h0^3 h2 = 0 and h0^4 h3 = 0 as rank statements, with the nonzero
    // stages below them.
    assert_eq!(lambda::homology_dim(3, 3), 1); // h0^2 h2 = h1^3 != 0
    assert_eq!(lambda::homology_dim(3, 4), 0); // h0^3 h2 = 0
    assert_eq!(lambda::homology_dim(7, 4), 1); // h0^3 h3 != 0
    assert_eq!(lambda::homology_dim(7, 5), 0); // h0^4 h3 = 0
    pass(6, "h0-tower truncations certified by homology ranks");
}

#[test]
fn criterion_07_steenrod_tables() {
    // Seven-column table at (b, c) = (31, 10): cells 22..28, Sq^1..Sq^7.
    // Rows list, per operation, the cells of the window it acts on
    // nontrivially (inside RP[21..inf]).
    let spec = StuntedSpectrum::infinite(21);
    let table = stunted::sq_dual_table(&spec, (22, 28), 7);
    let expect_71: [&[i64]; 7] = [
        &[22, 24, 26, 28], // Sq^1
        &[24, 25, 28],     // Sq^2
        &[26],             // Sq^3
        &[25, 26, 27],     // Sq^4
        &[26, 28],         // Sq^5
        &[28],             // Sq^6
        &[],               // Sq^7
    ];
    for (j, expect) in expect_71.iter().enumerate() {
        let got: Vec<i64> = (22..=28)
            .filter(|&m| table[j][(m - 22) as usize])
            .collect();
        assert_eq!(&got, expect, "Sq^{} row at (31, 10)", j + 1);
    }
    // Five-column table at (b, c) = (63, 12): cells 52..56, Sq^1..Sq^5.
    let spec = StuntedSpectrum::infinite(51);
    let table = stunted::sq_dual_table(&spec, (52, 56), 5);
    let expect_63: [&[i64]; 5] = [
        &[52, 54, 56], // Sq^1
        &[53, 56],     // Sq^2
        &[54],         // Sq^3
        &[56],         // Sq^4
        &[],           // Sq^5
    ];
    for (j, expect) in expect_63.iter().enumerate() {
        let got: Vec<i64> = (52..=56)
            .filter(|&m| table[j][(m - 52) as usize])
            .collect();
        assert_eq!(&got, expect, "Sq^{} row at (63, 12)", j + 1);
    }
    pass(7, "transposed Steenrod tables reproduced entry-for-entry");
}

/// The cycle representative used at (8k-5, 4k-3) for the first chain family.
fn alpha_for(k: i64) -> Element {
    if k == 1 {
        adem_reduce(&[3])
    } else {
        lambda::sparse_nonzero_cycle(8 * k - 5, 4 * k - 3).expect("P^(k-1) h2 class")
    }
}

/// The cycle at (8k-1, 4k-3) whose l0^3-multiple is the order-2 class of the
/// h0-tower at (8k-1, 4k).
fn alpha_tilde_for(k: i64) -> Element {
    let (s, f) = (8 * k - 1, 4 * k - 3);
    let h = lambda::homology_bidegree(s, f, Ceiling::default()).unwrap();
    for mask in 1u32..(1 << h.dim.min(8)) {
        let mut cand = Element::zero();
        for (i, rep) in h.reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                cand.add(rep);
            }
        }
        let shifted = concat_product(&adem_reduce(&[0, 0, 0]), &cand);
        if lambda::class_is_nonzero(&shifted) {
            return cand;
        }
    }
    panic!("no class at ({s},{f}) hits the h0-tower");
}

#[test]
fn criterion_08_chain_identities() {
    let t = Instant::now();
    // First family: d(chain) = e_{b-c+2} (x) gamma, at k = 1 and 2.
    for (k, b) in [(1i64, 31i64), (2, 511)] {
        let c = 8 * k + 2;
        let alpha = alpha_for(k);
        let l03 = concat_product(&adem_reduce(&[0, 0, 0]), &alpha);
        let beta = solve_boundary(&l03).expect("h0 P^(k-1)h1^3 = 0");
        let spec = StuntedSpectrum::infinite(b - c);
        let chain = stunted::h1_cubed_survivor_chain(b, c, &alpha, &beta);
        let mut expect = CellChain::zero();
        expect.add_on_cell(b - c + 2, &stunted::gamma_obstruction(&alpha, &beta));
        assert_eq!(
            stunted::cell_differential(&spec, &chain),
            expect,
            "first chain family at k={k}"
        );
    }
    // Second family: d(chain) = 0, at k = 1 and 2.
    for (k, b) in [(1i64, 63i64), (2, 1023)] {
        let c = 8 * k + 4;
        let alpha_t = alpha_tilde_for(k);
        let l04 = concat_product(&adem_reduce(&[0, 0, 0, 0]), &alpha_t);
        let beta_t = solve_boundary(&l04).expect("tower dies one step up");
        let spec = StuntedSpectrum::infinite(b - c);
        let chain = stunted::imj_tower_survivor_chain(b, c, &alpha_t, &beta_t);
        assert!(
            stunted::cell_differential(&spec, &chain).is_zero(),
            "second chain family at k={k}"
        );
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    pass(8, &format!("both chain identities hold at k = 1, 2 ({elapsed:?})"));
}

#[test]
fn criterion_09_stunted_survivals() {
    let t = Instant::now();
    // h1^3[28] survives in Ext(RP[21..inf]) at total bidegree (31, 3).
    let spec = StuntedSpectrum::infinite(21);
    let alpha = alpha_for(1);
    let cycle = stunted::h1_cubed_survivor_cycle(&spec, 31, 10, &alpha).unwrap();
    assert_eq!(cycle.bidegree(), Some((31, 3)));
    assert_eq!(cycle.leading_cell(), Some(28));
    // Leading part is the h1^3 class.
    let top = cycle.on_cell(28);
    assert_eq!(lambda::class_coordinates(&top), Some(vec![0]));
    assert!(stunted::cell_class_is_nonzero(&spec, &cycle), "h1^3[28] dies");

    // h1h3[-26] is nonzero in Ext(RP[-26..inf]); as the target of the
    // d_2 on 1[-17] it sits at total stem -18, filtration 2.
    let spec = StuntedSpectrum::infinite(-26);
    let mut rep = CellChain::zero();
    rep.add_on_cell(-26, &adem_reduce(&[1, 7]));
    assert_eq!(rep.bidegree(), Some((-18, 2)));
    assert!(stunted::cell_class_is_nonzero(&spec, &rep), "h1h3[-26] dies");
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    pass(9, &format!("h1^3[28] and h1h3[-26] survive ({elapsed:?})"));
}

#[test]
fn criterion_10_splitting_predicates() {
    for n in 1..=512i64 {
        let p = psi_i64(n).unwrap() as i64;
        // Threshold in both directions around n - psi(n).
        assert!(stunted::top_cell_splits(n, n - p).unwrap(), "n={n}");
        assert!(!stunted::top_cell_splits(n, n - p - 1).unwrap(), "n={n}");
        // Negative side through psi(|n|).
        assert!(stunted::top_cell_splits(-n, -n - p).unwrap(), "n={}", -n);
        assert!(!stunted::top_cell_splits(-n, -n - p - 1).unwrap(), "n={}", -n);
        // Necessary Sq-vanishing: whenever the split holds, every Sq^j_*
        // from the top cell that lands in the complex vanishes.
        for j in 1..=p as u64 {
            if n - 1 - (j as i64) >= n - p {
                assert!(!stunted::sq_coeff(n - 1, j), "Sq^{j} blocks the split at n={n}");
            }
        }
    }
    pass(10, "top-cell thresholds and Sq-vanishing hold for 1 <= |n| <= 512");
}

#[test]
fn criterion_11_hurwitz_radon_exactness() {
    let t = Instant::now();
    for m in 1..=128usize {
        let fam = hurwitz_radon_family(m).unwrap();
        assert_eq!(fam.len() as u64, psi_i64(m as i64).unwrap() - 1, "m={m}");
        let report = verify_family(&fam);
        assert!(report.passed(), "m={m}: {:?}", report.violations);
    }
    // Norm identity |f(p)|^2 = |p|^4, exact over rationals, 1000 points per
    // sphere dimension.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rq = |rng: &mut ChaCha8Rng| {
        BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=9)))
    };
    for n in [1usize, 3, 7, 15] {
        let k = psi_i64(n as i64 + 1).unwrap() as usize - 1;
        let spec = QuadraticMapSpec::new(n, k).unwrap();
        for _ in 0..1000 {
            let v: Vec<BigRational> = (0..n + 1).map(|_| rq(&mut rng)).collect();
            let xs: Vec<BigRational> = (0..k + 1).map(|_| rq(&mut rng)).collect();
            let out = spec.eval(&v, &xs).unwrap();
            let out_sq: BigRational = out.iter().map(|c| c * c).sum();
            let p_sq: BigRational = v.iter().chain(&xs).map(|c| c * c).sum();
            assert_eq!(out_sq, &p_sq * &p_sq, "norm identity fails on S^{n}");
        }
        // Top-cell inverse round trip away from the pole.
        for _ in 0..100 {
            let mut u: Vec<f64> = (0..n + 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: f64 = rng.gen_range(-0.99..1.0);
            let norm: f64 = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            let scale = (1.0 - y * y).sqrt() / norm.max(1e-9);
            for c in u.iter_mut() {
                *c *= scale;
            }
            let p = spec.top_cell_inverse(&u, y).unwrap();
            let out = spec.eval_f64(&p[..n + 1], &p[n + 1..]);
            for (a, b) in out.iter().zip(u.iter().chain(std::iter::once(&y))) {
                assert!((a - b).abs() < 1e-9, "round trip error {} on S^{n}", (a - b).abs());
            }
        }
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(11, &format!("families verified to m = 128; norm identity exact; inverse within 1e-9 ({elapsed:?})"));
}

#[test]
fn criterion_12_image_of_j_predictor() {
    // The three seed differentials as records.
    let r = imj_data(1).unwrap();
    assert_eq!(
        (r.stem, r.r_k, r.a_prime_label.as_str(), r.target_label.as_str()),
        (15, 3, "h0^2h4", "h2Ph2")
    );
    assert_eq!(r.a_prime_bidegree, (15, 3));
    assert_eq!(r.target_bidegree, (14, 6));
    let r = imj_data(2).unwrap();
    assert_eq!(
        (r.stem, r.r_k, r.a_prime_label.as_str(), r.target_label.as_str()),
        (23, 2, "h0i", "h2P^2h2")
    );
    let r = imj_data(3).unwrap();
    assert_eq!(
        (r.stem, r.r_k, r.a_prime_label.as_str(), r.target_label.as_str()),
        (31, 4, "h0^9h5", "h2P^3h2")
    );
    // Chart consistency at k = 1: a' = h0^2h4 sits at (15, 3) and its
    // h0-multiple is nonzero.
    assert_eq!(lambda::homology_dim(15, 3), 1);
    let a_prime = lambda::sparse_nonzero_cycle(15, 3).unwrap();
    let h0a = lambda::left_multiply(0, &a_prime);
    assert!(lambda::class_is_nonzero(&h0a), "h0 * h0^2h4 = 0");
    pass(12, "image-of-J records and the h0-divisibility of a' hold");
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_c2ext"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "c2ext {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn criterion_13_cli_determinism() {
    let invocations: &[&[&str]] = &[
        &["psi", "2..32", "--step", "2"],
        &["psi", "1..64"],
        &["zeroline", "--s", "-8..34", "--w", "-8..40"],
        &["hurewicz", "hf2", "--s", "0..33", "--w", "2..40"],
        &["hurewicz", "hz", "--s", "-8..12", "--w", "-8..12"],
        &["hurewicz", "ha", "--s", "-8..12", "--w", "-8..12"],
        &["classify", "--coweight", "-17"],
        &["classify", "--coweight", "-65"],
        &["classify", "--s", "0..16", "--w", "2..34"],
        &["ext-sphere", "--stem", "0..16", "--fil", "0..8"],
        &["ext-stunted", "RP[21..inf]", "--stem", "28..32", "--fil", "0..4"],
        &["ext-stunted", "RP[-26..-18]", "--stem", "-26..-17", "--fil", "0..3"],
        &["splits", "RP[8..15]"],
        &["splits", "--n", "2..64"],
        &["vf", "15"],
        &["vf", "7", "--point", "1,0,0,0,0,0,0,2/3"],
        &["qmap", "3", "--eval", "1/2,0,0,1,1,0,1/3,0"],
        &["qmap", "7", "--invert", "0.5,0,0,0,0,0,0,0,0.8660254037844386"],
        &["chart", "hurewicz", "hf2", "--s", "0..33", "--w", "2..40", "--format", "svg"],
        &["chart", "coefficients", "hf2", "--s", "-5..5", "--w", "-5..7", "--format", "svg"],
        &["chart", "hurewicz", "ha", "--s", "-6..6", "--w", "-6..6", "--format", "svg"],
    ];
    for args in invocations {
        let a = run_cli(args);
        let b = run_cli(args);
        assert_eq!(a, b, "non-deterministic output for {args:?}");
        assert!(!a.is_empty(), "empty output for {args:?}");
    }
    pass(13, &format!("{} CLI invocations byte-identical across runs", invocations.len()));
}

#[test]
fn tangent_frame_gram_identity_sample() {
    // Gram matrix of (A_0 v, ..., A_k v) equals |v|^2 I, exactly, on random
    // rational points of S^15.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let v: Vec<BigRational> = (0..16)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.gen_range(-7i64..=7)),
                    BigInt::from(rng.gen_range(1i64..=7)),
                )
            })
            .collect();
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        let vv: BigRational = v.iter().map(|c| c * c).sum();
        let mut frame = vec![v.clone()];
        frame.extend(tangent_frame(15, &v).unwrap());
        for (i, a) in frame.iter().enumerate() {
            for (j, b) in frame.iter().enumerate() {
                let dot: BigRational = a.iter().zip(b).map(|(x, y)| x * y).sum();
                if i == j {
                    assert_eq!(dot, vv);
                } else {
                    assert!(dot.is_zero());
                }
            }
        }
    }
}
