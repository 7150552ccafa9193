//! Cross-checks against brute force and direct big-integer arithmetic.

use growthlab::census::count_in;
use growthlab::enumerate::{enumerate_group, EnumMethod, Limits};
use growthlab::growth::{ball_sizes, eccentricity_oracle};
use growthlab::ledger::{c1, c2};
use growthlab::varieties::{diagonal_torus, nonregular_locus};
use growthlab::{make_field, make_group, Embedding, Family, GroupSpec, LedgerTerm, Matrix};
use num_bigint::BigUint;

fn sl2(p: u64) -> GroupSpec {
    make_group(Family::SL, 1, &make_field(p, 1).unwrap(), Embedding::Usual).unwrap()
}

/// All (a, b, c, d) mod p with ad − bc = 1.
fn sl2_brute(p: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d - b * c - 1).rem_euclid(p) == 0 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn sl2_elements_match_brute_force() {
    for p in [3u64, 5, 7] {
        let g = sl2(p);
        let f = &g.field;
        let mut brute: Vec<Matrix> = sl2_brute(p as i64).iter().map(|v| Matrix::from_ints(f, 2, v).unwrap()).collect();
        let mut bfs = enumerate_group(&g, EnumMethod::BfsClosure, 10_000).unwrap();
        brute.sort();
        bfs.sort();
        assert_eq!(brute, bfs);
    }
}

#[test]
fn torus_and_nonregular_counts_match_brute_force() {
    for p in [3i64, 5, 7, 11] {
        let g = sl2(p as u64);
        let all = enumerate_group(&g, EnumMethod::BfsClosure, 10_000).unwrap();
        let brute = sl2_brute(p);
        let diag = brute.iter().filter(|m| m[1] == 0 && m[2] == 0).count() as u64;
        // disc(t² − tr·t + 1) = tr² − 4
        let nonreg = brute.iter().filter(|m| ((m[0] + m[3]).pow(2) - 4).rem_euclid(p) == 0).count() as u64;
        assert_eq!(count_in(&diagonal_torus(&g), &all).unwrap(), diag);
        assert_eq!(count_in(&nonregular_locus(&g), &all).unwrap(), nonreg);
        assert_eq!(diag, p as u64 - 1);
    }
}

#[test]
fn c1_matches_direct_expansion() {
    for delta in 1..=4u64 {
        for d in 0..=delta {
            for big_d in [1u64, 2, 3, 7] {
                let got = c1(d, &LedgerTerm::from_u64(big_d), delta).unwrap().to_biguint(1 << 20).unwrap();
                let want = if d == 0 {
                    BigUint::from(big_d)
                } else {
                    let tower = delta.pow(d as u32) as u32;
                    let falling: u64 = (0..d).map(|i| delta - i).product();
                    BigUint::from(2 * delta).pow(tower) * BigUint::from(big_d).pow(falling as u32)
                };
                assert_eq!(got, want, "c1({d}, {big_d}, {delta})");
            }
        }
    }
    // δ(m + 2(1+ι)^{n²})
    assert_eq!(c2(2, 10, 0, 4).unwrap(), BigUint::from(10u32 * (2 + 2)));
    assert_eq!(c2(1, 8, 1, 3).unwrap(), BigUint::from(8u32 * (1 + 2 * 512)));
}

#[test]
fn ball_profile_matches_distance_oracle() {
    for p in [5u64, 7, 11] {
        let g = sl2(p);
        let a = g.standard_generators().unwrap();
        let prof = ball_sizes(&g, &a, 1000, &[], &Limits::default()).unwrap();
        assert_eq!(prof.diameter.unwrap(), eccentricity_oracle(&g.field, a.elements()));
        assert!(prof.sizes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*prof.sizes.last().unwrap(), p * (p * p - 1));
    }
}
