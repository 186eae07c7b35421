mod common;

use common::*;
use num_bigint::BigUint;
use privcap::graph::{complement, disjoint_union, power, strong_product};
use privcap::independence::{capacity_bracket, clique_cover_upper, is_independent_in_power, max_independent_set};
use privcap::math::{binomial, binomial_u64, colex_subsets, crt_unique_below, is_prime, next_primes};
use privcap::polyrep::{dimension_bound, fw_evaluate};
use privcap::privileged::{achievable_overlaps, build_graph, validate_params};
use privcap::{Budget, Graph, KSubset, SizeCap};

#[test]
fn binomials_match_pascal() {
    let table = pascal(70);
    for n in 0..=70u64 {
        for k in 0..=n {
            let want = table[n as usize][k as usize];
            assert_eq!(binomial(n, k), BigUint::from(want), "C({n},{k})");
            assert_eq!(binomial_u64(n, k).map(u128::from), u64::try_from(want).ok().map(u128::from));
        }
        assert_eq!(binomial(n, n + 1), BigUint::from(0u32));
    }
}

#[test]
fn primality_matches_sieve() {
    let limit = 20_000usize;
    let mut composite = vec![false; limit];
    for i in 2..limit {
        if !composite[i] {
            for j in (i * i..limit).step_by(i) {
                composite[j] = true;
            }
        }
    }
    for (n, &c) in composite.iter().enumerate() {
        assert_eq!(is_prime(n as u64), n >= 2 && !c, "{n}");
    }
    let sieved: Vec<u64> = (101..limit as u64).filter(|&n| !composite[n as usize]).take(30).collect();
    assert_eq!(next_primes(100, 30).unwrap().as_slice(), &sieved[..]);
}

#[test]
fn colex_order_and_rank_match_enumeration() {
    for r in 1..=12u32 {
        for k in 1..=r {
            let want = colex_masks(r, k);
            let got: Vec<KSubset> = colex_subsets(r, k).collect();
            assert_eq!(got.len(), want.len());
            for (i, (s, &m)) in got.iter().zip(&want).enumerate() {
                assert_eq!(s.elements(), &elements_of(m)[..]);
                assert_eq!(s.rank(), i as u64);
                assert_eq!(&KSubset::unrank(r, k, i as u64).unwrap(), s);
            }
            assert!(KSubset::unrank(r, k, want.len() as u64).is_err());
        }
    }
}

#[test]
fn overlaps_match_popcount() {
    let subs: Vec<KSubset> = colex_subsets(9, 4).collect();
    let ms = colex_masks(9, 4);
    for (a, &ma) in subs.iter().zip(&ms) {
        for (b, &mb) in subs.iter().zip(&ms) {
            assert_eq!(a.intersection_size(b), (ma & mb).count_ones() as usize);
        }
    }
}

#[test]
fn crt_matches_scan() {
    let moduli = [(3u64, 5u64), (5, 7), (2, 3), (3, 11), (7, 13)];
    for &(p, q) in &moduli {
        for bound in [1u64, 5, p * q - 1, p * q, p * q + 1, 3 * p * q] {
            for a in 0..p {
                for b in 0..q {
                    let hits: Vec<u64> = (0..bound).filter(|x| x % p == a && x % q == b).collect();
                    let want = if hits.len() == 1 { Some(hits[0]) } else { None };
                    assert_eq!(crt_unique_below(&[(a, p), (b, q)], bound), want, "{a} mod {p}, {b} mod {q}, < {bound}");
                }
            }
        }
    }
}

/// Direct evaluation of Π_{u∈Z_q, u≢s} (u − w) with signed arithmetic.
fn fw_direct(w: i64, q: i64, s: i64) -> u64 {
    let mut acc: i64 = 1;
    for u in 0..q {
        if u != s.rem_euclid(q) {
            acc = (acc * (u - w)).rem_euclid(q);
        }
    }
    acc as u64
}

#[test]
fn fw_polynomial_matches_direct_product() {
    for &(r, s, q) in &[(8u32, 4u32, 3u64), (9, 4, 5), (10, 6, 7), (7, 3, 2)] {
        let subs: Vec<KSubset> = colex_subsets(r, s).collect();
        for a in subs.iter().step_by(3) {
            for b in subs.iter().step_by(2) {
                let w = a.intersection_size(b) as i64;
                assert_eq!(fw_evaluate(a, 1, b, 1, q, s as u64), fw_direct(w, q as i64, s as i64));
                assert_eq!(fw_evaluate(a, 1, b, 2, q, s as u64), fw_direct(0, q as i64, s as i64));
            }
        }
    }
}

#[test]
fn dimension_bound_matches_pascal_sum() {
    let table = pascal(40);
    for r in 1..=40u64 {
        for &q in &[2u64, 3, 5, 7, 11] {
            let per_copy: u128 = (0..q.min(r + 1)).map(|i| table[r as usize][i as usize]).sum();
            for copies in 1..=3u64 {
                assert_eq!(dimension_bound(copies, q, r).value, BigUint::from(per_copy * copies as u128));
            }
        }
    }
    assert_eq!(dimension_bound(1, 3, 16).as_u64(), Some(137));
    assert_eq!(dimension_bound(1, 3, 8).as_u64(), Some(37));
}

#[test]
fn solver_matches_brute_force_on_named_graphs() {
    let mut petersen = Vec::new();
    for i in 0..5 {
        petersen.push((i, (i + 1) % 5));
        petersen.push((i, i + 5));
        petersen.push((i + 5, (i + 2) % 5 + 5));
    }
    let named = [
        Graph::from_edges(10, &petersen).unwrap(),
        Graph::cycle(7),
        Graph::cycle(12),
        Graph::path(9),
        Graph::complete(6),
        Graph::edgeless(8),
        complement(&Graph::cycle(9)),
    ];
    let known = [4, 3, 6, 5, 1, 8, 2];
    for (g, &k) in named.iter().zip(&known) {
        let r = max_independent_set(g, Budget::default());
        assert!(r.exact);
        assert_eq!(r.size, brute_alpha(g));
        assert_eq!(r.size, k);
    }
}

#[test]
fn solver_matches_brute_force_on_random_graphs() {
    let mut rng = rng(0x5eed);
    for n in 1..=18 {
        for _ in 0..4 {
            let g = random_graph(&mut rng, n);
            let r = max_independent_set(&g, Budget::default());
            assert!(r.exact && r.witness.len() == r.size);
            assert_eq!(r.size, brute_alpha(&g));
        }
    }
}

#[test]
fn pentagon_square() {
    let c5 = Graph::cycle(5);
    let sq = power(&c5, 2, SizeCap::default()).unwrap();
    assert_eq!(sq.n(), 25);
    // closed neighbourhoods multiply: (2+1)^2 - 1
    assert!((0..25).all(|v| sq.degree(v) == 8));
    assert_eq!(sq.edge_count(), 100);
    let r = max_independent_set(&sq, Budget::default());
    assert_eq!((r.size, r.exact), (5, true));
    let tuples: Vec<Vec<usize>> = (0..5).map(|i| vec![i, 2 * i % 5]).collect();
    assert!(is_independent_in_power(&c5, 2, &tuples).unwrap());
    let b = capacity_bracket(&c5, 2, Some(clique_cover_upper(&c5)), Budget::default(), SizeCap::default()).unwrap();
    assert_eq!(b.lower, 5f64.sqrt());
    assert_eq!(b.lower_witness, (2, 5));
}

#[test]
fn product_adjacency_matches_definition() {
    let mut rng = rng(3);
    let g = random_graph(&mut rng, 5);
    let h = random_graph(&mut rng, 4);
    let p = strong_product(&g, &h, SizeCap::default()).unwrap();
    let close = |x: &Graph, a: usize, b: usize| a == b || x.has_edge(a, b);
    for a in 0..5 {
        for b in 0..4 {
            for c in 0..5 {
                for d in 0..4 {
                    let want = (a, b) != (c, d) && close(&g, a, c) && close(&h, b, d);
                    assert_eq!(p.has_edge(a * 4 + b, c * 4 + d), want);
                }
            }
        }
    }
    let u = disjoint_union(&[&g, &h], SizeCap::default()).unwrap();
    assert_eq!(u.edge_count(), g.edge_count() + h.edge_count());
    assert!((0..5).all(|a| (5..9).all(|b| !u.has_edge(a, b))));
}

#[test]
fn desk_overlap_distribution() {
    // from one 8-subset of [16]: C(8,w)·C(8,8-w) subsets at overlap w
    let table = pascal(16);
    let counts: Vec<u128> = (0..=8).map(|w| table[8][w] * table[8][8 - w]).collect();
    assert_eq!(counts, vec![1, 64, 784, 3136, 4900, 3136, 784, 64, 1]);
    assert_eq!(achievable_overlaps(16, 8), 0..8);
    let report = validate_params(16, 8, &[3, 5, 7]);
    assert!(report.passed, "{:?}", report.failures);
    // residues of 8: 2 mod 3, 3 mod 5, 1 mod 7
    let want_degree = [counts[2] + counts[5], counts[3], counts[1]];
    for (i, q) in [3u64, 5, 7].into_iter().enumerate() {
        let g = build_graph(16, 8, &[q], i as u32 + 1, SizeCap::default()).unwrap();
        assert_eq!(g.n(), 12870);
        for v in [0, 1, 777, 12869] {
            assert_eq!(g.degree(v) as u128, want_degree[i]);
        }
    }
}

#[test]
fn small_instance_graph() {
    // r = 8, s = 4, q = 3: adjacent iff overlap ≡ 1 (mod 3), i.e. overlap 1
    let g = build_graph(8, 4, &[3], 1, SizeCap::default()).unwrap();
    assert_eq!(g.n(), 70);
    assert!((0..70).all(|v| g.degree(v) == 16));
    assert_eq!(brute_alpha_large(&g), max_independent_set(&g, Budget::default()).size);
}

/// α by plain recursive branching; fine for 70 vertices of degree 16.
fn brute_alpha_large(g: &Graph) -> usize {
    fn go(g: &Graph, cand: &[usize], size: usize, best: &mut usize) {
        if size + cand.len() <= *best {
            return;
        }
        let Some(&v) = cand.first() else {
            *best = size;
            return;
        };
        let with: Vec<usize> = cand.iter().copied().filter(|&u| u != v && !g.has_edge(u, v)).collect();
        go(g, &with, size + 1, best);
        go(g, &cand[1..], size, best);
    }
    let mut best = 0;
    go(g, &(0..g.n()).collect::<Vec<_>>(), 0, &mut best);
    best
}
