use std::collections::HashMap;

use fqequiv::classify::{canonical_poly, classify_all, degree2_rational_reps, verify_degree2_reps, verify_table};
use fqequiv::counting::{self, AffineClass, BigCount};
use fqequiv::oracle::{self, enumerate_classes, closed_form_fix, fix_count_bruteforce, verify_grid, PolySpace, VerifyKind};
use fqequiv::{ExtFieldCtx, FieldCtx, DEFAULT_KEY_BUDGET};

const BUDGET: u64 = DEFAULT_KEY_BUDGET;

#[test]
fn tables_for_larger_fields() {
    for q in [11u64, 13, 16, 25] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=5 {
            let t = verify_table(&f, n).unwrap();
            assert!(t.passed(), "{t:?}");
        }
    }
}

#[test]
fn classify_all_partitions_the_space() {
    for q in [2u64, 3, 4, 5, 7] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=5usize {
            let reps = classify_all(&f, n, BUDGET).unwrap();
            assert_eq!(BigCount::from(reps.len()), counting::frak_m(q, n as u64).unwrap(), "q={q} n={n}");
            let total: u64 = reps.iter().map(|r| r.orbit_size).sum();
            assert_eq!(total, q.pow(n as u32 - 1));
            for r in &reps {
                assert!(r.family_tag.is_some(), "q={q} n={n}: untagged {:?}", r.canon);
                assert_eq!(canonical_poly(&f, &r.canon).unwrap(), r.canon);
            }
        }
    }
}

#[test]
fn poly_burnside_matches_formula() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=5usize {
            let m = counting::frak_m(q, n as u64).unwrap();
            assert_eq!(oracle::burnside_count_poly(&f, n, BUDGET).unwrap(), m, "q={q} n={n}");
        }
    }
}

#[test]
fn affine_fixed_points_match_closed_forms() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = FieldCtx::of_order(q).unwrap();
        let mut classes = vec![AffineClass::Identity, AffineClass::Translation];
        classes.extend(fqequiv::numtheory::divisors(q - 1).into_iter().filter(|&d| d > 1).map(|order| AffineClass::Scaling { order }));
        for n in 1..=5u64 {
            for &class in &classes {
                let brute = oracle::fix_affine_bruteforce(&f, n as usize, class, BUDGET).unwrap();
                assert_eq!(BigCount::from(brute), counting::fix_affine(q, n, class).unwrap(), "q={q} n={n} {class:?}");
            }
        }
    }
}

#[test]
fn full_group_burnside_agrees_with_class_sum() {
    for (q, n) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2)] {
        let f = FieldCtx::of_order(q).unwrap();
        let full = oracle::burnside_full_group(&f, n, BUDGET).unwrap();
        assert_eq!(full, oracle::burnside_count_rational(&f, n, BUDGET).unwrap());
        assert_eq!(full, counting::frak_n(q, n as u64).unwrap());
    }
}

#[test]
fn per_class_fix_counts_for_mid_fields() {
    for q in [7u64, 8, 9] {
        let f = FieldCtx::of_order(q).unwrap();
        let ext = ExtFieldCtx::new(&f).unwrap();
        for n in 1..=3u64 {
            for rep in enumerate_classes(&f) {
                let brute = fix_count_bruteforce(&f, n as usize, &rep, BUDGET).unwrap();
                let formula = closed_form_fix(&f, &ext, n, &rep).unwrap();
                assert_eq!(BigCount::from(brute), formula, "q={q} n={n} {}", rep.label(&f));
            }
            let orbits = oracle::orbit_count_rational(&f, n as usize, BUDGET).unwrap();
            assert_eq!(orbits, counting::frak_n(q, n).unwrap());
        }
    }
}

#[test]
fn default_grid_passes_all_kinds() {
    let report = verify_grid(&[2, 3, 4, 5], &[1, 2, 3], &VerifyKind::ALL, BUDGET).unwrap();
    assert!(report.passed(), "{:?}", report.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    assert_eq!(report.summary.failed, 0);
    assert_eq!(report.summary.total, report.checks.len() as u64);
    let json = serde_json::to_string(&report).unwrap();
    let back: oracle::VerificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn over_budget_cells_are_skipped() {
    let report = verify_grid(&[5], &[4], &[VerifyKind::FrakN], 1000).unwrap();
    assert_eq!(report.summary.skipped, 1);
    assert!(report.checks.is_empty());
    assert!(report.passed());
}

#[test]
fn frak_n_at_q5_n4_is_167() {
    let report = verify_grid(&[5], &[4], &[VerifyKind::FrakN], BUDGET).unwrap();
    assert!(report.passed());
    assert!(report.checks.iter().any(|c| c.expected == BigCount::from(167u32)));
}

/// Canonical forms are constant exactly on orbits of the two-sided action.
#[test]
fn canonical_forms_label_orbits() {
    for q in [2u64, 3, 4, 5] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=4usize {
            let space = PolySpace::new(&f, n, BUDGET).unwrap();
            let labels = space.orbit_labels();
            let mut by_canon: HashMap<_, u32> = HashMap::new();
            for i in 0..space.len() {
                let c = canonical_poly(&f, &space.polynomial(i)).unwrap();
                let l = *by_canon.entry(c).or_insert(labels[i as usize]);
                assert_eq!(l, labels[i as usize], "q={q} n={n} idx={i}");
            }
            let distinct: std::collections::HashSet<_> = labels.iter().collect();
            assert_eq!(by_canon.len(), distinct.len());
        }
    }
}

#[test]
fn degree_two_rational_representatives() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = FieldCtx::of_order(q).unwrap();
        assert!(verify_degree2_reps(&f, BUDGET).unwrap(), "q={q}");
    }
    let f3 = FieldCtx::of_order(3).unwrap();
    let shown: Vec<String> = degree2_rational_reps(&f3).iter().map(|g| g.format(&f3)).collect();
    assert_eq!(shown, ["X^2", "(X^2+2)/X"]);
}

#[test]
fn linear_and_affine_equivalence_agree() {
    for (q, n) in [(2u64, 4usize), (4, 2), (5, 2)] {
        let f = FieldCtx::of_order(q).unwrap();
        assert!(oracle::lemma81_check(&f, n, BUDGET).unwrap(), "q={q} n={n}");
    }
}
