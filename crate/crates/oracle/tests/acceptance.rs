//! Acceptance suite: every label-side prediction is checked against the
//! brute-force oracle (for the parameter sets within the enumeration
//! bound) or against exact label-level identities (exhaustively for
//! n <= 6, q <= 8).  Each criterion prints one pass line; any failure
//! panics with context.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use slchar_core::sl::{
    self, enumerate_families, for_each_family, stabilizer_condition, ActionCache, GgcIncidence,
    SlCharLabel, UnipotentSlClass,
};
use slchar_core::{CyclicElt, GroupParams, OrbitTable};
use slchar_oracle::cyclo::CycContext;
use slchar_oracle::gelfand::{gelfand_graev_family, gg_multiplicity, unipotent_subgroup};
use slchar_oracle::verify::group_data;
use slchar_oracle::{GroupKind, OracleCache};

/// Parameter sets within the oracle's enumeration bound.
const ORACLE_SETS: [(u32, u64, i8); 9] = [
    (2, 3, 1),
    (2, 5, 1),
    (2, 7, 1),
    (3, 2, 1),
    (3, 3, 1),
    (3, 4, 1),
    (3, 2, -1),
    (3, 3, -1),
    (4, 2, -1),
];

fn label_sweep_sets() -> Vec<(u32, u64, i8)> {
    let mut out = Vec::new();
    for n in 2..=6u32 {
        for q in [2u64, 3, 4, 5, 7, 8] {
            for eps in [1i8, -1] {
                out.push((n, q, eps));
            }
        }
    }
    out
}

fn shared_cache() -> OracleCache {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("oracle-cache");
    OracleCache::new(Some(dir))
}

fn params(n: u32, q: u64, eps: i8) -> GroupParams {
    GroupParams::new(n, q, eps).unwrap()
}

#[test]
fn criterion_1_class_number_identity() {
    let cache = shared_cache();
    for &(n, q, eps) in &ORACLE_SETS {
        let p = params(n, q, eps);
        let table = OrbitTable::for_group(&p).unwrap();
        let labels = sl::sl_class_count(&table).unwrap();
        let sl_data = group_data(&p, GroupKind::Special, &cache).unwrap();
        assert_eq!(
            labels,
            sl_data.classes.count() as u64,
            "{}: label count vs oracle class count",
            p.sl_name()
        );
        println!(
            "[PASS] criterion 1: {} has {} classes = triple labels",
            p.sl_name(),
            labels
        );
    }
}

#[test]
fn criterion_2_degree_identities() {
    // Oracle-backed degree multisets for the feasible sets.
    let cache = shared_cache();
    for &(n, q, eps) in &ORACLE_SETS {
        let p = params(n, q, eps);
        let table = OrbitTable::for_group(&p).unwrap();
        let mut label_degs: Vec<u64> = Vec::new();
        for_each_family(&table, |fam| {
            let d = fam.constituent_degree(&table).to_u64().unwrap();
            for _ in 0..fam.a_lambda {
                label_degs.push(d);
            }
        })
        .unwrap();
        label_degs.sort_unstable();
        let sl_data = group_data(&p, GroupKind::Special, &cache).unwrap();
        let mut oracle_degs = sl_data.table.degrees.clone();
        oracle_degs.sort_unstable();
        assert_eq!(label_degs, oracle_degs, "{}: degree multiset", p.sl_name());
        if (n, q, eps) == (2, 3, 1) {
            assert_eq!(label_degs, vec![1, 1, 1, 2, 2, 2, 3], "SL_2(3) golden");
        }
        println!(
            "[PASS] criterion 2: {} degree multiset matches the Dixon table",
            p.sl_name()
        );
    }

    // Exact sum identity, label-only, exhaustively for n <= 6, q <= 8.
    let failures: Vec<String> = label_sweep_sets()
        .par_iter()
        .filter_map(|&(n, q, eps)| {
            let p = params(n, q, eps);
            let table = OrbitTable::for_group(&p).ok()?;
            let mut sum = BigInt::zero();
            for_each_family(&table, |fam| {
                let c = fam.constituent_degree(&table);
                sum += BigInt::from(fam.a_lambda) * &c * &c;
            })
            .ok()?;
            if sum != p.sl_order() {
                Some(format!("{}: {} != {}", p.sl_name(), sum, p.sl_order()))
            } else {
                None
            }
        })
        .collect();
    assert!(failures.is_empty(), "degree identity failures: {failures:?}");
    println!(
        "[PASS] criterion 2: sum a_lambda (deg/a_lambda)^2 = |SL_n^eps(q)| for all n <= 6, q <= 8"
    );
}

#[test]
fn criterion_3_gelfand_graev_suite() {
    let cache = shared_cache();
    for &(n, q, eps) in &ORACLE_SETS {
        let p = params(n, q, eps);
        // The pipeline runs every Gelfand-Graev check: d distinct induced
        // characters, multiplicity-freeness, the Mackey sum identity, and
        // <Gamma_z, Res chi~> = 1 exactly on regular wave fronts.
        let outcome = slchar_oracle::run_pipeline(&p, &cache).unwrap();
        for c in outcome.checks.iter().filter(|c| {
            c.name.contains("Gamma") || c.name.contains("Gelfand-Graev characters = d")
        }) {
            assert!(c.passed, "{}: {}", p.sl_name(), c.name);
        }
        println!("[PASS] criterion 3: {} Gelfand-Graev suite", p.sl_name());
    }

    // Golden value: Gamma_0 of SL_2(3) has constituent degrees {3,2,2,1}.
    let p = params(2, 3, 1);
    let sl_data = group_data(&p, GroupKind::Special, &cache).unwrap();
    let u = unipotent_subgroup(&sl_data.group).unwrap();
    let gg = gelfand_graev_family(&sl_data.group, &sl_data.classes, &u, &[]).unwrap();
    let ctx = CycContext::new(sl_data.table.exponent as u32);
    let mut degs: Vec<u64> = sl_data
        .table
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            gg_multiplicity(&gg.sums[0], row, gg.u_order, sl_data.table.exponent, &ctx).unwrap()
                == 1
        })
        .map(|(r, _)| sl_data.table.degrees[r])
        .collect();
    degs.sort_unstable();
    assert_eq!(degs, vec![1, 2, 2, 3], "SL_2(3) Gamma_0 constituent degrees");
    println!("[PASS] criterion 3: SL_2(3) Gamma_0 constituent degrees = {{3,2,2,1}}");
}

#[test]
fn criterion_4_fiber_structure() {
    let failures: Vec<String> = label_sweep_sets()
        .par_iter()
        .filter_map(|&(n, q, eps)| {
            let p = params(n, q, eps);
            let table = OrbitTable::for_group(&p).ok()?;
            let mut bad: Option<String> = None;
            for_each_family(&table, |fam| {
                if bad.is_some() {
                    return;
                }
                let nu = fam.wave_front(&table);
                let m = sl::d_nu(&nu, &p);
                if !m.is_multiple_of(fam.a_lambda) {
                    bad = Some(format!(
                        "{}: a_lambda = {} does not divide d_nu = {m}",
                        p.sl_name(),
                        fam.a_lambda
                    ));
                    return;
                }
                for xi in 0..fam.a_lambda {
                    let xi = CyclicElt::new(xi, fam.a_lambda).unwrap();
                    let mut hits = 0;
                    for a in 0..m {
                        let gamma = UnipotentSlClass::new(nu.clone(), a, &p).unwrap();
                        match sl::gggc_contains_in_family(fam, &xi, &gamma, &table) {
                            Ok(GgcIncidence::Governed(true)) => hits += 1,
                            Ok(_) => {}
                            Err(e) => {
                                bad = Some(format!("{}: {e}", p.sl_name()));
                                return;
                            }
                        }
                    }
                    if hits != m / fam.a_lambda {
                        bad = Some(format!(
                            "{}: xi = {} hit {hits} classes, expected {}",
                            p.sl_name(),
                            xi.value,
                            m / fam.a_lambda
                        ));
                        return;
                    }
                }
            })
            .ok()?;
            bad
        })
        .collect();
    assert!(failures.is_empty(), "fiber failures: {failures:?}");

    // Exercise the public per-label route on a small set.
    let p = params(2, 3, 1);
    let table = OrbitTable::for_group(&p).unwrap();
    for fam in enumerate_families(&table).unwrap() {
        let nu = fam.wave_front(&table);
        let m = sl::d_nu(&nu, &p);
        for xi in 0..fam.a_lambda {
            let chi = SlCharLabel {
                s: fam.s.clone(),
                lambda: fam.lambda.clone(),
                xi: CyclicElt::new(xi, fam.a_lambda).unwrap(),
            };
            let hits = (0..m)
                .filter(|&a| {
                    sl::gggc_contains(
                        &chi,
                        &UnipotentSlClass::new(nu.clone(), a, &p).unwrap(),
                        &table,
                    )
                    .unwrap()
                        == GgcIncidence::Governed(true)
                })
                .count() as u64;
            assert_eq!(hits, m / fam.a_lambda);
        }
    }
    println!(
        "[PASS] criterion 4: a_lambda | d_nu and xi-fibers have size d_nu/a_lambda, n <= 6, q <= 8"
    );
}

#[test]
fn criterion_5_outer_equivariance() {
    let cache = shared_cache();
    // SL_3(4) exercises F_2 and gamma; SU_3(2) and SU_3(3) exercise F_p in
    // the twisted case.  The pipeline compares the oracle permutation of
    // the irreducible characters with the label action exactly on every
    // pinned constituent and setwise on the recorded ambiguity classes
    // (whose closure under the action is enforced).
    for (n, q, eps) in [(3u32, 4u64, 1i8), (3, 2, -1), (3, 3, -1)] {
        let p = params(n, q, eps);
        let outcome = slchar_oracle::run_pipeline(&p, &cache).unwrap();
        let check = outcome
            .checks
            .iter()
            .find(|c| c.name.contains("outer action"))
            .expect("outer action check present");
        assert!(check.passed, "{}: {}", p.sl_name(), check.name);
        println!(
            "[PASS] criterion 5: {} outer action matches the label action ({} ambiguity classes, setwise)",
            p.sl_name(),
            outcome.ambiguity.len()
        );
    }
}

#[test]
fn criterion_6_stabilizer_factorization() {
    let failures: Vec<String> = label_sweep_sets()
        .par_iter()
        .filter_map(|&(n, q, eps)| {
            let p = params(n, q, eps);
            let table = OrbitTable::for_group(&p).ok()?;
            let mut cache = ActionCache::new();
            let mut bad: Option<String> = None;
            for_each_family(&table, |fam| {
                if bad.is_some() {
                    return;
                }
                match stabilizer_condition(fam, &table, &mut cache) {
                    Ok(rep) => {
                        if !rep.factorizes {
                            bad = Some(format!(
                                "{}: stabilizer does not factorize for {:?}",
                                p.sl_name(),
                                fam.s.pairs
                            ));
                        }
                    }
                    Err(e) => bad = Some(format!("{}: {e}", p.sl_name())),
                }
            })
            .ok()?;
            bad
        })
        .collect();
    assert!(failures.is_empty(), "stabilizer failures: {failures:?}");
    println!(
        "[PASS] criterion 6: stabilizer of chi_0 factorizes for every label, n <= 6, q <= 8"
    );
}

#[test]
fn criterion_7_diagonal_action() {
    let cache = shared_cache();
    for &(n, q, eps) in &ORACLE_SETS {
        let p = params(n, q, eps);
        let outcome = slchar_oracle::run_pipeline(&p, &cache).unwrap();
        let check = outcome
            .checks
            .iter()
            .find(|c| c.name.contains("diagonal conjugation"))
            .expect("diagonal check present");
        assert!(check.passed, "{}: {}", p.sl_name(), check.name);
        println!(
            "[PASS] criterion 7: {} determinant-class conjugation realizes xi -> xi + z",
            p.sl_name()
        );
    }
}

#[test]
fn criterion_8_calibration_soundness() {
    let cache = shared_cache();
    for &(n, q, eps) in &ORACLE_SETS {
        let p = params(n, q, eps);
        let outcome = slchar_oracle::run_pipeline(&p, &cache).unwrap();
        assert!(
            !outcome.units_ok.is_empty(),
            "{}: no global unit reconciles all series",
            p.sl_name()
        );
        assert!(
            outcome.units_ok.contains(&outcome.unit),
            "reported unit must be consistent"
        );
        println!(
            "[PASS] criterion 8: {} calibrated by the single unit {} (consistent: {:?})",
            p.sl_name(),
            outcome.unit,
            outcome.units_ok
        );
    }
}
