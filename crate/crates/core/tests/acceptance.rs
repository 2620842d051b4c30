//! Exit criteria. Run with `-- --nocapture --test-threads=1` to see one
//! PASS/FAIL line per criterion.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use lattice_lift::bits::{self, Mask};
use lattice_lift::enumerate::{corpus, enumerate_small_lattices};
use lattice_lift::fixtures;
use lattice_lift::lifting::{
    analyze_wire, check_corollary_equivalences, check_finitary_embedding,
    check_liftability_propositions, enumerate_wires, lift,
};
use lattice_lift::monoid::{verify_ideal_system, verify_weak_ideal_system};
use lattice_lift::nat::{divides, nat_residual};
use lattice_lift::quadratic::{DivisionClosure, DivisionCounterexample, PrimeWitness};
use lattice_lift::{FiniteLattice, QuadOrder64};

/// Every lattice with at most 6 elements, up to isomorphism.
fn full_corpus() -> &'static [FiniteLattice] {
    static CORPUS: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus(6, usize::MAX))
}

fn report(
    id: &str,
    title: &str,
    limit: Option<Duration>,
    run: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(limit)) if elapsed > limit => {
            Err(format!("took {elapsed:?}, limit {limit:?}"))
        }
        (o, _) => o,
    };
    match &outcome {
        Ok(detail) => println!("[PASS] {id} {title}: {detail} ({elapsed:.2?})"),
        Err(detail) => println!("[FAIL] {id} {title}: {detail} ({elapsed:.2?})"),
    }
    if let Err(detail) = outcome {
        panic!("{id} failed: {detail}");
    }
}

fn set(l: &FiniteLattice, names: &[&str]) -> Mask {
    bits::from_indices(names.iter().map(|s| l.index_of(s).unwrap()))
}

#[test]
fn ac1_worked_example() {
    report(
        "AC1",
        "six-element lift",
        Some(Duration::from_secs(1)),
        || {
            let l = fixtures::l6();
            let lifted =
                lift(&l, set(&l, &["0", "a", "b", "c", "1"])).map_err(|e| e.to_string())?;
            let mut got = lifted.ideals_in_lattice();
            got.sort();
            let mut want: Vec<Mask> = [
                &["0"][..],
                &["0", "a"],
                &["0", "a", "b"],
                &["0", "a", "c"],
                &["0", "a", "b", "c"],
                &["0", "a", "b", "c", "1"],
            ]
            .iter()
            .map(|s| set(&l, s))
            .collect();
            want.sort();
            if got != want {
                return Err(format!("ideals {got:?} != {want:?}"));
            }
            if !verify_weak_ideal_system(&lifted.system).passed() {
                return Err("(s1)-(s4) failed".into());
            }
            let ideal = verify_ideal_system(&lifted.system).map_err(|e| e.to_string())?;
            if ideal.passed() {
                return Err("unexpectedly an ideal system".into());
            }
            if !lifted.certified() {
                return Err("isomorphism not certified".into());
            }
            Ok("6 r-ideals match, weak ideal system, not an ideal system, iso certified".into())
        },
    );
}

#[test]
fn ac2_lifting_theorem_oracle() {
    report(
        "AC2",
        "lift certifies I_r(H) ≅ L",
        Some(Duration::from_secs(60)),
        || {
            let five = enumerate_small_lattices(5, usize::MAX).count();
            let mut wires = 0;
            for l in full_corpus() {
                for w in enumerate_wires(l, false).map_err(|e| e.to_string())? {
                    let lifted = lift(l, w.subset).map_err(|e| e.to_string())?;
                    let il = &lifted.ideal_lattice.lattice;
                    if !lifted.certified() || !il.is_isomorphism(l, &lifted.iso_f) {
                        return Err(format!("H = {} on {l}", l.render_set(w.subset)));
                    }
                    wires += 1;
                }
            }
            Ok(format!(
                "{} lattices (n ≤ 6, exhaustive; all {five} at n = 5), {wires} wires, 0 violations",
                full_corpus().len()
            ))
        },
    );
}

#[test]
fn ac3_ideal_system_iff_m_wire() {
    report("AC3", "ideal system ⟺ M-wire", None, || {
        let (mut wires, mut m_wires) = (0, 0);
        for l in full_corpus() {
            for w in enumerate_wires(l, false).map_err(|e| e.to_string())? {
                let lifted = lift(l, w.subset).map_err(|e| e.to_string())?;
                let ideal = verify_ideal_system(&lifted.system).map_err(|e| e.to_string())?;
                if ideal.passed() != w.is_m_wire {
                    return Err(format!("H = {} on {l}", l.render_set(w.subset)));
                }
                wires += 1;
                m_wires += w.is_m_wire as usize;
            }
            check_corollary_equivalences(l).map_err(|e| e.to_string())?;
        }
        Ok(format!("{wires} wires ({m_wires} M-wires), 0 violations"))
    });
}

#[test]
fn ac4_liftability_propositions() {
    report("AC4", "liftability (i)-(iii)", None, || {
        let mut with_m_wire = 0;
        let mut principal_domains = 0;
        for l in full_corpus() {
            let r = check_liftability_propositions(l).map_err(|e| e.to_string())?;
            if !r.full_lift_certified {
                return Err(format!("(i) fails on {l}"));
            }
            if r.m_wire_exists {
                with_m_wire += 1;
                if !r.meet_principal_generates {
                    return Err(format!("(ii) fails on {l}"));
                }
            }
            if r.domain && r.principal_generates {
                principal_domains += 1;
                match r.principal_wire {
                    Some(c) if c.is_m_wire && c.ideal_system => {}
                    other => return Err(format!("(iii) fails on {l}: {other:?}")),
                }
            }
        }
        let l6 = fixtures::l6();
        let r = check_liftability_propositions(&l6).map_err(|e| e.to_string())?;
        if r.weak_meet_principal != set(&l6, &["0", "a", "1"]) {
            return Err(format!(
                "L6 weak meet principal = {}",
                l6.render_set(r.weak_meet_principal)
            ));
        }
        if r.m_wire_exists || r.meet_principal_generates {
            return Err("L6 contrapositive of (ii) not confirmed".into());
        }
        Ok(format!(
            "{} lattices, {with_m_wire} with an M-wire, {principal_domains} principally generated domains; L6 weak meet principal = {{0,a,1}}",
            full_corpus().len()
        ))
    });
}

#[test]
fn ac5_finitary_closure_embedding() {
    report("AC5", "r_s = r and x ↦ [0,x] iso", None, || {
        for l in full_corpus() {
            let r = check_finitary_embedding(l).map_err(|e| e.to_string())?;
            if !(r.equals_original && r.isomorphism && r.ideals == l.len()) {
                return Err(format!("{l}: {r:?}"));
            }
        }
        Ok(format!("{} lattices, 0 violations", full_corpus().len()))
    });
}

#[test]
fn ac6_quadratic_negative_case() {
    report(
        "AC6",
        "d = −17 counterexample",
        Some(Duration::from_secs(1)),
        || {
            let q = QuadOrder64::new(-17).unwrap();
            if q.norm(&5, &1) != 42 || q.norm(&2, &1) != 21 || q.is_norm(&2).is_some() {
                return Err("N(5,1) = 42, N(2,1) = 21, 2 ∉ Im(N) not reproduced".into());
            }
            let want = DivisionCounterexample {
                divisor: 21,
                multiple: 42,
                quotient: 2,
            };
            match q.division_closure_check(&50).map_err(|e| e.to_string())? {
                DivisionClosure::Counterexample(c) if c == want => {
                    Ok("counterexample (21, 42, 2), norms re-verified".into())
                }
                DivisionClosure::Counterexample(c) => Err(format!(
                    "reported ({}, {}, {}) (verified: {}), expected (21, 42, 2); \
                 (21, 42, 2) is listed among all counterexamples: {}",
                    c.divisor,
                    c.multiple,
                    c.quotient,
                    q.verify_counterexample(&c),
                    q.division_counterexamples(&50).unwrap().contains(&want)
                )),
                other => Err(format!("no counterexample: {other:?}")),
            }
        },
    );
}

#[test]
fn ac7_quadratic_positive_case() {
    report(
        "AC7",
        "d = −5 division closure to 10⁴",
        Some(Duration::from_secs(10)),
        || {
            let q = QuadOrder64::new(-5).unwrap();
            let first = q
                .division_closure_check(&10_000)
                .map_err(|e| e.to_string())?;
            let again = q
                .division_closure_check(&10_000)
                .map_err(|e| e.to_string())?;
            match first {
                DivisionClosure::ClosedUpToBound { bound: 10_000 } if again == first => {
                    Ok("closed up to 10000, deterministic".into())
                }
                other => Err(format!("{other:?}")),
            }
        },
    );
}

#[test]
fn ac8_s_generation() {
    report(
        "AC8",
        "primes ≤ 200 resolved",
        Some(Duration::from_secs(30)),
        || {
            let mut summary = Vec::new();
            for d in [-5i64, -17] {
                let q = QuadOrder64::new(d).unwrap();
                let r = q.s_wire_check(&200, &100_000).map_err(|e| e.to_string())?;
                if !r.all_resolved() {
                    return Err(format!(
                        "d = {d}: unresolved {:?}",
                        r.unresolved().collect::<Vec<_>>()
                    ));
                }
                if let Some(bad) = r.primes.iter().find(|c| !q.verify_prime_witness(c)) {
                    return Err(format!("d = {d}: witness fails to verify: {bad:?}"));
                }
                let count = |f: fn(&PrimeWitness<i64>) -> bool| {
                    r.primes.iter().filter(|c| f(&c.witness)).count()
                };
                summary.push(format!(
                    "d = {d}: {} primes ({} inert, {} norms, {} gcd)",
                    r.primes.len(),
                    count(|w| matches!(w, PrimeWitness::Inert)),
                    count(|w| matches!(w, PrimeWitness::Norm { .. })),
                    count(|w| matches!(w, PrimeWitness::GcdGenerated { .. })),
                ));
            }
            Ok(summary.join("; "))
        },
    );
}

#[test]
fn ac9_residual_adjunction() {
    report("AC9", "residual adjunction", None, || {
        for l in full_corpus() {
            for a in 0..l.len() {
                for b in 0..l.len() {
                    for y in 0..l.len() {
                        if l.leq(l.mul(b, y), a) != l.leq(y, l.residual(a, b)) {
                            return Err(format!("{l}: a = {a}, b = {b}, y = {y}"));
                        }
                    }
                }
            }
        }
        // Definitional scan: gcd of {y ≤ 400 : a | b·y}. For b ≠ 0 the set is
        // the multiples of a / gcd(a, b) ≤ 200, so the window is wide enough.
        for a in 0u64..=200 {
            for b in 0u64..=200 {
                let scan = (0u64..=400)
                    .filter(|y| divides(&a, &(b * y)))
                    .fold(0u64, num_integer::gcd);
                let closed = nat_residual(&a, &b);
                if scan != closed {
                    return Err(format!("ℕ: ({a}:{b}) scan {scan} != closed form {closed}"));
                }
                for y in 0u64..=200 {
                    if divides(&a, &(b * y)) != divides(&closed, &y) {
                        return Err(format!("ℕ adjunction: a = {a}, b = {b}, y = {y}"));
                    }
                }
            }
        }
        Ok(format!(
            "{} lattices exhaustive; ℕ for a, b ≤ 200",
            full_corpus().len()
        ))
    });
}

#[test]
fn wire_analysis_of_example_subsets() {
    let l = fixtures::l6();
    assert!(!analyze_wire(&l, set(&l, &["0", "a", "1"])).generates);
}
