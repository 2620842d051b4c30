use std::sync::OnceLock;

use lattice_lift::bits::{self, Mask};
use lattice_lift::enumerate::corpus;
use lattice_lift::lifting::{analyze_wire, enumerate_wires, lift};
use lattice_lift::monoid::{build_ideal_lattice, verify_weak_ideal_system};
use lattice_lift::nat::{divides, nat_join, nat_meet, nat_residual};
use lattice_lift::{verify_lattice, FiniteLattice, QuadOrder64};
use proptest::prelude::*;

fn lattices() -> &'static [FiniteLattice] {
    static CORPUS: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus(6, usize::MAX))
}

fn lattice_and_sets() -> impl Strategy<Value = (usize, Mask, Mask)> {
    (0..lattices().len(), any::<u64>(), any::<u64>()).prop_map(|(i, s, t)| {
        let full = lattices()[i].carrier();
        (i, s & full, t & full)
    })
}

proptest! {
    #[test]
    fn join_of_union((i, s, t) in lattice_and_sets()) {
        let l = &lattices()[i];
        let pair = bits::bit(l.join(s)) | bits::bit(l.join(t));
        prop_assert_eq!(l.join(s | t), l.join(pair));
        let pair = bits::bit(l.meet(s)) | bits::bit(l.meet(t));
        prop_assert_eq!(l.meet(s | t), l.meet(pair));
    }

    #[test]
    fn multiplication_distributes_over_arbitrary_joins((i, s, _t) in lattice_and_sets(), a in 0usize..6) {
        let l = &lattices()[i];
        let a = a % l.len();
        let products = bits::members(s).fold(0, |m, x| m | bits::bit(l.mul(a, x)));
        prop_assert_eq!(l.mul(a, l.join(s)), l.join(products));
    }

    #[test]
    fn join_is_least_upper_bound((i, s, _t) in lattice_and_sets()) {
        let l = &lattices()[i];
        let j = l.join(s);
        for u in 0..l.len() {
            let upper = bits::members(s).all(|x| l.leq(x, u));
            prop_assert_eq!(upper, l.leq(j, u));
        }
    }

    #[test]
    fn lifted_closure_is_join_determined((i, s, _t) in lattice_and_sets()) {
        // On the full-carrier wire, X_r = [0, ⋁X].
        let l = &lattices()[i];
        let lifted = lift(l, l.carrier()).unwrap();
        prop_assert_eq!(lifted.system.apply(s), l.down_set(l.join(s)));
    }

    #[test]
    fn nat_join_meet_are_bounds(xs in prop::collection::vec(0u64..500, 0..5), u in 0u64..500) {
        let j = nat_join(xs.clone());
        let m = nat_meet(xs.clone());
        // u is an upper bound (divides all) iff it divides the gcd.
        prop_assert_eq!(xs.iter().all(|x| divides(&u, x)), divides(&u, &j));
        // u is a lower bound (multiple of all) iff it is a multiple of the lcm.
        prop_assert_eq!(xs.iter().all(|x| divides(x, &u)), divides(&m, &u));
    }

    #[test]
    fn nat_residual_adjunction(a in 0u64..300, b in 0u64..300, y in 0u64..300) {
        prop_assert_eq!(divides(&a, &(b * y)), divides(&nat_residual(&a, &b), &y));
    }

    #[test]
    fn norms_compose(a in -30i64..30, b in -30i64..30, c in -30i64..30, e in -30i64..30,
                     d in prop::sample::select(vec![-1i64, -2, -5, -6, -10, -13, -14, -17])) {
        let q = QuadOrder64::new(d).unwrap();
        let (m, n) = (q.norm(&a, &b), q.norm(&c, &e));
        let (x, y) = q.compose((a, b), (c, e));
        prop_assert_eq!(q.norm(&x, &y), m * n);
        prop_assert!(q.is_norm(&(m * n)).is_some());
    }
}

#[test]
fn corpus_passes_verification() {
    for l in lattices() {
        assert!(verify_lattice(&l.to_data()).unwrap().passed());
        let top = l.classify_element(l.top());
        assert!(top.meet_principal && top.join_principal && top.weak_principal && top.compact);
        assert!(l.classify_element(l.bot()).weak_meet_principal);
    }
}

#[test]
fn residual_adjunction_exhaustive() {
    for l in lattices() {
        for a in 0..l.len() {
            for b in 0..l.len() {
                for y in 0..l.len() {
                    assert_eq!(l.leq(l.mul(b, y), a), l.leq(y, l.residual(a, b)));
                }
            }
        }
    }
}

#[test]
fn distributivity_over_every_subset() {
    for l in lattices() {
        for a in 0..l.len() {
            for s in bits::submasks(l.carrier()) {
                let products = bits::members(s).fold(0, |m, x| m | bits::bit(l.mul(a, x)));
                assert_eq!(l.mul(a, l.join(s)), l.join(products));
            }
        }
    }
}

#[test]
fn wire_report_invariants() {
    for l in lattices() {
        for h in bits::submasks(l.carrier()) {
            let r = analyze_wire(l, h);
            assert_eq!(
                r.is_wire,
                r.contains_one && r.contains_zero && r.mult_closed && r.generates
            );
            assert!(!r.is_m_wire || r.is_wire);
            assert_eq!(r.m_witness.is_some(), r.is_wire && !r.is_m_wire);
            if let Some(w) = r.m_witness {
                assert!(w.holds(l, h));
            }
        }
    }
}

#[test]
fn ideal_lattice_invariants_over_wires() {
    for l in lattices() {
        for wire in enumerate_wires(l, false).unwrap() {
            let lifted = lift(l, wire.subset).unwrap();
            let r = &lifted.system;
            assert!(verify_weak_ideal_system(r).passed());
            let ideals = r.ideals();
            // Intersections of any family of r-ideals are r-ideals.
            for fam in bits::submasks(bits::full(ideals.len())) {
                let meet = bits::members(fam).fold(r.monoid().carrier(), |acc, i| acc & ideals[i]);
                assert!(ideals.contains(&meet));
            }
            let il = build_ideal_lattice(r).unwrap();
            assert!(verify_lattice(&il.lattice.to_data()).unwrap().passed());
            // Generation identity from the lifting theorem.
            for x in bits::submasks(r.monoid().carrier()) {
                let jx = l.join(lifted.to_lattice(x));
                assert_eq!(l.join(wire.subset & l.down_set(jx)), jx);
            }
            // f and g are monotone and inverse.
            for y in 0..l.len() {
                for z in 0..l.len() {
                    if l.leq(y, z) {
                        let (gy, gz) = (lifted.iso_g[y], lifted.iso_g[z]);
                        assert!(bits::is_subset(il.ideals[gy], il.ideals[gz]));
                    }
                }
            }
        }
    }
}
