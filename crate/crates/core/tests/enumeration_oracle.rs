#![allow(clippy::needless_range_loop)]

//! Cross-checks the pruned lattice generator against plain brute force:
//! every bounded order on labeled elements, every commutative table with the
//! top as identity, filtered by `verify_lattice` and reduced up to
//! isomorphism by search.

use lattice_lift::{
    enumerate_small_lattices, find_isomorphism, verify_lattice, FiniteLattice, LatticeData,
};

fn brute_force(n: usize) -> Vec<FiniteLattice> {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let (bot, top) = (0, n - 1);
    let interior: Vec<usize> = (1..top).collect();
    let rel_pairs: Vec<(usize, usize)> = interior
        .iter()
        .flat_map(|&i| {
            interior
                .iter()
                .filter(move |&&j| j != i)
                .map(move |&j| (i, j))
        })
        .collect();
    let cells: Vec<(usize, usize)> = interior
        .iter()
        .flat_map(|&i| {
            interior
                .iter()
                .filter(move |&&j| j >= i)
                .map(move |&j| (i, j))
        })
        .collect();
    let mut found: Vec<FiniteLattice> = Vec::new();
    for rel in 0u64..(1 << rel_pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
            leq[bot][x] = true;
            leq[x][top] = true;
        }
        for (b, &(i, j)) in rel_pairs.iter().enumerate() {
            if rel >> b & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let mut assignment = vec![0usize; cells.len()];
        loop {
            let mut mul = vec![vec![0; n]; n];
            for x in 0..n {
                mul[top][x] = x;
                mul[x][top] = x;
            }
            for (&(i, j), &v) in cells.iter().zip(&assignment) {
                mul[i][j] = v;
                mul[j][i] = v;
            }
            let data = LatticeData {
                names: names.clone(),
                leq: leq.clone(),
                mul,
                bot,
                top,
            };
            if verify_lattice(&data).unwrap().passed() {
                let l = FiniteLattice::new(data).unwrap();
                if !found.iter().any(|f| find_isomorphism(f, &l).is_some()) {
                    found.push(l);
                }
            }
            // Odometer over all tables.
            let mut k = 0;
            while k < assignment.len() {
                assignment[k] += 1;
                if assignment[k] < n {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == assignment.len() {
                break;
            }
        }
    }
    found
}

#[test]
fn generator_matches_brute_force() {
    for n in 2..=5 {
        let oracle = brute_force(n);
        let generated: Vec<FiniteLattice> = enumerate_small_lattices(n, usize::MAX).collect();
        assert_eq!(generated.len(), oracle.len(), "n = {n}");
        for g in &generated {
            assert!(verify_lattice(&g.to_data()).unwrap().passed());
            assert!(
                oracle.iter().any(|o| find_isomorphism(o, g).is_some()),
                "n = {n}"
            );
        }
        for (i, a) in generated.iter().enumerate() {
            for b in &generated[i + 1..] {
                assert!(find_isomorphism(a, b).is_none(), "duplicate at n = {n}");
            }
        }
    }
}

#[test]
fn known_counts() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| enumerate_small_lattices(n, usize::MAX).count())
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 7, 26, 129]);
}
