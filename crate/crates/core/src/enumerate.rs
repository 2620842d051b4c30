//! Exhaustive generation of small multiplicative lattices.
//!
//! Orders are generated first: every bounded poset on `n` elements whose
//! interior is a partial order on `n − 2` labels, kept when it is a lattice
//! and reduced up to isomorphism. For each order, multiplication tables are
//! found by backtracking over the interior products, pruned by monotonicity,
//! distributivity and associativity on the entries assigned so far, and
//! reduced up to order automorphisms. Every table is finally re-checked with
//! [`verify_lattice`].

use crate::bits::{self, Mask};
use crate::lattice::{verify_lattice, FiniteLattice, LatticeData};

/// Largest carrier [`enumerate_small_lattices`] accepts.
pub const MAX_ENUMERATION_SIZE: usize = 6;

/// All multiplicative lattices on `n` elements up to isomorphism, at most
/// `limit` of them, in a deterministic order.
///
/// Element `0` is the bottom, `n − 1` the top, and interior elements are
/// named `x1, x2, …`. Returns an empty stream for `n > MAX_ENUMERATION_SIZE`.
pub fn enumerate_small_lattices(n: usize, limit: usize) -> impl Iterator<Item = FiniteLattice> {
    let orders = if (1..=MAX_ENUMERATION_SIZE).contains(&n) {
        lattice_orders(n)
    } else {
        Vec::new()
    };
    orders
        .into_iter()
        .flat_map(move |leq| multiplications(n, &leq))
        .take(limit)
}

/// Every lattice with at most `max_n` elements (from 2 up), at most `limit`
/// per size.
pub fn corpus(max_n: usize, limit: usize) -> Vec<FiniteLattice> {
    (2..=max_n.min(MAX_ENUMERATION_SIZE))
        .flat_map(|n| enumerate_small_lattices(n, limit))
        .collect()
}

fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => format!("x{i}"),
        })
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Full-carrier permutation fixing bottom and top, moving interior by `p`.
fn lift_perm(n: usize, p: &[usize]) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    let mut full = vec![0; n];
    full[n - 1] = n - 1;
    for (i, &j) in p.iter().enumerate() {
        full[i + 1] = j + 1;
    }
    full
}

fn order_code(leq: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = leq.len();
    let mut code = 0u64;
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    for x in 0..n {
        for y in 0..n {
            code = code << 1 | leq[inv[x]][inv[y]] as u64;
        }
    }
    code
}

/// Lattice orders on `n` elements, one per isomorphism class.
fn lattice_orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    if n == 1 {
        return vec![vec![vec![true]]];
    }
    let k = n - 2;
    let interior_pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms: Vec<Vec<usize>> = permutations(k).iter().map(|p| lift_perm(n, p)).collect();
    let mut seen = std::collections::BTreeMap::new();
    for rel in 0u64..(1 << interior_pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
            leq[0][x] = true;
            leq[x][n - 1] = true;
        }
        for (b, &(i, j)) in interior_pairs.iter().enumerate() {
            if bits::contains(rel, b) {
                leq[i + 1][j + 1] = true;
            }
        }
        let antisymmetric = (1..=k).all(|x| (1..=k).all(|y| x == y || !(leq[x][y] && leq[y][x])));
        let transitive =
            (0..n).all(|x| (0..n).all(|y| !leq[x][y] || (0..n).all(|z| !leq[y][z] || leq[x][z])));
        if !antisymmetric || !transitive || !has_joins(&leq) {
            continue;
        }
        let canon = perms.iter().map(|p| order_code(&leq, p)).min().unwrap();
        seen.entry(canon).or_insert(leq);
    }
    seen.into_values().collect()
}

fn has_joins(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let ub: Vec<usize> = (0..n).filter(|&u| leq[x][u] && leq[y][u]).collect();
            ub.iter().any(|&u| ub.iter().all(|&v| leq[u][v]))
        })
    })
}

struct Search<'a> {
    n: usize,
    leq: &'a [Vec<bool>],
    join: Vec<usize>,
    /// `table[x*n+y]`, `usize::MAX` while unassigned.
    table: Vec<usize>,
    cells: Vec<(usize, usize)>,
    domains: Vec<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    fn get(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.table[x * self.n + y];
        (v != UNSET).then_some(v)
    }

    fn set(&mut self, x: usize, y: usize, v: usize) {
        self.table[x * self.n + y] = v;
        self.table[y * self.n + x] = v;
    }

    fn consistent(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.get(a, b) else { continue };
                for c in 0..n {
                    // Monotone in the second argument.
                    if self.leq[b][c] {
                        if let Some(ac) = self.get(a, c) {
                            if !self.leq[ab][ac] {
                                return false;
                            }
                        }
                    }
                    let Some(ac) = self.get(a, c) else { continue };
                    let bc = self.join[b * n + c];
                    if let Some(abc) = self.get(a, bc) {
                        if abc != self.join[ab * n + ac] {
                            return false;
                        }
                    }
                    if let (Some(left), Some(bc)) = (self.get(ab, c), self.get(b, c)) {
                        if let Some(right) = self.get(a, bc) {
                            if left != right {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) {
        if depth == self.cells.len() {
            self.found.push(self.table.clone());
            return;
        }
        let (x, y) = self.cells[depth];
        for vi in 0..self.domains[depth].len() {
            let v = self.domains[depth][vi];
            self.set(x, y, v);
            if self.consistent() {
                self.run(depth + 1);
            }
        }
        self.set(x, y, UNSET);
    }
}

/// All valid multiplication tables on a fixed lattice order, up to order
/// automorphisms.
fn multiplications(n: usize, leq: &[Vec<bool>]) -> Vec<FiniteLattice> {
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            join[x * n + y] = (0..n)
                .filter(|&u| leq[x][u] && leq[y][u])
                .find(|&u| (0..n).all(|v| !(leq[x][v] && leq[y][v]) || leq[u][v]))
                .unwrap();
            meet[x * n + y] = (0..n)
                .filter(|&u| leq[u][x] && leq[u][y])
                .find(|&u| (0..n).all(|v| !(leq[v][x] && leq[v][y]) || leq[v][u]))
                .unwrap();
        }
    }
    let top = n - 1;
    let mut table = vec![UNSET; n * n];
    for x in 0..n {
        table[top * n + x] = x;
        table[x * n + top] = x;
        table[x] = 0;
        table[x * n] = 0;
    }
    let cells: Vec<(usize, usize)> = (1..top)
        .flat_map(|x| (x..top).map(move |y| (x, y)))
        .collect();
    // x·y ≤ x·1 ∧ 1·y.
    let domains = cells
        .iter()
        .map(|&(x, y)| (0..n).filter(|&z| leq[z][meet[x * n + y]]).collect())
        .collect();
    let mut search = Search {
        n,
        leq,
        join,
        table,
        cells,
        domains,
        found: Vec::new(),
    };
    search.run(0);

    let automorphisms: Vec<Vec<usize>> = permutations(n.saturating_sub(2))
        .iter()
        .map(|p| lift_perm(n, p))
        .filter(|p| (0..n).all(|x| (0..n).all(|y| leq[x][y] == leq[p[x]][p[y]])))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for table in search.found {
        let canon = automorphisms
            .iter()
            .map(|p| {
                let mut t = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        t[p[x] * n + p[y]] = p[table[x * n + y]];
                    }
                }
                t
            })
            .min()
            .unwrap();
        if !seen.insert(canon) {
            continue;
        }
        let data = LatticeData {
            names: names(n),
            leq: leq.to_vec(),
            mul: table.chunks(n).map(<[usize]>::to_vec).collect(),
            bot: 0,
            top,
        };
        debug_assert!(verify_lattice(&data).map(|v| v.passed()).unwrap_or(false));
        if let Ok(lattice) = FiniteLattice::new(data) {
            out.push(lattice);
        }
    }
    out
}

/// Searches for an isomorphism from `a` to `b`, as an index map.
pub fn find_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    fn go(a: &FiniteLattice, b: &FiniteLattice, perm: &mut Vec<usize>, used: Mask) -> bool {
        let x = perm.len();
        if x == a.len() {
            return a.is_isomorphism(b, perm);
        }
        for y in 0..b.len() {
            if bits::contains(used, y) {
                continue;
            }
            let fits = (0..x)
                .all(|w| a.leq(w, x) == b.leq(perm[w], y) && a.leq(x, w) == b.leq(y, perm[w]));
            if fits {
                perm.push(y);
                if go(a, b, perm, used | bits::bit(y)) {
                    return true;
                }
                perm.pop();
            }
        }
        false
    }
    let mut perm = Vec::with_capacity(n);
    go(a, b, &mut perm, 0).then_some(perm)
}
