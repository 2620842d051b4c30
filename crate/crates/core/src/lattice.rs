//! Finite multiplicative lattices.
//!
//! A [`FiniteLattice`] is a complete lattice on a small carrier (at most
//! [`MAX_ELEMENTS`] elements) carrying a commutative multiplication with the
//! top element as identity that distributes over all joins. Elements are dense
//! indices `0..n`; names are kept only for I/O.
//!
//! Raw, unchecked tables live in [`LatticeData`]. [`verify_lattice`] reports
//! every failed axiom with a witness, and [`FiniteLattice::new`] only accepts
//! data that passes.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask, MAX_ELEMENTS};
use crate::error::LoadError;

/// Unchecked lattice tables, as read from a file or produced by a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeData {
    pub names: Vec<String>,
    /// `leq[x][y]` iff `x ≤ y`.
    pub leq: Vec<Vec<bool>>,
    pub mul: Vec<Vec<usize>>,
    pub bot: usize,
    pub top: usize,
}

/// A failed lattice axiom together with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum LatticeViolation {
    NotReflexive {
        x: usize,
    },
    NotAntisymmetric {
        x: usize,
        y: usize,
    },
    NotTransitive {
        x: usize,
        y: usize,
        z: usize,
    },
    BotNotLeast {
        x: usize,
    },
    TopNotGreatest {
        x: usize,
    },
    NoJoin {
        x: usize,
        y: usize,
    },
    NoMeet {
        x: usize,
        y: usize,
    },
    NotCommutative {
        x: usize,
        y: usize,
    },
    NotAssociative {
        x: usize,
        y: usize,
        z: usize,
    },
    TopNotIdentity {
        x: usize,
    },
    BotNotAnnihilating {
        x: usize,
    },
    /// `a·(b ∨ c) ≠ a·b ∨ a·c`.
    NotDistributive {
        a: usize,
        b: usize,
        c: usize,
    },
}

impl LatticeViolation {
    /// Re-checks the witness against the raw tables it was reported for.
    /// Assumes the tables are well-formed; for `NotDistributive` the joins
    /// must exist.
    pub fn holds(&self, data: &LatticeData) -> bool {
        let leq = &data.leq;
        let mul = &data.mul;
        let n = data.names.len();
        let in_range = |xs: &[usize]| xs.iter().all(|&x| x < n);
        let join = |x: usize, y: usize| least(leq, upper_bounds(leq, x, y));
        use LatticeViolation::*;
        match *self {
            NotReflexive { x } => in_range(&[x]) && !leq[x][x],
            NotAntisymmetric { x, y } => in_range(&[x, y]) && x != y && leq[x][y] && leq[y][x],
            NotTransitive { x, y, z } => {
                in_range(&[x, y, z]) && leq[x][y] && leq[y][z] && !leq[x][z]
            }
            BotNotLeast { x } => in_range(&[x]) && !leq[data.bot][x],
            TopNotGreatest { x } => in_range(&[x]) && !leq[x][data.top],
            NoJoin { x, y } => in_range(&[x, y]) && join(x, y).is_none(),
            NoMeet { x, y } => {
                in_range(&[x, y]) && greatest(leq, lower_bounds(leq, x, y)).is_none()
            }
            NotCommutative { x, y } => in_range(&[x, y]) && mul[x][y] != mul[y][x],
            NotAssociative { x, y, z } => {
                in_range(&[x, y, z]) && mul[mul[x][y]][z] != mul[x][mul[y][z]]
            }
            TopNotIdentity { x } => {
                in_range(&[x]) && (mul[data.top][x] != x || mul[x][data.top] != x)
            }
            BotNotAnnihilating { x } => {
                in_range(&[x]) && (mul[data.bot][x] != data.bot || mul[x][data.bot] != data.bot)
            }
            NotDistributive { a, b, c } => {
                in_range(&[a, b, c])
                    && match (join(b, c), join(mul[a][b], mul[a][c])) {
                        (Some(bc), Some(rhs)) => mul[a][bc] != rhs,
                        _ => false,
                    }
            }
        }
    }

    /// Human-readable form using element names.
    pub fn render(&self, names: &[String]) -> String {
        let n = |i: &usize| names.get(*i).map(String::as_str).unwrap_or("?");
        use LatticeViolation::*;
        match self {
            NotReflexive { x } => format!("order not reflexive at {}", n(x)),
            NotAntisymmetric { x, y } => {
                format!("order not antisymmetric: {} ≤ {} ≤ {}", n(x), n(y), n(x))
            }
            NotTransitive { x, y, z } => format!(
                "order not transitive: {} ≤ {} ≤ {} but not {} ≤ {}",
                n(x),
                n(y),
                n(z),
                n(x),
                n(z)
            ),
            BotNotLeast { x } => format!("bottom is not below {}", n(x)),
            TopNotGreatest { x } => format!("top is not above {}", n(x)),
            NoJoin { x, y } => format!("{} and {} have no least upper bound", n(x), n(y)),
            NoMeet { x, y } => format!("{} and {} have no greatest lower bound", n(x), n(y)),
            NotCommutative { x, y } => format!("{}·{} ≠ {}·{}", n(x), n(y), n(y), n(x)),
            NotAssociative { x, y, z } => {
                format!(
                    "({}·{})·{} ≠ {}·({}·{})",
                    n(x),
                    n(y),
                    n(z),
                    n(x),
                    n(y),
                    n(z)
                )
            }
            TopNotIdentity { x } => format!("1·{} ≠ {}", n(x), n(x)),
            BotNotAnnihilating { x } => format!("0·{} ≠ 0", n(x)),
            NotDistributive { a, b, c } => format!(
                "{}·({} ∨ {}) ≠ {}·{} ∨ {}·{}",
                n(a),
                n(b),
                n(c),
                n(a),
                n(b),
                n(a),
                n(c)
            ),
        }
    }
}

/// Outcome of [`verify_lattice`]: empty `violations` means every axiom holds.
/// At most one witness is kept per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeVerdict {
    pub violations: Vec<LatticeViolation>,
}

impl LatticeVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_shape(data: &LatticeData) -> Result<(), LoadError> {
    let n = data.names.len();
    if n == 0 {
        return Err(LoadError::Empty);
    }
    if n > MAX_ELEMENTS {
        return Err(LoadError::TooLarge {
            size: n,
            max: MAX_ELEMENTS,
        });
    }
    let mut seen = HashMap::new();
    for (i, name) in data.names.iter().enumerate() {
        if seen.insert(name.as_str(), i).is_some() {
            return Err(LoadError::DuplicateName(name.clone()));
        }
    }
    if data.leq.len() != n || data.leq.iter().any(|row| row.len() != n) {
        return Err(LoadError::DimensionMismatch("order relation"));
    }
    if data.mul.len() != n || data.mul.iter().any(|row| row.len() != n) {
        return Err(LoadError::DimensionMismatch("multiplication table"));
    }
    if let Some(&v) = data.mul.iter().flatten().find(|&&v| v >= n) {
        return Err(LoadError::IndexOutOfRange(v));
    }
    for idx in [data.bot, data.top] {
        if idx >= n {
            return Err(LoadError::IndexOutOfRange(idx));
        }
    }
    Ok(())
}

/// Least element of `candidates` with respect to `leq`, if any.
fn least(leq: &[Vec<bool>], candidates: Mask) -> Option<usize> {
    bits::members(candidates).find(|&u| bits::members(candidates).all(|v| leq[u][v]))
}

fn greatest(leq: &[Vec<bool>], candidates: Mask) -> Option<usize> {
    bits::members(candidates).find(|&u| bits::members(candidates).all(|v| leq[v][u]))
}

fn upper_bounds(leq: &[Vec<bool>], x: usize, y: usize) -> Mask {
    (0..leq.len())
        .filter(|&u| leq[x][u] && leq[y][u])
        .fold(0, |m, u| m | bits::bit(u))
}

fn lower_bounds(leq: &[Vec<bool>], x: usize, y: usize) -> Mask {
    (0..leq.len())
        .filter(|&u| leq[u][x] && leq[u][y])
        .fold(0, |m, u| m | bits::bit(u))
}

/// Checks every multiplicative lattice axiom on raw tables.
///
/// Malformed input (wrong dimensions, out-of-range indices, duplicate names)
/// is a [`LoadError`], not a violation. If the order relation is not a partial
/// order, only the order violations are reported, since joins are meaningless
/// without one.
///
/// Complete join distributivity is checked in its finite form: binary
/// distributivity plus annihilation by the bottom element.
pub fn verify_lattice(data: &LatticeData) -> Result<LatticeVerdict, LoadError> {
    check_shape(data)?;
    let n = data.names.len();
    let leq = &data.leq;
    let mul = &data.mul;
    let mut v = Vec::new();

    push(
        &mut v,
        (0..n)
            .find(|&x| !leq[x][x])
            .map(|x| LatticeViolation::NotReflexive { x }),
    );
    push(
        &mut v,
        pairs(n)
            .find(|&(x, y)| x != y && leq[x][y] && leq[y][x])
            .map(|(x, y)| LatticeViolation::NotAntisymmetric { x, y }),
    );
    push(
        &mut v,
        triples(n)
            .find(|&(x, y, z)| leq[x][y] && leq[y][z] && !leq[x][z])
            .map(|(x, y, z)| LatticeViolation::NotTransitive { x, y, z }),
    );
    if !v.is_empty() {
        return Ok(LatticeVerdict { violations: v });
    }

    push(
        &mut v,
        (0..n)
            .find(|&x| !leq[data.bot][x])
            .map(|x| LatticeViolation::BotNotLeast { x }),
    );
    push(
        &mut v,
        (0..n)
            .find(|&x| !leq[x][data.top])
            .map(|x| LatticeViolation::TopNotGreatest { x }),
    );

    let mut join = vec![None; n * n];
    let mut meet = vec![None; n * n];
    for (x, y) in pairs(n) {
        join[x * n + y] = least(leq, upper_bounds(leq, x, y));
        meet[x * n + y] = greatest(leq, lower_bounds(leq, x, y));
    }
    push(
        &mut v,
        pairs(n)
            .find(|&(x, y)| join[x * n + y].is_none())
            .map(|(x, y)| LatticeViolation::NoJoin { x, y }),
    );
    push(
        &mut v,
        pairs(n)
            .find(|&(x, y)| meet[x * n + y].is_none())
            .map(|(x, y)| LatticeViolation::NoMeet { x, y }),
    );

    push(
        &mut v,
        pairs(n)
            .find(|&(x, y)| mul[x][y] != mul[y][x])
            .map(|(x, y)| LatticeViolation::NotCommutative { x, y }),
    );
    push(
        &mut v,
        triples(n)
            .find(|&(x, y, z)| mul[mul[x][y]][z] != mul[x][mul[y][z]])
            .map(|(x, y, z)| LatticeViolation::NotAssociative { x, y, z }),
    );
    push(
        &mut v,
        (0..n)
            .find(|&x| mul[data.top][x] != x || mul[x][data.top] != x)
            .map(|x| LatticeViolation::TopNotIdentity { x }),
    );
    push(
        &mut v,
        (0..n)
            .find(|&x| mul[data.bot][x] != data.bot || mul[x][data.bot] != data.bot)
            .map(|x| LatticeViolation::BotNotAnnihilating { x }),
    );
    // Distributivity needs joins; skip it when they are missing.
    if join.iter().all(Option::is_some) {
        let j = |x: usize, y: usize| join[x * n + y].unwrap();
        push(
            &mut v,
            triples(n)
                .find(|&(a, b, c)| mul[a][j(b, c)] != j(mul[a][b], mul[a][c]))
                .map(|(a, b, c)| LatticeViolation::NotDistributive { a, b, c }),
        );
    }
    Ok(LatticeVerdict { violations: v })
}

fn push(v: &mut Vec<LatticeViolation>, found: Option<LatticeViolation>) {
    v.extend(found);
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// Error from [`FiniteLattice::new`].
#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("lattice axioms violated: {}", .0.len())]
    Axioms(Vec<LatticeViolation>),
}

/// The interval `[lo, hi] = {x : lo ≤ x ≤ hi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
    pub members: Mask,
}

/// The Dilworth identities that define (weak) meet and join principal elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrincipalKind {
    /// `a ∧ xb = x((a:x) ∧ b)` for all `a, b`.
    Meet,
    /// The meet identity with `b = 1`.
    WeakMeet,
    /// `a ∨ (b:x) = (ax ∨ b):x` for all `a, b`.
    Join,
    /// The join identity with `b = 0`.
    WeakJoin,
}

/// Principal-type flags of one element, see [`FiniteLattice::classify_element`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementClass {
    pub meet_principal: bool,
    pub weak_meet_principal: bool,
    pub join_principal: bool,
    pub weak_join_principal: bool,
    pub principal: bool,
    pub weak_principal: bool,
    /// Always true on a finite carrier: every join is a finite join.
    pub compact: bool,
}

/// A verified finite multiplicative lattice with precomputed join, meet and
/// residual tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    /// `up[x]` = elements `≥ x`.
    up: Vec<Mask>,
    /// `down[x]` = elements `≤ x`.
    down: Vec<Mask>,
    mul: Vec<usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
    residual: Vec<usize>,
    bot: usize,
    top: usize,
}

impl FiniteLattice {
    pub fn new(data: LatticeData) -> Result<Self, LatticeError> {
        let verdict = verify_lattice(&data)?;
        if !verdict.passed() {
            return Err(LatticeError::Axioms(verdict.violations));
        }
        Ok(Self::from_verified(data))
    }

    fn from_verified(data: LatticeData) -> Self {
        let n = data.names.len();
        let mask_of =
            |f: &dyn Fn(usize) -> bool| (0..n).filter(|&y| f(y)).fold(0, |m, y| m | bits::bit(y));
        let up: Vec<Mask> = (0..n).map(|x| mask_of(&|y| data.leq[x][y])).collect();
        let down: Vec<Mask> = (0..n).map(|x| mask_of(&|y| data.leq[y][x])).collect();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for (x, y) in pairs(n) {
            join[x * n + y] = least(&data.leq, up[x] & up[y]).expect("verified lattice");
            meet[x * n + y] = greatest(&data.leq, down[x] & down[y]).expect("verified lattice");
        }
        let mul: Vec<usize> = data.mul.iter().flatten().copied().collect();
        let mut lattice = FiniteLattice {
            names: data.names,
            up,
            down,
            mul,
            join,
            meet,
            residual: Vec::new(),
            bot: data.bot,
            top: data.top,
        };
        let mut residual = vec![0; n * n];
        for (a, b) in pairs(n) {
            let ys = (0..n)
                .filter(|&y| lattice.leq(lattice.mul(b, y), a))
                .fold(0, |m, y| m | bits::bit(y));
            residual[a * n + b] = lattice.join(ys);
        }
        lattice.residual = residual;
        lattice
    }

    /// Loads and verifies a lattice JSON file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LatticeError> {
        Self::new(LatticeData::from_path(path)?)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders a subset as `{a,b,c}`.
    pub fn render_set(&self, set: Mask) -> String {
        let parts: Vec<&str> = bits::members(set).map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn carrier(&self) -> Mask {
        bits::full(self.len())
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        bits::contains(self.up[x], y)
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.len() + y]
    }

    #[inline]
    pub fn join2(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet2(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    /// Least upper bound of `set`; the empty join is the bottom element.
    pub fn join(&self, set: Mask) -> usize {
        bits::members(set).fold(self.bot, |acc, x| self.join2(acc, x))
    }

    /// Greatest lower bound of `set`; the empty meet is the top element.
    pub fn meet(&self, set: Mask) -> usize {
        bits::members(set).fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// `(a:b)`, the join of all `y` with `b·y ≤ a`.
    #[inline]
    pub fn residual(&self, a: usize, b: usize) -> usize {
        self.residual[a * self.len() + b]
    }

    /// `[0, x]`.
    pub fn down_set(&self, x: usize) -> Mask {
        self.down[x]
    }

    /// `[x, 1]`.
    pub fn up_set(&self, x: usize) -> Mask {
        self.up[x]
    }

    /// `[lo, hi]`, or `None` when `lo ≰ hi`.
    pub fn interval(&self, lo: usize, hi: usize) -> Option<Interval> {
        self.leq(lo, hi).then(|| Interval {
            lo,
            hi,
            members: self.up[lo] & self.down[hi],
        })
    }

    /// Elementwise product set `{x·y : x ∈ xs, y ∈ ys}`.
    pub fn mul_sets(&self, xs: Mask, ys: Mask) -> Mask {
        let mut out = 0;
        for x in bits::members(xs) {
            for y in bits::members(ys) {
                out |= bits::bit(self.mul(x, y));
            }
        }
        out
    }

    /// Whether every element is the join of the members of `set` below it.
    pub fn generates(&self, set: Mask) -> bool {
        (0..self.len()).all(|x| self.join(set & self.down[x]) == x)
    }

    /// First `(a, b)` at which the chosen Dilworth identity fails for `x`.
    pub fn principal_failure(&self, x: usize, kind: PrincipalKind) -> Option<(usize, usize)> {
        let n = self.len();
        let bs: Vec<usize> = match kind {
            PrincipalKind::Meet | PrincipalKind::Join => (0..n).collect(),
            PrincipalKind::WeakMeet => vec![self.top],
            PrincipalKind::WeakJoin => vec![self.bot],
        };
        let holds = |a: usize, b: usize| match kind {
            PrincipalKind::Meet | PrincipalKind::WeakMeet => {
                self.meet2(a, self.mul(x, b)) == self.mul(x, self.meet2(self.residual(a, x), b))
            }
            PrincipalKind::Join | PrincipalKind::WeakJoin => {
                self.join2(a, self.residual(b, x))
                    == self.residual(self.join2(self.mul(a, x), b), x)
            }
        };
        (0..n)
            .flat_map(|a| bs.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !holds(a, b))
    }

    /// Exhaustively tests the Dilworth identities for `x`.
    pub fn classify_element(&self, x: usize) -> ElementClass {
        let ok = |kind| self.principal_failure(x, kind).is_none();
        let meet_principal = ok(PrincipalKind::Meet);
        let weak_meet_principal = ok(PrincipalKind::WeakMeet);
        let join_principal = ok(PrincipalKind::Join);
        let weak_join_principal = ok(PrincipalKind::WeakJoin);
        ElementClass {
            meet_principal,
            weak_meet_principal,
            join_principal,
            weak_join_principal,
            principal: meet_principal && join_principal,
            weak_principal: weak_meet_principal && weak_join_principal,
            compact: true,
        }
    }

    fn elements_where(&self, pred: impl Fn(&ElementClass) -> bool) -> Mask {
        (0..self.len())
            .filter(|&x| pred(&self.classify_element(x)))
            .fold(0, |m, x| m | bits::bit(x))
    }

    pub fn meet_principal_elements(&self) -> Mask {
        self.elements_where(|c| c.meet_principal)
    }

    pub fn weak_meet_principal_elements(&self) -> Mask {
        self.elements_where(|c| c.weak_meet_principal)
    }

    pub fn principal_elements(&self) -> Mask {
        self.elements_where(|c| c.principal)
    }

    /// `ab = 0` implies `a = 0` or `b = 0`.
    pub fn is_domain(&self) -> bool {
        pairs(self.len()).all(|(a, b)| self.mul(a, b) != self.bot || a == self.bot || b == self.bot)
    }

    /// Back to raw tables, e.g. for re-verification or serialization.
    pub fn to_data(&self) -> LatticeData {
        let n = self.len();
        LatticeData {
            names: self.names.clone(),
            leq: (0..n)
                .map(|x| (0..n).map(|y| self.leq(x, y)).collect())
                .collect(),
            mul: (0..n)
                .map(|x| (0..n).map(|y| self.mul(x, y)).collect())
                .collect(),
            bot: self.bot,
            top: self.top,
        }
    }

    /// Whether `perm` (an index map from `self` to `other`) preserves order
    /// and multiplication in both directions.
    pub fn is_isomorphism(&self, other: &FiniteLattice, perm: &[usize]) -> bool {
        let n = self.len();
        if other.len() != n || perm.len() != n {
            return false;
        }
        let image = perm.iter().fold(0, |m, &p| m | bits::bit(p));
        image == other.carrier()
            && pairs(n).all(|(x, y)| {
                self.leq(x, y) == other.leq(perm[x], perm[y])
                    && perm[self.mul(x, y)] == other.mul(perm[x], perm[y])
            })
    }
}

impl fmt::Display for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice on {}", self.render_set(self.carrier()))
    }
}

/// On-disk lattice description.
///
/// ```json
/// { "elements": ["0","a","1"], "order": {"covers": [["0","a"],["a","1"]]},
///   "mul": [["a","a","a"]], "top": "1", "bot": "0" }
/// ```
///
/// Products are commutative, so `[x, y, z]` also sets `y·x`. Products with
/// the top or bottom element may be omitted; any other missing product is an
/// error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub order: OrderSpec,
    pub mul: Vec<[String; 3]>,
    pub top: String,
    pub bot: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderSpec {
    /// Hasse covers; the loader takes the reflexive-transitive closure.
    Covers(Vec<[String; 2]>),
    /// Pairs of the relation; also closed reflexively and transitively.
    Leq(Vec<[String; 2]>),
}

impl LatticeData {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: LatticeFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self, LoadError> {
        let n = file.elements.len();
        if n == 0 {
            return Err(LoadError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LoadError::TooLarge {
                size: n,
                max: MAX_ELEMENTS,
            });
        }
        let mut index = HashMap::new();
        for (i, name) in file.elements.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LoadError::DuplicateName(name.clone()));
            }
        }
        let idx = |name: &String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LoadError::UnknownElement(name.clone()))
        };
        let top = idx(&file.top)?;
        let bot = idx(&file.bot)?;

        let pairs = match &file.order {
            OrderSpec::Covers(p) | OrderSpec::Leq(p) => p,
        };
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for [lo, hi] in pairs {
            leq[idx(lo)?][idx(hi)?] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }

        let mut mul: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for [x, y, z] in &file.mul {
            let (x, y, z) = (idx(x)?, idx(y)?, idx(z)?);
            for (p, q) in [(x, y), (y, x)] {
                match mul[p][q] {
                    Some(prev) if prev != z => {
                        return Err(LoadError::ConflictingProduct(
                            file.elements[p].clone(),
                            file.elements[q].clone(),
                        ))
                    }
                    _ => mul[p][q] = Some(z),
                }
            }
        }
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = match mul[x][y] {
                    Some(z) => z,
                    None if x == top => y,
                    None if y == top => x,
                    None if x == bot || y == bot => bot,
                    None => {
                        return Err(LoadError::MissingProduct(
                            file.elements[x].clone(),
                            file.elements[y].clone(),
                        ))
                    }
                };
            }
        }
        Ok(LatticeData {
            names: file.elements.clone(),
            leq,
            mul: table,
            bot,
            top,
        })
    }

    /// Writes the tables back as a file description with the full `leq`
    /// relation and every product listed once.
    pub fn to_file(&self) -> LatticeFile {
        let n = self.names.len();
        let name = |i: usize| self.names[i].clone();
        let mut leq = Vec::new();
        let mut mul = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.leq[x][y] && x != y {
                    leq.push([name(x), name(y)]);
                }
                if x <= y {
                    mul.push([name(x), name(y), name(self.mul[x][y])]);
                }
            }
        }
        LatticeFile {
            elements: self.names.clone(),
            order: OrderSpec::Leq(leq),
            mul,
            top: name(self.top),
            bot: name(self.bot),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn l6() -> FiniteLattice {
        fixtures::l6()
    }

    fn id(l: &FiniteLattice, names: &str) -> Mask {
        bits::from_indices(
            names
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| l.index_of(s).unwrap()),
        )
    }

    #[test]
    fn l6_and_two_element_pass() {
        assert!(verify_lattice(&fixtures::l6_data()).unwrap().passed());
        assert!(verify_lattice(&fixtures::two().to_data()).unwrap().passed());
    }

    #[test]
    fn mutated_product_breaks_distributivity() {
        let l = l6();
        let mut data = l.to_data();
        let (a, d) = (l.index_of("a").unwrap(), l.index_of("d").unwrap());
        data.mul[a][d] = d;
        data.mul[d][a] = d;
        let verdict = verify_lattice(&data).unwrap();
        assert!(verdict
            .violations
            .iter()
            .any(|v| matches!(v, LatticeViolation::NotDistributive { .. })));
        // Witness re-checked against the mutated table.
        let w = verdict
            .violations
            .iter()
            .find_map(|v| match *v {
                LatticeViolation::NotDistributive { a, b, c } => Some((a, b, c)),
                _ => None,
            })
            .unwrap();
        let j = |x, y| l.join2(x, y);
        assert_ne!(
            data.mul[w.0][j(w.1, w.2)],
            j(data.mul[w.0][w.1], data.mul[w.0][w.2])
        );

        // One-sided mutation is caught as non-commutative.
        let mut data = l.to_data();
        data.mul[a][d] = d;
        let verdict = verify_lattice(&data).unwrap();
        assert!(verdict
            .violations
            .contains(&LatticeViolation::NotCommutative { x: a, y: d }));
        assert!(verdict.violations.iter().all(|v| v.holds(&data)));
    }

    #[test]
    fn malformed_input_is_a_load_error() {
        let mut data = l6().to_data();
        data.mul.pop();
        assert!(matches!(
            verify_lattice(&data),
            Err(LoadError::DimensionMismatch(_))
        ));
        let mut data = l6().to_data();
        data.mul[1][1] = 17;
        assert!(matches!(
            verify_lattice(&data),
            Err(LoadError::IndexOutOfRange(17))
        ));
        let mut data = l6().to_data();
        data.names[1] = "b".into();
        assert!(matches!(
            verify_lattice(&data),
            Err(LoadError::DuplicateName(_))
        ));
    }

    #[test]
    fn non_partial_order_reported() {
        let mut data = fixtures::chain3(true).to_data();
        data.leq[2][1] = true; // 1 ≤ x and x ≤ 1
        let verdict = verify_lattice(&data).unwrap();
        assert!(matches!(
            verdict.violations[0],
            LatticeViolation::NotAntisymmetric { .. }
        ));
    }

    #[test]
    fn missing_join_reported() {
        // 0 < a, b < c, d < 1 with no least upper bound for {a, b}.
        let names: Vec<String> = ["0", "a", "b", "c", "d", "1"].map(String::from).to_vec();
        let covers = [
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 5),
            (4, 5),
        ];
        let mut leq = vec![vec![false; 6]; 6];
        for x in 0..6 {
            leq[x][x] = true;
            leq[0][x] = true;
            leq[x][5] = true;
        }
        for (x, y) in covers {
            leq[x][y] = true;
        }
        let mul = (0..6)
            .map(|x| {
                (0..6)
                    .map(|y| {
                        if x == 5 {
                            y
                        } else if y == 5 {
                            x
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let data = LatticeData {
            names,
            leq,
            mul,
            bot: 0,
            top: 5,
        };
        let verdict = verify_lattice(&data).unwrap();
        assert!(verdict
            .violations
            .contains(&LatticeViolation::NoJoin { x: 1, y: 2 }));
    }

    #[test]
    fn joins_and_meets_on_l6() {
        let l = l6();
        let x = |s| l.index_of(s).unwrap();
        assert_eq!(l.join(id(&l, "b,c")), x("d"));
        assert_eq!(l.join(0), x("0"));
        assert_eq!(l.join(id(&l, "a")), x("a"));
        assert_eq!(l.meet(id(&l, "b,c")), x("a"));
        assert_eq!(l.meet(0), x("1"));
        assert_eq!(l.meet(id(&l, "d,1")), x("d"));
    }

    #[test]
    fn residuals_on_l6() {
        let l = l6();
        let x = |s| l.index_of(s).unwrap();
        assert_eq!(l.residual(x("c"), x("b")), x("d"));
        for a in 0..l.len() {
            assert_eq!(l.residual(a, l.top()), a);
            assert_eq!(l.residual(l.top(), a), l.top());
        }
    }

    #[test]
    fn intervals() {
        let l = l6();
        let x = |s| l.index_of(s).unwrap();
        let iv = l.interval(x("a"), x("d")).unwrap();
        assert_eq!(iv.members, id(&l, "a,b,c,d"));
        assert!(l.interval(x("b"), x("c")).is_none());
        assert_eq!(l.down_set(x("b")), id(&l, "0,a,b"));
    }

    #[test]
    fn classification_on_l6() {
        let l = l6();
        let x = |s| l.index_of(s).unwrap();
        assert!(l.classify_element(x("a")).weak_meet_principal);
        assert!(!l.classify_element(x("b")).weak_meet_principal);
        // First failing `a` in index order is `a` itself; `c` fails too:
        // c ∧ b = a but b·(c:b) = b·d = 0.
        assert_eq!(
            l.principal_failure(x("b"), PrincipalKind::WeakMeet),
            Some((x("a"), l.top()))
        );
        assert_eq!(l.meet2(x("c"), x("b")), x("a"));
        assert_eq!(l.mul(x("b"), l.residual(x("c"), x("b"))), l.bot());
        assert_eq!(l.weak_meet_principal_elements(), id(&l, "0,a,1"));
        let top = l.classify_element(l.top());
        assert!(top.principal && top.weak_principal && top.compact);
        assert!(l.classify_element(l.bot()).weak_meet_principal);
    }

    #[test]
    fn domains() {
        assert!(!l6().is_domain());
        assert!(fixtures::two().is_domain());
        assert!(fixtures::chain3(true).is_domain());
        assert!(!fixtures::chain3(false).is_domain());
    }

    #[test]
    fn file_round_trip_preserves_tables() {
        let data = fixtures::l6_data();
        let text = serde_json::to_string(&data.to_file()).unwrap();
        assert_eq!(LatticeData::from_json(&text).unwrap(), data);
    }

    #[test]
    fn file_errors() {
        let missing = r#"{"elements":["0","a","b","1"],"order":{"covers":[["0","a"],["0","b"],["a","1"],["b","1"]]},
            "mul":[["a","a","a"],["b","b","b"]],"top":"1","bot":"0"}"#;
        assert!(matches!(
            LatticeData::from_json(missing),
            Err(LoadError::MissingProduct(..))
        ));
        let unknown =
            r#"{"elements":["0","1"],"order":{"leq":[["0","z"]]},"mul":[],"top":"1","bot":"0"}"#;
        assert!(matches!(
            LatticeData::from_json(unknown),
            Err(LoadError::UnknownElement(_))
        ));
        let conflict = r#"{"elements":["0","a","1"],"order":{"covers":[["0","a"],["a","1"]]},
            "mul":[["a","a","a"],["a","a","0"]],"top":"1","bot":"0"}"#;
        assert!(matches!(
            LatticeData::from_json(conflict),
            Err(LoadError::ConflictingProduct(..))
        ));
        assert!(matches!(
            LatticeData::from_json("{"),
            Err(LoadError::Json(_))
        ));
    }
}
