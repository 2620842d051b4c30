//! Commutative monoids with zero, closure maps on their powersets, the (weak)
//! ideal system axioms, and the lattice of r-ideals.
//!
//! A [`ClosureMap`] is stored extensionally: one output subset for each of
//! the `2^m` input subsets, so `m` is capped at [`MAX_MONOID_ELEMENTS`].

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::error::{LoadError, OracleViolation};
use crate::lattice::{verify_lattice, FiniteLattice, LatticeData};

pub const MAX_MONOID_ELEMENTS: usize = 16;

/// Above this carrier size the `(XY)_r = (X_r Y_r)_r` check only runs over
/// singletons and r-ideals instead of all pairs of subsets.
const FULL_PRODUCT_CHECK_MAX: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MonoidViolation {
    NotCommutative { x: usize, y: usize },
    NotAssociative { x: usize, y: usize, z: usize },
    NotIdentity { x: usize },
    NotZero { x: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum MonoidError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("monoid axioms violated: {0:?}")]
    Axioms(Vec<MonoidViolation>),
}

/// A commutative monoid with identity `one` and absorbing `zero`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    names: Vec<String>,
    mul: Vec<usize>,
    /// `row[x]` = `x·H` as a mask.
    row: Vec<Mask>,
    one: usize,
    zero: usize,
}

impl FiniteMonoid {
    pub fn new(
        names: Vec<String>,
        mul: Vec<Vec<usize>>,
        one: usize,
        zero: usize,
    ) -> Result<Self, MonoidError> {
        let m = names.len();
        if m == 0 {
            return Err(LoadError::Empty.into());
        }
        if m > MAX_MONOID_ELEMENTS {
            return Err(LoadError::TooLarge {
                size: m,
                max: MAX_MONOID_ELEMENTS,
            }
            .into());
        }
        if mul.len() != m || mul.iter().any(|r| r.len() != m) {
            return Err(LoadError::DimensionMismatch("multiplication table").into());
        }
        if let Some(&v) = mul.iter().flatten().chain([&one, &zero]).find(|&&v| v >= m) {
            return Err(LoadError::IndexOutOfRange(v).into());
        }
        let mut v = Vec::new();
        let all = |f: &dyn Fn(usize) -> bool| (0..m).find(|&x| !f(x));
        if let Some((x, y)) = (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .find(|&(x, y)| mul[x][y] != mul[y][x])
        {
            v.push(MonoidViolation::NotCommutative { x, y });
        }
        if let Some((x, y, z)) = (0..m)
            .flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| (x, y, z))))
            .find(|&(x, y, z)| mul[mul[x][y]][z] != mul[x][mul[y][z]])
        {
            v.push(MonoidViolation::NotAssociative { x, y, z });
        }
        if let Some(x) = all(&|x| mul[one][x] == x && mul[x][one] == x) {
            v.push(MonoidViolation::NotIdentity { x });
        }
        if let Some(x) = all(&|x| mul[zero][x] == zero && mul[x][zero] == zero) {
            v.push(MonoidViolation::NotZero { x });
        }
        if !v.is_empty() {
            return Err(MonoidError::Axioms(v));
        }
        let row = mul
            .iter()
            .map(|r| bits::from_indices(r.iter().copied()))
            .collect();
        Ok(FiniteMonoid {
            names,
            mul: mul.into_iter().flatten().collect(),
            row,
            one,
            zero,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MonoidError> {
        Self::from_json(&std::fs::read_to_string(path).map_err(LoadError::from)?)
    }

    pub fn from_json(text: &str) -> Result<Self, MonoidError> {
        let file: MonoidFile = serde_json::from_str(text).map_err(LoadError::from)?;
        Self::from_file(&file)
    }

    /// Products with `one` or `zero` may be omitted from the file; any other
    /// missing product is a load error. `[x, y, z]` also sets `y·x`.
    pub fn from_file(file: &MonoidFile) -> Result<Self, MonoidError> {
        let m = file.elements.len();
        let mut index = HashMap::new();
        for (i, name) in file.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(LoadError::DuplicateName(name.clone()).into());
            }
        }
        let idx = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LoadError::UnknownElement(name.to_string()))
        };
        let one = idx(&file.one)?;
        let zero = idx(&file.zero)?;
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
        for [x, y, z] in &file.mul {
            let (x, y, z) = (idx(x)?, idx(y)?, idx(z)?);
            for (p, q) in [(x, y), (y, x)] {
                match table[p][q] {
                    Some(prev) if prev != z => {
                        return Err(LoadError::ConflictingProduct(
                            file.elements[p].clone(),
                            file.elements[q].clone(),
                        )
                        .into())
                    }
                    _ => table[p][q] = Some(z),
                }
            }
        }
        let mut mul = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                mul[x][y] = match table[x][y] {
                    Some(z) => z,
                    None if x == one => y,
                    None if y == one => x,
                    None if x == zero || y == zero => zero,
                    None => {
                        return Err(LoadError::MissingProduct(
                            file.elements[x].clone(),
                            file.elements[y].clone(),
                        )
                        .into())
                    }
                };
            }
        }
        Self::new(file.elements.clone(), mul, one, zero)
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

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn carrier(&self) -> Mask {
        bits::full(self.len())
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.len() + y]
    }

    /// `c·X`.
    pub fn scale(&self, c: usize, xs: Mask) -> Mask {
        bits::members(xs).fold(0, |acc, x| acc | bits::bit(self.mul(c, x)))
    }

    /// `XY = {xy : x ∈ X, y ∈ Y}`, the elementwise product set.
    pub fn mul_sets(&self, xs: Mask, ys: Mask) -> Mask {
        bits::members(xs).fold(0, |acc, x| acc | self.scale(x, ys))
    }

    /// `XH`.
    pub fn times_carrier(&self, xs: Mask) -> Mask {
        bits::members(xs).fold(0, |acc, x| acc | self.row[x])
    }

    pub fn render_set(&self, set: Mask) -> String {
        let parts: Vec<&str> = bits::members(set).map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// On-disk monoid description: `{ "elements", "mul": [[x,y,xy]...], "one", "zero" }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    pub elements: Vec<String>,
    pub mul: Vec<[String; 3]>,
    pub one: String,
    pub zero: String,
}

/// A map `r: P(H) → P(H)`, stored as one output per input subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMap {
    monoid: FiniteMonoid,
    table: Vec<Mask>,
}

impl ClosureMap {
    pub fn from_fn(monoid: FiniteMonoid, f: impl Fn(Mask) -> Mask) -> Self {
        let full = monoid.carrier();
        let table = (0..=full).map(|x| f(x) & full).collect();
        ClosureMap { monoid, table }
    }

    /// `X ↦ H`.
    pub fn constant(monoid: FiniteMonoid) -> Self {
        let full = monoid.carrier();
        Self::from_fn(monoid, |_| full)
    }

    /// `X ↦ XH`.
    pub fn multiples(monoid: FiniteMonoid) -> Self {
        let m = monoid.clone();
        Self::from_fn(monoid, move |x| m.times_carrier(x))
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    /// `X_r`.
    #[inline]
    pub fn apply(&self, xs: Mask) -> Mask {
        self.table[xs as usize]
    }

    pub fn table(&self) -> &[Mask] {
        &self.table
    }

    /// The r-ideals, i.e. the image of the map, ordered by size then mask.
    pub fn ideals(&self) -> Vec<Mask> {
        let mut out = self.table.clone();
        out.sort_by_key(|&x| (x.count_ones(), x));
        out.dedup();
        out
    }

    fn subsets(&self) -> std::ops::RangeInclusive<Mask> {
        0..=self.monoid.carrier()
    }
}

/// One failed closure axiom with its witness subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// `X ⊄ X_r`.
    Extensive { x: Mask },
    /// `XH ⊄ X_r`.
    S1 { x: Mask },
    /// `X ⊆ Y` but `X_r ⊄ Y_r`.
    S2 { x: Mask, y: Mask },
    /// `(X_r)_r ≠ X_r`.
    S3 { x: Mask },
    /// `c·X_r ⊄ (cX)_r`.
    S4 { c: usize, x: Mask },
    /// `c·X_r ≠ (cX)_r`.
    S4Equality { c: usize, x: Mask },
    /// `X_r ≠ ⋃ Z_r` over the subsets `Z` of `X`.
    S5 { x: Mask },
}

impl AxiomViolation {
    /// Re-checks the witness against the map.
    pub fn holds(&self, r: &ClosureMap) -> bool {
        let h = &r.monoid;
        let full = h.carrier();
        let ok = |x: Mask| bits::is_subset(x, full);
        match *self {
            AxiomViolation::Extensive { x } => ok(x) && !bits::is_subset(x, r.apply(x)),
            AxiomViolation::S1 { x } => ok(x) && !bits::is_subset(h.times_carrier(x), r.apply(x)),
            AxiomViolation::S2 { x, y } => {
                ok(y) && bits::is_subset(x, y) && !bits::is_subset(r.apply(x), r.apply(y))
            }
            AxiomViolation::S3 { x } => ok(x) && r.apply(r.apply(x)) != r.apply(x),
            AxiomViolation::S4 { c, x } => {
                ok(x)
                    && c < h.len()
                    && !bits::is_subset(h.scale(c, r.apply(x)), r.apply(h.scale(c, x)))
            }
            AxiomViolation::S4Equality { c, x } => {
                ok(x) && c < h.len() && h.scale(c, r.apply(x)) != r.apply(h.scale(c, x))
            }
            AxiomViolation::S5 { x } => {
                ok(x) && bits::submasks(x).fold(0, |acc, z| acc | r.apply(z)) != r.apply(x)
            }
        }
    }

    pub fn render(&self, m: &FiniteMonoid) -> String {
        let s = |x: &Mask| m.render_set(*x);
        match self {
            AxiomViolation::Extensive { x } => format!("X = {} is not contained in X_r", s(x)),
            AxiomViolation::S1 { x } => format!("(s1) fails: XH ⊄ X_r for X = {}", s(x)),
            AxiomViolation::S2 { x, y } => {
                format!(
                    "(s2) fails: {} ⊆ {} but closures are not nested",
                    s(x),
                    s(y)
                )
            }
            AxiomViolation::S3 { x } => format!("(s3) fails: closure of {} not idempotent", s(x)),
            AxiomViolation::S4 { c, x } => {
                format!(
                    "(s4) fails: c·X_r ⊄ (cX)_r for c = {}, X = {}",
                    m.names()[*c],
                    s(x)
                )
            }
            AxiomViolation::S4Equality { c, x } => {
                format!("c·X_r ≠ (cX)_r for c = {}, X = {}", m.names()[*c], s(x))
            }
            AxiomViolation::S5 { x } => format!("(s5) fails at X = {}", s(x)),
        }
    }
}

/// Outcome of an axiom check; at most one witness per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemVerdict {
    pub violations: Vec<AxiomViolation>,
}

impl SystemVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks (s1)–(s4) over every subset and every `c ∈ H`, plus `X ⊆ X_r`.
///
/// Monotonicity (s2) is checked on covering pairs `X ⊂ X ∪ {y}`, which
/// implies it for all nested pairs; the reported witness is such a pair.
pub fn verify_weak_ideal_system(r: &ClosureMap) -> SystemVerdict {
    let h = &r.monoid;
    let mut violations = Vec::new();
    let subsets = || r.subsets();

    if let Some(x) = subsets().find(|&x| !bits::is_subset(x, r.apply(x))) {
        violations.push(AxiomViolation::Extensive { x });
    }
    if let Some(x) = subsets().find(|&x| !bits::is_subset(h.times_carrier(x), r.apply(x))) {
        violations.push(AxiomViolation::S1 { x });
    }
    let s2 = subsets()
        .flat_map(|x| (0..h.len()).map(move |y| (x, x | bits::bit(y))))
        .find(|&(x, y)| !bits::is_subset(r.apply(x), r.apply(y)));
    if let Some((x, y)) = s2 {
        violations.push(AxiomViolation::S2 { x, y });
    }
    if let Some(x) = subsets().find(|&x| r.apply(r.apply(x)) != r.apply(x)) {
        violations.push(AxiomViolation::S3 { x });
    }
    let s4 = (0..h.len())
        .flat_map(|c| subsets().map(move |x| (c, x)))
        .find(|&(c, x)| !bits::is_subset(h.scale(c, r.apply(x)), r.apply(h.scale(c, x))));
    if let Some((c, x)) = s4 {
        violations.push(AxiomViolation::S4 { c, x });
    }
    SystemVerdict { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a weak ideal system: {0:?}")]
pub struct NotWeakIdealSystem(pub SystemVerdict);

/// Checks `c·X_r = (cX)_r` for all `c` and `X`. Only defined for weak ideal
/// systems.
pub fn verify_ideal_system(r: &ClosureMap) -> Result<SystemVerdict, NotWeakIdealSystem> {
    let weak = verify_weak_ideal_system(r);
    if !weak.passed() {
        return Err(NotWeakIdealSystem(weak));
    }
    let h = &r.monoid;
    let failure = (0..h.len())
        .flat_map(|c| r.subsets().map(move |x| (c, x)))
        .find(|&(c, x)| h.scale(c, r.apply(x)) != r.apply(h.scale(c, x)));
    Ok(SystemVerdict {
        violations: failure
            .map(|(c, x)| AxiomViolation::S4Equality { c, x })
            .into_iter()
            .collect(),
    })
}

/// Result of the literal (s5) check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitaryVerdict {
    pub verdict: SystemVerdict,
    /// Every subset of a finite carrier is finite, so (s5) reduces to
    /// monotonicity and cannot fail for a weak ideal system.
    pub degenerate: bool,
}

impl FinitaryVerdict {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Checks `X_r = ⋃ {Z_r : Z ⊆ X finite}` literally, by enumerating submasks.
pub fn verify_finitary(r: &ClosureMap) -> FinitaryVerdict {
    let failure = r.subsets().find(|&x| {
        let union = bits::submasks(x).fold(0, |acc, z| acc | r.apply(z));
        union != r.apply(x)
    });
    FinitaryVerdict {
        verdict: SystemVerdict {
            violations: failure
                .map(|x| AxiomViolation::S5 { x })
                .into_iter()
                .collect(),
        },
        degenerate: true,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IdealLatticeError {
    #[error(transparent)]
    NotWeak(#[from] NotWeakIdealSystem),
    #[error("{0} r-ideals exceed the lattice size limit")]
    TooManyIdeals(usize),
    #[error(transparent)]
    Oracle(#[from] OracleViolation),
}

/// The lattice `I_r(H)` of r-ideals.
///
/// Lattice element `i` is the ideal `ideals[i]`. Order is inclusion,
/// multiplication `(X, Y) ↦ (XY)_r`, join `(X ∪ Y)_r`, meet `X ∩ Y`.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub ideals: Vec<Mask>,
    pub lattice: FiniteLattice,
}

impl IdealLattice {
    pub fn index_of(&self, ideal: Mask) -> Option<usize> {
        self.ideals.iter().position(|&i| i == ideal)
    }
}

/// Builds `I_r(H)` and checks it against the r-ideal lattice theorem: the
/// image is closed under intersection, the assembled tables form a
/// multiplicative lattice whose joins and meets are `(X ∪ Y)_r` and `X ∩ Y`,
/// `(XY)_r = (X_r Y_r)_r`, `H` is the identity, `{0}_r` annihilates every
/// nonempty ideal, and the principal ideals `{a}_r` form a submonoid that
/// generates the lattice.
///
/// Any failure of those guaranteed properties is an [`OracleViolation`].
pub fn build_ideal_lattice(r: &ClosureMap) -> Result<IdealLattice, IdealLatticeError> {
    let weak = verify_weak_ideal_system(r);
    if !weak.passed() {
        return Err(NotWeakIdealSystem(weak).into());
    }
    let h = &r.monoid;
    let ideals = r.ideals();
    let k = ideals.len();
    if k > crate::bits::MAX_ELEMENTS {
        return Err(IdealLatticeError::TooManyIdeals(k));
    }
    let index: HashMap<Mask, usize> = ideals.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let oracle = |detail: String| OracleViolation::new("r-ideal lattice", detail);

    for (&x, &y) in ideals
        .iter()
        .flat_map(|x| ideals.iter().map(move |y| (x, y)))
    {
        if !index.contains_key(&(x & y)) {
            return Err(oracle(format!(
                "intersection of {} and {} is not an r-ideal",
                h.render_set(x),
                h.render_set(y)
            ))
            .into());
        }
    }

    let product = |x: Mask, y: Mask| index[&r.apply(h.mul_sets(x, y))];
    let bot = index[&r.apply(0)];
    let top = index[&h.carrier()];
    let data = LatticeData {
        names: ideals.iter().map(|&x| h.render_set(x)).collect(),
        leq: ideals
            .iter()
            .map(|&x| ideals.iter().map(|&y| bits::is_subset(x, y)).collect())
            .collect(),
        mul: ideals
            .iter()
            .map(|&x| ideals.iter().map(|&y| product(x, y)).collect())
            .collect(),
        bot,
        top,
    };
    let verdict = verify_lattice(&data).map_err(|e| oracle(e.to_string()))?;
    if !verdict.passed() {
        return Err(oracle(format!(
            "ideal tables fail lattice axioms: {}",
            verdict
                .violations
                .iter()
                .map(|v| v.render(&data.names))
                .collect::<Vec<_>>()
                .join("; ")
        ))
        .into());
    }
    let lattice = FiniteLattice::new(data).map_err(|e| oracle(e.to_string()))?;

    for i in 0..k {
        for j in 0..k {
            let union = r.apply(ideals[i] | ideals[j]);
            if ideals[lattice.join2(i, j)] != union {
                return Err(oracle(format!(
                    "lattice join of {} and {} differs from the closure of the union",
                    lattice.name(i),
                    lattice.name(j)
                ))
                .into());
            }
            if ideals[lattice.meet2(i, j)] != ideals[i] & ideals[j] {
                return Err(oracle(format!(
                    "lattice meet of {} and {} differs from the intersection",
                    lattice.name(i),
                    lattice.name(j)
                ))
                .into());
            }
        }
    }

    if let Some((x, y)) = product_compatibility_failure(r) {
        return Err(oracle(format!(
            "(XY)_r ≠ (X_r Y_r)_r for X = {}, Y = {}",
            h.render_set(x),
            h.render_set(y)
        ))
        .into());
    }

    let zero_ideal = r.apply(bits::bit(h.zero()));
    for (i, &x) in ideals.iter().enumerate() {
        if lattice.mul(top, i) != i {
            return Err(oracle(format!("H is not the identity on {}", lattice.name(i))).into());
        }
        if x != 0 && ideals[product(zero_ideal, x)] != zero_ideal {
            return Err(oracle(format!("{{0}}_r does not annihilate {}", lattice.name(i))).into());
        }
    }

    // Principal ideals: a generating submonoid.
    let principal: Vec<Mask> = (0..h.len()).map(|a| r.apply(bits::bit(a))).collect();
    let principal_mask = bits::from_indices(principal.iter().map(|p| index[p]));
    if !lattice.generates(principal_mask) {
        return Err(oracle("principal r-ideals do not generate I_r(H)".into()).into());
    }
    for a in 0..h.len() {
        for b in 0..h.len() {
            if ideals[product(principal[a], principal[b])] != principal[h.mul(a, b)] {
                return Err(oracle(format!(
                    "({{a}}_r {{b}}_r)_r ≠ {{ab}}_r for a = {}, b = {}",
                    h.names()[a],
                    h.names()[b]
                ))
                .into());
            }
        }
    }

    Ok(IdealLattice { ideals, lattice })
}

/// First `(X, Y)` with `(XY)_r ≠ (X_r Y_r)_r`.
///
/// All pairs of subsets are tried on carriers of at most
/// `FULL_PRODUCT_CHECK_MAX` elements; above that, `X` and `Y` range over
/// singletons, the empty set and the r-ideals.
pub fn product_compatibility_failure(r: &ClosureMap) -> Option<(Mask, Mask)> {
    let h = &r.monoid;
    let candidates: Vec<Mask> = if h.len() <= FULL_PRODUCT_CHECK_MAX {
        r.subsets().collect()
    } else {
        let mut c: Vec<Mask> = (0..h.len()).map(bits::bit).collect();
        c.push(0);
        c.extend(r.ideals());
        c
    };
    candidates
        .iter()
        .flat_map(|&x| candidates.iter().map(move |&y| (x, y)))
        .find(|&(x, y)| r.apply(h.mul_sets(x, y)) != r.apply(h.mul_sets(r.apply(x), r.apply(y))))
}
