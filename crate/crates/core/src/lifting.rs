//! Wires of a finite multiplicative lattice and their lifts to weak ideal
//! systems.
//!
//! A wire `H ⊆ L` is a submonoid containing `0` and `1` that generates `L`
//! under joins. Lifting `H` gives the map `X ↦ H ∩ [0, ⋁X]` on subsets of
//! `H`, which is a weak ideal system whose r-ideal lattice is isomorphic to
//! `L` via `X ↦ ⋁X` and `y ↦ H ∩ [0, y]`. It is an ideal system exactly when
//! `H` is an M-wire:
//!
//! ```text
//! (M)  s ≤ t·a with s, t ∈ H, a ∈ L  ⇒  s = t·u for some u ∈ H ∩ [0, a]
//! ```
//!
//! Every guaranteed property is re-checked; a failure is reported as
//! [`OracleViolation`] through [`LiftError::Oracle`].

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::error::OracleViolation;
use crate::lattice::FiniteLattice;
use crate::monoid::{
    build_ideal_lattice, verify_finitary, verify_ideal_system, verify_weak_ideal_system,
    ClosureMap, FiniteMonoid, IdealLattice, IdealLatticeError, SystemVerdict, MAX_MONOID_ELEMENTS,
};

/// Largest lattice [`enumerate_wires`] will search.
pub const MAX_WIRE_SEARCH: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error("{} is not a wire", .0.subset)]
    NotAWire(Box<WireReport>),
    #[error("carrier of {size} elements exceeds the limit of {max}")]
    TooLarge { size: usize, max: usize },
    #[error(transparent)]
    Oracle(#[from] OracleViolation),
}

impl From<IdealLatticeError> for LiftError {
    fn from(e: IdealLatticeError) -> Self {
        match e {
            IdealLatticeError::Oracle(o) => LiftError::Oracle(o),
            other => LiftError::Oracle(OracleViolation::new("r-ideal lattice", other.to_string())),
        }
    }
}

/// A failure of condition (M): `s ≤ t·a` but no `u ∈ H ∩ [0, a]` has `t·u = s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MWitness {
    pub s: usize,
    pub t: usize,
    pub a: usize,
}

impl MWitness {
    /// Re-checks the witness directly against the lattice tables.
    pub fn holds(&self, l: &FiniteLattice, h: Mask) -> bool {
        bits::contains(h, self.s)
            && bits::contains(h, self.t)
            && l.leq(self.s, l.mul(self.t, self.a))
            && !bits::members(h & l.down_set(self.a)).any(|u| l.mul(self.t, u) == self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireReport {
    pub subset: Mask,
    pub contains_one: bool,
    pub contains_zero: bool,
    pub mult_closed: bool,
    pub generates: bool,
    pub is_wire: bool,
    pub is_m_wire: bool,
    /// Present iff `is_wire && !is_m_wire`.
    pub m_witness: Option<MWitness>,
}

fn mult_closed(l: &FiniteLattice, h: Mask) -> bool {
    bits::is_subset(l.mul_sets(h, h), h)
}

/// First failure of (M) in lexicographic `(s, t, a)` order.
pub fn m_condition_failure(l: &FiniteLattice, h: Mask) -> Option<MWitness> {
    for s in bits::members(h) {
        for t in bits::members(h) {
            for a in 0..l.len() {
                let w = MWitness { s, t, a };
                if l.leq(s, l.mul(t, a)) && w.holds(l, h) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Checks whether `h` is a wire of `l` and, if so, whether it is an M-wire.
pub fn analyze_wire(l: &FiniteLattice, h: Mask) -> WireReport {
    let h = h & l.carrier();
    let contains_one = bits::contains(h, l.top());
    let contains_zero = bits::contains(h, l.bot());
    let mult_closed = mult_closed(l, h);
    let generates = l.generates(h);
    let is_wire = contains_one && contains_zero && mult_closed && generates;
    let m_witness = if is_wire {
        m_condition_failure(l, h)
    } else {
        None
    };
    WireReport {
        subset: h,
        contains_one,
        contains_zero,
        mult_closed,
        generates,
        is_wire,
        is_m_wire: is_wire && m_witness.is_none(),
        m_witness,
    }
}

/// Wires of a lattice in increasing order of their interior bitmask.
pub struct Wires<'a> {
    lattice: &'a FiniteLattice,
    interior: Vec<usize>,
    next: u64,
    m_only: bool,
}

impl Iterator for Wires<'_> {
    type Item = WireReport;

    fn next(&mut self) -> Option<WireReport> {
        let l = self.lattice;
        let fixed = bits::bit(l.bot()) | bits::bit(l.top());
        while self.next < 1 << self.interior.len() {
            let code = self.next;
            self.next += 1;
            let h = self
                .interior
                .iter()
                .enumerate()
                .filter(|&(i, _)| bits::contains(code, i))
                .fold(fixed, |m, (_, &x)| m | bits::bit(x));
            // Closure is cheap; generation is not.
            if !mult_closed(l, h) {
                continue;
            }
            let report = analyze_wire(l, h);
            if report.is_wire && (!self.m_only || report.is_m_wire) {
                return Some(report);
            }
        }
        None
    }
}

/// Every wire of `l` (or only the M-wires). Fails for lattices larger than
/// [`MAX_WIRE_SEARCH`].
pub fn enumerate_wires(l: &FiniteLattice, m_only: bool) -> Result<Wires<'_>, LiftError> {
    if l.len() > MAX_WIRE_SEARCH {
        return Err(LiftError::TooLarge {
            size: l.len(),
            max: MAX_WIRE_SEARCH,
        });
    }
    let interior = (0..l.len())
        .filter(|&x| x != l.bot() && x != l.top())
        .collect();
    Ok(Wires {
        lattice: l,
        interior,
        next: 0,
        m_only,
    })
}

/// The checks certifying that `f: X ↦ ⋁X` is a lattice isomorphism
/// `I_r(H) → L` with inverse `g: y ↦ H ∩ [0, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoCertificate {
    pub mutually_inverse: bool,
    pub multiplicative: bool,
    pub order_preserving: bool,
}

impl IsoCertificate {
    pub fn certified(&self) -> bool {
        self.mutually_inverse && self.multiplicative && self.order_preserving
    }
}

/// The lift of a wire.
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub wire: WireReport,
    /// Monoid element `i` is lattice element `embed[i]`.
    pub embed: Vec<usize>,
    pub system: ClosureMap,
    pub ideal_lattice: IdealLattice,
    /// Ideal index → lattice element.
    pub iso_f: Vec<usize>,
    /// Lattice element → ideal index.
    pub iso_g: Vec<usize>,
    pub certificate: IsoCertificate,
    /// Result of the `c·X_r = (cX)_r` check.
    pub ideal_system: SystemVerdict,
}

impl LiftResult {
    pub fn certified(&self) -> bool {
        self.certificate.certified()
    }

    pub fn is_ideal_system(&self) -> bool {
        self.ideal_system.passed()
    }

    /// The r-ideals as lattice subsets.
    pub fn ideals_in_lattice(&self) -> Vec<Mask> {
        self.ideal_lattice
            .ideals
            .iter()
            .map(|&x| self.to_lattice(x))
            .collect()
    }

    pub fn to_lattice(&self, x: Mask) -> Mask {
        bits::members(x).fold(0, |m, i| m | bits::bit(self.embed[i]))
    }
}

/// `(H, ·, 1, 0)` as a standalone monoid with the index embedding into `L`.
pub fn wire_monoid(l: &FiniteLattice, h: Mask) -> Result<(FiniteMonoid, Vec<usize>), LiftError> {
    let embed: Vec<usize> = bits::members(h).collect();
    if embed.len() > MAX_MONOID_ELEMENTS {
        return Err(LiftError::TooLarge {
            size: embed.len(),
            max: MAX_MONOID_ELEMENTS,
        });
    }
    let pos = |x: usize| embed.iter().position(|&e| e == x);
    let mul = embed
        .iter()
        .map(|&x| {
            embed
                .iter()
                .map(|&y| pos(l.mul(x, y)))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| OracleViolation::new("wire monoid", "wire not closed under products"))?;
    let names = embed.iter().map(|&x| l.name(x).to_string()).collect();
    let one = pos(l.top()).expect("wire contains 1");
    let zero = pos(l.bot()).expect("wire contains 0");
    let monoid = FiniteMonoid::new(names, mul, one, zero)
        .map_err(|e| OracleViolation::new("wire monoid", e.to_string()))?;
    Ok((monoid, embed))
}

/// Lifts a wire to the weak ideal system `X ↦ H ∩ [0, ⋁X]` and certifies
/// `I_r(H) ≅ L`.
pub fn lift(l: &FiniteLattice, h: Mask) -> Result<LiftResult, LiftError> {
    let wire = analyze_wire(l, h);
    if !wire.is_wire {
        return Err(LiftError::NotAWire(Box::new(wire)));
    }
    let h = wire.subset;
    let (monoid, embed) = wire_monoid(l, h)?;
    let to_lattice = |x: Mask| bits::members(x).fold(0, |m, i| m | bits::bit(embed[i]));
    let from_lattice = |x: Mask| {
        embed
            .iter()
            .enumerate()
            .filter(|&(_, &e)| bits::contains(x, e))
            .fold(0, |m, (i, _)| m | bits::bit(i))
    };
    let system = ClosureMap::from_fn(monoid.clone(), |x| {
        from_lattice(h & l.down_set(l.join(to_lattice(x))))
    });
    let oracle =
        |check: &str, detail: String| LiftError::Oracle(OracleViolation::new(check, detail));

    for x in 0..=monoid.carrier() {
        let jx = l.join(to_lattice(x));
        if l.join(h & l.down_set(jx)) != jx {
            return Err(oracle(
                "lift: generation identity",
                format!(
                    "⋁(H ∩ [0, ⋁X]) ≠ ⋁X for X = {}",
                    l.render_set(to_lattice(x))
                ),
            ));
        }
    }
    for a in bits::members(h) {
        for x in bits::members(h) {
            if !l.leq(l.mul(a, x), x) {
                return Err(oracle(
                    "lift: hx ≤ x",
                    format!("{}·{} ≰ {}", l.name(a), l.name(x), l.name(x)),
                ));
            }
        }
    }

    let weak = verify_weak_ideal_system(&system);
    if !weak.passed() {
        let detail = weak
            .violations
            .iter()
            .map(|v| v.render(&monoid))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(oracle("lift: weak ideal system", detail));
    }
    let ideal_lattice = build_ideal_lattice(&system)?;
    let il = &ideal_lattice.lattice;

    let iso_f: Vec<usize> = ideal_lattice
        .ideals
        .iter()
        .map(|&x| l.join(to_lattice(x)))
        .collect();
    let iso_g = (0..l.len())
        .map(|y| ideal_lattice.index_of(from_lattice(h & l.down_set(y))))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| oracle("lift: g", "H ∩ [0, y] is not an r-ideal for some y".into()))?;

    let k = ideal_lattice.ideals.len();
    let mutually_inverse = k == l.len()
        && (0..l.len()).all(|y| iso_f[iso_g[y]] == y)
        && (0..k).all(|i| iso_g[iso_f[i]] == i);
    let multiplicative =
        (0..k).all(|i| (0..k).all(|j| iso_f[il.mul(i, j)] == l.mul(iso_f[i], iso_f[j])));
    let order_preserving = (0..k).all(|i| {
        (0..k).all(|j| {
            let included = bits::is_subset(ideal_lattice.ideals[i], ideal_lattice.ideals[j]);
            included == l.leq(iso_f[i], iso_f[j])
        })
    }) && (0..l.len())
        .all(|x| (0..l.len()).all(|y| !l.leq(x, y) || il.leq(iso_g[x], iso_g[y])));
    let certificate = IsoCertificate {
        mutually_inverse,
        multiplicative,
        order_preserving,
    };
    if !certificate.certified() || !il.is_isomorphism(l, &iso_f) {
        return Err(oracle(
            "lift: isomorphism",
            format!("{certificate:?} for H = {}", l.render_set(h)),
        ));
    }

    let ideal_system =
        verify_ideal_system(&system).map_err(|e| oracle("lift: ideal system", e.to_string()))?;

    Ok(LiftResult {
        wire,
        embed,
        system,
        ideal_lattice,
        iso_f,
        iso_g,
        certificate,
        ideal_system,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub wires: usize,
    pub m_wires: usize,
    pub ideal_systems: usize,
    pub finitary: usize,
}

/// For every wire: the lift is an ideal system iff the wire is an M-wire,
/// and the lift is finitary (as is every element compact, on a finite
/// carrier).
pub fn check_corollary_equivalences(l: &FiniteLattice) -> Result<CorollaryReport, LiftError> {
    let mut report = CorollaryReport::default();
    let all_compact = (0..l.len()).all(|x| l.classify_element(x).compact);
    for wire in enumerate_wires(l, false)? {
        let lifted = lift(l, wire.subset)?;
        report.wires += 1;
        report.m_wires += wire.is_m_wire as usize;
        report.ideal_systems += lifted.is_ideal_system() as usize;
        if lifted.is_ideal_system() != wire.is_m_wire {
            return Err(OracleViolation::new(
                "ideal system iff M-wire",
                format!(
                    "H = {}: ideal system {}, M-wire {}",
                    l.render_set(wire.subset),
                    lifted.is_ideal_system(),
                    wire.is_m_wire
                ),
            )
            .into());
        }
        let finitary = verify_finitary(&lifted.system).passed();
        report.finitary += finitary as usize;
        if finitary != all_compact {
            return Err(OracleViolation::new(
                "finitary iff compact",
                format!("H = {}", l.render_set(wire.subset)),
            )
            .into());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalWireCheck {
    pub wire: Mask,
    pub is_wire: bool,
    pub is_m_wire: bool,
    pub ideal_system: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionReport {
    /// `H = L` lifts with a certified isomorphism.
    pub full_lift_certified: bool,
    /// Whether the full lift happens to be an ideal system.
    pub full_lift_ideal_system: bool,
    pub m_wire_exists: bool,
    pub meet_principal: Mask,
    pub meet_principal_generates: bool,
    pub weak_meet_principal: Mask,
    pub weak_meet_principal_generates: bool,
    pub principal: Mask,
    pub principal_generates: bool,
    pub domain: bool,
    /// Filled when `L` is a domain generated by its principal elements.
    pub principal_wire: Option<PrincipalWireCheck>,
}

/// Executes the three liftability statements on one lattice:
///
/// 1. `H = L` is a wire and lifts;
/// 2. if some M-wire exists, the meet principal elements generate `L`;
/// 3. if `L` is a domain generated by its principal elements, those elements
///    (with `0` adjoined if missing) form an M-wire whose lift is an ideal
///    system.
pub fn check_liftability_propositions(l: &FiniteLattice) -> Result<PropositionReport, LiftError> {
    let full = lift(l, l.carrier())?;
    let m_wire_exists = enumerate_wires(l, true)?.next().is_some();
    let meet_principal = l.meet_principal_elements();
    let weak_meet_principal = l.weak_meet_principal_elements();
    let principal = l.principal_elements();
    let domain = l.is_domain();
    let mut report = PropositionReport {
        full_lift_certified: full.certified(),
        full_lift_ideal_system: full.is_ideal_system(),
        m_wire_exists,
        meet_principal,
        meet_principal_generates: l.generates(meet_principal),
        weak_meet_principal,
        weak_meet_principal_generates: l.generates(weak_meet_principal),
        principal,
        principal_generates: l.generates(principal),
        domain,
        principal_wire: None,
    };
    if report.m_wire_exists && !report.meet_principal_generates {
        return Err(OracleViolation::new(
            "liftable implies generated by meet principal elements",
            format!(
                "meet principal elements {} do not generate",
                l.render_set(meet_principal)
            ),
        )
        .into());
    }
    if domain && report.principal_generates {
        let wire = principal | bits::bit(l.bot()) | bits::bit(l.top());
        let analysis = analyze_wire(l, wire);
        let ideal_system = if analysis.is_wire {
            lift(l, wire)?.is_ideal_system()
        } else {
            false
        };
        let check = PrincipalWireCheck {
            wire,
            is_wire: analysis.is_wire,
            is_m_wire: analysis.is_m_wire,
            ideal_system,
        };
        report.principal_wire = Some(check.clone());
        if !(check.is_wire && check.is_m_wire && check.ideal_system) {
            return Err(OracleViolation::new(
                "principally generated domain lifts to an ideal system",
                format!("{check:?}"),
            )
            .into());
        }
    }
    Ok(report)
}

/// `X ↦ ⋃ {Z_r : Z ⊆ X finite}`, computed by enumerating every subset of `X`.
pub fn finitary_closure(r: &ClosureMap) -> ClosureMap {
    ClosureMap::from_fn(r.monoid().clone(), |x| {
        bits::submasks(x).fold(0, |acc, z| acc | r.apply(z))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub ideals: usize,
    pub equals_original: bool,
    pub isomorphism: bool,
}

/// Lifts `H = L`, passes to the finitary system `r_s`, and checks that
/// `r_s = r`, that `r_s` agrees with `X ↦ {h : h ≤ h_1 ∨ … ∨ h_n, h_i ∈ X}`,
/// and that `x ↦ [0, x]` is a lattice isomorphism `L → I_{r_s}(L)`.
pub fn check_finitary_embedding(l: &FiniteLattice) -> Result<EmbeddingReport, LiftError> {
    let full = lift(l, l.carrier())?;
    let r = &full.system;
    let rs = finitary_closure(r);
    let oracle =
        |detail: String| LiftError::Oracle(OracleViolation::new("finitary closure", detail));
    if rs != *r {
        return Err(oracle("r_s differs from r on a finite carrier".into()));
    }
    // H = L, so monoid indices are lattice indices.
    for x in 0..=l.carrier() {
        let direct = bits::submasks(x)
            .filter(|&z| z != 0)
            .fold(0, |acc, z| acc | l.down_set(l.join(z)));
        // The empty family joins to 0.
        let direct = direct | l.down_set(l.bot());
        if direct != rs.apply(x) {
            return Err(oracle(format!(
                "explicit form differs at X = {}",
                l.render_set(x)
            )));
        }
    }
    if !verify_weak_ideal_system(&rs).passed() {
        return Err(oracle("r_s is not a weak ideal system".into()));
    }
    let il = build_ideal_lattice(&rs)?;
    let embedding = (0..l.len())
        .map(|x| il.index_of(l.down_set(x)))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| oracle("[0, x] is not an r_s-ideal".into()))?;
    let isomorphism = l.is_isomorphism(&il.lattice, &embedding);
    if !isomorphism {
        return Err(oracle("x ↦ [0, x] is not a lattice isomorphism".into()));
    }
    Ok(EmbeddingReport {
        ideals: il.ideals.len(),
        equals_original: true,
        isomorphism,
    })
}
