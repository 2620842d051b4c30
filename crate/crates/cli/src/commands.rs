//! Subcommand implementations. Every witness is re-checked against its
//! source before it is emitted; a witness that does not hold is reported as
//! an oracle violation.

use std::path::Path;

use lattice_lift::bits::{self, Mask};
use lattice_lift::enumerate::{corpus as small_lattices, MAX_ENUMERATION_SIZE};
use lattice_lift::lattice::LatticeViolation;
use lattice_lift::lifting::{
    check_corollary_equivalences, check_finitary_embedding, check_liftability_propositions,
    enumerate_wires, CorollaryReport, EmbeddingReport, PropositionReport,
};
use lattice_lift::quadratic::{DivisionClosure, MWireVerdict, PrimeWitness};
use lattice_lift::{
    analyze_wire, lift as lift_wire, verify_lattice, FiniteLattice, LatticeData, LatticeError,
    LiftError, QuadOrder64, WireReport,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::report::{Outcome, Status};
use crate::QuadCheck;

fn oracle(check: &str, detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    Outcome {
        status: Status::OracleViolation,
        result: json!({ "oracle_violation": { "check": check, "detail": detail } }),
        lines: vec![format!("oracle violation [{check}]: {detail}")],
    }
}

fn lift_error(err: LiftError) -> Outcome {
    match err {
        LiftError::Oracle(v) => oracle(&v.check, v.detail),
        other => Outcome::error(Status::CheckFailed, other.to_string()),
    }
}

fn names(l: &FiniteLattice, set: Mask) -> Vec<String> {
    bits::members(set).map(|x| l.name(x).to_string()).collect()
}

#[derive(Serialize)]
struct RenderedViolation {
    violation: LatticeViolation,
    message: String,
}

pub fn check_lattice(path: &Path) -> Outcome {
    let data = match LatticeData::from_path(path) {
        Ok(d) => d,
        Err(e) => return Outcome::error(Status::UsageError, e.to_string()),
    };
    let verdict = match verify_lattice(&data) {
        Ok(v) => v,
        Err(e) => return Outcome::error(Status::UsageError, e.to_string()),
    };
    if let Some(bad) = verdict.violations.iter().find(|v| !v.holds(&data)) {
        return oracle("lattice witness", format!("{bad:?} does not hold"));
    }
    let violations: Vec<RenderedViolation> = verdict
        .violations
        .iter()
        .map(|v| RenderedViolation {
            violation: v.clone(),
            message: v.render(&data.names),
        })
        .collect();
    let mut lines = vec![format!(
        "{}: {} elements, {}",
        path.display(),
        data.names.len(),
        if verdict.passed() {
            "multiplicative lattice"
        } else {
            "not a multiplicative lattice"
        }
    )];
    lines.extend(violations.iter().map(|v| format!("  {}", v.message)));
    let status = if verdict.passed() {
        Status::Pass
    } else {
        Status::CheckFailed
    };
    Outcome::new(
        status,
        json!({ "elements": data.names, "passed": verdict.passed(), "violations": violations }),
        lines,
    )
}

#[derive(Serialize)]
struct WireSummary {
    wire: Vec<String>,
    is_wire: bool,
    is_m_wire: bool,
    /// `(s, t, a)` with `s ≤ t·a` and no factor `u ∈ H ∩ [0, a]`.
    m_witness: Option<[String; 3]>,
    ideals: Vec<Vec<String>>,
    ideal_system: bool,
    /// Witness of `c·X_r ≠ (cX)_r` when the lift is only weak.
    equality_failure: Option<String>,
    isomorphism_certified: bool,
}

fn load_lattice(path: &Path) -> Result<FiniteLattice, Outcome> {
    FiniteLattice::from_path(path).map_err(|e| match e {
        LatticeError::Load(e) => Outcome::error(Status::UsageError, e.to_string()),
        LatticeError::Axioms(v) => Outcome::error(
            Status::CheckFailed,
            format!(
                "{} is not a multiplicative lattice ({} axiom failures)",
                path.display(),
                v.len()
            ),
        ),
    })
}

fn summarize(l: &FiniteLattice, report: &WireReport) -> Result<WireSummary, Outcome> {
    let m_witness = match report.m_witness {
        Some(w) if !w.holds(l, report.subset) => {
            return Err(oracle(
                "M-condition witness",
                format!("{w:?} does not hold"),
            ));
        }
        Some(w) => Some([w.s, w.t, w.a].map(|x| l.name(x).to_string())),
        None => None,
    };
    let lifted = lift_wire(l, report.subset).map_err(lift_error)?;
    if let Some(bad) = lifted
        .ideal_system
        .violations
        .iter()
        .find(|v| !v.holds(&lifted.system))
    {
        return Err(oracle(
            "ideal-system witness",
            format!("{bad:?} does not hold"),
        ));
    }
    if !lifted.certified() {
        return Err(oracle("lift isomorphism", "certificate incomplete"));
    }
    Ok(WireSummary {
        wire: names(l, report.subset),
        is_wire: report.is_wire,
        is_m_wire: report.is_m_wire,
        m_witness,
        ideals: lifted
            .ideals_in_lattice()
            .into_iter()
            .map(|x| names(l, x))
            .collect(),
        ideal_system: lifted.is_ideal_system(),
        equality_failure: lifted
            .ideal_system
            .violations
            .first()
            .map(|v| v.render(lifted.system.monoid())),
        isomorphism_certified: lifted.certified(),
    })
}

fn wire_lines(s: &WireSummary) -> Vec<String> {
    let set = |v: &[String]| format!("{{{}}}", v.join(", "));
    let mut lines = vec![format!(
        "H = {}: {}wire, {}",
        set(&s.wire),
        if s.is_m_wire { "M-" } else { "" },
        if s.ideal_system {
            "lift is an ideal system"
        } else {
            "lift is a weak ideal system"
        }
    )];
    if let Some([a, b, c]) = &s.m_witness {
        lines.push(format!(
            "  (M) fails: s = {a} ≤ t·y with t = {b}, y = {c}, no factor in H ∩ [0, y]"
        ));
    }
    if let Some(f) = &s.equality_failure {
        lines.push(format!("  {f}"));
    }
    lines.push(format!(
        "  {} r-ideals: {}",
        s.ideals.len(),
        s.ideals
            .iter()
            .map(|i| set(i))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    lines
}

pub fn lift(path: &Path, wire: Option<&[String]>, m_only: bool) -> Outcome {
    let l = match load_lattice(path) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let reports: Vec<WireReport> = match wire {
        Some(elements) => {
            let mut h: Mask = 0;
            for name in elements.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
                match l.index_of(name) {
                    Some(x) => h |= bits::bit(x),
                    None => {
                        return Outcome::error(
                            Status::UsageError,
                            format!("unknown element {name:?}"),
                        )
                    }
                }
            }
            let report = analyze_wire(&l, h);
            if !report.is_wire {
                let reason = if !report.contains_zero || !report.contains_one {
                    "does not contain 0 and 1"
                } else if !report.mult_closed {
                    "is not closed under multiplication"
                } else {
                    "does not generate the lattice under joins"
                };
                let msg = format!("{{{}}} is not a wire: it {reason}", names(&l, h).join(", "));
                return Outcome::new(Status::CheckFailed, json!({ "wire": report }), vec![msg]);
            }
            vec![report]
        }
        None => match enumerate_wires(&l, m_only) {
            Ok(w) => w.collect(),
            Err(e) => return lift_error(e),
        },
    };
    let mut summaries = Vec::with_capacity(reports.len());
    for r in &reports {
        match summarize(&l, r) {
            Ok(s) => summaries.push(s),
            Err(o) => return o,
        }
    }
    let mut lines = vec![format!(
        "{}: {} {}",
        path.display(),
        summaries.len(),
        if m_only { "M-wires" } else { "wires" }
    )];
    lines.extend(summaries.iter().flat_map(wire_lines));
    Outcome::new(Status::Pass, json!({ "wires": summaries }), lines)
}

#[derive(Serialize)]
struct LatticeSweep {
    elements: Vec<String>,
    corollary: CorollaryReport,
    propositions: PropositionReport,
    embedding: EmbeddingReport,
}

pub fn corpus(max_n: usize, limit: usize) -> Outcome {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&max_n) {
        return Outcome::error(
            Status::UsageError,
            format!("--max-n must be between 1 and {MAX_ENUMERATION_SIZE}"),
        );
    }
    let lattices = small_lattices(max_n, limit);
    // Collecting an indexed parallel iterator keeps the input order.
    let results: Vec<Result<LatticeSweep, LiftError>> = lattices
        .par_iter()
        .map(|l| {
            Ok(LatticeSweep {
                elements: l.names().to_vec(),
                corollary: check_corollary_equivalences(l)?,
                propositions: check_liftability_propositions(l)?,
                embedding: check_finitary_embedding(l)?,
            })
        })
        .collect();
    let mut sweeps = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(s) => sweeps.push(s),
            Err(e) => return lift_error(e),
        }
    }
    let total = |f: fn(&LatticeSweep) -> usize| sweeps.iter().map(f).sum::<usize>();
    let wires = total(|s| s.corollary.wires);
    let m_wires = total(|s| s.corollary.m_wires);
    let liftable = sweeps
        .iter()
        .filter(|s| s.propositions.m_wire_exists)
        .count();
    let principal_wires = sweeps
        .iter()
        .filter(|s| s.propositions.principal_wire.is_some())
        .count();
    let lines = vec![
        format!("{} lattices with up to {max_n} elements", sweeps.len()),
        format!("{wires} wires, {m_wires} M-wires; lifts are ideal systems exactly on M-wires"),
        format!("{liftable} lattices have an M-wire; each is generated by its meet principal elements"),
        format!("{principal_wires} principally generated domains; each principal wire lifts to an ideal system"),
        "finitary closure of every full lift equals the lift and embeds the lattice".to_string(),
    ];
    Outcome::new(
        Status::Pass,
        json!({
            "lattices": sweeps.len(),
            "wires": wires,
            "m_wires": m_wires,
            "liftable": liftable,
            "principal_wires": principal_wires,
            "sweeps": sweeps,
        }),
        lines,
    )
}

pub fn quad(d: i64, bound: i64, prime_bound: i64, search_bound: i64, check: QuadCheck) -> Outcome {
    let order = match QuadOrder64::new(d) {
        Ok(o) => o,
        Err(e) => return Outcome::error(Status::UsageError, e.to_string()),
    };
    let usage = |e: lattice_lift::QuadError| Outcome::error(Status::UsageError, e.to_string());
    match check {
        QuadCheck::Norms => match order.norm_image(&bound) {
            Ok(image) => {
                let values = image.values().to_vec();
                let shown: Vec<String> = values.iter().take(40).map(|v| v.to_string()).collect();
                let lines = vec![
                    format!("norms of Z[√{d}] up to {bound}: {}", values.len()),
                    format!(
                        "  {}{}",
                        shown.join(" "),
                        if values.len() > shown.len() {
                            " …"
                        } else {
                            ""
                        }
                    ),
                ];
                Outcome::new(
                    Status::Pass,
                    json!({ "d": d, "bound": bound, "norms": values }),
                    lines,
                )
            }
            Err(e) => usage(e),
        },
        QuadCheck::DivisionClosure => match order.division_closure_check(&bound) {
            Ok(DivisionClosure::ClosedUpToBound { bound }) => Outcome::new(
                Status::Pass,
                json!({ "d": d, "closed_up_to": bound }),
                vec![format!(
                    "norm image of Z[√{d}] is division closed up to {bound}"
                )],
            ),
            Ok(DivisionClosure::Counterexample(c)) => {
                if !order.verify_counterexample(&c) {
                    return oracle("division counterexample", format!("{c:?} does not hold"));
                }
                let line = format!(
                    "{} | {} are norms of Z[√{d}] but {} is not",
                    c.divisor, c.multiple, c.quotient
                );
                Outcome::new(
                    Status::Pass,
                    json!({ "d": d, "counterexample": c }),
                    vec![line],
                )
            }
            Err(e) => usage(e),
        },
        QuadCheck::Verdict => match order.m_wire_verdict(&bound) {
            Ok(v) => {
                if let MWireVerdict::NotMWire(c) = &v {
                    if !order.verify_counterexample(c) {
                        return oracle("division counterexample", format!("{c:?} does not hold"));
                    }
                }
                let line = match &v {
                    MWireVerdict::NotMWire(c) => format!(
                        "N(Z[√{d}]) is not an M-wire: {} | {} but {} is not a norm",
                        c.divisor, c.multiple, c.quotient
                    ),
                    MWireVerdict::ConsistentWithMWireUpToBound { bound } => {
                        format!("N(Z[√{d}]) is consistent with an M-wire up to {bound}")
                    }
                };
                Outcome::new(Status::Pass, json!({ "d": d, "verdict": v }), vec![line])
            }
            Err(e) => usage(e),
        },
        QuadCheck::SWire => match order.s_wire_check(&prime_bound, &search_bound) {
            Ok(report) => {
                if let Some(bad) = report
                    .primes
                    .iter()
                    .find(|c| !order.verify_prime_witness(c))
                {
                    return oracle("prime witness", format!("{bad:?} does not hold"));
                }
                let count = |f: fn(&PrimeWitness<i64>) -> bool| {
                    report.primes.iter().filter(|c| f(&c.witness)).count()
                };
                let unresolved: Vec<i64> = report.unresolved().copied().collect();
                let mut lines = vec![format!(
                    "primes up to {prime_bound} in Z[√{d}]: {} inert, {} norms, {} gcd of norms, {} unresolved",
                    count(|w| matches!(w, PrimeWitness::Inert)),
                    count(|w| matches!(w, PrimeWitness::Norm { .. })),
                    count(|w| matches!(w, PrimeWitness::GcdGenerated { .. })),
                    unresolved.len()
                )];
                for c in &report.primes {
                    let detail = match &c.witness {
                        PrimeWitness::Inert => "inert".to_string(),
                        PrimeWitness::Norm { a, b } => format!("N({a}, {b})"),
                        PrimeWitness::GcdGenerated { first, second } => {
                            format!("gcd({first}, {second})")
                        }
                        PrimeWitness::Unresolved => "unresolved".to_string(),
                    };
                    lines.push(format!("  {}: {detail}", c.p));
                }
                let status = if report.all_resolved() {
                    Status::Pass
                } else {
                    Status::CheckFailed
                };
                Outcome::new(
                    status,
                    json!({ "report": report, "unresolved": unresolved }),
                    lines,
                )
            }
            Err(e) => usage(e),
        },
    }
}
