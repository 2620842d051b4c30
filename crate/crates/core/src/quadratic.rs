//! Norm images of the imaginary quadratic orders `ℤ[√d]` and the
//! divisibility-lattice wire they generate.
//!
//! For squarefree `d < 0` with `d ≡ 2, 3 (mod 4)` the ring of integers of
//! `ℚ(√d)` is `ℤ[√d]` and the norm `N(a + b√d) = a² + |d|·b²` is positive
//! definite. `S` is the multiplicative closure in `ℕ` of the norm image and
//! the inert primes. It is an M-wire of the divisibility lattice exactly when
//! the norm image is closed under division, which is what
//! [`QuadOrder::division_closure_check`] tests up to a bound. A positive
//! answer is only bounded evidence.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::{Debug, Display};

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Integer types usable as coefficients: `i64`, `i128`, `BigInt`, ...
pub trait QuadInt:
    Integer + Signed + Roots + Clone + ToPrimitive + FromPrimitive + Debug + Display
{
}

impl<T> QuadInt for T where
    T: Integer + Signed + Roots + Clone + ToPrimitive + FromPrimitive + Debug + Display
{
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("d = {0} must be negative")]
    NotNegative(String),
    #[error("d = {0} is not squarefree")]
    NotSquarefree(String),
    #[error("d = {0} is ≡ 1 (mod 4); only d ≡ 2, 3 (mod 4) are supported")]
    OneModFour(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("bound {0} does not fit in memory-indexable range")]
    BoundTooLarge(String),
}

fn small<T: QuadInt>(n: i64) -> T {
    T::from_i64(n).expect("small constant")
}

/// Trial-division primality.
pub fn is_prime<T: QuadInt>(n: &T) -> bool {
    if *n < small(2) {
        return false;
    }
    let mut k: T = small(2);
    while k.clone() * k.clone() <= *n {
        if n.is_multiple_of(&k) {
            return false;
        }
        k = k + T::one();
    }
    true
}

fn is_squarefree<T: QuadInt>(n: &T) -> bool {
    let n = n.abs();
    let mut k: T = small(2);
    while k.clone() * k.clone() <= n {
        if n.is_multiple_of(&(k.clone() * k.clone())) {
            return false;
        }
        k = k + T::one();
    }
    true
}

/// The Kronecker symbol `(a | n)` for `n ≥ 1`.
pub fn kronecker<T: QuadInt>(a: &T, n: &T) -> i8 {
    assert!(*n >= T::one(), "kronecker symbol needs n ≥ 1");
    let two: T = small(2);
    let eight: T = small(8);
    let mut n = n.clone();
    let mut sign = 1i8;
    // Factors of two via (a | 2).
    while n.is_even() {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&eight).to_u8().unwrap();
        if r == 3 || r == 5 {
            sign = -sign;
        }
        n = n / two.clone();
    }
    // Jacobi symbol for odd n.
    let mut a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a = a / two.clone();
            let r = n.mod_floor(&eight).to_u8().unwrap();
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let four: T = small(4);
        if a.mod_floor(&four) == small(3) && n.mod_floor(&four) == small(3) {
            sign = -sign;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// `ℤ[√d]` for squarefree `d < 0`, `d ≡ 2, 3 (mod 4)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadOrder<T> {
    d: T,
}

/// `a² + |d|·b² = m` for some `a, b` with `m` divisible by `n`, and `m / n`
/// not a norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionCounterexample<T> {
    pub divisor: T,
    pub multiple: T,
    pub quotient: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DivisionClosure<T> {
    ClosedUpToBound { bound: T },
    Counterexample(DivisionCounterexample<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MWireVerdict<T> {
    NotMWire(DivisionCounterexample<T>),
    ConsistentWithMWireUpToBound { bound: T },
}

/// How a prime is shown to lie below a join of elements of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrimeWitness<T> {
    /// Inert primes are in `S` by construction.
    Inert,
    /// `p = a² + |d|·b²`.
    Norm { a: T, b: T },
    /// `gcd(first, second) = p` with both in the norm image.
    GcdGenerated { first: T, second: T },
    /// Nothing found within the search bound.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClass<T> {
    pub p: T,
    pub witness: PrimeWitness<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SGenReport<T> {
    pub d: T,
    pub prime_bound: T,
    pub search_bound: T,
    pub primes: Vec<PrimeClass<T>>,
}

impl<T: QuadInt> SGenReport<T> {
    pub fn unresolved(&self) -> impl Iterator<Item = &T> {
        self.primes
            .iter()
            .filter(|c| c.witness == PrimeWitness::Unresolved)
            .map(|c| &c.p)
    }

    pub fn all_resolved(&self) -> bool {
        self.unresolved().next().is_none()
    }
}

/// Sorted norm values in `[0, bound]` plus a membership table.
#[derive(Clone, Debug)]
pub struct NormImage<T> {
    bound: usize,
    member: Vec<bool>,
    values: Vec<T>,
}

impl<T: QuadInt> NormImage<T> {
    pub fn contains(&self, n: &T) -> bool {
        n.to_usize()
            .filter(|&i| i <= self.bound)
            .is_some_and(|i| self.member[i])
    }

    /// Norm values in `[0, bound]`, ascending and deduplicated.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn bound(&self) -> usize {
        self.bound
    }
}

impl<T: QuadInt> QuadOrder<T> {
    pub fn new(d: T) -> Result<Self, QuadError> {
        if !d.is_negative() {
            return Err(QuadError::NotNegative(d.to_string()));
        }
        if !is_squarefree(&d) {
            return Err(QuadError::NotSquarefree(d.to_string()));
        }
        if d.mod_floor(&small(4)) == T::one() {
            return Err(QuadError::OneModFour(d.to_string()));
        }
        Ok(QuadOrder { d })
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    fn abs_d(&self) -> T {
        self.d.abs()
    }

    /// `N(a + b√d) = a² − d·b²`.
    pub fn norm(&self, a: &T, b: &T) -> T {
        a.clone() * a.clone() - self.d.clone() * b.clone() * b.clone()
    }

    /// A representation `n = a² + |d|·b²` with `a, b ≥ 0` and `b` minimal.
    pub fn is_norm(&self, n: &T) -> Option<(T, T)> {
        if n.is_negative() {
            return None;
        }
        let dd = self.abs_d();
        let mut b = T::zero();
        while dd.clone() * b.clone() * b.clone() <= *n {
            let rest = n.clone() - dd.clone() * b.clone() * b.clone();
            let a = rest.sqrt();
            if a.clone() * a.clone() == rest {
                return Some((a, b));
            }
            b = b + T::one();
        }
        None
    }

    /// Composes representations of `m` and `n` into one of `m·n`:
    /// `(a² + Db²)(c² + De²) = (ac − Dbe)² + D(ae + bc)²`.
    pub fn compose(&self, (a, b): (T, T), (c, e): (T, T)) -> (T, T) {
        let dd = self.abs_d();
        (
            a.clone() * c.clone() - dd * b.clone() * e.clone(),
            a * e + b * c,
        )
    }

    /// Whether the prime `p` stays prime in `ℤ[√d]`: Kronecker `(4d | p) = −1`.
    pub fn is_inert(&self, p: &T) -> Result<bool, QuadError> {
        if !is_prime(p) {
            return Err(QuadError::NotPrime(p.to_string()));
        }
        let disc = self.d.clone() * small::<T>(4);
        Ok(kronecker(&disc, p) == -1)
    }

    /// All norm values up to `bound`, by sieving over `(a, b)`.
    pub fn norm_image(&self, bound: &T) -> Result<NormImage<T>, QuadError> {
        let limit = bound
            .to_usize()
            .filter(|&b| b < usize::MAX / 2)
            .ok_or_else(|| QuadError::BoundTooLarge(bound.to_string()))?;
        let dd = self.abs_d().to_usize().unwrap_or(usize::MAX);
        let mut member = vec![false; limit + 1];
        let mut b = 0usize;
        while dd.saturating_mul(b * b) <= limit {
            let base = dd * b * b;
            let mut a = 0usize;
            while base + a * a <= limit {
                member[base + a * a] = true;
                a += 1;
            }
            b += 1;
        }
        let values = member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| T::from_usize(i).unwrap())
            .collect();
        Ok(NormImage {
            bound: limit,
            member,
            values,
        })
    }

    /// Every nonzero norm pair `n | m ≤ bound` whose quotient is not a norm,
    /// ordered by `(m, n)`.
    pub fn division_counterexamples(
        &self,
        bound: &T,
    ) -> Result<Vec<DivisionCounterexample<T>>, QuadError> {
        let image = self.norm_image(bound)?;
        let limit = image.bound;
        let mut out = Vec::new();
        for (n, _) in image.member.iter().enumerate().skip(1).filter(|(_, &m)| m) {
            for m in (n..=limit).step_by(n) {
                if image.member[m] && !image.member[m / n] {
                    out.push((m, n));
                }
            }
        }
        out.sort_unstable();
        Ok(out
            .into_iter()
            .map(|(m, n)| DivisionCounterexample {
                divisor: T::from_usize(n).unwrap(),
                multiple: T::from_usize(m).unwrap(),
                quotient: T::from_usize(m / n).unwrap(),
            })
            .collect())
    }

    /// Whether the nonzero norm image up to `bound` is closed under division;
    /// otherwise the counterexample with the smallest multiple (ties broken by
    /// the smaller divisor).
    pub fn division_closure_check(&self, bound: &T) -> Result<DivisionClosure<T>, QuadError> {
        let image = self.norm_image(bound)?;
        let limit = image.bound;
        let mut best: Option<(usize, usize)> = None;
        for n in (1..=limit).filter(|&n| image.member[n]) {
            for m in (n..=limit).step_by(n) {
                if best.is_some_and(|(bm, _)| m >= bm) {
                    break;
                }
                if image.member[m] && !image.member[m / n] {
                    best = Some((m, n));
                    break;
                }
            }
        }
        Ok(match best {
            None => DivisionClosure::ClosedUpToBound {
                bound: bound.clone(),
            },
            Some((m, n)) => DivisionClosure::Counterexample(DivisionCounterexample {
                divisor: T::from_usize(n).unwrap(),
                multiple: T::from_usize(m).unwrap(),
                quotient: T::from_usize(m / n).unwrap(),
            }),
        })
    }

    /// Re-checks a counterexample without the sieve: both members are norms,
    /// the divisor divides, and the quotient is not a norm.
    pub fn verify_counterexample(&self, c: &DivisionCounterexample<T>) -> bool {
        !c.divisor.is_zero()
            && self.is_norm(&c.divisor).is_some()
            && self.is_norm(&c.multiple).is_some()
            && c.multiple.is_multiple_of(&c.divisor)
            && c.multiple.clone() / c.divisor.clone() == c.quotient
            && self.is_norm(&c.quotient).is_none()
    }

    pub fn m_wire_verdict(&self, bound: &T) -> Result<MWireVerdict<T>, QuadError> {
        Ok(match self.division_closure_check(bound)? {
            DivisionClosure::ClosedUpToBound { bound } => {
                MWireVerdict::ConsistentWithMWireUpToBound { bound }
            }
            DivisionClosure::Counterexample(c) => MWireVerdict::NotMWire(c),
        })
    }

    /// Classifies each prime `p ≤ prime_bound` as inert, a norm, or the gcd
    /// of two norms `≤ search_bound`. Pairs are scanned in increasing order
    /// of their product; the first hit is kept.
    pub fn s_wire_check(
        &self,
        prime_bound: &T,
        search_bound: &T,
    ) -> Result<SGenReport<T>, QuadError> {
        let image = self.norm_image(search_bound)?;
        let mut primes = Vec::new();
        let mut p: T = small(2);
        while p <= *prime_bound {
            if is_prime(&p) {
                let witness = if self.is_inert(&p)? {
                    PrimeWitness::Inert
                } else if let Some((a, b)) = self.is_norm(&p) {
                    PrimeWitness::Norm { a, b }
                } else {
                    gcd_witness(&image, &p)
                        .map(|(first, second)| PrimeWitness::GcdGenerated { first, second })
                        .unwrap_or(PrimeWitness::Unresolved)
                };
                primes.push(PrimeClass {
                    p: p.clone(),
                    witness,
                });
            }
            p = p + T::one();
        }
        Ok(SGenReport {
            d: self.d.clone(),
            prime_bound: prime_bound.clone(),
            search_bound: search_bound.clone(),
            primes,
        })
    }

    /// Re-checks one classification independently of the search.
    pub fn verify_prime_witness(&self, class: &PrimeClass<T>) -> bool {
        let p = &class.p;
        match &class.witness {
            PrimeWitness::Inert => self.is_inert(p) == Ok(true),
            PrimeWitness::Norm { a, b } => self.norm(a, b) == *p,
            PrimeWitness::GcdGenerated { first, second } => {
                first.gcd(second) == *p
                    && self.is_norm(first).is_some()
                    && self.is_norm(second).is_some()
            }
            PrimeWitness::Unresolved => true,
        }
    }
}

/// Smallest-product pair of distinct nonzero norms with gcd exactly `p`.
fn gcd_witness<T: QuadInt>(image: &NormImage<T>, p: &T) -> Option<(T, T)> {
    let multiples: Vec<&T> = image
        .values
        .iter()
        .filter(|v| !v.is_zero() && v.is_multiple_of(p))
        .collect();
    let product = |i: usize, j: usize| multiples[i].clone() * multiples[j].clone();
    let mut heap: BinaryHeap<Reverse<(T, usize, usize)>> = (0..multiples.len().saturating_sub(1))
        .map(|i| Reverse((product(i, i + 1), i, i + 1)))
        .collect();
    while let Some(Reverse((_, i, j))) = heap.pop() {
        if multiples[i].gcd(multiples[j]) == *p {
            return Some((multiples[i].clone(), multiples[j].clone()));
        }
        if j + 1 < multiples.len() {
            heap.push(Reverse((product(i, j + 1), i, j + 1)));
        }
    }
    None
}
