//! The divisibility lattice of the natural numbers.
//!
//! Order is reversed divisibility (`a ≤ b` iff `b | a`), so `1` is the top,
//! `0` the bottom, joins are gcds and meets are lcms. Multiplication is the
//! usual product. All functions are generic over any [`Integer`] type and
//! expect non-negative inputs.

use num_integer::Integer;

/// `d | n`, with `0 | n` only for `n = 0`.
pub fn divides<T: Integer>(d: &T, n: &T) -> bool {
    if d.is_zero() {
        n.is_zero()
    } else {
        n.is_multiple_of(d)
    }
}

/// `a ≤ b` in the divisibility order.
pub fn nat_leq<T: Integer>(a: &T, b: &T) -> bool {
    divides(b, a)
}

/// gcd of the set; the empty join is `0`.
pub fn nat_join<T: Integer + Clone, I: IntoIterator<Item = T>>(set: I) -> T {
    set.into_iter().fold(T::zero(), |acc, x| acc.gcd(&x))
}

/// lcm of the set; the empty meet is `1`.
pub fn nat_meet<T: Integer + Clone, I: IntoIterator<Item = T>>(set: I) -> T {
    set.into_iter().fold(T::one(), |acc, x| acc.lcm(&x))
}

/// `(a:b)`, the gcd of all `y` with `a | b·y`, in closed form `a / gcd(a, b)`.
///
/// When `b = 0` every `y` qualifies and the residual is the top element `1`,
/// for every `a` including `0`.
pub fn nat_residual<T: Integer + Clone>(a: &T, b: &T) -> T {
    if b.is_zero() {
        return T::one();
    }
    a.clone() / a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn joins_and_meets() {
        assert_eq!(nat_join([4u64, 6]), 2);
        assert_eq!(nat_join(Vec::<u64>::new()), 0);
        assert_eq!(nat_meet([4u64, 6]), 12);
        assert_eq!(nat_meet(Vec::<u64>::new()), 1);
        assert_eq!(nat_meet([0u64, 6]), 0);
        assert!(nat_leq(&12u32, &4));
        assert!(nat_leq(&0u32, &7));
        assert!(!nat_leq(&7u32, &0));
    }

    #[test]
    fn residual_examples() {
        assert_eq!(nat_residual(&12u64, &8), 3);
        assert_eq!(nat_residual(&12u64, &0), 1);
        assert_eq!(nat_residual(&0u64, &0), 1);
        assert_eq!(nat_residual(&0u64, &5), 0);
        assert_eq!(nat_residual(&7u64, &1), 7);
        assert_eq!(nat_residual(&1u64, &9), 1);
        let big = BigUint::from(12u32);
        assert_eq!(
            nat_residual(&big, &BigUint::from(8u32)),
            BigUint::from(3u32)
        );
    }
}
