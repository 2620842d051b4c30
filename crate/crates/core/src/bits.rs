//! Bitmask subsets of a small carrier.

/// A subset of a carrier of at most [`MAX_ELEMENTS`] elements, bit `i` set iff
/// element `i` is a member.
pub type Mask = u64;

/// Largest carrier representable by a [`Mask`].
pub const MAX_ELEMENTS: usize = 64;

#[inline]
pub fn bit(i: usize) -> Mask {
    1 << i
}

#[inline]
pub fn full(n: usize) -> Mask {
    if n >= 64 {
        !0
    } else {
        (1 << n) - 1
    }
}

#[inline]
pub fn contains(mask: Mask, i: usize) -> bool {
    mask >> i & 1 == 1
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Indices of the set bits, ascending.
pub fn members(mask: Mask) -> Members {
    Members(mask)
}

pub struct Members(Mask);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Mask {
    indices.into_iter().fold(0, |m, i| m | bit(i))
}

/// All submasks of `set`, starting at the empty set and ending at `set`.
pub fn submasks(set: Mask) -> Submasks {
    Submasks { set, next: Some(0) }
}

pub struct Submasks {
    set: Mask,
    next: Option<Mask>,
}

impl Iterator for Submasks {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(cur)
    }
}
