//! Single-word fast paths for rings of length `n <= 64`. Bit `i` is the
//! coefficient of `Z^i`; callers guarantee bits `>= n` are clear.

#[inline]
pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Multiplication by `Z^k` in the ring of length `n`.
#[inline]
pub(crate) fn rotr(v: u64, k: usize, n: usize) -> u64 {
    let k = k % n;
    if k == 0 {
        v
    } else {
        ((v << k) | (v >> (n - k))) & mask(n)
    }
}

#[inline]
pub(crate) fn mul_mod(u: u64, v: u64, n: usize) -> u64 {
    let mut acc = 0;
    let mut rest = u;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        acc ^= rotr(v, i, n);
        rest &= rest - 1;
    }
    acc
}

/// Smallest `d | n` with `rotr(v, d) == v`.
pub(crate) fn period(v: u64, n: usize) -> usize {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| rotr(v, d, n) == v)
        .unwrap_or(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_and_product() {
        assert_eq!(rotr(0b001, 1, 3), 0b010);
        assert_eq!(rotr(0b100, 1, 3), 0b001);
        // (1+Z)(1+Z+Z^2) = 0 mod Z^3+1
        assert_eq!(mul_mod(0b011, 0b111, 3), 0);
        assert_eq!(period(0b001_001_001, 9), 3);
        assert_eq!(period(0, 9), 1);
        assert_eq!(period(1, 13), 13);
    }
}
