//! Miller–Rabin primality: deterministic witness set below 2^64, a strong
//! probable-prime battery above.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Witnesses proving primality for every n < 2^64.
const WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Fixed base battery for larger inputs (strong probable primes only).
const WITNESSES_BIG: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &WITNESSES_U64 {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u64;
    while (&d % &two).is_zero() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &WITNESSES_BIG {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (2..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn carmichael_and_strong_pseudoprimes() {
        for n in [561u64, 1105, 1729, 25326001, 3215031751] {
            assert!(!is_prime_u64(n), "{n} is composite");
        }
        assert!(is_prime_u64(18446744073709551557)); // largest prime < 2^64
    }

    #[test]
    fn big_inputs() {
        // 2^89 - 1 is a Mersenne prime; 2^87 - 1 is composite.
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        let m87 = (BigUint::one() << 87u32) - BigUint::one();
        assert!(is_prime(&m89));
        assert!(!is_prime(&m87));
    }
}
