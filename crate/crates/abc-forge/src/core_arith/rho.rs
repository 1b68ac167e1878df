//! Pollard rho with Brent cycle detection, on u64 (fast path) and BigUint.

use super::primality::is_prime_u64;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::time::Instant;

/// Small deterministic PRNG for picking rho parameters.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn step(y: u64, c: u64, n: u64) -> u64 {
    ((y as u128 * y as u128 + c as u128) % n as u128) as u64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Finds a nontrivial factor of composite odd `n` (u64). Retries with new
/// parameters until it succeeds; u64-sized composites always fall quickly.
fn brent_u64(n: u64, seed: u64) -> u64 {
    let mut rng = SplitMix(seed ^ n);
    loop {
        let c = rng.next() % (n - 2) + 1;
        let mut y = rng.next() % n;
        let m = 128u64;
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y, c, n);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = step(y, c, n);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = step(ys, c, n);
                g = gcd(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
    }
}

/// Fully factors a u64. Always completes.
pub fn factorize_u64(n: u64, seed: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let f = brent_u64(m, seed);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_by_key(|&(p, _)| p);
    out
}

/// Brent rho on BigUint. Returns a nontrivial factor of composite `n`, or
/// `None` when the iteration cap or deadline is exhausted.
pub fn brent(n: &BigUint, iteration_cap: u64, seed: u64, deadline: Instant) -> Option<BigUint> {
    if let Some(v) = n.to_u64() {
        return Some(BigUint::from(brent_u64(v, seed)));
    }
    let mut rng = SplitMix(seed ^ n.to_u64_digits().first().copied().unwrap_or(0));
    let one = BigUint::one();
    let mut iterations = 0u64;
    loop {
        let c = BigUint::from(rng.next() | 1);
        let mut y = BigUint::from(rng.next());
        let batch = 128u64;
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += batch;
                iterations += batch;
                if iterations >= iteration_cap || Instant::now() >= deadline {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            g = one.clone();
            while g.is_one() {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                iterations += 1;
                if iterations >= iteration_cap || Instant::now() >= deadline {
                    return None;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
}
