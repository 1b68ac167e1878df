//! Smallest-prime-factor and squarefree sieves. Tables are built once and
//! immutable afterwards, so they can be shared read-only across workers.

/// Smallest-prime-factor array for 0..=limit. `spf[n]` is the least prime
/// dividing `n` (0 for n < 2), giving O(log n) factorization per lookup.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && (n as usize) <= self.limit());
        let mut out = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0u32;
            while m as u64 % p == 0 {
                m /= p as usize;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    pub fn radical(&self, n: u64) -> u64 {
        self.factor(n).iter().map(|&(p, _)| p).product()
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.factor(n).iter().all(|&(_, e)| e == 1)
    }

    pub fn omega(&self, n: u64) -> u32 {
        self.factor(n).len() as u32
    }
}

/// `radical(n)` for every n in 0..=limit (index 0 holds 0, index 1 holds 1).
pub fn radical_table(limit: usize) -> Vec<u64> {
    let sieve = SpfSieve::new(limit);
    let mut rad = vec![0u64; limit + 1];
    if limit >= 1 {
        rad[1] = 1;
    }
    for n in 2..=limit {
        let p = sieve.spf[n] as usize;
        let m = n / p;
        rad[n] = if m % p == 0 { rad[m] } else { rad[m] * p as u64 };
    }
    rad
}

/// All squarefree s <= n, ascending, by marking multiples of squared primes.
pub fn squarefree_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut squarefree = vec![true; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        // marking composites with every p works too; only squares of primes
        // matter, the rest are already covered by a smaller prime
        let sq = p * p;
        let mut j = sq;
        while j <= n {
            squarefree[j] = false;
            j += sq;
        }
        p += 1;
    }
    (1..=n as u64).filter(|&s| squarefree[s as usize]).collect()
}

/// Primes strictly below `q`, ascending.
pub fn primes_below(q: u64) -> Vec<u64> {
    if q <= 2 {
        return Vec::new();
    }
    let n = (q - 1) as usize;
    let mut is_p = vec![true; n + 1];
    is_p[0] = false;
    if n >= 1 {
        is_p[1] = false;
    }
    let mut p = 2usize;
    while p * p <= n {
        if is_p[p] {
            let mut j = p * p;
            while j <= n {
                is_p[j] = false;
                j += p;
            }
        }
        p += 1;
    }
    (2..=n as u64).filter(|&v| is_p[v as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_upto(10), vec![1, 2, 3, 5, 6, 7, 10]);
        assert_eq!(squarefree_upto(1), vec![1]);
        assert_eq!(squarefree_upto(100).len(), 61);
    }

    #[test]
    fn squarefree_density_tracks_leading_term() {
        let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        for n in [10_000u64, 100_000, 1_000_000] {
            let density = squarefree_upto(n).len() as f64 / n as f64;
            assert!((density - target).abs() < 0.02, "density {density} at {n}");
        }
    }

    #[test]
    fn spf_agrees_with_direct_factorization() {
        let sieve = SpfSieve::new(10_000);
        for n in 1..=10_000u64 {
            let back: u64 = sieve.factor(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
        }
        assert_eq!(sieve.factor(72), vec![(2, 3), (3, 2)]);
        assert_eq!(sieve.radical(72), 6);
    }

    #[test]
    fn primes_below_is_strict() {
        assert_eq!(primes_below(7), vec![2, 3, 5]);
        assert_eq!(primes_below(3), vec![2]);
        assert!(primes_below(2).is_empty());
    }
}
