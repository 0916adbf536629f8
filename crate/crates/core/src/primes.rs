//! Sieve of Eratosthenes and the square-free integers built from it.

use alloc::vec;
use alloc::vec::Vec;

/// Primality table for `0..=n`.
pub fn sieve(n: usize) -> Vec<bool> {
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= n {
        if is_prime[p] {
            let mut q = p * p;
            while q <= n {
                is_prime[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    is_prime
}

/// All primes `p <= n`, increasing.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    sieve(n)
        .iter()
        .enumerate()
        .filter_map(|(p, &is)| is.then_some(p))
        .collect()
}

/// The prime-counting function.
pub fn prime_count(n: usize) -> usize {
    sieve(n).iter().filter(|&&p| p).count()
}

/// Every set of distinct primes whose product is at most `n`, each given as
/// an increasing list of primes. The empty set (the integer 1) comes first.
pub fn squarefree_prime_sets(n: usize) -> Vec<Vec<usize>> {
    let primes = primes_up_to(n);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    collect_sets(&primes, 0, 1, n, &mut stack, &mut out);
    out
}

fn collect_sets(
    primes: &[usize],
    start: usize,
    product: usize,
    limit: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(stack.clone());
    for (i, &p) in primes.iter().enumerate().skip(start) {
        let Some(next) = product.checked_mul(p).filter(|&q| q <= limit) else {
            // primes are increasing, so every later prime overshoots too
            break;
        };
        stack.push(p);
        collect_sets(primes, i + 1, next, limit, stack, out);
        stack.pop();
    }
}

/// Smallest prime factor of every integer in `0..=n` (0 for 0 and 1).
pub fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_ten() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(2), 1);
        assert_eq!(prime_count(100), 25);
        assert_eq!(prime_count(100_000), 9592);
    }

    #[test]
    fn squarefree_sets_match_trial_division() {
        for n in 1..200usize {
            let mut from_sets: Vec<usize> = squarefree_prime_sets(n)
                .iter()
                .map(|s| s.iter().product::<usize>())
                .collect();
            from_sets.sort_unstable();
            let brute: Vec<usize> = (1..=n)
                .filter(|&m| (2..=m).all(|k| m % (k * k) != 0))
                .collect();
            assert_eq!(from_sets, brute, "n = {n}");
        }
    }

    #[test]
    fn spf_table() {
        let spf = smallest_prime_factors(30);
        assert_eq!(spf[2], 2);
        assert_eq!(spf[15], 3);
        assert_eq!(spf[29], 29);
        assert_eq!(spf[25], 5);
    }
}
