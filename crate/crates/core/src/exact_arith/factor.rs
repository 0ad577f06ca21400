//! Desk-scale integer factorization: trial division with a 6k+-1 wheel, then
//! Brent's rho for surviving cofactors, under an explicit budget.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modular::is_prime_u64;
use crate::error::{Error, Result};

/// Explicit factorization budget. Exceeding it is a hard error: it means the
/// input is too large for desk scale, never that the answer is "probably
/// prime".
#[derive(Debug, Clone)]
pub struct FactorBudget {
    /// Trial division covers all divisors up to this bound.
    pub trial_limit: u64,
    /// Rho restarts (fresh polynomial constant) per surviving composite.
    pub rho_rounds: u32,
    /// Iteration cap per rho round.
    pub rho_iters: u64,
    /// Seed for rho's randomized constants; fixed default keeps runs
    /// byte-reproducible.
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_rounds: 16,
            rho_iters: 200_000,
            seed: 0x5eed_fac7,
        }
    }
}

/// Sign and ascending prime powers; `factors` is empty for 0 and +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// sign * prod p^e, the reconstructed input.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for &(p, e) in &self.factors {
            v *= BigInt::from(p).pow(e);
        }
        v
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Factorizes n under the default budget.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::default())
}

/// Factorizes n under an explicit budget.
///
/// Errors with [`Error::BudgetExceeded`] when a composite cofactor survives
/// trial division and all rho rounds, or when a prime factor does not fit u64.
pub fn factorize_with(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    let sign = match n.sign() {
        num_bigint::Sign::Minus => -1i8,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    if sign != 0 {
        let cofactor = trial_phase(n.magnitude().clone(), budget.trial_limit, &mut counts);
        if !cofactor.is_one() {
            split_cofactor(cofactor, budget, &mut counts)?;
        }
    }
    Ok(Factorization {
        sign,
        factors: counts.into_iter().collect(),
    })
}

/// Removes every prime divisor <= limit; returns the cofactor.
fn trial_phase(mut v: BigUint, limit: u64, counts: &mut BTreeMap<u64, u32>) -> BigUint {
    let mut d = 2u64;
    loop {
        if let Some(small) = v.to_u64() {
            return BigUint::from(trial_phase_u64(small, d, limit, counts));
        }
        if d > limit {
            return v;
        }
        // v exceeds u64 here, so d*d <= v always holds at this point.
        while (&v % d).is_zero() {
            v /= d;
            *counts.entry(d).or_insert(0) += 1;
        }
        d = next_wheel(d);
    }
}

fn trial_phase_u64(mut v: u64, mut d: u64, limit: u64, counts: &mut BTreeMap<u64, u32>) -> u64 {
    while d <= limit && d.saturating_mul(d) <= v {
        while v % d == 0 {
            v /= d;
            *counts.entry(d).or_insert(0) += 1;
        }
        d = next_wheel(d);
    }
    if v > 1 && d.saturating_mul(d) > v {
        // No divisor below sqrt(v) remains, so v is prime.
        *counts.entry(v).or_insert(0) += 1;
        return 1;
    }
    v
}

fn next_wheel(d: u64) -> u64 {
    match d {
        2 => 3,
        3 => 5,
        _ => {
            if d % 6 == 5 {
                d + 2
            } else {
                d + 4
            }
        }
    }
}

fn split_cofactor(
    v: BigUint,
    budget: &FactorBudget,
    counts: &mut BTreeMap<u64, u32>,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime_big(&v) {
            let p = v
                .to_u64()
                .ok_or_else(|| Error::BudgetExceeded(format!("prime factor {v} exceeds u64")))?;
            *counts.entry(p).or_insert(0) += 1;
            continue;
        }
        let d = brent_rho(&v, budget, &mut rng)
            .ok_or_else(|| Error::BudgetExceeded(format!("composite cofactor {v}")))?;
        stack.push(&v / &d);
        stack.push(d);
    }
    Ok(())
}

/// Miller-Rabin with the 12-witness set (exact below 3.3 * 10^24, which is
/// beyond every budget-respecting input; larger values are out of desk scale
/// and would fail the u64 fit check anyway).
fn is_prime_big(v: &BigUint) -> bool {
    if let Some(small) = v.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = v - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, v);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, v);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard rho with batched gcds.
fn brent_rho(n: &BigUint, budget: &FactorBudget, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    for _ in 0..budget.rho_rounds {
        let c = BigUint::from(rng.gen_range(1u64..=u64::MAX)) % n;
        let mut y = BigUint::from(rng.gen_range(2u64..=u64::MAX)) % n;
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r: u64 = 1;
        let mut used: u64 = 0;
        let batch = 128u64;
        'round: while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += batch;
                used += batch;
                if used > budget.rho_iters {
                    break 'round;
                }
            }
            r *= 2;
        }
        if g == *n {
            // Batch overshot the factor; replay one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Ascending primes up to n inclusive (simple sieve; sized for sweeps).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}
