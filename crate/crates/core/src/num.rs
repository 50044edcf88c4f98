//! Integer utilities: deterministic primality, factorization, Euler's phi,
//! and divisor enumeration for the group orders q^n - 1 that drive the
//! multiplicative-order computations.

use crate::error::{Error, Result};

/// Largest value q^n the library will factor or count over.
pub const MAX_COUNT: u64 = 1 << 40;
/// Largest field the library will enumerate element by element.
pub const MAX_ENUM: u64 = 1 << 20;
/// Largest base-field size q = p^m.
pub const MAX_BASE: u64 = 1 << 20;

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1u64 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, valid for all u64 inputs with this base set.
pub fn is_prime(n: u64) -> bool {
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
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard's rho. Deterministic: the
/// polynomial increment steps through c = 1, 2, 3, ... until a factor splits.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 != 0);
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted increments for {n}");
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("lcm({a},{b})")))
}

/// Factors n into sorted (prime, exponent) pairs. Trial division up to 10^6,
/// then Pollard rho on what remains.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in 2u64..=1_000_000 {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    // What survives trial division is prime, a prime square, or a semiprime
    // with both factors above 10^6.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(m, &mut out);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    out
}

/// Euler's totient from a factorization.
pub fn phi_of_factored(factors: &[(u64, u32)]) -> u64 {
    let mut phi = 1u64;
    for &(p, e) in factors {
        phi *= p.pow(e - 1) * (p - 1);
    }
    phi
}

pub fn phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    phi_of_factored(&factor(n))
}

/// All divisors of the factored integer, sorted ascending.
pub fn divisors_of_factored(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    divisors_of_factored(&factor(n))
}

/// p^e with an explicit failure instead of silent wraparound.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// p^e, erring both on u64 overflow and on exceeding the given bound.
pub fn bounded_pow(base: u64, exp: u32, bound: u64, what: &str) -> Result<u64> {
    let v = checked_pow(base, exp)?;
    if v > bound {
        return Err(Error::TooLarge {
            what: format!("{what} = {v}"),
            bound,
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_carmichael() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(25326001));
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(is_prime(1_099_511_627_689)); // near 2^40
    }

    #[test]
    fn factor_mersenne_like() {
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(2), vec![(2, 1)]);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        // 2^40 - 1 = 3 * 5^2 * 11 * 17 * 31 * 41 * 61681
        assert_eq!(
            factor((1u64 << 40) - 1),
            vec![(3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (61681, 1)]
        );
        // semiprime beyond trial division: 1000003 * 1000033
        let n = 1_000_003u64 * 1_000_033u64;
        assert_eq!(factor(n), vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(phi(1), 1);
        assert_eq!(phi(12), 4);
        assert_eq!(phi(15), 8);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        // sum of phi(d) over divisors of n equals n
        for n in 1u64..200 {
            let s: u64 = divisors(n).iter().map(|&d| phi(d)).sum();
            assert_eq!(s, n);
        }
    }

    #[test]
    fn bounded_pow_is_loud() {
        assert_eq!(bounded_pow(2, 10, 1 << 20, "q").unwrap(), 1024);
        assert!(bounded_pow(2, 21, 1 << 20, "q").is_err());
        assert!(checked_pow(u64::MAX, 2).is_err());
    }
}
