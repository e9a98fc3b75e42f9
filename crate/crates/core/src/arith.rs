//! Small integer helpers shared by the field, cyclotomy and filter code.

use num_integer::Roots;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `q = p^alpha`; `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut alpha = 0;
    while rest % p == 0 {
        rest /= p;
        alpha += 1;
    }
    (rest == 1).then_some((p, alpha))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

pub fn is_odd_prime_power(q: u64) -> bool {
    q % 2 == 1 && is_prime_power(q)
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as u64).sqrt();
    r * r == n as u64
}

pub fn is_sum_of_two_squares(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let n = n as u64;
    let mut a = 0;
    while a * a <= n {
        if is_square((n - a * a) as i64) {
            return true;
        }
        a += 1;
    }
    false
}

/// `n = x^2 + y^2 + xy` for some integers by direct scan.
pub fn is_loeschian(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let bound = (n as u64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if x * x + y * y + x * y == n {
                return true;
            }
        }
    }
    false
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Odd prime powers in `[lo, hi]`.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&q| is_odd_prime_power(q)).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
