//! Finite fields GF(p^alpha) with a fixed primitive element and discrete logs.
//!
//! Elements are encoded as integers: the polynomial `a_0 + a_1 x + ... +
//! a_{alpha-1} x^{alpha-1}` is stored as `a_0 + a_1 p + ... + a_{alpha-1}
//! p^{alpha-1}`. This integer is also the canonical ordering used when a
//! "least" element or polynomial is chosen.
//!
//! The modulus is the least monic primitive polynomial of degree alpha in
//! that ordering (coefficients below the leading one read as a base-p
//! integer), and the primitive element is the residue class of `x`. For
//! prime fields the modulus is `x - g` with `g` the least primitive root,
//! so the two conventions agree.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_FIELD_BOUND: u64 = 1_000_000;

pub struct FieldCtx {
    p: u64,
    alpha: u32,
    q: u64,
    modulus: Vec<u64>,
    gamma: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("alpha", &self.alpha)
            .field("modulus", &self.modulus)
            .field("gamma", &self.gamma)
            .finish()
    }
}

/// Builds GF(p^alpha) under the default size bound.
pub fn make_field(p: u64, alpha: u32) -> Result<Arc<FieldCtx>> {
    make_field_bounded(p, alpha, DEFAULT_FIELD_BOUND)
}

/// Builds GF(q) for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Arc<FieldCtx>> {
    let (p, alpha) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_field(p, alpha)
}

pub fn make_field_bounded(p: u64, alpha: u32, bound: u64) -> Result<Arc<FieldCtx>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if alpha == 0 {
        return Err(Error::InvalidArgument("field degree must be positive".into()));
    }
    let q = p
        .checked_pow(alpha)
        .filter(|&q| q <= bound)
        .ok_or(Error::FieldTooLarge {
            q: p.saturating_pow(alpha),
            bound,
        })?;
    let ctx = if alpha == 1 {
        prime_field(p)
    } else {
        extension_field(p, alpha, q)
    };
    Ok(Arc::new(ctx))
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = arith::prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| arith::mod_pow(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

fn prime_field(p: u64) -> FieldCtx {
    let gamma = least_primitive_root(p);
    let mut exp = Vec::with_capacity((p - 1) as usize);
    let mut x = 1u64;
    for _ in 0..p - 1 {
        exp.push(x as u32);
        x = x * gamma % p;
    }
    let log = invert_exp(&exp, p);
    FieldCtx {
        p,
        alpha: 1,
        q: p,
        modulus: vec![(p - gamma) % p, 1],
        gamma,
        exp,
        log,
    }
}

fn extension_field(p: u64, alpha: u32, q: u64) -> FieldCtx {
    let a = alpha as usize;
    for low in 0..q {
        let mut modulus = digits_of(low, p, a);
        if modulus[0] == 0 {
            continue;
        }
        modulus.push(1);
        if let Some(exp) = powers_of_x(&modulus, p, q) {
            let log = invert_exp(&exp, q);
            return FieldCtx {
                p,
                alpha,
                q,
                modulus,
                gamma: p,
                exp,
                log,
            };
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Successive powers of `x` modulo `modulus`, or `None` if `x` does not have
/// order `q - 1` (which also rules out reducible moduli).
fn powers_of_x(modulus: &[u64], p: u64, q: u64) -> Option<Vec<u32>> {
    let a = modulus.len() - 1;
    let mut cur = vec![0u64; a];
    cur[0] = 1;
    let mut exp = Vec::with_capacity((q - 1) as usize);
    for i in 0..q - 1 {
        let enc = encode(&cur, p);
        if i > 0 && enc == 1 {
            return None;
        }
        exp.push(enc as u32);
        // multiply by x and reduce by the monic modulus
        let lead = cur[a - 1];
        for j in (1..a).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if lead != 0 {
            for j in 0..a {
                cur[j] = (cur[j] + (p - lead) * modulus[j]) % p;
            }
        }
    }
    (encode(&cur, p) == 1).then_some(exp)
}

fn invert_exp(exp: &[u32], q: u64) -> Vec<u32> {
    let mut log = vec![u32::MAX; q as usize];
    for (i, &x) in exp.iter().enumerate() {
        log[x as usize] = i as u32;
    }
    log
}

fn digits_of(mut x: u64, p: u64, len: usize) -> Vec<u64> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push(x % p);
        x /= p;
    }
    d
}

fn encode(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus, coefficients from the constant term upwards.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    /// Same field and modulus with a different primitive element.
    pub fn with_gamma(&self, gamma: u64) -> Result<Arc<FieldCtx>> {
        if gamma == 0 || gamma >= self.q {
            return Err(Error::NotPrimitive { value: gamma, q: self.q });
        }
        let l = self.log[gamma as usize] as u64;
        if arith::gcd(l, self.q - 1) != 1 {
            return Err(Error::NotPrimitive { value: gamma, q: self.q });
        }
        let mut exp = Vec::with_capacity(self.exp.len());
        let mut x = 1;
        for _ in 0..self.q - 1 {
            exp.push(x as u32);
            x = self.mul(x, gamma);
        }
        let log = invert_exp(&exp, self.q);
        Ok(Arc::new(FieldCtx {
            p: self.p,
            alpha: self.alpha,
            q: self.q,
            modulus: self.modulus.clone(),
            gamma,
            exp,
            log,
        }))
    }

    /// Coefficient vector of an element, constant term first.
    pub fn coefficients(&self, x: u64) -> Vec<u64> {
        digits_of(x, self.p, self.alpha as usize)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.alpha == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.alpha == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q - 1)) as usize] as u64
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroLog);
        }
        let l = self.log[a as usize] as u64;
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u64)
    }

    pub fn pow(&self, a: u64, n: u64) -> u64 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u128 * n as u128;
        self.exp[(l % (self.q - 1) as u128) as usize] as u64
    }

    /// `gamma^i`.
    pub fn gamma_pow(&self, i: u64) -> u64 {
        self.exp[(i % (self.q - 1)) as usize] as u64
    }

    pub fn dlog(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroLog);
        }
        if x >= self.q {
            return Err(Error::ForeignElement {
                index: x as usize,
                order: self.q as usize,
            });
        }
        Ok(self.log[x as usize] as u64)
    }

    /// Nonzero square test (zero is not a square here).
    pub fn is_nonzero_square(&self, x: u64) -> bool {
        x != 0 && (self.p == 2 || self.log[x as usize] % 2 == 0)
    }

    /// Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 at 0.
    pub fn chi(&self, x: u64) -> i32 {
        if x == 0 {
            0
        } else if self.is_nonzero_square(x) {
            1
        } else {
            -1
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

/// Additive group of the field.
pub fn as_group(field: &Arc<FieldCtx>) -> crate::groups::GroupCtx {
    crate::groups::GroupCtx::field_additive(Arc::clone(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product of two encoded elements modulo the field's modulus.
    fn naive_mul(f: &FieldCtx, a: u64, b: u64) -> u64 {
        let p = f.p();
        let n = f.alpha() as usize;
        let (ca, cb) = (f.coefficients(a), f.coefficients(b));
        let mut prod = vec![0u64; 2 * n];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            }
        }
        let m = f.modulus();
        for d in (n..2 * n).rev() {
            let c = prod[d];
            if c != 0 {
                for j in 0..=n {
                    prod[d - n + j] = (prod[d - n + j] + (p - c) * m[j]) % p;
                }
            }
        }
        encode(&prod[..n], p)
    }

    #[test]
    fn prime_field_generators() {
        assert_eq!(make_field(7, 1).unwrap().gamma(), 3);
        assert_eq!(make_field(13, 1).unwrap().gamma(), 2);
    }

    #[test]
    fn gf9_modulus_and_gamma() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(f.gamma(), 3);
        assert_eq!(f.pow(3, 8), 1);
        assert_ne!(f.pow(3, 4), 1);
    }

    #[test]
    fn dlog_examples() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.dlog(1).unwrap(), 0);
        assert_eq!(f7.dlog(3).unwrap(), 1);
        let f13 = make_field(13, 1).unwrap();
        assert_eq!(f13.dlog(9).unwrap(), 8);
        assert_eq!(f13.dlog(0), Err(Error::ZeroLog));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(make_field(9, 1).unwrap_err(), Error::NotPrime(9));
        assert!(matches!(
            make_field_bounded(3, 7, 1000),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn gamma_is_primitive_up_to_2000() {
        for q in 2..=2000u64 {
            let Some((p, a)) = arith::prime_power(q) else { continue };
            let f = make_field(p, a).unwrap();
            let g = f.gamma();
            // order check with schoolbook multiplication, independent of the tables
            let mut x = 1;
            let mut powers = vec![1u64];
            for _ in 1..q {
                x = naive_mul(&f, x, g);
                powers.push(x);
            }
            assert_eq!(powers[(q - 1) as usize], 1, "q={q}");
            for d in arith::divisors(q - 1) {
                if d < q - 1 {
                    assert_ne!(powers[d as usize], 1, "q={q} d={d}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81] {
            let f = field_of_order(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), naive_mul(&f, a, b));
                    for c in 0..q {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for q in [3u64, 5, 9, 27, 49, 121, 125, 128, 243] {
            let f = field_of_order(q).unwrap();
            for x in 1..q {
                for y in 1..q {
                    let lhs = f.dlog(f.mul(x, y)).unwrap();
                    let rhs = (f.dlog(x).unwrap() + f.dlog(y).unwrap()) % (q - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gamma_override() {
        let f = make_field(7, 1).unwrap();
        let g = f.with_gamma(5).unwrap();
        assert_eq!(g.gamma(), 5);
        assert_eq!(g.dlog(5).unwrap(), 1);
        assert!(f.with_gamma(2).is_err());
    }
}
