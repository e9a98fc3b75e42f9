use num_rational::Ratio;

use crate::arith;
use crate::diffcore::Params;
use crate::error::{Error, Result};
use crate::gf;
use crate::groups::{Elem, GroupCtx};

use super::{finish, to_elems, ConstructedSet};

/// `D = {i ∈ Z_{q-1} : gamma^i + 1 is a nonsquare}`.
pub fn gmw_like_support(q: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "gmw_like";
    if q % 2 == 0 || !arith::is_prime_power(q) {
        return Err(Error::precondition(FAMILY, format!("q = {q} is not an odd prime power")));
    }
    if q == 3 {
        return Err(Error::precondition(FAMILY, "q = 3 gives the trivial (2,1,0) difference set, not an ADS"));
    }
    let field = gf::field_of_order(q)?;
    let n = q - 1;
    let set = to_elems((0..n).filter(|&i| {
        let y = field.add(field.gamma_pow(i), 1);
        y != 0 && !field.is_nonzero_square(y)
    }));
    let claim = if q % 4 == 3 {
        Params::ADS {
            v: n,
            k: n / 2,
            lambda: (q - 3) / 4,
            t: (3 * q - 5) / 4,
        }
    } else {
        Params::ADS {
            v: n,
            k: n / 2,
            lambda: (q - 5) / 4,
            t: (q - 1) / 4,
        }
    };
    let notes = vec![format!("gamma = {}", field.gamma())];
    finish(
        FAMILY,
        "Arasu, Ding, Helleseth, Kumar, Martinsen",
        GroupCtx::cyclic(n as usize)?,
        set,
        vec![claim],
        notes,
    )
}

/// Which rule makes `x^s` perfect nonlinear on `GF(p^m)`, if any.
pub fn admissible_exponent(p: u64, m: u32, s: u64) -> Option<String> {
    if p % 2 == 0 {
        return None;
    }
    if s == 2 {
        return Some("s = 2".into());
    }
    let m64 = m as u64;
    let mut pk = 1u64;
    for k in 0..64u64 {
        if pk + 1 > s {
            break;
        }
        if pk + 1 == s && k > 0 && (m64 / arith::gcd(m64, k)) % 2 == 1 {
            return Some(format!("s = {p}^{k} + 1"));
        }
        pk = pk.checked_mul(p)?;
    }
    if p == 3 {
        let mut tk = 1u64;
        for k in 0..64u64 {
            if (tk + 1) / 2 > s {
                break;
            }
            if (tk + 1) / 2 == s && k % 2 == 1 && arith::gcd(m64, k) == 1 {
                return Some(format!("s = (3^{k} + 1)/2"));
            }
            tk = tk.checked_mul(3)?;
        }
    }
    None
}

/// Admissible exponents with `k ≤ 2m`, deduplicated.
pub fn admissible_exponents(p: u64, m: u32) -> Vec<u64> {
    let mut out = vec![2];
    for k in 1..=2 * m {
        let pk = p.pow(k);
        if admissible_exponent(p, m, pk + 1).is_some() {
            out.push(pk + 1);
        }
        if p == 3 && admissible_exponent(p, m, (pk + 1) / 2).is_some() {
            out.push((pk + 1) / 2);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `max_{a≠0} max_b Pr(f(x+a) - f(x) = b)` for `f(x) = x^s` on `GF(p^m)`.
pub fn pf_value(p: u64, m: u32, s: u64) -> Result<Ratio<u64>> {
    let field = gf::make_field(p, m)?;
    let q = field.q();
    let f: Vec<u64> = (0..q).map(|x| field.pow(x, s)).collect();
    let mut best = 0u64;
    let mut counts = vec![0u64; q as usize];
    for a in 1..q {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..q {
            let b = field.sub(f[field.add(x, a) as usize], f[x as usize]);
            counts[b as usize] += 1;
        }
        best = best.max(*counts.iter().max().unwrap_or(&0));
    }
    Ok(Ratio::new(best, q))
}

/// Graph `{(x^s, x)}` of a perfect nonlinear power map in `GF(p^m) x GF(p^m)`.
pub fn pn_graph_ads(p: u64, m: u32, s: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "pn_graph";
    if p % 2 == 0 || !arith::is_prime(p) {
        return Err(Error::precondition(FAMILY, format!("p = {p} is not an odd prime")));
    }
    let field = gf::make_field(p, m)?;
    let q = field.q();
    let Some(rule) = admissible_exponent(p, m, s) else {
        let pf = pf_value(p, m, s)?;
        return Err(Error::precondition(
            FAMILY,
            format!("s = {s} is not an admissible exponent (P_f = {pf})"),
        ));
    };
    let pf = pf_value(p, m, s)?;
    if pf != Ratio::new(1, q) {
        return Err(Error::Verification {
            family: FAMILY.into(),
            claimed: format!("P_f = 1/{q}"),
            found: format!("P_f = {pf}"),
        });
    }
    let fa = gf::as_group(&field);
    let group = GroupCtx::product(vec![fa.clone(), fa])?;
    let set: Vec<Elem> = (0..q)
        .map(|x| super::pair(&group, field.pow(x, s), x))
        .collect();
    let claim = Params::ADS {
        v: q * q,
        k: q,
        lambda: 0,
        t: q - 1,
    };
    let notes = vec![rule, format!("P_f = {pf}")];
    finish(
        FAMILY,
        "Arasu, Ding, Helleseth, Kumar, Martinsen",
        group,
        set,
        vec![claim],
        notes,
    )
}
