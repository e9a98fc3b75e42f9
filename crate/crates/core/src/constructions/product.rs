use crate::arith;
use crate::cyclotomy::{cyc_classes, quadratic_partition, PartitionForm, QuadPartition};
use crate::diffcore::{self, Params, Verdict};
use crate::error::{Error, Result};
use crate::gf;
use crate::groups::{Elem, GroupCtx};

use super::{finish, finish_dds, paley_hadamard_ds, ConstructedSet, HadamardKind};

/// `(x, y) ∈ B x A` for elements of possibly composite factors.
fn join(ctx: &GroupCtx, b: &GroupCtx, x: Elem, a: &GroupCtx, y: Elem) -> Elem {
    let mut parts = b.components(x);
    parts.extend(a.components(y));
    ctx.from_components(&parts).expect("component in range")
}

fn complement_in(g: &GroupCtx, set: &[Elem]) -> Vec<Elem> {
    let mut member = vec![false; g.order()];
    for e in set {
        member[e.0] = true;
    }
    (0..g.order()).filter(|&x| !member[x]).map(Elem).collect()
}

/// `(v, k, λ)` of a difference set, or a precondition error.
fn ds_params(family: &str, what: &str, g: &GroupCtx, set: &[Elem]) -> Result<(u64, u64, u64)> {
    match diffcore::classify_basic(g, set)?.ds() {
        Some(&Verdict::DS { v, k, lambda }) => Ok((v, k, lambda)),
        _ => Err(Error::precondition(family, format!("{what} is not a difference set"))),
    }
}

fn is_paley_hadamard(g: &GroupCtx, set: &[Elem]) -> Result<bool> {
    let l = g.order() as u64;
    Ok(l % 4 == 3
        && diffcore::classify_basic(g, set)?.ds().is_some_and(|v| match v.params() {
            Params::DS { k, .. } => 2 * k + 1 == l || 2 * k == l + 1,
            _ => false,
        }))
}

/// `(D2 x D1*) ∪ (D2* x D1)` in `B x A`, divisible relative to `{0} x A`.
pub fn jungnickel_dds(b: &GroupCtx, d2: &[Elem], a: &GroupCtx, d1: &[Elem]) -> Result<ConstructedSet> {
    jungnickel_inner("jungnickel", b, d2, a, d1, Vec::new(), Vec::new())
}

fn jungnickel_inner(
    family: &str,
    b: &GroupCtx,
    d2: &[Elem],
    a: &GroupCtx,
    d1: &[Elem],
    extra: Vec<Params>,
    notes: Vec<String>,
) -> Result<ConstructedSet> {
    let d1 = diffcore::normalize_set(a, d1)?;
    let d2 = diffcore::normalize_set(b, d2)?;
    let (v, k, lambda) = ds_params(family, "D1", a, &d1)?;
    let (n2, k2, l2) = ds_params(family, "D2", b, &d2)?;
    let u = arith::isqrt(n2 / 4);
    if 4 * u * u != n2 || k2 != 2 * u * u - u || l2 != u * u - u {
        return Err(Error::precondition(
            family,
            format!("D2 is a ({n2},{k2},{l2}) set, not (4u^2, 2u^2 - u, u^2 - u)"),
        ));
    }
    let g = GroupCtx::product(vec![b.clone(), a.clone()])?;
    let d1c = complement_in(a, &d1);
    let d2c = complement_in(b, &d2);
    let mut set = Vec::new();
    for &x in &d2 {
        set.extend(d1c.iter().map(|&y| join(&g, b, x, a, y)));
    }
    for &x in &d2c {
        set.extend(d1.iter().map(|&y| join(&g, b, x, a, y)));
    }
    let (vi, ki, li, ui) = (v as i64, k as i64, lambda as i64, u as i64);
    let lambda1 = (2 * ui * ui - ui) * (vi - 2 * ki) + 4 * ui * ui * li;
    let lambda2 = ui * ui * vi - ui * vi + 2 * ki * ui;
    if lambda1 < 0 || lambda2 < 0 {
        return Err(Error::precondition(family, "negative divisible parameters"));
    }
    let (lambda1, lambda2) = (lambda1 as u64, lambda2 as u64);
    let total = 4 * u * u * v;
    let size = 2 * u * u * v + 2 * k * u - u * v;
    let subgroup: Vec<Elem> = a.enumerate().into_iter().map(|y| join(&g, b, b.identity(), a, y)).collect();
    let dds = Params::DDS {
        v: total,
        m: v,
        k: size,
        lambda1,
        lambda2,
    };
    let mut claims = Vec::new();
    if lambda1 + 1 == lambda2 {
        claims.push(Params::ADS {
            v: total,
            k: size,
            lambda: lambda1,
            t: v - 1,
        });
    } else if lambda2 + 1 == lambda1 {
        claims.push(Params::ADS {
            v: total,
            k: size,
            lambda: lambda2,
            t: total - v,
        });
    }
    for p in extra {
        if !claims.contains(&p) {
            claims.push(p);
        }
    }
    finish_dds(family, "Jungnickel", g, set, &subgroup, dds, claims, notes)
}

/// A cyclic Paley-Hadamard difference set of order `l`: quadratic residues,
/// Singer or twin-prime, in that order of preference.
pub fn default_paley_hadamard(l: u64) -> Result<ConstructedSet> {
    if arith::is_prime(l) && l % 4 == 3 {
        return paley_hadamard_ds(HadamardKind::Qr(l));
    }
    if l >= 3 && (l + 1).is_power_of_two() {
        return paley_hadamard_ds(HadamardKind::Singer((l + 1).trailing_zeros()));
    }
    let p = arith::isqrt(l + 1) - 1;
    if p >= 3 && p * (p + 2) == l && arith::is_prime(p) && arith::is_prime(p + 2) {
        return paley_hadamard_ds(HadamardKind::TwinPrime(p));
    }
    Err(Error::precondition(
        "cor55",
        format!("no default Paley-Hadamard difference set of order {l}"),
    ))
}

/// `({i} x D1*) ∪ ({i+1, i+2, i+3} x D1)` in `Z_4 x Z_l`.
pub fn cor55(d1: &[Elem], l: u64, i: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "cor55";
    let a = GroupCtx::cyclic(l as usize)?;
    let d1 = diffcore::normalize_set(&a, d1)?;
    if !is_paley_hadamard(&a, &d1)? {
        return Err(Error::precondition(FAMILY, format!("D1 is not Paley-Hadamard in Z_{l}")));
    }
    let b = GroupCtx::cyclic(4)?;
    let claim = if 2 * d1.len() as u64 + 1 == l {
        Params::ADS {
            v: 4 * l,
            k: 2 * l - 1,
            lambda: l - 2,
            t: l - 1,
        }
    } else {
        Params::ADS {
            v: 4 * l,
            k: 2 * l + 1,
            lambda: l,
            t: l - 1,
        }
    };
    jungnickel_inner(
        FAMILY,
        &b,
        &[Elem((i % 4) as usize)],
        &a,
        &d1,
        vec![claim],
        vec![format!("i = {}", i % 4)],
    )
}

/// Admissible `(i, j, l)` triples for the quartic construction in
/// `GF(2) x GF(q)`, with the partition normalized to `x ≡ 1 (mod 4)`, `y ≥ 0`.
/// Admissible `(i, j, l)` for [`dhm_quartic`] over `GF(q)` with the field's
/// generator. The `y = ±1` lists are stated for signed `y = 1`; when the
/// generator gives `y = -1` the class labels are negated.
pub fn dhm_triples(q: u64, with_zero: bool) -> Result<Vec<(usize, usize, usize)>> {
    let Some(QuadPartition::X2Y2 { x, y }) = quadratic_partition(q, PartitionForm::X2Y2) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if y == 1 {
        let field = gf::field_of_order(q)?;
        let closed = cyc_classes(&field, 4)?.resolve_closed()?;
        let listed: &[(usize, usize, usize)] = if with_zero {
            &[(0, 1, 3), (0, 2, 3), (1, 2, 0), (1, 3, 0)]
        } else {
            &[(0, 1, 3), (0, 2, 1)]
        };
        let neg = |c: usize| if closed.sign < 0 { (4 - c) % 4 } else { c };
        out.extend(listed.iter().map(|&(i, j, l)| (neg(i), neg(j), neg(l))));
    }
    if x == 1 {
        out.extend_from_slice(if with_zero {
            &[(0, 1, 2), (0, 3, 2), (1, 0, 3), (1, 2, 3)][..]
        } else {
            &[(1, 0, 3), (0, 1, 2)][..]
        });
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `({0} x (C_i ∪ C_j)) ∪ ({1} x (C_l ∪ C_j))`, plus `(0,0)` when requested.
pub fn dhm_quartic(q: u64, i: usize, j: usize, l: usize, with_zero: bool) -> Result<ConstructedSet> {
    const FAMILY: &str = "dhm_quartic";
    if q % 8 != 5 || !arith::is_prime_power(q) {
        return Err(Error::precondition(FAMILY, format!("q = {q} is not a prime power ≡ 5 (mod 8)")));
    }
    let admissible = dhm_triples(q, with_zero)?;
    if !admissible.contains(&(i, j, l)) {
        return Err(Error::precondition(
            FAMILY,
            format!("(i,j,l) = ({i},{j},{l}) is not admissible for q = {q}; admissible: {admissible:?}"),
        ));
    }
    let field = gf::field_of_order(q)?;
    let cyc = cyc_classes(&field, 4)?;
    let fa = gf::as_group(&field);
    let g = GroupCtx::product(vec![GroupCtx::cyclic(2)?, fa])?;
    let mut set: Vec<Elem> = Vec::new();
    set.extend(cyc.union_set(&[i, j], false).into_iter().map(|x| super::pair(&g, 0, x)));
    set.extend(cyc.union_set(&[l, j], false).into_iter().map(|x| super::pair(&g, 1, x)));
    let claim = if with_zero {
        set.push(super::pair(&g, 0, 0));
        Params::ADS {
            v: 2 * q,
            k: q,
            lambda: (q - 1) / 2,
            t: (3 * q - 1) / 2,
        }
    } else {
        Params::ADS {
            v: 2 * q,
            k: q - 1,
            lambda: (q - 3) / 2,
            t: 3 * (q - 1) / 2,
        }
    };
    let notes = vec![format!("(i,j,l) = ({i},{j},{l}), with zero: {with_zero}")];
    finish(FAMILY, "Ding, Helleseth, Martinsen", g, set, vec![claim], notes)
}

/// `({0} x C_0^2) ∪ ({1,2,3} x C_1^2) ∪ {(0,0),(1,0),(3,0)}` in `Z_4 x GF(q)`.
pub fn zlz_z4q(q: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "zlz_z4q";
    if !arith::is_prime_power(q) || q % 4 != 3 {
        return Err(Error::precondition(FAMILY, format!("q = {q} is not a prime power 2f + 1 with f odd")));
    }
    let field = gf::field_of_order(q)?;
    let cyc = cyc_classes(&field, 2)?;
    let g = GroupCtx::product(vec![GroupCtx::cyclic(4)?, gf::as_group(&field)])?;
    let mut set: Vec<Elem> = cyc.class(0).iter().map(|&x| super::pair(&g, 0, x)).collect();
    for r in 1..4 {
        set.extend(cyc.class(1).iter().map(|&x| super::pair(&g, r, x)));
    }
    set.extend([0, 1, 3].map(|r| super::pair(&g, r, 0)));
    let claim = Params::ADS {
        v: 4 * q,
        k: 2 * q + 1,
        lambda: q,
        t: q - 1,
    };
    finish(FAMILY, "Zhang, Lei, Zhang", g, set, vec![claim], Vec::new())
}

/// Pairs that are both nonzero squares or both nonsquares in `GF(p) x GF(q)`,
/// optionally with the row `GF(p) x {0}`.
pub fn zlz_pq_squares(p: u64, q: u64, include_row: bool) -> Result<ConstructedSet> {
    const FAMILY: &str = "zlz_pq_squares";
    for r in [p, q] {
        if r % 2 == 0 || !arith::is_prime_power(r) {
            return Err(Error::precondition(FAMILY, format!("{r} is not an odd prime power")));
        }
    }
    if include_row && p % 4 == q % 4 {
        return Err(Error::precondition(FAMILY, "p ≡ q (mod 4)"));
    }
    let fp = gf::field_of_order(p)?;
    let fq = gf::field_of_order(q)?;
    let g = GroupCtx::product(vec![gf::as_group(&fp), gf::as_group(&fq)])?;
    let mut set = Vec::new();
    for a in 1..p {
        for b in 1..q {
            if fp.is_nonzero_square(a) == fq.is_nonzero_square(b) {
                set.push(super::pair(&g, a, b));
            }
        }
    }
    if include_row {
        set.extend((0..p).map(|a| super::pair(&g, a, 0)));
    }
    let cls = diffcore::classify_basic(&g, &set)?;
    let mut notes = Vec::new();
    let claims = if include_row {
        if cls.ads().is_some() {
            return Err(Error::Verification {
                family: FAMILY.into(),
                claimed: "not an ADS".into(),
                found: format!("{:?}", cls.params()),
            });
        }
        notes.push("not an almost difference set".to_string());
        if q == p + 2 {
            let l = p * q;
            vec![Params::DS {
                v: l,
                k: (l - 1) / 2,
                lambda: (l - 3) / 4,
            }]
        } else {
            if cls.ds().is_some() {
                return Err(Error::Verification {
                    family: FAMILY.into(),
                    claimed: "not a DS".into(),
                    found: format!("{:?}", cls.params()),
                });
            }
            notes.push("not a difference set".to_string());
            Vec::new()
        }
    } else if q == p + 2 || p == q + 2 {
        let m = p.min(q);
        vec![Params::ADS {
            v: m * (m + 2),
            k: (m * m - 1) / 2,
            lambda: (m + 1) * (m - 3) / 4,
            t: m - 1,
        }]
    } else if q == p {
        vec![Params::ADS {
            v: p * p,
            k: (p - 1) * (p - 1) / 2,
            lambda: (p * p + 3 - 4 * p) / 4,
            t: (p * p + 2 * p - 3) / 2,
        }]
    } else {
        if cls.ads().is_some() {
            return Err(Error::Verification {
                family: FAMILY.into(),
                claimed: "not an ADS".into(),
                found: format!("{:?}", cls.params()),
            });
        }
        return Err(Error::precondition(
            FAMILY,
            format!("q = {q} is not p or p ± 2 for p = {p}; the set is not an ADS"),
        ));
    };
    finish(FAMILY, "Zhang, Lei, Zhang", g, set, claims, notes)
}

/// `({0,2} x A) ∪ ({1} x B) ∪ ({3} x B*)` in `Z_4 x G`.
pub fn tang_ding(base: &GroupCtx, a: &[Elem], b: &[Elem]) -> Result<ConstructedSet> {
    const FAMILY: &str = "tang_ding";
    let a = diffcore::normalize_set(base, a)?;
    let b = diffcore::normalize_set(base, b)?;
    for (name, s) in [("A", &a), ("B", &b)] {
        if !is_paley_hadamard(base, s)? {
            return Err(Error::precondition(FAMILY, format!("{name} is not a Paley-Hadamard difference set")));
        }
    }
    let l = base.order() as u64;
    let z4 = GroupCtx::cyclic(4)?;
    let g = GroupCtx::product(vec![z4.clone(), base.clone()])?;
    let bc = complement_in(base, &b);
    let mut set = Vec::new();
    for (r, rows) in [(0, &a), (2, &a), (1, &b), (3, &bc)] {
        set.extend(rows.iter().map(|&y| join(&g, &z4, Elem(r), base, y)));
    }
    let claim = if 2 * a.len() as u64 == l + 1 {
        Params::ADS {
            v: 4 * l,
            k: 2 * l + 1,
            lambda: l,
            t: l - 1,
        }
    } else {
        Params::ADS {
            v: 4 * l,
            k: 2 * l - 1,
            lambda: l - 2,
            t: l - 1,
        }
    };
    finish(FAMILY, "Tang, Ding", g, set, vec![claim], Vec::new())
}

/// `(E x F) ∪ (-E x -F) ∪ (GF(q) x {0})` with Paley skew Hadamard `E`, `F`.
pub fn dpw_skew(q: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "dpw_skew";
    if q % 4 != 3 || !arith::is_prime_power(q) || !arith::is_prime_power(q + 4) {
        return Err(Error::precondition(
            FAMILY,
            format!("q = {q} and q + 4 are not both prime powers with q ≡ 3 (mod 4)"),
        ));
    }
    let fe = gf::field_of_order(q)?;
    let ff = gf::field_of_order(q + 4)?;
    let g = GroupCtx::product(vec![gf::as_group(&fe), gf::as_group(&ff)])?;
    let e: Vec<u64> = (1..q).filter(|&x| fe.is_nonzero_square(x)).collect();
    let f: Vec<u64> = (1..q + 4).filter(|&x| ff.is_nonzero_square(x)).collect();
    let mut set = Vec::new();
    for &x in &e {
        for &y in &f {
            set.push(super::pair(&g, x, y));
            set.push(super::pair(&g, fe.neg(x), ff.neg(y)));
        }
    }
    set.extend((0..q).map(|x| super::pair(&g, x, 0)));
    let n = q * (q + 4);
    let claim = Params::ADS {
        v: n,
        k: (n - 3) / 2,
        lambda: (n - 9) / 4,
        t: (n - 5) / 2,
    };
    finish(FAMILY, "Ding, Pott, Wang", g, set, vec![claim], Vec::new())
}
