use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::cyclotomy::{self, closed_matrix, cyc_classes, quadratic_partition, PartitionForm, QuadPartition};
use crate::diffcore::{self, Params};
use crate::error::{Error, Result};
use crate::gf;
use crate::groups::{Elem, GroupCtx};

use super::{finish, to_elems, ConstructedSet};

fn odd_field(family: &str, q: u64) -> Result<std::sync::Arc<gf::FieldCtx>> {
    if q % 2 == 0 || !arith::is_prime_power(q) {
        return Err(Error::precondition(family, format!("q = {q} is not an odd prime power")));
    }
    gf::field_of_order(q)
}

/// Nonzero squares of GF(q).
pub fn paley_qr(q: u64) -> Result<ConstructedSet> {
    const FAMILY: &str = "paley_qr";
    let field = odd_field(FAMILY, q)?;
    let group = gf::as_group(&field);
    let set: Vec<Elem> = to_elems(field.elements().filter(|&x| field.is_nonzero_square(x)));
    let mut notes = Vec::new();
    let claims = if q % 4 == 1 {
        vec![
            Params::PDS {
                v: q,
                k: (q - 1) / 2,
                lambda: (q - 5) / 4,
                mu: (q - 1) / 4,
            },
            Params::ADS {
                v: q,
                k: (q - 1) / 2,
                lambda: (q - 5) / 4,
                t: (q - 1) / 2,
            },
        ]
    } else {
        let skew = set
            .iter()
            .all(|&x| !field.is_nonzero_square(field.neg(x.0 as u64)));
        if !skew {
            return Err(Error::Verification {
                family: FAMILY.into(),
                claimed: "skew Hadamard".into(),
                found: "D ∩ -D nonempty".into(),
            });
        }
        notes.push("skew Hadamard".to_string());
        vec![Params::DS {
            v: q,
            k: (q - 1) / 2,
            lambda: (q - 3) / 4,
        }]
    };
    finish(FAMILY, "Paley; Todd", group, set, claims, notes)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CycFamily {
    Quartic,
    QuarticZero,
    QuarticZeroNeg,
    QuarticPair,
    Octic,
    DpwUnionSq,
    OcticZero,
    Cubic,
    CubicZero,
}

impl CycFamily {
    pub const ALL: [CycFamily; 9] = [
        CycFamily::Quartic,
        CycFamily::QuarticZero,
        CycFamily::QuarticZeroNeg,
        CycFamily::QuarticPair,
        CycFamily::Octic,
        CycFamily::DpwUnionSq,
        CycFamily::OcticZero,
        CycFamily::Cubic,
        CycFamily::CubicZero,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CycFamily::Quartic => "quartic",
            CycFamily::QuarticZero => "quartic_zero",
            CycFamily::QuarticZeroNeg => "quartic_zero_neg",
            CycFamily::QuarticPair => "quartic_pair",
            CycFamily::Octic => "octic",
            CycFamily::DpwUnionSq => "dpw_union_sq",
            CycFamily::OcticZero => "octic_zero",
            CycFamily::Cubic => "cubic",
            CycFamily::CubicZero => "cubic_zero",
        }
    }

    fn citation(self) -> &'static str {
        match self {
            CycFamily::Quartic | CycFamily::Octic => "Ding; Cusick, Ding, Renvall",
            CycFamily::QuarticZero | CycFamily::QuarticPair => "Ding, Helleseth, Lam",
            CycFamily::QuarticZeroNeg => "Wang, Wang",
            CycFamily::DpwUnionSq => "Ding, Pott, Wang",
            CycFamily::OcticZero => "Lehmer",
            CycFamily::Cubic | CycFamily::CubicZero => "Storer",
        }
    }

    /// Families built from a single class accept any class index.
    fn takes_index(self) -> bool {
        matches!(
            self,
            CycFamily::Quartic | CycFamily::QuarticPair | CycFamily::Cubic | CycFamily::CubicZero
        )
    }
}

impl fmt::Display for CycFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CycFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CycFamily::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown cyclotomic family `{s}`")))
    }
}

/// `s` of the normalized (proper when possible) partition `q = s^2 + 4t^2`.
fn quartic_s(q: u64) -> Option<(i64, i64)> {
    match quadratic_partition(q, PartitionForm::S2T2)? {
        QuadPartition::S2T2 { s, t } => Some((s, t)),
        _ => None,
    }
}

/// Class values `d_D(C_k)` of `C_0^e` (plus zero) from the closed forms.
fn closed_class_values(q: u64, e: usize, with_zero: bool) -> Result<Vec<u64>> {
    let partition = match e {
        2 => None,
        3 => Some(quadratic_partition(q, PartitionForm::C2D2).ok_or(Error::NoPartition(q))?),
        4 => Some(quadratic_partition(q, PartitionForm::S2T2).ok_or(Error::NoPartition(q))?),
        _ => return Err(Error::UnsupportedOrder(e as u64)),
    };
    let m = closed_matrix(q, e, partition.as_ref(), 1)?;
    let f = (q - 1) / e as u64;
    let row = if f % 2 == 0 { 0 } else { e / 2 };
    let mut vals = m[row].clone();
    if with_zero {
        vals[0] += 1;
        vals[row] += 1;
    }
    Ok(vals)
}

fn ads_from_values(q: u64, k: u64, vals: &[u64], f: u64) -> Option<Params> {
    let lo = *vals.iter().min()?;
    let hi = *vals.iter().max()?;
    (hi == lo + 1).then(|| Params::ADS {
        v: q,
        k,
        lambda: lo,
        t: f * vals.iter().filter(|&&x| x == lo).count() as u64,
    })
}

/// Cyclotomic almost difference sets in `(GF(q), +)`.
pub fn cyclotomic_ads(q: u64, family: CycFamily, index: usize) -> Result<ConstructedSet> {
    let id = family.id();
    if index != 0 && !family.takes_index() {
        return Err(Error::InvalidArgument(format!("family {id} has no class index")));
    }
    let field = odd_field(id, q)?;
    let fail = |reason: String| Error::precondition(id, reason);
    let quartic_cond = |allowed: &[i64]| -> Result<()> {
        if q % 8 != 5 {
            return Err(fail(format!("q = {q} is not 5 mod 8")));
        }
        match quartic_s(q) {
            Some((s, _)) if allowed.contains(&s) => Ok(()),
            Some((s, t)) => Err(fail(format!("q = {s}^2 + 4*{t}^2 has s outside {allowed:?}"))),
            None => Err(fail(format!("q = {q} has no partition s^2 + 4t^2"))),
        }
    };
    let (e, indices, with_zero, claim) = match family {
        CycFamily::Quartic => {
            if q == 9 {
                (4, vec![index], false, Params::ADS { v: 9, k: 2, lambda: 0, t: 6 })
            } else {
                quartic_cond(&[5, -3])?;
                let claim = Params::ADS {
                    v: q,
                    k: (q - 1) / 4,
                    lambda: (q - 13) / 16,
                    t: (q - 1) / 2,
                };
                (4, vec![index], false, claim)
            }
        }
        CycFamily::QuarticZero | CycFamily::QuarticZeroNeg => {
            quartic_cond(&[1, -7])?;
            let claim = Params::ADS {
                v: q,
                k: (q + 3) / 4,
                lambda: (q - 5) / 16,
                t: (q - 1) / 2,
            };
            let class = if family == CycFamily::QuarticZero { 0 } else { 2 };
            (4, vec![class], true, claim)
        }
        CycFamily::QuarticPair => {
            if q % 8 != 5 {
                return Err(fail(format!("q = {q} is not 5 mod 8")));
            }
            match quartic_s(q) {
                Some((_, 1)) => {}
                _ => return Err(fail(format!("q = {q} is not s^2 + 4 with s ≡ 1 (mod 4)"))),
            }
            let claim = Params::ADS {
                v: q,
                k: (q - 1) / 2,
                lambda: (q - 5) / 4,
                t: (q - 1) / 2,
            };
            (4, vec![index % 4, (index + 1) % 4], false, claim)
        }
        CycFamily::Octic => {
            if q % 64 != 41 {
                return Err(fail(format!("q = {q} is not 41 mod 64")));
            }
            let qi = q as i64;
            let b_ok = (qi - 1) % 2 == 0 && arith::is_square((qi - 1) / 2);
            let y_ok = [361i64, 169]
                .iter()
                .any(|&a| qi >= a && (qi - a) % 4 == 0 && arith::is_square((qi - a) / 4));
            if !(b_ok && y_ok) {
                return Err(fail(format!("q = {q} is not 19^2 + 4y^2 = 1 + 2b^2 or 13^2 + 4y^2 = 1 + 2b^2")));
            }
            let claim = Params::ADS {
                v: q,
                k: (q - 1) / 8,
                lambda: (q - 41) / 64,
                t: (q - 1) / 2,
            };
            (8, vec![0], false, claim)
        }
        CycFamily::DpwUnionSq => {
            let l = arith::isqrt(q);
            if l * l != q || !arith::is_prime_power(l) {
                return Err(fail(format!("q = {q} is not the square of a prime power")));
            }
            if l % 8 != 3 || l < 2 || !arith::is_square(l as i64 - 2) {
                return Err(fail(format!("l = {l} is not t^2 + 2 ≡ 3 (mod 8)")));
            }
            let claim = Params::ADS {
                v: q,
                k: (q - 1) / 2,
                lambda: (q - 5) / 4,
                t: (q - 1) / 2,
            };
            (8, vec![0, 1, 2, 5], false, claim)
        }
        CycFamily::OcticZero => {
            let qi = q as i64;
            let odd_root = |n: i64| n >= 0 && arith::is_square(n) && arith::isqrt(n as u64) % 2 == 1;
            let y_ok = qi > 9 && (qi - 9) % 64 == 0 && odd_root((qi - 9) / 64);
            let b_ok = (qi - 1) % 8 == 0 && odd_root((qi - 1) / 8);
            if !arith::is_prime(q) || !y_ok || !b_ok {
                return Err(fail(format!("p = {q} is not a prime 9 + 64y^2 = 1 + 8b^2 with y, b odd")));
            }
            let claim = Params::ADS {
                v: q,
                k: (q + 7) / 8,
                lambda: (q - 9) / 64,
                t: 3 * (q - 1) / 4,
            };
            (8, vec![0], true, claim)
        }
        CycFamily::Cubic | CycFamily::CubicZero => {
            let with_zero = family == CycFamily::CubicZero;
            let allowed: &[u64] = if with_zero { &[13, 37] } else { &[7, 19, 25] };
            if !allowed.contains(&q) {
                return Err(fail(format!("q = {q} not in {allowed:?}")));
            }
            let f = (q - 1) / 3;
            let vals = closed_class_values(q, 3, with_zero)?;
            let k = f + with_zero as u64;
            let claim = ads_from_values(q, k, &vals, f).ok_or_else(|| Error::Verification {
                family: id.into(),
                claimed: "ADS".into(),
                found: format!("closed-form class values {vals:?}"),
            })?;
            (3, vec![index % 3], with_zero, claim)
        }
    };
    let cyc = cyc_classes(&field, e)?;
    let set = to_elems(cyc.union_set(&indices, with_zero));
    let notes = vec![format!("I = {indices:?}, e = {e}, with zero: {with_zero}")];
    finish(id, family.citation(), gf::as_group(&field), set, vec![claim], notes)
}

/// Rows of the summary table of unions of classes of order 2, 3 and 4.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SummaryRow {
    C2,
    C3,
    C3Zero,
    C4,
    C4Zero,
    C4Pair,
}

impl SummaryRow {
    pub const ALL: [SummaryRow; 6] = [
        SummaryRow::C2,
        SummaryRow::C3,
        SummaryRow::C3Zero,
        SummaryRow::C4,
        SummaryRow::C4Zero,
        SummaryRow::C4Pair,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SummaryRow::C2 => "C_i^2",
            SummaryRow::C3 => "C_i^3",
            SummaryRow::C3Zero => "C_i^3 ∪ {0}",
            SummaryRow::C4 => "C_i^4",
            SummaryRow::C4Zero => "C_i^4 ∪ {0}",
            SummaryRow::C4Pair => "C_i^4 ∪ C_{i+1}^4",
        }
    }

    pub fn order(self) -> usize {
        match self {
            SummaryRow::C2 => 2,
            SummaryRow::C3 | SummaryRow::C3Zero => 3,
            _ => 4,
        }
    }

    /// The table's arithmetic condition, read through the normalized partition
    /// of [`quadratic_partition`].
    pub fn condition(self, q: u64) -> bool {
        let s_in = |allowed: &[i64]| q % 8 == 5 && quartic_s(q).is_some_and(|(s, _)| allowed.contains(&s));
        match self {
            SummaryRow::C2 => q % 4 == 1,
            SummaryRow::C3 => [7, 19, 25].contains(&q),
            SummaryRow::C3Zero => [13, 37].contains(&q),
            SummaryRow::C4 => q == 9 || s_in(&[5, -3]),
            SummaryRow::C4Zero => s_in(&[1, -7]),
            SummaryRow::C4Pair => q % 8 == 5 && quartic_s(q).is_some_and(|(_, t)| t == 1),
        }
    }

    /// The table's condition read literally: some representation
    /// `q = a + 4t^2` with the listed constant `a`.
    pub fn literal_condition(self, q: u64) -> bool {
        let qi = q as i64;
        let rep = |a: i64| qi >= a && (qi - a) % 4 == 0 && arith::is_square((qi - a) / 4);
        match self {
            SummaryRow::C4 => q == 9 || (q % 8 == 5 && (rep(25) || rep(9))),
            SummaryRow::C4Zero => q % 8 == 5 && (rep(1) || rep(49)),
            SummaryRow::C4Pair => {
                q % 8 == 5 && qi >= 4 && arith::is_square(qi - 4) && {
                    let s = arith::isqrt(q - 4) as i64;
                    s % 4 == 1 || (-s).rem_euclid(4) == 1
                }
            }
            other => other.condition(q),
        }
    }

    /// Exhaustive check: does some set of this row's shape form an ADS in GF(q)?
    pub fn scan(self, q: u64) -> Result<bool> {
        let e = self.order();
        if (q - 1) % e as u64 != 0 {
            return Ok(false);
        }
        let field = gf::field_of_order(q)?;
        let cyc = cyc_classes(&field, e)?;
        let shapes: Vec<(Vec<usize>, bool)> = match self {
            SummaryRow::C2 | SummaryRow::C3 | SummaryRow::C4 => (0..e).map(|i| (vec![i], false)).collect(),
            SummaryRow::C3Zero | SummaryRow::C4Zero => (0..e).map(|i| (vec![i], true)).collect(),
            SummaryRow::C4Pair => (0..4).map(|i| (vec![i, (i + 1) % 4], false)).collect(),
        };
        Ok(shapes.iter().any(|(idx, z)| {
            let sp = cyc.class_spectrum(idx, *z);
            let lo = sp.iter().min().copied().unwrap_or(0);
            let hi = sp.iter().max().copied().unwrap_or(0);
            hi == lo + 1
        }))
    }
}

/// Unions of classes of order `q + 1` in GF(q^2); `|I| = (q ± 1)/2`.
pub fn ck_pds(q: u64, indices: &[usize]) -> Result<ConstructedSet> {
    const FAMILY: &str = "ck_pds";
    if !arith::is_prime_power(q) {
        return Err(Error::precondition(FAMILY, format!("q = {q} is not a prime power")));
    }
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != indices.len() || idx.iter().any(|&i| i as u64 > q) {
        return Err(Error::precondition(FAMILY, "I must be distinct indices in 0..=q"));
    }
    let m = idx.len() as u64;
    let plus = 2 * m == q + 1;
    if !plus && 2 * m + 1 != q {
        return Err(Error::precondition(FAMILY, format!("|I| = {m} is not (q ± 1)/2 for q = {q}")));
    }
    let field = gf::field_of_order(q * q)?;
    let group = gf::as_group(&field);
    let e = (q + 1) as usize;
    let cyc = cyc_classes(&field, e)?;
    for &i in &idx {
        for &j in &idx {
            subspace_identity(&group, &cyc, q, i, j)?;
        }
    }
    let set = to_elems(cyc.union_set(&idx, false));
    let v = q * q;
    let k = m * (q - 1);
    let mu = m * (m - 1);
    let lambda = q - 2 + (m - 1) * (m.max(2) - 2);
    let ads = if plus {
        Params::ADS { v, k, lambda, t: k }
    } else {
        Params::ADS {
            v,
            k,
            lambda: mu,
            t: v - 1 - k,
        }
    };
    let notes = vec![format!("I = {idx:?}")];
    finish(
        FAMILY,
        "Calderbank, Kantor",
        group,
        set,
        vec![Params::PDS { v, k, lambda, mu }, ads],
        notes,
    )
}

/// `S_i S_j = q S_i` for `i = j` and `G` otherwise, with `S_i = C_i^{q+1} ∪ {0}`.
fn subspace_identity(group: &GroupCtx, cyc: &cyclotomy::CycCtx, q: u64, i: usize, j: usize) -> Result<()> {
    let si = to_elems(cyc.union_set(&[i], true));
    let sj = to_elems(cyc.union_set(&[j], true));
    let prod = diffcore::groupring_product(group, &si, &sj)?;
    let ok = if i == j {
        let mut member = vec![false; group.order()];
        for e in &si {
            member[e.0] = true;
        }
        prod.iter().enumerate().all(|(x, &c)| c == if member[x] { q } else { 0 })
    } else {
        prod.iter().all(|&c| c == 1)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Verification {
            family: "ck_pds".into(),
            claimed: format!("subspace identity for S_{i} S_{j}"),
            found: "mismatch".into(),
        })
    }
}
