//! Cyclotomic classes and cyclotomic numbers over GF(q).
//!
//! `C_i^e = gamma^i <gamma^e>` and `(i,j)_e = |(C_i^e + 1) ∩ C_j^e|`. Direct
//! counts work for any `e | q - 1`; closed forms cover `e = 2, 3, 4` with the
//! sign ambiguity of the quadratic partition settled by one direct pilot count.

use std::sync::Arc;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::gf::FieldCtx;

#[derive(Clone, Debug)]
pub struct CycCtx {
    field: Arc<FieldCtx>,
    e: usize,
    f: usize,
    class_of: Vec<u32>,
    classes: Vec<Vec<u64>>,
}

const NO_CLASS: u32 = u32::MAX;

pub fn cyc_classes(field: &Arc<FieldCtx>, e: usize) -> Result<CycCtx> {
    let q = field.q();
    if e == 0 || (q - 1) % e as u64 != 0 {
        return Err(Error::NotDivisor {
            e: e as u64,
            q_minus_one: q - 1,
        });
    }
    let f = ((q - 1) / e as u64) as usize;
    let mut class_of = vec![NO_CLASS; q as usize];
    let mut classes = vec![Vec::with_capacity(f); e];
    for k in 0..q - 1 {
        let x = field.gamma_pow(k);
        let c = (k % e as u64) as usize;
        class_of[x as usize] = c as u32;
        classes[c].push(x);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    Ok(CycCtx {
        field: Arc::clone(field),
        e,
        f,
        class_of,
        classes,
    })
}

impl CycCtx {
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Class index of a nonzero element, `None` for zero.
    pub fn class_of(&self, x: u64) -> Option<usize> {
        match self.class_of.get(x as usize) {
            Some(&c) if c != NO_CLASS => Some(c as usize),
            _ => None,
        }
    }

    pub fn class(&self, i: usize) -> &[u64] {
        &self.classes[i % self.e]
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.e {
            Ok(())
        } else {
            Err(Error::BadClassIndex { index: i, e: self.e })
        }
    }

    /// `(i, j)_e` by direct counting.
    pub fn number_direct(&self, i: usize, j: usize) -> Result<u64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.row_direct(i)[j])
    }

    /// Row `i` of the cyclotomic matrix: `((i,0)_e, ..., (i,e-1)_e)`.
    pub fn row_direct(&self, i: usize) -> Vec<u64> {
        let mut row = vec![0u64; self.e];
        for &x in self.class(i) {
            if let Some(c) = self.class_of(self.field.add(x, 1)) {
                row[c] += 1;
            }
        }
        row
    }

    pub fn matrix_direct(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.e]; self.e];
        for x in 1..self.q() {
            if let (Some(a), Some(b)) = (self.class_of(x), self.class_of(self.field.add(x, 1))) {
                m[a][b] += 1;
            }
        }
        m
    }

    /// Index `j` with `-C_i^e = C_j^e`.
    pub fn class_negation(&self, i: usize) -> usize {
        if self.f % 2 == 0 {
            i % self.e
        } else {
            (i + self.e / 2) % self.e
        }
    }

    /// Elements of `⋃_{i∈I} C_i^e`, plus zero when requested, sorted.
    pub fn union_set(&self, indices: &[usize], with_zero: bool) -> Vec<u64> {
        let mut idx: Vec<usize> = indices.iter().map(|&i| i % self.e).collect();
        idx.sort_unstable();
        idx.dedup();
        let mut out: Vec<u64> = idx.iter().flat_map(|&i| self.classes[i].iter().copied()).collect();
        if with_zero {
            out.push(0);
        }
        out.sort_unstable();
        out
    }

    /// Coefficients of `D(X) D(X^{-1})` over `{1} ∪ {C_k^e}` for a union of classes.
    ///
    /// Uses `C_i(X) C_j(X) = a_ij + Σ_k (j-i, k-i)_e C_k(X)` together with
    /// `-C_j = C_{j'}` where `j' = j` for even `f` and `j + e/2` for odd `f`.
    pub fn union_diff_coeffs(&self, indices: &[usize], with_zero: bool) -> Result<UnionCoeffs> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("index set must be nonempty".into()));
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let e = self.e;
        let rows: Vec<Vec<u64>> = (0..e).map(|_| Vec::new()).collect();
        let mut rows = rows;
        let mut classes = vec![0u64; e];
        for &i in &idx {
            for &j in &idx {
                let jn = self.class_negation(j);
                let r = (jn + e - i) % e;
                if rows[r].is_empty() {
                    rows[r] = self.row_direct(r);
                }
                for (k, slot) in classes.iter_mut().enumerate() {
                    *slot += rows[r][(k + e - i) % e];
                }
            }
        }
        let mut identity = (self.f * idx.len()) as u64;
        if with_zero {
            identity += 1;
            for &i in &idx {
                classes[i] += 1;
                classes[self.class_negation(i)] += 1;
            }
        }
        Ok(UnionCoeffs { identity, classes })
    }

    /// `d_D(gamma^r)` for `r = 0..e`, for `D` a union of classes (optionally with 0).
    ///
    /// `D` is stable under multiplication by `C_0^e`, so the difference function
    /// is constant on each class.
    pub fn class_spectrum(&self, indices: &[usize], with_zero: bool) -> Vec<u64> {
        let set = self.union_set(indices, with_zero);
        let mut member = vec![false; self.q() as usize];
        for &x in &set {
            member[x as usize] = true;
        }
        (0..self.e as u64)
            .map(|r| {
                let x = self.field.gamma_pow(r);
                set.iter()
                    .filter(|&&d| member[self.field.add(d, x) as usize])
                    .count() as u64
            })
            .collect()
    }

    /// Closed-form matrix for `e ∈ {2,3,4}` with the partition sign fixed by
    /// matching the direct pilot `(0,1)_e`.
    pub fn resolve_closed(&self) -> Result<ClosedForm> {
        let q = self.q();
        let e = self.e;
        let partition = match e {
            2 => None,
            3 => Some(quadratic_partition(q, PartitionForm::C2D2).ok_or(Error::NoPartition(q))?),
            4 => Some(quadratic_partition(q, PartitionForm::S2T2).ok_or(Error::NoPartition(q))?),
            _ => return Err(Error::UnsupportedOrder(e as u64)),
        };
        let pilot = self.number_direct(0, 1)?;
        for sign in [1i64, -1] {
            let m = closed_matrix(q, e, partition.as_ref(), sign)?;
            if m[0][1] == pilot {
                return Ok(ClosedForm {
                    partition,
                    sign,
                    matrix: m,
                });
            }
        }
        Err(Error::InvalidArgument(format!(
            "no sign of the partition matches the pilot (0,1)_{e} = {pilot} for q = {q}"
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionCoeffs {
    pub identity: u64,
    pub classes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub partition: Option<QuadPartition>,
    /// Sign applied to `d` (e = 3) or `t` (e = 4).
    pub sign: i64,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PartitionForm {
    /// `q = s^2 + 4t^2`, `s ≡ 1 (mod 4)`.
    S2T2,
    /// `4q = c^2 + 27d^2`, `c ≡ 1 (mod 3)`.
    C2D2,
    /// `q = x^2 + 4y^2`, `x ≡ 1 (mod 4)`.
    X2Y2,
    /// `q = offset + scale * y^2`.
    Affine { offset: i64, scale: i64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum QuadPartition {
    S2T2 { s: i64, t: i64 },
    C2D2 { c: i64, d: i64 },
    X2Y2 { x: i64, y: i64 },
    Affine { offset: i64, scale: i64, y: i64 },
}

/// Normalized representation, preferring a proper one (`p` not dividing the
/// leading component) when several exist.
pub fn quadratic_partition(q: u64, form: PartitionForm) -> Option<QuadPartition> {
    let p = arith::prime_power(q).map(|(p, _)| p as i64);
    let proper = |a: i64| p.map_or(true, |p| a % p != 0);
    match form {
        PartitionForm::S2T2 | PartitionForm::X2Y2 => {
            let reps = sum_reps(q as i64, 4, 4);
            let (a, b) = pick(reps, proper)?;
            Some(if form == PartitionForm::S2T2 {
                QuadPartition::S2T2 { s: a, t: b }
            } else {
                QuadPartition::X2Y2 { x: a, y: b }
            })
        }
        PartitionForm::C2D2 => {
            let reps = sum_reps(4 * q as i64, 27, 3);
            let (c, d) = pick(reps, proper)?;
            Some(QuadPartition::C2D2 { c, d })
        }
        PartitionForm::Affine { offset, scale } => {
            let q = q as i64;
            if scale <= 0 {
                return (offset == q).then_some(QuadPartition::Affine { offset, scale, y: 0 });
            }
            let bound = arith::isqrt(((q - offset).max(0) / scale) as u64) as i64 + 1;
            (0..=bound)
                .find(|&y| offset + scale * y * y == q)
                .map(|y| QuadPartition::Affine { offset, scale, y })
        }
    }
}

/// All `(a, b)` with `n = a^2 + coef*b^2`, `b >= 0`, `a ≡ 1 (mod m)`.
fn sum_reps(n: i64, coef: i64, m: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut b = 0;
    while coef * b * b <= n {
        let r = n - coef * b * b;
        if arith::is_square(r) {
            let a = arith::isqrt(r as u64) as i64;
            for cand in [a, -a] {
                if cand.rem_euclid(m) == 1 && !out.contains(&(cand, b)) {
                    out.push((cand, b));
                }
            }
        }
        b += 1;
    }
    out
}

fn pick(reps: Vec<(i64, i64)>, proper: impl Fn(i64) -> bool) -> Option<(i64, i64)> {
    reps.iter().copied().find(|&(a, _)| proper(a)).or_else(|| reps.first().copied())
}

fn exact_div(num: i64, den: i64, what: &str) -> Result<u64> {
    if num < 0 || num % den != 0 {
        return Err(Error::InvalidArgument(format!(
            "closed form for {what} is not a nonnegative integer ({num}/{den})"
        )));
    }
    Ok((num / den) as u64)
}

/// Cyclotomic matrix of order `e ∈ {2,3,4}` from the closed forms.
///
/// `sign` multiplies `d` (e = 3) or `t` (e = 4); it is ignored for e = 2.
pub fn closed_matrix(
    q: u64,
    e: usize,
    partition: Option<&QuadPartition>,
    sign: i64,
) -> Result<Vec<Vec<u64>>> {
    if q % 2 == 0 || !arith::is_prime_power(q) {
        return Err(Error::InvalidArgument(format!("closed forms need an odd prime power, got {q}")));
    }
    if e == 0 || (q - 1) % e as u64 != 0 {
        return Err(Error::NotDivisor {
            e: e as u64,
            q_minus_one: q - 1,
        });
    }
    let f = ((q - 1) / e as u64) as i64;
    let qi = q as i64;
    match e {
        2 => Ok(if f % 2 == 0 {
            vec![vec![(f as u64 - 2) / 2, f as u64 / 2], vec![f as u64 / 2, f as u64 / 2]]
        } else {
            let lo = (f as u64 - 1) / 2;
            vec![vec![lo, lo + 1], vec![lo, lo]]
        }),
        3 => {
            let (c, d) = match partition {
                Some(&QuadPartition::C2D2 { c, d }) => (c, d * sign),
                _ => return Err(Error::NoPartition(q)),
            };
            let a = exact_div(qi - 8 + c, 9, "A")?;
            let b = exact_div(2 * qi - 4 - c - 9 * d, 18, "B")?;
            let cc = exact_div(2 * qi - 4 - c + 9 * d, 18, "C")?;
            let dd = exact_div(qi + 1 + c, 9, "D")?;
            Ok(vec![vec![a, b, cc], vec![b, cc, dd], vec![cc, dd, b]])
        }
        4 => {
            let (s, t) = match partition {
                Some(&QuadPartition::S2T2 { s, t }) | Some(&QuadPartition::X2Y2 { x: s, y: t }) => {
                    (s, t * sign)
                }
                _ => return Err(Error::NoPartition(q)),
            };
            if f % 2 == 1 {
                let a = exact_div(qi - 7 + 2 * s, 16, "A")?;
                let b = exact_div(qi + 1 + 2 * s - 8 * t, 16, "B")?;
                let c = exact_div(qi + 1 - 6 * s, 16, "C")?;
                let d = exact_div(qi + 1 + 2 * s + 8 * t, 16, "D")?;
                let ee = exact_div(qi - 3 - 2 * s, 16, "E")?;
                Ok(vec![
                    vec![a, b, c, d],
                    vec![ee, ee, d, b],
                    vec![a, ee, a, ee],
                    vec![ee, d, b, ee],
                ])
            } else {
                let a = exact_div(qi - 11 - 6 * s, 16, "A")?;
                let b = exact_div(qi - 3 + 2 * s + 8 * t, 16, "B")?;
                let c = exact_div(qi - 3 + 2 * s, 16, "C")?;
                let d = exact_div(qi - 3 + 2 * s - 8 * t, 16, "D")?;
                let ee = exact_div(qi + 1 - 2 * s, 16, "E")?;
                Ok(vec![
                    vec![a, b, c, d],
                    vec![b, d, ee, ee],
                    vec![c, ee, c, ee],
                    vec![d, ee, ee, b],
                ])
            }
        }
        _ => Err(Error::UnsupportedOrder(e as u64)),
    }
}

/// Single closed-form number `(i, j)_e`.
pub fn cyc_number_closed(
    q: u64,
    e: usize,
    i: usize,
    j: usize,
    partition: Option<&QuadPartition>,
    sign: i64,
) -> Result<u64> {
    let m = closed_matrix(q, e, partition, sign)?;
    Ok(m[i % e][j % e])
}
