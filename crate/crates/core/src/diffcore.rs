//! Difference function, classification into DS/ADS/PDS/DDS, and the
//! set transforms that preserve those structures.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{Elem, GroupCtx, GroupKind};

/// `counts[x] = d_D(x)` for every canonical index `x`; `counts[0] = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSpectrum {
    pub v: usize,
    pub k: usize,
    pub counts: Vec<u64>,
}

impl DiffSpectrum {
    pub fn get(&self, x: Elem) -> u64 {
        self.counts[x.0]
    }

    /// Value -> number of nonzero elements attaining it.
    pub fn histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.counts[1..] {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    pub fn nonzero_values(&self) -> Vec<u64> {
        self.histogram().into_keys().collect()
    }
}

/// Sorted, deduplicated copy of `set` after a membership check.
pub fn normalize_set(ctx: &GroupCtx, set: &[Elem]) -> Result<Vec<Elem>> {
    let mut out = Vec::with_capacity(set.len());
    for &a in set {
        out.push(ctx.check(a)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Coefficients of `A(X) B(X^{-1})`: entry `h` counts pairs `(a, b)` with `a - b = h`.
pub fn groupring_product(ctx: &GroupCtx, a: &[Elem], b: &[Elem]) -> Result<Vec<u64>> {
    let a = normalize_set(ctx, a)?;
    let b = normalize_set(ctx, b)?;
    Ok(pair_differences(ctx, &a, &b))
}

fn pair_differences(ctx: &GroupCtx, a: &[Elem], b: &[Elem]) -> Vec<u64> {
    let v = ctx.order();
    let work = a.len() * b.len();
    if let GroupKind::Cyclic(_) = ctx.kind() {
        let kernel = |acc: &mut Vec<u64>, x: usize| {
            for &y in b {
                let d = if x >= y.0 { x - y.0 } else { x + v - y.0 };
                acc[d] += 1;
            }
        };
        return accumulate(v, a.iter().map(|e| e.0).collect(), work, kernel);
    }
    let radices = ctx.radices().to_vec();
    let places: Vec<usize> = {
        let mut p = vec![1usize; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            p[i] = p[i + 1] * radices[i + 1];
        }
        p
    };
    let bd: Vec<Vec<usize>> = b.iter().map(|e| ctx.digits(e.0)).collect();
    let kernel = |acc: &mut Vec<u64>, x: usize| {
        let xd = ctx.digits(x);
        for yd in &bd {
            let mut idx = 0;
            for i in 0..radices.len() {
                let r = radices[i];
                let d = if xd[i] >= yd[i] { xd[i] - yd[i] } else { xd[i] + r - yd[i] };
                idx += d * places[i];
            }
            acc[idx] += 1;
        }
    };
    accumulate(v, a.iter().map(|e| e.0).collect(), work, kernel)
}

fn accumulate<F>(v: usize, xs: Vec<usize>, work: usize, kernel: F) -> Vec<u64>
where
    F: Fn(&mut Vec<u64>, usize) + Sync,
{
    if work < 1 << 20 {
        let mut acc = vec![0u64; v];
        for x in xs {
            kernel(&mut acc, x);
        }
        return acc;
    }
    xs.par_chunks(64)
        .fold(
            || vec![0u64; v],
            |mut acc, chunk| {
                for &x in chunk {
                    kernel(&mut acc, x);
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; v],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

pub fn diff_spectrum(ctx: &GroupCtx, set: &[Elem]) -> Result<DiffSpectrum> {
    let d = normalize_set(ctx, set)?;
    Ok(DiffSpectrum {
        v: ctx.order(),
        k: d.len(),
        counts: pair_differences(ctx, &d, &d),
    })
}

/// Parameter tuple of a design, without witness sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "type")]
pub enum Params {
    DS {
        v: u64,
        k: u64,
        lambda: u64,
    },
    ADS {
        v: u64,
        k: u64,
        lambda: u64,
        t: u64,
    },
    PDS {
        v: u64,
        k: u64,
        lambda: u64,
        mu: u64,
    },
    DDS {
        v: u64,
        m: u64,
        k: u64,
        lambda1: u64,
        lambda2: u64,
    },
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Params::DS { v, k, lambda } => write!(f, "DS({v},{k},{lambda})"),
            Params::ADS { v, k, lambda, t } => write!(f, "ADS({v},{k},{lambda},{t})"),
            Params::PDS { v, k, lambda, mu } => write!(f, "PDS({v},{k},{lambda},{mu})"),
            Params::DDS {
                v,
                m,
                k,
                lambda1,
                lambda2,
            } => write!(f, "DDS({v},{m},{k},{lambda1},{lambda2})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    DS {
        v: u64,
        k: u64,
        lambda: u64,
    },
    /// `s` holds the nonzero elements of multiplicity `lambda` (|s| = t);
    /// `s_complement` the ones of multiplicity `lambda + 1`.
    ADS {
        v: u64,
        k: u64,
        lambda: u64,
        t: u64,
        s: Vec<Elem>,
        s_complement: Vec<Elem>,
    },
    PDS {
        v: u64,
        k: u64,
        lambda: u64,
        mu: u64,
        regular: bool,
        paley_type: bool,
    },
    DDS(DdsRecord),
}

impl Verdict {
    pub fn params(&self) -> Params {
        match self {
            &Verdict::DS { v, k, lambda } => Params::DS { v, k, lambda },
            &Verdict::ADS { v, k, lambda, t, .. } => Params::ADS { v, k, lambda, t },
            &Verdict::PDS { v, k, lambda, mu, .. } => Params::PDS { v, k, lambda, mu },
            Verdict::DDS(r) => r.params(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdsRecord {
    pub v: u64,
    pub m: u64,
    pub k: u64,
    pub lambda1: u64,
    pub lambda2: u64,
    pub subgroup: Vec<Elem>,
    /// `|lambda1 - lambda2| = 1`, so the set is also an ADS.
    pub davis: bool,
}

impl DdsRecord {
    pub fn params(&self) -> Params {
        Params::DDS {
            v: self.v,
            m: self.m,
            k: self.k,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub spectrum: DiffSpectrum,
    pub verdicts: Vec<Verdict>,
}

impl Classification {
    pub fn params(&self) -> Vec<Params> {
        self.verdicts.iter().map(Verdict::params).collect()
    }

    pub fn has(&self, p: &Params) -> bool {
        self.verdicts.iter().any(|v| &v.params() == p)
    }

    pub fn ads(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| matches!(v, Verdict::ADS { .. }))
    }

    pub fn ds(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| matches!(v, Verdict::DS { .. }))
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }
}

/// All structures the set carries. DDS verdicts are searched over the
/// subgroups returned by [`candidate_subgroups`].
pub fn classify(ctx: &GroupCtx, set: &[Elem]) -> Result<Classification> {
    let d = normalize_set(ctx, set)?;
    let spectrum = DiffSpectrum {
        v: ctx.order(),
        k: d.len(),
        counts: pair_differences(ctx, &d, &d),
    };
    let verdicts = verdicts_from(ctx, &d, &spectrum, true);
    Ok(Classification { spectrum, verdicts })
}

/// Like [`classify`] without the DDS subgroup scan.
pub fn classify_basic(ctx: &GroupCtx, set: &[Elem]) -> Result<Classification> {
    let d = normalize_set(ctx, set)?;
    let spectrum = DiffSpectrum {
        v: ctx.order(),
        k: d.len(),
        counts: pair_differences(ctx, &d, &d),
    };
    let verdicts = verdicts_from(ctx, &d, &spectrum, false);
    Ok(Classification { spectrum, verdicts })
}

fn verdicts_from(ctx: &GroupCtx, d: &[Elem], sp: &DiffSpectrum, with_dds: bool) -> Vec<Verdict> {
    let v = sp.v as u64;
    let k = sp.k as u64;
    let mut out = Vec::new();
    if sp.v < 2 {
        return out;
    }
    let values = sp.nonzero_values();
    if values.len() == 1 {
        out.push(Verdict::DS {
            v,
            k,
            lambda: values[0],
        });
    }
    if values.len() == 2 && values[1] == values[0] + 1 {
        let lambda = values[0];
        let (mut s, mut rest) = (Vec::new(), Vec::new());
        for x in 1..sp.v {
            if sp.counts[x] == lambda {
                s.push(Elem(x));
            } else {
                rest.push(Elem(x));
            }
        }
        out.push(Verdict::ADS {
            v,
            k,
            lambda,
            t: s.len() as u64,
            s,
            s_complement: rest,
        });
    }
    if let Some(pds) = pds_verdict(ctx, d, sp) {
        out.push(pds);
    }
    if with_dds && values.len() == 2 {
        for h in candidate_subgroups(ctx) {
            if let Some(r) = dds_from_spectrum(sp, &h) {
                out.push(Verdict::DDS(r));
            }
        }
    }
    out
}

fn pds_verdict(ctx: &GroupCtx, d: &[Elem], sp: &DiffSpectrum) -> Option<Verdict> {
    let mut member = vec![false; sp.v];
    for e in d {
        member[e.0] = true;
    }
    let mut inside = None;
    let mut outside = None;
    for x in 1..sp.v {
        let slot = if member[x] { &mut inside } else { &mut outside };
        match *slot {
            None => *slot = Some(sp.counts[x]),
            Some(c) if c != sp.counts[x] => return None,
            _ => {}
        }
    }
    let (lambda, mu) = (inside?, outside?);
    if lambda == mu {
        return None;
    }
    let symmetric = d.iter().all(|&e| member[ctx.neg_idx(e.0)]);
    let regular = !member[0] && symmetric;
    let (v, k) = (sp.v as u64, sp.k as u64);
    let paley_type = v % 4 == 1 && 2 * k == v - 1 && 4 * lambda + 5 == v && 4 * mu + 1 == v;
    Some(Verdict::PDS {
        v,
        k,
        lambda,
        mu,
        regular,
        paley_type,
    })
}

/// Proper nontrivial subgroups probed for DDS structure: for a cyclic group
/// all of them; for a product, the subgroups of each single factor embedded
/// in the product.
pub fn candidate_subgroups(ctx: &GroupCtx) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let factors = ctx.factors();
    for (fi, f) in factors.iter().enumerate() {
        let orders: Vec<usize> = match f.kind() {
            GroupKind::Cyclic(n) => arith::divisors(*n as u64)
                .into_iter()
                .map(|d| d as usize)
                .filter(|&d| d > 1)
                .collect(),
            _ => vec![f.order()],
        };
        for m in orders {
            if m == ctx.order() {
                continue;
            }
            let step = f.order() / m;
            let mut h: Vec<Elem> = (0..m)
                .map(|j| {
                    let mut parts = vec![0; factors.len()];
                    parts[fi] = if f.is_cyclic() { j * step } else { j };
                    ctx.from_components(&parts).expect("component in range")
                })
                .collect();
            h.sort_unstable();
            out.push(h);
        }
    }
    out
}

fn dds_from_spectrum(sp: &DiffSpectrum, h: &[Elem]) -> Option<DdsRecord> {
    let mut in_h = vec![false; sp.v];
    for e in h {
        in_h[e.0] = true;
    }
    let (mut l1, mut l2) = (None, None);
    for x in 1..sp.v {
        let slot = if in_h[x] { &mut l1 } else { &mut l2 };
        match *slot {
            None => *slot = Some(sp.counts[x]),
            Some(c) if c != sp.counts[x] => return None,
            _ => {}
        }
    }
    let (lambda1, lambda2) = (l1?, l2?);
    if lambda1 == lambda2 {
        return None;
    }
    Some(DdsRecord {
        v: sp.v as u64,
        m: h.len() as u64,
        k: sp.k as u64,
        lambda1,
        lambda2,
        subgroup: h.to_vec(),
        davis: lambda1.abs_diff(lambda2) == 1,
    })
}

pub fn is_subgroup(ctx: &GroupCtx, h: &[Elem]) -> Result<bool> {
    let h = normalize_set(ctx, h)?;
    if h.first() != Some(&Elem(0)) {
        return Ok(false);
    }
    let mut member = vec![false; ctx.order()];
    for e in &h {
        member[e.0] = true;
    }
    Ok(h
        .iter()
        .all(|a| h.iter().all(|b| member[ctx.sub_idx(a.0, b.0)])))
}

/// DDS record relative to a given subgroup; `None` if the spectrum is not
/// constant on `H \ {0}` and on `G \ H`. A constant spectrum on both parts with
/// equal values is reported with `lambda1 = lambda2`.
pub fn dds_classify(ctx: &GroupCtx, h: &[Elem], set: &[Elem]) -> Result<Option<DdsRecord>> {
    if !is_subgroup(ctx, h)? {
        return Err(Error::NotSubgroup);
    }
    let h = normalize_set(ctx, h)?;
    let sp = diff_spectrum(ctx, set)?;
    let mut in_h = vec![false; sp.v];
    for e in &h {
        in_h[e.0] = true;
    }
    let (mut l1, mut l2) = (None, None);
    for x in 1..sp.v {
        let slot = if in_h[x] { &mut l1 } else { &mut l2 };
        match *slot {
            None => *slot = Some(sp.counts[x]),
            Some(c) if c != sp.counts[x] => return Ok(None),
            _ => {}
        }
    }
    let (lambda1, lambda2) = match (l1, l2) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) | (None, Some(a)) => (a, a),
        (None, None) => return Ok(None),
    };
    Ok(Some(DdsRecord {
        v: sp.v as u64,
        m: h.len() as u64,
        k: sp.k as u64,
        lambda1,
        lambda2,
        subgroup: h,
        davis: lambda1.abs_diff(lambda2) == 1,
    }))
}

/// S and its complement in `G \ {0}` for an ADS.
pub fn lambda_sets(ctx: &GroupCtx, set: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    match classify_basic(ctx, set)?.ads() {
        Some(Verdict::ADS { s, s_complement, .. }) => Ok((s.clone(), s_complement.clone())),
        _ => Err(Error::NotAds),
    }
}

fn ads_params(c: &Classification) -> Option<(u64, u64, u64, u64)> {
    match c.ads()? {
        &Verdict::ADS { v, k, lambda, t, .. } => Some((v, k, lambda, t)),
        _ => None,
    }
}

/// `G \ D`. When `D` is an ADS the complement is checked to be a
/// `(v, v-k, v-2k+lambda, t)`-ADS.
pub fn complement(ctx: &GroupCtx, set: &[Elem]) -> Result<Vec<Elem>> {
    let d = normalize_set(ctx, set)?;
    let mut member = vec![false; ctx.order()];
    for e in &d {
        member[e.0] = true;
    }
    let comp: Vec<Elem> = (0..ctx.order()).filter(|&x| !member[x]).map(Elem).collect();
    if let Some((v, k, lambda, t)) = ads_params(&classify_basic(ctx, &d)?) {
        let expected = Params::ADS {
            v,
            k: v - k,
            lambda: (v + lambda).checked_sub(2 * k).unwrap_or(u64::MAX),
            t,
        };
        let found = classify_basic(ctx, &comp)?;
        if !found.has(&expected) {
            return Err(Error::Verification {
                family: "complement".into(),
                claimed: expected.to_string(),
                found: format!("{:?}", found.params()),
            });
        }
    }
    Ok(comp)
}

/// `{a d + b mod v}` with the classification checked to be unchanged.
pub fn affine_image(v: u64, a: u64, b: u64, set: &[u64]) -> Result<Vec<u64>> {
    if v == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if arith::gcd(a % v, v) != 1 {
        return Err(Error::NotCoprime { a, v });
    }
    let mut img: Vec<u64> = set
        .iter()
        .map(|&d| ((a as u128 * d as u128 + b as u128) % v as u128) as u64)
        .collect();
    img.sort_unstable();
    img.dedup();
    let ctx = GroupCtx::cyclic(v as usize)?;
    let before = classify_basic(&ctx, &to_elems(set, v)?)?.params();
    let after = classify_basic(&ctx, &to_elems(&img, v)?)?.params();
    if before != after {
        return Err(Error::Verification {
            family: "affine image".into(),
            claimed: format!("{before:?}"),
            found: format!("{after:?}"),
        });
    }
    Ok(img)
}

fn to_elems(set: &[u64], v: u64) -> Result<Vec<Elem>> {
    set.iter()
        .map(|&x| {
            if x < v {
                Ok(Elem(x as usize))
            } else {
                Err(Error::ForeignElement {
                    index: x as usize,
                    order: v as usize,
                })
            }
        })
        .collect()
}
