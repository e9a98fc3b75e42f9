//! Periodic binary sequences, their correlation spectra and the link to
//! almost difference sets in `Z_n`.
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{self, ConstructedSet};
use crate::diffcore::{self, Params, Verdict};
use crate::error::{Error, Result};
use crate::gf;
use crate::groups::{Elem, GroupCtx};

/// One period of a binary sequence; indices are read mod the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeqBits {
    bits: Vec<u8>,
}

impl SeqBits {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("sequence period must be at least 1".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!("sequence entry {b} is not a bit")));
        }
        Ok(SeqBits { bits })
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, t: usize) -> u8 {
        self.bits[t % self.bits.len()]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn complement(&self) -> SeqBits {
        SeqBits {
            bits: self.bits.iter().map(|b| 1 - b).collect(),
        }
    }

    /// `t -> s(t + delta)`.
    pub fn shift(&self, delta: usize) -> SeqBits {
        let n = self.period();
        SeqBits {
            bits: (0..n).map(|t| self.get(t + delta % n)).collect(),
        }
    }
}

impl FromStr for SeqBits {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in sequence"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse("empty sequence".into()));
        }
        SeqBits::new(bits)
    }
}

impl fmt::Display for SeqBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Characteristic sequence of `D ⊆ Z_n`.
pub fn char_seq(d: &[u64], n: usize) -> Result<SeqBits> {
    let mut bits = vec![0u8; n];
    for &x in d {
        if x as usize >= n {
            return Err(Error::ForeignElement {
                index: x as usize,
                order: n,
            });
        }
        bits[x as usize] = 1;
    }
    SeqBits::new(bits)
}

pub fn support(s: &SeqBits) -> Vec<u64> {
    (0..s.period()).filter(|&t| s.bits[t] == 1).map(|t| t as u64).collect()
}

/// `Σ_t (-1)^{s(t+w) - u(t)}`.
pub fn crosscorr(s: &SeqBits, u: &SeqBits, w: usize) -> Result<i64> {
    if s.period() != u.period() {
        return Err(Error::PeriodMismatch(s.period(), u.period()));
    }
    Ok(corr_raw(&s.bits, &u.bits, w))
}

pub fn autocorr(s: &SeqBits, w: usize) -> i64 {
    corr_raw(&s.bits, &s.bits, w)
}

fn corr_raw(s: &[u8], u: &[u8], w: usize) -> i64 {
    let n = s.len();
    let w = w % n;
    let agree = (0..n).filter(|&t| s[(t + w) % n] == u[t]).count() as i64;
    2 * agree - n as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrSpectrum {
    pub period: usize,
    /// `values[w] = C_s(w)`.
    pub values: Vec<i64>,
    /// Multiplicity of each value over `w ≠ 0`.
    pub off_peak: BTreeMap<i64, usize>,
    /// Number of distinct values, the peak included.
    pub levels: usize,
    pub optimal: bool,
    pub ideal: bool,
}

pub fn autocorr_spectrum(s: &SeqBits) -> CorrSpectrum {
    let n = s.period();
    let values: Vec<i64> = if n >= 256 {
        (0..n).into_par_iter().map(|w| autocorr(s, w)).collect()
    } else {
        (0..n).map(|w| autocorr(s, w)).collect()
    };
    let mut off_peak = BTreeMap::new();
    for &c in &values[1..] {
        *off_peak.entry(c).or_insert(0) += 1;
    }
    let mut distinct: Vec<i64> = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let within = |allowed: &[i64]| off_peak.keys().all(|c| allowed.contains(c));
    let optimal = match n % 4 {
        3 => within(&[-1]),
        1 => within(&[1, -3]),
        2 => within(&[-2, 2]),
        _ => within(&[0, 4]) || within(&[0, -4]),
    };
    let ideal = n % 4 == 3 && within(&[-1]);
    CorrSpectrum {
        period: n,
        values,
        off_peak,
        levels: distinct.len(),
        optimal,
        ideal,
    }
}

pub fn classify_autocorr(s: &SeqBits) -> CorrSpectrum {
    autocorr_spectrum(s)
}

fn cyclic_elems(set: &[u64]) -> Vec<Elem> {
    set.iter().map(|&x| Elem(x as usize)).collect()
}

/// ADS read off a three-level autocorrelation: off-peak values
/// `n - 4(k - λ)` (t times) and `n - 4(k - λ - 1)`. The result is cross-checked
/// against the difference spectrum of the support.
pub fn ads_from_sequence(s: &SeqBits) -> Result<Option<Verdict>> {
    let n = s.period() as i64;
    let sp = autocorr_spectrum(s);
    let vals: Vec<i64> = sp.off_peak.keys().copied().collect();
    if vals.len() != 2 || vals[1] - vals[0] != 4 {
        return Ok(None);
    }
    let k = s.weight() as i64;
    let lo = vals[0];
    if (n - lo) % 4 != 0 {
        return Ok(None);
    }
    let lambda = k - (n - lo) / 4;
    if lambda < 0 {
        return Ok(None);
    }
    let claimed = Params::ADS {
        v: n as u64,
        k: k as u64,
        lambda: lambda as u64,
        t: sp.off_peak[&lo] as u64,
    };
    let ctx = GroupCtx::cyclic(s.period())?;
    let cls = diffcore::classify_basic(&ctx, &cyclic_elems(&support(s)))?;
    match cls.ads() {
        Some(v) if v.params() == claimed => Ok(Some(v.clone())),
        _ => Err(Error::Verification {
            family: "ads_from_sequence".into(),
            claimed: claimed.to_string(),
            found: format!("{:?}", cls.params()),
        }),
    }
}

/// Interleaves `s, s̄(·+δ), s̄, s̄(·+δ)` into a sequence of period `4l`:
/// `u(t) = m[t mod 4][t mod l]`.
pub fn interleave(seed: &SeqBits, delta: usize) -> Result<SeqBits> {
    let l = seed.period();
    if !classify_autocorr(seed).ideal {
        return Err(Error::NotIdeal);
    }
    if delta >= l {
        return Err(Error::InvalidArgument(format!("delta {delta} must be below the period {l}")));
    }
    let comp = seed.complement();
    let shifted = comp.shift(delta);
    let rows = [seed, &shifted, &comp, &shifted];
    let bits: Vec<u8> = (0..4 * l).map(|t| rows[t % 4].get(t % l)).collect();
    let u = SeqBits::new(bits)?;
    let sp = autocorr_spectrum(&u);
    let expected: BTreeMap<i64, usize> = [(-4, l - 1), (0, 3 * l)].into_iter().collect();
    if sp.off_peak != expected {
        return Err(Error::Verification {
            family: "interleave".into(),
            claimed: format!("{expected:?}"),
            found: format!("{:?}", sp.off_peak),
        });
    }
    Ok(u)
}

/// Rows of `φ(D) ⊆ Z_4 x Z_l`, `φ(x) = (x mod 4, x mod l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiDecomposition {
    pub l: u64,
    pub delta: u64,
    pub rows: [Vec<u64>; 4],
}

fn shifted_complement(c: &[u64], l: u64, delta: u64) -> Vec<u64> {
    let mut member = vec![false; l as usize];
    for &x in c {
        member[((x + l - delta % l) % l) as usize] = true;
    }
    (0..l).filter(|&x| !member[x as usize]).collect()
}

/// Support of [`interleave`] applied to the characteristic sequence of `C`,
/// with its decomposition. Both the row description and the `Z_{4l}` coset
/// description are asserted against the computed support.
pub fn interleave_support_set(c: &[u64], l: u64, delta: u64) -> Result<(Vec<u64>, PhiDecomposition)> {
    let seed = char_seq(c, l as usize)?;
    let u = interleave(&seed, delta as usize)?;
    let d = support(&u);
    let crt = crate::groups::crt_map(l)?;
    let mut rows: [Vec<u64>; 4] = Default::default();
    for &x in &d {
        let (a, b) = crt.phi(x);
        rows[a as usize].push(b);
    }
    for r in rows.iter_mut() {
        r.sort_unstable();
    }
    let mut c_sorted = c.to_vec();
    c_sorted.sort_unstable();
    c_sorted.dedup();
    let c_shift_star = shifted_complement(&c_sorted, l, delta);
    let c_star = shifted_complement(&c_sorted, l, 0);
    let expected = [c_sorted.clone(), c_shift_star.clone(), c_star.clone(), c_shift_star.clone()];
    if rows != expected {
        return Err(Error::Verification {
            family: "interleave_support".into(),
            claimed: format!("{expected:?}"),
            found: format!("{rows:?}"),
        });
    }
    let n = 4 * l;
    let mut cosets: Vec<u64> = Vec::with_capacity(d.len());
    for (set, offset) in [(&c_sorted, 0), (&c_shift_star, 3 * l), (&c_star, 2 * l), (&c_shift_star, l)] {
        cosets.extend(set.iter().map(|&x| ((l + 1) * x + offset) % n));
    }
    cosets.sort_unstable();
    if cosets != d {
        return Err(Error::Verification {
            family: "interleave_support".into(),
            claimed: format!("{cosets:?}"),
            found: format!("{d:?}"),
        });
    }
    Ok((d, PhiDecomposition { l, delta, rows }))
}

/// [`interleave_support_set`] for a Paley-Hadamard seed, with the ADS
/// parameters fixed by the seed size.
pub fn interleave_support(seed: &ConstructedSet, delta: u64) -> Result<(ConstructedSet, PhiDecomposition)> {
    const FAMILY: &str = "interleave_support";
    if !seed.group.is_cyclic() {
        return Err(Error::precondition(FAMILY, "seed must live in a cyclic group"));
    }
    let l = seed.group.order() as u64;
    let c: Vec<u64> = seed.set.iter().map(|e| e.0 as u64).collect();
    let k = c.len() as u64;
    let ph = l % 4 == 3
        && diffcore::classify_basic(&seed.group, &seed.set)?
            .ds()
            .is_some_and(|_| 2 * k + 1 == l || 2 * k == l + 1);
    if !ph {
        return Err(Error::precondition(FAMILY, format!("seed is not a Paley-Hadamard difference set in Z_{l}")));
    }
    let (d, phi) = interleave_support_set(&c, l, delta)?;
    let claim = if 2 * k == l + 1 {
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
    let group = GroupCtx::cyclic(4 * l as usize)?;
    let out = constructions::finish(
        FAMILY,
        "Arasu, Ding, Helleseth, Kumar, Martinsen",
        group,
        cyclic_elems(&d),
        vec![claim],
        vec![format!("seed {}, delta {delta}", seed.provenance.family)],
    )?;
    Ok((out, phi))
}

/// m-sequence of period `2^t - 1` from the defining polynomial of `GF(2^t)`,
/// all-ones initial state.
pub fn mseq(t: u32) -> Result<SeqBits> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!("mseq needs t >= 2, got {t}")));
    }
    let field = gf::make_field(2, t)?;
    let taps: Vec<u8> = field.modulus()[..t as usize].iter().map(|&c| c as u8).collect();
    let n = (1usize << t) - 1;
    let mut bits = vec![1u8; t as usize];
    while bits.len() < n {
        let base = bits.len() - t as usize;
        let next = taps
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &c)| acc ^ (c & bits[base + i]));
        bits.push(next);
    }
    SeqBits::new(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre(p: u64) -> SeqBits {
        let qr: Vec<u64> = (1..p).filter(|x| (1..p).any(|y| y * y % p == *x)).collect();
        char_seq(&qr, p as usize).unwrap()
    }

    #[test]
    fn char_seq_examples() {
        assert_eq!(char_seq(&[1, 2, 4], 7).unwrap().to_string(), "0110100");
        assert_eq!(char_seq(&[], 5).unwrap().to_string(), "00000");
        assert!(char_seq(&[7], 7).is_err());
        let s: SeqBits = "0110100".parse().unwrap();
        assert_eq!(support(&s), vec![1, 2, 4]);
        assert!("01a".parse::<SeqBits>().is_err());
    }

    #[test]
    fn legendre_spectra() {
        let s7 = classify_autocorr(&legendre(7));
        assert_eq!(s7.values[0], 7);
        assert!(s7.values[1..].iter().all(|&c| c == -1));
        assert!(s7.ideal && s7.optimal);
        assert_eq!(s7.levels, 2);
        let s13 = classify_autocorr(&legendre(13));
        assert_eq!(s13.off_peak, [(-3, 6), (1, 6)].into_iter().collect());
        assert!(s13.optimal && !s13.ideal);
        assert_eq!(s13.levels, 3);
        let ones = classify_autocorr(&SeqBits::new(vec![1; 8]).unwrap());
        assert!(ones.values.iter().all(|&c| c == 8));
        assert!(!ones.optimal);
    }

    #[test]
    fn crosscorr_period_mismatch() {
        let a = legendre(7);
        let b = legendre(11);
        assert_eq!(crosscorr(&a, &b, 0), Err(Error::PeriodMismatch(7, 11)));
        assert_eq!(crosscorr(&a, &a, 3).unwrap(), autocorr(&a, 3));
    }

    #[test]
    fn bridge() {
        let v = ads_from_sequence(&legendre(13)).unwrap().unwrap();
        assert_eq!(
            v.params(),
            Params::ADS {
                v: 13,
                k: 6,
                lambda: 2,
                t: 6
            }
        );
        assert!(ads_from_sequence(&legendre(7)).unwrap().is_none());
    }

    #[test]
    fn interleave_spectrum() {
        for (seed, delta) in [(legendre(7), 0), (legendre(7), 2), (mseq(3).unwrap(), 1)] {
            let u = interleave(&seed, delta).unwrap();
            let sp = autocorr_spectrum(&u);
            assert_eq!(sp.values[0], 28);
            assert_eq!(sp.off_peak, [(-4, 6), (0, 21)].into_iter().collect());
            assert!(sp.optimal);
        }
        assert_eq!(interleave(&legendre(13), 0), Err(Error::NotIdeal));
    }

    #[test]
    fn interleave_support_rows() {
        let (d, phi) = interleave_support_set(&[1, 2, 4], 7, 0).unwrap();
        assert_eq!(d.len(), 15);
        assert_eq!(phi.rows[0], vec![1, 2, 4]);
        assert_eq!(phi.rows[1], vec![0, 3, 5, 6]);
        let (_, phi) = interleave_support_set(&[1, 2, 4], 7, 3).unwrap();
        assert_eq!(phi.rows[1], phi.rows[3]);
        assert_eq!(phi.rows[1], vec![0, 2, 3, 4]);
    }

    #[test]
    fn mseq_examples() {
        let s3 = mseq(3).unwrap();
        assert_eq!(s3.period(), 7);
        assert!(classify_autocorr(&s3).ideal);
        let s4 = mseq(4).unwrap();
        assert_eq!(s4.weight(), 8);
        let zeros = support(&s4.complement());
        let ctx = GroupCtx::cyclic(15).unwrap();
        let cls = diffcore::classify_basic(&ctx, &cyclic_elems(&zeros)).unwrap();
        assert!(cls.has(&Params::DS { v: 15, k: 7, lambda: 3 }));
        let s2 = mseq(2).unwrap();
        assert_eq!(s2.period(), 3);
        assert_eq!(support(&s2.complement()).len(), 1);
        for t in 2..=10 {
            let s = mseq(t).unwrap();
            assert!(classify_autocorr(&s).ideal, "t = {t}");
        }
    }
}
