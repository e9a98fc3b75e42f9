use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::arith;
use crate::diffcore::{self, Params, Verdict};
use crate::error::{Error, Result};
use crate::groups::{Elem, GroupCtx};

use super::{ConstructedSet, Provenance};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub lambda: Option<u64>,
    pub t: Option<u64>,
    /// Also report partial difference sets that are not ADS or DS; disables
    /// the multiplicity bound used for pruning.
    pub include_pds: bool,
    /// Keep one representative per translation/multiplier orbit.
    pub dedup: bool,
    /// Maximum number of `(k-1)`-subsets of `G \ {0}` to enumerate.
    pub budget: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            lambda: None,
            t: None,
            include_pds: false,
            dedup: true,
            budget: budget_from_env(),
        }
    }
}

/// `ADSKIT_BUDGET` when set and parseable, otherwise [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u128 {
    std::env::var("ADSKIT_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Number of matching sets in the whole group, before any dedup.
    pub raw_count: usize,
    /// Canonical representatives (or every match containing 0 when dedup is off), sorted.
    pub sets: Vec<ConstructedSet>,
}

fn exponent(ctx: &GroupCtx) -> u64 {
    ctx.radices()
        .iter()
        .fold(1u64, |acc, &r| acc / arith::gcd(acc, r as u64) * r as u64)
}

fn scale(ctx: &GroupCtx, x: usize, a: u64) -> usize {
    let mut out = 0;
    for (d, &r) in ctx.digits(x).into_iter().zip(ctx.radices()) {
        out = out * r + (d * a as usize) % r;
    }
    out
}

/// Least sorted image of `set` under `x -> a x + g`, `gcd(a, exp G) = 1`.
pub fn canonical_form(ctx: &GroupCtx, set: &[Elem]) -> Vec<Elem> {
    let ex = exponent(ctx);
    let mut best: Option<Vec<Elem>> = None;
    for a in (1..=ex.max(1)).filter(|&a| arith::gcd(a, ex) == 1) {
        let scaled: Vec<usize> = set.iter().map(|e| scale(ctx, e.0, a)).collect();
        for &pivot in &scaled {
            let mut img: Vec<Elem> = scaled.iter().map(|&x| Elem(ctx.sub_idx(x, pivot))).collect();
            img.sort_unstable();
            if best.as_ref().map_or(true, |b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

fn translates(ctx: &GroupCtx, set: &[Elem]) -> Vec<Vec<Elem>> {
    (0..ctx.order())
        .map(|g| {
            let mut s: Vec<Elem> = set.iter().map(|e| Elem(ctx.add_idx(e.0, g))).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

fn matching(verdicts: &[Verdict], opts: &SearchOptions) -> Vec<Params> {
    verdicts
        .iter()
        .map(Verdict::params)
        .filter(|p| match *p {
            Params::ADS { lambda, t, .. } => {
                opts.lambda.map_or(true, |l| l == lambda) && opts.t.map_or(true, |x| x == t)
            }
            Params::DS { lambda, .. } => opts.t.is_none() && opts.lambda.map_or(true, |l| l == lambda),
            Params::PDS { lambda, .. } => {
                opts.include_pds && opts.t.is_none() && opts.lambda.map_or(true, |l| l == lambda)
            }
            Params::DDS { .. } => false,
        })
        .collect()
}

struct Dfs<'a> {
    ctx: &'a GroupCtx,
    k: usize,
    cap: Option<u64>,
    counts: Vec<u64>,
    chosen: Vec<usize>,
    found: Vec<Vec<Elem>>,
}

impl Dfs<'_> {
    fn push(&mut self, x: usize) -> bool {
        let mut ok = true;
        for i in 0..self.chosen.len() {
            let y = self.chosen[i];
            let a = self.ctx.sub_idx(x, y);
            let b = self.ctx.sub_idx(y, x);
            self.counts[a] += 1;
            self.counts[b] += 1;
            if let Some(cap) = self.cap {
                ok &= self.counts[a] <= cap && self.counts[b] <= cap;
            }
        }
        self.chosen.push(x);
        ok
    }

    fn pop(&mut self) {
        let x = self.chosen.pop().expect("nonempty");
        for &y in &self.chosen {
            self.counts[self.ctx.sub_idx(x, y)] -= 1;
            self.counts[self.ctx.sub_idx(y, x)] -= 1;
        }
    }

    fn run(&mut self, next: usize) {
        if self.chosen.len() == self.k {
            self.found.push(self.chosen.iter().map(|&x| Elem(x)).collect());
            return;
        }
        let need = self.k - self.chosen.len();
        for x in next..self.ctx.order() {
            if self.ctx.order() - x < need {
                break;
            }
            if self.push(x) {
                self.run(x + 1);
            }
            self.pop();
        }
    }
}

/// Exhaustive search for `k`-subsets of `ctx` carrying ADS/DS (optionally PDS)
/// structure. Sets are enumerated with `0 ∈ D`, which loses nothing up to translation.
pub fn brute_search(ctx: &GroupCtx, k: usize, opts: &SearchOptions) -> Result<SearchResult> {
    let v = ctx.order();
    if k == 0 || k > v {
        return Err(Error::InvalidArgument(format!("k = {k} out of range for a group of order {v}")));
    }
    let needed = arith::binomial(v as u64 - 1, k as u64 - 1);
    if needed > opts.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let cap = if opts.include_pds || v < 2 {
        None
    } else {
        let pairs = (k * (k - 1)) as u64;
        let ceil = pairs.div_ceil(v as u64 - 1);
        Some(opts.lambda.map_or(ceil, |l| l + 1))
    };
    let seeds: Vec<usize> = if k == 1 { vec![usize::MAX] } else { (1..v).collect() };
    let candidates: Vec<Vec<Elem>> = seeds
        .into_par_iter()
        .flat_map_iter(|second| {
            let mut dfs = Dfs {
                ctx,
                k,
                cap,
                counts: vec![0; v],
                chosen: Vec::with_capacity(k),
                found: Vec::new(),
            };
            dfs.push(0);
            if second == usize::MAX {
                dfs.run(v);
            } else if dfs.push(second) {
                dfs.run(second + 1);
            }
            dfs.found
        })
        .collect();
    let mut hits: Vec<(Vec<Elem>, Vec<Params>)> = candidates
        .into_par_iter()
        .filter_map(|s| {
            let cls = diffcore::classify_basic(ctx, &s).ok()?;
            let m = matching(&cls.verdicts, opts);
            (!m.is_empty()).then_some((s, m))
        })
        .collect();
    hits.sort();
    let mut all: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for (s, _) in &hits {
        all.extend(translates(ctx, s));
    }
    let raw_count = all.len();
    if opts.dedup {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for (s, m) in hits {
            let c = canonical_form(ctx, &s);
            if seen.insert(c.clone()) {
                kept.push((c, m));
            }
        }
        kept.sort();
        hits = kept;
    }
    let sets = hits
        .into_iter()
        .map(|(set, claims)| ConstructedSet {
            group: ctx.clone(),
            set,
            claims,
            verified: true,
            provenance: Provenance {
                family: "brute_search".into(),
                citation: "exhaustive".into(),
            },
            notes: Vec::new(),
        })
        .collect();
    Ok(SearchResult { raw_count, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;

    fn z(v: usize) -> GroupCtx {
        GroupCtx::cyclic(v).unwrap()
    }

    #[test]
    fn z7_k3() {
        let r = brute_search(&z(7), 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.raw_count, 14);
        assert_eq!(r.sets.len(), 1);
        assert_eq!(r.sets[0].claims, vec![Params::DS { v: 7, k: 3, lambda: 1 }]);
    }

    #[test]
    fn z13_k3_t6() {
        let opts = SearchOptions {
            t: Some(6),
            ..SearchOptions::default()
        };
        let r = brute_search(&z(13), 3, &opts).unwrap();
        let g = z(13);
        let reps: Vec<Vec<Elem>> = r.sets.iter().map(|c| c.set.clone()).collect();
        for s in [[1, 3, 9], [0, 4, 6]] {
            let c = canonical_form(&g, &s.map(Elem));
            assert!(reps.contains(&c), "{s:?}");
        }
    }

    #[test]
    fn z6_k3() {
        let r = brute_search(&z(6), 3, &SearchOptions::default()).unwrap();
        let c = canonical_form(&z(6), &[Elem(2), Elem(4), Elem(5)]);
        assert!(r.sets.iter().any(|s| s.set == c));
    }

    #[test]
    fn budget_and_noncyclic() {
        let opts = SearchOptions {
            budget: 10,
            ..SearchOptions::default()
        };
        assert!(matches!(
            brute_search(&z(20), 5, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
        let g = make_group("zv:2 x zv:2 x zv:2 x zv:2").unwrap();
        let r = brute_search(&g, 6, &SearchOptions::default()).unwrap();
        assert!(r.sets.iter().all(|s| s.claims.contains(&Params::DS { v: 16, k: 6, lambda: 2 })));
        assert!(!r.sets.is_empty());
    }

    /// Dedup never merges sets with different parameters, and the
    /// unpruned search (PDS on) finds every pruned hit.
    #[test]
    fn pruning_is_sound() {
        for v in [8usize, 9, 10, 11] {
            for k in 2..=4 {
                let base = SearchOptions {
                    dedup: false,
                    ..SearchOptions::default()
                };
                let pruned = brute_search(&z(v), k, &base).unwrap();
                let full = brute_search(
                    &z(v),
                    k,
                    &SearchOptions {
                        include_pds: true,
                        ..base.clone()
                    },
                )
                .unwrap();
                for s in &pruned.sets {
                    assert!(full.sets.iter().any(|f| f.set == s.set));
                }
            }
        }
    }
}
