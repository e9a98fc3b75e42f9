//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line (written
//! straight to stdout so it survives test output capture). The test fails if a
//! criterion outside `KNOWN_FAILURES` fails.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use adskit::arith;
use adskit::constructions::{self, ConstructedSet, CycFamily, HadamardKind, SearchOptions, SummaryRow};
use adskit::cyclotomy::cyc_classes;
use adskit::diffcore::{self, Params};
use adskit::filters::{self, HallOptions, ParamSet};
use adskit::gf;
use adskit::sequences;
use adskit::{Elem, Error, GroupCtx};

/// Criteria whose printed statement does not hold; see the decisions ledger.
const KNOWN_FAILURES: &[u32] = &[2, 5, 7];

fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn z(v: usize) -> GroupCtx {
    GroupCtx::cyclic(v).unwrap()
}

fn elems(xs: &[usize]) -> Vec<Elem> {
    xs.iter().map(|&x| Elem(x)).collect()
}

/// Pairwise differences counted from group subtraction, independent of the
/// spectrum engine.
fn naive_counts(g: &GroupCtx, set: &[Elem]) -> Vec<u64> {
    let mut counts = vec![0u64; g.order()];
    for &a in set {
        for &b in set {
            if a != b {
                counts[g.sub(a, b).unwrap().0] += 1;
            }
        }
    }
    counts
}

/// Whether `set` has the parameters `p` by the naive count. DDS claims are
/// checked against diffcore's subgroup scan.
fn naive_has(g: &GroupCtx, set: &[Elem], p: &Params) -> bool {
    let v = g.order() as u64;
    let k = set.len() as u64;
    let counts = naive_counts(g, set);
    let nz = &counts[1..];
    match *p {
        Params::DS { v: pv, k: pk, lambda } => pv == v && pk == k && nz.iter().all(|&c| c == lambda),
        Params::ADS { v: pv, k: pk, lambda, t } => {
            pv == v
                && pk == k
                && nz.iter().all(|&c| c == lambda || c == lambda + 1)
                && nz.iter().filter(|&&c| c == lambda).count() as u64 == t
        }
        Params::PDS { v: pv, k: pk, lambda, mu } => {
            let member: BTreeSet<usize> = set.iter().map(|e| e.0).collect();
            pv == v
                && pk == k
                && (1..g.order()).all(|x| counts[x] == if member.contains(&x) { lambda } else { mu })
        }
        Params::DDS { .. } => diffcore::classify(g, set).map(|c| c.has(p)).unwrap_or(false),
    }
}

/// `verified`, every claim confirmed by the naive count, and `expected` among the claims.
fn check_built(c: &ConstructedSet, expected: Option<&Params>) -> Result<(), String> {
    if !c.verified {
        return Err(format!("{}: not verified", c.provenance.family));
    }
    for claim in &c.claims {
        if !naive_has(&c.group, &c.set, claim) {
            return Err(format!("{}: claim {claim} not confirmed by direct count", c.provenance.family));
        }
    }
    if let Some(e) = expected {
        if !c.claims.contains(e) {
            return Err(format!("{}: claims {:?} lack {e}", c.provenance.family, c.claims));
        }
    }
    Ok(())
}

// 1. Worked examples.
fn c1() -> (bool, String) {
    let mut bad = Vec::new();
    let cases: Vec<(usize, Vec<usize>, Params, Option<Vec<usize>>)> = vec![
        (13, vec![0, 1, 3, 9], Params::DS { v: 13, k: 4, lambda: 1 }, None),
        (13, vec![0, 4, 6], Params::ADS { v: 13, k: 3, lambda: 0, t: 6 }, Some(vec![1, 3, 5, 8, 10, 12])),
        (13, vec![1, 3, 9], Params::ADS { v: 13, k: 3, lambda: 0, t: 6 }, None),
        (21, vec![0, 1, 4, 14, 16], Params::DS { v: 21, k: 5, lambda: 1 }, None),
        (21, vec![0, 1, 3, 4, 14, 16], Params::ADS { v: 21, k: 6, lambda: 1, t: 10 }, None),
        (
            21,
            vec![0, 1, 2, 5, 15, 17],
            Params::ADS { v: 21, k: 6, lambda: 1, t: 10 },
            Some(vec![3, 7, 8, 9, 10, 11, 12, 13, 14, 18]),
        ),
        (13, vec![0, 1, 4, 6], Params::DS { v: 13, k: 4, lambda: 1 }, None),
    ];
    for (v, set, want, h) in cases {
        let g = z(v);
        let d = elems(&set);
        let cls = diffcore::classify(&g, &d).unwrap();
        if !cls.has(&want) || !naive_has(&g, &d, &want) {
            bad.push(format!("{set:?}: got {:?}", cls.params()));
        }
        if let Some(h) = h {
            let (s, _) = diffcore::lambda_sets(&g, &d).unwrap();
            if s != elems(&h) {
                bad.push(format!("{set:?}: H = {s:?}"));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { "7 fixtures".into() } else { bad.join("; ") })
}

// 2. Candidate tables and their rule-outs.
fn c2() -> (bool, String) {
    let t1_paper = [
        (2, 1, 0, 1), (8, 3, 0, 1), (22, 5, 0, 1), (38, 11, 2, 1), (40, 17, 6, 1),
        (44, 7, 0, 1), (50, 19, 6, 1), (74, 9, 0, 1), (92, 17, 2, 1), (104, 47, 20, 1),
        (112, 11, 0, 1), (134, 31, 6, 1), (140, 43, 12, 1), (152, 33, 6, 1), (158, 13, 0, 1),
        (164, 59, 20, 1), (170, 23, 2, 1), (182, 49, 12, 1), (194, 85, 36, 1), (200, 93, 42, 1),
    ];
    let t1_boxed = [
        (22, 5, 0, 1), (44, 7, 0, 1), (50, 19, 6, 1), (140, 43, 12, 1),
        (158, 13, 0, 1), (164, 59, 20, 1), (170, 23, 2, 1), (182, 49, 12, 1),
    ];
    let tv2_paper = [
        (6, 3, 1, 4), (20, 5, 1, 18), (32, 13, 5, 30), (42, 7, 1, 40), (72, 9, 1, 70),
        (96, 43, 19, 94), (102, 23, 5, 100), (110, 11, 1, 108), (122, 37, 11, 120), (146, 53, 19, 144),
        (150, 41, 11, 148), (156, 13, 1, 154), (180, 75, 31, 178), (192, 89, 41, 190),
    ];
    let tv2_boxed = [(20, 5, 1, 18), (42, 7, 1, 40), (150, 41, 11, 148), (156, 13, 1, 154), (180, 75, 31, 178)];
    let tuple = |p: &ParamSet| (p.v, p.k, p.lambda, p.t);
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, cands, paper, boxed, rule) in [
        ("t=1", filters::t1_candidates(200), &t1_paper[..], &t1_boxed[..], filters::parity_t1_test as fn(&ParamSet) -> filters::TestVerdict),
        ("t=v-2", filters::tv2_candidates(200), &tv2_paper[..], &tv2_boxed[..], filters::parity_tv2_test),
    ] {
        let got: Vec<_> = cands.iter().map(tuple).collect();
        let listed_ok = got == paper;
        let ruled: Vec<_> = cands.iter().filter(|p| rule(p).is_ruled_out()).map(tuple).collect();
        let ruled_ok = ruled == boxed;
        let full: Vec<_> = cands
            .iter()
            .filter(|p| filters::run_all(p, None, &HallOptions::default()).ruled_out)
            .map(tuple)
            .collect();
        ok &= listed_ok && ruled_ok;
        notes.push(format!(
            "{name}: {} candidates (match {listed_ok}), {} ruled out (match {ruled_ok}: {ruled:?}); all tests rule out {}",
            got.len(),
            ruled.len(),
            full.len()
        ));
    }
    (ok, notes.join(" | "))
}

// 3. Binary character test fixtures.
fn c3() -> (bool, String) {
    let fixtures = [(38, 14, 4, 3), (68, 25, 8, 3), (86, 23, 5, 4)];
    let mut bad = Vec::new();
    for (v, k, l, t) in fixtures {
        let p = ParamSet::new(v, k, l, t).unwrap();
        if !filters::binary_char_test(&p).is_ruled_out() {
            bad.push(format!("({v},{k},{l},{t})"));
        }
    }
    (bad.is_empty(), if bad.is_empty() { "3 ruled out".into() } else { format!("not ruled out: {}", bad.join(", ")) })
}

fn cyclotomic_relations(m: &[Vec<u64>], e: usize, f: usize) -> bool {
    let at = |i: usize, j: usize| m[i % e][j % e];
    let theta_row = |i: usize| u64::from(if f % 2 == 0 { i == 0 } else { i == e / 2 });
    let theta = |j: usize| u64::from(j == 0);
    (0..e).all(|i| {
        (0..e).all(|j| {
            let periodic = at(i + e, j + 2 * e) == at(i, j);
            let swap = if f % 2 == 0 { at(j, i) } else { at(j + e / 2, i + e / 2) };
            let sym = at(i, j) == at(e - i, j + e - i) && at(i, j) == swap;
            periodic && sym
        }) && (0..e).map(|j| at(i, j)).sum::<u64>() == f as u64 - theta_row(i)
    }) && (0..e).all(|j| {
        (0..e).map(|i| at(i, j)).sum::<u64>() == f as u64 - theta(j)
            && (0..e).map(|i| at(i, i + j)).sum::<u64>() == f as u64 - theta(j)
    })
}

// 4. Closed forms and the standard cyclotomic number relations.
fn c4() -> (bool, String) {
    let qs = arith::odd_prime_powers(3, 2000);
    let bad: Vec<String> = qs
        .par_iter()
        .flat_map_iter(|&q| {
            let field = gf::field_of_order(q).unwrap();
            [2usize, 3, 4]
                .into_iter()
                .filter(move |&e| (q - 1) % e as u64 == 0)
                .filter_map(move |e| {
                    let cyc = cyc_classes(&field, e).unwrap();
                    let direct = cyc.matrix_direct();
                    match cyc.resolve_closed() {
                        Ok(c) if c.matrix == direct && cyclotomic_relations(&direct, e, cyc.f()) => None,
                        Ok(_) => Some(format!("q={q} e={e}")),
                        Err(err) => Some(format!("q={q} e={e}: {err}")),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    (bad.is_empty(), if bad.is_empty() { format!("{} fields", qs.len()) } else { bad.join("; ") })
}

// 5. Summary-table scan.
fn c5() -> (bool, String) {
    let qs = arith::odd_prime_powers(3, 2000);
    let results: Vec<(SummaryRow, u64, bool, bool, bool)> = qs
        .par_iter()
        .flat_map_iter(|&q| {
            SummaryRow::ALL
                .into_iter()
                .filter(move |r| (q - 1) % r.order() as u64 == 0)
                .map(move |r| (r, q, r.scan(q).unwrap(), r.condition(q), r.literal_condition(q)))
                .collect::<Vec<_>>()
        })
        .collect();
    let mismatch: Vec<String> = results
        .iter()
        .filter(|(_, _, scan, cond, _)| scan != cond)
        .map(|(r, q, scan, _, _)| format!("{} q={q} scan={scan}", r.label()))
        .collect();
    let literal: Vec<String> = results
        .iter()
        .filter(|(_, _, scan, _, lit)| scan != lit)
        .map(|(r, q, ..)| format!("{} q={q}", r.label()))
        .collect();
    // Every mismatch should be the quartic pair row at an even power of a prime p ≡ 3 (mod 4).
    let p_sq_3mod4 = |q: u64| {
        let r = arith::isqrt(q);
        r * r == q && (3..=r).find(|p| r % p == 0).is_some_and(|p| p % 4 == 3 && arith::is_prime_power(r))
    };
    let only_semiprimitive = results
        .iter()
        .filter(|(_, _, scan, cond, _)| scan != cond)
        .all(|(r, q, scan, ..)| *r == SummaryRow::C4Pair && *scan && p_sq_3mod4(*q));
    let hits = |row: SummaryRow| -> Vec<u64> {
        results.iter().filter(|(r, _, s, ..)| *r == row && *s).map(|x| x.1).collect()
    };
    let cubic_ok = hits(SummaryRow::C3) == [7, 19, 25] && hits(SummaryRow::C3Zero) == [13, 37];
    let ok = mismatch.is_empty() && cubic_ok;
    let detail = format!(
        "{} (row, q) pairs; cubic {:?} / {:?}; mismatches {:?} (all quartic pair ADS at even powers of p ≡ 3 mod 4: {only_semiprimitive}); \
         {} further differences under the literal reading",
        results.len(),
        hits(SummaryRow::C3),
        hits(SummaryRow::C3Zero),
        mismatch,
        literal.len()
    );
    (ok, detail)
}

fn ph_orders(max: u64) -> Vec<u64> {
    let mut ls: BTreeSet<u64> = (3..=max).filter(|&p| p % 4 == 3 && arith::is_prime(p)).collect();
    ls.extend((2..=20u32).map(|t| (1u64 << t) - 1).filter(|&l| l <= max));
    ls.extend((3..=max).filter(|&p| arith::is_prime(p) && arith::is_prime(p + 2) && p * (p + 2) <= max).map(|p| p * (p + 2)));
    ls.into_iter().collect()
}

type Job = Box<dyn Fn() -> Result<(ConstructedSet, Option<Params>), Error> + Send + Sync>;

// 6. Catalog self-verification.
fn c6() -> (bool, String) {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    let mut push = |name: String, job: Job| jobs.push((name, job));
    for q in arith::odd_prime_powers(3, 5000) {
        push(format!("paley_qr {q}"), Box::new(move || {
            let want = if q % 4 == 3 {
                Params::DS { v: q, k: (q - 1) / 2, lambda: (q - 3) / 4 }
            } else {
                Params::ADS { v: q, k: (q - 1) / 2, lambda: (q - 5) / 4, t: (q - 1) / 2 }
            };
            Ok((constructions::paley_qr(q)?, Some(want)))
        }));
        for fam in CycFamily::ALL {
            let indices = if matches!(fam, CycFamily::Quartic | CycFamily::QuarticPair | CycFamily::Cubic | CycFamily::CubicZero) {
                if fam == CycFamily::Cubic || fam == CycFamily::CubicZero { 0..3 } else { 0..4 }
            } else {
                0..1
            };
            for i in indices {
                push(format!("{} q={q} i={i}", fam.id()), Box::new(move || Ok((constructions::cyclotomic_ads(q, fam, i)?, None))));
            }
        }
        if q <= 200 {
            push(format!("gmw_like {q}"), Box::new(move || Ok((constructions::gmw_like_support(q)?, None))));
        }
        if q % 8 == 5 && 2 * q <= 5000 {
            for with_zero in [false, true] {
                for (i, j, l) in constructions::dhm_triples(q, with_zero).unwrap() {
                    push(format!("dhm q={q} ({i},{j},{l}) zero={with_zero}"), Box::new(move || {
                        let want = if with_zero {
                            Params::ADS { v: 2 * q, k: q, lambda: (q - 1) / 2, t: (3 * q - 1) / 2 }
                        } else {
                            Params::ADS { v: 2 * q, k: q - 1, lambda: (q - 3) / 2, t: 3 * (q - 1) / 2 }
                        };
                        Ok((constructions::dhm_quartic(q, i, j, l, with_zero)?, Some(want)))
                    }));
                }
            }
        }
        if q % 4 == 3 && 4 * q <= 5000 {
            push(format!("zlz_z4q {q}"), Box::new(move || {
                Ok((constructions::zlz_z4q(q)?, Some(Params::ADS { v: 4 * q, k: 2 * q + 1, lambda: q, t: q - 1 })))
            }));
        }
        for r in [q, q + 2] {
            if r * q <= 5000 && arith::is_odd_prime_power(r) {
                push(format!("zlz_pq_squares {q},{r}"), Box::new(move || Ok((constructions::zlz_pq_squares(q, r, false)?, None))));
                if r == q + 2 {
                    push(format!("zlz_pq_squares {q},{r} row"), Box::new(move || {
                        let l = q * r;
                        let want = Params::DS { v: l, k: (l - 1) / 2, lambda: (l - 3) / 4 };
                        Ok((constructions::zlz_pq_squares(q, r, true)?, Some(want)))
                    }));
                }
            }
        }
    }
    for q in [3u64, 5, 7] {
        let e = (q + 1) as usize;
        for mask in 1u32..(1 << e) {
            let idx: Vec<usize> = (0..e).filter(|&i| mask & (1 << i) != 0).collect();
            if idx.len() as u64 * 2 != q + 1 && idx.len() as u64 * 2 != q - 1 {
                continue;
            }
            push(format!("ck_pds q={q} {idx:?}"), Box::new(move || Ok((constructions::ck_pds(q, &idx)?, None))));
        }
    }
    for (p, m) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1), (23, 1)] {
        for s in constructions::admissible_exponents(p, m) {
            let q = p.pow(m);
            push(format!("pn_graph {p}^{m} s={s}"), Box::new(move || {
                Ok((constructions::pn_graph_ads(p, m, s)?, Some(Params::ADS { v: q * q, k: q, lambda: 0, t: q - 1 })))
            }));
        }
    }
    let ph = |l: u64| Params::DS { v: l, k: (l - 1) / 2, lambda: (l - 3) / 4 };
    for p in (3..=5000u64).filter(|&p| p % 4 == 3 && arith::is_prime(p)) {
        push(format!("ph_qr {p}"), Box::new(move || Ok((constructions::paley_hadamard_ds(HadamardKind::Qr(p))?, Some(ph(p))))));
    }
    for t in 2..=12u32 {
        let l = (1u64 << t) - 1;
        push(format!("ph_singer {t}"), Box::new(move || Ok((constructions::paley_hadamard_ds(HadamardKind::Singer(t))?, Some(ph(l))))));
    }
    for p in (3..=70u64).filter(|&p| arith::is_prime(p) && arith::is_prime(p + 2) && p * (p + 2) <= 5000) {
        push(format!("ph_twin_prime {p}"), Box::new(move || {
            Ok((constructions::paley_hadamard_ds(HadamardKind::TwinPrime(p))?, Some(ph(p * (p + 2)))))
        }));
    }
    for s in 1..=35u64 {
        let p = 4 * s * s + 27;
        if p <= 5000 && arith::is_prime(p) {
            push(format!("ph_hall_sextic {p}"), Box::new(move || {
                Ok((constructions::paley_hadamard_ds(HadamardKind::HallSextic(p))?, Some(ph(p))))
            }));
        }
    }
    for l in ph_orders(1250) {
        for i in 0..4u64 {
            push(format!("cor55 l={l} i={i}"), Box::new(move || {
                let d1 = constructions::default_paley_hadamard(l)?.set;
                let want = Params::ADS { v: 4 * l, k: 2 * l - 1, lambda: l - 2, t: l - 1 };
                Ok((constructions::cor55(&d1, l, i)?, Some(want)))
            }));
        }
        let deltas: Vec<u64> = if l <= 31 { (0..l).collect() } else { vec![0] };
        push(format!("tang_ding l={l} A=B"), Box::new(move || {
            let b = constructions::default_paley_hadamard(l)?.set;
            let want = Params::ADS { v: 4 * l, k: 2 * l - 1, lambda: l - 2, t: l - 1 };
            Ok((constructions::tang_ding(&z(l as usize), &b, &b)?, Some(want)))
        }));
        for delta in deltas {
            push(format!("tang_ding l={l} A=B*-{delta}"), Box::new(move || {
                let b = constructions::default_paley_hadamard(l)?.set;
                let a: Vec<Elem> = (0..l)
                    .filter(|x| !b.contains(&Elem(*x as usize)))
                    .map(|x| Elem(((x + l - delta) % l) as usize))
                    .collect();
                let want = Params::ADS { v: 4 * l, k: 2 * l + 1, lambda: l, t: l - 1 };
                Ok((constructions::tang_ding(&z(l as usize), &a, &b)?, Some(want)))
            }));
        }
    }
    for q in [3u64, 7, 19] {
        push(format!("dpw_skew {q}"), Box::new(move || {
            let n = q * (q + 4);
            Ok((constructions::dpw_skew(q)?, Some(Params::ADS { v: n, k: (n - 3) / 2, lambda: (n - 9) / 4, t: (n - 5) / 2 })))
        }));
    }
    let outcomes: Vec<(String, Result<Result<(), String>, Error>)> = jobs
        .par_iter()
        .map(|(name, job)| {
            let r = job().map(|(c, want)| check_built(&c, want.as_ref()));
            (name.clone(), r)
        })
        .collect();
    let mut built: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut skipped = 0;
    for (name, r) in outcomes {
        match r {
            Ok(Ok(())) => *built.entry(name.split(' ').next().unwrap().to_string()).or_default() += 1,
            Ok(Err(msg)) => bad.push(msg),
            Err(Error::Precondition { .. }) => skipped += 1,
            Err(err) => bad.push(format!("{name}: {err}")),
        }
    }
    let must = [
        "paley_qr", "quartic", "quartic_zero", "quartic_pair", "octic_zero", "cubic", "cubic_zero", "ck_pds",
        "gmw_like", "pn_graph", "ph_qr", "ph_singer", "ph_twin_prime", "ph_hall_sextic", "cor55", "dhm",
        "zlz_z4q", "zlz_pq_squares", "tang_ding", "dpw_skew",
    ];
    let missing: Vec<&str> = must.iter().copied().filter(|f| !built.contains_key(*f)).collect();
    let octic73 = constructions::cyclotomic_ads(73, CycFamily::OcticZero, 0)
        .map(|c| c.claims == vec![Params::ADS { v: 73, k: 10, lambda: 1, t: 54 }])
        .unwrap_or(false);
    let ok = bad.is_empty() && missing.is_empty() && octic73;
    let detail = format!(
        "built {built:?}; {skipped} parameter sets outside preconditions; octic_zero(73) {octic73}; errors {bad:?}; families never built {missing:?}"
    );
    (ok, detail)
}

// 7. Interleaved sequences.
fn c7() -> (bool, String) {
    let mut seeds: Vec<(String, Vec<u64>, u64)> = Vec::new();
    for p in (3..=127u64).filter(|&p| p % 4 == 3 && arith::is_prime(p)) {
        let c = constructions::paley_hadamard_ds(HadamardKind::Qr(p)).unwrap();
        seeds.push((format!("legendre {p}"), c.set.iter().map(|e| e.0 as u64).collect(), p));
    }
    for t in 2..=7u32 {
        let s = sequences::mseq(t).unwrap();
        seeds.push((format!("mseq {t}"), sequences::support(&s), s.period() as u64));
    }
    for kind in [HadamardKind::TwinPrime(3), HadamardKind::TwinPrime(5), HadamardKind::HallSextic(31)] {
        let c = constructions::paley_hadamard_ds(kind).unwrap();
        let l = c.group.order() as u64;
        seeds.push((kind.to_string(), c.set.iter().map(|e| e.0 as u64).collect(), l));
    }
    struct Tally {
        runs: usize,
        printed_spectrum: usize,
        swapped_spectrum: usize,
        final_params: usize,
        other_params: BTreeMap<String, usize>,
        errors: Vec<String>,
    }
    let results: Vec<(String, Vec<(bool, bool, Option<Params>, Option<String>)>)> = seeds
        .par_iter()
        .map(|(name, c, l)| {
            let l = *l;
            let seed = sequences::char_seq(c, l as usize).unwrap();
            let runs = (0..l)
                .map(|delta| {
                    let u = match sequences::interleave(&seed, delta as usize) {
                        Ok(u) => u,
                        Err(e) => return (false, false, None, Some(format!("{name} δ={delta}: {e}"))),
                    };
                    let sp = sequences::autocorr_spectrum(&u);
                    let printed: BTreeMap<i64, usize> = [(-4, 3 * l as usize), (0, l as usize - 1)].into_iter().collect();
                    let swapped: BTreeMap<i64, usize> = [(-4, l as usize - 1), (0, 3 * l as usize)].into_iter().collect();
                    let peak_ok = sp.values[0] == 4 * l as i64;
                    let d: Vec<Elem> = sequences::support(&u).into_iter().map(|x| Elem(x as usize)).collect();
                    let g = z(4 * l as usize);
                    let ads = diffcore::classify_basic(&g, &d).unwrap().ads().map(|v| v.params());
                    (peak_ok && sp.off_peak == printed, peak_ok && sp.off_peak == swapped, ads, None)
                })
                .collect();
            (name.clone(), runs)
        })
        .collect();
    let mut tally = Tally {
        runs: 0,
        printed_spectrum: 0,
        swapped_spectrum: 0,
        final_params: 0,
        other_params: BTreeMap::new(),
        errors: Vec::new(),
    };
    let mut per_seed_final = Vec::new();
    for (name, runs) in &results {
        let l = seeds.iter().find(|s| &s.0 == name).unwrap().2;
        let want = Params::ADS { v: 4 * l, k: 2 * l - 1, lambda: l - 2, t: l - 1 };
        let mut all_final = true;
        for (printed, swapped, ads, err) in runs {
            tally.runs += 1;
            tally.printed_spectrum += usize::from(*printed);
            tally.swapped_spectrum += usize::from(*swapped);
            if let Some(e) = err {
                tally.errors.push(e.clone());
            }
            if ads.as_ref() == Some(&want) {
                tally.final_params += 1;
            } else {
                all_final = false;
                let key = ads.as_ref().map_or("none".to_string(), |p| {
                    if let Params::ADS { k, .. } = p {
                        if *k == 2 * l + 1 { "(4l,2l+1,l,l-1)".into() } else { p.to_string() }
                    } else {
                        p.to_string()
                    }
                });
                *tally.other_params.entry(key).or_default() += 1;
            }
        }
        if all_final {
            per_seed_final.push(name.clone());
        }
    }
    let ok = tally.errors.is_empty() && tally.printed_spectrum == tally.runs && tally.final_params == tally.runs;
    let detail = format!(
        "{} (seed, δ) runs; printed spectrum {{-4 x 3l, 0 x (l-1)}} in {}; swapped {{-4 x (l-1), 0 x 3l}} in {}; \
         support ADS(4l,2l-1,l-2,l-1) in {} (seeds: {:?}); other supports {:?}; errors {:?}",
        tally.runs,
        tally.printed_spectrum,
        tally.swapped_spectrum,
        tally.final_params,
        per_seed_final,
        tally.other_params,
        tally.errors
    );
    (ok, detail)
}

// 8. No false rule-outs on searched ADS.
fn c8() -> (bool, String) {
    let pairs: Vec<(usize, usize)> = (2..=28).flat_map(|v| (1..=7.min(v)).map(move |k| (v, k))).collect();
    let results: Vec<(usize, Vec<String>)> = pairs
        .par_iter()
        .map(|&(v, k)| {
            let opts = SearchOptions {
                budget: u128::MAX,
                ..SearchOptions::default()
            };
            let r = constructions::brute_search(&z(v), k, &opts).unwrap();
            let ws: Vec<u64> = arith::divisors(v as u64).into_iter().filter(|&w| (2..=6).contains(&w)).collect();
            let mut found = 0;
            let mut bad = Vec::new();
            let mut seen = BTreeSet::new();
            for c in &r.sets {
                for p in &c.claims {
                    if let &Params::ADS { v, k, lambda, t } = p {
                        found += 1;
                        if !seen.insert((v, k, lambda, t)) {
                            continue;
                        }
                        let ps = ParamSet::new(v, k, lambda, t).unwrap();
                        let rep = filters::run_all(&ps, Some(&ws), &HallOptions::default());
                        if rep.ruled_out {
                            bad.push(format!("{ps} from {:?}", c.set));
                        }
                    }
                }
            }
            (found, bad)
        })
        .collect();
    let found: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    (bad.is_empty(), format!("{found} ADS classes checked; false rule-outs {bad:?}"))
}

// 9. Union coefficients against realized spectra.
fn c9() -> (bool, String) {
    let qs = arith::odd_prime_powers(3, 200);
    let checked: Vec<Result<usize, String>> = qs
        .par_iter()
        .map(|&q| {
            let field = gf::field_of_order(q).unwrap();
            let g = gf::as_group(&field);
            let mut n = 0;
            for e in [2usize, 3, 4].into_iter().filter(|&e| (q - 1) % e as u64 == 0) {
                let cyc = cyc_classes(&field, e).unwrap();
                let mut unions: Vec<Vec<usize>> = (0..e).map(|i| vec![i]).collect();
                for i in 0..e {
                    for j in i + 1..e {
                        unions.push(vec![i, j]);
                    }
                }
                for idx in &unions {
                    for with_zero in [false, true] {
                        let coeffs = cyc.union_diff_coeffs(idx, with_zero).map_err(|e| e.to_string())?;
                        let set: Vec<Elem> = cyc.union_set(idx, with_zero).into_iter().map(|x| Elem(x as usize)).collect();
                        let counts = naive_counts(&g, &set);
                        let ok = (1..q).all(|x| {
                            let c = cyc.class_of(x).unwrap();
                            counts[x as usize] == coeffs.classes[c]
                        }) && coeffs.identity == set.len() as u64;
                        if !ok {
                            return Err(format!("q={q} e={e} I={idx:?} zero={with_zero}"));
                        }
                        n += 1;
                    }
                }
            }
            Ok(n)
        })
        .collect();
    let bad: Vec<String> = checked.iter().filter_map(|r| r.clone().err()).collect();
    let total: usize = checked.iter().filter_map(|r| r.as_ref().ok()).sum();
    (bad.is_empty(), format!("{total} unions; mismatches {bad:?}"))
}

// 10. Stable behaviour on the documented non-reproductions.
fn c10() -> (bool, String) {
    let p = ParamSet::new(80, 13, 1, 2).unwrap();
    let witness = filters::hall_witness(&p, 2, &HallOptions::default());
    let verdict = filters::hall_mod_w_test(&p, 2, &HallOptions::default()).unwrap();
    let hall_ok = verdict.is_pass()
        && witness.as_ref().is_some_and(|w| w.b == vec![8, 5] && w.c == vec![2, 0]);
    let qs = arith::odd_prime_powers(3, 5000);
    let octic: Vec<String> = qs
        .iter()
        .filter_map(|&q| match constructions::cyclotomic_ads(q, CycFamily::Octic, 0) {
            Err(Error::Precondition { .. }) => None,
            Ok(_) => Some(format!("q={q} built")),
            Err(e) => Some(format!("q={q}: {e}")),
        })
        .collect();
    let ok = hall_ok && octic.is_empty();
    (ok, format!("(80,13,1,2) w=2 witness {witness:?}; octic family over {} prime powers: {octic:?}", qs.len()))
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &str, Duration, fn() -> (bool, String))> = vec![
        (1, "worked examples", Duration::from_secs(1), c1),
        (2, "boxed candidate tables", Duration::from_secs(10), c2),
        (3, "binary character fixtures", Duration::from_secs(60), c3),
        (4, "cyclotomic closed forms and relations", Duration::from_secs(60), c4),
        (5, "summary table scan", Duration::from_secs(300), c5),
        (6, "construction catalog", Duration::from_secs(300), c6),
        (7, "interleaved sequences", Duration::from_secs(120), c7),
        (8, "filter soundness on searched ADS", Duration::from_secs(600), c8),
        (9, "union coefficients vs spectra", Duration::from_secs(60), c9),
        (10, "documented non-reproductions are stable", Duration::from_secs(60), c10),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = f();
        let took = start.elapsed();
        let pass = ok && took <= limit;
        say(&format!(
            "{} criterion {n} ({name}) [{:.2}s / limit {}s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        ));
        if !pass {
            failed.push(n);
        }
    }
    let unexpected: Vec<u32> = failed.iter().copied().filter(|n| !KNOWN_FAILURES.contains(n)).collect();
    say(&format!("acceptance: failed {failed:?}, documented {KNOWN_FAILURES:?}"));
    assert!(unexpected.is_empty(), "undocumented acceptance failures: {unexpected:?}");
}
