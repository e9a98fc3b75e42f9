//! Necessary conditions for a `(v, k, lambda, t)`-ADS in `Z_v`.
//!
//! Each test either passes (possibly with a witness), rules the parameters
//! out with the violated relation spelled out, or does not apply.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ParamSet {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub t: u64,
}

impl ParamSet {
    pub fn new(v: u64, k: u64, lambda: u64, t: u64) -> Result<Self> {
        if v == 0 || k > v || lambda + 1 > k || t > v.saturating_sub(1) {
            return Err(Error::InvalidArgument(format!(
                "inconsistent parameters ({v},{k},{lambda},{t})"
            )));
        }
        Ok(ParamSet { v, k, lambda, t })
    }

    /// `(v, v-k, v-2k+lambda, t)`, or `None` if the complement would have a
    /// negative lambda.
    pub fn complement(&self) -> Option<ParamSet> {
        let lambda = (self.v + self.lambda).checked_sub(2 * self.k)?;
        Some(ParamSet {
            v: self.v,
            k: self.v - self.k,
            lambda,
            t: self.t,
        })
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TestVerdict {
    Pass {
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
    },
    RuledOut {
        witness: String,
    },
    NotApplicable {
        reason: String,
    },
}

impl TestVerdict {
    pub fn is_ruled_out(&self) -> bool {
        matches!(self, TestVerdict::RuledOut { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, TestVerdict::Pass { .. })
    }

    fn pass() -> Self {
        TestVerdict::Pass { witness: None }
    }

    fn pass_with(w: impl Into<String>) -> Self {
        TestVerdict::Pass {
            witness: Some(w.into()),
        }
    }

    fn out(w: impl Into<String>) -> Self {
        TestVerdict::RuledOut { witness: w.into() }
    }

    fn na(r: impl Into<String>) -> Self {
        TestVerdict::NotApplicable { reason: r.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub params: ParamSet,
    /// Parameters actually tested after normalizing `k <= v/2`.
    pub tested: ParamSet,
    pub tests: BTreeMap<String, TestVerdict>,
    pub ruled_out: bool,
}

/// `k(k-1) = lambda t + (lambda+1)(v-1-t)`.
pub fn counting_test(p: &ParamSet) -> TestVerdict {
    let lhs = p.k as i128 * (p.k as i128 - 1);
    let rhs = p.lambda as i128 * p.t as i128
        + (p.lambda as i128 + 1) * (p.v as i128 - 1 - p.t as i128);
    if lhs == rhs {
        TestVerdict::pass()
    } else {
        TestVerdict::out(format!(
            "k(k-1) = {lhs} but lambda*t + (lambda+1)(v-1-t) = {rhs}"
        ))
    }
}

/// Parity obstruction for `t = 1` and odd `k`.
pub fn parity_t1_test(p: &ParamSet) -> TestVerdict {
    if p.t != 1 || p.k % 2 == 0 {
        return TestVerdict::na("needs t = 1 and k odd");
    }
    parity_rule(p, 2, 0)
}

/// Parity obstruction for `t = v - 2` and odd `k`.
pub fn parity_tv2_test(p: &ParamSet) -> TestVerdict {
    if p.v < 2 || p.t != p.v - 2 || p.k % 2 == 0 {
        return TestVerdict::na("needs t = v-2 and k odd");
    }
    parity_rule(p, 1, 3)
}

/// Rules out `v ≡ 4 (mod 8)`, `v ≡ 2 (mod 8)` with `lambda ≡ l2 (mod 4)` and
/// `v ≡ 6 (mod 8)` with `lambda ≡ l6 (mod 4)`.
fn parity_rule(p: &ParamSet, l2: u64, l6: u64) -> TestVerdict {
    let which = if p.t == 1 { "t = 1" } else { "t = v-2" };
    match (p.v % 8, p.lambda % 4) {
        (4, _) => TestVerdict::out(format!("{which}, k odd: v ≡ 4 (mod 8)")),
        (2, l) if l == l2 => TestVerdict::out(format!(
            "{which}, k odd: v ≡ 2 (mod 8) and lambda ≡ {l2} (mod 4)"
        )),
        (6, l) if l == l6 => TestVerdict::out(format!(
            "{which}, k odd: v ≡ 6 (mod 8) and lambda ≡ {l6} (mod 4)"
        )),
        _ => TestVerdict::pass(),
    }
}

#[derive(Clone, Debug)]
pub struct HallOptions {
    /// Also require `c_j = c_{w-j}`.
    pub symmetric: bool,
    /// Maximum number of search nodes before giving up as not applicable.
    pub node_budget: u64,
}

impl Default for HallOptions {
    fn default() -> Self {
        HallOptions {
            symmetric: false,
            node_budget: 20_000_000,
        }
    }
}

/// A solution of the mod-`w` system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallWitness {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

/// Reduction of the group-ring identity modulo `X^w - 1`.
///
/// Searches nonnegative `b` with `Σ b_i = k` (up to rotation, `b_0` maximal),
/// derives `c_0 = k-(lambda+1)+(lambda+1)v/w - Σ b_i^2` and
/// `c_j = (lambda+1)v/w - Σ_i b_i b_{i-j}`, and accepts when every `c_j >= 0`
/// and `Σ c_j = t`.
pub fn hall_mod_w_test(p: &ParamSet, w: u64, opts: &HallOptions) -> Result<TestVerdict> {
    if w == 0 || p.v % w != 0 {
        return Err(Error::NotDivisorOfV { w, v: p.v });
    }
    if w < 2 {
        return Ok(TestVerdict::na("needs w >= 2"));
    }
    match hall_search(p, w, opts) {
        HallOutcome::Found(wit) => Ok(TestVerdict::pass_with(format!(
            "w={w}: c={:?}, b={:?}",
            wit.c, wit.b
        ))),
        HallOutcome::None => Ok(TestVerdict::out(format!(
            "w={w}: no nonnegative integer solution (b_0..b_{}) with c_j >= 0, Σc_j = {}{}",
            w - 1,
            p.t,
            if opts.symmetric { ", c_j = c_(w-j)" } else { "" }
        ))),
        HallOutcome::Exhausted => Ok(TestVerdict::na(format!(
            "w={w}: search budget of {} nodes exhausted",
            opts.node_budget
        ))),
    }
}

enum HallOutcome {
    Found(HallWitness),
    None,
    Exhausted,
}

/// First witness in search order, or `None`.
pub fn hall_witness(p: &ParamSet, w: u64, opts: &HallOptions) -> Option<HallWitness> {
    match hall_search(p, w, opts) {
        HallOutcome::Found(w) => Some(w),
        _ => None,
    }
}

struct HallSearch<'a> {
    w: usize,
    k: i64,
    lm: i64,
    q: i64,
    t: i64,
    opts: &'a HallOptions,
    nodes: u64,
    b: Vec<i64>,
}

fn hall_search(p: &ParamSet, w: u64, opts: &HallOptions) -> HallOutcome {
    let k = p.k as i64;
    let lm = (p.lambda as i64 + 1) * (p.v / w) as i64;
    let mut s = HallSearch {
        w: w as usize,
        k,
        lm,
        q: k - (p.lambda as i64 + 1) + lm,
        t: p.t as i64,
        opts,
        nodes: 0,
        b: Vec::with_capacity(w as usize),
    };
    for b0 in (0..=k).rev() {
        // b_0 is the largest part, so w * b_0 must reach k
        if b0 * (w as i64) < k {
            break;
        }
        s.b.clear();
        s.b.push(b0);
        match s.dfs(k - b0, b0 * b0, b0) {
            Some(Ok(wit)) => return HallOutcome::Found(wit),
            Some(Err(())) => return HallOutcome::Exhausted,
            None => {}
        }
    }
    HallOutcome::None
}

impl HallSearch<'_> {
    /// `None` when the subtree has no solution, `Some(Err)` on budget exhaustion.
    fn dfs(&mut self, rem: i64, sq: i64, cap: i64) -> Option<std::result::Result<HallWitness, ()>> {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            return Some(Err(()));
        }
        let slots = (self.w - self.b.len()) as i64;
        if slots == 0 {
            return if rem == 0 { self.check().map(Ok) } else { None };
        }
        if rem > slots * cap {
            return None;
        }
        // smallest reachable sum of squares: spread rem evenly
        let (base, extra) = (rem / slots, rem % slots);
        let min_sq = sq + (slots - extra) * base * base + extra * (base + 1) * (base + 1);
        if min_sq > self.q {
            return None;
        }
        // largest reachable: fill greedily with cap-sized parts
        let full = rem / cap.max(1);
        let max_sq = if cap == 0 {
            sq
        } else {
            sq + full * cap * cap + (rem - full * cap).pow(2)
        };
        if max_sq < self.q - self.t {
            return None;
        }
        for x in (0..=rem.min(cap)).rev() {
            self.b.push(x);
            let r = self.dfs(rem - x, sq + x * x, cap);
            self.b.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }

    fn check(&self) -> Option<HallWitness> {
        let w = self.w;
        let mut c = Vec::with_capacity(w);
        for j in 0..w {
            let a: i64 = (0..w).map(|i| self.b[i] * self.b[(i + w - j) % w]).sum();
            let cj = if j == 0 { self.q - a } else { self.lm - a };
            if cj < 0 {
                return None;
            }
            c.push(cj);
        }
        if c.iter().sum::<i64>() != self.t {
            return None;
        }
        if self.opts.symmetric && (1..w).any(|j| c[j] != c[w - j]) {
            return None;
        }
        debug_assert_eq!(self.b.iter().sum::<i64>(), self.k);
        Some(HallWitness {
            b: self.b.iter().map(|&x| x as u64).collect(),
            c: c.into_iter().map(|x| x as u64).collect(),
        })
    }
}

/// Candidate values whose square-ness is forced by the quadratic character.
pub fn binary_char_candidates(p: &ParamSet) -> Option<Vec<i64>> {
    if p.v % 2 != 0 {
        return None;
    }
    let base = p.k as i64 - p.lambda as i64;
    let t = p.t as i64;
    Some(if t % 2 == 0 {
        (0..=t / 2).map(|l| base - (t + 1 - 4 * l)).collect()
    } else if p.v % 4 == 0 {
        (0..=(t - 1) / 2).map(|l| base - (t + 1 - 4 * l)).collect()
    } else {
        (0..=(t - 1) / 2).map(|l| base - (t - 1 - 4 * l)).collect()
    })
}

pub fn binary_char_test(p: &ParamSet) -> TestVerdict {
    let Some(cands) = binary_char_candidates(p) else {
        return TestVerdict::na("needs v even");
    };
    let km = p.k as i64 - p.lambda as i64;
    if p.t == 1 {
        if p.v % 4 != 0 && !arith::is_square(km) {
            return TestVerdict::out(format!("t = 1, 4 ∤ v: k-lambda = {km} is not a square"));
        }
        if p.v % 4 == 0 && !arith::is_square(km - 2) {
            return TestVerdict::out(format!(
                "t = 1, 4 | v: k-lambda-2 = {} is not a square",
                km - 2
            ));
        }
        if p.v % 8 == 4 && !arith::is_sum_of_two_squares(km) {
            return TestVerdict::out(format!(
                "t = 1, v ≡ 4 (mod 8): k-lambda = {km} is not a sum of two squares"
            ));
        }
    }
    match cands.iter().find(|&&x| arith::is_square(x)) {
        Some(x) => TestVerdict::pass_with(format!("{x} is a square in {cands:?}")),
        None => TestVerdict::out(format!("no square in {cands:?}")),
    }
}

/// The two candidate sets forced by a character of order 3, each paired with
/// a label.
pub fn ternary_char_candidates(p: &ParamSet) -> Option<Vec<(&'static str, Vec<i64>)>> {
    if p.v % 3 != 0 {
        return None;
    }
    let (k, lambda, t, v) = (p.k as i64, p.lambda as i64, p.t as i64, p.v as i64);
    let first: Vec<i64> = (0..=t / 2).map(|l| k - (lambda + 1) - (t - 3 * l)).collect();
    let u = v - 1 - t;
    let second: Vec<i64> = (0..=u / 2).map(|l| k - lambda + (u - 3 * l)).collect();
    Some(vec![("t-side", first), ("(v-1-t)-side", second)])
}

pub fn ternary_char_tests(p: &ParamSet) -> TestVerdict {
    let Some(sets) = ternary_char_candidates(p) else {
        return TestVerdict::na("needs 3 | v");
    };
    let mut found = Vec::new();
    for (label, set) in &sets {
        match set.iter().find(|&&x| arith::is_loeschian(x)) {
            Some(x) => found.push(format!("{label}: {x} = x^2+xy+y^2")),
            None => {
                return TestVerdict::out(format!(
                    "{label}: no element of {set:?} has the form x^2+xy+y^2"
                ))
            }
        }
    }
    TestVerdict::pass_with(found.join("; "))
}

/// Divisors of `v` in `[2, 12]`.
pub fn default_w_list(v: u64) -> Vec<u64> {
    arith::divisors(v)
        .into_iter()
        .filter(|&w| (2..=12).contains(&w))
        .collect()
}

/// Runs every test, after replacing `k > v/2` by the complementary parameters.
pub fn run_all(p: &ParamSet, w_list: Option<&[u64]>, opts: &HallOptions) -> FeasibilityReport {
    let mut tests = BTreeMap::new();
    let tested = if 2 * p.k > p.v {
        match p.complement() {
            Some(c) => c,
            None => {
                tests.insert(
                    "counting".to_string(),
                    TestVerdict::out("complementary lambda v-2k+lambda is negative"),
                );
                return FeasibilityReport {
                    params: *p,
                    tested: *p,
                    tests,
                    ruled_out: true,
                };
            }
        }
    } else {
        *p
    };
    let q = &tested;
    tests.insert("counting".into(), counting_test(q));
    tests.insert("parity_t1".into(), parity_t1_test(q));
    tests.insert("parity_tv2".into(), parity_tv2_test(q));
    let ws = w_list.map(<[u64]>::to_vec).unwrap_or_else(|| default_w_list(q.v));
    for w in ws {
        let verdict = hall_mod_w_test(q, w, opts)
            .unwrap_or_else(|e| TestVerdict::na(e.to_string()));
        tests.insert(format!("hall_w{w}"), verdict);
    }
    tests.insert("binary_char".into(), binary_char_test(q));
    tests.insert("ternary_char".into(), ternary_char_tests(q));
    let ruled_out = tests.values().any(TestVerdict::is_ruled_out);
    FeasibilityReport {
        params: *p,
        tested: *q,
        tests,
        ruled_out,
    }
}

/// Ma's restriction on PDS with `mu = lambda + 1`: only the Paley parameters
/// or `(243,22,1,2)`, up to complementation in `G \ {0}`.
pub fn paley_pds_param_check(v: u64, k: u64, lambda: u64, mu: u64) -> Result<TestVerdict> {
    if mu != lambda + 1 {
        return Err(Error::InvalidArgument(format!(
            "needs mu = lambda + 1, got lambda = {lambda}, mu = {mu}"
        )));
    }
    let paley = v % 4 == 1 && 2 * k == v - 1 && 4 * lambda + 5 == v && 4 * mu + 1 == v;
    let sporadic = |(a, b, c, d): (u64, u64, u64, u64)| (a, b, c, d) == (243, 22, 1, 2);
    let tuple = (v, k, lambda, mu);
    // complement in G \ {0}: (v, v-k-1, v-2k+mu-2, v-2k+lambda)
    let comp = (v + mu)
        .checked_sub(2 * k + 2)
        .zip((v + lambda).checked_sub(2 * k))
        .map(|(l2, m2)| (v, v - k - 1, l2, m2));
    if paley || sporadic(tuple) || comp.is_some_and(sporadic) {
        Ok(TestVerdict::pass())
    } else {
        Ok(TestVerdict::out(format!(
            "({v},{k},{lambda},{mu}) is neither (v,(v-1)/2,(v-5)/4,(v-1)/4) nor (243,22,1,2) up to complementation"
        )))
    }
}

/// Parameter sets `(v,k,lambda,1)`, `v <= vmax`, odd `k <= v/2`, passing the
/// counting test.
pub fn t1_candidates(vmax: u64) -> Vec<ParamSet> {
    candidates(vmax, |v| (v >= 2).then(|| 1))
}

/// Same for `t = v - 2`.
pub fn tv2_candidates(vmax: u64) -> Vec<ParamSet> {
    candidates(vmax, |v| (v >= 3).then(|| v - 2))
}

fn candidates(vmax: u64, t_of: impl Fn(u64) -> Option<u64>) -> Vec<ParamSet> {
    let mut out = Vec::new();
    for v in 2..=vmax {
        let Some(t) = t_of(v) else { continue };
        for k in (1..=v / 2).step_by(2) {
            for lambda in 0..k {
                let p = ParamSet { v, k, lambda, t };
                if counting_test(&p).is_pass() {
                    out.push(p);
                }
            }
        }
    }
    out
}
