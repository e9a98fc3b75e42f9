//! Generators for the known construction families. Every generator checks its
//! preconditions, builds the set, and re-verifies the claimed parameters with
//! [`diffcore`]; a mismatch is a hard error.
use serde::Serialize;

use crate::arith;
use crate::diffcore::{self, Params};
use crate::error::{Error, Result};
use crate::groups::{Elem, GroupCtx};

mod cyclotomic;
mod functions;
mod hadamard;
mod product;
mod search;
mod transfer;

pub use cyclotomic::{ck_pds, cyclotomic_ads, paley_qr, CycFamily, SummaryRow};
pub use functions::{admissible_exponent, admissible_exponents, gmw_like_support, pf_value, pn_graph_ads};
pub use hadamard::{paley_hadamard_ds, HadamardKind};
pub use product::{
    cor55, default_paley_hadamard, dhm_quartic, dhm_triples, dpw_skew, jungnickel_dds, tang_ding,
    zlz_pq_squares, zlz_z4q,
};
pub use search::{brute_search, budget_from_env, canonical_form, SearchOptions, SearchResult, DEFAULT_BUDGET};
pub use transfer::{ds_ads_transfer, Direction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub citation: String,
}

#[derive(Clone, Debug)]
pub struct ConstructedSet {
    pub group: GroupCtx,
    /// Sorted, duplicate free.
    pub set: Vec<Elem>,
    pub claims: Vec<Params>,
    pub verified: bool,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

/// Verifies `claims` against the classification of `set` and packages the result.
///
/// DDS claims are checked relative to the subgroup stored in the claim's
/// verdict, so callers with a DDS claim should use [`finish_dds`].
pub(crate) fn finish(
    family: &str,
    citation: &str,
    group: GroupCtx,
    set: Vec<Elem>,
    claims: Vec<Params>,
    notes: Vec<String>,
) -> Result<ConstructedSet> {
    let set = diffcore::normalize_set(&group, &set)?;
    let cls = diffcore::classify_basic(&group, &set)?;
    for claim in &claims {
        if !cls.has(claim) {
            return Err(mismatch(family, claim, &cls.params()));
        }
    }
    if claims.iter().any(|c| matches!(c, Params::ADS { .. })) {
        diffcore::complement(&group, &set)?;
        if group.is_cyclic() && group.order() > 2 {
            let v = group.order() as u64;
            let a = (2..v).find(|&a| arith::gcd(a, v) == 1).unwrap_or(1);
            let raw: Vec<u64> = set.iter().map(|e| e.0 as u64).collect();
            diffcore::affine_image(v, a, 1, &raw)?;
        }
    }
    Ok(ConstructedSet {
        group,
        set,
        claims,
        verified: true,
        provenance: Provenance {
            family: family.to_string(),
            citation: citation.to_string(),
        },
        notes,
    })
}

/// [`finish`] for a set claimed to be divisible relative to `subgroup`.
pub(crate) fn finish_dds(
    family: &str,
    citation: &str,
    group: GroupCtx,
    set: Vec<Elem>,
    subgroup: &[Elem],
    dds: Params,
    mut others: Vec<Params>,
    notes: Vec<String>,
) -> Result<ConstructedSet> {
    let found = diffcore::dds_classify(&group, subgroup, &set)?;
    match &found {
        Some(r) if r.params() == dds => {}
        _ => {
            let found: Vec<Params> = found.iter().map(|r| r.params()).collect();
            return Err(mismatch(family, &dds, &found));
        }
    }
    let mut out = finish(family, citation, group, set, others.clone(), notes)?;
    others.insert(0, dds);
    out.claims = others;
    Ok(out)
}

fn mismatch(family: &str, claim: &Params, found: &[Params]) -> Error {
    let found: Vec<String> = found.iter().map(|p| p.to_string()).collect();
    Error::Verification {
        family: family.to_string(),
        claimed: claim.to_string(),
        found: if found.is_empty() {
            "no structure".to_string()
        } else {
            found.join(", ")
        },
    }
}

pub(crate) fn to_elems(set: impl IntoIterator<Item = u64>) -> Vec<Elem> {
    set.into_iter().map(|x| Elem(x as usize)).collect()
}

/// Group element from components, for generators that build product sets.
pub(crate) fn pair(ctx: &GroupCtx, a: u64, b: u64) -> Elem {
    ctx.from_components(&[a as usize, b as usize])
        .expect("component in range")
}

/// Every family id understood by the CLI `construct` command.
pub const FAMILIES: &[&str] = &[
    "paley_qr",
    "quartic",
    "quartic_zero",
    "quartic_zero_neg",
    "quartic_pair",
    "octic",
    "dpw_union_sq",
    "octic_zero",
    "cubic",
    "cubic_zero",
    "ck_pds",
    "ds_minus_elem",
    "ads_plus_elem_to_ds",
    "ds_plus_elem",
    "ads_minus_elem_to_ds",
    "gmw_like",
    "pn_graph",
    "ph_qr",
    "ph_singer",
    "ph_twin_prime",
    "ph_hall_sextic",
    "jungnickel",
    "cor55",
    "dhm_quartic",
    "zlz_z4q",
    "zlz_pq_squares",
    "tang_ding",
    "dpw_skew",
];
