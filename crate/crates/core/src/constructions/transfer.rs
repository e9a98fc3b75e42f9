use std::fmt;
use std::str::FromStr;

use crate::diffcore::{self, Params};
use crate::error::{Error, Result};
use crate::groups::{Elem, GroupCtx};

use super::{finish, ConstructedSet};

/// Adding or removing one element to pass between a difference set and an
/// almost difference set in a group of order `v ≡ 1 (mod 4)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(v,(v+3)/4,(v+3)/16)`-DS minus `d` gives a `(v,(v-1)/4,(v-13)/16,(v-1)/2)`-ADS.
    DsMinusElem,
    /// `(v,(v-1)/4,(v-13)/16,(v-1)/2)`-ADS plus `d` gives a `(v,(v+3)/4,(v+3)/16)`-DS.
    AdsPlusElemToDs,
    /// `(v,(v-1)/4,(v-5)/16)`-DS plus `d` gives a `(v,(v+3)/4,(v-5)/16,(v-1)/2)`-ADS.
    DsPlusElem,
    /// `(v,(v+3)/4,(v-5)/16,(v-1)/2)`-ADS minus `d` gives a `(v,(v-1)/4,(v-5)/16)`-DS.
    AdsMinusElemToDs,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::DsMinusElem,
        Direction::AdsPlusElemToDs,
        Direction::DsPlusElem,
        Direction::AdsMinusElemToDs,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Direction::DsMinusElem => "ds_minus_elem",
            Direction::AdsPlusElemToDs => "ads_plus_elem_to_ds",
            Direction::DsPlusElem => "ds_plus_elem",
            Direction::AdsMinusElemToDs => "ads_minus_elem_to_ds",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Direction::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transfer direction `{s}`")))
    }
}

fn div_exact(n: u64, d: u64) -> Option<u64> {
    (n % d == 0).then_some(n / d)
}

/// `2d` is not a sum of two distinct members of `set`.
fn two_d_not_a_sum(ctx: &GroupCtx, set: &[Elem], d: Elem) -> bool {
    let two_d = ctx.add_idx(d.0, d.0);
    set.iter().enumerate().all(|(i, a)| {
        set[i + 1..]
            .iter()
            .all(|b| ctx.add_idx(a.0, b.0) != two_d)
    })
}

pub fn ds_ads_transfer(dir: Direction, ctx: &GroupCtx, set: &[Elem], d: Elem) -> Result<ConstructedSet> {
    let id = dir.id();
    let fail = |reason: &str| Error::precondition(id, reason);
    let set = diffcore::normalize_set(ctx, set)?;
    let d = ctx.check(d)?;
    let v = ctx.order() as u64;
    if v % 4 != 1 {
        return Err(fail("v is not 1 mod 4"));
    }
    let cls = diffcore::classify_basic(ctx, &set)?;
    let contains = set.binary_search(&d).is_ok();
    let template = |p: Option<Params>| -> Result<()> {
        match p {
            Some(p) if cls.has(&p) => Ok(()),
            Some(p) => Err(Error::precondition(id, format!("input is not a {p}"))),
            None => Err(fail("v does not admit the parameter template")),
        }
    };
    let (input, output) = match dir {
        Direction::DsMinusElem => (
            div_exact(v + 3, 16).map(|lambda| Params::DS { v, k: (v + 3) / 4, lambda }),
            v.checked_sub(13).and_then(|x| div_exact(x, 16)).map(|lambda| Params::ADS {
                v,
                k: (v - 1) / 4,
                lambda,
                t: (v - 1) / 2,
            }),
        ),
        Direction::AdsPlusElemToDs => (
            v.checked_sub(13).and_then(|x| div_exact(x, 16)).map(|lambda| Params::ADS {
                v,
                k: (v - 1) / 4,
                lambda,
                t: (v - 1) / 2,
            }),
            div_exact(v + 3, 16).map(|lambda| Params::DS { v, k: (v + 3) / 4, lambda }),
        ),
        Direction::DsPlusElem => (
            v.checked_sub(5).and_then(|x| div_exact(x, 16)).map(|lambda| Params::DS { v, k: (v - 1) / 4, lambda }),
            v.checked_sub(5).and_then(|x| div_exact(x, 16)).map(|lambda| Params::ADS {
                v,
                k: (v + 3) / 4,
                lambda,
                t: (v - 1) / 2,
            }),
        ),
        Direction::AdsMinusElemToDs => (
            v.checked_sub(5).and_then(|x| div_exact(x, 16)).map(|lambda| Params::ADS {
                v,
                k: (v + 3) / 4,
                lambda,
                t: (v - 1) / 2,
            }),
            v.checked_sub(5).and_then(|x| div_exact(x, 16)).map(|lambda| Params::DS { v, k: (v - 1) / 4, lambda }),
        ),
    };
    template(input)?;
    let output = output.ok_or_else(|| fail("v does not admit the parameter template"))?;
    let removing = matches!(dir, Direction::DsMinusElem | Direction::AdsMinusElemToDs);
    if removing != contains {
        return Err(fail(if removing { "d is not in D" } else { "d is already in D" }));
    }
    if !two_d_not_a_sum(ctx, &set, d) {
        return Err(fail("2d is a sum of two distinct elements of D"));
    }
    if matches!(dir, Direction::AdsPlusElemToDs | Direction::AdsMinusElemToDs) {
        let (h, _) = diffcore::lambda_sets(ctx, &set)?;
        let in_h = |x: usize| h.binary_search(&Elem(x)).is_ok();
        let ok = set.iter().filter(|&&x| x != d).all(|x| {
            let (a, b) = (ctx.sub_idx(d.0, x.0), ctx.sub_idx(x.0, d.0));
            if dir == Direction::AdsPlusElemToDs {
                in_h(a) && in_h(b)
            } else {
                !in_h(a) && !in_h(b) && a != 0
            }
        });
        if !ok {
            let reason = if dir == Direction::AdsPlusElemToDs {
                "some d - d_i or d_i - d lies outside H"
            } else {
                "some d - d_i or d_i - d lies in H ∪ {0}"
            };
            return Err(fail(reason));
        }
    }
    let new_set: Vec<Elem> = if removing {
        set.iter().copied().filter(|&x| x != d).collect()
    } else {
        set.iter().copied().chain(std::iter::once(d)).collect()
    };
    finish(
        id,
        "Arasu, Ding, Helleseth, Kumar, Martinsen",
        ctx.clone(),
        new_set,
        vec![output],
        vec![format!("d = {}", ctx.format_elem(d))],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: usize) -> GroupCtx {
        GroupCtx::cyclic(v).unwrap()
    }

    fn e(xs: &[usize]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn worked_examples() {
        let c = ds_ads_transfer(Direction::DsMinusElem, &z(13), &e(&[0, 1, 3, 9]), Elem(0)).unwrap();
        assert_eq!(c.set, e(&[1, 3, 9]));
        assert_eq!(c.claims, vec![Params::ADS { v: 13, k: 3, lambda: 0, t: 6 }]);
        let c = ds_ads_transfer(Direction::AdsPlusElemToDs, &z(13), &e(&[0, 4, 6]), Elem(1)).unwrap();
        assert_eq!(c.set, e(&[0, 1, 4, 6]));
        assert_eq!(c.claims, vec![Params::DS { v: 13, k: 4, lambda: 1 }]);
        let c = ds_ads_transfer(Direction::DsPlusElem, &z(21), &e(&[0, 1, 4, 14, 16]), Elem(3)).unwrap();
        assert_eq!(c.set, e(&[0, 1, 3, 4, 14, 16]));
        assert_eq!(c.claims, vec![Params::ADS { v: 21, k: 6, lambda: 1, t: 10 }]);
        let c =
            ds_ads_transfer(Direction::AdsMinusElemToDs, &z(21), &e(&[0, 1, 2, 5, 15, 17]), Elem(0)).unwrap();
        assert_eq!(c.claims, vec![Params::DS { v: 21, k: 5, lambda: 1 }]);
    }

    #[test]
    fn conditions_named() {
        let err = ds_ads_transfer(Direction::DsMinusElem, &z(13), &e(&[0, 1, 3, 9]), Elem(2)).unwrap_err();
        assert!(err.to_string().contains("d is not in D"));
        let err = ds_ads_transfer(Direction::DsMinusElem, &z(7), &e(&[1, 2, 4]), Elem(1)).unwrap_err();
        assert!(err.to_string().contains("1 mod 4"));
    }

    /// Every admissible `d` in the examples produces the claimed output, and
    /// every rejected `d` is rejected for a stated reason.
    #[test]
    fn exhaustive_small() {
        let g = z(13);
        let ds = e(&[0, 1, 3, 9]);
        let mut accepted = 0;
        for d in 0..13 {
            match ds_ads_transfer(Direction::DsMinusElem, &g, &ds, Elem(d)) {
                Ok(c) => {
                    accepted += 1;
                    assert!(c.verified);
                }
                Err(Error::Precondition { .. }) => {}
                Err(other) => panic!("unexpected {other}"),
            }
        }
        assert!(accepted >= 1);
    }
}
