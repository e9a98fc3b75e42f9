use std::fmt;

use crate::arith;
use crate::cyclotomy::cyc_classes;
use crate::diffcore::Params;
use crate::error::{Error, Result};
use crate::gf;
use crate::groups::{Crt, GroupCtx};
use crate::sequences;

use super::{finish, to_elems, ConstructedSet};

/// Cyclic Paley-Hadamard difference sets `(l, (l-1)/2, (l-3)/4)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum HadamardKind {
    /// Quadratic residues mod a prime `p ≡ 3 (mod 4)`.
    Qr(u64),
    /// Zeros of the m-sequence of period `2^t - 1`.
    Singer(u32),
    /// Twin-prime set in `Z_{p(p+2)}`.
    TwinPrime(u64),
    /// Hall's sextic residue set for a prime `p = 4s^2 + 27`.
    HallSextic(u64),
}

impl HadamardKind {
    pub fn id(self) -> &'static str {
        match self {
            HadamardKind::Qr(_) => "ph_qr",
            HadamardKind::Singer(_) => "ph_singer",
            HadamardKind::TwinPrime(_) => "ph_twin_prime",
            HadamardKind::HallSextic(_) => "ph_hall_sextic",
        }
    }
}

impl fmt::Display for HadamardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HadamardKind::Qr(p) => write!(f, "qr(p={p})"),
            HadamardKind::Singer(t) => write!(f, "singer(t={t})"),
            HadamardKind::TwinPrime(p) => write!(f, "twin_prime(p={p})"),
            HadamardKind::HallSextic(p) => write!(f, "hall_sextic(p={p})"),
        }
    }
}

fn ph_params(l: u64) -> Params {
    Params::DS {
        v: l,
        k: (l - 1) / 2,
        lambda: (l - 3) / 4,
    }
}

pub fn paley_hadamard_ds(kind: HadamardKind) -> Result<ConstructedSet> {
    let id = kind.id();
    let fail = |reason: String| Err(Error::precondition(id, reason));
    let (l, set, citation) = match kind {
        HadamardKind::Qr(p) => {
            if !arith::is_prime(p) || p % 4 != 3 {
                return fail(format!("p = {p} is not a prime ≡ 3 (mod 4)"));
            }
            let field = gf::field_of_order(p)?;
            let set: Vec<u64> = (1..p).filter(|&x| field.is_nonzero_square(x)).collect();
            (p, set, "Paley")
        }
        HadamardKind::Singer(t) => {
            if !(2..=20).contains(&t) {
                return fail(format!("t = {t} is outside 2..=20"));
            }
            let s = sequences::mseq(t)?;
            (s.period() as u64, sequences::support(&s.complement()), "Singer")
        }
        HadamardKind::TwinPrime(p) => {
            if !arith::is_prime(p) || !arith::is_prime(p + 2) {
                return fail(format!("{p} and {} are not both prime", p + 2));
            }
            let fp = gf::field_of_order(p)?;
            let fq = gf::field_of_order(p + 2)?;
            let crt = Crt::new(p, p + 2)?;
            let mut set = Vec::new();
            for g in 0..p {
                for h in 0..p + 2 {
                    let keep = if h == 0 {
                        true
                    } else {
                        g != 0 && fp.chi(g) * fq.chi(h) == 1
                    };
                    if keep {
                        set.push(crt.phi_inv(g, h));
                    }
                }
            }
            set.sort_unstable();
            (p * (p + 2), set, "Jungnickel, Pott")
        }
        HadamardKind::HallSextic(p) => {
            let is_form = p > 27 && (p - 27) % 4 == 0 && arith::is_square(((p - 27) / 4) as i64);
            if !arith::is_prime(p) || !is_form {
                return fail(format!("p = {p} is not a prime of the form 4s^2 + 27"));
            }
            let field = gf::field_of_order(p)?;
            let cyc = cyc_classes(&field, 6)?;
            let indices = match field.dlog(3)? % 6 {
                1 => [0, 1, 3],
                5 => [0, 5, 3],
                r => return fail(format!("3 lies in class C_{r} of order 6")),
            };
            (p, cyc.union_set(&indices, false), "Hall")
        }
    };
    let notes = vec![kind.to_string()];
    finish(
        id,
        citation,
        GroupCtx::cyclic(l as usize)?,
        to_elems(set),
        vec![ph_params(l)],
        notes,
    )
}
