//! Finite abelian groups: cyclic, direct products and field-additive groups.
//!
//! Every element is stored as a canonical index in `0..order`. Products use a
//! mixed-radix index with the first factor most significant, so `Z_4 x Z_7`
//! maps `(i, j)` to `7i + j`. Field elements use their base-p encoding.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{self, FieldCtx};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Structured view of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemForm {
    Int(u64),
    Field(u64),
    Tuple(Vec<ElemForm>),
}

impl fmt::Display for ElemForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemForm::Int(x) | ElemForm::Field(x) => write!(f, "{x}"),
            ElemForm::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum GroupKind {
    Cyclic(usize),
    Product(Vec<GroupCtx>),
    FieldAdditive(Arc<FieldCtx>),
}

#[derive(Clone, Debug)]
pub struct GroupCtx {
    kind: GroupKind,
    order: usize,
    /// Cyclic components in mixed-radix order, most significant first.
    radices: Vec<usize>,
}

impl GroupCtx {
    pub fn cyclic(v: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(GroupCtx {
            kind: GroupKind::Cyclic(v),
            order: v,
            radices: vec![v],
        })
    }

    /// Direct product; nested products are flattened.
    pub fn product(factors: Vec<GroupCtx>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDescriptor("empty product".into()));
        }
        let mut flat = Vec::new();
        for f in factors {
            match f.kind {
                GroupKind::Product(inner) => flat.extend(inner),
                _ => flat.push(f),
            }
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        let order = flat
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.order))
            .ok_or_else(|| Error::InvalidDescriptor("group order overflows".into()))?;
        let radices = flat.iter().flat_map(|f| f.radices.iter().copied()).collect();
        Ok(GroupCtx {
            kind: GroupKind::Product(flat),
            order,
            radices,
        })
    }

    pub fn field_additive(field: Arc<FieldCtx>) -> Self {
        let p = field.p() as usize;
        let order = field.q() as usize;
        let radices = vec![p; field.alpha() as usize];
        GroupCtx {
            kind: GroupKind::FieldAdditive(field),
            order,
            radices,
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Cyclic invariants in index order, most significant first.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.kind, GroupKind::Cyclic(_))
    }

    pub fn factors(&self) -> &[GroupCtx] {
        match &self.kind {
            GroupKind::Product(f) => f,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic(v) => format!("zv:{v}"),
            GroupKind::FieldAdditive(f) => format!("gf:{}", f.q()),
            GroupKind::Product(fs) => fs
                .iter()
                .map(GroupCtx::descriptor)
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if a.0 < self.order {
            Ok(a)
        } else {
            Err(Error::ForeignElement {
                index: a.0,
                order: self.order,
            })
        }
    }

    pub fn enumerate(&self) -> Vec<Elem> {
        (0..self.order).map(Elem).collect()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(Elem(self.add_idx(self.check(a)?.0, self.check(b)?.0)))
    }

    pub fn neg(&self, a: Elem) -> Result<Elem> {
        Ok(Elem(self.neg_idx(self.check(a)?.0)))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(Elem(self.sub_idx(self.check(a)?.0, self.check(b)?.0)))
    }

    /// Index-level addition; both arguments must be below `order`.
    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        if let GroupKind::Cyclic(v) = self.kind {
            let s = a + b;
            return if s >= v { s - v } else { s };
        }
        self.digitwise(a, b, |x, y, r| (x + y) % r)
    }

    pub(crate) fn sub_idx(&self, a: usize, b: usize) -> usize {
        if let GroupKind::Cyclic(v) = self.kind {
            return if a >= b { a - b } else { a + v - b };
        }
        self.digitwise(a, b, |x, y, r| (x + r - y) % r)
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        self.sub_idx(0, a)
    }

    fn digitwise(&self, mut a: usize, mut b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for &r in self.radices.iter().rev() {
            out += op(a % r, b % r, r) * place;
            a /= r;
            b /= r;
            place *= r;
        }
        out
    }

    /// Mixed-radix digits of an index, most significant first.
    pub fn digits(&self, mut a: usize) -> Vec<usize> {
        let mut d = vec![0; self.radices.len()];
        for (slot, &r) in d.iter_mut().zip(&self.radices).rev() {
            *slot = a % r;
            a /= r;
        }
        d
    }

    /// Indices of the element in each factor of a product.
    pub fn components(&self, a: Elem) -> Vec<usize> {
        let fs = self.factors();
        let mut out = vec![0; fs.len()];
        let mut a = a.0;
        for (slot, f) in out.iter_mut().zip(fs).rev() {
            *slot = a % f.order;
            a /= f.order;
        }
        out
    }

    /// Inverse of [`components`](Self::components).
    pub fn from_components(&self, parts: &[usize]) -> Result<Elem> {
        let fs = self.factors();
        if parts.len() != fs.len() {
            return Err(Error::Parse(format!(
                "expected {} components, got {}",
                fs.len(),
                parts.len()
            )));
        }
        let mut idx = 0;
        for (&x, f) in parts.iter().zip(fs) {
            if x >= f.order {
                return Err(Error::ForeignElement {
                    index: x,
                    order: f.order,
                });
            }
            idx = idx * f.order + x;
        }
        Ok(Elem(idx))
    }

    pub fn form(&self, a: Elem) -> ElemForm {
        match &self.kind {
            GroupKind::Cyclic(_) => ElemForm::Int(a.0 as u64),
            GroupKind::FieldAdditive(_) => ElemForm::Field(a.0 as u64),
            GroupKind::Product(fs) => ElemForm::Tuple(
                self.components(a)
                    .into_iter()
                    .zip(fs)
                    .map(|(x, f)| f.form(Elem(x)))
                    .collect(),
            ),
        }
    }

    pub fn format_elem(&self, a: Elem) -> String {
        self.form(a).to_string()
    }

    pub fn format_set(&self, set: &[Elem]) -> String {
        set.iter()
            .map(|&a| self.format_elem(a))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        match &self.kind {
            GroupKind::Product(_) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("expected a tuple, got `{text}`")))?;
                let parts = split_top_level(inner)?
                    .into_iter()
                    .zip(self.factors())
                    .map(|(t, f)| f.parse_elem(t).map(|e| e.0))
                    .collect::<Result<Vec<_>>>()?;
                if split_top_level(inner)?.len() != self.factors().len() {
                    return Err(Error::Parse(format!("wrong tuple arity in `{text}`")));
                }
                self.from_components(&parts)
            }
            _ => {
                let x: usize = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element `{text}`")))?;
                self.check(Elem(x))
            }
        }
    }

    /// Parses a comma-separated set; duplicates are removed and the result sorted.
    pub fn parse_set(&self, text: &str) -> Result<Vec<Elem>> {
        let mut out = split_top_level(text)?
            .into_iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| self.parse_elem(t))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// One set per non-empty line; `#` starts a comment line.
    pub fn parse_set_file(&self, content: &str) -> Result<Vec<Vec<Elem>>> {
        content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| self.parse_set(l))
            .collect()
    }

    pub fn field(&self) -> Option<&Arc<FieldCtx>> {
        match &self.kind {
            GroupKind::FieldAdditive(f) => Some(f),
            _ => None,
        }
    }
}

impl PartialEq for GroupCtx {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}

impl Eq for GroupCtx {}

fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in `{text}`")));
                }
            }
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{text}`")));
    }
    parts.push(text[start..].trim());
    Ok(parts)
}

/// Parses `zv:<v>`, `gf:<q>` and products joined by `×` or `x`.
pub fn make_group(spec: &str) -> Result<GroupCtx> {
    let normalized = spec.replace('×', " x ");
    let parts: Vec<&str> = normalized
        .split(|c: char| c.is_whitespace())
        .filter(|s| !s.is_empty() && *s != "x")
        .collect();
    if parts.is_empty() {
        return Err(Error::InvalidDescriptor(spec.to_string()));
    }
    // a bare `x` between factors is optional whitespace-wise: accept `zv:4xzv:7`
    let mut factors = Vec::new();
    for part in parts {
        for piece in part.split('x').filter(|s| !s.is_empty()) {
            factors.push(parse_factor(piece, spec)?);
        }
    }
    GroupCtx::product(factors)
}

fn parse_factor(piece: &str, spec: &str) -> Result<GroupCtx> {
    let bad = || Error::InvalidDescriptor(spec.to_string());
    let (kind, n) = piece.split_once(':').ok_or_else(bad)?;
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "zv" | "Z" | "z" => GroupCtx::cyclic(n as usize).map_err(|_| Error::InvalidOrder(n)),
        "gf" | "GF" => {
            let field = gf::field_of_order(n)?;
            Ok(GroupCtx::field_additive(field))
        }
        _ => Err(bad()),
    }
}

/// Chinese-remainder isomorphism `Z_{m1 m2} -> Z_{m1} x Z_{m2}` for coprime moduli.
#[derive(Clone, Debug)]
pub struct Crt {
    m1: u64,
    m2: u64,
    e1: u64,
    e2: u64,
}

impl Crt {
    pub fn new(m1: u64, m2: u64) -> Result<Self> {
        if m1 == 0 || m2 == 0 || crate::arith::gcd(m1, m2) != 1 {
            return Err(Error::NotCoprime { a: m1, v: m2 });
        }
        let n = m1 * m2;
        // idempotents: e1 = 1 mod m1, 0 mod m2 and vice versa
        let e1 = (0..m1).map(|k| k * m2).find(|x| x % m1 == 1 % m1).unwrap_or(0) % n;
        let e2 = (0..m2).map(|k| k * m1).find(|x| x % m2 == 1 % m2).unwrap_or(0) % n;
        Ok(Crt { m1, m2, e1, e2 })
    }

    pub fn modulus(&self) -> u64 {
        self.m1 * self.m2
    }

    pub fn phi(&self, x: u64) -> (u64, u64) {
        (x % self.m1, x % self.m2)
    }

    pub fn phi_inv(&self, a: u64, b: u64) -> u64 {
        let n = self.modulus() as u128;
        ((a as u128 * self.e1 as u128 + b as u128 * self.e2 as u128) % n) as u64
    }

    /// Target group `Z_{m1} x Z_{m2}`.
    pub fn target(&self) -> GroupCtx {
        GroupCtx::product(vec![
            GroupCtx::cyclic(self.m1 as usize).unwrap(),
            GroupCtx::cyclic(self.m2 as usize).unwrap(),
        ])
        .unwrap()
    }
}

/// `phi(x) = (x mod 4, x mod l)` for odd `l`.
pub fn crt_map(l: u64) -> Result<Crt> {
    if l % 2 == 0 {
        return Err(Error::InvalidArgument(format!("crt_map needs odd l, got {l}")));
    }
    Crt::new(4, l)
}
