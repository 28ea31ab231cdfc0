//! Invariant keys, selection rules and normalization.
//!
//! Two kinds of invariants are tracked: the multi-point virtual structure
//! constants `w(O_{h^a} O_{h^b} | Π O_{h^c})_{0,d}` ([`WKey`]) and the genus-0
//! Gromov–Witten invariants `<Π O_{h^c}>_{0,d}` ([`GwKey`]). Both are indexed by
//! cohomology exponents in `0..=N-2` of a degree-`k` hypersurface in `CP^{N-1}`.

mod io;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub use io::{load_table, parse_table, render_table, store_table};
pub use table::{InvariantTable, MissingPolicy, TableKind};

/// The target `(N, k)`: a degree-`k` hypersurface in `CP^{N-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Context {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
}

impl Context {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidContext {
                n,
                k,
                reason: "N must be at least 4".into(),
            });
        }
        if k < 1 {
            return Err(Error::InvalidContext {
                n,
                k,
                reason: "k must be at least 1".into(),
            });
        }
        Ok(Self { n, k })
    }

    /// Largest cohomology exponent, `N - 2`.
    pub fn top(&self) -> u32 {
        self.n - 2
    }

    /// `N - k` as a signed integer.
    pub fn index(&self) -> i64 {
        self.n as i64 - self.k as i64
    }

    pub fn k_scalar(&self) -> Scalar {
        scalar::int(self.k as i64)
    }

    pub(crate) fn check(&self, other: &Context) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                expected: *self,
                found: *other,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={},k={}", self.n, self.k)
    }
}

/// A multiset of insertion exponents, stored as `exponent -> multiplicity`
/// with zero multiplicities dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InsertionMultiset {
    counts: BTreeMap<u32, u32>,
}

impl InsertionMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exponents: I) -> Self {
        let mut out = Self::empty();
        for c in exponents {
            out.insert(c, 1);
        }
        out
    }

    pub fn from_counts<I: IntoIterator<Item = (u32, u32)>>(counts: I) -> Self {
        let mut out = Self::empty();
        for (c, m) in counts {
            out.insert(c, m);
        }
        out
    }

    pub fn insert(&mut self, exponent: u32, times: u32) {
        if times > 0 {
            *self.counts.entry(exponent).or_insert(0) += times;
        }
    }

    pub fn extend(&mut self, other: &InsertionMultiset) {
        for (c, m) in other.iter() {
            self.insert(c, m);
        }
    }

    /// Removes every copy of `exponent`, returning how many there were.
    pub fn remove_all(&mut self, exponent: u32) -> u32 {
        self.counts.remove(&exponent).unwrap_or(0)
    }

    pub fn count_of(&self, exponent: u32) -> u32 {
        self.counts.get(&exponent).copied().unwrap_or(0)
    }

    /// `(exponent, multiplicity)` pairs, ascending by exponent.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&c, &m)| (c, m))
    }

    /// Total number of insertions `n`.
    pub fn len(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    /// Exponents with repetition, sorted descending (the file-format order).
    pub fn descending(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for (&c, &m) in self.counts.iter().rev() {
            out.extend(std::iter::repeat_n(c, m as usize));
        }
        out
    }

    /// `Σ c_j`.
    pub fn exponent_sum(&self) -> i64 {
        self.iter().map(|(c, m)| c as i64 * m as i64).sum()
    }

    /// `Σ (c_j - 1)`.
    pub fn weight(&self) -> i64 {
        self.exponent_sum() - self.len() as i64
    }

    /// `Π_j m_j!` over multiplicities.
    pub fn factorial_product(&self) -> Scalar {
        let p = self
            .counts
            .values()
            .map(|&m| scalar::factorial(m))
            .fold(num_bigint::BigUint::one(), |a, b| a * b);
        scalar::from_biguint(&p)
    }

    /// Every sub-multiset, in a deterministic order.
    pub fn sub_multisets(&self) -> Vec<InsertionMultiset> {
        let mut out = vec![InsertionMultiset::empty()];
        for (c, m) in self.iter() {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for base in &out {
                for take in 0..=m {
                    let mut s = base.clone();
                    s.insert(c, take);
                    next.push(s);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for InsertionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.descending().iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for InsertionMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.descending())
    }
}

/// All multisets of exponents in `lo..=hi` (with `lo >= 2`) whose weight
/// `Σ (c - 1)` equals `target` and whose size is at most `max_len`.
pub fn multisets_of_weight(lo: u32, hi: u32, target: i64, max_len: u32) -> Vec<InsertionMultiset> {
    assert!(lo >= 2, "weight enumeration needs exponents >= 2");
    let mut out = Vec::new();
    if target < 0 || lo > hi {
        return out;
    }
    let mut current = Vec::new();
    weight_rec(lo, hi, target, max_len, &mut current, &mut out);
    out
}

fn weight_rec(
    lo: u32,
    hi: u32,
    remaining: i64,
    slots: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<InsertionMultiset>,
) {
    if remaining == 0 {
        out.push(InsertionMultiset::from_exponents(current.iter().copied()));
        return;
    }
    if slots == 0 {
        return;
    }
    for c in lo..=hi {
        let w = c as i64 - 1;
        if w > remaining {
            break;
        }
        current.push(c);
        weight_rec(c, hi, remaining - w, slots - 1, current, out);
        current.pop();
    }
}

/// Key of `w(O_{h^a} O_{h^b} | Π O_{h^c})_{0,d}`, oriented so that `a >= b`.
///
/// Boundary exponents above `N - 2` are representable; such keys evaluate to
/// zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WKey {
    pub context: Context,
    pub d: u32,
    pub a: u32,
    pub b: u32,
    pub insertions: InsertionMultiset,
}

impl WKey {
    pub fn new(context: Context, a: u32, b: u32, insertions: InsertionMultiset, d: u32) -> Self {
        let (a, b) = if a >= b { (a, b) } else { (b, a) };
        Self {
            context,
            d,
            a,
            b,
            insertions,
        }
    }

    /// `a + b + Σ(c_j - 1) = N - 3 + (N - k) d`.
    pub fn passes_selection_rule(&self) -> bool {
        let lhs = self.a as i64 + self.b as i64 + self.insertions.weight();
        lhs == self.context.n as i64 - 3 + self.context.index() * self.d as i64
    }

    /// `true` when both boundary exponents and every insertion lie in `0..=N-2`.
    pub fn in_range(&self) -> bool {
        let top = self.context.top();
        self.a <= top && self.insertions.max_exponent().is_none_or(|c| c <= top)
    }

    /// Applies the degree-0 values and the exponent-0/1 insertion rules.
    pub fn normalize(&self) -> Normalized<WKey> {
        let ctx = self.context;
        if self.d == 0 {
            let value = if self.insertions.len() == 1 {
                let c = self.insertions.max_exponent().unwrap_or(0);
                if self.a + self.b + c == ctx.top() {
                    ctx.k_scalar()
                } else {
                    Scalar::zero()
                }
            } else {
                Scalar::zero()
            };
            return Normalized::Resolved(value);
        }
        if !self.in_range() || self.insertions.count_of(0) > 0 {
            return Normalized::Resolved(Scalar::zero());
        }
        let mut insertions = self.insertions.clone();
        let ones = insertions.remove_all(1);
        Normalized::Canonical {
            key: WKey::new(ctx, self.a, self.b, insertions, self.d),
            scale: degree_power(self.d, ones),
        }
    }

    /// The Gromov–Witten key obtained by folding the two boundary insertions
    /// into the multiset.
    pub fn to_gw(&self) -> GwKey {
        let mut ins = self.insertions.clone();
        ins.insert(self.a, 1);
        ins.insert(self.b, 1);
        GwKey::new(self.context, ins, self.d)
    }

    /// `true` when every insertion exponent is in `2..=N-2`.
    pub fn has_reduced_insertions(&self) -> bool {
        self.insertions
            .iter()
            .all(|(c, _)| c >= 2 && c <= self.context.top())
    }
}

impl fmt::Display for WKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w({},{}|{})_{}", self.a, self.b, self.insertions, self.d)
    }
}

/// Key of `<Π O_{h^c}>_{0,d}`; fully symmetric in its insertions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GwKey {
    pub context: Context,
    pub d: u32,
    pub insertions: InsertionMultiset,
}

impl GwKey {
    pub fn new(context: Context, insertions: InsertionMultiset, d: u32) -> Self {
        Self {
            context,
            d,
            insertions,
        }
    }

    /// `Σ c_j = N - 5 + (N - k) d + n`.
    pub fn passes_selection_rule(&self) -> bool {
        let rhs = self.context.n as i64 - 5
            + self.context.index() * self.d as i64
            + self.insertions.len() as i64;
        self.insertions.exponent_sum() == rhs
    }

    pub fn in_range(&self) -> bool {
        self.insertions
            .max_exponent()
            .is_none_or(|c| c <= self.context.top())
    }

    pub fn normalize(&self) -> Normalized<GwKey> {
        let ctx = self.context;
        if self.d == 0 {
            let value = if self.insertions.len() == 3 && self.insertions.exponent_sum() == ctx.top() as i64 {
                ctx.k_scalar()
            } else {
                Scalar::zero()
            };
            return Normalized::Resolved(value);
        }
        if !self.in_range() || self.insertions.count_of(0) > 0 {
            return Normalized::Resolved(Scalar::zero());
        }
        let mut insertions = self.insertions.clone();
        let ones = insertions.remove_all(1);
        Normalized::Canonical {
            key: GwKey::new(ctx, insertions, self.d),
            scale: degree_power(self.d, ones),
        }
    }
}

impl fmt::Display for GwKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>_{}", self.insertions, self.d)
    }
}

fn degree_power(d: u32, times: u32) -> Scalar {
    Scalar::from_integer(Pow::pow(BigInt::from(d), times))
}

/// Result of normalizing a key: either a canonical key times a scale, or a
/// value fixed by the degree-0 and vanishing rules.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalized<K> {
    Canonical { key: K, scale: Scalar },
    Resolved(Scalar),
}

impl<K> Normalized<K> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Normalized::Resolved(v) if v.is_zero())
    }
}

/// Either kind of key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum InvariantKey {
    W(WKey),
    #[serde(rename = "GW")]
    Gw(GwKey),
}

impl InvariantKey {
    pub fn context(&self) -> Context {
        match self {
            InvariantKey::W(k) => k.context,
            InvariantKey::Gw(k) => k.context,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            InvariantKey::W(k) => k.d,
            InvariantKey::Gw(k) => k.d,
        }
    }

    pub fn kind(&self) -> TableKind {
        match self {
            InvariantKey::W(_) => TableKind::W,
            InvariantKey::Gw(_) => TableKind::Gw,
        }
    }

    pub fn passes_selection_rule(&self) -> bool {
        match self {
            InvariantKey::W(k) => k.passes_selection_rule(),
            InvariantKey::Gw(k) => k.passes_selection_rule(),
        }
    }

    pub fn normalize(&self) -> Normalized<InvariantKey> {
        match self {
            InvariantKey::W(k) => match k.normalize() {
                Normalized::Canonical { key, scale } => Normalized::Canonical {
                    key: InvariantKey::W(key),
                    scale,
                },
                Normalized::Resolved(v) => Normalized::Resolved(v),
            },
            InvariantKey::Gw(k) => match k.normalize() {
                Normalized::Canonical { key, scale } => Normalized::Canonical {
                    key: InvariantKey::Gw(key),
                    scale,
                },
                Normalized::Resolved(v) => Normalized::Resolved(v),
            },
        }
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantKey::W(k) => k.fmt(f),
            InvariantKey::Gw(k) => k.fmt(f),
        }
    }
}

impl From<WKey> for InvariantKey {
    fn from(k: WKey) -> Self {
        InvariantKey::W(k)
    }
}

impl From<GwKey> for InvariantKey {
    fn from(k: GwKey) -> Self {
        InvariantKey::Gw(k)
    }
}
