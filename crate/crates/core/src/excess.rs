//! Dimension counts for the loci that can feed a correction term.
//!
//! A correction of frozen degree `g` split into `l` factors is an *old* excess
//! locus when no insertion is absorbed into the frozen factors and a *new* one
//! when some insertions coincide with the frozen roots. A pattern is permitted
//! when its count is non-negative. The counts are necessary conditions only.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmt::{enumerate_terms, CorrectionTerm};
use crate::invariants::{Context, InsertionMultiset, WKey};
use crate::partitions::{enumerate_partitions, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessQuery {
    pub context: Context,
    pub g: u32,
    pub l: u32,
    /// Exponents of the insertions absorbed into the frozen factors.
    pub coinciding: Vec<u32>,
}

impl ExcessQuery {
    pub fn new(context: Context, g: u32, l: u32, coinciding: Vec<u32>) -> Result<Self> {
        if l < 1 || l > g {
            return Err(Error::EmptyDomain { g, l });
        }
        if let Some(&c) = coinciding.iter().find(|&&c| c > context.top()) {
            return Err(Error::InvalidKey {
                key: format!("{coinciding:?}"),
                reason: format!("exponent {c} outside 0..={}", context.top()),
            });
        }
        Ok(Self {
            context,
            g,
            l,
            coinciding,
        })
    }

    fn index(&self) -> i64 {
        self.context.index()
    }
}

/// `l - 1 - (N - k) g`, which equals `-(g - l) - 1 - (N - k - 1) g`.
pub fn old_excess_dimension(q: &ExcessQuery) -> i64 {
    q.l as i64 - 1 - q.index() * q.g as i64
}

/// `-(g - l) - (N - k - 1) g`: the shortened old-excess form, one larger than
/// [`old_excess_dimension`].
pub fn old_excess_alternate(q: &ExcessQuery) -> i64 {
    -(q.g as i64 - q.l as i64) - (q.index() - 1) * q.g as i64
}

/// `Σ (c - 1) - (g - l) - (N - k - 1) g` over the coinciding insertions.
pub fn new_excess_dimension(q: &ExcessQuery) -> i64 {
    let absorbed: i64 = q.coinciding.iter().map(|&c| c as i64 - 1).sum();
    absorbed + old_excess_alternate(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcessKind {
    Old,
    New,
}

impl fmt::Display for ExcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExcessKind::Old => "old",
            ExcessKind::New => "new",
        })
    }
}

/// A correction skeleton `(g, l, σ, coinciding insertions)` with its count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessPattern {
    pub g: u32,
    pub l: u32,
    pub sigma: Partition,
    pub coinciding: InsertionMultiset,
    pub kind: ExcessKind,
    pub count: i64,
    /// The shortened form for old patterns.
    pub alternate_count: Option<i64>,
    pub permitted: bool,
}

impl ExcessPattern {
    fn new(context: Context, sigma: Partition, coinciding: InsertionMultiset) -> Self {
        let q = ExcessQuery {
            context,
            g: sigma.total(),
            l: sigma.len() as u32,
            coinciding: coinciding.descending(),
        };
        let (kind, count, alternate_count) = if coinciding.is_empty() {
            (ExcessKind::Old, old_excess_dimension(&q), Some(old_excess_alternate(&q)))
        } else {
            (ExcessKind::New, new_excess_dimension(&q), None)
        };
        Self {
            g: q.g,
            l: q.l,
            sigma,
            coinciding,
            kind,
            count,
            alternate_count,
            permitted: count >= 0,
        }
    }

    fn matches(&self, sigma: &Partition, coinciding: &InsertionMultiset) -> bool {
        &self.sigma == sigma && &self.coinciding == coinciding
    }
}

impl fmt::Display for ExcessPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} l={} σ={} coinciding={{{}}} {}: count {}",
            self.g, self.l, self.sigma, self.coinciding, self.kind, self.count
        )?;
        if let Some(alt) = self.alternate_count {
            if alt != self.count {
                write!(f, " (shortened form -(g-l)-(N-k-1)g gives {alt})")?;
            }
        }
        f.write_str(if self.permitted { " permitted" } else { " excluded" })
    }
}

/// Every `(g, l, σ, coinciding)` with `1 <= g <= d` and `coinciding` ranging
/// over the sub-multisets of the key's insertions.
pub fn predict_corrections(key: &WKey) -> Result<Vec<ExcessPattern>> {
    if !key.passes_selection_rule() {
        return Err(Error::SelectionRule(key.to_string()));
    }
    let subsets = key.insertions.sub_multisets();
    let mut out = Vec::new();
    for g in 1..=key.d {
        for l in 1..=g {
            for sigma in enumerate_partitions(g, l)? {
                for c in &subsets {
                    out.push(ExcessPattern::new(key.context, sigma.clone(), c.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// The pattern a correction term belongs to; `None` for the `g = 0` term.
pub fn pattern_of(term: &CorrectionTerm) -> Option<(Partition, InsertionMultiset)> {
    if term.g == 0 {
        return None;
    }
    let sigma = match &term.sigma {
        Some(s) => s.clone(),
        None => Partition::new(vec![term.g]).expect("g >= 1"),
    };
    Some((sigma, term.absorbed()))
}

/// Surviving correction terms whose pattern is not permitted. Empty when the
/// counts are sound for this key.
pub fn unsupported_terms(key: &WKey) -> Result<Vec<CorrectionTerm>> {
    let patterns = predict_corrections(key)?;
    Ok(enumerate_terms(key)?
        .into_iter()
        .filter(|t| match pattern_of(t) {
            None => false,
            Some((sigma, c)) => !patterns.iter().any(|p| p.permitted && p.matches(&sigma, &c)),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcessReport {
    pub key: WKey,
    pub patterns: Vec<ExcessPattern>,
    /// Labels of surviving terms lacking a permitted pattern.
    pub unsupported: Vec<String>,
    pub notes: Vec<String>,
}

pub fn excess_report(key: &WKey) -> Result<ExcessReport> {
    let patterns = predict_corrections(key)?;
    let unsupported = unsupported_terms(key)?.iter().map(CorrectionTerm::label).collect();
    let notes = patterns
        .iter()
        .filter_map(|p| match p.alternate_count {
            Some(alt) if alt != p.count => Some(format!(
                "old pattern g={} l={}: l-1-(N-k)g = {} but -(g-l)-(N-k-1)g = {}",
                p.g, p.l, p.count, alt
            )),
            _ => None,
        })
        .collect();
    Ok(ExcessReport {
        key: key.clone(),
        patterns,
        unsupported,
        notes,
    })
}

impl fmt::Display for ExcessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.key)?;
        for p in &self.patterns {
            writeln!(f, "  {p}")?;
        }
        for u in &self.unsupported {
            writeln!(f, "  unsupported surviving term: {u}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
