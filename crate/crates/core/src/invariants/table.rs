use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{Context, GwKey, InvariantKey, Normalized, WKey};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TableKind {
    W,
    #[serde(rename = "GW")]
    Gw,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::W => "W",
            TableKind::Gw => "GW",
        })
    }
}

/// What [`InvariantTable::lookup`] does when a canonical key that passes its
/// selection rule has no stored value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MissingPolicy {
    #[default]
    Error,
    Zero,
}

/// Map from canonical keys of one kind and one context to exact values.
///
/// Every stored key is in normalized form: degree at least 1, all insertion
/// exponents in `2..=N-2`, and passing its selection rule.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable {
    kind: TableKind,
    context: Context,
    entries: BTreeMap<InvariantKey, Scalar>,
    policy: MissingPolicy,
}

impl InvariantTable {
    pub fn new(kind: TableKind, context: Context) -> Self {
        Self {
            kind,
            context,
            entries: BTreeMap::new(),
            policy: MissingPolicy::Error,
        }
    }

    pub fn with_policy(mut self, policy: MissingPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn context(&self) -> Context {
        self.context
    }

    pub fn policy(&self) -> MissingPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&InvariantKey, &Scalar)> {
        self.entries.iter()
    }

    /// Stored W entries; empty for a GW table.
    pub fn w_entries(&self) -> impl Iterator<Item = (&WKey, &Scalar)> {
        self.entries.iter().filter_map(|(k, v)| match k {
            InvariantKey::W(w) => Some((w, v)),
            InvariantKey::Gw(_) => None,
        })
    }

    pub fn gw_entries(&self) -> impl Iterator<Item = (&GwKey, &Scalar)> {
        self.entries.iter().filter_map(|(k, v)| match k {
            InvariantKey::Gw(g) => Some((g, v)),
            InvariantKey::W(_) => None,
        })
    }

    /// Raw stored value, without normalization.
    pub fn get(&self, key: &InvariantKey) -> Option<&Scalar> {
        self.entries.get(key)
    }

    /// Why `key` cannot be stored in this table, if it cannot.
    pub fn storage_problem(&self, key: &InvariantKey) -> Option<String> {
        if key.kind() != self.kind {
            return Some(format!("{} key in a {} table", key.kind(), self.kind));
        }
        if key.context() != self.context {
            return Some(format!("context {} differs from table context {}", key.context(), self.context));
        }
        if key.degree() == 0 {
            return Some("degree-0 values are fixed and are not stored".into());
        }
        match key.normalize() {
            Normalized::Canonical { key: canon, .. } if &canon == key => {}
            Normalized::Canonical { .. } => {
                return Some("contains exponent-1 insertions; store the reduced key".into());
            }
            Normalized::Resolved(_) => {
                return Some("exponent out of range or exponent-0 insertion; the value is fixed at 0".into());
            }
        }
        if !key.passes_selection_rule() {
            return Some("violates the selection rule".into());
        }
        None
    }

    /// Inserts a value for a canonical key. Rejects keys that are not storable
    /// and keys that are already present.
    pub fn insert(&mut self, key: impl Into<InvariantKey>, value: Scalar) -> Result<()> {
        let key = key.into();
        if let Some(reason) = self.storage_problem(&key) {
            return Err(Error::Rejected(vec![format!("{key}: {reason}")]));
        }
        if self.entries.contains_key(&key) {
            return Err(Error::Rejected(vec![format!("{key}: duplicate canonical key")]));
        }
        self.entries.insert(key, value);
        Ok(())
    }

    /// Value of any key of this table's kind: normalization first, then the
    /// selection rule, then storage.
    pub fn lookup(&self, key: &InvariantKey) -> Result<Scalar> {
        self.context.check(&key.context())?;
        if key.kind() != self.kind {
            return Err(Error::KindMismatch {
                expected: self.kind.to_string(),
                found: key.kind().to_string(),
            });
        }
        match key.normalize() {
            Normalized::Resolved(v) => Ok(v),
            Normalized::Canonical { key: canon, scale } => {
                if !canon.passes_selection_rule() {
                    return Ok(Scalar::zero());
                }
                match self.entries.get(&canon) {
                    Some(v) => Ok(v * scale),
                    None => match self.policy {
                        MissingPolicy::Zero => Ok(Scalar::zero()),
                        MissingPolicy::Error => Err(Error::MissingEntry {
                            key: canon.to_string(),
                        }),
                    },
                }
            }
        }
    }

    pub fn lookup_w(&self, key: &WKey) -> Result<Scalar> {
        self.lookup(&InvariantKey::W(key.clone()))
    }

    pub fn lookup_gw(&self, key: &GwKey) -> Result<Scalar> {
        self.lookup(&InvariantKey::Gw(key.clone()))
    }

    /// The W entries with `b = 0`, which carry the mirror map.
    pub fn b0_slice(&self) -> InvariantTable {
        let mut out = InvariantTable::new(self.kind, self.context).with_policy(self.policy);
        for (k, v) in self.w_entries().filter(|(k, _)| k.b == 0) {
            out.entries.insert(InvariantKey::W(k.clone()), v.clone());
        }
        out
    }

    pub(crate) fn set_unchecked(&mut self, key: InvariantKey, value: Scalar) {
        self.entries.insert(key, value);
    }
}
