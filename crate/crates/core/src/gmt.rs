//! The correction-term expansion of a multi-point virtual structure constant.
//!
//! For `d >= 1` and a key passing its selection rule,
//!
//! ```text
//! w(a,b | Π_j (O_{h^j})^{n_j})_{0,d}
//!     = <a,b,Π_j (O_{h^j})^{n_j}>_{0,d}                       (g = 0)
//!     + w(a+b, 0 | Π_j (O_{h^j})^{n_j})_{0,d}                 (g = d)
//!     + Σ_{g=1}^{d-1} Σ_{l=1}^{g} Σ_{σ ∈ P_g^l} S(σ) Σ_{m} Σ_{e ∈ {0..N-2}^l}
//!         multinomial(m) <a,b,Π_j (O_{h^j})^{m_0^j}, Π_p O_{h^{e_p}}>_{0,d-g}
//!         Π_p w(N-2-e_p, 0 | Π_j (O_{h^j})^{m_p^j})_{0,g_p} / k
//! ```
//!
//! The frozen factors carry the insertions `m_p^j` for `j = 2..=N-2`.
//! Terms are enumerated exhaustively and then pruned by the selection rules
//! of their factors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{
    multisets_of_weight, Context, GwKey, InsertionMultiset, InvariantKey, InvariantTable, Normalized,
    TableKind, WKey,
};
use crate::partitions::{enumerate_insertion_splits, enumerate_partitions, symmetry_factor, InsertionSplit, Partition};
use crate::scalar::{self, Scalar};

/// One summand of the expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectionTerm {
    pub g: u32,
    /// Degrees of the frozen factors; absent for `g = 0` and `g = d`.
    pub sigma: Option<Partition>,
    pub split: Option<InsertionSplit>,
    /// Exponents `e_p` glued across each frozen factor.
    pub e: Vec<u32>,
    /// Absent for the `g = d` term.
    pub gw_factor: Option<GwKey>,
    pub w_factors: Vec<WKey>,
    #[serde(serialize_with = "scalar::serialize")]
    pub scalar: Scalar,
}

impl CorrectionTerm {
    /// `true` when no factor is forced to vanish by normalization or a
    /// selection rule.
    pub fn is_live(&self) -> bool {
        self.gw_factor.as_ref().is_none_or(gw_live) && self.w_factors.iter().all(w_live)
    }

    /// Insertions absorbed into the frozen factors (all of them for `g = d`).
    pub fn absorbed(&self) -> InsertionMultiset {
        match &self.split {
            Some(s) => s.absorbed(),
            None if self.gw_factor.is_none() => self.w_factors[0].insertions.clone(),
            None => InsertionMultiset::empty(),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CorrectionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}", self.g)?;
        if let Some(sigma) = &self.sigma {
            write!(f, " σ={sigma}")?;
        }
        if let Some(split) = &self.split {
            let slots: Vec<String> = (0..=split.factors()).map(|p| format!("{{{}}}", split.part(p))).collect();
            write!(f, " m={}", slots.join("|"))?;
        }
        if !self.e.is_empty() {
            let e: Vec<String> = self.e.iter().map(u32::to_string).collect();
            write!(f, " e=({})", e.join(","))?;
        }
        write!(f, ": {}", scalar::format(&self.scalar))?;
        if let Some(gw) = &self.gw_factor {
            write!(f, " * {gw}")?;
        }
        for w in &self.w_factors {
            write!(f, " * {w}")?;
        }
        Ok(())
    }
}

fn gw_live(key: &GwKey) -> bool {
    match key.normalize() {
        Normalized::Resolved(v) => !v.is_zero(),
        Normalized::Canonical { key, .. } => key.passes_selection_rule(),
    }
}

fn w_live(key: &WKey) -> bool {
    match key.normalize() {
        Normalized::Resolved(v) => !v.is_zero(),
        Normalized::Canonical { key, .. } => key.passes_selection_rule(),
    }
}

fn check_expandable(key: &WKey) -> Result<()> {
    if key.d == 0 {
        return Err(Error::DegreeZero(key.to_string()));
    }
    if !key.has_reduced_insertions() {
        return Err(Error::InvalidKey {
            key: key.to_string(),
            reason: "insertion exponents must lie in 2..=N-2".into(),
        });
    }
    if !key.passes_selection_rule() {
        return Err(Error::SelectionRule(key.to_string()));
    }
    Ok(())
}

/// Every summand, before pruning, in the canonical order (ascending `g`, then
/// partition, split and `e` order).
pub fn enumerate_all_terms(key: &WKey) -> Result<Vec<CorrectionTerm>> {
    check_expandable(key)?;
    let ctx = key.context;
    let d = key.d;
    let top = ctx.top();
    let inv_k = Scalar::new(1.into(), ctx.k.into());
    let mut terms = Vec::new();

    terms.push(CorrectionTerm {
        g: 0,
        sigma: None,
        split: None,
        e: Vec::new(),
        gw_factor: Some(key.to_gw()),
        w_factors: Vec::new(),
        scalar: Scalar::one(),
    });

    for g in 1..d {
        for l in 1..=g {
            for sigma in enumerate_partitions(g, l)? {
                let sym = symmetry_factor(&sigma);
                let glue = num_traits::pow(inv_k.clone(), l as usize);
                for split in enumerate_insertion_splits(&key.insertions, l as usize) {
                    let base = &sym * scalar::from_biguint(&split.weight) * &glue;
                    let free = split.part(0);
                    let parts: Vec<InsertionMultiset> = (1..=l as usize).map(|p| split.part(p)).collect();
                    for e in e_vectors(l as usize, top) {
                        let mut gw_ins = free.clone();
                        gw_ins.insert(key.a, 1);
                        gw_ins.insert(key.b, 1);
                        for &ep in &e {
                            gw_ins.insert(ep, 1);
                        }
                        let w_factors = e
                            .iter()
                            .zip(&parts)
                            .zip(sigma.parts())
                            .map(|((&ep, m), &gp)| WKey::new(ctx, top - ep, 0, m.clone(), gp))
                            .collect();
                        terms.push(CorrectionTerm {
                            g,
                            sigma: Some(sigma.clone()),
                            split: Some(split.clone()),
                            e,
                            gw_factor: Some(GwKey::new(ctx, gw_ins, d - g)),
                            w_factors,
                            scalar: base.clone(),
                        });
                    }
                }
            }
        }
    }

    terms.push(CorrectionTerm {
        g: d,
        sigma: None,
        split: None,
        e: Vec::new(),
        gw_factor: None,
        w_factors: vec![WKey::new(ctx, key.a + key.b, 0, key.insertions.clone(), d)],
        scalar: Scalar::one(),
    });
    Ok(terms)
}

/// All `e` vectors in `{0..=top}^l`, lexicographic.
fn e_vectors(l: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(l)];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=top).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// The summands that survive selection-rule pruning.
pub fn enumerate_terms(key: &WKey) -> Result<Vec<CorrectionTerm>> {
    Ok(enumerate_all_terms(key)?.into_iter().filter(CorrectionTerm::is_live).collect())
}

/// A summand together with its factor values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermValue {
    pub term: CorrectionTerm,
    #[serde(serialize_with = "serialize_opt")]
    pub gw_value: Option<Scalar>,
    #[serde(serialize_with = "scalar::serialize_vec")]
    pub w_values: Vec<Scalar>,
    #[serde(serialize_with = "scalar::serialize")]
    pub contribution: Scalar,
}

fn serialize_opt<S: serde::Serializer>(v: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&scalar::format(v)),
        None => s.serialize_none(),
    }
}

/// Evaluates terms with arbitrary factor sources. Errors name the summand and
/// the factor that failed.
pub fn evaluate_terms<G, W>(terms: Vec<CorrectionTerm>, gw: G, w: W) -> Result<Vec<TermValue>>
where
    G: Fn(&GwKey) -> Result<Scalar>,
    W: Fn(&WKey) -> Result<Scalar>,
{
    terms
        .into_iter()
        .map(|term| {
            let wrap = |factor: String, e: Error| Error::InTerm {
                term: term.to_string(),
                factor,
                source: Box::new(e),
            };
            let gw_value = match &term.gw_factor {
                Some(k) => Some(gw(k).map_err(|e| wrap(k.to_string(), e))?),
                None => None,
            };
            let w_values = term
                .w_factors
                .iter()
                .map(|k| w(k).map_err(|e| wrap(k.to_string(), e)))
                .collect::<Result<Vec<_>>>()?;
            let mut contribution = term.scalar.clone();
            if let Some(v) = &gw_value {
                contribution *= v;
            }
            for v in &w_values {
                contribution *= v;
            }
            Ok(TermValue {
                term,
                gw_value,
                w_values,
                contribution,
            })
        })
        .collect()
}

fn check_tables(key: &WKey, gw: &InvariantTable, w: &InvariantTable) -> Result<()> {
    expect_kind(gw, TableKind::Gw)?;
    expect_kind(w, TableKind::W)?;
    gw.context().check(&key.context)?;
    w.context().check(&key.context)
}

fn expect_kind(table: &InvariantTable, kind: TableKind) -> Result<()> {
    if table.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind.to_string(),
            found: table.kind().to_string(),
        });
    }
    Ok(())
}

/// Right-hand side of the expansion for `key`, from a GW table and a W table.
pub fn evaluate_rhs(key: &WKey, gw: &InvariantTable, w: &InvariantTable) -> Result<Scalar> {
    check_tables(key, gw, w)?;
    let values = evaluate_terms(enumerate_terms(key)?, |k| gw.lookup_gw(k), |k| w.lookup_w(k))?;
    Ok(values.into_iter().map(|v| v.contribution).sum())
}

/// Same sum over the unpruned term list; factors failing their selection rule
/// evaluate to zero through the table lookups.
pub fn evaluate_rhs_unpruned(key: &WKey, gw: &InvariantTable, w: &InvariantTable) -> Result<Scalar> {
    check_tables(key, gw, w)?;
    let values = evaluate_terms(enumerate_all_terms(key)?, |k| gw.lookup_gw(k), |k| w.lookup_w(k))?;
    Ok(values.into_iter().map(|v| v.contribution).sum())
}

/// Both sides of the expansion for one key.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub key: WKey,
    #[serde(serialize_with = "scalar::serialize")]
    pub lhs: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub rhs: Scalar,
    pub terms: Vec<TermValue>,
    pub equal: bool,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {}: lhs = {}, rhs = {}",
            if self.equal { "PASS" } else { "FAIL" },
            self.key,
            scalar::format(&self.lhs),
            scalar::format(&self.rhs)
        )?;
        for t in &self.terms {
            writeln!(f, "  {} = {}", t.term, scalar::format(&t.contribution))?;
        }
        Ok(())
    }
}

pub fn verify_identity(key: &WKey, gw: &InvariantTable, w: &InvariantTable) -> Result<IdentityReport> {
    check_tables(key, gw, w)?;
    let lhs = w.lookup_w(key)?;
    let terms = evaluate_terms(enumerate_terms(key)?, |k| gw.lookup_gw(k), |k| w.lookup_w(k))?;
    let rhs: Scalar = terms.iter().map(|t| &t.contribution).sum();
    Ok(IdentityReport {
        key: key.clone(),
        equal: lhs == rhs,
        lhs,
        rhs,
        terms,
    })
}

/// A set of W keys for the solvers, ordered by ascending degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyDomain {
    keys: Vec<WKey>,
}

impl KeyDomain {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Explicit keys; canonical duplicates are dropped.
    pub fn from_keys<I: IntoIterator<Item = WKey>>(keys: I) -> Self {
        let set: BTreeSet<WKey> = keys.into_iter().collect();
        let mut keys: Vec<WKey> = set.into_iter().collect();
        keys.sort_by(|x, y| x.d.cmp(&y.d).then_with(|| x.cmp(y)));
        Self { keys }
    }

    /// Every degree `1..=d_max` of each `(a, b, insertions)` profile at which
    /// the profile passes the selection rule.
    pub fn from_profiles(context: Context, profiles: &[(u32, u32, InsertionMultiset)], d_max: u32) -> Self {
        Self::from_keys(profiles.iter().flat_map(|(a, b, ins)| {
            (1..=d_max)
                .map(move |d| WKey::new(context, *a, *b, ins.clone(), d))
                .filter(WKey::passes_selection_rule)
        }))
    }

    /// Every in-range key with `1 <= d <= d_max`, insertions in `2..=N-2`,
    /// at most `n_max` insertions, and passing the selection rule.
    pub fn full(context: Context, d_max: u32, n_max: u32) -> Self {
        let top = context.top();
        let mut keys = Vec::new();
        for d in 1..=d_max {
            for a in 0..=top {
                for b in 0..=a {
                    let target = context.n as i64 - 3 + context.index() * d as i64 - a as i64 - b as i64;
                    for ins in multisets_of_weight(2, top, target, n_max) {
                        keys.push(WKey::new(context, a, b, ins, d));
                    }
                }
            }
        }
        Self::from_keys(keys)
    }

    /// The stored W keys of a table with `b >= 1`.
    pub fn from_table(table: &InvariantTable) -> Self {
        Self::from_keys(table.w_entries().map(|(k, _)| k.clone()).filter(|k| k.b >= 1))
    }

    pub fn keys(&self) -> &[WKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn check(&self, context: Context) -> Result<()> {
        for key in &self.keys {
            context.check(&key.context)?;
            check_expandable(key)?;
        }
        Ok(())
    }
}

/// Solves the expansion for the `g = 0` Gromov–Witten term, degree by degree.
///
/// Each domain key determines one canonical GW key; keys whose GW term is
/// fixed by normalization (a boundary exponent 0, or out of range) determine
/// nothing and are skipped. Lower-degree GW factors must themselves be
/// determined by the domain.
pub fn solve_gw_from_w(w: &InvariantTable, domain: &KeyDomain) -> Result<InvariantTable> {
    expect_kind(w, TableKind::W)?;
    let ctx = w.context();
    domain.check(ctx)?;

    // dry run: every lower-degree GW factor must be a target of the domain
    let mut available: BTreeSet<GwKey> = BTreeSet::new();
    let mut frontier: BTreeSet<GwKey> = BTreeSet::new();
    let mut pending: Vec<GwKey> = Vec::new();
    let mut current_degree = 0;
    for key in domain.keys() {
        if key.d != current_degree {
            available.extend(pending.drain(..));
            current_degree = key.d;
        }
        let Some((target, _)) = gw_target(key) else { continue };
        for term in enumerate_terms(key)? {
            if term.g == 0 {
                continue;
            }
            if let Some(Normalized::Canonical { key: canon, .. }) = term.gw_factor.as_ref().map(GwKey::normalize) {
                if canon.passes_selection_rule() && !available.contains(&canon) {
                    frontier.insert(canon);
                }
            }
            for wk in &term.w_factors {
                w.lookup_w(wk).map_err(|e| Error::InTerm {
                    term: format!("{key}: {term}"),
                    factor: wk.to_string(),
                    source: Box::new(e),
                })?;
            }
        }
        pending.push(target);
    }
    if !frontier.is_empty() {
        return Err(Error::DomainNotClosed(frontier.iter().map(GwKey::to_string).collect()));
    }

    let mut out = InvariantTable::new(TableKind::Gw, ctx);
    let mut sources: BTreeMap<GwKey, (Scalar, String)> = BTreeMap::new();
    for key in domain.keys() {
        let Some((target, scale)) = gw_target(key) else { continue };
        let lhs = w.lookup_w(key)?;
        let corrections = evaluate_terms(
            enumerate_terms(key)?.into_iter().filter(|t| t.g != 0).collect(),
            |k| out.lookup_gw(k),
            |k| w.lookup_w(k),
        )
        .map_err(|e| Error::InTerm {
            term: key.to_string(),
            factor: "corrections".into(),
            source: Box::new(e),
        })?;
        let correction: Scalar = corrections.iter().map(|t| &t.contribution).sum();
        let value = (lhs - correction) / scale;
        match sources.get(&target) {
            Some((first, source)) if first != &value => {
                return Err(Error::Inconsistent {
                    key: target.to_string(),
                    first: scalar::format(first),
                    first_source: source.clone(),
                    second: scalar::format(&value),
                    second_source: key.to_string(),
                });
            }
            Some(_) => {}
            None => {
                out.set_unchecked(InvariantKey::Gw(target.clone()), value.clone());
                sources.insert(target, (value, key.to_string()));
            }
        }
    }
    Ok(out)
}

fn gw_target(key: &WKey) -> Option<(GwKey, Scalar)> {
    match key.to_gw().normalize() {
        Normalized::Canonical { key, scale } if key.passes_selection_rule() => Some((key, scale)),
        _ => None,
    }
}

/// Fills every domain key by evaluating the expansion forward.
///
/// The `b = 0` factors are not constrained by the expansion and come from
/// `mirror_data`; values already produced by this run take precedence for
/// keys they cover.
pub fn solve_w_from_gw(gw: &InvariantTable, mirror_data: &InvariantTable, domain: &KeyDomain) -> Result<InvariantTable> {
    expect_kind(gw, TableKind::Gw)?;
    expect_kind(mirror_data, TableKind::W)?;
    let ctx = gw.context();
    ctx.check(&mirror_data.context())?;
    domain.check(ctx)?;

    let mut out = InvariantTable::new(TableKind::W, ctx);
    for key in domain.keys() {
        let values = evaluate_terms(
            enumerate_terms(key)?,
            |k| gw.lookup_gw(k),
            |k| match k.normalize() {
                Normalized::Canonical { key: canon, .. } if out.get(&InvariantKey::W(canon.clone())).is_some() => {
                    out.lookup_w(k)
                }
                _ => mirror_data.lookup_w(k),
            },
        )?;
        let value: Scalar = values.into_iter().map(|v| v.contribution).sum();
        out.set_unchecked(InvariantKey::W(key.clone()), value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ms(e: &[u32]) -> InsertionMultiset {
        InsertionMultiset::from_exponents(e.iter().copied())
    }

    #[test]
    fn e_vector_order() {
        assert_eq!(e_vectors(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(e_vectors(0, 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn degree_one_has_only_boundary_terms() {
        let ctx = Context::new(8, 8).unwrap();
        let all = enumerate_all_terms(&WKey::new(ctx, 2, 2, ms(&[2]), 1)).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].g, 0);
        assert_eq!(all[1].g, 1);
        assert_eq!(all[1].w_factors, vec![WKey::new(ctx, 4, 0, ms(&[2]), 1)]);
    }

    #[test]
    fn unpruned_count_matches_combinatorics() {
        // d = 3, one insertion: g=1 (σ=(1)): 2 splits * 7 e; g=2, σ=(2): 2*7; σ=(1,1): 3 splits * 49
        let ctx = Context::new(8, 8).unwrap();
        let all = enumerate_all_terms(&WKey::new(ctx, 2, 2, ms(&[2]), 3)).unwrap();
        assert_eq!(all.len(), 2 + 14 + 14 + 3 * 49);
    }

    #[test]
    fn rejects_bad_keys() {
        let ctx = Context::new(8, 8).unwrap();
        assert!(matches!(enumerate_terms(&WKey::new(ctx, 2, 2, ms(&[2]), 0)), Err(Error::DegreeZero(_))));
        assert!(matches!(enumerate_terms(&WKey::new(ctx, 2, 2, ms(&[3]), 1)), Err(Error::SelectionRule(_))));
        assert!(matches!(
            enumerate_terms(&WKey::new(ctx, 2, 2, ms(&[1, 2]), 1)),
            Err(Error::InvalidKey { .. })
        ));
    }

    #[test]
    fn full_domain_keys_pass_selection() {
        let ctx = Context::new(5, 5).unwrap();
        let dom = KeyDomain::full(ctx, 2, 2);
        assert!(!dom.is_empty());
        assert!(dom.keys().iter().all(|k| k.passes_selection_rule() && k.in_range()));
        assert!(dom.keys().windows(2).all(|p| p[0].d <= p[1].d));
        // quintic: a + b + Σ(c-1) = 2
        assert!(dom.keys().contains(&WKey::new(ctx, 1, 1, ms(&[]), 2)));
        assert!(dom.keys().contains(&WKey::new(ctx, 0, 0, ms(&[2, 2]), 1)));
    }

    #[test]
    fn empty_domain_solves_to_empty_tables() {
        let ctx = Context::new(8, 8).unwrap();
        let w = InvariantTable::new(TableKind::W, ctx);
        let gw = InvariantTable::new(TableKind::Gw, ctx);
        assert!(solve_gw_from_w(&w, &KeyDomain::empty()).unwrap().is_empty());
        assert!(solve_w_from_gw(&gw, &w, &KeyDomain::empty()).unwrap().is_empty());
    }

    #[test]
    fn zero_tables_give_zero_outputs() {
        let ctx = Context::new(6, 5).unwrap();
        let gw = InvariantTable::new(TableKind::Gw, ctx).with_policy(crate::MissingPolicy::Zero);
        let mirror = InvariantTable::new(TableKind::W, ctx).with_policy(crate::MissingPolicy::Zero);
        let out = solve_w_from_gw(&gw, &mirror, &KeyDomain::full(ctx, 2, 2)).unwrap();
        assert!(!out.is_empty());
        assert!(out.entries().all(|(_, v)| v == &int(0)));
    }

    #[test]
    fn inconsistent_inputs_are_reported() {
        // CP²: three keys all determine <2,2>_1
        let ctx = Context::new(4, 1).unwrap();
        let mut w = InvariantTable::new(TableKind::W, ctx);
        w.insert(WKey::new(ctx, 2, 1, ms(&[2]), 1), int(1)).unwrap();
        w.insert(WKey::new(ctx, 2, 2, ms(&[]), 1), int(5)).unwrap();
        let err = solve_gw_from_w(&w, &KeyDomain::from_table(&w)).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }), "{err}");
    }

    #[test]
    fn missing_factor_names_the_term() {
        let ctx = Context::new(8, 8).unwrap();
        let gw = InvariantTable::new(TableKind::Gw, ctx);
        let w = InvariantTable::new(TableKind::W, ctx);
        let err = evaluate_rhs(&WKey::new(ctx, 2, 2, ms(&[2]), 1), &gw, &w).unwrap_err();
        match err {
            Error::InTerm { term, factor, source } => {
                assert!(term.starts_with("g=0"));
                assert_eq!(factor, "<2,2,2>_1");
                assert!(matches!(*source, Error::MissingEntry { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
