//! Generating-function check of the correction expansion: the perturbed
//! two-point Gromov–Witten function composed with the mirror map must equal
//! the two-point generating function of the virtual structure constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{
    compose, mirror_component, monomial_label, perturbed_two_point_function, two_point_generating_function,
    Substitution, Truncation,
};
use crate::error::Result;
use crate::invariants::InvariantTable;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientMismatch {
    pub monomial: String,
    #[serde(serialize_with = "scalar::serialize")]
    pub generating_function: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub composed: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub a: u32,
    pub b: u32,
    pub truncation: Truncation,
    /// Monomials compared (nonzero on at least one side).
    pub compared: usize,
    pub mismatches: Vec<CoefficientMismatch>,
    pub pass: bool,
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (a,b)=({},{}) d_max={} n_max={}: {} coefficients compared, {} mismatches",
            if self.pass { "PASS" } else { "FAIL" },
            self.a,
            self.b,
            self.truncation.d_max,
            self.truncation.n_max,
            self.compared,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  {}: generating function {}, composed {}",
                m.monomial,
                scalar::format(&m.generating_function),
                scalar::format(&m.composed)
            )?;
        }
        Ok(())
    }
}

/// Compares `<O_{h^a} O_{h^b}>_0(t(x))` with `w(O_{h^a} O_{h^b})_0(x)`
/// coefficientwise up to `trunc`.
///
/// Only the mirror-map components and degrees the GW side actually uses are
/// built, so the W table needs only the `b = 0` entries those touch.
pub fn verify_conjecture(
    a: u32,
    b: u32,
    gw: &InvariantTable,
    w: &InvariantTable,
    trunc: Truncation,
) -> Result<ConjectureReport> {
    let ctx = w.context();
    ctx.check(&gw.context())?;
    let expected = two_point_generating_function(a, b, w, trunc)?;

    // For k <= N every insertion-dependent mirror correction carries at least
    // one insertion, so substitution never lowers the insertion count. For
    // k > N a correction may be insertion-free but always raises the q-power,
    // so d_max extra insertions suffice.
    let working = if ctx.k > ctx.n {
        Truncation::new(trunc.d_max, trunc.n_max + trunc.d_max)
    } else {
        trunc
    };
    let gw_side = perturbed_two_point_function(a, b, gw, working)?;

    // Component p is needed to q-order d_max when t^p occurs in the affine
    // part, and only to d_max - 1 when it occurs under some Q^d with d >= 1.
    let mut needed: BTreeMap<usize, u32> = BTreeMap::new();
    let below = trunc.d_max.saturating_sub(1);
    for p in 0..=ctx.top() as usize {
        if !gw_side.affine_coefficient(p).is_zero() {
            needed.insert(p, trunc.d_max);
        }
    }
    if !gw_side.graded_is_zero() {
        needed.entry(1).or_insert(below);
    }
    for (m, _) in gw_side.graded_terms() {
        for (j, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                needed.entry(j + 2).or_insert(below);
            }
        }
    }
    let mut components = vec![None; ctx.top() as usize + 1];
    for (p, d) in needed {
        let c = mirror_component(w, Truncation::new(d, working.n_max), p)?;
        components[p] = Some(c.widened(working));
    }
    let composed = compose(&gw_side, &Substitution::new(components), working)?.truncate_to(trunc)?;

    let lhs = expected.coefficients();
    let rhs = composed.coefficients();
    let monomials: BTreeSet<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
    let zero = Scalar::zero();
    let mismatches: Vec<CoefficientMismatch> = monomials
        .iter()
        .filter_map(|m| {
            let l = lhs.get(m).unwrap_or(&zero);
            let r = rhs.get(m).unwrap_or(&zero);
            (l != r).then(|| CoefficientMismatch {
                monomial: monomial_label(m),
                generating_function: l.clone(),
                composed: r.clone(),
            })
        })
        .collect();
    Ok(ConjectureReport {
        a,
        b,
        truncation: trunc,
        compared: monomials.len(),
        pass: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn octic_passes() {
        let r = verify_conjecture(2, 2, &fixtures::octic_gw(), &fixtures::octic_w(), Truncation::new(2, 1)).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.compared, 3);
    }

    #[test]
    fn cp2_passes() {
        let r = verify_conjecture(1, 1, &fixtures::cp2_gw(), &fixtures::cp2_w(), Truncation::new(1, 2)).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn tampered_value_is_reported() {
        let mut gw = fixtures::octic_gw();
        let ins = crate::InsertionMultiset::from_exponents([2, 2, 2]);
        let key = crate::InvariantKey::Gw(crate::GwKey::new(gw.context(), ins, 1));
        let v = gw.get(&key).unwrap().clone();
        gw.set_unchecked(key, v + scalar::int(1));
        let r = verify_conjecture(2, 2, &gw, &fixtures::octic_w(), Truncation::new(2, 1)).unwrap();
        assert!(!r.pass);
        let m = &r.mismatches[0];
        assert_eq!(m.monomial, "q^1 x2^1");
        assert_eq!(&m.composed - &m.generating_function, scalar::int(1));
    }
}
