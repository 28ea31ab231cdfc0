//! Truncated formal series graded by the Novikov symbol `q = e^{x^1}`.
//!
//! A [`TruncatedSeries`] is an affine form in `x^0..x^{N-2}` plus, for each
//! degree `1 <= d <= d_max`, a polynomial in `x^2..x^{N-2}` of total degree at
//! most `n_max` attached to `q^d`. The variables `x^0` and `x^1` never occur in
//! the graded part: `x^1` only enters through `q`.

mod conjecture;
mod poly;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{multisets_of_weight, Context, GwKey, InsertionMultiset, InvariantTable, TableKind, WKey};
use crate::scalar::{self, Scalar};

pub use conjecture::{verify_conjecture, CoefficientMismatch, ConjectureReport};
pub use poly::Monomial;
pub(crate) use poly::Poly;

/// Caps on the Novikov degree and on the number of insertions per monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub d_max: u32,
    pub n_max: u32,
}

impl Truncation {
    pub fn new(d_max: u32, n_max: u32) -> Self {
        Self { d_max, n_max }
    }

    fn contains(&self, other: &Truncation) -> bool {
        other.d_max <= self.d_max && other.n_max <= self.n_max
    }
}

fn same_truncation(expected: Truncation, found: Truncation, what: &str) -> Result<()> {
    if expected != found {
        return Err(Error::TruncationMismatch(format!(
            "{what} has (d_max={}, n_max={}), expected (d_max={}, n_max={})",
            found.d_max, found.n_max, expected.d_max, expected.n_max
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    context: Context,
    trunc: Truncation,
    constant: Scalar,
    affine: Vec<Scalar>,
    graded: Poly,
}

impl TruncatedSeries {
    pub fn zero(context: Context, trunc: Truncation) -> Self {
        Self {
            context,
            trunc,
            constant: Scalar::zero(),
            affine: vec![Scalar::zero(); context.top() as usize + 1],
            graded: Poly::zero(),
        }
    }

    /// The coordinate `x^p`.
    pub fn variable(context: Context, trunc: Truncation, p: usize) -> Self {
        let mut s = Self::zero(context, trunc);
        s.affine[p] = Scalar::one();
        s
    }

    pub fn context(&self) -> Context {
        self.context
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Number of graded variables `x^2..x^{N-2}`.
    pub fn graded_vars(&self) -> usize {
        self.context.top() as usize - 1
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.constant
    }

    pub fn affine_coefficient(&self, p: usize) -> &Scalar {
        &self.affine[p]
    }

    /// Coefficient of `q^d Π_j (x^j)^{exps[j-2]}`.
    pub fn graded_coefficient(&self, d: u32, exps: &[u32]) -> Scalar {
        self.graded
            .terms
            .get(&Monomial::new(d, exps.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of `q^d Π x^{c}` for a multiset of exponents in `2..=N-2`.
    pub fn coefficient_of(&self, d: u32, insertions: &InsertionMultiset) -> Scalar {
        self.graded_coefficient(d, &self.exponent_vector(insertions))
    }

    fn exponent_vector(&self, insertions: &InsertionMultiset) -> Vec<u32> {
        let mut exps = vec![0; self.graded_vars()];
        for (c, m) in insertions.iter() {
            exps[c as usize - 2] += m;
        }
        exps
    }

    pub fn set_constant(&mut self, c: Scalar) {
        self.constant = c;
    }

    pub fn set_affine(&mut self, p: usize, c: Scalar) {
        self.affine[p] = c;
    }

    /// Adds to the coefficient of `q^d Π x^{c}`; ignored outside the caps.
    pub fn add_graded(&mut self, d: u32, insertions: &InsertionMultiset, c: Scalar) {
        assert!(d >= 1, "graded terms carry q^d with d >= 1");
        if d > self.trunc.d_max || insertions.len() > self.trunc.n_max {
            return;
        }
        let m = Monomial::new(d, self.exponent_vector(insertions));
        self.graded.add_term(m, c);
    }

    /// Nonzero graded terms as `(monomial, coefficient)`.
    pub fn graded_terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.graded.terms.iter()
    }

    pub fn graded_is_zero(&self) -> bool {
        self.graded.is_zero()
    }

    /// Lowest `q` power present in the graded part.
    pub fn q_order(&self) -> Option<u32> {
        self.graded.min_q()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.affine.iter().all(Zero::is_zero) && self.graded.is_zero()
    }

    fn has_affine_part(&self) -> bool {
        !self.constant.is_zero() || self.affine.iter().any(|c| !c.is_zero())
    }

    fn is_identity_component(&self, p: usize) -> bool {
        self.constant.is_zero()
            && self
                .affine
                .iter()
                .enumerate()
                .all(|(i, c)| if i == p { c.is_one() } else { c.is_zero() })
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.context.check(&other.context)?;
        same_truncation(self.trunc, other.trunc, "right operand")?;
        let mut out = self.clone();
        out.constant += &other.constant;
        for (a, b) in out.affine.iter_mut().zip(&other.affine) {
            *a += b;
        }
        out.graded.add_scaled(&other.graded, &Scalar::one());
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> TruncatedSeries {
        TruncatedSeries {
            context: self.context,
            trunc: self.trunc,
            constant: &self.constant * c,
            affine: self.affine.iter().map(|a| a * c).collect(),
            graded: self.graded.scaled(c),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    /// Drops terms beyond a smaller truncation.
    pub fn truncate_to(&self, trunc: Truncation) -> Result<TruncatedSeries> {
        if !self.trunc.contains(&trunc) {
            return Err(Error::TruncationMismatch(format!(
                "cannot widen (d_max={}, n_max={}) to (d_max={}, n_max={})",
                self.trunc.d_max, self.trunc.n_max, trunc.d_max, trunc.n_max
            )));
        }
        Ok(TruncatedSeries {
            context: self.context,
            trunc,
            constant: self.constant.clone(),
            affine: self.affine.clone(),
            graded: self.graded.truncated(trunc),
        })
    }

    /// Re-tags the series with larger caps; the coefficients already fit.
    pub(crate) fn widened(mut self, trunc: Truncation) -> TruncatedSeries {
        debug_assert!(trunc.contains(&self.trunc));
        self.trunc = trunc;
        self
    }

    /// Every nonzero coefficient keyed by `(q power, exponents of x^0..x^{N-2})`.
    pub fn coefficients(&self) -> BTreeMap<(u32, Vec<u32>), Scalar> {
        let width = self.affine.len();
        let mut out = BTreeMap::new();
        if !self.constant.is_zero() {
            out.insert((0, vec![0; width]), self.constant.clone());
        }
        for (p, c) in self.affine.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; width];
                e[p] = 1;
                out.insert((0, e), c.clone());
            }
        }
        for (m, c) in &self.graded.terms {
            let mut e = vec![0, 0];
            e.extend_from_slice(&m.exps);
            out.insert((m.q, e), c.clone());
        }
        out
    }

    /// One line per nonzero coefficient, `q^d x2^i2 x3^i3 : p/q`, sorted by
    /// `(d, exponent vector)`; only nonzero exponents are written.
    pub fn dump(&self) -> String {
        let mut text = String::new();
        for ((q, exps), c) in self.coefficients() {
            write!(text, "q^{q}").unwrap();
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    write!(text, " x{j}^{e}").unwrap();
                }
            }
            writeln!(text, " : {}", scalar::format(&c)).unwrap();
        }
        text
    }
}

pub(crate) fn monomial_label((q, exps): &(u32, Vec<u32>)) -> String {
    let mut s = format!("q^{q}");
    for (j, &e) in exps.iter().enumerate() {
        if e > 0 {
            write!(s, " x{j}^{e}").unwrap();
        }
    }
    s
}

fn check_boundary(context: Context, a: u32, b: u32) -> Result<()> {
    if a > context.top() || b > context.top() {
        return Err(Error::InvalidKey {
            key: format!("({a},{b})"),
            reason: format!("boundary exponents must lie in 0..={}", context.top()),
        });
    }
    Ok(())
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

/// `k x^{N-2-a-b} + Σ_d q^d Σ_m w(a,b|Π O_{h^p}^{m_p})_{0,d} Π (x^p)^{m_p}/m_p!`.
pub fn two_point_generating_function(a: u32, b: u32, w: &InvariantTable, trunc: Truncation) -> Result<TruncatedSeries> {
    expect_kind(w, TableKind::W)?;
    let ctx = w.context();
    check_boundary(ctx, a, b)?;
    let mut s = TruncatedSeries::zero(ctx, trunc);
    if let Some(p) = ctx.top().checked_sub(a + b) {
        s.set_affine(p as usize, ctx.k_scalar());
    }
    for d in 1..=trunc.d_max {
        let target = ctx.n as i64 - 3 + ctx.index() * d as i64 - a as i64 - b as i64;
        for ins in multisets_of_weight(2, ctx.top(), target, trunc.n_max) {
            let v = w.lookup_w(&WKey::new(ctx, a, b, ins.clone(), d))?;
            s.add_graded(d, &ins, v / ins.factorial_product());
        }
    }
    Ok(s)
}

/// `k t^{N-2-a-b} + Σ_d Q^d Σ_m <a,b,Π O_{h^p}^{m_p}>_{0,d} Π (t^p)^{m_p}/m_p!`
/// in the variables `t`, with `Q = e^{t^1}`.
pub fn perturbed_two_point_function(a: u32, b: u32, gw: &InvariantTable, trunc: Truncation) -> Result<TruncatedSeries> {
    expect_kind(gw, TableKind::Gw)?;
    let ctx = gw.context();
    check_boundary(ctx, a, b)?;
    let mut s = TruncatedSeries::zero(ctx, trunc);
    if let Some(p) = ctx.top().checked_sub(a + b) {
        s.set_affine(p as usize, ctx.k_scalar());
    }
    for d in 1..=trunc.d_max {
        // same weight condition as the W selection rule once a, b are folded in
        let target = ctx.n as i64 - 3 + ctx.index() * d as i64 - a as i64 - b as i64;
        for ins in multisets_of_weight(2, ctx.top(), target, trunc.n_max) {
            let mut all = ins.clone();
            all.insert(a, 1);
            all.insert(b, 1);
            let v = gw.lookup_gw(&GwKey::new(ctx, all, d))?;
            s.add_graded(d, &ins, v / ins.factorial_product());
        }
    }
    Ok(s)
}

/// `t^p = x^p + (1/k) (graded part of the (N-2-p, 0) generating function)`.
pub fn mirror_component(w: &InvariantTable, trunc: Truncation, p: usize) -> Result<TruncatedSeries> {
    let ctx = w.context();
    let f = two_point_generating_function(ctx.top() - p as u32, 0, w, trunc)?;
    let inv_k = Scalar::new(1.into(), ctx.k.into());
    let mut t = TruncatedSeries::variable(ctx, trunc, p);
    t.graded = f.graded.scaled(&inv_k);
    Ok(t)
}

/// The mirror map `t^0..t^{N-2}` as series in `x`.
pub fn mirror_map(w: &InvariantTable, trunc: Truncation) -> Result<Vec<TruncatedSeries>> {
    (0..=w.context().top() as usize)
        .map(|p| mirror_component(w, trunc, p))
        .collect()
}

/// `Σ_m (scale · s)^m / m!` for a series without affine part.
pub fn exp_positive_order(s: &TruncatedSeries, scale: i64) -> Result<TruncatedSeries> {
    if s.has_affine_part() {
        return Err(Error::NonPositiveOrder);
    }
    let nvars = s.graded_vars();
    let e = s.graded.scaled(&scalar::int(scale)).exp(nvars, s.trunc);
    Ok(from_poly(s.context, s.trunc, e))
}

/// Splits a polynomial whose `q^0` part is a constant into a series.
fn from_poly(context: Context, trunc: Truncation, mut p: Poly) -> TruncatedSeries {
    let nvars = context.top() as usize - 1;
    let mut s = TruncatedSeries::zero(context, trunc);
    if let Some(c) = p.terms.remove(&Monomial::one(nvars)) {
        s.constant = c;
    }
    debug_assert!(p.min_q().is_none_or(|q| q >= 1));
    s.graded = p;
    s
}

/// A substitution `y^p = z^p + Δ^p(z)`; components may be omitted when the
/// series being substituted into does not use them.
#[derive(Clone, Debug)]
pub struct Substitution {
    components: Vec<Option<TruncatedSeries>>,
}

impl Substitution {
    pub fn new(components: Vec<Option<TruncatedSeries>>) -> Self {
        Self { components }
    }

    pub fn full(components: Vec<TruncatedSeries>) -> Self {
        Self::new(components.into_iter().map(Some).collect())
    }

    fn delta(&self, p: usize) -> Result<&Poly> {
        self.components
            .get(p)
            .and_then(Option::as_ref)
            .map(|s| &s.graded)
            .ok_or(Error::MissingSubstitution(p))
    }

    fn validate(&self, context: Context, trunc: Truncation) -> Result<()> {
        for (p, c) in self.components.iter().enumerate() {
            let Some(c) = c else { continue };
            context.check(&c.context)?;
            same_truncation(trunc, c.trunc, &format!("substitution component x{p}"))?;
            if !c.is_identity_component(p) {
                return Err(Error::InvalidSubstitution {
                    index: p,
                    reason: "affine part must be exactly the variable itself".into(),
                });
            }
        }
        Ok(())
    }
}

impl From<Vec<TruncatedSeries>> for Substitution {
    fn from(v: Vec<TruncatedSeries>) -> Self {
        Self::full(v)
    }
}

/// Substitutes `y^p = z^p + Δ^p(z)` into `f(y)`.
///
/// The grading symbol transforms as `e^{d y^1} = e^{d z^1} exp(d Δ^1)`, which
/// covers both directions (`t ↦ x` and `x ↦ t`).
pub fn compose(f: &TruncatedSeries, subst: &Substitution, trunc: Truncation) -> Result<TruncatedSeries> {
    let ctx = f.context;
    same_truncation(trunc, f.trunc, "series")?;
    subst.validate(ctx, trunc)?;
    let nvars = f.graded_vars();

    let mut graded = Poly::zero();
    for (p, c) in f.affine.iter().enumerate() {
        if !c.is_zero() {
            graded.add_scaled(subst.delta(p)?, c);
        }
    }

    if !f.graded.is_zero() {
        let delta1 = subst.delta(1)?;
        // (z^j + Δ^j)^e, filled on demand
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); nvars];
        let mut by_degree: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &f.graded.terms {
            let mut term = Poly::constant(nvars, c.clone());
            for (j, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if powers[j].is_empty() {
                    let mut base = subst.delta(j + 2)?.clone();
                    let mut exps = vec![0; nvars];
                    exps[j] = 1;
                    base.add_term(Monomial::new(0, exps), Scalar::one());
                    powers[j].push(Poly::constant(nvars, Scalar::one()));
                    powers[j].push(base);
                }
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul(&powers[j][1], trunc);
                    powers[j].push(next);
                }
                term = term.mul(&powers[j][e as usize], trunc);
            }
            by_degree.entry(m.q).or_default().add_scaled(&term, &Scalar::one());
        }
        for (d, body) in by_degree {
            let shifted = Poly {
                terms: delta1.terms.clone(),
            }
            .scaled(&scalar::int(d as i64))
            .exp(nvars, trunc)
            .mul(&body, trunc)
            .shift_q(d, trunc);
            graded.add_scaled(&shifted, &Scalar::one());
        }
    }

    Ok(TruncatedSeries {
        context: ctx,
        trunc,
        constant: f.constant.clone(),
        affine: f.affine.clone(),
        graded,
    })
}

/// Solves `t = x + Δ(x)` for `x(t) = t + ε(t)` by the fixed-point iteration
/// `ε ← -Δ(t + ε)`; each pass fixes one more power of `q`.
pub fn invert_mirror_map(t: &[TruncatedSeries], trunc: Truncation) -> Result<Vec<TruncatedSeries>> {
    let Some(first) = t.first() else {
        return Err(Error::NotInvertible("empty coordinate list".into()));
    };
    let ctx = first.context;
    if t.len() != ctx.top() as usize + 1 {
        return Err(Error::NotInvertible(format!(
            "expected {} coordinates, got {}",
            ctx.top() + 1,
            t.len()
        )));
    }
    for (p, c) in t.iter().enumerate() {
        ctx.check(&c.context)?;
        same_truncation(trunc, c.trunc, &format!("coordinate t{p}"))?;
        if !c.is_identity_component(p) {
            return Err(Error::NotInvertible(format!(
                "t{p} - x{p} has a q^0 part"
            )));
        }
    }
    let deltas: Vec<TruncatedSeries> = t
        .iter()
        .map(|c| {
            let mut d = TruncatedSeries::zero(ctx, trunc);
            d.graded = c.graded.clone();
            d
        })
        .collect();

    let mut current: Vec<TruncatedSeries> = (0..t.len()).map(|p| TruncatedSeries::variable(ctx, trunc, p)).collect();
    for _ in 0..=trunc.d_max + 1 {
        let subst = Substitution::full(current.clone());
        let next = deltas
            .iter()
            .enumerate()
            .map(|(p, delta)| {
                let correction = compose(delta, &subst, trunc)?;
                let mut x = TruncatedSeries::variable(ctx, trunc, p);
                x.graded = correction.graded.scaled(&-Scalar::one());
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::NotInvertible("fixed-point iteration did not stabilize".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{int, ratio};

    fn ms(e: &[u32]) -> InsertionMultiset {
        InsertionMultiset::from_exponents(e.iter().copied())
    }

    #[test]
    fn octic_two_point_function() {
        let w = fixtures::octic_w();
        let s = two_point_generating_function(2, 2, &w, Truncation::new(2, 1)).unwrap();
        assert_eq!(s.affine_coefficient(2), &int(8));
        assert_eq!(s.coefficient_of(1, &ms(&[2])), int(83871744));
        assert_eq!(s.coefficient_of(2, &ms(&[2])), int(1238948617930752));
        assert_eq!(s.coefficients().len(), 3);

        let s = two_point_generating_function(4, 0, &w, Truncation::new(1, 1)).unwrap();
        assert_eq!(s.affine_coefficient(2), &int(8));
        assert_eq!(s.coefficient_of(1, &ms(&[2])), int(24850432));
    }

    #[test]
    fn affine_dropped_when_out_of_range() {
        let w = fixtures::cp2_w();
        let s = two_point_generating_function(2, 1, &w, Truncation::new(1, 1)).unwrap();
        assert!(s.affine.iter().all(Zero::is_zero));
        assert_eq!(s.coefficient_of(1, &ms(&[2])), int(1));
    }

    #[test]
    fn zero_table_gives_affine_only() {
        let ctx = Context::new(6, 6).unwrap();
        let w = InvariantTable::new(TableKind::W, ctx).with_policy(crate::MissingPolicy::Zero);
        let s = two_point_generating_function(1, 1, &w, Truncation::new(3, 3)).unwrap();
        assert!(s.graded_is_zero());
        assert_eq!(s.affine_coefficient(2), &int(6));
        let t = mirror_map(&w, Truncation::new(3, 3)).unwrap();
        for (p, tp) in t.iter().enumerate() {
            assert_eq!(tp, &TruncatedSeries::variable(ctx, Truncation::new(3, 3), p));
        }
    }

    #[test]
    fn octic_mirror_component() {
        let w = fixtures::octic_w().with_policy(crate::MissingPolicy::Zero);
        let t = mirror_map(&w, Truncation::new(2, 1)).unwrap();
        assert_eq!(t[2].coefficient_of(1, &ms(&[2])), ratio(24850432, 8));
        assert_eq!(t[1].coefficient_of(1, &ms(&[])), ratio(4432896, 8));
        assert!(t[0].graded_is_zero());
    }

    #[test]
    fn exp_examples() {
        let ctx = Context::new(4, 4).unwrap();
        let trunc = Truncation::new(3, 3);
        let zero = TruncatedSeries::zero(ctx, trunc);
        let one = exp_positive_order(&zero, 1).unwrap();
        assert_eq!(one.constant_term(), &int(1));
        assert!(one.graded_is_zero());

        let mut s = TruncatedSeries::zero(ctx, trunc);
        s.add_graded(1, &ms(&[2]), int(1));
        let e = exp_positive_order(&s, 2).unwrap();
        assert_eq!(e.coefficient_of(1, &ms(&[2])), int(2));
        assert_eq!(e.coefficient_of(2, &ms(&[2, 2])), int(2));
        assert_eq!(e.coefficient_of(3, &ms(&[2, 2, 2])), ratio(4, 3));

        let mut s1 = TruncatedSeries::zero(ctx, Truncation::new(1, 3));
        s1.add_graded(1, &ms(&[2]), int(1));
        let e1 = exp_positive_order(&s1, 1).unwrap();
        assert_eq!(e1.coefficients().len(), 2);

        let x2 = TruncatedSeries::variable(ctx, trunc, 2);
        assert!(matches!(exp_positive_order(&x2, 1), Err(Error::NonPositiveOrder)));
    }

    #[test]
    fn compose_with_identity() {
        let w = fixtures::octic_w();
        let trunc = Truncation::new(2, 1);
        let f = two_point_generating_function(2, 2, &w, trunc).unwrap();
        let ctx = w.context();
        let id = Substitution::full((0..=6).map(|p| TruncatedSeries::variable(ctx, trunc, p)).collect());
        assert_eq!(compose(&f, &id, trunc).unwrap(), f);
    }

    #[test]
    fn compose_affine_with_mirror_map() {
        // 8 t^2 ∘ t(x) = 8 x^2 + q w(4,0|2)_1 x^2 + ...
        let w = fixtures::octic_w().with_policy(crate::MissingPolicy::Zero);
        let trunc = Truncation::new(2, 1);
        let ctx = w.context();
        let mut f = TruncatedSeries::zero(ctx, trunc);
        f.set_affine(2, int(8));
        let t = mirror_map(&w, trunc).unwrap();
        let g = compose(&f, &Substitution::full(t), trunc).unwrap();
        assert_eq!(g.affine_coefficient(2), &int(8));
        assert_eq!(g.coefficient_of(1, &ms(&[2])), int(24850432));
        assert_eq!(g.coefficient_of(2, &ms(&[2])), int(201251978293248));
    }

    #[test]
    fn compose_reports_missing_components() {
        let ctx = Context::new(5, 5).unwrap();
        let trunc = Truncation::new(1, 1);
        let mut f = TruncatedSeries::zero(ctx, trunc);
        f.add_graded(1, &ms(&[2]), int(1));
        let subst = Substitution::new(vec![None, None, Some(TruncatedSeries::variable(ctx, trunc, 2)), None]);
        assert!(matches!(compose(&f, &subst, trunc), Err(Error::MissingSubstitution(1))));
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let ctx = Context::new(5, 5).unwrap();
        let a = TruncatedSeries::zero(ctx, Truncation::new(1, 1));
        let b = TruncatedSeries::zero(ctx, Truncation::new(2, 1));
        assert!(matches!(a.add(&b), Err(Error::TruncationMismatch(_))));
        let id: Vec<_> = (0..4).map(|p| TruncatedSeries::variable(ctx, Truncation::new(1, 1), p)).collect();
        assert!(compose(&b, &Substitution::full(id), Truncation::new(2, 1)).is_err());
    }

    #[test]
    fn inversion_of_identity() {
        let ctx = Context::new(6, 6).unwrap();
        let trunc = Truncation::new(3, 2);
        let id: Vec<_> = (0..5).map(|p| TruncatedSeries::variable(ctx, trunc, p)).collect();
        assert_eq!(invert_mirror_map(&id, trunc).unwrap(), id);
    }

    #[test]
    fn octic_first_order_inverse() {
        let w = fixtures::octic_w().with_policy(crate::MissingPolicy::Zero);
        let trunc = Truncation::new(1, 1);
        let t = mirror_map(&w, trunc).unwrap();
        let x = invert_mirror_map(&t, trunc).unwrap();
        assert_eq!(x[2].coefficient_of(1, &ms(&[2])), ratio(-24850432, 8));
        assert_eq!(x[1].coefficient_of(1, &ms(&[])), ratio(-4432896, 8));
    }

    #[test]
    fn non_invertible_input() {
        let ctx = Context::new(5, 5).unwrap();
        let trunc = Truncation::new(1, 1);
        let mut t: Vec<_> = (0..4).map(|p| TruncatedSeries::variable(ctx, trunc, p)).collect();
        t[2].set_affine(3, int(1));
        assert!(matches!(invert_mirror_map(&t, trunc), Err(Error::NotInvertible(_))));
        t[2].set_affine(3, int(0));
        t[2].set_constant(int(1));
        assert!(matches!(invert_mirror_map(&t, trunc), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn dump_format() {
        let w = fixtures::octic_w();
        let s = two_point_generating_function(2, 2, &w, Truncation::new(2, 1)).unwrap();
        assert_eq!(s.dump(), "q^0 x2^1 : 8\nq^1 x2^1 : 83871744\nq^2 x2^1 : 1238948617930752\n");
    }
}
