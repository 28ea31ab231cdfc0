//! Sparse polynomials in `q` and `v^2..v^{N-2}` with truncation caps.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Scalar;

use super::Truncation;

/// `q^q Π_j (v^{j+2})^{exps[j]}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: u32,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(q: u32, exps: Vec<u32>) -> Self {
        Self { q, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(0, vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            q: self.q + other.q,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub(crate) struct Poly {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Product truncated to `q <= d_max` and total degree `<= n_max`.
    pub fn mul(&self, other: &Poly, trunc: Truncation) -> Poly {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.q + m2.q > trunc.d_max || m1.degree() + m2.degree() > trunc.n_max {
                    continue;
                }
                *acc.entry(m1.times(m2)).or_insert_with(Scalar::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly { terms: acc }
    }

    /// Multiplies by `q^shift`, dropping what exceeds the cap.
    pub fn shift_q(&self, shift: u32, trunc: Truncation) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.q + shift <= trunc.d_max)
                .map(|(m, c)| (Monomial::new(m.q + shift, m.exps.clone()), c.clone()))
                .collect(),
        }
    }

    pub fn truncated(&self, trunc: Truncation) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.q <= trunc.d_max && m.degree() <= trunc.n_max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn min_q(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.q).min()
    }

    /// `exp(self)` for a polynomial of positive `q`-order: `Σ_m self^m / m!`.
    pub fn exp(&self, nvars: usize, trunc: Truncation) -> Poly {
        debug_assert!(self.min_q().is_none_or(|q| q >= 1));
        let mut out = Poly::constant(nvars, Scalar::from_integer(1.into()));
        let mut power = out.clone();
        for m in 1..=trunc.d_max {
            power = power.mul(self, trunc);
            if power.is_zero() {
                break;
            }
            power = power.scaled(&Scalar::new(1.into(), m.into()));
            out.add_scaled(&power, &Scalar::from_integer(1.into()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn t(d: u32, n: u32) -> Truncation {
        Truncation::new(d, n)
    }

    #[test]
    fn cancellation_removes_entries() {
        let mut p = Poly::zero();
        p.add_term(Monomial::new(1, vec![1]), int(3));
        p.add_term(Monomial::new(1, vec![1]), int(-3));
        assert!(p.is_zero());
    }

    #[test]
    fn truncated_product() {
        let mut x = Poly::zero();
        x.add_term(Monomial::new(1, vec![1]), int(1));
        let sq = x.mul(&x, t(1, 5));
        assert!(sq.is_zero());
        let sq = x.mul(&x, t(2, 5));
        assert_eq!(sq.terms.get(&Monomial::new(2, vec![2])), Some(&int(1)));
    }

    #[test]
    fn exponential_of_q_x() {
        // exp(2 q x) = 1 + 2qx + 2q^2x^2 + 4/3 q^3 x^3
        let mut s = Poly::zero();
        s.add_term(Monomial::new(1, vec![1]), int(2));
        let e = s.exp(1, t(3, 3));
        assert_eq!(e.terms.len(), 4);
        assert_eq!(e.terms[&Monomial::new(2, vec![2])], int(2));
        assert_eq!(e.terms[&Monomial::new(3, vec![3])], ratio(4, 3));
    }
}
