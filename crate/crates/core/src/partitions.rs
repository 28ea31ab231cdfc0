//! Integer partitions and the combinatorial weights of the correction sum.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::InsertionMultiset;
use crate::scalar::{self, Scalar};

/// A partition `g_1 <= g_2 <= ... <= g_l` of `g`, stored nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order. Returns `None` if a part is zero
    /// or the list is empty.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return None;
        }
        parts.sort_unstable();
        Some(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `g` into exactly `l` parts, in lexicographic order.
pub fn enumerate_partitions(g: u32, l: u32) -> Result<Vec<Partition>> {
    if l < 1 || l > g {
        return Err(Error::EmptyDomain { g, l });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(l as usize);
    fill(g, l, 1, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: u32, slots: u32, min: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if slots == 1 {
        if remaining >= min {
            current.push(remaining);
            out.push(Partition {
                parts: current.clone(),
            });
            current.pop();
        }
        return;
    }
    // the remaining `slots` parts are all >= part, so part * slots <= remaining
    let mut part = min;
    while part * slots <= remaining {
        current.push(part);
        fill(remaining - part, slots - 1, part, current, out);
        current.pop();
        part += 1;
    }
}

/// Number of parts equal to `i`. Zero for `i` outside `1..=g`.
pub fn multiplicity(i: u32, sigma: &Partition) -> u32 {
    sigma.parts.iter().filter(|&&p| p == i).count() as u32
}

/// `S(σ) = Π_i 1 / mul(i, σ)!`.
pub fn symmetry_factor(sigma: &Partition) -> Scalar {
    let denom = (1..=sigma.total())
        .map(|i| scalar::factorial(multiplicity(i, sigma)))
        .fold(BigUint::one(), |acc, f| acc * f);
    Scalar::new(1.into(), denom.into())
}

/// One way of distributing the insertions among the free part (`p = 0`) and the
/// `l` frozen factors (`p = 1..=l`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InsertionSplit {
    /// Insertion exponents `j`, ascending; column index of `assignment`.
    pub exponents: Vec<u32>,
    /// `assignment[p][i]` is `m_p^{exponents[i]}`.
    pub assignment: Vec<Vec<u32>>,
    /// `Π_j n_j! / (m_0^j! Π_p m_p^j!)`.
    #[serde(serialize_with = "serialize_biguint")]
    pub weight: BigUint,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl InsertionSplit {
    /// Number of frozen factors `l`.
    pub fn factors(&self) -> usize {
        self.assignment.len() - 1
    }

    /// The insertions assigned to slot `p` (0 is the free part).
    pub fn part(&self, p: usize) -> InsertionMultiset {
        InsertionMultiset::from_counts(
            self.exponents
                .iter()
                .zip(&self.assignment[p])
                .map(|(&j, &m)| (j, m)),
        )
    }

    /// All insertions assigned to the frozen factors `p >= 1`.
    pub fn absorbed(&self) -> InsertionMultiset {
        InsertionMultiset::from_counts(self.exponents.iter().enumerate().map(|(i, &j)| {
            let m = self.assignment[1..].iter().map(|row| row[i]).sum();
            (j, m)
        }))
    }
}

/// Weak compositions of `n` into `parts` nonnegative summands, lexicographic
/// with the first summand largest first.
fn weak_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0; parts];
    compose_rec(n, 0, &mut current, &mut out);
    out
}

fn compose_rec(remaining: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for v in (0..=remaining).rev() {
        current[idx] = v;
        compose_rec(remaining - v, idx + 1, current, out);
    }
}

/// Streams every split of the insertion profile `n` over `l + 1` slots.
///
/// The per-exponent compositions are small and materialized; their product
/// (which grows like `Π_j (l+1)^{n_j}`) is walked with an odometer.
pub fn enumerate_insertion_splits(n: &InsertionMultiset, l: usize) -> InsertionSplits {
    let exponents: Vec<u32> = n.iter().map(|(j, _)| j).collect();
    let per_exponent: Vec<Vec<Vec<u32>>> = n
        .iter()
        .map(|(_, count)| weak_compositions(count, l + 1))
        .collect();
    let numerator = n
        .iter()
        .map(|(_, count)| scalar::factorial(count))
        .fold(BigUint::one(), |a, b| a * b);
    InsertionSplits {
        exponents,
        per_exponent,
        numerator,
        slots: l + 1,
        odometer: None,
        done: false,
    }
}

/// Iterator returned by [`enumerate_insertion_splits`].
#[derive(Clone, Debug)]
pub struct InsertionSplits {
    exponents: Vec<u32>,
    per_exponent: Vec<Vec<Vec<u32>>>,
    numerator: BigUint,
    slots: usize,
    odometer: Option<Vec<usize>>,
    done: bool,
}

impl InsertionSplits {
    fn advance(&mut self) -> bool {
        let Some(odo) = self.odometer.as_mut() else {
            self.odometer = Some(vec![0; self.per_exponent.len()]);
            return true;
        };
        for (i, digit) in odo.iter_mut().enumerate().rev() {
            *digit += 1;
            if *digit < self.per_exponent[i].len() {
                return true;
            }
            *digit = 0;
        }
        false
    }
}

impl Iterator for InsertionSplits {
    type Item = InsertionSplit;

    fn next(&mut self) -> Option<InsertionSplit> {
        if self.done || !self.advance() {
            self.done = true;
            return None;
        }
        let odo = self.odometer.as_ref().expect("odometer initialized");
        let mut assignment = vec![vec![0u32; self.exponents.len()]; self.slots];
        let mut denom = BigUint::one();
        for (i, &choice) in odo.iter().enumerate() {
            for (p, &m) in self.per_exponent[i][choice].iter().enumerate() {
                assignment[p][i] = m;
                denom *= scalar::factorial(m);
            }
        }
        Some(InsertionSplit {
            exponents: self.exponents.clone(),
            assignment,
            weight: &self.numerator / denom,
        })
    }
}
