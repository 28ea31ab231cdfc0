//! Randomized consistency runs: random GW tables and random mirror data are
//! pushed through [`solve_w_from_gw`], and the result is checked both by the
//! series composition and by re-expanding every key.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gmt::{solve_w_from_gw, verify_identity, KeyDomain};
use crate::invariants::{multisets_of_weight, Context, GwKey, InvariantTable, TableKind, WKey};
use crate::scalar::Scalar;
use crate::series::{verify_conjecture, Truncation};

/// Context and truncation of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialSpec {
    pub context: Context,
    pub truncation: Truncation,
}

impl TrialSpec {
    /// `N` in `4..=8`, `k` in `1..=N`, `d_max` in `1..=3`, `n_max` in `0..=3`.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.gen_range(4..=8);
        let k = rng.gen_range(1..=n);
        Self {
            context: Context::new(n, k).expect("valid range"),
            truncation: Truncation::new(rng.gen_range(1..=3), rng.gen_range(0..=3)),
        }
    }

    /// Insertion cap for the solved W keys. When `k > N` the mirror map has
    /// insertion-free corrections, so the conjecture check needs `d_max` more.
    pub fn working_insertions(&self) -> u32 {
        let t = self.truncation;
        if self.context.k > self.context.n {
            t.n_max + t.d_max
        } else {
            t.n_max
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub spec: TrialSpec,
    pub gw_entries: usize,
    pub mirror_entries: usize,
    pub solved_keys: usize,
    pub conjecture_checks: usize,
    pub identity_checks: usize,
    pub failures: Vec<String>,
}

impl TrialOutcome {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
    pub pass: bool,
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.trials.iter().enumerate() {
            writeln!(
                f,
                "{} trial {i}: N={} k={} d_max={} n_max={} gw={} mirror={} solved={} conjecture={} identity={}",
                if t.pass() { "PASS" } else { "FAIL" },
                t.spec.context.n,
                t.spec.context.k,
                t.spec.truncation.d_max,
                t.spec.truncation.n_max,
                t.gw_entries,
                t.mirror_entries,
                t.solved_keys,
                t.conjecture_checks,
                t.identity_checks
            )?;
            for failure in &t.failures {
                writeln!(f, "  {failure}")?;
            }
        }
        let passed = self.trials.iter().filter(|t| t.pass()).count();
        writeln!(
            f,
            "{} seed {}: {passed}/{} trials passed",
            if self.pass { "PASS" } else { "FAIL" },
            self.seed,
            self.trials.len()
        )
    }
}

/// A small random rational, zero included.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=6).into())
}

/// Random values on every GW key of degree `1..=d_max` with at most
/// `max_insertions` insertions.
pub fn random_gw_table<R: Rng>(context: Context, d_max: u32, max_insertions: u32, rng: &mut R) -> InvariantTable {
    let mut table = InvariantTable::new(TableKind::Gw, context);
    for d in 1..=d_max {
        let target = context.n as i64 - 5 + context.index() * d as i64;
        for ins in multisets_of_weight(2, context.top(), target, max_insertions) {
            table
                .insert(GwKey::new(context, ins, d), random_scalar(rng))
                .expect("enumerated keys are canonical");
        }
    }
    table
}

/// Random values on every `b = 0` W key of degree `1..=d_max` with at most
/// `max_insertions` insertions.
pub fn random_mirror_data<R: Rng>(context: Context, d_max: u32, max_insertions: u32, rng: &mut R) -> InvariantTable {
    let mut table = InvariantTable::new(TableKind::W, context);
    for d in 1..=d_max {
        for a in 0..=context.top() {
            let target = context.n as i64 - 3 + context.index() * d as i64 - a as i64;
            for ins in multisets_of_weight(2, context.top(), target, max_insertions) {
                table
                    .insert(WKey::new(context, a, 0, ins, d), random_scalar(rng))
                    .expect("enumerated keys are canonical");
            }
        }
    }
    table
}

pub fn run_trial<R: Rng>(spec: TrialSpec, rng: &mut R) -> Result<TrialOutcome> {
    let ctx = spec.context;
    let trunc = spec.truncation;
    let n_work = spec.working_insertions();
    // the GW factors carry a, b, the free insertions and up to d_max glued points
    let gw = random_gw_table(ctx, trunc.d_max, n_work + trunc.d_max + 2, rng);
    let mirror = random_mirror_data(ctx, trunc.d_max, n_work, rng);
    let domain = KeyDomain::full(ctx, trunc.d_max, n_work);
    let w = solve_w_from_gw(&gw, &mirror, &domain)?;

    let mut failures = Vec::new();
    let mut conjecture_checks = 0;
    for a in 0..=ctx.top() {
        for b in 0..=a {
            let report = verify_conjecture(a, b, &gw, &w, trunc)?;
            conjecture_checks += 1;
            if !report.pass {
                failures.push(report.to_string().trim_end().to_string());
            }
        }
    }
    let mut identity_checks = 0;
    for key in domain.keys() {
        let report = verify_identity(key, &gw, &w)?;
        identity_checks += 1;
        if !report.equal {
            failures.push(format!("identity failed for {key}"));
        }
    }
    Ok(TrialOutcome {
        spec,
        gw_entries: gw.len(),
        mirror_entries: mirror.len(),
        solved_keys: w.len(),
        conjecture_checks,
        identity_checks,
        failures,
    })
}

/// Runs `trials` random trials from a fixed seed; identical seeds give
/// identical reports.
pub fn run_selftest(seed: u64, trials: usize) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::with_capacity(trials);
    for _ in 0..trials {
        let spec = TrialSpec::random(&mut rng);
        outcomes.push(run_trial(spec, &mut rng)?);
    }
    let pass = outcomes.iter().all(TrialOutcome::pass);
    Ok(SelftestReport {
        seed,
        trials: outcomes,
        pass,
    })
}
