//! Seeded fuzzing of the triangulated-category axioms.
//!
//! Trial `n` of a run draws everything from `SplitMix64::for_trial(seed, n)`,
//! so a run's outcome does not depend on how trials are scheduled across
//! threads.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::Serialize;

use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::homotopy::{kappa_equiv, quotient_hom_dim};
use crate::oracle;
use crate::problem::Problem;
use crate::randgen::{random_commuting_square, random_dims, random_index_set, random_morphism, random_object, CommutingSquare};
use crate::rep::{hom_basis, Morphism};
use crate::rng::SplitMix64;
use crate::tri::{fill_tr3, octahedron, rotate, tr1, AxiomError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub field: FieldSpec,
    pub max_indices: usize,
    pub max_dim: usize,
    pub trials: usize,
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    TR1,
    TR2,
    TR3,
    TR4,
}

pub const AXIOMS: [Axiom; 4] = [Axiom::TR1, Axiom::TR2, Axiom::TR3, Axiom::TR4];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleTally {
    pub agreed: usize,
    pub disagreed: usize,
    /// Checks skipped because exhaustive search was too large.
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub axiom: Axiom,
    pub seed: u64,
    pub trial: usize,
    pub message: String,
    /// Problem file holding the instance.
    pub reproducer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub field: String,
    pub trials: usize,
    pub tr1: Tally,
    pub tr2: Tally,
    pub tr3: Tally,
    pub tr4: Tally,
    pub oracle: OracleTally,
    /// TR3 trials that fell back to the identity square.
    pub tr3_fallbacks: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.oracle.disagreed == 0
    }

    pub fn tally(&self, axiom: Axiom) -> &Tally {
        match axiom {
            Axiom::TR1 => &self.tr1,
            Axiom::TR2 => &self.tr2,
            Axiom::TR3 => &self.tr3,
            Axiom::TR4 => &self.tr4,
        }
    }

    fn tally_mut(&mut self, axiom: Axiom) -> &mut Tally {
        match axiom {
            Axiom::TR1 => &mut self.tr1,
            Axiom::TR2 => &mut self.tr2,
            Axiom::TR3 => &mut self.tr3,
            Axiom::TR4 => &mut self.tr4,
        }
    }

    /// One line per axiom, then the oracle tally, then one line per failure.
    pub fn to_text(&self) -> String {
        let mut out = format!("seed {} field {} trials {}\n", self.seed, self.field, self.trials);
        for a in AXIOMS {
            let t = self.tally(a);
            let verdict = if t.failed == 0 { "PASS" } else { "FAIL" };
            out += &format!("{a:?} {verdict} {}/{}\n", t.passed, t.passed + t.failed);
        }
        let o = &self.oracle;
        out += &format!("oracle agreed {} disagreed {} skipped {}\n", o.agreed, o.disagreed, o.skipped);
        for f in &self.failures {
            out += &format!("failure {:?} seed {} trial {}: {}\n", f.axiom, f.seed, f.trial, f.message);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// `Err` holds the failure message and a reproducer problem file.
type Checked = Result<(), (String, String)>;

struct TrialOutcome {
    results: Vec<(Axiom, Checked)>,
    oracle: OracleTally,
    fallback: bool,
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".to_string())
}

fn check<F: Field>(
    reproducer: impl FnOnce() -> Problem<F>,
    run: impl FnOnce() -> Result<(), AxiomError>,
) -> Checked {
    let message = match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(())) => return Ok(()),
        Ok(Err(e)) => e.to_string(),
        Err(p) => format!("panic: {}", panic_message(p)),
    };
    Err((message, reproducer().to_json()))
}

fn reproducer<F: Field>(field: &F, maps: &[(&str, &Morphism<F>)]) -> Problem<F> {
    let idx = maps[0].1.source().dims().index_set();
    let mut p = Problem::new(field, idx);
    for (name, m) in maps {
        p.add_morphism(name, m);
    }
    p
}

/// Oracle hook; a no-op for fields the exhaustive search cannot handle.
trait OracleField: Field {
    fn cross_check(_b: &crate::rep::Representation<Self>, _c: &crate::rep::Representation<Self>, _rng: &mut SplitMix64, tally: &mut OracleTally) {
        tally.skipped += 1;
    }
}

impl OracleField for Rationals {}

impl OracleField for PrimeField {
    fn cross_check(b: &crate::rep::Representation<Self>, c: &crate::rep::Representation<Self>, rng: &mut SplitMix64, tally: &mut OracleTally) {
        let mut record = |ours: Option<bool>| match ours {
            None => tally.skipped += 1,
            Some(true) => tally.agreed += 1,
            Some(false) => tally.disagreed += 1,
        };
        record(oracle::hom_dim(b, c).map(|d| d == hom_basis(b, c).expect("compatible").len()));
        record(oracle::quotient_hom_dim(b, c).map(|d| d == quotient_hom_dim(b, c).expect("compatible")));
        let s = random_morphism(b, c, rng);
        let t = random_morphism(b, c, rng);
        record(oracle::kappa_equiv(&s, &t).map(|d| d == kappa_equiv(&s, &t).expect("parallel").is_some()));
    }
}

fn run_trial<F: OracleField>(field: &F, cfg: &FuzzConfig, trial: usize) -> TrialOutcome {
    let mut rng = SplitMix64::for_trial(cfg.seed, trial as u64);
    let idx = random_index_set(cfg.max_indices, &mut rng);
    let obj = |rng: &mut SplitMix64| {
        let d = random_dims(&idx, cfg.max_dim, rng);
        random_object(field, &d, rng)
    };
    let (a, b, c) = (obj(&mut rng), obj(&mut rng), obj(&mut rng));
    let s = random_morphism(&a, &b, &mut rng);
    let t = random_morphism(&b, &c, &mut rng);
    let mut results = Vec::new();

    results.push((Axiom::TR1, check(|| reproducer(field, &[("Id", &b.identity())]), || tr1(&b).map(|_| ()))));
    results.push((Axiom::TR2, check(|| reproducer(field, &[("T", &t)]), || rotate(&t).map(|_| ()))));

    let mut fallback = false;
    let square = (0..3)
        .find_map(|_| random_commuting_square(field, &idx, cfg.max_dim, &mut rng).ok())
        .unwrap_or_else(|| {
            fallback = true;
            CommutingSquare::trivial(&t)
        });
    results.push((
        Axiom::TR3,
        check(
            || {
                let mut p = reproducer(field, &[("F", &square.f), ("G", &square.g), ("T", &square.t), ("T'", &square.t2)]);
                p.add_kappa("K", &square.k);
                p
            },
            || fill_tr3(&square.f, &square.g, &square.t, &square.t2, &square.k).map(|_| ()),
        ),
    ));
    results.push((Axiom::TR4, check(|| reproducer(field, &[("S", &s), ("T", &t)]), || octahedron(&s, &t).map(|_| ()))));

    let mut oracle = OracleTally::default();
    if cfg.oracle {
        F::cross_check(&b, &c, &mut rng, &mut oracle);
    }
    TrialOutcome { results, oracle, fallback }
}

fn run<F: OracleField>(field: F, cfg: &FuzzConfig) -> Report {
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials).into_par_iter().map(|n| run_trial(&field, cfg, n)).collect();
    let mut report = Report {
        seed: cfg.seed,
        field: cfg.field.to_string(),
        trials: cfg.trials,
        tr1: Tally::default(),
        tr2: Tally::default(),
        tr3: Tally::default(),
        tr4: Tally::default(),
        oracle: OracleTally::default(),
        tr3_fallbacks: 0,
        failures: Vec::new(),
    };
    for (trial, o) in outcomes.into_iter().enumerate() {
        for (axiom, r) in o.results {
            match r {
                Ok(()) => report.tally_mut(axiom).passed += 1,
                Err((message, reproducer)) => {
                    report.tally_mut(axiom).failed += 1;
                    report.failures.push(Failure { axiom, seed: cfg.seed, trial, message, reproducer });
                }
            }
        }
        report.oracle.agreed += o.oracle.agreed;
        report.oracle.disagreed += o.oracle.disagreed;
        report.oracle.skipped += o.oracle.skipped;
        report.tr3_fallbacks += o.fallback as usize;
    }
    report
}

pub fn verify_axioms(cfg: &FuzzConfig) -> Report {
    match cfg.field {
        FieldSpec::Rationals => run(Rationals, cfg),
        FieldSpec::PrimeField(p) => run(PrimeField::from_prime(p), cfg),
    }
}
