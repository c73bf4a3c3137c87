//! One deterministic run over every module's self-checks.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arcs::random_subset_suite;
use crate::bounds::{incidence_count_q, proof_ineq_suite, verify_curve};
use crate::curves::catalog_instances;
use crate::gf::FieldSpec;
use crate::orderseq::{check_lemma, default_truncation, random_complete_branch, rational_normal_branch};
use crate::projspace::ProjSpace;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub q: u64,
    pub r: usize,
    pub seed: u64,
    pub d_max: u64,
    pub subset_trials: usize,
    pub branch_trials: usize,
    /// Truncation for the catalog branch; `None` means `4r`.
    pub precision: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { q: 2, r: 3, seed: 0, d_max: 100, subset_trials: 200, branch_trials: 100, precision: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSection {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub sections: Vec<SuiteSection>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteSection> {
        self.sections.iter().find(|s| !s.passed)
    }
}

fn section(name: &str, outcome: Result<String, String>) -> SuiteSection {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    SuiteSection { name: name.into(), passed, detail }
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let mut sections = Vec::new();
    let field = FieldSpec::of_order(config.q).map(Arc::new);
    let field = match field {
        Ok(f) => f,
        Err(e) => {
            sections.push(section("field", Err(e.to_string())));
            return SuiteReport { config: config.clone(), sections };
        }
    };
    let (q, r) = (config.q, config.r);

    sections.push(section(
        "proof-inequalities",
        if r >= 3 {
            proof_ineq_suite(q, r as u64, 1..=config.d_max.max(1))
                .map(|rep| format!("q={q} r={r} d=1..{}: {} cases", rep.d_max, rep.total_cases()))
                .map_err(|e| e.to_string())
        } else {
            Ok(format!("skipped for r={r} < 3"))
        },
    ));

    let space = ProjSpace::new(r, field.clone());
    let max_size = space.num_points().min(10) as usize;
    let sizes: Vec<usize> = (3.min(max_size)..=max_size).collect();
    sections.push(section(
        "arc-subsets",
        random_subset_suite(&space, &sizes, config.subset_trials, config.seed)
            .map_err(|e| e.to_string())
            .and_then(|rep| match rep.failures.first() {
                None => Ok(format!("PG({r},{q}): {} subsets, {} double counts", rep.trials, rep.double_count_checks)),
                Some(f) => Err(format!("trial {}: {}", f.trial, f.reason)),
            }),
    ));

    let t = config.precision.unwrap_or_else(|| default_truncation(r));
    sections.push(section(
        "lemma-rational-normal",
        rational_normal_branch(field.clone(), r, t)
            .and_then(|b| check_lemma(&[b]))
            .map_err(|e| e.to_string())
            .and_then(|rep| {
                let line = format!("excess {} vs bound {}", rep.excess, rep.rhs);
                if rep.equality { Ok(format!("{line}, equality")) } else { Err(format!("{line}, expected equality")) }
            }),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut random = Ok(0usize);
    for trial in 0..config.branch_trials {
        let outcome = random_complete_branch(&field, r, default_truncation(r), &mut rng).and_then(|b| check_lemma(&[b]));
        match outcome {
            Ok(rep) if rep.ok => random = random.map(|n| n + 1),
            Ok(rep) => {
                random = Err(format!("trial {trial}: excess {} < {}", rep.excess, rep.rhs));
                break;
            }
            Err(e) => {
                random = Err(format!("trial {trial}: {e}"));
                break;
            }
        }
    }
    sections.push(section("lemma-random-branches", random.map(|n| format!("{n} complete branches"))));

    let mut incidence = Ok(0usize);
    let mut violators = Vec::new();
    for c in catalog_instances() {
        match incidence_count_q(&c) {
            Ok((a, b)) if a == b => incidence = incidence.map(|n| n + 1),
            Ok((a, b)) => {
                incidence = Err(format!("{}: direct {a} != {b}", c.label()));
                break;
            }
            Err(e) => {
                incidence = Err(format!("{}: {e}", c.label()));
                break;
            }
        }
        match verify_curve(&c) {
            Ok(rep) if rep.unexpected_violation() => violators.push(rep.curve),
            Ok(_) => {}
            Err(e) => violators.push(format!("{}: {e}", c.label())),
        }
    }
    sections.push(section("incidence-catalog", incidence.map(|n| format!("{n} curves"))));
    sections.push(section(
        "catalog-bounds",
        if violators.is_empty() {
            Ok("only the known exception violates".into())
        } else {
            Err(format!("unexpected violations: {}", violators.join(", ")))
        },
    ));

    SuiteReport { config: config.clone(), sections }
}
