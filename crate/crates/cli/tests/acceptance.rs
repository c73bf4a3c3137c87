//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are
//! always shown.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use fqbound_core::arcs::{exhaustive_subset_check, random_subset_suite};
use fqbound_core::bounds::{cor33_bound, incidence_count_q, lemma_rhs, sziklai_bound, thm32_bound, verify_curve};
use fqbound_core::curves::{catalog_instances, count_points};
use fqbound_core::gf::FieldSpec;
use fqbound_core::orderseq::{
    check_lemma, default_truncation, excess_sum, random_complete_branch, rational_normal_branch,
};
use fqbound_core::projspace::ProjSpace;

fn fqbound(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fqbound")).args(args).output().expect("run fqbound");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn fqbound_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out) = fqbound(&full);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn field(q: u64) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::of_order(q).unwrap())
}

fn exceptional_curve() -> Result<String, String> {
    let (code, out) = fqbound(&["count", "--catalog", "sziklai-K"]);
    ensure(code == 0 && out.lines().any(|l| l == "N_4 = 14"), || format!("count printed {out:?}, exit {code}"))?;
    let (code, v) = fqbound_json(&["verify", "--catalog", "sziklai-K"]);
    let r = &v["report"];
    ensure(code == 0, || format!("verify exit {code}"))?;
    ensure(r["n_observed"] == 14 && r["sziklai"] == 13, || format!("N={} sziklai={}", r["n_observed"], r["sziklai"]))?;
    ensure(r["sziklai_satisfied"] == false && r["exception"] == true, || "violation not flagged as the exception".into())?;
    Ok("N = 14 > 13 = sziklai, flagged as the exception".into())
}

fn attainment() -> Result<String, String> {
    let (code, v) = fqbound_json(&["verify", "--catalog", "hermitian(2)"]);
    let r = &v["report"];
    ensure(code == 0, || format!("verify exit {code}"))?;
    ensure(r["n_observed"] == 9 && r["sziklai"] == 9, || format!("N={} sziklai={}", r["n_observed"], r["sziklai"]))?;
    ensure(r["sziklai_equality"] == true, || "equality not reported".into())?;
    Ok("hermitian(2) over GF(4): N = 9 = (3-1)*4+1, equality".into())
}

fn lemma() -> Result<String, String> {
    let mut random = 0;
    for r in [3usize, 4] {
        for q in [2u64, 3, 4] {
            let f = field(q);
            let rhs = lemma_rhs(q, r as u64).unwrap();
            let b = rational_normal_branch(f.clone(), r, default_truncation(r)).unwrap();
            let excess = excess_sum(&b).unwrap().ok_or("rational normal branch needs more precision")?;
            ensure(BigInt::from(excess) == rhs, || format!("r={r} q={q}: excess {excess} != {rhs}"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * r as u64 + q);
            for trial in 0..100 {
                let b = random_complete_branch(&f, r, default_truncation(r), &mut rng).unwrap();
                let rep = check_lemma(&[b]).map_err(|e| format!("r={r} q={q} trial {trial}: {e}"))?;
                ensure(rep.ok, || format!("r={r} q={q} trial {trial}: excess {} < {}", rep.excess, rep.rhs))?;
                random += 1;
            }
        }
    }
    let e32 = excess_sum(&rational_normal_branch(field(2), 3, 12).unwrap()).unwrap();
    let e33 = excess_sum(&rational_normal_branch(field(3), 3, 12).unwrap()).unwrap();
    ensure(e32 == Some(4) && e33 == Some(5), || format!("examples gave {e32:?}, {e33:?}"))?;
    Ok(format!("equality on 6 rational normal branches (4 at r=3,q=2; 5 at r=3,q=3), {random} random branches ok"))
}

fn proposition() -> Result<String, String> {
    let (examined, failure) = exhaustive_subset_check(&ProjSpace::new(3, field(2)), 6).map_err(|e| e.to_string())?;
    ensure(failure.is_none(), || format!("PG(3,2): {}", failure.clone().unwrap_or_default()))?;
    ensure(examined == 9949, || format!("examined {examined} subsets, expected 9949"))?;
    let sizes: Vec<usize> = (1..=40).collect();
    let rep = random_subset_suite(&ProjSpace::new(3, field(3)), &sizes, 500, 2024).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("PG(3,3): {:?}", rep.failures.first()))?;
    Ok(format!("{examined} subsets of PG(3,2) and 500 random subsets of PG(3,3)"))
}

fn identity() -> Result<String, String> {
    let mut cases = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for r in 3..=6u64 {
            for d in 1..=100u64 {
                let t = thm32_bound(d, q, r).map_err(|e| e.to_string())?;
                let c = cor33_bound(d, q, r).map_err(|e| e.to_string())?;
                ensure(t == c.bound, || format!("q={q} r={r} d={d}: {t} != {}", c.bound))?;
                if d >= q {
                    let s = sziklai_bound(d, q);
                    ensure(s >= c.bound.floor, || format!("q={q} r={r} d={d}: {s} < {}", c.bound.floor))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (q, r, d) triples"))
}

fn incidence() -> Result<String, String> {
    let curves = catalog_instances();
    for c in &curves {
        let (direct, formula) = incidence_count_q(c).map_err(|e| e.to_string())?;
        ensure(direct == formula, || format!("{}: {direct} != {formula}", c.label()))?;
    }
    Ok(format!("{} catalog curves", curves.len()))
}

fn plane_scan() -> Result<String, String> {
    let mut found = Vec::new();
    for (d, classes, bound) in [("3", 1023, 5), ("4", 32767, 7)] {
        let (code, v) = fqbound_json(&["scan-plane", "--q", "2", "--d", d]);
        let r = &v["report"];
        ensure(code == 0, || format!("d={d}: exit {code}"))?;
        ensure(r["classes"] == classes, || format!("d={d}: {} classes", r["classes"]))?;
        let max = r["max_n"].as_u64().ok_or("no max")?;
        ensure(max <= bound && r["violator_count"] == 0, || format!("d={d}: max N {max} > {bound}"))?;
        found.push(format!("d={d}: max N {max} <= {bound}"));
    }
    Ok(found.join(", "))
}

fn catalog_sweep() -> Result<String, String> {
    let mut checked = 0;
    for c in catalog_instances().iter().filter(|c| c.ambient_dim() >= 3) {
        let rep = verify_curve(c).map_err(|e| e.to_string())?;
        ensure(BigInt::from(rep.n_observed) <= rep.sziklai, || format!("{}: N={} > {}", rep.curve, rep.n_observed, rep.sziklai))?;
        if rep.curve.starts_with("rational-normal") || rep.curve.starts_with("twisted-cubic") {
            let n = count_points(c).count;
            ensure(n == rep.q + 1, || format!("{}: N={n}, expected q+1", rep.curve))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} curves with r >= 3"))
}

type Criterion = (&'static str, fn() -> Result<String, String>, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 exceptional curve", exceptional_curve, Duration::from_secs(1)),
        ("2 bound attainment", attainment, Duration::from_secs(1)),
        ("3 excess at a point", lemma, Duration::from_secs(10)),
        ("4 double count and arc bound", proposition, Duration::from_secs(30)),
        ("5 bound identity and dominance", identity, Duration::from_secs(5)),
        ("6 incidence count", incidence, Duration::from_secs(10)),
        ("7 plane scan over GF(2)", plane_scan, Duration::from_secs(60)),
        ("8 catalog sweep", catalog_sweep, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}")).map(|()| msg)
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
