//! Range sweeps: construct and verify every valid tuple.

use anyhow::anyhow;
use rayon::prelude::*;
use serde::Serialize;

use heffter::dispatch::{
    construct_heffter_with_budget, construct_mr_with_budget, construct_sma_with_budget, heffter_case,
};
use heffter::io::Format;
use heffter::oracle::SearchBudget;
use heffter::params::all_params;
use heffter::{Error, HeffterParams};

use crate::{budget_from, certify, exit, write_out, CliResult, Exit, Object, SweepArgs};

enum Outcome {
    Passed,
    Failed(String),
    Unsupported,
    Exhausted,
}

#[derive(Serialize)]
struct Report {
    object: &'static str,
    tuples: usize,
    passed: usize,
    failed: usize,
    unsupported: usize,
    exhausted: usize,
    failures: Vec<String>,
}

/// Even `(m, n, s, k)` shapes with `4 <= s <= n`, `4 <= k <= m`, `ms = nk`.
fn sma_shapes(a: &SweepArgs) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for m in a.min_m.max(4)..=a.max_m {
        for n in a.min_n.max(4)..=a.max_n {
            for s in (4..=n).step_by(2) {
                if (m * s) % n != 0 {
                    continue;
                }
                let k = m * s / n;
                if k >= 4 && k <= m && k % 2 == 0 {
                    out.push((m, n, s, k));
                }
            }
        }
    }
    out
}

fn heffter_tuples(a: &SweepArgs) -> Vec<HeffterParams> {
    all_params(a.max_m.max(a.max_n))
        .into_iter()
        .filter(|p| (a.min_m..=a.max_m).contains(&p.m) && (a.min_n..=a.max_n).contains(&p.n))
        .collect()
}

fn classify(result: heffter::Result<heffter::Grid>, check: impl Fn(&heffter::Grid) -> bool, label: String) -> Outcome {
    match result {
        Ok(g) if check(&g) => Outcome::Passed,
        Ok(_) => Outcome::Failed(format!("{label}: verification failed")),
        Err(Error::Unsupported(_)) => Outcome::Unsupported,
        Err(Error::Exhausted(_)) => Outcome::Exhausted,
        Err(e) => Outcome::Failed(format!("{label}: {e}")),
    }
}

fn sweep_heffter(a: &SweepArgs, budget: &SearchBudget) -> Vec<Outcome> {
    heffter_tuples(a)
        .par_iter()
        .map(|p| {
            if heffter_case(p).is_err() {
                return Outcome::Unsupported;
            }
            classify(
                construct_heffter_with_budget(p, budget),
                |g| g.is_shiftable() && certify(Object::Heffter, g, p.s, p.k, Some(p)).ok,
                p.to_string(),
            )
        })
        .collect()
}

fn sweep_sma_like(a: &SweepArgs, budget: &SearchBudget) -> Vec<Outcome> {
    let object = a.object;
    sma_shapes(a)
        .par_iter()
        .map(|&(m, n, s, k)| {
            let built = match object {
                Object::Mr => construct_mr_with_budget(m, n, s, k, budget),
                _ => construct_sma_with_budget(m, n, s, k, budget),
            };
            let name = if object == Object::Mr { "MR" } else { "SMA" };
            classify(built, |g| certify(object, g, s, k, None).ok, format!("{name}({m},{n};{s},{k})"))
        })
        .collect()
}

pub(crate) fn run(a: &SweepArgs, format: Format) -> CliResult {
    let budget = budget_from(a.budget.as_deref())?;
    let outcomes = match a.object {
        Object::Heffter => sweep_heffter(a, &budget),
        Object::Sma | Object::Mr => sweep_sma_like(a, &budget),
    };
    let mut report = Report {
        object: a.object.name(),
        tuples: outcomes.len(),
        passed: 0,
        failed: 0,
        unsupported: 0,
        exhausted: 0,
        failures: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Passed => report.passed += 1,
            Outcome::Unsupported => report.unsupported += 1,
            Outcome::Exhausted => report.exhausted += 1,
            Outcome::Failed(msg) => {
                report.failed += 1;
                report.failures.push(msg);
            }
        }
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| anyhow!(e))? + "\n",
        Format::Csv => format!(
            "object,tuples,passed,failed,unsupported,exhausted\n{},{},{},{},{},{}\n",
            report.object, report.tuples, report.passed, report.failed, report.unsupported, report.exhausted
        ),
        Format::Pretty => {
            let mut out = format!(
                "sweep {} m={}..={} n={}..={}\ntuples {}  passed {}  failed {}  unsupported {}  exhausted {}\n",
                report.object,
                a.min_m,
                a.max_m,
                a.min_n,
                a.max_n,
                report.tuples,
                report.passed,
                report.failed,
                report.unsupported,
                report.exhausted
            );
            for f in &report.failures {
                out += &format!("FAIL {f}\n");
            }
            out
        }
    };
    write_out(&text, None)?;
    if report.failed > 0 {
        return Err(Exit::new(exit::VERIFY_FAILED, anyhow!("{} tuples failed", report.failed)));
    }
    Ok(())
}
