use std::fs;
use std::io::Write;
use std::path::PathBuf;

use num_rational::BigRational;
use redblue::approx::{decomposition_report, DecompositionReport, TieBreakPlan};
use redblue::generators::{gen_random_metric, gen_tight_mst, gen_tight_tsp, RandomModel};
use redblue::instance::cost;
use redblue::io::read_instance;
use redblue::oracle::{approx_solution, exact_opt, OracleConfig, Ratio};
use redblue::weight::decimal as rational_decimal;
use redblue::{MetricInstance, Objective, StructureKind, Weight};
use serde::{Deserialize, Serialize};

use crate::args::ExperimentArgs;
use crate::commands::solve::read_plan;
use crate::decimal;
use crate::error::{CliError, CliResult};

/// Where the instances of an experiment come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Source {
    /// `count` instances; instance `i` has `pairs[i % len]` pairs, model
    /// `models[i % len]` and seed `seed + i`.
    Random {
        count: usize,
        pairs: Vec<usize>,
        models: Vec<RandomModel>,
        seed: u64,
    },
    TightMst {
        lambdas: Vec<usize>,
        eps: Weight,
    },
    TightTsp {
        lambdas: Vec<usize>,
        eps: Weight,
    },
    Files {
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub mst: usize,
    pub tsp: usize,
    pub matching: usize,
}

impl Default for Caps {
    fn default() -> Self {
        let d = OracleConfig::default();
        Caps { mst: d.mst_pair_cap, tsp: d.tsp_pair_cap, matching: d.matching_pair_cap }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: StructureKind,
    pub objective: Objective,
    pub source: Source,
    /// Plan for random and file sources; tight sources carry their own.
    #[serde(default)]
    pub plan: Option<TieBreakPlan>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default = "one")]
    pub jobs: usize,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub jsonl: Option<PathBuf>,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: &str| Err(CliError::Validation(format!("experiment config: {msg}")));
        if self.caps.mst == 0 || self.caps.tsp == 0 || self.caps.matching == 0 {
            return bad("caps must be positive");
        }
        if self.jobs == 0 {
            return bad("jobs must be positive");
        }
        if self.kind == StructureKind::PerfectMatching {
            return bad("no approximation algorithm for matching");
        }
        match &self.source {
            Source::Random { count, pairs, models, .. } => {
                if *count == 0 || pairs.is_empty() || models.is_empty() || pairs.contains(&0) {
                    return bad("random source needs count, pairs and models");
                }
            }
            Source::TightMst { lambdas, .. } | Source::TightTsp { lambdas, .. } => {
                if lambdas.is_empty() {
                    return bad("tight source needs lambdas");
                }
            }
            Source::Files { paths } => {
                if let Some(p) = paths.iter().find(|p| !p.is_file()) {
                    return bad(&format!("no such instance file {}", p.display()));
                }
                if paths.is_empty() {
                    return bad("files source needs paths");
                }
            }
        }
        Ok(())
    }

    fn oracle_config(&self) -> OracleConfig {
        let mut cfg = OracleConfig {
            mst_pair_cap: self.caps.mst,
            tsp_pair_cap: self.caps.tsp,
            matching_pair_cap: self.caps.matching,
            jobs: self.jobs,
            ..OracleConfig::default()
        };
        cfg.solver_caps.tsp = cfg.solver_caps.tsp.max(self.caps.tsp);
        cfg.solver_caps.matching = cfg.solver_caps.matching.max(self.caps.matching);
        cfg
    }

    pub fn from_args(args: &ExperimentArgs) -> CliResult<Self> {
        if let Some(path) = &args.config {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            return serde_path_to_error::deserialize(de)
                .map_err(|e| CliError::Validation(format!("{}: at `{}`: {}", path.display(), e.path(), e.inner())));
        }
        let usage = |msg: String| CliError::Usage(msg);
        let list = |s: &str, what: &str| -> CliResult<Vec<usize>> {
            s.split(',').map(|x| x.trim().parse().map_err(|_| usage(format!("bad {what} {x:?}")))).collect()
        };
        let source = match args.source.as_str() {
            "random" => {
                let pairs = match args.pairs.split_once("..") {
                    Some((a, b)) => {
                        let (a, b): (usize, usize) = (
                            a.parse().map_err(|_| usage(format!("bad pairs {:?}", args.pairs)))?,
                            b.parse().map_err(|_| usage(format!("bad pairs {:?}", args.pairs)))?,
                        );
                        (a..=b).collect()
                    }
                    None => list(&args.pairs, "pairs")?,
                };
                let models = args
                    .models
                    .split(',')
                    .map(|m| m.trim().parse::<RandomModel>().map_err(usage))
                    .collect::<CliResult<_>>()?;
                Source::Random { count: args.count, pairs, models, seed: args.seed }
            }
            "tight-mst" => Source::TightMst { lambdas: list(&args.lambdas, "lambda")?, eps: args.eps.clone() },
            "tight-tsp" => Source::TightTsp { lambdas: list(&args.lambdas, "lambda")?, eps: args.eps.clone() },
            "files" => Source::Files { paths: args.instances.clone() },
            other => return Err(usage(format!("unknown source {other:?} (random, tight-mst, tight-tsp, files)"))),
        };
        let kind = args.kind.ok_or_else(|| usage("--kind is required".into()))?;
        let objective = args.objective.ok_or_else(|| usage("--objective is required".into()))?;
        Ok(ExperimentConfig {
            kind,
            objective,
            source,
            plan: args.plan.as_deref().map(read_plan).transpose()?,
            caps: Caps { mst: args.caps.mst_cap, tsp: args.caps.tsp_cap, matching: args.caps.matching_cap },
            jobs: args.caps.jobs as usize,
            csv: args.csv.clone(),
            jsonl: args.jsonl.clone(),
        })
    }
}

/// Proven ratio bound of the approximation algorithm, if any.
pub fn theorem_bound(kind: StructureKind, objective: Objective) -> Option<u64> {
    match (kind, objective) {
        (StructureKind::SpanningTree, Objective::MinSum) => Some(3),
        (StructureKind::SpanningTree, Objective::MinMax) => Some(4),
        (StructureKind::Tour, Objective::MinSum | Objective::MinMax) => Some(4),
        _ => None,
    }
}

/// One report line. The summary line has `id = "summary"` and carries the
/// maximum ratio and minimum slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub kind: &'static str,
    pub objective: &'static str,
    pub n_pairs: Option<usize>,
    pub alg: Option<String>,
    pub alg_decimal: Option<String>,
    /// `oracle` or `favorable`.
    pub reference: Option<&'static str>,
    pub opt: Option<String>,
    pub opt_decimal: Option<String>,
    pub ratio: String,
    pub ratio_decimal: String,
    pub bound: Option<u64>,
    pub within_bound: bool,
    pub slack_a: Option<String>,
    pub slack_b: Option<String>,
    pub slack_c: Option<String>,
    pub slack_d: Option<String>,
    pub min_slack: String,
    pub min_slack_decimal: String,
}

struct Job {
    id: String,
    instance: MetricInstance,
    plan: TieBreakPlan,
    reference: Option<TieBreakPlan>,
}

fn jobs(cfg: &ExperimentConfig) -> CliResult<Vec<Job>> {
    let plan = cfg.plan.clone().unwrap_or_default();
    let mut out = Vec::new();
    match &cfg.source {
        Source::Random { count, pairs, models, seed } => {
            for i in 0..*count {
                let (n, model, s) = (pairs[i % pairs.len()], models[i % models.len()], seed + i as u64);
                out.push(Job {
                    id: format!("random-{}-n{n}-s{s}", model.as_str()),
                    instance: gen_random_metric(n, s, model)?,
                    plan: plan.clone(),
                    reference: None,
                });
            }
        }
        Source::TightMst { lambdas, eps } | Source::TightTsp { lambdas, eps } => {
            let mst = matches!(cfg.source, Source::TightMst { .. });
            for &lambda in lambdas {
                let f = if mst { gen_tight_mst(lambda, eps)? } else { gen_tight_tsp(lambda, eps)? };
                out.push(Job {
                    id: format!("{}-l{lambda}", if mst { "tight-mst" } else { "tight-tsp" }),
                    instance: f.instance,
                    plan: f.adversarial,
                    reference: Some(f.favorable),
                });
            }
        }
        Source::Files { paths } => {
            for p in paths {
                out.push(Job {
                    id: p.display().to_string(),
                    instance: read_instance(p)?,
                    plan: plan.clone(),
                    reference: None,
                });
            }
        }
    }
    Ok(out)
}

fn ratio_key(r: &Ratio) -> Option<&BigRational> {
    match r {
        Ratio::Finite(x) => Some(x),
        Ratio::Infinite => None,
    }
}

/// `true` iff `a > b`, with infinity largest.
fn ratio_gt(a: &Ratio, b: &Ratio) -> bool {
    match (ratio_key(a), ratio_key(b)) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y,
    }
}

fn slacks(report: &DecompositionReport) -> [Option<BigRational>; 4] {
    [Some(report.slack_a.clone()), Some(report.slack_b.clone()), report.slack_c.clone(), report.slack_d.clone()]
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub struct Outcome {
    pub rows: Vec<Row>,
    pub violations: Vec<String>,
}

pub fn evaluate(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let oracle = cfg.oracle_config();
    let bound = theorem_bound(cfg.kind, cfg.objective);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut max_ratio: Option<Ratio> = None;
    let mut min_slack: Option<BigRational> = None;
    for job in jobs(cfg)? {
        let inst = &job.instance;
        let alg = approx_solution(inst, cfg.kind, &job.plan)?;
        let alg_value = cost(inst, &alg, cfg.objective);
        let (reference, opt_value) = match &job.reference {
            None => ("oracle", exact_opt(inst, cfg.kind, cfg.objective, &oracle)?.best_value),
            Some(plan) => ("favorable", cost(inst, &approx_solution(inst, cfg.kind, plan)?, cfg.objective)),
        };
        let ratio = Ratio::of(&alg_value, &opt_value);
        let within = bound.is_none_or(|b| ratio.at_most(b));
        if !within {
            violations.push(format!("{}: ratio {ratio} exceeds {}", job.id, bound.unwrap_or_default()));
        }
        if reference == "oracle" && alg_value < opt_value {
            violations.push(format!("{}: algorithm {alg_value} below optimum {opt_value}", job.id));
        }
        let report = decomposition_report(inst, &alg.coloring.node_colors());
        if !report.all_nonnegative() {
            violations.push(format!("{}: negative decomposition slack", job.id));
        }
        let s = slacks(&report);
        let row_min = s.iter().flatten().min().cloned().expect("two slacks always present");
        if min_slack.as_ref().is_none_or(|m| row_min < *m) {
            min_slack = Some(row_min.clone());
        }
        if max_ratio.as_ref().is_none_or(|m| ratio_gt(&ratio, m)) {
            max_ratio = Some(ratio.clone());
        }
        let [a, b, c, d] = s.map(|x| x.as_ref().map(rational_text));
        rows.push(Row {
            id: job.id,
            kind: cfg.kind.as_str(),
            objective: cfg.objective.as_str(),
            n_pairs: Some(inst.n_pairs()),
            alg: Some(alg_value.to_string()),
            alg_decimal: Some(decimal(&alg_value)),
            reference: Some(reference),
            opt: Some(opt_value.to_string()),
            opt_decimal: Some(decimal(&opt_value)),
            ratio: ratio.to_string(),
            ratio_decimal: ratio.decimal(),
            bound,
            within_bound: within,
            slack_a: a,
            slack_b: b,
            slack_c: c,
            slack_d: d,
            min_slack: rational_text(&row_min),
            min_slack_decimal: rational_decimal(&row_min),
        });
    }
    let max_ratio = max_ratio.expect("at least one instance");
    let min_slack = min_slack.expect("at least one instance");
    rows.push(Row {
        id: "summary".into(),
        kind: cfg.kind.as_str(),
        objective: cfg.objective.as_str(),
        n_pairs: None,
        alg: None,
        alg_decimal: None,
        reference: None,
        opt: None,
        opt_decimal: None,
        ratio: max_ratio.to_string(),
        ratio_decimal: max_ratio.decimal(),
        bound,
        within_bound: violations.is_empty(),
        slack_a: None,
        slack_b: None,
        slack_c: None,
        slack_d: None,
        min_slack: rational_text(&min_slack),
        min_slack_decimal: rational_decimal(&min_slack),
    });
    Ok(Outcome { rows, violations })
}

pub fn write_csv(rows: &[Row], w: impl Write) -> CliResult<()> {
    let mut csv = csv::Writer::from_writer(w);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_jsonl(rows: &[Row], mut w: impl Write) -> CliResult<()> {
    for row in rows {
        writeln!(w, "{}", serde_json::to_string(row)?)?;
    }
    Ok(())
}

pub fn run(args: &ExperimentArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = ExperimentConfig::from_args(args)?;
    let outcome = evaluate(&cfg)?;
    if let Some(p) = &cfg.csv {
        write_csv(&outcome.rows, fs::File::create(p)?)?;
    }
    if let Some(p) = &cfg.jsonl {
        write_jsonl(&outcome.rows, fs::File::create(p)?)?;
    }
    let summary = outcome.rows.last().expect("summary row");
    writeln!(
        out,
        "instances {} max ratio {} ({}) min slack {} violations {}",
        outcome.rows.len() - 1,
        summary.ratio,
        summary.ratio_decimal,
        summary.min_slack,
        outcome.violations.len()
    )?;
    if outcome.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::BoundViolation(outcome.violations.join("\n")))
    }
}
