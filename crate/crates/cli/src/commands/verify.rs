use std::fs;
use std::io::Write;

use redblue::cyclecover::find_c6_cover;
use redblue::generators::{
    reduce_1in3_to_2matching, reduce_3sat_to_2mst, symbolic_cost, verify_forward_2matching, verify_forward_2mst,
    Flavor, STATED_COUNTS,
};
use redblue::oracle::exact_opt;
use redblue::{Objective, StructureKind, Weight};
use serde::Serialize;

use crate::args::VerifyArgs;
use crate::commands::gen::read_cnf;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub flavor: String,
    pub n_vars: usize,
    pub n_clauses: usize,
    pub n_nodes: usize,
    pub satisfiable: bool,
    pub assignment: Option<Vec<bool>>,
    pub forward_ok: Option<bool>,
    /// Oracle bottleneck (2-MST) or cycle-cover existence (2-matching); absent
    /// when the instance exceeds the caps.
    pub brute_force: Option<String>,
    pub equivalent: Option<bool>,
    /// Cover edges per clause, variable and connection gadget.
    pub counts: Option<(usize, usize, usize)>,
    pub stated_counts: Option<(usize, usize, usize)>,
    pub symbolic_min_sum_per_m: Option<String>,
    pub symbolic_min_max_per_m: Option<String>,
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<VerifyReport> {
    let cnf = read_cnf(&args.cnf, args.flavor)?;
    let assignment = cnf.find_assignment();
    let mut report = VerifyReport {
        flavor: format!("{:?}", args.flavor),
        n_vars: cnf.n_vars(),
        n_clauses: cnf.clauses().len(),
        satisfiable: assignment.is_some(),
        assignment: assignment.clone(),
        ..VerifyReport::default()
    };
    writeln!(out, "satisfiable {}", report.satisfiable)?;
    match args.flavor {
        Flavor::ThreeSat => {
            let red = reduce_3sat_to_2mst(&cnf, args.mode)?;
            report.n_nodes = red.instance.n_nodes();
            writeln!(
                out,
                "nodes {} (p {}, p_b {}, p_r {})",
                report.n_nodes, red.lengths.p, red.lengths.p_b, red.lengths.p_r
            )?;
            if let Some(a) = &assignment {
                let ok = verify_forward_2mst(&red, a)?;
                report.forward_ok = Some(ok);
                writeln!(out, "forward {}", if ok { "ok" } else { "FAILED" })?;
            }
            let cfg = args.caps.oracle_config();
            if red.instance.n_pairs() <= cfg.mst_pair_cap {
                let opt = exact_opt(&red.instance, StructureKind::SpanningTree, Objective::Bottleneck, &cfg)?;
                let want = if report.satisfiable { Weight::one() } else { Weight::from_int(2) };
                report.equivalent = Some(opt.best_value == want);
                writeln!(out, "oracle bottleneck {} (expected {want})", opt.best_value)?;
                report.brute_force = Some(opt.best_value.to_string());
            } else {
                writeln!(out, "oracle skipped: {} pairs above cap {}", red.instance.n_pairs(), cfg.mst_pair_cap)?;
            }
        }
        Flavor::MonotoneOneInThree => {
            let red = reduce_1in3_to_2matching(&cnf)?;
            report.n_nodes = red.instance.n_nodes();
            writeln!(out, "nodes {} (real {})", report.n_nodes, red.built.graph.n_real())?;
            if let Some(a) = &assignment {
                let counts = verify_forward_2matching(&red, a)?;
                report.forward_ok = Some(counts.decoded);
                writeln!(out, "forward {}", if counts.decoded { "ok" } else { "FAILED" })?;
                if let Some(c) = counts.uniform() {
                    let (sum, max) = symbolic_cost(c);
                    writeln!(
                        out,
                        "counts clause/variable/connection {}/{}/{} (stated {}/{}/{})",
                        c.0, c.1, c.2, STATED_COUNTS.0, STATED_COUNTS.1, STATED_COUNTS.2
                    )?;
                    writeln!(out, "symbolic cost per m: min-sum {sum} min-max {max}")?;
                    report.counts = Some(c);
                    report.symbolic_min_sum_per_m = Some(sum.to_string());
                    report.symbolic_min_max_per_m = Some(max.to_string());
                }
                report.stated_counts = Some(STATED_COUNTS);
            }
            if red.built.graph.n_real() <= args.cover_cap {
                let found = find_c6_cover(&red.built.graph, args.cover_cap)?.is_some();
                report.equivalent = Some(found == report.satisfiable);
                writeln!(out, "cycle cover {}", if found { "found" } else { "none" })?;
                report.brute_force = Some(found.to_string());
            } else {
                writeln!(
                    out,
                    "cover search skipped: {} real nodes above cap {}",
                    red.built.graph.n_real(),
                    args.cover_cap
                )?;
            }
        }
    }
    Ok(report)
}

pub fn run(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let report = verify(args, out)?;
    if let Some(p) = &args.report {
        fs::write(p, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    let mut failures = Vec::new();
    if report.forward_ok == Some(false) {
        failures.push("forward construction failed");
    }
    if report.equivalent == Some(false) {
        failures.push("brute force disagrees with satisfiability");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join("; ")))
    }
}
