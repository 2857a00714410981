use std::io::Write;

use redblue::instance::{cost, validate_metric, validate_solution};
use redblue::io::{read_coloring, read_instance, read_solution};

use crate::args::ValidateArgs;
use crate::error::{CliError, CliResult};

pub fn run(args: &ValidateArgs, out: &mut dyn Write) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let mut problems = Vec::new();
    let violations = validate_metric(&inst);
    writeln!(out, "nodes {} pairs {} triangle violations {}", inst.n_nodes(), inst.n_pairs(), violations.len())?;
    if let Some(&(u, v, w)) = violations.first() {
        problems.push(format!("not metric: w({u},{v}) exceeds the path through {w}"));
    }
    if let Some(path) = &args.coloring {
        let c = read_coloring(path)?;
        if c.n_pairs() != inst.n_pairs() {
            problems.push(format!("coloring has {} pairs, instance {}", c.n_pairs(), inst.n_pairs()));
        } else {
            writeln!(out, "coloring ok")?;
        }
    }
    if let Some(path) = &args.solution {
        let rec = read_solution(path)?;
        match validate_solution(&inst, &rec.pair) {
            Ok(()) => {
                writeln!(out, "solution ok")?;
                if let (Some(objective), Some(value)) = (rec.objective, &rec.value) {
                    let actual = cost(&inst, &rec.pair, objective);
                    if &actual != value {
                        problems.push(format!("recorded {} value {value}, actual {actual}", objective.as_str()));
                    } else {
                        writeln!(out, "value {actual} confirmed")?;
                    }
                }
            }
            Err(vs) => problems.extend(vs.iter().map(|v| format!("solution: {v}"))),
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(problems.join("\n")))
    }
}
