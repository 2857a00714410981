use std::fs;
use std::io::Write;
use std::path::Path;

use redblue::approx::TieBreakPlan;
use redblue::instance::{cost, validate_solution};
use redblue::io::{read_instance, write_solution, SolutionRecord};
use redblue::oracle::{approx_solution, exact_opt};

use crate::args::{Engine, SolveArgs};
use crate::decimal;
use crate::error::{CliError, CliResult};

pub fn read_plan(path: &Path) -> CliResult<TieBreakPlan> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn run(args: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let pair = match args.engine {
        Engine::Approx => {
            let plan = args.plan.as_deref().map(read_plan).transpose()?.unwrap_or_default();
            approx_solution(&inst, args.kind, &plan)?
        }
        Engine::Oracle => exact_opt(&inst, args.kind, args.objective, &args.caps.oracle_config())?.best_solution,
    };
    if let Err(violations) = validate_solution(&inst, &pair) {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(CliError::Validation(format!("invalid solution: {}", text.join("; "))));
    }
    let value = cost(&inst, &pair, args.objective);
    writeln!(out, "value {value} {}", decimal(&value))?;
    if let Some(path) = &args.out {
        write_solution(&SolutionRecord { pair, objective: Some(args.objective), value: Some(value) }, path)?;
    }
    Ok(())
}
