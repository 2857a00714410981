use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use redblue::generators::{
    gen_random_metric, gen_tight_mst, gen_tight_tsp, lift_colocated, reduce_1in3_to_2matching, reduce_3sat_to_2mst,
    CnfFormula, Flavor, TightFamily,
};
use redblue::instance::{check_structure, Annotations};
use redblue::io::write_instance;
use redblue::{MetricInstance, Weight};

use crate::args::{Family, GenArgs};
use crate::error::{CliError, CliResult};

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("{family} requires --{flag}")))
}

pub fn read_cnf(path: &Path, flavor: Flavor) -> CliResult<CnfFormula> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    CnfFormula::parse_dimacs(&text, flavor).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_base(path: &Path) -> CliResult<redblue::matrix::Matrix<Weight>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<Weight>> =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(check_structure(rows)?)
}

fn sidecar(out: &Path, explicit: &Option<PathBuf>, suffix: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let mut name = out.file_stem().unwrap_or_default().to_os_string();
        name.push(suffix);
        out.with_file_name(name)
    })
}

fn write_annotations(path: &Path, annotations: &Annotations) -> CliResult<()> {
    fs::write(path, serde_json::to_string_pretty(annotations)? + "\n")?;
    Ok(())
}

fn write_plans(path: &Path, family: &TightFamily) -> CliResult<()> {
    let plans = serde_json::json!({"adversarial": family.adversarial, "favorable": family.favorable});
    fs::write(path, serde_json::to_string(&plans)? + "\n")?;
    Ok(())
}

pub fn run(args: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let inst: MetricInstance = match args.family {
        Family::TightMst | Family::TightTsp => {
            let lambda = need(args.lambda, "lambda", "tight families")?;
            let family = if args.family == Family::TightMst {
                gen_tight_mst(lambda, &args.eps)?
            } else {
                gen_tight_tsp(lambda, &args.eps)?
            };
            if let Some(p) = &args.plans {
                write_plans(p, &family)?;
            }
            family.instance
        }
        Family::Lift => {
            let base = match (&args.base, args.cities) {
                (Some(path), _) => read_base(path)?,
                (None, Some(c)) if c > 0 => {
                    let random = gen_random_metric(c.div_ceil(2), args.seed, args.model)?;
                    random.weights().submatrix(&(0..c).collect::<Vec<_>>())
                }
                _ => return Err(CliError::Usage("lift requires --base or a positive --cities".into())),
            };
            lift_colocated(&base)?
        }
        Family::Random => gen_random_metric(need(args.pairs, "pairs", "random")?, args.seed, args.model)?,
        Family::Reduce3sat => {
            let path = args.cnf.as_ref().ok_or_else(|| CliError::Usage("reduce-3sat requires --cnf".into()))?;
            let red = reduce_3sat_to_2mst(&read_cnf(path, Flavor::ThreeSat)?, args.mode)?;
            write_annotations(&sidecar(&args.out, &args.annotations, ".annotations.json"), &red.annotations)?;
            red.instance
        }
        Family::Reduce1in3 => {
            let path = args.cnf.as_ref().ok_or_else(|| CliError::Usage("reduce-1in3 requires --cnf".into()))?;
            let red = reduce_1in3_to_2matching(&read_cnf(path, Flavor::MonotoneOneInThree)?)?;
            write_annotations(&sidecar(&args.out, &args.annotations, ".annotations.json"), &red.annotations)?;
            if let Some(p) = &args.dummy_graph {
                fs::write(p, red.built.graph.to_json())?;
            }
            red.instance
        }
    };
    write_instance(&inst, &args.out)?;
    writeln!(out, "nodes {} pairs {}", inst.n_nodes(), inst.n_pairs())?;
    Ok(())
}
