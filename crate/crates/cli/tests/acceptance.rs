//! Acceptance checks. Each test prints one `PASS`/`FAIL` line straight to
//! stdout, so the verdicts show up even when output is captured.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use redblue::approx::{approx_2mst, approx_2tsp, decomposition_report};
use redblue::cyclecover::{exact_bottleneck_2matching, find_c6_cover};
use redblue::generators::{
    gen_random_metric, gen_tight_mst, gen_tight_tsp, isolated_clause_gadget, isolated_connection_gadget,
    isolated_variable_gadget, lift_colocated, reduce_1in3_to_2matching, reduce_3sat_to_2mst, symbolic_cost,
    verify_forward_2matching, verify_forward_2mst, CnfFormula, Flavor, RandomModel, ReductionMode, TightFamily,
};
use redblue::instance::cost;
use redblue::oracle::{exact_opt, ratio_experiment, OracleConfig, Ratio};
use redblue::solvers::held_karp_raw;
use redblue::{Coloring, Objective, StructureKind, Weight};

const C1_INSTANCES: usize = 1000;
const C1_COLORINGS: usize = 50;
const C1_MAX_PAIRS: usize = 7;
const C1_TIME: Duration = Duration::from_secs(60);

const C2_INSTANCES: usize = 200;
const C2_TIME: Duration = Duration::from_secs(300);

const C3_LAMBDAS: [usize; 4] = [4, 8, 16, 32];
const C3_EPS: (u64, u64) = (1, 1024);
const C3_MST_SUM_MIN: (u64, u64) = (29, 10);
const C3_MST_MAX_MIN: (u64, u64) = (38, 10);
const C3_TSP_MIN: (u64, u64) = (38, 10);

const C4_COMPACT_FORMULAS: usize = 20;
const C4_PAPER_FORMULAS: usize = 10;

const C6_COUNTS: (usize, usize, usize) = (16, 6, 12);
const C6_MIN_SUM: (u64, u64) = (4152, 5);
const C6_MIN_MAX: (u64, u64) = (2076, 5);
const C6_COVER_CAP: usize = 80;

const C7_BASES: u64 = 50;
const C8_INSTANCES: u64 = 100;

fn report(criterion: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[acceptance] criterion {criterion} {verdict}: {title}: {detail}");
    let _ = out.flush();
}

fn ratio_of(a: &Weight, b: &Weight) -> Weight {
    match Ratio::of(a, b) {
        Ratio::Finite(r) => Weight::from_rational(r).expect("nonnegative"),
        Ratio::Infinite => panic!("zero reference value"),
    }
}

#[test]
fn criterion_1_decomposition_slacks() {
    let start = Instant::now();
    let models = [RandomModel::UniformMatrixClosure, RandomModel::Weights12];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    let mut failures = Vec::new();
    for i in 0..C1_INSTANCES {
        let n = 1 + i % C1_MAX_PAIRS;
        let model = models[i % models.len()];
        let inst = gen_random_metric(n, 10_000 + i as u64, model).unwrap();
        for _ in 0..C1_COLORINGS {
            let c = Coloring::new((0..n).map(|_| rng.gen()).collect());
            let r = decomposition_report(&inst, &c.node_colors());
            checks += 1;
            if !r.all_nonnegative() {
                failures.push(format!("instance {i} coloring {c}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < C1_TIME;
    let detail = format!(
        "{checks} reports, {} negative, {:.1}s (limit {}s)",
        failures.len(),
        elapsed.as_secs_f64(),
        C1_TIME.as_secs()
    );
    report(1, "decomposition inequalities", pass, &detail);
    assert!(pass, "{detail}: {failures:?}");
}

#[test]
fn criterion_2_approximation_bounds() {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let cases = [
        (StructureKind::SpanningTree, Objective::MinSum, 3),
        (StructureKind::SpanningTree, Objective::MinMax, 4),
        (StructureKind::Tour, Objective::MinSum, 4),
        (StructureKind::Tour, Objective::MinMax, 4),
    ];
    let mut violations = Vec::new();
    let mut maxima = Vec::new();
    for (kind, objective, bound) in cases {
        let mut worst = Weight::zero();
        for i in 0..C2_INSTANCES {
            let n = 2 + i % 5;
            let model = RandomModel::ALL[i % 3];
            let inst = gen_random_metric(n, 20_000 + i as u64, model).unwrap();
            let rec = ratio_experiment(&inst, kind, objective, &Default::default(), &cfg).unwrap();
            if !rec.ratio.at_most(bound) {
                violations.push(format!("{kind:?} {objective:?} instance {i}: {}", rec.ratio));
            } else if !rec.opt_value.is_zero() {
                worst = worst.max(ratio_of(&rec.alg_value, &rec.opt_value));
            }
        }
        maxima.push(format!("{}/{} max {} (bound {bound})", kind.as_str(), objective.as_str(), worst));
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < C2_TIME;
    let detail = format!("{}; {} violations, {:.1}s", maxima.join(", "), violations.len(), elapsed.as_secs_f64());
    report(2, "approximation bounds vs oracle", pass, &detail);
    assert!(pass, "{detail}: {violations:?}");
}

fn tight_ratios(f: &TightFamily) -> (Weight, Weight) {
    let run = |plan| match f.kind {
        StructureKind::SpanningTree => approx_2mst(&f.instance, plan).unwrap(),
        _ => approx_2tsp(&f.instance, plan).unwrap(),
    };
    let (adv, fav) = (run(&f.adversarial), run(&f.favorable));
    let r = |o| ratio_of(&cost(&f.instance, &adv, o), &cost(&f.instance, &fav, o));
    (r(Objective::MinSum), r(Objective::MinMax))
}

#[test]
fn criterion_3_tightness_convergence() {
    let eps = Weight::ratio(C3_EPS.0, C3_EPS.1);
    let mst: Vec<(Weight, Weight)> =
        C3_LAMBDAS.iter().map(|&l| tight_ratios(&gen_tight_mst(l, &eps).unwrap())).collect();
    let tsp: Vec<(Weight, Weight)> =
        C3_LAMBDAS.iter().map(|&l| tight_ratios(&gen_tight_tsp(l, &eps).unwrap())).collect();
    let increasing = mst.windows(2).all(|w| w[0].0 < w[1].0);
    let (mst_last, tsp_last) = (mst.last().unwrap(), tsp.last().unwrap());
    let floor = |(a, b): (u64, u64)| Weight::ratio(a, b);
    let checks = [
        ("mst min-sum increasing", increasing),
        ("mst min-sum >= 2.9", mst_last.0 >= floor(C3_MST_SUM_MIN)),
        ("mst min-max >= 3.8", mst_last.1 >= floor(C3_MST_MAX_MIN)),
        ("tsp min-sum >= 3.8", tsp_last.0 >= floor(C3_TSP_MIN)),
        ("tsp min-max >= 3.8", tsp_last.1 >= floor(C3_TSP_MIN)),
    ];
    let fmt = |v: &[(Weight, Weight)]| {
        v.iter()
            .zip(C3_LAMBDAS)
            .map(|((s, m), l)| format!("l={l} {:.4}/{:.4}", s.to_f64(), m.to_f64()))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let pass = failed.is_empty();
    let detail = format!("mst sum/max [{}]; tsp sum/max [{}]; failed checks {:?}", fmt(&mst), fmt(&tsp), failed);
    report(3, "tightness convergence", pass, &detail);
    assert!(pass, "{detail}");
}

/// At most 2 variables and 2 clauses; each clause repeats a single literal
/// with probability 1/2, so unsatisfiable formulas occur.
fn random_tiny_3sat(rng: &mut ChaCha8Rng) -> CnfFormula {
    let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let literal = |rng: &mut ChaCha8Rng| {
        let v = rng.gen_range(1..=n as i32);
        if rng.gen() {
            v
        } else {
            -v
        }
    };
    let clauses = (0..m)
        .map(|_| {
            if rng.gen() {
                let l = literal(rng);
                [l, l, l]
            } else {
                [literal(rng), literal(rng), literal(rng)]
            }
        })
        .collect();
    CnfFormula::new(n, clauses, Flavor::ThreeSat).unwrap()
}

#[test]
fn criterion_4_mst_reduction() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = Vec::new();
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..C4_COMPACT_FORMULAS {
        let f = random_tiny_3sat(&mut rng);
        let satisfiable = f.is_satisfiable();
        if satisfiable {
            sat += 1;
        } else {
            unsat += 1;
        }
        let red = reduce_3sat_to_2mst(&f, ReductionMode::Compact).unwrap();
        let opt = exact_opt(&red.instance, StructureKind::SpanningTree, Objective::Bottleneck, &cfg).unwrap();
        let want = if satisfiable { Weight::one() } else { Weight::from_int(2) };
        if opt.best_value != want {
            mismatches.push(format!("{:?}: oracle {} want {want}", f.clauses(), opt.best_value));
        }
    }
    let mut forward_failures = Vec::new();
    let mut checked = 0;
    while checked < C4_PAPER_FORMULAS {
        let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f = CnfFormula::random(n, m, Flavor::ThreeSat, &mut rng);
        let Some(a) = f.find_assignment() else { continue };
        let red = reduce_3sat_to_2mst(&f, ReductionMode::Paper).unwrap();
        if !verify_forward_2mst(&red, &a).unwrap() {
            forward_failures.push(format!("{:?}", f.clauses()));
        }
        checked += 1;
    }
    let pass = mismatches.is_empty() && forward_failures.is_empty();
    let detail = format!(
        "compact: {C4_COMPACT_FORMULAS} formulas ({sat} sat, {unsat} unsat), {} mismatches; paper: {checked} forward checks, {} failures",
        mismatches.len(),
        forward_failures.len()
    );
    report(4, "2-MST reduction", pass, &detail);
    assert!(pass, "{detail}: {mismatches:?} {forward_failures:?}");
}

#[test]
fn criterion_5_gadget_states() {
    let counts = [
        ("variable", isolated_variable_gadget().label_states().len(), 2),
        ("clause", isolated_clause_gadget().label_states().len(), 3),
        ("connection", isolated_connection_gadget().label_states().len(), 2),
    ];
    let pass = counts.iter().all(|(_, got, want)| got == want);
    let detail =
        counts.iter().map(|(name, got, want)| format!("{name} {got} (want {want})")).collect::<Vec<_>>().join(", ");
    report(5, "2-matching gadget states", pass, &detail);
    assert!(pass, "{detail}");
}

/// Every monotone formula over at most 3 variables with 1 or 2 clauses,
/// clauses as sorted variable multisets, up to clause order.
fn tiny_monotone_formulas() -> Vec<CnfFormula> {
    let mut clauses = Vec::new();
    for a in 1..=3 {
        for b in a..=3 {
            for c in b..=3 {
                clauses.push([a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |cs: Vec<[i32; 3]>| {
        let n = cs.iter().flatten().copied().max().unwrap() as usize;
        if seen.insert(cs.clone()) {
            out.push(CnfFormula::new(n, cs, Flavor::MonotoneOneInThree).unwrap());
        }
    };
    for (i, &x) in clauses.iter().enumerate() {
        push(vec![x]);
        for &y in &clauses[i + 1..] {
            push(vec![x, y]);
        }
    }
    out
}

fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

#[test]
fn criterion_6_matching_reduction() {
    let formulas = tiny_monotone_formulas();
    let mut runs = 0;
    let mut not_ok = 0;
    let mut undecoded = 0;
    let mut observed = BTreeSet::new();
    let mut unsat_none = 0;
    let mut unsat_cover = 0;
    for f in &formulas {
        let red = reduce_1in3_to_2matching(f).unwrap();
        let accepting: Vec<Vec<bool>> = all_assignments(f.n_vars()).filter(|a| f.accepts(a)).collect();
        if accepting.is_empty() {
            match find_c6_cover(&red.built.graph, C6_COVER_CAP) {
                Ok(None) => unsat_none += 1,
                Ok(Some(_)) => unsat_cover += 1,
                Err(_) => {}
            }
            continue;
        }
        for a in accepting {
            let counts = verify_forward_2matching(&red, &a).unwrap();
            runs += 1;
            if !counts.ok {
                not_ok += 1;
            }
            if !counts.decoded {
                undecoded += 1;
            }
            observed.insert(counts.uniform());
        }
    }
    let measured = match observed.iter().collect::<Vec<_>>().as_slice() {
        [Some(c)] => Some(*c),
        _ => None,
    };
    let (sum, max) = symbolic_cost(measured.unwrap_or((0, 0, 0)));
    let (want_sum, want_max) = (Weight::ratio(C6_MIN_SUM.0, C6_MIN_SUM.1), Weight::ratio(C6_MIN_MAX.0, C6_MIN_MAX.1));
    let counts_match = measured == Some(C6_COUNTS);
    let totals_match = sum == want_sum && max == want_max;
    let pass = runs > 0 && not_ok == 0 && counts_match && totals_match && unsat_none > 0 && unsat_cover == 0;
    let detail = format!(
        "{} formulas, {runs} forward runs, {not_ok} not ok, {undecoded} undecoded; counts {:?} (want {:?}); \
         symbolic per m {} / {} (want {} / {}); unsat formulas without cover {unsat_none}, with cover {unsat_cover}",
        formulas.len(),
        observed,
        C6_COUNTS,
        sum,
        max,
        want_sum,
        want_max
    );
    report(6, "2-matching reduction", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_7_colocated_lift() {
    let cfg = OracleConfig::default();
    let mut mismatches = Vec::new();
    for seed in 0..C7_BASES {
        let model = RandomModel::ALL[seed as usize % 3];
        let base = gen_random_metric(3, 70_000 + seed, model).unwrap().weights().clone();
        let (hk, _) = held_karp_raw(&base, &(0..6).collect::<Vec<_>>());
        let lift = lift_colocated(&base).unwrap();
        let sum = exact_opt(&lift, StructureKind::Tour, Objective::MinSum, &cfg).unwrap().best_value;
        let max = exact_opt(&lift, StructureKind::Tour, Objective::MinMax, &cfg).unwrap().best_value;
        if sum != hk.clone() + hk.clone() || max != hk {
            mismatches.push(format!("seed {seed}: hk {hk} sum {sum} max {max}"));
        }
    }
    let pass = mismatches.is_empty();
    let detail = format!("{C7_BASES} six-city bases, {} mismatches", mismatches.len());
    report(7, "co-located lift", pass, &detail);
    assert!(pass, "{detail}: {mismatches:?}");
}

fn cli(args: &[&str]) -> i32 {
    let argv = std::iter::once("redblue").chain(args.iter().copied());
    redblue_cli::run(argv, &mut std::io::sink(), &mut std::io::sink())
}

#[test]
fn criterion_8_solver_cross_validation() {
    let cfg = OracleConfig::default();
    let dir = tempfile::TempDir::new().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    let mut mismatches = Vec::new();
    let mut shard_diffs = Vec::new();
    for seed in 0..C8_INSTANCES {
        let model = RandomModel::ALL[seed as usize % 3];
        let inst = gen_random_metric(4, 80_000 + seed, model).unwrap();
        let cover = exact_bottleneck_2matching(&inst, 40).unwrap();
        let opt = exact_opt(&inst, StructureKind::PerfectMatching, Objective::Bottleneck, &cfg).unwrap();
        if cover != opt.best_value {
            mismatches.push(format!("seed {seed}: cover {cover} oracle {}", opt.best_value));
        }
        let file = path("inst.json");
        redblue::io::write_instance(&inst, &file).unwrap();
        for (kind, objective) in [("matching", "bottleneck"), ("mst", "min-sum"), ("tsp", "min-max")] {
            let mut outputs = Vec::new();
            for jobs in ["1", "4"] {
                let out = path(&format!("sol-{jobs}.json"));
                let args = [
                    "solve",
                    "-i",
                    &file,
                    "--kind",
                    kind,
                    "--objective",
                    objective,
                    "--engine",
                    "oracle",
                    "--jobs",
                    jobs,
                    "-o",
                    &out,
                ];
                assert_eq!(cli(&args), 0);
                outputs.push(fs::read(&out).unwrap());
            }
            if outputs[0] != outputs[1] {
                shard_diffs.push(format!("seed {seed} {kind} {objective}"));
            }
        }
    }
    let pass = mismatches.is_empty() && shard_diffs.is_empty();
    let detail = format!(
        "{C8_INSTANCES} four-pair instances, {} bottleneck mismatches, {} sharded outputs differing from sequential",
        mismatches.len(),
        shard_diffs.len()
    );
    report(8, "solver cross-validation", pass, &detail);
    assert!(pass, "{detail}: {mismatches:?} {shard_diffs:?}");
}
