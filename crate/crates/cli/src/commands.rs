use hpfg_core::analysis::{
    analytic_bounds, collision_exhaustive, collision_experiment, fidelity_exact, total_success,
    verify_eta_bound, SuccessMode,
};
use hpfg_core::qsim::{run_algorithm, validate_pipeline, BlackBox};
use hpfg_core::systems::{
    all_tuples, verify_cubic_exhaustive, verify_quadratic_exhaustive, CubicBranch, Solver,
    SystemInstance,
};
use hpfg_core::{Error, PrimeModulus, RootStrategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{Command, GlobalArgs, Mode, SolverChoice, StrategyChoice};
use crate::report::{Cell, Report};

/// Largest `p^k` for the brute-force cross-check in `solve`.
const SOLVE_CHECK_LIMIT: u64 = 1_000_000;
/// Largest number of ordered pairs in the all-pairs fidelity scan.
const FIDELITY_PAIR_LIMIT: u64 = 5_000_000;
/// Largest `p` for exhaustive collision counting (`p^4` query pairs).
const COLLISION_EXHAUSTIVE_MAX_P: u64 = 61;
/// Offset between the black-box seed and the sampling seed in `end-to-end`.
const RUN_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

macro_rules! progress {
    ($($arg:tt)*) => { eprintln!("[hpfg] {}", format_args!($($arg)*)) };
}

fn prime(p: u64) -> Result<PrimeModulus, Error> {
    PrimeModulus::new(p)
}

fn values(t: &[hpfg_core::FieldElement]) -> Vec<u64> {
    t.iter().map(|e| e.value()).collect()
}

fn core_mode(mode: Mode) -> SuccessMode {
    match mode {
        Mode::Full => SuccessMode::Full,
        Mode::Restricted => SuccessMode::Restricted,
    }
}

fn strategy(choice: StrategyChoice, m: PrimeModulus) -> RootStrategy {
    match choice {
        StrategyChoice::Auto => RootStrategy::default_for(m),
        StrategyChoice::Exhaustive => RootStrategy::Exhaustive,
        StrategyChoice::Split => RootStrategy::Split,
    }
}

pub fn run(command: &Command, g: &GlobalArgs) -> Result<Report, Error> {
    match command {
        Command::Solve {
            p,
            degree,
            x,
            w,
            solver,
        } => solve(g, *p, *degree, x, w, *solver),
        Command::Success { p, degree, per_x } => success(g, p, *degree, *per_x),
        Command::Bounds {
            p,
            degree,
            vars,
            epsilon,
        } => bounds(g, p, *degree, *vars, *epsilon),
        Command::VerifySolvers {
            p,
            degree,
            strategy,
        } => verify_solvers(g, p, *degree, *strategy),
        Command::VerifyEta { p } => verify_eta(g, p),
        Command::Fidelity {
            p,
            q,
            q_tilde,
            degree,
        } => fidelity(g, *p, q.as_deref(), q_tilde.as_deref(), *degree),
        Command::Collision {
            p,
            trials,
            degree,
            exhaustive,
        } => collision(g, *p, *trials, *degree, *exhaustive),
        Command::Simulate { p, degree, q } => simulate(g, *p, *degree, q.as_deref()),
        Command::EndToEnd {
            p,
            degree,
            repetitions,
            transcript,
        } => end_to_end(g, *p, *degree, *repetitions, *transcript),
    }
}

fn solve(
    g: &GlobalArgs,
    p: u64,
    degree: Option<usize>,
    x: &[i64],
    w: &[i64],
    choice: SolverChoice,
) -> Result<Report, Error> {
    let m = prime(p)?;
    let n = degree.unwrap_or(w.len());
    let inst = SystemInstance::new(m, n, m.tuple(x), m.tuple(w))?;
    let k = inst.copies();
    let closed_available = matches!((n, k), (2, 2) | (3, 3));
    let solver = match choice {
        SolverChoice::Closed => Solver::ClosedForm,
        SolverChoice::Brute => Solver::BruteForce,
        SolverChoice::Auto if closed_available => Solver::ClosedForm,
        SolverChoice::Auto => Solver::BruteForce,
    };
    let sols = solver.solve(&inst)?;

    let mut r = Report::new("solve", g.seed, g.mode.as_str());
    r.set("p", json!(p));
    r.set("n", json!(n));
    r.set("k", json!(k));
    r.set("x", json!(values(inst.x())));
    r.set("w", json!(values(inst.w())));
    r.set("solver", json!(format!("{solver:?}")));
    r.columns = vec!["p", "n", "k", "mode", "x", "w", "eta", "solutions"];
    r.rows.push(vec![
        p.into(),
        n.into(),
        k.into(),
        g.mode.as_str().into(),
        values(inst.x()).into(),
        values(inst.w()).into(),
        sols.eta().into(),
        Cell::Nested(sols.iter().map(|b| values(b)).collect()),
    ]);
    r.check(
        "solutions_satisfy_system",
        sols.iter().all(|b| inst.is_satisfied_by(b)),
        format!("{} solutions", sols.eta()),
    );
    if solver == Solver::ClosedForm && p.checked_pow(k as u32).is_some_and(|v| v <= SOLVE_CHECK_LIMIT) {
        let brute = Solver::BruteForce.solve(&inst)?;
        r.check(
            "matches_bruteforce",
            brute == sols,
            format!("closed form eta={} brute force eta={}", sols.eta(), brute.eta()),
        );
    }
    Ok(r)
}

fn success(g: &GlobalArgs, ps: &[u64], n: usize, per_x: bool) -> Result<Report, Error> {
    let mut r = Report::new("success", g.seed, g.mode.as_str());
    r.set("p", json!(ps));
    r.set("n", json!(n));
    r.set("k", json!(n));
    r.set("per_x", json!(per_x));
    r.columns = if per_x {
        vec!["p", "n", "k", "mode", "x", "multiplicity", "restricted", "probability"]
    } else {
        vec!["p", "n", "k", "mode", "success", "paper_bound"]
    };
    let mode = core_mode(g.mode);
    for &p in ps {
        let m = prime(p)?;
        progress!("success p={p} n={n}");
        let rep = total_success(m, n, per_x)?;
        if let Some(rays) = &rep.per_x {
            for ray in rays {
                r.rows.push(vec![
                    p.into(),
                    n.into(),
                    n.into(),
                    g.mode.as_str().into(),
                    ray.x.clone().into(),
                    ray.multiplicity.into(),
                    ray.restricted.into(),
                    ray.probability.into(),
                ]);
            }
        } else {
            r.rows.push(vec![
                p.into(),
                n.into(),
                n.into(),
                g.mode.as_str().into(),
                rep.success(mode).into(),
                rep.closing_bound.into(),
            ]);
        }
        r.check(
            format!("p={p}: probabilities ordered"),
            0.0 <= rep.restricted_success
                && rep.restricted_success <= rep.total_success
                && rep.total_success <= 1.0,
            format!("restricted={} full={}", rep.restricted_success, rep.total_success),
        );
        r.check(
            format!("p={p}: restricted success above closing bound"),
            rep.restricted_success >= rep.closing_bound,
            format!("restricted={} bound={}", rep.restricted_success, rep.closing_bound),
        );
    }
    Ok(r)
}

fn bounds(g: &GlobalArgs, ps: &[u64], n: usize, vars: usize, epsilon: f64) -> Result<Report, Error> {
    let mut r = Report::new("bounds", g.seed, g.mode.as_str());
    r.set("p", json!(ps));
    r.set("n", json!(n));
    r.set("m", json!(vars));
    r.set("epsilon", json!(epsilon));
    r.columns = vec![
        "p",
        "n",
        "k",
        "mode",
        "m",
        "epsilon",
        "log_p_states",
        "upper",
        "lower",
        "fidelity_bound",
        "copies_needed",
        "quadratic_bound",
        "cubic_bound",
    ];
    for &p in ps {
        let b = analytic_bounds(prime(p)?, n, vars, epsilon)?;
        let lower = *b.lower.numer() as f64 / *b.lower.denom() as f64;
        r.rows.push(vec![
            p.into(),
            n.into(),
            n.into(),
            g.mode.as_str().into(),
            vars.into(),
            epsilon.into(),
            b.log_p_states.into(),
            b.upper.into(),
            lower.into(),
            b.fidelity_bound.into(),
            b.copies_needed.into(),
            b.quadratic_bound.into(),
            b.cubic_bound.into(),
        ]);
        r.check(
            format!("p={p}: upper >= lower >= 0"),
            b.upper as f64 >= lower && lower >= 0.0,
            format!("upper={} lower={lower}", b.upper),
        );
        if let Some(c) = b.copies_needed {
            r.check(
                format!("p={p}: copies_needed >= lower"),
                c as f64 >= lower,
                format!("copies_needed={c} lower={lower}"),
            );
        }
    }
    Ok(r)
}

fn verify_solvers(g: &GlobalArgs, ps: &[u64], n: usize, choice: StrategyChoice) -> Result<Report, Error> {
    let mut r = Report::new("verify-appendix", g.seed, g.mode.as_str());
    r.set("p", json!(ps));
    r.set("n", json!(n));
    match n {
        2 => {
            r.columns = vec!["p", "n", "k", "mode", "instances", "mismatches", "max_eta_good"];
            for &p in ps {
                let v = verify_quadratic_exhaustive(prime(p)?)?;
                progress!("p={p} instances={} mismatches={}", v.instances, v.mismatches);
                r.rows.push(vec![
                    p.into(),
                    2usize.into(),
                    2usize.into(),
                    g.mode.as_str().into(),
                    v.instances.into(),
                    v.mismatches.into(),
                    v.max_eta_good.into(),
                ]);
                r.check(format!("p={p}: no mismatches"), v.mismatches == 0, format!("{} mismatches", v.mismatches));
                r.check(format!("p={p}: eta <= 2 on good pairs"), v.max_eta_good <= 2, format!("max {}", v.max_eta_good));
            }
        }
        3 => {
            r.set("strategy", json!(format!("{choice:?}").to_lowercase()));
            r.columns = vec![
                "p",
                "n",
                "k",
                "mode",
                "instances",
                "mismatches",
                "good_pairs",
                "cap_violations",
                "max_eta_good",
                "regular",
                "vanish1_substituted",
                "vanish1_quartic",
                "vanish2",
                "fallback",
            ];
            for &p in ps {
                let m = prime(p)?;
                let v = verify_cubic_exhaustive(m, strategy(choice, m))?;
                progress!("p={p} instances={} mismatches={}", v.instances, v.mismatches);
                let count = |b| v.branch_counts.get(&b).copied().unwrap_or(0);
                r.rows.push(vec![
                    p.into(),
                    3usize.into(),
                    3usize.into(),
                    g.mode.as_str().into(),
                    v.instances.into(),
                    v.mismatches.into(),
                    v.good_pairs.into(),
                    v.cap_violations.into(),
                    v.max_eta_good.into(),
                    count(CubicBranch::Regular).into(),
                    count(CubicBranch::Vanish1Substituted).into(),
                    count(CubicBranch::Vanish1Quartic).into(),
                    count(CubicBranch::Vanish2).into(),
                    count(CubicBranch::Fallback).into(),
                ]);
                r.check(format!("p={p}: no mismatches"), v.mismatches == 0, format!("{} mismatches", v.mismatches));
                r.check(
                    format!("p={p}: branch caps hold"),
                    v.cap_violations == 0,
                    format!("{} violations", v.cap_violations),
                );
                r.check(format!("p={p}: eta <= 10 on good pairs"), v.max_eta_good <= 10, format!("max {}", v.max_eta_good));
            }
        }
        _ => {
            return Err(Error::Shape(format!("verify-appendix covers degree 2 or 3, got {n}")));
        }
    }
    Ok(r)
}

fn verify_eta(g: &GlobalArgs, ps: &[u64]) -> Result<Report, Error> {
    let mut r = Report::new("verify-eta", g.seed, g.mode.as_str());
    r.set("p", json!(ps));
    r.columns = vec!["p", "n", "k", "mode", "good_pairs", "max_eta", "argmax", "bound"];
    for &p in ps {
        let v = verify_eta_bound(prime(p)?)?;
        progress!("p={p} max_eta={}", v.max_eta);
        r.rows.push(vec![
            p.into(),
            3usize.into(),
            3usize.into(),
            g.mode.as_str().into(),
            v.good_pairs.into(),
            v.max_eta.into(),
            v.argmax.map(|(a, b)| vec![a, b]).into(),
            10u64.into(),
        ]);
        r.check(format!("p={p}: eta <= 10"), v.max_eta <= 10, format!("max {}", v.max_eta));
    }
    Ok(r)
}

fn fidelity(
    g: &GlobalArgs,
    p: u64,
    q: Option<&[i64]>,
    q_tilde: Option<&[i64]>,
    degree: usize,
) -> Result<Report, Error> {
    let m = prime(p)?;
    let mut r = Report::new("fidelity", g.seed, g.mode.as_str());
    r.set("p", json!(p));
    if let (Some(q), Some(qt)) = (q, q_tilde) {
        let f = fidelity_exact(m, &m.tuple(q), &m.tuple(qt))?;
        let n = f.q.len();
        r.set("q", json!(values(&f.q)));
        r.set("q_tilde", json!(values(&f.q_tilde)));
        r.columns = vec![
            "p",
            "n",
            "k",
            "mode",
            "q",
            "q_tilde",
            "fidelity",
            "spectral_bound",
            "bound",
            "max_intersections",
        ];
        r.rows.push(vec![
            p.into(),
            n.into(),
            Cell::Null,
            g.mode.as_str().into(),
            values(&f.q).into(),
            values(&f.q_tilde).into(),
            f.fidelity.into(),
            f.spectral_bound.into(),
            f.bound.into(),
            (f.max_intersections as u64).into(),
        ]);
        r.check("fidelity within bounds", f.within_bounds(1e-12), format!("F={}", f.fidelity));
        r.check(
            "intersections <= n",
            f.max_intersections as usize <= n,
            format!("max {}", f.max_intersections),
        );
        return Ok(r);
    }

    let count = p.checked_pow(degree as u32).unwrap_or(u64::MAX);
    let pairs = count.saturating_mul(count.saturating_sub(1));
    if pairs > FIDELITY_PAIR_LIMIT {
        return Err(Error::GuardExceeded {
            what: "all-pairs fidelity",
            required: pairs as u128,
            limit: FIDELITY_PAIR_LIMIT as u128,
        });
    }
    r.set("degree", json!(degree));
    r.columns = vec![
        "p",
        "n",
        "k",
        "mode",
        "pairs",
        "max_fidelity",
        "max_spectral_bound",
        "bound",
        "max_intersections",
    ];
    let polys: Vec<_> = all_tuples(m, degree).collect();
    let mut worst_f: f64 = 0.0;
    let mut worst_s: f64 = 0.0;
    let mut worst_i = 0u32;
    let mut all_ok = true;
    let mut bound = 0.0;
    for a in &polys {
        for b in polys.iter().filter(|b| *b != a) {
            let f = fidelity_exact(m, a, b)?;
            worst_f = worst_f.max(f.fidelity);
            worst_s = worst_s.max(f.spectral_bound);
            worst_i = worst_i.max(f.max_intersections);
            all_ok &= f.within_bounds(1e-12);
            bound = f.bound;
        }
    }
    r.rows.push(vec![
        p.into(),
        degree.into(),
        Cell::Null,
        g.mode.as_str().into(),
        pairs.into(),
        worst_f.into(),
        worst_s.into(),
        bound.into(),
        (worst_i as u64).into(),
    ]);
    r.check("every pair within bounds", all_ok, format!("max F={worst_f} bound={bound}"));
    r.check(
        "intersections <= n",
        worst_i as usize <= degree,
        format!("max {worst_i}"),
    );
    Ok(r)
}

fn collision(g: &GlobalArgs, p: u64, trials: u64, degree: usize, exhaustive: bool) -> Result<Report, Error> {
    let m = prime(p)?;
    let mut r = Report::new("collision", g.seed, g.mode.as_str());
    r.set("p", json!(p));
    r.set("degree", json!(degree));
    r.set("exhaustive", json!(exhaustive));
    r.columns = vec![
        "p",
        "n",
        "k",
        "mode",
        "trials",
        "collisions",
        "estimate",
        "expected",
        "std_error",
        "z_score",
    ];
    if exhaustive {
        if p > COLLISION_EXHAUSTIVE_MAX_P {
            return Err(Error::GuardExceeded {
                what: "exhaustive collision count",
                required: p as u128,
                limit: COLLISION_EXHAUSTIVE_MAX_P as u128,
            });
        }
        let mut bb = BlackBox::random(m, degree, &mut ChaCha8Rng::seed_from_u64(g.seed))?;
        let (hits, pairs) = collision_exhaustive(&mut bb);
        r.rows.push(vec![
            p.into(),
            degree.into(),
            Cell::Null,
            g.mode.as_str().into(),
            pairs.into(),
            hits.into(),
            (hits as f64 / pairs as f64).into(),
            (1.0 / p as f64).into(),
            0.0.into(),
            0.0.into(),
        ]);
        r.check("rate is exactly 1/p", hits * p == pairs, format!("{hits}/{pairs}"));
        return Ok(r);
    }
    r.set("trials", json!(trials));
    let c = collision_experiment(m, degree, trials, g.seed)?;
    r.rows.push(vec![
        p.into(),
        degree.into(),
        Cell::Null,
        g.mode.as_str().into(),
        c.trials.into(),
        c.collisions.into(),
        c.estimate.into(),
        c.expected.into(),
        c.std_error.into(),
        c.z_score.into(),
    ]);
    r.check("within 3 sigma of 1/p", c.within_sigmas(3.0), format!("z={}", c.z_score));
    Ok(r)
}

fn simulate(g: &GlobalArgs, p: u64, degree: usize, q: Option<&[i64]>) -> Result<Report, Error> {
    let m = prime(p)?;
    let q = match q {
        Some(q) => m.tuple(q),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            (0..degree).map(|_| m.from_residue(rng.random_range(0..p))).collect()
        }
    };
    progress!("simulate p={p} n=k={}", q.len());
    let v = validate_pipeline(m, &q)?;
    let mut r = Report::new("simulate", g.seed, g.mode.as_str());
    r.set("p", json!(p));
    r.set("q", json!(values(&q)));
    r.columns = vec![
        "p",
        "n",
        "k",
        "mode",
        "q",
        "labels",
        "off_block_residual",
        "max_trace_error",
        "max_reduced_state_error",
        "max_detection_error",
        "max_distribution_error",
        "max_completion_gap",
    ];
    r.rows.push(vec![
        p.into(),
        v.n.into(),
        v.k.into(),
        g.mode.as_str().into(),
        values(&q).into(),
        v.labels.into(),
        v.off_block_residual.into(),
        v.max_trace_error.into(),
        v.max_reduced_state_error.into(),
        v.max_detection_error.into(),
        v.max_distribution_error.into(),
        v.max_completion_gap.into(),
    ]);
    let mut lim = |name: &str, value: f64, tol: f64| {
        r.check(format!("{name} < {tol:e}"), value < tol, format!("{value:e}"));
    };
    lim("off_block_residual", v.off_block_residual, 1e-12);
    lim("max_trace_error", v.max_trace_error, 1e-12);
    lim("max_reduced_state_error", v.max_reduced_state_error, 1e-10);
    lim("max_detection_error", v.max_detection_error, 1e-10);
    lim("max_distribution_error", v.max_distribution_error, 1e-10);
    lim("max_completion_gap", v.max_completion_gap, 1e-10);
    Ok(r)
}

fn end_to_end(g: &GlobalArgs, p: u64, n: usize, repetitions: u64, transcript: bool) -> Result<Report, Error> {
    let m = prime(p)?;
    let mut bb = BlackBox::random(m, n, &mut ChaCha8Rng::seed_from_u64(g.seed))?;
    progress!("end-to-end p={p} n=k={n} repetitions={repetitions}");
    let run = run_algorithm(&mut bb, repetitions, g.seed ^ RUN_SEED_OFFSET)?;
    let exact = total_success(m, n, false)?.total_success;
    let std_error = (exact * (1.0 - exact) / repetitions as f64).sqrt();
    let z = (run.success_rate - exact) / std_error;

    let mut r = Report::new("end-to-end", g.seed, g.mode.as_str());
    r.set("p", json!(p));
    r.set("n", json!(n));
    r.set("k", json!(n));
    r.set("repetitions", json!(repetitions));
    if transcript {
        r.columns = vec!["p", "n", "k", "mode", "repetition", "x", "q_hat", "success"];
        for (i, o) in run.outcomes.iter().enumerate() {
            r.rows.push(vec![
                p.into(),
                n.into(),
                n.into(),
                g.mode.as_str().into(),
                i.into(),
                o.x.clone().into(),
                o.q_hat.clone().into(),
                o.success.into(),
            ]);
        }
    } else {
        r.columns = vec![
            "p",
            "n",
            "k",
            "mode",
            "repetitions",
            "successes",
            "empirical",
            "exact",
            "std_error",
            "z_score",
            "queries",
        ];
        r.rows.push(vec![
            p.into(),
            n.into(),
            n.into(),
            g.mode.as_str().into(),
            repetitions.into(),
            run.successes.into(),
            run.success_rate.into(),
            exact.into(),
            std_error.into(),
            z.into(),
            run.queries.into(),
        ]);
    }
    r.check("within 3 sigma of exact success", z.abs() <= 3.0, format!("z={z}"));
    r.check(
        "k queries per repetition",
        run.queries == n as u64 * repetitions,
        format!("{} queries", run.queries),
    );
    Ok(r)
}
