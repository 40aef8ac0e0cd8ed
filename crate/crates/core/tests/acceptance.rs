//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! measurements; tolerances and time limits are fixed below.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orient_tw::algorithms::{
    reduce_deadline_to_tw, solve_free_l_le_2, solve_general, solve_integer_endpoints, solve_l_le_2, zero_window_dp,
    Algorithm, SolverContext,
};
use orient_tw::bench::{run_bench, BenchSpec};
use orient_tw::brute::brute_force_opt;
use orient_tw::decomposition::{
    dyadic_family, dyadic_partition, five_split, length_bands, three_split_ceil, three_split_floor, RestrictedFamily,
};
use orient_tw::generate::{generate_instance, Family, GenSpec};
use orient_tw::instance::{window_stats, TimeWindow};
use orient_tw::modular::{
    solve_exact_pareto, solve_reward_indexed, solve_time_indexed, verify_modular, ModularBlock, ModularPartition,
};
use orient_tw::oracles::ExactOrienteering;
use orient_tw::rational::{ceil_log2, format_rational, frac, int};
use orient_tw::{evaluate_walk, Rational, TwInstance, WaitPolicy, WalkSolution};

const INSTANCES: u64 = 100;

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration, limit: Duration) -> bool {
    let pass = ok && elapsed <= limit;
    println!(
        "criterion {id} [{name}]: {} ({detail}; {:.2}s of {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn ceil_rational(r: &Rational) -> Rational {
    r.ceil()
}

fn families() -> [Family; 4] {
    Family::ALL
}

/// Instance `i` of a 100-instance suite cycling through the families, with
/// 5 to 8 vertices.
fn suite_spec(i: u64, template: GenSpec) -> GenSpec {
    GenSpec { family: families()[(i % 4) as usize], n: 5 + (i % 4) as usize, seed: 1000 + i, ..template }
}

/// Walks must re-evaluate on the instance they claim to solve.
fn integrity(x: &TwInstance, w: &WalkSolution) -> bool {
    evaluate_walk(x, &w.order(), None).is_ok_and(|e| e.reward == w.reward && e.schedule == w.schedule)
}

#[test]
fn criterion_01_dyadic_pieces() {
    let started = Instant::now();
    let mut violations = 0;
    let mut checked = 0;
    for a in 0..=256i128 {
        for b in a + 1..=256 {
            checked += 1;
            let pieces = dyadic_partition(a, b).unwrap();
            let mut covered = a;
            for p in &pieces {
                if p.lo != covered || p.hi - p.lo != 1 << p.level || p.lo % (1 << p.level) != 0 {
                    violations += 1;
                }
                covered = p.hi;
            }
            if covered != b {
                violations += 1;
            }
            let m = b - a;
            if m >= 2 && pieces.len() as u32 > 2 * ceil_log2(&int(m)) {
                violations += 1;
            }
            let levels: Vec<u32> = pieces.iter().map(|p| p.level).collect();
            if levels.iter().any(|l| levels.iter().filter(|k| *k == l).count() > 2) {
                violations += 1;
            }
        }
    }
    let ok = report(
        1,
        "dyadic partition",
        violations == 0,
        format!("{checked} intervals, {violations} violations"),
        started.elapsed(),
        Duration::from_secs(5),
    );
    assert!(ok);
}

fn pigeonhole_holds(x: &TwInstance, family: &RestrictedFamily) -> (bool, Rational, Rational) {
    let opt = brute_force_opt(x).unwrap().reward;
    let best = family
        .versions
        .iter()
        .map(|(_, v)| brute_force_opt(v).unwrap().reward)
        .max()
        .unwrap_or_else(Rational::zero);
    (best * int(family.beta().max(1) as i128) >= opt, best, opt)
}

#[test]
fn criterion_02_best_version_keeps_a_share() {
    let started = Instant::now();
    let integer = GenSpec { l_lo: int(1), l_hi: int(8), horizon: int(10), ..GenSpec::new(Family::Line, 5, 0) };
    let short = GenSpec { l_lo: int(1), l_hi: int(2), horizon: int(6), ..integer.clone() };
    type Split = fn(&TwInstance) -> orient_tw::Result<RestrictedFamily>;
    let splits: [(&str, Split, &GenSpec); 5] = [
        ("dyadic", dyadic_family, &integer),
        ("three-floor", three_split_floor, &short),
        ("three-ceil", three_split_ceil, &integer),
        ("five", five_split, &short),
        ("bands", length_bands, &integer),
    ];
    let mut violations = Vec::new();
    let mut runs = 0;
    for (name, split, template) in splits {
        for i in 0..INSTANCES {
            let x = generate_instance(&suite_spec(i, template.clone())).unwrap();
            let family = split(&x).unwrap();
            family.verify().unwrap();
            let (ok, best, opt) = pigeonhole_holds(&x, &family);
            runs += 1;
            if !ok {
                violations.push(format!("{name}#{i}: best {} of opt {} beta {}", best, opt, family.beta()));
            }
        }
    }
    let ok = report(
        2,
        "restricted versions",
        violations.is_empty(),
        format!("{runs} instance/split pairs, {} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(600),
    );
    assert!(ok);
}

/// Random modular instance: anchors 0 and n-1 carry no reward, the other
/// vertices are spread over 1 to 3 consecutive blocks.
fn modular_instance(seed: u64) -> (TwInstance, ModularPartition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=9usize);
    let family = families()[(seed % 4) as usize];
    let base = generate_instance(&GenSpec::new(family, n, seed)).unwrap();
    let blocks = rng.gen_range(1..=3usize);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for v in 1..n - 1 {
        members[rng.gen_range(0..blocks)].push(v);
    }
    let mut windows = vec![TimeWindow::of(int(0), int(0)); n];
    let mut rewards = vec![int(0); n];
    let mut parts = Vec::new();
    let mut clock = 0i128;
    for m in members.into_iter().filter(|m| !m.is_empty()) {
        let r = clock + rng.gen_range(0..=2);
        let d = r + rng.gen_range(1..=6);
        clock = d;
        for &v in &m {
            windows[v] = TimeWindow::of(int(r), int(d));
            rewards[v] = int(rng.gen_range(1..=3));
        }
        parts.push(ModularBlock { members: m, window: TimeWindow::of(int(r), int(d)) });
    }
    let budget = int(clock + rng.gen_range(0..=3)).max(*base.metric.get(0, n - 1).unwrap());
    windows[0] = TimeWindow::of(int(0), budget);
    windows[n - 1] = TimeWindow::of(int(0), budget);
    let x = TwInstance::new(base.metric, windows, rewards, Some(0), Some(n - 1), budget, WaitPolicy::Wait).unwrap();
    (x, ModularPartition { blocks: parts })
}

#[test]
fn criterion_03_modular_compositions_are_exact() {
    let started = Instant::now();
    let mut deviations = Vec::new();
    for i in 0..INSTANCES {
        let (x, p) = modular_instance(2000 + i);
        assert_eq!(verify_modular(&x, &p), None);
        let opt = brute_force_opt(&x).unwrap().reward;
        let answers = [
            ("time", solve_time_indexed(&x, &p, &ExactOrienteering).unwrap()),
            ("reward", solve_reward_indexed(&x, &p, &ExactOrienteering).unwrap()),
            ("pareto", solve_exact_pareto(&x, &p).unwrap()),
        ];
        for (name, w) in answers {
            if w.reward != opt || !integrity(&x, &w) {
                deviations.push(format!("#{i} {name}: {} vs {}", w.reward, opt));
            }
        }
    }
    let ok = report(
        3,
        "modular exactness",
        deviations.is_empty(),
        format!("{INSTANCES} instances x 3 solvers, {} deviations {:?}", deviations.len(), deviations),
        started.elapsed(),
        Duration::from_secs(600),
    );
    assert!(ok);
}

#[test]
fn criterion_04_integer_endpoint_bound() {
    let started = Instant::now();
    let ctx = SolverContext::default();
    let template = GenSpec { l_lo: int(1), l_hi: int(16), horizon: int(20), ..GenSpec::new(Family::Line, 5, 0) };
    let mut violations = Vec::new();
    let mut worst = int(1);
    for i in 0..INSTANCES {
        let x = generate_instance(&suite_spec(i, template.clone())).unwrap();
        let opt = brute_force_opt(&x).unwrap().reward;
        let r = solve_integer_endpoints(&x, &ctx).unwrap();
        let l_max = window_stats(&x).l_max.unwrap_or(int(1));
        let factor = if l_max <= int(1) { int(1) } else { int(2) * int(ceil_log2(&l_max) as i128) };
        if !r.walk.reward.is_zero() {
            worst = worst.max(opt / r.walk.reward);
        }
        if r.walk.reward * factor < opt || !integrity(&x, &r.walk) {
            violations.push(format!("#{i}: {} vs opt {} (L_max {})", r.walk.reward, opt, format_rational(&l_max)));
        }
    }
    let ok = report(
        4,
        "integer endpoints",
        violations.is_empty(),
        format!("worst ratio {}, {} violations {:?}", format_rational(&worst), violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(900),
    );
    assert!(ok);
}

#[test]
fn criterion_05_ratio_two_bound() {
    let started = Instant::now();
    let ctx = SolverContext::default();
    let template = GenSpec { l_lo: int(1), l_hi: int(2), horizon: int(6), grain: 4, ..GenSpec::new(Family::Line, 5, 0) };
    let mut violations = Vec::new();
    for i in 0..INSTANCES {
        let x = generate_instance(&suite_spec(i, template.clone())).unwrap();
        let opt = brute_force_opt(&x).unwrap().reward;
        let r = solve_l_le_2(&x, &ctx).unwrap();
        if r.walk.reward < ceil_rational(&(opt / int(3))) || !integrity(&x, &r.walk) {
            violations.push(format!("#{i}: {} vs opt {}", r.walk.reward, opt));
        }
    }
    let ok = report(
        5,
        "length ratio two",
        violations.is_empty(),
        format!("{} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(900),
    );
    assert!(ok);
}

#[test]
fn criterion_06_general_bound() {
    let started = Instant::now();
    let ctx = SolverContext::default();
    let template = GenSpec { l_lo: int(1), l_hi: int(8), horizon: int(12), grain: 2, ..GenSpec::new(Family::Line, 5, 0) };
    let mut violations = Vec::new();
    for i in 0..INSTANCES {
        let x = generate_instance(&suite_spec(i, template.clone())).unwrap();
        let opt = brute_force_opt(&x).unwrap().reward;
        let r = solve_general(&x, &ctx).unwrap();
        let l = window_stats(&x).l_ratio.unwrap_or(int(1));
        let factor = int(3) * (int(2) * int(ceil_log2(&l) as i128)).max(int(1));
        if r.walk.reward * factor < opt || !integrity(&x, &r.walk) {
            violations.push(format!("#{i}: {} vs opt {}", r.walk.reward, opt));
        }
    }
    let ok = report(
        6,
        "general lengths",
        violations.is_empty(),
        format!("{} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(900),
    );
    assert!(ok);
}

#[test]
fn criterion_07_free_endpoint_bound() {
    let started = Instant::now();
    let ctx = SolverContext::default();
    let template = GenSpec {
        l_lo: int(1),
        l_hi: int(2),
        horizon: int(6),
        grain: 4,
        anchored: false,
        ..GenSpec::new(Family::Line, 5, 0)
    };
    let mut violations = Vec::new();
    for i in 0..INSTANCES {
        let x = generate_instance(&suite_spec(i, template.clone())).unwrap();
        let opt = brute_force_opt(&x).unwrap().reward;
        let r = solve_free_l_le_2(&x, &ctx).unwrap();
        if r.walk.reward < ceil_rational(&(opt / int(5))) || !integrity(&x, &r.walk) {
            violations.push(format!("#{i}: {} vs opt {}", r.walk.reward, opt));
        }
    }
    let ok = report(
        7,
        "free endpoints",
        violations.is_empty(),
        format!("{} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(900),
    );
    assert!(ok);
}

/// Deadline-only instance: every window starts at zero; odd seeds also fix
/// an end vertex.
fn deadline_instance(seed: u64) -> TwInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=7usize);
    let g = GenSpec { family: families()[(seed % 4) as usize], ..GenSpec::new(Family::Line, n, seed) };
    let mut x = generate_instance(&g).unwrap();
    for v in 0..n {
        x.windows[v] = TimeWindow::of(int(0), frac(rng.gen_range(0..=20), 2));
        x.rewards[v] = int(rng.gen_range(0..=2));
    }
    x.budget = int(rng.gen_range(4..=12));
    if seed % 2 == 1 {
        x.budget = x.budget.max(*x.metric.get(0, n - 1).unwrap());
    } else {
        x.end = None;
    }
    x
}

#[test]
fn criterion_08_deadline_reduction() {
    let started = Instant::now();
    let mut violations = Vec::new();
    for i in 0..INSTANCES {
        let x = deadline_instance(3000 + i);
        let y = reduce_deadline_to_tw(&x).unwrap();
        let (a, b) = (brute_force_opt(&x).unwrap().reward, brute_force_opt(&y).unwrap().reward);
        let ratio_ok = window_stats(&y).l_ratio.is_none_or(|l| l <= int(2));
        if a != b || !ratio_ok {
            violations.push(format!("#{i}: {a} vs {b}, ratio ok {ratio_ok}"));
        }
    }
    let ok = report(
        8,
        "deadline reduction",
        violations.is_empty(),
        format!("{} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(600),
    );
    assert!(ok);
}

fn point_instance(seed: u64) -> TwInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=10usize);
    let g = GenSpec { family: families()[(seed % 4) as usize], anchored: seed % 3 != 0, ..GenSpec::new(Family::Line, n, seed) };
    let mut x = generate_instance(&g).unwrap();
    for v in 0..n {
        if Some(v) == x.start || Some(v) == x.end {
            continue;
        }
        let t = frac(rng.gen_range(0..=16), 2);
        x.windows[v] = TimeWindow::of(t, t);
        x.rewards[v] = int(rng.gen_range(1..=3));
    }
    x
}

#[test]
fn criterion_09_point_windows() {
    let started = Instant::now();
    let mut violations = Vec::new();
    for i in 0..INSTANCES {
        let x = point_instance(4000 + i);
        let dp = zero_window_dp(&x).unwrap();
        let opt = brute_force_opt(&x).unwrap().reward;
        if dp.reward != opt || !integrity(&x, &dp) {
            violations.push(format!("#{i}: {} vs {}", dp.reward, opt));
        }
    }
    let ok = report(
        9,
        "point windows",
        violations.is_empty(),
        format!("{} violations {:?}", violations.len(), violations),
        started.elapsed(),
        Duration::from_secs(120),
    );
    assert!(ok);
}

#[test]
fn criterion_10_end_to_end_integrity() {
    let started = Instant::now();
    let ctx = SolverContext::default();
    let mut failures = Vec::new();
    let mut walks = 0;
    let shapes = [
        GenSpec { l_lo: int(1), l_hi: int(6), horizon: int(10), ..GenSpec::new(Family::Line, 5, 0) },
        GenSpec { l_lo: int(1), l_hi: int(2), horizon: int(6), grain: 4, ..GenSpec::new(Family::Line, 5, 0) },
        GenSpec { l_lo: int(0), l_hi: int(5), horizon: int(8), grain: 2, anchored: false, ..GenSpec::new(Family::Line, 5, 0) },
    ];
    let algorithms = [
        Algorithm::IntegerEndpoints,
        Algorithm::LLe2,
        Algorithm::General,
        Algorithm::FreeLLe2,
        Algorithm::FreeGeneral,
        Algorithm::Auto,
    ];
    for (k, shape) in shapes.iter().enumerate() {
        for i in 0..20 {
            let x = generate_instance(&suite_spec(i, shape.clone())).unwrap();
            for a in algorithms {
                match a.run(&x, &ctx) {
                    Ok(r) => {
                        walks += 1;
                        if !integrity(&x, &r.walk) {
                            failures.push(format!("shape {k} #{i} {}", a.name()));
                        }
                    }
                    Err(orient_tw::Error::Precondition(_)) => {}
                    Err(e) => failures.push(format!("shape {k} #{i} {}: {e}", a.name())),
                }
            }
        }
    }
    let spec = BenchSpec {
        families: families().to_vec(),
        sizes: vec![5, 6],
        seeds: (0..5).collect(),
        algorithms: algorithms.to_vec(),
        template: shapes[0].clone(),
        oracle: "exact".into(),
        timings: false,
    };
    let first = run_bench(&spec, &ctx).unwrap();
    let second = run_bench(&spec, &ctx).unwrap();
    let deterministic = first.csv == second.csv;
    let violations: BTreeSet<String> =
        first.rows.iter().filter(|r| r.within_bound() == Some(false)).map(|r| r.instance.clone()).collect();
    let ok = report(
        10,
        "end-to-end integrity",
        failures.is_empty() && deterministic,
        format!(
            "{walks} walks, {} failures {:?}, csv deterministic {deterministic}, {} rows, rows above bound {:?}",
            failures.len(),
            failures,
            first.rows.len(),
            violations
        ),
        started.elapsed(),
        Duration::from_secs(600),
    );
    assert!(ok);
}

/// Reference optimum by enumerating claim sequences without any pruning
/// beyond infeasible prefixes, scheduled by hand.
fn enumerate_opt(x: &TwInstance) -> Rational {
    fn go(x: &TwInstance, seq: &mut Vec<usize>, last: Option<usize>, time: Rational, reward: Rational, best: &mut Rational) {
        let fits_end = match (x.end, last) {
            (Some(t), Some(l)) => x.metric.get(l, t).is_some_and(|d| time + d <= x.budget),
            (Some(_), None) => true,
            (None, _) => time <= x.budget,
        };
        if fits_end && reward > *best {
            *best = reward;
        }
        for v in x.active() {
            if seq.contains(&v) {
                continue;
            }
            let arrival = match last {
                None => Rational::zero(),
                Some(l) => match x.metric.get(l, v) {
                    Some(d) => time + d,
                    None => continue,
                },
            };
            let at = arrival.max(x.windows[v].release);
            if at > x.windows[v].deadline || at > x.budget {
                continue;
            }
            seq.push(v);
            go(x, seq, Some(v), at, reward + x.rewards[v], best);
            seq.pop();
        }
    }
    let mut best = Rational::from_integer(-1);
    go(x, &mut Vec::new(), x.start, Rational::zero(), Rational::zero(), &mut best);
    best
}

#[test]
fn reference_solver_agrees_with_brute_force() {
    let template = GenSpec { l_lo: int(1), l_hi: int(4), horizon: int(8), grain: 2, ..GenSpec::new(Family::Line, 5, 0) };
    for i in 0..40 {
        let mut spec = suite_spec(i, template.clone());
        spec.n = 4 + (i % 4) as usize;
        spec.anchored = i % 2 == 0;
        let x = generate_instance(&spec).unwrap();
        assert_eq!(brute_force_opt(&x).unwrap().reward, enumerate_opt(&x), "instance {i}");
    }
}

#[test]
fn halving_oracle_contract() {
    use orient_tw::oracles::{DeclaredRatio, OracleSpec, OrienteeringOracle, OrienteeringQuery, WalkResult};

    /// Exact answers declared with ratio two, trimmed to about half.
    struct Halving;

    impl OrienteeringOracle for Halving {
        fn spec(&self) -> OracleSpec {
            OracleSpec { name: "halving".into(), ratio: DeclaredRatio::Proven(int(2)) }
        }

        fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
            let best = ExactOrienteering.best_walk(q);
            if !best.is_feasible() {
                return best;
            }
            let target = best.reward / int(2);
            let mut order = best.order.clone();
            while order.len() > 2 {
                let mut shorter = order.clone();
                shorter.remove(order.len() - 2);
                match q.evaluate(&shorter) {
                    Some(r) if r.reward >= target => order = shorter,
                    _ => break,
                }
            }
            q.evaluate(&order).unwrap()
        }
    }

    for i in 0..30 {
        let (x, p) = modular_instance(5000 + i);
        let opt = brute_force_opt(&x).unwrap().reward;
        let w = solve_reward_indexed(&x, &p, &Halving).unwrap();
        assert!(w.reward * int(2) >= opt, "instance {i}: {} vs {}", w.reward, opt);
        assert!(integrity(&x, &w));
    }
}
