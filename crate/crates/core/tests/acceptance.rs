//! Acceptance suite. Runs every criterion at its stated size and tolerance
//! and prints one `PASS`/`FAIL` line per criterion; exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use simsynth::operators::Operators;
use simsynth::oracle::{
    bounded_controllable_condition, bounded_observable_condition,
    bounded_strong_observable_condition, brute_force_supremal, default_bound,
    projection_pairs_bounded, random_instance, trim, BruteForce, RandomInstanceSpec,
};
use simsynth::products::observable_product;
use simsynth::simulation::{f_s_step, is_simulated_by, SimMode};
use simsynth::synthesis::{
    iterate, synthesize, verify_result, Nonexistence, Outcome, SynthesisTrace,
};
use simsynth::{fixtures, Automaton, Mode, StatePairSet};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

/// Small instances with flags, sizes and densities varying by seed.
fn small_instance(seed: u64) -> (Automaton, Automaton) {
    let densities = [0.3, 0.45, 0.6];
    random_instance(&RandomInstanceSpec {
        spec_states: (1, 4),
        plant_states: (1, 4),
        events: 1 + (seed % 3) as usize,
        density: densities[(seed / 3 % 3) as usize],
        branching: 0.25,
        frac_uncontrollable: 0.4,
        frac_unobservable: 0.3,
        frac_marked: 0.25,
        substructure: seed % 4 == 3,
        seed,
    })
}

/// Iteration counts seen by every suite, checked by the termination criterion.
#[derive(Default)]
struct Termination {
    runs: usize,
    violations: Vec<String>,
}

impl Termination {
    fn record(&mut self, label: &str, r: &Automaton, g: &Automaton, t: &SynthesisTrace) {
        self.runs += 1;
        let limit = r.num_states() * g.num_states() + 1;
        if t.iterations.len() > limit {
            self.violations
                .push(format!("{label}: {} > {limit}", t.iterations.len()));
        }
    }
}

fn names(r: &Automaton, rows: &[usize]) -> Vec<String> {
    rows.iter().map(|&q| r.state_name(q).to_string()).collect()
}

fn criterion_mfg(term: &mut Termination) -> Verdict {
    let (r, g) = (fixtures::mfg_spec(), fixtures::mfg_plant());
    let start = Instant::now();
    let trace = synthesize(&r, &g, Mode::ControllableStrongObservable).unwrap();
    let elapsed = start.elapsed();
    term.record("mfg", &r, &g, &trace);

    let ops = Operators::new(&r, &g).unwrap();
    let full = StatePairSet::full(&r, &g);
    let qd = names(&r, &ops.q_d(&full).unwrap().states());
    let qdp = names(&r, &ops.q_d_prime(&full).unwrap().states());
    let mut problems = Vec::new();
    if !trace.is_calculable() {
        problems.push("calculability failed".to_string());
    }
    for q in ["q2", "q4"] {
        if !qd.iter().any(|s| s == q) {
            problems.push(format!("{q} not in Q_d"));
        }
    }
    if !qdp.iter().any(|s| s == "q1") {
        problems.push("q1 not in Q_d'".to_string());
    }
    if trace.iterations.len() != 2 || trace.iterations[0].pairs != trace.iterations[1].pairs {
        problems.push(format!("{} iterations", trace.iterations.len()));
    }
    let expected: Vec<String> = [0, 3, 5, 6, 7, 8, 9, 10, 11, 12]
        .iter()
        .map(|i| format!("q{i}"))
        .collect();
    match &trace.outcome {
        Outcome::Result { pairs, .. } => {
            if !pairs.contains_names("q0", "x0") {
                problems.push("(q0,x0) missing".to_string());
            }
            let mut got = pairs.spec_projection_names();
            got.sort_by_key(|s| s[1..].parse::<usize>().unwrap());
            if got != expected {
                problems.push(format!("spec states {}", got.join(",")));
            }
        }
        Outcome::Nonexistent(n) => problems.push(format!("nonexistent: {n:?}")),
    }
    if elapsed >= Duration::from_secs(1) {
        problems.push(format!("took {elapsed:?}"));
    }
    let detail = if problems.is_empty() {
        format!(
            "Q_d={{{}}} Q_d'={{{}}}, 2 iterations, {elapsed:?}",
            qd.join(","),
            qdp.join(",")
        )
    } else {
        problems.join("; ")
    };
    verdict(problems.is_empty(), detail)
}

fn oracle_agrees(r: &Automaton, pairs: Option<&StatePairSet>, oracle: &BruteForce) -> bool {
    match (pairs, oracle) {
        (Some(p), BruteForce::Supremal(w)) => &trim(r, p) == w,
        (None, BruteForce::Nonexistent) => true,
        _ => false,
    }
}

fn criterion_oracle(term: &mut Termination) -> Verdict {
    let start = Instant::now();
    let (mut calculable, mut mismatches, mut seed) = (0, Vec::new(), 0u64);
    while calculable < 500 {
        let (r, g) = small_instance(seed);
        let trace = synthesize(&r, &g, Mode::ControllableStrongObservable).unwrap();
        term.record(&format!("oracle seed {seed}"), &r, &g, &trace);
        if trace.is_calculable() {
            calculable += 1;
            let oracle = brute_force_supremal(&r, &g, Mode::ControllableStrongObservable).unwrap();
            if !oracle_agrees(
                &r,
                trace.final_pairs().filter(|_| trace.result().is_some()),
                &oracle,
            ) {
                mismatches.push(seed);
            }
        }
        seed += 1;
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(300);
    let first: Vec<String> = mismatches.iter().take(8).map(u64::to_string).collect();
    verdict(
        ok,
        format!(
            "{calculable} calculable of {seed} instances, {} mismatches (seeds {}...), {elapsed:?}",
            mismatches.len(),
            first.join(",")
        ),
    )
}

/// A random Z' and a random Z ⊆ Z', drawn from the seed.
fn nested_sets(r: &Automaton, g: &Automaton, seed: u64) -> (StatePairSet, StatePairSet) {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut bit = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state & 3 != 0
    };
    let mut big = StatePairSet::empty(r, g);
    let mut small = StatePairSet::empty(r, g);
    for q in r.state_ids() {
        for x in g.state_ids() {
            if bit() {
                big.insert(q, x);
                if bit() {
                    small.insert(q, x);
                }
            }
        }
    }
    (small, big)
}

fn criterion_monotone() -> Verdict {
    let (mut pairs, mut fc_pairs, mut fso_pairs) = (0, 0, 0);
    let mut violations = Vec::new();
    let mut seed = 0u64;
    while pairs < 1000 || fc_pairs < 1000 || fso_pairs < 1000 {
        let (r, g) = small_instance(seed);
        let ops = Operators::new(&r, &g).unwrap();
        let calc_c = ops.is_calculable_controllable().is_calculable();
        let calc_so = ops
            .is_calculable_strong_observable()
            .unwrap()
            .is_calculable();
        for k in 0..4 {
            let (z, z2) = nested_sets(&r, &g, seed * 4 + k);
            pairs += 1;
            let fs = f_s_step(&r, &g, &z, SimMode::Full).unwrap();
            let fs2 = f_s_step(&r, &g, &z2, SimMode::Full).unwrap();
            if !fs.is_subset(&fs2) {
                violations.push(format!("F_s seed {seed}"));
            }
            if calc_c {
                fc_pairs += 1;
                if !ops.f_c(&z).unwrap().is_subset(&ops.f_c(&z2).unwrap()) {
                    violations.push(format!("F_c seed {seed}"));
                }
            }
            if calc_so {
                fso_pairs += 1;
                if !ops.f_so(&z).unwrap().is_subset(&ops.f_so(&z2).unwrap()) {
                    violations.push(format!("F_so seed {seed}"));
                }
            }
        }
        seed += 1;
    }
    let count = |p: &str| violations.iter().filter(|v| v.starts_with(p)).count();
    let first: Vec<&str> = violations.iter().take(4).map(String::as_str).collect();
    verdict(
        violations.is_empty(),
        format!(
            "F_s {} / {pairs}, F_c {} / {fc_pairs}, F_so {} / {fso_pairs} violations {}",
            count("F_s "),
            count("F_c "),
            count("F_so "),
            first.join(", ")
        ),
    )
}

fn criterion_projection() -> Verdict {
    let mut bad = Vec::new();
    for seed in 0..200u64 {
        let (r, g) = small_instance(seed);
        let product = observable_product(&r, &g).unwrap();
        let k = r.num_states() * g.num_states();
        if product.pair_mask() != projection_pairs_bounded(&r, &g, k) {
            bad.push(seed);
        }
    }
    verdict(
        bad.is_empty(),
        format!("200 instances, {} differ {:?}", bad.len(), bad),
    )
}

fn criterion_soundness(term: &mut Termination) -> Verdict {
    let (mut results, mut nonexistent) = (0, 0);
    let mut unsound = Vec::new();
    let mut unconfirmed = Vec::new();
    for seed in 0..600u64 {
        let (r, g) = small_instance(seed);
        for mode in [Mode::StrongObservable, Mode::ControllableStrongObservable] {
            let trace = synthesize(&r, &g, mode).unwrap();
            term.record(&format!("soundness seed {seed}"), &r, &g, &trace);
            let label = format!("{seed}/{}", mode.short_name());
            match &trace.outcome {
                Outcome::Result { automaton, .. } => {
                    results += 1;
                    let report = verify_result(&r, &g, automaton, None).unwrap();
                    let k = default_bound(&r, &g);
                    // the so mode makes no controllability claim
                    let first_four = report.checks.iter().take(4).all(|c| {
                        c.passed || (mode == Mode::StrongObservable && c.name == "controllable")
                    });
                    let so = bounded_strong_observable_condition(automaton, &g, k).unwrap();
                    let c = bounded_controllable_condition(automaton, &g, k).unwrap();
                    let c_ok = mode == Mode::StrongObservable || c.is_none();
                    if !(first_four && so.is_none() && c_ok) {
                        unsound.push(label);
                    }
                }
                Outcome::Nonexistent(cause) => {
                    nonexistent += 1;
                    let oracle = brute_force_supremal(&r, &g, mode).unwrap();
                    let confirmed = match cause {
                        Nonexistence::InitialPairRemoved => oracle == BruteForce::Nonexistent,
                        Nonexistence::NotCalculable(_) => {
                            !matches!(oracle, BruteForce::Supremal(_))
                        }
                    };
                    if !confirmed {
                        let tag = match cause {
                            Nonexistence::InitialPairRemoved => "removed",
                            Nonexistence::NotCalculable(_) => "not-calculable",
                        };
                        unconfirmed.push(format!("{label} {tag}"));
                    }
                }
            }
        }
    }
    let first: Vec<&str> = unconfirmed.iter().take(4).map(String::as_str).collect();
    let not_calc = unconfirmed
        .iter()
        .filter(|u| u.ends_with("not-calculable"))
        .count();
    verdict(
        unsound.is_empty() && unconfirmed.is_empty(),
        format!(
            "{results} results, {} unsound {:?}; {nonexistent} nonexistent, {} not confirmed \
             ({not_calc} of them not calculable; {}...)",
            unsound.len(),
            unsound.iter().take(6).collect::<Vec<_>>(),
            unconfirmed.len(),
            first.join(", ")
        ),
    )
}

fn criterion_strong_implies_observable() -> Verdict {
    let (mut tested, mut passing_so, mut bad) = (0, 0, Vec::new());
    for seed in 0..200u64 {
        let (r, g) = small_instance(seed);
        let k = default_bound(&r, &g);
        // every reachable-row subautomaton of R
        for mask in 0..(1u32 << r.num_states()) {
            let z = StatePairSet::from_pairs(
                &r,
                &g,
                r.state_ids()
                    .filter(|&q| mask >> q & 1 == 1)
                    .flat_map(|q| g.state_ids().map(move |x| (q, x))),
            );
            let Ok(sub) = r.restrict(&z) else { continue };
            // simulation-based strong observability includes sub ≺ G
            if !is_simulated_by(&sub, &g).unwrap() {
                continue;
            }
            tested += 1;
            if bounded_strong_observable_condition(&sub, &g, k)
                .unwrap()
                .is_some()
            {
                continue;
            }
            passing_so += 1;
            if bounded_observable_condition(&sub, &g, k).unwrap().is_some() {
                bad.push(seed);
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "200 instances, {tested} subautomata, {passing_so} strong observable, {} counterexamples",
            bad.len()
        ),
    )
}

fn criterion_performance(term: &mut Termination) -> Verdict {
    let mut worst = Duration::ZERO;
    let mut summary = Vec::new();
    for seed in 0..3u64 {
        let (r, g) = random_instance(&RandomInstanceSpec {
            spec_states: (30, 30),
            plant_states: (30, 30),
            events: 6,
            density: 0.35,
            branching: 0.15,
            frac_uncontrollable: 0.3,
            frac_unobservable: 0.15,
            frac_marked: 0.2,
            substructure: seed != 0,
            seed: 1000 + seed,
        });
        let unobservable = r.alphabet().unobservable().count();
        let start = Instant::now();
        let trace = synthesize(&r, &g, Mode::ControllableStrongObservable).unwrap();
        // the operator pipeline also runs when the calculability gate stops synthesis
        let iterations = iterate(&r, &g, Mode::ControllableStrongObservable).unwrap();
        let elapsed = start.elapsed();
        term.record(&format!("performance seed {seed}"), &r, &g, &trace);
        worst = worst.max(elapsed);
        summary.push(format!(
            "{unobservable} unobservable, calculable {}, {} iterations, {elapsed:.2?}",
            trace.is_calculable(),
            iterations.len()
        ));
    }
    verdict(
        worst < Duration::from_secs(30),
        format!("30x30, 6 events: {}", summary.join("; ")),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; listing must not run the suite
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut term = Termination::default();
    let results = [
        ("1 mfg reproduction", criterion_mfg(&mut term)),
        ("2 oracle supremality", criterion_oracle(&mut term)),
        ("3 monotonicity", criterion_monotone()),
        ("4 projection pairs", criterion_projection()),
        ("5 soundness", criterion_soundness(&mut term)),
        (
            "6 strong observable implies observable",
            criterion_strong_implies_observable(),
        ),
        ("7 performance", criterion_performance(&mut term)),
    ];
    let mut all = true;
    for (name, v) in &results {
        all &= v.passed;
        println!(
            "{} criterion {name}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let t = verdict(
        term.violations.is_empty(),
        format!(
            "{} runs, {} over |Q||X|+1 {:?}",
            term.runs,
            term.violations.len(),
            term.violations
        ),
    );
    all &= t.passed;
    println!(
        "{} criterion 8 termination bound: {}",
        if t.passed { "PASS" } else { "FAIL" },
        t.detail
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
