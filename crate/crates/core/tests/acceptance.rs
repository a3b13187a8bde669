//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness; exits non-zero when any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::reduce::*;
use common::*;
use hedonic::existence::{
    decide_nash_fe_f2, solve_individ_dag, solve_nash_dag, solve_nash_symmetric,
};
use hedonic::fpt::{
    verify_core_fpt_kd, verify_core_fpt_kf_with, ColorCodingConfig, SeparationConfig,
};
use hedonic::oracle::{certify, exists_stable_partition, find_blocking_bruteforce};
use hedonic::reductions::*;
use hedonic::report::strip_timing;
use hedonic::verification::{
    preprocess_wonderful, verify_core_bruteforce, verify_core_xp, verify_individual, verify_nash,
    Preprocessed,
};
use hedonic::{CertKind, Instance, Mode, Notion, Outcome, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(1);
const CAMPAIGN_TIME_LIMIT: Duration = Duration::from_secs(300);
const CAMPAIGN_INSTANCES: usize = 200;
const CAMPAIGN_MAX_AGENTS: usize = 9;
const CAMPAIGN_MAX_KAPPA: usize = 4;
const EXISTENCE_INSTANCES: usize = 300;
const F2_INSTANCES: usize = 300;
const F2_MAX_AGENTS: usize = 6;
const F2_MIN_NOT_EXISTS: usize = 20;

struct Checked {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Checked {
    Checked {
        pass,
        detail: detail.into(),
    }
}

fn left() -> Instance {
    hedonic::io::parse_instance(EXAMPLE_LEFT).unwrap()
}

fn right() -> Instance {
    hedonic::io::parse_instance(EXAMPLE_RIGHT).unwrap()
}

fn criterion1() -> Checked {
    let start = Instant::now();
    let pi1 = hedonic::io::parse_partition(EXAMPLE_PI1, 4).unwrap();
    let pi2 = hedonic::io::parse_partition(EXAMPLE_PI2, 4).unwrap();
    let mut failures = Vec::new();
    if !verify_core_xp(&left(), &pi1, Mode::StrictCore)
        .unwrap()
        .is_stable()
    {
        failures.push("strict-core on pi1");
    }
    let nash = verify_nash(&left(), &pi1).unwrap();
    // Agent 3 (id 2) leaves for the coalition {4} (index 2).
    let expected = CertKind::NashDeviation {
        agent: 2,
        target: Some(2),
    };
    if nash
        .certificate()
        .map(|c| (&c.kind, c.coalition.as_slice()))
        != Some((&expected, &[2, 3][..]))
    {
        failures.push("nash deviation on pi1");
    }
    if !matches!(
        exists_stable_partition(&left(), Notion::Nash)
            .unwrap()
            .outcome,
        Outcome::NotExists(_)
    ) {
        failures.push("nash existence on left");
    }
    if !verify_core_bruteforce(&right(), &pi2, Mode::StrictCore)
        .unwrap()
        .is_stable()
    {
        failures.push("strict-core on pi2");
    }
    if !verify_nash(&right(), &pi2).unwrap().is_stable() {
        failures.push("nash on pi2");
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < GOLDEN_TIME_LIMIT;
    verdict(
        pass,
        format!(
            "mismatches {failures:?}, {} ms (limit {} ms)",
            elapsed.as_millis(),
            GOLDEN_TIME_LIMIT.as_millis()
        ),
    )
}

/// Seeded FE instances with random or reachability-based partitions.
fn campaign() -> Vec<(Instance, Partition)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..CAMPAIGN_INSTANCES)
        .map(|k| {
            let n = rng.gen_range(1..=CAMPAIGN_MAX_AGENTS);
            let p = rng.gen_range(0.1..0.6);
            let inst = random_fe(&mut rng, n, p);
            let pi = if k % 2 == 0 {
                random_partition(&mut rng, n, CAMPAIGN_MAX_KAPPA)
            } else {
                reachability_partition(&Rel::new(&inst), CAMPAIGN_MAX_KAPPA)
            };
            assert!(pi.kappa() <= CAMPAIGN_MAX_KAPPA);
            (inst, pi)
        })
        .collect()
}

fn criterion2(cases: &[(Instance, Partition)]) -> Checked {
    let start = Instant::now();
    let mut disagreements = 0;
    let mut unstable = 0;
    for (k, (inst, pi)) in cases.iter().enumerate() {
        let rel = Rel::new(inst);
        for mode in [Mode::Core, Mode::StrictCore] {
            let truth = naive_blocking(&rel, pi, mode == Mode::StrictCore, 1, rel.n).is_none();
            let seed = k as u64;
            let answers = [
                verify_core_xp(inst, pi, mode).unwrap().is_stable(),
                verify_core_fpt_kd(
                    inst,
                    pi,
                    mode,
                    &SeparationConfig {
                        seed,
                        ..SeparationConfig::default()
                    },
                )
                .unwrap()
                .is_stable(),
                verify_core_fpt_kf_with(
                    inst,
                    pi,
                    mode,
                    &ColorCodingConfig {
                        seed,
                        ..ColorCodingConfig::default()
                    },
                )
                .unwrap()
                .is_stable(),
                find_blocking_bruteforce(inst, pi, mode.block_kind(), None)
                    .unwrap()
                    .is_none(),
            ];
            disagreements += answers.iter().filter(|&&a| a != truth).count();
            unstable += usize::from(!truth);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        disagreements == 0 && elapsed < CAMPAIGN_TIME_LIMIT,
        format!(
            "{} instances x 2 modes, {unstable} unstable, {disagreements} disagreements, {:.1} s (limit {} s)",
            cases.len(),
            elapsed.as_secs_f64(),
            CAMPAIGN_TIME_LIMIT.as_secs()
        ),
    )
}

fn criterion3(cases: &[(Instance, Partition)]) -> Checked {
    let (mut small, mut wonderful, mut violations) = (0, 0, 0);
    for (inst, pi) in cases {
        let rel = Rel::new(inst);
        match preprocess_wonderful(inst, pi).unwrap() {
            Preprocessed::AllBlockersSmall(k) => {
                small += 1;
                if naive_blocking(&rel, pi, true, k + 1, rel.n).is_some() {
                    violations += 1;
                }
            }
            Preprocessed::Wonderful(cert) => {
                wonderful += 1;
                let base = pi_counts(&rel, pi);
                let m = mask_of(&cert.coalition);
                let gains = cert
                    .coalition
                    .iter()
                    .all(|&i| rel.counts(i, m).0 > base[i].0);
                if !(certify(inst, pi, &cert).unwrap() && gains && cert.kind == CertKind::Wonderful)
                {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        violations == 0 && small > 0 && wonderful > 0,
        format!("{small} small, {wonderful} wonderful, {violations} violations"),
    )
}

fn labels(pi: &Partition) -> Vec<usize> {
    (0..pi.n()).map(|i| pi.owner(i)).collect()
}

fn criterion4() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = [0usize; 3];
    for _ in 0..EXISTENCE_INSTANCES {
        // Acyclic friendship, enemies anywhere.
        let n = rng.gen_range(1..=10);
        let friends = {
            let p = rng.gen_range(0.1..0.6);
            random_forward_arcs(&mut rng, n, p)
        };
        let enemies: Vec<_> = {
            let p = rng.gen_range(0.0..0.5);
            random_arcs(&mut rng, n, p)
        }
        .into_iter()
        .filter(|a| !friends.contains(a))
        .collect();
        let inst = Instance::fen(n, &friends, &enemies).unwrap();
        let pi = solve_individ_dag(&inst).unwrap();
        if !(verify_individual(&inst, &pi).unwrap().is_stable()
            && naive_individual(&Rel::new(&inst), &labels(&pi)))
        {
            failures[0] += 1;
        }

        // Acyclic union of both relations.
        let n = rng.gen_range(1..=10);
        let union = {
            let p = rng.gen_range(0.1..0.8);
            random_forward_arcs(&mut rng, n, p)
        };
        let (f, e): (Vec<_>, Vec<_>) = union.into_iter().partition(|_| rng.gen_bool(0.6));
        let inst = Instance::fen(n, &f, &e).unwrap();
        let pi = solve_nash_dag(&inst).unwrap();
        if !(verify_nash(&inst, &pi).unwrap().is_stable()
            && naive_nash(&Rel::new(&inst), &labels(&pi)))
        {
            failures[1] += 1;
        }

        // Symmetric relations.
        let n = rng.gen_range(1..=12);
        let (pf, pe) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let (mut f, mut e) = (Vec::new(), Vec::new());
        for u in 0..n {
            for v in u + 1..n {
                let x: f64 = rng.gen();
                if x < pf {
                    f.extend([(u, v), (v, u)]);
                } else if x < pf + pe {
                    e.extend([(u, v), (v, u)]);
                }
            }
        }
        let inst = Instance::fen(n, &f, &e).unwrap();
        let pi = solve_nash_symmetric(&inst).unwrap();
        if !(verify_nash(&inst, &pi).unwrap().is_stable()
            && naive_nash(&Rel::new(&inst), &labels(&pi)))
        {
            failures[2] += 1;
        }
    }
    verdict(
        failures.iter().sum::<usize>() == 0,
        format!(
            "{EXISTENCE_INSTANCES} each; failures individ-dag {}, nash-dag {}, symmetric {}",
            failures[0], failures[1], failures[2]
        ),
    )
}

fn criterion5() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut done, mut not_exists, mut disagreements) = (0, 0, 0);
    while done < F2_INSTANCES {
        let n = rng.gen_range(1..=F2_MAX_AGENTS);
        let arcs = {
            let p = rng.gen_range(0.2..0.7);
            random_arcs(&mut rng, n, p)
        };
        if brute_fas(n, &arcs, 2).is_none() {
            continue;
        }
        let inst = Instance::fe(n, &arcs).unwrap();
        let truth = naive_exists_nash(&Rel::new(&inst));
        let v = decide_nash_fe_f2(&inst).unwrap();
        if v.outcome.is_positive() != truth {
            disagreements += 1;
        }
        if let Outcome::Exists(p) = &v.outcome {
            if !naive_nash(&Rel::new(&inst), &labels(p)) {
                disagreements += 1;
            }
        }
        not_exists += usize::from(!truth);
        done += 1;
    }
    verdict(
        disagreements == 0 && not_exists >= F2_MIN_NOT_EXISTS,
        format!("{done} instances, {not_exists} NOT-EXISTS (need {F2_MIN_NOT_EXISTS}), {disagreements} disagreements"),
    )
}

/// Every case built from in-domain seeds, for the bound check.
struct Generated {
    in_domain: Vec<GeneratedCase>,
    out_of_domain: Vec<GeneratedCase>,
}

fn criterion6(gen: &mut Generated) -> Checked {
    let mut violations = Vec::new();
    let mut decided = 0;
    let mut keep = |case: GeneratedCase, in_domain: bool| {
        if in_domain {
            gen.in_domain.push(case);
        } else {
            gen.out_of_domain.push(case);
        }
    };
    for x in n1_seeds(4) {
        let in_domain = x.occurrences().iter().all(|&k| k <= 3);
        for mode in [Mode::Core, Mode::StrictCore] {
            let case = gen_fe_core_f1(&x, mode).unwrap();
            decided += 1;
            if oracle_blocked(&case) != case.ground_truth
                || (case.ground_truth == Some(true) && !witness_blocks(&case))
            {
                violations.push(format!("fe-core-f1 {mode} m={}", x.sets.len()));
            }
            keep(case, in_domain);
        }
        // The f = 1 FEN chain needs at least one set.
        if x.sets.is_empty() {
            continue;
        }
        let case = gen_fen_core_f1(&x).unwrap();
        decided += 1;
        if oracle_blocked(&case) != case.ground_truth
            || (case.ground_truth == Some(true) && !witness_blocks(&case))
        {
            violations.push(format!("fen-core-f1 m={}", x.sets.len()));
        }
        keep(case, true);
    }
    for g in all_graphs_up_to_iso(5) {
        for mode in [Mode::Core, Mode::StrictCore] {
            let case = gen_fe_core_clique(&g, mode).unwrap();
            decided += 1;
            if oracle_blocked(&case) != case.ground_truth
                || (case.ground_truth == Some(true) && !witness_blocks(&case))
            {
                violations.push(format!("fe-core-clique {mode} {:?}", g.edges));
            }
            keep(case, true);
        }
    }

    let sided = [
        X3CInstance::new(1, vec![[0, 1, 2]])
            .unwrap()
            .with_sides(vec![Side::Out])
            .unwrap(),
        X3CInstance::new(1, vec![[0, 1, 2], [1, 2, 0]])
            .unwrap()
            .with_sides(vec![Side::Out, Side::In])
            .unwrap(),
        X3CInstance::new(2, vec![[0, 1, 2], [3, 4, 5], [0, 3, 4], [1, 2, 5]])
            .unwrap()
            .with_sides(vec![Side::Out, Side::In, Side::Out, Side::In])
            .unwrap(),
    ];
    let mut witnesses = 0;
    for x in &sided {
        for mode in [Mode::Core, Mode::StrictCore] {
            let case = gen_fe_core_planar4(x, mode).unwrap();
            let size_ok = matches!(&case.witness, Some(Witness::Coalition(w)) if w.len() == 27 * (x.elements() / 3));
            if !(size_ok && witness_blocks(&case)) {
                violations.push(format!("fe-core-planar4 {mode} {:?}", x.sets));
            }
            witnesses += 1;
            keep(case, true);
        }
    }
    let nash_seeds = [
        X3CInstance::new(1, vec![[0, 1, 2]]).unwrap(),
        X3CInstance::new(1, vec![[0, 1, 2], [1, 2, 0]]).unwrap(),
        X3CInstance::new(1, vec![[0, 1, 2], [1, 2, 0], [2, 0, 1]]).unwrap(),
        X3CInstance::new(2, vec![[0, 1, 2], [3, 4, 5], [0, 3, 4], [1, 2, 5]]).unwrap(),
    ];
    for x in &nash_seeds {
        let case = gen_fe_nashex(x).unwrap();
        let ok = match &case.witness {
            Some(Witness::Partition(p)) => {
                verify_nash(&case.instance, p).unwrap().is_stable()
                    && naive_nash(&Rel::new(&case.instance), &labels(p))
            }
            _ => false,
        };
        if !ok {
            violations.push(format!("fe-nashex {:?}", x.sets));
        }
        witnesses += 1;
        keep(case, true);
    }
    let individ_seeds = [
        X3CInstance::new(1, vec![[0, 1, 2], [0, 1, 2], [0, 1, 2]]).unwrap(),
        X3CInstance::new(
            3,
            vec![
                [0, 1, 2],
                [3, 4, 5],
                [6, 7, 8],
                [0, 3, 6],
                [1, 4, 7],
                [2, 5, 8],
                [0, 4, 8],
                [1, 5, 6],
                [2, 3, 7],
            ],
        )
        .unwrap(),
    ];
    for x in &individ_seeds {
        let case = gen_fen_individex(x).unwrap();
        let ok = match &case.witness {
            Some(Witness::Partition(p)) => {
                verify_individual(&case.instance, p).unwrap().is_stable()
                    && naive_individual(&Rel::new(&case.instance), &labels(p))
            }
            _ => false,
        };
        if !ok {
            violations.push(format!("fen-individex {:?}", x.sets));
        }
        witnesses += 1;
        keep(case, true);
    }
    let dag_seeds = [
        X3CInstance::new(1, vec![[0, 1, 2], [2, 1, 0], [1, 0, 2]]).unwrap(),
        X3CInstance::new(
            2,
            vec![
                [0, 1, 2],
                [0, 1, 3],
                [0, 4, 5],
                [1, 4, 5],
                [2, 3, 4],
                [2, 3, 5],
            ],
        )
        .unwrap(),
    ];
    for x in &dag_seeds {
        let case = gen_fen_strictcore_dag(x).unwrap();
        decided += 1;
        let agrees = oracle_blocked(&case).is_none_or(|b| Some(b) == case.ground_truth);
        if !agrees || (case.ground_truth == Some(true) && !witness_blocks(&case)) {
            violations.push(format!("fen-strictcore-dag {:?}", x.sets));
        }
        keep(case, true);
    }
    verdict(
        violations.is_empty(),
        format!("{decided} oracle-decided cases, {witnesses} explicit witnesses, violations {violations:?}"),
    )
}

fn criterion7(gen: &Generated) -> Checked {
    let bad: Vec<String> = gen
        .in_domain
        .iter()
        .filter_map(|c| {
            c.check_bounds()
                .err()
                .map(|e| format!("{}: {e}", c.reduction))
        })
        .collect();
    // Seeds with an element in four sets lie outside the three-friends class
    // and the bound check has to notice.
    let unnoticed = gen
        .out_of_domain
        .iter()
        .filter(|c| c.check_bounds().is_ok())
        .count();
    verdict(
        bad.is_empty() && unnoticed == 0,
        format!(
            "{} cases within bounds, {} out-of-class seeds flagged; violations {bad:?}",
            gen.in_domain.len() - bad.len(),
            gen.out_of_domain.len() - unnoticed
        ),
    )
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn criterion8() -> Checked {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let left = put(d, "left.txt", EXAMPLE_LEFT);
    let right = put(d, "right.txt", EXAMPLE_RIGHT);
    let pi1 = put(d, "pi1.txt", EXAMPLE_PI1);
    let pi2 = put(d, "pi2.txt", EXAMPLE_PI2);
    let singles = put(
        d,
        "singles.txt",
        "coalition 0\ncoalition 1\ncoalition 2\ncoalition 3\n",
    );
    let mut runs: Vec<Vec<String>> = Vec::new();
    let chain = put(
        d,
        "chain.txt",
        "model fe\nagents 3\nfriend 0 1\nfriend 1 2\n",
    );
    let chain_pi = put(d, "chain_pi.txt", "coalition 0 2\ncoalition 1\n");
    for stability in ["core", "strict-core"] {
        runs.push(
            [
                "verify",
                "--stability",
                stability,
                "--instance",
                &chain,
                "--partition",
                &chain_pi,
                "--algo",
                "dag",
            ]
            .map(String::from)
            .to_vec(),
        );
    }
    for algo in ["brute", "xp", "fpt-kd", "fpt-kf"] {
        for stability in ["core", "strict-core"] {
            for pi in [&pi1, &singles] {
                runs.push(
                    [
                        "--seed",
                        "17",
                        "verify",
                        "--stability",
                        stability,
                        "--instance",
                        &left,
                        "--partition",
                        pi,
                        "--algo",
                        algo,
                    ]
                    .map(String::from)
                    .to_vec(),
                );
            }
        }
    }
    for stability in ["nash", "individual"] {
        runs.push(
            [
                "verify",
                "--stability",
                stability,
                "--instance",
                &right,
                "--partition",
                &pi2,
            ]
            .map(String::from)
            .to_vec(),
        );
    }
    let chain_fen = put(
        d,
        "chain_fen.txt",
        "model fen\nagents 3\nfriend 0 1\nfriend 1 2\nenemy 0 2\n",
    );
    for (inst, algo) in [
        (&left, "scc"),
        (&left, "f2"),
        (&chain_fen, "dag-individ"),
        (&chain_fen, "dag-nash"),
        (&right, "brute"),
    ] {
        let mut r: Vec<String> = ["solve", "--instance", inst, "--algo", algo]
            .map(String::from)
            .to_vec();
        if algo == "brute" {
            r.extend(["--stability", "strict-core"].map(String::from));
        }
        runs.push(r);
    }
    runs.push(
        [
            "params",
            "--instance",
            &left,
            "--partition",
            &pi1,
            "--exact-fas",
        ]
        .map(String::from)
        .to_vec(),
    );
    for notion in ["core", "strict-core", "nash", "individual"] {
        runs.push(
            ["oracle", "--notion", notion, "--instance", &right]
                .map(String::from)
                .to_vec(),
        );
    }
    let mut generate_dirs = Vec::new();
    for r in REDUCTIONS {
        let seed = put(d, &format!("{r}.seed"), seed_for(r));
        for copy in ["a", "b"] {
            let out = d.join(format!("{r}-{copy}"));
            generate_dirs.push(out.clone());
            runs.push(
                [
                    "generate",
                    "--reduction",
                    r,
                    "--seed",
                    &seed,
                    "--out",
                    out.to_str().unwrap(),
                ]
                .map(String::from)
                .to_vec(),
            );
        }
    }

    let mut differing = Vec::new();
    let mut commands = std::collections::BTreeSet::new();
    for args in &runs {
        let mut full = vec!["--report".to_string()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = run_cli(&refs);
        let b = run_cli(&refs);
        let first = refs
            .iter()
            .find(|w| !w.starts_with("--") && !w.chars().all(|c| c.is_ascii_digit()))
            .unwrap()
            .to_string();
        commands.insert(first);
        let same = a.0 == b.0
            && strip_timing(&a.1) == strip_timing(&b.1)
            && a.0 != 2
            && a.1.contains("elapsed_ms");
        if !same {
            differing.push(args.join(" "));
        }
    }
    for pair in generate_dirs.chunks(2) {
        for f in ["instance.txt", "partition.txt", "witness.txt"] {
            let (x, y) = (
                fs::read(pair[0].join(f)).ok(),
                fs::read(pair[1].join(f)).ok(),
            );
            if x != y {
                differing.push(format!("{} {f}", pair[0].display()));
            }
        }
    }
    verdict(
        differing.is_empty() && commands.len() == 5,
        format!(
            "{} invocations over {:?}, differing {differing:?}",
            runs.len(),
            commands
        ),
    )
}

fn main() -> ExitCode {
    let cases = campaign();
    let mut generated = Generated {
        in_domain: Vec::new(),
        out_of_domain: Vec::new(),
    };
    let mut all = true;
    let mut report = |k: usize, name: &str, o: Checked| {
        all &= o.pass;
        println!(
            "criterion {k}: {} {name} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    };
    report(1, "example golden results", criterion1());
    report(2, "oracle equivalence campaign", criterion2(&cases));
    report(3, "wonderful preprocessing bound", criterion3(&cases));
    report(4, "existence guarantees", criterion4());
    report(5, "f <= 2 Nash decision", criterion5());
    report(6, "reduction equivalence", criterion6(&mut generated));
    report(7, "parameter bounds", criterion7(&generated));
    report(8, "CLI determinism", criterion8());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
