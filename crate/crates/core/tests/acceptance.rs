//! Acceptance criteria, one printed PASS/FAIL line each.
//!
//! Lines are written straight to stdout so they show up in the test log
//! even when the harness captures output.

mod common;

use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chasebound::bounded::{
    check_k_bounded, check_witness_document, oracle_check_k_bounded, BoundedQuery, WitnessDocument,
};
use chasebound::chase::{
    breadth_first_completion, enumerate_breadth_first_derivations, is_subderivation, restrict, run_breadth_first,
    run_unrestricted, verify_derivation, BranchOutcome, Derivation, EnumOptions, HaltReason, Policy, RunConfig,
    Variant,
};
use chasebound::io::{deserialize_trace, dot_edge_count, dot_node_count, export_dot, serialize_trace};
use chasebound::logic::{find_homomorphism, is_isomorphic_up_to_nulls, Atom, AtomSet, Term};
use chasebound::rules::{KnowledgeBase, RuleSet};
use common::{atoms, fixture, fixture_path, printable, random_kb, trigger};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP_CAP_EXAMPLE_2: usize = 50;
const DEPTH_CAP_EXAMPLE_1: usize = 5;
const RANDOM_KBS: usize = 200;
const RANDOM_RULESETS: usize = 50;
const ORACLE_EXTRA_POOL: usize = 2;
const TRACE_TERM_LIMIT: usize = 1 << 20;

const LIMIT_FAST: Duration = Duration::from_secs(1);
const LIMIT_EXAMPLE_3: Duration = Duration::from_secs(60);
const LIMIT_EXAMPLE_4: Duration = Duration::from_secs(30);
const LIMIT_EXAMPLE_11: Duration = Duration::from_secs(5);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(600);
const LIMIT_CROSS_CHECK: Duration = Duration::from_secs(900);

type Outcome = Result<String, String>;

/// Fails with `message` unless `cond` holds. The message is only built on
/// failure, since printing deep nulls can be expensive.
macro_rules! ensure {
    ($cond:expr, $message:expr $(,)?) => {
        if $cond {
            Ok::<(), String>(())
        } else {
            Err(String::from($message))
        }
    };
}

fn run(variant: Variant, kb: &KnowledgeBase, depth_cap: usize, step_cap: usize) -> (HaltReason, usize) {
    let config = RunConfig {
        policy: Policy::Deterministic,
        depth_cap,
        step_cap,
    };
    let out = run_breadth_first(variant, kb, config);
    (out.halt, out.derivation.depth())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chasebound"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn criterion_1() -> Outcome {
    let (k1, k2, k3) = (
        fixture("example2_k1.dlp"),
        fixture("example2_k2.dlp"),
        fixture("example2_k3.dlp"),
    );
    let cap = STEP_CAP_EXAMPLE_2;
    let big = usize::MAX;
    let cases = [
        (Variant::Oblivious, &k1, HaltReason::StepCap, None),
        (Variant::SemiOblivious, &k1, HaltReason::Terminated, Some(1)),
        (Variant::SemiOblivious, &k2, HaltReason::StepCap, None),
        (Variant::Restricted, &k2, HaltReason::Terminated, Some(0)),
        (Variant::Restricted, &k3, HaltReason::StepCap, None),
        (Variant::Equivalent, &k3, HaltReason::Terminated, Some(1)),
    ];
    let mut shown = Vec::new();
    for (variant, kb, halt, depth) in cases {
        let (got, d) = run(variant, kb, big, cap);
        ensure!(got == halt, format!("{variant} halted with {got}, expected {halt}"))?;
        if let Some(depth) = depth {
            ensure!(d == depth, format!("{variant} reached depth {d}, expected {depth}"))?;
        }
        shown.push(format!("{variant}:{got}/{d}"));
    }
    Ok(shown.join(" "))
}

fn criterion_2() -> Outcome {
    let kb = fixture("example1.dlp");
    for variant in Variant::ALL {
        let (halt, depth) = run(variant, &kb, DEPTH_CAP_EXAMPLE_1, usize::MAX);
        ensure!(halt == HaltReason::DepthCap, format!("{variant} halted with {halt}"))?;
        ensure!(depth == DEPTH_CAP_EXAMPLE_1, format!("{variant} depth {depth}"))?;
    }
    Ok("all four variants stop at the depth cap 5".into())
}

fn witness_roundtrip(json: &str, k: usize) -> Result<(), String> {
    let doc: WitnessDocument = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let w = check_witness_document(&doc).map_err(|e| e.to_string())?;
    ensure!(
        w.derivation.rank_of(&w.offending_atom) == Some(k + 1),
        "replayed witness lacks the rank k+1 atom"
    )
}

fn criterion_3() -> Outcome {
    let r2 = fixture("example3_r2.dlp").ruleset;
    let r1 = fixture("example3_r1.dlp").ruleset;
    let v2 = check_k_bounded(&BoundedQuery::new(r2, Variant::Restricted, 1)).map_err(|e| e.to_string())?;
    ensure!(v2.bounded, "{R, R'} reported unbounded")?;
    let v1 = check_k_bounded(&BoundedQuery::new(r1, Variant::Restricted, 1)).map_err(|e| e.to_string())?;
    ensure!(!v1.bounded, "{R} reported bounded")?;
    let w = v1.witness.ok_or("no witness")?;
    ensure!(
        w.minimized_factbase.len() <= 4,
        format!("minimized witness has {} atoms", w.minimized_factbase.len())
    )?;
    witness_roundtrip(&w.to_json(), 1)?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let wpath = dir.path().join("w.json");
    let f2 = fixture_path("example3_r2.dlp");
    let f1 = fixture_path("example3_r1.dlp");
    let (c2, _) = cli(&[
        "kbounded",
        "--rules",
        f2.to_str().unwrap(),
        "--variant",
        "r",
        "--k",
        "1",
    ]);
    ensure!(c2 == 0, format!("kbounded on {{R, R'}} exited with {c2}"))?;
    let (c1, _) = cli(&[
        "kbounded",
        "--rules",
        f1.to_str().unwrap(),
        "--variant",
        "r",
        "--k",
        "1",
        "--witness",
        wpath.to_str().unwrap(),
    ]);
    ensure!(c1 == 1, format!("kbounded on {{R}} exited with {c1}"))?;
    witness_roundtrip(&std::fs::read_to_string(&wpath).map_err(|e| e.to_string())?, 1)?;
    Ok(format!(
        "{{R,R'}} bounded after {} factbases; {{R}} witness {} (minimized to {} atoms)",
        v2.factbases_examined,
        w.factbase,
        w.minimized_factbase.len()
    ))
}

fn criterion_4() -> Outcome {
    let rs = fixture("example4.dlp").ruleset;
    let r = check_k_bounded(&BoundedQuery::new(rs.clone(), Variant::Restricted, 1)).map_err(|e| e.to_string())?;
    ensure!(r.bounded, "R reported unbounded")?;
    let so = check_k_bounded(&BoundedQuery::new(rs.clone(), Variant::SemiOblivious, 1)).map_err(|e| e.to_string())?;
    ensure!(!so.bounded, "SO reported bounded")?;
    let w = so.witness.ok_or("SO verdict without witness")?;
    witness_roundtrip(&w.to_json(), 1)?;
    let o = check_k_bounded(&BoundedQuery::new(rs, Variant::Oblivious, 1)).map_err(|e| e.to_string())?;
    ensure!(!o.bounded, "O reported bounded")?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let wpath = dir.path().join("w.json");
    let f = fixture_path("example4.dlp");
    let (cr, _) = cli(&["kbounded", "--rules", f.to_str().unwrap(), "--variant", "r", "--k", "1"]);
    ensure!(cr == 0, format!("kbounded r exited with {cr}"))?;
    let (cs, _) = cli(&[
        "kbounded",
        "--rules",
        f.to_str().unwrap(),
        "--variant",
        "so",
        "--k",
        "1",
        "--witness",
        wpath.to_str().unwrap(),
    ]);
    ensure!(cs == 1 && wpath.exists(), format!("kbounded so exited with {cs}"))?;
    Ok(format!("R bounded, SO witness {}, O unbounded", w.factbase))
}

fn criterion_5() -> Outcome {
    let kb = fixture("example5.dlp");
    let e = enumerate_breadth_first_derivations(Variant::Restricted, &kb, 2, &EnumOptions::default());
    ensure!(e.truncated.is_none(), "enumeration truncated")?;
    let terminated = e
        .branches
        .iter()
        .filter(|b| b.outcome == BranchOutcome::Terminated)
        .count();
    let capped = e.branches.len() - terminated;
    ensure!(terminated >= 1, "no terminating branch")?;
    ensure!(capped >= 1, "no branch reaches the depth target")?;
    Ok(format!("{terminated} terminating, {capped} reaching rank 3"))
}

fn example_6() -> (Derivation, RuleSet) {
    let kb = fixture("example6.dlp");
    let rs = kb.ruleset.clone();
    let mut d = Derivation::new(Variant::Oblivious, Arc::new(rs.clone()), kb.factbase.clone());
    let z1 = "_:R#{x:a,y:a}#z";
    let z3 = "_:R#{x:a,y:_:R#{x:a,y:a}#z}#z";
    for pairs in [
        vec![("x", "a"), ("y", "a")],
        vec![("x", "b"), ("y", "b")],
        vec![("x", "a"), ("y", z1)],
        vec![("x", z1), ("y", z3)],
    ] {
        d.extend(trigger(&rs, "R", &pairs)).expect("listed trigger applies");
    }
    (d, rs)
}

fn criterion_6() -> Outcome {
    let (d, rs) = example_6();
    let z1 = "_:R#{x:a,y:a}#z";
    let z2 = "_:R#{x:b,y:b}#z";
    let z3 = "_:R#{x:a,y:_:R#{x:a,y:a}#z}#z";
    let z4 = format!("_:R#{{x:{z1},y:{z3}}}#z");
    let f4 = atoms(&[
        "p(a,a)",
        "p(b,b)",
        &format!("p(a,{z1})"),
        &format!("p(b,{z2})"),
        &format!("p({z1},{z3})"),
        &format!("p({z3},{z4})"),
    ]);
    ensure!(d.factbase() == &f4, format!("F4 is {}", d.factbase()))?;
    let g = atoms(&["p(a,a)"]);
    let r = restrict(&d, &g).map_err(|e| e.to_string())?;
    let expected = [
        trigger(&rs, "R", &[("x", "a"), ("y", "a")]),
        trigger(&rs, "R", &[("x", "a"), ("y", z1)]),
        trigger(&rs, "R", &[("x", z1), ("y", z3)]),
    ];
    let got: Vec<_> = r.steps().iter().map(|s| s.trigger.clone()).collect();
    ensure!(got == expected, format!("restricted triggers {got:?}"))?;
    let g3 = atoms(&[
        "p(a,a)",
        &format!("p(a,{z1})"),
        &format!("p({z1},{z3})"),
        &format!("p({z3},{z4})"),
    ]);
    ensure!(r.factbase() == &g3, format!("G3 is {}", r.factbase()))?;
    let dot = export_dot(&d);
    ensure!(
        dot_node_count(&dot) == 6 && dot_edge_count(&dot) == 4,
        "DOT export of the derivation"
    )?;
    Ok(format!("G3 = {}", r.factbase()))
}

fn criterion_7() -> Outcome {
    let kb = fixture("example7.dlp");
    let rs = kb.ruleset.clone();
    let pi = [("x", "a")];
    let build = |order: [&str; 3]| {
        let mut d = Derivation::new(Variant::Oblivious, Arc::new(rs.clone()), kb.factbase.clone());
        for rule in order {
            d.extend(trigger(&rs, rule, &pi)).expect("listed trigger applies");
        }
        d
    };
    let d1 = build(["R1", "R2", "R3"]);
    let d2 = build(["R1", "R3", "R2"]);
    ensure!(d1.depth() == 2, format!("depth(D1) = {}", d1.depth()))?;
    ensure!(d2.depth() == 1, format!("depth(D2) = {}", d2.depth()))?;
    Ok("depth(D1) = 2, depth(D2) = 1".into())
}

fn heredity_case(
    file: &str,
    variant: Variant,
    steps: &[(&str, Vec<(&str, &str)>)],
    missing: (&str, Vec<(&str, &str)>),
) -> Result<(), String> {
    let kb = fixture(file);
    let rs = kb.ruleset.clone();
    let mut d = Derivation::new(variant, Arc::new(rs.clone()), kb.factbase.clone());
    for (rule, pairs) in steps {
        d.extend(trigger(&rs, rule, pairs))
            .map_err(|e| format!("{file}: {e}"))?;
    }
    let full = verify_derivation(variant, &d);
    ensure!(
        full.is_valid_variant_derivation && full.is_breadth_first(),
        format!("{file}: D is not breadth-first")
    )?;
    ensure!(d.depth() == 2, format!("{file}: depth {}", d.depth()))?;
    let r = restrict(&d, &atoms(&["p(a,b)"])).map_err(|e| e.to_string())?;
    let report = verify_derivation(variant, &r);
    ensure!(
        report.is_valid_variant_derivation,
        format!("{file}: restriction is not a {variant}-derivation")
    )?;
    ensure!(
        !report.is_rank_exhaustive,
        format!("{file}: restriction is rank exhaustive")
    )?;
    let c = breadth_first_completion(variant, &r).map_err(|e| e.to_string())?;
    let missing = trigger(&rs, missing.0, &missing.1);
    let pos = c.steps().iter().position(|s| s.trigger == missing);
    let step = pos
        .map(|i| &c.steps()[i])
        .ok_or(format!("{file}: completion lacks {missing}"))?;
    ensure!(
        step.rank == 2,
        format!("{file}: {missing} inserted at rank {}", step.rank)
    )?;
    ensure!(
        is_subderivation(&r, &c),
        format!("{file}: restriction is not a subderivation")
    )?;
    let report = verify_derivation(variant, &c);
    ensure!(
        report.is_valid_variant_derivation && report.is_breadth_first(),
        format!("{file}: completion fails verification: {:?}", report.first_violation),
    )
}

fn criterion_8() -> Outcome {
    let pi1 = vec![("x", "a"), ("y", "b")];
    let pi2 = vec![("x", "a"), ("y", "c")];
    heredity_case(
        "example9.dlp",
        Variant::SemiOblivious,
        &[
            ("R1", pi1.clone()),
            ("R3", pi2.clone()),
            ("R2", pi2.clone()),
            ("R3", pi1.clone()),
        ],
        ("R2", pi1.clone()),
    )?;
    heredity_case(
        "example10.dlp",
        Variant::Restricted,
        &[("R1", pi1.clone()), ("R3", pi1.clone())],
        ("R2", pi1.clone()),
    )?;
    Ok("both restrictions lack the rank-2 trigger; completions verify as breadth-first".into())
}

/// Atoms tagged with their rank, so that isomorphism compares the levels.
fn levels(d: &Derivation) -> AtomSet {
    d.factbase()
        .iter()
        .map(|a| Atom::new(&format!("{}_at_{}", a.predicate, d.rank_of(a).unwrap()), a.args.clone()))
        .collect()
}

fn criterion_9() -> Outcome {
    let kb = fixture("example11.dlp");
    let out = run_breadth_first(Variant::Equivalent, &kb, RunConfig::default());
    ensure!(out.halt == HaltReason::Terminated, format!("halted with {}", out.halt))?;
    let d = out.derivation;
    ensure!(d.depth() == 3, format!("depth {}", d.depth()))?;
    let expected = atoms(&[
        "s_at_0(b)",
        "p_at_0(a,a)",
        "p_at_0(a,b)",
        "p_at_0(b,c)",
        "t_at_1(a)",
        "t_at_1(b)",
        "p_at_1(_:w1,c)",
        "r_at_1(_:w1)",
        "p_at_1(_:w2,b)",
        "r_at_1(_:w2)",
        "p_at_1(_:w3,a)",
        "r_at_1(_:w3)",
        "q_at_2(_:w1)",
        "r_at_2(a)",
        "r_at_2(b)",
        "p_at_2(_:u1,_:w1)",
        "q_at_3(b)",
    ]);
    ensure!(
        is_isomorphic_up_to_nulls(&levels(&d), &expected),
        format!("levels differ: {}", levels(&d)),
    )?;
    let dot = export_dot(&d);
    ensure!(dot_node_count(&dot) == 17, "DOT export does not have 17 nodes")?;

    let reduced: AtomSet = kb.factbase.difference(&atoms(&["s(b)"]));
    let r = restrict(&d, &reduced).map_err(|e| e.to_string())?;
    ensure!(
        !verify_derivation(Variant::Equivalent, &r).is_valid_variant_derivation,
        "the restriction is a valid E-derivation",
    )?;
    let kb2 = KnowledgeBase::new(reduced, kb.ruleset.clone());
    let opts = EnumOptions {
        memo: true,
        ..EnumOptions::default()
    };
    let e = enumerate_breadth_first_derivations(Variant::Equivalent, &kb2, 5, &opts);
    ensure!(e.truncated.is_none(), "enumeration truncated")?;
    ensure!(!e.branches.is_empty(), "no derivation from F'")?;
    for b in &e.branches {
        ensure!(
            b.outcome == BranchOutcome::Terminated,
            "a derivation from F' does not terminate"
        )?;
        ensure!(
            b.derivation.depth() == 2,
            format!("a derivation from F' has depth {}", b.derivation.depth())
        )?;
    }
    Ok(format!(
        "levels 4+8+4+1; restriction invalid; {} E-derivations from F' all of depth 2",
        e.branches.len()
    ))
}

fn brute_force_homomorphism(source: &AtomSet, target: &AtomSet) -> bool {
    let vars: Vec<Term> = source
        .iter()
        .flat_map(|a| a.args.iter())
        .filter(|t| !t.is_constant())
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let images: Vec<Term> = target.terms().into_iter().collect();
    let mut choice = vec![0usize; vars.len()];
    if !vars.is_empty() && images.is_empty() {
        return false;
    }
    loop {
        let map = |t: &Term| match vars.iter().position(|v| v == t) {
            Some(i) => images[choice[i]].clone(),
            None => t.clone(),
        };
        if source
            .iter()
            .all(|a| target.contains(&Atom::new(&a.predicate, a.args.iter().map(map).collect())))
        {
            return true;
        }
        let mut pos = 0;
        while pos < choice.len() {
            choice[pos] += 1;
            if choice[pos] < images.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == choice.len() {
            return false;
        }
    }
}

fn random_atom_set(rng: &mut ChaCha8Rng, terms: &[Term], max: usize) -> AtomSet {
    (0..rng.gen_range(1..=max))
        .map(|_| {
            let (pred, arity) = [("p", 2), ("r", 1)][rng.gen_range(0..2)];
            Atom::new(pred, (0..arity).map(|_| terms.choose(rng).unwrap().clone()).collect())
        })
        .collect()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = [0usize; 5];
    let mut unprintable = 0;
    for i in 0..RANDOM_KBS {
        let kb = random_kb(&mut rng);
        let b = kb.ruleset.b();
        let mut derivations = Vec::new();
        for variant in Variant::ALL {
            let config = RunConfig {
                policy: Policy::Random(i as u64),
                depth_cap: 4,
                step_cap: 40,
            };
            derivations.push(run_breadth_first(variant, &kb, config).derivation);
        }
        for variant in [Variant::Oblivious, Variant::SemiOblivious, Variant::Restricted] {
            derivations.push(run_unrestricted(variant, &kb, i as u64, 40).0);
        }
        for d in &derivations {
            // (a) ancestor bound
            for step in d.steps() {
                let bound = b.saturating_pow(step.rank as u32);
                let anc = d.initial().intersection(&d.trigger_ancestors(&step.trigger).unwrap());
                ensure!(
                    anc.len() <= bound,
                    format!("kb {i}: trigger {} has {} initial ancestors", step.trigger, anc.len())
                )?;
                for atom in &step.produced {
                    let anc = d.initial().intersection(&d.ancestors(atom).unwrap());
                    ensure!(
                        anc.len() <= bound,
                        format!("kb {i}: atom {atom} has {} initial ancestors", anc.len())
                    )?;
                }
            }
            checked[0] += 1;
            // (d) trace replay
            if !printable(d, TRACE_TERM_LIMIT) {
                unprintable += 1;
                continue;
            }
            let text = serialize_trace(d, None);
            let (back, _) = deserialize_trace(&text).map_err(|e| format!("kb {i}: {e}"))?;
            ensure!(&back == d, format!("kb {i}: replay differs"))?;
            ensure!(
                serialize_trace(&back, None) == text,
                format!("kb {i}: trace bytes differ")
            )?;
            checked[3] += 1;
        }
        for d in derivations.iter().filter(|d| d.variant() != Variant::Equivalent) {
            let variant = d.variant();
            let initial: Vec<Atom> = d.initial().iter().cloned().collect();
            let keep: AtomSet = initial.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            let r = restrict(d, &keep).map_err(|e| e.to_string())?;
            // (b) heredity
            ensure!(
                verify_derivation(variant, &r).is_valid_variant_derivation,
                format!("kb {i}: restriction of a {variant}-derivation is invalid"),
            )?;
            checked[1] += 1;
            // (c) completion of restrictions of breadth-first derivations
            if verify_derivation(variant, d).is_breadth_first() {
                let c = breadth_first_completion(variant, &r).map_err(|e| e.to_string())?;
                ensure!(
                    is_subderivation(&r, &c),
                    format!("kb {i}: restriction not contained in completion")
                )?;
                for s in r.steps() {
                    let placed = c.steps().iter().find(|t| t.trigger == s.trigger).unwrap();
                    ensure!(placed.rank == s.rank, format!("kb {i}: rank of {} changed", s.trigger))?;
                }
                let report = verify_derivation(variant, &c);
                ensure!(
                    report.is_valid_variant_derivation && report.is_breadth_first(),
                    format!("kb {i}: completion not breadth-first: {:?}", report.first_violation),
                )?;
                checked[2] += 1;
            }
        }
        // (e) homomorphism kernel
        let terms: Vec<Term> = ["a", "b"]
            .iter()
            .map(|c| Term::constant(c))
            .chain(["X", "Y", "Z"].iter().map(|v| Term::variable(v)))
            .collect();
        let source = random_atom_set(&mut rng, &terms, 4);
        let target_terms: Vec<Term> = ["a", "b", "c"]
            .iter()
            .map(|c| Term::constant(c))
            .chain([Term::initial_null("n")])
            .collect();
        let target = random_atom_set(&mut rng, &target_terms, 4);
        let found = find_homomorphism(&source, &target, &Default::default()).is_some();
        ensure!(
            found == brute_force_homomorphism(&source, &target),
            format!("kb {i}: homomorphism search disagrees on {source} -> {target}")
        )?;
        checked[4] += 1;
    }
    Ok(format!(
        "{RANDOM_KBS} KBs: {} ancestor, {} heredity, {} completion, {} replay ({unprintable} skipped, terms over {TRACE_TERM_LIMIT} bytes), {} homomorphism checks",
        checked[0], checked[1], checked[2], checked[3], checked[4]
    ))
}

fn agree(q: &BoundedQuery, label: &str) -> Result<bool, String> {
    let fast = check_k_bounded(q).map_err(|e| format!("{label}: {e}"))?;
    let slow = oracle_check_k_bounded(q, ORACLE_EXTRA_POOL).map_err(|e| format!("{label}: oracle {e}"))?;
    ensure!(
        fast.bounded == slow.bounded,
        format!("{label}: decider says {}, oracle says {}", fast.bounded, slow.bounded),
    )?;
    Ok(fast.bounded)
}

fn criterion_11() -> Outcome {
    let mut cases = 0;
    for (file, variant) in [
        ("example3_r1.dlp", Variant::Restricted),
        ("example3_r2.dlp", Variant::Restricted),
        ("example4.dlp", Variant::Restricted),
        ("example4.dlp", Variant::SemiOblivious),
        ("example4.dlp", Variant::Oblivious),
    ] {
        agree(&BoundedQuery::new(fixture(file).ruleset, variant, 1), file)?;
        cases += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bounded = 0;
    for i in 0..RANDOM_RULESETS {
        let rule = common::random_rule(&mut rng, "R", 2);
        let variant = [Variant::Oblivious, Variant::SemiOblivious, Variant::Restricted][rng.gen_range(0..3)];
        let rs = RuleSet::new(vec![rule.clone()]).unwrap();
        if agree(
            &BoundedQuery::new(rs, variant, 1),
            &format!("random {i} ({variant}) {rule}"),
        )? {
            bounded += 1;
        }
        cases += 1;
    }
    Ok(format!(
        "{cases} agreements ({bounded} of {RANDOM_RULESETS} random rulesets bounded)"
    ))
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> Outcome, Duration); 11] = [
        (1, criterion_1, LIMIT_FAST),
        (2, criterion_2, LIMIT_FAST),
        (3, criterion_3, LIMIT_EXAMPLE_3),
        (4, criterion_4, LIMIT_EXAMPLE_4),
        (5, criterion_5, LIMIT_FAST),
        (6, criterion_6, LIMIT_FAST),
        (7, criterion_7, LIMIT_FAST),
        (8, criterion_8, LIMIT_FAST),
        (9, criterion_9, LIMIT_EXAMPLE_11),
        (10, criterion_10, LIMIT_PROPERTIES),
        (11, criterion_11, LIMIT_CROSS_CHECK),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failures = Vec::new();
    for (n, check, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        let line = match &result {
            Ok(detail) => format!("criterion {n:>2}: PASS ({elapsed:.2?}) {detail}\n"),
            Err(reason) => format!("criterion {n:>2}: FAIL ({elapsed:.2?}) {reason}\n"),
        };
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if result.is_err() {
            failures.push(n);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
