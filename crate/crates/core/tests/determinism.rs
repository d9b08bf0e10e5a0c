//! Reruns, trace replays and verdict reproducibility across the constructions.

use immunity::checkers::{check_canonical_immunity, check_effective_immunity, Verdict, Violation};
use immunity::constructions::*;
use immunity::machine::build::*;
use immunity::machine::eval::{we_bounded, OracleString, StepBudget};
use immunity::machine::{library, pair, ProgramCode};
use immunity::mathias::*;
use immunity::numberings::pool::default_registry;
use immunity::numberings::Registry;
use immunity::schnorr::in_u_n;
use immunity::{FiniteSet, SetPrefix};

fn replays(trace: &ConstructionTrace, target: &str, prefix: &SetPrefix) {
    assert_eq!(
        &trace.replay(target),
        prefix.members(),
        "replay of {target}"
    );
    let text = trace.to_string();
    let parsed: ConstructionTrace = text.parse().unwrap();
    assert_eq!(&parsed, trace);
    assert_eq!(parsed.to_string(), text);
}

fn pool_codes(reg: &Registry) -> Vec<ProgramCode> {
    reg.iter().map(|d| d.rule.code()).collect()
}

#[test]
fn delta2_is_deterministic() {
    let codes = pool_codes(&default_registry());
    let a = delta2_prefix(&codes, 2000, 32).unwrap();
    let b = delta2_prefix(&codes, 2000, 32).unwrap();
    assert_eq!(a.prefix, b.prefix);
    assert_eq!(a.trace, b.trace);
    replays(&a.trace, "R", &a.prefix);
}

#[test]
fn bci_is_deterministic() {
    let reg = default_registry();
    let a = bci_run(&reg, 300).unwrap();
    let b = bci_run(&reg, 300).unwrap();
    assert_eq!(a.trace, b.trace);
    replays(&a.trace, "R", &a.r);
    replays(&a.trace, "Q", &a.q);
}

#[test]
fn cofinal_is_deterministic() {
    let reg = default_registry();
    let bits = [true, false, false, true, true, false, true, true];
    let a = cofinal_encode(&reg, &bits).unwrap();
    let b = cofinal_encode(&reg, &bits).unwrap();
    assert_eq!(a.trace, b.trace);
    replays(&a.trace, "R", &a.r);
    replays(&a.trace, "Q", &a.q);
}

#[test]
fn ci_hi_and_ci_not_hi_are_deterministic() {
    let reg = default_registry();
    let fns = [library::identity(), library::constant(9)];
    let a = ci_hi_run(&reg, &fns, 40).unwrap();
    assert_eq!(a.trace, ci_hi_run(&reg, &fns, 40).unwrap().trace);
    replays(&a.trace, "R", &a.prefix);

    let c = ci_not_hi_run(&reg, 200).unwrap();
    assert_eq!(c.trace, ci_not_hi_run(&reg, 200).unwrap().trace);
    replays(&c.trace, "R", &c.prefix);
}

#[test]
fn hi_not_ci_is_deterministic() {
    let fns = [library::constant(1), library::identity()];
    let a = hi_not_ci_run(&fns, 6).unwrap();
    assert_eq!(a.trace, hi_not_ci_run(&fns, 6).unwrap().trace);
    replays(&a.trace, "R", &a.prefix);
}

#[test]
fn effectivize_respects_two_e() {
    let programs: Vec<ProgramCode> = [
        library::always_diverge(),
        library::domain_exactly(&[3]),
        library::domain_below(5),
        library::domain_exactly(&[7, 20, 21, 22]),
        library::domain_below(40),
    ]
    .iter()
    .map(|p| p.code())
    .collect();
    let r = SetPrefix::tight(FiniteSet::interval(0, 60));
    let run = effectivize_inside(&r, 30, 200, &programs).unwrap();
    replays(&run.trace, "Q", &run.prefix);
    let h = mul(konst(2u32), proj(0));
    let hi = run.settled_below.saturating_sub(1);
    let v = check_effective_immunity(&run.prefix, &h, &programs, 0, hi, 200).unwrap();
    assert!(v.is_pass(), "{v}");
    // by enumeration
    for (e, code) in programs.iter().enumerate().take(hi + 1) {
        let w = we_bounded(code, StepBudget(200), None);
        if run.prefix.includes(&w) {
            assert!(w.len() <= 2 * e, "W_{e} = {w}");
        }
    }
}

#[test]
fn verdicts_reproduce_and_failures_recheck() {
    let reg = default_registry();
    let ones = SetPrefix::tight(FiniteSet::interval(0, 200));
    let a = check_canonical_immunity(&ones, &library::identity(), &reg, |e| e as u64, 30).unwrap();
    let b = check_canonical_immunity(&ones, &library::identity(), &reg, |e| e as u64, 30).unwrap();
    assert_eq!(a, b);
    assert!(a.is_fail());
    let text = a.to_string();
    assert_eq!(text.parse::<Verdict>().unwrap(), a);
    for v in a.violations() {
        let Violation::Immunity { id, i, set, .. } = v else {
            panic!("unexpected {v:?}");
        };
        let d = reg.get(*id).unwrap().rule.value(*i);
        assert_eq!(&d, set);
        assert!(d.len() as u64 > *i && ones.includes(&d));
    }
}

#[test]
fn generic_examples() {
    let reg = default_registry();
    let empty = build_generic(omega_start(), &[], 100).unwrap();
    assert_eq!(empty.chain.len(), 1);
    let two = build_generic(
        omega_start(),
        &[Transformer::Size(1), Transformer::Size(2)],
        100,
    )
    .unwrap();
    assert_eq!(
        two.chain.last().unwrap().condition.stem(),
        &FiniteSet::new([0, 1])
    );

    for d in reg.iter() {
        let schedule = [
            Transformer::Thin {
                id: d.id,
                rule: d.rule.clone(),
                count: 16,
            },
            Transformer::Size(8),
        ];
        let run = build_generic(omega_start(), &schedule, 1000).unwrap();
        let stem = run.chain.last().unwrap().condition.stem().clone();
        assert_eq!(stem.len(), 8);
        let mut single = Registry::new();
        single.register_rule(d.rule.clone());
        let v = check_canonical_immunity(
            &SetPrefix::tight(stem),
            &library::identity(),
            &single,
            |_| 0,
            8,
        )
        .unwrap();
        assert!(v.is_pass(), "D{}: {v}", d.id);
    }
}

#[test]
fn full_schedule_generic_is_immune_and_in_the_test() {
    let reg = default_registry();
    let run = build_generic(omega_start(), &full_schedule(&reg, 16, 6), 1000).unwrap();
    let again = build_generic(omega_start(), &full_schedule(&reg, 16, 6), 1000).unwrap();
    assert_eq!(run.prefix, again.prefix);
    let lines: Vec<String> = run.chain.iter().map(|l| l.to_string()).collect();
    for (line, link) in lines.iter().zip(&run.chain) {
        assert_eq!(
            line.parse::<ChainLink>().unwrap().to_string(),
            link.to_string()
        );
    }
    let starts: std::collections::HashMap<usize, u64> = run.thin_starts.iter().copied().collect();
    let bound = starts.values().map(|k| k + 16).min().unwrap();
    let v = check_canonical_immunity(
        &run.prefix,
        &library::identity(),
        &reg,
        |e| starts[&e],
        bound,
    )
    .unwrap();
    assert!(v.is_pass(), "{v}");
    let m = run.missed_blocks.iter().copied().max().unwrap();
    for n in 0..run.missed_blocks.len() as u64 {
        assert!(in_u_n(&run.prefix, n, m).unwrap().is_some(), "n={n}");
    }
}

#[test]
fn two_generic_table_replays() {
    let ones = library::enumerate_oracle_ones().code();
    let a = build_2generic_witness(
        &OracleString::empty(),
        &ones,
        &library::constant(1),
        1,
        1,
        400,
    )
    .unwrap();
    let b = build_2generic_witness(
        &OracleString::empty(),
        &ones,
        &library::constant(1),
        1,
        1,
        400,
    )
    .unwrap();
    assert_eq!(a.entries, b.entries);
    let first = &a.entries[0];
    assert_eq!((first.i, first.n), (0, 0));
    let EntryOutcome::Resolved { rho, h, .. } = &first.outcome else {
        panic!("unresolved");
    };
    assert_eq!(a.numbering.value(2 * pair(0, 0)), *h);
    // f ≡ 1 so two elements, both read as ones of ρ
    assert_eq!(h.len(), 2);
    assert!(h.iter().all(|x| rho.get(x as usize) == Some(true)));
}
