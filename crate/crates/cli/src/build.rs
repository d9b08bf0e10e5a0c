//! `immunity build <construction>`: run a construction and assemble its report.

use anyhow::{bail, Context, Result};
use immunity::checkers::Indexing;
use immunity::constructions::*;
use immunity::machine::build::*;
use immunity::machine::{library, OracleString, Program, ProgramCode};
use immunity::mathias::{build_generic, omega_start};
use immunity::numberings::Registry;
use immunity::report::{DominationQuery, EffectiveQuery, ImmunityQuery, Report};
use immunity::{FiniteSet, SetPrefix};

use crate::spec;
use crate::BuildArgs;

pub const CONSTRUCTIONS: [&str; 9] = [
    "delta2",
    "bci",
    "cofinal",
    "ci-hi",
    "ci-not-hi",
    "hi-not-ci",
    "effectivize",
    "2generic-witness",
    "generic",
];

fn immune(report: &mut Report, target: &str, index_bound: u64) {
    report.immunity.push(ImmunityQuery {
        target: target.into(),
        index_bound,
    });
}

fn functions(args: &BuildArgs, default: &[&str]) -> Result<Vec<Program>> {
    let names: Vec<&str> = if args.fns.is_empty() {
        default.to_vec()
    } else {
        args.fns.iter().map(String::as_str).collect()
    };
    names.iter().map(|n| spec::function(n)).collect()
}

pub fn run(name: &str, args: &BuildArgs, pool: Registry) -> Result<Report> {
    for (flag, v) in [
        ("--stages", args.stages),
        ("--markers", args.markers),
        ("--blocks", args.blocks),
    ] {
        if v == Some(0) {
            bail!("{flag} must be positive");
        }
    }
    // ci-hi and effectivize touch every (e, i) below the horizon, so they
    // default lower
    let stages = args.stages.unwrap_or(match name {
        "ci-hi" => 64,
        "effectivize" => 200,
        _ => 1000,
    });
    let mut r = Report::new(name);
    match name {
        "delta2" => {
            let markers = args.markers.unwrap_or(64);
            let codes: Vec<ProgramCode> = pool.iter().map(|d| d.rule.code()).collect();
            let run = delta2_prefix(&codes, stages, markers as usize)?;
            r.param("stages", stages).param("markers", markers);
            let settled = run
                .entries
                .iter()
                .filter(|e| e.settled_at.is_some())
                .count();
            r.notes.push(format!(
                "settled entries {settled} of {}",
                run.entries.len()
            ));
            r.prefixes.push(("R".into(), run.prefix));
            r.moduli.insert(None, proj(0).code());
            immune(&mut r, "R", args.index_bound.unwrap_or(markers));
            r.trace = run.trace;
        }
        "bci" => {
            let run = bci_run(&pool, stages)?;
            r.param("stages", stages);
            r.prefixes.push(("R".into(), run.r));
            r.prefixes.push(("Q".into(), run.q));
            r.moduli.insert(
                None,
                add(mul(konst(4u32), pair(proj(0), proj(0))), konst(3u32)).code(),
            );
            match args.index_bound.or(run.index_bound) {
                Some(b) => {
                    immune(&mut r, "R", b);
                    immune(&mut r, "Q", b);
                }
                None => r.notes.push("horizon too short for any index".into()),
            }
            r.trace = run.trace;
        }
        "cofinal" => {
            let bits: Vec<bool> = match &args.bits {
                Some(b) => b
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => bail!("--bits takes a 0/1 string"),
                    })
                    .collect::<Result<_>>()?,
                None => vec![true, false, true, true, false, false, true, false],
            };
            if bits.is_empty() {
                bail!("--bits must be nonempty");
            }
            let run = cofinal_encode(&pool, &bits)?;
            let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            r.param("bits", text);
            r.prefixes.push(("R".into(), run.r));
            r.prefixes.push(("Q".into(), run.q));
            r.moduli
                .insert(None, add(mul(konst(2u32), proj(0)), konst(1u32)).code());
            immune(
                &mut r,
                "Q",
                args.index_bound.unwrap_or(bits.len() as u64 - 1),
            );
            r.trace = run.trace;
        }
        "ci-hi" => {
            let fns = functions(args, &["identity", "double", "square"])?;
            let run = ci_hi_run(&pool, &fns, stages)?;
            r.param("stages", stages);
            r.prefixes.push(("R".into(), run.prefix));
            r.moduli.insert(None, proj(0).code());
            immune(&mut r, "R", args.index_bound.unwrap_or(stages - 1));
            for (j, f) in fns.iter().enumerate().take(stages as usize) {
                r.domination.push(DominationQuery {
                    target: "R".into(),
                    complement: false,
                    f: f.code(),
                    lo: j as u64,
                    hi: j as u64,
                    indexing: Indexing::FromZero,
                });
            }
            r.trace = run.trace;
        }
        "ci-not-hi" => {
            let run = ci_not_hi_run(&pool, stages)?;
            r.param("stages", stages);
            let comp = run.prefix.complement().len() as u64;
            let members = run.prefix.members().len() as u64;
            r.prefixes.push(("R".into(), run.prefix));
            r.moduli
                .insert(None, mul(konst(2u32), pair(proj(0), proj(0))).code());
            if let Some(b) = args.index_bound.or(run.index_bound) {
                immune(&mut r, "R", b);
            }
            for (complement, count) in [(false, members), (true, comp)] {
                if count > 0 {
                    r.domination.push(DominationQuery {
                        target: "R".into(),
                        complement,
                        f: mul(konst(2u32), proj(0)).code(),
                        lo: 1,
                        hi: count,
                        indexing: Indexing::FromOne,
                    });
                }
            }
            r.trace = run.trace;
        }
        "hi-not-ci" => {
            let fns = functions(args, &["const:2", "identity"])?;
            let blocks = args.blocks.unwrap_or(9);
            let run = hi_not_ci_run(&fns, blocks)?;
            r.param("blocks", blocks);
            let mut witnesses = Registry::new();
            let mut top = 0;
            for (c, f) in fns.iter().enumerate() {
                witnesses.register_rule(run.witness_numbering(c));
                r.moduli.insert(Some(c), f.code());
                r.k_map.insert(c, 0);
                top = run.witness_indices(c).into_iter().fold(top, u64::max);
            }
            for s in &run.selections {
                r.domination.push(DominationQuery {
                    target: "R".into(),
                    complement: false,
                    f: fns[s.function].code(),
                    lo: s.preceding + 1,
                    hi: s.preceding + 1,
                    indexing: Indexing::FromOne,
                });
            }
            r.prefixes.push(("R".into(), run.prefix));
            r.pool = witnesses;
            immune(&mut r, "R", args.index_bound.unwrap_or(top));
            r.trace = run.trace;
            return Ok(r);
        }
        "effectivize" => {
            let budget = args.budget.unwrap_or(200);
            let programs = sample_programs(stages as usize);
            let base = SetPrefix::tight(FiniteSet::interval(0, 2 * stages));
            let run = effectivize_inside(&base, stages, budget, &programs)?;
            r.param("stages", stages).param("budget", budget);
            r.prefixes.push(("Q".into(), run.prefix));
            if run.settled_below > 0 {
                r.effective.push(EffectiveQuery {
                    target: "Q".into(),
                    h: mul(konst(2u32), proj(0)).code(),
                    lo: 0,
                    hi: run.settled_below - 1,
                    budget,
                });
            }
            r.programs = programs;
            r.trace = run.trace;
            return Ok(r);
        }
        "2generic-witness" => {
            let sigma: OracleString = args
                .bits
                .as_deref()
                .unwrap_or("")
                .parse()
                .context("--bits")?;
            let f = functions(args, &["const:0"])?.remove(0);
            let bound = args.index_bound.unwrap_or(3);
            let budget = args.budget.unwrap_or(200);
            let e = library::enumerate_oracle_ones().code();
            let w = build_2generic_witness(&sigma, &e, &f, bound, bound, budget)?;
            r.param("sigma", &sigma)
                .param("bound", bound)
                .param("budget", budget);
            for entry in &w.entries {
                r.notes.push(match &entry.outcome {
                    EntryOutcome::Resolved { beta, h, .. } => {
                        format!(
                            "entry\t{}\t{}\t{}\tresolved\t{beta}\t{h}",
                            entry.i, entry.n, entry.bound
                        )
                    }
                    EntryOutcome::Unresolved { examined } => {
                        format!(
                            "entry\t{}\t{}\t{}\tunresolved\t{examined}",
                            entry.i, entry.n, entry.bound
                        )
                    }
                });
            }
            let mut reg = Registry::new();
            reg.register_rule(w.numbering);
            r.pool = reg;
            return Ok(r);
        }
        "generic" => {
            let horizon = args.horizon.unwrap_or(1000);
            let schedule = spec::schedule(args.schedule.as_deref().unwrap_or("full"), &pool)?;
            let run = build_generic(omega_start(), &schedule, horizon)?;
            r.param("horizon", horizon);
            r.param(
                "missed_blocks",
                format!("{}", FiniteSet::new(run.missed_blocks.iter().copied())),
            );
            r.moduli.insert(None, proj(0).code());
            let top = run
                .thin_starts
                .iter()
                .filter_map(|(_, k)| Some(k + thin_count(&schedule)?))
                .min();
            if let Some(top) = args.index_bound.or(top) {
                for d in pool.iter() {
                    let k = run
                        .thin_starts
                        .iter()
                        .find(|(id, _)| *id == d.id)
                        .map(|&(_, k)| k);
                    r.k_map.insert(d.id, k.unwrap_or(top + 1));
                }
                immune(&mut r, "R", top);
            }
            r.prefixes.push(("R".into(), run.prefix));
            r.chain = run.chain;
        }
        _ => bail!(
            "unknown construction {name:?}; expected one of {}",
            CONSTRUCTIONS.join(", ")
        ),
    }
    r.pool = pool;
    Ok(r)
}

fn thin_count(schedule: &[immunity::mathias::Transformer]) -> Option<u64> {
    schedule
        .iter()
        .filter_map(|t| match t {
            immunity::mathias::Transformer::Thin { count, .. } => Some(*count),
            _ => None,
        })
        .min()
}

/// `W_e = {x < 3e + 3 : (e mod 4 + 1) | x}`.
pub fn sample_programs(count: usize) -> Vec<ProgramCode> {
    (0..count as u64)
        .map(|e| {
            let pred = mul(
                lt(proj(0), konst(3 * e + 3)),
                not(modulo(proj(0), konst(e % 4 + 1))),
            );
            semi_decide(pred).code()
        })
        .collect()
}
