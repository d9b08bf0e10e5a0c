//! Parsers for the small textual languages the flags accept.

use anyhow::{anyhow, bail, Context, Result};
use immunity::machine::build::*;
use immunity::machine::library;
use immunity::machine::Program;
use immunity::mathias::Transformer;
use immunity::numberings::Registry;

/// `identity`, `double`, `square`, `succ`, `const:N` or `linear:A:B` (`A·k + B`).
pub fn function(name: &str) -> Result<Program> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |k: usize| -> Result<u64> {
        parts
            .get(k)
            .ok_or_else(|| anyhow!("{name}: missing argument"))?
            .parse()
            .with_context(|| format!("{name}: bad number"))
    };
    Ok(match parts[0] {
        "identity" => proj(0),
        "double" => mul(konst(2u32), proj(0)),
        "square" => mul(proj(0), proj(0)),
        "succ" => succ(proj(0)),
        "const" => konst(num(1)?),
        "linear" => add(mul(konst(num(1)?), proj(0)), konst(num(2)?)),
        _ => bail!("unknown function {name:?}"),
    })
}

/// Comma-separated steps: `size:N`, `grow:K`, `thin:ID:COUNT`, `avoid:N`,
/// `deh:BUDGET` (oracle-ones program, `h ≡ 0`) and `inject:X`.
/// `full` expands to one thinning per pool entry followed by avoidance.
pub fn schedule(text: &str, pool: &Registry) -> Result<Vec<Transformer>> {
    if text == "full" {
        return Ok(immunity::mathias::full_schedule(pool, 16, 8));
    }
    let mut out = Vec::new();
    for step in text.split(',').filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = step.split(':').collect();
        let num = |k: usize| -> Result<u64> {
            parts
                .get(k)
                .ok_or_else(|| anyhow!("{step}: missing argument"))?
                .parse()
                .with_context(|| format!("{step}: bad number"))
        };
        out.push(match parts[0] {
            "size" => Transformer::Size(num(1)? as usize),
            "grow" => Transformer::Grow(num(1)? as usize),
            "thin" => {
                let id = num(1)? as usize;
                let d = pool
                    .get(id)
                    .ok_or_else(|| anyhow!("{step}: no numbering {id}"))?;
                Transformer::Thin {
                    id,
                    rule: d.rule.clone(),
                    count: num(2)?,
                }
            }
            "avoid" => Transformer::Avoid(num(1)?),
            "deh" => Transformer::Deh {
                e: library::enumerate_oracle_ones().code(),
                h: konst(0u32),
                budget: num(1)?,
                verify_budget: 1_000_000,
            },
            "inject" => Transformer::InjectStem(immunity::FiniteSet::new([num(1)?])),
            _ => bail!("unknown schedule step {step:?}"),
        });
    }
    Ok(out)
}
