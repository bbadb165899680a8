use clap::Args;
use prs_core::instance::{check_atomic, check_axiom1, check_axiom3, check_extremal, DEFAULT_ENUMERATION_CAP};

use super::Global;
use crate::error::CliError;
use crate::input::Target;
use crate::output::Report;

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub target: Target,
}

pub fn run(args: &CheckArgs, _global: &Global, out: &mut Report) -> Result<(), CliError> {
    let loaded = args.target.load()?;
    for note in &loaded.notes {
        eprintln!("note: {note}");
    }
    let instance = if loaded.encoded.instance.is_explicit() {
        loaded.encoded.instance.clone()
    } else {
        loaded.encoded.instance.materialize()?
    };
    instance.validate_dependency()?;
    let cap = DEFAULT_ENUMERATION_CAP;
    let extremal = check_extremal(&instance, cap)?;
    let axiom1 = check_axiom1(&instance, cap)?;
    let axiom3 = check_axiom3(&instance, cap)?;
    let atomic = check_atomic(&instance, cap)?;

    let summary = if extremal.extremal {
        "extremal: yes".to_string()
    } else {
        let failing: Vec<&str> = [(!axiom1.extremal, "1"), (!axiom3.holds, "3")]
            .into_iter()
            .filter_map(|(fails, n)| fails.then_some(n))
            .collect();
        match failing.as_slice() {
            [] => "extremal: no; axioms 1,3 verified on dependency relation".to_string(),
            [one] => format!("extremal: no; axiom {one} fails on dependency relation"),
            _ => "extremal: no; axioms 1,3 fail on dependency relation".to_string(),
        }
    };
    out.line(&summary);
    out.kv("encoding", loaded.encoded.name)?;
    out.kv("variables", instance.num_variables())?;
    out.kv("clauses", atomic.len())?;
    out.kv(
        "dependency relation",
        if instance.dependency().is_custom() { "custom" } else { "shared variables" },
    )?;
    out.kv("extremal", yes_no(extremal.extremal))?;
    if let Some(w) = extremal.violations.first() {
        out.kv("first jointly false pair", format!("{} and {}", w.first, w.second))?;
    }
    out.kv("axiom 1", yes_no(axiom1.extremal))?;
    if let Some(w) = axiom1.violations.first() {
        out.kv("axiom 1 witness", format!("{} and {}", w.first, w.second))?;
    }
    out.kv("axiom 3", yes_no(axiom3.holds))?;
    if let Some(w) = axiom3.violations.first() {
        out.kv("axiom 3 witness", format!("{} then {}", w.first, w.second))?;
    }
    out.kv(
        "atomic clauses",
        format!("{} of {}", atomic.iter().filter(|&&a| a).count(), atomic.len()),
    )?;
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
