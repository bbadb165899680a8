pub mod analyze;
pub mod bench;
pub mod check;
pub mod sample;
pub mod verify;

use prs_core::ChoicePolicy;

use crate::error::CliError;

/// Flags shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Global {
    pub seed: u64,
    pub cap: u64,
}

pub fn parse_policy(text: &str, seed: u64) -> Result<ChoicePolicy, CliError> {
    ChoicePolicy::parse(text, seed).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown policy `{text}`; known policies: lowest, highest, random[:SEED], round-robin, simultaneous, largest, hashed:SEED"
        ))
    })
}
