use super::{jump, states, System, SystemError};
use std::collections::HashSet;

/// Embeds `sys` into the surjective ladder system over it; the original
/// dynamics live on rung 1.
pub fn make_surjective(sys: &System, depth: u32) -> Result<System, SystemError> {
    let ladder = System::Ladder { base: Box::new(sys.clone()), depth };
    ladder.validate()?;
    Ok(ladder)
}

/// Whether every enumerated state has a preimage. For a ladder the
/// preimages may sit one rung above the enumerated depth, as in the
/// untruncated system.
pub fn surjectivity_check(sys: &System) -> Result<bool, SystemError> {
    let unsupported = || SystemError::Unsupported(format!("{sys} has no finite state enumeration"));
    let targets = states(sys).ok_or_else(unsupported)?;
    let sources = match sys {
        System::Ladder { base, depth } => {
            states(&System::Ladder { base: base.clone(), depth: depth + 1 }).ok_or_else(unsupported)?
        }
        _ => targets.clone(),
    };
    #[allow(clippy::mutable_key_type)]
    let images: HashSet<_> = sources.iter().map(|p| jump(sys, p, 1)).collect();
    Ok(targets.iter().all(|t| images.contains(t)))
}
