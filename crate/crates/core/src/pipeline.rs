//! World in, program out: subdivision, backward tree, branch, synthesis.

use crate::dsl::Program;
use crate::reachtree::{build_tree, find_branch, Branch, Limits, ReachTree, TreeStatus};
use crate::synth::{synthesize, SynthError};
use crate::world::{build_subdivision, Gridworld, Subdivision, SubdivisionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Synthesized,
    Unwinnable,
    Truncated,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub sub: Subdivision,
    pub tree: ReachTree,
    pub branch: Option<Branch>,
    pub program: Option<Program>,
    pub outcome: Outcome,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

/// Coordinate width past which the tree stops following a chain.
pub const DEFAULT_MAX_BITS: u64 = 1024;

/// Default limits for `world`, stopping once the initial state is covered.
pub fn default_limits(world: &Gridworld) -> Limits {
    Limits::for_world(world).stopping_at(world.initial.clone()).with_max_bits(DEFAULT_MAX_BITS)
}

pub fn run_pipeline(world: &Gridworld, limits: &Limits) -> Result<PipelineRun, PipelineError> {
    let sub = build_subdivision(world)?;
    let tree = build_tree(world, &sub, limits);
    let branch = find_branch(&tree, world, &sub, &world.initial);
    let (program, outcome) = match &branch {
        Some(b) => (Some(synthesize(b, world, &sub)?), Outcome::Synthesized),
        None if tree.status == TreeStatus::Truncated => (None, Outcome::Truncated),
        None => (None, Outcome::Unwinnable),
    };
    Ok(PipelineRun { sub, tree, branch, program, outcome })
}
