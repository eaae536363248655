//! Policy synthesis for polygonal gridworlds.

pub mod bench;
pub mod dsl;
pub mod geometry;
pub mod par;
pub mod pipeline;
pub mod rat;
pub mod reachtree;
pub mod runtime;
pub mod svg;
pub mod synth;
pub mod world;
