//! Runtime for LLM-driven context-aware computing on a simulated apartment
//! with a mobile z-arm.
//!
//! A request flows through [`prompt`] (classification and templating),
//! [`gateway`] (the LLM call with session memory), [`plan`] (parsing the
//! timed action plan), [`validate`] (static feasibility) and [`sim`]
//! (execution). [`agent`] wires the steps together.

pub mod agent;
pub mod batch;
pub mod gateway;
pub mod oracle;
pub mod par;
pub mod plan;
pub mod prompt;
pub mod scenario;
pub mod sim;
pub mod validate;
pub mod world;
