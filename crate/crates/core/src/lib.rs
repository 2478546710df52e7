//! Multi-agent actor-critic training (IAC, MAAC, IPPO, MAPPO) for autonomous
//! cyber defense on a simulated segmented network.
//!
//! - [`env_sim`]: seeded network simulator with scripted red and green agents.
//! - [`tensor_nn`]: dense networks, reverse-mode gradients, Adam.
//! - [`marl`]: rollout collection, advantage estimation and the four trainers.
//! - [`harness`]: multi-run experiments, CSV metrics and SVG curves.

pub mod env_sim;
pub mod harness;
pub mod kv;
pub mod marl;
pub mod tensor_nn;
