//! Local graph-enrichment protocols and the disconnection game.
//!
//! The crate models a network as an undirected simple [`Graph`], lets
//! participating nodes add edges with one of two local protocols
//! ([`protocols::run_2sff`], [`protocols::run_a3f`]), removes an adversarially
//! chosen node set planned on the *initial* graph, and measures how much of
//! the surviving (honest) population stays in the largest connected
//! component. That fraction is the graph's xi-strength, which
//! [`privacy`] turns into differential-privacy statements.
//!
//! Every stochastic operation takes an explicit seeded stream; see [`rng`].

pub mod adversary;
pub mod components;
pub mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod privacy;
pub mod protocols;
pub mod rng;
pub mod theorem;

pub use adversary::{CorruptionPlan, CorruptionSpec, Strategy};
pub use components::{connected_components, largest_component_fraction, ComponentLabeling};
pub use error::{Error, Result};
pub use game::{play_game, xi_strength, EnrichedGraph, GameConfig, GameOutcome, MetricsOver};
pub use generate::{generate_ba, BaSpec};
pub use graph::{Graph, NodeId, Subgraph};
pub use ingest::{load_snap_edgelist, SnapGraph};
pub use privacy::{dp_guarantee, paalec_params, DpGuarantee, PaalecParams, PrivacyParams};
pub use protocols::{EnrichmentResult, ProtocolConfig, ProtocolKind};
pub use theorem::{build_theorem_instance, TheoremInstance, TheoremInstanceSpec};
