//! Finite command-response interfaces and their calculus.
//!
//! A structure assigns to every state a family of commands, to every
//! command a family of responses, and to every response a next state. Two
//! agents meet across such an interface: the issuing side picks commands,
//! the serving side picks responses. On top of this the crate provides:
//!
//! - subsets, relations and transition structures over finite state
//!   spaces, with their algebra ([`space`], [`relation`], [`transition`]);
//! - the structure algebra itself: one-step transformers, dual, updates,
//!   unions/intersections, sequential composition, tensor and angelic
//!   products, factorization, localization ([`istruct`]);
//! - least/greatest fixpoint engines for the cover and interior operators
//!   with full derivation bookkeeping ([`fixpoint`]);
//! - client/server program synthesis, verification and execution,
//!   including execution across a simulation certificate ([`programs`]);
//! - linear/affine/tc/general simulation checking with certificates,
//!   greatest simulations, saturation and comparison ([`simulation`]);
//! - the induced point-free topology: self-simulations, localization,
//!   convergence, formal points and continuity ([`topology`]).

pub mod error;
pub mod fixpoint;
pub mod fixtures;
pub mod gen;
pub mod istruct;
pub mod programs;
pub mod relation;
pub mod simulation;
pub mod space;
pub mod topology;
pub mod transition;

pub use error::{Error, Result};
pub use fixpoint::{cover, interior, CoverResult, InteriorResult};
pub use istruct::{Agent, Command, InteractionStructure, Response, DEFAULT_SIZE_CAP};
pub use programs::{ClientProgram, ClientTree, ServerProgram, Trace, TraceStep};
pub use relation::Relation;
pub use simulation::{GeneralSimCert, LinearSimCert, SimCert, SimKind};
pub use space::{Space, StateSpace, Subset};
pub use topology::SelfSimulation;
pub use transition::TransitionStructure;
