//! Agenda-based dialogue management with dynamically created dialogue actions.
//!
//! The crate is split along the model/presenter/view lines of the architecture:
//!
//! * [`rdf`] is the semantic interchange: terms, triples, the line grammar and
//!   triple-pattern matching.
//! * [`ontology`] is the model: information snippets, agendas and the workspace.
//! * [`presenter`] holds the per-turn control loop and the selection policy.
//! * [`wire`] is the view replacement: the JSON documents exchanged with the
//!   external modules and a transport-independent session service.
//! * [`sim`] provides deterministic knowledge-integration and language-analysis
//!   stand-ins driven by domain preset files.

pub mod ontology;
pub mod presenter;
pub mod rdf;
pub mod sim;
pub mod wire;
