//! Library side of the `owlspeak` binary: script parsing, the scripted and
//! interactive loops, and the backends they run against.

pub mod backend;
pub mod chat;
pub mod runner;
pub mod script;

pub use backend::{Backend, BackendError, Http, InProcess};
pub use runner::{golden_diff, run_script, Dialogue, RunError, TurnOutput};
pub use script::{Script, ScriptError, Step};
