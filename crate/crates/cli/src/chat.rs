use std::io::{self, BufRead, Write};

use owlspeak_core::sim::DomainPreset;

use crate::backend::Backend;
use crate::runner::{Dialogue, RunError};
use crate::script::Step;

#[derive(Debug, thiserror::Error)]
pub enum ChatError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Terminal dialogue. The system speaks first; an empty line is a silent
/// turn and `/workspace` prints the workspace document.
pub fn chat<B: Backend + ?Sized>(
    backend: &B,
    preset: &DomainPreset,
    input: impl BufRead,
    mut out: impl Write,
) -> Result<(), ChatError> {
    let mut dialogue = Dialogue::open(backend, preset)?;
    let first = dialogue.step(&Step::Silent)?;
    writeln!(out, "system> {}", first.system_text)?;
    let mut lines = input.lines();
    while !dialogue.is_closed() {
        write!(out, "you> ")?;
        out.flush()?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            break;
        };
        let line = line?;
        let line = line.trim();
        if line == "/workspace" {
            write!(out, "{}", dialogue.workspace()?)?;
            continue;
        }
        let step = if line.is_empty() {
            Step::Silent
        } else {
            match Step::parse(line) {
                Ok(step) => step,
                Err(e) => {
                    writeln!(out, "error: {e}")?;
                    continue;
                }
            }
        };
        match dialogue.step(&step) {
            Ok(turn) => writeln!(out, "system> {}", turn.system_text)?,
            Err(RunError::Backend(e)) if e.status == 400 => writeln!(out, "error: {}", e.message)?,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
