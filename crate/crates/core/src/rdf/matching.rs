use std::collections::HashMap;

use thiserror::Error;

use super::term::{Binding, Term, Triple, TripleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("data to match against contains variables")]
    NonGroundData,
}

/// Finds the lexicographically-first binding under which every pattern triple
/// is a member of `data`.
///
/// An empty binding is returned for a ground pattern that is a subset of the
/// data; `None` means no consistent binding exists.
pub fn match_pattern(pattern: &TripleSet, data: &TripleSet) -> Result<Option<Binding>, MatchError> {
    Ok(match_all(pattern, data)?.into_iter().min())
}

/// Every consistent binding, in no particular order.
pub fn match_all(pattern: &TripleSet, data: &TripleSet) -> Result<Vec<Binding>, MatchError> {
    if !data.is_ground() {
        return Err(MatchError::NonGroundData);
    }
    let mut index: HashMap<(&Term, &Term), Vec<&Term>> = HashMap::new();
    for t in data {
        index.entry((t.subject(), t.predicate())).or_default().push(t.object());
    }
    let goals: Vec<&Triple> = pattern.iter().collect();
    let mut found = Vec::new();
    let mut binding = Binding::new();
    solve(&goals, &index, &mut binding, &mut found);
    Ok(found)
}

fn solve(
    goals: &[&Triple],
    index: &HashMap<(&Term, &Term), Vec<&Term>>,
    binding: &mut Binding,
    found: &mut Vec<Binding>,
) {
    let Some((goal, rest)) = goals.split_first() else {
        found.push(binding.clone());
        return;
    };
    let candidates = index
        .get(&(goal.subject(), goal.predicate()))
        .map(Vec::as_slice)
        .unwrap_or_default();
    match goal.object() {
        Term::Variable(name) => {
            if let Some(bound) = binding.get(name) {
                if candidates.contains(&bound) {
                    solve(rest, index, binding, found);
                }
                return;
            }
            for candidate in candidates {
                binding.insert(name.clone(), (*candidate).clone());
                solve(rest, index, binding, found);
            }
            binding.remove(name);
        }
        object => {
            if candidates.contains(&object) {
                solve(rest, index, binding, found);
            }
        }
    }
}
