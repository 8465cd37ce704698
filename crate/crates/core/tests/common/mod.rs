//! Random generators and brute-force oracles shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use owlspeak_core::ontology::{InformationSnippet, Marker, WorkSpace};
use owlspeak_core::presenter::{DialogueState, UserAction, UserInput};
use owlspeak_core::rdf::{Binding, Term, Triple, TripleSet};
use rand::seq::IndexedRandom;
use rand::Rng;

const TEXT_POOL: &[char] = &[
    'a', 'b', 'z', 'Q', '0', '7', ' ', '"', '\\', '\n', '\r', '\t', '#', '<', '>', '?', '.', 'é', 'ß',
    '中', '😀', '\u{0}', '\u{7f}',
];
const IRI_POOL: &[char] = &['a', 'x', 'Z', '9', ':', '/', '#', '.', '-', '_', '?', '"', '\\', 'ü', '𝄞'];

pub fn random_text(rng: &mut impl Rng, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| *TEXT_POOL.choose(rng).unwrap()).collect()
}

pub fn random_iri(rng: &mut impl Rng) -> String {
    let len = rng.random_range(1..=12);
    (0..len).map(|_| *IRI_POOL.choose(rng).unwrap()).collect()
}

pub fn random_var(rng: &mut impl Rng) -> String {
    const FIRST: &[&str] = &["x", "y", "Level", "a"];
    let mut name: String = FIRST.choose(rng).unwrap().to_string();
    for _ in 0..rng.random_range(0..4) {
        name.push(*['_', '1', 'b', 'Z'].choose(rng).unwrap());
    }
    name
}

fn random_object(rng: &mut impl Rng, allow_vars: bool) -> Term {
    match rng.random_range(0..if allow_vars { 3 } else { 2 }) {
        0 => Term::iri(random_iri(rng)).unwrap(),
        1 => Term::literal(random_text(rng, 16)),
        _ => Term::variable(random_var(rng)).unwrap(),
    }
}

/// Wide-vocabulary set for syntax round-trips; objects may be variables.
pub fn random_triple_set(rng: &mut impl Rng, max_len: usize, allow_vars: bool) -> TripleSet {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            Triple::new(
                Term::iri(random_iri(rng)).unwrap(),
                Term::iri(random_iri(rng)).unwrap(),
                random_object(rng, allow_vars),
            )
            .unwrap()
        })
        .collect()
}

fn small_subject(rng: &mut impl Rng) -> Term {
    Term::iri(format!("u:s{}", rng.random_range(0..3))).unwrap()
}

fn small_predicate(rng: &mut impl Rng) -> Term {
    Term::iri(format!("u:p{}", rng.random_range(0..3))).unwrap()
}

fn small_object(rng: &mut impl Rng) -> Term {
    if rng.random_bool(0.3) {
        small_subject(rng)
    } else {
        Term::literal(rng.random_range(0..4).to_string())
    }
}

/// Ground data of at most `max_len` triples over a tiny vocabulary.
pub fn small_data(rng: &mut impl Rng, max_len: usize) -> TripleSet {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| Triple::new(small_subject(rng), small_predicate(rng), small_object(rng)).unwrap())
        .collect()
}

/// A pattern of one to three triples using at most three distinct variables.
/// Half the time it is carved out of `data` so matches are common.
pub fn small_pattern(rng: &mut impl Rng, data: &TripleSet) -> TripleSet {
    const VARS: [&str; 3] = ["x", "y", "z"];
    let len = rng.random_range(1..=3);
    let source: Vec<&Triple> = data.iter().collect();
    let mut pattern = TripleSet::new();
    for _ in 0..len {
        let (s, p) = match source.choose(rng) {
            Some(t) if rng.random_bool(0.5) => (t.subject().clone(), t.predicate().clone()),
            _ => (small_subject(rng), small_predicate(rng)),
        };
        let o = if rng.random_bool(0.7) {
            Term::variable(*VARS.choose(rng).unwrap()).unwrap()
        } else {
            small_object(rng)
        };
        pattern.insert(Triple::new(s, p, o).unwrap());
    }
    pattern
}

/// Every binding of the pattern's variables to data terms under which the
/// instantiated pattern is a subset of the data.
pub fn brute_force_matches(pattern: &TripleSet, data: &TripleSet) -> BTreeSet<Binding> {
    let vars: Vec<String> = pattern.variables().into_iter().collect();
    let mut universe = BTreeSet::new();
    for t in data.iter() {
        universe.insert(t.subject().clone());
        universe.insert(t.predicate().clone());
        universe.insert(t.object().clone());
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let mut found = BTreeSet::new();
    if vars.is_empty() {
        if pattern.is_subset(data) {
            found.insert(Binding::new());
        }
        return found;
    }
    if universe.is_empty() {
        return found;
    }
    let mut index = vec![0usize; vars.len()];
    loop {
        let binding: Binding = vars
            .iter()
            .zip(&index)
            .map(|(v, &i)| (v.clone(), universe[i].clone()))
            .collect();
        if pattern.substitute(&binding).is_subset(data) {
            found.insert(binding);
        }
        let mut k = 0;
        loop {
            if k == index.len() {
                return found;
            }
            index[k] += 1;
            if index[k] < universe.len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

/// A snippet over a tiny vocabulary, so repeats are frequent.
pub fn random_snippet(rng: &mut impl Rng, id: usize) -> InformationSnippet {
    let marker = if rng.random_bool(0.5) {
        Marker::Informable
    } else {
        Marker::Requestable
    };
    let mut semantics = TripleSet::new();
    for _ in 0..rng.random_range(1..=2) {
        let object = match marker {
            Marker::Informable => small_object(rng),
            Marker::Requestable => Term::variable("x").unwrap(),
        };
        semantics.insert(Triple::new(small_subject(rng), small_predicate(rng), object).unwrap());
    }
    InformationSnippet::new(format!("k{id}"), marker, semantics).unwrap()
}

/// Random well-formed input, or `None` for a silent turn. `bye` only when allowed.
pub fn random_input(rng: &mut impl Rng, allow_bye: bool) -> Option<UserInput> {
    let choices: &[Option<UserAction>] = &[
        None,
        Some(UserAction::Greet),
        Some(UserAction::Acknowledge),
        Some(UserAction::Thank),
        Some(UserAction::Inform),
        Some(UserAction::Request),
        Some(UserAction::Bye),
    ];
    let limit = if allow_bye { choices.len() } else { choices.len() - 1 };
    let action = choices[rng.random_range(0..limit)]?;
    let semantics = match action {
        UserAction::Inform => [Triple::new(small_subject(rng), small_predicate(rng), small_object(rng)).unwrap()]
            .into_iter()
            .collect(),
        UserAction::Request => [Triple::new(
            small_subject(rng),
            small_predicate(rng),
            Term::variable("x").unwrap(),
        )
        .unwrap()]
        .into_iter()
        .collect(),
        _ => TripleSet::new(),
    };
    Some(UserInput::new(action, semantics).unwrap())
}

/// Runs `turns` random turns: each turn may release a few snippets, then
/// the user says something (or nothing). Stops early if the session closes.
pub fn random_session(rng: &mut impl Rng, turns: usize, allow_bye: bool) -> DialogueState {
    let mut state = DialogueState::new("s1", WorkSpace::new());
    let mut next_snippet = 0;
    for _ in 0..turns {
        for _ in 0..rng.random_range(0..3) {
            let snippet = random_snippet(rng, next_snippet);
            next_snippet += 1;
            let turn = state.turn();
            state.workspace_mut().create_agenda_from_snippet(&snippet, turn).unwrap();
        }
        let input = random_input(rng, allow_bye);
        state.run_turn(input).unwrap();
        if state.history().last().unwrap().closed {
            break;
        }
    }
    state
}
