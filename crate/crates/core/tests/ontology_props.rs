mod common;

use owlspeak_core::ontology::{
    load_snapshot, save_snapshot, AgendaKind, DialogueActionType, Marker, WorkSpace, ACK_ID, GREET_ID, THANK_ID,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marker_fidelity_and_dedup(seed in any::<u64>(), len in 0usize..=200) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut ws = WorkSpace::new();
        for i in 0..len {
            let snippet = common::random_snippet(&mut rng, i);
            let before = ws.len();
            let seen = ws.agendas().iter().any(|a| {
                a.kind() == AgendaKind::Dynamic
                    && a.action() == Some(snippet.marker().action())
                    && a.semantics() == snippet.semantics()
            });
            let id = ws.create_agenda_from_snippet(&snippet, i as u64).unwrap();
            let agenda = ws.get(&id).unwrap();
            let expected = match snippet.marker() {
                Marker::Informable => DialogueActionType::Inform,
                Marker::Requestable => DialogueActionType::Request,
            };
            prop_assert_eq!(agenda.action(), Some(expected));
            prop_assert_eq!(agenda.semantics(), snippet.semantics());
            prop_assert_eq!(ws.len(), if seen { before } else { before + 1 });
            for general in [GREET_ID, ACK_ID, THANK_ID] {
                prop_assert!(ws.contains(general));
            }
            // occasional removals keep the stream interesting
            if rng.random_bool(0.1) {
                let dynamic: Vec<String> = ws
                    .agendas()
                    .iter()
                    .filter(|a| a.kind() == AgendaKind::Dynamic)
                    .map(|a| a.agenda_id().to_string())
                    .collect();
                if let Some(victim) = dynamic.first() {
                    ws.remove_agenda(victim).unwrap();
                }
            }
        }
    }

    #[test]
    fn generals_cannot_be_removed(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut ws = WorkSpace::new();
        for i in 0..rng.random_range(0..20) {
            ws.create_agenda_from_snippet(&common::random_snippet(&mut rng, i), 0).unwrap();
        }
        for general in [GREET_ID, ACK_ID, THANK_ID] {
            prop_assert!(ws.remove_agenda(general).is_err());
            prop_assert!(ws.contains(general));
        }
    }

    #[test]
    fn snapshot_round_trips(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut ws = WorkSpace::new();
        for i in 0..rng.random_range(0..30) {
            ws.create_agenda_from_snippet(&common::random_snippet(&mut rng, i), i as u64).unwrap();
        }
        let text = save_snapshot(&ws);
        let back = load_snapshot(&text).unwrap();
        prop_assert_eq!(save_snapshot(&back), text);
        prop_assert_eq!(back.next_serial(), ws.next_serial());
    }

    #[test]
    fn staleness_counts_turns_since_insertion(inserted in 0u64..1000, later in 0u64..1000) {
        let mut ws = WorkSpace::new();
        let mut rng = StdRng::seed_from_u64(inserted);
        let id = ws.create_agenda_from_snippet(&common::random_snippet(&mut rng, 0), inserted).unwrap();
        let agenda = ws.get(&id).unwrap();
        prop_assert_eq!(agenda.staleness(inserted + later).unwrap(), later);
        if inserted > 0 {
            prop_assert!(agenda.staleness(inserted - 1).is_err());
        }
    }
}
