mod common;

use factfix::corpus::{validate_record, CorruptionClass};
use factfix::corrector::correct_record;

#[test]
fn synthetic_records_are_valid_and_swappable() {
    for r in common::synthetic_corpus(500, 11) {
        assert!(validate_record(&r).is_valid(), "{}", r.id());
        let swappable = [CorruptionClass::Entity, CorruptionClass::Number, CorruptionClass::Date]
            .into_iter()
            .any(|c| factfix::corruptor::is_applicable(&r, c));
        assert!(swappable, "{}", r.id());
    }
}

#[test]
fn synthetic_generation_is_deterministic() {
    assert_eq!(common::synthetic_corpus(50, 3), common::synthetic_corpus(50, 3));
    assert_ne!(common::synthetic_corpus(5, 3), common::synthetic_corpus(5, 4));
}

#[test]
fn clean_synthetic_summaries_are_left_alone() {
    for r in common::synthetic_corpus(300, 5) {
        let v = correct_record(&r).unwrap();
        assert!(!v.changed, "{}: {:?}", r.id(), v.edits);
    }
}
