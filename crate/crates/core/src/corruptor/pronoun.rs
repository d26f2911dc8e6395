//! Closed-class English pronoun lexicon.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{EntityLabel, EntitySpan};

/// Syntactic case class of a pronoun.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PronounCase {
    Subject,
    Object,
    PossessiveDeterminer,
    PossessivePronoun,
    Reflexive,
}

impl PronounCase {
    /// Priority order: an ambiguous form belongs to the first class listing it.
    pub const ALL: [PronounCase; 5] = [
        PronounCase::Subject,
        PronounCase::Object,
        PronounCase::PossessiveDeterminer,
        PronounCase::PossessivePronoun,
        PronounCase::Reflexive,
    ];

    /// The full lexicon row for this class, lower-case except "I".
    pub fn forms(self) -> &'static [&'static str] {
        match self {
            PronounCase::Subject => &["I", "you", "he", "she", "it", "we", "they"],
            PronounCase::Object => &["me", "you", "him", "her", "it", "us", "them"],
            PronounCase::PossessiveDeterminer => &["my", "your", "his", "her", "its", "our", "their"],
            PronounCase::PossessivePronoun => &["mine", "yours", "his", "hers", "its", "ours", "theirs"],
            PronounCase::Reflexive => &[
                "myself",
                "yourself",
                "himself",
                "herself",
                "itself",
                "ourselves",
                "yourselves",
                "themselves",
            ],
        }
    }

    /// Forms whose assigned class is this one. Replacements are drawn from
    /// here, so a swapped pronoun is detected in the same class again.
    pub fn pool(self) -> impl Iterator<Item = (usize, &'static str)> {
        self.forms()
            .iter()
            .copied()
            .enumerate()
            .filter(move |(_, f)| case_of(f) == Some(self))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PronounCase::Subject => "subject",
            PronounCase::Object => "object",
            PronounCase::PossessiveDeterminer => "possessive_determiner",
            PronounCase::PossessivePronoun => "possessive_pronoun",
            PronounCase::Reflexive => "reflexive",
        }
    }
}

impl fmt::Display for PronounCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Assigned case class of a word (case-insensitive), if it is a pronoun.
pub fn case_of(word: &str) -> Option<PronounCase> {
    let lower = word.to_lowercase();
    PronounCase::ALL
        .into_iter()
        .find(|c| c.forms().iter().any(|f| f.eq_ignore_ascii_case(&lower)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounSpan {
    pub span: EntitySpan,
    pub case: PronounCase,
}

/// Alphanumeric runs as `(char_start, char_end, byte_start, byte_end)`.
pub(crate) fn word_runs(text: &str) -> Vec<(usize, usize, usize, usize)> {
    let mut runs = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut ci = 0;
    for (bi, ch) in text.char_indices() {
        if ch.is_alphanumeric() {
            current.get_or_insert((ci, bi));
        } else if let Some((cs, bs)) = current.take() {
            runs.push((cs, ci, bs, bi));
        }
        ci += 1;
    }
    if let Some((cs, bs)) = current {
        runs.push((cs, ci, bs, text.len()));
    }
    runs
}

/// Token-bounded, case-insensitive lexicon matches.
///
/// All-caps tokens longer than one letter ("US", "IT") are treated as
/// acronyms, not pronouns.
pub fn detect_pronouns(text: &str) -> Vec<PronounSpan> {
    word_runs(text)
        .into_iter()
        .filter_map(|(cs, ce, bs, be)| {
            let word = &text[bs..be];
            if ce - cs > 1 && word.chars().all(|c| c.is_uppercase()) {
                return None;
            }
            let case = case_of(word)?;
            Some(PronounSpan {
                span: EntitySpan {
                    start: cs,
                    end: ce,
                    surface: word.to_owned(),
                    label: EntityLabel::Pronoun,
                },
                case,
            })
        })
        .collect()
}

/// True when the char at `start` begins a sentence.
pub(crate) fn sentence_initial(text: &str, start: usize) -> bool {
    let before: Vec<char> = text.chars().take(start).collect();
    let mut i = before.len();
    let mut saw_space = false;
    while i > 0 && before[i - 1].is_whitespace() {
        saw_space = true;
        i -= 1;
    }
    while i > 0 && matches!(before[i - 1], '"' | '\'' | ')' | '\u{201d}' | '\u{2019}') {
        i -= 1;
    }
    i == 0 || (saw_space && matches!(before[i - 1], '.' | '!' | '?'))
}

/// Casts `replacement` into the capitalization of the original pronoun.
///
/// The first character copies the original's case. "I" is always upper
/// case, and when "I" is the original, the case comes from whether the
/// position starts a sentence.
pub fn match_case(original: &str, replacement: &str, text: &str, start: usize) -> String {
    if replacement == "I" {
        return "I".to_owned();
    }
    let upper = if original == "I" {
        sentence_initial(text, start)
    } else {
        original.chars().next().is_some_and(char::is_uppercase)
    };
    let mut chars = replacement.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Replacement options for a pronoun: `(lexicon index, cased surface)`.
pub fn replacements(p: &PronounSpan, text: &str) -> Vec<(usize, String)> {
    p.case
        .pool()
        .filter(|(_, f)| !f.eq_ignore_ascii_case(&p.span.surface))
        .map(|(i, f)| (i, match_case(&p.span.surface, f, text, p.span.start)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<(String, PronounCase)> {
        detect_pronouns(text)
            .into_iter()
            .map(|p| (p.span.surface, p.case))
            .collect()
    }

    #[test]
    fn he_said_he_left() {
        let found = detect_pronouns("He said he left.");
        assert_eq!(found.len(), 2);
        assert_eq!((found[0].span.start, found[0].span.end), (0, 2));
        assert_eq!((found[1].span.start, found[1].span.end), (8, 10));
        assert!(found.iter().all(|p| p.case == PronounCase::Subject));
    }

    #[test]
    fn inner_substrings_do_not_match() {
        assert!(detect_pronouns("The hero's theme").is_empty());
    }

    #[test]
    fn ambiguous_forms_take_priority_class() {
        // "her" is listed as object and possessive determiner; object wins.
        assert_eq!(
            surfaces("She gave him her book."),
            vec![
                ("She".to_owned(), PronounCase::Subject),
                ("him".to_owned(), PronounCase::Object),
                ("her".to_owned(), PronounCase::Object),
            ]
        );
        assert_eq!(case_of("you"), Some(PronounCase::Subject));
        assert_eq!(case_of("it"), Some(PronounCase::Subject));
        assert_eq!(case_of("his"), Some(PronounCase::PossessiveDeterminer));
        assert_eq!(case_of("its"), Some(PronounCase::PossessiveDeterminer));
        assert_eq!(case_of("hers"), Some(PronounCase::PossessivePronoun));
        assert_eq!(case_of("Themselves"), Some(PronounCase::Reflexive));
    }

    #[test]
    fn acronyms_are_not_pronouns() {
        assert!(detect_pronouns("The US and IT sector").is_empty());
        assert_eq!(detect_pronouns("I left.").len(), 1);
    }

    #[test]
    fn pools_are_class_consistent() {
        for case in PronounCase::ALL {
            let pool: Vec<_> = case.pool().collect();
            assert!(pool.len() >= 4, "{case}: {pool:?}");
            for (_, form) in pool {
                assert_eq!(case_of(form), Some(case));
            }
        }
        let object: Vec<_> = PronounCase::Object.pool().map(|(_, f)| f).collect();
        assert_eq!(object, ["me", "him", "her", "us", "them"]);
    }

    #[test]
    fn it_works_candidates() {
        let text = "It works.";
        let p = &detect_pronouns(text)[0];
        let opts: Vec<String> = replacements(p, text).into_iter().map(|(_, s)| s).collect();
        assert_eq!(opts, ["I", "You", "He", "She", "We", "They"]);
    }

    #[test]
    fn case_matching() {
        assert_eq!(match_case("he", "they", "so he", 3), "they");
        assert_eq!(match_case("He", "she", "He", 0), "She");
        assert_eq!(match_case("he", "I", "so he", 3), "I");
        assert_eq!(match_case("I", "we", "Then I ran", 5), "we");
        assert_eq!(match_case("I", "we", "Done. I ran", 6), "We");
    }
}
