//! Summary-to-source sentence alignment by content-word overlap.
//!
//! Content words are lower-cased alphanumeric tokens, minus stop words,
//! minus any token overlapping an entity span. The score of a source
//! sentence is `|shared multiset| / |summary sentence multiset|`; the best
//! score wins and ties go to the earliest sentence.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::sentences::{split_sentences, SentenceSpan};
use crate::corpus::{AnnotatedDocument, AnnotatedSummary, Annotated, EntitySpan};
use crate::corruptor::pronoun::word_runs;
use crate::scalar::Scalar;

const STOP_WORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "could", "did", "do", "does", "doing", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
    "may", "me", "might", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off",
    "on", "once", "only", "or", "other", "our", "ours", "out", "over", "own", "s", "said", "same",
    "says", "she", "should", "so", "some", "such", "t", "than", "that", "the", "their", "theirs",
    "them", "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
    "until", "up", "us", "very", "was", "we", "were", "what", "when", "where", "which", "while",
    "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
];

pub(crate) fn is_stop_word(w: &str) -> bool {
    STOP_WORDS.binary_search(&w).is_ok()
}

type Bag = HashMap<String, u32>;

fn content_words(text: &str, sentence: SentenceSpan, entities: &[EntitySpan]) -> Bag {
    let mut bag = Bag::new();
    for (cs, ce, bs, be) in word_runs(text) {
        if cs < sentence.start || ce > sentence.end {
            continue;
        }
        if entities.iter().any(|e| e.start < ce && cs < e.end) {
            continue;
        }
        let word = text[bs..be].to_lowercase();
        if !is_stop_word(&word) {
            *bag.entry(word).or_default() += 1;
        }
    }
    bag
}

fn bag_size(bag: &Bag) -> u32 {
    bag.values().sum()
}

fn shared(a: &Bag, b: &Bag) -> u32 {
    a.iter()
        .map(|(w, n)| (*n).min(b.get(w).copied().unwrap_or(0)))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceAlignment {
    pub summary_sentence_index: usize,
    pub source_sentence_index: usize,
    /// Content words of the summary sentence also found in the source sentence.
    pub shared: u32,
    /// Content words of the summary sentence.
    pub total: u32,
}

impl SentenceAlignment {
    /// Overlap score in `[0, 1]`; zero when the summary sentence has no content words.
    pub fn score<T: Scalar>(&self) -> T {
        T::ratio(self.shared.into(), self.total.into())
    }
}

/// Source document split into sentences with precomputed content words.
#[derive(Debug, Clone)]
pub struct DocumentIndex<'d> {
    pub document: &'d AnnotatedDocument,
    pub sentences: Vec<SentenceSpan>,
    bags: Vec<Bag>,
}

impl<'d> DocumentIndex<'d> {
    pub fn new(document: &'d AnnotatedDocument) -> Self {
        let sentences = split_sentences(&document.text);
        let bags = sentences
            .iter()
            .map(|s| content_words(&document.text, *s, &document.entities))
            .collect();
        DocumentIndex {
            document,
            sentences,
            bags,
        }
    }

    /// Entities lying entirely inside source sentence `index`.
    pub fn sentence_entities(&self, index: usize) -> impl Iterator<Item = &'d EntitySpan> + '_ {
        let s = self.sentences[index];
        self.document
            .entities()
            .iter()
            .filter(move |e| s.covers(e.start, e.end))
    }

    /// Best source sentence for one summary sentence; `None` for an empty document.
    pub fn align(
        &self,
        summary: &AnnotatedSummary,
        summary_sentence: SentenceSpan,
        summary_sentence_index: usize,
    ) -> Option<SentenceAlignment> {
        let bag = content_words(&summary.text, summary_sentence, &summary.entities);
        let total = bag_size(&bag);
        let mut best: Option<SentenceAlignment> = None;
        for (i, doc_bag) in self.bags.iter().enumerate() {
            let s = shared(&bag, doc_bag);
            if best.is_none_or(|b| s > b.shared) {
                best = Some(SentenceAlignment {
                    summary_sentence_index,
                    source_sentence_index: i,
                    shared: s,
                    total,
                });
            }
        }
        best
    }
}

/// Aligns one summary sentence against a whole document.
pub fn align(
    summary: &AnnotatedSummary,
    summary_sentence: SentenceSpan,
    document: &AnnotatedDocument,
) -> Option<SentenceAlignment> {
    DocumentIndex::new(document).align(summary, summary_sentence, 0)
}
