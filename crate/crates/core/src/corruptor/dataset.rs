use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{corrupt_record, CorruptionClass, CorruptorConfig, Triplet};
use crate::corpus::CorpusRecord;
use crate::error::Result;

/// Counts over a generated dataset. Merging is commutative and associative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub total: u64,
    pub corrupted: u64,
    pub clean: u64,
    pub per_class: BTreeMap<CorruptionClass, u64>,
    /// Records where corruption was drawn but no rule applied.
    pub inapplicable: u64,
    /// Records emitted clean because of a processing diagnostic.
    pub errors: u64,
}

impl Default for DatasetStats {
    fn default() -> Self {
        DatasetStats {
            total: 0,
            corrupted: 0,
            clean: 0,
            per_class: CorruptionClass::ALL.into_iter().map(|c| (c, 0)).collect(),
            inapplicable: 0,
            errors: 0,
        }
    }
}

impl DatasetStats {
    pub fn add(&mut self, triplet: &Triplet) {
        self.total += 1;
        match triplet.record.class() {
            Some(class) => {
                self.corrupted += 1;
                *self.per_class.entry(class).or_default() += 1;
            }
            None => self.clean += 1,
        }
        if triplet.record.inapplicable {
            self.inapplicable += 1;
        }
        if triplet.record.diagnostic.is_some() {
            self.errors += 1;
        }
    }

    pub fn merge(mut self, other: DatasetStats) -> DatasetStats {
        self.total += other.total;
        self.corrupted += other.corrupted;
        self.clean += other.clean;
        self.inapplicable += other.inapplicable;
        self.errors += other.errors;
        for (class, n) in other.per_class {
            *self.per_class.entry(class).or_default() += n;
        }
        self
    }

    pub fn corruption_rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.corrupted as f64 / self.total as f64
        }
    }

    pub fn class_count(&self, class: CorruptionClass) -> u64 {
        self.per_class.get(&class).copied().unwrap_or(0)
    }
}

/// Validated corruptor settings.
#[derive(Debug, Clone)]
pub struct Corruptor {
    config: CorruptorConfig,
}

impl Corruptor {
    pub fn new(config: CorruptorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Corruptor { config })
    }

    pub fn config(&self) -> &CorruptorConfig {
        &self.config
    }

    pub fn corrupt(&self, record: &CorpusRecord) -> Triplet {
        corrupt_record(record, &self.config)
    }
}

/// Lazily corrupts a stream of records, tallying stats as it goes.
pub struct DatasetStream<I> {
    records: I,
    corruptor: Corruptor,
    stats: DatasetStats,
}

impl<I> DatasetStream<I> {
    /// Stats over the triplets yielded so far.
    pub fn stats(&self) -> &DatasetStats {
        &self.stats
    }
}

impl<I, R> Iterator for DatasetStream<I>
where
    I: Iterator<Item = R>,
    R: std::borrow::Borrow<CorpusRecord>,
{
    type Item = Triplet;

    fn next(&mut self) -> Option<Triplet> {
        let record = self.records.next()?;
        let triplet = self.corruptor.corrupt(record.borrow());
        self.stats.add(&triplet);
        Some(triplet)
    }
}

/// One triplet per record, in input order.
pub fn build_dataset<I>(records: I, config: &CorruptorConfig) -> Result<DatasetStream<I::IntoIter>>
where
    I: IntoIterator,
    I::Item: std::borrow::Borrow<CorpusRecord>,
{
    Ok(DatasetStream {
        records: records.into_iter(),
        corruptor: Corruptor::new(config.clone())?,
        stats: DatasetStats::default(),
    })
}

/// Same output as [`build_dataset`], computed on the rayon pool.
pub fn build_dataset_parallel(
    records: &[CorpusRecord],
    config: &CorruptorConfig,
) -> Result<(Vec<Triplet>, DatasetStats)> {
    let corruptor = Corruptor::new(config.clone())?;
    let triplets: Vec<Triplet> = records.par_iter().map(|r| corruptor.corrupt(r)).collect();
    let stats = triplets
        .par_iter()
        .fold(DatasetStats::default, |mut s, t| {
            s.add(t);
            s
        })
        .reduce(DatasetStats::default, DatasetStats::merge);
    Ok((triplets, stats))
}
