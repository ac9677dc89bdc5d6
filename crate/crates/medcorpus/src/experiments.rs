//! Cross-validation splits, score aggregation, corpus statistics, and
//! per-task hyperparameter configuration.
//!
//! Fold assignment must reproduce bit-for-bit across platforms and
//! implementations, so the shuffle uses a fully specified generator
//! (SplitMix64) and procedure instead of a library RNG; see
//! [`seeded_shuffle`] for the exact recipe.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Segment};
use crate::error::{Error, Result};
use crate::tokenizer::{count_tokens, TokenizerKind};

/// SplitMix64 (Steele, Lea & Flood's splittable generator), chosen because
/// the full state transition fits in three lines and ports trivially:
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// output = z ^ (z >> 31)
/// ```
///
/// All arithmetic is wrapping 64-bit.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in [0, bound) via modulo. The bias is irrelevant at
    /// corpus sizes and keeps the recipe one line in any language.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Reproducible in-place shuffle: descending Fisher-Yates where the swap
/// index for position `i` is `SplitMix64(seed).below(i + 1)`, drawing one
/// value per position from `len - 1` down to `1`.
pub fn seeded_shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// A deterministic k-fold partition of document ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    /// doc id -> fold index in [0, k)
    pub assignment: BTreeMap<String, usize>,
}

impl FoldAssignment {
    /// Ids of one fold, sorted.
    pub fn fold_ids(&self, fold: usize) -> Vec<&str> {
        self.assignment
            .iter()
            .filter(|(_, f)| **f == fold)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for fold in self.assignment.values() {
            sizes[*fold] += 1;
        }
        sizes
    }
}

/// Deal ids into k folds: sort, shuffle with [`seeded_shuffle`], then assign
/// the i-th shuffled id to fold `i % k`. Fold sizes differ by at most one.
pub fn make_folds(ids: &[String], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || k > ids.len() {
        return Err(Error::FoldCount { k, n: ids.len() });
    }
    let mut sorted: Vec<&String> = ids.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateFoldId {
                id: pair[0].clone(),
            });
        }
    }
    seeded_shuffle(&mut sorted, seed);
    let assignment = sorted
        .into_iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i % k))
        .collect();
    Ok(FoldAssignment { k, seed, assignment })
}

/// Mean and sample standard deviation over fold scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateScore {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 when n = 1.
    pub std: f64,
    pub n: usize,
}

impl std::fmt::Display for AggregateScore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.3} ± {:.3}", self.mean, self.std)
    }
}

pub fn aggregate(scores: &[f64]) -> Result<AggregateScore> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    let n = scores.len();
    let mean = scores.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        let ss: f64 = scores.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Ok(AggregateScore { mean, std, n })
}

/// A record of either pipeline stage, as found in intermediate shards.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CorpusRecord {
    Segment(Segment),
    Document(Document),
}

/// One row of the corpus statistics table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub dataset: String,
    pub tokens: u64,
    pub documents: u64,
}

/// Per-source totals plus a Total row, rendering like the dataset
/// composition tables (Dataset / Tokens / Documents).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

impl StatsTable {
    pub fn markdown(&self) -> String {
        let mut out = String::from("| Dataset | Tokens | Documents |\n|---|---|---|\n");
        for row in &self.rows {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                row.dataset,
                human_magnitude(row.tokens),
                human_magnitude(row.documents)
            ));
        }
        out.push_str(&format!(
            "| Total | {} | {} |\n",
            human_magnitude(self.total.tokens),
            human_magnitude(self.total.documents)
        ));
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("dataset,tokens,documents\n");
        for row in self.rows.iter().chain(std::iter::once(&self.total)) {
            out.push_str(&format!("{},{},{}\n", row.dataset, row.tokens, row.documents));
        }
        out
    }
}

/// Render a count the way the dataset tables do: "16K", "5M", "1,700M".
pub fn human_magnitude(n: u64) -> String {
    if n < 1_000 {
        n.to_string()
    } else if n < 1_000_000 {
        format!("{}K", (n + 500) / 1_000)
    } else {
        format!("{}M", thousands((n + 500_000) / 1_000_000))
    }
}

fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Fold per-source document/segment streams into a statistics table.
///
/// Documents are tokenized with the given tokenizer; segments reuse their
/// stored token count and each segment counts as one translation document.
/// `declared_sources` pre-seeds rows so an empty source still appears as a
/// (0, 0) row.
pub fn corpus_stats<I>(
    records: I,
    declared_sources: &[String],
    tokenizer: &TokenizerKind,
) -> StatsTable
where
    I: IntoIterator<Item = CorpusRecord>,
{
    let mut per_source: BTreeMap<String, (u64, u64)> = declared_sources
        .iter()
        .map(|s| (s.clone(), (0, 0)))
        .collect();
    for record in records {
        let (source, tokens) = match &record {
            CorpusRecord::Document(doc) => {
                (doc.source.clone(), count_tokens(&doc.text, tokenizer) as u64)
            }
            CorpusRecord::Segment(seg) => (seg.source.clone(), seg.token_count as u64),
        };
        let entry = per_source.entry(source).or_insert((0, 0));
        entry.0 += tokens;
        entry.1 += 1;
    }
    let rows: Vec<StatsRow> = per_source
        .into_iter()
        .map(|(dataset, (tokens, documents))| StatsRow {
            dataset,
            tokens,
            documents,
        })
        .collect();
    let total = StatsRow {
        dataset: "Total".into(),
        tokens: rows.iter().map(|r| r.tokens).sum(),
        documents: rows.iter().map(|r| r.documents).sum(),
    };
    StatsTable { rows, total }
}

/// Downstream benchmark tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    Bronco,
    Ggponc2,
    Grascco,
    Clef,
    RadQa,
}

pub const VALID_TASKS: [&str; 5] = ["BRONCO", "GGPONC2", "GraSCCo", "CLEF", "RadQA"];

impl Task {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "BRONCO" => Ok(Task::Bronco),
            "GGPONC2" => Ok(Task::Ggponc2),
            "GraSCCo" => Ok(Task::Grascco),
            "CLEF" => Ok(Task::Clef),
            "RadQA" => Ok(Task::RadQa),
            other => Err(Error::UnknownTask {
                given: other.to_string(),
                valid: VALID_TASKS.join(", "),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Bronco => "BRONCO",
            Task::Ggponc2 => "GGPONC2",
            Task::Grascco => "GraSCCo",
            Task::Clef => "CLEF",
            Task::RadQa => "RadQA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSize {
    Base,
    Large,
}

impl ModelSize {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSize::Base => "base",
            ModelSize::Large => "large",
        }
    }
}

/// One row of the fine-tuning hyperparameter table: learning rate and batch
/// size per model size, shared epoch count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    pub task: Task,
    /// (base, large)
    pub learning_rate: (f64, f64),
    /// (base, large)
    pub batch_size: (u32, u32),
    pub epochs: u32,
}

impl TaskConfig {
    fn row(task: Task) -> Self {
        let (learning_rate, batch_size, epochs) = match task {
            Task::Bronco => ((3e-5, 1e-5), (16, 16), 20),
            Task::Ggponc2 => ((3e-5, 1e-5), (16, 16), 5),
            Task::Grascco => ((3e-5, 1e-5), (16, 16), 20),
            Task::Clef => ((4e-5, 1e-5), (16, 32), 20),
            Task::RadQa => ((3e-5, 1e-5), (16, 16), 10),
        };
        Self {
            task,
            learning_rate,
            batch_size,
            epochs,
        }
    }

    pub fn lr_for(&self, size: ModelSize) -> f64 {
        match size {
            ModelSize::Base => self.learning_rate.0,
            ModelSize::Large => self.learning_rate.1,
        }
    }

    pub fn batch_for(&self, size: ModelSize) -> u32 {
        match size {
            ModelSize::Base => self.batch_size.0,
            ModelSize::Large => self.batch_size.1,
        }
    }

    /// Flat key=value rendering for one model size, consumable by training
    /// scripts.
    pub fn key_values(&self, size: ModelSize) -> String {
        format!(
            "task={}\nsize={}\nlr={:e}\nbatch={}\nepochs={}\n",
            self.task.name(),
            size.name(),
            self.lr_for(size),
            self.batch_for(size),
            self.epochs
        )
    }
}

/// Look up the hyperparameter row for a task by CLI name.
pub fn emit_task_config(task: &str) -> Result<TaskConfig> {
    Ok(TaskConfig::row(Task::parse(task)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("doc{i:03}")).collect()
    }

    #[test]
    fn ten_ids_five_folds_of_two() {
        let folds = make_folds(&ids(10), 5, 7).unwrap();
        assert_eq!(folds.fold_sizes(), vec![2, 2, 2, 2, 2]);
    }

    #[test]
    fn eleven_ids_five_folds_spread_one() {
        let folds = make_folds(&ids(11), 5, 7).unwrap();
        let mut sizes = folds.fold_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 2, 3]);
    }

    #[test]
    fn same_seed_same_assignment() {
        let a = make_folds(&ids(20), 5, 42).unwrap();
        let b = make_folds(&ids(20), 5, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn assignment_ignores_input_order() {
        let forward = ids(20);
        let mut reversed = forward.clone();
        reversed.reverse();
        assert_eq!(
            make_folds(&forward, 4, 3).unwrap(),
            make_folds(&reversed, 4, 3).unwrap()
        );
    }

    #[test]
    fn different_seeds_differ() {
        let a = make_folds(&ids(20), 5, 1).unwrap();
        let b = make_folds(&ids(20), 5, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn invalid_k_rejected() {
        assert!(matches!(make_folds(&ids(10), 1, 0), Err(Error::FoldCount { .. })));
        assert!(matches!(make_folds(&ids(3), 5, 0), Err(Error::FoldCount { .. })));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut v = ids(5);
        v.push("doc000".into());
        assert!(matches!(
            make_folds(&v, 2, 0),
            Err(Error::DuplicateFoldId { .. })
        ));
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0, fixed forever so other implementations
        // can check their port.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(rng.next_u64(), 0x6E789E6AA1B965F4);
        assert_eq!(rng.next_u64(), 0x06C45D188009454F);
    }

    #[test]
    fn aggregate_constant_scores() {
        let a = aggregate(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(a.mean, 1.0);
        assert_eq!(a.std, 0.0);
        assert_eq!(a.to_string(), "1.000 ± 0.000");
    }

    #[test]
    fn aggregate_two_scores() {
        let a = aggregate(&[0.8, 0.9]).unwrap();
        assert!((a.mean - 0.85).abs() < 1e-12);
        // sample std of [0.8, 0.9] is 0.05 * sqrt(2)
        assert!((a.std - 0.05 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn aggregate_single_score() {
        let a = aggregate(&[0.77]).unwrap();
        assert_eq!((a.mean, a.std, a.n), (0.77, 0.0, 1));
    }

    #[test]
    fn aggregate_empty_is_error() {
        assert!(matches!(aggregate(&[]), Err(Error::EmptyScores)));
    }

    #[test]
    fn human_magnitudes_match_table_style() {
        assert_eq!(human_magnitude(5_000_000), "5M");
        assert_eq!(human_magnitude(16_000), "16K");
        assert_eq!(human_magnitude(1_700_000_000), "1,700M");
        assert_eq!(human_magnitude(45_000_000), "45M");
        assert_eq!(human_magnitude(999), "999");
        assert_eq!(human_magnitude(0), "0");
    }

    #[test]
    fn stats_rows_and_total() {
        let docs = vec![
            CorpusRecord::Document(Document {
                id: "a".into(),
                source: "pubmed".into(),
                text: "eins zwei drei".into(),
                meta: Default::default(),
            }),
            CorpusRecord::Document(Document {
                id: "b".into(),
                source: "pubmed".into(),
                text: "vier fünf".into(),
                meta: Default::default(),
            }),
        ];
        let table = corpus_stats(docs, &[], &TokenizerKind::Whitespace);
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].tokens, 5);
        assert_eq!(table.rows[0].documents, 2);
        assert_eq!(table.total.tokens, 5);
    }

    #[test]
    fn declared_empty_source_keeps_zero_row() {
        let table = corpus_stats(
            Vec::<CorpusRecord>::new(),
            &["mimic".to_string()],
            &TokenizerKind::Whitespace,
        );
        assert_eq!(
            table.rows,
            vec![StatsRow {
                dataset: "mimic".into(),
                tokens: 0,
                documents: 0
            }]
        );
    }

    #[test]
    fn segments_count_as_documents() {
        let seg = CorpusRecord::Segment(Segment {
            doc_id: "d".into(),
            source: "pubmed".into(),
            index: 0,
            sentence_range: (0, 0),
            text: "x y".into(),
            token_count: 2,
            hard_split: false,
        });
        let table = corpus_stats(vec![seg], &[], &TokenizerKind::Whitespace);
        assert_eq!(table.rows[0].documents, 1);
        assert_eq!(table.rows[0].tokens, 2);
    }

    #[test]
    fn bronco_base_row() {
        let cfg = emit_task_config("BRONCO").unwrap();
        assert_eq!(cfg.lr_for(ModelSize::Base), 3e-5);
        assert_eq!(cfg.batch_for(ModelSize::Base), 16);
        assert_eq!(cfg.epochs, 20);
        let kv = cfg.key_values(ModelSize::Base);
        assert!(kv.contains("lr=3e-5\n"), "{kv}");
        assert!(kv.contains("batch=16\n"));
        assert!(kv.contains("epochs=20\n"));
    }

    #[test]
    fn clef_large_row() {
        let cfg = emit_task_config("CLEF").unwrap();
        assert_eq!(cfg.lr_for(ModelSize::Large), 1e-5);
        assert_eq!(cfg.batch_for(ModelSize::Large), 32);
        assert_eq!(cfg.epochs, 20);
    }

    #[test]
    fn radqa_large_row() {
        let cfg = emit_task_config("RadQA").unwrap();
        assert_eq!(cfg.lr_for(ModelSize::Large), 1e-5);
        assert_eq!(cfg.batch_for(ModelSize::Large), 16);
        assert_eq!(cfg.epochs, 10);
    }

    #[test]
    fn unknown_task_lists_valid_names() {
        let err = emit_task_config("SQUAD").unwrap_err();
        let msg = err.to_string();
        for name in VALID_TASKS {
            assert!(msg.contains(name), "{msg} should list {name}");
        }
    }

    proptest! {
        /// Folds partition the ids with sizes differing by at most one.
        #[test]
        fn folds_partition(n in 4usize..60, k in 2usize..6, seed in any::<u64>()) {
            prop_assume!(k <= n);
            let input = ids(n);
            let folds = make_folds(&input, k, seed).unwrap();
            prop_assert_eq!(folds.assignment.len(), n);
            let sizes = folds.fold_sizes();
            let min = sizes.iter().min().unwrap();
            let max = sizes.iter().max().unwrap();
            prop_assert!(max - min <= 1);
            let mut all: Vec<&String> = folds.assignment.keys().collect();
            all.sort();
            let mut expected: Vec<&String> = input.iter().collect();
            expected.sort();
            prop_assert_eq!(all, expected);
        }

        /// aggregate matches an independent two-pass computation.
        #[test]
        fn aggregate_matches_two_pass(scores in prop::collection::vec(0.0f64..1.0, 1..20)) {
            let a = aggregate(&scores).unwrap();
            let n = scores.len() as f64;
            let mean: f64 = scores.iter().sum::<f64>() / n;
            prop_assert!((a.mean - mean).abs() < 1e-12);
            if scores.len() > 1 {
                let var: f64 = scores.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                    / (n - 1.0);
                prop_assert!((a.std - var.sqrt()).abs() < 1e-12);
            }
        }

        /// Stats totals are invariant under record order.
        #[test]
        fn stats_permutation_invariant(tokens in prop::collection::vec(1usize..50, 1..10)) {
            let make = |order: Vec<usize>| {
                let records: Vec<CorpusRecord> = order.iter().map(|&i| {
                    CorpusRecord::Segment(Segment {
                        doc_id: format!("d{i}"),
                        source: if i % 2 == 0 { "a".into() } else { "b".into() },
                        index: 0,
                        sentence_range: (0, 0),
                        text: String::new(),
                        token_count: tokens[i],
                        hard_split: false,
                    })
                }).collect();
                corpus_stats(records, &[], &TokenizerKind::Whitespace)
            };
            let forward = make((0..tokens.len()).collect());
            let reversed = make((0..tokens.len()).rev().collect());
            prop_assert_eq!(forward, reversed);
        }
    }
}
