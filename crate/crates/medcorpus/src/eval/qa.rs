//! Extractive QA scoring: token-level F1 and Exact Match.
//!
//! Answers are normalized before comparison: lowercase, punctuation
//! stripped, whitespace collapsed, German articles removed. EM is 1 iff the
//! normalized prediction equals any normalized gold answer; token F1 takes
//! the maximum over gold answers of the multiset token-overlap F1. The
//! report carries means over all questions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::MetricReport;

/// German articles removed during answer normalization.
pub const GERMAN_ARTICLES: [&str; 12] = [
    "der", "die", "das", "den", "dem", "des", "ein", "eine", "einen", "einem", "einer", "eines",
];

/// One question with its gold answers and the model's prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaAnswer {
    pub question_id: String,
    pub gold_texts: Vec<String>,
    pub predicted_text: String,
}

/// Normalize an answer string: lowercase, replace punctuation (anything
/// neither alphanumeric nor whitespace) with spaces, remove the given
/// articles, collapse whitespace. Space-replacement keeps "3.5 cm" and
/// "3,5 cm" comparable, which matters for measurements in clinical answers.
pub fn normalize_answer(text: &str, articles: &BTreeSet<String>) -> String {
    let lowered = text.to_lowercase();
    let stripped: String = lowered
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c.is_whitespace() {
                c
            } else {
                ' '
            }
        })
        .collect();
    stripped
        .split_whitespace()
        .filter(|token| !articles.contains(*token))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The default article set.
pub fn german_articles() -> BTreeSet<String> {
    GERMAN_ARTICLES.iter().map(|s| s.to_string()).collect()
}

/// Multiset token overlap between two normalized answers:
/// (precision, recall, f1).
fn token_overlap(pred: &str, gold: &str) -> (f64, f64, f64) {
    let pred_tokens: Vec<&str> = pred.split_whitespace().collect();
    let gold_tokens: Vec<&str> = gold.split_whitespace().collect();
    if pred_tokens.is_empty() && gold_tokens.is_empty() {
        // both normalize to nothing: treat equality as a perfect match
        return (1.0, 1.0, 1.0);
    }
    if pred_tokens.is_empty() || gold_tokens.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut gold_counts: HashMap<&str, usize> = HashMap::new();
    for t in &gold_tokens {
        *gold_counts.entry(t).or_insert(0) += 1;
    }
    let mut common = 0usize;
    for t in &pred_tokens {
        if let Some(c) = gold_counts.get_mut(t) {
            if *c > 0 {
                *c -= 1;
                common += 1;
            }
        }
    }
    if common == 0 {
        return (0.0, 0.0, 0.0);
    }
    let precision = common as f64 / pred_tokens.len() as f64;
    let recall = common as f64 / gold_tokens.len() as f64;
    let f1 = 2.0 * common as f64 / (pred_tokens.len() + gold_tokens.len()) as f64;
    (precision, recall, f1)
}

/// Per-question scores: token P/R/F1 of the best-F1 gold answer, plus EM.
fn score_question(answer: &QaAnswer, articles: &BTreeSet<String>) -> (f64, f64, f64, f64) {
    let pred = normalize_answer(&answer.predicted_text, articles);
    let mut best = (0.0, 0.0, 0.0);
    let mut em = 0.0;
    for gold in &answer.gold_texts {
        let gold = normalize_answer(gold, articles);
        if gold == pred {
            em = 1.0;
        }
        let (p, r, f1) = token_overlap(&pred, &gold);
        if f1 > best.2 {
            best = (p, r, f1);
        }
    }
    (best.0, best.1, best.2, em)
}

/// Score a batch of questions with the default German article list.
pub fn qa_f1_em(answers: &[QaAnswer]) -> MetricReport {
    qa_f1_em_with_articles(answers, &german_articles())
}

pub fn qa_f1_em_with_articles(
    answers: &[QaAnswer],
    articles: &BTreeSet<String>,
) -> MetricReport {
    if answers.is_empty() {
        return MetricReport::qa(0.0, 0.0, 0.0, 0.0);
    }
    let mut sums = (0.0, 0.0, 0.0, 0.0);
    for answer in answers {
        let (p, r, f1, em) = score_question(answer, articles);
        sums.0 += p;
        sums.1 += r;
        sums.2 += f1;
        sums.3 += em;
    }
    let n = answers.len() as f64;
    MetricReport::qa(sums.0 / n, sums.1 / n, sums.2 / n, sums.3 / n)
}

// SQuAD-v1-style gold file structures.
#[derive(Deserialize)]
struct SquadFile {
    data: Vec<SquadArticle>,
}

#[derive(Deserialize)]
struct SquadArticle {
    paragraphs: Vec<SquadParagraph>,
}

#[derive(Deserialize)]
struct SquadParagraph {
    qas: Vec<SquadQuestion>,
}

#[derive(Deserialize)]
struct SquadQuestion {
    id: String,
    answers: Vec<SquadAnswer>,
}

#[derive(Deserialize)]
struct SquadAnswer {
    text: String,
}

/// Load gold answers from a SQuAD-v1-style JSON file, keyed by question id.
pub fn read_squad_gold(path: impl AsRef<Path>) -> Result<BTreeMap<String, Vec<String>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let parsed: SquadFile =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::parse(path, e))?;
    let mut gold = BTreeMap::new();
    for article in parsed.data {
        for paragraph in article.paragraphs {
            for question in paragraph.qas {
                let texts: Vec<String> =
                    question.answers.into_iter().map(|a| a.text).collect();
                gold.insert(question.id, texts);
            }
        }
    }
    Ok(gold)
}

/// Load predictions: a JSON object mapping question id to answer string.
pub fn read_qa_predictions(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::parse(path, e))
}

/// Join gold answers with predictions. A gold question without a prediction
/// scores against the empty string; the returned count says how many were
/// missing. Extra predictions are ignored.
pub fn pair_answers(
    gold: &BTreeMap<String, Vec<String>>,
    predictions: &BTreeMap<String, String>,
) -> (Vec<QaAnswer>, usize) {
    let mut missing = 0;
    let answers = gold
        .iter()
        .map(|(id, texts)| {
            let predicted = match predictions.get(id) {
                Some(p) => p.clone(),
                None => {
                    missing += 1;
                    String::new()
                }
            };
            QaAnswer {
                question_id: id.clone(),
                gold_texts: texts.clone(),
                predicted_text: predicted,
            }
        })
        .collect();
    (answers, missing)
}
