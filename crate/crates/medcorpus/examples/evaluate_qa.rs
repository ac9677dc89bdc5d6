//! Extractive QA scoring: answer normalization, token-overlap F1 and
//! Exact Match, with means reported over all questions.
//!
//! ```bash
//! cargo run --example evaluate_qa
//! ```

use medcorpus::eval::qa::{german_articles, normalize_answer, qa_f1_em, QaAnswer};

fn main() {
    let articles = german_articles();
    for text in ["Der akute Infarkt.", "eine ossäre Läsion", "3.5 cm"] {
        println!("normalize({text:?}) = {:?}", normalize_answer(text, &articles));
    }
    println!();

    let answers = vec![
        QaAnswer {
            question_id: "q1".into(),
            gold_texts: vec!["akuter Infarkt".into()],
            predicted_text: "Infarkt".into(), // token F1 = 2/3, EM = 0
        },
        QaAnswer {
            question_id: "q2".into(),
            gold_texts: vec!["der Befund".into(), "Befund".into()],
            predicted_text: "Befund".into(), // max over golds: EM = 1
        },
        QaAnswer {
            question_id: "q3".into(),
            gold_texts: vec!["keine Blutung".into()],
            predicted_text: "Keine Blutung.".into(), // normalization: EM = 1
        },
    ];

    let report = qa_f1_em(&answers);
    println!("means over {} questions:", answers.len());
    print!("{}", report.human_table());
}
