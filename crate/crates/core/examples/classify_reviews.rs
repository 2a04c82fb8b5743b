//! Benchmarks a lexicon as a sentiment classifier against Naive Bayes.
//!
//!     cargo run --example classify_reviews

use hedonic::classify::{
    binarization_sweep, calibrate_threshold, concat_sample_experiment, evaluate_lexicon, log_sizes,
    most_informative, nb_classify, nb_train, report, Label, LabeledDoc, Prediction, ThresholdRule,
};
use hedonic::lexicon::{load_lexicon, LexiconFormat, StopWindow};
use hedonic::rng::DEFAULT_SEED;

const LEXICON: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.lexicon");

const POSITIVE: [&str; 8] = [
    "A beautiful film. I laughed with my friends and went home happy.",
    "Warm, funny and full of hope. The music is a gift.",
    "Good acting, a calm story and a happy ending.",
    "I love this film, every laugh and every song.",
    "Sunshine and joy from start to finish, with a cold open.",
    "The best friend comedy of the year. Pure joy.",
    "It made me laugh and cry, but mostly laugh.",
    "A winning cast and a beautiful score.",
];
const NEGATIVE: [&str; 8] = [
    "A sad, tired film about war and death.",
    "I hate to say it, but the pain never ends.",
    "Cold, lost and alone on a rainy street.",
    "The killer is boring and the fear is fake.",
    "Tired jokes and a cold heart. Good grief.",
    "Nothing but pain and a storm of bad ideas.",
    "Death by boredom. I wanted to cry.",
    "A war film with no hope and no music.",
];

fn main() -> hedonic::Result<()> {
    let lex = load_lexicon(LEXICON, &LexiconFormat::Headed)?;
    let mut docs = Vec::new();
    for (i, t) in POSITIVE.iter().enumerate() {
        docs.push(LabeledDoc::new(format!("pos{i}"), Label::Positive, *t)?);
    }
    for (i, t) in NEGATIVE.iter().enumerate() {
        docs.push(LabeledDoc::new(format!("neg{i}"), Label::Negative, *t)?);
    }

    let mean = lex.mean_score().unwrap();
    let e = evaluate_lexicon(&docs, &lex, mean)?;
    println!(
        "lexicon, threshold = mean {mean:.3}: F1 {:.3}",
        e.overall.f1
    );
    let t = calibrate_threshold(&docs, &lex, 1.0, DEFAULT_SEED)?;
    let e = evaluate_lexicon(&docs, &lex, t)?;
    println!(
        "lexicon, calibrated threshold {t:.3}: F1 {:.3}",
        e.overall.f1
    );

    let model = nb_train(&docs, 5000, 0)?;
    let preds: Vec<Prediction> = docs
        .iter()
        .map(|d| nb_classify(&model, &d.text).into())
        .collect();
    let gold: Vec<Label> = docs.iter().map(|d| d.label).collect();
    println!(
        "naive Bayes (in sample): F1 {:.3}",
        report(&preds, &gold)?.overall.f1
    );
    for inf in most_informative(&model, 4) {
        println!(
            "  {:?}/{:?}: {:?}",
            inf.numerator, inf.denominator, inf.words
        );
    }

    println!("\nscores of concatenated samples:");
    for r in concat_sample_experiment(&docs, &lex, &log_sizes(1, 8, 4), 200, DEFAULT_SEED)? {
        println!(
            "  n={:<2} positive {:.3}±{:.3}  negative {:.3}±{:.3}  overlap {:.2}",
            r.size, r.mean_pos, r.sd_pos, r.mean_neg, r.sd_neg, r.overlap_fraction
        );
    }

    let filtered = lex.apply_stop_window(StopWindow::new(1.0)?);
    println!("\nbinarization (stop window 1):");
    for p in binarization_sweep(&docs, &filtered, &[0.0, 0.5, 1.0], ThresholdRule::Center)? {
        println!(
            "  fraction {:.1}: F1 {:.3}",
            p.parameter, p.evaluation.overall.f1
        );
    }
    Ok(())
}
