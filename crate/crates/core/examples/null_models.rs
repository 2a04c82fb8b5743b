//! Compares a structured text with its word-salad and bigram nonsense
//! versions.
//!
//!     cargo run --example null_models

use hedonic::arcs::{build_arc, nonsense_with_trace, word_salad, BigramModel};
use hedonic::corpus::Document;
use hedonic::scoring::score_text;
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};
use hedonic::tokenizer::{raw_tokens, tokenize, word_frequencies};

fn spread(points: &[f64]) -> f64 {
    points.iter().fold(f64::MIN, |a, &b| a.max(b)) - points.iter().fold(f64::MAX, |a, &b| a.min(b))
}

fn main() -> hedonic::Result<()> {
    let lex = demo_lexicon();
    let doc = Document::new("book", "Rise", synthetic_book(Shape::Rise, 30_000, 3));
    let salad = word_salad(&doc, 3);
    let (nonsense, trace) = nonsense_with_trace(&doc, 3)?;

    for d in [&doc, &salad, &nonsense] {
        let h = score_text(&word_frequencies(&tokenize(&d.text)), &lex)?.value;
        let arc = build_arc(d, &lex, 50, 3_000)?;
        println!(
            "{:<9} score {h:.4}  arc range {:.3}",
            label(d, &doc, &salad),
            spread(&arc.points)
        );
    }
    println!("nonsense restarts: {}", trace.restarts.len());

    let model = BigramModel::train(&raw_tokens("the cat saw the dog and the dog saw the cat"));
    println!(
        "\nbigram counts: the->dog {}, the->cat {}, saw->the {}",
        model.count("the", "dog"),
        model.count("the", "cat"),
        model.count("saw", "the")
    );
    Ok(())
}

fn label(d: &Document, doc: &Document, salad: &Document) -> &'static str {
    if d.text == doc.text {
        "original"
    } else if d.text == salad.text {
        "salad"
    } else {
        "nonsense"
    }
}
