//! Scores a few sentences against a small lexicon and prints coverage.
//!
//!     cargo run --example score_text

use hedonic::lexicon::{load_lexicon, LexiconFormat, StopWindow};
use hedonic::scoring::{coverage_curve, score_text};
use hedonic::tokenizer::{tokenize, word_frequencies};

const LEXICON: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.lexicon");

fn main() -> hedonic::Result<()> {
    let lex = load_lexicon(LEXICON, &LexiconFormat::Headed)?;
    let strict = lex.apply_stop_window(StopWindow::new(1.0)?);

    let texts = [
        "We laughed and laughed, happy in the sunshine with friends :)",
        "The war brought death, fear and pain to the street.",
        "The table and the street.",
    ];
    for text in texts {
        let wv = word_frequencies(&tokenize(text));
        let all = score_text(&wv, &lex)?;
        print!(
            "{:>5.2} ({}/{} tokens)",
            all.value, all.matched_tokens, all.total_tokens
        );
        match score_text(&wv, &strict) {
            Ok(s) => print!("  dh=1: {:>5.2}", s.value),
            Err(_) => print!("  dh=1:   n/a"),
        }
        println!("  {text}");
    }

    let wv = word_frequencies(&tokenize(texts[0]));
    println!("\ncoverage of the first text by frequency rank:");
    for p in coverage_curve(&wv, &lex) {
        println!(
            "  rank {:>2}  matched {:<5}  cumulative {:.2}",
            p.rank, p.matched, p.cumulative
        );
    }
    Ok(())
}
