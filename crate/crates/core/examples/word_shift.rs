//! Explains why one text is happier than another, word by word.
//!
//!     cargo run --example word_shift

use hedonic::lexicon::{load_lexicon, LexiconFormat};
use hedonic::tokenizer::{tokenize, word_frequencies};
use hedonic::wordshift::{compute_shift, mask_words};

const LEXICON: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.lexicon");

fn main() -> hedonic::Result<()> {
    let lex = load_lexicon(LEXICON, &LexiconFormat::Headed)?;
    let reference = word_frequencies(&tokenize(
        "the rain and the cold street, tired and alone, the storm and the war",
    ));
    let comparison = word_frequencies(&tokenize(
        "the music and the laughter at home with a friend, warm and happy, the rain outside",
    ));

    let shift = compute_shift(&reference, &comparison, &lex)?;
    println!("h_ref = {:.3}, h_comp = {:.3}", shift.h_ref, shift.h_comp);
    for item in shift.top_k(8).to_emit().items {
        let bar = "#".repeat((item.contribution.abs() / 2.0).ceil() as usize);
        println!(
            "{:>2} {:<10} {:>3} {:>7.2}% {bar}",
            item.rank, item.word, item.class, item.contribution
        );
    }
    println!("contributions sum to {:.6}%", shift.total_contribution());

    let masked = mask_words(&reference, &comparison, &lex, &["the", "and"])?;
    println!(
        "\nwithout `the` and `and`: h_ref = {:.3}, h_comp = {:.3}",
        masked.h_ref, masked.h_comp
    );
    Ok(())
}
