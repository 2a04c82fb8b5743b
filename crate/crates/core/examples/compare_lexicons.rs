//! Lines up two lexicons on their shared words.
//!
//!     cargo run --example compare_lexicons

use hedonic::lexcompare::{bucket_extremes, compare_lexicons, rma_fit};
use hedonic::lexicon::{load_lexicon, Lexicon, LexiconEntry, LexiconFormat};

const TINY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.lexicon");
const POLAR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/binary.lexicon");

fn main() -> hedonic::Result<()> {
    let tiny = load_lexicon(TINY, &LexiconFormat::Headed)?;
    let polar = load_lexicon(POLAR, &LexiconFormat::Headed)?;

    // A second continuum lexicon on a 1-5 scale that disagrees on a few words.
    let rescored: Vec<LexiconEntry> = tiny
        .entries()
        .iter()
        .map(|e| {
            let mut score = 1.0 + (e.score - 1.0) / 2.0;
            if e.surface == "rain" || e.surface == "calm" {
                score = 6.0 - score;
            }
            LexiconEntry { score, ..e.clone() }
        })
        .collect();
    let five = Lexicon::new("five-point", (1.0, 5.0), 3.0, rescored)?;

    let c = compare_lexicons(&tiny, &five, 3);
    let fit = c.fit.as_ref().expect("both lexicons are continuous");
    println!(
        "{} vs {}: {} shared words",
        c.summary.lexicon_a, c.summary.lexicon_b, c.summary.n
    );
    println!("RMA fit: b = {:.3} a + {:.3}", fit.slope, fit.intercept);
    for m in &c.mismatches {
        println!("  {m:?}");
    }

    let c = compare_lexicons(&tiny, &polar, 3);
    println!(
        "\n{} vs {}: {} shared words ({} via stems)",
        c.summary.lexicon_a, c.summary.lexicon_b, c.summary.n, c.summary.via_stem
    );
    for b in bucket_extremes(&c.pairs, 3) {
        println!(
            "  polar {:+}: {} words, lowest {:?}, highest {:?}",
            b.score_b, b.count, b.lowest, b.highest
        );
    }

    let exact = rma_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)])?;
    println!(
        "\nRMA on y = 2x + 1: slope {}, intercept {}",
        exact.slope, exact.intercept
    );
    Ok(())
}
