//! Finds the dominant modes of a corpus of arcs with the SVD.
//!
//!     cargo run --example arc_modes

use std::collections::BTreeMap;

use hedonic::arcs::build_arc;
use hedonic::corpus::Document;
use hedonic::decompose::{closest_stories, mode_metadata_report, svd_modes, ArcMatrix, Polarity};
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};

fn main() -> hedonic::Result<()> {
    let lex = demo_lexicon();
    let mut arcs = Vec::new();
    let mut downloads = BTreeMap::new();
    for i in 0..24 {
        let shape = Shape::ARCS[i % 4];
        let id = format!("{}-{i}", shape.name());
        let doc = Document::new(id.clone(), "", synthetic_book(shape, 20_000, i as u64));
        arcs.push(build_arc(&doc, &lex, 60, 2_000)?);
        downloads.insert(id, 100 + 37 * i as i64 % 200);
    }

    let d = svd_modes(&ArcMatrix::new(&arcs)?, 4)?;
    for (k, (s, f)) in d
        .singular_values
        .iter()
        .zip(&d.variance_fraction)
        .enumerate()
    {
        println!("mode {k}: sigma {s:.3}, variance {:.1}%", 100.0 * f);
    }
    for polarity in [Polarity::Positive, Polarity::Negative] {
        let top = closest_stories(&d, 0, polarity, 3)?;
        println!(
            "mode 0 {}: {:?}",
            polarity.symbol(),
            top.iter().map(|t| &t.0).collect::<Vec<_>>()
        );
    }
    for g in mode_metadata_report(&d, &downloads, 0.05)? {
        println!(
            "group SV {}{}: {} books, median downloads {}",
            g.mode,
            g.polarity.symbol(),
            g.count,
            g.median
        );
    }
    Ok(())
}
