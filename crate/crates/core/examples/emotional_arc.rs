//! Builds the emotional arc of a synthetic book and draws it.
//!
//!     cargo run --example emotional_arc

use hedonic::arcs::{build_arc, window_start};
use hedonic::corpus::Document;
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};

fn main() -> hedonic::Result<()> {
    let lex = demo_lexicon();
    let (tokens, window, n) = (40_000, 4_000, 40);
    for shape in Shape::ARCS {
        let doc = Document::new(shape.name(), shape.name(), synthetic_book(shape, tokens, 1));
        let arc = build_arc(&doc, &lex, n, window)?;
        println!(
            "{} ({} windows of {} words)",
            shape.name(),
            arc.len(),
            arc.window_words
        );
        plot(&arc.points);
    }
    let starts: Vec<usize> = (0..5).map(|k| window_start(k, tokens, window, n)).collect();
    println!("first window offsets: {starts:?}");
    Ok(())
}

fn plot(points: &[f64]) {
    let rows = 7;
    let (lo, hi) = points
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &p| (a.min(p), b.max(p)));
    for r in (0..rows).rev() {
        let line: String = points
            .iter()
            .map(|&p| {
                let level = ((p - lo) / (hi - lo) * (rows - 1) as f64).round() as usize;
                if level == r {
                    '*'
                } else {
                    ' '
                }
            })
            .collect();
        println!("  |{line}");
    }
}
