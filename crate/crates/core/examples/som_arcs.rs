//! Trains a self-organizing map on arcs and prints the winner map and
//! B-matrix.
//!
//!     cargo run --example som_arcs

use hedonic::arcs::build_arc;
use hedonic::corpus::Document;
use hedonic::som::{
    b_matrix, default_iterations, node_variance, som_train, winner_counts, SomGrid,
};
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};

fn main() -> hedonic::Result<()> {
    let lex = demo_lexicon();
    let mut rows = Vec::new();
    for i in 0..40 {
        let shape = Shape::ARCS[i % 4];
        let doc = Document::new(format!("b{i}"), "", synthetic_book(shape, 12_000, i as u64));
        rows.push(build_arc(&doc, &lex, 40, 1_500)?.points);
    }

    let grid = SomGrid::new(6, -0.15, -0.15, 42)?;
    let trained = som_train(&rows, &grid, default_iterations(rows.len()))?;
    println!("node variance {:.5}", node_variance(&trained));

    println!("winner counts:");
    let counts = winner_counts(&rows, &trained)?;
    for row in counts.chunks(trained.side) {
        println!(
            "  {}",
            row.iter().map(|c| format!("{c:>3}")).collect::<String>()
        );
    }
    println!("B-matrix:");
    for row in b_matrix(&trained)? {
        println!(
            "  {}",
            row.iter().map(|v| format!("{v:>6.3}")).collect::<String>()
        );
    }
    Ok(())
}
