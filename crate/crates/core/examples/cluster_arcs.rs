//! Groups arcs with Ward's method and reports the central book of each
//! cluster.
//!
//!     cargo run --example cluster_arcs

use hedonic::arcs::build_arc;
use hedonic::cluster::{cut, silhouette, summarize, ward_cluster};
use hedonic::corpus::Document;
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};

fn main() -> hedonic::Result<()> {
    let lex = demo_lexicon();
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for i in 0..16 {
        let shape = Shape::ARCS[i % 4];
        let id = format!("{}-{i}", shape.name());
        let doc = Document::new(id.clone(), "", synthetic_book(shape, 20_000, i as u64));
        rows.push(build_arc(&doc, &lex, 50, 2_000)?.points);
        ids.push(id);
    }

    let tree = ward_cluster(&ids, &rows)?;
    for m in tree.merges.iter().rev().take(4) {
        println!(
            "merge {:>2} + {:>2} at {:.4} (size {})",
            m.left, m.right, m.cost, m.size
        );
    }
    for k in 2..=5 {
        let assignment = cut(&tree, k)?;
        let s = silhouette(&rows, &assignment)?;
        println!("k = {k}: silhouette {:.3}", s.mean);
    }
    let assignment = cut(&tree, 4)?;
    for c in summarize(&ids, &rows, &assignment)? {
        println!(
            "cluster {}: {} books, central {}",
            c.cluster, c.size, c.central_book
        );
    }
    Ok(())
}
