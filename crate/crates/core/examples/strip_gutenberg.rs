//! Strips Project Gutenberg boilerplate and applies the catalog filter.
//!
//!     cargo run --example strip_gutenberg

use hedonic::corpus::{filter_catalog, strip_boilerplate, Document, DEFAULT_TITLE_BLOCKLIST};

const SAMPLE: &str = include_str!("data/gutenberg_sample.txt");

fn main() {
    let s = strip_boilerplate(SAMPLE);
    println!(
        "front found: {}, back found: {}",
        s.front_found, s.back_found
    );
    println!("--- body ---\n{}--- end ---", s.body);

    let long = "word ".repeat(30_000);
    let docs = vec![
        Document::new("1", "A Short Walk", s.body.clone()).with_metadata("downloads", 500),
        Document::new("2", "The Long Road", long.clone()).with_metadata("downloads", 120),
        Document::new("3", "Collected Poems", long.clone()).with_metadata("downloads", 900),
        Document::new("4", "Obscure Novel", long).with_metadata("downloads", 12),
    ];
    let blocklist: Vec<String> = DEFAULT_TITLE_BLOCKLIST
        .iter()
        .map(|s| s.to_string())
        .collect();
    for d in filter_catalog(&docs, 20_000, 100_000, 40, &blocklist) {
        println!(
            "kept {} ({} words, {} downloads)",
            d.title,
            d.word_count,
            d.downloads()
        );
    }
}
