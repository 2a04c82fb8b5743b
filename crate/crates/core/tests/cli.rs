use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hedonic::arcs::{load_arcs_csv, EmotionalArc};
use hedonic::cluster::{read_cluster_report, ClusterTree};
use hedonic::corpus::load_catalog;
use hedonic::decompose::ModeDecomposition;
use hedonic::scoring::{score_text, WordVector};
use hedonic::som::GridEmit;
use hedonic::synth::{demo_lexicon, synthetic_book, Shape};
use hedonic::tokenizer::tokenize;

fn hedonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hedonic"))
        .args(args)
        .env_remove("HEDONIC_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = hedonic(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    lexicon: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let lexicon = root.join("demo.lexicon");
    demo_lexicon().save(&lexicon).unwrap();
    Fixture {
        _dir: dir,
        root,
        lexicon,
    }
}

fn write_books(root: &Path, n: usize, tokens: usize) -> PathBuf {
    let books = root.join("books");
    std::fs::create_dir_all(&books).unwrap();
    let mut catalog = String::from("id,title,downloads,path\n");
    for i in 0..n {
        let shape = Shape::ARCS[i % Shape::ARCS.len()];
        let name = format!("book{i:02}.txt");
        std::fs::write(books.join(&name), synthetic_book(shape, tokens, i as u64)).unwrap();
        catalog.push_str(&format!(
            "book{i:02},A {} Story,{},{name}\n",
            shape.name(),
            50 + 10 * i
        ));
    }
    let path = books.join("catalog.csv");
    std::fs::write(&path, catalog).unwrap();
    path
}

#[test]
fn score_reports_json_and_exit_codes() {
    let f = fixture();
    let text = f.root.join("t.txt");
    std::fs::write(&text, "joy and love, war").unwrap();
    let out = ok(&["score", "--lexicon", s(&f.lexicon), s(&text)]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let wv = WordVector::from_tokens(
        tokenize("joy and love, war")
            .tokens
            .iter()
            .map(String::as_str),
    );
    let want = score_text(&wv, &demo_lexicon()).unwrap().value;
    assert_eq!(v[0]["score"]["value"].as_f64().unwrap(), want);

    let empty = f.root.join("e.txt");
    std::fs::write(&empty, "the and of").unwrap();
    assert_eq!(
        hedonic(&["score", "--lexicon", s(&f.lexicon), s(&empty)])
            .status
            .code(),
        Some(1)
    );
    let out = ok(&[
        "score",
        "--lexicon",
        s(&f.lexicon),
        "--allow-unscored",
        s(&empty),
    ]);
    assert!(out.contains("null"));

    let missing = f.root.join("nope.txt");
    assert_eq!(
        hedonic(&["score", "--lexicon", s(&f.lexicon), s(&missing)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hedonic(&["score", "--bogus"]).status.code(), Some(2));

    let a = ok(&["score", "--lexicon", s(&f.lexicon), s(&text)]);
    let b = ok(&[
        "score",
        "--lexicon",
        s(&f.lexicon),
        "--delta-h",
        "0",
        s(&text),
    ]);
    assert_eq!(a, b);
}

#[test]
fn shift_identical_texts_is_zero() {
    let f = fixture();
    let text = f.root.join("t.txt");
    std::fs::write(&text, "joy war love the").unwrap();
    let out = ok(&[
        "shift",
        "--lexicon",
        s(&f.lexicon),
        "--reference",
        s(&text),
        "--comparison",
        s(&text),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["items"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["contribution"].as_f64() == Some(0.0)));

    let other = f.root.join("o.txt");
    std::fs::write(&other, "joy joy love war the").unwrap();
    let out = ok(&[
        "shift",
        "--lexicon",
        s(&f.lexicon),
        "--reference",
        s(&text),
        "--comparison",
        s(&other),
        "--mask",
        "joy",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["items"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["word"] != "joy"));
}

#[test]
fn compare_writes_pairs_and_summary() {
    let f = fixture();
    let b = f.root.join("b.lexicon");
    std::fs::write(
        &b,
        "#lexicon other range=1,9 center=5\njoy\t8\nwar\t2\nlove\t7\n",
    )
    .unwrap();
    let pairs = f.root.join("pairs.csv");
    let out = ok(&[
        "compare",
        "--lexicon-a",
        s(&f.lexicon),
        "--lexicon-b",
        s(&b),
        "--pairs",
        s(&pairs),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"].as_u64(), Some(3));
    assert!(v["slope"].as_f64().unwrap() > 0.0);
    let back =
        hedonic::lexcompare::read_comparison_csv(std::fs::File::open(&pairs).unwrap()).unwrap();
    assert_eq!(back.len(), 3);
}

#[test]
fn bench_on_separable_corpus() {
    let f = fixture();
    let corpus = f.root.join("reviews.csv");
    let mut csv = String::from("id,label,text\n");
    for i in 0..20 {
        csv.push_str(&format!(
            "p{i},positive,joy love hope the win. smile and gift!\n"
        ));
        csv.push_str(&format!(
            "n{i},negative,war grief the fear. pain and storm!\n"
        ));
    }
    std::fs::write(&corpus, csv).unwrap();
    let run = || {
        ok(&[
            "bench",
            "--lexicon",
            s(&f.lexicon),
            "--corpus",
            s(&corpus),
            "--train-fraction",
            "0.5",
            "--sizes",
            "1,4,3",
            "--trials",
            "10",
        ])
    };
    let out = run();
    assert_eq!(out, run());
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["threshold"]["overall"]["f1"].as_f64(), Some(1.0));
    assert_eq!(
        v["naive_bayes"]["evaluation"]["overall"]["f1"].as_f64(),
        Some(1.0)
    );
    assert_eq!(v["concatenation"].as_array().unwrap().len(), 3);

    let out = ok(&[
        "bench",
        "--lexicon",
        s(&f.lexicon),
        "--corpus",
        s(&corpus),
        "--train-fraction",
        "0.5",
        "--sentences",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["documents"].as_u64(), Some(80));
}

#[test]
fn arc_pipeline_round_trips() {
    let f = fixture();
    let catalog = write_books(&f.root, 12, 3000);
    let arcs = f.root.join("arcs.csv");
    let json_dir = f.root.join("arcs");
    let args = [
        "arcs",
        "--lexicon",
        s(&f.lexicon),
        "--catalog",
        s(&catalog),
        "--n-points",
        "40",
        "--window",
        "600",
        "--output",
        s(&arcs),
        "--json-dir",
        s(&json_dir),
    ];
    ok(&args);
    let first = std::fs::read(&arcs).unwrap();
    ok(&[&["--jobs", "1"], &args[..]].concat());
    assert_eq!(first, std::fs::read(&arcs).unwrap());
    let loaded = load_arcs_csv(&arcs).unwrap();
    assert_eq!(loaded.len(), 12);
    let one =
        EmotionalArc::from_json(&std::fs::read_to_string(json_dir.join("book03.json")).unwrap())
            .unwrap();
    assert_eq!(one.points, loaded[3].points);

    let decomposition = f.root.join("svd.json");
    let report = f.root.join("svd-report.json");
    let coefficients = f.root.join("coef.csv");
    ok(&[
        "svd",
        "--arcs",
        s(&arcs),
        "--modes",
        "4",
        "--output",
        s(&decomposition),
        "--report",
        s(&report),
        "--coefficients",
        s(&coefficients),
        "--metadata",
        s(&catalog),
    ]);
    let d =
        ModeDecomposition::from_json(&std::fs::read_to_string(&decomposition).unwrap()).unwrap();
    assert_eq!(d.modes.len(), 4);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let groups = r["metadata"].as_array().unwrap();
    assert_eq!(
        groups
            .iter()
            .map(|g| g["count"].as_u64().unwrap())
            .sum::<u64>(),
        12
    );

    let dendrogram = f.root.join("tree.json");
    let clusters = f.root.join("clusters.csv");
    ok(&[
        "cluster",
        "--arcs",
        s(&arcs),
        "-k",
        "4",
        "--dendrogram",
        s(&dendrogram),
        "--output",
        s(&clusters),
    ]);
    let tree = ClusterTree::from_json(&std::fs::read_to_string(&dendrogram).unwrap()).unwrap();
    assert_eq!(tree.merges.len(), 11);
    let summary = read_cluster_report(std::fs::File::open(&clusters).unwrap()).unwrap();
    assert_eq!(summary.iter().map(|c| c.size).sum::<usize>(), 12);

    let grid = f.root.join("som.json");
    ok(&[
        "som",
        "--arcs",
        s(&arcs),
        "--side",
        "4",
        "--output",
        s(&grid),
        "--seed",
        "3",
    ]);
    let g = GridEmit::from_json(&std::fs::read_to_string(&grid).unwrap()).unwrap();
    assert_eq!(g.winner_counts.iter().sum::<usize>(), 12);
    let again = f.root.join("som2.json");
    ok(&[
        "som",
        "--arcs",
        s(&arcs),
        "--side",
        "4",
        "--output",
        s(&again),
        "--seed",
        "3",
    ]);
    assert_eq!(
        std::fs::read(&grid).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn null_salad_preserves_scores() {
    let f = fixture();
    let catalog = write_books(&f.root, 3, 800);
    let out = f.root.join("salad");
    ok(&[
        "null",
        "--kind",
        "salad",
        "--catalog",
        s(&catalog),
        "--output-dir",
        s(&out),
    ]);
    let entries = load_catalog(out.join("catalog.csv")).unwrap();
    assert_eq!(entries.len(), 3);
    let originals = load_catalog(&catalog).unwrap();
    for (e, o) in entries.iter().zip(&originals) {
        let a = e.load(&out, false).unwrap();
        let b = o.load(catalog.parent().unwrap(), false).unwrap();
        let wa = WordVector::from_tokens(tokenize(&a.text).tokens.iter().map(String::as_str));
        let wb = WordVector::from_tokens(tokenize(&b.text).tokens.iter().map(String::as_str));
        assert_eq!(
            score_text(&wa, &demo_lexicon()).unwrap().value,
            score_text(&wb, &demo_lexicon()).unwrap().value
        );
        assert_eq!(a.downloads(), b.downloads());
    }
    let nonsense = f.root.join("nonsense");
    ok(&[
        "null",
        "--kind",
        "nonsense",
        "--catalog",
        s(&catalog),
        "--output-dir",
        s(&nonsense),
    ]);
    assert_eq!(load_catalog(nonsense.join("catalog.csv")).unwrap().len(), 3);
}

#[test]
fn short_books_exit_two_with_message() {
    let f = fixture();
    let catalog = write_books(&f.root, 2, 300);
    let out = hedonic(&[
        "arcs",
        "--lexicon",
        s(&f.lexicon),
        "--catalog",
        s(&catalog),
        "--window",
        "290",
        "--n-points",
        "20",
        "--output",
        s(&f.root.join("x.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("needs more than 310"));
}

#[test]
fn config_file_and_env_seed() {
    let f = fixture();
    let catalog = write_books(&f.root, 4, 1500);
    let arcs = f.root.join("arcs.csv");
    let config = f.root.join("run.conf");
    std::fs::write(
        &config,
        format!(
            "lexicon={}\ncatalog={}\nn_points=30\nwindow=500\n",
            s(&f.lexicon),
            s(&catalog)
        ),
    )
    .unwrap();
    ok(&["--config", s(&config), "arcs", "--output", s(&arcs)]);
    assert_eq!(load_arcs_csv(&arcs).unwrap()[0].points.len(), 30);
    ok(&[
        "--config",
        s(&config),
        "arcs",
        "--n-points",
        "25",
        "--output",
        s(&arcs),
    ]);
    assert_eq!(load_arcs_csv(&arcs).unwrap()[0].points.len(), 25);

    let run = |seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hedonic"));
        c.args(["som", "--arcs", s(&arcs), "--side", "3"]);
        if let Some(v) = flag {
            c.args(["--seed", v]);
        }
        match seed {
            Some(v) => c.env("HEDONIC_SEED", v),
            None => c.env_remove("HEDONIC_SEED"),
        };
        let out = c.output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(Some("11"), None), run(None, Some("11")));
    assert_ne!(run(Some("11"), None), run(Some("12"), None));
    assert_eq!(run(Some("12"), Some("11")), run(None, Some("11")));
}

#[test]
fn corpus_filter_applies_rules() {
    let f = fixture();
    let books = f.root.join("g");
    std::fs::create_dir_all(&books).unwrap();
    let body = |n: usize| {
        format!(
            "Header junk\n*** START OF THIS PROJECT GUTENBERG EBOOK X ***\n{}\n*** END OF THIS PROJECT GUTENBERG EBOOK X ***\nlicense text\n",
            vec!["word"; n].join(" ")
        )
    };
    std::fs::write(books.join("a.txt"), body(500)).unwrap();
    std::fs::write(books.join("b.txt"), body(50)).unwrap();
    std::fs::write(books.join("c.txt"), body(500)).unwrap();
    std::fs::write(books.join("d.txt"), body(500)).unwrap();
    std::fs::write(
        books.join("catalog.csv"),
        "id,title,downloads,path\na,Good Novel,100,a.txt\nb,Short,100,b.txt\nc,Poems of Spring,100,c.txt\nd,Unloved,40,d.txt\n",
    )
    .unwrap();
    let out = f.root.join("kept.csv");
    let stripped = f.root.join("stripped");
    ok(&[
        "corpus-filter",
        "--catalog",
        s(&books.join("catalog.csv")),
        "--min-words",
        "100",
        "--max-words",
        "1000",
        "--output",
        s(&out),
        "--stripped-dir",
        s(&stripped),
    ]);
    let kept = load_catalog(&out).unwrap();
    assert_eq!(
        kept.iter().map(|e| e.id.as_str()).collect::<Vec<_>>(),
        vec!["a"]
    );
    let text = std::fs::read_to_string(&kept[0].path).unwrap();
    assert!(!text.contains("START") && !text.contains("license"));
}
