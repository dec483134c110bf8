mod common;

use common::{litvar, workspace, Workspace};
use litvar_core::test_support::fixtures;

fn ingest_fixture() -> Workspace {
    let ws = workspace().unwrap();
    let out = litvar(&ws.config, &["ingest", fixtures::path("corpus.pubtator").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    ws
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report_field(report: &str, name: &str) -> usize {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{name}\t")))
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("{name} missing from {report}"))
}

#[test]
fn ingest_reports_fixture_counts() {
    let ws = workspace().unwrap();
    let out = litvar(&ws.config, &["ingest", fixtures::path("corpus.pubtator").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert_eq!(report_field(&report, "documents"), 3);
    assert_eq!(report_field(&report, "indexed"), 3);
    assert!(report_field(&report, "mentions") >= 3);
    assert!(report_field(&report, "keys") > 0);
    assert!(ws.index_dir.join("index.seg").is_file());
}

#[test]
fn empty_corpus_is_fine() {
    let ws = workspace().unwrap();
    let empty = ws.dir.path().join("empty.pubtator");
    std::fs::write(&empty, "").unwrap();
    let out = litvar(&ws.config, &["ingest", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report_field(&stdout(&out), "documents"), 0);
}

#[test]
fn malformed_line_exits_two_and_names_it() {
    let ws = workspace().unwrap();
    let bad = ws.dir.path().join("bad.pubtator");
    std::fs::write(
        &bad,
        "1|t|BRCA2 c.76A>T\n1|a|Text.\n1\t6\t13\tc.76A>T\tDNAMutation\t-\n\n2|t|Title\n2|a|Abstract\n2\tnot a number\n",
    )
    .unwrap();
    let out = litvar(&ws.config, &["ingest", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.pubtator") && err.contains("line 7"), "{err}");
    assert!(!ws.index_dir.join("index.seg").exists());
}

#[test]
fn query_prints_hits_per_line() {
    let ws = ingest_fixture();
    let out = litvar(&ws.config, &["query", "c.76A>T", "--gene", "BRCA2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1001\tc.76A>T\t6-13\n");
    let json: serde_json::Value =
        serde_json::from_slice(&litvar(&ws.config, &["query", "c.76A>T", "--gene", "BRCA2", "--format", "json"]).stdout)
            .unwrap();
    assert_eq!(json["hits"][0]["pmid"], 1001);
    assert_eq!(json["gene"], "HGNC:1101");
}

#[test]
fn equivalent_protein_forms_print_identically() {
    let ws = ingest_fixture();
    for gene in [None, Some("F5")] {
        let run = |v: &str| {
            let mut args = vec!["query", v];
            args.extend(gene.iter().flat_map(|g| ["--gene", g]));
            litvar(&ws.config, &args)
        };
        let (a, b) = (run("p.R506Q"), run("p.Arg506Gln"));
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout);
        if gene.is_some() {
            assert!(stdout(&a).starts_with("1002\t"), "{}", stdout(&a));
        }
    }
}

#[test]
fn unparseable_query_exits_three() {
    let ws = ingest_fixture();
    let out = litvar(&ws.config, &["query", "banana"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("banana"));
}

#[test]
fn empty_results_still_exit_zero() {
    let ws = workspace().unwrap();
    let out = litvar(&ws.config, &["query", "c.999G>A", "--gene", "TP53"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn environment_overrides_config() {
    let ws = ingest_fixture();
    let other = ws.dir.path().join("elsewhere");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_litvar"))
        .args(["--config", ws.config.to_str().unwrap(), "query", "rs6025"])
        .env("LITVAR_INDEX_DIR", &other)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let out = litvar(&ws.config, &["query", "rs6025"]);
    assert_eq!(stdout(&out), "1002\trs6025\t77-83\n");
}

#[test]
fn missing_resources_fail_at_startup() {
    let ws = workspace().unwrap();
    let broken = ws.dir.path().join("broken.conf");
    std::fs::write(&broken, "gene_dictionary = nope.tsv\ntranscripts = nope.tsv\nindex_dir = idx\n").unwrap();
    let out = litvar(&broken, &["query", "rs6025"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}

#[test]
fn concurrent_ingests_serialize_on_the_lock() {
    let ws = workspace().unwrap();
    let records = litvar_core::test_support::VariantGenerator::new(4).pubtator_corpus(30, 20_000);
    let extra = ws.dir.path().join("extra.pubtator");
    let mut buf = Vec::new();
    litvar_core::index::write_pubtator(&records, &mut buf).unwrap();
    std::fs::write(&extra, buf).unwrap();
    let corpus = fixtures::path("corpus.pubtator");
    let handles: Vec<_> = [corpus.clone(), extra.clone(), corpus, extra]
        .into_iter()
        .map(|p| {
            let config = ws.config.clone();
            std::thread::spawn(move || litvar(&config, &["ingest", p.to_str().unwrap()]))
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap().status.success());
    }
    let index = litvar_cli::commands::open_index(&ws.index_dir.join("index.seg")).unwrap();
    assert_eq!(index.document_count(), 33);
}

#[test]
fn patterns_are_listed() {
    let ws = workspace().unwrap();
    let text = stdout(&litvar(&ws.config, &["patterns"]));
    let names: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(names, ["hgvs_canonical", "protein_shorthand", "protein_spelled", "ivs", "rsid"]);
}
