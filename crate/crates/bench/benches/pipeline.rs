use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use litvar_bench::{corpus, descriptions, index};
use litvar_core::extract::extract_mentions;
use litvar_core::hgvs::{format_canonical, parse_canonical, parse_loose};
use litvar_core::index::{decode_segment, encode_segment, query};
use litvar_core::test_support::fixtures;

fn bench_parse(c: &mut Criterion) {
    let corpus = descriptions(1000);
    let mut group = c.benchmark_group("parse");
    group.throughput(Throughput::Elements(corpus.len() as u64));
    group.bench_function("canonical_round_trip", |b| {
        b.iter(|| {
            for s in &corpus {
                let ast = parse_canonical(black_box(s)).unwrap();
                black_box(format_canonical(&ast));
            }
        })
    });
    let loose = ["R506Q", "Arg506Gln", "p.Arg506Gln", "c.76 A>T", "IVS1+1G>A", "rs6025", "W26X"];
    group.bench_function("loose_forms", |b| {
        b.iter(|| {
            for s in loose {
                black_box(parse_loose(black_box(s), None).ok());
            }
        })
    });
    group.finish();
}

fn bench_extract(c: &mut Criterion) {
    let records = corpus(200);
    let chars: usize = records.iter().map(|r| r.document.combined_text().len()).sum();
    let mut group = c.benchmark_group("extract");
    group.throughput(Throughput::Bytes(chars as u64));
    group.bench_function("mentions", |b| {
        b.iter(|| {
            for r in &records {
                black_box(extract_mentions(&r.document));
            }
        })
    });
    group.finish();
}

fn bench_ingest(c: &mut Criterion) {
    let res = fixtures::resources();
    let mut group = c.benchmark_group("ingest");
    group.sample_size(20);
    for docs in [50, 200] {
        let records = corpus(docs);
        group.throughput(Throughput::Elements(records.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(docs), &records, |b, records| {
            b.iter(|| black_box(index(records, &res)))
        });
    }
    group.finish();
}

fn bench_query(c: &mut Criterion) {
    let res = fixtures::resources();
    let idx = index(&corpus(500), &res);
    let queries = fixtures::corpus_queries();
    let mut group = c.benchmark_group("query");
    group.bench_function("fixture_forms", |b| {
        b.iter(|| {
            for g in &queries {
                for s in &g.surfaces {
                    black_box(query(&idx, s, g.gene.as_deref(), &res).unwrap());
                }
            }
        })
    });
    let bytes = encode_segment(&idx);
    group.throughput(Throughput::Bytes(bytes.len() as u64));
    group.bench_function("segment_decode", |b| b.iter(|| black_box(decode_segment(&bytes).unwrap())));
    group.finish();
}

criterion_group!(benches, bench_parse, bench_extract, bench_ingest, bench_query);
criterion_main!(benches);
