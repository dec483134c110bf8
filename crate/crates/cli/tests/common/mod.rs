//! Temporary index directories and a runner for the `litvar` binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use litvar_core::test_support::fixtures;

pub struct Workspace {
    pub dir: tempfile::TempDir,
    pub config: PathBuf,
    pub index_dir: PathBuf,
}

pub fn workspace() -> Result<Workspace, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let index_dir = dir.path().join("index");
    let config = dir.path().join("litvar.conf");
    let text = format!(
        "gene_dictionary = {}\ntranscripts = {}\nchains = {}\nallowed_taxa = 9606\ntarget_assembly = toy\nindex_dir = {}\n",
        fixtures::path("genes.tsv").display(),
        fixtures::path("transcripts.tsv").display(),
        fixtures::path("chains.tsv").display(),
        index_dir.display()
    );
    std::fs::write(&config, text).map_err(|e| e.to_string())?;
    Ok(Workspace {
        dir,
        config,
        index_dir,
    })
}

pub fn litvar(config: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_litvar"))
        .arg("--config")
        .arg(config)
        .args(args)
        .env_remove("LITVAR_INDEX_DIR")
        .env("RUST_LOG", "error")
        .output()
        .expect("run litvar")
}
