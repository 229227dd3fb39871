use std::path::Path;

use hisgen::io::{read_corpus, read_tudataset};
use hisgen::metrics::{compare_corpora, MetricConfig, MmdReport};
use hisgen::{Error, Graph, Result};
use serde::{Deserialize, Serialize};

/// Reads an edge-list corpus directory, or a TUDataset directory when no
/// edge-list files are present.
pub fn load_corpus(dir: &Path) -> Result<Vec<Graph>> {
    if !dir.is_dir() {
        return Err(Error::InvalidInput(format!("{} is not a directory", dir.display())));
    }
    let has_tudataset = std::fs::read_dir(dir)
        .map_err(|e| Error::Io { path: dir.into(), source: e })?
        .filter_map(|e| e.ok())
        .any(|e| e.file_name().to_string_lossy().ends_with("_graph_indicator.txt"));
    if has_tudataset {
        return read_tudataset(dir);
    }
    read_corpus(dir).map(|(graphs, _)| graphs)
}

/// An [`MmdReport`] together with the corpora it compares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub reference: String,
    pub generated: String,
    #[serde(flatten)]
    pub report: MmdReport,
}

impl EvalReport {
    pub fn compute(reference: &Path, generated: &Path, config: &MetricConfig) -> Result<Self> {
        let a = load_corpus(reference)?;
        let b = load_corpus(generated)?;
        Ok(EvalReport {
            reference: reference.display().to_string(),
            generated: generated.display().to_string(),
            report: compare_corpora(&a, &b, config)?,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("reference,generated,");
        out.push_str(MmdReport::CSV_HEADER);
        out.push('\n');
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record([&self.reference, &self.generated]).expect("in-memory write");
        let quoted = String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 paths");
        out.push_str(quoted.trim_end());
        out.push(',');
        out.push_str(&self.report.csv_row());
        out.push('\n');
        out
    }
}
