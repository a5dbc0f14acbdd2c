use crate::config::RunConfig;
use crate::fail::CliError;
use serde::Serialize;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Meta {
    pub tool: String,
    pub command: String,
    pub config_sha256: String,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub relative_tolerance: f64,
    pub absolute_floor: f64,
    pub max_subdivisions: usize,
    pub term_cutoff_ratio: f64,
    pub max_matsubara_index: usize,
}

impl Meta {
    pub fn new(cfg: &RunConfig, extra_inputs: &[&Path]) -> Self {
        let mut inputs = cfg.input_files();
        inputs.extend_from_slice(extra_inputs);
        let n = &cfg.numerics;
        Meta {
            tool: format!("lifshitz {VERSION}"),
            command: cfg.command.clone(),
            config_sha256: cfg.hash(&inputs),
            tolerances: Tolerances {
                relative_tolerance: n.quadrature.relative_tolerance,
                absolute_floor: n.quadrature.absolute_floor,
                max_subdivisions: n.quadrature.max_subdivisions,
                term_cutoff_ratio: n.summation.term_cutoff_ratio,
                max_matsubara_index: n.summation.max_matsubara_index,
            },
            generated_unix: (!cfg.deterministic)
                .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)),
            threads: (!cfg.deterministic).then(rayon::current_num_threads),
        }
    }

    /// `#`-prefixed header lines for CSV output.
    pub fn comment_header(&self) -> String {
        let t = &self.tolerances;
        let mut s = format!(
            "# {}\n# command: {}\n# config-sha256: {}\n# tolerances: relative_tolerance={:e} absolute_floor={:e} \
             max_subdivisions={} term_cutoff_ratio={:e} max_matsubara_index={}\n",
            self.tool,
            self.command,
            self.config_sha256,
            t.relative_tolerance,
            t.absolute_floor,
            t.max_subdivisions,
            t.term_cutoff_ratio,
            t.max_matsubara_index
        );
        if let Some(g) = self.generated_unix {
            s.push_str(&format!("# generated-unix: {g}\n"));
        }
        if let Some(n) = self.threads {
            s.push_str(&format!("# threads: {n}\n"));
        }
        s
    }
}

/// CSV body behind the comment header.
pub fn csv(meta: &Meta, extra_comments: &[String], body: &str) -> String {
    let mut s = meta.comment_header();
    for c in extra_comments {
        s.push_str(&format!("# {c}\n"));
    }
    s.push_str(body);
    s
}

/// `{"meta": …, "data": …}`
pub fn json<T: Serialize>(meta: &Meta, data: &T) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        meta: &'a Meta,
        data: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { meta, data }).expect("output is serialisable");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
