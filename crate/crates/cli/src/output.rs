use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use serde_json::{json, Value};

use crate::{Format, GlobalArgs};

/// Global settings plus the effective argument list, echoed into every output.
pub struct Context {
    pub seed: u64,
    format: Option<Format>,
    output: Option<PathBuf>,
    timestamp: bool,
    argv: Vec<String>,
}

impl Context {
    pub fn new(g: &GlobalArgs, argv: &[String]) -> Self {
        // The config file has already been spliced into argv, so drop the
        // path itself: the echo alone must reproduce the run.
        let mut args = Vec::new();
        let mut it = argv.iter().skip(1);
        while let Some(a) = it.next() {
            if a == "--config" {
                it.next();
            } else if !a.starts_with("--config=") {
                args.push(a.clone());
            }
        }
        Context {
            seed: g.seed,
            format: g.format,
            output: g.output.clone(),
            timestamp: g.timestamp,
            argv: args,
        }
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn invocation(&self) -> Value {
        let mut v = json!({ "args": self.argv, "seed": self.seed });
        if self.timestamp {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            v["generated_unix"] = json!(now);
        }
        v
    }

    /// `# invocation: …` line heading CSV outputs.
    pub fn csv_header(&self) -> String {
        format!("# invocation: {}\n", self.invocation())
    }

    /// Merges the invocation into a JSON object and pretty-prints it.
    pub fn json(&self, mut body: Value) -> String {
        if let Value::Object(m) = &mut body {
            m.insert("invocation".into(), self.invocation());
        }
        let mut s = serde_json::to_string_pretty(&body).expect("serializable");
        s.push('\n');
        s
    }

    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
