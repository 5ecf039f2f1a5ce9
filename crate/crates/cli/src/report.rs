//! Residual reports: one `key value` pair per line.

use std::fmt;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Floating-point values are written in exponent form with full precision.
    pub fn metric(&mut self, key: &str, value: f64) -> &mut Self {
        self.lines.push((key.to_owned(), format!("{value:.16e}")));
        self
    }

    pub fn text(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Sends the report to `path` if given, otherwise to stderr unless `quiet`.
    pub fn emit(&self, path: Option<&Path>, quiet: bool) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, self.to_string()),
            None if quiet => Ok(()),
            None => std::io::stderr().lock().write_all(self.to_string().as_bytes()),
        }
    }

    /// Parses text produced by `Display`.
    pub fn parse(text: &str) -> Self {
        let lines = text
            .lines()
            .filter_map(|l| l.split_once(' '))
            .map(|(k, v)| (k.to_owned(), v.trim().to_owned()))
            .collect();
        Report { lines }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k} {v}")?;
        }
        Ok(())
    }
}
