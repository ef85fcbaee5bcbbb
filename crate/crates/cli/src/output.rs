use std::fs;
use std::path::Path;

use anyhow::Context;
use serde_json::{Map, Value};
use tracpf_core::report::Table;

use crate::args::Format;

/// Named tables emitted together.
#[derive(Debug, Default)]
pub struct Report {
    sections: Vec<(&'static str, Table)>,
}

impl Report {
    pub fn section(mut self, name: &'static str, table: Table) -> Self {
        self.sections.push((name, table));
        self
    }

    /// Text prints each section under its name. CSV separates sections by a
    /// blank line. JSON is one object keyed by section name.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self
                .sections
                .iter()
                .map(|(name, t)| format!("[{name}]\n{}", t.to_text()))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Csv => self
                .sections
                .iter()
                .map(|(_, t)| t.to_csv())
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Json => {
                let obj: Map<String, Value> = self
                    .sections
                    .iter()
                    .map(|(name, t)| ((*name).to_owned(), t.to_json_value()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(obj))
                    .expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tracpf_core::report::Cell;

    fn report() -> Report {
        let mut a = Table::new(vec!["alpha"]);
        a.push(vec![Cell::Alpha(0.5)]);
        let mut b = Table::new(vec!["node", "v"]);
        b.push(vec![Cell::text("n1"), Cell::Float(600.0)]);
        Report::default()
            .section("summary", a)
            .section("potentials", b)
    }

    #[test]
    fn sections_in_every_format() {
        let r = report();
        assert_eq!(r.render(Format::Csv), "alpha\n0.5000\n\nnode,v\nn1,600\n");
        assert!(r
            .render(Format::Table)
            .starts_with("[summary]\n alpha\n0.5000\n\n[potentials]"));
        let doc: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(doc["potentials"][0]["v"], 600.0);
        let keys: Vec<_> = doc.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["summary", "potentials"]);
    }
}
