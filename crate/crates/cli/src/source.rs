use std::fs;
use std::path::PathBuf;

use abstraction_lab::dsl::{compile, parse, parse_rel_file};
use abstraction_lab::{Catalog, InvariantRelation};
use clap::{ArgGroup, Args};

use crate::CliError;

/// Where the relation comes from. Exactly one of `--catalog`, `--rel`, `--dsl`.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
pub struct Source {
    /// Universe size.
    #[arg(long)]
    pub n: usize,
    /// Built-in relation: BLV, HP, BP, NP, LCP, CP, NewV, E0, TOTAL.
    #[arg(long, group = "source")]
    pub catalog: Option<String>,
    /// A `.rel` file: a DSL condition, or one `a b c d` quadruple per line.
    #[arg(long, group = "source")]
    pub rel: Option<PathBuf>,
    /// A DSL condition given inline.
    #[arg(long, group = "source")]
    pub dsl: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub label: String,
    pub relation: InvariantRelation,
}

fn is_quadruple_list(text: &str) -> bool {
    let mut any = false;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 || parts.iter().any(|p| p.parse::<u8>().is_err()) {
            return false;
        }
        any = true;
    }
    any
}

impl Source {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let n = self.n;
        if let Some(name) = &self.catalog {
            let c: Catalog = name.parse()?;
            return Ok(Resolved { label: c.name().to_string(), relation: c.relation(n)? });
        }
        if let Some(text) = &self.dsl {
            let expr = parse(text).map_err(abstraction_lab::LabError::from)?;
            return Ok(Resolved { label: expr.to_string(), relation: compile(&expr, n)? });
        }
        let path = self.rel.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if is_quadruple_list(&text) {
            let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).map(|l| format!("{l}\n")).collect();
            return Ok(Resolved { label: path.display().to_string(), relation: InvariantRelation::from_canonical_text(n, &body)? });
        }
        let file = parse_rel_file(&text).map_err(abstraction_lab::LabError::from)?;
        let label = file.name.clone().unwrap_or_else(|| file.expr.to_string());
        Ok(Resolved { label, relation: compile(&file.expr, n)? })
    }
}
