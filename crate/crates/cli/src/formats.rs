//! Text formats: interactions JSON, edge lists and a DIMACS CNF subset.

use std::fmt::Write as _;

use mpsqaoa_core::{GraphSpec, ZHamiltonian, ZInteraction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionsFile {
    pub n: usize,
    #[serde(default)]
    pub constant: f64,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub sites: Vec<usize>,
    pub coeff: f64,
}

impl From<&ZHamiltonian> for InteractionsFile {
    fn from(h: &ZHamiltonian) -> Self {
        Self {
            n: h.n_qubits(),
            constant: h.constant(),
            terms: h.terms().iter().map(|t| TermRecord { sites: t.sites().to_vec(), coeff: t.coeff() }).collect(),
        }
    }
}

impl InteractionsFile {
    pub fn to_hamiltonian(&self) -> Result<ZHamiltonian, CliError> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| ZInteraction::new(&t.sites, t.coeff).map_err(|e| CliError::Input(format!("term {}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        ZHamiltonian::new(self.n, terms, self.constant).map_err(|e| CliError::Input(e.to_string()))
    }
}

pub fn parse_interactions(text: &str) -> Result<ZHamiltonian, CliError> {
    let file: InteractionsFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("interactions JSON: {e}")))?;
    file.to_hamiltonian()
}

pub fn write_interactions(h: &ZHamiltonian) -> String {
    let mut s = serde_json::to_string_pretty(&InteractionsFile::from(h)).expect("plain data serializes");
    s.push('\n');
    s
}

fn line_error(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}: {msg}"))
}

/// Edge list: a header `n <count>` and then one `u v [w]` per line.
/// Blank lines and lines starting with `#` or `c` are skipped.
pub fn parse_edge_list(text: &str) -> Result<GraphSpec, CliError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "n" {
            if n.is_some() {
                return Err(line_error(lineno, "duplicate header"));
            }
            let [_, count] = fields[..] else {
                return Err(line_error(lineno, "header must be `n <count>`"));
            };
            n = Some(count.parse::<usize>().map_err(|_| line_error(lineno, format!("bad vertex count {count:?}")))?);
            continue;
        }
        if n.is_none() {
            return Err(line_error(lineno, "edge before the `n <count>` header"));
        }
        if !(2..=3).contains(&fields.len()) {
            return Err(line_error(lineno, "expected `u v [w]`"));
        }
        let vertex = |s: &str| s.parse::<usize>().map_err(|_| line_error(lineno, format!("bad vertex {s:?}")));
        let (u, v) = (vertex(fields[0])?, vertex(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| line_error(lineno, format!("bad weight {s:?}")))?,
            None => 1.0,
        };
        edges.push((u, v, w));
    }
    let n = n.ok_or_else(|| CliError::Input("missing `n <count>` header".into()))?;
    GraphSpec::new(n, edges).map_err(|e| CliError::Input(e.to_string()))
}

pub fn write_edge_list(g: &GraphSpec, weighted: bool) -> String {
    let mut s = format!("n {}\n", g.n_vertices());
    for &(u, v, w) in g.edges() {
        if weighted {
            writeln!(s, "{u} {v} {w}").unwrap();
        } else {
            writeln!(s, "{u} {v}").unwrap();
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

/// DIMACS `p cnf <vars> <clauses>`; clauses end with `0` and may span
/// lines. `c` lines are comments.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CliError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let ["p", "cnf", vars, count] = fields[..] else {
                return Err(line_error(lineno, "header must be `p cnf <vars> <clauses>`"));
            };
            let parse = |s: &str| s.parse::<usize>().map_err(|_| line_error(lineno, format!("bad count {s:?}")));
            header = Some((parse(vars)?, parse(count)?));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(line_error(lineno, "clause before the `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| line_error(lineno, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(line_error(lineno, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n_vars {
                return Err(line_error(lineno, format!("literal {lit} outside 1..={n_vars}")));
            } else {
                current.push(lit);
            }
        }
    }
    let (n_vars, count) = header.ok_or_else(|| CliError::Input("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(CliError::Input("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(CliError::Input(format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(Cnf { n_vars, clauses })
}
