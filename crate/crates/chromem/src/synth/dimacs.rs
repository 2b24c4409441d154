//! DIMACS CNF export and solution import for external SAT solvers.

use super::{CnfInstance, SolveResult};
use crate::Error;

/// Standard `p cnf` format with one comment line per annotated variable.
pub fn to_dimacs(cnf: &CnfInstance) -> String {
    let mut out = String::new();
    for (var, tag) in &cnf.annotations {
        out.push_str(&format!("c var {var} = {tag}\n"));
    }
    out.push_str(&format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len()));
    for clause in &cnf.clauses {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

/// Parse a solver output consisting of an `s SATISFIABLE` or
/// `s UNSATISFIABLE` status line and, for satisfiable instances, `v ` lines
/// of signed literals terminated by 0.
pub fn parse_dimacs_solution(text: &str, num_vars: usize) -> Result<SolveResult, Error> {
    let mut status: Option<bool> = None;
    let mut model = vec![false; num_vars];
    let mut saw_literals = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                other => {
                    return Err(Error::MalformedDocument(format!(
                        "unknown solver status `{other}`"
                    )))
                }
            };
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| {
                    Error::MalformedDocument(format!("bad literal `{tok}` in solution"))
                })?;
                if lit == 0 {
                    continue;
                }
                saw_literals = true;
                let var = lit.unsigned_abs() as usize;
                if var > num_vars {
                    return Err(Error::MalformedDocument(format!(
                        "literal {lit} out of range for {num_vars} variables"
                    )));
                }
                model[var - 1] = lit > 0;
            }
        }
    }
    match status {
        Some(true) if saw_literals => Ok(SolveResult::Sat(model)),
        Some(true) => Err(Error::MalformedDocument(
            "satisfiable status without `v ` lines".into(),
        )),
        Some(false) => Ok(SolveResult::Unsat),
        None => Err(Error::MalformedDocument("no `s` status line found".into())),
    }
}
