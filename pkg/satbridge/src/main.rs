//! Incremental SAT bridge: line protocol over stdin/stdout.
//!
//! Commands:
//!   a <lit>* 0            add a clause (persists for the session)
//!   s <ms> <lit>* 0       solve under assumptions with a timeout in ms
//!   q                     quit
//!
//! Solve replies: "UNSAT", "UNKNOWN" (timeout), or "SAT" followed by a
//! "v <lit>* 0" line giving the value of every allocated variable.

use std::io::{self, BufRead, BufWriter, Write};

fn main() {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut solver: cadical::Solver = cadical::Solver::new();
    let mut max_var: i32 = 0;

    for line in stdin.lock().lines() {
        let line = line.expect("stdin read failed");
        let mut it = line.split_ascii_whitespace();
        match it.next() {
            Some("a") => {
                let lits: Vec<i32> = it
                    .map(|t| t.parse::<i32>().expect("bad literal"))
                    .take_while(|&l| l != 0)
                    .collect();
                for &l in &lits {
                    max_var = max_var.max(l.abs());
                }
                solver.add_clause(lits);
            }
            Some("s") => {
                let ms: u64 = it.next().expect("missing timeout").parse().expect("bad timeout");
                let assumptions: Vec<i32> = it
                    .map(|t| t.parse::<i32>().expect("bad literal"))
                    .take_while(|&l| l != 0)
                    .collect();
                for &l in &assumptions {
                    max_var = max_var.max(l.abs());
                }
                solver.set_callbacks(Some(cadical::Timeout::new(ms as f32 / 1000.0)));
                match solver.solve_with(assumptions.into_iter()) {
                    Some(true) => {
                        writeln!(out, "SAT").unwrap();
                        write!(out, "v").unwrap();
                        for v in 1..=max_var {
                            let val = solver.value(v).unwrap_or(false);
                            write!(out, " {}", if val { v } else { -v }).unwrap();
                        }
                        writeln!(out, " 0").unwrap();
                    }
                    Some(false) => writeln!(out, "UNSAT").unwrap(),
                    None => writeln!(out, "UNKNOWN").unwrap(),
                }
                out.flush().unwrap();
            }
            Some("q") => break,
            Some(other) => panic!("unknown command {other:?}"),
            None => {}
        }
    }
}
