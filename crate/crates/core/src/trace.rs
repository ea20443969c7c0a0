//! Per-iteration solve traces shared by the subgradient solver and the
//! convex baseline.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Objective, relative error and step size per iteration, including the
/// initial state, so each column has `iterations + 1` entries. `rel_err`
/// entries are NaN when no ground truth was supplied.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolveTrace {
    pub objective: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub step_sizes: Vec<f64>,
}

impl SolveTrace {
    pub fn with_capacity(cap: usize) -> Self {
        SolveTrace {
            objective: Vec::with_capacity(cap),
            rel_err: Vec::with_capacity(cap),
            step_sizes: Vec::with_capacity(cap),
        }
    }

    pub(crate) fn push(&mut self, objective: f64, rel_err: f64, step: f64) {
        self.objective.push(objective);
        self.rel_err.push(rel_err);
        self.step_sizes.push(step);
    }

    /// Number of iterations performed (recorded states minus the initial one).
    pub fn iterations(&self) -> usize {
        self.objective.len().saturating_sub(1)
    }

    pub fn final_objective(&self) -> Option<f64> {
        self.objective.last().copied()
    }

    pub fn final_rel_err(&self) -> Option<f64> {
        self.rel_err.last().copied()
    }

    /// CSV with header `iter,objective,rel_err,step`, one row per recorded
    /// state. Floats use shortest round-trip formatting, so output is
    /// byte-reproducible.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "iter,objective,rel_err,step")?;
        for (i, ((obj, rel), step)) in self
            .objective
            .iter()
            .zip(&self.rel_err)
            .zip(&self.step_sizes)
            .enumerate()
        {
            writeln!(w, "{i},{obj},{rel},{step}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_and_lengths() {
        let mut t = SolveTrace::default();
        t.push(10.0, f64::NAN, 0.5);
        t.push(5.0, 0.25, 0.5);
        t.push(2.5, 0.125, 0.25);
        assert_eq!(t.iterations(), 2);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iter,objective,rel_err,step");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,10,NaN,0.5");
        assert_eq!(lines[3], "2,2.5,0.125,0.25");
    }
}
