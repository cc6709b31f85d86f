use std::fmt::{self, Write as _};

use crate::error::Error;
use crate::filters::apply_filter;
use crate::format::format_g;
use crate::measures::negativity;
use crate::rindler::accelerate;
use crate::states::{one_param_state, DensityMatrix};

use super::parser::{lower, Step};
use super::{PipelineExpr, Span};

#[derive(Clone, Debug)]
pub enum EvalOutput {
    Scalar(f64),
    /// The pipeline ended on a state-producing stage.
    State(DensityMatrix),
    /// The pipeline ended with `dump`.
    Dump(DensityMatrix),
}

/// A runtime failure, tied to the stage that raised it.
#[derive(Debug)]
pub struct EvalError {
    pub span: Span,
    pub stage: String,
    pub source: Error,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage `{}` (bytes {}..{}) failed: {}",
            self.stage, self.span.start, self.span.end, self.source
        )
    }
}

impl std::error::Error for EvalError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

struct Run {
    states: Vec<DensityMatrix>,
    terminal: Option<Step>,
}

fn run(expr: &PipelineExpr) -> Result<Run, EvalError> {
    let steps = lower(expr).map_err(|e| EvalError {
        span: Span::new(e.offset(), e.offset()),
        stage: String::new(),
        source: Error::InvalidConfig(e.to_string()),
    })?;
    let mut states: Vec<DensityMatrix> = Vec::with_capacity(steps.len());
    let mut terminal = None;
    for ((step, span), stage) in steps.into_iter().zip(&expr.stages) {
        let fail = |source| EvalError {
            span,
            stage: stage.name.clone(),
            source,
        };
        // Lowering guarantees a leading `state`, so `current` exists below.
        let current = states.last();
        let next = match &step {
            Step::State(mu) => one_param_state(*mu),
            Step::Accel(part, r) => accelerate(current.expect("state first"), *part, *r).map_err(fail)?,
            Step::Filter(spec) => apply_filter(current.expect("state first"), spec).map_err(fail)?,
            Step::Negativity | Step::Dump => {
                terminal = Some(step);
                break;
            }
        };
        states.push(next);
    }
    Ok(Run { states, terminal })
}

pub fn eval_pipeline(expr: &PipelineExpr) -> Result<EvalOutput, EvalError> {
    let Run { mut states, terminal } = run(expr)?;
    let last = states.pop().expect("a pipeline produces at least one state");
    match terminal {
        None => Ok(EvalOutput::State(last)),
        Some(Step::Dump) => Ok(EvalOutput::Dump(last)),
        Some(_) => {
            let stage = expr.stages.last().expect("non-empty");
            negativity(&last)
                .map(|n| EvalOutput::Scalar(n.value()))
                .map_err(|source| EvalError {
                    span: stage.span,
                    stage: stage.name.clone(),
                    source,
                })
        }
    }
}

/// The state after every state-producing stage, in order.
pub fn eval_states(expr: &PipelineExpr) -> Result<Vec<DensityMatrix>, EvalError> {
    run(expr).map(|r| r.states)
}

/// `dims=AxB`, then the real and imaginary parts, one row per line.
pub fn dump_string(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let mut out = format!("dims={}\n", rho.dims());
    for (label, part) in [("real", 0), ("imag", 1)] {
        let _ = writeln!(out, "{label}:");
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols())
                .map(|j| {
                    let z = m[(i, j)];
                    format_g(if part == 0 { z.re } else { z.im }, 15)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::parse_pipeline;

    fn eval(src: &str) -> Result<EvalOutput, EvalError> {
        eval_pipeline(&parse_pipeline(src).unwrap())
    }

    fn scalar(src: &str) -> f64 {
        match eval(src).unwrap() {
            EvalOutput::Scalar(x) => x,
            other => panic!("expected a scalar, got {other:?}"),
        }
    }

    #[test]
    fn bare_state_negativity() {
        assert!((scalar("state(mu=0) | negativity") - 1.0).abs() < 1e-12);
        assert!((scalar("state(mu=0.5) | negativity") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn accelerated_qubit() {
        let n = scalar("state(mu=0) | accel(part=qubit, r=pi/4) | negativity");
        assert!((n - 0.5).abs() < 1e-12);
    }

    #[test]
    fn states_per_stage() {
        let expr = parse_pipeline("state(mu=0.2) | accel(part=qutrit, r=0.3) | filter(part=qubit, kappa=0.4) | negativity").unwrap();
        let states = eval_states(&expr).unwrap();
        assert_eq!(states.len(), 3);
        assert_eq!(states[0].dims().as_slice(), &[2, 3]);
        assert_eq!(states[1].dims().as_slice(), &[2, 4]);
        assert!(states.iter().all(|s| s.validate().passes()));
    }

    #[test]
    fn dump_layout() {
        let out = match eval("state(mu=0.25) | dump").unwrap() {
            EvalOutput::Dump(rho) => dump_string(&rho),
            other => panic!("{other:?}"),
        };
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "dims=2x3");
        assert_eq!(lines[1], "real:");
        assert_eq!(lines[2], "0.125 0 0 0 0 0.125");
        assert_eq!(lines[8], "imag:");
        assert_eq!(lines.len(), 15);
    }

    #[test]
    fn ends_on_state() {
        assert!(matches!(eval("state(mu=0.1)").unwrap(), EvalOutput::State(_)));
    }
}
