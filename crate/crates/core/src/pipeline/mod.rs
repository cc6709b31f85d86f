//! A tiny stage language for composing the simulation steps, e.g.
//!
//! ```text
//! state(mu=0.25) | accel(part=qubit, r=pi/4) | filter(part=qutrit, Q=0.5, mode=postselect) | negativity
//! ```
//!
//! Grammar:
//!
//! ```text
//! pipeline := stage ('|' stage)*
//! stage    := IDENT ('(' (arg (',' arg)*)? ')')?
//! arg      := IDENT '=' (NUMBER | IDENT | 'pi' ('/' ('2' | '4'))?)
//! ```

mod eval;
mod parser;

use std::fmt;

pub use eval::{dump_string, eval_pipeline, eval_states, EvalError, EvalOutput};
pub use parser::{parse_pipeline, PipelineError};

/// Half-open byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    fn to(self, other: Span) -> Span {
        Span::new(self.start, other.end)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    Ident(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest string that parses back exactly.
            Value::Number(x) => write!(f, "{x}"),
            Value::Ident(s) => f.write_str(s),
        }
    }
}

/// `name=value`. Spans do not take part in equality.
#[derive(Clone, Debug)]
pub struct Arg {
    pub name: String,
    pub value: Value,
    pub name_span: Span,
    pub value_span: Span,
}

impl PartialEq for Arg {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.value == other.value
    }
}

/// One stage. Spans do not take part in equality.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub args: Vec<Arg>,
    pub span: Span,
}

impl PartialEq for Stage {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.args == other.args
    }
}

impl Stage {
    pub fn arg(&self, name: &str) -> Option<&Arg> {
        self.args.iter().find(|a| a.name == name)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", arg.name, arg.value)?;
        }
        f.write_str(")")
    }
}

/// A parsed and checked pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineExpr {
    pub stages: Vec<Stage>,
}

/// Canonical form; parsing it yields an equal expression.
impl fmt::Display for PipelineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, stage) in self.stages.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{stage}")?;
        }
        Ok(())
    }
}
