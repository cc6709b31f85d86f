use std::f64::consts::PI;
use std::fmt;

use crate::filters::{FilterMode, FilterSpec, PairPolicy};
use crate::rindler::RindlerParameter;
use crate::states::{FamilyParameter, Party};

use super::{Arg, PipelineExpr, Span, Stage, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    Semantic {
        span: Span,
        message: String,
    },
}

impl PipelineError {
    /// Byte offset the error points at.
    pub fn offset(&self) -> usize {
        match self {
            PipelineError::Syntax { offset, .. } => *offset,
            PipelineError::Semantic { span, .. } => span.start,
        }
    }

    fn semantic(span: Span, message: impl Into<String>) -> Self {
        PipelineError::Semantic {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Syntax {
                offset,
                expected,
                found,
            } => write!(
                f,
                "syntax error at byte {offset}: expected {}, found {found}",
                expected.join(" or ")
            ),
            PipelineError::Semantic { span, message } => {
                write!(f, "{message} (bytes {}..{})", span.start, span.end)
            }
        }
    }
}

impl std::error::Error for PipelineError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Equals,
    Pipe,
    Slash,
    /// A lexeme that is not part of the language.
    Bad(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(_) => "number".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Bad(s) => format!("`{}`", s.escape_debug()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
    text: String,
}

fn lex(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'=' => Some(Tok::Equals),
            b'|' => Some(Tok::Pipe),
            b'/' => Some(Tok::Slash),
            _ => None,
        };
        let tok = if let Some(tok) = single {
            i += 1;
            tok
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() || c == b'.' || c == b'-' {
            i = scan_number(bytes, i);
            match src[start..i].parse::<f64>() {
                Ok(x) if x.is_finite() => Tok::Number(x),
                _ => Tok::Bad(src[start..i].to_string()),
            }
        } else {
            // One whole (possibly multi-byte) character.
            let ch = src[start..].chars().next().expect("non-empty remainder");
            i += ch.len_utf8();
            Tok::Bad(ch.to_string())
        };
        tokens.push(Token {
            tok,
            span: Span::new(start, i),
            text: src[start..i].to_string(),
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
        text: String::new(),
    });
    tokens
}

// -? digits* (. digits*)? ([eE] [+-]? digits+)?
fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    if bytes[i] == b'-' {
        i += 1;
    }
    i = digits(i);
    if i < bytes.len() && bytes[i] == b'.' {
        i = digits(i + 1);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let end = digits(j);
        if end > j {
            i = end;
        }
    }
    i
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> PipelineError {
        let t = self.peek();
        PipelineError::Syntax {
            offset: t.span.start,
            expected: expected.to_vec(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<Token, PipelineError> {
        if self.peek().tok == want {
            Ok(self.bump())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn ident(&mut self, label: &'static str) -> Result<(String, Span), PipelineError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                let span = self.bump().span;
                Ok((name, span))
            }
            _ => Err(self.error(&[label])),
        }
    }

    fn pipeline(&mut self) -> Result<Vec<Stage>, PipelineError> {
        let mut stages = vec![self.stage()?];
        loop {
            match self.peek().tok {
                Tok::Pipe => {
                    self.bump();
                    stages.push(self.stage()?);
                }
                Tok::Eof => return Ok(stages),
                _ => return Err(self.error(&["`|`", "end of input"])),
            }
        }
    }

    fn stage(&mut self) -> Result<Stage, PipelineError> {
        let (name, name_span) = self.ident("stage name")?;
        let mut args = Vec::new();
        let mut span = name_span;
        if self.peek().tok == Tok::LParen {
            self.bump();
            if self.peek().tok != Tok::RParen {
                args.push(self.arg()?);
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    args.push(self.arg()?);
                }
            }
            if self.peek().tok != Tok::RParen {
                let expected: &[&'static str] = if args.is_empty() {
                    &["argument name", "`)`"]
                } else {
                    &["`,`", "`)`"]
                };
                return Err(self.error(expected));
            }
            span = span.to(self.bump().span);
        }
        Ok(Stage { name, args, span })
    }

    fn arg(&mut self) -> Result<Arg, PipelineError> {
        let (name, name_span) = self.ident("argument name")?;
        self.expect(Tok::Equals, "`=`")?;
        let (value, value_span) = self.value()?;
        Ok(Arg {
            name,
            value,
            name_span,
            value_span,
        })
    }

    fn value(&mut self) -> Result<(Value, Span), PipelineError> {
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Number(x) => {
                self.bump();
                Ok((Value::Number(x), tok.span))
            }
            Tok::Ident(ref name) if name == "pi" => {
                self.bump();
                if self.peek().tok != Tok::Slash {
                    return Ok((Value::Number(PI), tok.span));
                }
                self.bump();
                let divisor = self.peek().clone();
                match divisor.tok {
                    Tok::Number(d) if d == 2.0 || d == 4.0 => {
                        self.bump();
                        Ok((Value::Number(PI / d), tok.span.to(divisor.span)))
                    }
                    Tok::Number(_) => Err(PipelineError::semantic(
                        tok.span.to(divisor.span),
                        format!("unsupported constant `pi/{}`; only pi, pi/2 and pi/4 are allowed", divisor.text),
                    )),
                    _ => Err(self.error(&["`2`", "`4`"])),
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok((Value::Ident(name), tok.span))
            }
            _ => Err(self.error(&["number", "identifier"])),
        }
    }
}

/// A checked stage, ready for evaluation.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Step {
    State(FamilyParameter),
    Accel(Party, RindlerParameter),
    Filter(FilterSpec),
    Negativity,
    Dump,
}

const STAGES: &str = "state, accel, filter, negativity, dump";

struct ArgReader<'a> {
    stage: &'a Stage,
    allowed: &'static [&'static str],
}

impl<'a> ArgReader<'a> {
    fn new(stage: &'a Stage, allowed: &'static [&'static str]) -> Result<Self, PipelineError> {
        for (i, arg) in stage.args.iter().enumerate() {
            if !allowed.contains(&arg.name.as_str()) {
                let expected = if allowed.is_empty() {
                    "no arguments".to_string()
                } else {
                    allowed.join(", ")
                };
                return Err(PipelineError::semantic(
                    arg.name_span,
                    format!("unknown argument `{}` for `{}` (expected {expected})", arg.name, stage.name),
                ));
            }
            if stage.args[..i].iter().any(|a| a.name == arg.name) {
                return Err(PipelineError::semantic(
                    arg.name_span,
                    format!("duplicate argument `{}`", arg.name),
                ));
            }
        }
        Ok(Self { stage, allowed })
    }

    fn required(&self, name: &'static str) -> Result<&'a Arg, PipelineError> {
        debug_assert!(self.allowed.contains(&name));
        self.stage.arg(name).ok_or_else(|| {
            PipelineError::semantic(
                self.stage.span,
                format!("`{}` needs argument `{name}`", self.stage.name),
            )
        })
    }

    fn number(&self, name: &'static str) -> Result<(f64, Span), PipelineError> {
        let arg = self.required(name)?;
        match arg.value {
            Value::Number(x) => Ok((x, arg.value_span)),
            Value::Ident(ref s) => Err(PipelineError::semantic(
                arg.value_span,
                format!("`{name}` must be a number, found `{s}`"),
            )),
        }
    }

    fn word(&self, arg: &Arg) -> Result<String, PipelineError> {
        match &arg.value {
            Value::Ident(s) => Ok(s.clone()),
            Value::Number(x) => Err(PipelineError::semantic(
                arg.value_span,
                format!("`{}` must be a name, found the number {x}", arg.name),
            )),
        }
    }

    fn choice<T: std::str::FromStr>(
        &self,
        name: &'static str,
        options: &'static str,
        default: Option<T>,
    ) -> Result<T, PipelineError> {
        let arg = match (self.stage.arg(name), default) {
            (Some(arg), _) => arg,
            (None, Some(d)) => return Ok(d),
            (None, None) => self.required(name)?,
        };
        let word = self.word(arg)?;
        word.parse().map_err(|_| {
            PipelineError::semantic(
                arg.value_span,
                format!("`{name}` must be one of {options}, found `{word}`"),
            )
        })
    }
}

fn in_range<T>(
    value: f64,
    span: Span,
    build: impl FnOnce(f64) -> crate::Result<T>,
) -> Result<T, PipelineError> {
    build(value).map_err(|e| PipelineError::semantic(span, e.to_string()))
}

fn lower_stage(stage: &Stage) -> Result<Step, PipelineError> {
    match stage.name.as_str() {
        "state" => {
            let args = ArgReader::new(stage, &["mu"])?;
            let (mu, span) = args.number("mu")?;
            Ok(Step::State(in_range(mu, span, FamilyParameter::new)?))
        }
        "accel" => {
            let args = ArgReader::new(stage, &["part", "r"])?;
            let part = args.choice::<Party>("part", "qubit, qutrit", None)?;
            let (r, span) = args.number("r")?;
            Ok(Step::Accel(part, in_range(r, span, RindlerParameter::new)?))
        }
        "filter" => {
            let args = ArgReader::new(stage, &["part", "kappa", "Q", "mode", "pair"])?;
            let part = args.choice::<Party>("part", "qubit, qutrit", None)?;
            let foreign = match part {
                Party::Qubit => ["Q", "pair"],
                Party::Qutrit => ["kappa", "kappa"],
            };
            for name in foreign {
                if let Some(arg) = stage.arg(name) {
                    return Err(PipelineError::semantic(
                        arg.name_span,
                        format!("`{name}` does not apply to a {part} filter"),
                    ));
                }
            }
            let spec = match part {
                Party::Qubit => {
                    let mode = args.choice("mode", "postselect", Some(FilterMode::Postselect))?;
                    if mode != FilterMode::Postselect {
                        let span = stage.arg("mode").map_or(stage.span, |a| a.value_span);
                        return Err(PipelineError::semantic(
                            span,
                            "the qubit filter only supports mode=postselect",
                        ));
                    }
                    let (kappa, span) = args.number("kappa")?;
                    in_range(kappa, span, FilterSpec::qubit)?
                }
                Party::Qutrit => {
                    let mode = args.choice::<FilterMode>("mode", "postselect, channel", None)?;
                    let pair = args.choice("pair", "discard, keep", Some(PairPolicy::Discard))?;
                    let (q, span) = args.number("Q")?;
                    in_range(q, span, |q| FilterSpec::qutrit(q, mode, pair))?
                }
            };
            Ok(Step::Filter(spec))
        }
        "negativity" => {
            ArgReader::new(stage, &[])?;
            Ok(Step::Negativity)
        }
        "dump" => {
            ArgReader::new(stage, &[])?;
            Ok(Step::Dump)
        }
        other => Err(PipelineError::semantic(
            stage.span,
            format!("unknown stage `{other}` (expected one of {STAGES})"),
        )),
    }
}

/// Checks ordering rules and argument values, producing executable steps.
pub(crate) fn lower(expr: &PipelineExpr) -> Result<Vec<(Step, Span)>, PipelineError> {
    let mut steps = Vec::with_capacity(expr.stages.len());
    let mut accelerated: Vec<Party> = Vec::new();
    let last = expr.stages.len() - 1;
    for (i, stage) in expr.stages.iter().enumerate() {
        let step = lower_stage(stage)?;
        match &step {
            Step::State(_) if i != 0 => {
                return Err(PipelineError::semantic(
                    stage.span,
                    "ordering violation: `state` may only appear as the first stage",
                ))
            }
            _ if i == 0 && !matches!(step, Step::State(_)) => {
                return Err(PipelineError::semantic(
                    stage.span,
                    "ordering violation: a pipeline must start with `state`",
                ))
            }
            Step::Accel(part, _) => {
                if accelerated.contains(part) {
                    return Err(PipelineError::semantic(
                        stage.span,
                        format!("ordering violation: the {part} is already accelerated"),
                    ));
                }
                accelerated.push(*part);
            }
            Step::Negativity | Step::Dump if i != last => {
                return Err(PipelineError::semantic(
                    stage.span,
                    format!("ordering violation: `{}` must be the last stage", stage.name),
                ))
            }
            _ => {}
        }
        steps.push((step, stage.span));
    }
    Ok(steps)
}

/// Parses and checks a pipeline.
pub fn parse_pipeline(text: &str) -> Result<PipelineExpr, PipelineError> {
    let mut parser = Parser {
        tokens: lex(text),
        pos: 0,
    };
    let expr = PipelineExpr {
        stages: parser.pipeline()?,
    };
    lower(&expr)?;
    Ok(expr)
}
