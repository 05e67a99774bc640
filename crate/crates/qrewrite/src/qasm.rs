//! OpenQASM 2.0 subset: one or more `qreg`s and the unitary gates of the
//! registry. Classical registers, measurement, barriers and gate definitions
//! are rejected.

use crate::angle::as_pi_fraction;
use crate::circuit::{Circuit, Instruction};
use crate::error::{QasmError, QasmErrorKind};
use crate::gate::GateKind;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, Default)]
pub struct QasmOptions {
    /// Accept `u2`/`u3`; callers enable this when a rule set that
    /// translates them is loaded.
    pub allow_u2_u3: bool,
}

pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with(text, QasmOptions::default())
}

pub fn parse_qasm_with(text: &str, opts: QasmOptions) -> Result<Circuit, QasmError> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0, opts, regs: Vec::new(), width: 0 }.program()
}

/// Writes the circuit as a single register `q`.
pub fn serialize_qasm(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    for ins in &c.instructions {
        out.push_str(ins.gate.name());
        if !ins.angles.is_empty() {
            let args: Vec<String> = ins.angles.iter().map(|&a| format_angle(a)).collect();
            let _ = write!(out, "({})", args.join(","));
        }
        let qs: Vec<String> = ins.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", qs.join(","));
    }
    out
}

/// Rational multiples of π (denominator ≤ 96) print symbolically, anything
/// else as a 17-significant-digit decimal.
pub fn format_angle(a: f64) -> String {
    if let Some((p, q)) = as_pi_fraction(a, 96, 1e-12) {
        return match (p, q) {
            (0, _) => "0".to_string(),
            (1, 1) => "pi".to_string(),
            (-1, 1) => "-pi".to_string(),
            (p, 1) => format!("{p}*pi"),
            (1, q) => format!("pi/{q}"),
            (-1, q) => format!("-pi/{q}"),
            (p, q) => format!("{p}*pi/{q}"),
        };
    }
    format!("{:.16e}", a)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let bump = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            bump(&mut i, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            col += i - start;
            let v = lit.parse::<f64>().map_err(|_| QasmError {
                line: tl,
                col: tc,
                kind: QasmErrorKind::Syntax(format!("bad number `{lit}`")),
            })?;
            out.push(Token { tok: Tok::Num(v), line: tl, col: tc });
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(QasmError {
                    line: tl,
                    col: tc,
                    kind: QasmErrorKind::Syntax("unterminated string".into()),
                });
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
        } else if "[](),;+-*/^{}>".contains(c) {
            bump(&mut i, &mut col, 1);
            out.push(Token { tok: Tok::Sym(c), line: tl, col: tc });
        } else {
            return Err(QasmError {
                line: tl,
                col: tc,
                kind: QasmErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    opts: QasmOptions,
    regs: Vec<(String, usize, usize)>,
    width: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn fail<T>(&self, kind: QasmErrorKind) -> Result<T, QasmError> {
        let (line, col) = self.here();
        Err(QasmError { line, col, kind })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, QasmError> {
        self.fail(QasmErrorKind::Syntax(msg.into()))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.syntax(format!("expected `{c}`")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, QasmError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.syntax("expected identifier"),
        }
    }

    fn uint(&mut self) -> Result<usize, QasmError> {
        match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 0.0 => {
                let v = *v as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => self.syntax("expected non-negative integer"),
        }
    }

    fn program(mut self) -> Result<Circuit, QasmError> {
        match self.next() {
            Some(Tok::Ident(s)) if s == "OPENQASM" => {}
            _ => {
                self.pos = 0;
                return self.syntax("expected `OPENQASM 2.0;` header");
            }
        }
        match self.next() {
            Some(Tok::Num(v)) if (v - 2.0).abs() < 1e-9 => {}
            _ => {
                self.pos -= 1;
                return self.syntax("only OPENQASM 2.0 is supported");
            }
        }
        self.expect_sym(';')?;
        let mut gates: Vec<(usize, Instruction)> = Vec::new();
        while self.peek().is_some() {
            let start = self.pos;
            let word = self.ident()?;
            match word.as_str() {
                "include" => {
                    match self.next() {
                        Some(Tok::Str(_)) => {}
                        _ => {
                            self.pos -= 1;
                            return self.syntax("expected file name string");
                        }
                    }
                    self.expect_sym(';')?;
                }
                "qreg" => {
                    let name = self.ident()?;
                    self.expect_sym('[')?;
                    let size = self.uint()?;
                    self.expect_sym(']')?;
                    self.expect_sym(';')?;
                    if self.regs.iter().any(|r| r.0 == name) {
                        self.pos = start;
                        return self.syntax(format!("register `{name}` declared twice"));
                    }
                    self.regs.push((name, self.width, size));
                    self.width += size;
                }
                "creg" | "measure" | "barrier" | "reset" | "if" => {
                    self.pos = start;
                    return self.fail(QasmErrorKind::NonUnitary(word));
                }
                "gate" | "opaque" => {
                    self.pos = start;
                    return self.syntax("custom gate definitions are unsupported");
                }
                _ => {
                    let ins = self.gate_statement(&word, start)?;
                    gates.push((start, ins));
                }
            }
        }
        let mut c = Circuit::new(self.width);
        for (at, ins) in gates {
            if let Err(e) = c.push(ins) {
                self.pos = at;
                return self.fail(QasmErrorKind::Circuit(e));
            }
        }
        Ok(c)
    }

    fn gate_statement(&mut self, word: &str, start: usize) -> Result<Instruction, QasmError> {
        let gate = match GateKind::from_name(word) {
            Some(g) if word == g.name() || word == "cnot" => g,
            _ => {
                self.pos = start;
                return self.fail(QasmErrorKind::UnknownGate(word.to_string()));
            }
        };
        if matches!(gate, GateKind::U2 | GateKind::U3) && !self.opts.allow_u2_u3 {
            self.pos = start;
            return self.fail(QasmErrorKind::GateNotEnabled(word.to_string()));
        }
        let mut angles = Vec::new();
        if self.eat_sym('(') && !self.eat_sym(')') {
            loop {
                angles.push(self.expr()?);
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        let mut qubits = Vec::new();
        loop {
            qubits.push(self.qarg()?);
            if self.eat_sym(';') {
                break;
            }
            self.expect_sym(',')?;
        }
        Instruction::new(gate, qubits, angles).or_else(|e| {
            self.pos = start;
            self.fail(QasmErrorKind::Circuit(e))
        })
    }

    fn qarg(&mut self) -> Result<usize, QasmError> {
        let at = self.pos;
        let name = self.ident()?;
        let Some(&(_, offset, size)) = self.regs.iter().find(|r| r.0 == name) else {
            self.pos = at;
            return self.syntax(format!("undeclared register `{name}`"));
        };
        if !self.eat_sym('[') {
            return self.syntax("whole-register arguments are unsupported; index the qubit");
        }
        let idx_at = self.pos;
        let idx = self.uint()?;
        self.expect_sym(']')?;
        if idx >= size {
            self.pos = idx_at;
            return self.fail(QasmErrorKind::QubitOutOfRange(format!("{name}[{idx}] (size {size})")));
        }
        Ok(offset + idx)
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v *= self.unary()?;
            } else if self.eat_sym('/') {
                let d = self.unary()?;
                if d == 0.0 {
                    return self.syntax("division by zero");
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        let base = self.primary()?;
        if self.eat_sym('^') {
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<f64, QasmError> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(v),
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                if name == "pi" {
                    return Ok(PI);
                }
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => {
                        self.pos -= 1;
                        return self.syntax(format!("unknown identifier `{name}` in expression"));
                    }
                };
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.syntax("expected expression")
            }
        }
    }
}
