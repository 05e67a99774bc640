//! Angle canonicalization and the linear angle expressions used in rules.

use num_rational::Ratio;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

/// Absolute tolerance for comparing angles modulo 2π.
pub const ANGLE_TOL: f64 = 1e-9;

pub type Rational = Ratio<i64>;

/// Maps an angle into (−π, π].
pub fn canonical(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    // Values a hair above -π wrap to π so both ends agree.
    if t <= -PI + 1e-15 {
        t = PI;
    }
    if t == 0.0 {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    canonical(a - b).abs()
}

pub fn angles_equal(a: f64, b: f64) -> bool {
    angle_distance(a, b) <= ANGLE_TOL
}

/// Finds `p/q` with `q <= max_den` such that `theta ≈ p/q · π` within `tol`.
pub fn as_pi_fraction(theta: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    for q in 1..=max_den {
        let p = (theta / PI * q as f64).round();
        if (theta - p * PI / q as f64).abs() <= tol {
            let r = Rational::new(p as i64, q);
            return Some((*r.numer(), *r.denom()));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad angle expression `{text}`: {reason}")]
pub struct AngleParseError {
    pub text: String,
    pub reason: String,
}

/// `Σ coeff·var + pi_coeff·π + const_term`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AngleExpr {
    pub var_terms: BTreeMap<String, Rational>,
    pub pi_coeff: Rational,
    pub const_term: Rational,
}

impl AngleExpr {
    pub fn ground(value_over_pi: Rational) -> Self {
        AngleExpr {
            pi_coeff: value_over_pi,
            ..Default::default()
        }
    }

    pub fn var(name: &str) -> Self {
        let mut var_terms = BTreeMap::new();
        var_terms.insert(name.to_string(), Rational::from_integer(1));
        AngleExpr {
            var_terms,
            ..Default::default()
        }
    }

    pub fn is_ground(&self) -> bool {
        self.var_terms.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.var_terms.keys().map(|s| s.as_str())
    }

    fn ground_value(&self) -> f64 {
        ratio_f64(self.pi_coeff) * PI + ratio_f64(self.const_term)
    }

    /// Evaluates under `bindings`; `None` when a variable is unbound.
    pub fn eval(&self, bindings: &BTreeMap<String, f64>) -> Option<f64> {
        let mut v = self.ground_value();
        for (name, coeff) in &self.var_terms {
            v += ratio_f64(*coeff) * bindings.get(name)?;
        }
        Some(v)
    }

    /// Unifies this pattern slot against a concrete angle, extending
    /// `bindings`. The slot may hold at most one variable with coefficient ±1.
    pub fn unify(&self, value: f64, bindings: &mut BTreeMap<String, f64>) -> bool {
        match self.var_terms.len() {
            0 => angles_equal(self.ground_value(), value),
            1 => {
                let (name, coeff) = self.var_terms.iter().next().expect("one term");
                let c = ratio_f64(*coeff);
                let solved = canonical((value - self.ground_value()) / c);
                match bindings.get(name) {
                    Some(&bound) => angles_equal(bound, solved),
                    None => {
                        bindings.insert(name.clone(), solved);
                        true
                    }
                }
            }
            _ => false,
        }
    }

    pub fn parse(text: &str) -> Result<AngleExpr, AngleParseError> {
        Parser::new(text).parse()
    }
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (name, c) in &self.var_terms {
            terms.push(scaled(*c, name));
        }
        if *self.pi_coeff.numer() != 0 {
            terms.push(scaled(self.pi_coeff, "pi"));
        }
        if *self.const_term.numer() != 0 || terms.is_empty() {
            terms.push(self.const_term.to_string());
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        f.write_str(&out)
    }
}

fn scaled(c: Rational, atom: &str) -> String {
    let (n, d) = (*c.numer(), *c.denom());
    let head = match n {
        1 => atom.to_string(),
        -1 => format!("-{atom}"),
        _ => format!("{n}*{atom}"),
    };
    if d == 1 {
        head
    } else {
        format!("{head}/{d}")
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> AngleParseError {
        AngleParseError {
            text: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<AngleExpr, AngleParseError> {
        let mut expr = AngleExpr::default();
        let mut sign = Rational::from_integer(1);
        if self.peek().is_none() {
            return Err(self.err("empty expression"));
        }
        loop {
            if self.peek() == Some(b'-') {
                self.pos += 1;
                sign = -sign;
            } else if self.peek() == Some(b'+') {
                self.pos += 1;
            }
            self.term(sign, &mut expr)?;
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::from_integer(1);
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = Rational::from_integer(-1);
                }
                Some(c) => return Err(self.err(format!("unexpected `{}`", c as char))),
            }
        }
        expr.var_terms.retain(|_, c| *c.numer() != 0);
        Ok(expr)
    }

    // term := [number '*'] atom ['/' int] | number ['/' int]
    // atom := 'pi' | ident
    fn term(&mut self, sign: Rational, expr: &mut AngleExpr) -> Result<(), AngleParseError> {
        let mut coeff = sign;
        let mut atom: Option<String> = None;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                coeff *= self.number()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    atom = Some(self.ident()?);
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => atom = Some(self.ident()?),
            _ => return Err(self.err("expected a number, `pi` or a variable")),
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.number()?;
            if *d.numer() == 0 {
                return Err(self.err("division by zero"));
            }
            coeff /= d;
        }
        match atom.as_deref() {
            None => expr.const_term += coeff,
            Some("pi") => expr.pi_coeff += coeff,
            Some(name) => {
                if !name.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
                {
                    return Err(self.err(format!("variable `{name}` must be lowercase")));
                }
                *expr
                    .var_terms
                    .entry(name.to_string())
                    .or_insert(Rational::from_integer(0)) += coeff;
            }
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String, AngleParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    /// Integer or terminating decimal, read exactly.
    fn number(&mut self) -> Result<Rational, AngleParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.')
        {
            self.pos += 1;
        }
        let lit = &self.text[start..self.pos];
        let (int_part, frac_part) = match lit.split_once('.') {
            Some((a, b)) => (a, b),
            None => (lit, ""),
        };
        if lit.is_empty() || frac_part.contains('.') || frac_part.len() > 15 {
            return Err(self.err(format!("bad number `{lit}`")));
        }
        let digits = format!("{int_part}{frac_part}");
        let n: i64 = digits.parse().map_err(|_| self.err(format!("bad number `{lit}`")))?;
        Ok(Rational::new(n, 10i64.pow(frac_part.len() as u32)))
    }
}
