//! Pretty-printer and parser for factored functions.
//!
//! Grammar of the emitted text (and of what [`parse_rf`] accepts):
//!
//! ```text
//! sum     := ['-'] product (('+' | '-') product)*
//! product := power (('·' | '*' | '/') power)*
//! power   := atom ['^' exp]
//! exp     := ['-'] int | '(' ['-'] int ['/' int] ')'
//! atom    := int | 'z_' int | 'q' | 'Z' | '(' sum ')'
//! ```
//!
//! `z_N` is `exp(2 pi i / N)`, `q` the residue field size, `Z = q^-s`.
//! A parenthesized sum must be either a sum of constants with a common
//! `q`-power or an affine expression `a + bZ`, which is read as `a(1 + (b/a)Z)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};

use super::cyclo::Cyclo;
use super::rf::FactoredRF;
use super::scalar::{QPower, Scalar};
use crate::error::{bail, Result};

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_cyclo_sum(c: &Cyclo) -> String {
    let n = c.order();
    let mut out = String::new();
    for (i, (k, coef)) in c.terms().into_iter().enumerate() {
        let mono = match k {
            0 => String::new(),
            1 => format!("z_{n}"),
            _ => format!("z_{n}^{k}"),
        };
        let term = if mono.is_empty() {
            format_rational(&coef)
        } else if coef.is_one() {
            mono
        } else if (-&coef).is_one() {
            format!("-{mono}")
        } else {
            format!("{}·{mono}", format_rational(&coef))
        };
        if i == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn format_qpower(r: QPower) -> String {
    let r = r.0;
    if r.is_integer() {
        match r.to_integer() {
            1 => "q".to_string(),
            k => format!("q^{k}"),
        }
    } else {
        format!("q^({}/{})", r.numer(), r.denom())
    }
}

fn is_sum(c: &Cyclo) -> bool {
    c.terms().len() > 1
}

pub fn format_scalar(s: &Scalar) -> String {
    let c = s.cyclo();
    if s.qexp().is_zero() {
        return format_cyclo_sum(c);
    }
    let qs = format_qpower(s.qexp());
    if c.is_one() {
        qs
    } else if c.as_rational().is_some_and(|r| (-r).is_one()) {
        format!("-{qs}")
    } else if is_sum(c) {
        format!("({})·{qs}", format_cyclo_sum(c))
    } else {
        format!("{}·{qs}", format_cyclo_sum(c))
    }
}

/// Scalar text that can stand as a factor of a product.
fn format_scalar_operand(s: &Scalar) -> String {
    if s.qexp().is_zero() && is_sum(s.cyclo()) {
        format!("({})", format_cyclo_sum(s.cyclo()))
    } else {
        format_scalar(s)
    }
}

fn format_linear(c: &Scalar, e: i64) -> String {
    let body = if c.is_one() {
        "(1 - Z)".to_string()
    } else if c.neg().is_one() {
        "(1 + Z)".to_string()
    } else {
        let text = format_scalar_operand(c);
        if text.starts_with('-') {
            format!("(1 + {}·Z)", format_scalar_operand(&c.neg()))
        } else {
            format!("(1 - {text}·Z)")
        }
    };
    if e == 1 {
        body
    } else {
        format!("{body}^{e}")
    }
}

fn format_zpow(k: i64) -> String {
    if k == 1 {
        "Z".to_string()
    } else {
        format!("Z^{k}")
    }
}

pub fn format_rf(f: &FactoredRF) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let unit = f.unit();
    let negative = unit.neg().is_one();
    if !unit.is_one() && !negative {
        num.push(format_scalar_operand(unit));
    }
    if f.zpow() > 0 {
        num.push(format_zpow(f.zpow()));
    } else if f.zpow() < 0 {
        den.push(format_zpow(-f.zpow()));
    }
    for (c, &e) in f.factors() {
        if e > 0 {
            num.push(format_linear(c, e));
        } else {
            den.push(format_linear(c, -e));
        }
    }
    let mut out = if num.is_empty() { "1".to_string() } else { num.join("·") };
    if negative {
        out.insert(0, '-');
    }
    match den.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&den[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&den.join("·"));
            out.push(')');
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Zeta(u64),
    Q,
    Z,
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => {}
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '·' | '*' => out.push(Tok::Times),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            'q' => out.push(Tok::Q),
            'Z' => out.push(Tok::Z),
            'z' => {
                if chars.get(i + 1) != Some(&'_') {
                    bail!(Parse, "exact-arith", "expected z_N at offset {i}");
                }
                let start = i + 2;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[start..j].iter().collect();
                let n: u64 = match digits.parse() {
                    Ok(n) if n > 0 => n,
                    _ => bail!(Parse, "exact-arith", "bad root-of-unity order at offset {i}"),
                };
                out.push(Tok::Zeta(n));
                i = j;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                out.push(Tok::Num(digits.parse().expect("ascii digits")));
                i = j;
                continue;
            }
            c => bail!(Parse, "exact-arith", "unexpected character {c:?} at offset {i}"),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    q: u64,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref u) if *u == t => Ok(()),
            other => bail!(Parse, "exact-arith", "expected {t:?}, found {other:?}"),
        }
    }

    fn sum(&mut self) -> Result<FactoredRF> {
        let mut terms = Vec::new();
        let mut sign = 1;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let t = self.product()?;
            terms.push(if sign < 0 { negate(&t) } else { t });
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        if terms.len() == 1 {
            return Ok(terms.pop().unwrap());
        }
        self.combine(terms)
    }

    fn combine(&self, terms: Vec<FactoredRF>) -> Result<FactoredRF> {
        let mut by_power: BTreeMap<i64, Scalar> = BTreeMap::new();
        for t in terms {
            if !t.is_monomial() {
                bail!(Parse, "exact-arith", "sums may only contain monomials, found {t}");
            }
            let slot = by_power.entry(t.zpow()).or_insert_with(|| Scalar::int(self.q, 0));
            *slot = match slot.add(t.unit()) {
                Some(s) => s,
                None => bail!(Parse, "exact-arith", "cannot add terms with different q-powers"),
            };
        }
        by_power.retain(|_, s| !s.is_zero());
        let keys: Vec<i64> = by_power.keys().copied().collect();
        match keys.as_slice() {
            [] => bail!(Parse, "exact-arith", "sum is zero"),
            [k] => Ok(FactoredRF::monomial(by_power[k].clone(), *k)),
            [0, 1] => {
                let a = &by_power[&0];
                let b = &by_power[&1];
                let c = b.div(a)?.neg();
                Ok(FactoredRF::constant(a.clone()).mul(&FactoredRF::linear(c, 1)))
            }
            _ => bail!(Parse, "exact-arith", "only affine sums a + bZ are supported"),
        }
    }

    fn product(&mut self) -> Result<FactoredRF> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Times) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(n)) => {
                let v = n.to_i64().ok_or_else(|| {
                    crate::Error::new(crate::ErrorKind::Parse, "exact-arith", "exponent too large")
                })?;
                Ok(if neg { -v } else { v })
            }
            other => bail!(Parse, "exact-arith", "expected integer exponent, found {other:?}"),
        }
    }

    fn power(&mut self) -> Result<FactoredRF> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let num = self.int()?;
            let den = if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                self.int()?
            } else {
                1
            };
            self.expect(Tok::RParen)?;
            if den == 0 {
                bail!(Parse, "exact-arith", "zero denominator in exponent");
            }
            Ratio::new(num, den)
        } else {
            Ratio::from_integer(self.int()?)
        };
        if exp.is_integer() {
            return Ok(base.pow(exp.to_integer()));
        }
        if base.is_monomial() && base.zpow() == 0 && base.unit().cyclo().is_one() {
            return Ok(FactoredRF::constant(Scalar::qpow(self.q, QPower(base.unit().qexp().0 * exp))));
        }
        bail!(Parse, "exact-arith", "fractional exponent on something other than a q-power")
    }

    fn atom(&mut self) -> Result<FactoredRF> {
        let q = self.q;
        match self.next() {
            Some(Tok::Num(n)) => Ok(FactoredRF::constant(Scalar::from_cyclo(
                q,
                Cyclo::from_rational(BigRational::from_integer(n)),
            ))),
            Some(Tok::Zeta(n)) => Ok(FactoredRF::constant(Scalar::root(q, 1, n))),
            Some(Tok::Q) => Ok(FactoredRF::constant(Scalar::qpow(q, QPower::int(1)))),
            Some(Tok::Z) => Ok(FactoredRF::monomial(Scalar::one(q), 1)),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => bail!(Parse, "exact-arith", "unexpected token {other:?}"),
        }
    }
}

fn negate(f: &FactoredRF) -> FactoredRF {
    f.mul(&FactoredRF::constant(Scalar::int(f.q(), -1)))
}

/// Parse the printed form of a factored function over residue field size `q`.
pub fn parse_rf(text: &str, q: u64) -> Result<FactoredRF> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        bail!(Parse, "exact-arith", "empty expression");
    }
    let mut p = Parser { toks, pos: 0, q };
    let f = p.sum()?;
    if p.pos != p.toks.len() {
        bail!(Parse, "exact-arith", "trailing input at token {}", p.pos);
    }
    Ok(f)
}

/// Parse a scalar (a factored function that is a constant).
pub fn parse_scalar(text: &str, q: u64) -> Result<Scalar> {
    let f = parse_rf(text, q)?;
    if !f.is_monomial() || f.zpow() != 0 {
        bail!(Parse, "exact-arith", "expected a constant, found {f}");
    }
    Ok(f.unit().clone())
}
