use num_bigint::BigInt;
use num_traits::Zero;

use super::{Expr, ExprError, Rational, Symbols};

/// Parses `src` against the coordinate names in `symbols`.
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | atom ('^' uint)*
/// atom   := rational | name | 't' | 'exp' '(' expr ')' | '(' expr ')'
/// ```
///
/// The argument of `exp` must reduce to a rational-linear form in the
/// coordinates with no constant part.
pub fn parse_with(src: &str, symbols: &Symbols) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        symbols,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    symbols: &'a Symbols,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let mut base = self.atom()?;
        while self.eat(b'^') {
            self.skip_ws();
            let n = self.uint()?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent too large"))?;
            base = base.pow(n);
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<BigInt, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let save = self.pos;
                if self.eat(b'/') {
                    self.skip_ws();
                    if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        let den = self.uint()?;
                        if den.is_zero() {
                            return Err(self.error("zero denominator"));
                        }
                        return Ok(Expr::constant(Rational::new(num, den)));
                    }
                    self.pos = save;
                    return Err(self.error("expected a denominator after `/`"));
                }
                Ok(Expr::constant(Rational::from_integer(num)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                if name == "exp" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let arg_start = self.pos;
                    let arg = self.expr()?;
                    let arg_end = self.pos;
                    if !self.eat(b')') {
                        return Err(self.error("expected `)` closing exp"));
                    }
                    let text = String::from_utf8_lossy(&self.src[arg_start..arg_end])
                        .trim()
                        .to_string();
                    return exp_of(&arg).ok_or(ExprError::NonLinearExponent(text));
                }
                if name == "t" {
                    return Ok(Expr::time());
                }
                match self.symbols.index(name) {
                    Some(i) => Ok(Expr::coord(i)),
                    None => Err(ExprError::UnknownSymbol(name.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn exp_of(arg: &Expr) -> Option<Expr> {
    let mut weights = Vec::new();
    for (key, c) in arg.terms() {
        let linear = key.t_power() == 0 && key.exponent().is_empty() && key.monomial().len() == 1;
        if !linear || key.monomial()[0].1 != 1 {
            return None;
        }
        weights.push((key.monomial()[0].0, c.clone()));
    }
    Some(Expr::exp_linear(&weights))
}
