use std::fmt;

use num_traits::{One, Signed};

use super::{Expr, Rational, Symbols, TermKey};

/// An [`Expr`] paired with coordinate names for printing.
pub struct Displayed<'a> {
    expr: &'a Expr,
    symbols: Option<&'a Symbols>,
}

impl<'a> Displayed<'a> {
    pub(super) fn new(expr: &'a Expr, symbols: &'a Symbols) -> Self {
        Displayed {
            expr,
            symbols: Some(symbols),
        }
    }
}

fn coord_name(symbols: Option<&Symbols>, i: usize) -> String {
    match symbols {
        Some(s) if i < s.len() => s.name(i).to_string(),
        _ => format!("z{}", i + 1),
    }
}

fn write_linear(
    f: &mut fmt::Formatter<'_>,
    lin: &[(usize, Rational)],
    symbols: Option<&Symbols>,
) -> fmt::Result {
    for (n, (i, w)) in lin.iter().enumerate() {
        let name = coord_name(symbols, *i);
        let mag = w.abs();
        match (n, w.is_negative()) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag}*{name}")?;
        }
    }
    Ok(())
}

fn write_factors(
    f: &mut fmt::Formatter<'_>,
    key: &TermKey,
    symbols: Option<&Symbols>,
) -> fmt::Result {
    let mut first = true;
    let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        Ok(())
    };
    match key.t {
        0 => {}
        1 => {
            sep(f)?;
            write!(f, "t")?;
        }
        k => {
            sep(f)?;
            write!(f, "t^{k}")?;
        }
    }
    for (i, p) in &key.mono {
        sep(f)?;
        let name = coord_name(symbols, *i);
        if *p == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{p}")?;
        }
    }
    if !key.lin.is_empty() {
        sep(f)?;
        write!(f, "exp(")?;
        write_linear(f, &key.lin, symbols)?;
        write!(f, ")")?;
    }
    Ok(())
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, symbols: Option<&Symbols>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    for (n, (key, c)) in e.terms.iter().rev().enumerate() {
        let mag = c.abs();
        match (n, c.is_negative()) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if key.is_one() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write_factors(f, key, symbols)?;
        }
    }
    Ok(())
}

impl fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.symbols)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, None)
    }
}
