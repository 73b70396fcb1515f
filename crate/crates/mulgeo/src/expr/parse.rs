//! Hand-rolled recursive-descent parsers for the multiplicative grammar
//! and the classical log-form grammar. Errors carry the byte offset of
//! the failure and what was expected there.

use crate::error::{Error, Result};
use crate::expr::bridge::BridgeExpr;
use crate::expr::{BinOp, MExpr, UnaryFn};
use crate::num::MNum;

/// Parses an expression in the multiplicative grammar.
pub fn parse_mexpr(src: &str) -> Result<MExpr> {
    let mut c = Cursor::new(src);
    let e = mexpr(&mut c)?;
    c.skip_ws();
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    Ok(e)
}

/// Parses an expression in the classical log-form grammar
/// (parameter `u`, operators `+ - * / ^`, functions
/// `sin cos tan cot sqrt abs`, constants `pi` and `e`, unary minus).
pub fn parse_classical(src: &str) -> Result<BridgeExpr> {
    let mut c = Cursor::new(src);
    let e = cexpr(&mut c)?;
    c.skip_ws();
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    Ok(e)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src, pos: 0 }
    }

    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes().get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.bytes().get(self.pos + ahead).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    /// Skips whitespace, then consumes `tok` if present.
    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.eat_exact(tok)
    }

    /// Consumes `tok` at the cursor without skipping whitespace.
    fn eat_exact(&mut self, tok: &str) -> bool {
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str, expected: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn err(&self, expected: &str) -> Error {
        self.err_at(self.pos, expected)
    }

    fn err_at(&self, offset: usize, expected: &str) -> Error {
        let rest = &self.src[offset.min(self.src.len())..];
        let found = if rest.is_empty() {
            "end of input".to_string()
        } else {
            let cut = rest
                .char_indices()
                .take(12)
                .last()
                .map(|(i, ch)| i + ch.len_utf8())
                .unwrap_or(rest.len());
            format!("{:?}", &rest[..cut])
        };
        Error::Parse { offset, expected: expected.to_string(), found }
    }

    /// Scans `[a-zA-Z_][a-zA-Z0-9_]*` at the cursor.
    fn scan_ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.pos += 1,
            _ => return None,
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        Some(&self.src[start..self.pos])
    }

    /// Scans an unsigned decimal at the cursor: digits, an optional
    /// fractional part (the dot must be followed by a digit, so `2.*3`
    /// lexes as `2 .* 3`), and an optional exponent.
    fn scan_unsigned_real(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if !matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            return None;
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') && matches!(self.peek_at(1), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let digit_after = |b: Option<u8>| matches!(b, Some(d) if d.is_ascii_digit());
            if digit_after(self.peek_at(1)) {
                self.pos += 1;
            } else if matches!(self.peek_at(1), Some(b'+' | b'-')) && digit_after(self.peek_at(2))
            {
                self.pos += 2;
            }
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        Some(&self.src[start..self.pos])
    }

    /// Scans an optionally signed real at the cursor.
    fn scan_signed_real(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        if self.scan_unsigned_real().is_none() {
            self.pos = start;
            return None;
        }
        Some(&self.src[start..self.pos])
    }

    /// Skips whitespace, then parses a signed real number.
    fn parse_signed_real(&mut self, expected: &str) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let text = self.scan_signed_real().ok_or_else(|| self.err(expected))?;
        let v: f64 = text.parse().map_err(|_| self.err_at(start, expected))?;
        if !v.is_finite() {
            return Err(self.err_at(start, "finite real number"));
        }
        Ok(v)
    }
}

// ---------------------------------------------------------------------
// multiplicative grammar

fn mexpr(c: &mut Cursor) -> Result<MExpr> {
    let mut lhs = mterm(c)?;
    loop {
        if c.eat("+*") {
            let rhs = mterm(c)?;
            lhs = MExpr::Binary(BinOp::Madd, Box::new(lhs), Box::new(rhs));
        } else if c.eat("-*") {
            let rhs = mterm(c)?;
            lhs = MExpr::Binary(BinOp::Msub, Box::new(lhs), Box::new(rhs));
        } else {
            return Ok(lhs);
        }
    }
}

fn mterm(c: &mut Cursor) -> Result<MExpr> {
    let mut lhs = mfactor(c)?;
    loop {
        if c.eat(".*") {
            let rhs = mfactor(c)?;
            lhs = MExpr::Binary(BinOp::Mmul, Box::new(lhs), Box::new(rhs));
        } else if c.eat("/*") {
            let rhs = mfactor(c)?;
            lhs = MExpr::Binary(BinOp::Mdiv, Box::new(lhs), Box::new(rhs));
        } else {
            return Ok(lhs);
        }
    }
}

fn mfactor(c: &mut Cursor) -> Result<MExpr> {
    let base = mbase(c)?;
    if c.eat("^*") {
        let k = c.parse_signed_real("real exponent after ^*")?;
        return Ok(MExpr::Pow(Box::new(base), k));
    }
    Ok(base)
}

const MBASE_EXPECTED: &str =
    "'(', a function (msin mcos mtan mcot msqrt mneg mabs), a literal, or 's'";

fn mbase(c: &mut Cursor) -> Result<MExpr> {
    if c.eat("(") {
        let e = mexpr(c)?;
        c.expect(")", "')'")?;
        return Ok(e);
    }
    c.skip_ws();
    let start = c.pos;
    if let Some(id) = c.scan_ident() {
        // the literal `e^<real>` is a single lexeme
        if id == "e" && c.eat_exact("^") {
            let u = c.parse_signed_real("real exponent after e^")?;
            return Ok(MExpr::Literal(MNum::from_log(u)));
        }
        if id == "s" {
            return Ok(MExpr::Param);
        }
        let f = match id {
            "msin" => UnaryFn::Msin,
            "mcos" => UnaryFn::Mcos,
            "mtan" => UnaryFn::Mtan,
            "mcot" => UnaryFn::Mcot,
            "msqrt" => UnaryFn::Msqrt,
            "mneg" => UnaryFn::Mneg,
            "mabs" => UnaryFn::Mabs,
            _ => return Err(c.err_at(start, MBASE_EXPECTED)),
        };
        c.expect("(", "'(' after function name")?;
        let inner = mexpr(c)?;
        c.expect(")", "')'")?;
        return Ok(MExpr::Unary(f, Box::new(inner)));
    }
    if let Some(text) = c.scan_unsigned_real() {
        let v: f64 = text
            .parse()
            .map_err(|_| c.err_at(start, "positive decimal literal"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(c.err_at(start, "positive decimal literal"));
        }
        return Ok(MExpr::Literal(MNum::from_log(v.ln())));
    }
    Err(c.err(MBASE_EXPECTED))
}

// ---------------------------------------------------------------------
// classical log-form grammar

fn cexpr(c: &mut Cursor) -> Result<BridgeExpr> {
    let mut lhs = cterm(c)?;
    loop {
        if c.eat("+") {
            let rhs = cterm(c)?;
            lhs = BridgeExpr::Add(Box::new(lhs), Box::new(rhs));
        } else if c.eat("-") {
            let rhs = cterm(c)?;
            lhs = BridgeExpr::Sub(Box::new(lhs), Box::new(rhs));
        } else {
            return Ok(lhs);
        }
    }
}

fn cterm(c: &mut Cursor) -> Result<BridgeExpr> {
    let mut lhs = cunary(c)?;
    loop {
        if c.eat("*") {
            let rhs = cunary(c)?;
            lhs = BridgeExpr::Mul(Box::new(lhs), Box::new(rhs));
        } else if c.eat("/") {
            let rhs = cunary(c)?;
            lhs = BridgeExpr::Div(Box::new(lhs), Box::new(rhs));
        } else {
            return Ok(lhs);
        }
    }
}

fn cunary(c: &mut Cursor) -> Result<BridgeExpr> {
    if c.eat("-") {
        return Ok(BridgeExpr::Neg(Box::new(cunary(c)?)));
    }
    cpow(c)
}

fn cpow(c: &mut Cursor) -> Result<BridgeExpr> {
    let base = catom(c)?;
    if c.eat("^") {
        let k = c.parse_signed_real("real exponent after ^")?;
        return Ok(BridgeExpr::Pow(Box::new(base), k));
    }
    Ok(base)
}

const CATOM_EXPECTED: &str =
    "'(', a function (sin cos tan cot sqrt abs), a number, 'u', 'pi', or 'e'";

fn catom(c: &mut Cursor) -> Result<BridgeExpr> {
    if c.eat("(") {
        let e = cexpr(c)?;
        c.expect(")", "')'")?;
        return Ok(e);
    }
    c.skip_ws();
    let start = c.pos;
    if let Some(id) = c.scan_ident() {
        match id {
            "u" => return Ok(BridgeExpr::Var),
            "pi" => return Ok(BridgeExpr::Const(std::f64::consts::PI)),
            "e" => return Ok(BridgeExpr::Const(std::f64::consts::E)),
            _ => {}
        }
        let wrap: fn(Box<BridgeExpr>) -> BridgeExpr = match id {
            "sin" => BridgeExpr::Sin,
            "cos" => BridgeExpr::Cos,
            "tan" => BridgeExpr::Tan,
            "cot" => BridgeExpr::Cot,
            "sqrt" => BridgeExpr::Sqrt,
            "abs" => BridgeExpr::Abs,
            _ => return Err(c.err_at(start, CATOM_EXPECTED)),
        };
        c.expect("(", "'(' after function name")?;
        let inner = cexpr(c)?;
        c.expect(")", "')'")?;
        return Ok(wrap(Box::new(inner)));
    }
    if let Some(text) = c.scan_unsigned_real() {
        let v: f64 = text.parse().map_err(|_| c.err_at(start, "number"))?;
        if !v.is_finite() {
            return Err(c.err_at(start, "finite number"));
        }
        return Ok(BridgeExpr::Const(v));
    }
    Err(c.err(CATOM_EXPECTED))
}
