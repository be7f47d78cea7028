//! Arithmetic for flag values, so grids can be written as `sqrt(10)*pi`.
//!
//! Grammar: sums of products of signed atoms, where an atom is a number
//! literal, `pi`, `sqrt(expr)`, or a parenthesized expression.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Pi,
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < b.len() {
                    let d = b[i] as char;
                    // exponent forms like 1e-3 keep their sign glued on
                    let exp_sign = (d == '+' || d == '-')
                        && i > start
                        && matches!(b[i - 1] as char, 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text = &s[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| format!("bad number literal {text:?}"))?;
                out.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < b.len() && (b[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                match &s[start..i] {
                    "pi" | "PI" => out.push(Tok::Pi),
                    "sqrt" => out.push(Tok::Sqrt),
                    other => return Err(format!("unknown name {other:?}")),
                }
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            Some(got) => Err(format!("expected {t:?}, found {got:?}")),
            None => Err(format!("expected {t:?}, found end of input")),
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    v += self.product()?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    v -= self.product()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.signed()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    v *= self.signed()?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    v /= self.signed()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn signed(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Ok(-self.signed()?)
            }
            Some(Tok::Plus) => {
                self.next();
                self.signed()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(v),
            Some(Tok::Pi) => Ok(std::f64::consts::PI),
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen)?;
                let v = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(v.sqrt())
            }
            Some(Tok::LParen) => {
                let v = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// Evaluates a numeric flag value.
pub fn eval(s: &str) -> Result<f64, String> {
    let toks = lex(s).map_err(|e| format!("cannot parse {s:?}: {e}"))?;
    if toks.is_empty() {
        return Err(format!("cannot parse {s:?}: empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0 };
    let v = p.sum().map_err(|e| format!("cannot parse {s:?}: {e}"))?;
    if p.pos != toks.len() {
        return Err(format!("cannot parse {s:?}: trailing input"));
    }
    Ok(v)
}

/// True when the string is a bare unsigned decimal literal such as
/// `10` or `1.2` (used to treat ratio flags as exact rationals).
pub fn is_plain_decimal(s: &str) -> bool {
    let s = s.trim();
    if s.is_empty() {
        return false;
    }
    let mut dots = 0;
    for c in s.chars() {
        match c {
            '0'..='9' => {}
            '.' => dots += 1,
            _ => return false,
        }
    }
    dots <= 1 && s != "."
}
