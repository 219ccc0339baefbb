//! Textual regular expressions over the signature alphabet.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! union   := diff ('|' diff)*
//! diff    := inter ('\' inter)*          left associative
//! inter   := concat ('&' concat)*
//! concat  := postfix postfix*
//! postfix := atom ('*' | '+' | '?' | '^' letter)*
//! atom    := letter | 'eps' | '{}' | '(' union ')'
//! letter  := '<' | '=' | '>' | 's' digits | lowercase char
//! ```
//!
//! `eps` is the empty word, `{}` the empty language and `x^s1` inserts one `s1`
//! anywhere in the words of `x`. Whitespace is ignored.

use std::fmt;

use crate::automata::Letter;
use crate::error::{Error, Result};

/// Syntax tree of a regular expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexAst {
    Empty,
    Epsilon,
    Letter(Letter),
    Concat(Vec<RegexAst>),
    Union(Vec<RegexAst>),
    Intersect(Vec<RegexAst>),
    Difference(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
    Shuffle(Box<RegexAst>, Letter),
}

impl RegexAst {
    /// Letters occurring in the expression, sorted and deduplicated.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_letters(&self, out: &mut Vec<Letter>) {
        match self {
            RegexAst::Empty | RegexAst::Epsilon => {}
            RegexAst::Letter(l) => out.push(*l),
            RegexAst::Concat(xs) | RegexAst::Union(xs) | RegexAst::Intersect(xs) => {
                xs.iter().for_each(|x| x.collect_letters(out))
            }
            RegexAst::Difference(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => x.collect_letters(out),
            RegexAst::Shuffle(x, s) => {
                x.collect_letters(out);
                out.push(*s);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RegexAst::Union(_) => 0,
            RegexAst::Difference(..) => 1,
            RegexAst::Intersect(_) => 2,
            RegexAst::Concat(_) => 3,
            RegexAst::Star(_) | RegexAst::Plus(_) | RegexAst::Optional(_) | RegexAst::Shuffle(..) => 4,
            RegexAst::Empty | RegexAst::Epsilon | RegexAst::Letter(_) => 5,
        }
    }

    fn render(&self, min: u8) -> String {
        let body = match self {
            RegexAst::Empty => "{}".to_string(),
            RegexAst::Epsilon => "eps".to_string(),
            RegexAst::Letter(l) => l.to_string(),
            RegexAst::Union(xs) => xs.iter().map(|x| x.render(1)).collect::<Vec<_>>().join("|"),
            RegexAst::Difference(a, b) => format!("{}\\{}", a.render(1), b.render(2)),
            RegexAst::Intersect(xs) => xs.iter().map(|x| x.render(3)).collect::<Vec<_>>().join("&"),
            RegexAst::Concat(xs) => {
                let mut s = String::new();
                for x in xs {
                    let part = x.render(4);
                    let clash = s.ends_with(|c: char| c.is_ascii_alphanumeric())
                        && part.starts_with(|c: char| c.is_ascii_alphanumeric());
                    if clash {
                        s.push(' ');
                    }
                    s.push_str(&part);
                }
                s
            }
            RegexAst::Star(x) => format!("{}*", x.render(4)),
            RegexAst::Plus(x) => format!("{}+", x.render(4)),
            RegexAst::Optional(x) => format!("{}?", x.render(4)),
            RegexAst::Shuffle(x, s) => format!("{}^{}", x.render(4), s),
        };
        if self.precedence() < min {
            format!("({body})")
        } else {
            body
        }
    }
}

impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

/// Parses the textual grammar described in the module documentation.
pub fn parse(text: &str) -> Result<RegexAst> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(syntax(p.pos, "empty pattern"));
    }
    let ast = p.union()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        let msg =
            if p.src[p.pos] == b')' { "unbalanced `)`".to_string() } else { format!("unexpected `{}`", p.peek_char()) };
        return Err(syntax(p.pos, &msg));
    }
    Ok(ast)
}

/// Mirror expression: words reversed and `<`, `>` swapped.
pub fn mirror(ast: &RegexAst) -> Result<RegexAst> {
    Ok(match ast {
        RegexAst::Empty => RegexAst::Empty,
        RegexAst::Epsilon => RegexAst::Epsilon,
        RegexAst::Letter(l) => RegexAst::Letter(l.flip().ok_or_else(|| Error::MirrorUndefined(l.to_string()))?),
        RegexAst::Concat(xs) => RegexAst::Concat(xs.iter().rev().map(mirror).collect::<Result<_>>()?),
        RegexAst::Union(xs) => RegexAst::Union(xs.iter().map(mirror).collect::<Result<_>>()?),
        RegexAst::Intersect(xs) => RegexAst::Intersect(xs.iter().map(mirror).collect::<Result<_>>()?),
        RegexAst::Difference(a, b) => RegexAst::Difference(Box::new(mirror(a)?), Box::new(mirror(b)?)),
        RegexAst::Star(x) => RegexAst::Star(Box::new(mirror(x)?)),
        RegexAst::Plus(x) => RegexAst::Plus(Box::new(mirror(x)?)),
        RegexAst::Optional(x) => RegexAst::Optional(Box::new(mirror(x)?)),
        RegexAst::Shuffle(_, s) => return Err(Error::MirrorUndefined(s.to_string())),
    })
}

fn syntax(offset: usize, message: &str) -> Error {
    Error::Syntax { offset, message: message.to_string() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..]).ok().and_then(|s| s.chars().next()).unwrap_or('?')
    }

    fn union(&mut self) -> Result<RegexAst> {
        let mut items = vec![self.difference()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            items.push(self.difference()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RegexAst::Union(items) })
    }

    fn difference(&mut self) -> Result<RegexAst> {
        let mut left = self.intersect()?;
        while self.peek() == Some(b'\\') {
            self.pos += 1;
            let right = self.intersect()?;
            left = RegexAst::Difference(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn intersect(&mut self) -> Result<RegexAst> {
        let mut items = vec![self.concat()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            items.push(self.concat()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RegexAst::Intersect(items) })
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(b'<' | b'=' | b'>' | b'(' | b'{' | b'a'..=b'z'))
    }

    fn concat(&mut self) -> Result<RegexAst> {
        let mut items = Vec::new();
        while self.starts_atom() {
            items.push(self.postfix()?);
        }
        if items.is_empty() {
            let pos = self.pos;
            return Err(match self.peek() {
                None => syntax(pos, "expected an expression before end of pattern"),
                Some(b')') => syntax(pos, "expected an expression before `)`"),
                Some(b'|' | b'&' | b'\\' | b'*' | b'+' | b'?' | b'^') => {
                    syntax(pos, &format!("operator `{}` is missing an operand", self.peek_char()))
                }
                Some(_) => syntax(pos, &format!("unknown letter `{}`", self.peek_char())),
            });
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RegexAst::Concat(items) })
    }

    fn postfix(&mut self) -> Result<RegexAst> {
        let mut x = self.atom()?;
        loop {
            match self.peek() {
                Some(b'*') => x = RegexAst::Star(Box::new(x)),
                Some(b'+') => x = RegexAst::Plus(Box::new(x)),
                Some(b'?') => x = RegexAst::Optional(Box::new(x)),
                Some(b'^') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    match self.letter()? {
                        Some(s) => x = RegexAst::Shuffle(Box::new(x), s),
                        None => return Err(syntax(at, "expected a letter after `^`")),
                    }
                    continue;
                }
                _ => return Ok(x),
            }
            self.pos += 1;
        }
    }

    /// Reads a letter token at the current position, if any.
    fn letter(&mut self) -> Result<Option<Letter>> {
        let Some(c) = self.src.get(self.pos).copied() else { return Ok(None) };
        let l = match c {
            b'<' => Letter::Lt,
            b'=' => Letter::Eq,
            b'>' => Letter::Gt,
            b's' if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                let start = self.pos;
                let mut end = self.pos + 1;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let tok = std::str::from_utf8(&self.src[start..end]).expect("ascii");
                let l = Letter::from_token(tok).ok_or_else(|| syntax(start, &format!("invalid letter `{tok}`")))?;
                self.pos = end;
                return Ok(Some(l));
            }
            b'a'..=b'z' => Letter::Sym(c as char),
            _ => return Ok(None),
        };
        self.pos += 1;
        Ok(Some(l))
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                if self.peek() == Some(b')') {
                    return Err(syntax(self.pos, "empty parentheses"));
                }
                let inner = self.union()?;
                if self.peek() != Some(b')') {
                    return Err(syntax(start, "unbalanced `(`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'{') => {
                self.pos += 1;
                if self.peek() != Some(b'}') {
                    return Err(syntax(start, "expected `{}`"));
                }
                self.pos += 1;
                Ok(RegexAst::Empty)
            }
            _ if self.src[self.pos..].starts_with(b"eps") => {
                self.pos += 3;
                Ok(RegexAst::Epsilon)
            }
            _ => match self.letter()? {
                Some(l) => Ok(RegexAst::Letter(l)),
                None => Err(syntax(start, &format!("unknown letter `{}`", self.peek_char()))),
            },
        }
    }
}
