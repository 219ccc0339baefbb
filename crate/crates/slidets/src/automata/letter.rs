use std::fmt;

/// A letter of an automaton alphabet.
///
/// The derived order is the canonical letter order: `<`, `=`, `>`, then the
/// synchronisation letters `s1`, `s2`, ... and finally generic symbols. Canonical
/// state numbering visits arcs in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Lt,
    Eq,
    Gt,
    /// Synchronisation letter `s<k>`.
    Sync(u16),
    /// Generic lowercase symbol, used for algebra experiments outside signatures.
    Sym(char),
}

impl Letter {
    /// The base signature alphabet `{<, =, >}`.
    pub const BASE: [Letter; 3] = [Letter::Lt, Letter::Eq, Letter::Gt];

    /// The synchronisation letter used by property and type-language formulas.
    pub const S: Letter = Letter::Sync(1);

    /// Comparison letter of two consecutive values.
    pub fn compare(a: i64, b: i64) -> Letter {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Letter::Lt,
            std::cmp::Ordering::Equal => Letter::Eq,
            std::cmp::Ordering::Greater => Letter::Gt,
        }
    }

    /// Swaps `<` and `>`; `None` for letters outside the base alphabet.
    pub fn flip(self) -> Option<Letter> {
        match self {
            Letter::Lt => Some(Letter::Gt),
            Letter::Eq => Some(Letter::Eq),
            Letter::Gt => Some(Letter::Lt),
            _ => None,
        }
    }

    pub fn is_base(self) -> bool {
        matches!(self, Letter::Lt | Letter::Eq | Letter::Gt)
    }

    /// Parses a whole token such as `<`, `s2` or `a`.
    pub fn from_token(tok: &str) -> Option<Letter> {
        match tok {
            "<" => Some(Letter::Lt),
            "=" => Some(Letter::Eq),
            ">" => Some(Letter::Gt),
            _ => {
                let mut chars = tok.chars();
                let first = chars.next()?;
                let rest = chars.as_str();
                if first == 's' && !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    rest.parse::<u16>().ok().filter(|k| *k > 0).map(Letter::Sync)
                } else if rest.is_empty() && first.is_ascii_lowercase() {
                    Some(Letter::Sym(first))
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Lt => f.write_str("<"),
            Letter::Eq => f.write_str("="),
            Letter::Gt => f.write_str(">"),
            Letter::Sync(k) => write!(f, "s{k}"),
            Letter::Sym(c) => write!(f, "{c}"),
        }
    }
}

/// Renders a word by concatenating its letters.
pub fn format_word(word: &[Letter]) -> String {
    word.iter().map(|l| l.to_string()).collect()
}

/// Parses a word over the base alphabet, e.g. `"<=>"`.
pub fn parse_signature_word(text: &str) -> Option<Vec<Letter>> {
    text.chars()
        .map(|c| match c {
            '<' => Some(Letter::Lt),
            '=' => Some(Letter::Eq),
            '>' => Some(Letter::Gt),
            _ => None,
        })
        .collect()
}
