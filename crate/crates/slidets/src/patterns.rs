//! Pattern catalog and emptiness-based evaluation of pattern properties.

use std::sync::OnceLock;

use serde::Serialize;

use crate::automata::{Automaton, Letter};
use crate::error::{Error, Result};
use crate::regex::{self, RegexAst};

/// Largest smallest-word length for which the factor property is evaluated.
pub const MAX_FACTOR_OMEGA: usize = 5;

/// A signature pattern: a regular language over `{<,=,>}` with its trims.
#[derive(Debug, Clone)]
pub struct Pattern {
    name: String,
    regex: String,
    ast: RegexAst,
    b: usize,
    a: usize,
    omega: usize,
    language: Automaton,
    properties: OnceLock<PropertyMatrix>,
}

impl Pattern {
    /// Builds a pattern, enforcing `ε ∉ L` and `b + a ≤ ω`.
    pub fn new(name: &str, regex_text: &str, b: usize, a: usize) -> Result<Pattern> {
        let invalid = |reason: String| Error::InvalidPattern { name: name.to_string(), reason };
        let ast = regex::parse(regex_text)?;
        if let Some(l) = ast.letters().into_iter().find(|l| !l.is_base()) {
            return Err(Error::LetterOutsideAlphabet(l.to_string()));
        }
        let language = Automaton::compile(&ast, &Letter::BASE)?;
        if language.accepts_empty_word() {
            return Err(invalid("the language contains the empty word".into()));
        }
        let omega = language.shortest_word_len().ok_or_else(|| invalid("the language is empty".into()))?;
        if b + a > omega {
            return Err(invalid(format!("trims {b}+{a} exceed the smallest word length {omega}")));
        }
        Ok(Pattern {
            name: name.to_string(),
            regex: regex_text.to_string(),
            ast,
            b,
            a,
            omega,
            language,
            properties: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn regex(&self) -> &str {
        &self.regex
    }

    pub fn ast(&self) -> &RegexAst {
        &self.ast
    }

    /// Number of values trimmed at the start of an occurrence.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Number of values trimmed at the end of an occurrence.
    pub fn a(&self) -> usize {
        self.a
    }

    /// Length of the shortest word of the language.
    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn language(&self) -> &Automaton {
        &self.language
    }

    /// Mirror pattern: mirrored language, trims swapped.
    pub fn mirror(&self) -> Pattern {
        let ast = regex::mirror(&self.ast).expect("pattern letters are base letters");
        let text = ast.to_string();
        let mut p = Pattern::new(&format!("mirror({})", self.name), &text, self.a, self.b)
            .expect("mirror of a valid pattern is valid");
        p.ast = ast;
        p
    }

    /// Catalog pattern that is the reverse of this one, if any.
    pub fn reverse(&self) -> Option<&'static Pattern> {
        reverse_of(self)
    }

    /// Full property matrix, computed once.
    pub fn properties(&self) -> &PropertyMatrix {
        self.properties.get_or_init(|| PropertyMatrix::compute(self))
    }
}

struct Entry {
    name: &'static str,
    short: &'static str,
    regex: &'static str,
    b: usize,
    a: usize,
}

const ENTRIES: [Entry; 22] = [
    Entry { name: "inflexion", short: "inflexion", regex: "<(<|=)*>|>(>|=)*<", b: 1, a: 1 },
    Entry { name: "bump_on_decreasing_sequence", short: "bump_on_dec_seq", regex: ">><>>", b: 2, a: 1 },
    Entry { name: "dip_on_increasing_sequence", short: "dip_on_inc_seq", regex: "<<><<", b: 2, a: 1 },
    Entry { name: "decreasing", short: "dec", regex: ">", b: 0, a: 0 },
    Entry { name: "increasing", short: "inc", regex: "<", b: 0, a: 0 },
    Entry { name: "steady", short: "steady", regex: "=", b: 0, a: 0 },
    Entry { name: "decreasing_terrace", short: "dec_terrace", regex: ">=+>", b: 1, a: 1 },
    Entry { name: "increasing_terrace", short: "inc_terrace", regex: "<=+<", b: 1, a: 1 },
    Entry { name: "plain", short: "plain", regex: ">=*<", b: 1, a: 1 },
    Entry { name: "plateau", short: "plateau", regex: "<=*>", b: 1, a: 1 },
    Entry { name: "proper_plain", short: "proper_plain", regex: ">=+<", b: 1, a: 1 },
    Entry { name: "proper_plateau", short: "proper_plateau", regex: "<=+>", b: 1, a: 1 },
    Entry { name: "gorge", short: "gorge", regex: "(>(>|=)*)*><((<|=)*<)*", b: 1, a: 1 },
    Entry { name: "summit", short: "summit", regex: "(<(<|=)*)*<>((>|=)*>)*", b: 1, a: 1 },
    Entry { name: "peak", short: "peak", regex: "<(<|=)*(>|=)*>", b: 1, a: 1 },
    Entry { name: "valley", short: "valley", regex: ">(>|=)*(<|=)*<", b: 1, a: 1 },
    Entry { name: "decreasing_sequence", short: "dec_seq", regex: ">(>|=)*>|>", b: 0, a: 0 },
    Entry { name: "increasing_sequence", short: "inc_seq", regex: "<(<|=)*<|<", b: 0, a: 0 },
    Entry { name: "steady_sequence", short: "steady_seq", regex: "=+", b: 0, a: 0 },
    Entry { name: "strictly_decreasing_sequence", short: "strictly_dec_seq", regex: ">+", b: 0, a: 0 },
    Entry { name: "strictly_increasing_sequence", short: "strictly_inc_seq", regex: "<+", b: 0, a: 0 },
    Entry { name: "zigzag", short: "zigzag", regex: "(<>)+<(>|eps)|(><)+>(<|eps)", b: 1, a: 1 },
];

/// The 22 catalog patterns in their canonical order.
pub fn catalog() -> &'static [Pattern] {
    static CATALOG: OnceLock<Vec<Pattern>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        ENTRIES.iter().map(|e| Pattern::new(e.name, e.regex, e.b, e.a).expect("catalog entries are valid")).collect()
    })
}

fn squash(name: &str) -> String {
    name.chars().filter(|c| *c != '_' && *c != '-').flat_map(char::to_lowercase).collect()
}

/// Looks a catalog pattern up by canonical name, short alias or camel-case name
/// (`increasing_sequence`, `inc_seq` and `IncSeq` all resolve to the same entry).
pub fn lookup(name: &str) -> Result<&'static Pattern> {
    let key = squash(name);
    ENTRIES
        .iter()
        .position(|e| squash(e.name) == key || squash(e.short) == key)
        .map(|k| &catalog()[k])
        .ok_or_else(|| Error::UnknownPattern(name.to_string()))
}

/// Short alias of a catalog pattern name.
pub fn short_name(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|e| e.name == name).map(|e| e.short)
}

/// The catalog pattern whose language is the mirror of `p`'s and whose trims are swapped.
pub fn reverse_of(p: &Pattern) -> Option<&'static Pattern> {
    let mirrored = p.language().mirror().ok()?;
    catalog().iter().find(|q| q.b == p.a && q.a == p.b && *q.language() == mirrored)
}

/// The nine pattern properties plus the reverse pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyMatrix {
    pub convex: bool,
    pub inflexion_free: bool,
    pub one_inflexion: bool,
    pub exclude_out_in: bool,
    pub single_letter: bool,
    /// First letter, in canonical order, for which the letter property holds.
    pub letter: Option<String>,
    /// First letter, in canonical order, for which suffix-unavoidability holds.
    pub suffix_unavoidable: Option<String>,
    pub incompressible: bool,
    /// `None` when the smallest word is longer than [`MAX_FACTOR_OMEGA`].
    pub factor: Option<bool>,
    pub reverse: Option<String>,
}

impl PropertyMatrix {
    pub fn compute(p: &Pattern) -> PropertyMatrix {
        let l = p.language();
        PropertyMatrix {
            convex: convex(l),
            inflexion_free: inflexion_free(l),
            one_inflexion: one_inflexion(l),
            exclude_out_in: exclude_out_in(l),
            single_letter: single_letter(l),
            letter: Letter::BASE.into_iter().find(|&e| letter(l, e)).map(|e| e.to_string()),
            suffix_unavoidable: Letter::BASE.into_iter().find(|&e| suffix_unavoidable(l, e)).map(|e| e.to_string()),
            incompressible: incompressible(l),
            factor: factor(l, p.omega()).ok(),
            reverse: reverse_of(p).map(|q| q.name().to_string()),
        }
    }

    /// The five flags of the catalog table: reversible, inflexion-free,
    /// one-inflexion, exclude-out-in, single-letter.
    pub fn table_flags(&self) -> [bool; 5] {
        [self.reverse.is_some(), self.inflexion_free, self.one_inflexion, self.exclude_out_in, self.single_letter]
    }
}

pub fn check_convex(p: &Pattern) -> bool {
    p.properties().convex
}

pub fn check_inflexion_free(p: &Pattern) -> bool {
    p.properties().inflexion_free
}

pub fn check_one_inflexion(p: &Pattern) -> bool {
    p.properties().one_inflexion
}

pub fn check_exclude_out_in(p: &Pattern) -> bool {
    p.properties().exclude_out_in
}

pub fn check_single_letter(p: &Pattern) -> bool {
    p.properties().single_letter
}

pub fn check_letter(p: &Pattern, e: Letter) -> bool {
    letter(p.language(), e)
}

pub fn check_suffix_unavoidable(p: &Pattern, e: Letter) -> bool {
    suffix_unavoidable(p.language(), e)
}

pub fn check_incompressible(p: &Pattern) -> bool {
    p.properties().incompressible
}

pub fn check_factor(p: &Pattern) -> Result<bool> {
    factor(p.language(), p.omega())
}

/// Building blocks over `{<,=,>}` with the synchronisation letter `s1`.
pub(crate) mod lang {
    use crate::automata::{Automaton, Letter};

    pub fn star() -> Automaton {
        Automaton::sigma_star(&Letter::BASE)
    }

    pub fn plus() -> Automaton {
        Automaton::sigma_plus(&Letter::BASE)
    }

    pub fn s() -> Automaton {
        Automaton::word(&[Letter::S])
    }

    pub fn letter(l: Letter) -> Automaton {
        Automaton::word(&[l])
    }

    pub fn cat(parts: &[&Automaton]) -> Automaton {
        parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.concat(p))
    }

    pub fn all(parts: &[&Automaton]) -> Automaton {
        parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.intersect(p))
    }

    /// `k` successive insertions of the synchronisation letter.
    pub fn shuffled(l: &Automaton, k: usize) -> Automaton {
        (0..k).fold(l.clone(), |acc, _| acc.shuffle(Letter::S))
    }

    /// Words with no non-empty factor in `l`, minus ε.
    pub fn out(l: &Automaton) -> Automaton {
        plus().difference(&cat(&[&star(), l, &star()]))
    }
}

use lang::{all, cat, plus, s, shuffled, star};

/// Every word lying between two factors of a word of `l` is itself in `l`.
pub fn convex(l: &Automaton) -> bool {
    let (st, pl, s) = (star(), plus(), s());
    let not_l = pl.difference(l);
    let l1 = all(&[&shuffled(l, 2), &cat(&[&st, &s, l, &st, l, &s, &st]), &cat(&[&st, &s, &not_l, &s, &st])]);
    if !l1.is_empty() {
        return false;
    }
    let ls = shuffled(l, 1);
    let l2 = all(&[
        &shuffled(l, 4),
        &cat(&[&st, &s, &ls, &s, &pl, &s, &st]),
        &cat(&[&st, &s, &pl, &s, &ls, &s, &st]),
        &cat(&[&st, &s, &shuffled(&not_l, 2), &s, &st]),
    ]);
    l2.is_empty()
}

/// No word holds both a `<` and a `>`.
pub fn inflexion_free(l: &Automaton) -> bool {
    let st = star();
    let (lt, gt) = (lang::letter(Letter::Lt), lang::letter(Letter::Gt));
    let a = l.intersect(&cat(&[&st, &lt, &st, &gt, &st]));
    let b = l.intersect(&cat(&[&st, &gt, &st, &lt, &st]));
    a.union(&b).is_empty()
}

fn one_inflexion_language() -> Automaton {
    let ast = regex::parse("(<|=)*<=*>(>|=)*|(>|=)*>=*<(<|=)*").expect("valid");
    Automaton::compile(&ast, &Letter::BASE).expect("base letters")
}

/// Every word holds exactly one inflexion.
pub fn one_inflexion(l: &Automaton) -> bool {
    l.difference(&one_inflexion_language()).is_empty()
}

/// Every word has length one.
pub fn single_letter(l: &Automaton) -> bool {
    l.difference(&Automaton::any_of(&Letter::BASE)).is_empty()
}

pub fn exclude_out_in(l: &Automaton) -> bool {
    let (st, pl, s) = (star(), plus(), s());
    let out_s = shuffled(&lang::out(l), 1);
    let ls = shuffled(l, 1);
    let l4 = shuffled(l, 4);
    let l1 = all(&[
        &l4,
        &cat(&[&st, &s, &pl, &s, &out_s, &s, &st]),
        &cat(&[&st, &s, &ls, &s, &st, &s, &st]),
        &cat(&[&st, &s, &pl, &s, &pl, &s, &st, &s, &st]),
    ]);
    if !l1.is_empty() {
        return false;
    }
    let l2 = all(&[
        &l4,
        &cat(&[&st, &s, &out_s, &s, &pl, &s, &st]),
        &cat(&[&st, &s, &st, &s, &ls, &s, &st]),
        &cat(&[&st, &s, &st, &s, &pl, &s, &pl, &s, &st]),
    ]);
    l2.is_empty()
}

fn avoiding(e: Letter) -> Automaton {
    let others: Vec<Letter> = Letter::BASE.into_iter().filter(|&x| x != e).collect();
    Automaton::sigma_star(&others).with_alphabet(&Letter::BASE)
}

/// Every word holds `e` and the one-letter word `e` belongs to the language.
pub fn letter(l: &Automaton, e: Letter) -> bool {
    avoiding(e).intersect(l).is_empty() && !lang::letter(e).intersect(l).is_empty()
}

/// Every word holds `e` and every suffix starting with `e` belongs to the language.
pub fn suffix_unavoidable(l: &Automaton, e: Letter) -> bool {
    if !avoiding(e).intersect(l).is_empty() {
        return false;
    }
    let st = star();
    let s = s();
    let l2 = all(&[&shuffled(l, 1), &cat(&[&st, &s, &lang::letter(e), &st]), &cat(&[&st, &s, &st.difference(l)])]);
    l2.is_empty()
}

/// No proper factor of a word belongs to the language.
pub fn incompressible(l: &Automaton) -> bool {
    let (st, pl) = (star(), plus());
    let a = cat(&[&pl, l, &st]).intersect(l);
    let b = cat(&[&st, l, &pl]).intersect(l);
    a.union(&b).is_empty()
}

/// Every factor of length at least `omega` of a word belongs to the language.
pub fn factor(l: &Automaton, omega: usize) -> Result<bool> {
    if omega == 0 || omega > MAX_FACTOR_OMEGA {
        return Err(Error::Unsupported(format!("factor property for smallest word length {omega}")));
    }
    let st = star();
    let s = s();
    let any = Automaton::any_of(&Letter::BASE);
    let sigma_omega = cat(&vec![&any; omega]);
    let x = all(&[
        &shuffled(l, 2),
        &cat(&[&st, &s, &st, &sigma_omega, &st, &s, &st]),
        &cat(&[&st, &s, &st.difference(l), &s, &st]),
    ]);
    Ok(x.is_empty())
}
