//! Exact finite-automata algebra over small alphabets.
//!
//! Every public operation returns a normalized automaton: deterministic, trimmed
//! (no dead state), minimal, with a single source numbered 0 and states numbered in
//! breadth-first order with arcs visited in letter order. Two normalized automata
//! accept the same language iff they compare equal.

mod dot;
mod letter;
mod nfa;

use std::collections::{BTreeSet, VecDeque};

pub use letter::{format_word, parse_signature_word, Letter};
use nfa::Nfa;

use crate::error::{Error, Result};
use crate::regex::RegexAst;

/// Default length cap for word enumeration.
pub const DEFAULT_MAX_ENUM_LEN: usize = 8;
/// Hard upper bound on any requested enumeration length.
pub const HARD_MAX_ENUM_LEN: usize = 24;
/// Hard upper bound on the number of enumerated words.
pub const MAX_ENUM_WORDS: usize = 1 << 20;
/// Environment variable overriding [`DEFAULT_MAX_ENUM_LEN`].
pub const ENUM_LEN_ENV: &str = "SLIDETS_MAX_ENUM_LEN";

/// Enumeration cap honouring the `SLIDETS_MAX_ENUM_LEN` override.
pub fn default_enum_len() -> usize {
    std::env::var(ENUM_LEN_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_MAX_ENUM_LEN))
        .unwrap_or(DEFAULT_MAX_ENUM_LEN)
}

/// A normalized deterministic finite automaton. State 0 is the source.
#[derive(Debug, Clone)]
pub struct Automaton {
    alphabet: Vec<Letter>,
    accepting: Vec<bool>,
    arcs: Vec<Vec<(Letter, u32)>>,
}

impl PartialEq for Automaton {
    /// Structural equality of the canonical forms, i.e. language equality.
    fn eq(&self, other: &Self) -> bool {
        self.accepting == other.accepting && self.arcs == other.arcs
    }
}

impl Eq for Automaton {}

fn merge(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut v: Vec<Letter> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl Automaton {
    pub(crate) fn from_parts(alphabet: Vec<Letter>, accepting: Vec<bool>, arcs: Vec<Vec<(Letter, u32)>>) -> Self {
        Automaton { alphabet, accepting, arcs }
    }

    /// The empty language.
    pub fn empty(alphabet: &[Letter]) -> Self {
        Automaton { alphabet: merge(alphabet, &[]), accepting: vec![false], arcs: vec![Vec::new()] }
    }

    /// The language `{ε}`.
    pub fn epsilon(alphabet: &[Letter]) -> Self {
        Automaton { alphabet: merge(alphabet, &[]), accepting: vec![true], arcs: vec![Vec::new()] }
    }

    /// The language holding the single word `word`.
    pub fn word(word: &[Letter]) -> Self {
        let mut nfa = Nfa::new(merge(word, &[]));
        let mut q = nfa.add_state(word.is_empty());
        nfa.sources.push(q);
        for (k, &l) in word.iter().enumerate() {
            let t = nfa.add_state(k + 1 == word.len());
            nfa.add_arc(q, l, t);
            q = t;
        }
        nfa.normalize()
    }

    /// The one-letter words of `letters`.
    pub fn any_of(letters: &[Letter]) -> Self {
        let mut nfa = Nfa::new(merge(letters, &[]));
        let s = nfa.add_state(false);
        let t = nfa.add_state(true);
        nfa.sources.push(s);
        for &l in letters {
            nfa.add_arc(s, l, t);
        }
        nfa.normalize()
    }

    /// All words over `alphabet`, including ε.
    pub fn sigma_star(alphabet: &[Letter]) -> Self {
        let mut arcs = vec![Vec::new()];
        let alphabet = merge(alphabet, &[]);
        for &l in &alphabet {
            arcs[0].push((l, 0));
        }
        Automaton { alphabet, accepting: vec![true], arcs }
    }

    /// All non-empty words over `alphabet`.
    pub fn sigma_plus(alphabet: &[Letter]) -> Self {
        Automaton::any_of(alphabet).concat(&Automaton::sigma_star(alphabet))
    }

    /// Compiles a regular expression over the declared `alphabet`.
    pub fn compile(ast: &RegexAst, alphabet: &[Letter]) -> Result<Self> {
        let alphabet = merge(alphabet, &[]);
        for l in ast.letters() {
            if alphabet.binary_search(&l).is_err() {
                return Err(Error::LetterOutsideAlphabet(l.to_string()));
            }
        }
        Ok(Self::build(ast, &alphabet))
    }

    fn build(ast: &RegexAst, alphabet: &[Letter]) -> Self {
        match ast {
            RegexAst::Empty => Automaton::empty(alphabet),
            RegexAst::Epsilon => Automaton::epsilon(alphabet),
            RegexAst::Letter(l) => Automaton::word(&[*l]).with_alphabet(alphabet),
            RegexAst::Concat(items) => items
                .iter()
                .map(|x| Self::build(x, alphabet))
                .reduce(|a, b| a.concat(&b))
                .unwrap_or_else(|| Automaton::epsilon(alphabet)),
            RegexAst::Union(items) => items
                .iter()
                .map(|x| Self::build(x, alphabet))
                .reduce(|a, b| a.union(&b))
                .unwrap_or_else(|| Automaton::empty(alphabet)),
            RegexAst::Intersect(items) => items
                .iter()
                .map(|x| Self::build(x, alphabet))
                .reduce(|a, b| a.intersect(&b))
                .unwrap_or_else(|| Automaton::sigma_star(alphabet)),
            RegexAst::Difference(a, b) => Self::build(a, alphabet).difference(&Self::build(b, alphabet)),
            RegexAst::Star(x) => Self::build(x, alphabet).star(),
            RegexAst::Plus(x) => Self::build(x, alphabet).plus(),
            RegexAst::Optional(x) => Self::build(x, alphabet).optional(),
            RegexAst::Shuffle(x, s) => Self::build(x, alphabet).shuffle(*s),
        }
    }

    /// Declared alphabet, sorted in canonical letter order.
    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    /// Returns the same language with `extra` added to the declared alphabet.
    pub fn with_alphabet(&self, extra: &[Letter]) -> Self {
        Automaton { alphabet: merge(&self.alphabet, extra), ..self.clone() }
    }

    pub fn num_states(&self) -> u32 {
        self.accepting.len() as u32
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    /// All arcs `(from, letter, to)` in canonical order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, Letter, u32)> + '_ {
        self.arcs.iter().enumerate().flat_map(|(p, out)| out.iter().map(move |&(l, q)| (p as u32, l, q)))
    }

    /// Transition function; `None` stands for the pruned dead state.
    pub fn step(&self, q: u32, letter: Letter) -> Option<u32> {
        self.arcs[q as usize].iter().find(|(l, _)| *l == letter).map(|&(_, t)| t)
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut q = 0;
        for &l in word {
            match self.step(q, l) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.accepting[q as usize]
    }

    pub fn accepts_empty_word(&self) -> bool {
        self.accepting[0]
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&a| a)
    }

    /// Length of a shortest accepted word.
    pub fn shortest_word_len(&self) -> Option<usize> {
        self.shortest_word().map(|w| w.len())
    }

    /// A shortest accepted word, the least one in letter order among equals.
    pub fn shortest_word(&self) -> Option<Vec<Letter>> {
        let n = self.accepting.len();
        let mut parent: Vec<Option<(u32, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0u32);
        while let Some(q) = queue.pop_front() {
            if self.accepting[q as usize] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, l)) = parent[cur as usize] {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for &(l, t) in &self.arcs[q as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    fn to_nfa(&self, alphabet: Vec<Letter>) -> Nfa {
        let mut nfa = Nfa::new(alphabet);
        let s = nfa.embed(self, true);
        nfa.sources.push(s);
        nfa
    }

    /// Re-normalizes; idempotent on already normalized automata.
    pub fn normalize(&self) -> Self {
        self.to_nfa(self.alphabet.clone()).normalize()
    }

    pub fn union(&self, other: &Automaton) -> Self {
        let mut nfa = Nfa::new(merge(&self.alphabet, &other.alphabet));
        let a = nfa.embed(self, true);
        let b = nfa.embed(other, true);
        nfa.sources.extend([a, b]);
        nfa.normalize()
    }

    /// Product construction.
    pub fn intersect(&self, other: &Automaton) -> Self {
        let mut nfa = Nfa::new(merge(&self.alphabet, &other.alphabet));
        let mut ids = std::collections::HashMap::new();
        let mut queue = VecDeque::new();
        let s = nfa.add_state(self.accepting[0] && other.accepting[0]);
        nfa.sources.push(s);
        ids.insert((0u32, 0u32), s);
        queue.push_back((0u32, 0u32));
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            for &(l, pt) in &self.arcs[p as usize] {
                if let Some(qt) = other.step(q, l) {
                    let to = *ids.entry((pt, qt)).or_insert_with(|| {
                        queue.push_back((pt, qt));
                        nfa.add_state(self.accepting[pt as usize] && other.accepting[qt as usize])
                    });
                    nfa.add_arc(from, l, to);
                }
            }
        }
        nfa.normalize()
    }

    /// Shortest word accepted by every automaton of `parts`, found by a lazy
    /// breadth-first walk of their product; the least one in letter order among
    /// equals. `None` means the intersection is empty.
    pub fn common_word(parts: &[&Automaton]) -> Option<Vec<Letter>> {
        let first = parts.first()?;
        let start = vec![0u32; parts.len()];
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
        let mut states = vec![start.clone()];
        let mut ids = std::collections::HashMap::new();
        ids.insert(start, 0usize);
        let mut head = 0;
        while head < states.len() {
            let cur = states[head].clone();
            if cur.iter().zip(parts).all(|(&q, a)| a.accepting[q as usize]) {
                let mut word = Vec::new();
                let mut k = head;
                while let Some((p, l)) = parent[k] {
                    word.push(l);
                    k = p;
                }
                word.reverse();
                return Some(word);
            }
            'letters: for &(l, t0) in &first.arcs[cur[0] as usize] {
                let mut next = Vec::with_capacity(parts.len());
                next.push(t0);
                for (a, &q) in parts.iter().zip(&cur).skip(1) {
                    match a.step(q, l) {
                        Some(t) => next.push(t),
                        None => continue 'letters,
                    }
                }
                if !ids.contains_key(&next) {
                    ids.insert(next.clone(), states.len());
                    states.push(next);
                    parent.push(Some((head, l)));
                }
            }
            head += 1;
        }
        None
    }

    /// Complement with respect to the declared alphabet.
    pub fn complement(&self) -> Self {
        self.complement_over(&[])
    }

    /// Complement with respect to the declared alphabet extended by `extra`.
    pub fn complement_over(&self, extra: &[Letter]) -> Self {
        let alphabet = merge(&self.alphabet, extra);
        let mut nfa = Nfa::new(alphabet.clone());
        let n = self.num_states();
        for q in 0..n {
            nfa.add_state(!self.accepting[q as usize]);
        }
        let dead = nfa.add_state(true);
        nfa.sources.push(0);
        for q in 0..n {
            for &l in &alphabet {
                let t = self.step(q, l).unwrap_or(dead);
                nfa.add_arc(q, l, t);
            }
        }
        for &l in &alphabet {
            nfa.add_arc(dead, l, dead);
        }
        nfa.normalize()
    }

    /// `self \ other`, complementing `other` over the joint alphabet.
    pub fn difference(&self, other: &Automaton) -> Self {
        self.intersect(&other.complement_over(&self.alphabet))
    }

    pub fn concat(&self, other: &Automaton) -> Self {
        let mut nfa = Nfa::new(merge(&self.alphabet, &other.alphabet));
        let a = nfa.embed(self, false);
        let b = nfa.embed(other, true);
        nfa.sources.push(a);
        if self.accepting[0] {
            nfa.sources.push(b);
        }
        for (p, l, q) in self.arcs() {
            if self.accepting[q as usize] {
                nfa.add_arc(p + a, l, b);
            }
        }
        nfa.normalize()
    }

    /// Kleene star.
    pub fn star(&self) -> Self {
        let mut nfa = Nfa::new(self.alphabet.clone());
        let a = nfa.embed(self, true);
        for (p, l, q) in self.arcs() {
            if self.accepting[q as usize] {
                nfa.add_arc(p + a, l, a);
            }
        }
        let fresh = nfa.add_state(true);
        nfa.arcs[fresh as usize] = nfa.arcs[a as usize].clone();
        nfa.sources.push(fresh);
        nfa.normalize()
    }

    /// One or more repetitions.
    pub fn plus(&self) -> Self {
        self.concat(&self.star())
    }

    /// Zero or one occurrence.
    pub fn optional(&self) -> Self {
        self.union(&Automaton::epsilon(&self.alphabet))
    }

    /// Inserts exactly one extra occurrence of `s` anywhere in each word.
    ///
    /// Every state is duplicated; the duplicates are non-initial, the originals
    /// become non-accepting, and an `s` arc links each original to its duplicate.
    pub fn shuffle(&self, s: Letter) -> Self {
        let mut nfa = Nfa::new(merge(&self.alphabet, &[s]));
        let orig = nfa.embed(self, false);
        let dup = nfa.embed(self, true);
        nfa.sources.push(orig);
        for q in 0..self.num_states() {
            nfa.add_arc(orig + q, s, dup + q);
        }
        nfa.normalize()
    }

    /// First letters of the words (plus ε when accepted).
    pub fn truncate1(&self) -> Self {
        let mut nfa = Nfa::new(self.alphabet.clone());
        let s = nfa.add_state(self.accepting[0]);
        let t = nfa.add_state(true);
        nfa.sources.push(s);
        for &(l, _) in &self.arcs[0] {
            nfa.add_arc(s, l, t);
        }
        nfa.normalize()
    }

    /// Last letters of the words (plus ε when accepted).
    pub fn tail1(&self) -> Self {
        let mut nfa = Nfa::new(self.alphabet.clone());
        let s = nfa.add_state(self.accepting[0]);
        let t = nfa.add_state(true);
        nfa.sources.push(s);
        let last: BTreeSet<Letter> =
            self.arcs().filter(|&(_, _, q)| self.accepting[q as usize]).map(|(_, l, _)| l).collect();
        for l in last {
            nfa.add_arc(s, l, t);
        }
        nfa.normalize()
    }

    /// Every prefix, ε included, of every word.
    pub fn prefix_closure(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut nfa = self.to_nfa(self.alphabet.clone());
        nfa.accepting.iter_mut().for_each(|a| *a = true);
        nfa.normalize()
    }

    /// Every suffix, ε included, of every word.
    pub fn suffix_closure(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut nfa = self.to_nfa(self.alphabet.clone());
        nfa.sources = (0..self.num_states()).collect();
        nfa.accepting = self.accepting.clone();
        nfa.normalize()
    }

    /// Mirror language: reversed words with `<` and `>` swapped.
    pub fn mirror(&self) -> Result<Self> {
        let mut alphabet = Vec::new();
        for &l in &self.alphabet {
            alphabet.push(l.flip().ok_or_else(|| Error::MirrorUndefined(l.to_string()))?);
        }
        let mut nfa = Nfa::new(merge(&alphabet, &[]));
        for q in 0..self.num_states() {
            nfa.add_state(q == 0);
        }
        for (p, l, q) in self.arcs() {
            nfa.add_arc(q, l.flip().expect("checked above"), p);
        }
        nfa.sources = (0..self.num_states()).filter(|&q| self.accepting[q as usize]).collect();
        Ok(nfa.normalize())
    }

    /// Accepted words of length at most `max_len`, ordered by length then letter order.
    ///
    /// `max_len` is clamped to [`HARD_MAX_ENUM_LEN`] and the output to [`MAX_ENUM_WORDS`] words.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Vec<Letter>> {
        let max_len = max_len.min(HARD_MAX_ENUM_LEN);
        let mut out = Vec::new();
        let mut frontier: Vec<(Vec<Letter>, u32)> = vec![(Vec::new(), 0)];
        if self.is_empty() {
            return out;
        }
        for len in 0..=max_len {
            for (w, q) in &frontier {
                if self.accepting[*q as usize] {
                    out.push(w.clone());
                    if out.len() >= MAX_ENUM_WORDS {
                        return out;
                    }
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &frontier {
                for &(l, t) in &self.arcs[*q as usize] {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, t));
                }
            }
            if next.len() > MAX_ENUM_WORDS {
                next.truncate(MAX_ENUM_WORDS);
            }
            frontier = next;
        }
        out
    }

    /// GraphViz rendering.
    pub fn to_dot(&self) -> String {
        dot::render(self)
    }
}
