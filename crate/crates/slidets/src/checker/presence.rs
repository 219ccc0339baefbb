//! Constant-time window queries: does `x_i … x_j` hold an occurrence?

use std::fmt;

use serde::Serialize;

use super::scan::{compare_index, forward, letter_index, Table};
use crate::automata::Letter;
use crate::error::{Error, Result};
use crate::patterns::{check_factor, check_incompressible, check_letter, check_suffix_unavoidable, Pattern};
use crate::series::{FeatureKind, Series};

/// Pattern property backing a presence index, tried in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresenceStrategy {
    /// Every word holds the letter and the one-letter word is in the language.
    Letter(#[serde(serialize_with = "letter_str")] Letter),
    /// Every word holds the letter and every suffix starting with it is in the language.
    SuffixUnavoidable(#[serde(serialize_with = "letter_str")] Letter),
    /// No proper factor of a word is in the language.
    Incompressible,
    /// Every factor of length at least ω is in the language.
    Factor,
}

fn letter_str<S: serde::Serializer>(l: &Letter, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&l.to_string())
}

impl fmt::Display for PresenceStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresenceStrategy::Letter(e) => write!(f, "letter({e})"),
            PresenceStrategy::SuffixUnavoidable(e) => write!(f, "suffix_unavoidable({e})"),
            PresenceStrategy::Incompressible => f.write_str("incompressible"),
            PresenceStrategy::Factor => f.write_str("factor"),
        }
    }
}

/// First applicable strategy for `p`.
pub fn presence_strategy(p: &Pattern) -> Result<PresenceStrategy> {
    if let Some(e) = Letter::BASE.into_iter().find(|&e| check_letter(p, e)) {
        return Ok(PresenceStrategy::Letter(e));
    }
    if let Some(e) = Letter::BASE.into_iter().find(|&e| check_suffix_unavoidable(p, e)) {
        return Ok(PresenceStrategy::SuffixUnavoidable(e));
    }
    if check_incompressible(p) {
        return Ok(PresenceStrategy::Incompressible);
    }
    if check_factor(p).unwrap_or(false) {
        return Ok(PresenceStrategy::Factor);
    }
    Err(Error::NoPresenceStrategy(p.name().to_string()))
}

/// Presence index over one series. Arrays are 1-based with padding at index 0.
#[derive(Debug, Clone, Serialize)]
pub struct PresenceIndex {
    strategy: PresenceStrategy,
    n: usize,
    omega: usize,
    /// Number of occurrences of the strategy letter among letters `1 … k − 1`.
    nocc: Vec<usize>,
    /// Number of maximal occurrences inside `x_1 … x_k`.
    nocc2: Vec<usize>,
    /// End of the first whole-series occurrence ending after `k`, or `n + 1`.
    end: Vec<usize>,
    /// Start of the last whole-series occurrence starting before `k`, or 0.
    start: Vec<usize>,
    /// Earliest end of an occurrence starting at or after `k`, or `n + 1`.
    first_end: Vec<usize>,
    /// Earliest end of a pattern factor starting on a strategy letter at or after `k`.
    letter_end: Vec<usize>,
    /// Start of the occurrence ending at `u`, indexed by `u`.
    start_of_end: Vec<usize>,
    /// End of the occurrence starting at `l`, indexed by `l`.
    end_of_start: Vec<usize>,
}

impl PresenceIndex {
    /// Builds the arrays required by the first applicable strategy in `O(n·|Q|)`.
    pub fn build(p: &Pattern, x: &Series) -> Result<PresenceIndex> {
        let strategy = presence_strategy(p)?;
        let n = x.len();
        let mut idx = PresenceIndex {
            strategy,
            n,
            omega: p.omega(),
            nocc: Vec::new(),
            nocc2: Vec::new(),
            end: Vec::new(),
            start: Vec::new(),
            first_end: Vec::new(),
            letter_end: Vec::new(),
            start_of_end: Vec::new(),
            end_of_start: Vec::new(),
        };
        match strategy {
            PresenceStrategy::Letter(e) => idx.nocc = letter_counts(x, e),
            PresenceStrategy::SuffixUnavoidable(e) => {
                idx.nocc = letter_counts(x, e);
                idx.nocc2 = forward(p, FeatureKind::One, x.values())?.counts;
                idx.letter_end = letter_ends(p, x, e)?;
            }
            PresenceStrategy::Incompressible | PresenceStrategy::Factor => {
                let occ = forward(p, FeatureKind::One, x.values())?.occurrences;
                let mut end = vec![n + 1; n + 1];
                let mut first_end = vec![n + 1; n + 2];
                let mut start = vec![0; n + 1];
                let mut start_of_end = vec![0; n + 2];
                let mut end_of_start = vec![n + 1; n + 1];
                for o in &occ {
                    start_of_end[o.end] = o.start;
                    end_of_start[o.start] = o.end;
                    first_end[o.start] = first_end[o.start].min(o.end);
                    start[o.start + 1] = start[o.start + 1].max(o.start);
                    end[o.end - 1] = end[o.end - 1].min(o.end);
                }
                for k in (0..n).rev() {
                    end[k] = end[k].min(end[k + 1]);
                }
                for k in (1..=n).rev() {
                    first_end[k] = first_end[k].min(first_end[k + 1]);
                }
                first_end.truncate(n + 1);
                for k in 1..=n {
                    start[k] = start[k].max(start[k - 1]);
                }
                idx.end = end;
                idx.start = start;
                idx.first_end = first_end;
                idx.start_of_end = start_of_end;
                idx.end_of_start = end_of_start;
            }
        }
        Ok(idx)
    }

    pub fn strategy(&self) -> PresenceStrategy {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `end[k]` for `0 ≤ k ≤ n`; empty unless the strategy uses it.
    pub fn end(&self) -> &[usize] {
        &self.end
    }

    /// `start[k]` for `1 ≤ k ≤ n`; empty unless the strategy uses it.
    pub fn start(&self) -> &[usize] {
        &self.start
    }

    fn check(&self, i: usize, j: usize) {
        assert!(1 <= i && i <= j && j <= self.n, "window [{i}, {j}] outside 1..={}", self.n);
    }

    /// Whether `x_i … x_j` holds an occurrence; exact for every strategy.
    pub fn query(&self, i: usize, j: usize) -> bool {
        self.check(i, j);
        match self.strategy {
            PresenceStrategy::Letter(_) => self.nocc[j] > self.nocc[i],
            PresenceStrategy::SuffixUnavoidable(_) => self.letter_end[i] <= j,
            PresenceStrategy::Incompressible => self.first_end[i] <= j,
            PresenceStrategy::Factor => {
                // Any factor of at least ω letters of an occurrence is itself an
                // occurrence, so the window is non-empty iff it shares ω letters
                // with some whole-series occurrence: one lying inside it, or the
                // ones straddling its left or right border.
                let overlap = |l: usize, u: usize| u.min(j).saturating_sub(l.max(i));
                let end_i = self.end[i];
                let start_j = self.start[j];
                self.first_end[i] <= j
                    || (end_i <= self.n && overlap(self.start_of_end[end_i], end_i) >= self.omega)
                    || (start_j >= 1 && overlap(start_j, self.end_of_start[start_j]) >= self.omega)
            }
        }
    }

    /// The absence test as originally stated for each strategy.
    ///
    /// It is exact for the letter strategy only. For the other three it can
    /// report a window as non-empty when it holds no occurrence;
    /// [`PresenceIndex::query`] uses corrected tests there.
    pub fn printed_absent(&self, i: usize, j: usize) -> bool {
        self.check(i, j);
        match self.strategy {
            PresenceStrategy::Letter(_) => self.nocc[i] == self.nocc[j],
            PresenceStrategy::SuffixUnavoidable(_) => self.nocc[i] == self.nocc[j] || self.nocc2[i] == self.nocc2[j],
            PresenceStrategy::Incompressible => self.end[i] > j || self.start[j] < i,
            PresenceStrategy::Factor => {
                let n = self.n;
                let (end_i, start_j) = (self.end[i], self.start[j]);
                if end_i > n || start_j < 1 {
                    return true;
                }
                let i2 = if end_i - i >= self.omega { i } else { end_i };
                let j2 = if j - start_j >= self.omega { j } else { start_j };
                let (end_i2, start_j2) = (self.end[i2], self.start[j2]);
                if end_i2 > n || start_j2 < 1 {
                    return true;
                }
                let k = j2.min(end_i2);
                (k as isize) - (i2.max(self.start[k]) as isize) < self.omega as isize
            }
        }
    }
}

/// `nocc[k]`: number of letters `e` among signature letters `1 … k − 1`.
fn letter_counts(x: &Series, e: Letter) -> Vec<usize> {
    let v = x.values();
    let target = letter_index(e);
    let mut nocc = vec![0; x.len() + 1];
    for k in 2..=x.len() {
        nocc[k] = nocc[k - 1] + usize::from(compare_index(v[k - 2], v[k - 1]) == target);
    }
    nocc
}

/// For each `k`, the earliest series end of a pattern factor whose first
/// letter is an `e` at signature position `q ≥ k`.
///
/// Shortest matches from every position come from one right-to-left pass of
/// the mirror automaton, keeping the earliest end per state.
fn letter_ends(p: &Pattern, x: &Series, e: Letter) -> Result<Vec<usize>> {
    let n = x.len();
    let v = x.values();
    let table = Table::new(&p.language().mirror()?);
    let target = letter_index(e);
    let mut out = vec![n + 1; n + 2];
    // Runs as (end letter, state), newest (smallest end) last.
    let mut runs: Vec<(usize, u32)> = Vec::with_capacity(table.states() + 1);
    let mut kept: Vec<(usize, u32)> = Vec::with_capacity(table.states() + 1);
    let mut seen = vec![usize::MAX; table.states()];
    for q in (1..n).rev() {
        let letter = compare_index(v[q - 1], v[q]);
        let flipped = 2 - letter;
        runs.push((q, 0));
        kept.clear();
        for &(end, state) in runs.iter().rev() {
            let t = table.step(state, flipped);
            if t == u32::MAX || seen[t as usize] == q {
                continue;
            }
            seen[t as usize] = q;
            kept.push((end, t));
        }
        kept.reverse();
        std::mem::swap(&mut runs, &mut kept);
        let mut best = out[q + 1];
        if letter == target {
            if let Some(&(end, _)) = runs.iter().rev().find(|(_, s)| table.accepting(*s)) {
                best = best.min(end + 1);
            }
        }
        out[q] = best;
    }
    out.truncate(n + 1);
    Ok(out)
}
