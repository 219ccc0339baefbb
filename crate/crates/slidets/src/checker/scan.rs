//! Single-pass forward scanner: prefix aggregates and the maximal occurrences
//! of the whole series in `O(n·|Q|)`.

use serde::Serialize;

use crate::automata::{Automaton, Letter};
use crate::error::{Error, Result};
use crate::patterns::{reverse_of, Pattern};
use crate::series::{FeatureKind, Occurrence, Series};

const DEAD: u32 = u32::MAX;

/// Dense transition table over `{<, =, >}`.
pub(crate) struct Table {
    next: Vec<[u32; 3]>,
    accepting: Vec<bool>,
}

pub(crate) fn letter_index(l: Letter) -> usize {
    match l {
        Letter::Lt => 0,
        Letter::Eq => 1,
        Letter::Gt => 2,
        _ => unreachable!("signatures only hold base letters"),
    }
}

pub(crate) fn compare_index(a: i64, b: i64) -> usize {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => 2,
    }
}

impl Table {
    pub(crate) fn new(dfa: &Automaton) -> Table {
        let states = dfa.num_states() as usize;
        let mut next = vec![[DEAD; 3]; states];
        for (p, l, q) in dfa.arcs() {
            if l.is_base() {
                next[p as usize][letter_index(l)] = q;
            }
        }
        Table { next, accepting: (0..states as u32).map(|q| dfa.is_accepting(q)).collect() }
    }

    pub(crate) fn states(&self) -> usize {
        self.next.len()
    }

    #[inline]
    pub(crate) fn step(&self, q: u32, letter: usize) -> u32 {
        self.next[q as usize][letter]
    }

    #[inline]
    pub(crate) fn accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }
}

/// Prefix and suffix aggregates of a feature over a series.
///
/// Arrays are indexed by 1-based series positions; index 0 is padding set to 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixProfile {
    /// `fwd[j]`: aggregate over the maximal occurrences of `x_1 … x_j`.
    pub fwd: Vec<i64>,
    /// `bwd[i]`: aggregate over the maximal occurrences of `x_i … x_n`.
    pub bwd: Vec<i64>,
    /// Aggregate over the whole series.
    pub total: i64,
}

/// Outcome of one forward pass.
#[derive(Debug, Clone)]
pub(crate) struct ForwardPass {
    /// 1-based prefix aggregates with padding at index 0.
    pub fwd: Vec<i64>,
    /// Maximal occurrences of the whole series, sorted by start.
    pub occurrences: Vec<Occurrence>,
    /// `counts[j]`: number of maximal occurrences of `x_1 … x_j`.
    pub counts: Vec<usize>,
}

struct Run {
    start: usize,
    state: u32,
    ext: Option<i64>,
}

struct Record {
    start: usize,
    end: usize,
    value: i128,
}

fn fold_ext(f: FeatureKind, acc: Option<i64>, v: i64) -> Option<i64> {
    Some(match (f, acc) {
        (_, None) => v,
        (FeatureKind::Min, Some(a)) => a.min(v),
        (_, Some(a)) => a.max(v),
    })
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Runs the scanner over `x` (0-based slice) for pattern language `table` with trims `b`, `a`.
///
/// Live runs keep only the earliest start per automaton state: two starts in
/// the same state accept exactly the same future ends, so the later one can
/// never become the longest match of a new maximal occurrence.
pub(crate) fn forward_pass(table: &Table, b: usize, a: usize, f: FeatureKind, x: &[i64]) -> Result<ForwardPass> {
    let n = x.len();
    let mut fwd = vec![0i64; n + 1];
    let mut counts = vec![0usize; n + 1];
    let tracks_ext = matches!(f, FeatureKind::Max | FeatureKind::Min);
    let mut prefix = Vec::new();
    if f == FeatureKind::Surf {
        prefix.reserve(n + 1);
        prefix.push(0i128);
        for &v in x {
            prefix.push(prefix.last().copied().unwrap_or(0) + v as i128);
        }
    }
    let mut runs: Vec<Run> = Vec::with_capacity(table.states() + 1);
    let mut kept: Vec<Run> = Vec::with_capacity(table.states() + 1);
    let mut stamp = vec![usize::MAX; table.states()];
    let mut stack: Vec<Record> = Vec::new();
    let mut total: i128 = 0;
    for k in 0..n.saturating_sub(1) {
        // A run starting at letter k covers x[k ..= step + 1]; its trimmed
        // extent starts at k + b and, after reading letter t, ends at t + 1 − a.
        let mut ext = None;
        if tracks_ext && a == 0 && b == 0 {
            ext = Some(x[k]);
        }
        runs.push(Run { start: k, state: 0, ext });
        let letter = compare_index(x[k], x[k + 1]);
        kept.clear();
        for mut run in runs.drain(..) {
            let q = table.step(run.state, letter);
            if q == DEAD || stamp[q as usize] == k {
                continue;
            }
            stamp[q as usize] = k;
            run.state = q;
            if tracks_ext && k + 1 >= a && k + 1 - a >= run.start + b {
                run.ext = fold_ext(f, run.ext, x[k + 1 - a]);
            }
            kept.push(run);
        }
        std::mem::swap(&mut runs, &mut kept);
        if let Some(run) = runs.iter().find(|r| table.accepting(r.state)) {
            let lo = run.start + b;
            // Patterns guarantee b + a ≤ ω, so the trimmed extent is never empty.
            let hi = k + 1 - a;
            let value: i128 = match f {
                FeatureKind::One => 1,
                FeatureKind::Width => (hi + 1 - lo) as i128,
                FeatureKind::Surf => {
                    let s = prefix[hi + 1] - prefix[lo];
                    to_i64(s)?;
                    s
                }
                FeatureKind::Max | FeatureKind::Min => run.ext.expect("trimmed extent is non-empty") as i128,
            };
            while stack.last().is_some_and(|r| r.start >= run.start) {
                total -= stack.pop().expect("checked non-empty").value;
            }
            total += value;
            stack.push(Record { start: run.start, end: k, value });
        }
        fwd[k + 2] = to_i64(total)?;
        counts[k + 2] = stack.len();
    }
    let occurrences = stack.iter().map(|r| Occurrence { start: r.start + 1, end: r.end + 2 }).collect();
    Ok(ForwardPass { fwd, occurrences, counts })
}

/// Pattern-level wrapper around [`forward_pass`].
pub(crate) fn forward(p: &Pattern, f: FeatureKind, x: &[i64]) -> Result<ForwardPass> {
    forward_pass(&Table::new(p.language()), p.b(), p.a(), f, x)
}

/// Prefix aggregates of an arbitrary value sequence, with padding at index 0.
pub fn forward_registers(p: &Pattern, f: FeatureKind, values: &[i64]) -> Result<Vec<i64>> {
    Ok(forward(p, f, values)?.fwd)
}

/// Aggregate over every prefix and every suffix of `x` in linear time.
///
/// The suffix aggregates come from the same scan run on the reversed series
/// with the reverse pattern, which requires `p` to be reversible.
pub fn prefix_profile(f: FeatureKind, p: &Pattern, x: &Series) -> Result<PrefixProfile> {
    let rev = reverse_of(p).ok_or_else(|| Error::NotReversible(p.name().to_string()))?;
    let fwd = forward(p, f, x.values())?.fwd;
    let y = x.reversed();
    let fwd_rev = forward(rev, f, y.values())?.fwd;
    let n = x.len();
    let mut bwd = vec![0i64; n + 1];
    for i in 1..=n {
        bwd[i] = fwd_rev[n + 1 - i];
    }
    Ok(PrefixProfile { total: fwd[n], fwd, bwd })
}

/// Maximal occurrences of `p` in the whole series, found by the linear scan.
pub fn scan_occurrences(p: &Pattern, x: &Series) -> Result<Vec<Occurrence>> {
    Ok(forward(p, FeatureKind::One, x.values())?.occurrences)
}

/// Aggregate over the window `x_lo … x_hi` by scanning that slice alone.
pub fn scan_window(p: &Pattern, f: FeatureKind, x: &Series, lo: usize, hi: usize) -> Result<i64> {
    if lo < 1 || lo > hi || hi > x.len() {
        return Err(Error::BadRange { lo, hi, n: x.len() });
    }
    let pass = forward(p, f, &x.values()[lo - 1..hi])?;
    Ok(pass.fwd[hi + 1 - lo])
}
