//! Hand-written register automata computing, for each position, the end of
//! the next `plain` or `zigzag` occurrence.

use std::cmp::Ordering;

use serde::Serialize;

use crate::series::Series;

/// Register trace of one automaton run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndTrace {
    /// `end[k]` for `k = 0 … n`; `end[k]` is the end of the first occurrence
    /// ending after position `k`, or `n + 1` when there is none.
    pub end: Vec<usize>,
    /// `in[k]` for `k = 0 … n − 1` (index 0 unused); empty for automata without the flag.
    pub inside: Vec<u8>,
}

/// Register trace with the matching `start[]` array from the run on the reversed series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegisterTrace {
    pub forward: EndTrace,
    pub backward: EndTrace,
    /// `start[k]` for `k = 0 … n` (index 0 unused): start of the last occurrence
    /// starting before `k`, or 0 when there is none.
    pub start: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arc {
    /// `end[k−1] = end[k]`.
    Solid,
    /// `end[k−1] = end[k]` and `in[k] = 1`.
    Dashed,
    /// `end[k−1] = k`.
    Dotted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum P {
    S,
    R,
}

fn plain_step(q: P, letter: Ordering) -> (P, Arc) {
    use Ordering::{Equal as Eq, Greater as Gt, Less as Lt};
    match (q, letter) {
        (P::S, Lt | Eq) => (P::S, Arc::Solid),
        (P::S, Gt) => (P::R, Arc::Solid),
        (P::R, Gt | Eq) => (P::R, Arc::Solid),
        (P::R, Lt) => (P::S, Arc::Dotted),
    }
}

/// Plain automaton: states `s` (no pending descent) and `r` (after a descent,
/// possibly followed by steadies). The dotted arc on letter `k` sets
/// `end[k] = k + 1`, every other arc `end[k] = end[k + 1]`, and `end[n] = n + 1`.
pub fn plain_end(x: &Series) -> EndTrace {
    let n = x.len();
    let v = x.values();
    let mut arcs = vec![Arc::Solid; n];
    let mut q = P::S;
    for k in 1..n {
        let (next, arc) = plain_step(q, v[k - 1].cmp(&v[k]));
        arcs[k] = arc;
        q = next;
    }
    let mut end = vec![0; n + 1];
    end[n] = n + 1;
    for k in (1..n).rev() {
        end[k] = if arcs[k] == Arc::Dotted { k + 1 } else { end[k + 1] };
    }
    end[0] = if n >= 1 { end[1] } else { 1 };
    EndTrace { end, inside: Vec::new() }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Z {
    S,
    A,
    B,
    C,
    D,
    E,
    F,
}

fn zigzag_step(q: Z, letter: Ordering) -> (Z, Arc) {
    use Arc::{Dashed, Dotted, Solid};
    use Ordering::{Equal as Eq, Greater as Gt, Less as Lt};
    match (q, letter) {
        (Z::S, Eq) => (Z::S, Solid),
        (Z::S, Gt) => (Z::D, Solid),
        (Z::S, Lt) => (Z::A, Solid),
        (Z::A, Gt) => (Z::B, Solid),
        (Z::A, Eq) => (Z::S, Solid),
        (Z::A, Lt) => (Z::A, Solid),
        (Z::B, Gt) => (Z::D, Solid),
        (Z::B, Eq) => (Z::S, Solid),
        (Z::B, Lt) => (Z::C, Dashed),
        (Z::C, Gt) => (Z::F, Dashed),
        (Z::C, Eq) => (Z::S, Dotted),
        (Z::C, Lt) => (Z::A, Dotted),
        (Z::D, Gt) => (Z::D, Solid),
        (Z::D, Eq) => (Z::S, Solid),
        (Z::D, Lt) => (Z::E, Solid),
        (Z::E, Gt) => (Z::F, Dashed),
        (Z::E, Eq) => (Z::S, Solid),
        (Z::E, Lt) => (Z::A, Solid),
        (Z::F, Gt) => (Z::D, Dotted),
        (Z::F, Eq) => (Z::S, Dotted),
        (Z::F, Lt) => (Z::C, Dashed),
    }
}

/// Zigzag automaton with the `in[]` flag: a dashed arc marks that position `k`
/// lies inside a zigzag that is still open, and the last end is `n + 1 − in[n − 1]`.
pub fn zigzag_end(x: &Series) -> EndTrace {
    let n = x.len();
    let v = x.values();
    if n < 2 {
        return EndTrace { end: vec![n + 1; n + 1], inside: vec![0; n] };
    }
    let mut arcs = vec![Arc::Solid; n];
    let mut inside = vec![0u8; n];
    let mut q = Z::S;
    for k in 1..n {
        let (next, arc) = zigzag_step(q, v[k - 1].cmp(&v[k]));
        arcs[k] = arc;
        inside[k] = u8::from(arc == Arc::Dashed);
        q = next;
    }
    // Solid and dashed arcs on letter k copy end[k] into end[k − 1]; dotted
    // ones set end[k − 1] = k.
    let mut end = vec![0; n + 1];
    end[n] = n + 1;
    end[n - 1] = n + 1 - inside[n - 1] as usize;
    for k in (1..n).rev() {
        end[k - 1] = if arcs[k] == Arc::Dotted { k } else { end[k] };
    }
    EndTrace { end, inside }
}

fn with_start(x: &Series, run: fn(&Series) -> EndTrace) -> RegisterTrace {
    let n = x.len();
    let forward = run(x);
    let backward = run(&x.reversed());
    let start = (0..=n).map(|k| if k == 0 { 0 } else { n + 1 - backward.end[n + 1 - k] }).collect();
    RegisterTrace { forward, backward, start }
}

/// Plain traces on the series and on its reverse, plus `start[]`.
pub fn plain_trace(x: &Series) -> RegisterTrace {
    with_start(x, plain_end)
}

/// Zigzag traces on the series and on its reverse, plus `start[]`.
pub fn zigzag_trace(x: &Series) -> RegisterTrace {
    with_start(x, zigzag_end)
}
