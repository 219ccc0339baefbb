use std::collections::{HashMap, VecDeque};

use super::{Automaton, Letter};

/// Nondeterministic intermediate automaton without epsilon arcs.
///
/// Every exported operation builds one of these and hands it to [`Nfa::normalize`].
#[derive(Debug, Clone, Default)]
pub(crate) struct Nfa {
    pub alphabet: Vec<Letter>,
    pub sources: Vec<u32>,
    pub accepting: Vec<bool>,
    pub arcs: Vec<Vec<(Letter, u32)>>,
}

impl Nfa {
    pub fn new(alphabet: Vec<Letter>) -> Self {
        Nfa { alphabet, ..Default::default() }
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.accepting.push(accepting);
        self.arcs.push(Vec::new());
        (self.accepting.len() - 1) as u32
    }

    pub fn add_arc(&mut self, from: u32, letter: Letter, to: u32) {
        self.arcs[from as usize].push((letter, to));
    }

    /// Copies `a` into this automaton and returns the id of its source.
    /// `keep_accepting` decides whether the copied states keep their acceptance.
    pub fn embed(&mut self, a: &Automaton, keep_accepting: bool) -> u32 {
        let offset = self.accepting.len() as u32;
        for q in 0..a.num_states() {
            self.add_state(keep_accepting && a.is_accepting(q));
        }
        for (p, l, q) in a.arcs() {
            self.add_arc(p + offset, l, q + offset);
        }
        offset
    }

    /// Subset construction, trimming, minimisation and canonical renaming.
    pub fn normalize(self) -> Automaton {
        let (accepting, arcs) = self.determinize();
        finish(self.alphabet, accepting, arcs)
    }

    fn determinize(&self) -> (Vec<bool>, Vec<Vec<(Letter, u32)>>) {
        let mut start: Vec<u32> = self.sources.clone();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = Vec::new();
        let mut accepting = Vec::new();
        let mut arcs: Vec<Vec<(Letter, u32)>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(start.clone(), 0);
        accepting.push(start.iter().any(|&q| self.accepting[q as usize]));
        arcs.push(Vec::new());
        subsets.push(start);
        queue.push_back(0u32);
        let mut moves: Vec<(Letter, u32)> = Vec::new();
        while let Some(d) = queue.pop_front() {
            moves.clear();
            for &q in &subsets[d as usize] {
                moves.extend_from_slice(&self.arcs[q as usize]);
            }
            moves.sort_unstable();
            moves.dedup();
            let mut k = 0;
            while k < moves.len() {
                let letter = moves[k].0;
                let mut target = Vec::new();
                while k < moves.len() && moves[k].0 == letter {
                    target.push(moves[k].1);
                    k += 1;
                }
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        accepting.push(target.iter().any(|&q| self.accepting[q as usize]));
                        arcs.push(Vec::new());
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        queue.push_back(id);
                        id
                    }
                };
                arcs[d as usize].push((letter, id));
            }
        }
        (accepting, arcs)
    }
}

/// Turns a deterministic automaton whose states are all reachable from state 0
/// into the normalized form.
pub(crate) fn finish(alphabet: Vec<Letter>, accepting: Vec<bool>, arcs: Vec<Vec<(Letter, u32)>>) -> Automaton {
    let n = accepting.len();
    // Co-reachability: drop every state that cannot reach a sink.
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (p, out) in arcs.iter().enumerate() {
        for &(_, q) in out {
            rev[q as usize].push(p as u32);
        }
    }
    let mut live = accepting.clone();
    let mut stack: Vec<u32> = (0..n as u32).filter(|&q| accepting[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for &p in &rev[q as usize] {
            if !live[p as usize] {
                live[p as usize] = true;
                stack.push(p);
            }
        }
    }
    if !live[0] {
        return Automaton::empty(&alphabet);
    }
    let mut remap = vec![u32::MAX; n];
    let mut kept = 0u32;
    for q in 0..n {
        if live[q] {
            remap[q] = kept;
            kept += 1;
        }
    }
    let mut acc: Vec<bool> = Vec::with_capacity(kept as usize);
    let mut out: Vec<Vec<(Letter, u32)>> = Vec::with_capacity(kept as usize);
    for q in 0..n {
        if live[q] {
            acc.push(accepting[q]);
            let mut row: Vec<(Letter, u32)> =
                arcs[q].iter().filter(|(_, t)| live[*t as usize]).map(|&(l, t)| (l, remap[t as usize])).collect();
            row.sort_unstable();
            out.push(row);
        }
    }
    minimize(alphabet, acc, out)
}

/// Moore partition refinement on a trimmed partial deterministic automaton, then
/// breadth-first canonical renumbering from the source.
fn minimize(alphabet: Vec<Letter>, accepting: Vec<bool>, arcs: Vec<Vec<(Letter, u32)>>) -> Automaton {
    let n = accepting.len();
    let mut class: Vec<u32> = accepting.iter().map(|&a| a as u32).collect();
    let mut count = {
        let mut seen = [false, false];
        for &c in &class {
            seen[c as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    };
    loop {
        let mut ids: HashMap<(u32, Vec<(Letter, u32)>), u32> = HashMap::new();
        let mut next = vec![0u32; n];
        for q in 0..n {
            let sig: Vec<(Letter, u32)> = arcs[q].iter().map(|&(l, t)| (l, class[t as usize])).collect();
            let len = ids.len() as u32;
            next[q] = *ids.entry((class[q], sig)).or_insert(len);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // Canonical breadth-first numbering over classes.
    let mut rep = vec![u32::MAX; count];
    for q in (0..n).rev() {
        rep[class[q] as usize] = q as u32;
    }
    let mut order = vec![u32::MAX; count];
    let mut queue = VecDeque::new();
    let mut visited = 0u32;
    order[class[0] as usize] = 0;
    queue.push_back(class[0]);
    let mut new_acc = Vec::with_capacity(count);
    let mut new_arcs: Vec<Vec<(Letter, u32)>> = Vec::with_capacity(count);
    let mut emitted: Vec<u32> = Vec::with_capacity(count);
    visited += 1;
    while let Some(c) = queue.pop_front() {
        emitted.push(c);
        let q = rep[c as usize] as usize;
        for &(_, t) in &arcs[q] {
            let tc = class[t as usize] as usize;
            if order[tc] == u32::MAX {
                order[tc] = visited;
                visited += 1;
                queue.push_back(tc as u32);
            }
        }
    }
    for &c in &emitted {
        let q = rep[c as usize] as usize;
        new_acc.push(accepting[q]);
        new_arcs.push(arcs[q].iter().map(|&(l, t)| (l, order[class[t as usize] as usize])).collect());
    }
    Automaton::from_parts(alphabet, new_acc, new_arcs)
}
