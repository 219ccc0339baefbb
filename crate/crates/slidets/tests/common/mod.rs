//! Oracles and randomized suites shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use slidets::checker::{
    oracle_windows, prefix_profile, scan_occurrences, select_equation, slide_check, EquationKind, PresenceIndex,
};
use slidets::patterns::{catalog, reverse_of, Pattern};
use slidets::reformulate::emit_reformulation;
use slidets::series::{catalog_features, maximal_occurrences, signature, window_oracle, FeatureKind, Series};
use slidets::{Automaton, Letter};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of a randomized suite: number of comparisons and the first few mismatches.
#[derive(Debug, Default)]
pub struct Suite {
    pub checks: usize,
    pub mismatches: Vec<String>,
}

impl Suite {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.mismatches.len() < 20 {
            self.mismatches.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Random regular expression over `<,=,>`, printable in both grammars.
#[derive(Debug, Clone)]
pub enum Re {
    Letter(usize),
    Eps,
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
    Plus(Box<Re>),
    Opt(Box<Re>),
}

const OURS: [&str; 3] = ["<", "=", ">"];
const THEIRS: [&str; 3] = ["a", "b", "c"];

impl Re {
    pub fn random(rng: &mut impl Rng, depth: usize) -> Re {
        if depth == 0 || rng.random_bool(0.3) {
            return if rng.random_bool(0.08) { Re::Eps } else { Re::Letter(rng.random_range(0..3)) };
        }
        let sub = |rng: &mut _| Box::new(Re::random(rng, depth - 1));
        match rng.random_range(0..6) {
            0 | 1 => Re::Cat(sub(rng), sub(rng)),
            2 | 3 => Re::Alt(sub(rng), sub(rng)),
            4 => Re::Star(sub(rng)),
            _ => {
                if rng.random_bool(0.5) {
                    Re::Plus(sub(rng))
                } else {
                    Re::Opt(sub(rng))
                }
            }
        }
    }

    /// Text in the library's grammar.
    pub fn ours(&self) -> String {
        match self {
            Re::Letter(k) => OURS[*k].to_string(),
            Re::Eps => "eps".into(),
            Re::Cat(a, b) => format!("({})({})", a.ours(), b.ours()),
            Re::Alt(a, b) => format!("({}|{})", a.ours(), b.ours()),
            Re::Star(a) => format!("({})*", a.ours()),
            Re::Plus(a) => format!("({})+", a.ours()),
            Re::Opt(a) => format!("({})?", a.ours()),
        }
    }

    /// Text for the `regex` crate, letters renamed to `a`, `b`, `c`.
    pub fn theirs(&self) -> String {
        match self {
            Re::Letter(k) => THEIRS[*k].to_string(),
            Re::Eps => "(?:)".into(),
            Re::Cat(a, b) => format!("(?:{})(?:{})", a.theirs(), b.theirs()),
            Re::Alt(a, b) => format!("(?:{}|{})", a.theirs(), b.theirs()),
            Re::Star(a) => format!("(?:{})*", a.theirs()),
            Re::Plus(a) => format!("(?:{})+", a.theirs()),
            Re::Opt(a) => format!("(?:{})?", a.theirs()),
        }
    }
}

/// Membership through the `regex` crate, independent of the automata code.
pub struct Member(Regex);

impl Member {
    pub fn new(theirs: &str) -> Member {
        Member(Regex::new(&format!("^(?:{theirs})$")).expect("valid oracle regex"))
    }

    /// Oracle for a catalog-style expression (`<`, `=`, `>`, `|`, `*`, `+`, `?`, `eps`, parentheses).
    pub fn from_ours(text: &str) -> Member {
        let t = text.replace("eps", "(?:)").replace('<', "a").replace('=', "b").replace('>', "c");
        Member::new(&t)
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.0.is_match(&encode(w))
    }
}

pub fn encode(w: &[Letter]) -> String {
    w.iter()
        .map(|l| match l {
            Letter::Lt => 'a',
            Letter::Eq => 'b',
            Letter::Gt => 'c',
            other => panic!("no oracle encoding for {other}"),
        })
        .collect()
}

/// Every word over `letters` of length at most `max_len`, including ε.
pub fn all_words(letters: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in letters {
                let mut w2: Vec<Letter> = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn compile(text: &str) -> Automaton {
    let ast = slidets::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    Automaton::compile(&ast, &Letter::BASE).expect("base letters")
}

fn in_star(w: &[Letter], m: &Member) -> bool {
    // ok[k]: the prefix of length k splits into non-empty words of the language.
    let mut ok = vec![false; w.len() + 1];
    ok[0] = true;
    for e in 1..=w.len() {
        ok[e] = (0..e).any(|s| ok[s] && m.contains(&w[s..e]));
    }
    ok[w.len()]
}

fn flipped_reverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.flip().expect("base letter")).collect()
}

fn words_of(a: &Automaton, max_len: usize) -> BTreeSet<Vec<Letter>> {
    a.enumerate_words(max_len).into_iter().collect()
}

/// Algebra operations against set-level operations on enumerated words.
pub fn algebra_suite(pairs: usize, seed: u64) -> Suite {
    const LEN: usize = 6;
    let mut rng = rng(seed);
    let universe = all_words(&Letter::BASE, LEN);
    let with_sync = all_words(&[Letter::Lt, Letter::Eq, Letter::Gt, Letter::S], 5);
    let mut suite = Suite::default();
    for _ in 0..pairs {
        let (ra, rb) = (Re::random(&mut rng, 4), Re::random(&mut rng, 4));
        let (a, b) = (compile(&ra.ours()), compile(&rb.ours()));
        let (ma, mb) = (Member::new(&ra.theirs()), Member::new(&rb.theirs()));
        let expect = |pred: &dyn Fn(&[Letter]) -> bool| -> BTreeSet<Vec<Letter>> {
            universe.iter().filter(|w| pred(w)).cloned().collect()
        };
        let mirror = a.mirror().expect("base letters");
        let cases: [(&str, Automaton, BTreeSet<Vec<Letter>>); 8] = [
            ("union", a.union(&b), expect(&|w| ma.contains(w) || mb.contains(w))),
            ("intersect", a.intersect(&b), expect(&|w| ma.contains(w) && mb.contains(w))),
            ("difference", a.difference(&b), expect(&|w| ma.contains(w) && !mb.contains(w))),
            ("complement", a.complement(), expect(&|w| !ma.contains(w))),
            ("concat", a.concat(&b), expect(&|w| (0..=w.len()).any(|k| ma.contains(&w[..k]) && mb.contains(&w[k..])))),
            ("star", a.star(), expect(&|w| in_star(w, &ma))),
            ("plus", a.plus(), expect(&|w| if w.is_empty() { ma.contains(w) } else { in_star(w, &ma) })),
            ("mirror", mirror, expect(&|w| ma.contains(&flipped_reverse(w)))),
        ];
        for (op, got, want) in cases {
            let got = words_of(&got, LEN);
            suite.check(got == want, || format!("{op}: a={} b={}", ra.ours(), rb.ours()));
        }
        let shuffled = words_of(&a.shuffle(Letter::S), 5);
        let want: BTreeSet<Vec<Letter>> = with_sync
            .iter()
            .filter(|w| {
                w.iter().filter(|&&l| l == Letter::S).count() == 1 && {
                    let rest: Vec<Letter> = w.iter().copied().filter(|&l| l != Letter::S).collect();
                    ma.contains(&rest)
                }
            })
            .cloned()
            .collect();
        suite.check(shuffled == want, || format!("shuffle: a={}", ra.ours()));
    }
    suite
}

pub fn random_series(rng: &mut impl Rng, min_len: usize, max_len: usize, lo: i64, hi: i64) -> Series {
    let n = rng.random_range(min_len..=max_len);
    Series::new((0..n).map(|_| rng.random_range(lo..=hi)).collect()).expect("non-empty")
}

pub fn reversible() -> Vec<&'static Pattern> {
    catalog().iter().filter(|p| reverse_of(p).is_some()).collect()
}

/// Maximal occurrences by testing every factor for membership and for
/// containment in another member factor.
pub fn brute_occurrences(m: &Member, x: &Series, lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let sig = signature(x).expect("n ≥ 2");
    // Factor [c, d] of letters (1-based) covers values c..=d+1.
    let members: Vec<(usize, usize)> =
        (lo..hi).flat_map(|c| (c..hi).map(move |d| (c, d))).filter(|&(c, d)| m.contains(&sig[c - 1..d])).collect();
    members
        .iter()
        .filter(|&&(c, d)| !members.iter().any(|&(c2, d2)| (c2, d2) != (c, d) && c2 <= c && d <= d2))
        .map(|&(c, d)| (c, d + 1))
        .collect()
}

/// Reference maximal occurrences against the brute scan, and the linear scanner
/// against the reference.
pub fn maximal_suite(count: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let patterns = reversible();
    let members: Vec<Member> = patterns.iter().map(|p| Member::from_ours(p.regex())).collect();
    let mut suite = Suite::default();
    for _ in 0..count {
        let x = random_series(&mut rng, 2, 30, -2, 2);
        let n = x.len();
        let lo = rng.random_range(1..n);
        let hi = rng.random_range(lo + 1..=n);
        for (p, m) in patterns.iter().zip(&members) {
            for (l, h) in [(1, n), (lo, hi)] {
                let got: Vec<(usize, usize)> =
                    maximal_occurrences(p, &x, l, h).unwrap().into_iter().map(|o| (o.start, o.end)).collect();
                let want = brute_occurrences(m, &x, l, h);
                suite.check(got == want, || format!("{} on {:?} [{l},{h}]: {got:?} vs {want:?}", p.name(), x.values()));
            }
            let scanned = scan_occurrences(p, &x).unwrap();
            let reference = maximal_occurrences(p, &x, 1, n).unwrap();
            suite.check(scanned == reference, || format!("scanner {} on {:?}", p.name(), x.values()));
        }
    }
    suite
}

/// Catalog constraints as (feature, pattern) pairs.
pub fn catalog_cells() -> Vec<(FeatureKind, &'static Pattern)> {
    catalog().iter().flat_map(|p| catalog_features(p).iter().map(move |&f| (f, p))).collect()
}

/// `fwd[j]` and `bwd[i]` against the window oracle on prefixes and suffixes.
pub fn profile_suite(count: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let cells = catalog_cells();
    let mut suite = Suite::default();
    for _ in 0..count {
        let x = random_series(&mut rng, 2, 30, -5, 5);
        let n = x.len();
        for &(f, p) in &cells {
            let prof = prefix_profile(f, p, &x).unwrap();
            for k in 1..=n {
                let fwd = window_oracle(f, p, &x, 1, k).unwrap();
                let bwd = window_oracle(f, p, &x, k, n).unwrap();
                suite.check(prof.fwd[k] == fwd && prof.bwd[k] == bwd, || {
                    format!("{f} {} k={k} on {:?}", p.name(), x.values())
                });
            }
        }
    }
    suite
}

/// Presence queries against occurrence emptiness, on every window.
pub fn presence_suite(count: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let patterns = reversible();
    let mut suite = Suite::default();
    for _ in 0..count {
        let x = random_series(&mut rng, 2, 25, -2, 2);
        let n = x.len();
        for p in &patterns {
            let idx = PresenceIndex::build(p, &x).unwrap();
            for i in 1..n {
                for j in i + 1..=n {
                    let want = !maximal_occurrences(p, &x, i, j).unwrap().is_empty();
                    suite.check(idx.query(i, j) == want, || {
                        format!("{} ({}) [{i},{j}] on {:?}", p.name(), idx.strategy(), x.values())
                    });
                }
            }
        }
    }
    suite
}

/// Checker against the per-window oracle for every catalog constraint.
/// Returns the suite and the number of windows evaluated on the fallback path.
pub fn sweep_suite(count: usize, seed: u64) -> (Suite, usize) {
    let mut rng = rng(seed);
    let cells = catalog_cells();
    let mut suite = Suite::default();
    let mut fallback = 0;
    for _ in 0..count {
        let x = random_series(&mut rng, 2, 40, -5, 5);
        let m = rng.random_range(2..=x.len());
        for &(f, p) in &cells {
            let report = slide_check(f, p, m, &x).unwrap();
            let want = oracle_windows(f, p, m, &x).unwrap();
            if report.fallback {
                fallback += report.values.len();
            }
            suite.check(report.values == want, || {
                format!("{f} {} {} m={m} on {:?}", p.name(), report.equation, x.values())
            });
        }
    }
    (suite, fallback)
}

/// Ground instances of the reformulation: the checker's values satisfy the
/// model and its bounds equal the checker's.
pub fn ground_suite(count: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let cells: Vec<_> = catalog_cells()
        .into_iter()
        .filter(|&(f, p)| matches!(select_equation(f, p), Ok(EquationKind::Plain | EquationKind::Clamp)))
        .collect();
    let mut suite = Suite::default();
    for _ in 0..count {
        let (f, p) = cells[rng.random_range(0..cells.len())];
        let x = random_series(&mut rng, 2, 40, -5, 5);
        let m = rng.random_range(2..=x.len());
        let eq = select_equation(f, p).unwrap();
        let model = emit_reformulation(f, p, m, x.len(), eq).unwrap();
        let assignment = model.ground_assignment(&x).unwrap();
        let violations = model.violations(&assignment).unwrap();
        let report = slide_check(f, p, m, &x).unwrap();
        suite.check(violations.is_empty() && (assignment["low"], assignment["up"]) == (report.low, report.up), || {
            format!("{f} {} m={m} on {:?}: {violations:?}", p.name(), x.values())
        });
    }
    suite
}
