//! Word types of proper factors, type languages, feasible triples and the
//! representative triples forming the class of a pattern.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{Automaton, Letter};
use crate::error::{Error, Result};
use crate::patterns::lang::{cat, plus, s, shuffled, star};
use crate::patterns::{catalog, Pattern};
use crate::regex;

/// Type of a proper factor with respect to a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WordType {
    Out,
    Fac,
    Pre,
    Suf,
    In,
}

impl WordType {
    pub const ALL: [WordType; 5] = [WordType::Out, WordType::Fac, WordType::Pre, WordType::Suf, WordType::In];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WordType::Out => "out",
            WordType::Fac => "fac",
            WordType::Pre => "pre",
            WordType::Suf => "suf",
            WordType::In => "in",
        }
    }
}

impl fmt::Display for WordType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WordType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WordType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unsupported(format!("unknown word type `{s}`")))
    }
}

/// Types of the prefix up to the factor end, of the factor, and of the suffix
/// from the factor start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple(pub WordType, pub WordType, pub WordType);

impl Triple {
    /// All 125 candidate triples in lexicographic order.
    pub fn all() -> Vec<Triple> {
        let mut v = Vec::with_capacity(125);
        for a in WordType::ALL {
            for b in WordType::ALL {
                for c in WordType::ALL {
                    v.push(Triple(a, b, c));
                }
            }
        }
        v
    }

    /// Which components are `out`.
    pub fn signature(self) -> [bool; 3] {
        [self.0 == WordType::Out, self.1 == WordType::Out, self.2 == WordType::Out]
    }

    pub fn components(self) -> [WordType; 3] {
        [self.0, self.1, self.2]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Unsupported(format!("malformed triple `{s}`")));
        }
        Ok(Triple(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?))
    }
}

/// Generalised component of a representative triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RepType {
    Out,
    Fac,
    Pre,
    Suf,
    Ps,
    In,
}

impl RepType {
    pub fn as_str(self) -> &'static str {
        match self {
            RepType::Out => "OUT",
            RepType::Fac => "FAC",
            RepType::Pre => "PRE",
            RepType::Suf => "SUF",
            RepType::Ps => "PS",
            RepType::In => "IN",
        }
    }

    /// Generalises the set of types seen at one position.
    pub fn generalize(seen: &BTreeSet<WordType>) -> RepType {
        let has = |t| seen.contains(&t);
        if has(WordType::Fac) {
            RepType::Fac
        } else if has(WordType::Pre) && has(WordType::Suf) {
            RepType::Ps
        } else if has(WordType::Pre) {
            RepType::Pre
        } else if has(WordType::Suf) {
            RepType::Suf
        } else if has(WordType::In) {
            RepType::In
        } else {
            RepType::Out
        }
    }
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [RepType::Out, RepType::Fac, RepType::Pre, RepType::Suf, RepType::Ps, RepType::In]
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unsupported(format!("unknown representative type `{s}`")))
    }
}

/// A representative triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Representative(pub RepType, pub RepType, pub RepType);

impl Representative {
    /// Three-letter lowercase abbreviation such as `pfs` or `ooo`.
    pub fn short(self) -> String {
        [self.0, self.1, self.2]
            .iter()
            .map(|r| match r {
                RepType::Ps => 'b',
                other => other.as_str().chars().next().unwrap().to_ascii_lowercase(),
            })
            .collect()
    }
}

impl fmt::Display for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

impl FromStr for Representative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Unsupported(format!("malformed representative `{s}`")));
        }
        Ok(Representative(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?))
    }
}

/// The five condition languages of a pattern language, over `{<,=,>}`.
#[derive(Debug, Clone)]
pub struct TypeLanguages {
    langs: [Automaton; 5],
}

impl TypeLanguages {
    pub fn new(l: &Automaton) -> TypeLanguages {
        let (st, pl) = (star(), plus());
        let l_any = cat(&[&st, l, &st]);
        let l_pre = cat(&[l, &pl]);
        let l_suf = cat(&[&pl, l]);
        let not = |x: &Automaton| st.difference(x);
        let (no_pre, no_suf, no_l) = (not(&l_pre), not(&l_suf), not(l));
        let out = pl.difference(&l_any);
        let fac = cat(&[&pl, l, &pl]).intersect(&no_pre).intersect(&no_suf).intersect(&no_l);
        let pre = l_pre.intersect(&no_suf).intersect(&no_l);
        let suf = l_suf.intersect(&no_pre).intersect(&no_l);
        let inn = cat(&[l, &st]).intersect(&cat(&[&st, l]));
        TypeLanguages { langs: [out, fac, pre, suf, inn] }
    }

    pub fn get(&self, t: WordType) -> &Automaton {
        &self.langs[t.index()]
    }

    /// The unique type whose language accepts `w`.
    pub fn classify(&self, w: &[Letter]) -> Result<WordType> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(l) = w.iter().find(|l| !l.is_base()) {
            return Err(Error::LetterOutsideAlphabet(l.to_string()));
        }
        let hits: Vec<WordType> = WordType::ALL.into_iter().filter(|&t| self.get(t).accepts(w)).collect();
        debug_assert_eq!(hits.len(), 1, "word types must partition the non-empty words");
        Ok(hits[0])
    }
}

/// Type of the non-empty word `w` with respect to `p`.
pub fn word_type(w: &[Letter], p: &Pattern) -> Result<WordType> {
    TypeLanguages::new(p.language()).classify(w)
}

/// The four synchronised components whose intersection is a type language.
#[derive(Debug, Clone)]
pub struct TypeAnalysis {
    doubly_shuffled: Automaton,
    first: [Automaton; 5],
    middle: [Automaton; 5],
    last: [Automaton; 5],
}

impl TypeAnalysis {
    pub fn new(l: &Automaton) -> TypeAnalysis {
        let types = TypeLanguages::new(l);
        let (st, pl, sy) = (star(), plus(), s());
        let build = |f: &dyn Fn(&Automaton) -> Automaton| -> [Automaton; 5] { WordType::ALL.map(|t| f(types.get(t))) };
        let first = build(&|lt| cat(&[&shuffled(lt, 1), &sy, &st]));
        let middle = build(&|lt| cat(&[&st, &sy, lt, &sy, &pl]).union(&cat(&[&pl, &sy, lt, &sy, &st])));
        let last = build(&|lt| cat(&[&st, &sy, &shuffled(lt, 1)]));
        TypeAnalysis { doubly_shuffled: shuffled(l, 2), first, middle, last }
    }

    fn parts(&self, t: Triple) -> [&Automaton; 4] {
        [&self.doubly_shuffled, &self.first[t.0.index()], &self.middle[t.1.index()], &self.last[t.2.index()]]
    }

    /// The type language of `t`, over `{<,=,>,s1}`.
    pub fn language(&self, t: Triple) -> Automaton {
        let [a, b, c, d] = self.parts(t);
        a.intersect(b).intersect(c).intersect(d)
    }

    /// A shortest word of the type language of `t`.
    pub fn witness(&self, t: Triple) -> Option<Vec<Letter>> {
        Automaton::common_word(&self.parts(t))
    }

    /// Every triple whose type language is non-empty.
    pub fn feasible(&self) -> BTreeSet<Triple> {
        Triple::all().into_par_iter().filter(|&t| self.witness(t).is_some()).collect()
    }
}

/// Type language of `t` for the pattern `p`.
pub fn type_language(p: &Pattern, t: Triple) -> Automaton {
    TypeAnalysis::new(p.language()).language(t)
}

/// Splits a type-language word `u s v s z` into `(uv, v, vz)`.
pub fn decode_witness(word: &[Letter]) -> Option<(Vec<Letter>, Vec<Letter>, Vec<Letter>)> {
    let marks: Vec<usize> = word.iter().enumerate().filter(|(_, &l)| l == Letter::S).map(|(k, _)| k).collect();
    let [i, j] = marks[..] else { return None };
    let (u, v, z) = (&word[..i], &word[i + 1..j], &word[j + 1..]);
    Some(([u, v].concat(), v.to_vec(), [v, z].concat()))
}

/// Feasible triples of a pattern language.
pub fn feasible_triples_of(l: &Automaton) -> BTreeSet<Triple> {
    TypeAnalysis::new(l).feasible()
}

fn cache() -> &'static Mutex<HashMap<String, Arc<BTreeSet<Triple>>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<BTreeSet<Triple>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Feasible triples of `p`, memoised by regular expression.
pub fn feasible_triples(p: &Pattern) -> Arc<BTreeSet<Triple>> {
    let key = p.regex().to_string();
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let value = Arc::new(feasible_triples_of(p.language()));
    cache().lock().unwrap().insert(key, Arc::clone(&value));
    value
}

/// Groups triples by signature and generalises each group.
pub fn generalize(triples: &BTreeSet<Triple>) -> BTreeSet<Representative> {
    let mut groups: BTreeMap<[bool; 3], [BTreeSet<WordType>; 3]> = BTreeMap::new();
    for t in triples {
        let g = groups.entry(t.signature()).or_default();
        for (k, c) in t.components().into_iter().enumerate() {
            g[k].insert(c);
        }
    }
    groups
        .values()
        .map(|[a, b, c]| Representative(RepType::generalize(a), RepType::generalize(b), RepType::generalize(c)))
        .collect()
}

/// The class of `p`: its set of representative triples.
pub fn representatives(p: &Pattern) -> BTreeSet<Representative> {
    generalize(&feasible_triples(p))
}

/// One row of the witness corpus.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub triple: Triple,
    pub witness: String,
}

/// The 61 feasible triples with a witness pattern language each.
pub fn witness_corpus() -> Result<Vec<WitnessRow>> {
    include_str!("../data/witnesses.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (t, w) =
                line.split_once('|').ok_or_else(|| Error::Unsupported(format!("malformed witness row `{line}`")))?;
            Ok(WitnessRow { triple: t.trim().parse()?, witness: w.trim().to_string() })
        })
        .collect()
}

/// Outcome for one witness row.
#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub triple: Triple,
    pub witness: String,
    /// Decoded sample word realising the triple, when found.
    pub sample: Option<String>,
    pub passed: bool,
}

/// A triple outside the map found feasible for some language.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub source: String,
    pub triple: Triple,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub rows: Vec<RowCheck>,
    /// Number of languages swept for infeasible triples.
    pub languages_swept: usize,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed) && self.violations.is_empty()
    }
}

/// Checks every witness row and sweeps the catalog and the witnesses for
/// triples outside the map.
pub fn verify_feasibility_map() -> Result<FeasibilityReport> {
    let corpus = witness_corpus()?;
    let map: BTreeSet<Triple> = corpus.iter().map(|r| r.triple).collect();
    let mut sources: Vec<(String, Automaton)> =
        catalog().iter().map(|p| (p.name().to_string(), p.language().clone())).collect();
    for row in &corpus {
        let ast = regex::parse(&row.witness)?;
        sources.push((row.witness.clone(), Automaton::compile(&ast, &Letter::BASE)?));
    }
    let analyses: Vec<(String, TypeAnalysis)> =
        sources.into_par_iter().map(|(name, l)| (name, TypeAnalysis::new(&l))).collect();
    let witness_analysis: HashMap<&str, &TypeAnalysis> = analyses.iter().map(|(n, a)| (n.as_str(), a)).collect();
    let rows = corpus
        .par_iter()
        .map(|row| {
            let found = witness_analysis[row.witness.as_str()].witness(row.triple);
            let sample = found.as_deref().map(crate::automata::format_word);
            RowCheck { triple: row.triple, witness: row.witness.clone(), sample, passed: found.is_some() }
        })
        .collect();
    let outside: Vec<Triple> = Triple::all().into_iter().filter(|t| !map.contains(t)).collect();
    let violations = analyses
        .par_iter()
        .flat_map_iter(|(name, a)| {
            outside
                .iter()
                .filter(|&&t| a.witness(t).is_some())
                .map(|&t| Violation { source: name.clone(), triple: t })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(FeasibilityReport { rows, languages_swept: analyses.len(), violations })
}
