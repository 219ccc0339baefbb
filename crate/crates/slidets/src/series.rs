//! Time-series semantics: signatures, maximal pattern occurrences, feature
//! values and the brute-force window oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::Letter;
use crate::error::{Error, Result};
use crate::patterns::{check_convex, Pattern};

/// A non-empty integer time series `x_1 … x_n`, indexed from 1 in the API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Series {
    values: Vec<i64>,
}

impl Series {
    pub fn new(values: Vec<i64>) -> Result<Series> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        Ok(Series { values })
    }

    /// Parses integers separated by whitespace or commas; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Series> {
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                values.push(tok.parse::<i64>().map_err(|e| Error::SeriesParse(format!("`{tok}`: {e}")))?);
            }
        }
        Series::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Value at the 1-based index `k`.
    pub fn at(&self, k: usize) -> i64 {
        self.values[k - 1]
    }

    /// The series read backwards.
    pub fn reversed(&self) -> Series {
        Series { values: self.values.iter().rev().copied().collect() }
    }

    fn check_range(&self, lo: usize, hi: usize) -> Result<()> {
        if lo < 1 || lo > hi || hi > self.len() {
            return Err(Error::BadRange { lo, hi, n: self.len() });
        }
        Ok(())
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Series::parse(s)
    }
}

/// The `n − 1` comparison letters of a series; letter `k` (0-based) compares
/// `x_{k+1}` with `x_{k+2}`.
pub fn signature(x: &Series) -> Result<Vec<Letter>> {
    if x.len() < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: x.len() });
    }
    Ok(x.values.windows(2).map(|w| Letter::compare(w[0], w[1])).collect())
}

/// A maximal occurrence with time-series extent `[start, end]` (1-based,
/// inclusive); its signature factor covers letters `start … end − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Occurrence {
    pub start: usize,
    pub end: usize,
}

impl Occurrence {
    /// Extent after removing `b` values on the left and `a` on the right.
    pub fn trimmed(&self, p: &Pattern) -> (usize, usize) {
        (self.start + p.b(), self.end - p.a())
    }
}

/// Maximal occurrences of `p` inside `x_lo … x_hi`, sorted by start.
///
/// Quadratic reference scan: for every start, run the pattern automaton as far
/// as it stays alive and keep the longest accepted end; a start is kept when its
/// longest end exceeds the longest end of every earlier start.
///
/// Panics if two occurrences of a convex pattern share more than one letter.
pub fn maximal_occurrences(p: &Pattern, x: &Series, lo: usize, hi: usize) -> Result<Vec<Occurrence>> {
    x.check_range(lo, hi)?;
    let dfa = p.language();
    let sig: Vec<Letter> = x.values[lo - 1..hi].windows(2).map(|w| Letter::compare(w[0], w[1])).collect();
    let mut out = Vec::new();
    let mut best: Option<usize> = None;
    for start in 0..sig.len() {
        let mut q = 0;
        let mut longest = None;
        for (k, &l) in sig.iter().enumerate().skip(start) {
            match dfa.step(q, l) {
                Some(t) => q = t,
                None => break,
            }
            if dfa.is_accepting(q) {
                longest = Some(k);
            }
        }
        if let Some(e) = longest {
            if best.is_none_or(|b| e > b) {
                best = Some(e);
                out.push(Occurrence { start: lo + start, end: lo + e + 1 });
            }
        }
    }
    if out.len() > 1 && check_convex(p) {
        for w in out.windows(2) {
            assert!(
                w[1].start + 1 >= w[0].end,
                "convex pattern `{}` has maximal occurrences sharing two letters: {:?} and {:?}",
                p.name(),
                w[0],
                w[1]
            );
        }
    }
    Ok(out)
}

/// Feature applied to each trimmed occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    One,
    Width,
    Surf,
    Max,
    Min,
}

/// Algebraic properties of a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FeatureFlags {
    pub sum_decomposition: bool,
    pub same_value: bool,
    pub single_position: bool,
    pub positive: bool,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 5] =
        [FeatureKind::One, FeatureKind::Width, FeatureKind::Surf, FeatureKind::Max, FeatureKind::Min];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::One => "one",
            FeatureKind::Width => "width",
            FeatureKind::Surf => "surf",
            FeatureKind::Max => "max",
            FeatureKind::Min => "min",
        }
    }

    pub fn flags(self) -> FeatureFlags {
        let mut f = FeatureFlags::default();
        match self {
            FeatureKind::One => {
                f.same_value = true;
                f.positive = true;
            }
            FeatureKind::Width => {
                f.sum_decomposition = true;
                f.positive = true;
            }
            FeatureKind::Surf => f.sum_decomposition = true,
            FeatureKind::Max | FeatureKind::Min => f.single_position = true,
        }
        f
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureKind {
    type Err = Error;

    /// Accepts the five kinds plus the catalog spellings `nb` and `height`;
    /// `height` reads the flat trimmed region of its patterns, taken as `min`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one" | "nb" => Ok(FeatureKind::One),
            "width" => Ok(FeatureKind::Width),
            "surf" | "surface" => Ok(FeatureKind::Surf),
            "max" => Ok(FeatureKind::Max),
            "min" | "height" => Ok(FeatureKind::Min),
            _ => Err(Error::UnknownFeature(s.to_string())),
        }
    }
}

/// Value of `f` on one occurrence; trims come from `p`.
pub fn feature_value(f: FeatureKind, p: &Pattern, occ: Occurrence, x: &Series) -> Result<i64> {
    let (lo, hi) = occ.trimmed(p);
    let part = &x.values[lo - 1..hi];
    Ok(match f {
        FeatureKind::One => 1,
        FeatureKind::Width => (hi + 1 - lo) as i64,
        FeatureKind::Surf => part.iter().try_fold(0i64, |acc, &v| acc.checked_add(v)).ok_or(Error::Overflow)?,
        FeatureKind::Max => *part.iter().max().expect("trimmed extent is non-empty"),
        FeatureKind::Min => *part.iter().min().expect("trimmed extent is non-empty"),
    })
}

/// Sum of `f` over the maximal occurrences of `p` inside `x_lo … x_hi`.
pub fn window_oracle(f: FeatureKind, p: &Pattern, x: &Series, lo: usize, hi: usize) -> Result<i64> {
    maximal_occurrences(p, x, lo, hi)?
        .into_iter()
        .try_fold(0i64, |acc, occ| acc.checked_add(feature_value(f, p, occ, x)?).ok_or(Error::Overflow))
}

/// Feature-pattern properties: single position at a fixed end of an
/// inflexion-free pattern, or at the only inflexion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PairFlags {
    pub spn: bool,
    pub spo: bool,
}

const FIVE_FEATURES: [&str; 12] = [
    "decreasing_sequence",
    "increasing_sequence",
    "strictly_decreasing_sequence",
    "strictly_increasing_sequence",
    "zigzag",
    "decreasing_terrace",
    "increasing_terrace",
    "plain",
    "plateau",
    "proper_plain",
    "proper_plateau",
    "steady_sequence",
];

/// Patterns whose extremum sits at a fixed end of every trimmed occurrence.
const FIXED_END: [&str; 7] = [
    "decreasing_sequence",
    "increasing_sequence",
    "strictly_decreasing_sequence",
    "strictly_increasing_sequence",
    "steady_sequence",
    "decreasing_terrace",
    "increasing_terrace",
];

/// Features defined for `p` in the constraint catalog.
pub fn catalog_features(p: &Pattern) -> &'static [FeatureKind] {
    use FeatureKind::*;
    match p.name() {
        name if FIVE_FEATURES.contains(&name) => &[One, Width, Surf, Max, Min],
        "gorge" | "valley" => &[One, Width, Surf, Min],
        "peak" | "summit" => &[One, Width, Surf, Max],
        _ => &[],
    }
}

/// Fails unless `(f, p)` is a constraint of the catalog.
pub fn ensure_catalog(f: FeatureKind, p: &Pattern) -> Result<()> {
    if catalog_features(p).contains(&f) {
        Ok(())
    } else {
        Err(Error::NotInCatalog { feature: f.to_string(), pattern: p.name().to_string() })
    }
}

/// Tabulated SPN/SPO flags of a catalog constraint.
pub fn feature_pattern_flags(f: FeatureKind, p: &Pattern) -> Result<PairFlags> {
    ensure_catalog(f, p)?;
    if !f.flags().single_position {
        return Ok(PairFlags::default());
    }
    let name = p.name();
    let spo = matches!(
        (f, name),
        (_, "plain" | "plateau" | "proper_plain" | "proper_plateau")
            | (FeatureKind::Min, "gorge" | "valley")
            | (FeatureKind::Max, "summit" | "peak")
    );
    Ok(PairFlags { spn: FIXED_END.contains(&name), spo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::format_word;
    use crate::patterns::lookup;

    fn running_series() -> Series {
        Series::parse("3 1 3 3 2 1 1 2 2 2 4 4 3 1 2 2").unwrap()
    }

    #[test]
    fn signature_of_example() {
        let sig = signature(&running_series()).unwrap();
        assert_eq!(format_word(&sig), "><=>>=<==<=>><=");
        assert_eq!(format_word(&signature(&Series::parse("4 4 4").unwrap()).unwrap()), "==");
        assert_eq!(format_word(&signature(&Series::parse("1,2,3").unwrap()).unwrap()), "<<");
        assert!(signature(&Series::parse("1").unwrap()).is_err());
    }

    #[test]
    fn parse_accepts_commas_and_comments() {
        let x = Series::parse("# header\n1, -2 3\n\n4").unwrap();
        assert_eq!(x.values(), &[1, -2, 3, 4]);
        assert!(Series::parse("1 x").is_err());
        assert!(Series::parse("# only a comment").is_err());
    }

    #[test]
    fn inc_seq_occurrences() {
        let p = lookup("inc_seq").unwrap();
        let x = running_series();
        let occ = maximal_occurrences(p, &x, 1, 16).unwrap();
        let spans: Vec<(usize, usize)> = occ.iter().map(|o| (o.start, o.end)).collect();
        assert_eq!(spans, vec![(2, 3), (7, 11), (14, 15)]);
        let occ = maximal_occurrences(p, &x, 1, 10).unwrap();
        let spans: Vec<(usize, usize)> = occ.iter().map(|o| (o.start, o.end)).collect();
        assert_eq!(spans, vec![(2, 3), (7, 8)]);
        assert!(maximal_occurrences(p, &Series::parse("3 2 1").unwrap(), 1, 3).unwrap().is_empty());
    }

    #[test]
    fn feature_values() {
        let p = lookup("inc_seq").unwrap();
        let x = running_series();
        let occ = Occurrence { start: 7, end: 11 };
        assert_eq!(feature_value(FeatureKind::Surf, p, occ, &x).unwrap(), 11);
        assert_eq!(feature_value(FeatureKind::One, p, occ, &x).unwrap(), 1);
        assert_eq!(feature_value(FeatureKind::Max, p, occ, &x).unwrap(), 4);
        let plain = lookup("plain").unwrap();
        let y = Series::parse("3 1 1 1 4").unwrap();
        assert_eq!(feature_value(FeatureKind::Width, plain, Occurrence { start: 1, end: 5 }, &y).unwrap(), 3);
    }

    #[test]
    fn oracle_windows() {
        let p = lookup("inc_seq").unwrap();
        let x = running_series();
        assert_eq!(window_oracle(FeatureKind::Surf, p, &x, 1, 10).unwrap(), 7);
        assert_eq!(window_oracle(FeatureKind::Surf, p, &x, 2, 11).unwrap(), 15);
        assert_eq!(window_oracle(FeatureKind::Surf, p, &x, 4, 6).unwrap(), 0);
        assert!(window_oracle(FeatureKind::Surf, p, &x, 0, 3).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let p = lookup("steady_seq").unwrap();
        let x = Series::new(vec![i64::MAX, i64::MAX]).unwrap();
        assert_eq!(window_oracle(FeatureKind::Surf, p, &x, 1, 2), Err(Error::Overflow));
    }

    #[test]
    fn feature_flags_table() {
        let f = FeatureKind::One.flags();
        assert!(f.same_value && f.positive && !f.sum_decomposition && !f.single_position);
        let f = FeatureKind::Width.flags();
        assert!(f.sum_decomposition && f.positive && !f.same_value);
        let f = FeatureKind::Surf.flags();
        assert!(f.sum_decomposition && !f.positive);
        assert!(FeatureKind::Max.flags().single_position && FeatureKind::Min.flags().single_position);
        assert_eq!("nb".parse::<FeatureKind>().unwrap(), FeatureKind::One);
        assert_eq!("height".parse::<FeatureKind>().unwrap(), FeatureKind::Min);
        assert!("area".parse::<FeatureKind>().is_err());
    }

    #[test]
    fn pair_flags() {
        let get = |f, p| feature_pattern_flags(f, lookup(p).unwrap()).unwrap();
        assert!(get(FeatureKind::Min, "dec_seq").spn);
        assert!(get(FeatureKind::Min, "gorge").spo);
        assert!(!get(FeatureKind::Max, "zigzag").spn && !get(FeatureKind::Max, "zigzag").spo);
        assert!(!get(FeatureKind::Min, "valley").spn);
        assert!(feature_pattern_flags(FeatureKind::Max, lookup("gorge").unwrap()).is_err());
        assert!(feature_pattern_flags(FeatureKind::One, lookup("inflexion").unwrap()).is_err());
    }
}
