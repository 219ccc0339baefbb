//! Linear-time sliding checker: equation selection, prefix/suffix profiles,
//! presence indices and the per-window contributions.

mod corpus;
mod presence;
mod register;
mod scan;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use corpus::{
    counterexample_corpus, parse_constraint, reproduce_counterexamples, Case, CounterexampleRow, RowOutcome,
};
pub use presence::{presence_strategy, PresenceIndex, PresenceStrategy};
pub use register::{plain_end, plain_trace, zigzag_end, zigzag_trace, EndTrace, RegisterTrace};
pub use scan::{forward_registers, prefix_profile, scan_occurrences, scan_window, PrefixProfile};

use crate::classify::representatives;
use crate::error::{Error, Result};
use crate::patterns::{check_exclude_out_in, Pattern};
use crate::series::{ensure_catalog, feature_pattern_flags, FeatureKind, Series};

/// How a window value is derived from the prefix and suffix aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    /// `fwd[j] + bwd[i] − total`.
    Plain,
    /// `max(0, fwd[j] + bwd[i] − total)`.
    Clamp,
    /// 0 when the window holds no occurrence, else the plain value.
    Guard,
    /// No equation is valid; each window is scanned on its own.
    #[serde(rename = "none")]
    NoneFallback,
}

impl EquationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::Plain => "plain",
            EquationKind::Clamp => "clamp",
            EquationKind::Guard => "guard",
            EquationKind::NoneFallback => "none",
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(EquationKind::Plain),
            "clamp" => Ok(EquationKind::Clamp),
            "guard" => Ok(EquationKind::Guard),
            "none" | "fallback" => Ok(EquationKind::NoneFallback),
            _ => Err(Error::Unsupported(format!("equation `{s}`"))),
        }
    }
}

/// The equations valid for a catalog constraint, derived from the pattern's
/// classes, its exclude-out-in flag and the feature flags.
pub fn valid_equations(f: FeatureKind, p: &Pattern) -> Result<BTreeSet<EquationKind>> {
    ensure_catalog(f, p)?;
    let classes: BTreeSet<String> = representatives(p).into_iter().map(|r| r.short()).collect();
    let within = |allowed: &[&str]| classes.iter().all(|c| allowed.contains(&c.as_str()));
    let flags = f.flags();
    let pair = feature_pattern_flags(f, p)?;
    let (sd, sv, pos) = (flags.sum_decomposition, flags.same_value, flags.positive);

    const S2: &[&str] = &["pfs", "iii"];
    const S6: &[&str] = &["pfs", "iii", "poo", "oos", "ioo", "ooi"];
    const S7: &[&str] = &["pfs", "iii", "poo", "oos", "ioo", "ooi", "ooo"];
    const S7_POS: &[&str] = &["pfs", "iii", "poo", "oos", "ioo", "ooi", "ooo", "pos"];
    const S9: &[&str] = &["pfs", "iii", "poo", "oos", "ioo", "ooi", "ooo", "pos", "ioi"];

    let mut out = BTreeSet::new();
    if (within(S2) && (sd || pair.spn)) || (within(S6) && (sv || pair.spo)) {
        out.insert(EquationKind::Plain);
    }
    if pos && ((within(S7) && (sd || sv)) || (within(S7_POS) && sd && check_exclude_out_in(p))) {
        out.insert(EquationKind::Clamp);
    }
    let nested = classes.contains("pfs") || classes.contains("iii");
    if within(S9) && (!nested || sd || sv || pair.spn || pair.spo) {
        out.insert(EquationKind::Guard);
    }
    Ok(out)
}

/// Cheapest valid equation, preferring plain, then clamp, then guard.
pub fn select_equation(f: FeatureKind, p: &Pattern) -> Result<EquationKind> {
    Ok(valid_equations(f, p)?.into_iter().next().unwrap_or(EquationKind::NoneFallback))
}

/// Per-window contributions of a sliding constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub m: usize,
    /// `values[i − 1]` is the contribution of the window `x_i … x_{i+m−1}`.
    pub values: Vec<i64>,
    pub low: i64,
    pub up: i64,
    pub equation: EquationKind,
    /// Set when no equation applies and every window was scanned separately.
    pub fallback: bool,
}

impl WindowReport {
    /// Whether every contribution lies in `[low, up]`.
    pub fn within(&self, low: Option<i64>, up: Option<i64>) -> bool {
        low.is_none_or(|l| self.low >= l) && up.is_none_or(|u| self.up <= u)
    }
}

/// Checks `slide(f, p, m)` on `x` with the selected equation.
pub fn slide_check(f: FeatureKind, p: &Pattern, m: usize, x: &Series) -> Result<WindowReport> {
    let eq = select_equation(f, p)?;
    slide_check_with(f, p, m, x, eq)
}

/// Evaluates every window with the given equation, valid or not.
pub fn slide_check_with(f: FeatureKind, p: &Pattern, m: usize, x: &Series, eq: EquationKind) -> Result<WindowReport> {
    let n = x.len();
    if m <= 1 || m > n {
        return Err(Error::BadWindow { m, n });
    }
    let count = n - m + 1;
    let values: Vec<i64> = match eq {
        EquationKind::NoneFallback => {
            (1..=count).into_par_iter().map(|i| scan_window(p, f, x, i, i + m - 1)).collect::<Result<_>>()?
        }
        _ => {
            let prof = prefix_profile(f, p, x)?;
            let presence = match eq {
                EquationKind::Guard => Some(PresenceIndex::build(p, x)?),
                _ => None,
            };
            let mut values = Vec::with_capacity(count);
            for i in 1..=count {
                let j = i + m - 1;
                let plain = prof.fwd[j]
                    .checked_add(prof.bwd[i])
                    .and_then(|s| s.checked_sub(prof.total))
                    .ok_or(Error::Overflow)?;
                values.push(match (eq, &presence) {
                    (EquationKind::Clamp, _) => plain.max(0),
                    (EquationKind::Guard, Some(idx)) if !idx.query(i, j) => 0,
                    _ => plain,
                });
            }
            values
        }
    };
    let low = *values.iter().min().expect("at least one window");
    let up = *values.iter().max().expect("at least one window");
    Ok(WindowReport { m, values, low, up, equation: eq, fallback: eq == EquationKind::NoneFallback })
}

/// Per-window reference values from the quadratic oracle.
pub fn oracle_windows(f: FeatureKind, p: &Pattern, m: usize, x: &Series) -> Result<Vec<i64>> {
    let n = x.len();
    if m <= 1 || m > n {
        return Err(Error::BadWindow { m, n });
    }
    (1..=n - m + 1).map(|i| crate::series::window_oracle(f, p, x, i, i + m - 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{catalog, lookup};

    fn running_series() -> Series {
        Series::parse("3 1 3 3 2 1 1 2 2 2 4 4 3 1 2 2").unwrap()
    }

    #[test]
    fn example_windows() {
        let r = slide_check(FeatureKind::Surf, lookup("inc_seq").unwrap(), 10, &running_series()).unwrap();
        assert_eq!(r.values, vec![7, 15, 11, 11, 11, 14, 14]);
        assert_eq!((r.low, r.up), (7, 15));
        assert!(r.within(Some(7), Some(15)));
        assert!(!r.within(Some(8), None));
    }

    #[test]
    fn selected_equations() {
        let get = |f, p| select_equation(f, lookup(p).unwrap()).unwrap();
        assert_eq!(get(FeatureKind::One, "gorge"), EquationKind::Plain);
        assert_eq!(get(FeatureKind::Surf, "valley"), EquationKind::Guard);
        assert_eq!(get(FeatureKind::Min, "zigzag"), EquationKind::NoneFallback);
        assert_eq!(get(FeatureKind::One, "dec_seq"), EquationKind::Guard);
        assert_eq!(get(FeatureKind::Width, "dec_seq"), EquationKind::Clamp);
        for f in FeatureKind::ALL {
            assert_eq!(get(f, "steady_seq"), EquationKind::Plain);
        }
        let valley = valid_equations(FeatureKind::Surf, lookup("valley").unwrap()).unwrap();
        assert_eq!(valley.into_iter().collect::<Vec<_>>(), vec![EquationKind::Guard]);
        let gorge = valid_equations(FeatureKind::One, lookup("gorge").unwrap()).unwrap();
        assert_eq!(gorge.len(), 3);
        assert!(select_equation(FeatureKind::Max, lookup("gorge").unwrap()).is_err());
    }

    #[test]
    fn forced_equations_reproduce_wrong_values() {
        let p = lookup("dec_seq").unwrap();
        let x = Series::parse("1 0 0 -1").unwrap();
        assert_eq!(slide_check_with(FeatureKind::One, p, 2, &x, EquationKind::Guard).unwrap().values, vec![1, 0, 1]);
        assert_eq!(slide_check_with(FeatureKind::One, p, 2, &x, EquationKind::Plain).unwrap().values, vec![1, 1, 1]);
        let x = Series::parse("2 1 1 1 0").unwrap();
        let plain = slide_check_with(FeatureKind::Surf, p, 2, &x, EquationKind::Plain).unwrap();
        assert_eq!(plain.values, vec![3, -1, -1, 1]);
        let clamp = slide_check_with(FeatureKind::Surf, p, 2, &x, EquationKind::Clamp).unwrap();
        assert_eq!(clamp.values, vec![3, 0, 0, 1]);
    }

    #[test]
    fn fallback_matches_oracle() {
        let p = lookup("zigzag").unwrap();
        let x = Series::parse("1 -3 2 -1 0 -2 1").unwrap();
        let r = slide_check(FeatureKind::Min, p, 4, &x).unwrap();
        assert!(r.fallback);
        assert_eq!(r.values, vec![-3, -1, -1, -2]);
        assert_eq!(r.values, oracle_windows(FeatureKind::Min, p, 4, &x).unwrap());
    }

    #[test]
    fn bad_windows() {
        let p = lookup("inc_seq").unwrap();
        assert!(matches!(slide_check(FeatureKind::One, p, 1, &running_series()), Err(Error::BadWindow { .. })));
        assert!(matches!(slide_check(FeatureKind::One, p, 17, &running_series()), Err(Error::BadWindow { .. })));
    }

    #[test]
    fn checker_matches_oracle_on_fixed_series() {
        let x = Series::parse("0 1 0 1 0 0 1 0 1 2 0 1 1 3 3 2 2 1 5 -1 -1 0 4 4 4 2").unwrap();
        for p in catalog() {
            for &f in crate::series::catalog_features(p) {
                for m in [2, 3, 5, 8] {
                    let r = slide_check(f, p, m, &x).unwrap();
                    assert_eq!(r.values, oracle_windows(f, p, m, &x).unwrap(), "{f} {} m={m} {}", p.name(), r.equation);
                }
            }
        }
    }
}
