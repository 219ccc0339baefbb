//! Regression corpus of invalid-equation counterexamples.

use serde::Serialize;

use super::{oracle_windows, slide_check_with, EquationKind};
use crate::error::{Error, Result};
use crate::patterns::{lookup, Pattern};
use crate::series::{FeatureKind, Series};

const CORPUS: &str = include_str!("../../data/counterexamples.txt");

/// Splits a constraint name such as `sum_width_peak` into its feature and pattern.
///
/// `nb_` counts occurrences; `sum_height_` sums the flat level, read as `min`.
pub fn parse_constraint(name: &str) -> Result<(FeatureKind, &'static Pattern)> {
    const PREFIXES: [(&str, FeatureKind); 6] = [
        ("nb_", FeatureKind::One),
        ("sum_width_", FeatureKind::Width),
        ("sum_surf_", FeatureKind::Surf),
        ("sum_max_", FeatureKind::Max),
        ("sum_min_", FeatureKind::Min),
        ("sum_height_", FeatureKind::Min),
    ];
    let (f, rest) = PREFIXES
        .iter()
        .find_map(|(prefix, f)| name.strip_prefix(prefix).map(|rest| (*f, rest)))
        .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
    Ok((f, lookup(rest)?))
}

/// One corpus row; `case` is `None` when no counterexample exists.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleRow {
    pub constraint: String,
    pub equation: EquationKind,
    pub case: Option<Case>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub m: usize,
    pub series: Vec<i64>,
    pub expected: Vec<i64>,
    pub computed: Vec<i64>,
    /// 0-based windows where the invalid equation differs from the expected value.
    pub marked: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowOutcome {
    pub constraint: String,
    pub equation: EquationKind,
    pub skipped: bool,
    pub passed: bool,
    pub oracle: Vec<i64>,
    pub computed: Vec<i64>,
    pub detail: String,
}

fn parse_list(text: &str) -> Result<(Vec<i64>, Vec<usize>)> {
    let mut values = Vec::new();
    let mut marked = Vec::new();
    for (k, tok) in text.split(',').map(str::trim).enumerate() {
        let tok = match tok.strip_prefix('*') {
            Some(rest) => {
                marked.push(k);
                rest
            }
            None => tok,
        };
        values.push(tok.parse().map_err(|e| Error::SeriesParse(format!("`{tok}`: {e}")))?);
    }
    Ok((values, marked))
}

fn parse_row(line: &str) -> Result<CounterexampleRow> {
    let bad = || Error::SeriesParse(format!("malformed corpus row `{line}`"));
    let mut parts = line.split('|').map(str::trim);
    let head: Vec<&str> = parts.next().ok_or_else(bad)?.split_whitespace().collect();
    let (constraint, equation) = match head.as_slice() {
        [c, e, _] => (c.to_string(), e.parse()?),
        _ => return Err(bad()),
    };
    if head[2] == "-" {
        return Ok(CounterexampleRow { constraint, equation, case: None });
    }
    let m = head[2].parse().map_err(|_| bad())?;
    let series = parse_list(parts.next().ok_or_else(bad)?)?.0;
    let expected = parse_list(parts.next().ok_or_else(bad)?)?.0;
    let (computed, marked) = parse_list(parts.next().ok_or_else(bad)?)?;
    Ok(CounterexampleRow { constraint, equation, case: Some(Case { m, series, expected, computed, marked }) })
}

/// All corpus rows, including those without a counterexample.
pub fn counterexample_corpus() -> Result<Vec<CounterexampleRow>> {
    CORPUS.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(parse_row).collect()
}

/// Replays every row: the oracle must give the expected vector, the named
/// equation the printed wrong vector, and they must differ exactly at the
/// marked windows.
pub fn reproduce_counterexamples() -> Result<Vec<RowOutcome>> {
    counterexample_corpus()?.into_iter().map(replay).collect()
}

fn replay(row: CounterexampleRow) -> Result<RowOutcome> {
    let mut out = RowOutcome {
        constraint: row.constraint.clone(),
        equation: row.equation,
        skipped: row.case.is_none(),
        passed: true,
        oracle: Vec::new(),
        computed: Vec::new(),
        detail: String::new(),
    };
    let Some(case) = row.case else {
        return Ok(out);
    };
    let (f, p) = parse_constraint(&row.constraint)?;
    let x = Series::new(case.series)?;
    out.oracle = oracle_windows(f, p, case.m, &x)?;
    out.computed = slide_check_with(f, p, case.m, &x, row.equation)?.values;
    let differing: Vec<usize> = (0..out.oracle.len()).filter(|&k| out.oracle[k] != out.computed[k]).collect();
    let mut problems = Vec::new();
    if out.oracle != case.expected {
        problems.push(format!("oracle {:?} != expected {:?}", out.oracle, case.expected));
    }
    if out.computed != case.computed {
        problems.push(format!("{} gives {:?} != printed {:?}", row.equation, out.computed, case.computed));
    }
    if differing != case.marked {
        problems.push(format!("differs at {differing:?}, marked {:?}", case.marked));
    }
    out.passed = problems.is_empty();
    out.detail = problems.join("; ");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_names() {
        let (f, p) = parse_constraint("sum_width_decreasing_sequence").unwrap();
        assert_eq!((f, p.name()), (FeatureKind::Width, "decreasing_sequence"));
        let (f, p) = parse_constraint("nb_proper_plateau").unwrap();
        assert_eq!((f, p.name()), (FeatureKind::One, "proper_plateau"));
        assert!(parse_constraint("avg_peak").is_err());
    }

    #[test]
    fn corpus_shape() {
        let rows = counterexample_corpus().unwrap();
        assert_eq!(rows.len(), 207);
        assert_eq!(rows.iter().filter(|r| r.case.is_none()).count(), 113);
    }

    #[test]
    fn every_row_reproduces() {
        let failed: Vec<String> = reproduce_counterexamples()
            .unwrap()
            .into_iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{} {}: {}", r.constraint, r.equation, r.detail))
            .collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
