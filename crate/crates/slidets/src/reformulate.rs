//! Linear-size constraint model for a sliding sum, emitted as JSON.
//!
//! The model declares the series, the forward and backward register
//! sequences, one variable per window, the whole-series total and the two
//! bounds. Two register-automaton constraints tie the registers to the
//! series, one link per window derives its contribution, and two
//! aggregations define the bounds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::checker::{forward_registers, prefix_profile, EquationKind};
use crate::error::{Error, Result};
use crate::patterns::{lookup, reverse_of, Pattern};
use crate::series::{FeatureKind, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableRole {
    Series,
    Forward,
    Backward,
    Window,
    Total,
    Low,
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub role: VariableRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// `registers[k]` is the feature sum over the maximal occurrences of
    /// `sequence[0 ..= k]`; `result` is the sum over the whole sequence.
    RegisterAutomaton {
        direction: Direction,
        pattern: String,
        feature: FeatureKind,
        sequence: Vec<String>,
        registers: Vec<String>,
        result: String,
    },
    /// `target = forward + backward − total`, floored at 0 when `clamp` is set.
    Link {
        start: usize,
        end: usize,
        target: String,
        forward: String,
        backward: String,
        total: String,
        clamp: bool,
    },
    Aggregation {
        op: Aggregate,
        target: String,
        over: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReformulationModel {
    pub pattern: String,
    pub feature: FeatureKind,
    pub m: usize,
    pub n: usize,
    pub equation: EquationKind,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

fn value(k: usize) -> String {
    format!("x_{k}")
}

fn fwd(k: usize) -> String {
    format!("fwd_{k}")
}

fn bwd(k: usize) -> String {
    format!("bwd_{k}")
}

fn window(i: usize, j: usize) -> String {
    format!("r_{i}_{j}")
}

const TOTAL: &str = "total";
const LOW: &str = "low";
const UP: &str = "up";

/// Builds the model of `slide(f, p, m)` over `n` values with a plain or clamped link.
pub fn emit_reformulation(
    f: FeatureKind,
    p: &Pattern,
    m: usize,
    n: usize,
    equation: EquationKind,
) -> Result<ReformulationModel> {
    if !matches!(equation, EquationKind::Plain | EquationKind::Clamp) {
        return Err(Error::ReformulationUnsupported(equation.to_string()));
    }
    if m <= 1 || m > n {
        return Err(Error::BadWindow { m, n });
    }
    let rev = reverse_of(p).ok_or_else(|| Error::NotReversible(p.name().to_string()))?;
    let var = |name: String, role| Variable { name, role };
    let mut variables = Vec::with_capacity(4 * n + 3);
    variables.extend((1..=n).map(|k| var(value(k), VariableRole::Series)));
    variables.extend((1..=n).map(|k| var(fwd(k), VariableRole::Forward)));
    variables.extend((1..=n).map(|k| var(bwd(k), VariableRole::Backward)));
    variables.extend((1..=n - m + 1).map(|i| var(window(i, i + m - 1), VariableRole::Window)));
    variables.push(var(TOTAL.into(), VariableRole::Total));
    variables.push(var(LOW.into(), VariableRole::Low));
    variables.push(var(UP.into(), VariableRole::Up));

    let mut constraints = vec![
        Constraint::RegisterAutomaton {
            direction: Direction::Forward,
            pattern: p.name().to_string(),
            feature: f,
            sequence: (1..=n).map(value).collect(),
            registers: (1..=n).map(fwd).collect(),
            result: TOTAL.into(),
        },
        Constraint::RegisterAutomaton {
            direction: Direction::Backward,
            pattern: rev.name().to_string(),
            feature: f,
            sequence: (1..=n).rev().map(value).collect(),
            registers: (1..=n).rev().map(bwd).collect(),
            result: TOTAL.into(),
        },
    ];
    let windows: Vec<String> = (1..=n - m + 1).map(|i| window(i, i + m - 1)).collect();
    for i in 1..=n - m + 1 {
        let j = i + m - 1;
        constraints.push(Constraint::Link {
            start: i,
            end: j,
            target: window(i, j),
            forward: fwd(j),
            backward: bwd(i),
            total: TOTAL.into(),
            clamp: equation == EquationKind::Clamp,
        });
    }
    constraints.push(Constraint::Aggregation { op: Aggregate::Min, target: LOW.into(), over: windows.clone() });
    constraints.push(Constraint::Aggregation { op: Aggregate::Max, target: UP.into(), over: windows });
    Ok(ReformulationModel { pattern: p.name().to_string(), feature: f, m, n, equation, variables, constraints })
}

impl ReformulationModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<ReformulationModel> {
        serde_json::from_str(text).map_err(|e| Error::Unsupported(format!("model: {e}")))
    }

    pub fn count(&self, pred: impl Fn(&Constraint) -> bool) -> usize {
        self.constraints.iter().filter(|c| pred(c)).count()
    }

    /// Values of every variable for the ground series `x`, taken from the
    /// prefix profile and the link terms.
    pub fn ground_assignment(&self, x: &Series) -> Result<BTreeMap<String, i64>> {
        if x.len() != self.n {
            return Err(Error::BadWindow { m: self.m, n: x.len() });
        }
        let p = lookup(&self.pattern)?;
        let prof = prefix_profile(self.feature, p, x)?;
        let mut a = BTreeMap::new();
        for k in 1..=self.n {
            a.insert(value(k), x.at(k));
            a.insert(fwd(k), prof.fwd[k]);
            a.insert(bwd(k), prof.bwd[k]);
        }
        a.insert(TOTAL.into(), prof.total);
        let mut values = Vec::new();
        for c in &self.constraints {
            if let Constraint::Link { target, forward, backward, total, clamp, .. } = c {
                let v = link_value(a[forward], a[backward], a[total], *clamp)?;
                a.insert(target.clone(), v);
                values.push(v);
            }
        }
        a.insert(LOW.into(), values.iter().copied().min().unwrap_or(0));
        a.insert(UP.into(), values.iter().copied().max().unwrap_or(0));
        Ok(a)
    }

    /// Constraints violated by `assignment`, as readable messages.
    pub fn violations(&self, assignment: &BTreeMap<String, i64>) -> Result<Vec<String>> {
        let get = |name: &str| {
            assignment.get(name).copied().ok_or_else(|| Error::Unsupported(format!("unassigned variable `{name}`")))
        };
        let mut out = Vec::new();
        for (k, c) in self.constraints.iter().enumerate() {
            match c {
                Constraint::RegisterAutomaton { pattern, feature, sequence, registers, result, .. } => {
                    let values = sequence.iter().map(|v| get(v)).collect::<Result<Vec<_>>>()?;
                    let expected = forward_registers(lookup(pattern)?, *feature, &values)?;
                    for (name, &want) in registers.iter().zip(&expected[1..]) {
                        if get(name)? != want {
                            out.push(format!(
                                "constraint {k}: register {name} = {} but the run gives {want}",
                                get(name)?
                            ));
                        }
                    }
                    let last = *expected.last().expect("n ≥ 1");
                    if get(result)? != last {
                        out.push(format!("constraint {k}: {result} = {} but the run gives {last}", get(result)?));
                    }
                }
                Constraint::Link { target, forward, backward, total, clamp, .. } => {
                    let want = link_value(get(forward)?, get(backward)?, get(total)?, *clamp)?;
                    if get(target)? != want {
                        out.push(format!("constraint {k}: {target} = {} but the link gives {want}", get(target)?));
                    }
                }
                Constraint::Aggregation { op, target, over } => {
                    let values = over.iter().map(|v| get(v)).collect::<Result<Vec<_>>>()?;
                    let want = match op {
                        Aggregate::Min => values.iter().min(),
                        Aggregate::Max => values.iter().max(),
                    };
                    let actual = get(target)?;
                    if let Some(&w) = want.filter(|&&w| w != actual) {
                        out.push(format!("constraint {k}: {target} = {actual} but the aggregation gives {w}"));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn link_value(forward: i64, backward: i64, total: i64, clamp: bool) -> Result<i64> {
    let v = forward.checked_add(backward).and_then(|s| s.checked_sub(total)).ok_or(Error::Overflow)?;
    Ok(if clamp { v.max(0) } else { v })
}
