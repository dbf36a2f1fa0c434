//! Text and JSON renderings of [`EvalScores`].

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::category::Category;
use crate::eval::{Counts, EdgeClass, EvalScores};

/// Which parts of a score report to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub labeled: bool,
    pub unlabeled: bool,
    pub categories: bool,
}

impl Default for Sections {
    fn default() -> Self {
        Sections {
            labeled: true,
            unlabeled: true,
            categories: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StratumReport {
    pub matched: usize,
    pub predicted: usize,
    pub gold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl From<Counts> for StratumReport {
    fn from(c: Counts) -> Self {
        StratumReport {
            matched: c.matched,
            predicted: c.predicted,
            gold: c.gold,
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeled: Option<BTreeMap<EdgeClass, StratumReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unlabeled: Option<BTreeMap<EdgeClass, StratumReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub categories: Option<BTreeMap<Category, StratumReport>>,
}

impl ScoreReport {
    pub fn new(scores: &EvalScores, sections: Sections) -> Self {
        let strata = |labeled: bool| {
            EdgeClass::ALL
                .into_iter()
                .map(|c| (c, scores.stratum(labeled, c).into()))
                .collect()
        };
        ScoreReport {
            labeled: sections.labeled.then(|| strata(true)),
            unlabeled: sections.unlabeled.then(|| strata(false)),
            categories: sections.categories.then(|| {
                scores
                    .categories
                    .iter()
                    .map(|(&c, &counts)| (c, counts.into()))
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned table: stratum, P, R, F1, matched/predicted/gold.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let header = |out: &mut String, first: &str| {
            writeln!(
                out,
                "{:<20} {:>8} {:>8} {:>8}  matched/predicted/gold",
                first, "P", "R", "F1"
            )
            .unwrap();
        };
        let row = |out: &mut String, name: &str, r: &StratumReport| {
            writeln!(
                out,
                "{:<20} {:>8.4} {:>8.4} {:>8.4}  {}/{}/{}",
                name, r.precision, r.recall, r.f1, r.matched, r.predicted, r.gold
            )
            .unwrap();
        };
        if self.labeled.is_some() || self.unlabeled.is_some() {
            header(&mut out, "stratum");
            for (mode, strata) in [("labeled", &self.labeled), ("unlabeled", &self.unlabeled)] {
                if let Some(strata) = strata {
                    for (class, r) in strata {
                        row(&mut out, &format!("{mode} {}", class.name()), r);
                    }
                }
            }
        }
        if let Some(categories) = &self.categories {
            if !out.is_empty() {
                out.push('\n');
            }
            header(&mut out, "category");
            for (c, r) in categories {
                row(&mut out, &format!("{} ({})", c.longname(), c.code()), r);
            }
        }
        out
    }
}

fn percent(x: f64) -> String {
    format!("{:.1}", 100.0 * x)
}

/// System-comparison layout: one row per system with labeled and unlabeled
/// F1 (percent) for all, primary and remote edges.
pub fn results_table(rows: &[(&str, &EvalScores)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(4);
    let mut out = String::new();
    let banner = format!(
        "{:>2}  {:<width$}  {:^20}  {:^20}",
        "", "", "Labeled", "Unlabeled"
    );
    writeln!(out, "{}", banner.trim_end()).unwrap();
    writeln!(
        out,
        "{:>2}  {:<width$}  {:>6} {:>6} {:>6}  {:>6} {:>6} {:>6}",
        "#", "Team", "All", "Prim.", "Rem.", "All", "Prim.", "Rem."
    )
    .unwrap();
    for (rank, (name, scores)) in rows.iter().enumerate() {
        write!(out, "{:>2}  {:<width$}", rank + 1, name).unwrap();
        for labeled in [true, false] {
            out.push(' ');
            for class in EdgeClass::ALL {
                write!(out, " {:>6}", percent(scores.stratum(labeled, class).f1())).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Per-category labeled F1 (rounded percent): one row per category in
/// inventory order followed by Punctuation, one column per system.
pub fn category_table(columns: &[(&str, &EvalScores)]) -> String {
    let mut out = String::from("category");
    for (name, _) in columns {
        write!(out, "\t{name}").unwrap();
    }
    out.push('\n');
    for c in Category::CURRENT {
        if columns.iter().all(|(_, s)| !s.categories.contains_key(&c)) {
            continue;
        }
        out.push_str(&c.longname().replace(' ', ""));
        for (_, scores) in columns {
            let counts = scores.categories.get(&c).copied().unwrap_or_default();
            write!(out, "\t{:.0}", 100.0 * counts.f1()).unwrap();
        }
        out.push('\n');
    }
    out
}
