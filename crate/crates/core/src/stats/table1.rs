use std::io::Read;

use super::frequency::FrequencyRow;
use super::{FrequencyTable, StatsError};

/// One row of a per-project aggregate table: class and fault-type counts
/// with the stated mean and standard deviation of classes per fault.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub project: String,
    pub kloc: Option<u64>,
    pub classes: [u64; 8],
    pub mean: f64,
    pub std: f64,
    pub pure_cf: u64,
    pub pure_df: u64,
    pub mixed: u64,
    pub total: u64,
}

/// Per-project aggregates, plus the stated total row if the file has one.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub projects: Vec<Table1Row>,
    pub stated_total: Option<Table1Row>,
}

const COLUMNS: [&str; 15] = [
    "project", "order", "jump", "call", "pred", "guard", "block", "def", "use", "mean", "std",
    "pure_cf", "pure_df", "mixed", "total",
];

/// True when a CSV header describes aggregates rather than per-fault labels.
pub fn is_table1_header(header: &str) -> bool {
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    COLUMNS.iter().all(|c| cols.contains(c))
}

pub fn read_table1(input: impl Read) -> Result<Table1, StatsError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let bad = |line: u64, message: String| StatsError::Table1 { line, message };
    let header = rdr.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let idx: Vec<usize> = COLUMNS
        .iter()
        .map(|&c| col(c).ok_or_else(|| bad(1, format!("missing column `{c}`"))))
        .collect::<Result<_, _>>()?;
    let kloc = col("kloc");

    let mut projects = Vec::new();
    let mut stated_total = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let get = |i: usize| rec.get(i).unwrap_or("");
        let int = |k: usize| -> Result<u64, StatsError> {
            get(idx[k]).parse().map_err(|_| {
                bad(
                    line,
                    format!("`{}` is not a count: `{}`", COLUMNS[k], get(idx[k])),
                )
            })
        };
        let real = |k: usize| -> Result<f64, StatsError> {
            get(idx[k]).parse().map_err(|_| {
                bad(
                    line,
                    format!("`{}` is not a number: `{}`", COLUMNS[k], get(idx[k])),
                )
            })
        };
        let mut classes = [0; 8];
        for (k, slot) in classes.iter_mut().enumerate() {
            *slot = int(k + 1)?;
        }
        let row = Table1Row {
            project: get(idx[0]).to_string(),
            kloc: kloc.and_then(|i| get(i).parse().ok()),
            classes,
            mean: real(9)?,
            std: real(10)?,
            pure_cf: int(11)?,
            pure_df: int(12)?,
            mixed: int(13)?,
            total: int(14)?,
        };
        if row.pure_cf + row.pure_df + row.mixed != row.total {
            return Err(bad(line, "fault types do not sum to the total".into()));
        }
        if row.classes.iter().any(|&c| c > row.total) {
            return Err(bad(line, "a class count exceeds the total".into()));
        }
        if row.project.eq_ignore_ascii_case("all") {
            stated_total = Some(row);
        } else {
            projects.push(row);
        }
    }
    if projects.is_empty() {
        return Err(StatsError::Empty);
    }
    Ok(Table1 {
        projects,
        stated_total,
    })
}

impl Table1 {
    /// Sums the project rows. The standard deviation is pooled from the
    /// per-project means and deviations, treating them as population values.
    pub fn overall(&self) -> FrequencyRow {
        let mut classes = [0; 8];
        let (mut cf, mut df, mut mixed, mut total) = (0, 0, 0, 0);
        for r in &self.projects {
            for (a, b) in classes.iter_mut().zip(r.classes) {
                *a += b;
            }
            cf += r.pure_cf;
            df += r.pure_df;
            mixed += r.mixed;
            total += r.total;
        }
        let n = total as f64;
        let mean = classes.iter().sum::<u64>() as f64 / n;
        let second_moment: f64 = self
            .projects
            .iter()
            .map(|r| r.total as f64 * (r.std * r.std + r.mean * r.mean))
            .sum::<f64>()
            / n;
        let std = (second_moment - mean * mean).max(0.0).sqrt();
        FrequencyRow {
            group: "All".into(),
            classes,
            pure_cf: cf,
            pure_df: df,
            mixed,
            total,
            mean,
            std,
        }
    }

    /// Checks every count column of the stated total row against the
    /// project sums.
    pub fn check_consistency(&self) -> Result<(), StatsError> {
        let Some(stated) = &self.stated_total else {
            return Ok(());
        };
        let o = self.overall();
        let mut checks: Vec<(&str, u64, u64)> = COLUMNS[1..9]
            .iter()
            .zip(o.classes.iter().zip(stated.classes))
            .map(|(c, (&s, t))| (*c, s, t))
            .collect();
        checks.extend([
            ("pure_cf", o.pure_cf, stated.pure_cf),
            ("pure_df", o.pure_df, stated.pure_df),
            ("mixed", o.mixed, stated.mixed),
            ("total", o.total, stated.total),
        ]);
        if let (Some(st), true) = (stated.kloc, self.projects.iter().all(|r| r.kloc.is_some())) {
            checks.push((
                "kloc",
                self.projects.iter().filter_map(|r| r.kloc).sum(),
                st,
            ));
        }
        for (column, sum, stated) in checks {
            if sum != stated {
                return Err(StatsError::Inconsistent {
                    column: column.into(),
                    sum,
                    stated,
                });
            }
        }
        Ok(())
    }

    pub fn to_frequency_table(&self) -> FrequencyTable {
        let projects = self
            .projects
            .iter()
            .map(|r| FrequencyRow {
                group: r.project.clone(),
                classes: r.classes,
                pure_cf: r.pure_cf,
                pure_df: r.pure_df,
                mixed: r.mixed,
                total: r.total,
                mean: r.mean,
                std: r.std,
            })
            .collect();
        FrequencyTable {
            projects,
            overall: self.overall(),
        }
    }
}
