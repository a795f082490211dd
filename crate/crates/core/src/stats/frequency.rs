use super::{format_tenths, percent_tenths, StatsError};
use crate::classifier::{FaultClass, FaultType};
use crate::dataset::LabelRow;

/// Class and fault-type counts for one group of faults.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRow {
    pub group: String,
    /// Indexed by [`FaultClass::index`].
    pub classes: [u64; 8],
    pub pure_cf: u64,
    pub pure_df: u64,
    pub mixed: u64,
    pub total: u64,
    pub mean: f64,
    /// Population standard deviation of classes per fault.
    pub std: f64,
}

impl FrequencyRow {
    pub fn count(&self, class: FaultClass) -> u64 {
        self.classes[class.index()]
    }

    pub fn type_count(&self, t: FaultType) -> u64 {
        match t {
            FaultType::PureCf => self.pure_cf,
            FaultType::PureDf => self.pure_df,
            FaultType::Mixed => self.mixed,
        }
    }

    pub fn partition(&self) -> Partition {
        Partition {
            pure_cf: percent_tenths(self.pure_cf, self.total),
            pure_df: percent_tenths(self.pure_df, self.total),
            mixed: percent_tenths(self.mixed, self.total),
        }
    }

    fn of(group: &str, rows: &[&LabelRow]) -> FrequencyRow {
        let mut r = FrequencyRow {
            group: group.to_string(),
            classes: [0; 8],
            pure_cf: 0,
            pure_df: 0,
            mixed: 0,
            total: rows.len() as u64,
            mean: 0.0,
            std: 0.0,
        };
        let mut sum = 0u64;
        let mut sum_sq = 0u64;
        for row in rows {
            for &c in &row.classes {
                r.classes[c.index()] += 1;
            }
            match FaultType::of(row.classes.iter().copied()) {
                Some(FaultType::PureCf) => r.pure_cf += 1,
                Some(FaultType::PureDf) => r.pure_df += 1,
                Some(FaultType::Mixed) => r.mixed += 1,
                None => {}
            }
            let k = row.class_count() as u64;
            sum += k;
            sum_sq += k * k;
        }
        let n = r.total as f64;
        r.mean = sum as f64 / n;
        // n·Σk² − (Σk)² is exact in integers
        let var_num = r.total * sum_sq - sum * sum;
        r.std = (var_num as f64).sqrt() / n;
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    /// Per-project rows in order of first appearance; empty unless grouped.
    pub projects: Vec<FrequencyRow>,
    pub overall: FrequencyRow,
}

pub const FREQUENCY_HEADER: [&str; 15] = [
    "project", "order", "jump", "call", "pred", "guard", "block", "def", "use", "mean", "std",
    "pure_cf", "pure_df", "mixed", "total",
];

impl FrequencyTable {
    /// Table rows followed by the overall row, labelled `All`.
    pub fn rows(&self) -> impl Iterator<Item = &FrequencyRow> {
        self.projects.iter().chain(std::iter::once(&self.overall))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(FREQUENCY_HEADER).expect("in-memory write");
        for r in self.rows() {
            let mut rec = vec![r.group.clone()];
            rec.extend(r.classes.iter().map(u64::to_string));
            rec.push(format!("{:.2}", r.mean));
            rec.push(format!("{:.2}", r.std));
            rec.extend([r.pure_cf, r.pure_df, r.mixed, r.total].map(|v| v.to_string()));
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<10}", "project");
        for c in FaultClass::ALL {
            out.push_str(&format!("{:>6}", c.as_str()));
        }
        out.push_str(&format!(
            "{:>14}{:>6}{:>6}{:>7}{:>6}\n",
            "avg/fault", "CF", "DF", "CF/DF", "all"
        ));
        for r in self.rows() {
            out.push_str(&format!("{:<10}", r.group));
            for v in r.classes {
                out.push_str(&format!("{v:>6}"));
            }
            let avg = format!("{:.2} ± {:.2}", r.mean, r.std);
            out.push_str(&format!(
                "{avg:>14}{:>6}{:>6}{:>7}{:>6}\n",
                r.pure_cf, r.pure_df, r.mixed, r.total
            ));
        }
        let p = self.overall.partition();
        out.push_str(&format!(
            "fault types: pure-CF {}%, pure-DF {}%, mixed {}%\n",
            format_tenths(p.pure_cf),
            format_tenths(p.pure_df),
            format_tenths(p.mixed)
        ));
        out
    }
}

/// Class frequencies, optionally grouped by project.
pub fn frequencies(rows: &[LabelRow], by_project: bool) -> Result<FrequencyTable, StatsError> {
    if rows.is_empty() {
        return Err(StatsError::Empty);
    }
    let all: Vec<&LabelRow> = rows.iter().collect();
    let projects = if by_project {
        group_by_project(rows)
            .into_iter()
            .map(|(p, rs)| FrequencyRow::of(&p, &rs))
            .collect()
    } else {
        Vec::new()
    };
    Ok(FrequencyTable {
        projects,
        overall: FrequencyRow::of("All", &all),
    })
}

/// Groups rows by project, in order of first appearance.
pub(crate) fn group_by_project(rows: &[LabelRow]) -> Vec<(String, Vec<&LabelRow>)> {
    let mut groups: Vec<(String, Vec<&LabelRow>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(p, _)| *p == r.project) {
            Some((_, g)) => g.push(r),
            None => groups.push((r.project.clone(), vec![r])),
        }
    }
    groups
}

/// Fault-type shares in tenths of a percent, rounded half up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub pure_cf: u64,
    pub pure_df: u64,
    pub mixed: u64,
}

pub fn percent_partition(rows: &[LabelRow]) -> Result<Partition, StatsError> {
    Ok(frequencies(rows, false)?.overall.partition())
}
