use super::frequency::group_by_project;
use super::StatsError;
use crate::dataset::LabelRow;

/// Five-number summary and histogram of classes per fault.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub group: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// `histogram[k - 1]` faults have exactly k classes.
    pub histogram: [u64; 8],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub projects: Vec<Summary>,
    pub overall: Summary,
}

fn median(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    }
}

/// Quartiles are medians of the lower and upper halves; for odd n the
/// median itself belongs to neither half.
fn summarize(group: &str, rows: &[&LabelRow]) -> Summary {
    let mut k: Vec<u64> = rows.iter().map(|r| r.class_count() as u64).collect();
    k.sort_unstable();
    let n = k.len();
    let half = n / 2;
    let (lower, upper) = if half == 0 {
        (&k[..], &k[..])
    } else {
        (&k[..half], &k[n - half..])
    };
    let mut histogram = [0; 8];
    for &v in &k {
        histogram[(v as usize).clamp(1, 8) - 1] += 1;
    }
    Summary {
        group: group.to_string(),
        min: k[0] as f64,
        q1: median(lower),
        median: median(&k),
        q3: median(upper),
        max: k[n - 1] as f64,
        histogram,
    }
}

pub fn distribution(rows: &[LabelRow], by_project: bool) -> Result<Distribution, StatsError> {
    if rows.is_empty() {
        return Err(StatsError::Empty);
    }
    let all: Vec<&LabelRow> = rows.iter().collect();
    let projects = if by_project {
        group_by_project(rows)
            .into_iter()
            .map(|(p, rs)| summarize(&p, &rs))
            .collect()
    } else {
        Vec::new()
    };
    Ok(Distribution {
        projects,
        overall: summarize("All", &all),
    })
}

impl Distribution {
    pub fn rows(&self) -> impl Iterator<Item = &Summary> {
        self.projects.iter().chain(std::iter::once(&self.overall))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = ["project", "min", "q1", "median", "q3", "max"]
            .map(String::from)
            .to_vec();
        header.extend((1..=8).map(|k| format!("n{k}")));
        w.write_record(&header).expect("in-memory write");
        for s in self.rows() {
            let mut rec = vec![s.group.clone()];
            rec.extend([s.min, s.q1, s.median, s.q3, s.max].map(|v| v.to_string()));
            rec.extend(s.histogram.iter().map(u64::to_string));
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in self.rows() {
            out.push_str(&format!(
                "{:<10} min {} q1 {} median {} q3 {} max {}  histogram {:?}\n",
                s.group, s.min, s.q1, s.median, s.q3, s.max, s.histogram
            ));
        }
        out
    }
}
