use super::{format_tenths, percent_tenths};
use crate::classifier::FaultClass;
use crate::dataset::LabelRow;

/// How often classes are assigned together. Cell (i, j) is the share of
/// faults with class i that also have class j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    pub counts: [u64; 8],
    pub joint: [[u64; 8]; 8],
}

impl CooccurrenceMatrix {
    /// `100 · |i ∧ j|`, the integer numerator shared by cell (i, j) and
    /// cell (j, i).
    pub fn numerator(&self, i: FaultClass, j: FaultClass) -> u64 {
        100 * self.joint[i.index()][j.index()]
    }

    /// Percentage, or `None` when class i never occurs.
    pub fn cell(&self, i: FaultClass, j: FaultClass) -> Option<f64> {
        let n = self.counts[i.index()];
        (n > 0).then(|| self.numerator(i, j) as f64 / n as f64)
    }

    /// Cell in tenths of a percent, rounded half up.
    pub fn cell_tenths(&self, i: FaultClass, j: FaultClass) -> Option<u64> {
        let n = self.counts[i.index()];
        (n > 0).then(|| percent_tenths(self.joint[i.index()][j.index()], n))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(std::iter::once("class").chain(FaultClass::ALL.iter().map(|c| c.as_str())))
            .expect("in-memory write");
        for i in FaultClass::ALL {
            let mut rec = vec![i.as_str().to_string()];
            rec.extend(FaultClass::ALL.iter().map(|&j| {
                self.cell_tenths(i, j)
                    .map(format_tenths)
                    .unwrap_or_default()
            }));
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<7}", "");
        for c in FaultClass::ALL {
            out.push_str(&format!("{:>7}", c.as_str()));
        }
        out.push('\n');
        for i in FaultClass::ALL {
            out.push_str(&format!("{:<7}", i.as_str()));
            for j in FaultClass::ALL {
                let cell = self
                    .cell_tenths(i, j)
                    .map(format_tenths)
                    .unwrap_or_else(|| "-".into());
                out.push_str(&format!("{cell:>7}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn cooccurrence(rows: &[LabelRow]) -> CooccurrenceMatrix {
    let mut m = CooccurrenceMatrix {
        counts: [0; 8],
        joint: [[0; 8]; 8],
    };
    for r in rows {
        for &i in &r.classes {
            m.counts[i.index()] += 1;
            for &j in &r.classes {
                m.joint[i.index()][j.index()] += 1;
            }
        }
    }
    m
}
