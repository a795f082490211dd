//! Naive recounts of the dataset statistics, written without the library's
//! helpers: every figure is recomputed from scratch by scanning all rows.

use ffc_core::classifier::FaultClass;
use ffc_core::dataset::LabelRow;

pub const CF: [&str; 6] = ["order", "jump", "call", "pred", "guard", "block"];
pub const NAMES: [&str; 8] = [
    "order", "jump", "call", "pred", "guard", "block", "def", "use",
];

fn names(r: &LabelRow) -> Vec<&'static str> {
    NAMES
        .iter()
        .copied()
        .filter(|n| r.classes.iter().any(|c| c.as_str() == *n))
        .collect()
}

pub fn class_count(rows: &[LabelRow], name: &str) -> u64 {
    rows.iter().filter(|r| names(r).contains(&name)).count() as u64
}

/// (pure control flow, pure data flow, mixed)
pub fn types(rows: &[LabelRow]) -> (u64, u64, u64) {
    let (mut a, mut b, mut c) = (0, 0, 0);
    for r in rows {
        let n = names(r);
        let has_cf = n.iter().any(|x| CF.contains(x));
        let has_df = n.iter().any(|x| !CF.contains(x));
        if has_cf && has_df {
            c += 1;
        } else if has_cf {
            a += 1;
        } else {
            b += 1;
        }
    }
    (a, b, c)
}

pub fn mean_std(rows: &[LabelRow]) -> (f64, f64) {
    let ks: Vec<f64> = rows.iter().map(|r| names(r).len() as f64).collect();
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let var = ks.iter().map(|k| (k - mean) * (k - mean)).sum::<f64>() / ks.len() as f64;
    (mean, var.sqrt())
}

pub fn both(rows: &[LabelRow], i: &str, j: &str) -> u64 {
    rows.iter()
        .filter(|r| names(r).contains(&i) && names(r).contains(&j))
        .count() as u64
}

/// Quartiles by explicit halves of the sorted list.
pub fn five_numbers(rows: &[LabelRow]) -> [f64; 5] {
    let mut ks: Vec<u64> = rows.iter().map(|r| names(r).len() as u64).collect();
    ks.sort();
    fn med(v: &[u64]) -> f64 {
        let n = v.len();
        if n.is_multiple_of(2) {
            (v[n / 2 - 1] as f64 + v[n / 2] as f64) / 2.0
        } else {
            v[n / 2] as f64
        }
    }
    let n = ks.len();
    let (lo, hi): (Vec<u64>, Vec<u64>) = if n == 1 {
        (ks.clone(), ks.clone())
    } else {
        (ks[..n / 2].to_vec(), ks[n.div_ceil(2)..].to_vec())
    };
    [ks[0] as f64, med(&lo), med(&ks), med(&hi), ks[n - 1] as f64]
}

pub fn histogram(rows: &[LabelRow], k: usize) -> u64 {
    rows.iter().filter(|r| names(r).len() == k).count() as u64
}

/// Random non-empty label rows over a handful of projects.
pub fn random_rows(seed: u64, n: usize) -> Vec<LabelRow> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let projects = ["Chart", "Closure", "Lang", "Math"];
    (0..n)
        .map(|i| loop {
            let classes: Vec<FaultClass> = FaultClass::ALL
                .into_iter()
                .filter(|_| rng.gen_bool(0.25))
                .collect();
            if !classes.is_empty() {
                break LabelRow::new(
                    projects[rng.gen_range(0..projects.len())],
                    i.to_string(),
                    classes,
                );
            }
        })
        .collect()
}
