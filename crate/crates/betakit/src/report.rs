//! Report output: profile CSV, summary statistics, and the least-squares
//! helpers behind the plateau / linear-growth verdicts.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::multiscale::JonesProfile;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ys` against `xs`. `r_squared` is 1 for a
/// constant target (a perfect fit by the constant line).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LinearFit { slope, intercept, r_squared }
}

/// Plateau / growth verdict for one profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub x: Vec<f64>,
    pub scales: usize,
    pub last_sum: f64,
    /// `(S_last - S_{last/2}) / S_last`.
    pub tail_fraction: f64,
    /// Tail fraction at most 5%, or an identically tiny profile.
    pub plateau: bool,
    /// Least squares of `S_k` against the scale index `k`.
    pub growth: LinearFit,
    pub flagged_scales: usize,
}

pub fn summarize_profile(profile: &JonesProfile) -> ProfileSummary {
    let ks: Vec<f64> = (0..profile.records.len()).map(|k| k as f64).collect();
    let sums: Vec<f64> = profile.records.iter().map(|r| r.partial_sum).collect();
    let tail = profile.tail_fraction();
    ProfileSummary {
        x: profile.x.clone(),
        scales: profile.records.len(),
        last_sum: profile.last_sum(),
        tail_fraction: tail,
        plateau: profile.last_sum() <= 1e-9 || tail <= 0.05,
        growth: linear_fit(&ks, &sums),
        flagged_scales: profile.records.iter().filter(|r| r.flag.is_some()).count(),
    }
}

/// Rows `x1,...,xd,r,value,partial_sum,flags`, one per scale.
pub fn write_profile_csv<W: Write>(mut w: W, profiles: &[JonesProfile]) -> Result<()> {
    let d = profiles.first().map_or(0, |p| p.x.len());
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend(["r", "value", "partial_sum", "flags"].map(str::to_string));
    writeln!(w, "{}", header.join(","))?;
    for p in profiles {
        for rec in &p.records {
            let mut row: Vec<String> = p.x.iter().map(|c| format!("{c}")).collect();
            row.push(format!("{}", rec.r));
            row.push(format!("{}", rec.value));
            row.push(format!("{}", rec.partial_sum));
            row.push(rec.flag.clone().unwrap_or_default());
            writeln!(w, "{}", row.join(","))?;
        }
    }
    Ok(())
}

/// Pretty JSON with a trailing newline, for summary files.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiscale::{CoefficientKind, JonesProfile, ScaleRecord};

    #[test]
    fn exact_line_recovered() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * x - 1.0).collect();
        let fit = linear_fit(&xs, &ys);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_target_has_zero_slope() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [5.0, 5.0, 5.0];
        let fit = linear_fit(&xs, &ys);
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn profile_csv_layout() {
        let profile = JonesProfile {
            x: vec![0.5, 0.25],
            kind: CoefficientKind::Beta,
            p: 2.0,
            records: vec![
                ScaleRecord { r: 1.0, value: 0.1, partial_sum: 0.01, flag: None },
                ScaleRecord {
                    r: 0.5,
                    value: 0.0,
                    partial_sum: 0.01,
                    flag: Some("empty ball".into()),
                },
            ],
        };
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, std::slice::from_ref(&profile)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,x2,r,value,partial_sum,flags");
        assert_eq!(lines[1], "0.5,0.25,1,0.1,0.01,");
        assert!(lines[2].ends_with("empty ball"));
    }
}
