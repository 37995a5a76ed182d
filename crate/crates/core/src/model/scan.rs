//! Parameter scans over the relative fluctuations k and l, written as CSV.

use std::io::Write;

use crate::error::{QrgError, Result};
use crate::par::{map_range, ExecMode};
use crate::scalar::{Complex64, Phase};

use super::action::action_kl;
use super::params::{MomentumParams, Signature};
use super::spectrum::laplacian_matrix;

/// An inclusive grid written `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Grid> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || QrgError::InvalidInput(format!("grid `{s}` is not start:stop:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let g = Grid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(g.start.is_finite() && g.stop.is_finite() && g.step.is_finite()) || g.step <= 0.0 {
            return Err(QrgError::InvalidInput(format!("grid `{s}` needs finite bounds and a positive step")));
        }
        if g.stop < g.start {
            return Err(QrgError::InvalidInput(format!("grid `{s}` has stop below start")));
        }
        Ok(g)
    }

    /// The grid points, rounded to 12 decimals so 0.1 steps land on 0.3.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }

    /// The values, rejecting any outside the open interval (-1, 1).
    pub fn fluctuations(&self) -> Result<Vec<f64>> {
        let v = self.values();
        if let Some(x) = v.iter().find(|x| x.abs() >= 1.0) {
            return Err(QrgError::Admissibility(format!(
                "grid point {x} is outside (-1, 1)"
            )));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    K,
    L,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::K => "k",
            ScanAxis::L => "l",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub value: f64,
    pub eigenvalues: [Complex64; 4],
}

/// Laplacian eigenvalues along one axis with the other fluctuation fixed.
#[allow(clippy::too_many_arguments)]
pub fn spectrum_scan(
    axis: ScanAxis,
    values: &[f64],
    fixed: f64,
    k0: f64,
    l0: f64,
    sig: Signature,
    q: Phase,
    mode: ExecMode,
) -> Result<Vec<SpectrumRow>> {
    map_range(mode, values.len(), |x| {
        let v = values[x];
        let (k, l) = match axis {
            ScanAxis::K => (v, fixed),
            ScanAxis::L => (fixed, v),
        };
        let m = MomentumParams::from_relative(k0, l0, k, l, sig)?;
        let s = laplacian_matrix(&m, q)?;
        Ok(SpectrumRow {
            value: v,
            eigenvalues: s.eigenvalues,
        })
    })
    .into_iter()
    .collect()
}

pub fn write_spectrum_csv<W: Write>(axis: ScanAxis, rows: &[SpectrumRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![axis.name().to_string()];
    header.extend((1..=4).map(|n| format!("re{n}")));
    header.extend((1..=4).map(|n| format!("im{n}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.value.to_string()];
        rec.extend(r.eigenvalues.iter().map(|z| z.re.to_string()));
        rec.extend(r.eigenvalues.iter().map(|z| z.im.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionRow {
    pub k: f64,
    pub l: f64,
    pub action: f64,
}

/// The action on the product grid ks × ls, row-major in k.
pub fn action_scan(ks: &[f64], ls: &[f64], k0: f64, l0: f64, sig: Signature, mode: ExecMode) -> Result<Vec<ActionRow>> {
    let n = ls.len();
    map_range(mode, ks.len() * n, |idx| {
        let (k, l) = (ks[idx / n], ls[idx % n]);
        let m = MomentumParams::from_relative(k0, l0, k, l, sig)?;
        Ok(ActionRow {
            k,
            l,
            action: action_kl(&m)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn write_action_csv<W: Write>(rows: &[ActionRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "l", "action"])?;
    for r in rows {
        w.write_record([r.k.to_string(), r.l.to_string(), r.action.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        let g = Grid::parse("0:0.3:0.1").unwrap();
        assert_eq!(g.values(), vec![0.0, 0.1, 0.2, 0.3]);
        let g = Grid::parse("-0.5:0.5:0.25").unwrap();
        assert_eq!(g.fluctuations().unwrap(), vec![-0.5, -0.25, 0.0, 0.25, 0.5]);
        assert!(Grid::parse("0:1:0").is_err());
        assert!(Grid::parse("0:1").is_err());
        assert!(Grid::parse("0:1:0.5").unwrap().fluctuations().is_err());
    }

    #[test]
    fn scans_are_mode_independent() {
        let ls = Grid::parse("-0.3:0.3:0.05").unwrap().fluctuations().unwrap();
        let q = Phase::one();
        let a = spectrum_scan(ScanAxis::L, &ls, 0.5, 1.0, 1.0, Signature::Euclidean, q, ExecMode::Parallel).unwrap();
        let b = spectrum_scan(ScanAxis::L, &ls, 0.5, 1.0, 1.0, Signature::Euclidean, q, ExecMode::Deterministic)
            .unwrap();
        assert_eq!(a, b);
        let mut buf = Vec::new();
        write_spectrum_csv(ScanAxis::L, &a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("l,re1,re2,re3,re4,im1,im2,im3,im4\n"));
        assert_eq!(text.lines().count(), ls.len() + 1);
    }

    #[test]
    fn action_grid() {
        let rows = action_scan(&[0.0, 0.5], &[0.5], 1.0, 1.0, Signature::Euclidean, ExecMode::Deterministic).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[1].action - 16.0 / 3.0).abs() < 1e-14);
        let mut buf = Vec::new();
        write_action_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("k,l,action\n"));
    }
}
