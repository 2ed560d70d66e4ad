use serde::Serialize;

use crate::error::{Error, Result};

/// Fixed-width histogram. Bin `i` covers `[origin + i·w, origin + (i+1)·w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub origin: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins `values`, aligning the first edge to a multiple of `bin_width`.
    pub fn from_values(values: &[f64], bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::invalid(format!("bin width must be positive, got {bin_width}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("histogram values must be finite"));
        }
        let Some(min) = values.iter().copied().reduce(f64::min) else {
            return Ok(Self {
                origin: 0.0,
                bin_width,
                counts: vec![],
            });
        };
        let max = values.iter().copied().fold(min, f64::max);
        let origin = (min / bin_width).floor() * bin_width;
        let bins = ((max - origin) / bin_width).floor() as usize + 1;
        let mut counts = vec![0u64; bins];
        for &v in values {
            let i = (((v - origin) / bin_width).floor().max(0.0) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Ok(Self {
            origin,
            bin_width,
            counts,
        })
    }

    /// Histogram with explicit counts, for synthetic data.
    pub fn from_counts(origin: f64, bin_width: f64, counts: Vec<u64>) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::invalid(format!("bin width must be positive, got {bin_width}")));
        }
        Ok(Self {
            origin,
            bin_width,
            counts,
        })
    }

    pub fn center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.bin_width
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(center, count)` for every bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| (self.center(i), c))
    }

    /// Index of the most populated bin (first one on ties).
    pub fn mode(&self) -> Option<usize> {
        let max = *self.counts.iter().max()?;
        self.counts.iter().position(|&c| c == max)
    }

    /// Copy holding only bins `from..`, with the origin shifted accordingly.
    pub fn tail_from(&self, from: usize) -> Self {
        Self {
            origin: self.origin + from as f64 * self.bin_width,
            bin_width: self.bin_width,
            counts: self.counts.get(from..).unwrap_or_default().to_vec(),
        }
    }
}

/// `count ≈ amplitude · center^(−exponent)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub bins_used: usize,
    /// RMS of the log-space residuals.
    pub residual: f64,
    /// Centres of the first and last bins entering the fit.
    pub first_center: f64,
    pub last_center: f64,
}

/// Least-squares line through `(ln center, ln count)` over bins with a positive
/// centre and at least one count.
pub fn fit_power_law(histogram: &Histogram) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = histogram.bins().map(|(c, n)| (c, n as f64)).collect();
    fit_log_log(&points)
}

/// Power-law fit on raw `(x, y)` pairs; pairs with `x <= 0` or `y <= 0` are skipped.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let used: Vec<(f64, f64)> = points.iter().copied().filter(|&(x, y)| x > 0.0 && y > 0.0).collect();
    if used.len() < 3 {
        return Err(Error::invalid(format!(
            "power-law fit needs at least 3 usable bins, found {}",
            used.len()
        )));
    }
    let logs: Vec<(f64, f64)> = used.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("power-law fit needs distinct bin centres"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(PowerLawFit {
        exponent: -slope,
        amplitude: intercept.exp(),
        bins_used: used.len(),
        residual,
        first_center: used[0].0,
        last_center: used[used.len() - 1].0,
    })
}

/// Sample Pearson correlation; `None` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(exponent: f64) -> PowerLawFit {
        let points: Vec<(f64, f64)> = (1..=8)
            .map(|i| {
                let c = i as f64 * 0.5;
                (c, 1000.0 * c.powf(-exponent))
            })
            .collect();
        fit_log_log(&points).unwrap()
    }

    #[test]
    fn exact_cubic_counts() {
        // 64·c^{-3} at centres 1, 2, 4; the empty bin at 3 is skipped.
        let h = Histogram::from_counts(0.5, 1.0, vec![64, 8, 0, 1]).unwrap();
        let fit = fit_power_law(&h).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-9, "{}", fit.exponent);
        assert!((fit.amplitude - 64.0).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
        assert_eq!(fit.bins_used, 3);
        assert_eq!((fit.first_center, fit.last_center), (1.0, 4.0));
    }

    #[test]
    fn exponent_on_exact_power_law_data() {
        assert!((synthetic(3.0).exponent - 3.0).abs() < 1e-9);
        assert!((synthetic(3.66).exponent - 3.66).abs() < 1e-9);
        assert!((synthetic(3.66).amplitude - 1000.0).abs() < 1e-6);
    }

    #[test]
    fn flat_counts_give_zero_exponent() {
        let h = Histogram::from_counts(0.0, 0.1, vec![5; 10]).unwrap();
        let fit = fit_power_law(&h).unwrap();
        assert!(fit.exponent.abs() < 1e-9);
    }

    #[test]
    fn too_few_bins_rejected() {
        let h = Histogram::from_counts(0.0, 0.1, vec![5, 0, 3, 0]).unwrap();
        assert!(fit_power_law(&h).is_err());
        // Bins centred at or below zero are skipped.
        let h = Histogram::from_counts(-1.0, 0.5, vec![5, 5, 5, 5]).unwrap();
        assert!(fit_power_law(&h).is_err());
    }

    #[test]
    fn binning_counts_every_value() {
        let vals = [0.05, 0.1, 0.15, 0.29, 1.0, -0.31];
        let h = Histogram::from_values(&vals, 0.1).unwrap();
        assert_eq!(h.total(), vals.len() as u64);
        assert!((h.origin + 0.4).abs() < 1e-12);
        assert!(Histogram::from_values(&vals, 0.0).is_err());
        assert!(Histogram::from_values(&[f64::NAN], 0.1).is_err());
        assert_eq!(Histogram::from_values(&[], 0.1).unwrap().total(), 0);
    }

    #[test]
    fn mode_and_tail() {
        let h = Histogram::from_counts(0.0, 1.0, vec![1, 4, 4, 2]).unwrap();
        assert_eq!(h.mode(), Some(1));
        let t = h.tail_from(2);
        assert_eq!(t.counts, vec![4, 2]);
        assert_eq!(t.center(0), 2.5);
    }

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}
