use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which points of a scan enter a fit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "subset", content = "k")]
pub enum Subset {
    #[default]
    All,
    /// The `k` points with the smallest abscissa.
    LowestK(usize),
}

/// `error = a s^{-beta}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub a: f64,
    pub beta: f64,
}

impl PowerLaw {
    pub fn eval(&self, s: f64) -> f64 {
        self.a * s.powf(-self.beta)
    }
}

/// Least squares on `(ln s, ln error)`.
pub fn power_law_fit(points: &[(f64, f64)], subset: Subset) -> Result<PowerLaw> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Subset::LowestK(k) = subset {
        pts.truncate(k);
    }
    if pts.len() < 2 {
        return Err(Error::InvalidArgument(format!("a power-law fit needs at least 2 points, got {}", pts.len())));
    }
    if let Some(&(s, e)) = pts.iter().find(|(s, e)| !(*s > 0.0 && *e > 0.0) || !s.is_finite() || !e.is_finite()) {
        return Err(Error::InvalidArgument(format!("power-law fit needs positive finite points, got ({s}, {e})")));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("power-law fit needs at least two distinct abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(PowerLaw { a: (my - slope * mx).exp(), beta: -slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_root() {
        let f = power_law_fit(&[(1.0, 1.0), (4.0, 0.5), (16.0, 0.25)], Subset::All).unwrap();
        assert!((f.beta - 0.5).abs() < 1e-12);
        assert!((f.a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subset_takes_smallest_abscissae() {
        let mut pts: Vec<(f64, f64)> = (4..14).map(|k| 2f64.powi(k)).map(|s| (s, 3.0 * s.powf(-0.5))).collect();
        // plateau at large s
        for p in pts.iter_mut().skip(6) {
            p.1 = 0.2;
        }
        pts.reverse();
        let low = power_law_fit(&pts, Subset::LowestK(4)).unwrap();
        let all = power_law_fit(&pts, Subset::All).unwrap();
        assert!((low.beta - 0.5).abs() < 1e-12);
        assert!(all.beta < 0.4, "{}", all.beta);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(power_law_fit(&[(1.0, 1.0)], Subset::All).is_err());
        assert!(power_law_fit(&[(1.0, 1.0), (2.0, 0.0)], Subset::All).is_err());
        assert!(power_law_fit(&[(2.0, 1.0), (2.0, 0.5)], Subset::All).is_err());
    }
}
