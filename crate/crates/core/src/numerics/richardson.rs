//! Richardson extrapolation of sequences v(R) = L + c1/R + c2/R^2 + ...

use super::dd::Dd;
use super::hifloat::HiFloat;

#[derive(Debug, thiserror::Error)]
pub enum RichardsonError {
    #[error("need at least two samples to extrapolate, got {0}")]
    TooFewSamples(usize),
    #[error("sample points must be distinct and increasing")]
    BadGrid,
}

/// Neville extrapolation to h = 1/R -> 0.
///
/// The error estimate is the difference between the two deepest diagonal
/// entries, the usual a-posteriori proxy for the next correction term.
pub fn richardson_extrapolate(samples: &[(f64, Dd)]) -> Result<HiFloat, RichardsonError> {
    let n = samples.len();
    if n < 2 {
        return Err(RichardsonError::TooFewSamples(n));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(RichardsonError::BadGrid);
        }
    }
    let h: Vec<Dd> = samples
        .iter()
        .map(|&(r, _)| Dd::from_f64(1.0) / Dd::from_f64(r))
        .collect();
    let mut t: Vec<Dd> = samples.iter().map(|&(_, v)| v).collect();
    let mut prev_diag = t[0];
    let mut diag = t[n - 1];
    for j in 1..n {
        // t[i] becomes the degree-j interpolant through samples i-j..=i at 0.
        for i in (j..n).rev() {
            let num = h[i - j] * t[i] - h[i] * t[i - 1];
            t[i] = num / (h[i - j] - h[i]);
        }
        prev_diag = diag;
        diag = t[n - 1];
    }
    let err = (diag - prev_diag).abs().to_f64();
    Ok(HiFloat::with_err(diag, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kills_single_pole() {
        // v(R) = 5 + 7/R at R = 50, 100 -> exactly 5
        let samples: Vec<(f64, Dd)> = [50.0, 100.0]
            .iter()
            .map(|&r| (r, Dd::from_f64(5.0) + Dd::from_f64(7.0) / Dd::from_f64(r)))
            .collect();
        let out = richardson_extrapolate(&samples).unwrap();
        assert!((out.value.to_f64() - 5.0).abs() < 1e-28);
    }

    #[test]
    fn kills_two_terms() {
        // v(R) = 3 + 1/R + 1/R^2 at R = 50, 100, 200 -> 3 to working precision
        let samples: Vec<(f64, Dd)> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&r| {
                let rr = Dd::from_f64(r);
                (
                    r,
                    Dd::from_f64(3.0) + rr.recip() + (rr * rr).recip(),
                )
            })
            .collect();
        let out = richardson_extrapolate(&samples).unwrap();
        assert!((out.value.to_f64() - 3.0).abs() < 1e-26);
    }

    #[test]
    fn rejects_degenerate_grids() {
        let s = [(50.0, Dd::from_f64(1.0))];
        assert!(matches!(
            richardson_extrapolate(&s),
            Err(RichardsonError::TooFewSamples(1))
        ));
        let s = [(50.0, Dd::from_f64(1.0)), (50.0, Dd::from_f64(1.0))];
        assert!(matches!(
            richardson_extrapolate(&s),
            Err(RichardsonError::BadGrid)
        ));
    }
}
