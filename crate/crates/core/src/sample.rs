use crate::error::{Error, Result};

/// A dataset sorted in descending order, `X_{1,n} ≥ X_{2,n} ≥ … ≥ X_{n,n}`,
/// with a free-text note on where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
    source: String,
}

impl SortedSample {
    /// Sorts `values` descending. Non-finite entries are rejected.
    pub fn from_unsorted(mut values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("SortedSample", format!("non-finite value {bad}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SortedSample {
            values,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The `k` largest observations.
    pub fn top(&self, k: usize) -> SortedSample {
        SortedSample {
            values: self.values[..k.min(self.values.len())].to_vec(),
            source: format!("{} [top {}]", self.source, k.min(self.values.len())),
        }
    }

    /// Leading run of strictly positive values.
    pub fn positive_part(&self) -> SortedSample {
        let m = self.values.iter().take_while(|&&v| v > 0.0).count();
        self.top(m)
    }

    pub fn shifted(&self, c: f64) -> SortedSample {
        SortedSample {
            values: self.values.iter().map(|v| v + c).collect(),
            source: format!("{} [+{c}]", self.source),
        }
    }

    /// Multiply by `c > 0`; order is preserved.
    pub fn scaled(&self, c: f64) -> SortedSample {
        assert!(c > 0.0, "scale factor must be positive");
        SortedSample {
            values: self.values.iter().map(|v| v * c).collect(),
            source: format!("{} [x{c}]", self.source),
        }
    }

    pub fn map_ln(&self) -> Result<SortedSample> {
        if let Some(bad) = self.values.iter().find(|&&v| v <= 0.0) {
            return Err(Error::domain(
                "SortedSample::map_ln",
                format!("non-positive value {bad}"),
            ));
        }
        Ok(SortedSample {
            values: self.values.iter().map(|v| v.ln()).collect(),
            source: format!("ln({})", self.source),
        })
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample variance with the n − 1 denominator (two-pass).
    pub fn variance(&self) -> f64 {
        sample_variance(&self.values)
    }
}

/// Unbiased (n − 1) sample variance, two-pass for accuracy.
pub(crate) fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (ss, comp) = xs.iter().fold((0.0, 0.0), |(ss, c), &x| {
        let d = x - mean;
        (ss + d * d, c + d)
    });
    (ss - comp * comp / n) / (n - 1.0)
}
