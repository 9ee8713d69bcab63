//! Summary statistics for Monte Carlo checks.

#[derive(Debug, Clone, Copy)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Summary {
    pub fn std_error(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }

    /// |mean − target| within `k` standard errors.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error()
    }
}

/// Welford accumulator.
#[derive(Debug, Default, Clone)]
pub struct Accumulator {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn summary(&self) -> Summary {
        Summary {
            n: self.n,
            mean: self.mean,
            variance: if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 },
        }
    }
}

pub fn summarize<I: IntoIterator<Item = f64>>(xs: I) -> Summary {
    let mut acc = Accumulator::default();
    for x in xs {
        acc.push(x);
    }
    acc.summary()
}
