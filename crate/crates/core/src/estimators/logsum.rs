/// Running `ln Σ exp(xᵢ)` that neither overflows nor underflows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.max {
            self.scaled = self.scaled * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        } else {
            self.scaled += (log_term - self.max).exp();
        }
    }

    pub fn merge(&mut self, other: &Self) {
        if other.scaled == 0.0 {
            return;
        }
        if other.max > self.max {
            self.scaled = self.scaled * (self.max - other.max).exp() + other.scaled;
            self.max = other.max;
        } else {
            self.scaled += other.scaled * (other.max - self.max).exp();
        }
    }

    /// `ln` of the sum; `-∞` when empty.
    pub fn ln(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }

    /// The sum itself; exact for integer counts of unit terms.
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            0.0
        } else {
            self.scaled * self.max.exp()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.scaled == 0.0
    }
}

impl FromIterator<f64> for LogSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
