//! Compensated running sums for Monte Carlo estimators.

#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Count, mean and spread of a scalar observable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStat {
    n: u64,
    s1: CompensatedSum,
    s2: CompensatedSum,
}

impl RunningStat {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.s1.add(x);
        self.s2.add(x * x);
    }

    pub fn merge(&mut self, other: &RunningStat) {
        self.n += other.n;
        self.s1.merge(&other.s1);
        self.s2.merge(&other.s2);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn sum(&self) -> f64 {
        self.s1.value()
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.s1.value() / self.n as f64
        }
    }

    /// Unbiased sample variance; clamped at 0 against rounding.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let m = self.s1.value() / n;
        ((self.s2.value() - n * m * m) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn constant_has_zero_spread() {
        let mut r = RunningStat::default();
        for _ in 0..100 {
            r.push(0.3);
        }
        assert!((r.mean() - 0.3).abs() < 1e-15);
        assert!(r.variance() < 1e-28);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: [f64; 7] = [1.0, 2.5, -3.0, 4.0, 0.25, 9.0, -1.5];
        let mut all = RunningStat::default();
        xs.iter().for_each(|x| all.push(*x));
        let (mut a, mut b) = (RunningStat::default(), RunningStat::default());
        xs[..3].iter().for_each(|x| a.push(*x));
        xs[3..].iter().for_each(|x| b.push(*x));
        a.merge(&b);
        assert_eq!(a.count(), 7);
        assert!((a.mean() - all.mean()).abs() < 1e-15);
        assert!((a.variance() - all.variance()).abs() < 1e-13);
    }
}
