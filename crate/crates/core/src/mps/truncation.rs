use alloc::format;

use crate::error::{invalid, Result};

/// Singular values below this fraction of the largest one are treated as
/// exact zeros, whatever the cutoff.
const NUMERICAL_FLOOR: f64 = 1e-14;

/// How aggressively SVDs are truncated.
///
/// `cutoff` is relative: the smallest singular values are dropped as long as
/// their squared sum stays within `cutoff` times the total squared sum.
/// `maxdim` then caps the number kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    pub cutoff: f64,
    pub maxdim: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self { cutoff: 1e-10, maxdim: 128 }
    }
}

impl TruncationConfig {
    pub fn new(cutoff: f64, maxdim: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&cutoff) {
            return Err(invalid(format!("cutoff {cutoff} outside [0, 1)")));
        }
        if maxdim == 0 {
            return Err(invalid("maxdim must be at least 1"));
        }
        Ok(Self { cutoff, maxdim })
    }

    /// No cutoff and no bond cap.
    pub fn exact() -> Self {
        Self { cutoff: 0.0, maxdim: usize::MAX }
    }

    /// Decides how many of the descending squared singular values `sq` to
    /// keep, never more than `max_rank`. Returns the count and the dropped
    /// fraction of the total weight.
    pub(crate) fn keep_count(&self, sq: &[f64], max_rank: usize) -> (usize, f64) {
        let total: f64 = sq.iter().sum();
        if sq.is_empty() || !(total > 0.0) {
            return (1, 0.0);
        }
        let floor = NUMERICAL_FLOOR * NUMERICAL_FLOOR * sq[0];
        let mut keep = sq.iter().take_while(|&&w| w > floor).count().max(1);
        let budget = self.cutoff * total;
        let mut tail: f64 = sq[keep..].iter().sum();
        while keep > 1 && tail + sq[keep - 1] <= budget {
            keep -= 1;
            tail += sq[keep];
        }
        keep = keep.min(self.maxdim).min(max_rank).max(1);
        let dropped: f64 = sq[keep..].iter().sum();
        (keep, dropped / total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TruncationConfig::new(-0.1, 4).is_err());
        assert!(TruncationConfig::new(1.0, 4).is_err());
        assert!(TruncationConfig::new(0.0, 0).is_err());
        assert!(TruncationConfig::new(0.5, 1).is_ok());
        assert_eq!(TruncationConfig::default(), TruncationConfig { cutoff: 1e-10, maxdim: 128 });
    }

    #[test]
    fn relative_cutoff() {
        let t = TruncationConfig::new(0.1, 10).unwrap();
        // total 10; dropping 0.5 + 0.4 = 0.9 ≤ 1, adding 1.1 would exceed
        let (keep, dropped) = t.keep_count(&[8.0, 1.1, 0.5, 0.4], usize::MAX);
        assert_eq!(keep, 2);
        assert!((dropped - 0.09).abs() < 1e-15);
        // scale free
        let (keep2, _) = t.keep_count(&[80.0, 11.0, 5.0, 4.0], usize::MAX);
        assert_eq!(keep2, 2);
    }

    #[test]
    fn maxdim_cap_keeps_leading_values() {
        let t = TruncationConfig::new(0.0, 1).unwrap();
        let (keep, dropped) = t.keep_count(&[0.5, 0.5], usize::MAX);
        assert_eq!(keep, 1);
        assert_eq!(dropped, 0.5);
        let (keep, _) = TruncationConfig::exact().keep_count(&[1.0, 1.0, 1.0], 2);
        assert_eq!(keep, 2);
    }

    #[test]
    fn zeros_are_dropped_and_zero_spectrum_keeps_one() {
        let t = TruncationConfig::exact();
        assert_eq!(t.keep_count(&[1.0, 1e-40, 0.0], usize::MAX), (1, 1e-40 / (1.0 + 1e-40)));
        assert_eq!(t.keep_count(&[0.0, 0.0], usize::MAX), (1, 0.0));
    }
}
