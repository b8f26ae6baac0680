use serde::{Deserialize, Serialize};

/// Closed interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn full() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Shrinks each end inward by `fraction` of the length (bounded ends only).
    pub fn shrink(&self, fraction: f64) -> Interval {
        if self.is_bounded() {
            let d = fraction * self.length();
            Interval::new(self.lo + d, self.hi - d)
        } else {
            *self
        }
    }
}

const MAX_MARCH: f64 = 1e12;

/// Largest admissible interval around `seed`, found by outward marching and
/// bisection. `admissible` must be monotone along each ray leaving `seed`
/// (once rejected, always rejected). Finite limits are treated as hard ends.
pub(crate) fn admissible_interval<P>(admissible: P, seed: f64, lo_limit: f64, hi_limit: f64) -> Interval
where
    P: Fn(f64) -> bool,
{
    Interval::new(
        boundary(&admissible, seed, lo_limit),
        boundary(&admissible, seed, hi_limit),
    )
}

fn boundary<P: Fn(f64) -> bool>(admissible: &P, inside: f64, limit: f64) -> f64 {
    if limit.is_finite() {
        if admissible(limit) {
            return limit;
        }
        return bisect(admissible, inside, limit);
    }
    let dir = limit.signum();
    let mut step = 1.0_f64;
    let mut good = inside;
    loop {
        let x = inside + dir * step;
        if !admissible(x) {
            return bisect(admissible, good, x);
        }
        good = x;
        step *= 2.0;
        if step > MAX_MARCH {
            return limit;
        }
    }
}

fn bisect<P: Fn(f64) -> bool>(admissible: &P, mut good: f64, mut bad: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if admissible(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_edges() {
        let iv = admissible_interval(|x: f64| x.abs() < 2.0, 0.0, f64::NEG_INFINITY, 10.0);
        assert!((iv.lo + 2.0).abs() < 1e-12 && (iv.hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_side_stays_infinite() {
        let iv = admissible_interval(|x: f64| x > -1.0, 0.0, f64::NEG_INFINITY, f64::INFINITY);
        assert!((iv.lo + 1.0).abs() < 1e-12);
        assert_eq!(iv.hi, f64::INFINITY);
    }

    #[test]
    fn admissible_limit_is_kept() {
        let iv = admissible_interval(|_| true, 0.0, -3.0, 5.0);
        assert_eq!(iv, Interval::new(-3.0, 5.0));
    }
}
