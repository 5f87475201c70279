use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MAX_BERNOULLI: usize = 60;

/// Exact `B_0, …, B_{count-1}` (with `B_1 = -1/2`) from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_exact(count: usize) -> Result<Vec<BigRational>> {
    if count > MAX_BERNOULLI + 1 {
        return Err(Error::InvalidArgument(format!(
            "at most {} Bernoulli numbers are tabulated",
            MAX_BERNOULLI + 1
        )));
    }
    let mut b: Vec<BigRational> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            b.push(BigRational::from_integer(BigInt::from(1)));
            continue;
        }
        // binom(m+1, j) for j = 0..m
        let mut binom = BigInt::from(1);
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom now equals C(m+1, m) = m + 1
        b.push(-acc / BigRational::from_integer(binom));
    }
    Ok(b)
}

/// Bernoulli numbers rendered to `f64`.
pub fn bernoulli_numbers(count: usize) -> Result<Vec<f64>> {
    Ok(bernoulli_exact(count)?
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect())
}

/// `B_{2j} / (2j)!` for `j = 1..=30`, computed once.
pub(crate) fn even_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_exact(MAX_BERNOULLI + 1).expect("within table size");
        let mut fact = BigInt::from(1);
        let mut out = Vec::new();
        for n in 1..=MAX_BERNOULLI {
            fact *= BigInt::from(n);
            if n % 2 == 0 {
                let v = &b[n] / BigRational::from_integer(fact.clone());
                out.push(v.to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// `B_{2j}` as `f64` for `j = 1..=30`.
pub(crate) fn even_values() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_numbers(MAX_BERNOULLI + 1).expect("within table size");
        (1..=MAX_BERNOULLI / 2).map(|j| b[2 * j]).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_values() {
        let b = bernoulli_exact(13).unwrap();
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn odd_vanish_and_sixty() {
        let b = bernoulli_exact(61).unwrap();
        for n in (3..61).step_by(2) {
            assert!(b[n].is_zero());
        }
        // B_60 numerator is 43 digits; the denominator is 56786730 (von Staudt–Clausen).
        assert_eq!(b[60].denom(), &BigInt::from(56_786_730));
        assert!(bernoulli_exact(62).is_err());
    }

    #[test]
    fn rendered() {
        let b = bernoulli_numbers(13).unwrap();
        assert_eq!(b[0], 1.0);
        assert_eq!(b[1], -0.5);
        assert!((b[12] + 691.0 / 2730.0).abs() < 1e-16);
        let t = even_over_factorial();
        assert!((t[0] - 1.0 / 12.0).abs() < 1e-17);
        assert!((t[1] + 1.0 / 720.0).abs() < 1e-18);
    }
}
