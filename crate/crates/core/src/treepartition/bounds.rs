//! Exact rational bound arithmetic for the α-parameterised construction.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = Ratio<i128>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("alpha must exceed 2, got {0}")]
    AlphaTooSmall(Rational),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("d must be at least 1")]
    ZeroD,
    #[error("cannot parse alpha {0:?}: expected `int`, `opt`, an integer or `p/q`")]
    BadAlpha(String),
}

/// `int`: α = 4, the integer-coefficient construction.
pub fn alpha_int() -> Rational {
    Rational::from_integer(4)
}

/// `opt`: α = 239/70, a rational just above 2 + √2, where the width
/// coefficient 3α(α−1)/(α−2) is minimised.
pub fn alpha_opt() -> Rational {
    Rational::new(239, 70)
}

/// Parses `int`, `opt`, `p/q` or an integer. Does not check α > 2.
pub fn parse_alpha(text: &str) -> Result<Rational, ParamError> {
    match text.trim() {
        "int" => Ok(alpha_int()),
        "opt" => Ok(alpha_opt()),
        t => {
            let bad = || ParamError::BadAlpha(text.to_string());
            match t.split_once('/') {
                Some((p, q)) => {
                    let p: i128 = p.trim().parse().map_err(|_| bad())?;
                    let q: i128 = q.trim().parse().map_err(|_| bad())?;
                    if q == 0 {
                        return Err(bad());
                    }
                    Ok(Rational::new(p, q))
                }
                None => Rational::from_str(t).map_err(|_| bad()),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaParams {
    alpha: Rational,
    k: usize,
    d: usize,
}

impl AlphaParams {
    pub fn new(alpha: Rational, k: usize, d: usize) -> Result<Self, ParamError> {
        if alpha <= Rational::from_integer(2) {
            return Err(ParamError::AlphaTooSmall(alpha));
        }
        if k == 0 {
            return Err(ParamError::ZeroK);
        }
        if d == 0 {
            return Err(ParamError::ZeroD);
        }
        Ok(AlphaParams { alpha, k, d })
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

impl fmt::Display for AlphaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} k={} d={}", self.alpha, self.k, self.d)
    }
}

/// All bounds of the construction for fixed (α, k, d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub alpha: Rational,
    pub k: usize,
    pub d: usize,
    /// 3α(α−1)/(α−2)·kd − α/(α−2)·k
    pub width: Rational,
    /// 3α/(α−2)·d + (α−4)/(α−2)
    pub degree: Rational,
    /// αk
    pub s_min: Rational,
    /// 3αkd
    pub s_max: Rational,
}

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i128)
}

pub fn width_coefficient(alpha: Rational) -> Rational {
    let three = Rational::from_integer(3);
    three * alpha * (alpha - Rational::one()) / (alpha - Rational::from_integer(2))
}

pub fn degree_coefficient(alpha: Rational) -> Rational {
    Rational::from_integer(3) * alpha / (alpha - Rational::from_integer(2))
}

pub fn bound_constants(p: &AlphaParams) -> BoundSet {
    let a = p.alpha;
    let two = Rational::from_integer(2);
    let (k, d) = (int(p.k), int(p.d));
    BoundSet {
        alpha: a,
        k: p.k,
        d: p.d,
        width: width_coefficient(a) * k * d - a / (a - two) * k,
        degree: degree_coefficient(a) * d + (a - Rational::from_integer(4)) / (a - two),
        s_min: a * k,
        s_max: Rational::from_integer(3) * a * k * d,
    }
}

impl BoundSet {
    /// (α−1)/(α−2)·|S| − α/(α−2)·k
    pub fn anchor_part(&self, s: usize) -> Rational {
        let a = self.alpha;
        let two = Rational::from_integer(2);
        (a - Rational::one()) / (a - two) * int(s) - a / (a - two) * int(self.k)
    }

    /// |S|/((α−2)k) − 2/(α−2)
    pub fn anchor_degree(&self, s: usize) -> Rational {
        let a = self.alpha;
        let two = Rational::from_integer(2);
        int(s) / ((a - two) * int(self.k)) - two / (a - two)
    }

    /// ⌈αk⌉, the smallest admissible anchor-set size.
    pub fn s_min_count(&self) -> usize {
        self.s_min.ceil().to_integer() as usize
    }

    /// ⌊3αkd⌋, the largest admissible anchor-set size.
    pub fn s_max_count(&self) -> usize {
        self.s_max.floor().to_integer() as usize
    }

    pub fn width_floor(&self) -> usize {
        floor_nonneg(self.width)
    }

    pub fn degree_floor(&self) -> usize {
        floor_nonneg(self.degree)
    }

    pub fn width_ok(&self, width: usize) -> bool {
        int(width) <= self.width
    }

    pub fn degree_ok(&self, degree: usize) -> bool {
        int(degree) <= self.degree
    }
}

fn floor_nonneg(x: Rational) -> usize {
    if x < Rational::zero() {
        0
    } else {
        x.floor().to_integer() as usize
    }
}

/// Approximate value, for reports only.
pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn alpha_four_matches_integer_form() {
        let b = bound_constants(&AlphaParams::new(alpha_int(), 2, 3).unwrap());
        assert_eq!(b.width, r(104, 1));
        // 2k(9d - 1) with k = 2, d = 3
        assert_eq!(b.width, r(2 * 2 * (9 * 3 - 1), 1));
        assert_eq!(b.degree, r(18, 1));
        for (k, d) in [(1, 1), (3, 5), (7, 2)] {
            let b = bound_constants(&AlphaParams::new(alpha_int(), k, d).unwrap());
            let (k, d) = (k as i128, d as i128);
            assert_eq!(b.width, r(18 * k * d - 2 * k, 1));
            assert_eq!(b.degree, r(6 * d, 1));
            assert_eq!(b.anchor_part(10), r(15, 1) - r(2 * k, 1));
            assert_eq!(b.anchor_degree(10), r(10, 2 * k) - r(1, 1));
            assert_eq!(b.s_min, r(4 * k, 1));
            assert_eq!(b.s_max, r(12 * k * d, 1));
        }
    }

    #[test]
    fn alpha_three_substitution() {
        let b = bound_constants(&AlphaParams::new(r(3, 1), 1, 1).unwrap());
        assert_eq!(b.width, r(15, 1));
        assert_eq!(b.degree, r(8, 1));
    }

    #[test]
    fn opt_preset_near_irrational_optimum() {
        let a = alpha_opt();
        let sqrt2 = std::f64::consts::SQRT_2;
        assert!(a > r(2, 1));
        assert!((to_f64(width_coefficient(a)) - (9.0 + 6.0 * sqrt2)).abs() < 1e-4);
        assert!((to_f64(degree_coefficient(a)) - (3.0 + 3.0 * sqrt2)).abs() < 1e-3);
        assert_eq!(width_coefficient(a), r(121173, 6930));
        assert_eq!(degree_coefficient(a), r(717, 99));
    }

    #[test]
    fn params_validation_and_parsing() {
        assert_eq!(
            AlphaParams::new(r(2, 1), 1, 1),
            Err(ParamError::AlphaTooSmall(r(2, 1)))
        );
        assert_eq!(AlphaParams::new(r(3, 1), 0, 1), Err(ParamError::ZeroK));
        assert_eq!(AlphaParams::new(r(3, 1), 1, 0), Err(ParamError::ZeroD));
        assert_eq!(parse_alpha("int").unwrap(), r(4, 1));
        assert_eq!(parse_alpha("opt").unwrap(), r(239, 70));
        assert_eq!(parse_alpha("7/2").unwrap(), r(7, 2));
        assert_eq!(parse_alpha("5").unwrap(), r(5, 1));
        assert!(parse_alpha("x").is_err());
        assert!(parse_alpha("1/0").is_err());
    }

    #[test]
    fn counts_round_correctly() {
        let b = bound_constants(&AlphaParams::new(alpha_opt(), 2, 3).unwrap());
        // αk = 478/70 ≈ 6.83, 3αkd = 4302/70 ≈ 61.46
        assert_eq!(b.s_min_count(), 7);
        assert_eq!(b.s_max_count(), 61);
    }
}
