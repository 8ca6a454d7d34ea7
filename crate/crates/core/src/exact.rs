//! Exact arithmetic in ℚ(√11), enough to compare edge counts against bounds
//! involving `r = (9 - √11) / 7` without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

type Q = Ratio<i128>;

/// The number `rat + irr * √11` with rational parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    rat: Q,
    irr: Q,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::int(0)
    }

    pub fn int(a: i64) -> Self {
        Surd {
            rat: Q::from_integer(a.into()),
            irr: Q::zero(),
        }
    }

    /// The rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Surd {
            rat: Q::new(num.into(), den.into()),
            irr: Q::zero(),
        }
    }

    /// `(a_num / a_den) + (b_num / b_den) √11`.
    pub fn new(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        Surd {
            rat: Q::new(a_num.into(), a_den.into()),
            irr: Q::new(b_num.into(), b_den.into()),
        }
    }

    /// `r = (9 - √11) / 7`, the smaller root of `7x² - 18x + 10`.
    pub fn r() -> Self {
        Surd::new(9, 7, -1, 7)
    }

    /// Sign of the number, decided exactly.
    pub fn signum(&self) -> Ordering {
        let a = self.rat.cmp(&Q::zero());
        let b = self.irr.cmp(&Q::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sa, sb) if sa == sb => sa,
            (sa, _) => {
                // Opposite signs: compare a² with 11 b².
                let a2 = self.rat * self.rat;
                let b2 = self.irr * self.irr * Q::from_integer(11);
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        f(self.rat) + f(self.irr) * 11f64.sqrt()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

impl From<i64> for Surd {
    fn from(a: i64) -> Self {
        Surd::int(a)
    }
}

impl From<usize> for Surd {
    fn from(a: usize) -> Self {
        Surd::int(a as i64)
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        Surd {
            rat: self.rat + o.rat,
            irr: self.irr + o.irr,
        }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        Surd {
            rat: self.rat - o.rat,
            irr: self.irr - o.irr,
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rat: -self.rat,
            irr: -self.irr,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        Surd {
            rat: self.rat * o.rat + self.irr * o.irr * Q::from_integer(11),
            irr: self.rat * o.irr + self.irr * o.rat,
        }
    }
}

impl Mul<Surd> for usize {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        Surd::from(self) * o
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |x: Q| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", q(self.rat)),
            (true, false) => write!(f, "{}√11", q(self.irr)),
            (false, false) => {
                let sign = if self.irr.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}√11", q(self.rat), sign, q(self.irr.abs()))
            }
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Approximation ratio of the kPP algorithm derived from an `alpha`
/// approximation for kPPE: `(1 - alpha) k + alpha`.
pub fn kpp_ratio_from_alpha(alpha: Surd, k: usize) -> Surd {
    (Surd::int(1) - alpha) * Surd::from(k) + alpha
}

/// The certified kPPE ratio for `k >= 9`: `4/5` for `k` in {9, 10}, `r` above.
pub fn certified_alpha(k: usize) -> Option<Surd> {
    match k {
        0..=8 => None,
        9 | 10 => Some(Surd::ratio(4, 5)),
        _ => Some(Surd::r()),
    }
}

/// The kPP approximation ratio for `k >= 9`.
pub fn kpp_ratio_bound(k: usize) -> Option<Surd> {
    certified_alpha(k).map(|a| kpp_ratio_from_alpha(a, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_is_a_root() {
        let r = Surd::r();
        let poly = Surd::int(7) * r * r - Surd::int(18) * r + Surd::int(10);
        assert_eq!(poly.signum(), Ordering::Equal);
        assert!(Surd::ratio(81191, 100000) < r);
        assert!(r < Surd::ratio(81192, 100000));
        assert!(Surd::ratio(1, 2) < r && r < Surd::ratio(5, 6));
    }

    #[test]
    fn signs_with_mixed_parts() {
        assert_eq!(Surd::new(4, 1, -1, 1).signum(), Ordering::Greater); // 4 - 3.31
        assert_eq!(Surd::new(3, 1, -1, 1).signum(), Ordering::Less);
        assert_eq!(Surd::new(-4, 1, 1, 1).signum(), Ordering::Less);
        assert_eq!(Surd::new(-3, 1, 1, 1).signum(), Ordering::Greater);
        assert_eq!(Surd::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn ratio_table() {
        let expect = [
            2.600, 2.800, 2.881, 3.069, 3.257, 3.445, 3.633, 3.821, 4.009, 4.198,
        ];
        for (k, want) in (9..=18).zip(expect) {
            let got = kpp_ratio_bound(k).unwrap().to_f64();
            assert!((got - want).abs() <= 0.0005, "k={k}: {got}");
        }
        assert_eq!(kpp_ratio_bound(9).unwrap(), Surd::ratio(13, 5));
        assert!(kpp_ratio_bound(8).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(Surd::r().to_string(), "9/7 - 1/7√11");
        assert_eq!(Surd::ratio(4, 5).to_string(), "4/5");
    }
}
