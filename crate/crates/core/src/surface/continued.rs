use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// An irrational slope, given either by decimal digits or by an eventually
/// periodic continued fraction `[a0; a1, .., ak | p1, .., pm]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Slope {
    Decimal { digits: String },
    Periodic { prefix: Vec<u64>, period: Vec<u64> },
}

/// One convergent `p/q` with its index in the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    pub partial_quotient: u64,
    pub p: u64,
    pub q: u64,
}

impl Slope {
    pub fn golden() -> Self {
        Slope::Periodic {
            prefix: vec![0],
            period: vec![1],
        }
    }

    pub fn silver() -> Self {
        Slope::Periodic {
            prefix: vec![0],
            period: vec![2],
        }
    }

    /// The first `n` partial quotients `a0, .., a(n-1)`.
    pub fn partial_quotients(&self, n: usize) -> Result<Vec<u64>> {
        match self {
            Slope::Periodic { prefix, period } => {
                if period.is_empty() && n > prefix.len() {
                    return Err(Error::RationalSlope(prefix.len()));
                }
                Ok(prefix.iter().chain(period.iter().cycle()).take(n).copied().collect())
            }
            Slope::Decimal { digits } => {
                let (num, den) = parse_decimal(digits)?;
                let lo = expand(num.clone(), den.clone());
                if lo.len() <= n {
                    return Err(Error::RationalSlope(lo.len()));
                }
                // every real in [num/den, (num+1)/den] shares the common prefix
                // except possibly its last term
                let hi = expand(num + 1u32, den);
                let common = lo.iter().zip(&hi).take_while(|(a, b)| a == b).count();
                let reliable = common.min(lo.len() - 1).min(hi.len() - 1);
                if reliable < n {
                    return Err(Error::InvalidInput(format!(
                        "{} digits determine only {reliable} partial quotients, {n} requested",
                        digits.len()
                    )));
                }
                Ok(lo[..n].to_vec())
            }
        }
    }

    /// Floating-point value, from the digits or from a deep convergent.
    pub fn value(&self) -> f64 {
        match self {
            Slope::Decimal { digits } => digits.parse().unwrap_or(f64::NAN),
            Slope::Periodic { .. } => {
                let mut best = f64::NAN;
                for n in 2..200 {
                    match convergents(self, n) {
                        Ok(c) => {
                            let last = c[c.len() - 1];
                            if last.q > 1 << 40 {
                                break;
                            }
                            best = last.p as f64 / last.q as f64;
                        }
                        Err(_) => break,
                    }
                }
                best
            }
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `golden`, `silver`, `cf:a0;a1,a2|p1,p2` or a decimal like `0.41421356..`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "golden" => return Ok(Slope::golden()),
            "silver" | "sqrt2-1" => return Ok(Slope::silver()),
            _ => {}
        }
        if let Some(body) = s.strip_prefix("cf:") {
            let (head, period) = body.split_once('|').unwrap_or((body, ""));
            let (a0, rest) = head.split_once(';').unwrap_or((head, ""));
            let list = |t: &str| -> Result<Vec<u64>> {
                t.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| {
                        x.parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad partial quotient `{x}`")))
                    })
                    .collect()
            };
            let mut prefix = list(a0)?;
            if prefix.len() != 1 {
                return Err(Error::Parse("expected a single integer part before `;`".into()));
            }
            prefix.extend(list(rest)?);
            let period = list(period)?;
            if prefix.iter().skip(1).chain(&period).any(|&a| a == 0) {
                return Err(Error::Parse(
                    "partial quotients after the first must be positive".into(),
                ));
            }
            return Ok(Slope::Periodic { prefix, period });
        }
        parse_decimal(s)?;
        Ok(Slope::Decimal { digits: s.to_string() })
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Decimal { digits } => write!(f, "{digits}"),
            Slope::Periodic { prefix, period } => {
                let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                write!(f, "cf:{};{}|{}", prefix[0], join(&prefix[1..]), join(period))
            }
        }
    }
}

fn parse_decimal(s: &str) -> Result<(BigUint, BigUint)> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a nonnegative decimal: `{s}`")));
    }
    let num: BigUint = format!("{int}{frac}")
        .parse()
        .map_err(|_| Error::Parse(s.to_string()))?;
    let den = BigUint::from(10u32).pow(frac.len() as u32);
    if num.is_zero() {
        return Err(Error::InvalidInput("slope must be positive".into()));
    }
    Ok((num, den))
}

/// Complete continued fraction of `num/den` by the Euclidean algorithm.
fn expand(mut num: BigUint, mut den: BigUint) -> Vec<u64> {
    let mut out = Vec::new();
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        out.push(a.to_u64().unwrap_or(u64::MAX));
        num = den;
        den = r;
    }
    out
}

/// The first `n` convergents `p_i/q_i`, from `p_{-1}/q_{-1} = 1/0`, `p_{-2}/q_{-2} = 0/1`.
pub fn convergents(alpha: &Slope, n: usize) -> Result<Vec<Convergent>> {
    let a = alpha.partial_quotients(n)?;
    let (mut p1, mut q1, mut p2, mut q2) = (1u64, 0u64, 0u64, 1u64);
    let mut out = Vec::with_capacity(n);
    for (index, &ai) in a.iter().enumerate() {
        let overflow = || Error::InvalidInput(format!("convergent {index} overflows 64 bits"));
        let p = ai
            .checked_mul(p1)
            .and_then(|x| x.checked_add(p2))
            .ok_or_else(overflow)?;
        let q = ai
            .checked_mul(q1)
            .and_then(|x| x.checked_add(q2))
            .ok_or_else(overflow)?;
        out.push(Convergent {
            index,
            partial_quotient: ai,
            p,
            q,
        });
        (p2, q2, p1, q1) = (p1, q1, p, q);
    }
    Ok(out)
}

/// Normalized intersection number of the slope-`p/q` curve with the slope-α
/// measured lamination: `|q·α − p|`.
pub fn loop_measure(alpha: f64, p: u64, q: u64) -> f64 {
    (q as f64 * alpha - p as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_rational::Ratio;

    const GOLDEN_DIGITS: &str = "0.6180339887498948482045868343656381177203";

    fn pq(c: &[Convergent]) -> Vec<(u64, u64)> {
        c.iter().map(|c| (c.p, c.q)).collect()
    }

    #[test]
    fn golden_convergents() {
        let c = convergents(&Slope::golden(), 6).unwrap();
        assert_eq!(pq(&c), vec![(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
        let from_digits = convergents(&GOLDEN_DIGITS.parse().unwrap(), 30).unwrap();
        assert_eq!(pq(&from_digits), pq(&convergents(&Slope::golden(), 30).unwrap()));
        let alpha = Slope::golden().value();
        assert_abs_diff_eq!(alpha, (5f64.sqrt() - 1.0) / 2.0, epsilon = 1e-15);
        let m: Vec<f64> = c.iter().map(|c| loop_measure(alpha, c.p, c.q)).collect();
        for (got, want) in m.iter().zip([0.618, 0.382, 0.236, 0.146, 0.090, 0.056]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-3);
        }
        assert!(m.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn silver_convergents() {
        let c = convergents(&"cf:0;|2".parse().unwrap(), 4).unwrap();
        assert_eq!(pq(&c), vec![(0, 1), (1, 2), (2, 5), (5, 12)]);
        let digits: Slope = "0.41421356237309504880168872420969807857".parse().unwrap();
        assert_eq!(pq(&convergents(&digits, 4).unwrap()), pq(&c));
    }

    #[test]
    fn convergents_match_backward_evaluation() {
        let alpha: Slope = "cf:0;3,1,4|1,5,9,2".parse().unwrap();
        let c = convergents(&alpha, 14).unwrap();
        let a = alpha.partial_quotients(14).unwrap();
        for k in 0..c.len() {
            let mut x = Ratio::from_integer(a[k] as i128);
            for &ai in a[..k].iter().rev() {
                x = Ratio::from_integer(ai as i128) + x.recip();
            }
            assert_eq!(x, Ratio::new(c[k].p as i128, c[k].q as i128));
        }
    }

    #[test]
    fn errors_are_closer_than_one_over_q_and_alternate() {
        let alpha = Slope::golden().value();
        let c = convergents(&Slope::golden(), 25).unwrap();
        for w in c.windows(2) {
            let (e0, e1) = (
                w[0].q as f64 * alpha - w[0].p as f64,
                w[1].q as f64 * alpha - w[1].p as f64,
            );
            assert!(e0 * e1 < 0.0);
            assert!(e1.abs() < e0.abs());
            assert!(loop_measure(alpha, w[1].p, w[1].q) < 1.0 / w[1].q as f64);
        }
    }

    #[test]
    fn rational_slopes_are_rejected() {
        assert_eq!(convergents(&"0.375".parse().unwrap(), 5), Err(Error::RationalSlope(4)));
        assert!(matches!(
            convergents(&"cf:0;2,3|".parse().unwrap(), 5),
            Err(Error::RationalSlope(3))
        ));
        assert!(matches!(
            convergents(&"0.6180339887".parse().unwrap(), 30),
            Err(Error::InvalidInput(_))
        ));
        assert!("abc".parse::<Slope>().is_err());
        assert!("0".parse::<Slope>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["cf:0;1,2|3,4", "cf:0;|1", "0.25"] {
            let parsed: Slope = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
    }
}
