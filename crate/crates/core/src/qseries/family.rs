use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ParamPoint, QMonomial, QSeries, SeriesError, Specialization};
use crate::rational::Rational;

/// The named sums. Each is a function of a shift `s` and the parameters `a`, `b`, `lambda`.
///
/// | family | k-th term |
/// |---|---|
/// | `R` | `a^k q^(k^2+sk) / (q;q)_k` |
/// | `g` | `lambda^k q^(k^2+sk) / ((q;q)_k (-bq;q)_k)` |
/// | `g1` | `lambda^k q^(k^2+sk) / ((q;q)_k (-bq^s;q)_k)` |
/// | `g2` | `prod_{j<k}(b + lambda q^(s+j)) q^((k^2+k)/2) / (q;q)_k` |
/// | `G` | `prod_{j<k}(a + lambda q^j) q^((k^2+k)/2+sk) / ((q;q)_k (-bq;q)_k)` |
/// | `G1A` | `prod_{j<k}(a + lambda q^(s+j)) (b + lambda q^(s+j)) (q/lambda)^k / (q;q)_k` |
/// | `G1B` | as `G1A` with the `b` product starting at `q^(s+1)` |
/// | `G2` | `prod_{j<k}(b q^(s+j) - lambda/a) / ((q;q)_k (-aq^(s+1);q)_k)` |
/// | `C` | `prod_{j<2k}(a - b q^(s+j)) / (q^2;q)_2k * prod_{i=1}^{s-1} (1-q^(2i+1))/(1-q^(2k+2i+1))` |
/// | `Eisenstein` | `(-a)^k q^(k(k+1)/2)` |
///
/// `prod_{j<k}(x + y q^j)` is `(-y/x;q)_k x^k` written without division, so
/// `a = 0` in `G` gives the limiting sum directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    R,
    #[serde(rename = "g")]
    LowerG,
    #[serde(rename = "g1")]
    LowerG1,
    #[serde(rename = "g2")]
    LowerG2,
    #[serde(rename = "G")]
    UpperG,
    G1A,
    G1B,
    #[serde(rename = "G2")]
    UpperG2,
    C,
    Eisenstein,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown series family `{0}` (expected one of R, g, g1, g2, G, G1A, G1B, G2, C, Eisenstein)")]
pub struct ParseFamilyError(pub String);

impl Family {
    pub const ALL: [Family; 10] = [
        Family::R,
        Family::LowerG,
        Family::LowerG1,
        Family::LowerG2,
        Family::UpperG,
        Family::G1A,
        Family::G1B,
        Family::UpperG2,
        Family::C,
        Family::Eisenstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::R => "R",
            Family::LowerG => "g",
            Family::LowerG1 => "g1",
            Family::LowerG2 => "g2",
            Family::UpperG => "G",
            Family::G1A => "G1A",
            Family::G1B => "G1B",
            Family::UpperG2 => "G2",
            Family::C => "C",
            Family::Eisenstein => "Eisenstein",
        }
    }

    /// Smallest shift the family is defined for.
    pub fn default_shift(self) -> usize {
        match self {
            Family::C => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ParseFamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| ParseFamilyError(s.to_string()))
    }
}

/// Sums `t_0 + t_1 + ...` with `t_0 = 1` and `t_{k+1} = step(k, t_k)`.
///
/// Stops once a term vanishes to order `n`. Every step must multiply by a power
/// series, so a vanishing term stays zero. If terms are still nonzero after
/// `n + 2` steps the sum is not finitely supported and `DivergentSum` is returned.
pub fn sum_by_ratio<F>(label: &str, n: usize, mut step: F) -> Result<QSeries, SeriesError>
where
    F: FnMut(usize, &QSeries) -> Result<QSeries, SeriesError>,
{
    let mut acc = QSeries::zero(n);
    let mut t = QSeries::one(n);
    for k in 0..=n + 2 {
        if t.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &t;
        t = step(k, &t)?;
    }
    if t.is_zero() {
        Ok(acc)
    } else {
        Err(SeriesError::DivergentSum(label.to_string()))
    }
}

/// Builds a family at constant parameters.
pub fn build_family(family: Family, s: usize, p: &ParamPoint, n: usize) -> Result<QSeries, SeriesError> {
    build_family_with(family, s, &p.specialize(), n)
}

/// Builds a family with parameters given as monomials, which allows lifted parameters.
pub fn build_family_with(family: Family, s: usize, p: &Specialization, n: usize) -> Result<QSeries, SeriesError> {
    let label = format!("{family}({s})");
    let pole = |what: String| SeriesError::PoleAtParameter { family: label.clone(), detail: what };
    // t / (1 + m q^shift)
    let div_plus = |t: QSeries, m: &QMonomial, shift: usize| -> Result<QSeries, SeriesError> {
        t.div_one_minus(&-m.coef(), m.power() + shift)
            .map_err(|_| pole(format!("factor 1 + ({}) q^{} vanishes", m, shift)))
    };
    let one = Rational::one();
    let (a, b, lam) = (&p.a, &p.b, &p.lambda);

    match family {
        Family::R => sum_by_ratio(&label, n, |k, t| {
            let t = t.mul_monomial(&a.shifted(2 * k + 1 + s));
            t.div_one_minus(&one, k + 1)
        }),
        Family::LowerG => sum_by_ratio(&label, n, |k, t| {
            let t = t.mul_monomial(&lam.shifted(2 * k + 1 + s));
            div_plus(t.div_one_minus(&one, k + 1)?, b, k + 1)
        }),
        Family::LowerG1 => {
            // the k = 0 denominator is already 1; the first factor 1 + b q^s enters at k = 1
            sum_by_ratio(&label, n, |k, t| {
                let t = t.mul_monomial(&lam.shifted(2 * k + 1 + s));
                div_plus(t.div_one_minus(&one, k + 1)?, b, s + k)
            })
        }
        Family::LowerG2 => sum_by_ratio(&label, n, |k, t| {
            let t = t.mul_binomial(b, &lam.shifted(s + k));
            t.mul_monomial(&QMonomial::q_power(k + 1)).div_one_minus(&one, k + 1)
        }),
        Family::UpperG => sum_by_ratio(&label, n, |k, t| {
            let t = t.mul_binomial(a, &lam.shifted(k));
            let t = t.mul_monomial(&QMonomial::q_power(k + 1 + s));
            div_plus(t.div_one_minus(&one, k + 1)?, b, k + 1)
        }),
        Family::G1A | Family::G1B => {
            let extra = usize::from(family == Family::G1B);
            let q_over_lam = QMonomial::q_power(1).checked_div(lam).ok_or_else(|| {
                if lam.is_zero() {
                    pole("lambda = 0".to_string())
                } else {
                    SeriesError::DivergentSum(label.clone())
                }
            })?;
            sum_by_ratio(&label, n, |k, t| {
                let t = t.mul_binomial(a, &lam.shifted(s + k));
                let t = t.mul_binomial(b, &lam.shifted(s + extra + k));
                t.mul_monomial(&q_over_lam).div_one_minus(&one, k + 1)
            })
        }
        Family::UpperG2 => {
            let lam_over_a = lam.checked_div(a).ok_or_else(|| {
                if a.is_zero() {
                    pole("a = 0".to_string())
                } else {
                    SeriesError::DivergentSum(label.clone())
                }
            })?;
            sum_by_ratio(&label, n, |k, t| {
                let t = t.mul_binomial(&lam_over_a.neg(), &b.shifted(s + k));
                div_plus(t.div_one_minus(&one, k + 1)?, a, s + 1 + k)
            })
        }
        Family::C => {
            if s == 0 {
                return Err(SeriesError::UnsupportedShift { family: family.to_string(), shift: s });
            }
            // The inner product telescopes between consecutive k:
            // prod_i (1-q^(2k+2i+1))/(1-q^(2k+2i+3)) = (1-q^(2k+3))/(1-q^(2k+2s+1)),
            // which cancels against (q^2;q)_{2k+2}/(q^2;q)_{2k}.
            let mb = b.neg();
            sum_by_ratio(&label, n, |k, t| {
                let t = t.mul_binomial(a, &mb.shifted(s + 2 * k));
                let t = t.mul_binomial(a, &mb.shifted(s + 2 * k + 1));
                t.div_one_minus(&one, 2 * k + 2)?.div_one_minus(&one, 2 * k + 2 * s + 1)
            })
        }
        Family::Eisenstein => sum_by_ratio(&label, n, |k, t| Ok(t.mul_monomial(&a.neg().shifted(k + 1)))),
    }
}
