use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SeriesError;
use crate::rational::Rational;

/// A single term `coef * q^power`.
///
/// The zero monomial is stored with power 0 so that equality stays structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QMonomial {
    coef: Rational,
    power: usize,
}

impl QMonomial {
    pub fn new(coef: Rational, power: usize) -> Self {
        if coef.is_zero() {
            Self::zero()
        } else {
            QMonomial { coef, power }
        }
    }

    pub fn zero() -> Self {
        QMonomial { coef: Rational::zero(), power: 0 }
    }

    pub fn one() -> Self {
        QMonomial { coef: Rational::one(), power: 0 }
    }

    /// `q^power` with unit coefficient.
    pub fn q_power(power: usize) -> Self {
        QMonomial { coef: Rational::one(), power }
    }

    pub fn constant(coef: Rational) -> Self {
        Self::new(coef, 0)
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    /// q-adic valuation; `None` for the zero monomial.
    pub fn valuation(&self) -> Option<usize> {
        (!self.is_zero()).then_some(self.power)
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial::new(&self.coef * &other.coef, self.power + other.power)
    }

    pub fn scale(&self, c: &Rational) -> QMonomial {
        QMonomial::new(&self.coef * c, self.power)
    }

    /// Multiply by `q^by`.
    pub fn shifted(&self, by: usize) -> QMonomial {
        QMonomial::new(self.coef.clone(), self.power + by)
    }

    pub fn neg(&self) -> QMonomial {
        QMonomial::new(-&self.coef, self.power)
    }

    pub fn pow(&self, k: usize) -> QMonomial {
        QMonomial::new(self.coef.pow(k as i32), self.power * k)
    }

    /// Quotient as a monomial, if it has no negative power of q.
    pub fn checked_div(&self, other: &QMonomial) -> Option<QMonomial> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QMonomial::zero());
        }
        let power = self.power.checked_sub(other.power)?;
        Some(QMonomial::new(&self.coef / &other.coef, power))
    }

    pub fn to_series(&self, order: usize) -> QSeries {
        let mut s = QSeries::zero(order);
        if self.power <= order {
            s.coeffs[self.power] = self.coef.clone();
        }
        s
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{}", self.coef),
            1 => write!(f, "{}*q", self.coef),
            p => write!(f, "{}*q^{}", self.coef, p),
        }
    }
}

/// Truncated formal power series `c0 + c1 q + ... + cN q^N + O(q^(N+1))`.
///
/// The order `N` is inclusive. Binary operations on operands of different
/// orders truncate to the smaller one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        QSeries { coeffs }
    }

    /// Sum of monomials, truncated at `order`.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a QMonomial>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for t in terms {
            if t.power() <= order {
                s.coeffs[t.power()] += t.coef();
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Rational> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Index of the lowest nonzero coefficient, `None` if the series vanishes to its order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The lowest nonzero term.
    pub fn leading_term(&self) -> Option<QMonomial> {
        self.valuation().map(|m| QMonomial::new(self.coeffs[m].clone(), m))
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        if order >= self.order() {
            return self.clone();
        }
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Reads `self` as an exact polynomial and re-truncates it at `order`,
    /// padding with zeros when `order` exceeds the current order.
    pub fn padded(&self, order: usize) -> QSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        QSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiply by a monomial, keeping the order of `self`.
    pub fn mul_monomial(&self, m: &QMonomial) -> QSeries {
        let order = self.order();
        let mut out = QSeries::zero(order);
        if m.is_zero() {
            return out;
        }
        for i in 0..=order.saturating_sub(m.power()) {
            if i + m.power() > order {
                break;
            }
            if !self.coeffs[i].is_zero() {
                out.coeffs[i + m.power()] = &self.coeffs[i] * m.coef();
            }
        }
        out
    }

    /// Divide by `q^m`, dropping the (assumed zero) low coefficients. The order drops by `m`.
    ///
    /// # Panics
    /// If `m` exceeds the order.
    pub fn shift_down(&self, m: usize) -> QSeries {
        assert!(m <= self.order(), "shift exceeds truncation order");
        QSeries { coeffs: self.coeffs[m..].to_vec() }
    }

    /// `self * (x + y)` for monomials `x`, `y`.
    pub fn mul_binomial(&self, x: &QMonomial, y: &QMonomial) -> QSeries {
        let order = self.order();
        let mut out = QSeries::zero(order);
        for t in [x, y] {
            if t.is_zero() || t.power() > order {
                continue;
            }
            for i in 0..=order - t.power() {
                if !self.coeffs[i].is_zero() {
                    let v = &self.coeffs[i] * t.coef();
                    out.coeffs[i + t.power()] += &v;
                }
            }
        }
        out
    }

    /// `self / (1 - c q^m)`. For `m = 0` this is division by the scalar `1 - c`,
    /// which fails when `c = 1`.
    pub fn div_one_minus(&self, c: &Rational, m: usize) -> Result<QSeries, SeriesError> {
        if m == 0 {
            let d = Rational::one() - c;
            let inv = d.recip().ok_or(SeriesError::NonUnitSeries)?;
            return Ok(self.scale(&inv));
        }
        let mut out = self.clone();
        if c.is_zero() {
            return Ok(out);
        }
        for n in m..=self.order() {
            if !out.coeffs[n - m].is_zero() {
                let v = &out.coeffs[n - m] * c;
                out.coeffs[n] += &v;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse to the same order, by Newton iteration
    /// `e -> e (2 - d e)`, which doubles the number of correct coefficients.
    pub fn inverse(&self) -> Result<QSeries, SeriesError> {
        let c0 = self.coeffs[0].recip().ok_or(SeriesError::NonUnitSeries)?;
        let order = self.order();
        let mut e = QSeries { coeffs: vec![c0] };
        let mut prec = 0;
        while prec < order {
            prec = (2 * prec + 1).min(order);
            let e_p = e.padded(prec);
            let de = &self.truncate(prec) * &e_p;
            let two_minus = &QSeries::constant(Rational::from(2), prec) - &de;
            e = &e_p * &two_minus;
        }
        Ok(e)
    }

    /// `self / other`, requiring `other` to be a unit.
    pub fn divide(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: usize) -> QSeries {
        let mut acc = QSeries::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Lowest power at which the two series differ, compared to the common order.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(x, y)| x != y)
    }

    /// Exact value of the truncated polynomial at a rational point.
    pub fn evaluate(&self, q: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// Coefficients as canonical rational strings, one per power `0..=order`.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    /// Renders the nonzero terms only, without the `O(...)` remainder.
    pub fn render_polynomial(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let q = match i {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&q);
            } else {
                out.push_str(&format!("{mag}*{q}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^({}))", self.render_polynomial(), self.order() + 1)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'b> Add<&'b QSeries> for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &'b QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl<'b> Sub<&'b QSeries> for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &'b QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect() }
    }
}

impl<'b> Mul<&'b QSeries> for &QSeries {
    type Output = QSeries;
    /// Convolves integer numerators over a common denominator, so each output
    /// coefficient is reduced once instead of after every product.
    fn mul(self, rhs: &'b QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let (x, dx) = integer_form(&self.coeffs[..=order]);
        let (y, dy) = integer_form(&rhs.coeffs[..=order]);
        let mut acc = vec![BigInt::zero(); order + 1];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate().take(order + 1 - i) {
                if !yj.is_zero() {
                    acc[i + j] += xi * yj;
                }
            }
        }
        let den = dx * dy;
        QSeries {
            coeffs: acc
                .into_iter()
                .map(|c| if c.is_zero() { Rational::zero() } else { Rational::from_bigints(c, den.clone()) })
                .collect(),
        }
    }
}

/// Integer numerators over the lcm of the denominators.
fn integer_form(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs.iter().filter(|c| !c.is_zero()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums =
        coeffs.iter().map(|c| if c.is_zero() { BigInt::zero() } else { c.numer() * (&den / c.denom()) }).collect();
    (nums, den)
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_series_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &'a QSeries) -> QSeries {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<QSeries> for &'a QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                self.$method(&rhs)
            }
        }
    };
}

owned_series_ops!(Add, add);
owned_series_ops!(Sub, sub);
owned_series_ops!(Mul, mul);

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<Rational>::deserialize(deserializer)?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty coefficient array"));
        }
        Ok(QSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn poly(cs: &[i64]) -> QSeries {
        QSeries::from_coeffs(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn add_truncates_to_common_order() {
        let x = poly(&[1, 1, 0, 0]);
        let z = QSeries::zero(3);
        assert_eq!(&x + &z, x);
        let y = poly(&[1, 1, 1]);
        let w = poly(&[1, -1, 0]);
        assert_eq!(&y + &w, poly(&[2, 0, 1]));
        assert_eq!((&x + &y).order(), 2);
    }

    #[test]
    fn products() {
        assert_eq!(&poly(&[1, 1, 0]) * &poly(&[1, -1, 0]), poly(&[1, 0, -1]));
        assert_eq!(poly(&[1, 1, 0]).pow(2), poly(&[1, 2, 1]));
        let one_minus_q = poly(&[1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let inv = one_minus_q.inverse().unwrap();
        assert_eq!(&one_minus_q * &inv, QSeries::one(10));
    }

    #[test]
    fn inverses() {
        assert_eq!(poly(&[1, -1, 0, 0, 0]).inverse().unwrap(), poly(&[1, 1, 1, 1, 1]));
        assert_eq!(QSeries::one(6).inverse().unwrap(), QSeries::one(6));
        let two_minus_q = poly(&[2, -1, 0]);
        let e = two_minus_q.inverse().unwrap();
        assert_eq!(e.coeffs(), &[r(1, 2), r(1, 4), r(1, 8)]);
        assert_eq!(poly(&[0, 1]).inverse(), Err(SeriesError::NonUnitSeries));
    }

    #[test]
    fn monomial_products() {
        let q = QMonomial::q_power(1);
        assert_eq!(QSeries::one(3).mul_monomial(&q), poly(&[0, 1, 0, 0]));
        assert_eq!(poly(&[5, 7, 1]).mul_monomial(&QMonomial::zero()), QSeries::zero(2));
        let m = QMonomial::new(r(3, 2), 2);
        let got = poly(&[1, 1, 0, 0, 0]).mul_monomial(&m);
        assert_eq!(got.coeffs(), &[r(0, 1), r(0, 1), r(3, 2), r(3, 2), r(0, 1)]);
    }

    #[test]
    fn binomial_helpers_match_full_products() {
        let x = poly(&[1, 2, -3, 4, 0, 1]);
        let a = QMonomial::constant(r(2, 3));
        let b = QMonomial::new(r(-5, 4), 2);
        let direct = &x * &QSeries::from_terms([&a, &b], 5);
        assert_eq!(x.mul_binomial(&a, &b), direct);

        let divided = x.div_one_minus(&r(3, 7), 2).unwrap();
        let back = divided.mul_binomial(&QMonomial::one(), &QMonomial::new(r(-3, 7), 2));
        assert_eq!(back, x);
        assert!(x.div_one_minus(&Rational::one(), 0).is_err());
    }

    #[test]
    fn rendering() {
        let s = QSeries::from_coeffs(vec![r(1, 1), r(-1, 1), r(0, 1), r(3, 2)]);
        assert_eq!(s.to_string(), "1 - q + 3/2*q^3 + O(q^(4))");
        assert_eq!(QSeries::zero(2).to_string(), "0 + O(q^(3))");
        assert_eq!(s.to_coeff_strings(), vec!["1", "-1", "0", "3/2"]);
    }

    #[test]
    fn mismatch_and_evaluate() {
        let a = poly(&[1, 2, 3, 4]);
        let b = poly(&[1, 2, 0, 4]);
        assert_eq!(a.first_mismatch(&b), Some(2));
        assert_eq!(a.first_mismatch(&a), None);
        assert_eq!(a.evaluate(&r(1, 2)), r(1, 1) + r(1, 1) + r(3, 4) + r(1, 2));
    }

    #[test]
    fn monomial_division() {
        let lam = QMonomial::new(r(5, 7), 1);
        let a = QMonomial::constant(r(2, 3));
        assert_eq!(lam.checked_div(&a), Some(QMonomial::new(r(15, 14), 1)));
        assert_eq!(a.checked_div(&lam), None);
        assert_eq!(a.checked_div(&QMonomial::zero()), None);
        assert_eq!(QMonomial::new(Rational::zero(), 5), QMonomial::zero());
    }
}
