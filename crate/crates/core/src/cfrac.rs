//! Continued fractions with power-series elements.
//!
//! A [`CFrac`] represents `b0 + a1/(b1 + a2/(b2 + ...))`, optionally under a
//! head numerator: `head / (b0 + a1/(b1 + ...))`. Elements come from a rule
//! `n -> (a_n, b_n)` evaluated at a requested truncation order. `b0` and the
//! head are exact polynomials and are re-truncated to whatever order is asked.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::qseries::QSeries;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("denominator at depth {depth} has zero constant term")]
    NonUnitDenominator { depth: usize },
    #[error("no Worpitzky index found within horizon {horizon}")]
    HorizonExceeded { horizon: usize },
    #[error("near-zero denominator at depth {depth} in numeric evaluation")]
    NumericBlowup { depth: usize },
    #[error("numeric evaluation needs |q| < 1, got {0}")]
    InvalidNome(String),
}

/// Partial numerator and denominator at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfElement {
    pub a: QSeries,
    pub b: QSeries,
}

impl CfElement {
    pub fn new(a: QSeries, b: QSeries) -> Self {
        CfElement { a, b }
    }
}

pub type ElementRule = Arc<dyn Fn(usize, usize) -> CfElement + Send + Sync>;

#[derive(Clone)]
pub struct CFrac {
    head: Option<QSeries>,
    b0: QSeries,
    rule: ElementRule,
    depth_hint: Option<usize>,
}

impl CFrac {
    /// `b0 + K(a_n/b_n)`. The rule receives `(n, order)` with `n >= 1`.
    pub fn new<F>(b0: QSeries, rule: F) -> Self
    where
        F: Fn(usize, usize) -> CfElement + Send + Sync + 'static,
    {
        CFrac { head: None, b0, rule: Arc::new(rule), depth_hint: None }
    }

    /// A finite fraction from explicit elements `a_1..a_k`. Beyond `k` the rule
    /// yields `a = 0, b = 1`, which leaves every approximant unchanged.
    pub fn from_elements(b0: QSeries, elements: Vec<CfElement>) -> Self {
        let depth = elements.len();
        let elements = Arc::new(elements);
        let cf = CFrac::new(b0, move |n, order| match elements.get(n - 1) {
            Some(e) => CfElement::new(e.a.truncate(order), e.b.truncate(order)),
            None => CfElement::new(QSeries::zero(order), QSeries::one(order)),
        });
        cf.with_depth_hint(depth)
    }

    /// Turns the fraction into `head / (b0 + K(a_n/b_n))`.
    pub fn with_head(mut self, head: QSeries) -> Self {
        self.head = Some(head);
        self
    }

    pub fn with_depth_hint(mut self, depth: usize) -> Self {
        self.depth_hint = Some(depth);
        self
    }

    pub fn head(&self) -> Option<&QSeries> {
        self.head.as_ref()
    }

    pub fn b0(&self) -> &QSeries {
        &self.b0
    }

    pub fn depth_hint(&self) -> Option<usize> {
        self.depth_hint
    }

    /// Element `n >= 1` at the given order.
    pub fn element(&self, n: usize, order: usize) -> CfElement {
        assert!(n >= 1, "elements are indexed from 1");
        (self.rule)(n, order)
    }

    /// Same fraction with element `n` replaced by `f(element)`.
    pub fn map_element<F>(&self, n: usize, f: F) -> CFrac
    where
        F: Fn(CfElement) -> CfElement + Send + Sync + 'static,
    {
        let rule = Arc::clone(&self.rule);
        CFrac {
            head: self.head.clone(),
            b0: self.b0.clone(),
            rule: Arc::new(move |k, order| {
                let e = rule(k, order);
                if k == n {
                    f(e)
                } else {
                    e
                }
            }),
            depth_hint: self.depth_hint,
        }
    }

    /// `A_k`, `B_k` for `k = 0..=n` by the three-term recurrence.
    pub fn convergents(&self, n: usize, order: usize) -> Convergents {
        let mut num = Vec::with_capacity(n + 1);
        let mut den = Vec::with_capacity(n + 1);
        num.push(self.b0.padded(order));
        den.push(QSeries::one(order));
        let mut num_prev = QSeries::one(order);
        let mut den_prev = QSeries::zero(order);
        for k in 1..=n {
            let e = self.element(k, order);
            let a_k = &(&e.b * &num[k - 1]) + &(&e.a * &num_prev);
            let b_k = &(&e.b * &den[k - 1]) + &(&e.a * &den_prev);
            num_prev = num[k - 1].clone();
            den_prev = den[k - 1].clone();
            num.push(a_k);
            den.push(b_k);
        }
        Convergents { numerators: num, denominators: den }
    }

    /// `S_n(0)` as a series.
    pub fn approximant(&self, n: usize, order: usize) -> Result<QSeries, CfError> {
        let conv = self.convergents(n, order);
        self.finish(conv.numerator(n).clone(), conv.denominator(n).clone(), n)
    }

    /// `S_0(0), ..., S_n(0)` from a single pass of the recurrence.
    pub fn approximants(&self, n: usize, order: usize) -> Result<Vec<QSeries>, CfError> {
        let conv = self.convergents(n, order);
        (0..=n).map(|k| self.finish(conv.numerator(k).clone(), conv.denominator(k).clone(), k)).collect()
    }

    /// `S_n(w) = (A_n + A_{n-1} w) / (B_n + B_{n-1} w)`, under the head if present.
    pub fn modified_approximant(&self, n: usize, w: &QSeries, order: usize) -> Result<QSeries, CfError> {
        let conv = self.convergents(n, order);
        let (num_prev, den_prev) = if n == 0 {
            (QSeries::one(order), QSeries::zero(order))
        } else {
            (conv.numerator(n - 1).clone(), conv.denominator(n - 1).clone())
        };
        let p = conv.numerator(n) + &(&num_prev * w);
        let q = conv.denominator(n) + &(&den_prev * w);
        self.finish(p, q, n)
    }

    fn finish(&self, p: QSeries, q: QSeries, depth: usize) -> Result<QSeries, CfError> {
        let non_unit = |_| CfError::NonUnitDenominator { depth };
        match &self.head {
            None => Ok(&p * &q.inverse().map_err(non_unit)?),
            Some(h) => Ok(&(&h.padded(p.order()) * &q) * &p.inverse().map_err(non_unit)?),
        }
    }

    /// The fraction `K_{n>=1}(a_{n0+n}/b_{n0+n})` with `b0 = 0` and no head.
    pub fn tail(&self, n0: usize) -> CFrac {
        let rule = Arc::clone(&self.rule);
        let order = self.b0.order();
        CFrac {
            head: None,
            b0: QSeries::zero(order),
            rule: Arc::new(move |n, ord| rule(n0 + n, ord)),
            depth_hint: self.depth_hint.map(|d| d.saturating_sub(n0)),
        }
    }

    /// Equivalent fraction with unit partial denominators, materialized to `depth`.
    ///
    /// `a_n' = a_n / (b_{n-1} b_n)`. Without a head, `b0` is kept and enters the
    /// first quotient as 1. With a head, `b0` is divided out as well, giving
    /// `head/b0 / (1 + a_1/(b0 b_1) + ...)`.
    pub fn equivalence_unit_denominators(&self, depth: usize, order: usize) -> Result<CFrac, CfError> {
        let (head, b0, mut prev) = match &self.head {
            Some(h) => {
                let inv = self.b0.padded(order).inverse().map_err(|_| CfError::NonUnitDenominator { depth: 0 })?;
                (Some(h.padded(order) * &inv), QSeries::one(order), self.b0.padded(order))
            }
            None => (None, self.b0.padded(order), QSeries::one(order)),
        };
        let mut elements = Vec::with_capacity(depth);
        for n in 1..=depth {
            let e = self.element(n, order);
            let d = (&prev * &e.b).inverse().map_err(|_| CfError::NonUnitDenominator { depth: n })?;
            elements.push(CfElement::new(&e.a * &d, QSeries::one(order)));
            prev = e.b;
        }
        let cf = CFrac::from_elements(b0, elements);
        Ok(match head {
            Some(h) => cf.with_head(h),
            None => cf,
        })
    }

    /// The first `k` levels in the style `b0 + a1/(b1 +) a2/(b2 +) ...`.
    pub fn render(&self, k: usize, order: usize) -> String {
        let mut out = String::new();
        if let Some(h) = &self.head {
            out.push_str(&format!("{}/(", h.padded(order).render_polynomial()));
        }
        out.push_str(&self.b0.padded(order).render_polynomial());
        out.push_str(" +");
        for n in 1..=k {
            let e = self.element(n, order);
            out.push_str(&format!(" ({})/({} +)", e.a.render_polynomial(), e.b.render_polynomial()));
        }
        out.push_str(" ...");
        if self.head.is_some() {
            out.push(')');
        }
        out
    }
}

impl fmt::Debug for CFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CFrac")
            .field("head", &self.head)
            .field("b0", &self.b0)
            .field("depth_hint", &self.depth_hint)
            .finish_non_exhaustive()
    }
}

/// Numerators `A_0..A_n` and denominators `B_0..B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    numerators: Vec<QSeries>,
    denominators: Vec<QSeries>,
}

impl Convergents {
    pub fn depth(&self) -> usize {
        self.numerators.len() - 1
    }

    pub fn numerator(&self, k: usize) -> &QSeries {
        &self.numerators[k]
    }

    pub fn denominator(&self, k: usize) -> &QSeries {
        &self.denominators[k]
    }

    pub fn numerators(&self) -> &[QSeries] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[QSeries] {
        &self.denominators
    }
}

/// Free-function form of [`CFrac::approximant`].
pub fn approximant(cf: &CFrac, n: usize, order: usize) -> Result<QSeries, CfError> {
    cf.approximant(n, order)
}

pub fn modified_approximant(cf: &CFrac, n: usize, w: &QSeries, order: usize) -> Result<QSeries, CfError> {
    cf.modified_approximant(n, w, order)
}

pub fn tail(cf: &CFrac, n0: usize) -> CFrac {
    cf.tail(n0)
}

pub fn equivalence_unit_denominators(cf: &CFrac, depth: usize, order: usize) -> Result<CFrac, CfError> {
    cf.equivalence_unit_denominators(depth, order)
}

type NumericRule = Arc<dyn Fn(usize) -> (f64, f64) + Send + Sync>;

/// A continued fraction with floating-point elements.
#[derive(Clone)]
pub struct NumericCF {
    head: Option<f64>,
    b0: f64,
    rule: NumericRule,
}

impl NumericCF {
    pub fn new<F>(b0: f64, rule: F) -> Self
    where
        F: Fn(usize) -> (f64, f64) + Send + Sync + 'static,
    {
        NumericCF { head: None, b0, rule: Arc::new(rule) }
    }

    pub fn with_head(mut self, head: f64) -> Self {
        self.head = Some(head);
        self
    }

    /// Evaluates every series element at `q`. Element `n` is built at order
    /// `4n + 16`, enough for all polynomial elements in the catalog.
    pub fn from_cfrac(cf: &CFrac, q: &Rational) -> Result<Self, CfError> {
        if q.abs() >= Rational::one() {
            return Err(CfError::InvalidNome(q.to_string()));
        }
        let qf = q.to_f64();
        let eval = move |s: &QSeries| s.coeffs().iter().rev().fold(0.0, |acc, c| acc * qf + c.to_f64());
        let head = cf.head().map(&eval);
        let b0 = eval(cf.b0());
        let cf = cf.clone();
        let rule = move |n: usize| {
            let e = cf.element(n, 4 * n + 16);
            (eval(&e.a), eval(&e.b))
        };
        Ok(NumericCF { head, b0, rule: Arc::new(rule) })
    }

    pub fn element(&self, n: usize) -> (f64, f64) {
        (self.rule)(n)
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }
}

/// Default search cap for [`worpitzky_index`].
pub const WORPITZKY_HORIZON: usize = 200;

/// Smallest `N` with `|a_n| <= bound` for all `n >= N`, judged on `n <= horizon`.
///
/// The candidate must leave at least half the window as supporting evidence,
/// otherwise the search is inconclusive.
pub fn worpitzky_index(ncf: &NumericCF, bound: f64, horizon: usize) -> Result<usize, CfError> {
    let last_bad = (1..=horizon).filter(|&n| ncf.element(n).0.abs() > bound).max();
    let index = last_bad.map_or(1, |n| n + 1);
    if index > horizon / 2 {
        return Err(CfError::HorizonExceeded { horizon });
    }
    Ok(index)
}

/// Backward evaluation of `S_n(0)`.
pub fn numeric_value(ncf: &NumericCF, n: usize) -> Result<f64, CfError> {
    const TINY: f64 = 1e-300;
    let mut t = 0.0;
    for k in (1..=n).rev() {
        let (a, b) = ncf.element(k);
        let d = b + t;
        if d.abs() < TINY {
            return Err(CfError::NumericBlowup { depth: k });
        }
        t = a / d;
    }
    let d = ncf.b0 + t;
    match ncf.head {
        None => Ok(d),
        Some(h) => {
            if d.abs() < TINY {
                return Err(CfError::NumericBlowup { depth: 0 });
            }
            Ok(h / d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::QMonomial;

    fn rr(a: Rational) -> CFrac {
        CFrac::new(QSeries::one(0), move |n, order| {
            CfElement::new(QMonomial::new(a.clone(), n).to_series(order), QSeries::one(order))
        })
        .with_head(QSeries::one(0))
    }

    fn poly(cs: &[i64]) -> QSeries {
        QSeries::from_coeffs(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn approximant_table_matches_single_calls() {
        let cf = rr(Rational::new(2, 3));
        let all = cf.approximants(5, 12).unwrap();
        for (k, s) in all.iter().enumerate() {
            assert_eq!(*s, cf.approximant(k, 12).unwrap());
        }
    }

    #[test]
    fn depth_one_rr() {
        let cf = rr(Rational::one());
        assert_eq!(cf.approximant(1, 3).unwrap(), poly(&[1, -1, 1, -1]));
        assert_eq!(cf.approximant(0, 3).unwrap(), QSeries::one(3));
    }

    #[test]
    fn depth_zero_is_b0() {
        let cf = CFrac::new(poly(&[2, 1, 0]), |_, order| CfElement::new(QSeries::one(order), QSeries::one(order)));
        assert_eq!(cf.approximant(0, 2).unwrap(), poly(&[2, 1, 0]));
        let w = poly(&[0, 0, 5]);
        assert_eq!(cf.modified_approximant(0, &w, 2).unwrap(), poly(&[2, 1, 5]));
    }

    #[test]
    fn tails() {
        let cf = rr(Rational::new(2, 3));
        let t = cf.tail(2);
        assert_eq!(t.element(1, 5).a, QMonomial::new(Rational::new(2, 3), 3).to_series(5));
        assert!(t.b0().is_zero());
        let t0 = cf.tail(0);
        assert_eq!(t0.element(4, 8), cf.element(4, 8));
        let twice = cf.tail(1).tail(1);
        for n in 1..=20 {
            assert_eq!(twice.element(n, 30), t.element(n, 30));
        }
    }

    #[test]
    fn golden_ratio() {
        let ncf = NumericCF::new(1.0, |_| (1.0, 1.0));
        let v = numeric_value(&ncf, 30).unwrap();
        assert!((v - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert_eq!(numeric_value(&ncf, 0).unwrap(), 1.0);
    }

    #[test]
    fn blowup_detected() {
        let ncf = NumericCF::new(1.0, |_| (1.0, 0.0));
        assert_eq!(numeric_value(&ncf, 1), Err(CfError::NumericBlowup { depth: 1 }));
    }

    #[test]
    fn worpitzky_examples() {
        let small = NumericCF::new(1.0, |_| (0.2, 1.0));
        assert_eq!(worpitzky_index(&small, 0.25, WORPITZKY_HORIZON).unwrap(), 1);
        for (q, want) in [(Rational::new(1, 2), 2), (Rational::new(9, 10), 14)] {
            let ncf = NumericCF::from_cfrac(&rr(Rational::one()), &q).unwrap();
            assert_eq!(worpitzky_index(&ncf, 0.25, WORPITZKY_HORIZON).unwrap(), want);
        }
        let flat = NumericCF::new(1.0, |_| (1.0, 1.0));
        assert!(matches!(worpitzky_index(&flat, 0.25, 50), Err(CfError::HorizonExceeded { .. })));
        assert!(NumericCF::from_cfrac(&rr(Rational::one()), &Rational::one()).is_err());
    }

    #[test]
    fn equivalence_keeps_plain_unit_elements() {
        let cf = rr(Rational::new(1, 3));
        let eq = cf.equivalence_unit_denominators(6, 10).unwrap();
        for n in 1..=6 {
            assert_eq!(eq.element(n, 10), cf.element(n, 10));
        }
    }

    #[test]
    fn render_levels() {
        let cf = CFrac::new(QSeries::one(4), |n, order| {
            CfElement::new(QMonomial::q_power(n).to_series(order), QSeries::one(order))
        });
        assert_eq!(cf.render(2, 4), "1 + (q)/(1 +) (q^2)/(1 +) ...");
        assert_eq!(rr(Rational::one()).render(1, 4), "1/(1 + (q)/(1 +) ...)");
    }
}
