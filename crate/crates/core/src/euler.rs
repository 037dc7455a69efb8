//! Euler's division step `N/D = 1 + (N - D)/D` and the C-fraction expander
//! built on it, plus the classical Euclid expansion of a rational.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfrac::{CFrac, CfElement};
use crate::qseries::{QMonomial, QSeries};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("inputs must have constant term exactly 1")]
    NonUnitInput,
    #[error("usable precision fell below {floor} after {} steps", .trace.steps.len())]
    PrecisionExhausted { floor: usize, trace: Box<ExpansionTrace> },
    #[error("expected a positive fraction")]
    NonPositiveFraction,
}

/// One division step: `N - D = factor * next_denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerStepResult {
    pub factor: QMonomial,
    /// Unit series `E` with constant term 1. Its order is the precision still usable.
    pub next_denominator: QSeries,
    pub terminated: bool,
}

impl EulerStepResult {
    pub fn residual_order(&self) -> usize {
        self.next_denominator.order()
    }
}

/// Peels one partial numerator off `n/d`.
pub fn euler_step(n: &QSeries, d: &QSeries) -> Result<EulerStepResult, EulerError> {
    if !n.coeffs()[0].is_one() || !d.coeffs()[0].is_one() {
        return Err(EulerError::NonUnitInput);
    }
    let delta = n - d;
    let Some(m) = delta.valuation() else {
        return Ok(EulerStepResult {
            factor: QMonomial::zero(),
            next_denominator: QSeries::one(delta.order()),
            terminated: true,
        });
    };
    let c = delta.coeffs()[m].clone();
    let inv = c.recip().expect("leading coefficient is nonzero");
    Ok(EulerStepResult {
        factor: QMonomial::new(c, m),
        next_denominator: delta.shift_down(m).scale(&inv),
        terminated: false,
    })
}

/// The outcome of repeated division steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTrace {
    pub steps: Vec<EulerStepResult>,
    pub residual_order: usize,
    pub terminated: bool,
    /// The last pair `(N_k, D_k)`; the tail of the fraction is `N_k/D_k - 1`.
    pub remainder: (QSeries, QSeries),
}

/// Default floor for [`euler_expand`].
pub const SAFETY_FLOOR: usize = 2;

/// Expands `n/d` as `1 + f1/(1 + f2/(1 + ...))` with monomial `f_k`.
pub fn euler_expand(n: &QSeries, d: &QSeries, max_depth: usize) -> Result<ExpansionTrace, EulerError> {
    euler_expand_with_floor(n, d, max_depth, SAFETY_FLOOR)
}

/// As [`euler_expand`], refusing any factor that would leave fewer than `floor` usable orders.
pub fn euler_expand_with_floor(
    n: &QSeries,
    d: &QSeries,
    max_depth: usize,
    floor: usize,
) -> Result<ExpansionTrace, EulerError> {
    let order = n.order().min(d.order());
    let mut trace = ExpansionTrace {
        steps: Vec::new(),
        residual_order: order,
        terminated: false,
        remainder: (n.truncate(order), d.truncate(order)),
    };
    while trace.steps.len() < max_depth {
        let (num, den) = &trace.remainder;
        let step = euler_step(num, den)?;
        if step.terminated {
            trace.terminated = true;
            break;
        }
        if step.residual_order() < floor {
            return Err(EulerError::PrecisionExhausted { floor, trace: Box::new(trace) });
        }
        let den = den.truncate(step.residual_order());
        trace.residual_order = step.residual_order();
        trace.remainder = (den, step.next_denominator.clone());
        trace.steps.push(step);
    }
    Ok(trace)
}

/// One step as reported in JSON traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub coef: Rational,
    pub power: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub steps: Vec<StepRecord>,
    pub residual_order: usize,
    pub terminated: bool,
}

impl ExpansionTrace {
    pub fn factors(&self) -> Vec<QMonomial> {
        self.steps.iter().map(|s| s.factor.clone()).collect()
    }

    /// `1 + f1/(1 + f2/(1 + ...))` over the extracted factors.
    pub fn produced(&self) -> CFrac {
        let order = self.residual_order;
        let elements =
            self.steps.iter().map(|s| CfElement::new(s.factor.to_series(order), QSeries::one(order))).collect();
        CFrac::from_elements(QSeries::one(order), elements)
    }

    /// Value of the remaining tail, `N_k/D_k - 1`, to the residual order.
    pub fn tail_value(&self) -> QSeries {
        let (num, den) = &self.remainder;
        let inv = den.inverse().expect("remainder denominators have constant term 1");
        &(num * &inv) - &QSeries::one(num.order())
    }

    pub fn record(&self) -> TraceRecord {
        TraceRecord {
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord { coef: s.factor.coef().clone(), power: s.factor.power() })
                .collect(),
            residual_order: self.residual_order,
            terminated: self.terminated,
        }
    }
}

impl fmt::Display for ExpansionTrace {
    /// One line per step: `n: a_n = c q^m, residual_order = r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{}: a_{} = {} q^{}, residual_order = {}",
                i + 1,
                i + 1,
                s.factor.coef(),
                s.factor.power(),
                s.residual_order()
            )?;
        }
        Ok(())
    }
}

/// Outcome of [`verify_three_term`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermCheck {
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

/// Checks `s0 = c1 s1 + c2 s2` coefficient-wise through `q^n`.
pub fn verify_three_term(
    s0: &QSeries,
    s1: &QSeries,
    s2: &QSeries,
    c1: &QSeries,
    c2: &QSeries,
    n: usize,
) -> ThreeTermCheck {
    let lhs = s0.truncate(n);
    let rhs = (&(c1 * s1) + &(c2 * s2)).truncate(n);
    let first_mismatch = lhs.first_mismatch(&rhs);
    ThreeTermCheck { pass: first_mismatch.is_none(), first_mismatch }
}

/// Partial quotients `[b0; b1, ...]` of `p/q` by Euclid's algorithm.
pub fn euclid_cf(p: &BigInt, q: &BigInt) -> Result<Vec<BigInt>, EulerError> {
    if !p.is_positive() || !q.is_positive() {
        return Err(EulerError::NonPositiveFraction);
    }
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        let (d, r) = p.div_rem(&q);
        out.push(d);
        p = q;
        q = r;
    }
    Ok(out)
}

/// Evaluates `b0 + 1/(b1 + 1/(b2 + ...))`.
pub fn euclid_value(quotients: &[BigInt]) -> Rational {
    let mut it = quotients.iter().rev();
    let Some(last) = it.next() else {
        return Rational::zero();
    };
    let mut v = Rational::from_bigints(last.clone(), BigInt::one());
    for b in it {
        v = Rational::from_bigints(b.clone(), BigInt::one()) + v.recip().expect("partial quotients are positive");
    }
    v
}

/// `[b0; b1, b2]` notation.
pub fn render_quotients(quotients: &[BigInt]) -> String {
    match quotients.split_first() {
        None => "[]".to_string(),
        Some((b0, [])) => format!("[{b0}]"),
        Some((b0, rest)) => {
            let rest: Vec<String> = rest.iter().map(ToString::to_string).collect();
            format!("[{b0}; {}]", rest.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{build_family, Family, ParamPoint};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rr_point(a: Rational) -> ParamPoint {
        ParamPoint::new(a, Rational::zero(), Rational::zero())
    }

    #[test]
    fn single_steps() {
        let n = QSeries::one(4) + QMonomial::q_power(1).to_series(4);
        let s = euler_step(&n, &QSeries::one(4)).unwrap();
        assert_eq!(s.factor, QMonomial::q_power(1));
        assert_eq!(s.next_denominator, QSeries::one(3));
        assert!(euler_step(&n, &n).unwrap().terminated);
        assert_eq!(euler_step(&QSeries::constant(Rational::from(2), 3), &n), Err(EulerError::NonUnitInput));
    }

    #[test]
    fn rr_step_gives_r2() {
        let p = rr_point(Rational::one());
        let r0 = build_family(Family::R, 0, &p, 20).unwrap();
        let r1 = build_family(Family::R, 1, &p, 20).unwrap();
        let r2 = build_family(Family::R, 2, &p, 20).unwrap();
        let s = euler_step(&r0, &r1).unwrap();
        assert_eq!(s.factor, QMonomial::q_power(1));
        assert_eq!(s.next_denominator, r2.truncate(19));
    }

    #[test]
    fn rr_expansion() {
        for a in [Rational::one(), Rational::new(1, 3)] {
            let p = rr_point(a.clone());
            let r0 = build_family(Family::R, 0, &p, 80).unwrap();
            let r1 = build_family(Family::R, 1, &p, 80).unwrap();
            let trace = euler_expand(&r0, &r1, 10).unwrap();
            let want: Vec<_> = (1..=10).map(|k| QMonomial::new(a.clone(), k)).collect();
            assert_eq!(trace.factors(), want);
            assert_eq!(trace.residual_order, 80 - 55);
        }
    }

    #[test]
    fn equal_inputs_terminate() {
        let x = QSeries::one(6);
        let trace = euler_expand(&x, &x, 5).unwrap();
        assert!(trace.terminated);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.produced().approximant(0, 6).unwrap(), QSeries::one(6));
    }

    #[test]
    fn exhausted_precision_keeps_partial_trace() {
        let p = rr_point(Rational::one());
        let r0 = build_family(Family::R, 0, &p, 11).unwrap();
        let r1 = build_family(Family::R, 1, &p, 11).unwrap();
        // residual orders 10, 8, 5; the q^4 step would leave 1 < floor
        match euler_expand(&r0, &r1, 10) {
            Err(EulerError::PrecisionExhausted { trace, floor }) => {
                assert_eq!(floor, SAFETY_FLOOR);
                assert_eq!(trace.steps.len(), 3);
                assert_eq!(trace.residual_order, 5);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_difference_terminates_at_working_order() {
        let p = rr_point(Rational::one());
        let r0 = build_family(Family::R, 0, &p, 12).unwrap();
        let r1 = build_family(Family::R, 1, &p, 12).unwrap();
        let trace = euler_expand(&r0, &r1, 10).unwrap();
        assert_eq!(trace.steps.len(), 4);
        assert_eq!(trace.residual_order, 2);
        assert!(trace.terminated);
    }

    #[test]
    fn trace_rendering() {
        let p = rr_point(Rational::one());
        let r0 = build_family(Family::R, 0, &p, 20).unwrap();
        let r1 = build_family(Family::R, 1, &p, 20).unwrap();
        let trace = euler_expand(&r0, &r1, 2).unwrap();
        assert_eq!(trace.to_string(), "1: a_1 = 1 q^1, residual_order = 19\n2: a_2 = 1 q^2, residual_order = 17\n");
        let json = serde_json::to_value(trace.record()).unwrap();
        assert_eq!(json["steps"][1]["power"], 2);
        assert_eq!(json["steps"][1]["coef"], "1");
        assert_eq!(json["residual_order"], 17);
    }

    #[test]
    fn three_term_rr() {
        let p = rr_point(Rational::one());
        for s in 0..=6 {
            let f = |k| build_family(Family::R, k, &p, 40).unwrap();
            let c1 = QSeries::one(40);
            let c2 = QMonomial::q_power(s + 1).to_series(40);
            assert!(verify_three_term(&f(s), &f(s + 1), &f(s + 2), &c1, &c2, 40).pass);
            let bad = QMonomial::q_power(s + 2).to_series(40);
            let check = verify_three_term(&f(s), &f(s + 1), &f(s + 2), &c1, &bad, 40);
            assert!(!check.pass);
            assert!(check.first_mismatch.is_some());
        }
    }

    #[test]
    fn euclid_examples() {
        let e = |p: i64, q: i64| euclid_cf(&BigInt::from(p), &BigInt::from(q)).unwrap();
        assert_eq!(e(13, 8), big(&[1, 1, 1, 1, 2]));
        assert_eq!(e(1, 1), big(&[1]));
        assert_eq!(e(8, 13), big(&[0, 1, 1, 1, 1, 2]));
        assert_eq!(render_quotients(&e(13, 8)), "[1; 1, 1, 1, 2]");
        assert_eq!(euclid_value(&e(13, 8)), Rational::new(13, 8));
        assert!(euclid_cf(&BigInt::from(-3), &BigInt::from(4)).is_err());
    }
}
