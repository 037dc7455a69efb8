use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::QMonomial;
use crate::rational::{ParseRationalError, Rational};

/// A numeric specialization of the three parameters `a`, `b`, `lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamPoint {
    pub a: Rational,
    pub b: Rational,
    pub lambda: Rational,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseParamsError {
    #[error("expected `name=value`, got `{0}`")]
    MissingEquals(String),
    #[error("unknown parameter `{0}` (expected a, b, l or lambda)")]
    UnknownName(String),
    #[error("parameter `{name}`: {source}")]
    Value {
        name: String,
        #[source]
        source: ParseRationalError,
    },
}

impl ParamPoint {
    pub fn new(a: Rational, b: Rational, lambda: Rational) -> Self {
        ParamPoint { a, b, lambda }
    }

    /// Parses `a=1/3,b=1/5,l=1/7`. Parameters not mentioned are taken from `defaults`.
    pub fn parse_with_defaults(s: &str, defaults: &ParamPoint) -> Result<Self, ParseParamsError> {
        let mut p = defaults.clone();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) =
                item.split_once('=').ok_or_else(|| ParseParamsError::MissingEquals(item.to_string()))?;
            let name = name.trim();
            let v: Rational =
                value.parse().map_err(|source| ParseParamsError::Value { name: name.to_string(), source })?;
            match name {
                "a" => p.a = v,
                "b" => p.b = v,
                "l" | "lambda" => p.lambda = v,
                other => return Err(ParseParamsError::UnknownName(other.to_string())),
            }
        }
        Ok(p)
    }

    /// Every parameter as a constant monomial.
    pub fn specialize(&self) -> Specialization {
        Lift::NONE.apply(self)
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={},b={},l={}", self.a, self.b, self.lambda)
    }
}

/// Which parameters get multiplied by `q` before building series.
///
/// A parameter with no attached power of `q` can make a sum like
/// `sum (a;q)_k x^k / (q;q)_k` contribute to the constant coefficient from
/// every `k`. Lifting `x -> x q` restores finite support.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lift {
    pub a: bool,
    pub b: bool,
    pub lambda: bool,
}

impl Lift {
    pub const NONE: Lift = Lift { a: false, b: false, lambda: false };

    pub const fn new(a: bool, b: bool, lambda: bool) -> Self {
        Lift { a, b, lambda }
    }

    pub fn is_none(&self) -> bool {
        *self == Lift::NONE
    }

    pub fn apply(&self, p: &ParamPoint) -> Specialization {
        let m = |v: &Rational, lifted: bool| QMonomial::new(v.clone(), usize::from(lifted));
        Specialization { a: m(&p.a, self.a), b: m(&p.b, self.b), lambda: m(&p.lambda, self.lambda) }
    }
}

impl fmt::Display for Lift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> =
            [(self.a, "a"), (self.b, "b"), (self.lambda, "l")].iter().filter(|(on, _)| *on).map(|(_, n)| *n).collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

/// Parameters as monomials, ready for the series builders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    pub a: QMonomial,
    pub b: QMonomial,
    pub lambda: QMonomial,
}

impl Specialization {
    pub fn new(a: QMonomial, b: QMonomial, lambda: QMonomial) -> Self {
        Specialization { a, b, lambda }
    }
}

fn sample_value(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let mut n: i64 = rng.gen_range(-9..=8);
        if n >= 0 {
            n += 1;
        }
        let d: i64 = rng.gen_range(2..=16);
        let v = Rational::new(n, d);
        if !v.abs().is_one() {
            return v;
        }
    }
}

/// Deterministic pseudorandom parameter points.
///
/// Numerators are drawn from `[-9, 9] \ {0}` and denominators from `[2, 16]`.
/// Values of absolute value 1 and points where two parameters share an absolute
/// value are rejected, so no Pochhammer factor `1 +- x` degenerates. Points are
/// pairwise distinct.
///
/// # Panics
/// If `count` is zero.
pub fn sample_params(seed: u64, count: usize) -> Vec<ParamPoint> {
    assert!(count >= 1, "sample_params needs count >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = sample_value(&mut rng);
        let b = sample_value(&mut rng);
        let lambda = sample_value(&mut rng);
        let (x, y, z) = (a.abs(), b.abs(), lambda.abs());
        if x == y || y == z || x == z {
            continue;
        }
        let p = ParamPoint { a, b, lambda };
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}
