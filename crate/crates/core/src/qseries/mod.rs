//! Truncated power series in `q`, q-Pochhammer symbols and the series families
//! used throughout the catalog.

mod family;
mod params;
mod pochhammer;
mod series;

use thiserror::Error;

pub use family::{build_family, build_family_with, sum_by_ratio, Family, ParseFamilyError};
pub use params::{sample_params, Lift, ParamPoint, ParseParamsError, Specialization};
pub use pochhammer::{
    limit_pochhammer_scaled, pochhammer_finite, pochhammer_infinite, pochhammer_infinite_step, scaled_pochhammer,
};
pub use series::{QMonomial, QSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has zero constant term and is not invertible")]
    NonUnitSeries,
    #[error("infinite product with base {0} has infinitely many factors of degree 0")]
    FormallyDivergentProduct(String),
    #[error("family {family} is not defined for shift {shift}")]
    UnsupportedShift { family: String, shift: usize },
    #[error("{family} has a pole at the chosen parameters: {detail}")]
    PoleAtParameter { family: String, detail: String },
    #[error("{0} is not finitely supported in q at these parameters; lift a parameter by q")]
    DivergentSum(String),
}

/// Coefficient-wise sum truncated to the common order.
pub fn series_add(x: &QSeries, y: &QSeries) -> QSeries {
    x + y
}

/// Truncated Cauchy product.
pub fn series_mul(x: &QSeries, y: &QSeries) -> QSeries {
    x * y
}

pub fn series_inv(d: &QSeries) -> Result<QSeries, SeriesError> {
    d.inverse()
}

pub fn monomial_mul(m: &QMonomial, x: &QSeries) -> QSeries {
    x.mul_monomial(m)
}
