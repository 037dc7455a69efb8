use super::{QMonomial, QSeries, SeriesError};
use crate::rational::Rational;

/// `(base; q)_k = (1 - base)(1 - base q) ... (1 - base q^(k-1))` to order `n`.
pub fn pochhammer_finite(base: &QMonomial, k: usize, n: usize) -> QSeries {
    let mut acc = QSeries::one(n);
    for j in 0..k {
        let factor = base.shifted(j).neg();
        if factor.power() > n {
            break;
        }
        acc = acc.mul_binomial(&QMonomial::one(), &factor);
    }
    acc
}

/// `(base; q)_inf` to order `n`.
pub fn pochhammer_infinite(base: &QMonomial, n: usize) -> Result<QSeries, SeriesError> {
    pochhammer_infinite_step(base, 1, n)
}

/// `(base; q^step)_inf`. Only factors with `base.power + step*j <= n` contribute.
pub fn pochhammer_infinite_step(base: &QMonomial, step: usize, n: usize) -> Result<QSeries, SeriesError> {
    assert!(step >= 1, "nome step must be positive");
    if base.is_zero() {
        return Ok(QSeries::one(n));
    }
    if base.power() == 0 {
        return Err(SeriesError::FormallyDivergentProduct(base.to_string()));
    }
    let mut acc = QSeries::one(n);
    let mut p = base.power();
    while p <= n {
        acc = acc.mul_binomial(&QMonomial::one(), &QMonomial::new(-base.coef(), p));
        p += step;
    }
    Ok(acc)
}

/// `prod_{j<k} (x + y q^j)`, which equals `(-y/x; q)_k x^k` without dividing by `x`.
pub fn scaled_pochhammer(x: &QMonomial, y: &QMonomial, k: usize, n: usize) -> QSeries {
    let mut acc = QSeries::one(n);
    for j in 0..k {
        acc = acc.mul_binomial(x, &y.shifted(j));
    }
    acc
}

/// `lambda^k q^(k(k-1)/2)`, the limit of `(-lambda/a; q)_k a^k` as `a -> 0`.
pub fn limit_pochhammer_scaled(lambda: &Rational, k: usize, n: usize) -> QSeries {
    QMonomial::new(lambda.pow(k as i32), k * (k.saturating_sub(1)) / 2).to_series(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> QSeries {
        QSeries::from_coeffs(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn finite_products() {
        let q = QMonomial::q_power(1);
        assert_eq!(pochhammer_finite(&q, 0, 4), QSeries::one(4));
        assert_eq!(pochhammer_finite(&q, 2, 4), poly(&[1, -1, -1, 1, 0]));
        let mq = QMonomial::new(Rational::from(-1), 1);
        assert_eq!(pochhammer_finite(&mq, 1, 2), poly(&[1, 1, 0]));
    }

    #[test]
    fn euler_product_start() {
        let q = QMonomial::q_power(1);
        assert_eq!(pochhammer_infinite(&q, 5).unwrap(), poly(&[1, -1, -1, 0, 0, 1]));
        let z = QMonomial::new(Rational::zero(), 1);
        assert_eq!(pochhammer_infinite(&z, 5).unwrap(), QSeries::one(5));
        assert!(matches!(pochhammer_infinite(&QMonomial::one(), 5), Err(SeriesError::FormallyDivergentProduct(_))));
    }

    #[test]
    fn limit_form() {
        assert_eq!(limit_pochhammer_scaled(&Rational::from(3), 0, 4), QSeries::one(4));
        assert_eq!(limit_pochhammer_scaled(&Rational::one(), 2, 4), QMonomial::q_power(1).to_series(4));
        let two = Rational::from(2);
        let at_zero = scaled_pochhammer(&QMonomial::zero(), &QMonomial::constant(two.clone()), 3, 6);
        assert_eq!(at_zero, QMonomial::new(Rational::from(8), 3).to_series(6));
        assert_eq!(at_zero, limit_pochhammer_scaled(&two, 3, 6));
    }
}
