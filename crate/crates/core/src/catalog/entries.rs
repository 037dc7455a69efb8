//! Series, fractions and comparisons behind each registry entry.

use crate::cfrac::{CFrac, CfElement};
use crate::qseries::{
    build_family_with, limit_pochhammer_scaled, pochhammer_finite, pochhammer_infinite, pochhammer_infinite_step,
    scaled_pochhammer, sum_by_ratio, Family, Lift, ParamPoint, QMonomial, QSeries, SeriesError, Specialization,
};
use crate::rational::Rational;

use super::{CheckError, Comparison};

type R<T> = Result<T, CheckError>;

fn one() -> QMonomial {
    QMonomial::one()
}

fn qm(c: i64, p: usize) -> QMonomial {
    QMonomial::new(Rational::from(c), p)
}

fn poly(terms: &[QMonomial], order: usize) -> QSeries {
    QSeries::from_terms(terms, order)
}

fn el(a: &[QMonomial], b: &[QMonomial], order: usize) -> CfElement {
    CfElement::new(poly(a, order), poly(b, order))
}

fn fam(f: Family, s: usize, sp: &Specialization, n: usize) -> R<QSeries> {
    Ok(build_family_with(f, s, sp, n)?)
}

fn ratio(num: &QSeries, den: &QSeries) -> R<QSeries> {
    Ok(num.divide(den)?)
}

fn pinf(base: &QMonomial, n: usize) -> R<QSeries> {
    Ok(pochhammer_infinite(base, n)?)
}

fn pinf_step(base: &QMonomial, step: usize, n: usize) -> R<QSeries> {
    Ok(pochhammer_infinite_step(base, step, n)?)
}

/// `t / (1 - m q^k)`.
fn div_factor(t: &QSeries, m: &QMonomial, k: usize) -> Result<QSeries, SeriesError> {
    t.div_one_minus(m.coef(), m.power() + k)
}

/// `t * (1 - m q^k)`.
fn mul_factor(t: &QSeries, m: &QMonomial, k: usize) -> QSeries {
    t.mul_binomial(&one(), &m.neg().shifted(k))
}

fn cmp(label: impl Into<String>, lhs: QSeries, rhs: QSeries) -> Comparison {
    Comparison { label: label.into(), lhs, rhs }
}

fn lifted(p: &ParamPoint, lift: Lift) -> Specialization {
    lift.apply(p)
}

// ---------------------------------------------------------------------------
// continued fractions

pub(super) fn rr_cf(sp: &Specialization) -> CFrac {
    let a = sp.a.clone();
    CFrac::new(QSeries::one(0), move |n, o| el(&[a.shifted(n)], &[one()], o)).with_head(QSeries::one(0))
}

pub(super) fn rr_target(sp: &Specialization, n: usize) -> R<QSeries> {
    ratio(&fam(Family::R, 1, sp, n)?, &fam(Family::R, 0, sp, n)?)
}

pub(super) fn rr_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    ratio(&fam(Family::R, k, sp, n)?, &fam(Family::R, k + 1, sp, n)?)
}

/// `1 + q/(1 + q^2/(1 + ...))` with `b0 = 1` and no head.
pub(super) fn rr_special_cf(_: &Specialization) -> CFrac {
    CFrac::new(QSeries::one(0), |n, o| el(&[QMonomial::q_power(n)], &[one()], o))
}

pub(super) fn rr_special_target(sp: &Specialization, n: usize) -> R<QSeries> {
    ratio(&fam(Family::R, 0, sp, n)?, &fam(Family::R, 1, sp, n)?)
}

pub(super) fn rr_special_point(p: &ParamPoint) -> ParamPoint {
    ParamPoint::new(Rational::one(), p.b.clone(), p.lambda.clone())
}

pub(super) fn g_cfrac2(sp: &Specialization) -> CFrac {
    let (b, l) = (sp.b.clone(), sp.lambda.clone());
    CFrac::new(QSeries::one(0), move |n, o| el(&[l.shifted(n)], &[one(), b.shifted(n)], o)).with_head(QSeries::one(0))
}

pub(super) fn small_g_target(sp: &Specialization, n: usize) -> R<QSeries> {
    ratio(&fam(Family::LowerG, 1, sp, n)?, &fam(Family::LowerG, 0, sp, n)?)
}

/// `(1 + b q^k) g1(k) / g1(k+1)`.
pub(super) fn g_cfrac2_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let t = ratio(&fam(Family::LowerG1, k, sp, n)?, &fam(Family::LowerG1, k + 1, sp, n)?)?;
    Ok(t.mul_binomial(&one(), &sp.b.shifted(k)))
}

pub(super) fn g_cfrac1(sp: &Specialization) -> CFrac {
    let (b, l) = (sp.b.clone(), sp.lambda.clone());
    CFrac::new(QSeries::one(0), move |n, o| {
        if n % 2 == 1 {
            el(&[l.shifted(n)], &[one()], o)
        } else {
            el(&[l.shifted(n), b.shifted(n / 2)], &[one()], o)
        }
    })
    .with_head(QSeries::one(0))
}

/// Tails of the interlaced `G1A`/`G1B` fraction.
fn g1ab_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let s = k / 2;
    if k.is_multiple_of(2) {
        ratio(&fam(Family::G1A, s, sp, n)?, &fam(Family::G1B, s, sp, n)?)
    } else {
        ratio(&fam(Family::G1B, s, sp, n)?, &fam(Family::G1A, s + 1, sp, n)?)
    }
}

pub(super) fn g_cfrac1_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let at_zero = Specialization::new(QMonomial::zero(), sp.b.clone(), sp.lambda.clone());
    g1ab_tail(&at_zero, k, n)
}

pub(super) fn g_cfrac3(sp: &Specialization) -> CFrac {
    let (b, l) = (sp.b.clone(), sp.lambda.clone());
    let b0 = poly(&[one(), b.neg()], b.power());
    CFrac::new(b0, move |n, o| el(&[b.clone(), l.shifted(n)], &[one(), b.neg()], o)).with_head(QSeries::one(0))
}

pub(super) fn g_cfrac3_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    ratio(&fam(Family::LowerG2, k, sp, n)?, &fam(Family::LowerG2, k + 1, sp, n)?)
}

pub(super) fn big_g_target(sp: &Specialization, n: usize) -> R<QSeries> {
    ratio(&fam(Family::UpperG, 1, sp, n)?, &fam(Family::UpperG, 0, sp, n)?)
}

pub(super) fn heine_cf(sp: &Specialization) -> CFrac {
    let (a, b, l) = (sp.a.clone(), sp.b.clone(), sp.lambda.clone());
    let ab = a.mul(&b).neg();
    CFrac::new(QSeries::one(0), move |n, o| {
        let s = (n - 1) / 2;
        let den = [one(), b.shifted(n)];
        if n % 2 == 1 {
            el(&[a.shifted(s + 1), l.shifted(2 * s + 1)], &den, o)
        } else {
            el(&[l.shifted(2 * s + 2), ab.shifted(3 * s + 3)], &den, o)
        }
    })
    .with_head(QSeries::one(0))
}

pub(super) fn ramanujan_g1(sp: &Specialization) -> CFrac {
    let (a, b, l) = (sp.a.clone(), sp.b.clone(), sp.lambda.clone());
    CFrac::new(QSeries::one(0), move |n, o| {
        let s = (n - 1) / 2;
        if n % 2 == 1 {
            el(&[a.shifted(s + 1), l.shifted(2 * s + 1)], &[one()], o)
        } else {
            el(&[b.shifted(s + 1), l.shifted(2 * s + 2)], &[one()], o)
        }
    })
    .with_head(QSeries::one(0))
}

pub(super) fn ramanujan_g1_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    g1ab_tail(sp, k, n)
}

pub(super) fn ramanujan_g2(sp: &Specialization) -> CFrac {
    let (a, b, l) = (sp.a.clone(), sp.b.clone(), sp.lambda.clone());
    let ab = a.mul(&b).neg();
    let b0 = poly(&[one(), a.shifted(1)], a.power() + 1);
    CFrac::new(b0, move |n, o| el(&[l.shifted(n), ab.shifted(2 * n)], &[one(), a.shifted(n + 1), b.shifted(n)], o))
        .with_head(QSeries::one(0))
}

/// `(1 + a q^(k+1)) G2(k) / G2(k+1)`.
pub(super) fn ramanujan_g2_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let t = ratio(&fam(Family::UpperG2, k, sp, n)?, &fam(Family::UpperG2, k + 1, sp, n)?)?;
    Ok(t.mul_binomial(&one(), &sp.a.shifted(k + 1)))
}

/// Elements in terms of the monomial `aq`, so that `aq` can be replaced by a constant.
pub(super) fn hirschhorn_with(aq: QMonomial, b: QMonomial, l: QMonomial) -> CFrac {
    CFrac::new(QSeries::one(0), move |n, o| el(&[aq.clone(), l.shifted(n)], &[one(), aq.neg(), b.shifted(n)], o))
        .with_head(QSeries::one(0))
}

pub(super) fn hirschhorn(sp: &Specialization) -> CFrac {
    hirschhorn_with(sp.a.shifted(1), sp.b.clone(), sp.lambda.clone())
}

pub(super) fn heine_cf_a(sp: &Specialization) -> CFrac {
    let (a, b, l) = (sp.a.clone(), sp.b.clone(), sp.lambda.clone());
    let ab = a.mul(&b).neg();
    let b0 = poly(&[one(), a.shifted(1)], a.power() + 1);
    CFrac::new(b0, move |n, o| {
        let s = (n - 1) / 2;
        let den = [one(), a.shifted(n + 1)];
        if n % 2 == 1 {
            el(&[l.shifted(2 * s + 1), ab.shifted(3 * s + 2)], &den, o)
        } else {
            el(&[l.shifted(2 * s + 2), b.shifted(s + 1)], &den, o)
        }
    })
    .with_head(QSeries::one(0))
}

pub(super) fn eisenstein_cf(sp: &Specialization) -> CFrac {
    let a = sp.a.clone();
    CFrac::new(QSeries::one(0), move |n, o| {
        if n % 2 == 1 {
            el(&[a.shifted(n)], &[one()], o)
        } else {
            el(&[a.shifted(n), a.neg().shifted(n / 2)], &[one()], o)
        }
    })
    .with_head(QSeries::one(0))
}

pub(super) fn eisenstein_target(sp: &Specialization, n: usize) -> R<QSeries> {
    fam(Family::Eisenstein, 0, sp, n)
}

/// The fraction is the `g`-fraction with `lambda = a`, `b = -a`.
pub(super) fn eisenstein_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let g = Specialization::new(QMonomial::zero(), sp.a.neg(), sp.a.clone());
    g1ab_tail(&g, k, n)
}

pub(super) fn prod_ratio_point(p: &ParamPoint) -> ParamPoint {
    ParamPoint::new(p.a.clone(), Rational::one(), Rational::one())
}

/// `(q;q^2)_inf / (q^2;q^4)_inf^2`.
pub(super) fn prod_ratio_target(_: &Specialization, n: usize) -> R<QSeries> {
    let num = pinf_step(&QMonomial::q_power(1), 2, n)?;
    let den = pinf_step(&QMonomial::q_power(2), 4, n)?;
    ratio(&num, &(&den * &den))
}

/// `g(0) = (-lambda q;q^2)_inf` and `g(1) = (-lambda q^2;q^2)_inf` at `b = 1`.
pub(super) fn prod_ratio_extra(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = ParamPoint::new(p.a.clone(), Rational::one(), p.lambda.clone()).specialize();
    let l = sp.lambda.clone();
    Ok(vec![
        cmp("g(0) at b=1 vs (-lq;q^2)_inf", fam(Family::LowerG, 0, &sp, n)?, pinf_step(&l.neg().shifted(1), 2, n)?),
        cmp("g(1) at b=1 vs (-lq^2;q^2)_inf", fam(Family::LowerG, 1, &sp, n)?, pinf_step(&l.neg().shifted(2), 2, n)?),
    ])
}

pub(super) fn entry11_cf(sp: &Specialization) -> CFrac {
    let (a, b) = (sp.a.clone(), sp.b.clone());
    let head = poly(&[a.clone(), b.neg()], a.power().max(b.power()));
    let b0 = poly(&[one(), qm(-1, 1)], 1);
    CFrac::new(b0, move |n, o| {
        let num = poly(&[a.clone(), b.neg().shifted(n)], o)
            .mul_binomial(&a.shifted(n), &b.neg())
            .mul_monomial(&QMonomial::q_power(n - 1));
        CfElement::new(num, poly(&[one(), qm(-1, 2 * n + 1)], o))
    })
    .with_head(head)
}

fn entry11_products(sp: &Specialization, n: usize) -> R<(QSeries, QSeries)> {
    let (a, b) = (&sp.a, &sp.b);
    let x = &pinf(&a.neg(), n)? * &pinf(b, n)?;
    let y = &pinf(a, n)? * &pinf(&b.neg(), n)?;
    Ok((&x - &y, &x + &y))
}

pub(super) fn entry11_target(sp: &Specialization, n: usize) -> R<QSeries> {
    let (num, den) = entry11_products(sp, n)?;
    ratio(&num, &den)
}

/// `(1 - q^(2k+1)) C(k) / C(k+1)`.
pub(super) fn entry11_tail(sp: &Specialization, k: usize, n: usize) -> R<QSeries> {
    let t = ratio(&fam(Family::C, k, sp, n)?, &fam(Family::C, k + 1, sp, n)?)?;
    Ok(mul_factor(&t, &one(), 2 * k + 1))
}

// ---------------------------------------------------------------------------
// transformations

/// `sum (-b/a;q)_k a^k/(q;q)_k (a;q)_inf = (-b;q)_inf`, with `a`, `b` lifted.
pub(super) fn qbin(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = lifted(p, Lift::new(true, true, false));
    let (a, b) = (&sp.a, &sp.b);
    let sum = sum_by_ratio("q-binomial sum", n, |k, t| {
        t.mul_binomial(a, &b.shifted(k)).div_one_minus(&Rational::one(), k + 1)
    })?;
    Ok(vec![cmp("sum * (a;q)_inf = (-b;q)_inf", &sum * &pinf(a, n)?, pinf(&b.neg(), n)?)])
}

/// Parameters of the four-parameter transformations.
struct Four {
    a: QMonomial,
    b: QMonomial,
    c: QMonomial,
    d: QMonomial,
}

fn four(p: &ParamPoint, lift_c: bool) -> Four {
    let a = QMonomial::new(p.a.clone(), 1);
    let b = QMonomial::new(p.b.clone(), 1);
    Four {
        c: QMonomial::new(p.lambda.clone(), usize::from(lift_c)),
        d: a.mul(&b).shifted(0).checked_div(&QMonomial::q_power(1)).expect("power 2"),
        a,
        b,
    }
}

/// `(a)_inf/(b)_inf sum (b/a)_k (c)_k a^k/((d)_k (q)_k)
///   = sum (b/a)_k (d/c)_k (ac)^k (-1)^k q^(k(k-1)/2) / ((b)_k (d)_k (q)_k)`
/// at `a = alpha q`, `b = beta q`, `c = lambda`, `d = alpha beta q`.
pub(super) fn entry8(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let Four { a, b, c, d } = four(p, false);
    let lhs = sum_by_ratio("transformation left sum", n, |k, t| {
        let t = t.mul_binomial(&a, &b.neg().shifted(k));
        let t = mul_factor(&t, &c, k);
        div_factor(&t, &d, k)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    let rhs = sum_by_ratio("transformation right sum", n, |k, t| {
        let t = t.mul_binomial(&a, &b.neg().shifted(k));
        let t = t.mul_binomial(&c, &d.neg().shifted(k));
        let t = t.mul_monomial(&qm(-1, k));
        div_factor(&div_factor(&t, &b, k)?, &d, k)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    Ok(vec![cmp("(a)_inf * left sum = (b)_inf * right sum", &lhs * &pinf(&a, n)?, &rhs * &pinf(&b, n)?)])
}

/// `(a)_inf/(b)_inf sum (c)_k (b/a)_k a^k/((d)_k (q)_k)
///   = (c)_inf/(d)_inf sum (a)_k (d/c)_k c^k/((b)_k (q)_k)`
/// at `a = alpha q`, `b = beta q`, `c = lambda q`, `d = alpha beta q`.
pub(super) fn entry6(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let Four { a, b, c, d } = four(p, true);
    let lhs = sum_by_ratio("transformation left sum", n, |k, t| {
        let t = t.mul_binomial(&a, &b.neg().shifted(k));
        let t = mul_factor(&t, &c, k);
        div_factor(&t, &d, k)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    let rhs = sum_by_ratio("transformation right sum", n, |k, t| {
        let t = t.mul_binomial(&c, &d.neg().shifted(k));
        let t = mul_factor(&t, &a, k);
        div_factor(&t, &b, k)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    let left = &(&lhs * &pinf(&a, n)?) * &pinf(&d, n)?;
    let right = &(&rhs * &pinf(&c, n)?) * &pinf(&b, n)?;
    Ok(vec![cmp("(a)_inf (d)_inf left sum = (c)_inf (b)_inf right sum", left, right)])
}

/// Both sides of the `d = 0` transformation at a given `C`:
/// `sum (-lambda/a)_k (abC/lambda)^k q^(k(k+1)/2) / ((-bq)_k (q)_k)` and
/// `sum (-lambda/a)_k (-C)_k (abq/lambda)^k / (q)_k`.
fn d0_sums(sp: &Specialization, c: &QMonomial, n: usize) -> R<(QSeries, QSeries)> {
    let (a, b, l) = (&sp.a, &sp.b, &sp.lambda);
    let pole = |what: &str| SeriesError::PoleAtParameter { family: "d=0 transformation".into(), detail: what.into() };
    let x = a.mul(b).mul(c).checked_div(l).ok_or_else(|| pole("lambda = 0"))?;
    let y = b.mul(c);
    let abq_l = a.mul(b).shifted(1).checked_div(l).ok_or_else(|| pole("lambda = 0"))?;
    let lhs = sum_by_ratio("d=0 left sum", n, |k, t| {
        let t = t.mul_binomial(&x, &y.shifted(k)).mul_monomial(&QMonomial::q_power(k + 1));
        div_factor(&t, &b.neg(), k + 1)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    let rhs = sum_by_ratio("d=0 right sum", n, |k, t| {
        let t = t.mul_binomial(&abq_l, &b.shifted(k + 1));
        let t = mul_factor(&t, &c.neg(), k);
        t.div_one_minus(&Rational::one(), k + 1)
    })?;
    Ok((lhs, rhs))
}

/// Checked at `C = lambda/b`, `lambda q/b` and `a`, then chained to the `G` sums.
pub(super) fn entry8_d0(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = p.specialize();
    let (a, b, l) = (&sp.a, &sp.b, &sp.lambda);
    let pole = || SeriesError::PoleAtParameter { family: "d=0 transformation".into(), detail: "b = 0".into() };
    let c_plain = l.checked_div(b).ok_or_else(pole)?;
    let c_shift = c_plain.shifted(1);
    let abq_l = a.mul(b).shifted(1).checked_div(l).ok_or_else(pole)?;
    let prefactor_l = pinf(&abq_l, n)?;
    let prefactor_r = pinf(&b.neg().shifted(1), n)?;
    let mut out = Vec::new();
    let mut sums = Vec::new();
    for (name, c) in [("C=l/b", c_plain), ("C=lq/b", c_shift), ("C=a", a.clone())] {
        let (lhs, rhs) = d0_sums(&sp, &c, n)?;
        out.push(cmp(format!("{name}: (-bq)_inf left = (abq/l)_inf right"), &lhs * &prefactor_r, &rhs * &prefactor_l));
        sums.push((lhs, rhs));
    }
    out.push(cmp("left sum at C=l/b is G(0)", sums[0].0.clone(), fam(Family::UpperG, 0, &sp, n)?));
    out.push(cmp("left sum at C=lq/b is G(1)", sums[1].0.clone(), fam(Family::UpperG, 1, &sp, n)?));
    out.push(cmp("right sum at C=l/b is G1A(0)", sums[0].1.clone(), fam(Family::G1A, 0, &sp, n)?));
    out.push(cmp("right sum at C=lq/b is G1B(0)", sums[1].1.clone(), fam(Family::G1B, 0, &sp, n)?));
    Ok(out)
}

/// `G(1) G1A(0) = G(0) G1B(0)`.
pub(super) fn gfrac_sums2(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = p.specialize();
    let g0 = fam(Family::UpperG, 0, &sp, n)?;
    let g1 = fam(Family::UpperG, 1, &sp, n)?;
    let ga = fam(Family::G1A, 0, &sp, n)?;
    let gb = fam(Family::G1B, 0, &sp, n)?;
    Ok(vec![cmp("G(1) G1A(0) = G(0) G1B(0)", &g1 * &ga, &g0 * &gb)])
}

/// `G(1) (1 + aq) D = G(0) G2(1)`, `D = sum (abq/lambda)_k (-lambda/a)^k / ((q)_k (-aq)_k)`,
/// with `lambda` lifted.
pub(super) fn gfrac5_sums(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = lifted(p, Lift::new(false, false, true));
    let (a, b, l) = (&sp.a, &sp.b, &sp.lambda);
    let l_a =
        l.checked_div(a).ok_or_else(|| SeriesError::PoleAtParameter { family: "G2".into(), detail: "a = 0".into() })?;
    let d = sum_by_ratio("G2 companion sum", n, |k, t| {
        let t = t.mul_binomial(&l_a.neg(), &b.shifted(k + 1));
        div_factor(&t, &a.neg(), k + 1)?.div_one_minus(&Rational::one(), k + 1)
    })?;
    let g0 = fam(Family::UpperG, 0, &sp, n)?;
    let g1 = fam(Family::UpperG, 1, &sp, n)?;
    let lhs = (&g1 * &d).mul_binomial(&one(), &a.shifted(1));
    Ok(vec![cmp("G(1) (1+aq) D = G(0) G2(1)", lhs, &g0 * &fam(Family::UpperG2, 1, &sp, n)?)])
}

/// `g(1) g2(0) = g(0) g2(1)`.
pub(super) fn small_gfrac_sums2(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = p.specialize();
    let g0 = fam(Family::LowerG, 0, &sp, n)?;
    let g1 = fam(Family::LowerG, 1, &sp, n)?;
    let h0 = fam(Family::LowerG2, 0, &sp, n)?;
    let h1 = fam(Family::LowerG2, 1, &sp, n)?;
    Ok(vec![cmp("g(1) g2(0) = g(0) g2(1)", &g1 * &h0, &g0 * &h1)])
}

/// Odd and even parts of `sum_m prod_{j<m}(a - b q^j) / (q;q)_m`.
fn odd_even(sp: &Specialization, n: usize) -> R<(QSeries, QSeries)> {
    let (a, b) = (&sp.a, &sp.b);
    let signed = |sign: i64| {
        sum_by_ratio("alternating sum", n, |k, t| {
            let t = t.mul_binomial(&a.scale(&Rational::from(sign)), &b.neg().scale(&Rational::from(sign)).shifted(k));
            t.div_one_minus(&Rational::one(), k + 1)
        })
    };
    let plus = signed(1)?;
    let minus = signed(-1)?;
    let half = Rational::new(1, 2);
    Ok(((&plus - &minus).scale(&half), (&plus + &minus).scale(&half)))
}

/// The product ratio equals odd/even, and the first level of the fraction with
/// tail `C(1)/C(2)` reproduces odd/even. `a`, `b` lifted.
pub(super) fn entry11_sumratio(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let sp = lifted(p, Lift::new(true, true, false));
    let (odd, even) = odd_even(&sp, n)?;
    let (num, den) = entry11_products(&sp, n)?;
    let cf = entry11_cf(&sp);
    let w = &entry11_tail(&sp, 1, n)? - &cf.element(1, n).b;
    let first = cf.modified_approximant(1, &w, n)?;
    Ok(vec![
        cmp("odd * den = even * num", &odd * &den, &even * &num),
        cmp("first level with tail C(1)/C(2) = odd/even", first, ratio(&odd, &even)?),
    ])
}

// ---------------------------------------------------------------------------
// recurrences: (s0, c1, s1, c2, s2) with s0 = c1 s1 + c2 s2

pub(super) struct ThreeTerm {
    pub label: String,
    pub s0: QSeries,
    pub c1: QSeries,
    pub s1: QSeries,
    pub c2: QSeries,
    pub s2: QSeries,
}

fn tt(label: String, s0: QSeries, c1: QSeries, s1: QSeries, c2: QSeries, s2: QSeries) -> ThreeTerm {
    ThreeTerm { label, s0, c1, s1, c2, s2 }
}

pub(super) fn rec_rr(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = p.specialize();
    let f = |k| fam(Family::R, k, &sp, n);
    Ok(vec![tt(
        format!("R({s}) = R({}) + aq^{} R({})", s + 1, s + 1, s + 2),
        f(s)?,
        QSeries::one(n),
        f(s + 1)?,
        sp.a.shifted(s + 1).to_series(n),
        f(s + 2)?,
    )])
}

pub(super) fn rec_g1(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = p.specialize();
    let f = |k| fam(Family::LowerG1, k, &sp, n);
    let den = poly(&[one(), sp.b.shifted(s)], n).mul_binomial(&one(), &sp.b.shifted(s + 1));
    let c2 = ratio(&sp.lambda.shifted(s + 1).to_series(n), &den)?;
    Ok(vec![tt(format!("g1({s}) three-term"), f(s)?, QSeries::one(n), f(s + 1)?, c2, f(s + 2)?)])
}

pub(super) fn rec_g2(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = p.specialize();
    let f = |k| fam(Family::LowerG2, k, &sp, n);
    Ok(vec![tt(
        format!("g2({s}) three-term"),
        f(s)?,
        poly(&[one(), sp.b.neg()], n),
        f(s + 1)?,
        poly(&[sp.b.clone(), sp.lambda.shifted(s + 1)], n),
        f(s + 2)?,
    )])
}

/// `(1+aq^(s+1)) G2(s) = (1+aq^(s+1)+bq^s) G2(s+1) + (lambda q^(s+1) - ab q^(2s+2))/(1+aq^(s+2)) G2(s+2)`,
/// `lambda` lifted.
pub(super) fn rec_gg2(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = lifted(p, Lift::new(false, false, true));
    let (a, b, l) = (&sp.a, &sp.b, &sp.lambda);
    let f = |k| fam(Family::UpperG2, k, &sp, n);
    let s0 = f(s)?.mul_binomial(&one(), &a.shifted(s + 1));
    let c1 = poly(&[one(), a.shifted(s + 1), b.shifted(s)], n);
    let c2 =
        ratio(&poly(&[l.shifted(s + 1), a.mul(b).neg().shifted(2 * s + 2)], n), &poly(&[one(), a.shifted(s + 2)], n))?;
    Ok(vec![tt(format!("G2({s}) three-term"), s0, c1, f(s + 1)?, c2, f(s + 2)?)])
}

/// Interlaced pair; the zero series fills the unused slot.
pub(super) fn rec_g1ab(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = p.specialize();
    let (a, b, l) = (&sp.a, &sp.b, &sp.lambda);
    let ga = |k| fam(Family::G1A, k, &sp, n);
    let gb = |k| fam(Family::G1B, k, &sp, n);
    Ok(vec![
        tt(
            format!("G1A({s}) = G1B({s}) + (aq^{} + lq^{}) G1A({})", s + 1, 2 * s + 1, s + 1),
            ga(s)?,
            QSeries::one(n),
            gb(s)?,
            poly(&[a.shifted(s + 1), l.shifted(2 * s + 1)], n),
            ga(s + 1)?,
        ),
        tt(
            format!("G1B({s}) = G1A({}) + (bq^{} + lq^{}) G1B({})", s + 1, s + 1, 2 * s + 2, s + 1),
            gb(s)?,
            QSeries::one(n),
            ga(s + 1)?,
            poly(&[b.shifted(s + 1), l.shifted(2 * s + 2)], n),
            gb(s + 1)?,
        ),
    ])
}

/// `(1-q^(2s+1)) C(s) = (1-q^(2s+1)) C(s+1) + q^s (a-bq^(s+1))(aq^(s+1)-b)/(1-q^(2s+3)) C(s+2)`,
/// `a`, `b` lifted.
pub(super) fn rec_c(p: &ParamPoint, s: usize, n: usize) -> R<Vec<ThreeTerm>> {
    let sp = lifted(p, Lift::new(true, true, false));
    let (a, b) = (&sp.a, &sp.b);
    let f = |k| fam(Family::C, k, &sp, n);
    let c1 = poly(&[one(), qm(-1, 2 * s + 1)], n);
    let num = poly(&[a.clone(), b.neg().shifted(s + 1)], n)
        .mul_binomial(&a.shifted(s + 1), &b.neg())
        .mul_monomial(&QMonomial::q_power(s));
    let c2 = ratio(&num, &poly(&[one(), qm(-1, 2 * s + 3)], n))?;
    Ok(vec![tt(format!("C({s}) three-term"), &c1 * &f(s)?, c1.clone(), f(s + 1)?, c2, f(s + 2)?)])
}

// ---------------------------------------------------------------------------
// products

pub(super) fn poch_ids(p: &ParamPoint, n: usize) -> R<Vec<Comparison>> {
    let q = |c: i64, m: usize| qm(c, m);
    let mut out = vec![
        cmp(
            "(q;q)_inf (-q;q)_inf = (q^2;q^2)_inf",
            &pinf(&q(1, 1), n)? * &pinf(&q(-1, 1), n)?,
            pinf_step(&q(1, 2), 2, n)?,
        ),
        cmp(
            "(-q^2;q^2)_inf (q^2;q^4)_inf = 1",
            &pinf_step(&q(-1, 2), 2, n)? * &pinf_step(&q(1, 2), 4, n)?,
            QSeries::one(n),
        ),
        cmp(
            "(-q;q^2)_inf (q;q^2)_inf = (q^2;q^4)_inf",
            &pinf_step(&q(-1, 1), 2, n)? * &pinf_step(&q(1, 1), 2, n)?,
            pinf_step(&q(1, 2), 4, n)?,
        ),
    ];
    let l = QMonomial::constant(p.lambda.clone());
    for k in 0..=8 {
        out.push(cmp(
            format!("prod_(j<{k}) (0 + l q^j) = l^{k} q^({k}({k}-1)/2)"),
            scaled_pochhammer(&QMonomial::zero(), &l, k, n),
            limit_pochhammer_scaled(&p.lambda, k, n),
        ));
    }
    Ok(out)
}

/// `G(s)` at `a = 0` summed term by term with `limit_pochhammer_scaled`, against `g(s)`.
pub(super) fn g_limit_sums(sp: &Specialization, n: usize) -> R<Vec<Comparison>> {
    let mut out = Vec::new();
    for s in 0..=1 {
        let mut sum = QSeries::zero(n);
        let mut k = 0;
        while k * k + s * k <= n {
            let num = limit_pochhammer_scaled(sp.lambda.coef(), k, n)
                .mul_monomial(&QMonomial::q_power(k * (k + 1) / 2 + s * k));
            let den =
                &pochhammer_finite(&QMonomial::q_power(1), k, n) * &pochhammer_finite(&sp.b.neg().shifted(1), k, n);
            sum = &sum + &ratio(&num, &den)?;
            k += 1;
        }
        out.push(cmp(format!("G({s}) at a->0 = g({s})"), sum, fam(Family::LowerG, s, sp, n)?));
    }
    Ok(out)
}
