//! Registry of identities and the runner that checks them.
//!
//! Every check is exact. Parameters are specialized to rationals before any
//! series is built, so a single run checks one point of a rational-function
//! identity in `(a, b, lambda)`. Each coefficient is a rational function of
//! modest degree, so agreement at several random points with numerators and
//! denominators drawn from a range much larger than that degree makes a false
//! pass unlikely (Schwartz-Zippel). When results disagree across points the
//! runner adds five fresh points and flags the entry.

mod entries;
mod report;

use std::fmt;
use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfrac::{CFrac, CfElement, CfError};
use crate::euler::verify_three_term;
use crate::qseries::{Lift, ParamPoint, QMonomial, QSeries, SeriesError, Specialization};
use crate::rational::Rational;

pub use report::{dump_tsv, DumpRow, IdentityReport, ReductionReport, RunInfo, RunReport, Status, Summary};

use entries as e;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    CfEqualsSeriesRatio,
    SeriesTransformation,
    ProductIdentity,
    Recurrence,
    CfEqualsProductRatio,
}

impl IdentityKind {
    pub fn is_cf(self) -> bool {
        matches!(self, IdentityKind::CfEqualsSeriesRatio | IdentityKind::CfEqualsProductRatio)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown identity `{0}`")]
pub struct UnknownIdentity(pub String);

/// Two series that must agree coefficient by coefficient.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub label: String,
    pub lhs: QSeries,
    pub rhs: QSeries,
}

/// Requirements on a sample point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    NonZeroA,
    NonZeroB,
    NonZeroLambda,
    BNotOne,
    BNotMinusOne,
    ADistinctB,
}

impl Constraint {
    fn holds(self, p: &ParamPoint) -> bool {
        match self {
            Constraint::NonZeroA => !p.a.is_zero(),
            Constraint::NonZeroB => !p.b.is_zero(),
            Constraint::NonZeroLambda => !p.lambda.is_zero(),
            Constraint::BNotOne => !p.b.is_one(),
            Constraint::BNotMinusOne => !(-&p.b).is_one(),
            Constraint::ADistinctB => p.a != p.b,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::NonZeroA => "a != 0",
            Constraint::NonZeroB => "b != 0",
            Constraint::NonZeroLambda => "l != 0",
            Constraint::BNotOne => "b != 1",
            Constraint::BNotMinusOne => "b != -1",
            Constraint::ADistinctB => "a != b",
        })
    }
}

type TargetFn = fn(&Specialization, usize) -> Result<QSeries, CheckError>;
type TailFn = fn(&Specialization, usize, usize) -> Result<QSeries, CheckError>;
type ComparisonsFn = fn(&ParamPoint, usize) -> Result<Vec<Comparison>, CheckError>;
type RecurrenceFn = fn(&ParamPoint, usize, usize) -> Result<Vec<e::ThreeTerm>, CheckError>;

/// A continued fraction with the value it should converge to.
#[derive(Clone, Copy)]
struct CfSpec {
    build: fn(&Specialization) -> CFrac,
    target: TargetFn,
    /// Parameters lifted for the approximant contact check.
    contact_lift: Lift,
    /// Exact tails `T_n`, with `S_n(T_n - b_n)` equal to the target for every `n`.
    tails: Option<(Lift, TailFn)>,
    extras: Option<ComparisonsFn>,
    point_map: Option<fn(&ParamPoint) -> ParamPoint>,
}

#[derive(Clone, Copy)]
enum Check {
    Cf(CfSpec),
    Comparisons(ComparisonsFn),
    Recurrence { build: RecurrenceFn, shifts: (usize, usize) },
}

/// One registered identity.
#[derive(Clone)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub kind: IdentityKind,
    /// Parameters multiplied by `q` in the exact checks.
    pub lift: Lift,
    pub constraints: &'static [Constraint],
    /// Analytic side conditions. Irrelevant for the formal checks, kept for numeric use.
    pub side_conditions: &'static str,
    pub default_order: usize,
    pub default_depth: usize,
    check: Check,
}

impl fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityEntry")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("lift", &self.lift)
            .finish_non_exhaustive()
    }
}

impl IdentityEntry {
    /// The point the checks actually use (some entries fix parameters).
    pub fn effective_point(&self, p: &ParamPoint) -> ParamPoint {
        match &self.check {
            Check::Cf(CfSpec { point_map: Some(f), .. }) => f(p),
            _ => p.clone(),
        }
    }

    pub fn check_constraints(&self, p: &ParamPoint) -> Result<(), String> {
        let p = self.effective_point(p);
        let broken: Vec<String> = self.constraints.iter().filter(|c| !c.holds(&p)).map(ToString::to_string).collect();
        if broken.is_empty() {
            Ok(())
        } else {
            Err(format!("constraint violated: {}", broken.join(", ")))
        }
    }

    /// Links from this entry to others.
    pub fn reduction_links(&self) -> Vec<&'static ReductionLink> {
        REDUCTIONS.iter().filter(|l| l.from == self.id).collect()
    }

    /// Fraction and target at the contact specialization, for CF kinds.
    pub fn fraction(&self, p: &ParamPoint, order: usize) -> Option<Result<(CFrac, QSeries), CheckError>> {
        let Check::Cf(spec) = &self.check else {
            return None;
        };
        let sp = spec.contact_lift.apply(&self.effective_point(p));
        Some((spec.target)(&sp, order).map(|t| ((spec.build)(&sp), t)))
    }

    /// Same as [`fraction`](Self::fraction) at an explicit specialization.
    pub fn fraction_at(&self, sp: &Specialization, order: usize) -> Option<Result<(CFrac, QSeries), CheckError>> {
        let Check::Cf(spec) = &self.check else {
            return None;
        };
        Some((spec.target)(sp, order).map(|t| ((spec.build)(sp), t)))
    }

    /// Contact lift for CF kinds.
    pub fn contact_lift(&self) -> Option<Lift> {
        match &self.check {
            Check::Cf(spec) => Some(spec.contact_lift),
            _ => None,
        }
    }
}

const NO_CONSTRAINTS: &[Constraint] = &[];

fn cf_entry(
    id: &'static str,
    title: &'static str,
    kind: IdentityKind,
    constraints: &'static [Constraint],
    side_conditions: &'static str,
    spec: CfSpec,
) -> IdentityEntry {
    let lift = match spec.tails {
        Some((l, _)) if !l.is_none() => l,
        _ => spec.contact_lift,
    };
    IdentityEntry {
        id,
        title,
        kind,
        lift,
        constraints,
        side_conditions,
        default_order: 40,
        default_depth: 8,
        check: Check::Cf(spec),
    }
}

fn sums_entry(
    id: &'static str,
    title: &'static str,
    kind: IdentityKind,
    lift: Lift,
    constraints: &'static [Constraint],
    side_conditions: &'static str,
    f: ComparisonsFn,
) -> IdentityEntry {
    IdentityEntry {
        id,
        title,
        kind,
        lift,
        constraints,
        side_conditions,
        default_order: 40,
        default_depth: 8,
        check: Check::Comparisons(f),
    }
}

fn rec_entry(
    id: &'static str,
    title: &'static str,
    lift: Lift,
    constraints: &'static [Constraint],
    build: RecurrenceFn,
    shifts: RangeInclusive<usize>,
) -> IdentityEntry {
    IdentityEntry {
        id,
        title,
        kind: IdentityKind::Recurrence,
        lift,
        constraints,
        side_conditions: "",
        default_order: 40,
        default_depth: 8,
        check: Check::Recurrence { build, shifts: (*shifts.start(), *shifts.end()) },
    }
}

fn cf(build: fn(&Specialization) -> CFrac, target: TargetFn) -> CfSpec {
    CfSpec { build, target, contact_lift: Lift::NONE, tails: None, extras: None, point_map: None }
}

impl CfSpec {
    fn tails(mut self, lift: Lift, f: TailFn) -> Self {
        self.tails = Some((lift, f));
        self
    }

    fn contact(mut self, lift: Lift) -> Self {
        self.contact_lift = lift;
        self
    }
}

const LIFT_AB: Lift = Lift::new(true, true, false);
const LIFT_B: Lift = Lift::new(false, true, false);
const LIFT_L: Lift = Lift::new(false, false, true);

/// All identities, in a fixed order.
pub fn register_all() -> Vec<IdentityEntry> {
    use Constraint::*;
    use IdentityKind::*;
    let mut prod_ratio = cf_entry(
        "PROD_RATIO",
        "g-fraction at b = l = 1 as a ratio of infinite products",
        CfEqualsProductRatio,
        NO_CONSTRAINTS,
        "",
        CfSpec {
            extras: Some(e::prod_ratio_extra),
            point_map: Some(e::prod_ratio_point),
            ..cf(e::g_cfrac1, e::prod_ratio_target).tails(Lift::NONE, e::g_cfrac1_tail)
        },
    );
    prod_ratio.default_depth = 12;
    vec![
        cf_entry(
            "RR_CF",
            "Rogers-Ramanujan fraction with one parameter: R(1)/R(0)",
            CfEqualsSeriesRatio,
            &[NonZeroA],
            "",
            cf(e::rr_cf, e::rr_target).tails(Lift::NONE, e::rr_tail),
        ),
        cf_entry(
            "RR_SPECIAL",
            "1 + q/(1 + q^2/(1 + ...)) as a ratio of two similar sums",
            CfEqualsSeriesRatio,
            NO_CONSTRAINTS,
            "",
            CfSpec { point_map: Some(e::rr_special_point), ..cf(e::rr_special_cf, e::rr_special_target) },
        ),
        cf_entry(
            "G_CFRAC_g2",
            "fraction with partial denominators 1 + b q^n for g(1)/g(0)",
            CfEqualsSeriesRatio,
            &[BNotMinusOne],
            "",
            cf(e::g_cfrac2, e::small_g_target).tails(Lift::NONE, e::g_cfrac2_tail),
        ),
        cf_entry(
            "G_CFRAC_g1",
            "interlaced fraction with unit denominators for g(1)/g(0)",
            CfEqualsSeriesRatio,
            &[NonZeroLambda],
            "",
            cf(e::g_cfrac1, e::small_g_target).tails(Lift::NONE, e::g_cfrac1_tail),
        ),
        cf_entry(
            "G_CFRAC_g3",
            "fraction with numerators b + l q^n for g(1)/g(0)",
            CfEqualsSeriesRatio,
            &[BNotOne],
            "|b/(1-b)^2| < 1/4",
            cf(e::g_cfrac3, e::small_g_target).contact(LIFT_B).tails(Lift::NONE, e::g_cfrac3_tail),
        ),
        cf_entry(
            "HEINE_CF",
            "special case of Heine's fraction for G(1)/G(0)",
            CfEqualsSeriesRatio,
            NO_CONSTRAINTS,
            "",
            cf(e::heine_cf, e::big_g_target),
        ),
        cf_entry(
            "RAMANUJAN_G1",
            "Ramanujan's interlaced fraction for G(1)/G(0)",
            CfEqualsSeriesRatio,
            &[NonZeroLambda],
            "",
            cf(e::ramanujan_g1, e::big_g_target).tails(Lift::NONE, e::ramanujan_g1_tail),
        ),
        cf_entry(
            "RAMANUJAN_G2",
            "fraction with b0 = 1 + aq for G(1)/G(0), tails from G2",
            CfEqualsSeriesRatio,
            &[NonZeroA],
            "",
            cf(e::ramanujan_g2, e::big_g_target).tails(LIFT_L, e::ramanujan_g2_tail),
        ),
        cf_entry(
            "HIRSCHHORN",
            "fraction with numerators aq + l q^n for G(1)/G(0)",
            CfEqualsSeriesRatio,
            NO_CONSTRAINTS,
            "",
            cf(e::hirschhorn, e::big_g_target),
        ),
        cf_entry(
            "HEINE_CF_A",
            "fraction with denominators 1 + a q^(n+1) for G(1)/G(0)",
            CfEqualsSeriesRatio,
            NO_CONSTRAINTS,
            "",
            cf(e::heine_cf_a, e::big_g_target),
        ),
        cf_entry(
            "EISENSTEIN",
            "Eisenstein's fraction for sum (-1)^k a^k q^(k(k+1)/2)",
            CfEqualsSeriesRatio,
            &[NonZeroA],
            "",
            cf(e::eisenstein_cf, e::eisenstein_target).tails(Lift::NONE, e::eisenstein_tail),
        ),
        prod_ratio,
        cf_entry(
            "ENTRY11",
            "fraction for a ratio of sums and differences of infinite products",
            CfEqualsProductRatio,
            &[NonZeroA, ADistinctB],
            "|a| < 1",
            cf(e::entry11_cf, e::entry11_target).contact(LIFT_AB).tails(LIFT_AB, e::entry11_tail),
        ),
        sums_entry("QBIN", "q-binomial theorem", SeriesTransformation, LIFT_AB, NO_CONSTRAINTS, "|a| < 1", e::qbin),
        sums_entry(
            "ENTRY8",
            "four-parameter transformation of a basic hypergeometric sum",
            SeriesTransformation,
            Lift::new(true, true, false),
            NO_CONSTRAINTS,
            "|a| < 1",
            e::entry8,
        ),
        sums_entry(
            "ENTRY8_D0",
            "the transformation at d = 0, chained to G(0), G(1), G1A(0), G1B(0)",
            SeriesTransformation,
            Lift::NONE,
            &[NonZeroB, NonZeroLambda],
            "",
            e::entry8_d0,
        ),
        sums_entry(
            "ENTRY6",
            "symmetric form of the four-parameter transformation",
            SeriesTransformation,
            Lift::new(true, true, true),
            NO_CONSTRAINTS,
            "|a| < 1, |c| < 1",
            e::entry6,
        ),
        sums_entry(
            "GFRAC_SUMS2",
            "G(1)/G(0) = G1B(0)/G1A(0)",
            SeriesTransformation,
            Lift::NONE,
            &[NonZeroLambda],
            "",
            e::gfrac_sums2,
        ),
        sums_entry(
            "GFRAC5_SUMS",
            "G(1)/G(0) as G2(1) over a second sum",
            SeriesTransformation,
            LIFT_L,
            &[NonZeroA],
            "|l/a| < 1",
            e::gfrac5_sums,
        ),
        sums_entry(
            "gFRAC_SUMS2",
            "g(1)/g(0) = g2(1)/g2(0)",
            SeriesTransformation,
            Lift::NONE,
            NO_CONSTRAINTS,
            "",
            e::small_gfrac_sums2,
        ),
        sums_entry(
            "ENTRY11_SUMRATIO",
            "product ratio as odd part over even part of one sum",
            SeriesTransformation,
            LIFT_AB,
            &[NonZeroA, ADistinctB],
            "|a| < 1",
            e::entry11_sumratio,
        ),
        rec_entry("REC_RR", "R(s) = R(s+1) + a q^(s+1) R(s+2)", Lift::NONE, NO_CONSTRAINTS, e::rec_rr, 0..=6),
        rec_entry("REC_G1", "three-term recurrence for g1(s)", Lift::NONE, &[BNotMinusOne], e::rec_g1, 0..=6),
        rec_entry("REC_G2", "three-term recurrence for g2(s)", Lift::NONE, NO_CONSTRAINTS, e::rec_g2, 0..=6),
        rec_entry("REC_GG2", "three-term recurrence for G2(s)", LIFT_L, &[NonZeroA], e::rec_gg2, 0..=6),
        rec_entry(
            "REC_G1AB",
            "interlaced recurrences for G1A(s) and G1B(s)",
            Lift::NONE,
            &[NonZeroLambda],
            e::rec_g1ab,
            0..=6,
        ),
        rec_entry("REC_C", "three-term recurrence for C(s)", LIFT_AB, NO_CONSTRAINTS, e::rec_c, 1..=6),
        sums_entry(
            "POCH_IDS",
            "product identities for q-Pochhammer symbols",
            ProductIdentity,
            Lift::NONE,
            NO_CONSTRAINTS,
            "",
            e::poch_ids,
        ),
    ]
}

pub fn lookup(id: &str) -> Option<IdentityEntry> {
    register_all().into_iter().find(|e| e.id == id)
}

/// Extra knobs for [`verify_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Adds 1 to the lowest coefficient of partial numerator `n` (CF kinds only).
    pub perturb_element: Option<usize>,
    pub timings: bool,
    /// Attach a coefficient dump to failing reports.
    pub dump: bool,
}

pub fn verify(id: &str, p: &ParamPoint, order: usize, depth: usize) -> Result<IdentityReport, UnknownIdentity> {
    verify_with(id, p, order, depth, VerifyOptions::default())
}

pub fn verify_with(
    id: &str,
    p: &ParamPoint,
    order: usize,
    depth: usize,
    opts: VerifyOptions,
) -> Result<IdentityReport, UnknownIdentity> {
    let entry = lookup(id).ok_or_else(|| UnknownIdentity(id.to_string()))?;
    Ok(verify_entry(&entry, p, order, depth, opts))
}

/// Adds 1 to the coefficient at the valuation of `a_n` (or to `a_n`'s constant term if it is zero).
pub fn perturb(cf: &CFrac, n: usize) -> CFrac {
    cf.map_element(n, |el| {
        let mut coeffs = el.a.coeffs().to_vec();
        let i = el.a.valuation().unwrap_or(0);
        coeffs[i] += &Rational::one();
        CfElement::new(QSeries::from_coeffs(coeffs), el.b)
    })
}

struct Outcome {
    status: Status,
    first_mismatch: Option<usize>,
    contact: Option<usize>,
    detail: Option<String>,
    dump: Vec<DumpRow>,
}

impl Outcome {
    fn pass(contact: Option<usize>) -> Self {
        Outcome { status: Status::Pass, first_mismatch: None, contact, detail: None, dump: Vec::new() }
    }

    fn mismatch(at: usize, label: &str, lhs: &QSeries, rhs: &QSeries, contact: Option<usize>) -> Self {
        Outcome {
            status: Status::Fail,
            first_mismatch: Some(at),
            contact,
            detail: Some(label.to_string()),
            dump: report::dump_rows(lhs, rhs),
        }
    }
}

fn verify_entry(
    entry: &IdentityEntry,
    p: &ParamPoint,
    order: usize,
    depth: usize,
    opts: VerifyOptions,
) -> IdentityReport {
    let start = Instant::now();
    let point = entry.effective_point(p);
    let outcome = match entry.check_constraints(p) {
        Err(reason) => Outcome {
            status: Status::Skipped,
            first_mismatch: None,
            contact: None,
            detail: Some(reason),
            dump: Vec::new(),
        },
        Ok(()) => run_check(&entry.check, &point, order, depth, opts).unwrap_or_else(|err| Outcome {
            status: Status::Fail,
            first_mismatch: Some(0),
            contact: None,
            detail: Some(format!("error: {err}")),
            dump: Vec::new(),
        }),
    };
    let mut report = IdentityReport {
        id: entry.id.to_string(),
        kind: entry.kind,
        point,
        lift: entry.lift,
        order,
        depth,
        status: outcome.status,
        first_mismatch_power: outcome.first_mismatch,
        contact: outcome.contact,
        detail: outcome.detail,
        suspected_cancellation: false,
        escalation: false,
        elapsed_ms: None,
        dump: if opts.dump { outcome.dump } else { Vec::new() },
    };
    if opts.timings {
        report.set_elapsed(start.elapsed());
    }
    report
}

fn compare_all(cmps: &[Comparison], contact: Option<usize>) -> Option<Outcome> {
    cmps.iter()
        .find_map(|c| c.lhs.first_mismatch(&c.rhs).map(|m| Outcome::mismatch(m, &c.label, &c.lhs, &c.rhs, contact)))
}

fn run_check(
    check: &Check,
    p: &ParamPoint,
    order: usize,
    depth: usize,
    opts: VerifyOptions,
) -> Result<Outcome, CheckError> {
    match check {
        Check::Comparisons(f) => {
            let cmps = f(p, order)?;
            Ok(compare_all(&cmps, None).unwrap_or(Outcome::pass(None)))
        }
        Check::Recurrence { build, shifts } => {
            for s in shifts.0..=shifts.1 {
                for t in build(p, s, order)? {
                    let res = verify_three_term(&t.s0, &t.s1, &t.s2, &t.c1, &t.c2, order);
                    if let Some(m) = res.first_mismatch {
                        let rhs = &(&t.c1 * &t.s1) + &(&t.c2 * &t.s2);
                        return Ok(Outcome::mismatch(m, &t.label, &t.s0, &rhs, None));
                    }
                }
            }
            Ok(Outcome::pass(None))
        }
        Check::Cf(spec) => run_cf(spec, p, order, depth, opts),
    }
}

fn build_cf(spec: &CfSpec, sp: &Specialization, opts: VerifyOptions) -> CFrac {
    let cf = (spec.build)(sp);
    match opts.perturb_element {
        Some(n) if n >= 1 => perturb(&cf, n),
        _ => cf,
    }
}

/// Power through which the depth-`depth` approximant must agree with the value.
///
/// Consecutive approximants differ by `a_1 ... a_(d+1) / (B_d B_(d+1))` (by
/// `A_d A_(d+1)` under a head), so when those are units the agreement reaches
/// the total valuation of the first `d+1` partial numerators. Never below `depth+1`.
pub fn contact_floor(cf: &CFrac, depth: usize, order: usize) -> usize {
    let conv = cf.convergents(depth + 1, order);
    let ends = if cf.head().is_some() { conv.numerators() } else { conv.denominators() };
    let mut floor = depth + 1;
    if ends[depth].is_unit() && ends[depth + 1].is_unit() {
        let total: usize = (1..=depth + 1).map(|n| cf.element(n, order).a.valuation().unwrap_or(order + 1)).sum();
        floor = floor.max(total);
    }
    floor
}

fn run_cf(
    spec: &CfSpec,
    p: &ParamPoint,
    order: usize,
    depth: usize,
    opts: VerifyOptions,
) -> Result<Outcome, CheckError> {
    // approximant contact
    let sp = spec.contact_lift.apply(p);
    let cf = build_cf(spec, &sp, opts);
    let target = (spec.target)(&sp, order)?;
    let approx = cf.approximant(depth, order)?;
    let contact = approx.first_mismatch(&target);
    let floor = contact_floor(&cf, depth, order);
    if let Some(m) = contact.filter(|&m| m < floor) {
        let label = format!("approximant of depth {depth} agrees only below q^{m}, expected q^{floor}");
        return Ok(Outcome::mismatch(m, &label, &approx, &target, contact));
    }
    // exact values with tails
    if let Some((lift, tail)) = spec.tails {
        let sp = lift.apply(p);
        let cf = build_cf(spec, &sp, opts);
        let target = (spec.target)(&sp, order)?;
        for n in 1..=depth {
            let w = &tail(&sp, n, order)? - &cf.element(n, order).b;
            let value = cf.modified_approximant(n, &w, order)?;
            if let Some(m) = value.first_mismatch(&target) {
                let label = format!("S_{n}(T_{n} - b_{n}) differs from the target");
                return Ok(Outcome::mismatch(m, &label, &value, &target, contact));
            }
        }
    }
    if let Some(extras) = spec.extras {
        if let Some(out) = compare_all(&extras(p, order)?, contact) {
            return Ok(out);
        }
    }
    Ok(Outcome::pass(contact))
}

// ---------------------------------------------------------------------------
// reductions

type ReductionFn = fn(&ParamPoint, usize, usize) -> Result<Vec<Comparison>, CheckError>;

/// A specialization under which one entry turns into another.
pub struct ReductionLink {
    pub from: &'static str,
    pub to: &'static str,
    pub substitution: &'static str,
    check: ReductionFn,
}

impl fmt::Debug for ReductionLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} at {}", self.from, self.to, self.substitution)
    }
}

/// Element-by-element comparison for `n = 1..=depth`.
fn same_elements(x: &CFrac, y: &CFrac, depth: usize, order: usize) -> Vec<Comparison> {
    let mut out = Vec::new();
    for n in 1..=depth {
        let (ex, ey) = (x.element(n, order), y.element(n, order));
        out.push(Comparison { label: format!("a_{n}"), lhs: ex.a, rhs: ey.a });
        out.push(Comparison { label: format!("b_{n}"), lhs: ex.b, rhs: ey.b });
    }
    out
}

/// Elements `n >= 1`, `b0`, head and target of two fractions.
fn same_fraction(x: &CFrac, tx: QSeries, y: &CFrac, ty: QSeries, depth: usize, order: usize) -> Vec<Comparison> {
    let mut out = same_elements(x, y, depth, order);
    out.push(Comparison { label: "b0".into(), lhs: x.b0().padded(order), rhs: y.b0().padded(order) });
    let head = |c: &CFrac| c.head().map_or(QSeries::one(order), |h| h.padded(order));
    out.push(Comparison { label: "head".into(), lhs: head(x), rhs: head(y) });
    out.push(Comparison { label: "target".into(), lhs: tx, rhs: ty });
    out
}

fn mono(v: &Rational) -> QMonomial {
    QMonomial::constant(v.clone())
}

fn sp3(a: QMonomial, b: QMonomial, l: QMonomial) -> Specialization {
    Specialization::new(a, b, l)
}

fn red_g2_rr(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let from = sp3(mono(&p.a), QMonomial::zero(), mono(&p.a));
    let to = p.specialize();
    let mut out =
        same_fraction(&e::g_cfrac2(&from), e::small_g_target(&from, n)?, &e::rr_cf(&to), e::rr_target(&to, n)?, d, n);
    out.push(Comparison {
        label: "g(0) = R(0)".into(),
        lhs: crate::qseries::build_family_with(crate::qseries::Family::LowerG, 0, &from, n)?,
        rhs: crate::qseries::build_family_with(crate::qseries::Family::R, 0, &to, n)?,
    });
    Ok(out)
}

fn red_rg1_g1(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let sp = sp3(QMonomial::zero(), mono(&p.b), mono(&p.lambda));
    let mut out = same_fraction(
        &e::ramanujan_g1(&sp),
        e::big_g_target(&sp, n)?,
        &e::g_cfrac1(&sp),
        e::small_g_target(&sp, n)?,
        d,
        n,
    );
    out.extend(e::g_limit_sums(&sp, n)?);
    Ok(out)
}

fn red_hirschhorn_g3(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    // a -> b/q turns the monomial aq into the constant b
    let from = e::hirschhorn_with(mono(&p.b), QMonomial::zero(), mono(&p.lambda));
    let to = e::g_cfrac3(&p.specialize());
    Ok(same_elements(&from, &to, d, n))
}

fn red_heine_g2(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let sp = sp3(QMonomial::zero(), mono(&p.b), mono(&p.lambda));
    Ok(same_fraction(&e::heine_cf(&sp), e::big_g_target(&sp, n)?, &e::g_cfrac2(&sp), e::small_g_target(&sp, n)?, d, n))
}

fn red_heine_a_g1(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let sp = sp3(QMonomial::zero(), mono(&p.b), mono(&p.lambda));
    Ok(same_fraction(
        &e::heine_cf_a(&sp),
        e::big_g_target(&sp, n)?,
        &e::g_cfrac1(&sp),
        e::small_g_target(&sp, n)?,
        d,
        n,
    ))
}

fn red_eisenstein_g1(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let from = p.specialize();
    let to = sp3(QMonomial::zero(), mono(&-&p.a), mono(&p.a));
    Ok(same_fraction(
        &e::eisenstein_cf(&from),
        e::eisenstein_target(&from, n)?,
        &e::g_cfrac1(&to),
        e::small_g_target(&to, n)?,
        d,
        n,
    ))
}

fn red_rr_special(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let sp = e::rr_special_point(p).specialize();
    let mut out = same_elements(&e::rr_special_cf(&sp), &e::rr_cf(&sp), d, n);
    out.push(Comparison {
        label: "target product".into(),
        lhs: &e::rr_special_target(&sp, n)? * &e::rr_target(&sp, n)?,
        rhs: QSeries::one(n),
    });
    Ok(out)
}

fn red_prod_ratio(p: &ParamPoint, n: usize, d: usize) -> Result<Vec<Comparison>, CheckError> {
    let sp = e::prod_ratio_point(p).specialize();
    Ok(same_fraction(
        &e::g_cfrac1(&sp),
        e::prod_ratio_target(&sp, n)?,
        &e::g_cfrac1(&sp),
        e::small_g_target(&sp, n)?,
        d,
        n,
    ))
}

/// Every registered reduction.
pub static REDUCTIONS: &[ReductionLink] = &[
    ReductionLink { from: "G_CFRAC_g2", to: "RR_CF", substitution: "b=0, l=a", check: red_g2_rr },
    ReductionLink { from: "RAMANUJAN_G1", to: "G_CFRAC_g1", substitution: "a->0", check: red_rg1_g1 },
    ReductionLink { from: "HIRSCHHORN", to: "G_CFRAC_g3", substitution: "b=0, a->b/q", check: red_hirschhorn_g3 },
    ReductionLink { from: "HEINE_CF", to: "G_CFRAC_g2", substitution: "a->0", check: red_heine_g2 },
    ReductionLink { from: "HEINE_CF_A", to: "G_CFRAC_g1", substitution: "a->0", check: red_heine_a_g1 },
    ReductionLink { from: "EISENSTEIN", to: "G_CFRAC_g1", substitution: "l=a, b=-a", check: red_eisenstein_g1 },
    ReductionLink { from: "RR_SPECIAL", to: "RR_CF", substitution: "a=1", check: red_rr_special },
    ReductionLink { from: "PROD_RATIO", to: "G_CFRAC_g1", substitution: "b=1, l=1", check: red_prod_ratio },
];

/// Checks the link from `from` to `to` at `p`. `None` if no such link is registered.
pub fn check_reduction(from: &str, to: &str, p: &ParamPoint, order: usize, depth: usize) -> Option<ReductionReport> {
    let link = REDUCTIONS.iter().find(|l| l.from == from && l.to == to)?;
    Some(run_reduction(link, p, order, depth))
}

fn run_reduction(link: &ReductionLink, p: &ParamPoint, order: usize, depth: usize) -> ReductionReport {
    let (status, first_mismatch_power, detail) = match (link.check)(p, order, depth) {
        Err(err) => (Status::Fail, Some(0), Some(format!("error: {err}"))),
        Ok(cmps) => match compare_all(&cmps, None) {
            Some(o) => (Status::Fail, o.first_mismatch, o.detail),
            None => (Status::Pass, None, None),
        },
    };
    ReductionReport {
        from: link.from.to_string(),
        to: link.to.to_string(),
        substitution: link.substitution.to_string(),
        point: p.clone(),
        order,
        status,
        first_mismatch_power,
        detail,
    }
}

// ---------------------------------------------------------------------------
// runner

/// Extra points tried when an entry passes at some points and fails at others.
pub const ESCALATION_POINTS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("verify_all needs at least one sample point")]
pub struct NoPoints;

/// Runs every entry at `points` sampled points, plus every reduction link.
///
/// Reports are sorted by id, then by point index, whatever order the workers finish in.
pub fn verify_all(seed: u64, points: usize, order: usize, depth: usize) -> Result<RunReport, NoPoints> {
    verify_all_with(seed, points, order, depth, VerifyOptions::default())
}

pub fn verify_all_with(
    seed: u64,
    points: usize,
    order: usize,
    depth: usize,
    options: VerifyOptions,
) -> Result<RunReport, NoPoints> {
    run_plan(&register_all(), &Plan { seed, points, order, depth, at: None, options })
}

/// What to run: sampled points from `seed`, or the single point `at`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub seed: u64,
    pub points: usize,
    pub order: usize,
    pub depth: usize,
    pub at: Option<ParamPoint>,
    pub options: VerifyOptions,
}

/// Runs `entries` and the reduction links leaving them.
///
/// With sampled points, an entry that passes at some points and fails at others
/// is run at [`ESCALATION_POINTS`] more and all its reports are flagged.
pub fn run_plan(entries: &[IdentityEntry], plan: &Plan) -> Result<RunReport, NoPoints> {
    let (base, fresh): (Vec<ParamPoint>, Vec<ParamPoint>) = match &plan.at {
        Some(p) => (vec![p.clone()], Vec::new()),
        None if plan.points == 0 => return Err(NoPoints),
        None => {
            let mut all = crate::qseries::sample_params(plan.seed, plan.points + ESCALATION_POINTS);
            let fresh = all.split_off(plan.points);
            (all, fresh)
        }
    };
    let (order, depth, opts) = (plan.order, plan.depth, plan.options);
    let mut reports: Vec<(&'static str, usize, IdentityReport)> = entries
        .par_iter()
        .flat_map_iter(|entry| {
            let mut rs: Vec<IdentityReport> = base.iter().map(|p| verify_entry(entry, p, order, depth, opts)).collect();
            let passed = rs.iter().any(|r| r.status == Status::Pass);
            let failed = rs.iter().any(|r| r.status == Status::Fail);
            if passed && failed {
                for p in &fresh {
                    let mut r = verify_entry(entry, p, order, depth, opts);
                    r.escalation = true;
                    rs.push(r);
                }
                for r in &mut rs {
                    r.suspected_cancellation = true;
                }
            }
            rs.into_iter().enumerate().map(move |(i, r)| (entry.id, i, r))
        })
        .collect();
    reports.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let links: Vec<&ReductionLink> = REDUCTIONS.iter().filter(|l| entries.iter().any(|e| e.id == l.from)).collect();
    let mut reductions: Vec<(usize, usize, ReductionReport)> = links
        .par_iter()
        .enumerate()
        .flat_map_iter(|(li, link)| {
            base.iter().enumerate().map(move |(pi, p)| (li, pi, run_reduction(link, p, order, depth)))
        })
        .collect();
    reductions.sort_by_key(|r| (r.0, r.1));
    Ok(RunReport::new(
        RunInfo { seed: plan.seed, points: base.len(), order, depth },
        reports.into_iter().map(|r| r.2).collect(),
        reductions.into_iter().map(|r| r.2).collect(),
    ))
}
