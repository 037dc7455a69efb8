use qcfrac::catalog::{
    self, check_reduction, lookup, register_all, verify, verify_all, verify_with, IdentityKind, RunReport, Status,
    VerifyOptions,
};
use qcfrac::euler::euler_expand;
use qcfrac::qseries::{build_family, sample_params, Family, ParamPoint};
use qcfrac::Rational;

fn pt(a: &str, b: &str, l: &str) -> ParamPoint {
    ParamPoint::new(a.parse().unwrap(), b.parse().unwrap(), l.parse().unwrap())
}

#[test]
fn rr_cf_against_euler_oracle() {
    let p = pt("1", "1/2", "1/3");
    let r = verify("RR_CF", &p, 40, 10).unwrap();
    assert_eq!(r.status, Status::Pass);
    let n = build_family(Family::R, 0, &p, 40).unwrap();
    let d = build_family(Family::R, 1, &p, 40).unwrap();
    let trace = euler_expand(&n, &d, 10).unwrap();
    let (cf, _) = lookup("RR_CF").unwrap().fraction(&p, 40).unwrap().unwrap();
    for (k, f) in trace.factors().iter().enumerate() {
        assert_eq!(cf.element(k + 1, 40).a, f.to_series(40));
    }
}

#[test]
fn qbin_and_prod_ratio_examples() {
    assert!(verify("QBIN", &pt("1/3", "1/5", "1/7"), 40, 8).unwrap().passed());
    let prod = lookup("PROD_RATIO").unwrap();
    assert_eq!(prod.default_depth, 12);
    assert_eq!(prod.kind, IdentityKind::CfEqualsProductRatio);
    assert!(verify("PROD_RATIO", &pt("1/3", "1/5", "1/7"), 40, 12).unwrap().passed());
}

#[test]
fn registry_covers_every_kind() {
    let all = register_all();
    assert!(all.len() >= 27);
    for kind in [
        IdentityKind::CfEqualsSeriesRatio,
        IdentityKind::SeriesTransformation,
        IdentityKind::ProductIdentity,
        IdentityKind::Recurrence,
        IdentityKind::CfEqualsProductRatio,
    ] {
        assert!(all.iter().any(|e| e.kind == kind), "{kind:?}");
    }
}

#[test]
fn the_three_reductions() {
    for p in sample_params(11, 3) {
        for (from, to) in [("G_CFRAC_g2", "RR_CF"), ("RAMANUJAN_G1", "G_CFRAC_g1"), ("HIRSCHHORN", "G_CFRAC_g3")] {
            let r = check_reduction(from, to, &p, 40, 8).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.line());
        }
    }
    assert!(check_reduction("RR_CF", "QBIN", &pt("1/2", "1/3", "1/5"), 10, 2).is_none());
}

#[test]
fn reduction_links_hang_off_entries() {
    let g2 = lookup("G_CFRAC_g2").unwrap();
    let links = g2.reduction_links();
    assert!(links.iter().any(|l| l.to == "RR_CF" && l.substitution == "b=0, l=a"));
}

/// Euler's expander applied to a catalog value. Where the catalog fraction has
/// monomial partial numerators after the equivalence transformation, the
/// expander must reproduce them; otherwise its fraction must agree in value.
#[test]
fn euler_expander_matches_catalog_fractions() {
    let order = 40;
    let depth = 8;
    let mut elementwise = 0;
    for p in sample_params(3, 3) {
        for entry in register_all().into_iter().filter(|e| e.kind.is_cf()) {
            let (cf, target) = entry.fraction(&p, order).unwrap().unwrap();
            // value / b0 as a quotient n/d
            let b0 = cf.b0().padded(order);
            let (n, d) = match cf.head() {
                Some(h) => (h.padded(order), &target * &b0),
                None => (target, b0),
            };
            if !n.coeffs()[0].is_one() || !d.coeffs()[0].is_one() {
                continue;
            }
            let Ok(trace) = euler_expand(&n, &d, depth) else {
                panic!("{} ran out of precision at {p}", entry.id);
            };
            let eq = cf.equivalence_unit_denominators(depth, order).unwrap();
            let monomial = (1..=depth).all(|k| {
                let a = eq.element(k, order).a;
                a.valuation().is_some_and(|v| a.coeffs()[v + 1..].iter().all(Rational::is_zero))
            });
            if monomial {
                elementwise += 1;
                for (k, f) in trace.factors().iter().enumerate() {
                    assert_eq!(eq.element(k + 1, order).a, f.to_series(order), "{} a_{}", entry.id, k + 1);
                }
            }
            let k = trace.steps.len();
            let reach: usize = trace.factors().iter().map(|f| f.power()).sum();
            let produced = trace.produced().approximant(k, trace.residual_order).unwrap();
            let value = n.divide(&d).unwrap();
            if let Some(m) = produced.first_mismatch(&value) {
                assert!(m >= reach.min(trace.residual_order), "{}: produced fraction off at q^{m}", entry.id);
            }
        }
    }
    assert!(elementwise >= 6, "only {elementwise} elementwise comparisons");
}

#[test]
fn report_json_round_trips() {
    let report = verify_all(4, 1, 12, 4).unwrap();
    let back: RunReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.summary.pass, report.reports.len() + report.reductions.len());
}

#[test]
fn same_seed_same_reports() {
    assert_eq!(verify_all(9, 2, 14, 4).unwrap(), verify_all(9, 2, 14, 4).unwrap());
}

#[test]
fn failures_carry_a_mismatch_power_and_a_dump() {
    let opts = VerifyOptions { perturb_element: Some(2), dump: true, ..Default::default() };
    let r = verify_with("G_CFRAC_g2", &pt("1/3", "2/5", "3/7"), 30, 8, opts).unwrap();
    assert_eq!(r.status, Status::Fail);
    let m = r.first_mismatch_power.unwrap();
    let row = &r.dump[m];
    assert_ne!(row.lhs, row.rhs);
    assert!(r.dump[..m].iter().all(|row| row.lhs == row.rhs));
    let tsv = catalog::dump_tsv(&r.dump);
    assert!(tsv.starts_with("power\tlhs\trhs\n"));
}

#[test]
fn skipped_points_report_their_reason() {
    let r = verify("G_CFRAC_g3", &pt("1/2", "1", "1/3"), 20, 4).unwrap();
    assert_eq!(r.status, Status::Skipped);
    assert!(r.first_mismatch_power.is_none());
    assert!(r.detail.unwrap().contains("b != 1"));
}

#[test]
fn constraints_guard_poles() {
    // the d = 0 transformation divides by b, G2 divides by a
    let r = verify("ENTRY8_D0", &pt("1/2", "0", "1/3"), 20, 4).unwrap();
    assert_eq!(r.status, Status::Skipped);
    let r = verify("RAMANUJAN_G2", &pt("0", "1/2", "1/3"), 20, 4).unwrap();
    assert_eq!(r.status, Status::Skipped);
}
