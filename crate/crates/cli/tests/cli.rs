use std::process::Command;

use qcfrac::catalog::RunReport;
use qcfrac::cfrac::{CFrac, CfElement};
use qcfrac::qseries::{build_family, Family, ParamPoint, QMonomial, QSeries};
use qcfrac::Rational;
use qcfrac_cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn qcfrac(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qcfrac").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qcfrac")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(qcfrac(&["verify", "RR_CF", "--points", "1", "--order", "12", "--depth", "3"]).0, EXIT_OK);
    assert_eq!(qcfrac(&["verify", "NOPE"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["verify", "RR_CF", "--order", "3"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["verify", "RR_CF", "--points", "0"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["verify", "RR_CF", "--depth", "0"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["verify", "RR_CF", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["approximants", "QBIN"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["euclid", "-3/4"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["euclid", "x"]).0, EXIT_USAGE);
    assert_eq!(qcfrac(&["--help"]).0, EXIT_OK);

    let (code, out, _) = qcfrac(&["verify", "G_CFRAC_g2", "--perturb-element", "2", "--points", "1"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("FAIL G_CFRAC_g2"));
    assert!(out.contains("first_mismatch=q^"));
    // perturbation only applies to fractions
    assert_eq!(qcfrac(&["verify", "QBIN", "--perturb-element", "1"]).0, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary(&["euclid", "13/8"]).status.code(), Some(EXIT_OK));
    assert_eq!(binary(&["verify", "NOPE"]).status.code(), Some(EXIT_USAGE));
    let failed = binary(&["verify", "RR_CF", "--perturb-element", "1", "--points", "1", "--order", "20"]);
    assert_eq!(failed.status.code(), Some(EXIT_FAIL));
}

#[test]
fn json_report_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let args = ["verify", "all", "--order", "12", "--depth", "3", "--points", "1", "--seed", "5"];
    let (code, out, _) = qcfrac(&[&args[..], &["--format", "json", "--output", path_str]].concat());
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("summary: pass="));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.summary.fail, 0);
    assert!(report.reports.len() >= 27);
    assert_eq!(serde_json::from_str::<RunReport>(&report.to_json()).unwrap(), report);

    // same seed, same bytes
    let again = dir.path().join("again.json");
    qcfrac(&[&args[..], &["--format", "json", "--output", again.to_str().unwrap()]].concat());
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn tsv_report() {
    let (code, out, _) = qcfrac(&["verify", "QBIN", "--points", "2", "--order", "10", "--format", "tsv"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("id\t"));
    assert_eq!(lines.filter(|l| l.starts_with("QBIN\t")).count(), 2);
}

#[test]
fn euclid_example() {
    let (code, out, _) = qcfrac(&["euclid", "13/8"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "13/8 = [1; 1, 1, 1, 2]\nreconstructed: 13/8\n");
    assert!(qcfrac(&["euclid", "1/1"]).1.starts_with("1 = [1]"));
}

#[test]
fn expand_rogers_ramanujan() {
    for a in ["1", "1/3"] {
        let params = format!("a={a}");
        let (code, out, _) =
            qcfrac(&["expand", "--num", "R:0", "--den", "R:1", "--params", &params, "--order", "80", "--depth", "10"]);
        assert_eq!(code, EXIT_OK);
        for k in 1..=10 {
            assert!(out.contains(&format!("{k}: a_{k} = {a} q^{k},")), "{out}");
        }
        assert!(out.contains("residual_order = 25"));
    }
}

#[test]
fn expand_stops_when_precision_runs_out() {
    let (code, out, _) =
        qcfrac(&["expand", "--num", "R:0", "--den", "R:1", "--params", "a=1", "--order", "11", "--depth", "10"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("3: a_3"));
    assert!(!out.contains("4: a_4"));
}

#[test]
fn expand_equal_inputs_terminate() {
    let (code, out, _) = qcfrac(&["expand", "--num", "R:0", "--den", "R:0", "--params", "a=1/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("terminated: ratio is 1"));
}

/// The expander yields a C-fraction in monomials. The equivalence-transformed
/// g-fraction has partial numerators l q^n / ((1 + b q^(n-1))(1 + b q^n)),
/// so only the first leading term coincides; the values must agree.
#[test]
fn expand_g1_ratio() {
    let (code, out, _) = qcfrac(&[
        "expand",
        "--num",
        "g1:0",
        "--den",
        "g1:1",
        "--params",
        "b=1/5,l=1/7",
        "--order",
        "60",
        "--depth",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    let steps = json["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 6);
    let factors: Vec<QMonomial> = steps
        .iter()
        .map(|s| {
            let c: Rational = s["coef"].as_str().unwrap().parse().unwrap();
            QMonomial::new(c, s["power"].as_u64().unwrap() as usize)
        })
        .collect();
    assert_eq!(factors[0], QMonomial::new(Rational::new(5, 42), 1));

    let order = 60;
    let p = ParamPoint::new(Rational::from(0), Rational::new(1, 5), Rational::new(1, 7));
    let num = build_family(Family::LowerG1, 0, &p, order).unwrap();
    let den = build_family(Family::LowerG1, 1, &p, order).unwrap();
    let els = factors.iter().map(|f| CfElement::new(f.to_series(order), QSeries::one(order))).collect();
    let produced = CFrac::from_elements(QSeries::one(order), els);
    let reach: usize = factors.iter().map(|f| f.power()).sum();
    let value = produced.approximant(6, order).unwrap();
    let m = value.first_mismatch(&num.divide(&den).unwrap());
    assert!(m.is_some_and(|m| m >= reach), "{m:?}");
}

#[test]
fn approximant_table() {
    let (code, out, _) = qcfrac(&["approximants", "RR_CF", "--params", "a=1", "--depth", "12"]);
    assert_eq!(code, EXIT_OK);
    let powers: Vec<usize> = out.lines().skip(2).map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(powers.len(), 12);
    assert!(powers.windows(2).all(|w| w[0] < w[1]));
    assert!(powers.iter().enumerate().all(|(i, &m)| m >= i + 2));
}

#[test]
fn approximants_at_a_point() {
    let (code, out, _) = qcfrac(&["approximants", "RR_CF", "--params", "a=1", "--at-q", "1/2", "--depth", "60"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# worpitzky_index\t2\n"));
    for line in out.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let n: usize = cols[0].parse().unwrap();
        let delta: f64 = cols[3].parse().unwrap();
        if n > 50 {
            assert!(delta < 1e-12, "row {n}: {delta}");
        }
    }
}
