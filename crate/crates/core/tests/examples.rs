//! Runs every example end to end and spot-checks what it returns.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(thresholding);
example!(risk_profile);
example!(theorem_scan);
example!(certify);
example!(js_gap);
example!(noncentral_tails);
example!(cli_pipeline);

#[test]
fn thresholding_runs() {
    let rows = thresholding::run_example();
    assert_eq!(rows.len(), 5);
    let soft = &rows[1].1;
    assert_eq!(soft[2], 1.5);
}

#[test]
fn risk_profile_runs() {
    let profiles = risk_profile::run_example();
    // js at the origin: p - (p - 2) = 2.
    assert!((profiles[0].rows[0].risk - 2.0).abs() < 1e-9);
    assert!(profiles[2].rows.iter().any(|r| r.risk > 5.0));
}

#[test]
fn theorem_scan_runs() {
    for scan in theorem_scan::run_example() {
        assert!(scan.rel_dev_strictly_decreasing());
    }
}

#[test]
fn certify_runs() {
    let certs = certify::run_example();
    assert!(certs[..3].iter().all(|c| c.is_ok()));
    assert!(certs[3].is_err());
}

#[test]
fn js_gap_runs() {
    for (_, _, d, h) in js_gap::run_example() {
        assert!((d - h).abs() < 1e-8);
    }
}

#[test]
fn noncentral_tails_runs() {
    let rows = noncentral_tails::run_example();
    assert!((rows[0].1.exp() - 0.038_535_9).abs() < 1e-6);
    assert!(rows.iter().all(|r| r.1.is_finite()));
}

#[test]
fn cli_pipeline_runs() {
    let (csv, svg) = cli_pipeline::run_example();
    assert!(csv.starts_with("nu,risk,stderr,method,p,factor\n"));
    assert!(svg.contains("<svg"));
}
