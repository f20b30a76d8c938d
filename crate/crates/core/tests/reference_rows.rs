//! Reference eigenvalue rows at truncations where the values are *not* yet
//! converged. Matching these pins the discretization itself (spaces, basis
//! indexing, entry formulas), not just the limits.

use stokes_spectra::{
    assemble, solve_ellipse, solve_gep, DomainTag, EllipseGeometry, ModeProblem, SpectrumMeta,
};

fn disk_row(m: i32, degree: usize) -> Vec<f64> {
    let p = ModeProblem::new(m, degree).unwrap();
    let (a, b) = assemble(&p).unwrap();
    let meta = SpectrumMeta {
        domain: DomainTag::Disk,
        mode: Some(m),
        degree,
    };
    solve_gep(&a, &b, 4, meta).unwrap().eigenvalues
}

fn assert_row(got: &[f64], want: &[f64], tol: f64, label: &str) {
    for (g, w) in got.iter().zip(want) {
        assert!(
            ((g - w) / w).abs() <= tol,
            "{label}: got {g:.15}, want {w:.15}"
        );
    }
}

#[test]
fn disk_mode0_low_truncation() {
    assert_row(
        &disk_row(0, 10),
        &[
            14.6819706421365,
            49.2184567483993,
            103.5024835613828,
            177.6009453441972,
        ],
        1e-12,
        "m=0, N=10",
    );
}

#[test]
fn disk_mode1_low_truncations() {
    assert_row(
        &disk_row(1, 20),
        &[
            26.3746164271634,
            70.8499989190960,
            135.0207088659703,
            218.9201891456649,
        ],
        1e-12,
        "m=1, N=20",
    );
    assert_row(
        &disk_row(1, 30),
        &[
            26.3746164271634,
            70.8499989190958,
            135.0207088659704,
            218.9201891456624,
        ],
        1e-12,
        "m=1, N=30",
    );
}

#[test]
fn disk_mode2_low_truncation() {
    assert_row(
        &disk_row(2, 30),
        &[
            40.7064658182003,
            95.2775725440372,
            169.3954498260997,
            263.2008542550081,
        ],
        1e-12,
        "m=2, N=30",
    );
}

#[test]
fn ellipse_converged_row_at_n40() {
    let geom = EllipseGeometry::new(3.0, 1.0, 40).unwrap();
    let got = solve_ellipse(&geom, 4).unwrap().eigenvalues;
    assert_row(
        &got,
        &[
            9.96633434844728,
            11.0706554383168,
            13.1627539455290,
            15.6437494538630,
        ],
        1e-10,
        "ellipse a=3, b=1, N=40",
    );
}
