use std::ffi::CStr;
use std::ptr;

use qcat_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qcat_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(qcat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn levels_at_start_point() {
    let mut e = [0.0; 2];
    let s = unsafe { qcat_pspin_levels(2, 3, 1.0, 1.0, 2, e.as_mut_ptr()) };
    assert_eq!(s, QcatStatus::Ok);
    assert!((e[1] - e[0] - 1.0).abs() < 1e-14);
    assert!(last_error().is_empty());
}

#[test]
fn bad_arguments_are_reported() {
    let mut e = [0.0; 2];
    let s = unsafe { qcat_pspin_levels(2, 3, 1.5, 1.0, 2, e.as_mut_ptr()) };
    assert_eq!(s, QcatStatus::InvalidArgument);
    assert!(last_error().contains("1.5"));
    let s = unsafe { qcat_pspin_levels(2, 3, 0.5, 1.0, 2, ptr::null_mut()) };
    assert_eq!(s, QcatStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(
        unsafe { qcat_parabolic_cylinder(60.0, 1.0, &mut v) },
        QcatStatus::OutOfEnvelope
    );
}

#[test]
fn parabolic_cylinder_closed_form() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { qcat_parabolic_cylinder(0.0, 2.0, &mut v) },
        QcatStatus::Ok
    );
    assert!((v - (-1.0f64).exp()).abs() < 1e-14);
}

#[test]
fn well_handle_lifecycle() {
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { qcat_well_new(3.0, 3.0, 1.0, 1.0, &mut w) },
        QcatStatus::Ok
    );
    let mut g = 0.0;
    assert_eq!(unsafe { qcat_well_gap_ratio(w, &mut g) }, QcatStatus::Ok);
    assert!((g - 1.263e-3).abs() < 1e-6);
    let mut d = 0.0;
    assert_eq!(
        unsafe { qcat_well_ground_deficit(w, &mut d) },
        QcatStatus::Ok
    );
    assert!(d > 0.0);
    unsafe { qcat_well_free(w) };
    unsafe { qcat_well_free(ptr::null_mut()) };
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { qcat_well_new(1.0, 1.0, -1.0, 1.0, &mut bad) },
        QcatStatus::InvalidArgument
    );
    assert!(bad.is_null());
}

#[test]
fn landscape_and_path() {
    let axis: Vec<f64> = (0..5).map(|i| i as f64 / 4.0).collect();
    let mut l = ptr::null_mut();
    let s = unsafe { qcat_landscape_scan(10, 3, axis.as_ptr(), 5, axis.as_ptr(), 5, &mut l) };
    assert_eq!(s, QcatStatus::Ok);
    let (mut ng, mut nk) = (0, 0);
    assert_eq!(
        unsafe { qcat_landscape_shape(l, &mut ng, &mut nk) },
        QcatStatus::Ok
    );
    assert_eq!((ng, nk), (5, 5));
    let mut d = 0.0;
    assert_eq!(
        unsafe { qcat_landscape_delta01(l, 4, 4, &mut d) },
        QcatStatus::Ok
    );
    assert!((d - 0.2).abs() < 1e-13);
    assert_eq!(
        unsafe { qcat_landscape_delta01(l, 5, 0, &mut d) },
        QcatStatus::InvalidArgument
    );

    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { qcat_path_shortest(l, QcatEdgeConvention::Destination, &mut p) },
        QcatStatus::Ok
    );
    let (mut n, mut t) = (0, 0.0);
    assert_eq!(
        unsafe { qcat_path_summary(p, &mut n, &mut t) },
        QcatStatus::Ok
    );
    let (mut g, mut k, mut c) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { qcat_path_cell(p, 0, &mut g, &mut k, &mut c) },
        QcatStatus::Ok
    );
    assert_eq!((g, k, c), (1.0, 1.0, 0.0));
    assert_eq!(
        unsafe { qcat_path_cell(p, n - 1, &mut g, &mut k, &mut c) },
        QcatStatus::Ok
    );
    assert_eq!((g, k), (0.0, 1.0));
    assert_eq!(c, t);
    assert_eq!(
        unsafe { qcat_path_cell(p, n, &mut g, &mut k, &mut c) },
        QcatStatus::InvalidArgument
    );
    unsafe {
        qcat_path_free(p);
        qcat_landscape_free(l);
    }
}
