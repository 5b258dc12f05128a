use std::ffi::{CStr, CString};
use std::ptr;

use totpos_ffi::*;

fn last_error() -> String {
    let p = totpos_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn lattice(shape: &[usize], values: &[f64]) -> *mut TotposLattice {
    let mut out = ptr::null_mut();
    let st = unsafe {
        totpos_lattice_new(
            shape.len(),
            shape.as_ptr(),
            ptr::null(),
            values.as_ptr(),
            TotposInterpretation::Density as u32,
            &mut out,
        )
    };
    assert_eq!(st, TotposStatus::Ok);
    out
}

fn run_check(l: *const TotposLattice, alpha: &[i8], mode: TotposMode) -> *mut TotposReport {
    let mut r = ptr::null_mut();
    let st = unsafe {
        totpos_check(
            l,
            alpha.as_ptr(),
            alpha.len(),
            mode as u32,
            1e-12,
            false,
            &mut r,
        )
    };
    assert_eq!(st, TotposStatus::Ok, "{}", last_error());
    r
}

#[test]
fn check_through_handles() {
    let l = lattice(&[2, 2], &[1.0, 2.0, 2.0, 1.0]);
    unsafe {
        assert_eq!(totpos_lattice_dim(l), 2);
        assert_eq!(totpos_lattice_len(l), 4);

        let r = run_check(l, &[1, 1], TotposMode::Pairs);
        assert!(!totpos_report_passed(r));
        assert!(totpos_report_has_witness(r));
        assert_eq!(totpos_report_min_margin(r), -3.0);
        assert_eq!(totpos_report_quadruples_checked(r), 1);
        let mut json = ptr::null_mut();
        assert_eq!(totpos_report_to_json(r, &mut json), TotposStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"fail\""), "{text}");
        totpos_string_free(json);
        totpos_report_free(r);

        let r = run_check(l, &[1, -1], TotposMode::Pairs);
        assert!(totpos_report_passed(r));
        totpos_report_free(r);

        let r = run_check(l, &[], TotposMode::Negative);
        assert!(totpos_report_passed(r));
        totpos_report_free(r);
        totpos_lattice_free(l);
    }
}

#[test]
fn json_round_trip() {
    let src = CString::new(
        r#"{"shape":[3],"axes":[[0,0.5,2]],"values":[0.2,0.3,0.5],"interpretation":"pmf"}"#,
    )
    .unwrap();
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(
            totpos_lattice_from_json(src.as_ptr(), &mut l),
            TotposStatus::Ok
        );
        let mut json = ptr::null_mut();
        assert_eq!(totpos_lattice_to_json(l, &mut json), TotposStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(totpos_lattice_from_json(json, &mut back), TotposStatus::Ok);
        assert_eq!(totpos_lattice_len(back), 3);
        let r = run_check(back, &[1], TotposMode::Survival);
        assert!(totpos_report_passed(r));
        totpos_report_free(r);
        totpos_string_free(json);
        totpos_lattice_free(back);
        totpos_lattice_free(l);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut l = ptr::null_mut();
        let shape = [2usize];
        let bad = [1.0, -1.0];
        let st = totpos_lattice_new(1, shape.as_ptr(), ptr::null(), bad.as_ptr(), 0, &mut l);
        assert_eq!(st, TotposStatus::InvalidLattice);
        assert!(last_error().contains("values"));
        assert!(l.is_null());

        let ok = [1.0, 1.0];
        let st = totpos_lattice_new(1, shape.as_ptr(), ptr::null(), ok.as_ptr(), 9, &mut l);
        assert_eq!(st, TotposStatus::InvalidArgument);

        let st = totpos_lattice_new(1, shape.as_ptr(), ptr::null(), ptr::null(), 0, &mut l);
        assert_eq!(st, TotposStatus::NullPointer);

        let l = lattice(&[2, 2], &[1.0; 4]);
        let mut r = ptr::null_mut();
        let alpha = [1i8, 1, 1];
        let st = totpos_check(l, alpha.as_ptr(), 3, 0, 1e-12, false, &mut r);
        assert_eq!(st, TotposStatus::DimensionMismatch);
        let alpha = [1i8, 0];
        let st = totpos_check(l, alpha.as_ptr(), 2, 0, 1e-12, false, &mut r);
        assert_eq!(st, TotposStatus::InvalidDirection);
        let st = totpos_check(l, ptr::null(), 0, 42, 1e-12, false, &mut r);
        assert_eq!(st, TotposStatus::InvalidArgument);
        let st = totpos_check(l, ptr::null(), 0, 0, -1.0, false, &mut r);
        assert_eq!(st, TotposStatus::InvalidArgument);
        // Survival needs a pmf.
        let st = totpos_check(
            l,
            ptr::null(),
            0,
            TotposMode::Survival as u32,
            1e-12,
            false,
            &mut r,
        );
        assert_eq!(st, TotposStatus::InvalidLattice);
        assert!(r.is_null());
        totpos_lattice_free(l);

        // A success clears the message.
        let l = lattice(&[1], &[1.0]);
        assert!(totpos_last_error_message().is_null());
        totpos_lattice_free(l);

        let mut m = ptr::null_mut();
        let spec = CString::new("gamma:1").unwrap();
        assert_eq!(
            totpos_model_parse(spec.as_ptr(), &mut m),
            TotposStatus::InvalidModel
        );
        assert_eq!(
            totpos_model_parse(ptr::null(), &mut m),
            TotposStatus::NullPointer
        );
    }
}

#[test]
fn order_statistic_functions() {
    unsafe {
        let mut m = ptr::null_mut();
        let spec = CString::new("uniform:0,1").unwrap();
        assert_eq!(totpos_model_parse(spec.as_ptr(), &mut m), TotposStatus::Ok);
        let mut v = 0.0;
        assert_eq!(
            totpos_pair_density(m, 3, 1, 2, 0.2, 0.5, &mut v),
            TotposStatus::Ok
        );
        assert!((v - 6.0 * 0.5).abs() < 1e-12, "{v}");
        assert_eq!(
            totpos_pair_density(m, 3, 2, 2, 0.2, 0.5, &mut v),
            TotposStatus::InvalidRanks
        );
        totpos_model_free(m);

        let spec = CString::new("exp:1").unwrap();
        assert_eq!(totpos_model_parse(spec.as_ptr(), &mut m), TotposStatus::Ok);
        assert_eq!(
            totpos_gap_survival(m, 3, 2, 3, 0.7, 0.5, &mut v),
            TotposStatus::Ok
        );
        assert!((v - (-0.5f64).exp()).abs() < 1e-12, "{v}");
        totpos_model_free(m);

        assert_eq!(totpos_reg_inc_beta(0.5, 2.0, 2.0, &mut v), TotposStatus::Ok);
        assert!((v - 0.5).abs() < 1e-14);
        assert_eq!(
            totpos_reg_inc_beta(1.5, 2.0, 2.0, &mut v),
            TotposStatus::Domain
        );
        assert_eq!(
            totpos_reg_inc_beta(0.5, 2.0, 2.0, ptr::null_mut()),
            TotposStatus::NullPointer
        );
    }
}

#[test]
fn version_and_null_handles() {
    let v = unsafe { CStr::from_ptr(totpos_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    unsafe {
        totpos_lattice_free(ptr::null_mut());
        totpos_report_free(ptr::null_mut());
        totpos_model_free(ptr::null_mut());
        totpos_string_free(ptr::null_mut());
        assert_eq!(totpos_lattice_dim(ptr::null()), 0);
        assert!(!totpos_report_passed(ptr::null()));
        assert!(totpos_report_min_margin(ptr::null()).is_nan());
    }
}
