use std::ffi::{c_char, CString};
use std::ptr;

use multislice_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; ms_last_error_length() + 1];
    assert_eq!(unsafe { ms_last_error_message(buf.as_mut_ptr(), buf.len()) }, MsStatus::Ok);
    let bytes: Vec<u8> = buf.iter().take_while(|&&c| c != 0).map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn spec_lifecycle() {
    let kappa = [2usize, 1, 1];
    let values = [0.0, 1.0, 2.0];
    let mut spec = ptr::null_mut();
    unsafe {
        assert_eq!(ms_spec_new(kappa.as_ptr(), values.as_ptr(), 3, &mut spec), MsStatus::Ok);
        assert_eq!(ms_spec_total(spec), 4);
        let mut card = 0u64;
        assert_eq!(ms_spec_cardinality(spec, &mut card), MsStatus::Ok);
        assert_eq!(card, 12);
        let mut a = [0.0; 4];
        let mut b = [0.0; 4];
        assert_eq!(ms_sample(spec, 9, 3, a.as_mut_ptr(), 4), MsStatus::Ok);
        assert_eq!(ms_sample(spec, 9, 3, b.as_mut_ptr(), 4), MsStatus::Ok);
        assert_eq!(a, b);
        let mut sorted = a.to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, [0.0, 0.0, 1.0, 2.0]);
        ms_spec_free(spec);
        ms_spec_free(ptr::null_mut());
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let kappa = [2usize, 0];
    let values = [0.0, 1.0];
    let mut spec = ptr::null_mut();
    unsafe {
        assert_eq!(ms_spec_new(kappa.as_ptr(), values.as_ptr(), 2, &mut spec), MsStatus::InvalidSpec);
        assert!(spec.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ms_spec_new(ptr::null(), values.as_ptr(), 2, &mut spec), MsStatus::NullPointer);
        assert!(last_error().contains("kappa"));
        let mut tiny = [0 as c_char; 2];
        assert_eq!(ms_last_error_message(tiny.as_mut_ptr(), 2), MsStatus::BufferTooSmall);
        let big = [1000usize, 1000];
        assert_eq!(ms_spec_new(big.as_ptr(), values.as_ptr(), 2, &mut spec), MsStatus::Ok);
        let mut card = 0u64;
        assert_eq!(ms_spec_cardinality(spec, &mut card), MsStatus::EnumerationTooLarge);
        ms_spec_free(spec);
    }
}

#[test]
fn convex_distance_and_bounds() {
    let members = [0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
    let omega = [0.0, 0.0, 1.0];
    let mut set = ptr::null_mut();
    unsafe {
        assert_eq!(ms_set_new(members.as_ptr(), 2, 3, &mut set), MsStatus::Ok);
        let (mut d, mut gap) = (0.0, 0.0);
        assert_eq!(ms_convex_distance(set, omega.as_ptr(), 3, 1e-9, &mut d, &mut gap), MsStatus::Ok);
        assert!((d - 1.5f64.sqrt()).abs() < 1e-9 && gap <= 1e-9);
        assert_eq!(ms_convex_distance(set, omega.as_ptr(), 2, 1e-9, &mut d, &mut gap), MsStatus::ShapeMismatch);
        ms_set_free(set);

        let text = CString::new("id = \"serfling\"\nn = 5\ntotal = 20\ndiam = 1.0").unwrap();
        let mut bound = ptr::null_mut();
        assert_eq!(ms_bound_from_toml(text.as_ptr(), &mut bound), MsStatus::Ok);
        let mut b = 0.0;
        assert_eq!(ms_bound_evaluate(bound, 0.3, &mut b), MsStatus::Ok);
        let expected = (-5.0f64 * 0.09 / (4.0 * (1.0 - 5.0 / 20.0))).exp();
        assert!((b - expected).abs() < 1e-12, "{b} vs {expected}");
        assert_eq!(ms_bound_evaluate(bound, -1.0, &mut b), MsStatus::Domain);
        ms_bound_free(bound);

        let unknown = CString::new("id = \"nope\"").unwrap();
        assert_eq!(ms_bound_from_toml(unknown.as_ptr(), &mut bound), MsStatus::Config);

        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(ms_clopper_pearson(0, 100, 1e-3, &mut lo, &mut hi), MsStatus::Ok);
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 5e-4f64.powf(0.01))).abs() < 1e-9);
    }
}

#[test]
fn tail_report_rows() {
    let config = CString::new(
        "[spec]\nkappa = [2, 2]\nvalues = [0.0, 1.0]\n\
         [statistic]\nid = \"sample-mean\"\nn = 4\n\
         [bound]\nid = \"serfling\"\n\
         [run]\nt_grid = [0.1, 0.2]\nsamples = 1000\nseed = 1\ncentering = \"exact-expectation\"\n",
    )
    .unwrap();
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(ms_tail_run(config.as_ptr(), &mut report), MsStatus::Ok);
        assert_eq!(ms_tail_report_len(report), 2);
        let mut row = std::mem::zeroed::<MsTailRow>();
        assert_eq!(ms_tail_report_row(report, 1, &mut row), MsStatus::Ok);
        assert_eq!((row.t, row.p_hat, row.verdict), (0.2, 0.0, MsVerdict::Dominated));
        assert_eq!(ms_tail_report_row(report, 2, &mut row), MsStatus::IndexOutOfRange);
        ms_tail_report_free(report);
        let bad = CString::new("[run]").unwrap();
        assert_eq!(ms_tail_run(bad.as_ptr(), &mut report), MsStatus::Config);
    }
}
