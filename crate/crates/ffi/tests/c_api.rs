use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use nonlocal_core::optim::{maximize_cglmp, NelderMeadConfig};
use nonlocal_core::states::maximally_entangled;
use nonlocal_ffi::*;

const OPTIMUM: [f64; 4] = [0.0, 0.5, 0.25, -0.25];

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let n = unsafe { nl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn new_state(f: impl FnOnce(*mut *mut NlState) -> NlStatus) -> *mut NlState {
    let mut s = ptr::null_mut();
    assert_eq!(f(&mut s), NlStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn known_optimum_through_handles() {
    let s = new_state(|o| unsafe { nl_state_maximally_entangled(4, o) });
    let mut v = 0.0;
    assert_eq!(unsafe { nl_cglmp(s, 4, OPTIMUM.as_ptr(), &mut v) }, NlStatus::Ok);
    assert!((v - 2.8962).abs() < 5e-4);
    let mut chsh = 0.0;
    assert_eq!(unsafe { nl_chsh(s, &mut chsh) }, NlStatus::Ok);
    assert!((chsh - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(unsafe { nl_state_dim(s) }, 16);
    unsafe { nl_state_free(s) };
}

#[test]
fn noisy_state_scales_linearly() {
    let s = new_state(|o| unsafe { nl_state_noisy(0.5, 4, o) });
    let mut v = 0.0;
    assert_eq!(unsafe { nl_cglmp(s, 4, OPTIMUM.as_ptr(), &mut v) }, NlStatus::Ok);
    assert!((v - 0.5 * 2.896_243_218_458_7).abs() < 1e-9);
    unsafe { nl_state_free(s) };
}

#[test]
fn maximize_report_round_trip() {
    let theta = [
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
    ];
    let gamma = [0.0; 3];
    let s = new_state(|o| unsafe { nl_state_pure(theta.as_ptr(), gamma.as_ptr(), o) });
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { nl_maximize(s, 4, 20, 2017, 0.0, &mut r) }, NlStatus::Ok);
    let best = unsafe { nl_report_value(r) };
    let rho = maximally_entangled(4).to_density();
    let direct = maximize_cglmp(&rho, 4, 20, 2017, &NelderMeadConfig::default()).unwrap();
    assert_eq!(best.to_bits(), direct.best_value.to_bits());
    assert!((2.8957..=2.8967).contains(&best), "{best}");
    let mut phases = [0.0; 4];
    assert_eq!(unsafe { nl_report_phases(r, phases.as_mut_ptr()) }, NlStatus::Ok);
    assert!(phases.iter().all(|p| (0.0..4.0).contains(p)));
    let mut again = 0.0;
    assert_eq!(unsafe { nl_cglmp(s, 4, phases.as_ptr(), &mut again) }, NlStatus::Ok);
    assert!((again - best).abs() < 1e-9);
    unsafe {
        nl_report_free(r);
        nl_state_free(s);
    }
}

#[test]
fn entanglement_of_basis_and_maximal_states() {
    let (mut p, mut m) = (0.0, 0.0);
    let zero = [0.0; 3];
    assert_eq!(
        unsafe { nl_entanglement(zero.as_ptr(), zero.as_ptr(), &mut p, &mut m) },
        NlStatus::Ok
    );
    assert!(m.abs() < 1e-9);
    let theta = [
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
    ];
    assert_eq!(
        unsafe { nl_entanglement(theta.as_ptr(), zero.as_ptr(), &mut p, &mut m) },
        NlStatus::Ok
    );
    assert!((m - 1.0).abs() < 1e-9);
}

#[test]
fn errors_carry_status_and_message() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { nl_state_noisy(1.5, 4, &mut s) }, NlStatus::InvalidInput);
    assert!(s.is_null());
    assert!(!last_error().is_empty());

    let bad = [0.5, 0.5, 0.5, 0.5];
    assert_eq!(unsafe { nl_state_mixed(bad.as_ptr(), &mut s) }, NlStatus::InvalidInput);

    assert_eq!(unsafe { nl_state_mixed(ptr::null(), &mut s) }, NlStatus::NullPointer);
    assert!(last_error().contains("null"));

    let mut v = 0.0;
    assert_eq!(unsafe { nl_chsh(ptr::null(), &mut v) }, NlStatus::NullPointer);

    let s3 = new_state(|o| unsafe { nl_state_maximally_entangled(3, o) });
    assert_eq!(unsafe { nl_chsh(s3, &mut v) }, NlStatus::DimensionMismatch);
    let nan = [f64::NAN, 0.0, 0.0, 0.0];
    assert_eq!(unsafe { nl_cglmp(s3, 3, nan.as_ptr(), &mut v) }, NlStatus::InvalidInput);
    unsafe { nl_state_free(s3) };

    assert!(unsafe { nl_report_value(ptr::null()) }.is_nan());
    assert!(!unsafe { nl_report_converged(ptr::null()) });
    unsafe {
        nl_state_free(ptr::null_mut());
        nl_report_free(ptr::null_mut());
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(nl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nonlocal.h");
    assert!(header.exists());
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-xc", "-std=c99", "-Wall", "-Werror"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler available, skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
