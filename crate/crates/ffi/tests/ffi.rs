use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use pulse_tangle_ffi::*;

fn params(gamma_tau: f64, state: PtInitialState) -> *mut PtParams {
    let mut p = ptr::null_mut();
    let status = unsafe { pt_params_new(1000.0, 100, gamma_tau, state, &mut p) };
    assert_eq!(status, PtStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let msg = pt_last_error_message();
    assert!(!msg.is_null());
    unsafe { CStr::from_ptr(msg) }.to_string_lossy().into_owned()
}

#[test]
fn final_tangles_for_every_method() {
    let p = params(1e-3, PtInitialState::Excited);
    let mut values = Vec::new();
    for method in [PtMethod::Full, PtMethod::Lumped, PtMethod::Closed, PtMethod::Analytic, PtMethod::Bound] {
        let mut t = f64::NAN;
        assert_eq!(unsafe { pt_final_tangle(p, method, &mut t) }, PtStatus::Ok);
        values.push(t);
    }
    unsafe { pt_params_free(p) };
    assert!((values[3] - 1e-6).abs() < 1e-18);
    for &t in &values[..3] {
        assert!((t - 1e-6).abs() / 1e-6 < 0.02, "{values:?}");
    }
    assert!(values[4] >= values[0]);
}

#[test]
fn invalid_parameters_report_messages() {
    let mut p = ptr::null_mut();
    let status = unsafe { pt_params_new(1.0, 100, 0.1, PtInitialState::Ground, &mut p) };
    assert_eq!(status, PtStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(last_error().contains("area_bar"));

    let status = unsafe { pt_params_new_custom(1000.0, 10, 0.1, 1.0, 0.0, 1.0, 0.0, &mut p) };
    assert_eq!(status, PtStatus::InvalidArgument);

    let mut t = 0.0;
    assert_eq!(unsafe { pt_final_tangle(ptr::null(), PtMethod::Full, &mut t) }, PtStatus::NullPointer);
    let p = params(0.1, PtInitialState::Ground);
    assert_eq!(unsafe { pt_final_tangle(p, PtMethod::Full, ptr::null_mut()) }, PtStatus::NullPointer);
    assert_eq!(unsafe { pt_params_set_substeps(p, 0) }, PtStatus::InvalidArgument);
    assert_eq!(unsafe { pt_params_set_substeps(p, 8) }, PtStatus::Ok);
    unsafe { pt_params_free(p) };
    unsafe { pt_params_free(ptr::null_mut()) };
}

#[test]
fn series_fills_buffer() {
    let p = params(0.5, PtInitialState::PlusY);
    let mut written = 0;
    assert_eq!(
        unsafe { pt_tangle_series(p, PtMethod::Full, ptr::null_mut(), 0, &mut written) },
        PtStatus::BufferTooSmall
    );
    assert_eq!(written, 100);
    let mut buf = vec![0.0; written];
    assert_eq!(unsafe { pt_tangle_series(p, PtMethod::Full, buf.as_mut_ptr(), buf.len(), &mut written) }, PtStatus::Ok);
    let mut last = 0.0;
    assert_eq!(unsafe { pt_final_tangle(p, PtMethod::Full, &mut last) }, PtStatus::Ok);
    assert_eq!(buf[99], last);
    assert_eq!(
        unsafe { pt_tangle_series(p, PtMethod::Bound, buf.as_mut_ptr(), buf.len(), &mut written) },
        PtStatus::InvalidArgument
    );
    unsafe { pt_params_free(p) };
}

#[test]
fn bound_and_closure() {
    let p = params(1.0, PtInitialState::MinusY);
    let (mut bound, mut defect) = (0.0, 1.0);
    assert_eq!(unsafe { pt_upper_bound(p, &mut bound, &mut defect) }, PtStatus::Ok);
    assert!(defect.abs() < 1e-8);
    assert!(bound > 0.0 && bound < 1.0);
    assert_eq!(unsafe { pt_upper_bound(p, &mut bound, ptr::null_mut()) }, PtStatus::Ok);
    unsafe { pt_params_free(p) };
}

#[test]
fn raw_state_measures() {
    let h = 0.5;
    let mut re = [0.0; 16];
    let im = [0.0; 16];
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        re[4 * i + j] = h;
    }
    let mut t = 0.0;
    assert_eq!(unsafe { pt_wootters_tangle(re.as_ptr(), im.as_ptr(), &mut t) }, PtStatus::Ok);
    assert!((t - 1.0).abs() < 1e-10);

    re[1] = 0.3;
    assert_eq!(unsafe { pt_wootters_tangle(re.as_ptr(), im.as_ptr(), &mut t) }, PtStatus::InvalidArgument);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi_re = [s, 0.0, 0.0, 0.0, s, 0.0];
    let psi_im = [0.0; 6];
    assert_eq!(unsafe { pt_pure_tangle(psi_re.as_ptr(), psi_im.as_ptr(), 3, &mut t) }, PtStatus::Ok);
    assert!((t - 1.0).abs() < 1e-12);

    assert_eq!(unsafe { pt_closed_tangle_analytic(PtInitialState::PlusY, 1e-5, &mut t) }, PtStatus::Ok);
    assert!((t - 2.678524e-5).abs() < 1e-10);
    assert_eq!(unsafe { pt_closed_tangle_analytic(PtInitialState::PlusY, -1.0, &mut t) }, PtStatus::InvalidArgument);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(pt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/pulse_tangle.h")).unwrap();
    for symbol in [
        "typedef struct PtParams PtParams;",
        "PT_STATUS_OK = 0",
        "PT_STATUS_BUFFER_TOO_SMALL",
        "PT_METHOD_BOUND",
        "PT_INITIAL_STATE_MINUS_Y",
        "pt_params_new(",
        "pt_params_new_custom(",
        "pt_params_set_substeps(",
        "pt_params_free(",
        "pt_final_tangle(",
        "pt_tangle_series(",
        "pt_upper_bound(",
        "pt_wootters_tangle(",
        "pt_pure_tangle(",
        "pt_closed_tangle_analytic(",
        "pt_last_error_message(",
        "pt_version(",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "pulse_tangle.h"

int main(void) {
    PtParams *p = NULL;
    if (pt_params_new(1000.0, 50, 1e-3, PT_INITIAL_STATE_EXCITED, &p) != PT_STATUS_OK) return 1;
    double t = 0.0;
    if (pt_final_tangle(p, PT_METHOD_CLOSED, &t) != PT_STATUS_OK) return 2;
    pt_params_free(p);
    if (fabs(t - 1e-6) > 1e-8) return 3;
    if (pt_params_new(0.5, 50, 1e-3, PT_INITIAL_STATE_EXCITED, &p) != PT_STATUS_INVALID_ARGUMENT) return 4;
    if (pt_last_error_message() == NULL) return 5;
    printf("%.6e\n", t);
    return 0;
}
"#;

/// Compiles a C client against the generated header and the static library.
/// Skipped when no C compiler or static archive is available.
#[test]
fn c_client_links_and_runs() {
    let target_dir = Path::new(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().to_path_buf();
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let archive = target_dir.join(profile).join("libpulse_tangle_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C toolchain or {} missing", archive.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let exe = dir.path().join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C client exited with {:?}", out.status.code());
    let printed: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((printed - 1e-6).abs() < 1e-8, "{printed}");
}
