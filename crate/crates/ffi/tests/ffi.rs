use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mvweibull::ModelParams;
use mvweibull_ffi::*;

fn last_error() -> String {
    let p = mvw_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { mvw_string_free(p) };
    s
}

fn model(alpha: f64, scales: &[f64], shapes: &[f64]) -> *mut MvwModel {
    let mut m = ptr::null_mut();
    let s = unsafe { mvw_model_new(alpha, scales.as_ptr(), shapes.as_ptr(), scales.len(), &mut m) };
    assert_eq!(s, MvwStatus::Ok);
    m
}

#[test]
fn evaluations_match_the_library() {
    let (scales, shapes) = ([1.0, 2.0, 3.0], [1.5, 0.8, 2.0]);
    let m = model(0.6, &scales, &shapes);
    let p = ModelParams::new(0.6, scales.to_vec(), shapes.to_vec()).unwrap();
    let x = [0.7, 1.1, 2.4];
    let mut v = 0.0;
    unsafe {
        assert_eq!(mvw_model_dim(m), 3);
        assert_eq!(mvw_survival(m, x.as_ptr(), 3, &mut v), MvwStatus::Ok);
        assert_eq!(v, p.survival(&x).unwrap());
        assert_eq!(mvw_pdf(m, x.as_ptr(), 3, &mut v), MvwStatus::Ok);
        assert_eq!(v, p.pdf(&x).unwrap());
        assert_eq!(mvw_log_pdf(m, x.as_ptr(), 3, &mut v), MvwStatus::Ok);
        assert_eq!(v, p.log_pdf(&x).unwrap());
        let obs = [0usize, 2];
        assert_eq!(
            mvw_mixed_partial_survival(m, x.as_ptr(), 3, obs.as_ptr(), 2, &mut v),
            MvwStatus::Ok
        );
        assert_eq!(v, p.mixed_partial_survival(&x, &obs).unwrap());
        let e = [1.0, 0.0, 2.0];
        assert_eq!(mvw_moment(m, e.as_ptr(), 3, &mut v), MvwStatus::Ok);
        assert!(v > 0.0);
        assert_eq!(mvw_correlation(m, 0, 1, &mut v), MvwStatus::Ok);
        assert!(v > 0.0 && v < 1.0);
        mvw_model_free(m);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut m = ptr::null_mut();
    let one = [1.0];
    let s = unsafe { mvw_model_new(1.5, one.as_ptr(), one.as_ptr(), 1, &mut m) };
    assert_eq!(s, MvwStatus::Domain);
    assert!(m.is_null());
    assert!(last_error().contains("alpha"));

    let s = unsafe { mvw_model_new(0.5, ptr::null(), one.as_ptr(), 1, &mut m) };
    assert_eq!(s, MvwStatus::NullPointer);

    let m = model(0.5, &[1.0, 1.0], &[1.0, 1.0]);
    let x = [1.0, 1.0];
    unsafe {
        assert_eq!(
            mvw_survival(m, x.as_ptr(), 2, ptr::null_mut()),
            MvwStatus::NullPointer
        );
        let mut v = 0.0;
        assert_eq!(mvw_survival(m, x.as_ptr(), 1, &mut v), MvwStatus::Domain);
        assert_eq!(mvw_correlation(m, 0, 5, &mut v), MvwStatus::Domain);
        let zero = [0.0, 1.0];
        assert_eq!(mvw_pdf(m, zero.as_ptr(), 2, &mut v), MvwStatus::Domain);
        mvw_model_free(m);
        mvw_model_free(ptr::null_mut());
    }
}

#[test]
fn sampling_is_seeded() {
    let m = model(0.7, &[1.0, 2.0], &[1.5, 2.5]);
    let draw = |seed| unsafe {
        let mut rng = ptr::null_mut();
        assert_eq!(mvw_rng_new(seed, 3, &mut rng), MvwStatus::Ok);
        let mut out = vec![0.0; 20];
        assert_eq!(mvw_sample(m, rng, 10, out.as_mut_ptr()), MvwStatus::Ok);
        mvw_rng_free(rng);
        out
    };
    let a = draw(1);
    assert_eq!(a, draw(1));
    assert_ne!(a, draw(2));
    assert!(a.iter().all(|v| *v > 0.0));
    unsafe { mvw_model_free(m) };
}

#[test]
fn fit_rats_through_handles() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(mvw_dataset_rats(&mut ds), MvwStatus::Ok);
        assert_eq!(mvw_dataset_len(ds), 50);
        let mut r = ptr::null_mut();
        assert_eq!(mvw_fit(ds, &mut r), MvwStatus::Ok);
        assert_eq!(mvw_fit_result_converged(r), 1);
        assert!((mvw_fit_result_log_likelihood(r) + 240.151).abs() < 1e-2);
        let k = mvw_fit_result_estimate_count(r);
        assert_eq!(k, 7);
        let mut est = vec![0.0; k];
        assert_eq!(mvw_fit_result_estimates(r, est.as_mut_ptr(), k), MvwStatus::Ok);
        assert!((est[0] - 0.9).abs() < 0.02);
        let mut se = vec![0.0; mvw_fit_result_parameter_count(r)];
        assert_eq!(
            mvw_fit_result_standard_errors(r, se.as_mut_ptr(), se.len()),
            MvwStatus::Ok
        );
        assert!((se[0] - 0.101).abs() < 0.01);
        let mut short = [0.0; 2];
        assert_eq!(
            mvw_fit_result_estimates(r, short.as_mut_ptr(), 2),
            MvwStatus::Schema
        );
        let mut json = ptr::null_mut();
        assert_eq!(mvw_fit_result_to_json(r, &mut json), MvwStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        mvw_string_free(json);
        let parsed: mvweibull::FitResult = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.parameter_names.len(), 7);
        mvw_fit_result_free(r);
        mvw_dataset_free(ds);
    }
}

#[test]
fn dataset_push_validates() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(mvw_dataset_new(2, &mut ds), MvwStatus::Ok);
        let t = [1.0, 2.0];
        let c = [0u8, 1];
        assert_eq!(mvw_dataset_push(ds, t.as_ptr(), c.as_ptr(), 2), MvwStatus::Ok);
        assert_eq!(mvw_dataset_push(ds, t.as_ptr(), c.as_ptr(), 1), MvwStatus::Schema);
        let bad = [-1.0, 2.0];
        assert_eq!(
            mvw_dataset_push(ds, bad.as_ptr(), c.as_ptr(), 2),
            MvwStatus::Domain
        );
        assert_eq!(mvw_dataset_len(ds), 1);
        mvw_dataset_free(ds);
        assert_eq!(mvw_dataset_new(0, &mut ds), MvwStatus::Domain);
    }
}

#[test]
fn empty_dataset_fit_is_schema_error() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(mvw_dataset_new(2, &mut ds), MvwStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(mvw_fit(ds, &mut r), MvwStatus::Schema);
        assert!(r.is_null());
        mvw_dataset_free(ds);
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/mvweibull.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| {
            l.trim_start()
                .strip_prefix("pub unsafe extern \"C\" fn ")
                .or_else(|| l.trim_start().strip_prefix("pub extern \"C\" fn "))
        })
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 25, "{exported:?}");
    for name in exported {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in [
        "typedef struct MvwModel MvwModel",
        "typedef struct MvwRng MvwRng",
        "MVW_STATUS_OK = 0",
    ] {
        assert!(text.contains(ty), "{ty}");
    }
}

/// Compiles and runs a small C program against the header and the static
/// library when a C compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let target_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let archive = target_dir.join("libmvweibull_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !archive.exists() {
        eprintln!("skipping: no C compiler or {} not built", archive.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("mvw-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "mvweibull.h"
int main(void) {
    double scales[2] = {1.0, 1.0}, shapes[2] = {1.0, 1.0}, x[2] = {1.0, 1.0}, s = 0.0;
    MvwModel *m = NULL;
    if (mvw_model_new(0.5, scales, shapes, 2, &m) != MVW_STATUS_OK) return 1;
    if (mvw_survival(m, x, 2, &s) != MVW_STATUS_OK) return 2;
    mvw_model_free(m);
    if (mvw_model_new(2.0, scales, shapes, 2, &m) != MVW_STATUS_DOMAIN) return 3;
    char *msg = mvw_last_error_message();
    if (msg == NULL) return 4;
    mvw_string_free(msg);
    printf("%.17g\n", s);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let s: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((s - (-(2f64).sqrt()).exp()).abs() < 1e-15);
    let _ = std::fs::remove_dir_all(&dir);
}
