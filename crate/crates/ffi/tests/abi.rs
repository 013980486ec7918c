use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use cyclic_hw_ffi::*;

fn parse(s: &str) -> *mut CyclicHwDatum {
    let c = CString::new(s).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_datum_parse(c.as_ptr(), &mut d) }, CyclicHwStatus::Ok);
    d
}

fn last_error() -> String {
    let p = cyclic_hw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn datum_roundtrip() {
    let d = parse("7:4:3,1,1,2");
    let mut g = 0u64;
    assert_eq!(unsafe { cyclic_hw_datum_genus(d, &mut g) }, CyclicHwStatus::Ok);
    assert_eq!(g, 6);
    let mut need = 0usize;
    let st = unsafe { cyclic_hw_datum_signature(d, ptr::null_mut(), 0, &mut need) };
    assert_eq!(st, CyclicHwStatus::BufferTooSmall);
    let mut buf = vec![0u64; need];
    assert_eq!(unsafe { cyclic_hw_datum_signature(d, buf.as_mut_ptr(), buf.len(), &mut need) }, CyclicHwStatus::Ok);
    assert_eq!(buf.iter().sum::<u64>(), g);
    unsafe { cyclic_hw_datum_free(d) };
}

#[test]
fn specialized_entry_and_strings() {
    let d = parse("7:4:3,1,1,2");
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_phi_specialized(d, 13, 2, 1, 1, &mut f) }, CyclicHwStatus::Ok);
    let mut deg = 0i64;
    assert_eq!(unsafe { cyclic_hw_poly_degree(f, &mut deg) }, CyclicHwStatus::Ok);
    assert_eq!(deg, 1);
    let mut need = 0usize;
    let mut buf = [0u64; 4];
    assert_eq!(unsafe { cyclic_hw_poly_coeffs(f, buf.as_mut_ptr(), 4, &mut need) }, CyclicHwStatus::Ok);
    assert_eq!(&buf[..need], &[3, 3]);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_poly_to_string(f, &mut s) }, CyclicHwStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "3 + 3*t");
    unsafe {
        cyclic_hw_string_free(s);
        cyclic_hw_poly_free(f);
    }
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_census_json(d, 13, &mut json) }, CyclicHwStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(v["p"], 13);
    unsafe {
        cyclic_hw_string_free(json);
        cyclic_hw_datum_free(d);
    }
}

#[test]
fn errors_and_nulls() {
    let bad = CString::new("7:4:3,1,1,3").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_datum_parse(bad.as_ptr(), &mut d) }, CyclicHwStatus::InvalidInput);
    assert!(d.is_null());
    assert!(last_error().starts_with("sum_nonzero"));
    assert_eq!(unsafe { cyclic_hw_datum_parse(ptr::null(), &mut d) }, CyclicHwStatus::NullPointer);
    let mut g = 0u64;
    assert_eq!(unsafe { cyclic_hw_datum_genus(ptr::null(), &mut g) }, CyclicHwStatus::NullPointer);

    let d = parse("7:4:3,1,1,2");
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { cyclic_hw_phi_specialized(d, 13, 2, 5, 1, &mut f) }, CyclicHwStatus::IndexOutOfRange);
    assert_eq!(unsafe { cyclic_hw_psi_specialized(d, 29, 2, 1, 1, &mut f) }, CyclicHwStatus::HypothesisNotMet);
    assert_eq!(unsafe { cyclic_hw_phi_specialized(d, 15, 2, 1, 1, &mut f) }, CyclicHwStatus::InvalidInput);
    assert!(f.is_null());
    unsafe { cyclic_hw_datum_free(d) };
    assert_eq!(unsafe { cyclic_hw_datum_genus(ptr::null(), &mut g) }, CyclicHwStatus::NullPointer);
}

#[test]
fn header_is_valid_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include").join("cyclic_hw.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["cyclic_hw_datum_parse", "cyclic_hw_phi_specialized", "cyclic_hw_census_json", "CYCLIC_HW_STATUS_OK"] {
        assert!(text.contains(name), "{name}");
    }
    let out = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).output();
    if let Ok(out) = out {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
