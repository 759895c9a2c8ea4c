use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tractor_bgg_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe {
        tb_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(tb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn bgg_dims_and_small_buffers() {
    let labels = [1i64, 0, 0];
    let mut dims = [0u64; 4];
    let mut len = 0usize;
    let s = unsafe { tb_bgg_dims(3, labels.as_ptr(), dims.as_mut_ptr(), dims.len(), &mut len) };
    assert_eq!(s, TbStatus::Ok);
    assert_eq!(&dims[..len], &[1, 6, 8, 3]);

    let s = unsafe { tb_bgg_dims(3, labels.as_ptr(), dims.as_mut_ptr(), 2, &mut len) };
    assert_eq!(s, TbStatus::BufferTooSmall);
    assert_eq!(len, 4);
    assert!(last_error().contains("4"));
}

#[test]
fn invalid_input_and_nulls() {
    let labels = [1i64, -1];
    let mut dims = [0u64; 4];
    let mut len = 0usize;
    let s = unsafe { tb_bgg_dims(2, labels.as_ptr(), dims.as_mut_ptr(), 4, &mut len) };
    assert_eq!(s, TbStatus::InvalidInput);
    assert!(last_error().contains("dominant"));
    let s = unsafe { tb_bgg_dims(2, ptr::null(), dims.as_mut_ptr(), 4, &mut len) };
    assert_eq!(s, TbStatus::NullPointer);
    let name = CString::new("spinor").unwrap();
    let s = unsafe { tb_kostant_homology(name.as_ptr(), 3, dims.as_mut_ptr(), 4, &mut len) };
    assert_eq!(s, TbStatus::InvalidInput);
}

#[test]
fn kostant_through_the_abi() {
    let name = CString::new("dual").unwrap();
    let mut dims = [0u64; 4];
    let mut len = 0usize;
    let s = unsafe { tb_kostant_homology(name.as_ptr(), 3, dims.as_mut_ptr(), 4, &mut len) };
    assert_eq!(s, TbStatus::Ok, "{}", last_error());
    assert_eq!(dims, [1, 6, 8, 3]);
}

#[test]
fn group_handle_lifecycle() {
    let coeff = CString::new("symk:2").unwrap();
    let mut g: *mut TbGroup = ptr::null_mut();
    unsafe {
        assert_eq!(tb_group_octagon(coeff.as_ptr(), &mut g), TbStatus::Ok);
        assert!(!g.is_null());
        let mut d = 0usize;
        assert_eq!(tb_group_coefficient_dim(g, &mut d), TbStatus::Ok);
        assert_eq!(d, 5);
        let (mut h0, mut h1) = (9usize, 0usize);
        assert_eq!(tb_group_cohomology(g, 0.0, 0.0, &mut h0, &mut h1), TbStatus::Ok);
        assert_eq!((h0, h1), (0, 10));
        tb_group_free(g);
        tb_group_free(ptr::null_mut());
    }
}

#[test]
fn holonomy_of_a_generator() {
    let coeff = CString::new("defining").unwrap();
    let word = CString::new("1").unwrap();
    let mut g: *mut TbGroup = ptr::null_mut();
    let mut m = [0f64; 9];
    let mut len = 0usize;
    unsafe {
        assert_eq!(tb_group_octagon(coeff.as_ptr(), &mut g), TbStatus::Ok);
        assert_eq!(tb_group_holonomy(g, word.as_ptr(), 1e-2, m.as_mut_ptr(), 9, &mut len), TbStatus::Ok);
        assert_eq!(len, 9);
        let bad = CString::new("1,x").unwrap();
        assert_eq!(tb_group_holonomy(g, bad.as_ptr(), 1e-2, m.as_mut_ptr(), 9, &mut len), TbStatus::InvalidInput);
        assert_eq!(tb_group_holonomy(g, word.as_ptr(), 1.0, m.as_mut_ptr(), 9, &mut len), TbStatus::InvalidInput);
        tb_group_free(g);
    }
    // a hyperbolic generator: trace above 3, last diagonal entry above 1
    assert!(m[0] + m[4] + m[8] > 3.0);
    assert!(m[8] > 1.0);
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tractor_bgg.h")).unwrap();
    for name in ["tb_last_error", "tb_bgg_dims", "tb_group_octagon", "tb_group_free", "tb_group_holonomy"] {
        assert!(header.contains(name), "{name}");
    }
}
