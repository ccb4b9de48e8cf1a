use std::ffi::{CStr, CString};
use std::ptr;

use topocent_ffi::*;

fn parse(text: &str) -> *mut TcGraph {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { tc_graph_parse(text.as_ptr(), &mut g) }, TcStatus::Ok);
    g
}

fn last_error() -> Option<String> {
    let p = tc_last_error_message();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { tc_string_free(p) };
    Some(s)
}

#[test]
fn path_three_round_trip() {
    let g = parse("0 1\n1 2\n");
    let mut n = 0;
    assert_eq!(unsafe { tc_graph_node_count(g, &mut n) }, TcStatus::Ok);
    assert_eq!(n, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_spectral_build(g, &mut s) }, TcStatus::Ok);

    let mut cstar = [0.0; 3];
    assert_eq!(unsafe { tc_spectral_cstar(s, cstar.as_mut_ptr(), 3) }, TcStatus::Ok);
    for (got, want) in cstar.iter().zip([1.8, 4.5, 1.8]) {
        assert!((got - want).abs() < 1e-12);
    }
    let mut diag = [0.0; 3];
    assert_eq!(unsafe { tc_spectral_lplus_diag(s, diag.as_mut_ptr(), 3) }, TcStatus::Ok);
    assert!((diag[1] - 2.0 / 9.0).abs() < 1e-12);

    let (mut k, mut kstar) = (0.0, 0.0);
    assert_eq!(unsafe { tc_spectral_kirchhoff(s, &mut k, &mut kstar) }, TcStatus::Ok);
    assert!((k - 4.0 / 3.0).abs() < 1e-12 && (kstar - 0.75).abs() < 1e-12);

    let mut r = 0.0;
    assert_eq!(unsafe { tc_spectral_effective_resistance(s, 0, 2, &mut r) }, TcStatus::Ok);
    assert!((r - 2.0).abs() < 1e-12);

    let mut h = 0.0;
    assert_eq!(unsafe { tc_hitting_time(g, 0, 2, &mut h) }, TcStatus::Ok);
    assert!((h - 4.0).abs() < 1e-12);
    assert_eq!(unsafe { tc_hitting_time(g, 2, 1, &mut h) }, TcStatus::Ok);
    assert!((h - 1.0).abs() < 1e-12);

    let (mut mean, mut se) = (0.0, 0.0);
    assert_eq!(unsafe { tc_hitting_time_mc(g, 0, 2, 20_000, 7, &mut mean, &mut se) }, TcStatus::Ok);
    assert!((mean - 4.0).abs() <= 4.0 * se);

    unsafe {
        tc_spectral_free(s);
        tc_graph_free(g);
    }
}

#[test]
fn weighted_from_edges() {
    let (us, vs, ws) = ([0usize, 1], [1usize, 2], [2.0, 2.0]);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { tc_graph_from_edges(3, us.as_ptr(), vs.as_ptr(), ws.as_ptr(), 2, &mut g) },
        TcStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_spectral_build(g, &mut s) }, TcStatus::Ok);
    let mut r = 0.0;
    assert_eq!(unsafe { tc_spectral_effective_resistance(s, 0, 2, &mut r) }, TcStatus::Ok);
    assert!((r - 1.0).abs() < 1e-12);
    unsafe {
        tc_spectral_free(s);
        tc_graph_free(g);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let mut g = ptr::null_mut();
    let bad = CString::new("0 1\n1\n").unwrap();
    assert_eq!(unsafe { tc_graph_parse(bad.as_ptr(), &mut g) }, TcStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().unwrap().contains("line 2"));

    let g = parse("0 1\n2 3\n");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_spectral_build(g, &mut s) }, TcStatus::Disconnected);
    assert!(last_error().is_some());

    let mut h = 0.0;
    assert_eq!(unsafe { tc_hitting_time(g, 0, 9, &mut h) }, TcStatus::NodeOutOfRange);
    unsafe { tc_graph_free(g) };

    assert_eq!(unsafe { tc_graph_node_count(ptr::null(), &mut 0) }, TcStatus::NullPointer);
    assert_eq!(unsafe { tc_graph_parse(ptr::null(), &mut ptr::null_mut()) }, TcStatus::NullPointer);

    let (us, vs) = ([0usize], [0usize]);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { tc_graph_from_edges(2, us.as_ptr(), vs.as_ptr(), ptr::null(), 1, &mut g) },
        TcStatus::InvalidGraph
    );
}

#[test]
fn buffer_size_is_checked() {
    let g = parse("0 1\n1 2\n");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_spectral_build(g, &mut s) }, TcStatus::Ok);
    let mut small = [0.0; 2];
    assert_eq!(unsafe { tc_spectral_cstar(s, small.as_mut_ptr(), 2) }, TcStatus::BufferSize);
    unsafe {
        tc_spectral_free(s);
        tc_graph_free(g);
    }
}

#[test]
fn success_clears_previous_error() {
    let mut g = ptr::null_mut();
    let bad = CString::new("0 0\n").unwrap();
    assert_ne!(unsafe { tc_graph_parse(bad.as_ptr(), &mut g) }, TcStatus::Ok);
    let g = parse("0 1\n");
    assert!(last_error().is_none());
    unsafe { tc_graph_free(g) };
    unsafe {
        tc_graph_free(ptr::null_mut());
        tc_spectral_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(tc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
