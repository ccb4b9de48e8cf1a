//! Compiles and runs a C program against the generated header and the
//! static library. Skipped when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "topocent.h"

int main(void) {
    TcGraph *g = NULL;
    TcSpectral *s = NULL;
    double cstar[4], k, kstar;
    if (tc_graph_parse("0 1\n0 2\n0 3\n", &g) != TC_STATUS_OK) return 1;
    if (tc_spectral_build(g, &s) != TC_STATUS_OK) return 2;
    if (tc_spectral_cstar(s, cstar, 4) != TC_STATUS_OK) return 3;
    if (tc_spectral_kirchhoff(s, &k, &kstar) != TC_STATUS_OK) return 4;
    if (fabs(cstar[0] - 16.0 / 3.0) > 1e-9 || fabs(k - 9.0 / 4.0) > 1e-9) return 5;
    if (tc_spectral_cstar(s, cstar, 3) != TC_STATUS_BUFFER_SIZE) return 6;
    char *msg = tc_last_error_message();
    if (msg == NULL) return 7;
    tc_string_free(msg);
    tc_spectral_free(s);
    tc_graph_free(g);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libtopocent_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
