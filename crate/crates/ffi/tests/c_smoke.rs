//! Compiles and runs a small C program against the generated header and
//! the cdylib, proving the ABI and header agree.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "covtor.h"

int main(void) {
    const char *json =
        "{\"n\":1,\"ranks\":[1,1],\"boundaries\":[{\"rows\":1,\"cols\":1,"
        "\"entries\":[{\"row\":0,\"col\":0,\"terms\":["
        "{\"exp\":[1],\"coef\":1},{\"exp\":[0],\"coef\":-2}]}]}]}";
    CovtorComplex *cx = covtor_complex_parse_json(json);
    if (!cx) return 1;
    if (covtor_complex_validate(cx) != COVTOR_STATUS_OK) return 2;
    CovtorLattice *gamma = covtor_lattice_parse("diag:8", 1);
    if (!gamma) return 3;
    uint64_t girth = 0;
    if (covtor_lattice_girth(gamma, &girth) != COVTOR_STATUS_OK || girth != 8) return 4;
    char *report = covtor_report_json(cx, gamma, 0.0);
    if (!report) return 5;
    if (!strstr(report, "\"tau_h\":\"1/255\"")) {
        fprintf(stderr, "unexpected report: %s\n", report);
        return 6;
    }
    covtor_string_free(report);
    covtor_lattice_free(gamma);
    covtor_complex_free(cx);
    puts("c-abi ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    // Artifacts land next to the test binary's deps directory. `cargo
    // test` always produces the staticlib; the cdylib is there after a
    // plain build. Prefer the shared library, fall back to static.
    let mut lib_dir = std::env::current_exe().unwrap();
    lib_dir.pop(); // test binary
    if lib_dir.ends_with("deps") {
        lib_dir.pop();
    }
    let shared = lib_dir.join("libcovtor_ffi.so");
    let static_lib = lib_dir.join("libcovtor_ffi.a");
    if !shared.exists() && !static_lib.exists() {
        // Test-only rlib builds skip the C artifacts; produce them.
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "covtor-ffi"])
            .current_dir(&manifest)
            .status()
            .expect("cargo runs");
        assert!(status.success(), "building the C artifacts failed");
    }

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();

    let mut cc = Command::new("cc");
    cc.arg(&src).arg("-I").arg(&include_dir);
    if shared.exists() {
        cc.arg(shared.as_os_str())
            .arg(format!("-Wl,-rpath,{}", lib_dir.display()));
    } else {
        assert!(
            static_lib.exists(),
            "no covtor_ffi library under {}",
            lib_dir.display()
        );
        cc.arg(static_lib.as_os_str())
            .args(["-lpthread", "-ldl", "-lm"]);
    }
    let compile = cc.arg("-o").arg(&exe).output().expect("cc runs");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("smoke runs");
    assert!(
        run.status.success(),
        "exit {:?}, stderr: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c-abi ok"));
}
