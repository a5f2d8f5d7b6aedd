//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "rfgrowth.h"

int main(void) {
    RfgContext *ctx = rfg_context_new_toy();
    if (!ctx) return 10;
    bool t = false;
    if (rfg_is_trivial(ctx, "bbb", &t) != RFG_STATUS_OK || !t) return 11;
    if (rfg_is_trivial(ctx, "ab", &t) != RFG_STATUS_OK || t) return 12;
    if (rfg_is_trivial(ctx, "x", &t) != RFG_STATUS_INVALID_WORD) return 13;
    RfgSequenceRow row;
    if (rfg_sequence_row(ctx, 1, &row) != RFG_STATUS_OK || row.r != 2) return 14;
    char *w = NULL;
    if (rfg_witness(ctx, 1, &w) != RFG_STATUS_OK || strcmp(w, "BaaBAAbaabAA") != 0) return 15;
    rfg_string_free(w);
    rfg_context_free(ctx);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("librfgrowth_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let dir = tempdir();
    let src = dir.join("smoke.c");
    let exe = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

fn tempdir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("rfgrowth-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
