//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "qsp_braid.h"

int main(void) {
    QspbContext *ctx = NULL;
    if (qspb_context_new(4, 2, false, &ctx) != QSPB_STATUS_INADMISSIBLE_DATUM) return 10;
    if (qspb_context_new(5, 2, false, &ctx) != QSPB_STATUS_OK) return 11;
    QspbExpr *e = NULL;
    if (qspb_parse(ctx, "ct[r](ctinv[r](B[r-1])) - B[r-1]", &e) != QSPB_STATUS_OK) return 12;
    bool zero = false;
    if (qspb_expr_is_zero(ctx, e, &zero) != QSPB_STATUS_OK || !zero) return 13;
    char *text = qspb_expr_render(e);
    if (text == NULL) return 14;
    qspb_string_free(text);
    qspb_expr_free(e);
    if (qspb_parse(ctx, "E[1] +", &e) != QSPB_STATUS_PARSE_ERROR) return 15;
    if (strstr(qspb_last_error(), "position") == NULL) return 16;
    qspb_context_free(ctx);
    puts("ok");
    return 0;
}
"#;

/// The static library built alongside this test binary.  `cargo test`
/// leaves it in `<target>/<profile>/deps`, `cargo build` in
/// `<target>/<profile>`; take the newest.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let profile = deps.parent().unwrap();
    [deps, profile]
        .iter()
        .map(|d| d.join("libqsp_braid_ffi.a"))
        .filter_map(|p| Some((std::fs::metadata(&p).ok()?.modified().ok()?, p)))
        .max()
        .map(|(_, p)| p)
}

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = crate_dir.join("include");
    assert!(include.join("qsp_braid.h").exists(), "header not generated");
    let lib = static_lib().expect("static library built next to the test binary");

    let dir = std::env::temp_dir().join(format!("qspb-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("a C compiler is available as `cc`");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&dir);
}
