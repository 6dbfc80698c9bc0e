//! Compiles and runs a small C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "qcat.h"

int main(void) {
    double e[2];
    if (qcat_pspin_levels(4, 3, 1.0, 1.0, 2, e) != QCAT_STATUS_OK) return 1;
    if (e[1] - e[0] < 0.49 || e[1] - e[0] > 0.51) return 2;
    if (qcat_pspin_levels(4, 3, 2.0, 1.0, 2, e) != QCAT_STATUS_INVALID_ARGUMENT) return 3;
    if (strlen(qcat_last_error()) == 0) return 4;
    QcatWell *w = NULL;
    if (qcat_well_new(2.0, 2.0, 1.0, 1.0, &w) != QCAT_STATUS_OK) return 5;
    double g = 0.0;
    if (qcat_well_gap_ratio(w, &g) != QCAT_STATUS_OK || !(g > 0.0)) return 6;
    qcat_well_free(w);
    printf("%s\n", qcat_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/qcat.h");
    assert!(header.exists(), "header not generated");
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libqcat_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("qcat_smoke.c");
    let bin = tmp.join("qcat_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "C program exit {:?}",
        out.status.code()
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        env!("CARGO_PKG_VERSION")
    );
}
