//! One pass/fail line per acceptance criterion. Criteria 1 to 7 run the verification
//! suite in-process; criterion 8 drives the binary through a verify run and its replay.

use std::path::Path;
use std::process::{Command, ExitCode};

use curvequant::verify::{self, Group, VerifyOptions};

fn line(criterion: usize, title: &str, pass: bool, detail: &str) -> bool {
    println!("criterion {criterion} {:<28} {}  {detail}", title, if pass { "PASS" } else { "FAIL" });
    pass
}

fn run_bin(args: &[&str]) -> (Option<i32>, String) {
    match Command::new(env!("CARGO_BIN_EXE_curvequant")).args(args).output() {
        Ok(o) => (o.status.code(), String::from_utf8_lossy(&o.stderr).into_owned()),
        Err(e) => (None, e.to_string()),
    }
}

fn determinism(dir: &Path) -> (bool, String) {
    let first = dir.join("first");
    let second = dir.join("second");
    let (f, s) = (first.to_str().unwrap(), second.to_str().unwrap());
    let manifest = first.join("manifest.json");
    let m = manifest.to_str().unwrap();

    let (code1, _) = run_bin(&["verify", "--out-dir", f]);
    let (code2, _) = run_bin(&["replay", m, "--out-dir", s]);
    let a = std::fs::read(first.join("report.txt"));
    let b = std::fs::read(second.join("report.txt"));
    let ma = std::fs::read(&manifest);
    let mb = std::fs::read(second.join("manifest.json"));
    let reports_equal = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    let manifests_equal = matches!((&ma, &mb), (Ok(x), Ok(y)) if x == y);
    let same_status = code1.is_some() && code1 == code2;
    let (check, err) = run_bin(&["replay", m, "--check"]);
    let checked = err.contains("replay matches the recorded outputs");
    let pass = reports_equal && manifests_equal && same_status && checked;
    (
        pass,
        format!(
            "reports identical: {reports_equal}, manifests identical: {manifests_equal}, exit codes {code1:?}/{code2:?}, replay --check exit {check:?}, matched: {checked}"
        ),
    )
}

fn main() -> ExitCode {
    let report = verify::run(&VerifyOptions::default());
    let mut all = true;
    for g in Group::ALL {
        let rows: Vec<_> = report.group_rows(g).collect();
        let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        let mut detail = format!("{}/{} rows", rows.len() - failed.len(), rows.len());
        for r in &failed {
            detail.push_str(&format!("; {}: computed {} expected {} ({})", r.case, r.computed, r.expected, r.tolerance));
        }
        all &= line(g.criterion(), g.name(), !rows.is_empty() && failed.is_empty(), &detail);
    }

    let dir = tempfile::tempdir().expect("temporary directory");
    let (pass, detail) = determinism(dir.path());
    all &= line(8, "determinism", pass, &detail);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
