// Copyright 2026 The zenolab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use std::path::PathBuf;
use std::process::{Command, Output};

fn zenolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zenolab"))
        .args(args)
        .output()
        .expect("failed to spawn zenolab binary")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("zenolab-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn solve_coeffs_order_three() {
    let out = zenolab(&["solve-coeffs", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.675603"), "unexpected output: {text}");
    assert!(text.contains("-0.175603"), "unexpected output: {text}");
}

#[test]
fn solve_coeffs_rejects_unknown_order() {
    let out = zenolab(&["solve-coeffs", "5"]);
    assert!(!out.status.success());
}

#[test]
fn reproduce_fig1_emits_csv_and_verdicts() {
    let out = zenolab(&["reproduce", "fig1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("family,k,beta,J,t,N,dt,error,bound,success_prob"),
        "missing CSV header"
    );
    assert!(text.contains("PASS"), "missing verdict lines");
    assert!(!text.contains("FAIL"), "unexpected FAIL: {text}");
}

#[test]
fn reproduce_rejects_unknown_recipe() {
    let out = zenolab(&["reproduce", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

const SCAN_CONFIG: &str = "\
system = zz_x:beta=1,J=1e-4
family = udd
t = 1.0
k = [3, 4]
dt = logspace(1e-2, 1, 10)
scan = dt
window = AUTO
";

#[test]
fn scan_is_deterministic_and_well_formed() {
    let cfg_path = temp_path("scan.cfg");
    std::fs::write(&cfg_path, SCAN_CONFIG).unwrap();
    let cfg = cfg_path.to_str().unwrap();

    let a = zenolab(&["scan", "--config", cfg]);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let b = zenolab(&["scan", "--config", cfg]);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout, "scan output not deterministic");

    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,k,beta,J,t,N,dt,error,bound,success_prob");
    let data = lines.iter().filter(|l| l.starts_with("udd,")).count();
    assert_eq!(data, 20, "expected 20 data rows:\n{text}");
    let fits = lines.iter().filter(|l| l.starts_with("# fit:")).count();
    assert_eq!(fits, 2, "expected one fit comment per k:\n{text}");

    std::fs::remove_file(&cfg_path).ok();
}

#[test]
fn scan_writes_output_file() {
    let cfg_path = temp_path("scan-out.cfg");
    let csv_path = temp_path("scan-out.csv");
    std::fs::write(&cfg_path, SCAN_CONFIG).unwrap();
    let out = zenolab(&[
        "scan",
        "--config",
        cfg_path.to_str().unwrap(),
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("family,k,beta,J,t,N,dt,error,bound,success_prob"));
    std::fs::remove_file(&cfg_path).ok();
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn scan_rejects_bad_configs() {
    let cfg_path = temp_path("bad.cfg");
    std::fs::write(&cfg_path, "system = zz_x:beta=1,J=1\nfamily = warp\nt = 1\n").unwrap();
    let out = zenolab(&["scan", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg_path, "system = zz_x:beta=1,J=1\nfamily = udd\nt = 1\nscan = dt\n").unwrap();
    let out = zenolab(&["scan", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "missing grid axis must fail");
    std::fs::remove_file(&cfg_path).ok();
    let out = zenolab(&["scan", "--config", "/nonexistent/zenolab.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_bounds_small_run() {
    let out = zenolab(&["verify-bounds", "--trials", "12", "--seed", "3"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));

    let out = zenolab(&["verify-bounds", "--trials", "0"]);
    assert!(!out.status.success());
}
