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

use std::ffi::CString;
use std::ptr;

use zenolab_ffi::*;

#[test]
fn example_system_lifecycle() {
    unsafe {
        let mut sys: *mut ZenolabSystem = ptr::null_mut();
        assert_eq!(zenolab_system_example(1.0, 0.1, &mut sys), ZenolabStatus::Ok);
        assert!(!sys.is_null());

        let mut dim = 0usize;
        assert_eq!(zenolab_system_dim(sys, &mut dim), ZenolabStatus::Ok);
        assert_eq!(dim, 4);

        let (mut beta, mut j) = (0.0f64, 0.0f64);
        assert_eq!(zenolab_system_norms(sys, &mut beta, &mut j), ZenolabStatus::Ok);
        assert!((beta - 1.0).abs() < 1e-10);
        assert!((j - 0.1).abs() < 1e-10);

        let mut err = -1.0f64;
        assert_eq!(
            zenolab_zeno_error(sys, ZenolabFamily::Measurement, 0, 8, 1.0, &mut err),
            ZenolabStatus::Ok
        );
        assert!(err > 0.0 && err < 0.1);

        let mut bound = 0.0f64;
        assert_eq!(
            zenolab_bound(sys, ZenolabBound::FirstOrder, 1.0, 8, &mut bound),
            ZenolabStatus::Ok
        );
        assert!(bound >= err, "bound {bound} must dominate error {err}");

        zenolab_system_free(sys);
    }
}

#[test]
fn parse_descriptor_and_errors() {
    unsafe {
        let mut sys: *mut ZenolabSystem = ptr::null_mut();
        let good = CString::new("zz_x:beta=1,J=0.01").unwrap();
        assert_eq!(zenolab_system_parse(good.as_ptr(), &mut sys), ZenolabStatus::Ok);
        zenolab_system_free(sys);

        let mut sys: *mut ZenolabSystem = ptr::null_mut();
        let bad = CString::new("nonsense").unwrap();
        assert_eq!(
            zenolab_system_parse(bad.as_ptr(), &mut sys),
            ZenolabStatus::ConfigError
        );
        assert!(sys.is_null());

        assert_eq!(
            zenolab_system_parse(ptr::null(), &mut sys),
            ZenolabStatus::NullPointer
        );
        assert_eq!(
            zenolab_system_parse(good.as_ptr(), ptr::null_mut()),
            ZenolabStatus::NullPointer
        );
    }
}

#[test]
fn random_system_and_null_checks() {
    unsafe {
        let mut sys: *mut ZenolabSystem = ptr::null_mut();
        assert_eq!(zenolab_system_random(4, 2, 9, &mut sys), ZenolabStatus::Ok);
        let mut err = 0.0f64;
        assert_eq!(
            zenolab_zeno_error(ptr::null(), ZenolabFamily::Kick, 0, 4, 1.0, &mut err),
            ZenolabStatus::NullPointer
        );
        assert_eq!(
            zenolab_zeno_error(sys, ZenolabFamily::Kick, 0, 4, 1.0, ptr::null_mut()),
            ZenolabStatus::NullPointer
        );
        assert_eq!(
            zenolab_system_random(4, 0, 1, &mut ptr::null_mut()),
            ZenolabStatus::UnsupportedRange
        );
        zenolab_system_free(sys);
        zenolab_system_free(ptr::null_mut());
    }
}

#[test]
fn scalar_helpers() {
    unsafe {
        let mut zero = 0.0f64;
        assert_eq!(zenolab_bessel_j0_zero(1, &mut zero), ZenolabStatus::Ok);
        assert!((zero - 2.404825557695773).abs() < 1e-10);
        assert_eq!(
            zenolab_bessel_j0_zero(9, &mut zero),
            ZenolabStatus::UnsupportedRange
        );

        let mut count = 0usize;
        assert_eq!(zenolab_reflection_count(2, &mut count), ZenolabStatus::Ok);
        assert_eq!(count, 10);

        let mut values = [0.0f64; 4];
        let mut len = 0usize;
        assert_eq!(
            zenolab_solve_compact_coefficients(3, values.as_mut_ptr(), 4, &mut len),
            ZenolabStatus::Ok
        );
        assert_eq!(len, 2);
        assert!((values[0] - 0.675604).abs() < 1e-5);
        assert_eq!(
            zenolab_solve_compact_coefficients(3, values.as_mut_ptr(), 1, &mut len),
            ZenolabStatus::InvalidArgument
        );
    }
}

#[test]
fn generated_header_exists() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/zenolab.h");
    let text = std::fs::read_to_string(&header).expect("include/zenolab.h not generated");
    for symbol in [
        "zenolab_system_parse",
        "zenolab_system_example",
        "zenolab_system_free",
        "zenolab_zeno_error",
        "zenolab_bound",
        "zenolab_solve_compact_coefficients",
        "zenolab_bessel_j0_zero",
        "zenolab_reflection_count",
    ] {
        assert!(text.contains(symbol), "header missing {symbol}");
    }
    assert!(text.contains("ZENOLAB_H"));
}
