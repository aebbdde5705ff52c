#![no_main]

use blk_core::parse::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(f) = parse_poly(data) {
        // accepted input is singular at the origin
        assert!(f.ord().is_some_and(|d| d >= 2));
    }
});
