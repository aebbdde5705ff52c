#![no_main]

use blk_core::ring::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(r) = parse_rational(data) {
        let s = format_rational(&r);
        assert_eq!(parse_rational(&s).ok(), Some(r));
    }
});
