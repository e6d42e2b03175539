#![no_main]

use libfuzzer_sys::fuzz_target;
use zmeasure::parse::{format_rational, parse_complex, parse_half_integer, parse_point, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(s) {
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
    let _ = parse_complex(s);
    if let Ok(h) = parse_half_integer(s) {
        assert_eq!(parse_half_integer(&h.to_string()).unwrap(), h);
    }
    let _ = parse_point(s);
});
