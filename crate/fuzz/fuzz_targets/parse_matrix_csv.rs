#![no_main]

use libfuzzer_sys::fuzz_target;
use zmeasure::parse::parse_matrix_csv;
use zmeasure::rsk::{rsk_matrix, rsk_matrix_inverse};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix_csv(s) {
        if m.total() <= 200 && m.rows() * m.cols() <= 400 {
            assert_eq!(rsk_matrix_inverse(&rsk_matrix(&m)).unwrap(), m);
        }
    }
});
