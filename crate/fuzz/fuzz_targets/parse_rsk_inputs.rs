#![no_main]

use libfuzzer_sys::fuzz_target;
use zmeasure::parse::{parse_permutation, parse_word};
use zmeasure::rsk::{lis, rsk_permutation, rsk_permutation_inverse, rsk_word, rsk_word_inverse};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_word(s, None) {
        if w.len() <= 200 {
            let pair = rsk_word(&w);
            assert_eq!(rsk_word_inverse(&pair).unwrap(), w);
            if !w.is_empty() {
                assert_eq!(lis(w.letters()).unwrap(), pair.shape().row(1));
            }
        }
    }
    if let Ok(p) = parse_permutation(s) {
        if p.len() <= 200 {
            assert_eq!(rsk_permutation_inverse(&rsk_permutation(&p)).unwrap(), p);
        }
    }
});
