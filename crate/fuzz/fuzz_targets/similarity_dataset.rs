#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(pairs) = sensespace::eval::read_similarity(data) {
        assert!(pairs.iter().all(|p| p.gold.is_finite()));
    }
});
